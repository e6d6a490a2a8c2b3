use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use rsrepair::field::parse_list;
use rsrepair::{
    compare_baselines, construct_scheme, default_s, min_io_exhaustive, verify_bound, Elem, Error,
    FieldContext, FieldSpec, RepairScheme, SchemeSpec, SearchOptions, StripeStore,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::table::{list, pairs, Table};
use crate::{Command, FieldArgs};

/// 1 for schemes that fail validation, 2 for everything else (bad flags,
/// parameters or input).
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidScheme(_)) => 1,
        _ => 2,
    }
}

pub fn run(command: Command, json: bool) -> Result<ExitCode> {
    match command {
        Command::Construct { field, k, s } => construct(&field, k, s, json),
        Command::Cost => cost(json),
        Command::RepairDemo { field, k, s, node, seed } => repair_demo(&field, k, s, node, seed, json),
        Command::SearchMin { field, r, node, cap } => search_min(&field, r, node, cap, json),
        Command::Verify { field, r, cap } => verify(&field, r, cap, json),
        Command::Compare { q, ell, s, k } => compare(q, ell, s, k, json),
        Command::FieldInfo { field } => field_info(&field, json),
    }
}

fn field_spec(args: &FieldArgs) -> Result<FieldSpec> {
    let base = match &args.field {
        Some(text) => Some(text.parse::<FieldSpec>()?),
        None => None,
    };
    let q = args.q.or(base.as_ref().map(|b| b.q)).ok_or_else(|| anyhow!("--q (or --field) is required"))?;
    let ell = args.ell.or(base.as_ref().map(|b| b.ell)).ok_or_else(|| anyhow!("--ell (or --field) is required"))?;
    let modulus = match &args.modulus {
        Some(m) => Some(parse_list::<u8>(m)?),
        None => base.as_ref().and_then(|b| b.modulus.clone()),
    };
    let basis = match &args.basis {
        Some(b) => Some(parse_list::<u32>(b)?.into_iter().map(Elem::new).collect()),
        None => base.and_then(|b| b.basis),
    };
    Ok(FieldSpec { q, ell, modulus, basis })
}

fn field(args: &FieldArgs) -> Result<Arc<FieldContext>> {
    Ok(Arc::new(field_spec(args)?.build()?))
}

fn search_options(cap: Option<u128>) -> Result<SearchOptions> {
    let mut opts = SearchOptions::default();
    if let Some(cap) = cap {
        opts.cap = cap;
    }
    if let Ok(v) = std::env::var("REPAIR_LAB_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow!("REPAIR_LAB_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            bail!("REPAIR_LAB_THREADS must be positive");
        }
        opts.threads = Some(n);
    }
    Ok(opts)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn pick_s(ctx: &FieldContext, k: usize, s: Option<usize>) -> Result<usize> {
    match s {
        Some(s) => Ok(s),
        None => default_s(ctx.q() as u32, ctx.ell(), k)
            .ok_or_else(|| Error::ConstructionParameters(format!("no s with q^s + 1 <= n - k for k = {k}")).into()),
    }
}

fn cost_table(report: &rsrepair::CostReport) -> String {
    let mut t = Table::new(&["helper", "rank", "nz", "columns"]);
    for c in &report.per_node {
        t.row(&[c.i.to_string(), c.rank.to_string(), c.nz.to_string(), list(&c.cols)]);
    }
    let head = pairs(&[
        ("code", format!("RS(n={}, k={}) over GF({}^{})", report.n, report.k, report.q, report.ell)),
        ("failed node", report.node.to_string()),
        ("bandwidth", report.bandwidth.to_string()),
        ("io cost", report.io_cost.to_string()),
        ("io cost (formula)", report.io_cost_formula.to_string()),
    ]);
    format!("{head}\n\n{}", t.render())
}

#[derive(Serialize, Deserialize)]
struct ConstructOutput {
    s: usize,
    scheme: SchemeSpec,
    report: rsrepair::CostReport,
}

fn construct(args: &FieldArgs, k: usize, s: Option<usize>, json: bool) -> Result<ExitCode> {
    let ctx = field(args)?;
    let s = pick_s(&ctx, k, s)?;
    let c = construct_scheme(ctx, k, s)?;
    let out = ConstructOutput { s, scheme: c.scheme.to_spec(), report: c.scheme.cost_report()? };
    if json {
        print_json(&out)?;
    } else {
        println!("field  {}\ns      {s}", out.scheme.field);
        for (j, g) in out.scheme.duals.iter().enumerate() {
            println!("g{}     {}", j + 1, list(g.coeffs()));
        }
        println!("\n{}", cost_table(&out.report));
    }
    Ok(ExitCode::SUCCESS)
}

/// Accepts a bare scheme or the output of `construct`.
#[derive(Deserialize)]
#[serde(untagged)]
enum CostInput {
    Wrapped { scheme: SchemeSpec },
    Bare(SchemeSpec),
}

fn cost(json: bool) -> Result<ExitCode> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
    let input: CostInput = serde_json::from_str(&text).context("malformed scheme JSON")?;
    let spec = match input {
        CostInput::Wrapped { scheme } | CostInput::Bare(scheme) => scheme,
    };
    let scheme = spec.build()?;
    scheme.validate().map_err(Error::InvalidScheme)?;
    let report = scheme.cost_report()?;
    if json {
        print_json(&report)?;
    } else {
        println!("{}", cost_table(&report));
    }
    if report.io_cost != report.io_cost_formula {
        eprintln!("io cost {} disagrees with the weight formula {}", report.io_cost, report.io_cost_formula);
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct HelperReads {
    node: usize,
    columns: Vec<usize>,
}

#[derive(Serialize)]
struct RepairTranscript {
    field: String,
    k: usize,
    s: usize,
    node: usize,
    seed: u64,
    erased: Elem,
    recovered: Elem,
    exact: bool,
    helpers: Vec<HelperReads>,
    total_reads: usize,
    io_cost: usize,
    bandwidth: usize,
}

fn repair_demo(args: &FieldArgs, k: usize, s: Option<usize>, node: usize, seed: u64, json: bool) -> Result<ExitCode> {
    let ctx = field(args)?;
    let s = pick_s(&ctx, k, s)?;
    let base = construct_scheme(ctx.clone(), k, s)?.scheme;
    let n = base.code().n();
    if node == 0 || node > n {
        return Err(Error::NodeOutOfRange { index: node, n }.into());
    }
    let scheme: RepairScheme = base.translate(node - 1)?;
    let word = scheme.code().random_codeword(seed);
    let mut store = StripeStore::from_codeword(&ctx, &word, node - 1);
    let recovered = scheme.repairer()?.repair(&mut store)?;
    let erased = word.symbols()[node - 1];
    let helpers: Vec<HelperReads> = store
        .reads_by_node()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| *i != node - 1)
        .map(|(i, mut cols)| {
            cols.sort();
            HelperReads { node: i + 1, columns: cols.into_iter().map(|c| c + 1).collect() }
        })
        .collect();
    let t = RepairTranscript {
        field: ctx.spec().to_string(),
        k,
        s,
        node,
        seed,
        erased,
        recovered,
        exact: recovered == erased,
        total_reads: store.reads().len(),
        io_cost: scheme.io_cost_direct(),
        bandwidth: scheme.bandwidth(),
        helpers,
    };
    if json {
        print_json(&t)?;
    } else {
        let mut table = Table::new(&["helper", "symbol", "subsymbols read"]);
        for h in &t.helpers {
            table.row(&[h.node.to_string(), word.symbols()[h.node - 1].to_string(), list(&h.columns)]);
        }
        println!("{}\n", table.render());
        println!(
            "{}",
            pairs(&[
                ("field", t.field.clone()),
                ("erased node", format!("{} (symbol {})", t.node, t.erased)),
                ("subsymbols read", t.total_reads.to_string()),
                ("io cost", t.io_cost.to_string()),
                ("bandwidth", t.bandwidth.to_string()),
                ("recovered", if t.exact { "exact".into() } else { format!("MISMATCH ({})", t.recovered) }),
            ])
        );
    }
    Ok(if t.exact && t.total_reads == t.io_cost { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct SearchReport {
    q: u32,
    ell: usize,
    r: usize,
    node: usize,
    min: usize,
    enumerated: u128,
    valid: u128,
    formula_mismatches: u128,
    witness: SchemeSpec,
    witness_basis: Vec<Vec<u8>>,
}

fn search_min(args: &FieldArgs, r: usize, node: usize, cap: Option<u128>, json: bool) -> Result<ExitCode> {
    let ctx = field(args)?;
    let n = ctx.order() as usize;
    if node == 0 || node > n {
        return Err(Error::NodeOutOfRange { index: node, n }.into());
    }
    let out = min_io_exhaustive(ctx.clone(), r, node - 1, &search_options(cap)?)?;
    let rep = SearchReport {
        q: ctx.q() as u32,
        ell: ctx.ell(),
        r,
        node,
        min: out.min_cost,
        enumerated: out.enumerated,
        valid: out.valid,
        formula_mismatches: out.formula_mismatches,
        witness: out.witness.to_spec(),
        witness_basis: out.witness_basis,
    };
    if json {
        print_json(&rep)?;
    } else {
        println!(
            "{}",
            pairs(&[
                ("field", ctx.spec().to_string()),
                ("code", format!("RS(n={n}, k={})", n - r)),
                ("failed node", node.to_string()),
                ("subspaces", rep.enumerated.to_string()),
                ("valid", rep.valid.to_string()),
                ("min io cost", rep.min.to_string()),
                ("formula mismatches", rep.formula_mismatches.to_string()),
            ])
        );
        println!();
        for (j, g) in rep.witness.duals.iter().enumerate() {
            println!("g{}  {}", j + 1, list(g.coeffs()));
        }
    }
    Ok(if rep.formula_mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify(args: &FieldArgs, r: usize, cap: Option<u128>, json: bool) -> Result<ExitCode> {
    let ctx = field(args)?;
    let rep = verify_bound(ctx, r, &search_options(cap)?)?;
    if json {
        print_json(&rep)?;
    } else {
        let min = match rep.min {
            Some(m) => m.to_string(),
            None => format!("unverified by search ({} subspaces)", rep.subspaces),
        };
        println!(
            "{}",
            pairs(&[
                ("q, ell, r", format!("{}, {}, {}", rep.q, rep.ell, rep.r)),
                ("lower bound", rep.bound.to_string()),
                ("searched min", min),
                ("construction", rep.construction.to_string()),
                ("gap", rep.gap.to_string()),
                ("consistent", rep.consistent.to_string()),
            ])
        );
    }
    Ok(if rep.consistent { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn compare(q: u32, ell: usize, s: usize, k: usize, json: bool) -> Result<ExitCode> {
    let c = compare_baselines(q, ell, s, k)?;
    if json {
        print_json(&c)?;
    } else {
        let mut t = Table::new(&["scheme", "bandwidth", "io cost"]);
        t.row(&["bandwidth-optimal trace".to_string(), c.prior_bandwidth.to_string(), c.prior_io.to_string()]);
        t.row(&["trivial".to_string(), c.trivial_io.to_string(), c.trivial_io.to_string()]);
        t.row(&["ours".to_string(), c.ours.to_string(), c.ours.to_string()]);
        println!("n={} k={} q={q} ell={ell} s={s}\n\n{}", c.n, k, t.render());
        println!("\nours: {}", c.ours);
        println!("ours < k*ell: {}", c.ours_below_trivial);
        println!("n-k <= (s+1)q^(ell-1)/ell: {}", c.sufficient_condition);
    }
    Ok(ExitCode::SUCCESS)
}

/// Elements are listed only for fields of at most this order.
const LIST_LIMIT: u32 = 64;

fn field_info(args: &FieldArgs, json: bool) -> Result<ExitCode> {
    let ctx = field(args)?;
    let rows: Vec<_> = if ctx.order() <= LIST_LIMIT {
        ctx.elements()
            .map(|a| json!({"element": a, "phi": ctx.phi(a), "phi_hat": ctx.phi_hat(a), "trace": ctx.trace(a)}))
            .collect()
    } else {
        Vec::new()
    };
    if json {
        print_json(&json!({
            "field": ctx.spec().to_string(),
            "q": ctx.q(),
            "ell": ctx.ell(),
            "order": ctx.order(),
            "modulus": ctx.modulus(),
            "basis": ctx.basis(),
            "dual_basis": ctx.dual_basis(),
            "elements": rows,
        }))?;
    } else {
        println!(
            "{}",
            pairs(&[
                ("field", ctx.spec().to_string()),
                ("order", ctx.order().to_string()),
                ("modulus", list(ctx.modulus())),
                ("basis", list(ctx.basis())),
                ("dual basis", list(ctx.dual_basis())),
            ])
        );
        if !rows.is_empty() {
            let mut t = Table::new(&["element", "phi", "phi_hat", "trace"]);
            for a in ctx.elements() {
                t.row(&[a.to_string(), list(&ctx.phi(a)), list(&ctx.phi_hat(a)), ctx.trace(a).to_string()]);
            }
            println!("\n{}", t.render());
        }
    }
    Ok(ExitCode::SUCCESS)
}
