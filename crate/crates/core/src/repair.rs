//! Linear repair schemes given by `ell` dual codewords.
//!
//! For a failed node `i*`, each dual codeword `g^(j)` yields the trace
//! identity `Tr(c_{i*} g^(j)_{i*}) = -sum_{i != i*} Tr(c_i g^(j)_i)`.
//! Helper `i` only needs the subsymbols of `c_i` selected by the nonzero
//! columns of its I/O matrix `W_i[j][t] = Tr(g^(j)_i beta^(t))`; the sum of
//! those column counts is the scheme's I/O cost, and the sum of the ranks is
//! its repair bandwidth.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::{Codeword, RsCode};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldContext, FieldSpec};
use crate::linalg::BMatrix;
use crate::poly::Poly;
use crate::weight::{coset_weight, SubVector};

/// First failed condition found by [`RepairScheme::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongDualCount { expected: usize, got: usize },
    /// Dual polynomial `index` exceeds the degree bound `n - k - 1`.
    DegreeTooHigh { index: usize, degree: usize, bound: usize },
    /// Dual word `index` has nonzero inner product with a codeword.
    NotOrthogonal { index: usize, message_degree: usize },
    /// The values at the failed node span fewer than `ell` dimensions.
    RankDeficient { rank: usize, ell: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongDualCount { expected, got } => {
                write!(f, "expected {expected} dual codewords, got {got}")
            }
            Violation::DegreeTooHigh { index, degree, bound } => write!(
                f,
                "dual polynomial {} has degree {degree} > {bound}; not in the dual code",
                index + 1
            ),
            Violation::NotOrthogonal { index, message_degree } => write!(
                f,
                "dual word {} is not orthogonal to the codeword of x^{message_degree}",
                index + 1
            ),
            Violation::RankDeficient { rank, ell } => write!(
                f,
                "values at the failed node span {rank} < {ell} dimensions over the base field"
            ),
        }
    }
}

/// A repair scheme for node `star` (0-based) of an RS code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairScheme {
    code: RsCode,
    star: usize,
    duals: Vec<Poly>,
    // evaluations[j][i] = g_j(a_i)
    evaluations: Vec<Vec<Elem>>,
}

impl RepairScheme {
    /// Wraps dual polynomials without checking the repair conditions; see
    /// [`validate`](Self::validate).
    pub fn new(code: RsCode, star: usize, duals: Vec<Poly>) -> Result<Self> {
        if star >= code.n() {
            return Err(Error::NodeOutOfRange { index: star, n: code.n() });
        }
        for g in &duals {
            g.check(code.field())?;
        }
        let ctx = code.ctx().clone();
        let evaluations = duals
            .iter()
            .map(|g| code.points().iter().map(|&a| g.eval(&ctx, a)).collect())
            .collect();
        Ok(RepairScheme { code, star, duals, evaluations })
    }

    /// `g_j = gamma^(j)`: every helper sends its whole symbol.
    pub fn trivial(code: RsCode, star: usize) -> Result<Self> {
        let duals = code.field().dual_basis().iter().map(|&g| Poly::constant(g)).collect();
        Self::new(code, star, duals)
    }

    pub fn code(&self) -> &RsCode {
        &self.code
    }

    pub fn field(&self) -> &FieldContext {
        self.code.field()
    }

    pub fn ell(&self) -> usize {
        self.field().ell()
    }

    /// Failed node, 0-based.
    pub fn star(&self) -> usize {
        self.star
    }

    pub fn duals(&self) -> &[Poly] {
        &self.duals
    }

    /// `(g_j(a_1), ..., g_j(a_n))`.
    pub fn dual_word(&self, j: usize) -> Codeword {
        Codeword(self.evaluations[j].clone())
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let ctx = self.field();
        let ell = ctx.ell();
        if self.duals.len() != ell {
            return Err(Violation::WrongDualCount { expected: ell, got: self.duals.len() });
        }
        let n = self.code.n();
        let k = self.code.k();
        if self.code.is_full_length() {
            let bound = n - k - 1;
            for (index, g) in self.duals.iter().enumerate() {
                if let Some(degree) = g.degree().filter(|&d| d > bound) {
                    return Err(Violation::DegreeTooHigh { index, degree, bound });
                }
            }
        }
        // Orthogonality against the monomial basis x^0..x^(k-1) of the code.
        let mut powers = vec![Elem::ONE; n];
        for m in 0..k {
            for (index, word) in self.evaluations.iter().enumerate() {
                let dot = word
                    .iter()
                    .zip(&powers)
                    .fold(Elem::ZERO, |acc, (&g, &p)| ctx.add(acc, ctx.mul(g, p)));
                if !dot.is_zero() {
                    return Err(Violation::NotOrthogonal { index, message_degree: m });
                }
            }
            for (p, &a) in powers.iter_mut().zip(self.code.points()) {
                *p = ctx.mul(*p, a);
            }
        }
        let rank = ctx.rank_over_base(&self.star_values());
        if rank != ell {
            return Err(Violation::RankDeficient { rank, ell });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(Error::InvalidScheme)
    }

    /// `{g^(j)_{i*}}_j`.
    pub fn star_values(&self) -> Vec<Elem> {
        self.evaluations.iter().map(|w| w[self.star]).collect()
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.code.n() {
            return Err(Error::NodeOutOfRange { index: i, n: self.code.n() });
        }
        Ok(())
    }

    /// `W_i`, with row `j` equal to `phi_hat(g^(j)_i)`.
    pub fn io_matrix(&self, i: usize) -> Result<BMatrix> {
        self.check_node(i)?;
        let ctx = self.field();
        let rows: Vec<Vec<u8>> = self.evaluations.iter().map(|w| ctx.phi_hat(w[i])).collect();
        BMatrix::from_rows(ctx.q(), ctx.ell(), &rows)
    }

    pub fn io_matrices(&self) -> Vec<BMatrix> {
        (0..self.code.n()).map(|i| self.io_matrix(i).expect("node in range")).collect()
    }

    fn helpers(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.code.n()).filter(move |&i| i != self.star)
    }

    /// `sum_{i != i*} rank(W_i)`.
    pub fn bandwidth(&self) -> usize {
        self.helpers().map(|i| self.io_matrix(i).expect("node in range").rank()).sum()
    }

    /// `sum_{i != i*} nz(W_i)`.
    pub fn io_cost_direct(&self) -> usize {
        self.helpers().map(|i| self.io_matrix(i).expect("node in range").nz()).sum()
    }

    /// `G_{i*} = (W_1 W_2 ... W_n)`, an `ell x n*ell` matrix whose row space
    /// is `L_{i*}`.
    pub fn l_space(&self) -> BMatrix {
        let ctx = self.field();
        let rows: Vec<Vec<u8>> = self
            .evaluations
            .iter()
            .map(|w| w.iter().flat_map(|&g| ctx.phi_hat(g)).collect())
            .collect();
        BMatrix::from_rows(ctx.q(), self.code.n() * ctx.ell(), &rows).expect("entries in range")
    }

    /// I/O cost from the Hamming weight of `L_{i*}`:
    /// `wt(L) / (q^(ell-1) (q-1)) - ell`, with `wt(L)` taken from its
    /// support size rather than by enumerating the space.
    pub fn io_cost_formula(&self) -> Result<usize> {
        self.ensure_valid()?;
        let g = self.l_space();
        let weight = coset_weight(&g, &SubVector::zeros(g.cols()))?.total_weight;
        let q = self.field().q() as u128;
        let per_column = q.pow(self.ell() as u32 - 1) * (q - 1);
        if weight % per_column != 0 {
            return Err(Error::Internal(format!(
                "wt(L) = {weight} is not a multiple of {per_column}"
            )));
        }
        (weight / per_column)
            .checked_sub(self.ell() as u128)
            .map(|c| c as usize)
            .ok_or_else(|| Error::Internal("wt(L) smaller than ell columns".into()))
    }

    /// Subsymbol positions (0-based columns of `W_i`) helper `i` must read.
    pub fn accessed_subsymbols(&self, i: usize) -> Result<Vec<usize>> {
        self.check_node(i)?;
        if i == self.star {
            return Err(Error::FailedNode(i));
        }
        Ok(self.io_matrix(i)?.nonzero_columns())
    }

    pub fn cost_report(&self) -> Result<CostReport> {
        let io_cost_formula = self.io_cost_formula()?;
        let ctx = self.field();
        let per_node: Vec<NodeCost> = self
            .helpers()
            .map(|i| {
                let w = self.io_matrix(i).expect("node in range");
                NodeCost {
                    i: i + 1,
                    rank: w.rank(),
                    nz: w.nz(),
                    cols: w.nonzero_columns().into_iter().map(|c| c + 1).collect(),
                }
            })
            .collect();
        Ok(CostReport {
            q: ctx.q() as u32,
            ell: ctx.ell(),
            n: self.code.n(),
            k: self.code.k(),
            node: self.star + 1,
            bandwidth: per_node.iter().map(|c| c.rank).sum(),
            io_cost: per_node.iter().map(|c| c.nz).sum(),
            io_cost_formula,
            per_node,
        })
    }

    /// Moves a scheme for node 0 (the zero evaluation point) of a
    /// full-length code to node `target` via `g_j(x) -> g_j(x - a_target)`.
    pub fn translate(&self, target: usize) -> Result<RepairScheme> {
        if !self.code.is_full_length() {
            return Err(Error::NotFullLength);
        }
        if self.star != 0 {
            return Err(Error::Unsupported(format!(
                "translation starts from node 1 (the zero point), scheme repairs node {}",
                self.star + 1
            )));
        }
        self.check_node(target)?;
        if target == 0 {
            return Ok(self.clone());
        }
        let ctx = self.code.ctx().clone();
        let shift = self.code.points()[target];
        let duals = self.duals.iter().map(|g| g.translate(&ctx, shift)).collect();
        RepairScheme::new(self.code.clone(), target, duals)
    }

    pub fn repairer(&self) -> Result<Repairer> {
        Repairer::new(self)
    }

    /// Recovers the symbol at the failed node from the other `n - 1`
    /// symbols; entry `star` of `word` is ignored.
    pub fn execute_repair(&self, word: &[Option<Elem>]) -> Result<Elem> {
        let mut store = StripeStore::from_symbols(self.field(), word, self.star)?;
        self.repairer()?.repair(&mut store)
    }

    pub fn to_spec(&self) -> SchemeSpec {
        SchemeSpec {
            field: self.field().spec(),
            k: self.code.k(),
            node: self.star + 1,
            duals: self.duals.clone(),
        }
    }
}

/// Per-helper cost entry; `i` and `cols` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCost {
    pub i: usize,
    pub rank: usize,
    pub nz: usize,
    pub cols: Vec<usize>,
}

/// Bandwidth and I/O cost of a scheme, in subsymbols. `node` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub q: u32,
    pub ell: usize,
    pub n: usize,
    pub k: usize,
    pub node: usize,
    pub bandwidth: usize,
    pub io_cost: usize,
    pub io_cost_formula: usize,
    pub per_node: Vec<NodeCost>,
}

/// Serialized scheme for a full-length code: field, dimension, 1-based
/// failed node, and dual polynomials as ascending coefficient lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub field: FieldSpec,
    pub k: usize,
    pub node: usize,
    pub duals: Vec<Poly>,
}

impl SchemeSpec {
    pub fn build(&self) -> Result<RepairScheme> {
        let ctx = Arc::new(self.field.build()?);
        let code = RsCode::full_length(ctx, self.k)?;
        let star = self
            .node
            .checked_sub(1)
            .ok_or(Error::NodeOutOfRange { index: 0, n: code.n() })?;
        RepairScheme::new(code, star, self.duals.clone())
    }
}

/// Subsymbol storage for one stripe, recording every read.
#[derive(Debug, Clone)]
pub struct StripeStore {
    nodes: Vec<Option<Vec<u8>>>,
    reads: Vec<(usize, usize)>,
}

impl StripeStore {
    /// Stores `phi(c_i)` for every node except `erased`.
    pub fn from_codeword(ctx: &FieldContext, word: &Codeword, erased: usize) -> Self {
        let nodes = word
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, &c)| (i != erased).then(|| ctx.phi(c)))
            .collect();
        StripeStore { nodes, reads: Vec::new() }
    }

    pub fn from_symbols(ctx: &FieldContext, word: &[Option<Elem>], erased: usize) -> Result<Self> {
        let mut nodes = Vec::with_capacity(word.len());
        for (i, c) in word.iter().enumerate() {
            if i == erased {
                nodes.push(None);
                continue;
            }
            let c = c.ok_or_else(|| Error::Dimension(format!("symbol {} missing", i + 1)))?;
            nodes.push(Some(ctx.phi(ctx.check(c)?)));
        }
        Ok(StripeStore { nodes, reads: Vec::new() })
    }

    pub fn read(&mut self, node: usize, col: usize) -> Result<u8> {
        let n = self.nodes.len();
        let data = self
            .nodes
            .get(node)
            .ok_or(Error::NodeOutOfRange { index: node, n })?
            .as_ref()
            .ok_or(Error::FailedNode(node))?;
        let v = *data
            .get(col)
            .ok_or_else(|| Error::Dimension(format!("subsymbol {col} out of range")))?;
        self.reads.push((node, col));
        Ok(v)
    }

    /// `(node, column)` pairs in the order they were read.
    pub fn reads(&self) -> &[(usize, usize)] {
        &self.reads
    }

    pub fn reads_by_node(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for &(node, col) in &self.reads {
            out[node].push(col);
        }
        out
    }
}

/// A validated scheme with its I/O matrices and the reconstruction basis
/// `mu` (trace-dual to the failed node's values) precomputed.
#[derive(Debug, Clone)]
pub struct Repairer {
    ctx: Arc<FieldContext>,
    star: usize,
    matrices: Vec<BMatrix>,
    accessed: Vec<Vec<usize>>,
    mu: Vec<Elem>,
}

impl Repairer {
    pub fn new(scheme: &RepairScheme) -> Result<Self> {
        scheme.ensure_valid()?;
        let ctx = scheme.code.ctx().clone();
        let mu = ctx.dual_basis_of(&scheme.star_values())?;
        let matrices = scheme.io_matrices();
        let accessed = matrices.iter().map(|m| m.nonzero_columns()).collect();
        Ok(Repairer { ctx, star: scheme.star, matrices, accessed, mu })
    }

    /// Columns read at each node (empty for the failed node).
    pub fn accessed(&self) -> Vec<Vec<usize>> {
        let mut a = self.accessed.clone();
        a[self.star].clear();
        a
    }

    pub fn repair(&self, store: &mut StripeStore) -> Result<Elem> {
        let b = self.ctx.base();
        let ell = self.ctx.ell();
        // sums[j] = sum_{i != i*} Tr(c_i g^(j)_i)
        let mut sums = vec![0u8; ell];
        for (i, w) in self.matrices.iter().enumerate() {
            if i == self.star {
                continue;
            }
            for &t in &self.accessed[i] {
                let s = store.read(i, t)?;
                for (j, acc) in sums.iter_mut().enumerate() {
                    *acc = b.add(*acc, b.mul(w.get(j, t), s));
                }
            }
        }
        Ok(sums.iter().zip(&self.mu).fold(Elem::ZERO, |acc, (&s, &m)| {
            self.ctx.add(acc, self.ctx.scale(b.neg(s), m))
        }))
    }
}
