mod common;

use rsrepair::{
    bandwidth_equals_io, compare_baselines, construct_scheme, default_s, predicted_cost, Elem, Error,
};

use common::field;

fn sweep() -> Vec<(u32, usize, usize, usize)> {
    let mut out = Vec::new();
    for (q, ells) in [(2u32, 2..=8usize), (3, 2..=5)] {
        for ell in ells {
            let n = (q as usize).pow(ell as u32);
            for s in 0..ell.min(3) {
                let r_min = (q as usize).pow(s as u32) + 1;
                let mut rs = vec![r_min, r_min + 1, n / 2, n - 1];
                rs.retain(|&r| r >= r_min && r < n);
                rs.sort();
                rs.dedup();
                for r in rs {
                    out.push((q, ell, s, n - r));
                }
            }
        }
    }
    out
}

#[test]
fn measured_cost_matches_prediction() {
    for (q, ell, s, k) in sweep() {
        let c = construct_scheme(field(q, ell), k, s).unwrap();
        let want = predicted_cost(q, ell, s) as usize;
        assert_eq!(c.scheme.io_cost_direct(), want, "q={q} ell={ell} s={s} k={k}");
        let t = bandwidth_equals_io(&c.scheme);
        assert!(t.holds);
        assert_eq!(t.bandwidth, want);
    }
}

#[test]
fn io_matrices_follow_the_block_shape() {
    for (q, ell, s, k) in sweep().into_iter().filter(|&(q, ell, ..)| (q as usize).pow(ell as u32) <= 64) {
        let c = construct_scheme(field(q, ell), k, s).unwrap();
        for i in 1..c.scheme.code().n() {
            let w = c.scheme.io_matrix(i).unwrap();
            assert_eq!(w, c.expected_io_matrix(i), "q={q} ell={ell} s={s} node {i}");
            assert!(c.has_block_shape(&w));
        }
    }
}

#[test]
fn omega_vanishes_on_exactly_a_hyperplane_worth_of_nodes() {
    for (q, ell, s) in [(2, 3, 1), (2, 4, 2), (2, 5, 1), (3, 3, 1), (3, 2, 0)] {
        let ctx = field(q, ell);
        let n = ctx.order() as usize;
        let c = construct_scheme(ctx.clone(), n - (q as usize).pow(s as u32) - 1, s).unwrap();
        for j in 0..=s {
            let zeros = (0..n).filter(|&i| c.omega(i, j) == 0).count();
            assert_eq!(zeros, (q as usize).pow(ell as u32 - 1));
            let image = c.annihilators[j].image(&ctx).unwrap();
            assert!(image.elements(&ctx).iter().any(|&v| ctx.trace(ctx.mul(v, ctx.basis()[j])) != 0));
        }
        // The zero point maps to zero under every annihilator.
        for l in &c.annihilators {
            assert_eq!(l.eval(&ctx, Elem::ZERO), Elem::ZERO);
        }
    }
}

#[test]
fn constructed_schemes_repair_codewords() {
    for (q, ell, s, k) in [(2, 3, 0, 6), (2, 3, 1, 5), (3, 2, 1, 5), (2, 4, 2, 11)] {
        let c = construct_scheme(field(q, ell), k, s).unwrap();
        let code = c.scheme.code();
        for seed in 0..5 {
            let word = code.random_codeword(seed);
            let mut known: Vec<Option<Elem>> = word.symbols().iter().copied().map(Some).collect();
            known[0] = None;
            assert_eq!(c.scheme.execute_repair(&known).unwrap(), word.symbols()[0]);
        }
    }
}

#[test]
fn comparison_sum_identity() {
    for ell in 2..=10usize {
        for s in 0..ell {
            if ell > 1 << (ell - s) {
                continue;
            }
            let n = 1u64 << ell;
            let k = (n - (1 << s) - 1) as usize;
            let c = compare_baselines(2, ell, s, k).unwrap();
            let lhs = c.prior_bandwidth + c.prior_io - 2 * c.ours;
            let rhs = ell as u64 + s as u64 + ((1u64 << (ell - s)) - ell as u64) * (1 << s);
            assert_eq!(lhs, rhs, "ell={ell} s={s}");
        }
    }
}

#[test]
fn default_s_is_the_largest_admissible() {
    assert_eq!(default_s(2, 3, 6), Some(0));
    assert_eq!(default_s(2, 3, 5), Some(1));
    assert_eq!(default_s(2, 4, 13), Some(1));
    assert_eq!(default_s(2, 3, 1), Some(2));
    assert_eq!(default_s(2, 3, 7), None);
}

#[test]
fn construction_rejects_bad_parameters() {
    for (q, ell, k, s) in [(2, 2, 3, 1), (2, 3, 6, 1), (2, 3, 0, 0), (2, 3, 8, 0), (2, 3, 1, 3)] {
        assert!(matches!(construct_scheme(field(q, ell), k, s), Err(Error::ConstructionParameters(_))));
    }
}
