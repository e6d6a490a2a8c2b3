//! Repair schemes for full-length RS codes built from affine q-polynomials.
//!
//! For `j <= s + 1` the dual polynomial is `g_j = L_j + gamma^(j)`, where
//! `L_j` maps `F` onto the common trace-kernel of the other `s` leading
//! basis elements; the remaining `g_j` are the constants `gamma^(j)`. Every
//! `g_j` has degree at most `q^s < n - k`, and `g_j(0) = gamma^(j)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::RsCode;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::linalg::BMatrix;
use crate::poly::Poly;
use crate::qpoly::{solve_annihilator, QPolynomial};
use crate::repair::RepairScheme;

/// A constructed scheme for node 0 together with its q-polynomials.
#[derive(Debug, Clone)]
pub struct Construction {
    pub scheme: RepairScheme,
    pub s: usize,
    /// `L_1, ..., L_{s+1}`.
    pub annihilators: Vec<QPolynomial>,
}

fn order_of(q: u32, ell: usize) -> Result<u64> {
    (q as u64)
        .checked_pow(ell as u32)
        .ok_or_else(|| Error::ConstructionParameters(format!("q^ell overflows for q={q}, ell={ell}")))
}

fn check_parameters(q: u32, ell: usize, k: usize, s: usize) -> Result<u64> {
    let n = order_of(q, ell)?;
    if s >= ell {
        return Err(Error::ConstructionParameters(format!("need s < ell, got s = {s}, ell = {ell}")));
    }
    if k == 0 || k as u64 >= n {
        return Err(Error::ConstructionParameters(format!("need 1 <= k < n = {n}, got k = {k}")));
    }
    let needed = (q as u64).pow(s as u32) + 1;
    if n - (k as u64) < needed {
        return Err(Error::ConstructionParameters(format!(
            "n - k = {} is below q^s + 1 = {needed}",
            n - k as u64
        )));
    }
    Ok(n)
}

/// Largest `s < ell` with `q^s + 1 <= n - k`, if any.
pub fn default_s(q: u32, ell: usize, k: usize) -> Option<usize> {
    let n = order_of(q, ell).ok()?;
    let r = n.checked_sub(k as u64)?;
    (0..ell).rev().find(|&s| (q as u64).pow(s as u32) < r)
}

pub fn construct_scheme(ctx: Arc<FieldContext>, k: usize, s: usize) -> Result<Construction> {
    check_parameters(ctx.q() as u32, ctx.ell(), k, s)?;
    let code = RsCode::full_length(ctx.clone(), k)?;
    let basis = ctx.basis();
    let dual = ctx.dual_basis();
    let mut annihilators = Vec::with_capacity(s + 1);
    let mut duals = Vec::with_capacity(ctx.ell());
    for j in 0..ctx.ell() {
        let constant = Poly::constant(dual[j]);
        if j <= s {
            let others: Vec<_> = (0..=s).filter(|&i| i != j).map(|i| basis[i]).collect();
            let l = solve_annihilator(&ctx, &others)?;
            duals.push(l.to_poly(&ctx).add(&ctx, &constant));
            annihilators.push(l);
        } else {
            duals.push(constant);
        }
    }
    let scheme = RepairScheme::new(code, 0, duals)?;
    scheme.validate().map_err(Error::InvalidScheme)?;
    Ok(Construction { scheme, s, annihilators })
}

/// `(n - 1) ell - (s + 1) q^(ell - 1)` with `n = q^ell`.
pub fn predicted_cost(q: u32, ell: usize, s: usize) -> u64 {
    let n = (q as u64).pow(ell as u32);
    (n - 1) * ell as u64 - (s as u64 + 1) * (q as u64).pow(ell as u32 - 1)
}

/// Per-helper `(rank, nz)` pairs showing helpers send what they read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferWitness {
    pub holds: bool,
    pub bandwidth: usize,
    pub io_cost: usize,
    /// `(node (1-based), rank, nz)` for every helper.
    pub per_node: Vec<(usize, usize, usize)>,
}

pub fn bandwidth_equals_io(scheme: &RepairScheme) -> TransferWitness {
    let per_node: Vec<(usize, usize, usize)> = (0..scheme.code().n())
        .filter(|&i| i != scheme.star())
        .map(|i| {
            let w = scheme.io_matrix(i).expect("node in range");
            (i + 1, w.rank(), w.nz())
        })
        .collect();
    TransferWitness {
        holds: per_node.iter().all(|&(_, r, z)| r == z),
        bandwidth: per_node.iter().map(|p| p.1).sum(),
        io_cost: per_node.iter().map(|p| p.2).sum(),
        per_node,
    }
}

impl Construction {
    /// The I/O matrix at node `i` predicted from the q-polynomials alone:
    /// for `j <= s`, entry `(j, j)` is `Tr(L_j(a_i) beta^(j)) + 1`, the rest
    /// of the leading block is zero and columns past `s` carry
    /// `Tr(L_j(a_i) beta^(t))`; rows past `s` are unit vectors.
    pub fn expected_io_matrix(&self, i: usize) -> BMatrix {
        let ctx = self.scheme.field();
        let b = ctx.base();
        let ell = ctx.ell();
        let alpha = self.scheme.code().points()[i];
        let mut w = BMatrix::zeros(ctx.q(), ell, ell);
        for j in 0..ell {
            if j <= self.s {
                let image = self.annihilators[j].eval(ctx, alpha);
                let tr = |t: usize| ctx.trace(ctx.mul(image, ctx.basis()[t]));
                w.set(j, j, b.add(tr(j), 1));
                for t in self.s + 1..ell {
                    w.set(j, t, tr(t));
                }
            } else {
                w.set(j, j, 1);
            }
        }
        w
    }

    /// Whether `w` has a diagonal `(s+1) x (s+1)` upper-left block, a zero
    /// lower-left block and an identity lower-right block.
    pub fn has_block_shape(&self, w: &BMatrix) -> bool {
        let lead = self.s + 1;
        let ell = w.rows();
        (0..ell).all(|j| {
            (0..ell).all(|t| {
                let v = w.get(j, t);
                match (j < lead, t < lead) {
                    (true, true) => j == t || v == 0,
                    (false, true) => v == 0,
                    (false, false) => v == (j == t) as u8,
                    (true, false) => true,
                }
            })
        })
    }

    /// `omega_{i,j} = Tr(L_j(a_i) beta^(j)) + 1` for `j <= s`.
    pub fn omega(&self, i: usize, j: usize) -> u8 {
        let ctx = self.scheme.field();
        let alpha = self.scheme.code().points()[i];
        let image = self.annihilators[j].eval(ctx, alpha);
        ctx.base().add(ctx.trace(ctx.mul(image, ctx.basis()[j])), 1)
    }
}

/// Closed-form costs of the bandwidth-optimal trace schemes against the
/// trivial repair and the affine q-polynomial construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub q: u32,
    pub ell: usize,
    pub s: usize,
    pub k: usize,
    pub n: u64,
    /// `(n - 1)(ell - s)`.
    pub prior_bandwidth: u64,
    /// `(n - q^s) ell`.
    pub prior_io: u64,
    /// `k ell`.
    pub trivial_io: u64,
    /// `(n - 1) ell - (s + 1) q^(ell - 1)`, both bandwidth and I/O.
    pub ours: u64,
    pub ours_below_trivial: bool,
    /// `n - k <= (s + 1) q^(ell - 1) / ell`.
    pub sufficient_condition: bool,
}

pub fn compare_baselines(q: u32, ell: usize, s: usize, k: usize) -> Result<Comparison> {
    let n = check_parameters(q, ell, k, s)?;
    let (q64, l64, s64, k64) = (q as u64, ell as u64, s as u64, k as u64);
    let ours = predicted_cost(q, ell, s);
    let trivial_io = k64 * l64;
    Ok(Comparison {
        q,
        ell,
        s,
        k,
        n,
        prior_bandwidth: (n - 1) * (l64 - s64),
        prior_io: (n - q64.pow(s as u32)) * l64,
        trivial_io,
        ours,
        ours_below_trivial: ours < trivial_io,
        sufficient_condition: (n - k64) * l64 <= (s64 + 1) * q64.pow(ell as u32 - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u32, ell: usize) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(q, ell).unwrap())
    }

    #[test]
    fn small_constructions() {
        let c = construct_scheme(ctx(2, 2), 2, 0).unwrap();
        assert_eq!(c.scheme.io_cost_direct(), 4);
        let c = construct_scheme(ctx(2, 3), 5, 1).unwrap();
        assert_eq!(c.scheme.io_cost_direct(), 13);
        let c = construct_scheme(ctx(3, 2), 7, 0).unwrap();
        assert_eq!(c.scheme.io_cost_direct(), 13);
    }

    #[test]
    fn predicted_values() {
        assert_eq!(predicted_cost(2, 3, 0), 17);
        assert_eq!(predicted_cost(2, 4, 1), 44);
        assert_eq!(predicted_cost(2, 4, 0), 52);
        assert_eq!(predicted_cost(3, 2, 0), 13);
    }

    #[test]
    fn parameter_violations() {
        assert!(matches!(
            construct_scheme(ctx(2, 2), 3, 1),
            Err(Error::ConstructionParameters(_))
        ));
        assert!(construct_scheme(ctx(2, 2), 1, 2).is_err());
        assert!(construct_scheme(ctx(2, 3), 0, 0).is_err());
    }

    #[test]
    fn default_s_picks_largest() {
        assert_eq!(default_s(2, 3, 6), Some(0));
        assert_eq!(default_s(2, 3, 5), Some(1));
        assert_eq!(default_s(2, 4, 13), Some(1));
        assert_eq!(default_s(2, 4, 7), Some(3));
        assert_eq!(default_s(3, 2, 7), Some(0));
        assert_eq!(default_s(2, 3, 7), None);
    }

    #[test]
    fn trivial_scheme_is_repair_by_transfer() {
        let code = RsCode::full_length(ctx(2, 3), 6).unwrap();
        let w = bandwidth_equals_io(&RepairScheme::trivial(code, 0).unwrap());
        assert!(w.holds);
        assert_eq!((w.bandwidth, w.io_cost), (21, 21));
    }

    #[test]
    fn baseline_table_row() {
        let c = compare_baselines(2, 4, 1, 13).unwrap();
        assert_eq!((c.prior_bandwidth, c.prior_io, c.trivial_io, c.ours), (45, 56, 52, 44));
        assert!(c.ours_below_trivial && c.sufficient_condition);
        let c = compare_baselines(2, 3, 0, 6).unwrap();
        assert_eq!((c.prior_bandwidth, c.prior_io, c.trivial_io, c.ours), (21, 21, 18, 17));
    }
}
