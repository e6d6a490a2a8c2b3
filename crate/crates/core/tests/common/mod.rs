#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rsrepair::{BMatrix, Elem, FieldContext, Poly, RepairScheme, RsCode};

pub fn field(q: u32, ell: usize) -> Arc<FieldContext> {
    Arc::new(FieldContext::new(q, ell).unwrap())
}

pub fn full_code(q: u32, ell: usize, r: usize) -> RsCode {
    let ctx = field(q, ell);
    let n = ctx.order() as usize;
    RsCode::full_length(ctx, n - r).unwrap()
}

/// Uniform dual polynomials of degree < r, redrawn until the scheme is valid.
pub fn random_valid_scheme<R: Rng>(code: &RsCode, star: usize, rng: &mut R) -> RepairScheme {
    let ctx = code.ctx().clone();
    let r = code.redundancy();
    loop {
        let duals = (0..ctx.ell())
            .map(|_| Poly::new((0..r).map(|_| ctx.random(rng)).collect()))
            .collect();
        let s = RepairScheme::new(code.clone(), star, duals).unwrap();
        if s.is_valid() {
            return s;
        }
    }
}

/// Every vector of `GF(q)^k`.
pub fn all_vectors(q: u8, k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// `sum_{u in B^k} wt(y + u G)` by enumeration.
pub fn brute_coset_weight(g: &BMatrix, y: &[u8]) -> u128 {
    let q = g.q();
    all_vectors(q, g.rows())
        .iter()
        .map(|u| {
            (0..g.cols())
                .filter(|&c| {
                    let s = (0..g.rows()).fold(y[c] as u32, |acc, r| acc + u[r] as u32 * g.get(r, c) as u32);
                    s % q as u32 != 0
                })
                .count() as u128
        })
        .sum()
}

/// Random `k x m` matrix over `GF(q)` with independent rows.
pub fn random_full_rank<R: Rng>(q: u8, k: usize, m: usize, rng: &mut R) -> BMatrix {
    loop {
        let rows: Vec<Vec<u8>> = (0..k).map(|_| (0..m).map(|_| rng.gen_range(0..q)).collect()).collect();
        let g = BMatrix::from_rows(q, m, &rows).unwrap();
        if g.rank() == k {
            return g;
        }
    }
}

/// `Tr(x)` computed as `sum x^(q^i)` with repeated multiplication only.
pub fn naive_trace(ctx: &FieldContext, x: Elem) -> u8 {
    let mut acc = Elem::ZERO;
    let mut p = x;
    for _ in 0..ctx.ell() {
        acc = ctx.add(acc, p);
        let mut next = Elem::ONE;
        for _ in 0..ctx.q() {
            next = ctx.mul(next, p);
        }
        p = next;
    }
    assert!(acc.value() < ctx.q() as u32);
    acc.value() as u8
}
