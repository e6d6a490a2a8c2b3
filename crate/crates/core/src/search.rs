//! Exhaustive minimum-I/O search over all linear repair schemes of a
//! full-length RS code with `r` parities.
//!
//! The I/O cost of a scheme depends only on the B-span of its dual words,
//! and validity only on the rank of that span at the failed node. So the
//! search ranges over `ell`-dimensional B-subspaces of the dual code
//! `RS(F, r)`, seen as `B^(r ell)` through the digit vectors of the
//! polynomial coefficients (coordinate `d * ell + m` is digit `m` of the
//! coefficient of `x^d`). Each subspace is visited once through its reduced
//! row-echelon basis.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::RsCode;
use crate::construction::{construct_scheme, default_s};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldContext};
use crate::poly::Poly;
use crate::repair::RepairScheme;

pub const DEFAULT_CAP: u128 = 10_000_000;

const MAX_SEARCH_ELL: usize = 16;

/// Number of `k`-dimensional subspaces of `GF(q)^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(q.saturating_pow((n - i) as u32).saturating_sub(1));
        den = den.saturating_mul(q.pow((i + 1) as u32) - 1);
    }
    if num == u128::MAX {
        return u128::MAX;
    }
    num / den
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub cap: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { threads: None, cap: DEFAULT_CAP }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub min_cost: usize,
    pub witness: RepairScheme,
    /// Reduced-echelon basis of the witness span in `B^(r ell)`.
    pub witness_basis: Vec<Vec<u8>>,
    pub enumerated: u128,
    pub valid: u128,
    /// Valid subspaces whose weight-formula cost differed from the direct sum.
    pub formula_mismatches: u128,
}

/// One candidate echelon row: its coordinates, nonzero pattern of its
/// `G`-row, and its block at the failed node.
struct Candidate {
    coords: Vec<u8>,
    mask: u128,
    star_block: Vec<u8>,
}

struct Best {
    cost: usize,
    key: Vec<u8>,
}

#[derive(Default)]
struct Tally {
    best: Option<Best>,
    enumerated: u128,
    valid: u128,
    mismatches: u128,
}

impl Tally {
    fn offer(&mut self, cost: usize, key: impl FnOnce() -> Vec<u8>) {
        match &self.best {
            Some(b) if b.cost < cost => {}
            Some(b) if b.cost == cost => {
                let key = key();
                if key < b.key {
                    self.best = Some(Best { cost, key });
                }
            }
            _ => self.best = Some(Best { cost, key: key() }),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.enumerated += other.enumerated;
        self.valid += other.valid;
        self.mismatches += other.mismatches;
        if let Some(b) = other.best {
            self.offer(b.cost, || b.key);
        }
        self
    }
}

struct SearchSpace {
    q: u8,
    ell: usize,
    dim: usize,
    star: usize,
    // direction_rows[c][i * ell + t]
    direction_rows: Vec<Vec<u8>>,
    star_mask: u128,
}

impl SearchSpace {
    fn candidate(&self, coords: Vec<u8>) -> Candidate {
        let width = self.direction_rows[0].len();
        let mut row = vec![0u16; width];
        for (c, &v) in coords.iter().enumerate() {
            if v == 0 {
                continue;
            }
            for (acc, &d) in row.iter_mut().zip(&self.direction_rows[c]) {
                *acc += v as u16 * d as u16;
            }
        }
        let mut mask = 0u128;
        let mut star_block = vec![0u8; self.ell];
        for (pos, acc) in row.iter().enumerate() {
            let v = (acc % self.q as u16) as u8;
            if v != 0 {
                mask |= 1u128 << pos;
            }
            if pos / self.ell == self.star {
                star_block[pos % self.ell] = v;
            }
        }
        Candidate { coords, mask, star_block }
    }

    /// Every echelon row with pivot `pivot` and zeros on the other pivots.
    fn candidates(&self, pivots: &[usize], pivot: usize) -> Vec<Candidate> {
        let free: Vec<usize> = (pivot + 1..self.dim).filter(|c| !pivots.contains(c)).collect();
        let q = self.q as usize;
        let count = q.pow(free.len() as u32);
        (0..count)
            .map(|mut code| {
                let mut coords = vec![0u8; self.dim];
                coords[pivot] = 1;
                for &f in &free {
                    coords[f] = (code % q) as u8;
                    code /= q;
                }
                self.candidate(coords)
            })
            .collect()
    }

    fn star_rank(&self, rows: &[&Candidate]) -> usize {
        let q = self.q;
        let mut m = [[0u8; MAX_SEARCH_ELL]; MAX_SEARCH_ELL];
        for (r, c) in rows.iter().enumerate() {
            m[r][..self.ell].copy_from_slice(&c.star_block);
        }
        let n = rows.len();
        let mut rank = 0;
        for col in 0..self.ell {
            let Some(p) = (rank..n).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, p);
            // scale pivot row to 1
            let pv = m[rank][col];
            let inv = (1..q).find(|&x| (x as u16 * pv as u16) % q as u16 == 1).expect("prime field");
            for x in m[rank].iter_mut().take(self.ell) {
                *x = ((*x as u16 * inv as u16) % q as u16) as u8;
            }
            for r in 0..n {
                if r == rank || m[r][col] == 0 {
                    continue;
                }
                let f = m[r][col] as u16;
                for c in 0..self.ell {
                    let sub = (f * m[rank][c] as u16) % q as u16;
                    m[r][c] = ((m[r][c] as u16 + q as u16 - sub) % q as u16) as u8;
                }
            }
            rank += 1;
        }
        rank
    }

    fn run_pattern(&self, pivots: &[usize]) -> Tally {
        let lists: Vec<Vec<Candidate>> = pivots.iter().map(|&p| self.candidates(pivots, p)).collect();
        let q = self.q as u128;
        let per_column = q.pow(self.ell as u32 - 1) * (q - 1);
        lists[0]
            .par_iter()
            .map(|first| {
                let mut tally = Tally::default();
                let rest = &lists[1..];
                let mut idx = vec![0usize; rest.len()];
                loop {
                    let mut chosen: Vec<&Candidate> = Vec::with_capacity(self.ell);
                    chosen.push(first);
                    chosen.extend(idx.iter().zip(rest).map(|(&i, list)| &list[i]));
                    tally.enumerated += 1;
                    if self.star_rank(&chosen) == self.ell {
                        tally.valid += 1;
                        let mask = chosen.iter().fold(0u128, |acc, c| acc | c.mask);
                        let direct = (mask & !self.star_mask).count_ones() as usize;
                        let weight = mask.count_ones() as u128 * per_column;
                        let formula = (weight / per_column) as usize - self.ell;
                        if formula != direct || !weight.is_multiple_of(per_column) {
                            tally.mismatches += 1;
                        }
                        tally.offer(direct, || {
                            chosen.iter().flat_map(|c| c.coords.iter().copied()).collect()
                        });
                    }
                    // odometer
                    let mut pos = 0;
                    while pos < idx.len() {
                        idx[pos] += 1;
                        if idx[pos] < rest[pos].len() {
                            break;
                        }
                        idx[pos] = 0;
                        pos += 1;
                    }
                    if pos == idx.len() {
                        break;
                    }
                }
                tally
            })
            .reduce(Tally::default, Tally::merge)
    }
}

fn pivot_patterns(dim: usize, ell: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in start..=dim - left {
            cur.push(p);
            rec(p + 1, dim, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, ell, &mut Vec::new(), &mut out);
    out
}

/// Minimum I/O cost over every valid linear repair scheme for node `star`
/// (0-based) of `RS(F, q^ell - r)`.
pub fn min_io_exhaustive(
    ctx: Arc<FieldContext>,
    r: usize,
    star: usize,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let ell = ctx.ell();
    let q = ctx.q();
    let n = ctx.order() as usize;
    if r == 0 || r >= n {
        return Err(Error::CodeParameters(format!("need 1 <= r < n, got r = {r}")));
    }
    let code = RsCode::full_length(ctx.clone(), n - r)?;
    if star >= n {
        return Err(Error::NodeOutOfRange { index: star, n });
    }
    let dim = r * ell;
    let estimate = gaussian_binomial(dim, ell, q as u64);
    if estimate > opts.cap {
        return Err(Error::SearchTooLarge { estimate, cap: opts.cap });
    }
    if n * ell > 128 || ell > MAX_SEARCH_ELL {
        return Err(Error::Unsupported(format!(
            "search supports n * ell <= 128, got {}",
            n * ell
        )));
    }

    let direction_rows: Vec<Vec<u8>> = (0..dim)
        .map(|c| {
            let (d, m) = (c / ell, c % ell);
            let coeff = ctx.monomial(m);
            code.points()
                .iter()
                .flat_map(|&a| ctx.phi_hat(ctx.mul(coeff, ctx.pow(a, d as u64))))
                .collect()
        })
        .collect();
    let star_mask = ((1u128 << ell) - 1) << (star * ell);
    let space = SearchSpace { q, ell, dim, star, direction_rows, star_mask };

    let patterns = pivot_patterns(dim, ell);
    let run = || {
        patterns
            .par_iter()
            .map(|p| space.run_pattern(p))
            .reduce(Tally::default, Tally::merge)
    };
    let tally = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(run),
        None => run(),
    };

    if tally.enumerated != estimate {
        return Err(Error::Internal(format!(
            "enumerated {} subspaces, Gaussian binomial gives {estimate}",
            tally.enumerated
        )));
    }
    let best = tally
        .best
        .ok_or_else(|| Error::Internal("no valid repair scheme found".into()))?;
    let witness_basis: Vec<Vec<u8>> = best.key.chunks(dim).map(|c| c.to_vec()).collect();
    let duals = witness_basis
        .iter()
        .map(|row| {
            let coeffs: Result<Vec<Elem>> =
                row.chunks(ell).map(|digits| ctx.from_digits(digits)).collect();
            coeffs.map(Poly::new)
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = RepairScheme::new(code, star, duals)?;
    Ok(SearchOutcome {
        min_cost: best.cost,
        witness,
        witness_basis,
        enumerated: tally.enumerated,
        valid: tally.valid,
        formula_mismatches: tally.mismatches,
    })
}

/// Lower bound on the I/O cost of repairing `RS(F, q^ell - r)`.
pub fn lower_bound(q: u32, ell: usize, r: usize) -> Result<u64> {
    let n = (q as u64).pow(ell as u32);
    let ell64 = ell as u64;
    match r {
        2 => Ok((n - 1) * ell64 - (q as u64).pow(ell as u32 - 1)),
        3 if q == 2 && ell >= 3 => Ok((n - 1) * ell64 - n - (1u64 << (ell - 3))),
        3 if q != 2 => Err(Error::Unsupported("the three-parity bound holds for q = 2 only".into())),
        3 => Err(Error::Unsupported("the three-parity bound needs ell >= 3".into())),
        _ => Err(Error::Unsupported(format!("no lower bound for r = {r}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u32,
    pub ell: usize,
    pub r: usize,
    pub n: u64,
    pub bound: u64,
    pub min: Option<usize>,
    pub construction: u64,
    /// `construction - bound`.
    pub gap: u64,
    pub verified_by_search: bool,
    /// Subspace count (exact when searched, estimated otherwise).
    pub subspaces: u128,
    /// `bound <= min <= construction` when searched, `bound <= construction` otherwise.
    pub consistent: bool,
}

/// Compares the lower bound, the exhaustive minimum (when the search fits
/// under the cap) and the measured cost of the q-polynomial construction.
pub fn verify_bound(ctx: Arc<FieldContext>, r: usize, opts: &SearchOptions) -> Result<BoundReport> {
    let q = ctx.q() as u32;
    let ell = ctx.ell();
    let bound = lower_bound(q, ell, r)?;
    let n = ctx.order() as u64;
    let k = (n as usize).checked_sub(r).filter(|&k| k >= 1).ok_or_else(|| {
        Error::CodeParameters(format!("r = {r} leaves no message symbols"))
    })?;
    let s = default_s(q, ell, k)
        .ok_or_else(|| Error::ConstructionParameters(format!("no s with q^s + 1 <= {r}")))?;
    let construction = construct_scheme(ctx.clone(), k, s)?.scheme.io_cost_direct() as u64;
    let estimate = gaussian_binomial(r * ell, ell, q as u64);
    let (min, subspaces) = match min_io_exhaustive(ctx, r, 0, opts) {
        Ok(out) => (Some(out.min_cost), out.enumerated),
        Err(Error::SearchTooLarge { .. }) => (None, estimate),
        Err(e) => return Err(e),
    };
    let consistent = match min {
        Some(m) => bound <= m as u64 && m as u64 <= construction,
        None => bound <= construction,
    };
    Ok(BoundReport {
        q,
        ell,
        r,
        n,
        bound,
        min,
        construction,
        gap: construction.saturating_sub(bound),
        verified_by_search: min.is_some(),
        subspaces,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(6, 3, 2), 1395);
        assert_eq!(gaussian_binomial(9, 3, 2), 788_035);
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        assert_eq!(gaussian_binomial(3, 0, 5), 1);
        assert_eq!(gaussian_binomial(2, 3, 2), 0);
    }

    #[test]
    fn pattern_count() {
        assert_eq!(pivot_patterns(9, 3).len(), 84);
        assert_eq!(pivot_patterns(4, 4), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn bounds() {
        assert_eq!(lower_bound(2, 2, 2).unwrap(), 4);
        assert_eq!(lower_bound(2, 3, 2).unwrap(), 17);
        assert_eq!(lower_bound(3, 2, 2).unwrap(), 13);
        assert_eq!(lower_bound(2, 3, 3).unwrap(), 12);
        assert!(lower_bound(3, 3, 3).is_err());
        assert!(lower_bound(2, 2, 3).is_err());
        assert!(lower_bound(2, 3, 4).is_err());
    }

    #[test]
    fn smallest_search() {
        let ctx = Arc::new(FieldContext::new(2, 2).unwrap());
        let out = min_io_exhaustive(ctx, 2, 0, &SearchOptions::default()).unwrap();
        assert_eq!(out.min_cost, 4);
        assert_eq!(out.enumerated, 35);
        assert_eq!(out.formula_mismatches, 0);
        assert!(out.witness.is_valid());
        assert_eq!(out.witness.io_cost_direct(), 4);
    }

    #[test]
    fn oversize_search_refused() {
        let ctx = Arc::new(FieldContext::new(2, 5).unwrap());
        let err = min_io_exhaustive(ctx.clone(), 2, 0, &SearchOptions::default()).unwrap_err();
        assert!(matches!(err, Error::SearchTooLarge { .. }));
        let report = verify_bound(ctx, 2, &SearchOptions::default()).unwrap();
        assert!(!report.verified_by_search);
        assert_eq!(report.min, None);
        assert_eq!(report.bound, 31 * 5 - 16);
        assert_eq!(report.construction, report.bound);
    }
}
