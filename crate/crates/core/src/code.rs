//! Reed-Solomon codes over `F`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldContext};
use crate::poly::{interpolate, Poly};

/// A word of length `n` over `F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Codeword(pub Vec<Elem>);

impl Codeword {
    pub fn symbols(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `RS(A, k) = {(f(a_1), ..., f(a_n)) : deg f <= k - 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsCode {
    ctx: Arc<FieldContext>,
    points: Vec<Elem>,
    k: usize,
    full_length: bool,
}

impl RsCode {
    /// The full-length code: every element of `F` in canonical order, so
    /// node 0 evaluates at zero.
    pub fn full_length(ctx: Arc<FieldContext>, k: usize) -> Result<Self> {
        let points: Vec<Elem> = ctx.elements().collect();
        Self::with_points(ctx, points, k)
    }

    pub fn with_points(ctx: Arc<FieldContext>, points: Vec<Elem>, k: usize) -> Result<Self> {
        let n = points.len();
        if k == 0 || k >= n {
            return Err(Error::CodeParameters(format!("need 1 <= k < n, got k = {k}, n = {n}")));
        }
        let mut seen = vec![false; ctx.order() as usize];
        for &p in &points {
            ctx.check(p)?;
            if std::mem::replace(&mut seen[p.value() as usize], true) {
                return Err(Error::CodeParameters(format!("evaluation point {p} repeated")));
            }
        }
        let full_length = n == ctx.order() as usize
            && points.iter().enumerate().all(|(i, p)| p.value() as usize == i);
        Ok(RsCode { ctx, points, k, full_length })
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn field(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity symbols `n - k`.
    pub fn redundancy(&self) -> usize {
        self.n() - self.k
    }

    pub fn is_full_length(&self) -> bool {
        self.full_length
    }

    pub fn encode(&self, f: &Poly) -> Result<Codeword> {
        f.check(&self.ctx)?;
        if let Some(d) = f.degree().filter(|&d| d >= self.k) {
            return Err(Error::DegreeTooHigh { degree: d, k: self.k });
        }
        Ok(Codeword(self.points.iter().map(|&a| f.eval(&self.ctx, a)).collect()))
    }

    /// `RS(F, k)^perp = RS(F, n - k)` for full-length codes.
    pub fn dual_code(&self) -> Result<RsCode> {
        if !self.full_length {
            return Err(Error::NotFullLength);
        }
        RsCode::full_length(self.ctx.clone(), self.n() - self.k)
    }

    pub fn interpolate(&self, word: &Codeword) -> Result<Poly> {
        interpolate(&self.ctx, &self.points, &word.0)
    }

    pub fn is_codeword(&self, word: &Codeword) -> bool {
        if word.len() != self.n() || word.0.iter().any(|&c| self.ctx.check(c).is_err()) {
            return false;
        }
        match self.interpolate(word) {
            Ok(p) => p.degree().is_none_or(|d| d < self.k),
            Err(_) => false,
        }
    }

    pub fn random_message(&self, seed: u64) -> Poly {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Poly::new((0..self.k).map(|_| self.ctx.random(&mut rng)).collect())
    }

    pub fn random_codeword(&self, seed: u64) -> Codeword {
        self.encode(&self.random_message(seed)).expect("message degree below k")
    }

    /// `sum_i c_i d_i`.
    pub fn inner_product(&self, c: &Codeword, d: &Codeword) -> Elem {
        c.0.iter()
            .zip(&d.0)
            .fold(Elem::ZERO, |acc, (&a, &b)| self.ctx.add(acc, self.ctx.mul(a, b)))
    }
}
