//! Linearized (q-)polynomials `L(x) = sum_j theta_j x^(q^j)` over `F` and
//! the B-subspaces of `F` they cut out.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldContext};
use crate::linalg::BMatrix;
use crate::poly::Poly;

/// A B-linear subspace of `F`, held as a reduced-echelon basis so that
/// equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Vec<Elem>,
}

impl Subspace {
    pub fn span(ctx: &FieldContext, elems: &[Elem]) -> Self {
        let ech = ctx.digit_matrix(elems).rref();
        let basis = (0..ech.rank())
            .map(|r| ctx.from_digits(ech.matrix.row(r)).expect("digits in range"))
            .collect();
        Subspace { basis }
    }

    pub fn whole(ctx: &FieldContext) -> Self {
        let all: Vec<Elem> = (0..ctx.ell()).map(|i| ctx.monomial(i)).collect();
        Self::span(ctx, &all)
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every element, in no particular order.
    pub fn elements(&self, ctx: &FieldContext) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO];
        for &b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * ctx.q() as usize);
            for c in 0..ctx.q() {
                let cb = ctx.scale(c, b);
                next.extend(out.iter().map(|&e| ctx.add(e, cb)));
            }
            out = next;
        }
        out
    }

    pub fn contains(&self, ctx: &FieldContext, e: Elem) -> bool {
        let mut with = self.basis.clone();
        with.push(e);
        ctx.rank_over_base(&with) == self.dim()
    }
}

/// `L(x) = sum_{j=0}^t theta_j x^(q^j)`; coefficients are `[theta_0, .., theta_t]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QPolynomial {
    coeffs: Vec<Elem>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    /// `L(x) = x`.
    pub fn identity() -> Self {
        QPolynomial { coeffs: vec![Elem::ONE] }
    }

    /// The trace map as a q-polynomial, `x + x^q + ... + x^(q^(ell-1))`.
    pub fn trace(ctx: &FieldContext) -> Self {
        QPolynomial { coeffs: vec![Elem::ONE; ctx.ell()] }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `t`, so that the ordinary degree is `q^t`.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, ctx: &FieldContext, a: Elem) -> Elem {
        let q = ctx.q() as u64;
        let mut power = a;
        let mut acc = Elem::ZERO;
        for &theta in &self.coeffs {
            acc = ctx.add(acc, ctx.mul(theta, power));
            power = ctx.pow(power, q);
        }
        acc
    }

    /// The dense polynomial with `theta_j` at degree `q^j`.
    pub fn to_poly(&self, ctx: &FieldContext) -> Poly {
        let Some(t) = self.q_degree() else {
            return Poly::zero();
        };
        let q = ctx.q() as usize;
        let mut dense = vec![Elem::ZERO; q.pow(t as u32) + 1];
        for (j, &theta) in self.coeffs.iter().enumerate() {
            dense[q.pow(j as u32)] = theta;
        }
        Poly::new(dense)
    }

    // Row i holds the digits of L(x^i).
    fn matrix(&self, ctx: &FieldContext) -> BMatrix {
        let images: Vec<Elem> = (0..ctx.ell()).map(|i| self.eval(ctx, ctx.monomial(i))).collect();
        ctx.digit_matrix(&images)
    }

    pub fn image(&self, ctx: &FieldContext) -> Result<Subspace> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let images: Vec<Elem> = (0..ctx.ell()).map(|i| self.eval(ctx, ctx.monomial(i))).collect();
        Ok(Subspace::span(ctx, &images))
    }

    pub fn kernel(&self, ctx: &FieldContext) -> Result<Subspace> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // v M = 0 with M the matrix of L in the polynomial basis.
        let kernel: Vec<Elem> = self
            .matrix(ctx)
            .transpose()
            .nullspace()
            .iter()
            .map(|v| ctx.from_digits(v).expect("digits in range"))
            .collect();
        Ok(Subspace::span(ctx, &kernel))
    }
}

/// Monic q-polynomial of q-degree `t = betas.len()` whose image is
/// `intersect_i beta_i^{-1} K`, `K` the kernel of the trace.
///
/// The unknowns `z = (theta_t, theta_{t-1}^q, ..., theta_0^(q^t))` span the
/// right kernel of the `t x (t+1)` matrix `[beta_i^(q^j)]`; fixing
/// `theta_t = 1` leaves a nonsingular Moore system for the rest, and each
/// `theta_{t-j}` is recovered by undoing `j` Frobenius powers.
pub fn solve_annihilator(ctx: &FieldContext, betas: &[Elem]) -> Result<QPolynomial> {
    let t = betas.len();
    if t == 0 {
        return Ok(QPolynomial::identity());
    }
    let ell = ctx.ell();
    if t >= ell {
        return Err(Error::Unsupported(format!("annihilator needs t < ell, got t = {t}, ell = {ell}")));
    }
    if ctx.rank_over_base(betas) != t {
        return Err(Error::DependentElements);
    }
    let q = ctx.q() as u64;
    // powers[i][j] = beta_i^(q^j), j = 0..=t
    let powers: Vec<Vec<Elem>> = betas
        .iter()
        .map(|&b| {
            let mut row = Vec::with_capacity(t + 1);
            let mut x = b;
            for _ in 0..=t {
                row.push(x);
                x = ctx.pow(x, q);
            }
            row
        })
        .collect();
    let system: Vec<Vec<Elem>> = powers.iter().map(|row| row[1..].to_vec()).collect();
    let rhs: Vec<Elem> = powers.iter().map(|row| ctx.neg(row[0])).collect();
    let z = solve_over_field(ctx, system, rhs)?;

    let mut theta = vec![Elem::ZERO; t + 1];
    theta[t] = Elem::ONE;
    for (j, &zj) in z.iter().enumerate() {
        let j = j + 1;
        theta[t - j] = ctx.frobenius(zj, ell - j);
    }
    Ok(QPolynomial::new(theta))
}

/// `intersect_i beta_i^{-1} K = {x : Tr(beta_i x) = 0 for all i}`.
pub fn intersect_trace_kernels(ctx: &FieldContext, betas: &[Elem]) -> Result<Subspace> {
    if ctx.rank_over_base(betas) != betas.len() {
        return Err(Error::DependentElements);
    }
    if betas.is_empty() {
        return Ok(Subspace::whole(ctx));
    }
    let rows: Vec<Vec<u8>> = betas
        .iter()
        .map(|&b| (0..ctx.ell()).map(|m| ctx.trace(ctx.mul(b, ctx.monomial(m)))).collect())
        .collect();
    let constraints = BMatrix::from_rows(ctx.q(), ctx.ell(), &rows)?;
    let solutions: Vec<Elem> = constraints
        .nullspace()
        .iter()
        .map(|v| ctx.from_digits(v).expect("digits in range"))
        .collect();
    Ok(Subspace::span(ctx, &solutions))
}

/// Square system `A z = b` over `F` by Gauss-Jordan elimination.
fn solve_over_field(ctx: &FieldContext, mut a: Vec<Vec<Elem>>, mut b: Vec<Elem>) -> Result<Vec<Elem>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal("singular Moore system".into()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = ctx.inv(a[col][col])?;
        for x in a[col].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        b[col] = ctx.mul(b[col], inv);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col];
            for c in col..n {
                let v = ctx.mul(factor, a[col][c]);
                a[r][c] = ctx.sub(a[r][c], v);
            }
            b[r] = ctx.sub(b[r], ctx.mul(factor, b[col]));
        }
    }
    Ok(b)
}
