//! Dense univariate polynomials over `F`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldContext};

/// Coefficients in ascending degree, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Elem>", into = "Vec<Elem>")]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl From<Vec<Elem>> for Poly {
    fn from(coeffs: Vec<Elem>) -> Self {
        Poly::new(coeffs)
    }
}

impl From<Poly> for Vec<Elem> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^d`.
    pub fn monomial(c: Elem, d: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; d + 1];
        coeffs[d] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Elem {
        self.coeffs.get(d).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn check(&self, ctx: &FieldContext) -> Result<()> {
        for &c in &self.coeffs {
            ctx.check(c)?;
        }
        Ok(())
    }

    pub fn eval(&self, ctx: &FieldContext, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldContext, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|d| ctx.add(self.coeff(d), other.coeff(d))).collect())
    }

    pub fn scale(&self, ctx: &FieldContext, c: Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn scale_base(&self, ctx: &FieldContext, c: u8) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.scale(c, a)).collect())
    }

    pub fn mul(&self, ctx: &FieldContext, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// `p(x - a)`, by Horner's rule on polynomials.
    pub fn translate(&self, ctx: &FieldContext, a: Elem) -> Poly {
        let linear = Poly::new(vec![ctx.neg(a), Elem::ONE]);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, &c| {
            acc.mul(ctx, &linear).add(ctx, &Poly::constant(c))
        })
    }
}

/// Lagrange interpolation through `(points[i], values[i])`; points must be
/// distinct.
pub fn interpolate(ctx: &FieldContext, points: &[Elem], values: &[Elem]) -> Result<Poly> {
    if points.len() != values.len() {
        return Err(Error::Dimension(format!(
            "{} points and {} values",
            points.len(),
            values.len()
        )));
    }
    let n = points.len();
    // master(x) = prod (x - a_i)
    let mut master = vec![Elem::ONE];
    for &a in points {
        let mut next = vec![Elem::ZERO; master.len() + 1];
        for (d, &c) in master.iter().enumerate() {
            next[d + 1] = ctx.add(next[d + 1], c);
            next[d] = ctx.sub(next[d], ctx.mul(c, a));
        }
        master = next;
    }
    let mut out = vec![Elem::ZERO; n];
    for i in 0..n {
        if values[i].is_zero() {
            continue;
        }
        // basis_i(x) = master(x) / (x - a_i), by synthetic division.
        let a = points[i];
        let mut quotient = vec![Elem::ZERO; n];
        let mut carry = Elem::ZERO;
        for d in (1..=n).rev() {
            carry = ctx.add(master[d], ctx.mul(carry, a));
            quotient[d - 1] = carry;
        }
        let denom = quotient.iter().rev().fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, a), c));
        let w = ctx.div(values[i], denom).map_err(|_| {
            Error::CodeParameters("interpolation points are not distinct".into())
        })?;
        for (o, &c) in out.iter_mut().zip(&quotient) {
            *o = ctx.add(*o, ctx.mul(c, w));
        }
    }
    Ok(Poly::new(out))
}
