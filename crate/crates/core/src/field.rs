//! Arithmetic in `F = GF(q^ell)` over its prime subfield `B = GF(q)`.
//!
//! Elements are stored as their canonical integer `sum d_i q^i`, where the
//! digits `d_i` are the coefficients of the residue polynomial modulo the
//! field's defining polynomial (little-endian polynomial-basis coordinates).
//! The context also fixes a B-basis `beta^(1..ell)` of F and its trace-dual
//! basis `gamma^(1..ell)`, which together define the coordinate maps used
//! to count accessed subsymbols.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BMatrix, PrimeField};

const MAX_DIGITS: usize = 32;

type Digits = [u8; MAX_DIGITS];

/// An element of `F`, in canonical integer form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub const fn new(value: u32) -> Self {
        Elem(value)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Lexicographically smallest monic irreducible of each degree, coefficients
/// in ascending degree, for q in {2, 3, 5} and ell in 1..=12.
const DEFAULT_MODULI: &[(u8, &[&[u8]])] = &[
    (
        2,
        &[
            &[0, 1],
            &[1, 1, 1],
            &[1, 1, 0, 1],
            &[1, 1, 0, 0, 1],
            &[1, 0, 1, 0, 0, 1],
            &[1, 1, 0, 0, 0, 0, 1],
            &[1, 1, 0, 0, 0, 0, 0, 1],
            &[1, 1, 0, 1, 1, 0, 0, 0, 1],
            &[1, 1, 0, 0, 0, 0, 0, 0, 0, 1],
            &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1],
            &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        ],
    ),
    (
        3,
        &[
            &[0, 1],
            &[1, 0, 1],
            &[1, 2, 0, 1],
            &[2, 1, 0, 0, 1],
            &[1, 2, 0, 0, 0, 1],
            &[2, 1, 0, 0, 0, 0, 1],
            &[2, 0, 1, 0, 0, 0, 0, 1],
            &[2, 0, 1, 0, 0, 0, 0, 0, 1],
            &[1, 0, 1, 2, 0, 0, 0, 0, 0, 1],
            &[1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 1],
            &[2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            &[2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        ],
    ),
    (
        5,
        &[
            &[0, 1],
            &[2, 0, 1],
            &[1, 1, 0, 1],
            &[2, 0, 0, 0, 1],
            &[1, 4, 0, 0, 0, 1],
            &[2, 1, 0, 0, 0, 0, 1],
            &[1, 1, 0, 0, 0, 0, 0, 1],
            &[2, 0, 0, 0, 0, 0, 0, 0, 1],
            &[3, 2, 1, 0, 0, 0, 0, 0, 0, 1],
            &[3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1],
            &[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            &[4, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        ],
    ),
];

/// The built-in defining polynomial for `GF(q^ell)`, if the table has one.
pub fn default_modulus(q: u8, ell: usize) -> Option<Vec<u8>> {
    DEFAULT_MODULI
        .iter()
        .find(|(p, _)| *p == q)
        .and_then(|(_, table)| table.get(ell.checked_sub(1)?))
        .map(|m| m.to_vec())
}

/// Immutable description of the tower `GF(q) ⊂ GF(q^ell)` together with a
/// chosen basis and its dual.
#[derive(Clone)]
pub struct FieldContext {
    base: PrimeField,
    ell: usize,
    order: u32,
    modulus: Vec<u8>,
    basis: Vec<Elem>,
    dual_basis: Vec<Elem>,
    // Tr(x^i) for the polynomial-basis monomials.
    monomial_trace: Vec<u8>,
    // Row i holds phi(x^i) / phi_hat(x^i); both maps are B-linear.
    phi_rows: BMatrix,
    phi_hat_rows: BMatrix,
    // Row i holds the digits of beta^(i).
    basis_rows: BMatrix,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("q", &self.q())
            .field("ell", &self.ell)
            .field("modulus", &self.modulus)
            .field("basis", &self.basis)
            .field("dual_basis", &self.dual_basis)
            .finish()
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.ell == other.ell
            && self.modulus == other.modulus
            && self.basis == other.basis
    }
}

impl Eq for FieldContext {}

impl FieldContext {
    /// Field with the built-in modulus and the polynomial basis.
    pub fn new(q: u32, ell: usize) -> Result<Self> {
        Self::with_options(q, ell, None, None)
    }

    pub fn with_options(
        q: u32,
        ell: usize,
        modulus: Option<Vec<u8>>,
        basis: Option<Vec<Elem>>,
    ) -> Result<Self> {
        let base = PrimeField::new(q)?;
        let q = base.order();
        if ell == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = (q as u64)
            .checked_pow(ell as u32)
            .filter(|&o| o <= u32::MAX as u64 && ell <= MAX_DIGITS)
            .ok_or(Error::FieldTooLarge { q, ell })? as u32;
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(q, ell).ok_or(Error::NoDefaultModulus { q, ell })?,
        };
        if modulus.len() != ell + 1 || modulus[ell] != 1 {
            return Err(Error::MalformedModulus(modulus));
        }
        if let Some(&d) = modulus.iter().find(|&&d| d >= q) {
            return Err(Error::DigitOutOfRange { digit: d as u32, q });
        }
        if !is_irreducible(base, &modulus) {
            return Err(Error::ReducibleModulus(modulus));
        }

        let mut ctx = FieldContext {
            base,
            ell,
            order,
            modulus,
            basis: Vec::new(),
            dual_basis: Vec::new(),
            monomial_trace: Vec::new(),
            phi_rows: BMatrix::zeros(q, 0, 0),
            phi_hat_rows: BMatrix::zeros(q, 0, 0),
            basis_rows: BMatrix::zeros(q, 0, 0),
        };

        ctx.monomial_trace = (0..ell)
            .map(|i| {
                let t = ctx.trace_by_definition(ctx.monomial(i));
                debug_assert!(t.value() < q as u32, "trace must land in the base field");
                t.value() as u8
            })
            .collect();

        let basis = match basis {
            Some(b) => {
                if b.len() != ell {
                    return Err(Error::BasisLength { expected: ell, got: b.len() });
                }
                for &e in &b {
                    ctx.check(e)?;
                }
                b
            }
            None => (0..ell).map(|i| ctx.monomial(i)).collect(),
        };
        let dual_basis = ctx.dual_basis_of(&basis)?;
        ctx.basis_rows = ctx.digit_matrix(&basis);
        ctx.phi_rows = ctx.trace_pairing_rows(&dual_basis);
        ctx.phi_hat_rows = ctx.trace_pairing_rows(&basis);
        ctx.basis = basis;
        ctx.dual_basis = dual_basis;
        Ok(ctx)
    }

    pub fn q(&self) -> u8 {
        self.base.order()
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `q^ell`, the number of elements of F.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn dual_basis(&self) -> &[Elem] {
        &self.dual_basis
    }

    pub fn is_polynomial_basis(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, &b)| b == self.monomial(i))
    }

    /// All elements of F in canonical order, starting with zero.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn check(&self, e: Elem) -> Result<Elem> {
        if e.0 < self.order {
            Ok(e)
        } else {
            Err(Error::ElementOutOfRange { value: e.0 as u64, order: self.order as u64 })
        }
    }

    pub fn elem(&self, value: u64) -> Result<Elem> {
        if value < self.order as u64 {
            Ok(Elem(value as u32))
        } else {
            Err(Error::ElementOutOfRange { value, order: self.order as u64 })
        }
    }

    /// Embeds a base-field scalar.
    pub fn scalar(&self, c: u8) -> Elem {
        Elem((c % self.q()) as u32)
    }

    /// The residue class of `x^i`.
    pub fn monomial(&self, i: usize) -> Elem {
        assert!(i < self.ell);
        Elem((self.q() as u32).pow(i as u32))
    }

    pub fn digits(&self, a: Elem) -> Vec<u8> {
        self.to_digits(a)[..self.ell].to_vec()
    }

    pub fn from_digits(&self, digits: &[u8]) -> Result<Elem> {
        if digits.len() != self.ell {
            return Err(Error::Dimension(format!(
                "{} digits for a degree-{} extension",
                digits.len(),
                self.ell
            )));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= self.q()) {
            return Err(Error::DigitOutOfRange { digit: d as u32, q: self.q() });
        }
        let mut d = [0u8; MAX_DIGITS];
        d[..self.ell].copy_from_slice(digits);
        Ok(self.pack(&d))
    }

    #[inline]
    fn to_digits(&self, a: Elem) -> Digits {
        let mut d = [0u8; MAX_DIGITS];
        let q = self.q() as u32;
        let mut v = a.0;
        for slot in d.iter_mut().take(self.ell) {
            *slot = (v % q) as u8;
            v /= q;
        }
        d
    }

    #[inline]
    fn pack(&self, d: &Digits) -> Elem {
        let q = self.q() as u32;
        Elem(d[..self.ell].iter().rev().fold(0u32, |acc, &x| acc * q + x as u32))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.q() == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (x, y) = (self.to_digits(a), self.to_digits(b));
        let mut z = [0u8; MAX_DIGITS];
        for i in 0..self.ell {
            z[i] = self.base.add(x[i], y[i]);
        }
        self.pack(&z)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.q() == 2 {
            return a;
        }
        let x = self.to_digits(a);
        let mut z = [0u8; MAX_DIGITS];
        for i in 0..self.ell {
            z[i] = self.base.neg(x[i]);
        }
        self.pack(&z)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplication by a base-field scalar.
    pub fn scale(&self, c: u8, a: Elem) -> Elem {
        let c = c % self.q();
        match c {
            0 => Elem::ZERO,
            1 => a,
            _ => {
                let x = self.to_digits(a);
                let mut z = [0u8; MAX_DIGITS];
                for i in 0..self.ell {
                    z[i] = self.base.mul(c, x[i]);
                }
                self.pack(&z)
            }
        }
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let ell = self.ell;
        let (x, y) = (self.to_digits(a), self.to_digits(b));
        let mut prod = [0u8; 2 * MAX_DIGITS];
        for i in 0..ell {
            if x[i] == 0 {
                continue;
            }
            for j in 0..ell {
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(x[i], y[j]));
            }
        }
        // Reduce with the monic modulus from the top degree down.
        for deg in (ell..2 * ell - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..ell {
                let t = self.base.mul(c, self.modulus[i]);
                prod[deg - ell + i] = self.base.sub(prod[deg - ell + i], t);
            }
        }
        let mut z = [0u8; MAX_DIGITS];
        z[..ell].copy_from_slice(&prod[..ell]);
        self.pack(&z)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.order as u64 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(q^i)`, the i-th power of the Frobenius automorphism. Exponents are
    /// taken modulo `ell`.
    pub fn frobenius(&self, a: Elem, i: usize) -> Elem {
        let q = self.q() as u64;
        (0..i % self.ell).fold(a, |x, _| self.pow(x, q))
    }

    /// `sum_{i<ell} a^(q^i)`, evaluated literally as a field element.
    pub fn trace_by_definition(&self, a: Elem) -> Elem {
        let q = self.q() as u64;
        let mut acc = Elem::ZERO;
        let mut x = a;
        for _ in 0..self.ell {
            acc = self.add(acc, x);
            x = self.pow(x, q);
        }
        acc
    }

    /// Absolute trace `Tr: F -> B`.
    pub fn trace(&self, a: Elem) -> u8 {
        let d = self.to_digits(a);
        (0..self.ell).fold(0u8, |acc, i| {
            self.base.add(acc, self.base.mul(d[i], self.monomial_trace[i]))
        })
    }

    /// Coordinates of `a` in the basis: `(Tr(a gamma^(1)), ..., Tr(a gamma^(ell)))`.
    pub fn phi(&self, a: Elem) -> Vec<u8> {
        self.phi_rows.left_mul_vec(&self.digits(a))
    }

    /// Coordinates in the dual basis: `(Tr(a beta^(1)), ..., Tr(a beta^(ell)))`.
    pub fn phi_hat(&self, a: Elem) -> Vec<u8> {
        self.phi_hat_rows.left_mul_vec(&self.digits(a))
    }

    /// Inverse of [`phi`](Self::phi): `sum_i v_i beta^(i)`.
    pub fn phi_inv(&self, v: &[u8]) -> Result<Elem> {
        if v.len() != self.ell {
            return Err(Error::Dimension(format!("coordinate vector of length {}", v.len())));
        }
        self.from_digits(&self.basis_rows.left_mul_vec(v))
    }

    /// Rank over B of a set of elements.
    pub fn rank_over_base(&self, elems: &[Elem]) -> usize {
        self.digit_matrix(elems).rank()
    }

    /// Solves `Tr(b_i mu_j) = [i == j]` for the trace-dual of a B-basis.
    pub fn dual_basis_of(&self, elems: &[Elem]) -> Result<Vec<Elem>> {
        if elems.len() != self.ell {
            return Err(Error::BasisLength { expected: self.ell, got: elems.len() });
        }
        let pairing = self.trace_pairing_rows(elems).transpose();
        let inv = pairing.inverse().map_err(|_| Error::DependentElements)?;
        // Column j of the inverse holds the digits of the j-th dual element.
        (0..self.ell).map(|j| self.from_digits(&inv.column(j))).collect()
    }

    /// Matrix whose rows are the digit vectors of `elems`.
    pub fn digit_matrix(&self, elems: &[Elem]) -> BMatrix {
        let rows: Vec<Vec<u8>> = elems.iter().map(|&e| self.digits(e)).collect();
        BMatrix::from_rows(self.q(), self.ell, &rows).expect("digits are in range")
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.order))
    }

    /// Text form `q=.. ell=.. modulus=[..]`, with `basis=[..]` appended only
    /// for non-polynomial bases.
    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            q: self.q() as u32,
            ell: self.ell,
            modulus: Some(self.modulus.clone()),
            basis: if self.is_polynomial_basis() { None } else { Some(self.basis.clone()) },
        }
    }

    // Row i holds (Tr(x^i e_1), ..., Tr(x^i e_m)).
    fn trace_pairing_rows(&self, elems: &[Elem]) -> BMatrix {
        let rows: Vec<Vec<u8>> = (0..self.ell)
            .map(|i| {
                let xi = self.monomial(i);
                elems.iter().map(|&e| self.trace(self.mul(xi, e))).collect()
            })
            .collect();
        BMatrix::from_rows(self.q(), elems.len(), &rows).expect("traces are in range")
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: PrimeField, modulus: &[u8]) -> bool {
    let deg = modulus.len() - 1;
    let q = f.order() as u64;
    for d in 1..=deg / 2 {
        for code in 0..q.pow(d as u32) {
            let mut divisor: Vec<u8> = (0..d).map(|i| ((code / q.pow(i as u32)) % q) as u8).collect();
            divisor.push(1);
            if poly_rem_is_zero(f, modulus, &divisor) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(f: PrimeField, num: &[u8], monic_div: &[u8]) -> bool {
    let mut r = num.to_vec();
    let dd = monic_div.len() - 1;
    for top in (dd..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &m) in monic_div.iter().enumerate() {
            let idx = top - dd + i;
            r[idx] = f.sub(r[idx], f.mul(c, m));
        }
    }
    r.iter().all(|&x| x == 0)
}

/// Parsed field description, e.g. `q=2 ell=3 modulus=[1,1,0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub q: u32,
    pub ell: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Elem>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldContext> {
        FieldContext::with_options(self.q, self.ell, self.modulus.clone(), self.basis.clone())
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} ell={}", self.q, self.ell)?;
        if let Some(m) = &self.modulus {
            write!(f, " modulus=")?;
            write_list(f, m)?;
        }
        if let Some(b) = &self.basis {
            write!(f, " basis=")?;
            write_list(f, b)?;
        }
        Ok(())
    }
}

/// Parses `[1,2,3]` or `1,2,3`.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad list entry `{}`", t.trim()))))
        .collect()
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut q, mut ell, mut modulus, mut basis) = (None, None, None, None);
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{token}`")))?;
            match key {
                "q" => q = Some(value.parse().map_err(|_| Error::Parse(format!("bad q `{value}`")))?),
                "ell" => ell = Some(value.parse().map_err(|_| Error::Parse(format!("bad ell `{value}`")))?),
                "modulus" => modulus = Some(parse_list::<u8>(value)?),
                "basis" => basis = Some(parse_list::<u32>(value)?.into_iter().map(Elem).collect()),
                _ => return Err(Error::Parse(format!("unknown field key `{key}`"))),
            }
        }
        Ok(FieldSpec {
            q: q.ok_or_else(|| Error::Parse("missing q".into()))?,
            ell: ell.ok_or_else(|| Error::Parse("missing ell".into()))?,
            modulus,
            basis,
        })
    }
}
