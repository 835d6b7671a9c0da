//! Sparse multivariate polynomials over [`Scalar`] in the closed variable set
//! `{x, y, z, t}`.
//!
//! Terms are keyed by a four-slot exponent vector and kept in graded
//! lexicographic order with `x > y > z > t`; the last key is the leading
//! monomial used by division. Printing uses plain lexicographic order,
//! highest first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("no image given for variable {0}")]
    MissingImage(Var),
    #[error("no value bound for variable {0}")]
    MissingBinding(Var),
    #[error("polynomial is not quasi-homogeneous for the given weights")]
    NotHomogeneous,
    #[error("the zero polynomial has no weighted degree")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    T,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::Z, Var::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z", "t"][self.index()]
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponents of `x, y, z, t` in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; 4])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, when it exists.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(std::array::from_fn(|i| other.0[i] - self.0[i])))
    }

    pub fn weight(&self, w: &WeightVector) -> i64 {
        self.0.iter().zip(w.0.iter()).map(|(&e, &wi)| e as i64 * wi).sum()
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

/// Graded lexicographic, `x > y > z > t`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{v}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Integer weights of `x, y, z, t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightVector(pub [i64; 4]);

impl WeightVector {
    pub fn of(&self, v: Var) -> i64 {
        self.0[v.index()]
    }
}

/// Variable images for [`MultiPoly::substitute`].
pub type Images = BTreeMap<Var, MultiPoly>;

/// Variable bindings for [`MultiPoly::evaluate`].
pub type Bindings = BTreeMap<Var, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        MultiPoly::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::term(Monomial::var(v), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// True when every variable that occurs is in `allowed`.
    pub fn only_vars(&self, allowed: &[Var]) -> bool {
        Var::ALL
            .into_iter()
            .filter(|v| !allowed.contains(v))
            .all(|v| !self.contains_var(v))
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.contains_var(v)).collect()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(k, a)| (*k * *m, a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Multivariate division by a single divisor in graded lex order.
    ///
    /// Returns `(q, r)` with `self = q·b + r` where no monomial of `r` is
    /// divisible by the leading monomial of `b`. With one divisor this
    /// remainder is unique, so `r = 0` exactly when `b` divides `self`.
    pub fn div_rem(&self, b: &MultiPoly) -> Result<(MultiPoly, MultiPoly), PolyError> {
        let (lm, lc) = b.leading_term().ok_or(PolyError::DivisionByZeroPoly)?;
        let (lm, lc_inv) = (*lm, lc.inv().expect("leading coefficient is nonzero"));
        let mut p = self.clone();
        let mut q = MultiPoly::zero();
        let mut r = MultiPoly::zero();
        while let Some((m, c)) = p.terms.pop_last() {
            match lm.quotient_of(&m) {
                Some(shift) => {
                    let factor = &c * &lc_inv;
                    // the leading term cancels exactly; subtract the rest of b
                    for (bm, bc) in b.terms.iter().rev().skip(1) {
                        p.add_term(*bm * shift, -(bc * &factor));
                    }
                    q.add_term(shift, factor);
                }
                None => r.add_term(m, c),
            }
        }
        Ok((q, r))
    }

    pub fn exact_div(&self, b: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let (q, r) = self.div_rem(b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible)
        }
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e > 0).then(|| {
                let mut exps = m.0;
                exps[v.index()] -= 1;
                (Monomial(exps), c * &Scalar::from(e as i64))
            })
        }))
    }

    /// Simultaneous substitution of every occurring variable.
    pub fn substitute(&self, images: &Images) -> Result<MultiPoly, PolyError> {
        for v in self.vars() {
            if !images.contains_key(&v) {
                return Err(PolyError::MissingImage(v));
            }
        }
        let mut powers: BTreeMap<(Var, u32), MultiPoly> = BTreeMap::new();
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = MultiPoly::constant(c.clone());
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((v, e))
                    .or_insert_with(|| images[&v].pow(e));
                acc = &acc * &*pw;
            }
            out = out + acc;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &Bindings) -> Result<Scalar, PolyError> {
        for v in self.vars() {
            if !point.contains_key(&v) {
                return Err(PolyError::MissingBinding(v));
            }
        }
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut acc = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e > 0 {
                    acc = &acc * &point[&v].pow(e as i64).expect("nonnegative power");
                }
            }
            total = &total + &acc;
        }
        Ok(total)
    }

    /// Common weighted degree of all terms.
    pub fn weight_of(&self, w: &WeightVector) -> Result<i64, PolyError> {
        let mut weights = self.terms.keys().map(|m| m.weight(w));
        let first = weights.next().ok_or(PolyError::ZeroPolynomial)?;
        if weights.all(|k| k == first) {
            Ok(first)
        } else {
            Err(PolyError::NotHomogeneous)
        }
    }

    /// Applies the one-parameter torus with weights `w`: each term `c·m` goes
    /// to `c·λ^{w(m)}·m`.
    pub fn torus_act(&self, lambda: &Scalar, w: &WeightVector) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let factor = lambda.pow(m.weight(w)).expect("torus parameter is nonzero");
            (*m, c * &factor)
        }))
    }

    /// Coefficients of `v^0, v^1, …` as polynomials free of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(); self.degree_in(v) as usize + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (m, c) in &self.terms {
            let mut exps = m.0;
            let e = std::mem::take(&mut exps[v.index()]);
            out[e as usize].add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(v: Var, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (i, p) in coeffs.iter().enumerate() {
            let mut shift = Monomial::one();
            shift.0[v.index()] = i as u32;
            for (m, c) in &p.terms {
                out.add_term(*m * shift, c.clone());
            }
        }
        out
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl From<Scalar> for MultiPoly {
    fn from(c: Scalar) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::constant(Scalar::from(c))
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(*ma * *mb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// Lexicographic order, highest first: `x^3*y + x - t^3`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.lex_cmp(a.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative_rational();
            let abs = if neg { -c } else { c.clone() };
            f.write_str(match (i == 0, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            })?;
            let coeff = match &abs {
                Scalar::Rational(_) => abs.to_string(),
                Scalar::Cyclo(_) => format!("({abs})"),
            };
            if m.is_one() {
                f.write_str(&coeff)?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coeff}*{m}")?;
            }
        }
        Ok(())
    }
}
