//! Exact scalars: rationals and elements of a single cyclotomic field Q(ζ_n).
//!
//! Cyclotomic elements are stored as residues modulo Φ_n in the power basis
//! `1, ζ, …, ζ^{φ(n)-1}`. A result whose residue is a constant is demoted to
//! [`Scalar::Rational`], so every value has exactly one representation and
//! structural equality is field equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot mix elements of Q(zeta_{0}) and Q(zeta_{1})")]
    MixedCyclotomicOrders(u32, u32),
    #[error("cyclotomic order must be at least 1")]
    InvalidOrder,
}

/// Dense univariate polynomials over Q, lowest degree first, no trailing zeros.
mod dense {
    use num_rational::BigRational;
    use num_traits::Zero;

    pub type Dense = Vec<BigRational>;

    pub fn trim(mut a: Dense) -> Dense {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Dense {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        trim(out)
    }

    pub fn sub(a: &[BigRational], b: &[BigRational]) -> Dense {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                x - y
            })
            .collect();
        trim(out)
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn div_rem(a: &[BigRational], b: &[BigRational]) -> (Dense, Dense) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "dense division by zero");
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead = b.last().unwrap().clone();
        let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() / &lead;
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] -= &c * bi;
            }
            q[shift] = c;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
///
/// Computed recursively as `(ω^n − 1) / ∏_{d | n, d < n} Φ_d(ω)`.
pub fn cyclotomic_minimal_poly(n: u32) -> Vec<BigRational> {
    assert!(n >= 1, "cyclotomic order must be at least 1");
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    let mut den = vec![BigRational::one()];
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        den = dense::mul(&den, &cyclotomic_minimal_poly(d));
    }
    let (q, r) = dense::div_rem(&num, &den);
    debug_assert!(r.is_empty());
    q
}

/// The field Q(ζ_n) presented as Q[ω]/(Φ_n).
#[derive(Debug, Clone)]
pub struct CycloContext {
    n: u32,
    modulus: Vec<BigRational>,
}

impl PartialEq for CycloContext {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for CycloContext {}

impl CycloContext {
    pub fn new(n: u32) -> Result<Arc<Self>, ScalarError> {
        if n == 0 {
            return Err(ScalarError::InvalidOrder);
        }
        Ok(Arc::new(CycloContext {
            n,
            modulus: cyclotomic_minimal_poly(n),
        }))
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// φ(n), the dimension of the field over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn minimal_poly(&self) -> &[BigRational] {
        &self.modulus
    }

    fn reduce(&self, a: &[BigRational]) -> Vec<BigRational> {
        dense::div_rem(a, &self.modulus).1
    }

    /// Inverse of a nonzero residue by the extended Euclidean algorithm.
    fn invert(&self, a: &[BigRational]) -> Vec<BigRational> {
        // Invariant: s_i * a ≡ r_i (mod Φ_n).
        let (mut r0, mut r1) = (self.modulus.clone(), dense::trim(a.to_vec()));
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) =
            (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = dense::div_rem(&r0, &r1);
            let s = dense::sub(&s0, &dense::mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Φ_n is irreducible, so the gcd r0 is a nonzero constant.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let inv = s0.into_iter().map(|x| x / &c).collect::<Vec<_>>();
        self.reduce(&inv)
    }
}

/// An element of Q(ζ_n) that is not in Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    ctx: Arc<CycloContext>,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    /// Power-basis coefficients, always of length φ(n).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Cyclo(Cyclotomic),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Rational(v)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::Rational(BigRational::from_integer(v))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    /// `num/den`; panics when `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(num.into(), den.into()))
    }

    /// The generator ζ_n of the given context.
    pub fn zeta(ctx: &Arc<CycloContext>) -> Self {
        let mut coeffs = vec![BigRational::zero(); ctx.degree().max(1)];
        if ctx.degree() == 1 {
            // ζ_1 = 1, ζ_2 = -1
            return Scalar::Rational(-ctx.modulus[0].clone());
        }
        coeffs[1] = BigRational::one();
        Scalar::Cyclo(Cyclotomic {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    /// Builds a residue from arbitrary-length coefficients (reduced mod Φ_n).
    pub fn from_residue(ctx: &Arc<CycloContext>, coeffs: &[BigRational]) -> Self {
        Self::canonical(ctx, ctx.reduce(coeffs))
    }

    fn canonical(ctx: &Arc<CycloContext>, reduced: Vec<BigRational>) -> Self {
        let reduced = dense::trim(reduced);
        if reduced.len() <= 1 {
            return Scalar::Rational(reduced.into_iter().next().unwrap_or_else(BigRational::zero));
        }
        let mut coeffs = reduced;
        coeffs.resize(ctx.degree(), BigRational::zero());
        Scalar::Cyclo(Cyclotomic {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Cyclo(_) => None,
        }
    }

    pub fn context(&self) -> Option<&Arc<CycloContext>> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Cyclo(c) => Some(&c.ctx),
        }
    }

    /// Rationals are negative when below zero; cyclotomic values never are.
    /// Only used to choose a printed sign.
    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }

    fn residue(&self, ctx: &CycloContext) -> Vec<BigRational> {
        match self {
            Scalar::Rational(r) => {
                let mut v = vec![BigRational::zero(); ctx.degree()];
                v[0] = r.clone();
                v
            }
            Scalar::Cyclo(c) => c.coeffs.clone(),
        }
    }

    fn shared_context(&self, other: &Self) -> Result<Option<Arc<CycloContext>>, ScalarError> {
        match (self.context(), other.context()) {
            (None, None) => Ok(None),
            (Some(c), None) | (None, Some(c)) => Ok(Some(c.clone())),
            (Some(a), Some(b)) if a.n == b.n => Ok(Some(a.clone())),
            (Some(a), Some(b)) => Err(ScalarError::MixedCyclotomicOrders(a.n, b.n)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(match self.shared_context(other)? {
            None => Scalar::Rational(self.as_rational().unwrap() + other.as_rational().unwrap()),
            Some(ctx) => {
                let (a, b) = (self.residue(&ctx), other.residue(&ctx));
                let sum = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
                Self::canonical(&ctx, sum)
            }
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(match self.shared_context(other)? {
            None => Scalar::Rational(self.as_rational().unwrap() * other.as_rational().unwrap()),
            Some(ctx) => {
                if let Some(r) = self.as_rational() {
                    return Ok(other.scale(r));
                }
                if let Some(r) = other.as_rational() {
                    return Ok(self.scale(r));
                }
                let prod = dense::mul(&self.residue(&ctx), &other.residue(&ctx));
                Self::canonical(&ctx, ctx.reduce(&prod))
            }
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.shared_context(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self {
            _ if self.is_zero() => Err(ScalarError::DivisionByZero),
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Cyclo(c) => Ok(Self::canonical(&c.ctx, c.ctx.invert(&c.coeffs))),
        }
    }

    fn scale(&self, r: &BigRational) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * r),
            Scalar::Cyclo(c) => {
                Self::canonical(&c.ctx, c.coeffs.iter().map(|x| x * r).collect())
            }
        }
    }

    /// Square-and-multiply power; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> Result<Self, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Cyclo(c) => Scalar::Cyclo(Cyclotomic {
                ctx: c.ctx.clone(),
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// Operator forms panic on mixed cyclotomic orders and on division by zero;
// use the `checked_*` methods where either can legitimately occur.
macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

scalar_binop!(Add, add, checked_add);
scalar_binop!(Sub, sub, checked_sub);
scalar_binop!(Mul, mul, checked_mul);
scalar_binop!(Div, div, checked_div);

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Rationals print as `a` or `a/b`; cyclotomic values as a polynomial in
/// `zeta` with the highest power first, e.g. `-zeta - 1`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Cyclo(c) => {
                let mut first = true;
                for (k, coeff) in c.coeffs.iter().enumerate().rev() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let neg = coeff.is_negative();
                    let abs = coeff.abs();
                    match (first, neg) {
                        (true, true) => write!(f, "-")?,
                        (true, false) => {}
                        (false, true) => write!(f, " - ")?,
                        (false, false) => write!(f, " + ")?,
                    }
                    first = false;
                    let unit = abs.is_one();
                    if k == 0 || !unit {
                        fmt_rational(&abs, f)?;
                    }
                    if k > 0 {
                        if !unit {
                            write!(f, "*")?;
                        }
                        write!(f, "zeta")?;
                        if k > 1 {
                            write!(f, "^{k}")?;
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn json_integer(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(i) => serde_json::Value::from(i),
        None => serde_json::Value::String(v.to_string()),
    }
}

pub(crate) fn rational_json(r: &BigRational) -> serde_json::Value {
    serde_json::json!({ "num": json_integer(r.numer()), "den": json_integer(r.denom()) })
}

fn integer_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn rational_from_json(v: &serde_json::Value) -> Option<BigRational> {
    let num = integer_from_json(v.get("num")?)?;
    let den = integer_from_json(v.get("den")?)?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl Scalar {
    /// `{"num":..,"den":..}` or `{"cyclo":n,"coeffs":[{"num":..,"den":..}, ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Rational(r) => rational_json(r),
            Scalar::Cyclo(c) => serde_json::json!({
                "cyclo": c.ctx.n,
                "coeffs": c.coeffs.iter().map(rational_json).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Scalar> {
        if let Some(n) = v.get("cyclo") {
            let ctx = CycloContext::new(u32::try_from(n.as_u64()?).ok()?).ok()?;
            let coeffs = v
                .get("coeffs")?
                .as_array()?
                .iter()
                .map(rational_from_json)
                .collect::<Option<Vec<_>>>()?;
            if coeffs.len() != ctx.degree() {
                return None;
            }
            return Some(Scalar::from_residue(&ctx, &coeffs));
        }
        rational_from_json(v).map(Scalar::Rational)
    }
}
