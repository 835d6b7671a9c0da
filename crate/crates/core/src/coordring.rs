//! The coordinate ring `C[X] = C[x,y,z,t]/(P)` with
//! `P = x + y·f^l + t^{α₃}` and `f = x^d + z^{α₂}`.
//!
//! Elements are kept as `Σ p_i(x,z,t)·y^i` where every `p_i` with `i ≥ 1` is
//! reduced modulo `f^l` (no monomial divisible by the leading monomial of
//! `f^l`). Reduction uses the relation `y·f^l = −(x + t^{α₃})`. Because `P`
//! alone generates a principal ideal whose leading monomial under a
//! y-first order is `y·LM(f^l)`, this representative is unique.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::parse::{parse_poly, ParseError};
use crate::poly::{Images, Monomial, MultiPoly, Var, WeightVector};
use crate::scalar::CycloContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("unexpected variable {0}")]
    UnexpectedVariable(Var),
}

/// `(d, l, α₂, α₃)` with `d ≥ 2`, `l ≥ 1`, `2 ≤ α₂ ≤ α₃` and
/// `gcd(α₂, d) = gcd(α₂, α₃) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThreefoldParams {
    pub d: u32,
    pub l: u32,
    pub a2: u32,
    pub a3: u32,
}

impl ThreefoldParams {
    pub fn new(d: u32, l: u32, a2: u32, a3: u32) -> Result<Self, CoordError> {
        let fail = |msg: String| Err(CoordError::ConstraintViolation(msg));
        if d < 2 {
            return fail(format!("d >= 2 (got d = {d})"));
        }
        if l < 1 {
            return fail(format!("l >= 1 (got l = {l})"));
        }
        if a2 < 2 {
            return fail(format!("a2 >= 2 (got a2 = {a2})"));
        }
        if a2 > a3 {
            return fail(format!("a2 <= a3 (got a2 = {a2}, a3 = {a3})"));
        }
        if a2.gcd(&d) != 1 {
            return fail(format!("gcd(a2, d) = 1 (got {})", a2.gcd(&d)));
        }
        if a2.gcd(&a3) != 1 {
            return fail(format!("gcd(a2, a3) = 1 (got {})", a2.gcd(&a3)));
        }
        Ok(ThreefoldParams { d, l, a2, a3 })
    }

    /// Torus weights `(α₂α₃, −(dl−1)α₂α₃, dα₃, α₂)` of `(x, y, z, t)`.
    pub fn weights(&self) -> WeightVector {
        let (d, l, a2, a3) = self.as_i64();
        WeightVector([a2 * a3, -(d * l - 1) * a2 * a3, d * a3, a2])
    }

    /// Exponent `K = α₂(d·l·α₃ − 1)` in the twisted composition law.
    pub fn cocycle_exponent(&self) -> i64 {
        let (d, l, a2, a3) = self.as_i64();
        a2 * (d * l * a3 - 1)
    }

    pub(crate) fn as_i64(&self) -> (i64, i64, i64, i64) {
        (self.d as i64, self.l as i64, self.a2 as i64, self.a3 as i64)
    }
}

impl fmt::Display for ThreefoldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d, l, a2, a3) = ({}, {}, {}, {})", self.d, self.l, self.a2, self.a3)
    }
}

#[derive(Debug)]
struct Inner {
    params: ThreefoldParams,
    f: MultiPoly,
    f_l: MultiPoly,
    f_l_lead: Monomial,
    x_plus_t: MultiPoly,
    relation: MultiPoly,
}

/// A validated threefold together with its derived polynomials. Cheap to
/// clone; equality is equality of parameters.
#[derive(Debug, Clone)]
pub struct Threefold(Arc<Inner>);

impl PartialEq for Threefold {
    fn eq(&self, other: &Self) -> bool {
        self.0.params == other.0.params
    }
}

impl Eq for Threefold {}

/// Rewrite-position selection for [`Threefold::normal_form_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    HighestFirst,
    LowestFirst,
}

/// `Q = a·f^l + b·(x + t^{α₃})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ICertificate {
    pub a: MultiPoly,
    pub b: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    params: ThreefoldParams,
    coeffs: Vec<MultiPoly>,
}

impl Threefold {
    pub fn new(params: ThreefoldParams) -> Self {
        let (x, z, t) = (MultiPoly::var(Var::X), MultiPoly::var(Var::Z), MultiPoly::var(Var::T));
        let f = x.pow(params.d) + z.pow(params.a2);
        let f_l = f.pow(params.l);
        let f_l_lead = *f_l.leading_term().expect("f^l is nonzero").0;
        let x_plus_t = &x + &t.pow(params.a3);
        let relation = &x_plus_t + &(MultiPoly::var(Var::Y) * &f_l);
        Threefold(Arc::new(Inner {
            params,
            f,
            f_l,
            f_l_lead,
            x_plus_t,
            relation,
        }))
    }

    /// Validates `(d, l, α₂, α₃)` and builds the derived data.
    pub fn make(d: u32, l: u32, a2: u32, a3: u32) -> Result<Self, CoordError> {
        ThreefoldParams::new(d, l, a2, a3).map(Threefold::new)
    }

    pub fn params(&self) -> ThreefoldParams {
        self.0.params
    }

    pub fn weights(&self) -> WeightVector {
        self.0.params.weights()
    }

    /// `f = x^d + z^{α₂}`.
    pub fn f(&self) -> &MultiPoly {
        &self.0.f
    }

    pub fn f_l(&self) -> &MultiPoly {
        &self.0.f_l
    }

    /// `x + t^{α₃}`, the second generator of `I`.
    pub fn x_plus_t(&self) -> &MultiPoly {
        &self.0.x_plus_t
    }

    /// `P = x + y·f^l + t^{α₃}`, fully expanded.
    pub fn defining_poly(&self) -> &MultiPoly {
        &self.0.relation
    }

    fn reducible(&self, p: &MultiPoly) -> bool {
        p.terms().any(|(m, _)| self.0.f_l_lead.divides(m))
    }

    /// Moves the `f^l`-multiple of `coeffs[i]` down to `coeffs[i-1]`.
    fn rewrite_at(&self, coeffs: &mut [MultiPoly], i: usize) {
        let (q, r) = coeffs[i].div_rem(&self.0.f_l).expect("f^l is nonzero");
        coeffs[i] = r;
        coeffs[i - 1] = &coeffs[i - 1] - &(q * &self.0.x_plus_t);
    }

    pub fn normal_form(&self, g: &MultiPoly) -> RingElement {
        self.normal_form_with(g, Strategy::HighestFirst)
    }

    pub fn normal_form_with(&self, g: &MultiPoly, strategy: Strategy) -> RingElement {
        let mut coeffs = g.coefficients_in(Var::Y);
        match strategy {
            Strategy::HighestFirst => {
                for i in (1..coeffs.len()).rev() {
                    self.rewrite_at(&mut coeffs, i);
                }
            }
            Strategy::LowestFirst => {
                while let Some(i) = (1..coeffs.len()).find(|&i| self.reducible(&coeffs[i])) {
                    self.rewrite_at(&mut coeffs, i);
                }
            }
        }
        while coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        RingElement {
            params: self.params(),
            coeffs,
        }
    }

    /// Equality in `C[X]`: `g − h ∈ (P)`.
    pub fn ring_eq(&self, g: &MultiPoly, h: &MultiPoly) -> bool {
        self.normal_form(&(g - h)).is_zero()
    }

    /// Decides `Q ∈ I = (f^l, x + t^{α₃}) ⊂ C[x,z,t]`.
    ///
    /// Modulo `x + t^{α₃}` the ring is `C[z,t]` via `x ↦ −t^{α₃}`, so `Q ∈ I`
    /// iff the image of `Q` is divisible by the image of `f^l`. The
    /// certificate is rebuilt from that quotient.
    pub fn ideal_i_membership(&self, q: &MultiPoly) -> Result<Option<ICertificate>, CoordError> {
        if q.contains_var(Var::Y) {
            return Err(CoordError::UnexpectedVariable(Var::Y));
        }
        let to_zt: Images = [
            (Var::X, -MultiPoly::var(Var::T).pow(self.0.params.a3)),
            (Var::Z, MultiPoly::var(Var::Z)),
            (Var::T, MultiPoly::var(Var::T)),
        ]
        .into_iter()
        .collect();
        let q_bar = q.substitute(&to_zt).expect("all images given");
        let f_l_bar = self.0.f_l.substitute(&to_zt).expect("all images given");
        let Ok(a) = q_bar.exact_div(&f_l_bar) else {
            return Ok(None);
        };
        let rest = q - &(&a * &self.0.f_l);
        let b = rest
            .exact_div(&self.0.x_plus_t)
            .expect("rest vanishes on x = -t^a3");
        Ok(Some(ICertificate { a, b }))
    }

    /// Decides `g ∈ J = f^l·C[X]`, returning `h` with `g = f^l·h` in `C[X]`.
    ///
    /// `C[X]/J = C[x,y,z,t]/(f^l, x + t^{α₃})`, so `g ∈ J` iff every
    /// y-coefficient lies in `I`. With `p_i = a_i·f^l + b_i·(x + t^{α₃})` and
    /// `x + t^{α₃} = −y·f^l`, the witness is `h = Σ (a_i − b_{i−1})·y^i`.
    pub fn ideal_j_membership(&self, g: &MultiPoly) -> Option<RingElement> {
        let nf = self.normal_form(g);
        let mut h = vec![MultiPoly::zero(); nf.coeffs.len() + 1];
        for (i, p) in nf.coeffs.iter().enumerate() {
            let cert = self.ideal_i_membership(p).expect("coefficients are free of y")?;
            h[i] = &h[i] + &cert.a;
            h[i + 1] = &h[i + 1] - &cert.b;
        }
        Some(self.normal_form(&MultiPoly::from_coefficients_in(Var::Y, &h)))
    }

    /// Parses a poly-string and normalizes it.
    pub fn parse_element(
        &self,
        src: &str,
        cyclo: Option<&Arc<CycloContext>>,
    ) -> Result<RingElement, ParseError> {
        parse_poly(src, cyclo).map(|g| self.normal_form(&g))
    }

    /// Reads `{"y_coeffs":[<poly-string>, ...]}`.
    pub fn element_from_json(
        &self,
        v: &serde_json::Value,
        cyclo: Option<&Arc<CycloContext>>,
    ) -> Option<RingElement> {
        let coeffs = v
            .get("y_coeffs")?
            .as_array()?
            .iter()
            .map(|c| parse_poly(c.as_str()?, cyclo).ok())
            .collect::<Option<Vec<_>>>()?;
        if coeffs.iter().any(|c| c.contains_var(Var::Y)) {
            return None;
        }
        Some(self.normal_form(&MultiPoly::from_coefficients_in(Var::Y, &coeffs)))
    }
}

impl RingElement {
    pub fn params(&self) -> ThreefoldParams {
        self.params
    }

    /// `p_0, p_1, …`: the coefficient of `y^i` at index `i`; empty for zero.
    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn y_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The canonical polynomial representative `Σ p_i·y^i`.
    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_coefficients_in(Var::Y, &self.coeffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "y_coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, None).unwrap()
    }

    fn kr() -> Threefold {
        Threefold::make(3, 1, 2, 3).unwrap()
    }

    #[test]
    fn parameter_validation() {
        let a = Threefold::make(3, 1, 2, 3).unwrap();
        assert_eq!(a.weights(), WeightVector([6, -12, 9, 2]));
        let b = Threefold::make(2, 2, 3, 4).unwrap();
        assert_eq!(b.weights(), WeightVector([12, -36, 8, 3]));
        let err = Threefold::make(2, 1, 2, 3).unwrap_err();
        assert!(err.to_string().contains("gcd(a2, d)"), "{err}");
        assert!(Threefold::make(1, 1, 2, 3).is_err());
        assert!(Threefold::make(3, 0, 2, 3).is_err());
        assert!(Threefold::make(3, 1, 5, 3).is_err());
        assert!(Threefold::make(3, 1, 2, 4).unwrap_err().to_string().contains("gcd(a2, a3)"));
    }

    #[test]
    fn defining_polynomials() {
        assert_eq!(kr().defining_poly(), &p("x + x^3*y + y*z^2 + t^3"));
        let b = Threefold::make(2, 2, 3, 4).unwrap();
        assert_eq!(b.defining_poly(), &p("x + y*(x^2+z^3)^2 + t^4"));
        for tf in [kr(), b, Threefold::make(2, 1, 3, 4).unwrap()] {
            let (_, _, a2, a3) = tf.params().as_i64();
            assert_eq!(tf.defining_poly().weight_of(&tf.weights()), Ok(a2 * a3));
        }
    }

    #[test]
    fn normal_form_examples() {
        let x = kr();
        assert!(x.normal_form(x.defining_poly()).is_zero());
        let nf = x.normal_form(&p("y*(x^3+z^2)"));
        assert_eq!(nf.coeffs(), &[p("-x - t^3")]);
        assert_eq!(nf.to_string(), "-x - t^3");
        let nf = x.normal_form(&p("y*(x^3+z^2)^2"));
        assert_eq!(nf.to_poly(), p("-(x+t^3)*(x^3+z^2)"));
    }

    #[test]
    fn spec_condition_is_not_canonical_but_ours_is() {
        // y·(f + 1) and y − (x + t³) are equal in C[X]; both have a
        // y-coefficient not divisible by f, but only one is reduced mod f.
        let x = kr();
        let a = p("y*(x^3+z^2+1)");
        let b = p("y - x - t^3");
        assert!(x.ring_eq(&a, &b));
        assert_eq!(x.normal_form(&a), x.normal_form(&b));
    }

    #[test]
    fn equality_examples() {
        let x = kr();
        assert!(x.ring_eq(&p("y*(x^3+z^2)"), &p("-(x+t^3)")));
        assert!(!x.ring_eq(&p("x"), &p("z")));
        let g = x.defining_poly() * &p("y^2 + t");
        assert!(x.ring_eq(&g, &MultiPoly::zero()));
    }

    #[test]
    fn strategies_agree() {
        let x = kr();
        let g = p("y^3*(x^3+z^2)^2*t + y^2*(x^3+z^2+x*z) + y*x^4 + 7");
        assert_eq!(
            x.normal_form_with(&g, Strategy::HighestFirst),
            x.normal_form_with(&g, Strategy::LowestFirst)
        );
    }

    #[test]
    fn ideal_i_examples() {
        let x = kr();
        let cert = x.ideal_i_membership(&p("x + t^3")).unwrap().unwrap();
        assert_eq!(cert, ICertificate { a: MultiPoly::zero(), b: MultiPoly::one() });
        let cert = x.ideal_i_membership(&p("x^3 + z^2")).unwrap().unwrap();
        assert_eq!(cert, ICertificate { a: MultiPoly::one(), b: MultiPoly::zero() });
        assert_eq!(x.ideal_i_membership(&p("x")), Ok(None));
        assert_eq!(
            x.ideal_i_membership(&p("y")),
            Err(CoordError::UnexpectedVariable(Var::Y))
        );
        let q = p("(x^2*z + 3)*(x^3+z^2) - t*(x + t^3)");
        let cert = x.ideal_i_membership(&q).unwrap().unwrap();
        assert_eq!(&cert.a * x.f_l() + &cert.b * x.x_plus_t(), q);
    }

    #[test]
    fn ideal_j_examples() {
        let x = kr();
        let h = x.ideal_j_membership(x.f_l()).unwrap();
        assert_eq!(h.to_poly(), MultiPoly::one());
        let h = x.ideal_j_membership(&p("x + t^3")).unwrap();
        assert_eq!(h.to_poly(), p("-y"));
        assert!(x.ideal_j_membership(&p("x")).is_none());
        let g = p("y^2*t + x*z");
        let target = x.f_l() * &g;
        let h = x.ideal_j_membership(&target).unwrap();
        assert!(x.ring_eq(&(x.f_l() * &h.to_poly()), &target));
    }

    #[test]
    fn json_round_trip() {
        let x = kr();
        let e = x.normal_form(&p("y^2*t + 1/2*x*y - z"));
        let v = e.to_json();
        assert_eq!(v["y_coeffs"][0], "-z");
        assert_eq!(x.element_from_json(&v, None), Some(e));
        let one = x.normal_form(&MultiPoly::constant(Scalar::one()));
        assert_eq!(one.to_json().to_string(), r#"{"y_coeffs":["1"]}"#);
    }
}
