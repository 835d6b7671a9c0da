//! The automorphism group `Aut(X) ≅ A ⋊ G_m`.
//!
//! An element is a pair `(p, μ)` with `p ∈ C[x,z]` and `μ ≠ 0`, read as the
//! ring map `φ_p ∘ σ_μ`: first the torus `σ_μ` scales every variable by
//! `μ^{weight}`, then `φ_p` fixes `x, z` and sends `t ↦ t + f^l·p`,
//! `y ↦ y + H_p` with `H_p = −((t + f^l·p)^{α₃} − t^{α₃})/f^l`.
//!
//! Under this convention
//! `(p₁, μ₁)·(p₂, μ₂) = (p₁ + μ₁^K·σ_{μ₁}(p₂), μ₁μ₂)` with
//! `K = α₂(d·l·α₃ − 1)`. Composing as `σ_μ ∘ φ_p` instead gives an isomorphic
//! group with a different cocycle.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::coordring::{RingElement, Threefold};
use crate::geometry::{GeomError, SurfacePoint};
use crate::parse::{parse_poly, ParseError};
use crate::poly::{Bindings, Images, Monomial, MultiPoly, Var};
use crate::scalar::{CycloContext, Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    NonMonomialX,
    NonMonomialZ,
    TImageShape,
    HNotDivisible,
    InconsistentMu,
    YImageMismatch,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::NonMonomialX => "image of x is not a monomial c*x",
            Reason::NonMonomialZ => "image of z is not a monomial c*z",
            Reason::TImageShape => "image of t is not c*t + h(x,z)",
            Reason::HNotDivisible => "f^l ∤ h",
            Reason::InconsistentMu => "inconsistent mu powers",
            Reason::YImageMismatch => "y-image mismatch",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("automorphisms belong to different threefolds")]
    ParamMismatch,
    #[error("mu must be nonzero")]
    ZeroMu,
    #[error("p must be a polynomial in x and z")]
    InvalidP,
    #[error("not an automorphism of X: {0}")]
    NotAnAutomorphismOfX(Reason),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Images of the four generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionData {
    pub x: MultiPoly,
    pub y: MultiPoly,
    pub z: MultiPoly,
    pub t: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImagesError {
    #[error("missing image for {0}")]
    Missing(Var),
    #[error("malformed line {0:?}; expected <var>=<poly>")]
    Malformed(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl SubstitutionData {
    pub fn identity() -> Self {
        SubstitutionData {
            x: Var::X.into(),
            y: Var::Y.into(),
            z: Var::Z.into(),
            t: Var::T.into(),
        }
    }

    pub fn get(&self, v: Var) -> &MultiPoly {
        match v {
            Var::X => &self.x,
            Var::Y => &self.y,
            Var::Z => &self.z,
            Var::T => &self.t,
        }
    }

    pub fn to_images(&self) -> Images {
        Var::ALL.into_iter().map(|v| (v, self.get(v).clone())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x": self.x.to_string(),
            "y": self.y.to_string(),
            "z": self.z.to_string(),
            "t": self.t.to_string(),
        })
    }

    /// Parses four `var=poly` lines (any order, blank lines ignored).
    pub fn from_lines(
        text: &str,
        cyclo: Option<&std::sync::Arc<CycloContext>>,
    ) -> Result<Self, ImagesError> {
        let mut found: [Option<MultiPoly>; 4] = Default::default();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (name, rhs) = line
                .split_once('=')
                .ok_or_else(|| ImagesError::Malformed(line.to_string()))?;
            let v = Var::from_name(name.trim())
                .ok_or_else(|| ImagesError::Malformed(line.to_string()))?;
            found[v.index()] = Some(parse_poly(rhs, cyclo)?);
        }
        let [x, y, z, t] = found;
        Ok(SubstitutionData {
            x: x.ok_or(ImagesError::Missing(Var::X))?,
            y: y.ok_or(ImagesError::Missing(Var::Y))?,
            z: z.ok_or(ImagesError::Missing(Var::Z))?,
            t: t.ok_or(ImagesError::Missing(Var::T))?,
        })
    }
}

impl fmt::Display for SubstitutionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in Var::ALL.into_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v} -> {}", self.get(v))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    space: Threefold,
    p: MultiPoly,
    mu: Scalar,
}

fn check_contexts<'a>(scalars: impl IntoIterator<Item = &'a Scalar>) -> Result<(), AutError> {
    let mut seen: Option<u32> = None;
    for s in scalars {
        if let Some(ctx) = s.context() {
            match seen {
                Some(n) if n != ctx.order() => {
                    return Err(ScalarError::MixedCyclotomicOrders(n, ctx.order()).into())
                }
                _ => seen = Some(ctx.order()),
            }
        }
    }
    Ok(())
}

impl Automorphism {
    pub fn new(space: &Threefold, p: MultiPoly, mu: Scalar) -> Result<Self, AutError> {
        if mu.is_zero() {
            return Err(AutError::ZeroMu);
        }
        if !p.only_vars(&[Var::X, Var::Z]) {
            return Err(AutError::InvalidP);
        }
        check_contexts(p.terms().map(|(_, c)| c).chain([&mu]))?;
        Ok(Automorphism {
            space: space.clone(),
            p,
            mu,
        })
    }

    pub fn identity(space: &Threefold) -> Self {
        Automorphism {
            space: space.clone(),
            p: MultiPoly::zero(),
            mu: Scalar::one(),
        }
    }

    /// The torus element `(0, μ)`.
    pub fn torus(space: &Threefold, mu: Scalar) -> Result<Self, AutError> {
        Automorphism::new(space, MultiPoly::zero(), mu)
    }

    /// The unique extension `(p, 1)` of `t ↦ t + f^l·p` from `C[x,z,t]` to `C[X]`.
    pub fn lift_from_a(space: &Threefold, p: MultiPoly) -> Result<Self, AutError> {
        Automorphism::new(space, p, Scalar::one())
    }

    pub fn space(&self) -> &Threefold {
        &self.space
    }

    pub fn p(&self) -> &MultiPoly {
        &self.p
    }

    pub fn mu(&self) -> &Scalar {
        &self.mu
    }

    /// `H_p = −((t + f^l·p)^{α₃} − t^{α₃})/f^l`, a polynomial in `x, z, t`.
    pub fn y_correction(&self) -> MultiPoly {
        let a3 = self.space.params().a3;
        let t = MultiPoly::var(Var::T);
        let shifted = &t + &(self.space.f_l() * &self.p);
        let num = shifted.pow(a3) - t.pow(a3);
        -num.exact_div(self.space.f_l())
            .expect("binomial expansion is divisible by f^l")
    }

    pub fn generator_images(&self) -> SubstitutionData {
        let w = self.space.weights();
        let scale = |v: Var| self.mu.pow(w.of(v)).expect("mu is nonzero");
        let x = MultiPoly::var(Var::X);
        let z = MultiPoly::var(Var::Z);
        let t = MultiPoly::var(Var::T) + self.space.f_l() * &self.p;
        let y = MultiPoly::var(Var::Y) + self.y_correction();
        SubstitutionData {
            x: x.scale(&scale(Var::X)),
            y: y.scale(&scale(Var::Y)),
            z: z.scale(&scale(Var::Z)),
            t: t.scale(&scale(Var::T)),
        }
    }

    /// `self ∘ other` as ring maps: `(self·other)(g) = self(other(g))`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism, AutError> {
        if self.space != other.space {
            return Err(AutError::ParamMismatch);
        }
        check_contexts(
            self.p
                .terms()
                .chain(other.p.terms())
                .map(|(_, c)| c)
                .chain([&self.mu, &other.mu]),
        )?;
        let k = self.space.params().cocycle_exponent();
        let twisted = other
            .p
            .torus_act(&self.mu, &self.space.weights())
            .scale(&self.mu.pow(k)?);
        Ok(Automorphism {
            space: self.space.clone(),
            p: &self.p + &twisted,
            mu: &self.mu * &other.mu,
        })
    }

    pub fn inverse(&self) -> Automorphism {
        let mu_inv = self.mu.inv().expect("mu is nonzero");
        let k = self.space.params().cocycle_exponent();
        let p = -self
            .p
            .torus_act(&mu_inv, &self.space.weights())
            .scale(&mu_inv.pow(k).expect("mu is nonzero"));
        Automorphism {
            space: self.space.clone(),
            p,
            mu: mu_inv,
        }
    }

    pub fn pow(&self, n: u32) -> Automorphism {
        (0..n).fold(Automorphism::identity(&self.space), |acc, _| {
            acc.compose(self).expect("same threefold")
        })
    }

    pub fn apply_poly(&self, g: &MultiPoly) -> RingElement {
        let images = self.generator_images().to_images();
        let sub = g.substitute(&images).expect("all four images present");
        self.space.normal_form(&sub)
    }

    pub fn apply(&self, g: &RingElement) -> RingElement {
        self.apply_poly(&g.to_poly())
    }

    /// Recovers `(p, μ)` from generator images, validating the shape
    /// `x ↦ c_x·x`, `z ↦ c_z·z`, `t ↦ c_t·t + h(x,z)` with `f^l | h`.
    ///
    /// `μ = c_t^u·c_z^v` where `u·α₂ + v·dα₃ = 1`.
    pub fn decompose(space: &Threefold, s: &SubstitutionData) -> Result<Automorphism, AutError> {
        let bad = AutError::NotAnAutomorphismOfX;
        let monomial_coeff = |img: &MultiPoly, v: Var| -> Option<Scalar> {
            match img.terms().collect::<Vec<_>>()[..] {
                [(m, c)] if *m == Monomial::var(v) => Some(c.clone()),
                _ => None,
            }
        };
        let cx = monomial_coeff(&s.x, Var::X).ok_or(bad(Reason::NonMonomialX))?;
        let cz = monomial_coeff(&s.z, Var::Z).ok_or(bad(Reason::NonMonomialZ))?;

        if s.t.contains_var(Var::Y) || s.t.degree_in(Var::T) != 1 {
            return Err(bad(Reason::TImageShape));
        }
        let parts = s.t.coefficients_in(Var::T);
        let (h, ct) = (&parts[0], parts[1].as_constant().ok_or(bad(Reason::TImageShape))?);
        let q = h.exact_div(space.f_l()).map_err(|_| bad(Reason::HNotDivisible))?;

        let params = space.params();
        let (d, _, a2, a3) = params.as_i64();
        let gcd = a2.extended_gcd(&(d * a3));
        debug_assert_eq!(gcd.gcd, 1);
        let mu = ct.pow(gcd.x)?.checked_mul(&cz.pow(gcd.y)?)?;

        let w = params.weights();
        let consistent = cx == mu.pow(w.of(Var::X))?
            && cz == mu.pow(w.of(Var::Z))?
            && ct == mu.pow(w.of(Var::T))?;
        if !consistent {
            return Err(bad(Reason::InconsistentMu));
        }

        let p = q.scale(&ct.inv()?);
        let candidate = Automorphism::new(space, p, mu)?;
        if !space.ring_eq(&candidate.generator_images().y, &s.y) {
            return Err(bad(Reason::YImageMismatch));
        }
        Ok(candidate)
    }

    /// Pullback action on points: evaluates the generator images at `pt`.
    /// Contravariant: `act(a∘b, pt) = act(b, act(a, pt))`.
    pub fn act_on_point(&self, pt: &SurfacePoint) -> Result<SurfacePoint, GeomError> {
        if pt.space() != &self.space {
            return Err(GeomError::ParamMismatch);
        }
        let images = self.generator_images();
        let bindings: Bindings = Var::ALL
            .into_iter()
            .zip(pt.coords().iter().cloned())
            .collect();
        let coord = |v: Var| {
            images
                .get(v)
                .evaluate(&bindings)
                .expect("point binds every variable")
        };
        SurfacePoint::new(
            &self.space,
            [coord(Var::X), coord(Var::Y), coord(Var::Z), coord(Var::T)],
        )
    }

    /// `{"p":"<poly in x,z>","mu":<scalar>}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "p": self.p.to_string(), "mu": self.mu.to_json() })
    }

    pub fn from_json(
        space: &Threefold,
        v: &serde_json::Value,
        cyclo: Option<&std::sync::Arc<CycloContext>>,
    ) -> Option<Automorphism> {
        let p = parse_poly(v.get("p")?.as_str()?, cyclo).ok()?;
        let mu = Scalar::from_json(v.get("mu")?)?;
        Automorphism::new(space, p, mu).ok()
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p, mu) = ({}, {})", self.p, self.mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, None).unwrap()
    }

    fn kr() -> Threefold {
        Threefold::make(3, 1, 2, 3).unwrap()
    }

    fn elem(pp: &str, mu: Scalar) -> Automorphism {
        Automorphism::new(&kr(), p(pp), mu).unwrap()
    }

    /// Images of `a∘b` by substituting `a`'s images into `b`'s.
    fn compose_by_substitution(a: &Automorphism, b: &Automorphism) -> SubstitutionData {
        let ia = a.generator_images().to_images();
        let ib = b.generator_images();
        let x = a.space();
        let go = |v: Var| x.normal_form(&ib.get(v).substitute(&ia).unwrap()).to_poly();
        SubstitutionData {
            x: go(Var::X),
            y: go(Var::Y),
            z: go(Var::Z),
            t: go(Var::T),
        }
    }

    #[test]
    fn images_examples() {
        let x = kr();
        assert_eq!(Automorphism::identity(&x).generator_images(), SubstitutionData::identity());
        let a = elem("1", Scalar::one());
        let im = a.generator_images();
        assert_eq!(im.t, p("t + x^3 + z^2"));
        assert_eq!(im.y, p("y - 3*t^2 - 3*t*(x^3+z^2) - (x^3+z^2)^2"));
        let a = elem("0", Scalar::from(2));
        let im = a.generator_images();
        assert_eq!(
            im,
            SubstitutionData {
                x: p("64*x"),
                y: p("1/4096*y"),
                z: p("512*z"),
                t: p("4*t"),
            }
        );
    }

    #[test]
    fn composition_examples() {
        let one = elem("1", Scalar::one());
        assert_eq!(one.compose(&one).unwrap(), elem("2", Scalar::one()));
        let torus = elem("0", Scalar::from(2));
        let c = torus.compose(&one).unwrap();
        assert_eq!(c, elem("65536", Scalar::from(2)));
        assert_eq!(kr().params().cocycle_exponent(), 16);
        assert_eq!(c.generator_images(), compose_by_substitution(&torus, &one));
        let c = one.compose(&torus).unwrap();
        assert_eq!(c, elem("1", Scalar::from(2)));
        assert_eq!(c.generator_images(), compose_by_substitution(&one, &torus));

        let other = Automorphism::identity(&Threefold::make(2, 1, 3, 4).unwrap());
        assert_eq!(one.compose(&other), Err(AutError::ParamMismatch));
    }

    #[test]
    fn substitution_oracle_with_nonconstant_p() {
        let a = elem("x*z - 2", Scalar::ratio(-1, 2));
        let b = elem("z^2 + 3*x", Scalar::from(2));
        let c = a.compose(&b).unwrap();
        assert_eq!(c.generator_images(), compose_by_substitution(&a, &b));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(elem("0", Scalar::from(2)).inverse(), elem("0", Scalar::ratio(1, 2)));
        assert_eq!(elem("1", Scalar::one()).inverse(), elem("-1", Scalar::one()));
        let a = elem("1", Scalar::from(2));
        let inv = a.inverse();
        assert_eq!(inv.p(), &MultiPoly::constant(Scalar::ratio(-1, 1 << 16)));
        assert_eq!(inv.mu(), &Scalar::ratio(1, 2));
        assert_eq!(a.compose(&inv).unwrap(), Automorphism::identity(&kr()));
        assert_eq!(inv.compose(&a).unwrap(), Automorphism::identity(&kr()));
    }

    #[test]
    fn apply_examples() {
        let x = kr();
        let f = x.f().clone();
        assert_eq!(elem("x*z + 5", Scalar::one()).apply_poly(&f).to_poly(), f);
        let scaled = elem("0", Scalar::from(2)).apply_poly(&f).to_poly();
        assert_eq!(scaled, f.scale(&Scalar::from(1 << 18)));
        assert!(elem("z - 1", Scalar::ratio(2, 3)).apply_poly(x.defining_poly()).is_zero());
    }

    #[test]
    fn decompose_examples() {
        let x = kr();
        let a = elem("x*z", Scalar::one());
        assert_eq!(Automorphism::decompose(&x, &a.generator_images()), Ok(a));

        let mut s = SubstitutionData::identity();
        s.t = p("t + x");
        assert_eq!(
            Automorphism::decompose(&x, &s),
            Err(AutError::NotAnAutomorphismOfX(Reason::HNotDivisible))
        );
        assert_eq!(Reason::HNotDivisible.to_string(), "f^l ∤ h");

        let a = elem("1", Scalar::from(2));
        let s = a.generator_images();
        assert_eq!(s.t.coeff(&Monomial::var(Var::T)), Scalar::from(4));
        assert_eq!(s.z.coeff(&Monomial::var(Var::Z)), Scalar::from(512));
        // Bézout 2u + 9v = 1: (5, −1) gives 4⁵/512 = 2, (−4, 1) gives 512/4⁴ = 2
        let b = 2i64.extended_gcd(&9);
        assert_eq!(2 * b.x + 9 * b.y, 1);
        assert_eq!(Automorphism::decompose(&x, &s), Ok(a));
    }

    #[test]
    fn decompose_rejections() {
        let x = kr();
        let reject = |s: &SubstitutionData, r: Reason| {
            assert_eq!(
                Automorphism::decompose(&x, s),
                Err(AutError::NotAnAutomorphismOfX(r))
            );
        };
        let mut s = SubstitutionData::identity();
        s.x = p("x + z");
        reject(&s, Reason::NonMonomialX);
        let mut s = SubstitutionData::identity();
        s.z = p("z^2");
        reject(&s, Reason::NonMonomialZ);
        let mut s = SubstitutionData::identity();
        s.t = p("t^2");
        reject(&s, Reason::TImageShape);
        let mut s = SubstitutionData::identity();
        s.t = p("x*t");
        reject(&s, Reason::TImageShape);
        let mut s = SubstitutionData::identity();
        s.x = p("2*x");
        reject(&s, Reason::InconsistentMu);
        let mut s = SubstitutionData::identity();
        s.y = p("y + 1");
        reject(&s, Reason::YImageMismatch);
    }

    #[test]
    fn lift_examples() {
        let x = kr();
        assert_eq!(
            Automorphism::lift_from_a(&x, MultiPoly::zero()).unwrap(),
            Automorphism::identity(&x)
        );
        let a = Automorphism::lift_from_a(&x, p("z")).unwrap();
        let f = x.f();
        let eq2 = -(p("x") + (p("t") + f * &p("z")).pow(3));
        assert!(x.ring_eq(&(&a.generator_images().y * f), &eq2));
        assert!(Automorphism::lift_from_a(&x, p("t")).is_err());
    }

    #[test]
    fn root_of_unity_torus_element() {
        let ctx = CycloContext::new(3).unwrap();
        let zeta = Scalar::zeta(&ctx);
        let a = Automorphism::torus(&kr(), zeta.pow(2).unwrap()).unwrap();
        let im = a.generator_images();
        assert_eq!(im.x, p("x"));
        assert_eq!(im.z, p("z"));
        assert_eq!(im.y, p("y"));
        assert_eq!(im.t, MultiPoly::var(Var::T).scale(&zeta));
        assert_ne!(a.pow(1), Automorphism::identity(&kr()));
        assert_ne!(a.pow(2), Automorphism::identity(&kr()));
        assert_eq!(a.pow(3), Automorphism::identity(&kr()));
    }

    #[test]
    fn json_round_trip() {
        let x = kr();
        let a = elem("1/2*x*z - 3", Scalar::ratio(-2, 3));
        let v = a.to_json();
        assert_eq!(v["p"], "1/2*x*z - 3");
        assert_eq!(Automorphism::from_json(&x, &v, None), Some(a));
        let lines = "x=64*x\ny = 1/4096*y\n\nz=512*z\nt=4*t";
        let s = SubstitutionData::from_lines(lines, None).unwrap();
        assert_eq!(s, elem("0", Scalar::from(2)).generator_images());
        assert_eq!(
            SubstitutionData::from_lines("x=x\ny=y\nz=z", None),
            Err(ImagesError::Missing(Var::T))
        );
    }
}
