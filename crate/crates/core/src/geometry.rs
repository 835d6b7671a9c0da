//! Points of `X`, fibers of the projection `π(x,y,z,t) = (x,z)`, and the
//! orbit classification.
//!
//! The plane `(x₀, z₀)` splits into the origin and the torus-stable curves
//! `C_{α,β} = {α·x₀^d + β·z₀^{α₂} = 0} ∖ (0,0)`; the cusp `f = 0` is
//! `C_{1,1}`. Over `f = 0` the relation reads `x = −t^{α₃}`.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::coordring::{Threefold, ThreefoldParams};
use crate::poly::{Bindings, Var};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("point does not lie on X (relation evaluates to {0})")]
    NotOnX(Scalar),
    #[error("points or maps belong to different threefolds")]
    ParamMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePoint {
    space: Threefold,
    coords: [Scalar; 4],
}

impl SurfacePoint {
    /// Validates `P(x, y, z, t) = 0` exactly.
    pub fn new(space: &Threefold, coords: [Scalar; 4]) -> Result<Self, GeomError> {
        let bindings: Bindings = Var::ALL.into_iter().zip(coords.iter().cloned()).collect();
        let value = space
            .defining_poly()
            .evaluate(&bindings)
            .expect("all coordinates bound");
        if !value.is_zero() {
            return Err(GeomError::NotOnX(value));
        }
        Ok(SurfacePoint {
            space: space.clone(),
            coords,
        })
    }

    pub fn space(&self) -> &Threefold {
        &self.space
    }

    /// `[x, y, z, t]`.
    pub fn coords(&self) -> &[Scalar; 4] {
        &self.coords
    }

    pub fn coord(&self, v: Var) -> &Scalar {
        &self.coords[v.index()]
    }

    /// `f₀ = x^d + z^{α₂}` at this point.
    pub fn f0(&self) -> Scalar {
        f0(&self.space.params(), self.coord(Var::X), self.coord(Var::Z))
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z, t] = &self.coords;
        write!(f, "({x}, {y}, {z}, {t})")
    }
}

fn f0(params: &ThreefoldParams, x0: &Scalar, z0: &Scalar) -> Scalar {
    let xd = x0.pow(params.d as i64).expect("nonnegative power");
    let za = z0.pow(params.a2 as i64).expect("nonnegative power");
    &xd + &za
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberType {
    /// `π⁻¹(x₀, z₀) ≅ A¹`.
    Line,
    /// `π⁻¹(x₀, z₀)` is a disjoint union of `α₃` lines.
    MultiLine(u32),
}

impl FiberType {
    pub fn count(&self) -> u32 {
        match self {
            FiberType::Line => 1,
            FiberType::MultiLine(n) => *n,
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::Line => f.write_str("Line 1"),
            FiberType::MultiLine(n) => write!(f, "MultiLine {n}"),
        }
    }
}

/// A line when `f₀ ≠ 0` or `(x₀, z₀) = (0, 0)`; otherwise `x₀ + t^{α₃} = 0`
/// has `α₃` distinct roots and `y` is free on each.
pub fn fiber_type(space: &Threefold, x0: &Scalar, z0: &Scalar) -> FiberType {
    let params = space.params();
    if !f0(&params, x0, z0).is_zero() || (x0.is_zero() && z0.is_zero()) {
        FiberType::Line
    } else {
        FiberType::MultiLine(params.a3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitClass {
    /// The fixed point `(0,0,0,0)`.
    Origin,
    /// `{x = z = t = 0, y ≠ 0}`.
    PuncturedLine,
    /// `π⁻¹(C_{α,β})` with `[α:β] ≠ [1:1]`; key normalized so its first
    /// nonzero entry is 1.
    BigOrbit([Scalar; 2]),
    /// A point over the cusp `f = 0`, keyed by the torus invariant
    /// `v = y·t^{(dl−1)α₃}`.
    CuspFamily(Scalar),
}

impl OrbitClass {
    pub fn tag(&self) -> &'static str {
        match self {
            OrbitClass::Origin => "Origin",
            OrbitClass::PuncturedLine => "PuncturedLine",
            OrbitClass::BigOrbit(_) => "BigOrbit",
            OrbitClass::CuspFamily(_) => "CuspFamily",
        }
    }

    /// `{"tag":"..","key":..}`; the key is omitted for the two keyless tags.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            OrbitClass::Origin | OrbitClass::PuncturedLine => {
                serde_json::json!({ "tag": self.tag() })
            }
            OrbitClass::BigOrbit([a, b]) => {
                serde_json::json!({ "tag": self.tag(), "key": [a.to_json(), b.to_json()] })
            }
            OrbitClass::CuspFamily(v) => {
                serde_json::json!({ "tag": self.tag(), "key": v.to_json() })
            }
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitClass::Origin | OrbitClass::PuncturedLine => f.write_str(self.tag()),
            OrbitClass::BigOrbit([a, b]) => write!(f, "BigOrbit [{a} : {b}]"),
            OrbitClass::CuspFamily(v) => write!(f, "CuspFamily {v}"),
        }
    }
}

fn normalize_projective(a: Scalar, b: Scalar) -> [Scalar; 2] {
    if a.is_zero() {
        [Scalar::zero(), Scalar::one()]
    } else {
        let ratio = &b / &a;
        [Scalar::one(), ratio]
    }
}

pub fn orbit_classify(pt: &SurfacePoint) -> OrbitClass {
    let params = pt.space().params();
    let [x, y, z, t] = pt.coords();
    if x.is_zero() && z.is_zero() && t.is_zero() {
        return if y.is_zero() {
            OrbitClass::Origin
        } else {
            OrbitClass::PuncturedLine
        };
    }
    if pt.f0().is_zero() {
        let (d, l, _, a3) = params.as_i64();
        let v = y * &t.pow((d * l - 1) * a3).expect("nonnegative power");
        return OrbitClass::CuspFamily(v);
    }
    let zpow = z.pow(params.a2 as i64).expect("nonnegative power");
    let xpow = x.pow(params.d as i64).expect("nonnegative power");
    OrbitClass::BigOrbit(normalize_projective(zpow, -xpow))
}

/// Orbit equality over the algebraic closure.
///
/// Points with the same tag and, for `BigOrbit`, the same key lie in one
/// orbit. Every point over the cusp is in a single orbit: the torus is
/// transitive on the punctured cusp curve in `(z, t)` and, since `t ≠ 0`
/// there, `A` moves `y` by `−α₃t^{α₃−1}·p(x₀, z₀)`, which is arbitrary. The
/// `CuspFamily` key therefore only separates torus orbits and is ignored here.
pub fn same_orbit(p1: &SurfacePoint, p2: &SurfacePoint) -> Result<bool, GeomError> {
    if p1.space() != p2.space() {
        return Err(GeomError::ParamMismatch);
    }
    Ok(match (orbit_classify(p1), orbit_classify(p2)) {
        (OrbitClass::BigOrbit(a), OrbitClass::BigOrbit(b)) => a == b,
        (a, b) => a.tag() == b.tag(),
    })
}

/// Rational point on the cusp fiber for the parameter `r ≠ 0`:
/// `t = r^{α₂}`, `x = −t^{α₃}`, `z = c·r^{dα₃}` with `c = 1` for odd `d`
/// and `c = −1` for even `d`, and any `y`.
pub fn cusp_point(space: &Threefold, r: &Scalar, y: Scalar) -> SurfacePoint {
    let params = space.params();
    let (d, _, a2, a3) = params.as_i64();
    let t = r.pow(a2).expect("nonnegative power");
    let x = -t.pow(a3).expect("nonnegative power");
    let sign = if d % 2 == 0 { Scalar::from(-1) } else { Scalar::one() };
    let z = &sign * &r.pow(d * a3).expect("nonnegative power");
    SurfacePoint::new(space, [x, y, z, t]).expect("cusp parametrization satisfies the relation")
}

/// Point with `f₀ ≠ 0`: `y` is solved from the relation.
pub fn point_over(space: &Threefold, x: Scalar, z: Scalar, t: Scalar) -> Option<SurfacePoint> {
    let params = space.params();
    let f = f0(&params, &x, &z);
    if f.is_zero() {
        return None;
    }
    let fl = f.pow(params.l as i64).ok()?;
    let num = &x + &t.pow(params.a3 as i64).ok()?;
    let y = -(&num / &fl);
    SurfacePoint::new(space, [x, y, z, t]).ok()
}

/// Whether a rational is an exact `k`-th power; used by root enumeration.
pub fn rational_root(q: &Scalar, k: u32) -> Option<Scalar> {
    let r = q.as_rational()?;
    if r.is_zero() {
        return Some(Scalar::zero());
    }
    let root = |n: &num_bigint::BigInt| -> Option<num_bigint::BigInt> {
        let neg = n.sign() == num_bigint::Sign::Minus;
        if neg && k.is_multiple_of(2) {
            return None;
        }
        let mag = n.magnitude().nth_root(k);
        let cand = num_bigint::BigInt::from(mag);
        let cand = if neg { -cand } else { cand };
        (cand.pow(k) == *n).then_some(cand)
    };
    let num = root(r.numer())?;
    let den = root(r.denom())?;
    Some(Scalar::Rational(num_rational::BigRational::new(num, den)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CycloContext;

    fn kr() -> Threefold {
        Threefold::make(3, 1, 2, 3).unwrap()
    }

    fn pt(c: [i64; 4]) -> Result<SurfacePoint, GeomError> {
        SurfacePoint::new(&kr(), c.map(Scalar::from))
    }

    #[test]
    fn point_validation() {
        assert!(pt([0, 0, 0, 0]).is_ok());
        assert!(pt([1, -1, 1, 1]).is_ok());
        assert_eq!(pt([1, 1, 1, 1]), Err(GeomError::NotOnX(Scalar::from(4))));
    }

    #[test]
    fn fibers() {
        let x = kr();
        let s = Scalar::from;
        assert_eq!(fiber_type(&x, &s(1), &s(1)), FiberType::Line);
        assert_eq!(fiber_type(&x, &s(-1), &s(1)), FiberType::MultiLine(3));
        assert_eq!(fiber_type(&x, &s(0), &s(0)), FiberType::Line);
        assert_eq!(fiber_type(&x, &s(-1), &s(1)).count(), 3);
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(orbit_classify(&pt([0, 0, 0, 0]).unwrap()), OrbitClass::Origin);
        assert_eq!(orbit_classify(&pt([0, 5, 0, 0]).unwrap()), OrbitClass::PuncturedLine);
        assert_eq!(
            orbit_classify(&pt([1, -1, 1, 1]).unwrap()),
            OrbitClass::BigOrbit([Scalar::one(), Scalar::from(-1)])
        );
        assert_eq!(
            orbit_classify(&pt([-1, 7, 1, 1]).unwrap()),
            OrbitClass::CuspFamily(Scalar::from(7))
        );
    }

    #[test]
    fn axis_points() {
        let x = kr();
        let s = Scalar::from;
        let on_z_axis = point_over(&x, s(0), s(2), s(1)).unwrap();
        assert_eq!(
            orbit_classify(&on_z_axis),
            OrbitClass::BigOrbit([s(1), s(0)])
        );
        let on_x_axis = point_over(&x, s(3), s(0), s(1)).unwrap();
        assert_eq!(
            orbit_classify(&on_x_axis),
            OrbitClass::BigOrbit([s(0), s(1)])
        );
    }

    #[test]
    fn json_forms() {
        let c = orbit_classify(&pt([-1, 7, 1, 1]).unwrap());
        assert_eq!(
            c.to_json().to_string(),
            r#"{"tag":"CuspFamily","key":{"num":7,"den":1}}"#
        );
        assert_eq!(OrbitClass::Origin.to_json().to_string(), r#"{"tag":"Origin"}"#);
        let b = orbit_classify(&pt([1, -1, 1, 1]).unwrap());
        assert_eq!(
            b.to_json().to_string(),
            r#"{"tag":"BigOrbit","key":[{"num":1,"den":1},{"num":-1,"den":1}]}"#
        );
    }

    #[test]
    fn same_orbit_basics() {
        let o = pt([0, 0, 0, 0]).unwrap();
        assert_eq!(same_orbit(&o, &o), Ok(true));
        let a = pt([1, -1, 1, 1]).unwrap();
        assert_eq!(same_orbit(&o, &a), Ok(false));
        let other = SurfacePoint::new(
            &Threefold::make(2, 1, 3, 4).unwrap(),
            [0, 0, 0, 0].map(Scalar::from),
        )
        .unwrap();
        assert_eq!(same_orbit(&o, &other), Err(GeomError::ParamMismatch));
    }

    #[test]
    fn cusp_parametrization() {
        for (d, l, a2, a3) in [(3, 1, 2, 3), (2, 1, 3, 4), (2, 2, 3, 4)] {
            let x = Threefold::make(d, l, a2, a3).unwrap();
            let p = cusp_point(&x, &Scalar::ratio(-2, 3), Scalar::from(5));
            assert!(p.f0().is_zero());
            assert!(matches!(orbit_classify(&p), OrbitClass::CuspFamily(_)));
        }
    }

    #[test]
    fn multiline_roots_enumerated() {
        // t^3 = 1 over Q(ζ_3): the candidates ζ^j·1 give three distinct roots.
        let x = kr();
        let ctx = CycloContext::new(3).unwrap();
        let zeta = Scalar::zeta(&ctx);
        let x0 = Scalar::from(-1);
        let fiber = fiber_type(&x, &x0, &Scalar::one());
        let r = rational_root(&-&x0, 3).unwrap();
        let mut roots: Vec<Scalar> = Vec::new();
        for j in 0..3 {
            let cand = &zeta.pow(j).unwrap() * &r;
            if (&x0 + &cand.pow(3).unwrap()).is_zero() && !roots.contains(&cand) {
                roots.push(cand);
            }
        }
        assert_eq!(roots.len() as u32, fiber.count());
    }

    #[test]
    fn a_moves_points_over_the_cusp() {
        // On f = 0 the y-image y + H_p restricts to y − α₃t^{α₃−1}·p(x, z),
        // so (p, 1) with p(x₀, z₀) ≠ 0 is not the identity there.
        use crate::autgroup::Automorphism;
        use crate::poly::MultiPoly;
        let x = kr();
        let a = pt([-1, 7, 1, 1]).unwrap();
        let one = Automorphism::lift_from_a(&x, MultiPoly::one()).unwrap();
        assert_eq!(one.act_on_point(&a).unwrap(), pt([-1, 4, 1, 1]).unwrap());

        let b = pt([-1, 8, 1, 1]).unwrap();
        let third = MultiPoly::constant(Scalar::ratio(-1, 3));
        let witness = Automorphism::lift_from_a(&x, third).unwrap();
        assert_eq!(witness.act_on_point(&a).unwrap(), b);
        assert_eq!(same_orbit(&a, &b), Ok(true));
        assert_ne!(orbit_classify(&a), orbit_classify(&b));
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&Scalar::ratio(-8, 27), 3), Some(Scalar::ratio(-2, 3)));
        assert_eq!(rational_root(&Scalar::from(2), 2), None);
        assert_eq!(rational_root(&Scalar::from(-4), 2), None);
    }
}
