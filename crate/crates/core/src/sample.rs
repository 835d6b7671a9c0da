//! Seeded random generation of scalars, polynomials, group elements and
//! points. The stream is `ChaCha8Rng::seed_from_u64(seed)`, so a seed fixes
//! every sample on every platform.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autgroup::Automorphism;
use crate::coordring::Threefold;
use crate::geometry::{cusp_point, point_over, SurfacePoint};
use crate::poly::{Monomial, MultiPoly, Var};
use crate::scalar::{CycloContext, Scalar};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n/d` with `|n| ≤ 5`, `1 ≤ d ≤ 3`.
pub fn small_rational(rng: &mut SampleRng) -> Scalar {
    Scalar::ratio(rng.random_range(-5..=5), rng.random_range(1..=3))
}

pub fn nonzero_rational(rng: &mut SampleRng) -> Scalar {
    loop {
        let s = small_rational(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random element of Q(ζ_n): small rational power-basis coordinates.
pub fn cyclo_scalar(rng: &mut SampleRng, ctx: &Arc<CycloContext>) -> Scalar {
    let coeffs: Vec<_> = (0..ctx.degree())
        .map(|_| small_rational(rng).as_rational().cloned().unwrap())
        .collect();
    Scalar::from_residue(ctx, &coeffs)
}

/// Sparse polynomial in `vars` of total degree at most `max_deg`.
pub fn poly(rng: &mut SampleRng, vars: &[Var], max_deg: u32, max_terms: usize) -> MultiPoly {
    let n = rng.random_range(0..=max_terms);
    MultiPoly::from_terms((0..n).map(|_| {
        let mut exps = [0u32; 4];
        let deg = rng.random_range(0..=max_deg);
        for _ in 0..deg {
            let v = vars[rng.random_range(0..vars.len())];
            exps[v.index()] += 1;
        }
        (Monomial(exps), small_rational(rng))
    }))
}

/// Torus parameter from `{±1, ±2, ±1/2}`, plus powers of ζ when a context
/// is given.
pub fn mu(rng: &mut SampleRng, cyclo: Option<&Arc<CycloContext>>) -> Scalar {
    let base = [
        Scalar::from(1),
        Scalar::from(-1),
        Scalar::from(2),
        Scalar::from(-2),
        Scalar::ratio(1, 2),
        Scalar::ratio(-1, 2),
    ];
    match cyclo {
        Some(ctx) if rng.random_bool(0.4) => {
            let j = rng.random_range(1..ctx.order().max(2)) as i64;
            Scalar::zeta(ctx).pow(j).unwrap()
        }
        _ => base[rng.random_range(0..base.len())].clone(),
    }
}

pub fn automorphism(
    rng: &mut SampleRng,
    space: &Threefold,
    cyclo: Option<&Arc<CycloContext>>,
    p_deg: u32,
) -> Automorphism {
    let p = poly(rng, &[Var::X, Var::Z], p_deg, 3);
    Automorphism::new(space, p, mu(rng, cyclo)).expect("valid random element")
}

/// A random point of `X`: mostly over `f ≠ 0`, sometimes over the cusp, and
/// occasionally on the line `x = z = t = 0`.
pub fn point(rng: &mut SampleRng, space: &Threefold) -> SurfacePoint {
    match rng.random_range(0..10) {
        0 => {
            let y = small_rational(rng);
            SurfacePoint::new(space, [Scalar::zero(), y, Scalar::zero(), Scalar::zero()])
                .expect("line x = z = t = 0 lies on X")
        }
        1..=3 => cusp_point(space, &nonzero_rational(rng), small_rational(rng)),
        _ => loop {
            let (x, z, t) = (small_rational(rng), small_rational(rng), small_rational(rng));
            if let Some(p) = point_over(space, x, z, t) {
                return p;
            }
        },
    }
}
