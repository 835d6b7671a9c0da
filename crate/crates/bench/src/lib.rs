//! Fixed inputs shared by the benchmarks.

use kr2_core::sample;
use kr2_core::{Automorphism, MultiPoly, Threefold, Var};

pub fn spaces() -> Vec<Threefold> {
    [(3, 1, 2, 3), (2, 1, 3, 4), (2, 2, 3, 4)]
        .into_iter()
        .map(|(d, l, a2, a3)| Threefold::make(d, l, a2, a3).expect("valid parameters"))
        .collect()
}

pub fn label(space: &Threefold) -> String {
    let p = space.params();
    format!("{}-{}-{}-{}", p.d, p.l, p.a2, p.a3)
}

/// Polynomial of y-degree 4 with random coefficients, for normal-form timing.
pub fn ring_input(seed: u64) -> MultiPoly {
    let mut rng = sample::rng(seed);
    let vars = [Var::X, Var::Z, Var::T];
    (0..=4).fold(MultiPoly::zero(), |acc, i| {
        let coeff = sample::poly(&mut rng, &vars, 6, 6) + MultiPoly::var(Var::X).pow(6);
        acc + coeff * MultiPoly::var(Var::Y).pow(i)
    })
}

pub fn elements(space: &Threefold, seed: u64) -> (Automorphism, Automorphism) {
    let mut rng = sample::rng(seed);
    (
        sample::automorphism(&mut rng, space, None, 3),
        sample::automorphism(&mut rng, space, None, 3),
    )
}

/// A member of `I` of degree about 8, built from random cofactors.
pub fn ideal_member(space: &Threefold, seed: u64) -> MultiPoly {
    let mut rng = sample::rng(seed);
    let vars = [Var::X, Var::Z, Var::T];
    let a = sample::poly(&mut rng, &vars, 2, 4);
    let b = sample::poly(&mut rng, &vars, 4, 6);
    &(&a * space.f_l()) + &(&b * space.x_plus_t())
}
