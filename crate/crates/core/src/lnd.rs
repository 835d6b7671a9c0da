//! The locally nilpotent derivation `∂ = α₃t^{α₃−1}·∂/∂y − f^l·∂/∂t` on
//! `C[X]` and its kernel multiples `q(x,z)·∂`.

use thiserror::Error;

use crate::autgroup::{Automorphism, SubstitutionData};
use crate::coordring::{RingElement, Threefold};
use crate::poly::{MultiPoly, Var};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LndError {
    #[error("multiplier must be a polynomial in x and z")]
    InvalidMultiplier,
    #[error("no vanishing iterate within {0} applications")]
    CapExceeded(usize),
}

/// `q·∂` for a multiplier `q ∈ C[x,z]`; `q = 1` is the canonical `∂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    space: Threefold,
    q: MultiPoly,
}

impl Derivation {
    pub fn canonical(space: &Threefold) -> Self {
        Derivation {
            space: space.clone(),
            q: MultiPoly::one(),
        }
    }

    pub fn new(space: &Threefold, q: MultiPoly) -> Result<Self, LndError> {
        if !q.only_vars(&[Var::X, Var::Z]) {
            return Err(LndError::InvalidMultiplier);
        }
        Ok(Derivation {
            space: space.clone(),
            q,
        })
    }

    pub fn space(&self) -> &Threefold {
        &self.space
    }

    pub fn multiplier(&self) -> &MultiPoly {
        &self.q
    }

    /// Leibniz extension on a polynomial representative, before reduction.
    fn on_poly(&self, g: &MultiPoly) -> MultiPoly {
        let a3 = self.space.params().a3;
        let dy = MultiPoly::var(Var::T)
            .pow(a3 - 1)
            .scale(&Scalar::from(a3 as i64));
        let dt = -self.space.f_l();
        let raw = g.derivative(Var::Y) * dy + g.derivative(Var::T) * dt;
        &self.q * &raw
    }

    pub fn apply_poly(&self, g: &MultiPoly) -> RingElement {
        self.space.normal_form(&self.on_poly(g))
    }

    pub fn apply(&self, g: &RingElement) -> RingElement {
        self.apply_poly(&g.to_poly())
    }

    /// `D^k(g)`.
    pub fn iterate(&self, g: &RingElement, k: usize) -> RingElement {
        (0..k).fold(g.clone(), |acc, _| self.apply(&acc))
    }

    /// Default bound for [`nilpotency_index`](Self::nilpotency_index):
    /// `α₃ + deg_y(g)·α₃ + deg_t(g) + 4`.
    pub fn default_cap(&self, g: &RingElement) -> usize {
        let a3 = self.space.params().a3 as usize;
        let deg_y = g.y_degree().unwrap_or(0);
        let deg_t = g.to_poly().degree_in(Var::T) as usize;
        a3 + deg_y * a3 + deg_t + 4
    }

    /// Smallest `n` with `Dⁿ(g) = 0`.
    pub fn nilpotency_index(&self, g: &RingElement, cap: usize) -> Result<usize, LndError> {
        let mut cur = g.clone();
        for n in 0..=cap {
            if cur.is_zero() {
                return Ok(n);
            }
            cur = self.apply(&cur);
        }
        Err(LndError::CapExceeded(cap))
    }

    /// `exp(D)(g) = Σ_k D^k(g)/k!`, a finite sum by local nilpotency.
    pub fn exp_apply(&self, g: &RingElement) -> RingElement {
        let mut total = MultiPoly::zero();
        let mut term = g.clone();
        let mut factorial = Scalar::one();
        let mut k = 0i64;
        while !term.is_zero() {
            total = total + term.to_poly().scale(&factorial.inv().expect("k! is nonzero"));
            term = self.apply(&term);
            k += 1;
            factorial = &factorial * &Scalar::from(k);
        }
        self.space.normal_form(&total)
    }

    /// Images of `x, y, z, t` under `exp(D)`, computed by the exponential sum.
    pub fn exp_images(&self) -> SubstitutionData {
        let image = |v: Var| {
            self.exp_apply(&self.space.normal_form(&MultiPoly::var(v)))
                .to_poly()
        };
        SubstitutionData {
            x: image(Var::X),
            y: image(Var::Y),
            z: image(Var::Z),
            t: image(Var::T),
        }
    }

    /// `exp(q∂)` as a group element. It sends `t` to `t − q·f^l`, so it is
    /// `(−q, 1)` in the `(p, μ)` parametrization.
    pub fn exp_lnd(&self) -> Automorphism {
        Automorphism::lift_from_a(&self.space, -&self.q)
            .expect("multiplier is a polynomial in x and z")
    }
}

/// `Jac(P, g) = ∂P/∂y·∂g/∂t − ∂P/∂t·∂g/∂y`, computed from the expanded `P`.
pub fn jacobian_derivation(space: &Threefold, g: &MultiPoly) -> MultiPoly {
    let p = space.defining_poly();
    p.derivative(Var::Y) * g.derivative(Var::T) - p.derivative(Var::T) * g.derivative(Var::Y)
}

/// Checks `∂ = −Jac(P, ·)` on `x, y, z, t`.
///
/// With the rows `(∂P/∂y, ∂·/∂y)` and `(∂P/∂t, ∂·/∂t)` the determinant is
/// the negative of `∂`; the sign is fixed here.
pub fn jacobian_check(space: &Threefold) -> bool {
    let d = Derivation::canonical(space);
    Var::ALL.into_iter().all(|v| {
        let g = MultiPoly::var(v);
        let via_jacobian = space.normal_form(&-jacobian_derivation(space, &g));
        via_jacobian == d.apply_poly(&g)
    })
}
