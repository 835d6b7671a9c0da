//! Exact symbolic computation for Koras–Russell threefolds of the second kind,
//! `X = {x + y(x^d + z^{α₂})^l + t^{α₃} = 0} ⊂ A⁴`.
//!
//! The crate covers arithmetic in the coordinate ring `C[X]` (over Q or a
//! cyclotomic field), the canonical locally nilpotent derivation and its
//! exponentials, the automorphism group `A ⋊ G_m`, ideal-membership
//! certificates, and the orbit classification of points.

pub mod autgroup;
pub mod coordring;
pub mod geometry;
pub mod lnd;
pub mod parse;
pub mod poly;
pub mod sample;
pub mod scalar;
pub mod verify;

pub use coordring::{CoordError, ICertificate, RingElement, Strategy, Threefold, ThreefoldParams};
pub use parse::{parse_poly, parse_scalar, ParseDiagnostic, ParseError};
pub use poly::{Bindings, Images, Monomial, MultiPoly, PolyError, Var, WeightVector};
pub use scalar::{cyclotomic_minimal_poly, CycloContext, Scalar, ScalarError};
pub use autgroup::{AutError, Automorphism, ImagesError, Reason, SubstitutionData};
pub use geometry::{fiber_type, orbit_classify, same_orbit, FiberType, GeomError, OrbitClass, SurfacePoint};
pub use lnd::{jacobian_check, Derivation, LndError};
pub use verify::Check;
