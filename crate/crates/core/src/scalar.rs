//! Scalar abstraction over `f32` / `f64`.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

use crate::tol::Tolerances;

/// Real scalar type the numerical core is generic over.
///
/// Every algorithm works on complex matrices whose real part is `Self`.
/// Tolerances are precision dependent, so each scalar carries its own
/// defaults.
pub trait Scalar:
    RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + std::fmt::Debug + 'static
{
    /// Short human-readable name, used in diagnostics.
    const NAME: &'static str;

    fn default_tolerances() -> Tolerances;

    /// Literal conversion; panics only if `Self` cannot hold a finite f64,
    /// which never happens for the implemented types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";

    fn default_tolerances() -> Tolerances {
        Tolerances::default()
    }
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";

    fn default_tolerances() -> Tolerances {
        Tolerances {
            atol: 1e-4,
            gram_tol: 1e-3,
            completeness: 1e-4,
            sic_overlap: 1e-4,
            rank_rel: 1e-5,
            identity: 1e-3,
            independence: 1e-5,
            span_residual: 1e-3,
            converge_step: 1e-5,
            full_rank: 1e-3,
            zero_norm: 1e-6,
            parallel_orthogonality: 1e-3,
        }
    }
}
