use thiserror::Error;

/// Failure modes of the kernels and integrators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },
    #[error("matrix is not in SO(5) (orthogonality defect {orthogonality:e}, det {determinant})")]
    NotRotation {
        orthogonality: f64,
        determinant: f64,
    },
    #[error("unit-norm invariant violated (|q| = {norm})")]
    NotUnit { norm: f64 },
    #[error("tangency invariant violated (<q, p> = {inner:e})")]
    NotTangent { inner: f64 },
    #[error("finite-difference step fell below {min_step:e} without convergence")]
    StepUnderflow { min_step: f64 },
    #[error("frame does not project to the base point (distance {distance:e})")]
    BaseMismatch { distance: f64 },
    #[error("spin has a nonzero h0 component (norm {norm:e})")]
    NotInAnnH { norm: f64 },
    #[error("momentum is not on the coadjoint level set: {reason}")]
    NotOnLevelSet { reason: &'static str },
    #[error("constraint solve did not converge in {iterations} Newton iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("configuration is on the singular SO(4) stratum")]
    SingularConfig,
    #[error("momentum norm {found} does not match orbit level {expected}")]
    NotOnOrbit { expected: f64, found: f64 },
    #[error("step too large: h*|v| = {product} exceeds {limit}")]
    StepTooLarge { product: f64, limit: f64 },
    #[error("spin reached distance {distance:e} of a pole at t = {time}")]
    PoleCrossing { time: f64, distance: f64 },
    #[error("section lift failed: {reason}")]
    SectionFailure { reason: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
