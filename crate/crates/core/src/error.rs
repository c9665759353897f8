use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid physical parameters: {0}")]
    Parameter(String),
    #[error("incidence angle infeasible: mu1*eps1 = {mu_eps1} must exceed mu0*eps0*cos^2(theta) = {bound}")]
    InfeasibleAngle { mu_eps1: f64, bound: f64 },
    #[error("impedance must be positive, got {value} at node {node}")]
    Impedance { node: usize, value: f64 },
    #[error("source placement: {0}")]
    Placement(String),
    #[error("target at distance {distance:e} from the boundary is inside the clearance band {clearance:e}")]
    MaskedTarget { distance: f64, clearance: f64 },
    #[error("point is in region {actual}, not {expected}")]
    RegionMismatch { expected: String, actual: String },
    #[error(
        "system matrix is numerically singular (pivot ratio {pivot_ratio:e}); \
         kappa1^2 may be a Dirichlet eigenvalue of the annulus or the hole, \
         or kappa0^2 one of the interior of the outer curve"
    )]
    IrregularWavenumber { pivot_ratio: f64 },
}
