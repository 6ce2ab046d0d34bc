use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain spec: {0}")]
    InvalidDomain(String),
    #[error("mesh validation failed: {0}")]
    InvalidMesh(String),
    #[error("non-manifold edge ({0}, {1}): {2} incident triangles")]
    NonManifoldEdge(usize, usize, usize),
    #[error("metric tensor on triangle {0} is not positive definite")]
    MetricNotSpd(usize),
    #[error("boundary density must be positive (dof {0})")]
    NonPositiveDensity(usize),
    #[error("interior stiffness block is singular: {0}")]
    SingularInterior(String),
    #[error("requested {requested} eigenvalues but only {available} boundary dofs")]
    TooManyEigenvalues { requested: usize, available: usize },
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(f64),
    #[error("quadrature failed to converge: successive orders disagree by {0:.3e}")]
    QuadratureDivergence(f64),
    #[error("degenerate induced metric at chart point ({0}, {1})")]
    DegenerateMetric(f64, f64),
    #[error("rotation matrix is not orthogonal: residual {0:.3e}")]
    NotOrthogonal(f64),
    #[error("point lies outside the closed unit ball: |x| = {0}")]
    OutsideBall(f64),
    #[error("point must lie outside the closed unit ball: |y| = {0}")]
    NotExterior(f64),
    #[error("curve sample off the unit sphere: ||x| - 1| = {0:.3e}")]
    OffSphere(f64),
    #[error("finite-difference step sweep failed to stabilize: spread {0:.3e}")]
    UnstableDifference(f64),
    #[error("analytic second fundamental form unavailable for {0}")]
    MissingSecondForm(String),
    #[error("eigenfunction not boundary-normalized: |‖u‖² - 1| = {0:.3e}")]
    NotNormalized(f64),
    #[error("empty eigenvalue cluster")]
    EmptyCluster,
    #[error("first Laplace eigenvalue is not simple (shortest dual vectors: {0})")]
    MultipleLambda1(usize),
    #[error("eigenvalue index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
