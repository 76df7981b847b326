use thiserror::Error;

/// Lattice site `(n, m)`.
pub type Site = (usize, usize);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid precision context: {0}")]
    InvalidPrecision(String),
    #[error("Gamma has a pole at the non-positive integer {0}")]
    GammaPole(i64),
    #[error("Bessel series did not converge within {0} terms (|z| too large for series mode)")]
    NonConvergence(usize),
    #[error("integer Hankel order {0} is not supported")]
    IntegerOrder(i64),
    #[error("negative integer Bessel order {0} is not supported")]
    NegativeIntegerOrder(i64),
    #[error("zero argument where a branch or negative power is required")]
    ZeroArgument,
    #[error("argument lies on the branch cut")]
    OnCut,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("degenerate denominator at site {0:?}")]
    DegenerateDenominator(Option<Site>),
    #[error("coincident vertices at site {0:?}")]
    CoincidentVertex(Option<Site>),
    #[error("zero lattice difference at site {0:?}")]
    ZeroDifference(Site),
    #[error("site {0:?} is outside the grid")]
    SiteOutOfGrid(Site),
    #[error("site {0:?} has the wrong parity")]
    Parity(Site),
    #[error("singular point lambda in {{0, 1, -1}}")]
    SingularPoint,
    #[error("singular Hankel matrix at order {0}")]
    SingularHankel(usize),
    #[error("orthogonal polynomial vanishes at the origin")]
    ZeroAtOrigin,
    #[error("hypergeometric continuation failed: {0}")]
    ContinuationFailure(String),
    #[error("point outside the conformal chart |lambda| < 1")]
    OutOfChart,
    #[error("argument {0} does not lie in the requested sector")]
    SectorMismatch(f64),
    #[error("|z| = {0} exceeds the Bessel series cap")]
    SeriesCap(f64),
    #[error("radius spread {spread:e} at site {site:?} exceeds tolerance")]
    RadiusSpread { site: Site, spread: f64 },
    #[error("orthogonality residual {residual:e} between circles {site:?} and {other:?} exceeds tolerance")]
    Orthogonality { site: Site, other: Site, residual: f64 },
    #[error("empty pattern")]
    EmptyPattern,
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("malformed grid file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
