use thiserror::Error;

use crate::rootsys::Family;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("a space needs at least one factor")]
    EmptySpec,

    #[error("family {family:?} does not admit rank {rank}")]
    InvalidRank { family: Family, rank: usize },

    #[error("multiplicity map for {factor} is missing orbit `{orbit}`")]
    MissingOrbit { factor: String, orbit: &'static str },

    #[error("multiplicity map for {factor} has unknown orbit `{key}`")]
    UnknownOrbit { factor: String, key: String },

    #[error("multiplicity for orbit `{orbit}` of {factor} must be at least 1")]
    ZeroMultiplicity { factor: String, orbit: String },

    #[error("scale for {factor} must be a positive rational, got {got}")]
    NonPositiveScale { factor: String, got: String },

    #[error("expected a vector of length {expected}, got {got}")]
    WrongVectorLength { expected: usize, got: usize },

    #[error("expected {expected} simple-root coefficients, got {got}")]
    WrongCoefficientCount { expected: usize, got: usize },

    #[error("vector lies outside the span of the roots")]
    OutsideRootSpan,

    #[error("normal direction lies outside the orthogonal complement of the subspace")]
    NotNormal,

    #[error("normal direction must be nonzero")]
    ZeroNormal,

    #[error("tube radius must be positive, got {got}")]
    NonPositiveRadius { got: String },

    #[error("tube spectra need the half-multiplicity sum inside the subspace (minimal base); it is not")]
    TubeRequiresMinimal,

    #[error("extension spectra need the half-multiplicity sum inside the subspace (minimal base); it is not")]
    ExtensionRequiresMinimal,

    #[error("subspace equals the whole flat: no normal directions exist")]
    NoNormalDirections,

    #[error("codimension {codim} is below 2: the constancy question degenerates")]
    CodimensionTooSmall { codim: usize },

    #[error("spectrum must be fully evaluated (no symbolic projections) here")]
    SymbolicSpectrum,

    #[error("section spectrum carries total multiplicity {total}, but only {available} tangent directions are available")]
    SectionTooLarge { total: u64, available: u64 },

    #[error("subspaces live over different root data")]
    DatumMismatch,

    #[error("root index {index} is out of range ({count} positive roots)")]
    RootIndexOutOfRange { index: usize, count: usize },

    #[error("codimension {codim} is not admissible here (admissible {min}..={max})")]
    CodimOutOfRange { codim: usize, min: usize, max: usize },

    #[error("sample config needs count >= 1 and coeff_bound >= 1")]
    BadSampleConfig,

    #[error("sampling gave up after {attempts} rank-deficient draws")]
    SamplingFailed { attempts: usize },

    #[error("max_rank {got} must lie in 3..=8")]
    MaxRankOutOfRange { got: usize },

    #[error("invalid rational `{got}`")]
    BadRational { got: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
