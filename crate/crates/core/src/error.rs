use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),
    #[error("coordinate sets differ: [{left}] vs [{right}]")]
    CoordinateMismatch { left: String, right: String },
    #[error("reduce operands first: degree {degree} is not below m = {m}")]
    NotReduced { degree: usize, m: usize },
    #[error("μ is not a unit (Z₀ vanishes identically)")]
    MuNotUnit,
    #[error("negative star powers are defined only for the base μ")]
    NegativePowerBase,
    #[error("element is not a unit of the quotient ring")]
    NotAUnit,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("eigenvalues coincide")]
    EigenvaluesCoincide,
    #[error("coordinate name clash: `{0}`")]
    CoordinateClash(String),
    #[error("block function {block} depends on coordinate `{coord}` outside its block")]
    BlockDependence { block: usize, coord: String },
    #[error("singular tensor (determinant vanishes identically)")]
    Singular,
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("system does not admit *-multiplication")]
    NotAdmissible,
    #[error("point outside convergence domain")]
    OutsideConvergence,
    #[error("slow convergence")]
    SlowConvergence,
    #[error("Jordan structure not constant on domain")]
    JordanStructureChanged,
    #[error("denominator vanishes at point")]
    PoleAtPoint,
    #[error("point does not assign coordinate `{0}`")]
    MissingCoordinate(String),
    #[error("root finding did not converge")]
    RootsNotConverged,
    #[error("unknown fixture `{name}`; available: {available}")]
    UnknownFixture { name: String, available: String },
    #[error("fixture `{name}` failed its invariant: {detail}")]
    FixtureInvariant { name: String, detail: String },
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("`mu` may not appear in a coefficient position")]
    MuInCoefficient,
    #[error("Z must be monic in mu of degree at least 1")]
    NotMonic,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::UnknownCoordinate(_) => "unknown_coordinate",
            Error::DuplicateCoordinate(_) => "duplicate_coordinate",
            Error::CoordinateMismatch { .. } => "coordinate_mismatch",
            Error::NotReduced { .. } => "not_reduced",
            Error::MuNotUnit => "mu_not_unit",
            Error::NegativePowerBase => "negative_power_base",
            Error::NotAUnit => "not_a_unit",
            Error::Dimension(_) => "dimension",
            Error::EigenvaluesCoincide => "eigenvalues_coincide",
            Error::CoordinateClash(_) => "coordinate_clash",
            Error::BlockDependence { .. } => "block_dependence",
            Error::Singular => "singular",
            Error::ZeroParameter => "zero_parameter",
            Error::NotAdmissible => "not_admissible",
            Error::OutsideConvergence => "outside_convergence",
            Error::SlowConvergence => "slow_convergence",
            Error::JordanStructureChanged => "jordan_structure_changed",
            Error::PoleAtPoint => "pole_at_point",
            Error::MissingCoordinate(_) => "missing_coordinate",
            Error::RootsNotConverged => "roots_not_converged",
            Error::UnknownFixture { .. } => "unknown_fixture",
            Error::FixtureInvariant { .. } => "fixture_invariant",
            Error::Syntax { .. } => "syntax",
            Error::UnknownIdentifier(_) => "unknown_identifier",
            Error::MuInCoefficient => "mu_in_coefficient",
            Error::NotMonic => "not_monic",
            Error::Invalid(_) => "invalid",
        }
    }
}
