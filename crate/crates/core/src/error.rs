use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group closure exceeds the size cap of {cap} elements")]
    SizeCap { cap: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("subgroup is not normal: {s} * {n} * {s}^-1 leaves the subgroup")]
    NotNormal { s: usize, n: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is numerically singular (smallest singular value {min_singular:.3e})")]
    Singular { min_singular: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("intertwiner for coset {coset} fails its relation (residual {residual:.3e})")]
    BadWitness { coset: usize, residual: f64 },

    #[error("representation is not G-invariant (witness element {witness})")]
    NotInvariant { witness: usize },

    #[error("construction inconsistency in {what} (residual {residual:.3e})")]
    Inconsistent { what: String, residual: f64 },

    #[error("unsupported for a non-scalar commutant of dimension {commutant_dim}; use stabilization")]
    NonScalar { commutant_dim: usize },

    #[error("precision error: {0}")]
    Precision(String),

    #[error("multiplier mismatch (residual {residual:.3e})")]
    MultiplierMismatch { residual: f64 },

    #[error("input error at {path}: {msg}")]
    Input { path: String, msg: String },
}

impl Error {
    pub(crate) fn inconsistent(what: impl Into<String>, residual: f64) -> Self {
        Error::Inconsistent {
            what: what.into(),
            residual,
        }
    }

    /// Machine-readable code used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SizeCap { .. } => "size_cap",
            Error::InvalidGroup(_) => "invalid_group",
            Error::NotNormal { .. } => "not_normal",
            Error::Shape(_) => "shape",
            Error::Singular { .. } => "singular",
            Error::Numerical(_) => "numerical",
            Error::BadWitness { .. } => "bad_witness",
            Error::NotInvariant { .. } => "not_invariant",
            Error::Inconsistent { .. } => "inconsistent",
            Error::NonScalar { .. } => "non_scalar",
            Error::Precision(_) => "precision",
            Error::MultiplierMismatch { .. } => "multiplier_mismatch",
            Error::Input { .. } => "input",
        }
    }

    /// True for errors caused by malformed user input rather than a failed residual check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input { .. }
                | Error::InvalidGroup(_)
                | Error::NotNormal { .. }
                | Error::Shape(_)
                | Error::SizeCap { .. }
        )
    }
}
