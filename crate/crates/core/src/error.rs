use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report. Each variant maps onto one stable,
/// machine-readable code (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: {message}")]
    Consistency { line: usize, message: String },
    #[error("{0}")]
    Io(String),

    #[error("{element} does not exist at time {time}")]
    AbsentElement { element: String, time: String },
    #[error("no value of '{attr}' for {element} at time {time}")]
    MissingValue {
        element: String,
        attr: String,
        time: String,
    },
    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("unknown subset '{0}'")]
    UnknownSubset(String),
    #[error("unknown time label '{0}'")]
    UnknownTime(String),
    #[error("unknown series '{0}'")]
    UnknownSeries(String),
    #[error("{0}")]
    TypeError(String),
    #[error("{0}")]
    EmptyScope(String),
    #[error("{0}")]
    KindMismatch(String),
    #[error("{0}")]
    FamilyMismatch(String),
    #[error("structural relation '{0}' needs a time point")]
    MissingTimeContext(String),
    #[error("search space has more than {limit} candidates")]
    SearchSpaceExceeded { limit: usize },
    #[error("{side} side matched nothing")]
    UnresolvedSide { side: String },
    #[error("need at least 3 paired samples, found {found}")]
    InsufficientSamples { found: usize },
    #[error("{0} series has zero variance")]
    VarianceZero(String),
    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{0}")]
    InvalidScope(String),
    #[error("{0}")]
    InvalidConfig(String),
    #[error("{side}: {source}")]
    Side {
        side: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Schema { .. } => "SCHEMA_ERROR",
            Error::Consistency { .. } => "CONSISTENCY_ERROR",
            Error::Io(_) => "IO_ERROR",
            Error::AbsentElement { .. } => "ABSENT_ELEMENT",
            Error::MissingValue { .. } => "MISSING_VALUE",
            Error::UnknownAttribute(_) => "UNKNOWN_ATTRIBUTE",
            Error::UnknownElement(_) => "UNKNOWN_ELEMENT",
            Error::UnknownSubset(_) => "UNKNOWN_SUBSET",
            Error::UnknownTime(_) => "UNKNOWN_TIME",
            Error::UnknownSeries(_) => "UNKNOWN_SERIES",
            Error::TypeError(_) => "TYPE_ERROR",
            Error::EmptyScope(_) => "EMPTY_SCOPE",
            Error::KindMismatch(_) => "KIND_MISMATCH",
            Error::FamilyMismatch(_) => "FAMILY_MISMATCH",
            Error::MissingTimeContext(_) => "MISSING_TIME_CONTEXT",
            Error::SearchSpaceExceeded { .. } => "SEARCH_SPACE_EXCEEDED",
            Error::UnresolvedSide { .. } => "UNRESOLVED_SIDE",
            Error::InsufficientSamples { .. } => "INSUFFICIENT_SAMPLES",
            Error::VarianceZero(_) => "VARIANCE_ZERO",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::InvalidScope(_) => "VALIDATION_ERROR",
            Error::InvalidConfig(_) => "CONFIG_ERROR",
            Error::Side { source, .. } => source.code(),
        }
    }

    /// Errors raised while reading a dataset, as opposed to evaluating a query.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Schema { .. } | Error::Consistency { .. } | Error::Io(_)
        )
    }

    /// "Soft" failures mean a candidate reference simply has no defined
    /// characteristic; enumerating operations skip such candidates.
    pub fn is_undefined(&self) -> bool {
        match self {
            Error::AbsentElement { .. } | Error::MissingValue { .. } | Error::EmptyScope(_) => true,
            Error::Side { source, .. } => source.is_undefined(),
            _ => false,
        }
    }

    pub(crate) fn on_side(self, side: &str) -> Error {
        Error::Side {
            side: side.to_string(),
            source: Box::new(self),
        }
    }
}
