use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied input outside the domain of an operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no stable bundle: Bogomolov bound violated (c2 = {0})")]
    Bogomolov(i64),

    #[error("corrupted side data: c2 = {numerator}/4 is not integral")]
    NonIntegralC2 { numerator: i64 },

    #[error("rank mismatch in component {component}: {detail}")]
    RankMismatch { component: String, detail: String },

    #[error("convention breach in component {component}: {detail}")]
    ConventionBreach { component: String, detail: String },

    #[error(
        "tangent mismatch in component {component}: zero-weight rank {found}, expected {expected}"
    )]
    TangentMismatch {
        component: String,
        found: i64,
        expected: usize,
    },

    #[error("factor count mismatch: {0} vs {1}")]
    FactorMismatch(usize, usize),

    #[error("non-unit denominator")]
    NonUnit,

    #[error("forbidden zero factor: zero weight with trivial class raised to power {0}")]
    ZeroFactor(i64),

    #[error("non-generic gamma ({g1},{g2}) in component {component}")]
    NonGenericGamma { g1: i64, g2: i64, component: String },

    #[error("localization inconsistency at k = {k}: total {total} is not an integer")]
    LocalizationInconsistency { k: i64, total: String },

    #[error("invalid component record: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by bad caller input rather than a broken invariant.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_) | Error::Bogomolov(_) | Error::Parse(_)
        )
    }
}
