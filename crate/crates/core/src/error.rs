use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("edge set has a vertex of odd degree at {0:?}")]
    OddDegree([i32; 3]),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coherent reconnection site cannot be applied to a single polygon")]
    CoherentSite,

    #[error("stale reconnection site: {0}")]
    StaleSite(String),

    #[error("no generic projection found after {0} attempts")]
    DegenerateProjection(usize),

    #[error("diagram has {crossings} crossings after simplification (bound {bound})")]
    CrossingBudget { crossings: usize, bound: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown knot name `{0}`")]
    UnknownKnot(String),

    #[error("invalid lens space L({p},{q}): {msg}")]
    InvalidLens { p: i64, q: i64, msg: String },

    #[error("hypotheses not satisfied: {0}")]
    Hypothesis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
