use thiserror::Error;

/// Errors produced by forest construction, updates and queries.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {0} out of range (capacity {1})")]
    VertexOutOfRange(usize, usize),

    #[error("({0}, {1}) is not an edge of the forest")]
    NotAnEdge(usize, usize),

    #[error("self loop ({0}, {0}) rejected")]
    SelfLoop(usize),

    #[error("edge ({0}, {1}) would create a cycle")]
    Cycle(usize, usize),

    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(usize, usize),

    #[error("vertex {0} would exceed the degree bound of {1}")]
    DegreeExceeded(usize, usize),

    #[error("dummy vertex arena exhausted (capacity {0})")]
    CapacityExhausted(usize),

    #[error("vertex {0} is not an allocated dummy")]
    UnallocatedDummy(usize),

    #[error("negative edge weight on ({0}, {1}); nearest-marked queries need non-negative weights")]
    NegativeWeight(usize, usize),

    #[error("path aggregation over a bare semigroup admits no efficient batch algorithm \
             (minimum spanning tree verification over semigroup weights needs \
             super-linear work); configure a group or use path min/max")]
    SemigroupPathQuery,

    #[error("the structure was built without the {0} aggregate; enable it in RcConfig::store")]
    AggregateDisabled(&'static str),

    #[error("query pair ({0}, {1}) lies outside the component of the fixed root")]
    OutsideComponent(usize, usize),

    #[error("empty marked set for compressed path tree")]
    EmptyMarkedSet,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
