use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has non-positive or non-finite weight {weight}")]
    InvalidWeight { u: usize, v: usize, weight: f64 },
    #[error("edge ({0}, {1}) is not present in the graph")]
    MissingEdge(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not a subgraph: {0}")]
    NotSubgraph(String),
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
    #[error("invalid blocking set: {0}")]
    InvalidBlocking(String),
    #[error("sample of {sample} vertices exceeds graph order {n}")]
    SampleTooLarge { sample: usize, n: usize },
    #[error("exhaustive verification needs ~{estimate} pair checks, over the budget of {budget}")]
    OverBudget { estimate: u128, budget: u128 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
