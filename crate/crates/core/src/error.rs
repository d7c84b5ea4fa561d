use thiserror::Error;

/// Every failure mode exposed by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid slope {0}/{1}")]
    InvalidSlope(i64, i64),
    #[error("slopes {0} and {1} are not Farey-adjacent")]
    NotAnEdge(String, String),
    #[error("no neighbour of {0} carries its own association")]
    NoSuchAssociation(String),
    #[error("unsupported surface {0}")]
    Unsupported(String),
    #[error("weight vector has length {got}, triangulation has {expected} edges")]
    ShapeError { expected: usize, got: usize },
    #[error("weight vector does not trace to a single component")]
    NotConnected,
    #[error("weight vector is not a valid curve: {0}")]
    InvalidCurve(String),
    #[error("generator {0} is not defined on this surface")]
    UnknownGenerator(String),
    #[error("curve id {0} is not in the universe")]
    UnknownCurve(usize),
    #[error("curve set is not a pants decomposition")]
    NotAPantsDecomposition,
    #[error("curve is not part of the decomposition")]
    CurveNotInDecomposition,
    #[error("vertex sequence is not a path in the ball")]
    NotAPath,
    #[error("loop has {0} edges; at most 6 are classified")]
    TooLong(usize),
    #[error("the two moves act in a common chart")]
    NotAlternating,
    #[error("loop is not an alternating pentagon")]
    NotAPentagon,
    #[error("loop is not an almost-alternating hexagon")]
    NotAHexagon,
    #[error("move is illegal (all three curves nonseparating on a genus-one chart)")]
    IllegalMove,
    #[error("move is not illegal")]
    NotIllegal,
    #[error("no certified loop found within the universe bounds")]
    NotCertified,
    #[error("{0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
