use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("an instance needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {id} at ({x}, {y}) exceeds the coordinate bound of 2^30")]
    CoordinateOutOfRange { id: u32, x: i64, y: i64 },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: u32, second: u32 },
    #[error("all points are collinear")]
    Degenerate,
    #[error("vertex id {0} is out of range")]
    VertexOutOfRange(u32),
    #[error("vertex id {0} appears more than once")]
    RepeatedVertex(u32),
    #[error("a polygon needs at least 3 vertices, got {0}")]
    PolygonTooShort(usize),
    #[error("brute force enumeration is limited to {max} points, got {n}")]
    TooManyPoints { n: usize, max: usize },
    #[error("greedy insertion failed after {attempts} attempts, {missing} points left over")]
    GreedyFailed { attempts: usize, missing: usize },
    #[error("bridge graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("merged polygon could not absorb {missing} points from degenerate cells")]
    LeftoverInsertion { missing: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
