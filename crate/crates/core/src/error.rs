use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is disconnected: node `{0}` is unreachable")]
    DisconnectedGraph(String),
    #[error("subset is disconnected under connectivity radius {radius}: `{from}` cannot reach `{to}`")]
    DisconnectedSubset { from: String, to: String, radius: f64 },
    #[error("measure charges point `{0}` which has zero reference weight")]
    AbsoluteContinuityViolation(String),
    #[error("perimeter bound violated for geodesic {geodesic} and witness `{witness}`: {perimeter} >= {bound}")]
    PerimeterBoundViolated {
        geodesic: usize,
        witness: String,
        perimeter: f64,
        bound: f64,
    },
    #[error("space has no declared boundary")]
    MissingBoundary,
    #[error("boundary identification is not an isometry: {0}")]
    IsometryInvalid(String),
    #[error("glued functions disagree at seam point `{id}`: {left} vs {right}")]
    SeamMismatch { id: String, left: f64, right: f64 },
    #[error("marginal mismatch: {0}")]
    MarginalMismatch(String),
    #[error("no discrete geodesic between `{0}` and `{1}`")]
    NoGeodesicFound(String, String),
    #[error("guide is not 1-Lipschitz at (`{x}`, `{y}`): |du| = {du} > d = {d}")]
    NotOneLipschitz { x: String, y: String, du: f64, d: f64 },
    #[error("chains overlap at point `{0}`")]
    OverlappingChains(String),
    #[error("density is not positive at grid index {index} (value {value})")]
    NonPositiveDensity { index: usize, value: f64 },
    #[error("side condition u'' <= -k u fails on the {side} profile at grid index {index}")]
    SideConditionFailed { side: &'static str, index: usize },
    #[error("chain has {0} nodes, at least 3 are required")]
    ChainTooShort(usize),
    #[error("normal chain at seam point `{seam}` leaves into the wrong side at `{node}`")]
    ChainLeavesWrongSide { seam: String, node: String },
    #[error("unknown point id `{0}`")]
    UnknownPoint(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
