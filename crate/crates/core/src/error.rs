use crate::game::Player;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BnpgError {
    #[error(
        "externality table of player {player} has {len} entries; index {index} is out of range"
    )]
    TableRange {
        player: Player,
        index: usize,
        len: usize,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("input graph is not acyclic")]
    NotAForest,
    #[error("input graph is not complete")]
    NotComplete,
    #[error("circuit rank {rank} exceeds the configured bound {max}")]
    RankExceeded { rank: usize, max: usize },
    #[error("size guard: {what} is {actual}, limit is {limit}")]
    SizeGuard {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("infeasible selection quota {quota} for {available} free children")]
    InfeasibleQuota { quota: i64, available: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("mapping error: {0}")]
    Mapping(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("internal audit failed: {0}")]
    Audit(String),
}

pub type Result<T> = std::result::Result<T, BnpgError>;
