//! Named solver strategies, looked up by the `--method` string.

use crate::anm::{solve_anm_asymmetric, AnmInstance, EditSet};
use crate::error::{BnpgError, Result};
use crate::game::{BnpgGame, StrategyProfile};
use crate::oracle::{brute_anm, enumerate_psne, PSNE_PLAYER_LIMIT};
use crate::structured::{circuit_rank, solve_bounded_circuit_rank_psne, solve_clique_psne};
use crate::tree::solve_tree_psne;

pub const DEFAULT_MAX_RANK: usize = 3;

pub trait PsneSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, game: &BnpgGame) -> Result<Option<StrategyProfile>>;
}

pub trait AnmSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, anm: &AnmInstance) -> Result<Option<EditSet>>;
}

pub struct TreeSolver;

impl PsneSolver for TreeSolver {
    fn name(&self) -> &'static str {
        "tree"
    }
    fn solve(&self, game: &BnpgGame) -> Result<Option<StrategyProfile>> {
        solve_tree_psne(game)
    }
}

pub struct CliqueSolver;

impl PsneSolver for CliqueSolver {
    fn name(&self) -> &'static str {
        "clique"
    }
    fn solve(&self, game: &BnpgGame) -> Result<Option<StrategyProfile>> {
        solve_clique_psne(game)
    }
}

pub struct CircuitRankSolver {
    pub max_rank: usize,
}

impl PsneSolver for CircuitRankSolver {
    fn name(&self) -> &'static str {
        "circuit-rank"
    }
    fn solve(&self, game: &BnpgGame) -> Result<Option<StrategyProfile>> {
        solve_bounded_circuit_rank_psne(game, self.max_rank)
    }
}

/// First equilibrium in lexicographic order.
pub struct BruteSolver;

impl PsneSolver for BruteSolver {
    fn name(&self) -> &'static str {
        "brute"
    }
    fn solve(&self, game: &BnpgGame) -> Result<Option<StrategyProfile>> {
        Ok(enumerate_psne(game)?.into_iter().next())
    }
}

/// Picks the most specific applicable method.
pub struct AutoSolver {
    pub max_rank: usize,
}

impl AutoSolver {
    pub fn choose(&self, game: &BnpgGame) -> Result<&'static str> {
        let graph = game.graph();
        if graph.is_forest() {
            Ok("tree")
        } else if graph.is_complete() {
            Ok("clique")
        } else if circuit_rank(graph) <= self.max_rank {
            Ok("circuit-rank")
        } else if game.player_count() <= PSNE_PLAYER_LIMIT {
            Ok("brute")
        } else {
            Err(BnpgError::SizeGuard {
                what: "player count (no structured method applies)",
                actual: game.player_count(),
                limit: PSNE_PLAYER_LIMIT,
            })
        }
    }
}

impl PsneSolver for AutoSolver {
    fn name(&self) -> &'static str {
        "auto"
    }
    fn solve(&self, game: &BnpgGame) -> Result<Option<StrategyProfile>> {
        let registry = PsneRegistry::standard(self.max_rank);
        registry.get(self.choose(game)?)?.solve(game)
    }
}

pub struct AsymmetricAnmSolver;

impl AnmSolver for AsymmetricAnmSolver {
    fn name(&self) -> &'static str {
        "asymmetric"
    }
    fn solve(&self, anm: &AnmInstance) -> Result<Option<EditSet>> {
        solve_anm_asymmetric(anm)
    }
}

pub struct BruteAnmSolver;

impl AnmSolver for BruteAnmSolver {
    fn name(&self) -> &'static str {
        "brute"
    }
    fn solve(&self, anm: &AnmInstance) -> Result<Option<EditSet>> {
        brute_anm(anm)
    }
}

pub struct PsneRegistry {
    solvers: Vec<Box<dyn PsneSolver>>,
}

impl PsneRegistry {
    pub fn new() -> Self {
        PsneRegistry {
            solvers: Vec::new(),
        }
    }

    /// tree, clique, circuit-rank, brute and auto.
    pub fn standard(max_rank: usize) -> Self {
        let mut r = Self::new();
        r.register(Box::new(TreeSolver));
        r.register(Box::new(CliqueSolver));
        r.register(Box::new(CircuitRankSolver { max_rank }));
        r.register(Box::new(BruteSolver));
        r.register(Box::new(AutoSolver { max_rank }));
        r
    }

    /// Replaces any solver of the same name.
    pub fn register(&mut self, solver: Box<dyn PsneSolver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Result<&dyn PsneSolver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| BnpgError::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }
}

impl Default for PsneRegistry {
    fn default() -> Self {
        Self::standard(DEFAULT_MAX_RANK)
    }
}

pub struct AnmRegistry {
    solvers: Vec<Box<dyn AnmSolver>>,
}

impl AnmRegistry {
    pub fn new() -> Self {
        AnmRegistry {
            solvers: Vec::new(),
        }
    }

    pub fn standard() -> Self {
        let mut r = Self::new();
        r.register(Box::new(AsymmetricAnmSolver));
        r.register(Box::new(BruteAnmSolver));
        r
    }

    pub fn register(&mut self, solver: Box<dyn AnmSolver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Result<&dyn AnmSolver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| BnpgError::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }
}

impl Default for AnmRegistry {
    fn default() -> Self {
        Self::standard()
    }
}
