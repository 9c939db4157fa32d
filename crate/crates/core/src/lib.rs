//! Exact solvers for binary networked public goods games with altruism.
//!
//! Pure-equilibrium existence on trees, cliques and graphs of bounded circuit
//! rank; altruistic network modification under asymmetric altruism via
//! per-player minimum knapsack; brute-force oracles; and the hardness
//! reduction gadgets as instance generators.

pub mod anm;
pub mod error;
pub mod game;
pub mod io;
pub mod knapsack;
pub mod mixed;
pub mod oracle;
pub mod rational;
pub mod reductions;
pub mod registry;
pub mod structured;
pub mod tree;

pub use anm::{
    decompose_anm_asymmetric, solve_anm_asymmetric, AnmInstance, Budget, EditSet, KnapsackMode,
    PlayerKnapsack,
};
pub use error::{BnpgError, Result};
pub use game::{
    invest_counts, is_stable, marginal, utility, validate_game, verify_psne, AltruismNetwork,
    BnpgGame, ExternalityTable, InputGraph, Player, PsneVerdict, StrategyProfile, Violation,
};
pub use knapsack::{max_knapsack_mitm, min_knapsack, KnapsackInstance, KnapsackItem, MinKnapsack};
pub use mixed::{expected_utility, verify_eps_ne, EpsQuery, EpsVerdict, MixedProfile};
pub use rational::Rational;
pub use registry::{AnmRegistry, AnmSolver, PsneRegistry, PsneSolver, DEFAULT_MAX_RANK};
pub use structured::{
    circuit_rank, decompose, solve_bounded_circuit_rank_psne, solve_clique_psne, stability_sets,
    CircuitRankDecomposition, StabilitySets,
};
pub use tree::{greedy_select, solve_tree_psne, solve_tree_psne_constrained, TreeConstraint};
