//! Seeded random instances. The same spec and seed always give the same
//! document bytes.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anm::{AnmInstance, Budget, Edge};
use crate::error::{BnpgError, Result};
use crate::game::{AltruismNetwork, BnpgGame, ExternalityTable, InputGraph, StrategyProfile};
use crate::knapsack::{KnapsackInstance, KnapsackItem};
use crate::rational::Rational;
use crate::reductions::SatInstance;

use super::document::{Instance, InstanceDocument, Metadata};

/// Largest player count the generators accept.
pub const GENERATOR_PLAYER_LIMIT: usize = 100_000;
/// Largest table value drawn for random externality functions.
pub const TABLE_VALUE_MAX: i64 = 6;
const SAT_ATTEMPTS: usize = 10_000;

/// Shape of a random game's input graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    Tree {
        n: usize,
        max_degree: Option<usize>,
    },
    Clique {
        n: usize,
    },
    /// Connected graph: a random tree plus `rank` extra edges.
    CircuitRank {
        n: usize,
        rank: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameParams {
    pub topology: Topology,
    pub directed: bool,
    /// Probability that each admissible altruism arc (or edge) is present.
    pub altruism_density: f64,
}

impl GameParams {
    pub fn new(topology: Topology) -> Self {
        GameParams {
            topology,
            directed: true,
            altruism_density: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenSpec {
    Game(GameParams),
    /// Occurrence-balanced (3,B2) formula; needs `variables` divisible by 3.
    Sat {
        variables: usize,
    },
    /// Decision knapsack with `items` items, profits `1..=20`, weights `1..=max_weight`.
    Knapsack {
        items: usize,
        max_weight: u64,
    },
    /// ANM over a random game with at most `candidates` priced edits, costs `0..=max_cost`.
    Anm {
        game: GameParams,
        candidates: usize,
        max_cost: u64,
    },
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_tree(rng: &mut ChaCha8Rng, n: usize, max_degree: Option<usize>) -> Result<Vec<Edge>> {
    if let Some(d) = max_degree {
        if d == 0 && n > 1 || d == 1 && n > 2 {
            return Err(BnpgError::Precondition(format!(
                "no tree on {n} nodes has maximum degree {d}"
            )));
        }
    }
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut degree = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let i = rng.gen_range(0..open.len());
        let u = open[i];
        edges.push((label[u], label[v]));
        degree[u] += 1;
        degree[v] += 1;
        if max_degree.is_some_and(|d| degree[u] >= d) {
            open.swap_remove(i);
        }
        if max_degree.is_none_or(|d| degree[v] < d) {
            open.push(v);
        }
    }
    Ok(edges)
}

fn random_graph(rng: &mut ChaCha8Rng, topology: Topology) -> Result<InputGraph> {
    let n = match topology {
        Topology::Tree { n, .. } | Topology::Clique { n } | Topology::CircuitRank { n, .. } => n,
    };
    if n == 0 || n > GENERATOR_PLAYER_LIMIT {
        return Err(BnpgError::SizeGuard {
            what: "generated player count",
            actual: n,
            limit: GENERATOR_PLAYER_LIMIT,
        });
    }
    let edges = match topology {
        Topology::Tree { n, max_degree } => random_tree(rng, n, max_degree)?,
        Topology::Clique { n } => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
        Topology::CircuitRank { n, rank } => {
            let tree = random_tree(rng, n, None)?;
            let present: BTreeSet<Edge> = tree.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
            let mut missing: Vec<Edge> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|e| !present.contains(e))
                .collect();
            if missing.len() < rank {
                return Err(BnpgError::Precondition(format!(
                    "a simple graph on {n} nodes cannot have circuit rank {rank}"
                )));
            }
            missing.shuffle(rng);
            tree.into_iter()
                .chain(missing.into_iter().take(rank))
                .collect()
        }
    };
    InputGraph::new(n, edges)
}

/// Non-decreasing table of length `len` with values in `0..=TABLE_VALUE_MAX`.
fn random_table(rng: &mut ChaCha8Rng, len: usize) -> ExternalityTable {
    let mut values: Vec<i64> = (0..len)
        .map(|_| rng.gen_range(0..=TABLE_VALUE_MAX))
        .collect();
    values.sort_unstable();
    ExternalityTable::from_ints(&values)
}

fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    Rational::new(rng.gen_range(0..=max_num), rng.gen_range(1..=max_den))
}

pub fn random_game(rng: &mut ChaCha8Rng, params: &GameParams) -> Result<BnpgGame> {
    let graph = random_graph(rng, params.topology)?;
    let n = graph.player_count();
    let mut arcs = Vec::new();
    for &(u, v) in graph.edges() {
        let pairs: &[Edge] = if params.directed {
            &[(u, v), (v, u)]
        } else {
            &[(u, v)]
        };
        for &arc in pairs {
            if rng.gen_bool(params.altruism_density) {
                arcs.push(arc);
            }
        }
    }
    let altruism = AltruismNetwork::new(n, params.directed, arcs)?;
    let tables = (0..n)
        .map(|v| random_table(rng, graph.degree(v) + 2))
        .collect();
    let costs = (0..n).map(|_| random_rational(rng, 12, 4)).collect();
    let a = [
        Rational::zero(),
        Rational::new(1, 2),
        Rational::one(),
        Rational::from_int(2),
    ]
    .choose(rng)
    .expect("non-empty")
    .clone();
    BnpgGame::new(graph, altruism, tables, costs, a)
}

pub fn random_sat(rng: &mut ChaCha8Rng, variables: usize) -> Result<SatInstance> {
    if variables == 0 || !variables.is_multiple_of(3) {
        return Err(BnpgError::Precondition(format!(
            "(3,B2) needs 4n = 3m, impossible for n = {variables}"
        )));
    }
    let mut literals: Vec<i32> = (1..=variables as i32)
        .flat_map(|v| [v, v, -v, -v])
        .collect();
    for _ in 0..SAT_ATTEMPTS {
        literals.shuffle(rng);
        let clauses: Vec<[i32; 3]> = literals.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        let sat = SatInstance { variables, clauses };
        if sat.validate_3b2().is_ok() {
            return Ok(sat);
        }
    }
    Err(BnpgError::Precondition(format!(
        "no (3,B2) formula found for n = {variables} after {SAT_ATTEMPTS} shuffles"
    )))
}

pub fn random_knapsack(rng: &mut ChaCha8Rng, items: usize, max_weight: u64) -> KnapsackInstance {
    let items: Vec<KnapsackItem> = (0..items)
        .map(|_| {
            KnapsackItem::new(
                Rational::from_int(rng.gen_range(1..=20)),
                rng.gen_range(1..=max_weight.max(1)),
            )
        })
        .collect();
    let total_weight: u64 = items.iter().map(|i| i.weight).sum();
    let total_profit: i64 = items
        .iter()
        .map(|i| i.profit.to_i64().expect("integer"))
        .sum();
    KnapsackInstance {
        threshold: Some(Rational::from_int(rng.gen_range(0..=total_profit))),
        capacity: Some(rng.gen_range(0..=total_weight)),
        items,
    }
}

pub fn random_anm(
    rng: &mut ChaCha8Rng,
    params: &GameParams,
    candidates: usize,
    max_cost: u64,
) -> Result<AnmInstance> {
    let game = random_game(rng, params)?;
    let n = game.player_count();
    let h = game.altruism();
    let mut pool: Vec<(bool, Edge)> = Vec::new();
    for &(u, v) in game.graph().edges() {
        let pairs: &[Edge] = if h.is_directed() {
            &[(u, v), (v, u)]
        } else {
            &[(u, v)]
        };
        for &(s, t) in pairs {
            pool.push((h.contains(s, t), (s, t)));
        }
    }
    pool.shuffle(rng);
    pool.truncate(candidates);
    pool.sort_unstable();
    let mut adds = Vec::new();
    let mut dels = Vec::new();
    for (present, edge) in pool {
        let cost = rng.gen_range(0..=max_cost);
        if present {
            dels.push((edge, cost));
        } else {
            adds.push((edge, cost));
        }
    }
    let total: u64 = adds.iter().chain(&dels).map(|e| e.1).sum();
    let budget = if rng.gen_bool(0.1) {
        Budget::Infinite
    } else {
        Budget::Finite(rng.gen_range(0..=total))
    };
    let target = StrategyProfile::new((0..n).map(|_| rng.gen_range(0..=1)).collect())?;
    AnmInstance::new(game, target, adds, dels, budget)
}

pub fn generate_instance(spec: &GenSpec, seed: u64) -> Result<InstanceDocument> {
    let mut rng = rng(seed);
    let (instance, description) = match spec {
        GenSpec::Game(p) => (Instance::Game(random_game(&mut rng, p)?), describe_game(p)),
        GenSpec::Sat { variables } => (
            Instance::Sat(random_sat(&mut rng, *variables)?),
            format!("random (3,B2)-SAT, n={variables}"),
        ),
        GenSpec::Knapsack { items, max_weight } => (
            Instance::Knapsack(random_knapsack(&mut rng, *items, *max_weight)),
            format!("random decision knapsack, {items} items"),
        ),
        GenSpec::Anm {
            game,
            candidates,
            max_cost,
        } => (
            Instance::Anm(random_anm(&mut rng, game, *candidates, *max_cost)?),
            format!("random ANM over {}", describe_game(game)),
        ),
    };
    Ok(InstanceDocument {
        metadata: Metadata {
            description: Some(description),
            seed: Some(seed),
        },
        instance,
    })
}

fn describe_game(p: &GameParams) -> String {
    let shape = match p.topology {
        Topology::Tree {
            n,
            max_degree: None,
        } => format!("tree, n={n}"),
        Topology::Tree {
            n,
            max_degree: Some(d),
        } => format!("tree, n={n}, max degree {d}"),
        Topology::Clique { n } => format!("clique, n={n}"),
        Topology::CircuitRank { n, rank } => format!("connected graph, n={n}, circuit rank {rank}"),
    };
    let h = if p.directed { "directed" } else { "symmetric" };
    format!("random game on a {shape}, {h} altruism")
}
