//! Pure-equilibrium search on complete graphs and on graphs of bounded
//! circuit rank.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::error::{BnpgError, Result};
use crate::game::{
    verify_psne, AltruismNetwork, BnpgGame, InputGraph, Player, PsneVerdict, StrategyProfile,
};
use crate::rational::Rational;
use crate::tree::{solve_tree_psne, solve_tree_psne_constrained, TreeConstraint};

/// Upper bound on `(t, s)` tuples enumerated per component.
pub const CIRCUIT_TUPLE_LIMIT: u64 = 1 << 32;

/// `m − n + c`.
pub fn circuit_rank(graph: &InputGraph) -> usize {
    graph.edge_count() + graph.component_count() - graph.player_count()
}

/// Players that do not want to deviate from investing (`r1`) or from
/// abstaining (`r0`) when exactly `k` players of a clique invest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilitySets {
    pub k: usize,
    pub r1: Vec<bool>,
    pub r0: Vec<bool>,
}

impl StabilitySets {
    pub fn count_r1(&self) -> usize {
        self.r1.iter().filter(|&&b| b).count()
    }

    pub fn count_r0(&self) -> usize {
        self.r0.iter().filter(|&&b| b).count()
    }
}

fn clique_precheck(game: &BnpgGame) -> Result<()> {
    if !game.graph().is_complete() {
        return Err(BnpgError::NotComplete);
    }
    let n = game.player_count();
    if let Some(v) = (0..n).find(|&v| game.table(v).len() < n + 1) {
        return Err(BnpgError::TableRange {
            player: v,
            index: n,
            len: game.table(v).len(),
        });
    }
    Ok(())
}

/// Requires `0 < k < n` on a complete graph.
pub fn stability_sets(game: &BnpgGame, k: usize) -> Result<StabilitySets> {
    let n = game.player_count();
    if k == 0 || k >= n {
        return Err(BnpgError::Precondition(format!(
            "stability sets need 0 < k < {n}, got {k}"
        )));
    }
    let a = game.altruism_weight();
    let side = |v: Player, level: usize| -> Result<Rational> {
        let mut s = Rational::zero();
        for &u in game.altruism().out_neighbors(v) {
            s += game.dg(u, level)?;
        }
        Ok(game.dg(v, level)? + s * a)
    };
    let mut r1 = Vec::with_capacity(n);
    let mut r0 = Vec::with_capacity(n);
    for v in 0..n {
        r1.push(&side(v, k - 1)? >= game.cost(v));
        r0.push(&side(v, k)? <= game.cost(v));
    }
    Ok(StabilitySets { k, r1, r0 })
}

pub fn solve_clique_psne(game: &BnpgGame) -> Result<Option<StrategyProfile>> {
    clique_precheck(game)?;
    let n = game.player_count();
    for boundary in [StrategyProfile::zeros(n), StrategyProfile::ones(n)] {
        if verify_psne(game, &boundary)?.is_equilibrium() {
            return Ok(Some(boundary));
        }
    }
    for k in 1..n {
        let sets = stability_sets(game, k)?;
        let outside_r1 = sets.r1.iter().filter(|&&b| !b).count();
        let r0_minus_r1 = (0..n).filter(|&v| sets.r0[v] && !sets.r1[v]).count();
        if sets.count_r1() < k || sets.count_r0() < n - k || r0_minus_r1 != outside_r1 {
            continue;
        }
        let extra = n - k - outside_r1;
        let mut actions = vec![1u8; n];
        let mut chosen = 0;
        for v in 0..n {
            if !sets.r1[v] {
                actions[v] = 0;
            } else if sets.r0[v] && chosen < extra {
                actions[v] = 0;
                chosen += 1;
            }
        }
        let witness = StrategyProfile::new(actions)?;
        audit(game, &witness, "clique")?;
        return Ok(Some(witness));
    }
    Ok(None)
}

fn audit(game: &BnpgGame, profile: &StrategyProfile, solver: &str) -> Result<()> {
    match verify_psne(game, profile)? {
        PsneVerdict::Equilibrium => Ok(()),
        PsneVerdict::Deviator(v) => Err(BnpgError::Audit(format!(
            "{solver} witness {profile} is not an equilibrium: player {v} deviates"
        ))),
    }
}

/// Spanning tree of a connected graph plus the removed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitRankDecomposition {
    pub tree_edges: Vec<(Player, Player)>,
    pub non_tree_edges: Vec<(Player, Player)>,
    /// Endpoints of the non-tree edges, ascending.
    pub endpoints: Vec<Player>,
}

/// BFS from the least id of every component.
pub fn decompose(graph: &InputGraph) -> CircuitRankDecomposition {
    let n = graph.player_count();
    let mut seen = vec![false; n];
    let mut tree = BTreeSet::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in graph.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    tree.insert((v.min(w), v.max(w)));
                    queue.push_back(w);
                }
            }
        }
    }
    let non_tree_edges: Vec<_> = graph
        .edges()
        .iter()
        .copied()
        .filter(|e| !tree.contains(e))
        .collect();
    let endpoints: BTreeSet<Player> = non_tree_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    CircuitRankDecomposition {
        tree_edges: tree.into_iter().collect(),
        non_tree_edges,
        endpoints: endpoints.into_iter().collect(),
    }
}

pub fn solve_bounded_circuit_rank_psne(
    game: &BnpgGame,
    max_rank: usize,
) -> Result<Option<StrategyProfile>> {
    let rank = circuit_rank(game.graph());
    if rank > max_rank {
        return Err(BnpgError::RankExceeded {
            rank,
            max: max_rank,
        });
    }
    let game = if game.altruism().is_directed() {
        game.clone()
    } else {
        game.with_altruism(game.altruism().as_directed())?
    };
    let n = game.player_count();
    let mut actions = vec![0u8; n];
    for component in game.graph().components() {
        let sub = game.induced(&component)?;
        let Some(witness) = solve_connected(&sub)? else {
            return Ok(None);
        };
        for (i, &v) in component.iter().enumerate() {
            actions[v] = witness.action(i);
        }
    }
    let profile = StrategyProfile::new(actions)?;
    audit(&game, &profile, "circuit-rank")?;
    Ok(Some(profile))
}

/// One guessed tuple: actions `t` and total invest counts `s` on `V'`.
struct Guess {
    t: Vec<u8>,
    s: Vec<usize>,
}

fn solve_connected(game: &BnpgGame) -> Result<Option<StrategyProfile>> {
    let graph = game.graph();
    let dec = decompose(graph);
    if dec.non_tree_edges.is_empty() {
        return solve_tree_psne(game);
    }
    let n = game.player_count();
    let vp = &dec.endpoints;
    let ell = vp.len();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in vp.iter().enumerate() {
        slot[v] = i;
    }
    // Non-tree neighbours of each endpoint, as slots.
    let mut outside = vec![Vec::new(); ell];
    for &(u, v) in &dec.non_tree_edges {
        outside[slot[u]].push(slot[v]);
        outside[slot[v]].push(slot[u]);
    }
    let tree = InputGraph::new(n, dec.tree_edges.iter().copied())?;
    let tree_set: BTreeSet<_> = dec.tree_edges.iter().copied().collect();
    let arcs = game
        .altruism()
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| tree_set.contains(&(u.min(v), u.max(v))));
    let tree_altruism = AltruismNetwork::new(n, true, arcs)?;

    // Non-tree altruism partners of each endpoint: must themselves be endpoints.
    let mut partners = vec![Vec::new(); ell];
    for (i, &v) in vp.iter().enumerate() {
        for &u in game.altruism().out_neighbors(v) {
            if graph.has_edge(u, v) && !tree_set.contains(&(u.min(v), u.max(v))) {
                if slot[u] == usize::MAX {
                    return Err(BnpgError::Audit(format!(
                        "non-tree altruism partner {u} of {v} is not a non-tree endpoint"
                    )));
                }
                partners[i].push(slot[u]);
            }
        }
    }

    let radix: Vec<u64> = vp.iter().map(|&v| graph.degree(v) as u64 + 1).collect();
    let total = radix
        .iter()
        .try_fold(1u64 << ell, |acc, &r| acc.checked_mul(r))
        .filter(|&t| t <= CIRCUIT_TUPLE_LIMIT)
        .ok_or(BnpgError::SizeGuard {
            what: "circuit-rank tuple count",
            actual: usize::MAX,
            limit: CIRCUIT_TUPLE_LIMIT as usize,
        })?;

    let decode = |mut index: u64| -> Guess {
        let mut s = vec![0usize; ell];
        for i in (0..ell).rev() {
            s[i] = (index % radix[i]) as usize;
            index /= radix[i];
        }
        let t = (0..ell)
            .map(|i| (index >> (ell - 1 - i) & 1) as u8)
            .collect();
        Guess { t, s }
    };

    let attempt = |guess: Guess| -> Result<Option<StrategyProfile>> {
        let Guess { t, s } = guess;
        let mut constraints = Vec::with_capacity(ell);
        let mut shift = vec![0usize; ell];
        for i in 0..ell {
            shift[i] = outside[i].iter().map(|&j| t[j] as usize).sum();
            let v = vp[i];
            match s[i].checked_sub(shift[i]) {
                Some(c) if c <= tree.degree(v) => constraints.push(TreeConstraint {
                    player: v,
                    action: t[i],
                    invest_count: c,
                }),
                _ => return Ok(None),
            }
        }
        let mut tables = game.tables().to_vec();
        let mut costs = game.costs().to_vec();
        for i in 0..ell {
            let v = vp[i];
            tables[v] = tables[v].shifted(shift[i]);
            let mut sum = Rational::zero();
            for &j in &partners[i] {
                let level = t[j] as usize + s[j];
                let at = if t[i] == 1 { level - 1 } else { level };
                sum += game.dg(vp[j], at)?;
            }
            costs[v] = &costs[v] - &(sum * game.altruism_weight());
        }
        let modified = BnpgGame::new(
            tree.clone(),
            tree_altruism.clone(),
            tables,
            costs,
            game.altruism_weight().clone(),
        )?;
        let Some(witness) = solve_tree_psne_constrained(&modified, &constraints)? else {
            return Ok(None);
        };
        audit(game, &witness, "circuit-rank")?;
        Ok(Some(witness))
    };

    (0..total)
        .into_par_iter()
        .map(|index| attempt(decode(index)))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(Option::flatten)
}
