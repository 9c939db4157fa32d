//! Altruistic network modification: edit the altruism network at minimum
//! cost so that a target profile becomes a pure equilibrium.
//!
//! Under asymmetric altruism the stability of `v` depends only on its own
//! out-edges, so the problem splits into one minimum knapsack per player.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{BnpgError, Result};
use crate::game::{invest_counts, verify_psne, BnpgGame, Player, StrategyProfile};
use crate::knapsack::{min_knapsack, KnapsackItem, MinKnapsack};
use crate::rational::Rational;

pub type Edge = (Player, Player);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Budget {
    Finite(u64),
    Infinite,
}

impl Budget {
    pub fn allows(&self, cost: u64) -> bool {
        match self {
            Budget::Finite(b) => cost <= *b,
            Budget::Infinite => true,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Finite(b) => write!(f, "{b}"),
            Budget::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EditKind {
    Add,
    Delete,
}

/// One permitted edit with its cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateEdit {
    pub kind: EditKind,
    pub edge: Edge,
    pub cost: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnmInstance {
    game: BnpgGame,
    target: StrategyProfile,
    add_costs: BTreeMap<Edge, u64>,
    delete_costs: BTreeMap<Edge, u64>,
    budget: Budget,
}

impl AnmInstance {
    /// Edges absent from both cost maps cannot be edited. Edge keys follow
    /// the altruism network's directedness (undirected keys are normalised).
    pub fn new(
        game: BnpgGame,
        target: StrategyProfile,
        add_costs: impl IntoIterator<Item = (Edge, u64)>,
        delete_costs: impl IntoIterator<Item = (Edge, u64)>,
        budget: Budget,
    ) -> Result<Self> {
        if target.len() != game.player_count() {
            return Err(BnpgError::InvalidProfile(format!(
                "target has {} entries for {} players",
                target.len(),
                game.player_count()
            )));
        }
        let h = game.altruism();
        let mut adds = BTreeMap::new();
        for ((u, v), cost) in add_costs {
            if !game.graph().has_edge(u, v) {
                return Err(BnpgError::InvalidInstance(format!(
                    "addable edge ({u},{v}) is not an input-graph edge"
                )));
            }
            if h.contains(u, v) {
                return Err(BnpgError::InvalidInstance(format!(
                    "addable edge ({u},{v}) is already in the altruism network"
                )));
            }
            if adds.insert(h.key(u, v), cost).is_some() {
                return Err(BnpgError::InvalidInstance(format!(
                    "duplicate add cost for ({u},{v})"
                )));
            }
        }
        let mut dels = BTreeMap::new();
        for ((u, v), cost) in delete_costs {
            if !h.contains(u, v) {
                return Err(BnpgError::InvalidInstance(format!(
                    "deletable edge ({u},{v}) is not in the altruism network"
                )));
            }
            if dels.insert(h.key(u, v), cost).is_some() {
                return Err(BnpgError::InvalidInstance(format!(
                    "duplicate delete cost for ({u},{v})"
                )));
            }
        }
        Ok(AnmInstance {
            game,
            target,
            add_costs: adds,
            delete_costs: dels,
            budget,
        })
    }

    pub fn game(&self) -> &BnpgGame {
        &self.game
    }

    pub fn target(&self) -> &StrategyProfile {
        &self.target
    }

    pub fn add_costs(&self) -> &BTreeMap<Edge, u64> {
        &self.add_costs
    }

    pub fn delete_costs(&self) -> &BTreeMap<Edge, u64> {
        &self.delete_costs
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn is_directed(&self) -> bool {
        self.game.altruism().is_directed()
    }

    /// All permitted edits: additions then deletions, each by edge.
    pub fn candidates(&self) -> Vec<CandidateEdit> {
        let adds = self.add_costs.iter().map(|(&edge, &cost)| CandidateEdit {
            kind: EditKind::Add,
            edge,
            cost,
        });
        let dels = self
            .delete_costs
            .iter()
            .map(|(&edge, &cost)| CandidateEdit {
                kind: EditKind::Delete,
                edge,
                cost,
            });
        adds.chain(dels).collect()
    }

    /// Builds an edit set from chosen edges, pricing each from the cost maps.
    pub fn edit_set(&self, additions: Vec<Edge>, deletions: Vec<Edge>) -> Result<EditSet> {
        let h = self.game.altruism();
        let mut total = 0u64;
        let mut adds: Vec<Edge> = additions.into_iter().map(|(u, v)| h.key(u, v)).collect();
        let mut dels: Vec<Edge> = deletions.into_iter().map(|(u, v)| h.key(u, v)).collect();
        adds.sort_unstable();
        adds.dedup();
        dels.sort_unstable();
        dels.dedup();
        for e in &adds {
            total += self.add_costs.get(e).ok_or_else(|| {
                BnpgError::InvalidInstance(format!("edge ({},{}) may not be added", e.0, e.1))
            })?;
        }
        for e in &dels {
            total += self.delete_costs.get(e).ok_or_else(|| {
                BnpgError::InvalidInstance(format!("edge ({},{}) may not be deleted", e.0, e.1))
            })?;
        }
        Ok(EditSet {
            additions: adds,
            deletions: dels,
            total_cost: total,
        })
    }

    /// The game after applying `edits` to the altruism network.
    pub fn apply(&self, edits: &EditSet) -> Result<BnpgGame> {
        let h = self
            .game
            .altruism()
            .with_edits(&edits.additions, &edits.deletions)?;
        self.game.with_altruism(h)
    }

    /// Whether `edits` is within budget and makes the target an equilibrium.
    pub fn certifies(&self, edits: &EditSet) -> Result<bool> {
        if !self.budget.allows(edits.total_cost) {
            return Ok(false);
        }
        let game = self.apply(edits)?;
        Ok(verify_psne(&game, &self.target)?.is_equilibrium())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EditSet {
    pub additions: Vec<Edge>,
    pub deletions: Vec<Edge>,
    pub total_cost: u64,
}

impl EditSet {
    pub fn is_empty(&self) -> bool {
        self.additions.is_empty() && self.deletions.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnapsackMode {
    /// Target invests; buy added out-edges until investing is stable.
    Raise,
    /// Target abstains; delete out-edges until abstaining is stable.
    Lower,
}

/// Minimum-knapsack subproblem of one player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayerKnapsack {
    pub owner: Player,
    pub mode: KnapsackMode,
    pub edges: Vec<Edge>,
    pub items: Vec<KnapsackItem>,
    pub threshold: Rational,
}

/// One knapsack per player whose target action is currently unstable.
pub fn decompose_anm_asymmetric(anm: &AnmInstance) -> Result<Vec<PlayerKnapsack>> {
    if !anm.is_directed() {
        return Err(BnpgError::Precondition(
            "per-player decomposition requires a directed altruism network".into(),
        ));
    }
    let game = anm.game();
    let target = anm.target();
    let counts = invest_counts(game.graph(), target);
    let a = game.altruism_weight();
    let level = |u: Player| target.action(u) as usize + counts[u];

    let mut out = Vec::new();
    for v in 0..game.player_count() {
        let own = game.dg(v, counts[v])?;
        if target.action(v) == 1 {
            // Profit of out-edge (v,u): a·Δg_u at u's level without v.
            let profit = |u: Player| -> Result<Rational> { Ok(a * game.dg(u, level(u) - 1)?) };
            let mut existing = Rational::zero();
            for &u in game.altruism().out_neighbors(v) {
                if game.graph().has_edge(u, v) {
                    existing += profit(u)?;
                }
            }
            let deficit = game.cost(v) - &own - &existing;
            if !deficit.is_positive() {
                continue;
            }
            let mut edges = Vec::new();
            let mut items = Vec::new();
            for (&(from, to), &cost) in anm.add_costs() {
                if from == v {
                    edges.push((from, to));
                    items.push(KnapsackItem::new(profit(to)?, cost));
                }
            }
            out.push(PlayerKnapsack {
                owner: v,
                mode: KnapsackMode::Raise,
                edges,
                items,
                threshold: deficit,
            });
        } else {
            let profit = |u: Player| -> Result<Rational> { Ok(a * game.dg(u, level(u))?) };
            let mut existing = Rational::zero();
            for &u in game.altruism().out_neighbors(v) {
                if game.graph().has_edge(u, v) {
                    existing += profit(u)?;
                }
            }
            let excess = own + &existing - game.cost(v);
            if !excess.is_positive() {
                continue;
            }
            let mut edges = Vec::new();
            let mut items = Vec::new();
            for (&(from, to), &cost) in anm.delete_costs() {
                if from == v {
                    edges.push((from, to));
                    items.push(KnapsackItem::new(profit(to)?, cost));
                }
            }
            out.push(PlayerKnapsack {
                owner: v,
                mode: KnapsackMode::Lower,
                edges,
                items,
                threshold: excess,
            });
        }
    }
    Ok(out)
}

/// Minimum-cost edit set under asymmetric altruism, or `None` if no edit set
/// within budget exists.
pub fn solve_anm_asymmetric(anm: &AnmInstance) -> Result<Option<EditSet>> {
    let knapsacks = decompose_anm_asymmetric(anm)?;
    let solved: Vec<MinKnapsack> = knapsacks
        .par_iter()
        .map(|k| min_knapsack(&k.items, &k.threshold))
        .collect::<Result<_>>()?;

    let mut additions = Vec::new();
    let mut deletions = Vec::new();
    for (k, result) in knapsacks.iter().zip(&solved) {
        let MinKnapsack::Optimal { selection, .. } = result else {
            return Ok(None);
        };
        let chosen = selection.iter().map(|&i| k.edges[i]);
        match k.mode {
            KnapsackMode::Raise => additions.extend(chosen),
            KnapsackMode::Lower => deletions.extend(chosen),
        }
    }
    let edits = anm.edit_set(additions, deletions)?;
    if !anm.budget().allows(edits.total_cost) {
        return Ok(None);
    }
    let game = anm.apply(&edits)?;
    if !verify_psne(&game, anm.target())?.is_equilibrium() {
        return Err(BnpgError::Audit(
            "knapsack edit set does not make the target an equilibrium".into(),
        ));
    }
    Ok(Some(edits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{AltruismNetwork, ExternalityTable, InputGraph};

    /// G-edge {0,1}; v = 0 with g ≡ 0, u = 1 with slope 2; c = 1; target (1,1).
    pub(crate) fn micro_gadget(budget: u64) -> AnmInstance {
        let game = BnpgGame::new(
            InputGraph::new(2, [(0, 1)]).unwrap(),
            AltruismNetwork::empty(2, true),
            vec![
                ExternalityTable::from_ints(&[0, 0, 0]),
                ExternalityTable::from_ints(&[0, 2, 4]),
            ],
            vec![Rational::one(); 2],
            Rational::one(),
        )
        .unwrap();
        AnmInstance::new(
            game,
            StrategyProfile::ones(2),
            [((0, 1), 3)],
            [],
            Budget::Finite(budget),
        )
        .unwrap()
    }

    #[test]
    fn micro_gadget_decomposition() {
        let ks = decompose_anm_asymmetric(&micro_gadget(3)).unwrap();
        assert_eq!(ks.len(), 1);
        assert_eq!(ks[0].owner, 0);
        assert_eq!(ks[0].mode, KnapsackMode::Raise);
        assert_eq!(
            ks[0].items,
            vec![KnapsackItem::new(Rational::from_int(2), 3)]
        );
        assert_eq!(ks[0].threshold, 1);
    }

    #[test]
    fn micro_gadget_solutions() {
        let edits = solve_anm_asymmetric(&micro_gadget(3)).unwrap().unwrap();
        assert_eq!(edits.additions, vec![(0, 1)]);
        assert_eq!(edits.total_cost, 3);
        assert_eq!(solve_anm_asymmetric(&micro_gadget(2)).unwrap(), None);
    }

    #[test]
    fn target_already_equilibrium() {
        let game = BnpgGame::new(
            InputGraph::new(2, [(0, 1)]).unwrap(),
            AltruismNetwork::empty(2, true),
            vec![ExternalityTable::from_ints(&[0, 2, 4]); 2],
            vec![Rational::one(); 2],
            Rational::one(),
        )
        .unwrap();
        let anm = AnmInstance::new(
            game,
            StrategyProfile::ones(2),
            [((0, 1), 5)],
            [],
            Budget::Finite(0),
        )
        .unwrap();
        assert!(decompose_anm_asymmetric(&anm).unwrap().is_empty());
        assert_eq!(
            solve_anm_asymmetric(&anm).unwrap(),
            Some(EditSet::default())
        );
    }

    /// Star centre 0 abstains but two existing out-edges make investing pay.
    #[test]
    fn star_centre_lower_mode() {
        let game = BnpgGame::new(
            InputGraph::new(3, [(0, 1), (0, 2)]).unwrap(),
            AltruismNetwork::new(3, true, [(0, 1), (0, 2)]).unwrap(),
            vec![
                ExternalityTable::from_ints(&[0, 1, 2, 3]),
                ExternalityTable::from_ints(&[0, 2, 4]),
                ExternalityTable::from_ints(&[0, 3, 6]),
            ],
            vec![Rational::from_int(4), Rational::one(), Rational::one()],
            Rational::one(),
        )
        .unwrap();
        let anm = AnmInstance::new(
            game,
            StrategyProfile::new(vec![0, 1, 1]).unwrap(),
            [],
            [((0, 1), 2), ((0, 2), 5)],
            Budget::Infinite,
        )
        .unwrap();
        let ks = decompose_anm_asymmetric(&anm).unwrap();
        assert_eq!(ks.len(), 1);
        assert_eq!(ks[0].mode, KnapsackMode::Lower);
        assert_eq!(ks[0].items.len(), 2);
        // 1 + 2 + 3 - 4 = 2 excess; deleting (0,1) removes 2 at cost 2.
        assert_eq!(ks[0].threshold, 2);
        let edits = solve_anm_asymmetric(&anm).unwrap().unwrap();
        assert_eq!(edits.deletions, vec![(0, 1)]);
        assert_eq!(edits.total_cost, 2);
    }

    #[test]
    fn rejects_symmetric_and_bad_edges() {
        let game = BnpgGame::new(
            InputGraph::new(3, [(0, 1)]).unwrap(),
            AltruismNetwork::empty(3, false),
            vec![ExternalityTable::from_ints(&[0, 1, 2]); 3],
            vec![Rational::one(); 3],
            Rational::one(),
        )
        .unwrap();
        let anm = AnmInstance::new(
            game.clone(),
            StrategyProfile::ones(3),
            [((1, 0), 1)],
            [],
            Budget::Infinite,
        )
        .unwrap();
        assert_eq!(anm.add_costs().keys().next(), Some(&(0, 1)));
        assert!(matches!(
            decompose_anm_asymmetric(&anm),
            Err(BnpgError::Precondition(_))
        ));
        assert!(AnmInstance::new(
            game,
            StrategyProfile::ones(3),
            [((0, 2), 1)],
            [],
            Budget::Infinite
        )
        .is_err());
    }
}
