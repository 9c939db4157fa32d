//! Directed public goods games and their embedding into a BNPG game with
//! symmetric altruism. Node `u` becomes `u_in = u` and `u_out = n + u`.

use serde::{Deserialize, Serialize};

use crate::error::{BnpgError, Result};
use crate::game::{AltruismNetwork, BnpgGame, ExternalityTable, InputGraph, Player};
use crate::mixed::{poisson_binomial, EpsQuery, MixedProfile};
use crate::rational::Rational;

/// Utility of `v` is `Y(x_v + n_v^in) − p·x_v` with `Y` the 0/1 step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedPgg {
    pub nodes: usize,
    pub arcs: Vec<(Player, Player)>,
    pub price: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DpggVerdict {
    Equilibrium,
    Violation {
        player: Player,
        played: u8,
        alternative: u8,
        regret: Rational,
    },
}

impl DpggVerdict {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, DpggVerdict::Equilibrium)
    }
}

impl DirectedPgg {
    pub fn new(nodes: usize, arcs: Vec<(Player, Player)>, price: Rational) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &arcs {
            if u >= nodes || v >= nodes || u == v || !seen.insert((u, v)) {
                return Err(BnpgError::InvalidGraph(format!("bad arc ({u},{v})")));
            }
        }
        if price.is_negative() {
            return Err(BnpgError::InvalidInstance("negative price".into()));
        }
        let mut arcs = arcs;
        arcs.sort_unstable();
        Ok(DirectedPgg { nodes, arcs, price })
    }

    pub fn in_neighbors(&self, v: Player) -> Vec<Player> {
        self.arcs.iter().filter(|a| a.1 == v).map(|a| a.0).collect()
    }

    /// Expected utility of `v` playing `action` against independent mixing.
    pub fn expected_utility(&self, mixed: &MixedProfile, v: Player, action: u8) -> Rational {
        let loss = if action == 1 {
            self.price.clone()
        } else {
            Rational::zero()
        };
        if action == 1 {
            return Rational::one() - loss;
        }
        let probs: Vec<Rational> = self
            .in_neighbors(v)
            .iter()
            .map(|&u| mixed.probabilities()[u].clone())
            .collect();
        // Y = 1 unless every in-neighbour abstains.
        Rational::one() - &poisson_binomial(&probs)[0]
    }

    pub fn verify_eps_ne(&self, mixed: &MixedProfile, q: &EpsQuery) -> Result<DpggVerdict> {
        if mixed.len() != self.nodes {
            return Err(BnpgError::InvalidProfile(format!(
                "mixed profile has {} entries for {} nodes",
                mixed.len(),
                self.nodes
            )));
        }
        for v in 0..self.nodes {
            let values = [
                self.expected_utility(mixed, v, 0),
                self.expected_utility(mixed, v, 1),
            ];
            for played in mixed.support(v) {
                for alternative in 0..=1u8 {
                    let regret = &values[alternative as usize] - &values[played as usize];
                    if &regret > q.eps() {
                        return Ok(DpggVerdict::Violation {
                            player: v,
                            played,
                            alternative,
                            regret,
                        });
                    }
                }
            }
        }
        Ok(DpggVerdict::Equilibrium)
    }
}

pub fn dpgg_to_bnpg(dg: &DirectedPgg, eps: &Rational) -> Result<BnpgGame> {
    if !eps.is_positive() {
        return Err(BnpgError::Precondition(format!(
            "eps {eps} must be positive"
        )));
    }
    let n = dg.nodes;
    let mut edges: Vec<(Player, Player)> = (0..n).map(|u| (u, n + u)).collect();
    edges.extend(dg.arcs.iter().map(|&(u, v)| (n + u, v)));
    let graph = InputGraph::new(2 * n, edges)?;
    let altruism = AltruismNetwork::new(2 * n, false, (0..n).map(|u| (u, n + u)))?;

    let mut tables = Vec::with_capacity(2 * n);
    for u in 0..n {
        let len = graph.degree(u) + 2;
        let mut values = vec![Rational::one(); len];
        values[0] = Rational::zero();
        tables.push(ExternalityTable::new(values));
    }
    for u in 0..n {
        tables.push(ExternalityTable::constant(
            &Rational::zero(),
            graph.degree(n + u) + 2,
        ));
    }
    let mut costs = vec![Rational::one() + eps.mul_int(2); n];
    costs.extend(std::iter::repeat_n(dg.price.clone(), n));
    BnpgGame::new(graph, altruism, tables, costs, Rational::one())
}

/// Projection onto the `u_out` players; every `u_in` must abstain surely.
pub fn map_mixed_back(mixed: &MixedProfile) -> Result<MixedProfile> {
    if !mixed.len().is_multiple_of(2) {
        return Err(BnpgError::Mapping(format!(
            "profile of length {} is not over an embedded game",
            mixed.len()
        )));
    }
    let n = mixed.len() / 2;
    let probs = mixed.probabilities();
    if let Some(u) = (0..n).find(|&u| !probs[u].is_zero()) {
        return Err(BnpgError::Mapping(format!(
            "player {u} (u_in) invests with probability {}",
            probs[u]
        )));
    }
    MixedProfile::new(probs[n..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{verify_psne, StrategyProfile};
    use crate::oracle::enumerate_psne;

    fn single_arc(price: Rational) -> DirectedPgg {
        DirectedPgg::new(2, vec![(0, 1)], price).unwrap()
    }

    #[test]
    fn structure() {
        let g = dpgg_to_bnpg(&single_arc(Rational::new(1, 2)), &Rational::new(1, 10)).unwrap();
        assert_eq!(g.player_count(), 4);
        assert_eq!(g.graph().edge_count(), 3);
        assert_eq!(g.altruism().edges().len(), 2);
        assert!(crate::game::validate_game(&g).is_empty());
        assert!(dpgg_to_bnpg(&single_arc(Rational::one()), &Rational::zero()).is_err());
    }

    #[test]
    fn expensive_investing_gives_all_zero_equilibrium() {
        let g = dpgg_to_bnpg(&single_arc(Rational::from_int(2)), &Rational::new(1, 10)).unwrap();
        assert!(verify_psne(&g, &StrategyProfile::zeros(4))
            .unwrap()
            .is_equilibrium());
    }

    #[test]
    fn cheap_investing_source_invests() {
        let dg = single_arc(Rational::new(1, 2));
        let g = dpgg_to_bnpg(&dg, &Rational::new(1, 10)).unwrap();
        let all = enumerate_psne(&g).unwrap();
        assert!(!all.is_empty());
        for p in all {
            assert_eq!(&p.actions()[..2], &[0, 0]);
            assert_eq!(p.action(2), 1);
            let back = map_mixed_back(&MixedProfile::from_pure(&p)).unwrap();
            let q = EpsQuery::new(Rational::zero()).unwrap();
            assert!(dg.verify_eps_ne(&back, &q).unwrap().is_equilibrium());
        }
    }

    #[test]
    fn mapping_rejects_investing_inputs() {
        let mixed = MixedProfile::new(vec![
            Rational::new(1, 3),
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
        ])
        .unwrap();
        assert!(matches!(map_mixed_back(&mixed), Err(BnpgError::Mapping(_))));
    }
}
