//! Heterogeneous to fully homogeneous ANM. Player `i` of the source becomes
//! hub `i` of the output; each hub gets a private star of investing padding
//! leaves that shifts its neighbour count into its own segment of one
//! stitched externality table.

use std::collections::BTreeMap;

use crate::anm::{AnmInstance, Budget, Edge, EditSet};
use crate::error::{BnpgError, Result};
use crate::game::{AltruismNetwork, BnpgGame, ExternalityTable, InputGraph, StrategyProfile};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Asymmetric,
    Symmetric,
}

/// Output instance plus the edit-set maps between source and output.
#[derive(Clone, Debug)]
pub struct Homogenized {
    pub instance: AnmInstance,
    /// Number of hubs, equal to the source player count.
    pub hubs: usize,
    /// Padding size of each hub.
    pub padding: Vec<usize>,
}

impl Homogenized {
    /// Source edits to output edits (hub `i` stands for player `i`).
    pub fn forward(&self, edits: &EditSet) -> Result<EditSet> {
        self.instance
            .edit_set(edits.additions.clone(), edits.deletions.clone())
    }

    /// Output edits to source edits; an edit touching padding has no preimage.
    pub fn backward(&self, source: &AnmInstance, edits: &EditSet) -> Result<EditSet> {
        let on_hubs = |e: &Edge| e.0 < self.hubs && e.1 < self.hubs;
        if let Some(e) = edits
            .additions
            .iter()
            .chain(&edits.deletions)
            .find(|e| !on_hubs(e))
        {
            return Err(BnpgError::Mapping(format!(
                "edit ({},{}) touches a padding player",
                e.0, e.1
            )));
        }
        source.edit_set(edits.additions.clone(), edits.deletions.clone())
    }
}

/// `g(x) = c·x` for `x ≤ 2`; above that, marginal `Δg(y)` for `y ≥ 2` is
/// `Δg_s(h)` of segment `s = 1 + ⌊(y−2)/width⌋` at offset
/// `h = y − (2 + width·(s−1))`, or 0 when segment or offset is not tabulated.
pub fn stitched_table(
    c: &Rational,
    width: usize,
    segments: &[&ExternalityTable],
    len: usize,
) -> ExternalityTable {
    let mut values = Vec::with_capacity(len);
    for x in 0..len {
        let value = if x <= 2 {
            c.mul_int(x as i64)
        } else {
            let y = x - 1;
            let s = 1 + (y - 2) / width;
            let h = y - (2 + width * (s - 1));
            let step = segments
                .get(s - 1)
                .and_then(|t| t.marginal(h))
                .unwrap_or_else(Rational::zero);
            &values[x - 1] + &step
        };
        values.push(value);
    }
    ExternalityTable::new(values)
}

fn uniform_cost(game: &BnpgGame) -> Result<Rational> {
    let c = game.cost(0).clone();
    if game.costs().iter().any(|x| x != &c) {
        return Err(BnpgError::Precondition(
            "homogenization needs the same investing cost for every player".into(),
        ));
    }
    Ok(c)
}

/// Shared construction: hubs `0..n`, then each hub's padding leaves in order.
fn build(
    anm: &AnmInstance,
    padding: Vec<usize>,
    width: usize,
    segments: &[&ExternalityTable],
) -> Result<Homogenized> {
    let game = anm.game();
    let n = game.player_count();
    let c = uniform_cost(game)?;

    let mut edges: Vec<Edge> = game.graph().edges().to_vec();
    let mut next = n;
    for (hub, &size) in padding.iter().enumerate() {
        for _ in 0..size {
            edges.push((hub, next));
            next += 1;
        }
    }
    let total = next;
    let graph = InputGraph::new(total, edges)?;
    let len = graph.max_degree() + 2;
    let table = stitched_table(&c, width, segments, len);

    let source_h = game.altruism();
    let altruism = AltruismNetwork::new(total, source_h.is_directed(), source_h.edges().to_vec())?;

    let mut actions = anm.target().actions().to_vec();
    actions.resize(total, 1);
    let target = StrategyProfile::new(actions)?;

    // Hub pairs keep their source costs; every other addable pair is priced
    // out of any finite budget, and simply not offered under an infinite one.
    let mut add_costs: BTreeMap<Edge, u64> = anm.add_costs().clone();
    if let Budget::Finite(b) = anm.budget() {
        for &(u, v) in graph.edges() {
            let pairs: &[Edge] = if altruism.is_directed() {
                &[(u, v), (v, u)]
            } else {
                &[(u, v)]
            };
            for &(s, t) in pairs {
                let key = altruism.key(s, t);
                if !altruism.contains(s, t) && !add_costs.contains_key(&key) {
                    add_costs.insert(key, b + 1);
                }
            }
        }
    }

    let out = BnpgGame::new(
        graph,
        altruism,
        vec![table; total],
        vec![c; total],
        game.altruism_weight().clone(),
    )?;
    let instance = AnmInstance::new(
        out,
        target,
        add_costs,
        anm.delete_costs().clone(),
        anm.budget(),
    )?;
    Ok(Homogenized {
        instance,
        hubs: n,
        padding,
    })
}

/// Padding of hub `i` (0-based) is `2 + n·i`; segment `i` is player `i`'s table.
pub fn homogenize(anm: &AnmInstance, symmetry: Symmetry) -> Result<Homogenized> {
    let directed = anm.is_directed();
    if directed != (symmetry == Symmetry::Asymmetric) {
        return Err(BnpgError::Precondition(format!(
            "requested {symmetry:?} homogenization of a {} altruism network",
            if directed { "directed" } else { "undirected" }
        )));
    }
    let n = anm.game().player_count();
    let padding = (0..n).map(|i| 2 + n * i).collect();
    let segments: Vec<&ExternalityTable> = anm.game().tables().iter().collect();
    build(anm, padding, n, &segments)
}

/// Degree-≤3 symmetric input with at most three distinct tables. Types are
/// numbered by first appearance; a hub of type `t` (0-based) gets `2 + 4t`
/// padding leaves, so the output degree is at most 13.
pub fn homogenize_bounded_degree(anm: &AnmInstance) -> Result<Homogenized> {
    let game = anm.game();
    if anm.is_directed() {
        return Err(BnpgError::Precondition(
            "bounded-degree homogenization needs symmetric altruism".into(),
        ));
    }
    if game.graph().max_degree() > 3 {
        return Err(BnpgError::Precondition(format!(
            "maximum degree {} exceeds 3",
            game.graph().max_degree()
        )));
    }
    let mut types: Vec<&ExternalityTable> = Vec::new();
    let mut padding = Vec::with_capacity(game.player_count());
    for table in game.tables() {
        let t = match types.iter().position(|&u| u == table) {
            Some(t) => t,
            None => {
                types.push(table);
                types.len() - 1
            }
        };
        padding.push(2 + 4 * t);
    }
    if types.len() > 3 {
        return Err(BnpgError::Precondition(format!(
            "{} distinct externality tables, at most 3 allowed",
            types.len()
        )));
    }
    build(anm, padding, 4, &types)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(directed: bool, costs: [i64; 2]) -> AnmInstance {
        let game = BnpgGame::new(
            InputGraph::new(2, [(0, 1)]).unwrap(),
            AltruismNetwork::empty(2, directed),
            vec![
                ExternalityTable::from_ints(&[0, 1, 2]),
                ExternalityTable::from_ints(&[0, 3, 3]),
            ],
            vec![Rational::from_int(costs[0]), Rational::from_int(costs[1])],
            Rational::one(),
        )
        .unwrap();
        AnmInstance::new(
            game,
            StrategyProfile::ones(2),
            [((0, 1), 1)],
            [],
            Budget::Finite(1),
        )
        .unwrap()
    }

    #[test]
    fn table_prefix_is_linear_in_cost() {
        let t = stitched_table(
            &Rational::from_int(5),
            2,
            &[&ExternalityTable::from_ints(&[0, 1, 2])],
            3,
        );
        assert_eq!(t, ExternalityTable::from_ints(&[0, 5, 10]));
    }

    #[test]
    fn padding_sizes() {
        let game = BnpgGame::new(
            InputGraph::new(3, [(0, 1), (1, 2)]).unwrap(),
            AltruismNetwork::empty(3, true),
            vec![ExternalityTable::from_ints(&[0, 1, 2, 3]); 3],
            vec![Rational::one(); 3],
            Rational::one(),
        )
        .unwrap();
        let anm =
            AnmInstance::new(game, StrategyProfile::ones(3), [], [], Budget::Infinite).unwrap();
        let h = homogenize(&anm, Symmetry::Asymmetric).unwrap();
        assert_eq!(h.padding, vec![2, 5, 8]);
        assert_eq!(h.instance.game().player_count(), 3 + 15);
        assert!(h.instance.game().is_fully_homogeneous());
    }

    #[test]
    fn segments_reproduce_source_marginals() {
        let anm = tiny(true, [2, 2]);
        let h = homogenize(&anm, Symmetry::Asymmetric).unwrap();
        let out = h.instance.game();
        // Hub i sits at level 2 + 2i; its marginals there are player i's.
        for (i, base) in [(0usize, 2usize), (1, 4)] {
            for k in 0..2 {
                assert_eq!(out.dg(i, base + k).unwrap(), anm.game().dg(i, k).unwrap());
            }
        }
        assert!(crate::game::validate_game(out).is_empty());
    }

    #[test]
    fn preconditions() {
        assert!(homogenize(&tiny(true, [1, 2]), Symmetry::Asymmetric).is_err());
        assert!(homogenize(&tiny(true, [1, 1]), Symmetry::Symmetric).is_err());
        assert!(homogenize_bounded_degree(&tiny(true, [1, 1])).is_err());
    }

    #[test]
    fn bounded_degree_padding_by_type() {
        let h = homogenize_bounded_degree(&tiny(false, [2, 2])).unwrap();
        assert_eq!(h.padding, vec![2, 6]);
        assert!(h.instance.game().graph().max_degree() <= 13);
        let forbidden = h.instance.add_costs().values().filter(|&&c| c == 2).count();
        assert_eq!(forbidden, 8);
    }
}
