//! Decision knapsack to ANM on a `2n+1`-node tree. Item `i` (0-based) is
//! player `i`, its partner leaf is `n+i` and the hub is `2n`.

use std::collections::BTreeMap;

use crate::anm::{AnmInstance, Budget, Edge};
use crate::error::{BnpgError, Result};
use crate::game::{AltruismNetwork, BnpgGame, ExternalityTable, InputGraph, StrategyProfile};
use crate::knapsack::KnapsackInstance;
use crate::oracle::KNAPSACK_ITEM_LIMIT;
use crate::rational::Rational;

use super::Symmetry;

fn decision_parameters(ks: &KnapsackInstance) -> Result<(Rational, u64)> {
    ks.validate()?;
    match (&ks.threshold, ks.capacity) {
        (Some(p), Some(w)) => Ok((p.clone(), w)),
        _ => Err(BnpgError::Precondition(
            "decision knapsack needs both a profit threshold and a capacity".into(),
        )),
    }
}

/// Whether some selection reaches the threshold within the capacity.
pub fn knapsack_feasible_brute(ks: &KnapsackInstance) -> Result<bool> {
    let (p, w) = decision_parameters(ks)?;
    let k = ks.items.len();
    if k > KNAPSACK_ITEM_LIMIT {
        return Err(BnpgError::SizeGuard {
            what: "knapsack item count",
            actual: k,
            limit: KNAPSACK_ITEM_LIMIT,
        });
    }
    Ok((0..1u64 << k).any(|mask| {
        let chosen = (0..k).filter(|i| mask >> i & 1 == 1);
        let weight: u64 = chosen.clone().map(|i| ks.items[i].weight).sum();
        weight <= w && chosen.map(|i| &ks.items[i].profit).sum::<Rational>() >= p
    }))
}

pub fn knapsack_to_anm(ks: &KnapsackInstance, symmetry: Symmetry) -> Result<AnmInstance> {
    let (p, w) = decision_parameters(ks)?;
    let n = ks.items.len();
    let hub = 2 * n;
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n {
        edges.push((i, n + i));
        edges.push((i, hub));
    }
    let graph = InputGraph::new(2 * n + 1, edges)?;

    let mut tables = Vec::with_capacity(2 * n + 1);
    for item in &ks.items {
        tables.push(ExternalityTable::linear(&item.profit, 4));
    }
    for _ in 0..n {
        tables.push(ExternalityTable::linear(&p, 3));
    }
    tables.push(ExternalityTable::constant(&Rational::zero(), n + 2));

    let directed = symmetry == Symmetry::Asymmetric;
    let mut add_costs: BTreeMap<Edge, u64> = BTreeMap::new();
    for (i, item) in ks.items.iter().enumerate() {
        if directed {
            add_costs.insert((hub, i), item.weight);
            add_costs.insert((i, hub), 0);
            add_costs.insert((i, n + i), 0);
            add_costs.insert((n + i, i), 0);
        } else {
            add_costs.insert((i, hub), item.weight);
            add_costs.insert((i, n + i), 0);
        }
    }

    let game = BnpgGame::new(
        graph,
        AltruismNetwork::empty(2 * n + 1, directed),
        tables,
        vec![p; 2 * n + 1],
        Rational::one(),
    )?;
    AnmInstance::new(
        game,
        StrategyProfile::ones(2 * n + 1),
        add_costs,
        [],
        Budget::Finite(w),
    )
}
