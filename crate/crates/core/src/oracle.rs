//! Brute-force reference implementations. Every solver is tested against
//! these, so they favour obviousness over speed and refuse large inputs.

use rayon::prelude::*;

use crate::anm::{AnmInstance, CandidateEdit, EditKind, EditSet};
use crate::error::{BnpgError, Result};
use crate::game::{verify_psne, BnpgGame, StrategyProfile};
use crate::knapsack::{KnapsackItem, MinKnapsack};
use crate::rational::Rational;

pub const PSNE_PLAYER_LIMIT: usize = 25;
pub const KNAPSACK_ITEM_LIMIT: usize = 24;
pub const ANM_CANDIDATE_LIMIT: usize = 20;

/// Profile whose actions, read from player 0 onwards, spell `index` in binary.
fn lex_profile(n: usize, index: u64) -> StrategyProfile {
    let mask = (0..n).fold(0u64, |m, v| m | (((index >> (n - 1 - v)) & 1) << v));
    StrategyProfile::from_mask(n, mask)
}

/// All pure equilibria, in lexicographic order of the action vector.
pub fn enumerate_psne(game: &BnpgGame) -> Result<Vec<StrategyProfile>> {
    let n = game.player_count();
    if n > PSNE_PLAYER_LIMIT {
        return Err(BnpgError::SizeGuard {
            what: "player count",
            actual: n,
            limit: PSNE_PLAYER_LIMIT,
        });
    }
    let found: Vec<Option<StrategyProfile>> = (0..1u64 << n)
        .into_par_iter()
        .map(|i| {
            let p = lex_profile(n, i);
            Ok(verify_psne(game, &p)?.is_equilibrium().then_some(p))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Minimum weight of a selection whose profit reaches `threshold`.
pub fn brute_min_knapsack(items: &[KnapsackItem], threshold: &Rational) -> Result<MinKnapsack> {
    let k = items.len();
    if k > KNAPSACK_ITEM_LIMIT {
        return Err(BnpgError::SizeGuard {
            what: "knapsack item count",
            actual: k,
            limit: KNAPSACK_ITEM_LIMIT,
        });
    }
    let best = (0..1u64 << k)
        .into_par_iter()
        .filter_map(|mask| {
            let chosen = (0..k).filter(|i| mask >> i & 1 == 1);
            let profit: Rational = chosen.clone().map(|i| &items[i].profit).sum();
            (&profit >= threshold).then(|| (chosen.map(|i| items[i].weight).sum::<u64>(), mask))
        })
        .min();
    Ok(match best {
        None => MinKnapsack::Infeasible,
        Some((weight, mask)) => MinKnapsack::Optimal {
            weight,
            selection: (0..k).filter(|i| mask >> i & 1 == 1).collect(),
        },
    })
}

/// `max Σ p_i` over selections of weight at most `capacity`.
pub fn brute_max_knapsack(items: &[KnapsackItem], capacity: u64) -> Result<Rational> {
    let k = items.len();
    if k > KNAPSACK_ITEM_LIMIT {
        return Err(BnpgError::SizeGuard {
            what: "knapsack item count",
            actual: k,
            limit: KNAPSACK_ITEM_LIMIT,
        });
    }
    Ok((0..1u64 << k)
        .into_par_iter()
        .filter_map(|mask| {
            let chosen = (0..k).filter(|i| mask >> i & 1 == 1);
            let weight: u64 = chosen.clone().map(|i| items[i].weight).sum();
            (weight <= capacity).then(|| chosen.map(|i| &items[i].profit).sum::<Rational>())
        })
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Subsets of `0..costs.len()` with total cost at most `limit`, as bitmasks
/// listed in lexicographic order of their sorted index lists.
fn subsets_within(costs: &[u64], limit: Option<u64>) -> Vec<(u64, u32)> {
    fn walk(
        costs: &[u64],
        limit: Option<u64>,
        start: usize,
        mask: u32,
        cost: u64,
        out: &mut Vec<(u64, u32)>,
    ) {
        out.push((cost, mask));
        for i in start..costs.len() {
            let next = cost + costs[i];
            if limit.is_some_and(|l| next > l) {
                continue;
            }
            walk(costs, limit, i + 1, mask | 1 << i, next, out);
        }
    }
    let mut out = Vec::new();
    walk(costs, limit, 0, 0, 0, &mut out);
    out
}

/// Minimum-cost edit set making the target an equilibrium, ties broken by the
/// lexicographically smallest list of candidate indices; `None` if nothing
/// within budget works. Works for directed and undirected altruism.
pub fn brute_anm(anm: &AnmInstance) -> Result<Option<EditSet>> {
    let limit = match anm.budget() {
        crate::anm::Budget::Finite(b) => Some(b),
        crate::anm::Budget::Infinite => None,
    };
    // An edit costing more than the budget can never be part of an answer.
    let candidates: Vec<CandidateEdit> = anm
        .candidates()
        .into_iter()
        .filter(|c| limit.is_none_or(|l| c.cost <= l))
        .collect();
    if candidates.len() > ANM_CANDIDATE_LIMIT {
        return Err(BnpgError::SizeGuard {
            what: "affordable candidate edit count",
            actual: candidates.len(),
            limit: ANM_CANDIDATE_LIMIT,
        });
    }
    let costs: Vec<u64> = candidates.iter().map(|c| c.cost).collect();
    let mut subsets = subsets_within(&costs, limit);
    subsets.sort_by_key(|(cost, _)| *cost);

    let materialise = |mask: u32| {
        let mut additions = Vec::new();
        let mut deletions = Vec::new();
        for i in (0..candidates.len()).filter(|i| mask >> i & 1 == 1) {
            match candidates[i].kind {
                EditKind::Add => additions.push(candidates[i].edge),
                EditKind::Delete => deletions.push(candidates[i].edge),
            }
        }
        anm.edit_set(additions, deletions)
    };

    let mut start = 0;
    while start < subsets.len() {
        let cost = subsets[start].0;
        let end = start + subsets[start..].partition_point(|(c, _)| *c == cost);
        let hit = subsets[start..end]
            .par_iter()
            .map(|&(_, mask)| -> Result<Option<EditSet>> {
                let edits = materialise(mask)?;
                let game = anm.apply(&edits)?;
                Ok(verify_psne(&game, anm.target())?
                    .is_equilibrium()
                    .then_some(edits))
            })
            .find_first(|r| !matches!(r, Ok(None)));
        if let Some(result) = hit {
            return result;
        }
        start = end;
    }
    Ok(None)
}
