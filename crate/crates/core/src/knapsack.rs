//! 0/1 knapsack: capacity-bounded profit maximisation by meet-in-the-middle,
//! and minimum knapsack (cheapest selection reaching a profit threshold) by
//! binary search over the capacity.

use serde::{Deserialize, Serialize};

use crate::error::{BnpgError, Result};
use crate::rational::Rational;

/// Largest item count accepted by the meet-in-the-middle solver.
pub const MITM_ITEM_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackItem {
    pub profit: Rational,
    pub weight: u64,
}

impl KnapsackItem {
    pub fn new(profit: Rational, weight: u64) -> Self {
        KnapsackItem { profit, weight }
    }
}

/// Items plus a profit threshold `P` (minimum mode) and/or a capacity `W`
/// (maximum mode; both together form the decision problem).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub items: Vec<KnapsackItem>,
    pub threshold: Option<Rational>,
    pub capacity: Option<u64>,
}

impl KnapsackInstance {
    pub fn total_weight(&self) -> u64 {
        self.items.iter().map(|i| i.weight).sum()
    }

    pub fn total_profit(&self) -> Rational {
        self.items.iter().map(|i| &i.profit).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(i) = self.items.iter().position(|i| i.profit.is_negative()) {
            return Err(BnpgError::InvalidInstance(format!(
                "item {i} has negative profit"
            )));
        }
        Ok(())
    }
}

struct HalfEntry {
    weight: u64,
    profit: Rational,
    mask: u64,
}

fn enumerate_half(items: &[KnapsackItem]) -> Vec<HalfEntry> {
    let count = 1usize << items.len();
    let mut weights = vec![0u64; count];
    let mut profits = vec![Rational::zero(); count];
    for mask in 1..count {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        weights[mask] = weights[rest] + items[low].weight;
        profits[mask] = &profits[rest] + &items[low].profit;
    }
    profits
        .into_iter()
        .zip(weights)
        .enumerate()
        .map(|(mask, (profit, weight))| HalfEntry {
            weight,
            profit,
            mask: mask as u64,
        })
        .collect()
}

/// Both halves enumerated once; answers `ILP_w` for any capacity `w`.
pub struct MitmTable {
    split: usize,
    left: Vec<HalfEntry>,
    /// Right half sorted by weight, keeping only entries whose profit beats
    /// every lighter entry.
    right_frontier: Vec<HalfEntry>,
}

impl MitmTable {
    pub fn new(items: &[KnapsackItem]) -> Result<Self> {
        if items.len() > MITM_ITEM_LIMIT {
            return Err(BnpgError::SizeGuard {
                what: "knapsack item count",
                actual: items.len(),
                limit: MITM_ITEM_LIMIT,
            });
        }
        let split = items.len() / 2;
        let left = enumerate_half(&items[..split]);
        let mut right = enumerate_half(&items[split..]);
        right.sort_by(|a, b| {
            a.weight
                .cmp(&b.weight)
                .then_with(|| b.profit.cmp(&a.profit))
        });
        let mut right_frontier: Vec<HalfEntry> = Vec::new();
        for entry in right {
            if right_frontier
                .last()
                .is_none_or(|best| entry.profit > best.profit)
            {
                right_frontier.push(entry);
            }
        }
        Ok(MitmTable {
            split,
            left,
            right_frontier,
        })
    }

    /// `OPT_w` and a selection (item indices, ascending) achieving it.
    pub fn solve(&self, capacity: u64) -> (Rational, Vec<usize>) {
        let mut best: Option<(Rational, u64, u64)> = None;
        for l in &self.left {
            if l.weight > capacity {
                continue;
            }
            let room = capacity - l.weight;
            let idx = self.right_frontier.partition_point(|r| r.weight <= room);
            // The empty subset (weight 0) is always present.
            let r = &self.right_frontier[idx - 1];
            let total = &l.profit + &r.profit;
            if best.as_ref().is_none_or(|(b, _, _)| &total > b) {
                best = Some((total, l.mask, r.mask));
            }
        }
        let (value, lmask, rmask) = best.expect("empty selection always fits");
        let mut chosen: Vec<usize> = (0..self.split).filter(|i| lmask >> i & 1 == 1).collect();
        chosen.extend(
            (0..64)
                .filter(|i| rmask >> i & 1 == 1)
                .map(|i| i + self.split),
        );
        (value, chosen)
    }

    pub fn value(&self, capacity: u64) -> Rational {
        self.solve(capacity).0
    }
}

/// `max Σ x_i p_i` s.t. `Σ x_i w_i ≤ capacity`.
pub fn max_knapsack_mitm(items: &[KnapsackItem], capacity: u64) -> Result<Rational> {
    Ok(MitmTable::new(items)?.value(capacity))
}

/// One evaluation of `ILP_w` and `ILP_{w+1}` during the binary search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub w: u64,
    pub opt_w: Rational,
    pub opt_w_plus_1: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinKnapsack {
    /// `Σ p_i < P`.
    Infeasible,
    Optimal {
        weight: u64,
        selection: Vec<usize>,
    },
}

impl MinKnapsack {
    pub fn weight(&self) -> Option<u64> {
        match self {
            MinKnapsack::Infeasible => None,
            MinKnapsack::Optimal { weight, .. } => Some(*weight),
        }
    }
}

/// Least `w` with `OPT_w ≥ P`, plus the probe trace of the binary search.
pub fn min_knapsack_traced(
    items: &[KnapsackItem],
    threshold: &Rational,
) -> Result<(MinKnapsack, Vec<Probe>)> {
    let total: Rational = items.iter().map(|i| &i.profit).sum();
    if &total < threshold {
        return Ok((MinKnapsack::Infeasible, Vec::new()));
    }
    let table = MitmTable::new(items)?;
    let optimal = |w: u64| {
        let (_, selection) = table.solve(w);
        MinKnapsack::Optimal {
            weight: w,
            selection,
        }
    };
    if &table.value(0) >= threshold {
        return Ok((optimal(0), Vec::new()));
    }

    let mut probes = Vec::new();
    let (mut lo, mut hi) = (0u64, items.iter().map(|i| i.weight).sum::<u64>());
    let mut w = lo + (hi - lo) / 2;
    loop {
        let opt_w = table.value(w);
        let opt_next = table.value(w + 1);
        assert!(
            opt_w <= opt_next,
            "OPT_w must be non-decreasing: OPT_{w} = {opt_w} > OPT_{} = {opt_next}",
            w + 1
        );
        let below = &opt_w < threshold;
        let next_below = &opt_next < threshold;
        probes.push(Probe {
            w,
            opt_w,
            opt_w_plus_1: opt_next,
        });
        if below && !next_below {
            return Ok((optimal(w + 1), probes));
        } else if below && next_below {
            lo = w + 1;
        } else {
            hi = w;
        }
        w = lo + (hi - lo) / 2;
    }
}

/// Minimum total weight of a selection with total profit at least `threshold`.
pub fn min_knapsack(items: &[KnapsackItem], threshold: &Rational) -> Result<MinKnapsack> {
    Ok(min_knapsack_traced(items, threshold)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(p: &[i64], w: &[u64]) -> Vec<KnapsackItem> {
        p.iter()
            .zip(w)
            .map(|(&p, &w)| KnapsackItem::new(Rational::from_int(p), w))
            .collect()
    }

    #[test]
    fn max_examples() {
        let it = items(&[3, 4, 5], &[2, 3, 4]);
        assert_eq!(max_knapsack_mitm(&it, 5).unwrap(), 7);
        assert_eq!(max_knapsack_mitm(&it, 0).unwrap(), 0);
        assert_eq!(max_knapsack_mitm(&it, 9).unwrap(), 12);
        assert_eq!(max_knapsack_mitm(&it, 100).unwrap(), 12);
        assert_eq!(MitmTable::new(&it).unwrap().solve(5).1, vec![0, 1]);
    }

    #[test]
    fn min_examples() {
        let it = items(&[3, 4, 5], &[2, 3, 4]);
        assert_eq!(
            min_knapsack(&it, &Rational::from_int(6)).unwrap().weight(),
            Some(5)
        );
        assert_eq!(
            min_knapsack(&it, &Rational::zero()).unwrap().weight(),
            Some(0)
        );
        let forced = items(&[1, 1], &[7, 9]);
        assert_eq!(
            min_knapsack(&forced, &Rational::from_int(2))
                .unwrap()
                .weight(),
            Some(16)
        );
        let short = items(&[1], &[1]);
        assert_eq!(
            min_knapsack(&short, &Rational::from_int(2)).unwrap(),
            MinKnapsack::Infeasible
        );
    }

    #[test]
    fn zero_weight_items_reach_threshold_for_free() {
        let it = items(&[2, 5], &[0, 3]);
        assert_eq!(
            min_knapsack(&it, &Rational::from_int(2)).unwrap().weight(),
            Some(0)
        );
        assert_eq!(
            min_knapsack(&it, &Rational::from_int(3)).unwrap().weight(),
            Some(3)
        );
    }

    #[test]
    fn guard() {
        let big = items(&[1; 41], &[1; 41]);
        assert!(matches!(
            max_knapsack_mitm(&big, 3),
            Err(BnpgError::SizeGuard { .. })
        ));
    }

    #[test]
    fn selection_reaches_threshold_at_optimal_weight() {
        let it = items(&[3, 4, 5, 1, 7], &[2, 3, 4, 1, 6]);
        let threshold = Rational::from_int(10);
        match min_knapsack(&it, &threshold).unwrap() {
            MinKnapsack::Optimal { weight, selection } => {
                let p: Rational = selection.iter().map(|&i| &it[i].profit).sum();
                let w: u64 = selection.iter().map(|&i| it[i].weight).sum();
                assert!(p >= threshold);
                assert_eq!(w, weight);
            }
            MinKnapsack::Infeasible => panic!(),
        }
    }
}
