//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use bnpg::io::{random_game, GameParams, Topology};
use bnpg::tree::{FreeChild, GreedySelectionInput, Sense, TreeConstraint};
use bnpg::{invest_counts, utility, BnpgGame, MixedProfile, Rational, StrategyProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn game(topology: Topology, directed: bool, seed: u64) -> BnpgGame {
    let params = GameParams {
        topology,
        directed,
        altruism_density: 0.5,
    };
    random_game(&mut rng(seed), &params).expect("generator preconditions hold")
}

pub fn tree(n: usize, seed: u64) -> BnpgGame {
    game(
        Topology::Tree {
            n,
            max_degree: None,
        },
        true,
        seed,
    )
}

/// Expected utility by summing over every pure profile of the other players.
pub fn exhaustive_expected_utility(
    game: &BnpgGame,
    mixed: &MixedProfile,
    v: usize,
    action: u8,
) -> Rational {
    let n = game.player_count();
    let others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
    let probs = mixed.probabilities();
    let mut total = Rational::zero();
    for mask in 0..1u64 << others.len() {
        let mut actions = vec![0u8; n];
        actions[v] = action;
        let mut weight = Rational::one();
        for (i, &u) in others.iter().enumerate() {
            let bit = (mask >> i & 1) as u8;
            actions[u] = bit;
            weight = if bit == 1 {
                weight * &probs[u]
            } else {
                weight * (Rational::one() - &probs[u])
            };
            if weight.is_zero() {
                break;
            }
        }
        if weight.is_zero() {
            continue;
        }
        let profile = StrategyProfile::new(actions).unwrap();
        total += weight * utility(game, &profile, v).unwrap();
    }
    total
}

/// Best objective over every way of choosing exactly `quota` investors.
pub fn exhaustive_greedy(input: &GreedySelectionInput) -> Option<Rational> {
    let k = input.free.len();
    if input.quota < 0 || input.quota as usize > k {
        return None;
    }
    let mut best: Option<Rational> = None;
    for mask in 0u32..1 << k {
        if mask.count_ones() as i64 != input.quota {
            continue;
        }
        let value: Rational = input
            .free
            .iter()
            .enumerate()
            .map(|(i, c): (usize, &FreeChild)| {
                if mask >> i & 1 == 1 {
                    c.y.clone()
                } else {
                    c.z.clone()
                }
            })
            .sum();
        best = Some(match (best, input.sense) {
            (None, _) => value,
            (Some(b), Sense::Maximize) => b.max(value),
            (Some(b), Sense::Minimize) => b.min(value),
        });
    }
    best
}

/// Whether `profile` meets every (action, tree invest count) constraint.
pub fn satisfies(
    game: &BnpgGame,
    profile: &StrategyProfile,
    constraints: &[TreeConstraint],
) -> bool {
    let counts = invest_counts(game.graph(), profile);
    constraints
        .iter()
        .all(|c| profile.action(c.player) == c.action && counts[c.player] == c.invest_count)
}

pub fn edges_of(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect()
}
