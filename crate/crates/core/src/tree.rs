//! Pure-equilibrium search on trees (and forests) by dynamic programming over
//! `(x_parent, n_parent, x_v, n_v)` configurations, with the per-node choice
//! among free children solved greedily.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{BnpgError, Result};
use crate::game::{verify_psne, BnpgGame, Player, StrategyProfile};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// A free child: its value if it invests (`y`) and if it abstains (`z`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeChild {
    pub id: Player,
    pub y: Rational,
    pub z: Rational,
}

/// Choose exactly `quota` of `free` to invest, optimising `Σ y + Σ z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedySelectionInput {
    pub free: Vec<FreeChild>,
    pub quota: i64,
    pub sense: Sense,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedySelection {
    /// `invest[i]` is the choice for `free[i]`.
    pub invest: Vec<bool>,
    pub value: Rational,
}

pub fn greedy_select(input: &GreedySelectionInput) -> Result<GreedySelection> {
    let total = input.free.len();
    if input.quota < 0 || input.quota as usize > total {
        return Err(BnpgError::InfeasibleQuota {
            quota: input.quota,
            available: total,
        });
    }
    let quota = input.quota as usize;
    let gaps: Vec<Rational> = input.free.iter().map(|c| (&c.y - &c.z).abs()).collect();
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by(|&i, &j| {
        gaps[j]
            .cmp(&gaps[i])
            .then(input.free[i].id.cmp(&input.free[j].id))
    });

    let mut invest = vec![false; total];
    let (mut ones, mut zeros) = (0usize, 0usize);
    let mut value = Rational::zero();
    for i in order {
        let child = &input.free[i];
        let pick_one = if ones == quota {
            false
        } else if zeros == total - quota {
            true
        } else {
            match input.sense {
                Sense::Maximize => child.y > child.z,
                Sense::Minimize => child.y <= child.z,
            }
        };
        if pick_one {
            invest[i] = true;
            ones += 1;
            value += &child.y;
        } else {
            zeros += 1;
            value += &child.z;
        }
    }
    Ok(GreedySelection { invest, value })
}

/// DP state of a node: parent action and count, own action and count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigTuple {
    pub x_parent: u8,
    pub n_parent: usize,
    pub x: u8,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub tuple: ConfigTuple,
    /// `(x_c, n_c)` chosen for each child, in the node's child order.
    pub children: Arc<Vec<(u8, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeTable {
    pub node: Player,
    /// `None` for a root, whose parent is imaginary.
    pub parent: Option<Player>,
    pub children: Vec<Player>,
    pub entries: Vec<TableEntry>,
    by_parent: BTreeMap<(u8, usize, u8), Vec<usize>>,
    position: HashMap<ConfigTuple, usize>,
}

impl NodeTable {
    fn new(node: Player, parent: Option<Player>, children: Vec<Player>) -> Self {
        NodeTable {
            node,
            parent,
            children,
            entries: Vec::new(),
            by_parent: BTreeMap::new(),
            position: HashMap::new(),
        }
    }

    fn push(&mut self, entry: TableEntry) {
        let t = entry.tuple;
        let counts = self
            .by_parent
            .entry((t.x_parent, t.n_parent, t.x))
            .or_default();
        if counts.last() != Some(&t.n) {
            counts.push(t.n);
        }
        self.position.insert(t, self.entries.len());
        self.entries.push(entry);
    }

    /// Counts `n` admitted with the given parent state and own action.
    pub fn counts(&self, x_parent: u8, n_parent: usize, x: u8) -> &[usize] {
        self.by_parent
            .get(&(x_parent, n_parent, x))
            .map_or(&[], Vec::as_slice)
    }

    pub fn entry(&self, tuple: &ConfigTuple) -> Option<&TableEntry> {
        self.position.get(tuple).map(|&i| &self.entries[i])
    }
}

/// Prescribed action and tree-neighbour invest count of one player.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeConstraint {
    pub player: Player,
    pub action: u8,
    pub invest_count: usize,
}

/// Parent and children of every node, rooting each component at its least id.
/// Returned order lists every node after all of its descendants.
fn orient(game: &BnpgGame) -> (Vec<Option<Player>>, Vec<Vec<Player>>, Vec<Player>) {
    let graph = game.graph();
    let n = game.player_count();
    let mut parent = vec![None; n];
    let mut children = vec![Vec::new(); n];
    let mut preorder = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &w in graph.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                    stack.push(w);
                }
            }
        }
    }
    for list in &mut children {
        list.sort_unstable();
    }
    preorder.reverse();
    (parent, children, preorder)
}

struct ChildOption {
    /// Best altruistic contribution and the count achieving it, per action.
    invest: Option<(Rational, usize)>,
    abstain: Option<(Rational, usize)>,
}

fn pick_best(
    candidates: &[usize],
    value: impl Fn(usize) -> Result<Rational>,
    sense: Sense,
) -> Result<Option<(Rational, usize)>> {
    let mut best: Option<(Rational, usize)> = None;
    for &n in candidates {
        let v = value(n)?;
        let better = match (&best, sense) {
            (None, _) => true,
            (Some((b, _)), Sense::Maximize) => v > *b,
            (Some((b, _)), Sense::Minimize) => v < *b,
        };
        if better {
            best = Some((v, n));
        }
    }
    Ok(best)
}

fn build_node(
    game: &BnpgGame,
    v: Player,
    parent: Option<Player>,
    children: &[Player],
    tables: &[Option<NodeTable>],
    constraint: Option<&TreeConstraint>,
) -> Result<NodeTable> {
    let a = game.altruism_weight();
    let altruism = game.altruism();
    let deg = game.graph().degree(v);
    let parent_degree = parent.map_or(1, |p| game.graph().degree(p));
    let cares_for_parent = parent.is_some_and(|p| altruism.contains(v, p));
    let mut table = NodeTable::new(v, parent, children.to_vec());

    for x_v in 0..=1u8 {
        let sense = if x_v == 1 {
            Sense::Maximize
        } else {
            Sense::Minimize
        };
        for n_v in 0..=deg {
            if constraint.is_some_and(|c| c.action != x_v || c.invest_count != n_v) {
                continue;
            }
            // Child values depend on (x_v, n_v) only.
            let mut options = Vec::with_capacity(children.len());
            let mut missing = false;
            for &c in children {
                let child = tables[c].as_ref().expect("children are built first");
                let ones = child.counts(x_v, n_v, 1);
                let zeros = child.counts(x_v, n_v, 0);
                if ones.is_empty() && zeros.is_empty() {
                    missing = true;
                    break;
                }
                let option = if altruism.contains(v, c) {
                    let (y_at, z_at): (fn(usize) -> usize, fn(usize) -> usize) = if x_v == 1 {
                        (|n| n, |n| n - 1)
                    } else {
                        (|n| n + 1, |n| n)
                    };
                    ChildOption {
                        invest: pick_best(ones, |n| Ok(a * game.dg(c, y_at(n))?), sense)?,
                        abstain: pick_best(zeros, |n| Ok(a * game.dg(c, z_at(n))?), sense)?,
                    }
                } else {
                    ChildOption {
                        invest: ones.first().map(|&n| (Rational::zero(), n)),
                        abstain: zeros.first().map(|&n| (Rational::zero(), n)),
                    }
                };
                options.push(option);
            }
            if missing {
                continue;
            }
            let own = game.dg(v, n_v)?;

            for x_u in 0..=1u8 {
                if parent.is_none() && x_u == 1 {
                    continue;
                }
                let forced_ones = options.iter().filter(|o| o.abstain.is_none()).count();
                let quota = n_v as i64 - x_u as i64 - forced_ones as i64;
                let free: Vec<FreeChild> = children
                    .iter()
                    .zip(&options)
                    .filter_map(|(&c, o)| match (&o.invest, &o.abstain) {
                        (Some((y, _)), Some((z, _))) => Some(FreeChild {
                            id: c,
                            y: y.clone(),
                            z: z.clone(),
                        }),
                        _ => None,
                    })
                    .collect();
                if quota < 0 || quota as usize > free.len() {
                    continue;
                }
                let selection = greedy_select(&GreedySelectionInput { free, quota, sense })?;

                let mut contribution = selection.value;
                let mut chosen = Vec::with_capacity(children.len());
                let mut free_index = 0;
                for o in &options {
                    match (&o.invest, &o.abstain) {
                        (Some((y, n)), None) => {
                            contribution += y;
                            chosen.push((1, *n));
                        }
                        (None, Some((z, n))) => {
                            contribution += z;
                            chosen.push((0, *n));
                        }
                        (Some((_, n1)), Some((_, n0))) => {
                            if selection.invest[free_index] {
                                chosen.push((1, *n1));
                            } else {
                                chosen.push((0, *n0));
                            }
                            free_index += 1;
                        }
                        (None, None) => unreachable!(),
                    }
                }
                let chosen = Arc::new(chosen);

                // n_u counts v, and the parent has d_u − 1 other neighbours.
                let lo = x_v as usize;
                let hi = parent_degree + x_v as usize - 1;
                for n_u in lo..=hi {
                    let mut gain = &own + &contribution;
                    if cares_for_parent {
                        let p = parent.expect("root has no altruism toward its parent");
                        let level = x_u as usize + n_u;
                        let at = if x_v == 1 { level - 1 } else { level };
                        gain += a * game.dg(p, at)?;
                    }
                    let stable = if x_v == 1 {
                        &gain >= game.cost(v)
                    } else {
                        &gain <= game.cost(v)
                    };
                    if stable {
                        table.push(TableEntry {
                            tuple: ConfigTuple {
                                x_parent: x_u,
                                n_parent: n_u,
                                x: x_v,
                                n: n_v,
                            },
                            children: Arc::clone(&chosen),
                        });
                    }
                }
            }
        }
    }
    Ok(table)
}

/// DP tables of every node. A root's entries have `x_parent = 0`.
pub fn build_tables(game: &BnpgGame, constraints: &[TreeConstraint]) -> Result<Vec<NodeTable>> {
    let graph = game.graph();
    if !graph.is_forest() {
        return Err(BnpgError::NotAForest);
    }
    let n = game.player_count();
    let mut by_player: Vec<Option<&TreeConstraint>> = vec![None; n];
    for c in constraints {
        if c.player >= n {
            return Err(BnpgError::Precondition(format!(
                "constraint on unknown player {}",
                c.player
            )));
        }
        if c.action > 1 || c.invest_count > graph.degree(c.player) {
            return Err(BnpgError::Precondition(format!(
                "constraint ({}, {}) on player {} is out of range",
                c.action, c.invest_count, c.player
            )));
        }
        if by_player[c.player].replace(c).is_some() {
            return Err(BnpgError::Precondition(format!(
                "player {} is constrained twice",
                c.player
            )));
        }
    }
    let (parent, children, postorder) = orient(game);
    let mut tables: Vec<Option<NodeTable>> = (0..n).map(|_| None).collect();
    for v in postorder {
        let table = build_node(game, v, parent[v], &children[v], &tables, by_player[v])?;
        tables[v] = Some(table);
    }
    Ok(tables
        .into_iter()
        .map(|t| t.expect("every node built"))
        .collect())
}

fn reconstruct(tables: &[NodeTable]) -> Option<StrategyProfile> {
    let n = tables.len();
    let mut actions = vec![0u8; n];
    let mut stack = Vec::new();
    for t in tables.iter().filter(|t| t.parent.is_none()) {
        stack.push((t.node, t.entries.first()?.tuple));
    }
    while let Some((v, tuple)) = stack.pop() {
        let entry = tables[v]
            .entry(&tuple)
            .expect("back-pointers name admitted tuples");
        actions[v] = tuple.x;
        for (&c, &(x_c, n_c)) in tables[v].children.iter().zip(entry.children.iter()) {
            stack.push((
                c,
                ConfigTuple {
                    x_parent: tuple.x,
                    n_parent: tuple.n,
                    x: x_c,
                    n: n_c,
                },
            ));
        }
    }
    Some(StrategyProfile::new(actions).expect("actions are bits"))
}

/// A pure equilibrium satisfying `constraints`, or `None`. Counts in the
/// constraints are numbers of investing tree neighbours.
pub fn solve_tree_psne_constrained(
    game: &BnpgGame,
    constraints: &[TreeConstraint],
) -> Result<Option<StrategyProfile>> {
    // Undirected altruism is the same relation seen from both endpoints.
    let game = if game.altruism().is_directed() {
        game.clone()
    } else {
        game.with_altruism(game.altruism().as_directed())?
    };
    let tables = build_tables(&game, constraints)?;
    let Some(profile) = reconstruct(&tables) else {
        return Ok(None);
    };
    let counts = crate::game::invest_counts(game.graph(), &profile);
    for c in constraints {
        if profile.action(c.player) != c.action || counts[c.player] != c.invest_count {
            return Err(BnpgError::Audit(format!(
                "witness violates the constraint on player {}",
                c.player
            )));
        }
    }
    if let crate::game::PsneVerdict::Deviator(v) = verify_psne(&game, &profile)? {
        return Err(BnpgError::Audit(format!(
            "tree witness {profile} is not an equilibrium: player {v} deviates"
        )));
    }
    Ok(Some(profile))
}

pub fn solve_tree_psne(game: &BnpgGame) -> Result<Option<StrategyProfile>> {
    solve_tree_psne_constrained(game, &[])
}
