//! (3,B2)-SAT to symmetric ANM on a degree-3 gadget graph.
//!
//! Players: `z_i = i`, `z̄_i = n+i`, `b_i = 2n+i`, `y_j = 3n+j`. Literals are
//! DIMACS style: `+k` is `x_k`, `-k` is `x̄_k`, `k` 1-based.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::anm::{AnmInstance, Budget, Edge};
use crate::error::{BnpgError, Result};
use crate::game::{
    AltruismNetwork, BnpgGame, ExternalityTable, InputGraph, Player, StrategyProfile,
};
use crate::rational::Rational;

pub const SAT_VARIABLE_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatInstance {
    pub variables: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl SatInstance {
    /// Three distinct variables per clause; every variable twice positive
    /// and twice negative.
    pub fn validate_3b2(&self) -> Result<()> {
        let n = self.variables;
        let mut pos = vec![0usize; n];
        let mut neg = vec![0usize; n];
        for (j, clause) in self.clauses.iter().enumerate() {
            let mut vars = Vec::with_capacity(3);
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > n {
                    return Err(BnpgError::InvalidInstance(format!(
                        "clause {j} has literal {lit} outside 1..={n}"
                    )));
                }
                if vars.contains(&var) {
                    return Err(BnpgError::InvalidInstance(format!(
                        "clause {j} repeats variable {var}"
                    )));
                }
                vars.push(var);
                if lit > 0 {
                    pos[var - 1] += 1;
                } else {
                    neg[var - 1] += 1;
                }
            }
        }
        for v in 0..n {
            if pos[v] != 2 || neg[v] != 2 {
                return Err(BnpgError::InvalidInstance(format!(
                    "variable {} occurs {}+ / {}- times, expected 2 / 2",
                    v + 1,
                    pos[v],
                    neg[v]
                )));
            }
        }
        Ok(())
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }

    /// First satisfying assignment in binary counting order (variable 1 is
    /// the least significant bit).
    pub fn solve_brute(&self) -> Result<Option<Vec<bool>>> {
        let n = self.variables;
        if n > SAT_VARIABLE_LIMIT {
            return Err(BnpgError::SizeGuard {
                what: "SAT variable count",
                actual: n,
                limit: SAT_VARIABLE_LIMIT,
            });
        }
        Ok((0..1u64 << n)
            .map(|mask| (0..n).map(|v| mask >> v & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.is_satisfied_by(a)))
    }

    fn literal_player(&self, lit: i32) -> Player {
        let var = lit.unsigned_abs() as usize - 1;
        if lit > 0 {
            var
        } else {
            self.variables + var
        }
    }

    /// Clauses containing each literal player, ascending.
    fn occurrences(&self) -> Vec<Vec<usize>> {
        let mut occ = vec![Vec::new(); 2 * self.variables];
        for (j, clause) in self.clauses.iter().enumerate() {
            for &lit in clause {
                occ[self.literal_player(lit)].push(j);
            }
        }
        occ
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatVariant {
    /// Everyone invests; unit costs on clause edges, `2n+1` on variable edges.
    AllInvest,
    /// Literal players abstain; free edits and infinite budget.
    ArbitraryTarget,
}

pub fn sat_to_anm(sat: &SatInstance, variant: SatVariant) -> Result<AnmInstance> {
    sat.validate_3b2()?;
    let n = sat.variables;
    let m = sat.clauses.len();
    let total = 3 * n + m;
    let b = |i: usize| 2 * n + i;
    let y = |j: usize| 3 * n + j;

    let mut clause_edges: Vec<Edge> = Vec::with_capacity(3 * m);
    for (j, clause) in sat.clauses.iter().enumerate() {
        for &lit in clause {
            clause_edges.push((sat.literal_player(lit), y(j)));
        }
    }
    let mut variable_edges: Vec<Edge> = Vec::with_capacity(2 * n);
    for i in 0..n {
        variable_edges.push((i, b(i)));
        variable_edges.push((n + i, b(i)));
    }
    let graph = InputGraph::new(total, clause_edges.iter().chain(&variable_edges).copied())?;

    let (cost, weight, slopes, target) = match variant {
        SatVariant::AllInvest => (315, Rational::new(1, 2), [200, 240, 220], vec![1u8; total]),
        SatVariant::ArbitraryTarget => {
            let mut t = vec![1u8; total];
            t[..2 * n].fill(0);
            (15, Rational::from_int(2), [10, 2, 1], t)
        }
    };
    let tables = (0..total)
        .map(|v| {
            let slope = if v < 2 * n {
                slopes[0]
            } else if v < 3 * n {
                slopes[1]
            } else {
                slopes[2]
            };
            ExternalityTable::linear(&Rational::from_int(slope), graph.degree(v) + 2)
        })
        .collect();

    let (clause_cost, variable_cost, budget) = match variant {
        SatVariant::AllInvest => {
            let c = 2 * n as u64 + 1;
            (1, c, Budget::Finite(n as u64 * (2 + c)))
        }
        SatVariant::ArbitraryTarget => (0, 0, Budget::Infinite),
    };
    let mut add_costs: BTreeMap<Edge, u64> = BTreeMap::new();
    for &(u, v) in &clause_edges {
        add_costs.insert((u.min(v), u.max(v)), clause_cost);
    }
    for &(u, v) in &variable_edges {
        add_costs.insert((u.min(v), u.max(v)), variable_cost);
    }

    let game = BnpgGame::new(
        graph,
        AltruismNetwork::empty(total, false),
        tables,
        vec![Rational::from_int(cost); total],
        weight,
    )?;
    AnmInstance::new(game, StrategyProfile::new(target)?, add_costs, [], budget)
}

/// Additions that certify a satisfying assignment: a true literal's player
/// joins both of its clauses, a false one joins its variable player.
pub fn sat_certificate(sat: &SatInstance, assignment: &[bool]) -> Vec<Edge> {
    let n = sat.variables;
    let occ = sat.occurrences();
    let mut edges = Vec::new();
    for i in 0..n {
        for (player, truth) in [(i, assignment[i]), (n + i, !assignment[i])] {
            if truth {
                edges.extend(occ[player].iter().map(|&j| (player, 3 * n + j)));
            } else {
                edges.push((player, 2 * n + i));
            }
        }
    }
    edges.sort_unstable();
    edges
}
