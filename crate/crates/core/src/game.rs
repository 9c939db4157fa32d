//! Game representation, utilities, stability tests and pure-equilibrium
//! verification.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{BnpgError, Result};
use crate::rational::Rational;

pub type Player = usize;

/// Simple undirected input network on players `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputGraph {
    n: usize,
    edges: Vec<(Player, Player)>,
    adj: Vec<Vec<Player>>,
}

impl InputGraph {
    /// Edges may be given in any order or orientation; they are stored as
    /// sorted `(min, max)` pairs.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Player, Player)>) -> Result<Self> {
        if n == 0 {
            return Err(BnpgError::InvalidGraph(
                "player count must be positive".into(),
            ));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(BnpgError::InvalidGraph(format!(
                    "edge {{{u},{v}}} references a player outside 0..{n}"
                )));
            }
            if u == v {
                return Err(BnpgError::InvalidGraph(format!("self-loop at player {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(BnpgError::InvalidGraph(format!(
                    "duplicate edge {{{},{}}}",
                    u.min(v),
                    u.max(v)
                )));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(InputGraph { n, edges, adj })
    }

    pub fn player_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Player, Player)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: Player) -> &[Player] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Player) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Player, v: Player) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Player>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.component_count() == self.n
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }
}

/// Altruism network: `N_v` is the out-neighbourhood of `v` (directed) or the
/// neighbourhood of `v` (undirected).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltruismNetwork {
    directed: bool,
    n: usize,
    edges: Vec<(Player, Player)>,
    out: Vec<Vec<Player>>,
}

impl AltruismNetwork {
    pub fn new(
        n: usize,
        directed: bool,
        edges: impl IntoIterator<Item = (Player, Player)>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(BnpgError::InvalidGraph(format!(
                    "altruism edge ({u},{v}) references a player outside 0..{n}"
                )));
            }
            if u == v {
                return Err(BnpgError::InvalidGraph(format!(
                    "altruism self-loop at player {u}"
                )));
            }
            let key = if directed {
                (u, v)
            } else {
                (u.min(v), u.max(v))
            };
            if !set.insert(key) {
                return Err(BnpgError::InvalidGraph(format!(
                    "duplicate altruism edge ({},{})",
                    key.0, key.1
                )));
            }
        }
        Ok(Self::from_canonical(n, directed, set.into_iter().collect()))
    }

    pub fn empty(n: usize, directed: bool) -> Self {
        Self::from_canonical(n, directed, Vec::new())
    }

    fn from_canonical(n: usize, directed: bool, edges: Vec<(Player, Player)>) -> Self {
        let mut out = vec![Vec::new(); n];
        for &(u, v) in &edges {
            out[u].push(v);
            if !directed {
                out[v].push(u);
            }
        }
        for list in &mut out {
            list.sort_unstable();
        }
        AltruismNetwork {
            directed,
            n,
            edges,
            out,
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn player_count(&self) -> usize {
        self.n
    }

    /// Canonical edge list: ordered pairs if directed, `(min, max)` otherwise.
    pub fn edges(&self) -> &[(Player, Player)] {
        &self.edges
    }

    /// `N_v`.
    pub fn out_neighbors(&self, v: Player) -> &[Player] {
        &self.out[v]
    }

    pub fn contains(&self, u: Player, v: Player) -> bool {
        u < self.n && self.out[u].binary_search(&v).is_ok()
    }

    /// Canonical key of an edge for this network's directedness.
    pub fn key(&self, u: Player, v: Player) -> (Player, Player) {
        if self.directed {
            (u, v)
        } else {
            (u.min(v), u.max(v))
        }
    }

    /// Network with `additions` inserted and `deletions` removed.
    pub fn with_edits(
        &self,
        additions: &[(Player, Player)],
        deletions: &[(Player, Player)],
    ) -> Result<Self> {
        let mut set: BTreeSet<_> = self.edges.iter().copied().collect();
        for &(u, v) in deletions {
            if !set.remove(&self.key(u, v)) {
                return Err(BnpgError::InvalidInstance(format!(
                    "cannot delete absent altruism edge ({u},{v})"
                )));
            }
        }
        for &(u, v) in additions {
            if u >= self.n || v >= self.n || u == v {
                return Err(BnpgError::InvalidInstance(format!(
                    "cannot add altruism edge ({u},{v})"
                )));
            }
            if !set.insert(self.key(u, v)) {
                return Err(BnpgError::InvalidInstance(format!(
                    "cannot add present altruism edge ({u},{v})"
                )));
            }
        }
        Ok(Self::from_canonical(
            self.n,
            self.directed,
            set.into_iter().collect(),
        ))
    }

    /// The same relation as an explicitly directed network (undirected edges
    /// become two arcs). `N_v` is unchanged.
    pub fn as_directed(&self) -> Self {
        if self.directed {
            return self.clone();
        }
        let mut arcs = Vec::with_capacity(self.edges.len() * 2);
        for &(u, v) in &self.edges {
            arcs.push((u, v));
            arcs.push((v, u));
        }
        arcs.sort_unstable();
        Self::from_canonical(self.n, true, arcs)
    }
}

/// Finite tabulation `g(0), g(1), …` of an externality function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExternalityTable(Vec<Rational>);

impl ExternalityTable {
    pub fn new(values: Vec<Rational>) -> Self {
        ExternalityTable(values)
    }

    /// `g(x) = slope * x` for `x` in `0..len`.
    pub fn linear(slope: &Rational, len: usize) -> Self {
        ExternalityTable((0..len).map(|x| slope.mul_int(x as i64)).collect())
    }

    pub fn constant(value: &Rational, len: usize) -> Self {
        ExternalityTable(vec![value.clone(); len])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        ExternalityTable(values.iter().map(|&v| Rational::from_int(v)).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, x: usize) -> Option<&Rational> {
        self.0.get(x)
    }

    /// `Δg(x) = g(x+1) − g(x)`.
    pub fn marginal(&self, x: usize) -> Option<Rational> {
        Some(self.0.get(x + 1)? - self.0.get(x)?)
    }

    /// Table of `x ↦ g(x + shift)`.
    pub fn shifted(&self, shift: usize) -> Self {
        ExternalityTable(self.0.iter().skip(shift).cloned().collect())
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

/// `Δg(x)` with range checking.
pub fn marginal(table: &ExternalityTable, x: usize) -> Result<Rational> {
    table.marginal(x).ok_or(BnpgError::TableRange {
        player: usize::MAX,
        index: x + 1,
        len: table.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnpgGame {
    graph: Arc<InputGraph>,
    altruism: Arc<AltruismNetwork>,
    g: Arc<Vec<ExternalityTable>>,
    c: Arc<Vec<Rational>>,
    a: Rational,
}

impl BnpgGame {
    /// Checks only that the parts agree on the player count; value
    /// invariants are reported by [`validate_game`].
    pub fn new(
        graph: InputGraph,
        altruism: AltruismNetwork,
        g: Vec<ExternalityTable>,
        c: Vec<Rational>,
        a: Rational,
    ) -> Result<Self> {
        let n = graph.player_count();
        if altruism.player_count() != n || g.len() != n || c.len() != n {
            return Err(BnpgError::InvalidInstance(format!(
                "player count mismatch: graph {n}, altruism {}, tables {}, costs {}",
                altruism.player_count(),
                g.len(),
                c.len()
            )));
        }
        Ok(BnpgGame {
            graph: Arc::new(graph),
            altruism: Arc::new(altruism),
            g: Arc::new(g),
            c: Arc::new(c),
            a,
        })
    }

    pub fn player_count(&self) -> usize {
        self.graph.player_count()
    }

    pub fn graph(&self) -> &InputGraph {
        &self.graph
    }

    pub fn altruism(&self) -> &AltruismNetwork {
        &self.altruism
    }

    pub fn tables(&self) -> &[ExternalityTable] {
        &self.g
    }

    pub fn table(&self, v: Player) -> &ExternalityTable {
        &self.g[v]
    }

    pub fn costs(&self) -> &[Rational] {
        &self.c
    }

    pub fn cost(&self, v: Player) -> &Rational {
        &self.c[v]
    }

    pub fn altruism_weight(&self) -> &Rational {
        &self.a
    }

    /// Same game over a different altruism network; shares all other data.
    pub fn with_altruism(&self, altruism: AltruismNetwork) -> Result<Self> {
        if altruism.player_count() != self.player_count() {
            return Err(BnpgError::InvalidInstance(
                "altruism network has a different player count".into(),
            ));
        }
        Ok(BnpgGame {
            graph: Arc::clone(&self.graph),
            altruism: Arc::new(altruism),
            g: Arc::clone(&self.g),
            c: Arc::clone(&self.c),
            a: self.a.clone(),
        })
    }

    /// `g_v(x)` with range checking.
    pub fn g(&self, v: Player, x: usize) -> Result<&Rational> {
        self.g[v].get(x).ok_or(BnpgError::TableRange {
            player: v,
            index: x,
            len: self.g[v].len(),
        })
    }

    /// `Δg_v(x)` with range checking.
    pub fn dg(&self, v: Player, x: usize) -> Result<Rational> {
        self.g[v].marginal(x).ok_or(BnpgError::TableRange {
            player: v,
            index: x + 1,
            len: self.g[v].len(),
        })
    }

    pub fn is_fully_homogeneous(&self) -> bool {
        self.g.windows(2).all(|w| w[0] == w[1]) && self.c.windows(2).all(|w| w[0] == w[1])
    }

    /// Sub-game induced on `players` (sorted), re-indexed `0..players.len()`.
    /// Altruism edges leaving the set are dropped.
    pub fn induced(&self, players: &[Player]) -> Result<BnpgGame> {
        let mut index = vec![usize::MAX; self.player_count()];
        for (i, &p) in players.iter().enumerate() {
            index[p] = i;
        }
        let edges = self
            .graph
            .edges()
            .iter()
            .filter(|(u, v)| index[*u] != usize::MAX && index[*v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        let graph = InputGraph::new(players.len(), edges)?;
        let arcs = self
            .altruism
            .edges()
            .iter()
            .filter(|(u, v)| index[*u] != usize::MAX && index[*v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        let altruism = AltruismNetwork::new(players.len(), self.altruism.is_directed(), arcs)?;
        BnpgGame::new(
            graph,
            altruism,
            players.iter().map(|&p| self.g[p].clone()).collect(),
            players.iter().map(|&p| self.c[p].clone()).collect(),
            self.a.clone(),
        )
    }
}

/// Pure strategy profile: one bit per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile(Vec<u8>);

impl StrategyProfile {
    pub fn new(actions: Vec<u8>) -> Result<Self> {
        if let Some(pos) = actions.iter().position(|&x| x > 1) {
            return Err(BnpgError::InvalidProfile(format!(
                "action of player {pos} is {}, expected 0 or 1",
                actions[pos]
            )));
        }
        Ok(StrategyProfile(actions))
    }

    pub fn zeros(n: usize) -> Self {
        StrategyProfile(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        StrategyProfile(vec![1; n])
    }

    /// Bit `v` of `mask` is the action of player `v`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        StrategyProfile((0..n).map(|v| ((mask >> v) & 1) as u8).collect())
    }

    pub fn actions(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn action(&self, v: Player) -> u8 {
        self.0[v]
    }

    pub fn flipped(&self, v: Player) -> Self {
        let mut actions = self.0.clone();
        actions[v] ^= 1;
        StrategyProfile(actions)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(BnpgError::InvalidProfile(format!(
                "profile has {} entries for {n} players",
                self.0.len()
            )))
        }
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// `n_v` for every player: investing input-graph neighbours, excluding `v`.
pub fn invest_counts(graph: &InputGraph, profile: &StrategyProfile) -> Vec<usize> {
    (0..graph.player_count())
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .filter(|&&u| profile.action(u) == 1)
                .count()
        })
        .collect()
}

/// `U_v(x) = g_v(x_v+n_v) + a·Σ_{u∈N_v} g_u(x_u+n_u) − c_v·x_v`.
pub fn utility(game: &BnpgGame, profile: &StrategyProfile, v: Player) -> Result<Rational> {
    profile.check_len(game.player_count())?;
    let graph = game.graph();
    let count = |w: Player| {
        graph
            .neighbors(w)
            .iter()
            .filter(|&&u| profile.action(u) == 1)
            .count()
    };
    let xv = profile.action(v) as usize;
    let mut total = game.g(v, xv + count(v))?.clone();
    let mut altruistic = Rational::zero();
    for &u in game.altruism().out_neighbors(v) {
        altruistic += game.g(u, profile.action(u) as usize + count(u))?;
    }
    total += altruistic * game.altruism_weight();
    if xv == 1 {
        total -= game.cost(v);
    }
    Ok(total)
}

fn stable_with_counts(
    game: &BnpgGame,
    profile: &StrategyProfile,
    counts: &[usize],
    v: Player,
) -> Result<bool> {
    let xv = profile.action(v);
    let mut altruistic = Rational::zero();
    for &u in game.altruism().out_neighbors(v) {
        // v's action cannot move g_u unless v is an input-graph neighbour of u.
        if !game.graph().has_edge(u, v) {
            continue;
        }
        let base = profile.action(u) as usize + counts[u];
        // Δg_u evaluated at u's level without v's investment.
        let at = if xv == 1 { base - 1 } else { base };
        altruistic += game.dg(u, at)?;
    }
    let gain = game.dg(v, counts[v])? + altruistic * game.altruism_weight();
    Ok(if xv == 1 {
        &gain >= game.cost(v)
    } else {
        &gain <= game.cost(v)
    })
}

/// Whether `v` weakly prefers its current action to flipping it.
pub fn is_stable(game: &BnpgGame, profile: &StrategyProfile, v: Player) -> Result<bool> {
    profile.check_len(game.player_count())?;
    let counts = invest_counts(game.graph(), profile);
    stable_with_counts(game, profile, &counts, v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsneVerdict {
    Equilibrium,
    /// Least-id player that strictly gains by flipping.
    Deviator(Player),
}

impl PsneVerdict {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, PsneVerdict::Equilibrium)
    }
}

pub fn verify_psne(game: &BnpgGame, profile: &StrategyProfile) -> Result<PsneVerdict> {
    profile.check_len(game.player_count())?;
    let counts = invest_counts(game.graph(), profile);
    for v in 0..game.player_count() {
        if !stable_with_counts(game, profile, &counts, v)? {
            return Ok(PsneVerdict::Deviator(v));
        }
    }
    Ok(PsneVerdict::Equilibrium)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NegativeAltruismWeight,
    NegativeCost {
        player: Player,
    },
    NegativeExternality {
        player: Player,
        index: usize,
    },
    DecreasingExternality {
        player: Player,
        index: usize,
    },
    ShortTable {
        player: Player,
        len: usize,
        required: usize,
    },
    AltruismOutsideGraph {
        from: Player,
        to: Player,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeAltruismWeight => write!(f, "altruism weight a is negative"),
            Violation::NegativeCost { player } => write!(f, "cost of player {player} is negative"),
            Violation::NegativeExternality { player, index } => {
                write!(f, "g_{player}({index}) is negative")
            }
            Violation::DecreasingExternality { player, index } => {
                write!(f, "g_{player} decreases between {index} and {}", index + 1)
            }
            Violation::ShortTable {
                player,
                len,
                required,
            } => write!(
                f,
                "table of player {player} has {len} entries, needs at least {required}"
            ),
            Violation::AltruismOutsideGraph { from, to } => write!(
                f,
                "altruism edge ({from},{to}) joins players that are not adjacent in the input graph"
            ),
        }
    }
}

/// All invariant violations of `game`; empty iff well formed.
pub fn validate_game(game: &BnpgGame) -> Vec<Violation> {
    let mut out = Vec::new();
    if game.altruism_weight().is_negative() {
        out.push(Violation::NegativeAltruismWeight);
    }
    for v in 0..game.player_count() {
        if game.cost(v).is_negative() {
            out.push(Violation::NegativeCost { player: v });
        }
        let table = game.table(v);
        if let Some(index) = table.values().iter().position(Rational::is_negative) {
            out.push(Violation::NegativeExternality { player: v, index });
        }
        if let Some(index) = table.values().windows(2).position(|w| w[0] > w[1]) {
            out.push(Violation::DecreasingExternality { player: v, index });
        }
        let required = game.graph().degree(v) + 2;
        if table.len() < required {
            out.push(Violation::ShortTable {
                player: v,
                len: table.len(),
                required,
            });
        }
    }
    for &(u, v) in game.altruism().edges() {
        if !game.graph().has_edge(u, v) {
            out.push(Violation::AltruismOutsideGraph { from: u, to: v });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn isolated(g: &[i64], c: Rational) -> BnpgGame {
        BnpgGame::new(
            InputGraph::new(1, []).unwrap(),
            AltruismNetwork::empty(1, true),
            vec![ExternalityTable::from_ints(g)],
            vec![c],
            Rational::zero(),
        )
        .unwrap()
    }

    fn pair(
        a: Rational,
        altruism: &[(usize, usize)],
        g0: &[i64],
        g1: &[i64],
        c: Rational,
    ) -> BnpgGame {
        BnpgGame::new(
            InputGraph::new(2, [(0, 1)]).unwrap(),
            AltruismNetwork::new(2, true, altruism.iter().copied()).unwrap(),
            vec![
                ExternalityTable::from_ints(g0),
                ExternalityTable::from_ints(g1),
            ],
            vec![c.clone(), c],
            a,
        )
        .unwrap()
    }

    /// The 2-player anti-coordination game: Δg_0 = (1,0), Δg_1 = (0,1), c = 1/2.
    fn anti_coordination() -> BnpgGame {
        pair(Rational::zero(), &[], &[0, 1, 1], &[0, 0, 1], r(1, 2))
    }

    #[test]
    fn marginal_examples() {
        assert_eq!(
            marginal(&ExternalityTable::from_ints(&[0, 1, 2]), 0).unwrap(),
            1
        );
        assert_eq!(
            marginal(&ExternalityTable::from_ints(&[0, 5, 10]), 1).unwrap(),
            5
        );
        assert_eq!(
            marginal(&ExternalityTable::from_ints(&[0, 1, 1]), 1).unwrap(),
            0
        );
        assert!(matches!(
            marginal(&ExternalityTable::from_ints(&[0, 1, 1]), 2),
            Err(BnpgError::TableRange { .. })
        ));
    }

    #[test]
    fn utility_examples() {
        let game = isolated(&[0, 2], Rational::one());
        assert_eq!(utility(&game, &StrategyProfile::ones(1), 0).unwrap(), 1);

        let game = pair(
            Rational::one(),
            &[(0, 1)],
            &[0, 1, 2],
            &[0, 1, 2],
            Rational::one(),
        );
        let both = StrategyProfile::ones(2);
        assert_eq!(utility(&game, &both, 0).unwrap(), 3);
        // direct sum: g_0(1+1) + 1*g_1(1+1) - 1
        let direct =
            game.table(0).values()[2].clone() + &game.table(1).values()[2] - Rational::one();
        assert_eq!(utility(&game, &both, 0).unwrap(), direct);

        let selfish = pair(
            Rational::zero(),
            &[(0, 1)],
            &[0, 1, 2],
            &[0, 1, 2],
            Rational::one(),
        );
        assert_eq!(utility(&selfish, &both, 0).unwrap(), 1);
    }

    #[test]
    fn stability_examples() {
        let game = isolated(&[0, 2], Rational::one());
        assert!(is_stable(&game, &StrategyProfile::ones(1), 0).unwrap());
        assert!(!is_stable(&game, &StrategyProfile::zeros(1), 0).unwrap());

        let game = pair(Rational::zero(), &[], &[0, 1, 1], &[0, 1, 1], r(1, 2));
        assert!(!is_stable(&game, &StrategyProfile::ones(2), 0).unwrap());
    }

    #[test]
    fn psne_examples() {
        let game = BnpgGame::new(
            InputGraph::new(3, []).unwrap(),
            AltruismNetwork::empty(3, false),
            vec![ExternalityTable::from_ints(&[0, 0]); 3],
            vec![Rational::zero(); 3],
            Rational::zero(),
        )
        .unwrap();
        for mask in 0..8 {
            assert!(verify_psne(&game, &StrategyProfile::from_mask(3, mask))
                .unwrap()
                .is_equilibrium());
        }

        let game = anti_coordination();
        for mask in 0..4 {
            assert!(!verify_psne(&game, &StrategyProfile::from_mask(2, mask))
                .unwrap()
                .is_equilibrium());
        }
        assert_eq!(
            verify_psne(&game, &StrategyProfile::zeros(2)).unwrap(),
            PsneVerdict::Deviator(0)
        );

        let symmetric = BnpgGame::new(
            InputGraph::new(2, [(0, 1)]).unwrap(),
            AltruismNetwork::new(2, false, [(0, 1)]).unwrap(),
            vec![ExternalityTable::from_ints(&[0, 1, 2]); 2],
            vec![r(3, 2); 2],
            Rational::one(),
        )
        .unwrap();
        assert!(verify_psne(&symmetric, &StrategyProfile::ones(2))
            .unwrap()
            .is_equilibrium());
    }

    #[test]
    fn profile_length_is_checked() {
        let game = isolated(&[0, 2], Rational::one());
        assert!(verify_psne(&game, &StrategyProfile::ones(2)).is_err());
        assert!(StrategyProfile::new(vec![0, 2]).is_err());
    }

    #[test]
    fn validation_reports_each_violation() {
        assert!(validate_game(&anti_coordination()).is_empty());

        let bad_edge = BnpgGame::new(
            InputGraph::new(3, [(0, 1)]).unwrap(),
            AltruismNetwork::new(3, true, [(0, 2)]).unwrap(),
            vec![ExternalityTable::from_ints(&[0, 1, 2]); 3],
            vec![Rational::one(); 3],
            Rational::one(),
        )
        .unwrap();
        assert_eq!(
            validate_game(&bad_edge),
            vec![Violation::AltruismOutsideGraph { from: 0, to: 2 }]
        );

        let decreasing = isolated(&[0, 3, 2], Rational::one());
        assert_eq!(
            validate_game(&decreasing),
            vec![Violation::DecreasingExternality {
                player: 0,
                index: 1
            }]
        );
    }

    #[test]
    fn graph_structure() {
        let g = InputGraph::new(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert!(g.is_forest());
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert!(InputGraph::new(2, [(0, 0)]).is_err());
        assert!(InputGraph::new(2, [(0, 1), (1, 0)]).is_err());
        let tri = InputGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(tri.is_complete() && !tri.is_forest());
    }
}
