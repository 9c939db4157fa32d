//! Mixed profiles, exact expected utilities and ε-equilibrium checks.

use crate::error::{BnpgError, Result};
use crate::game::{BnpgGame, Player, StrategyProfile};
use crate::rational::Rational;

/// Product distribution: `invest_probability[v] = Δ_v(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedProfile(Vec<Rational>);

impl MixedProfile {
    pub fn new(invest_probability: Vec<Rational>) -> Result<Self> {
        for (v, p) in invest_probability.iter().enumerate() {
            if p.is_negative() || p > &Rational::one() {
                return Err(BnpgError::InvalidProfile(format!(
                    "probability {p} of player {v} is outside [0,1]"
                )));
            }
        }
        Ok(MixedProfile(invest_probability))
    }

    pub fn from_pure(profile: &StrategyProfile) -> Self {
        MixedProfile(
            profile
                .actions()
                .iter()
                .map(|&x| Rational::from_int(x as i64))
                .collect(),
        )
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Probability that `v` plays `action`.
    pub fn prob(&self, v: Player, action: u8) -> Rational {
        if action == 1 {
            self.0[v].clone()
        } else {
            Rational::one() - &self.0[v]
        }
    }

    /// `Supp(Δ_v)`.
    pub fn support(&self, v: Player) -> Vec<u8> {
        (0..=1u8)
            .filter(|&x| self.prob(v, x).is_positive())
            .collect()
    }
}

/// Non-negative ε bound of an equilibrium query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsQuery(Rational);

impl EpsQuery {
    pub fn new(eps: Rational) -> Result<Self> {
        if eps.is_negative() {
            return Err(BnpgError::InvalidInstance(format!("eps {eps} is negative")));
        }
        Ok(EpsQuery(eps))
    }

    pub fn eps(&self) -> &Rational {
        &self.0
    }
}

/// Distribution of a sum of independent Bernoulli variables, by incremental
/// convolution: entry `k` is `P(Σ = k)`.
pub fn poisson_binomial(probs: &[Rational]) -> Vec<Rational> {
    let mut dist = vec![Rational::one()];
    for p in probs {
        let q = Rational::one() - p;
        let mut next = vec![Rational::zero(); dist.len() + 1];
        for (k, mass) in dist.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            next[k] += mass * &q;
            next[k + 1] += mass * p;
        }
        dist = next;
    }
    dist
}

fn expected_table_value(
    game: &BnpgGame,
    owner: Player,
    shift: usize,
    dist: &[Rational],
) -> Result<Rational> {
    let mut total = Rational::zero();
    for (k, mass) in dist.iter().enumerate() {
        if mass.is_zero() {
            continue;
        }
        total += mass * game.g(owner, shift + k)?;
    }
    Ok(total)
}

/// `E_{x_{−v}∼Δ_{−v}}[U_v(action, x_{−v})]`, exactly.
pub fn expected_utility(
    game: &BnpgGame,
    mixed: &MixedProfile,
    v: Player,
    action: u8,
) -> Result<Rational> {
    if mixed.len() != game.player_count() {
        return Err(BnpgError::InvalidProfile(format!(
            "mixed profile has {} entries for {} players",
            mixed.len(),
            game.player_count()
        )));
    }
    let graph = game.graph();
    let probs = mixed.probabilities();
    let action = action as usize;

    let own: Vec<Rational> = graph
        .neighbors(v)
        .iter()
        .map(|&w| probs[w].clone())
        .collect();
    let mut total = expected_table_value(game, v, action, &poisson_binomial(&own))?;

    let mut altruistic = Rational::zero();
    for &u in game.altruism().out_neighbors(v) {
        // x_u + n_u: u's own bit and u's neighbours other than v are random,
        // v's bit is fixed to `action`.
        let mut bits = vec![probs[u].clone()];
        bits.extend(
            graph
                .neighbors(u)
                .iter()
                .filter(|&&w| w != v)
                .map(|&w| probs[w].clone()),
        );
        let shift = if graph.has_edge(u, v) { action } else { 0 };
        altruistic += expected_table_value(game, u, shift, &poisson_binomial(&bits))?;
    }
    total += altruistic * game.altruism_weight();
    if action == 1 {
        total -= game.cost(v);
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsVerdict {
    Equilibrium,
    Violation {
        player: Player,
        played: u8,
        alternative: u8,
        /// Expected gain of switching; exceeds ε.
        regret: Rational,
    },
}

impl EpsVerdict {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, EpsVerdict::Equilibrium)
    }
}

/// Checks every supported action of every player against both alternatives.
pub fn verify_eps_ne(game: &BnpgGame, mixed: &MixedProfile, q: &EpsQuery) -> Result<EpsVerdict> {
    for v in 0..game.player_count() {
        let values = [
            expected_utility(game, mixed, v, 0)?,
            expected_utility(game, mixed, v, 1)?,
        ];
        for played in mixed.support(v) {
            for alternative in 0..=1u8 {
                let regret = &values[alternative as usize] - &values[played as usize];
                if &regret > q.eps() {
                    return Ok(EpsVerdict::Violation {
                        player: v,
                        played,
                        alternative,
                        regret,
                    });
                }
            }
        }
    }
    Ok(EpsVerdict::Equilibrium)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{utility, AltruismNetwork, ExternalityTable, InputGraph};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn anti_coordination() -> BnpgGame {
        BnpgGame::new(
            InputGraph::new(2, [(0, 1)]).unwrap(),
            AltruismNetwork::empty(2, true),
            vec![
                ExternalityTable::from_ints(&[0, 1, 1]),
                ExternalityTable::from_ints(&[0, 0, 1]),
            ],
            vec![r(1, 2); 2],
            Rational::zero(),
        )
        .unwrap()
    }

    #[test]
    fn poisson_binomial_small() {
        let d = poisson_binomial(&[r(1, 2), r(1, 2)]);
        assert_eq!(d, vec![r(1, 4), r(1, 2), r(1, 4)]);
        assert_eq!(poisson_binomial(&[]), vec![Rational::one()]);
    }

    #[test]
    fn expected_utility_linear_star() {
        let game = BnpgGame::new(
            InputGraph::new(3, [(0, 1), (0, 2)]).unwrap(),
            AltruismNetwork::empty(3, true),
            vec![ExternalityTable::from_ints(&[0, 1, 2, 3]); 3],
            vec![Rational::zero(); 3],
            Rational::zero(),
        )
        .unwrap();
        let mixed = MixedProfile::new(vec![Rational::zero(), r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(expected_utility(&game, &mixed, 0, 0).unwrap(), 1);
    }

    #[test]
    fn degenerate_distribution_matches_pure_utility() {
        let game = BnpgGame::new(
            InputGraph::new(3, [(0, 1), (1, 2)]).unwrap(),
            AltruismNetwork::new(3, true, [(1, 0), (1, 2)]).unwrap(),
            vec![ExternalityTable::from_ints(&[0, 2, 3, 5]); 3],
            vec![r(3, 2); 3],
            r(1, 3),
        )
        .unwrap();
        for mask in 0..8 {
            let pure = StrategyProfile::from_mask(3, mask);
            let mixed = MixedProfile::from_pure(&pure);
            for v in 0..3 {
                assert_eq!(
                    expected_utility(&game, &mixed, v, pure.action(v)).unwrap(),
                    utility(&game, &pure, v).unwrap()
                );
            }
        }
    }

    /// Regret of every (player, played, alternative) by summing over the four
    /// joint outcomes directly.
    fn exhaustive_regrets(game: &BnpgGame, p: [Rational; 2]) -> Vec<(usize, u8, u8, Rational)> {
        let mut out = Vec::new();
        for v in 0..2 {
            let other = 1 - v;
            let value = |action: u8| {
                let mut total = Rational::zero();
                for x_other in 0..=1u8 {
                    let mut actions = vec![0u8; 2];
                    actions[v] = action;
                    actions[other] = x_other;
                    let weight = if x_other == 1 {
                        p[other].clone()
                    } else {
                        Rational::one() - &p[other]
                    };
                    let profile = StrategyProfile::new(actions).unwrap();
                    total += weight * utility(game, &profile, v).unwrap();
                }
                total
            };
            for played in 0..=1u8 {
                let pv = if played == 1 {
                    p[v].clone()
                } else {
                    Rational::one() - &p[v]
                };
                if pv.is_zero() {
                    continue;
                }
                for alt in 0..=1u8 {
                    out.push((v, played, alt, value(alt) - value(played)));
                }
            }
        }
        out
    }

    #[test]
    fn anti_coordination_half_half_is_exact_equilibrium() {
        let game = anti_coordination();
        let p = [r(1, 2), r(1, 2)];
        let worst = exhaustive_regrets(&game, p.clone())
            .into_iter()
            .map(|t| t.3)
            .max()
            .unwrap();
        assert_eq!(worst, Rational::zero());
        let mixed = MixedProfile::new(p.to_vec()).unwrap();
        for eps in [Rational::zero(), Rational::one()] {
            let q = EpsQuery::new(eps).unwrap();
            assert!(verify_eps_ne(&game, &mixed, &q).unwrap().is_equilibrium());
        }
    }

    #[test]
    fn anti_coordination_off_equilibrium_witness() {
        let game = anti_coordination();
        let p = [r(1, 4), r(1, 2)];
        let regrets = exhaustive_regrets(&game, p.clone());
        let max = regrets.iter().map(|t| t.3.clone()).max().unwrap();
        assert_eq!(max, r(1, 4));
        let mixed = MixedProfile::new(p.to_vec()).unwrap();
        let q1 = EpsQuery::new(Rational::one()).unwrap();
        assert!(verify_eps_ne(&game, &mixed, &q1).unwrap().is_equilibrium());
        let q0 = EpsQuery::new(Rational::zero()).unwrap();
        assert_eq!(
            verify_eps_ne(&game, &mixed, &q0).unwrap(),
            EpsVerdict::Violation {
                player: 1,
                played: 1,
                alternative: 0,
                regret: r(1, 4)
            }
        );
    }

    #[test]
    fn invalid_inputs() {
        assert!(MixedProfile::new(vec![r(3, 2)]).is_err());
        assert!(EpsQuery::new(r(-1, 2)).is_err());
    }
}
