//! Kantian values recovered from observed play.
//!
//! If an observed profile is taken to be a mixed equilibrium, each player must
//! be indifferent between their two strategies at the opponent's observed mix.
//! The additive value K on a designated strategy that restores indifference is
//! `E[u(other)] - E[u(designated)]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    augment_kantian, strategy_values, BimatrixGame, KantianAnnotation, KantianValue, MixedProfile,
    Player, TOL,
};

/// Behavioural counts per player, in the order they were observed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ObservedCounts {
    pub a: Vec<(String, u64)>,
    pub b: Vec<(String, u64)>,
}

impl ObservedCounts {
    pub fn for_player(&self, player: Player) -> &[(String, u64)] {
        match player {
            Player::A => &self.a,
            Player::B => &self.b,
        }
    }

    /// Counts aligned to the game's strategy order; unlisted strategies count 0.
    pub fn aligned(&self, game: &BimatrixGame) -> Result<ObservedCounts> {
        let align = |player: Player| -> Result<Vec<(String, u64)>> {
            let counts = self.for_player(player);
            for (label, _) in counts {
                game.index_of(player, label)?;
            }
            Ok(game
                .strategies(player)
                .iter()
                .map(|s| {
                    let n = counts.iter().filter(|(l, _)| l == s).map(|(_, n)| n).sum();
                    (s.clone(), n)
                })
                .collect())
        };
        Ok(ObservedCounts {
            a: align(Player::A)?,
            b: align(Player::B)?,
        })
    }

    /// Frequencies in the game's strategy order.
    pub fn profile_for(&self, game: &BimatrixGame) -> Result<MixedProfile> {
        freq_from_counts(&self.aligned(game)?)
    }
}

fn frequencies(player: char, counts: &[(String, u64)]) -> Result<Vec<f64>> {
    let total: u64 = counts.iter().map(|(_, n)| n).sum();
    if total == 0 {
        return Err(Error::Profile(format!(
            "player {player} has no observations"
        )));
    }
    let mut v: Vec<f64> = counts
        .iter()
        .map(|(_, n)| *n as f64 / total as f64)
        .collect();
    // last entry as the complement so the vector sums to exactly 1
    let head: f64 = v[..v.len() - 1].iter().sum();
    if let Some(last) = v.last_mut() {
        *last = 1.0 - head;
    }
    Ok(v)
}

/// `count / total` per player, in the order of `counts`.
pub fn freq_from_counts(counts: &ObservedCounts) -> Result<MixedProfile> {
    MixedProfile::new(frequencies('A', &counts.a)?, frequencies('B', &counts.b)?)
}

/// Strategy per player hypothesized to carry moral value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Designation {
    pub a: String,
    pub b: String,
}

impl Designation {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
        }
    }

    /// Trusting first mover and reciprocating second mover.
    pub fn trust_default() -> Self {
        Self::new("b", "ap")
    }

    pub fn for_player(&self, player: Player) -> &str {
        match player {
            Player::A => &self.a,
            Player::B => &self.b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EstimateKind {
    Point,
    /// The player always chose the designated strategy: `K >= value`.
    LowerBound,
    /// The player never chose it: `K <= value`.
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayerEstimate {
    pub designated_strategy: String,
    pub k: f64,
    pub kind: EstimateKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KantianEstimate {
    pub a: PlayerEstimate,
    pub b: PlayerEstimate,
}

impl KantianEstimate {
    pub fn for_player(&self, player: Player) -> &PlayerEstimate {
        match player {
            Player::A => &self.a,
            Player::B => &self.b,
        }
    }

    /// Annotation carrying the point estimates; bounds are skipped.
    pub fn annotation(&self) -> KantianAnnotation {
        let mut ann = KantianAnnotation::new();
        for player in [Player::A, Player::B] {
            let e = self.for_player(player);
            if e.kind == EstimateKind::Point {
                ann = ann.with(
                    player,
                    e.designated_strategy.clone(),
                    KantianValue::Finite(e.k),
                );
            }
        }
        ann
    }
}

fn estimate_player(
    game: &BimatrixGame,
    observed: &MixedProfile,
    player: Player,
    designated: &str,
) -> Result<PlayerEstimate> {
    let n = game.strategies(player).len();
    if n != 2 {
        return Err(Error::TooLarge(format!(
            "player {} has {n} strategies; value extraction needs exactly 2",
            player.tag()
        )));
    }
    let d = game.index_of(player, designated)?;
    let other = 1 - d;
    let values = strategy_values(game, player, observed.probs(player.other()));
    let k = values[other] - values[d];
    let own = observed.probs(player)[d];
    let kind = if own >= 1.0 - TOL {
        EstimateKind::LowerBound
    } else if own <= TOL {
        EstimateKind::UpperBound
    } else {
        EstimateKind::Point
    };
    Ok(PlayerEstimate {
        designated_strategy: designated.to_string(),
        k,
        kind,
    })
}

/// Value on each designated strategy that makes the observed profile a mixed
/// equilibrium. Pure own play yields a one-sided bound.
pub fn extract_kantian(
    game: &BimatrixGame,
    observed: &MixedProfile,
    designated: &Designation,
) -> Result<KantianEstimate> {
    let (r, c) = game.shape();
    if observed.probs_a.len() != r || observed.probs_b.len() != c {
        return Err(Error::Shape(format!(
            "observed profile is {}x{}, game is {r}x{c}",
            observed.probs_a.len(),
            observed.probs_b.len()
        )));
    }
    Ok(KantianEstimate {
        a: estimate_player(game, observed, Player::A, &designated.a)?,
        b: estimate_player(game, observed, Player::B, &designated.b)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    /// Per player: best strategy value minus worst value among strategies the
    /// player actually uses, in the augmented game.
    pub residual_a: f64,
    pub residual_b: f64,
    pub consistent: bool,
}

/// Support residual: how far the strategies a player uses are from all being
/// best responses.
pub fn support_residual(game: &BimatrixGame, profile: &MixedProfile, player: Player) -> f64 {
    let values = strategy_values(game, player, profile.probs(player.other()));
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let worst_used = values
        .iter()
        .zip(profile.probs(player))
        .filter(|(_, p)| **p > TOL)
        .map(|(v, _)| *v)
        .fold(f64::INFINITY, f64::min);
    (best - worst_used).max(0.0)
}

/// Augments the game with the point estimates and reports how far the
/// observed profile is from an equilibrium of the augmented game.
pub fn consistency_check(
    game: &BimatrixGame,
    estimate: &KantianEstimate,
    observed: &MixedProfile,
) -> Result<ConsistencyReport> {
    let augmented = augment_kantian(game, &estimate.annotation())?;
    let residual_a = support_residual(&augmented, observed, Player::A);
    let residual_b = support_residual(&augmented, observed, Player::B);
    Ok(ConsistencyReport {
        residual_a,
        residual_b,
        consistent: residual_a <= TOL && residual_b <= TOL,
    })
}
