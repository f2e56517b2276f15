//! Two-player normal-form games, Kantian annotations and the built-in games.
//!
//! Player `A` is the row player (the AI agent in the ethics schemes), player
//! `B` the column player (the human or opponent). Both payoff matrices are
//! indexed `[row][col]`, i.e. by A's strategy first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::zd::PdPayoffs;

/// Tolerance for payoff and probability comparisons.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn tag(self) -> char {
        match self {
            Player::A => 'A',
            Player::B => 'B',
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BimatrixGame {
    name: String,
    strategies_a: Vec<String>,
    strategies_b: Vec<String>,
    payoff_a: Vec<Vec<f64>>,
    payoff_b: Vec<Vec<f64>>,
}

fn check_labels(player: char, labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::Shape(format!("player {player} has no strategies")));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel {
                player,
                label: l.clone(),
            });
        }
    }
    Ok(())
}

fn check_matrix(which: char, m: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if m.len() != rows {
        return Err(Error::Shape(format!(
            "payoff_{} has {} rows, expected {rows}",
            which.to_ascii_lowercase(),
            m.len()
        )));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Shape(format!(
                "payoff_{} row {i} has {} entries, expected {cols}",
                which.to_ascii_lowercase(),
                row.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "payoff_{} row {i} contains {v}",
                which.to_ascii_lowercase()
            )));
        }
    }
    Ok(())
}

impl BimatrixGame {
    /// Builds a validated game. Labels must be unique per player and both
    /// matrices must be `|strategies_a| x |strategies_b|` with finite entries.
    pub fn new(
        name: impl Into<String>,
        strategies_a: Vec<String>,
        strategies_b: Vec<String>,
        payoff_a: Vec<Vec<f64>>,
        payoff_b: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_labels('A', &strategies_a)?;
        check_labels('B', &strategies_b)?;
        let (r, c) = (strategies_a.len(), strategies_b.len());
        check_matrix('A', &payoff_a, r, c)?;
        check_matrix('B', &payoff_b, r, c)?;
        Ok(Self {
            name: name.into(),
            strategies_a,
            strategies_b,
            payoff_a,
            payoff_b,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn strategies(&self, player: Player) -> &[String] {
        match player {
            Player::A => &self.strategies_a,
            Player::B => &self.strategies_b,
        }
    }

    pub fn strategies_a(&self) -> &[String] {
        &self.strategies_a
    }

    pub fn strategies_b(&self) -> &[String] {
        &self.strategies_b
    }

    pub fn payoff_a(&self) -> &[Vec<f64>] {
        &self.payoff_a
    }

    pub fn payoff_b(&self) -> &[Vec<f64>] {
        &self.payoff_b
    }

    pub fn payoffs(&self, player: Player) -> &[Vec<f64>] {
        match player {
            Player::A => &self.payoff_a,
            Player::B => &self.payoff_b,
        }
    }

    /// `(rows, cols)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.strategies_a.len(), self.strategies_b.len())
    }

    pub fn index_of(&self, player: Player, label: &str) -> Result<usize> {
        self.strategies(player)
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| Error::UnknownStrategy {
                player: player.tag(),
                label: label.to_string(),
            })
    }

    /// Payoff of `player` at cell `(i, j)`.
    pub fn payoff(&self, player: Player, i: usize, j: usize) -> f64 {
        self.payoffs(player)[i][j]
    }

    /// Same strategy spaces, new payoffs.
    pub fn with_payoffs(&self, payoff_a: Vec<Vec<f64>>, payoff_b: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.strategies_a.clone(),
            self.strategies_b.clone(),
            payoff_a,
            payoff_b,
        )
    }

    /// Restriction of the game to the given row and column indices.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let pick = |m: &[Vec<f64>]| -> Vec<Vec<f64>> {
            rows.iter()
                .map(|&i| cols.iter().map(|&j| m[i][j]).collect())
                .collect()
        };
        Self::new(
            self.name.clone(),
            rows.iter().map(|&i| self.strategies_a[i].clone()).collect(),
            cols.iter().map(|&j| self.strategies_b[j].clone()).collect(),
            pick(&self.payoff_a),
            pick(&self.payoff_b),
        )
    }
}

impl fmt::Display for BimatrixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.name)?;
        for (i, sa) in self.strategies_a.iter().enumerate() {
            for (j, sb) in self.strategies_b.iter().enumerate() {
                writeln!(
                    f,
                    "  {sa:>8} {sb:>8}  ({}, {})",
                    self.payoff_a[i][j], self.payoff_b[i][j]
                )?;
            }
        }
        Ok(())
    }
}

/// Moral value attached to a strategy itself.
///
/// An unbounded value is a flag, never an infinite float: `Obligatory` removes
/// every other strategy of the player, `Forbidden` removes the strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KantianValue {
    Finite(f64),
    Obligatory,
    Forbidden,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct KantianAnnotation {
    pub a: BTreeMap<String, KantianValue>,
    pub b: BTreeMap<String, KantianValue>,
}

impl KantianAnnotation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder-style insert.
    pub fn with(mut self, player: Player, label: impl Into<String>, value: KantianValue) -> Self {
        self.for_player_mut(player).insert(label.into(), value);
        self
    }

    pub fn for_player(&self, player: Player) -> &BTreeMap<String, KantianValue> {
        match player {
            Player::A => &self.a,
            Player::B => &self.b,
        }
    }

    pub fn for_player_mut(&mut self, player: Player) -> &mut BTreeMap<String, KantianValue> {
        match player {
            Player::A => &mut self.a,
            Player::B => &mut self.b,
        }
    }

    /// Checks labels against the game and the one-obligation rule.
    pub fn validate(&self, game: &BimatrixGame) -> Result<()> {
        for player in [Player::A, Player::B] {
            let mut obligatory = 0;
            for (label, value) in self.for_player(player) {
                game.index_of(player, label)?;
                match value {
                    KantianValue::Obligatory => obligatory += 1,
                    KantianValue::Finite(k) if !k.is_finite() => {
                        return Err(Error::NonFinite(format!(
                            "K for `{label}` of player {} is {k}",
                            player.tag()
                        )))
                    }
                    _ => {}
                }
            }
            if obligatory > 1 {
                return Err(Error::Annotation(format!(
                    "player {} has {obligatory} obligatory strategies",
                    player.tag()
                )));
            }
        }
        Ok(())
    }

    /// Negation of every finite value; flags are kept.
    pub fn negated(&self) -> Self {
        let neg = |m: &BTreeMap<String, KantianValue>| {
            m.iter()
                .map(|(k, v)| {
                    let v = match v {
                        KantianValue::Finite(x) => KantianValue::Finite(-x),
                        other => *other,
                    };
                    (k.clone(), v)
                })
                .collect()
        };
        Self {
            a: neg(&self.a),
            b: neg(&self.b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedProfile {
    pub probs_a: Vec<f64>,
    pub probs_b: Vec<f64>,
}

fn check_distribution(name: &str, p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Profile(format!("{name} is empty")));
    }
    if p.iter().any(|x| !x.is_finite() || *x < -TOL) {
        return Err(Error::Profile(format!(
            "{name} has a negative or non-finite entry"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > TOL {
        return Err(Error::Profile(format!("{name} sums to {sum}")));
    }
    Ok(())
}

impl MixedProfile {
    pub fn new(probs_a: Vec<f64>, probs_b: Vec<f64>) -> Result<Self> {
        check_distribution("probs_a", &probs_a)?;
        check_distribution("probs_b", &probs_b)?;
        Ok(Self { probs_a, probs_b })
    }

    /// Point mass on `(i, j)` in a `rows x cols` game.
    pub fn pure(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut probs_a = vec![0.0; rows];
        let mut probs_b = vec![0.0; cols];
        probs_a[i] = 1.0;
        probs_b[j] = 1.0;
        Self { probs_a, probs_b }
    }

    pub fn uniform(rows: usize, cols: usize) -> Self {
        Self {
            probs_a: vec![1.0 / rows as f64; rows],
            probs_b: vec![1.0 / cols as f64; cols],
        }
    }

    pub fn probs(&self, player: Player) -> &[f64] {
        match player {
            Player::A => &self.probs_a,
            Player::B => &self.probs_b,
        }
    }

    /// Max-norm distance between two profiles of the same shape.
    pub fn distance(&self, other: &MixedProfile) -> f64 {
        self.probs_a
            .iter()
            .zip(&other.probs_a)
            .chain(self.probs_b.iter().zip(&other.probs_b))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    fn check_shape(&self, game: &BimatrixGame) -> Result<()> {
        let (r, c) = game.shape();
        if self.probs_a.len() != r || self.probs_b.len() != c {
            return Err(Error::Shape(format!(
                "profile is {}x{}, game is {r}x{c}",
                self.probs_a.len(),
                self.probs_b.len()
            )));
        }
        Ok(())
    }
}

/// One cell of the outcome space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeRow {
    pub strategy_a: String,
    pub strategy_b: String,
    pub reward_a: f64,
    pub reward_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinGame {
    WaitOrPass,
    TrustNormalForm,
    PrisonersDilemma(PdPayoffs),
}

impl FromStr for BuiltinGame {
    type Err = Error;

    /// Accepts `wait_or_pass`, `trust_normal_form`, `prisoners_dilemma` (Axelrod
    /// payoffs) or `prisoners_dilemma(R,T,S,P)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "wait_or_pass" => return Ok(BuiltinGame::WaitOrPass),
            "trust_normal_form" | "trust" => return Ok(BuiltinGame::TrustNormalForm),
            "prisoners_dilemma" | "pd" => {
                return Ok(BuiltinGame::PrisonersDilemma(PdPayoffs::axelrod()))
            }
            _ => {}
        }
        if let Some(args) = s
            .strip_prefix("prisoners_dilemma(")
            .and_then(|r| r.strip_suffix(')'))
        {
            let v: Vec<f64> = args
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parameter(format!("prisoners_dilemma arguments: {e}")))?;
            if v.len() != 4 {
                return Err(Error::Parameter(
                    "prisoners_dilemma takes R,T,S,P".to_string(),
                ));
            }
            return Ok(BuiltinGame::PrisonersDilemma(PdPayoffs::new(
                v[0], v[1], v[2], v[3],
            )?));
        }
        Err(Error::Unknown {
            kind: "builtin game",
            name: s.to_string(),
        })
    }
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// The three games used throughout: the narrow-bridge wait-or-pass game, the
/// trust game in normal form, and the one-shot prisoner's dilemma.
pub fn builtin_game(kind: BuiltinGame) -> BimatrixGame {
    let (name, sa, sb, pa, pb) = match kind {
        BuiltinGame::WaitOrPass => (
            "wait_or_pass",
            labels(&["wait", "pass"]),
            labels(&["wait", "pass"]),
            vec![vec![-1.0, -1.0], vec![1.0, -2.0]],
            vec![vec![-1.0, 1.0], vec![-1.0, -2.0]],
        ),
        BuiltinGame::TrustNormalForm => (
            "trust",
            labels(&["a", "b"]),
            labels(&["ap", "bp"]),
            vec![vec![10.0, 10.0], vec![15.0, 0.0]],
            vec![vec![10.0, 10.0], vec![25.0, 40.0]],
        ),
        BuiltinGame::PrisonersDilemma(p) => (
            "prisoners_dilemma",
            labels(&["C", "D"]),
            labels(&["C", "D"]),
            vec![vec![p.r, p.s], vec![p.t, p.p]],
            vec![vec![p.r, p.t], vec![p.s, p.p]],
        ),
    };
    BimatrixGame::new(name, sa, sb, pa, pb).expect("built-in games are well formed")
}

/// Adds each finite K to the acting player's payoff in every cell where that
/// player uses the annotated strategy.
pub fn augment_kantian(
    game: &BimatrixGame,
    annotation: &KantianAnnotation,
) -> Result<BimatrixGame> {
    annotation.validate(game)?;
    let mut pa = game.payoff_a.clone();
    let mut pb = game.payoff_b.clone();
    for (label, value) in &annotation.a {
        let i = game.index_of(Player::A, label)?;
        let k = finite_k(Player::A, label, value)?;
        for v in &mut pa[i] {
            *v += k;
        }
    }
    for (label, value) in &annotation.b {
        let j = game.index_of(Player::B, label)?;
        let k = finite_k(Player::B, label, value)?;
        for row in &mut pb {
            row[j] += k;
        }
    }
    game.with_payoffs(pa, pb)
}

fn finite_k(player: Player, label: &str, value: &KantianValue) -> Result<f64> {
    match value {
        KantianValue::Finite(k) if k.is_finite() => Ok(*k),
        KantianValue::Finite(k) => Err(Error::NonFinite(format!(
            "K for `{label}` of player {} is {k}",
            player.tag()
        ))),
        _ => Err(Error::Annotation(format!(
            "`{label}` of player {} carries a flag; flags are resolved by the Kantian scheme",
            player.tag()
        ))),
    }
}

/// Bilinear expectation `(x' A y, x' B y)`.
pub fn expected_payoffs(game: &BimatrixGame, profile: &MixedProfile) -> Result<(f64, f64)> {
    profile.check_shape(game)?;
    let mut ea = 0.0;
    let mut eb = 0.0;
    for (i, xi) in profile.probs_a.iter().enumerate() {
        for (j, yj) in profile.probs_b.iter().enumerate() {
            let w = xi * yj;
            ea += w * game.payoff_a[i][j];
            eb += w * game.payoff_b[i][j];
        }
    }
    Ok((ea, eb))
}

/// Expected payoff of each pure strategy of `player` against the opponent's mix.
pub fn strategy_values(game: &BimatrixGame, player: Player, opponent_mix: &[f64]) -> Vec<f64> {
    let (r, c) = game.shape();
    match player {
        Player::A => (0..r)
            .map(|i| (0..c).map(|j| opponent_mix[j] * game.payoff_a[i][j]).sum())
            .collect(),
        Player::B => (0..c)
            .map(|j| (0..r).map(|i| opponent_mix[i] * game.payoff_b[i][j]).sum())
            .collect(),
    }
}

/// All cells in row-major order.
pub fn outcome_table(game: &BimatrixGame) -> Vec<OutcomeRow> {
    let mut rows = Vec::with_capacity(game.strategies_a.len() * game.strategies_b.len());
    for (i, sa) in game.strategies_a.iter().enumerate() {
        for (j, sb) in game.strategies_b.iter().enumerate() {
            rows.push(OutcomeRow {
                strategy_a: sa.clone(),
                strategy_b: sb.clone(),
                reward_a: game.payoff_a[i][j],
                reward_b: game.payoff_b[i][j],
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wait_or_pass() -> BimatrixGame {
        builtin_game(BuiltinGame::WaitOrPass)
    }

    #[test]
    fn make_game_accepts_table_and_degenerate_games() {
        let g = BimatrixGame::new(
            "wp",
            labels(&["wait", "pass"]),
            labels(&["wait", "pass"]),
            vec![vec![-1.0, -1.0], vec![1.0, -2.0]],
            vec![vec![-1.0, 1.0], vec![-1.0, -2.0]],
        )
        .unwrap();
        assert_eq!(outcome_table(&g).len(), 4);
        let one = BimatrixGame::new(
            "1",
            labels(&["x"]),
            labels(&["y"]),
            vec![vec![0.0]],
            vec![vec![0.0]],
        );
        assert!(one.is_ok());
    }

    #[test]
    fn make_game_rejects_bad_input() {
        let shape = BimatrixGame::new(
            "bad",
            labels(&["a", "b"]),
            labels(&["c", "d"]),
            vec![vec![0.0; 2]; 2],
            vec![vec![0.0; 3]; 2],
        );
        assert!(matches!(shape, Err(Error::Shape(_))));
        let dup = BimatrixGame::new(
            "d",
            labels(&["a", "a"]),
            labels(&["c"]),
            vec![vec![0.0]; 2],
            vec![vec![0.0]; 2],
        );
        assert!(matches!(dup, Err(Error::DuplicateLabel { .. })));
        let nan = BimatrixGame::new(
            "n",
            labels(&["a"]),
            labels(&["c"]),
            vec![vec![f64::NAN]],
            vec![vec![0.0]],
        );
        assert!(matches!(nan, Err(Error::NonFinite(_))));
    }

    #[test]
    fn builtin_cells() {
        let g = wait_or_pass();
        let t = outcome_table(&g);
        assert_eq!(
            t[0],
            OutcomeRow {
                strategy_a: "wait".into(),
                strategy_b: "wait".into(),
                reward_a: -1.0,
                reward_b: -1.0
            }
        );
        // (pass, wait)
        assert_eq!((t[2].reward_a, t[2].reward_b), (1.0, -1.0));

        let trust = builtin_game(BuiltinGame::TrustNormalForm);
        let last = outcome_table(&trust).pop().unwrap();
        assert_eq!(
            (last.strategy_a.as_str(), last.strategy_b.as_str()),
            ("b", "bp")
        );
        assert_eq!((last.reward_a, last.reward_b), (0.0, 40.0));
    }

    #[test]
    fn builtin_parsing() {
        assert!(matches!(
            "prisoners_dilemma(3,5,0,1)".parse::<BuiltinGame>(),
            Ok(BuiltinGame::PrisonersDilemma(_))
        ));
        // 2R = 6 is not greater than T + S = 7
        assert!(matches!(
            "prisoners_dilemma(3,5,2,1)".parse::<BuiltinGame>(),
            Err(Error::NotADilemma(_))
        ));
        assert!(matches!(
            "chess".parse::<BuiltinGame>(),
            Err(Error::Unknown { .. })
        ));
    }

    #[test]
    fn augment_adds_to_acting_player_only() {
        let g = wait_or_pass();
        let ann = KantianAnnotation::new()
            .with(Player::A, "wait", KantianValue::Finite(3.0))
            .with(Player::A, "pass", KantianValue::Finite(0.0));
        let aug = augment_kantian(&g, &ann).unwrap();
        assert_eq!(aug.payoff_a()[0], vec![2.0, 2.0]);
        assert_eq!(aug.payoff_a()[1], g.payoff_a()[1]);
        assert_eq!(aug.payoff_b(), g.payoff_b());
        // original untouched
        assert_eq!(g.payoff_a()[0], vec![-1.0, -1.0]);

        let trust = builtin_game(BuiltinGame::TrustNormalForm);
        let ann = KantianAnnotation::new().with(Player::B, "ap", KantianValue::Finite(7.041));
        let aug = augment_kantian(&trust, &ann).unwrap();
        assert!((aug.payoff_b()[1][0] - 32.041).abs() < 1e-12);
    }

    #[test]
    fn augment_rejects_unknown_and_flags() {
        let g = wait_or_pass();
        let ann = KantianAnnotation::new().with(Player::A, "jump", KantianValue::Finite(1.0));
        assert!(matches!(
            augment_kantian(&g, &ann),
            Err(Error::UnknownStrategy { .. })
        ));
        let ann =
            KantianAnnotation::new().with(Player::A, "wait", KantianValue::Finite(f64::INFINITY));
        assert!(matches!(
            augment_kantian(&g, &ann),
            Err(Error::NonFinite(_))
        ));
        let ann = KantianAnnotation::new().with(Player::A, "wait", KantianValue::Obligatory);
        assert!(matches!(
            augment_kantian(&g, &ann),
            Err(Error::Annotation(_))
        ));
    }

    #[test]
    fn expected_payoffs_examples() {
        let trust = builtin_game(BuiltinGame::TrustNormalForm);
        let prof = MixedProfile::new(
            vec![52.0 / 98.0, 46.0 / 98.0],
            vec![31.0 / 46.0, 15.0 / 46.0],
        )
        .unwrap();
        let (ea, eb) = expected_payoffs(&trust, &prof).unwrap();
        // 520/98 + 15*31/98 and (520 + 25*31 + 40*15)/98
        assert!((ea - 985.0 / 98.0).abs() < 1e-12);
        assert!((eb - 1895.0 / 98.0).abs() < 1e-12);
        assert!((ea - 10.051).abs() < 1e-3 && (eb - 19.337).abs() < 1e-3);

        let g = wait_or_pass();
        assert_eq!(
            expected_payoffs(&g, &MixedProfile::pure(2, 2, 1, 0)).unwrap(),
            (1.0, -1.0)
        );

        let c = BimatrixGame::new(
            "c",
            labels(&["x", "y", "z"]),
            labels(&["u", "v"]),
            vec![vec![4.5; 2]; 3],
            vec![vec![4.5; 2]; 3],
        )
        .unwrap();
        let (ea, eb) = expected_payoffs(&c, &MixedProfile::uniform(3, 2)).unwrap();
        assert!((ea - 4.5).abs() < 1e-12 && (eb - 4.5).abs() < 1e-12);

        assert!(matches!(
            expected_payoffs(&c, &MixedProfile::uniform(2, 2)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn profile_validation() {
        assert!(MixedProfile::new(vec![0.5, 0.6], vec![1.0]).is_err());
        assert!(MixedProfile::new(vec![-0.1, 1.1], vec![1.0]).is_err());
        assert!(MixedProfile::new(vec![0.25, 0.75], vec![1.0]).is_ok());
    }

    #[test]
    fn annotation_one_obligation_per_player() {
        let g = wait_or_pass();
        let ann = KantianAnnotation::new()
            .with(Player::A, "wait", KantianValue::Obligatory)
            .with(Player::A, "pass", KantianValue::Obligatory);
        assert!(matches!(ann.validate(&g), Err(Error::Annotation(_))));
    }
}
