//! Nash equilibria and the four ethics schemes.
//!
//! Player A is treated as the AI agent and player B as the human in the
//! scheme functions.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    augment_kantian, expected_payoffs, strategy_values, BimatrixGame, KantianAnnotation,
    KantianValue, MixedProfile, Player, TOL,
};

/// Default dimension bound for [`support_enumeration`].
pub const MAX_SUPPORT_DIM: usize = 4;

/// A pure strategy pair with its payoffs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub strategy_a: String,
    pub strategy_b: String,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

impl Cell {
    fn of(game: &BimatrixGame, i: usize, j: usize) -> Self {
        Cell {
            i,
            j,
            strategy_a: game.strategies_a()[i].clone(),
            strategy_b: game.strategies_b()[j].clone(),
            payoff_a: game.payoff_a()[i][j],
            payoff_b: game.payoff_b()[i][j],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedEquilibrium {
    pub profile: MixedProfile,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct EquilibriumSet {
    pub pure: Vec<Cell>,
    /// Equilibria with at least one player randomizing.
    pub mixed: Vec<MixedEquilibrium>,
    pub degenerate: bool,
    pub diagnostics: Vec<String>,
}

impl EquilibriumSet {
    /// Every equilibrium as a profile, pure ones as point masses.
    pub fn profiles(&self, game: &BimatrixGame) -> Vec<MixedProfile> {
        let (r, c) = game.shape();
        self.pure
            .iter()
            .map(|cell| MixedProfile::pure(r, c, cell.i, cell.j))
            .chain(self.mixed.iter().map(|m| m.profile.clone()))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pure.is_empty() && self.mixed.is_empty()
    }
}

/// Largest gain either player gets from a unilateral pure deviation.
pub fn best_response_regret(game: &BimatrixGame, profile: &MixedProfile) -> Result<(f64, f64)> {
    let (ea, eb) = expected_payoffs(game, profile)?;
    let best = |v: Vec<f64>| v.into_iter().fold(f64::NEG_INFINITY, f64::max);
    let ra = best(strategy_values(game, Player::A, &profile.probs_b)) - ea;
    let rb = best(strategy_values(game, Player::B, &profile.probs_a)) - eb;
    Ok((ra.max(0.0), rb.max(0.0)))
}

pub fn is_equilibrium(game: &BimatrixGame, profile: &MixedProfile, eps: f64) -> bool {
    best_response_regret(game, profile).is_ok_and(|(ra, rb)| ra <= eps && rb <= eps)
}

/// Cells where both strategies are best responses; ties count.
pub fn pure_nash(game: &BimatrixGame) -> Vec<Cell> {
    let (r, c) = game.shape();
    let a = game.payoff_a();
    let b = game.payoff_b();
    let col_best: Vec<f64> = (0..c)
        .map(|j| (0..r).map(|i| a[i][j]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let row_best: Vec<f64> = (0..r)
        .map(|i| b[i].iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..c {
            if a[i][j] >= col_best[j] - TOL && b[i][j] >= row_best[i] - TOL {
                out.push(Cell::of(game, i, j));
            }
        }
    }
    out
}

fn mixed_equilibrium(game: &BimatrixGame, profile: MixedProfile) -> MixedEquilibrium {
    let (payoff_a, payoff_b) = expected_payoffs(game, &profile).expect("shape checked by caller");
    MixedEquilibrium {
        profile,
        payoff_a,
        payoff_b,
    }
}

/// Closed-form solver for 2x2 games: pure equilibria plus the interior
/// equilibrium from the two indifference conditions.
pub fn mixed_nash_2x2(game: &BimatrixGame) -> Result<EquilibriumSet> {
    if game.shape() != (2, 2) {
        let (r, c) = game.shape();
        return Err(Error::Shape(format!(
            "mixed_nash_2x2 needs a 2x2 game, got {r}x{c}"
        )));
    }
    let a = game.payoff_a();
    let b = game.payoff_b();
    let mut set = EquilibriumSet {
        pure: pure_nash(game),
        ..Default::default()
    };
    // x = P(A plays row 0) equalizes B's columns; y = P(B plays col 0) equalizes A's rows.
    let den_x = b[0][0] - b[1][0] - b[0][1] + b[1][1];
    let den_y = a[0][0] - a[0][1] - a[1][0] + a[1][1];
    if den_x.abs() < TOL {
        set.degenerate = true;
        set.diagnostics.push(format!(
            "indifference denominator vanishes for player B ({}): A's mix cannot be pinned down",
            game.strategies_b().join("/")
        ));
    }
    if den_y.abs() < TOL {
        set.degenerate = true;
        set.diagnostics.push(format!(
            "indifference denominator vanishes for player A ({}): B's mix cannot be pinned down",
            game.strategies_a().join("/")
        ));
    }
    if set.degenerate {
        set.diagnostics
            .push("degenerate game: only pure equilibria reported".to_string());
        return Ok(set);
    }
    let x = (b[1][1] - b[1][0]) / den_x;
    let y = (a[1][1] - a[0][1]) / den_y;
    if x > TOL && x < 1.0 - TOL && y > TOL && y < 1.0 - TOL {
        let profile = MixedProfile::new(vec![x, 1.0 - x], vec![y, 1.0 - y])?;
        set.mixed.push(mixed_equilibrium(game, profile));
    }
    Ok(set)
}

/// Mix over `mixer_support` that leaves the opponent indifferent across
/// `opponent_support`. `m` is the opponent's payoff matrix, `[row][col]`.
fn indifference_mix(
    m: &[Vec<f64>],
    mixer_support: &[usize],
    opponent_support: &[usize],
    mixer_is_row: bool,
) -> Option<Vec<f64>> {
    let k = mixer_support.len();
    let mut sys = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut rhs = DVector::<f64>::zeros(k + 1);
    for (r, &o) in opponent_support.iter().enumerate() {
        for (c, &s) in mixer_support.iter().enumerate() {
            sys[(r, c)] = if mixer_is_row { m[s][o] } else { m[o][s] };
        }
        sys[(r, k)] = -1.0;
    }
    for c in 0..k {
        sys[(k, c)] = 1.0;
    }
    rhs[k] = 1.0;
    let lu = sys.lu();
    if lu.determinant().abs() < 1e-12 {
        return None;
    }
    let sol = lu.solve(&rhs)?;
    Some(sol.iter().take(k).copied().collect())
}

fn embed(n: usize, support: &[usize], probs: &[f64]) -> Option<Vec<f64>> {
    if probs.iter().any(|p| *p < -TOL || !p.is_finite()) {
        return None;
    }
    let mut v = vec![0.0; n];
    for (&s, &p) in support.iter().zip(probs) {
        v[s] = p.max(0.0);
    }
    let sum: f64 = v.iter().sum();
    v.iter_mut().for_each(|p| *p /= sum);
    Some(v)
}

fn is_point_mass(v: &[f64]) -> Option<usize> {
    let hits: Vec<usize> = (0..v.len()).filter(|&i| v[i] > 1.0 - TOL).collect();
    (hits.len() == 1).then(|| hits[0])
}

/// Support enumeration over equal-size supports, for games up to
/// `max_dim x max_dim`. Pure equilibria come from [`pure_nash`].
pub fn support_enumeration(game: &BimatrixGame, max_dim: usize) -> Result<EquilibriumSet> {
    let (r, c) = game.shape();
    if r > max_dim || c > max_dim {
        return Err(Error::TooLarge(format!(
            "support enumeration is limited to {max_dim}x{max_dim}, game is {r}x{c}"
        )));
    }
    let mut set = EquilibriumSet {
        pure: pure_nash(game),
        ..Default::default()
    };
    let mut singular = 0usize;
    for k in 2..=r.min(c) {
        for rows in (0..r).combinations(k) {
            for cols in (0..c).combinations(k) {
                // B's payoffs pin A's mix and vice versa
                let x = indifference_mix(game.payoff_b(), &rows, &cols, true);
                let y = indifference_mix(game.payoff_a(), &cols, &rows, false);
                let (Some(x), Some(y)) = (x, y) else {
                    singular += 1;
                    continue;
                };
                let (Some(x), Some(y)) = (embed(r, &rows, &x), embed(c, &cols, &y)) else {
                    continue;
                };
                if is_point_mass(&x).is_some() && is_point_mass(&y).is_some() {
                    continue;
                }
                let Ok(profile) = MixedProfile::new(x, y) else {
                    continue;
                };
                if !is_equilibrium(game, &profile, TOL) {
                    continue;
                }
                if set
                    .mixed
                    .iter()
                    .any(|m| m.profile.distance(&profile) < 1e-7)
                {
                    continue;
                }
                set.mixed.push(mixed_equilibrium(game, profile));
            }
        }
    }
    if singular > 0 {
        set.degenerate = true;
        set.diagnostics.push(format!(
            "{singular} support pair(s) gave a singular indifference system"
        ));
    }
    Ok(set)
}

/// Picks the closed form for 2x2 games and support enumeration otherwise.
pub fn equilibria(game: &BimatrixGame) -> EquilibriumSet {
    let (r, c) = game.shape();
    if (r, c) == (2, 2) {
        return mixed_nash_2x2(game).expect("shape checked");
    }
    if r <= MAX_SUPPORT_DIM && c <= MAX_SUPPORT_DIM {
        return support_enumeration(game, MAX_SUPPORT_DIM).expect("shape checked");
    }
    EquilibriumSet {
        pure: pure_nash(game),
        diagnostics: vec![format!(
            "{r}x{c} exceeds the support-enumeration bound; pure equilibria only"
        )],
        ..Default::default()
    }
}

/// Cells not Pareto-dominated by another cell.
pub fn pareto_front(game: &BimatrixGame) -> Vec<Cell> {
    let (r, c) = game.shape();
    let cells: Vec<Cell> = (0..r)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .map(|(i, j)| Cell::of(game, i, j))
        .collect();
    let dominates = |d: &Cell, e: &Cell| {
        d.payoff_a >= e.payoff_a - TOL
            && d.payoff_b >= e.payoff_b - TOL
            && (d.payoff_a > e.payoff_a + TOL || d.payoff_b > e.payoff_b + TOL)
    };
    cells
        .iter()
        .filter(|e| !cells.iter().any(|d| dominates(d, e)))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Scheme {
    HumanPriority,
    SocialWelfare,
    BetaWeighted(f64),
    Kantian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Unique,
    Ambiguous,
    NoPureSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Recommendation {
    /// Labels of recommended AI strategies.
    Strategies(Vec<String>),
    /// AI mixing probabilities, in strategy order.
    Mixed(Vec<f64>),
}

impl Recommendation {
    pub fn strategies(&self) -> &[String] {
        match self {
            Recommendation::Strategies(s) => s,
            Recommendation::Mixed(_) => &[],
        }
    }
}

/// AI best responses against one human strategy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceEntry {
    pub human_strategy: String,
    pub ai_best_responses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeResult {
    pub scheme: Scheme,
    pub recommended: Recommendation,
    pub status: Status,
    pub diagnostics: Vec<String>,
    /// Cells selected by the scheme (social welfare argmax).
    pub cells: Vec<Cell>,
    /// Equilibria of the transformed or reduced game.
    pub equilibria: Option<EquilibriumSet>,
    /// The game the equilibria refer to.
    pub solved_game: Option<BimatrixGame>,
    pub dominance: Vec<DominanceEntry>,
}

impl SchemeResult {
    fn new(scheme: Scheme, recommended: Recommendation, status: Status) -> Self {
        Self {
            scheme,
            recommended,
            status,
            diagnostics: Vec::new(),
            cells: Vec::new(),
            equilibria: None,
            solved_game: None,
            dominance: Vec::new(),
        }
    }
}

fn status_for(n: usize) -> Status {
    match n {
        0 => Status::NoPureSolution,
        1 => Status::Unique,
        _ => Status::Ambiguous,
    }
}

/// AI strategies whose human-payoff row weakly dominates every other row;
/// otherwise the maximin rows over human payoff.
pub fn scheme_human_priority(game: &BimatrixGame) -> SchemeResult {
    let b = game.payoff_b();
    let (r, c) = game.shape();
    let dominating: Vec<usize> = (0..r)
        .filter(|&i| (0..r).all(|k| (0..c).all(|j| b[i][j] >= b[k][j] - TOL)))
        .collect();
    let labels = |idx: &[usize]| -> Vec<String> {
        idx.iter()
            .map(|&i| game.strategies_a()[i].clone())
            .collect()
    };
    if !dominating.is_empty() {
        let mut res = SchemeResult::new(
            Scheme::HumanPriority,
            Recommendation::Strategies(labels(&dominating)),
            status_for(dominating.len()),
        );
        if dominating.len() > 1 {
            res.diagnostics
                .push("several AI strategies give the human identical payoffs".to_string());
        }
        return res;
    }
    let worst: Vec<f64> = b
        .iter()
        .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let best = worst.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let maximin: Vec<usize> = (0..r).filter(|&i| worst[i] >= best - TOL).collect();
    let mut res = SchemeResult::new(
        Scheme::HumanPriority,
        Recommendation::Strategies(labels(&maximin)),
        status_for(maximin.len()),
    );
    res.diagnostics.push(format!(
        "no AI strategy weakly dominates for the human; fell back to maximin over human payoff (guaranteed {best})"
    ));
    res
}

/// Cells maximizing the payoff sum.
pub fn scheme_social_welfare(game: &BimatrixGame) -> SchemeResult {
    let (r, c) = game.shape();
    let sum = |i: usize, j: usize| game.payoff_a()[i][j] + game.payoff_b()[i][j];
    let best = (0..r)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .map(|(i, j)| sum(i, j))
        .fold(f64::NEG_INFINITY, f64::max);
    let cells: Vec<Cell> = (0..r)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .filter(|&(i, j)| sum(i, j) >= best - TOL)
        .map(|(i, j)| Cell::of(game, i, j))
        .collect();
    let mut ai: Vec<usize> = cells.iter().map(|c| c.i).collect();
    ai.dedup();
    let mut res = if ai.len() == 1 {
        SchemeResult::new(
            Scheme::SocialWelfare,
            Recommendation::Strategies(vec![game.strategies_a()[ai[0]].clone()]),
            Status::Unique,
        )
    } else {
        let mut res = SchemeResult::new(
            Scheme::SocialWelfare,
            Recommendation::Strategies(Vec::new()),
            Status::NoPureSolution,
        );
        res.diagnostics.push(format!(
            "maximum joint payoff {best} is reached with {} different AI strategies",
            ai.len()
        ));
        res
    };
    res.cells = cells;
    res
}

fn recommend_from(game: &BimatrixGame, eq: &EquilibriumSet) -> (Recommendation, Status) {
    let mut ai: Vec<usize> = eq.pure.iter().map(|c| c.i).collect();
    ai.sort_unstable();
    ai.dedup();
    if ai.is_empty() {
        if let Some(m) = eq.mixed.first() {
            return (
                Recommendation::Mixed(m.profile.probs_a.clone()),
                Status::NoPureSolution,
            );
        }
    }
    let labels = ai.iter().map(|&i| game.strategies_a()[i].clone()).collect();
    (Recommendation::Strategies(labels), status_for(ai.len()))
}

/// AI maximizes `payoff_a + beta * payoff_b`; the human keeps `payoff_b`.
pub fn scheme_beta_weighted(game: &BimatrixGame, beta: f64) -> Result<SchemeResult> {
    if !beta.is_finite() || beta <= 1.0 {
        return Err(Error::Parameter(format!("beta must exceed 1, got {beta}")));
    }
    let (r, c) = game.shape();
    let transformed_a: Vec<Vec<f64>> = (0..r)
        .map(|i| {
            (0..c)
                .map(|j| game.payoff_a()[i][j] + beta * game.payoff_b()[i][j])
                .collect()
        })
        .collect();
    let transformed = game.with_payoffs(transformed_a, game.payoff_b().to_vec())?;
    let eq = equilibria(&transformed);
    let dominance = (0..c)
        .map(|j| {
            let col: Vec<f64> = (0..r).map(|i| transformed.payoff_a()[i][j]).collect();
            let best = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            DominanceEntry {
                human_strategy: game.strategies_b()[j].clone(),
                ai_best_responses: (0..r)
                    .filter(|&i| col[i] >= best - TOL)
                    .map(|i| game.strategies_a()[i].clone())
                    .collect(),
            }
        })
        .collect();
    let (recommended, status) = recommend_from(game, &eq);
    let mut res = SchemeResult::new(Scheme::BetaWeighted(beta), recommended, status);
    res.diagnostics.extend(eq.diagnostics.iter().cloned());
    if eq.pure.is_empty() {
        res.diagnostics
            .push("transformed game has no pure equilibrium".to_string());
    }
    res.equilibria = Some(eq);
    res.solved_game = Some(transformed);
    res.dominance = dominance;
    Ok(res)
}

fn allowed(
    game: &BimatrixGame,
    annotation: &KantianAnnotation,
    player: Player,
) -> Result<Vec<usize>> {
    let n = game.strategies(player).len();
    let ann = annotation.for_player(player);
    if let Some((label, _)) = ann.iter().find(|(_, v)| **v == KantianValue::Obligatory) {
        return Ok(vec![game.index_of(player, label)?]);
    }
    let kept: Vec<usize> = (0..n)
        .filter(|&i| ann.get(&game.strategies(player)[i]) != Some(&KantianValue::Forbidden))
        .collect();
    if kept.is_empty() {
        return Err(Error::Annotation(format!(
            "every strategy of player {} is forbidden",
            player.tag()
        )));
    }
    Ok(kept)
}

/// Removes forbidden strategies, keeps only an obligatory one, adds finite K
/// values, then solves the resulting game.
pub fn scheme_kantian(game: &BimatrixGame, annotation: &KantianAnnotation) -> Result<SchemeResult> {
    annotation.validate(game)?;
    let rows = allowed(game, annotation, Player::A)?;
    let cols = allowed(game, annotation, Player::B)?;
    let reduced = game.restrict(&rows, &cols)?;
    let mut finite = KantianAnnotation::new();
    for player in [Player::A, Player::B] {
        for (label, value) in annotation.for_player(player) {
            if let KantianValue::Finite(k) = value {
                if reduced.strategies(player).contains(label) {
                    finite = finite.with(player, label.clone(), KantianValue::Finite(*k));
                }
            }
        }
    }
    let augmented = augment_kantian(&reduced, &finite)?;
    let eq = equilibria(&augmented);
    let (recommended, status) = recommend_from(&augmented, &eq);
    let mut res = SchemeResult::new(Scheme::Kantian, recommended, status);
    let (r0, c0) = game.shape();
    if rows.len() < r0 || cols.len() < c0 {
        res.diagnostics.push(format!(
            "strategy spaces reduced to {{{}}} x {{{}}}",
            augmented.strategies_a().join(", "),
            augmented.strategies_b().join(", ")
        ));
    }
    res.diagnostics.extend(eq.diagnostics.iter().cloned());
    res.equilibria = Some(eq);
    res.solved_game = Some(augmented);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{builtin_game, BuiltinGame};
    use crate::zd::PdPayoffs;

    fn wp() -> BimatrixGame {
        builtin_game(BuiltinGame::WaitOrPass)
    }

    fn pd() -> BimatrixGame {
        builtin_game(BuiltinGame::PrisonersDilemma(PdPayoffs::axelrod()))
    }

    fn labels(cells: &[Cell]) -> Vec<(String, String)> {
        cells
            .iter()
            .map(|c| (c.strategy_a.clone(), c.strategy_b.clone()))
            .collect()
    }

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    fn game(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> BimatrixGame {
        let r = a.len();
        let c = a[0].len();
        BimatrixGame::new(
            "g",
            (0..r).map(|i| format!("r{i}")).collect(),
            (0..c).map(|j| format!("c{j}")).collect(),
            a,
            b,
        )
        .unwrap()
    }

    #[test]
    fn pure_nash_examples() {
        assert_eq!(labels(&pure_nash(&pd())), vec![pair("D", "D")]);
        let trust = builtin_game(BuiltinGame::TrustNormalForm);
        assert_eq!(labels(&pure_nash(&trust)), vec![pair("a", "bp")]);
        assert_eq!(
            labels(&pure_nash(&wp())),
            vec![pair("wait", "pass"), pair("pass", "wait")]
        );
    }

    #[test]
    fn mixed_2x2_examples() {
        let eq = mixed_nash_2x2(&wp()).unwrap();
        assert_eq!(eq.mixed.len(), 1);
        let m = &eq.mixed[0].profile;
        assert!((m.probs_a[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((m.probs_b[0] - 1.0 / 3.0).abs() < 1e-12);

        let constant = game(vec![vec![2.0; 2]; 2], vec![vec![2.0; 2]; 2]);
        let eq = mixed_nash_2x2(&constant).unwrap();
        assert!(eq.degenerate);
        assert_eq!(eq.pure.len(), 4);
        assert!(eq.mixed.is_empty());

        assert!(mixed_nash_2x2(&game(vec![vec![0.0; 3]; 2], vec![vec![0.0; 3]; 2])).is_err());
    }

    #[test]
    fn support_enumeration_examples() {
        let eq = support_enumeration(&pd(), 4).unwrap();
        assert_eq!(labels(&eq.pure), vec![pair("D", "D")]);
        assert!(eq.mixed.is_empty());

        let pennies = game(
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
            vec![vec![-1.0, 1.0], vec![1.0, -1.0]],
        );
        let eq = support_enumeration(&pennies, 4).unwrap();
        assert!(eq.pure.is_empty());
        assert_eq!(eq.mixed.len(), 1);
        for p in eq.mixed[0]
            .profile
            .probs_a
            .iter()
            .chain(&eq.mixed[0].profile.probs_b)
        {
            assert!((p - 0.5).abs() < 1e-12);
        }

        let rps = game(
            vec![
                vec![0.0, -1.0, 1.0],
                vec![1.0, 0.0, -1.0],
                vec![-1.0, 1.0, 0.0],
            ],
            vec![
                vec![0.0, 1.0, -1.0],
                vec![-1.0, 0.0, 1.0],
                vec![1.0, -1.0, 0.0],
            ],
        );
        let eq = support_enumeration(&rps, 4).unwrap();
        assert_eq!(eq.mixed.len(), 1);
        for p in &eq.mixed[0].profile.probs_a {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }

        let big = game(vec![vec![0.0; 5]; 5], vec![vec![0.0; 5]; 5]);
        assert!(matches!(
            support_enumeration(&big, 4),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn pareto_examples() {
        assert_eq!(
            labels(&pareto_front(&pd())),
            vec![pair("C", "C"), pair("C", "D"), pair("D", "C")]
        );
        assert_eq!(
            labels(&pareto_front(&wp())),
            vec![pair("wait", "pass"), pair("pass", "wait")]
        );
        let one = game(vec![vec![1.0]], vec![vec![2.0]]);
        assert_eq!(pareto_front(&one).len(), 1);
    }

    #[test]
    fn human_priority_examples() {
        let res = scheme_human_priority(&wp());
        assert_eq!(res.recommended.strategies(), ["wait"]);
        assert_eq!(res.status, Status::Unique);

        let split = game(vec![vec![0.0; 2]; 2], vec![vec![5.0, 0.0], vec![0.0, 5.0]]);
        let res = scheme_human_priority(&split);
        assert_eq!(res.status, Status::Ambiguous);
        assert_eq!(res.recommended.strategies().len(), 2);
        assert!(res.diagnostics[0].contains("maximin"));

        let single = game(vec![vec![1.0, 2.0, 3.0]], vec![vec![0.0, 1.0, 0.0]]);
        assert_eq!(
            scheme_human_priority(&single).recommended.strategies(),
            ["r0"]
        );
    }

    #[test]
    fn social_welfare_examples() {
        let res = scheme_social_welfare(&wp());
        assert_eq!(res.status, Status::NoPureSolution);
        assert_eq!(
            labels(&res.cells),
            vec![pair("wait", "pass"), pair("pass", "wait")]
        );
        let res = scheme_social_welfare(&pd());
        assert_eq!(labels(&res.cells), vec![pair("C", "C")]);
        assert_eq!(res.status, Status::Unique);
        let constant = game(vec![vec![1.0; 2]; 2], vec![vec![1.0; 2]; 2]);
        let res = scheme_social_welfare(&constant);
        assert_eq!(res.cells.len(), 4);
        assert_eq!(res.status, Status::NoPureSolution);
    }

    #[test]
    fn beta_weighted_examples() {
        let res = scheme_beta_weighted(&wp(), 2.0).unwrap();
        let solved = res.solved_game.as_ref().unwrap();
        assert_eq!(solved.payoff_a(), &[vec![-3.0, 1.0], vec![-1.0, -6.0]]);
        let eq = res.equilibria.as_ref().unwrap();
        assert_eq!(eq.mixed.len(), 1);
        let m = &eq.mixed[0].profile;
        assert!((m.probs_a[0] - 1.0 / 3.0).abs() < 1e-9);
        assert!((m.probs_b[0] - 7.0 / 9.0).abs() < 1e-9);
        // the transformed game keeps both anti-coordination cells as pure equilibria
        assert_eq!(
            labels(&eq.pure),
            vec![pair("wait", "pass"), pair("pass", "wait")]
        );
        assert_eq!(res.status, Status::Ambiguous);
        assert_eq!(res.dominance[0].human_strategy, "wait");
        assert_eq!(res.dominance[0].ai_best_responses, ["pass"]);
        assert_eq!(res.dominance[1].ai_best_responses, ["wait"]);

        assert!(scheme_beta_weighted(&wp(), 1.0).is_err());
        let constant = game(vec![vec![1.0; 2]; 2], vec![vec![1.0; 2]; 2]);
        let res = scheme_beta_weighted(&constant, 1.0 + 1e-9).unwrap();
        let eq = res.equilibria.unwrap();
        assert!(eq.degenerate);
        assert_eq!(eq.pure.len(), 4);
    }

    #[test]
    fn kantian_examples() {
        let ann = KantianAnnotation::new().with(Player::A, "wait", KantianValue::Obligatory);
        let res = scheme_kantian(&wp(), &ann).unwrap();
        assert_eq!(
            labels(&res.equilibria.as_ref().unwrap().pure),
            vec![pair("wait", "pass")]
        );
        assert_eq!(res.status, Status::Unique);

        let ann = KantianAnnotation::new().with(Player::A, "wait", KantianValue::Finite(3.0));
        let res = scheme_kantian(&wp(), &ann).unwrap();
        let eq = res.equilibria.unwrap();
        assert_eq!(labels(&eq.pure), vec![pair("wait", "pass")]);
        assert!(eq.mixed.is_empty());

        let zero = KantianAnnotation::new()
            .with(Player::A, "wait", KantianValue::Finite(0.0))
            .with(Player::B, "pass", KantianValue::Finite(0.0));
        let res = scheme_kantian(&wp(), &zero).unwrap();
        assert_eq!(res.equilibria.unwrap(), mixed_nash_2x2(&wp()).unwrap());

        let all_forbidden = KantianAnnotation::new()
            .with(Player::A, "wait", KantianValue::Forbidden)
            .with(Player::A, "pass", KantianValue::Forbidden);
        assert!(scheme_kantian(&wp(), &all_forbidden).is_err());
    }
}
