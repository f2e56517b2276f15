//! Memory-one strategies in the iterated prisoner's dilemma.
//!
//! States are ordered `CC, CD, DC, DD` from the focal player X's point of
//! view (own move first). A memory-one strategy is the vector of cooperation
//! probabilities after each state. Long-run scores come from the stationary
//! distribution of the joint Markov chain; zero-determinant (ZD) strategies
//! are those whose `p - (1, 1, 0, 0)` lies in the span of the two score
//! vectors and the all-ones vector, which pins the long-run scores of both
//! players to a line whatever the co-player does.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Matrix4x3, Vector3, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default perturbation applied to degenerate chains.
pub const DEFAULT_EPSILON: f64 = 1e-6;
/// Singular values below this count toward the null space of `M' - I`.
pub const RANK_TOL: f64 = 1e-10;
/// Least-squares residual under which a strategy is declared ZD.
pub const ZD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdPayoffs {
    pub r: f64,
    pub t: f64,
    pub s: f64,
    pub p: f64,
}

impl PdPayoffs {
    /// Requires `T > R > P > S` and `2R > T + S`.
    pub fn new(r: f64, t: f64, s: f64, p: f64) -> Result<Self> {
        if ![r, t, s, p].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("prisoner's dilemma payoffs".to_string()));
        }
        if !(t > r && r > p && p > s) {
            return Err(Error::NotADilemma(format!(
                "need T > R > P > S, got R={r} T={t} S={s} P={p}"
            )));
        }
        if 2.0 * r <= t + s {
            return Err(Error::NotADilemma(format!(
                "need 2R > T + S, got 2R={} and T+S={}",
                2.0 * r,
                t + s
            )));
        }
        Ok(Self { r, t, s, p })
    }

    /// R=3, T=5, S=0, P=1.
    pub fn axelrod() -> Self {
        Self {
            r: 3.0,
            t: 5.0,
            s: 0.0,
            p: 1.0,
        }
    }

    /// X's payoff per state.
    pub fn scores_x(&self) -> [f64; 4] {
        [self.r, self.s, self.t, self.p]
    }

    /// Y's payoff per state (states still from X's view).
    pub fn scores_y(&self) -> [f64; 4] {
        [self.r, self.t, self.s, self.p]
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.r * c, self.t * c, self.s * c, self.p * c)
    }

    /// One-shot payoffs `(x, y)` for a pair of moves.
    pub fn one_shot(&self, x: Move, y: Move) -> (f64, f64) {
        match (x, y) {
            (Move::C, Move::C) => (self.r, self.r),
            (Move::C, Move::D) => (self.s, self.t),
            (Move::D, Move::C) => (self.t, self.s),
            (Move::D, Move::D) => (self.p, self.p),
        }
    }
}

impl Default for PdPayoffs {
    fn default() -> Self {
        Self::axelrod()
    }
}

impl FromStr for PdPayoffs {
    type Err = Error;

    /// `R,T,S,P`.
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parameter(format!("payoffs `{s}`: {e}")))?;
        match v.as_slice() {
            [r, t, s, p] => Self::new(*r, *t, *s, *p),
            _ => Err(Error::Parameter(format!("payoffs `{s}`: expected R,T,S,P"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Move {
    C,
    D,
}

impl Move {
    pub fn flipped(self) -> Move {
        match self {
            Move::C => Move::D,
            Move::D => Move::C,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::C => "C",
            Move::D => "D",
        })
    }
}

impl FromStr for Move {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "C" | "c" => Ok(Move::C),
            "D" | "d" => Ok(Move::D),
            other => Err(Error::Parameter(format!("move `{other}` is not C or D"))),
        }
    }
}

/// State index in `CC, CD, DC, DD` order for X's own move and Y's move.
pub fn state_index(own: Move, other: Move) -> usize {
    2 * usize::from(own == Move::D) + usize::from(other == Move::D)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemoryOneStrategy {
    pub p: [f64; 4],
    pub initial: Move,
}

impl MemoryOneStrategy {
    pub fn new(p: [f64; 4], initial: Move) -> Result<Self> {
        if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::Parameter(format!(
                "cooperation probabilities {p:?} must lie in [0, 1]"
            )));
        }
        Ok(Self { p, initial })
    }

    /// Cooperation probability after the previous round `(own, other)`.
    pub fn coop_prob(&self, own: Move, other: Move) -> f64 {
        self.p[state_index(own, other)]
    }
}

/// Row-stochastic 4x4 transition matrix plus the strategies that generated it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix {
    pub m: [[f64; 4]; 4],
    pub p: [f64; 4],
    pub q: [f64; 4],
}

/// Transition matrix for X playing `p` against Y playing `q`. Y sees the
/// states with the roles swapped, so it cooperates with `(q1, q3, q2, q4)`.
pub fn transition_matrix(p: &[f64; 4], q: &[f64; 4]) -> TransitionMatrix {
    let q_view = [q[0], q[2], q[1], q[3]];
    let mut m = [[0.0; 4]; 4];
    for (state, row) in m.iter_mut().enumerate() {
        let (px, py) = (p[state], q_view[state]);
        row[0] = px * py;
        row[1] = px * (1.0 - py);
        row[2] = (1.0 - px) * py;
        row[3] = (1.0 - px) * (1.0 - py);
    }
    TransitionMatrix { m, p: *p, q: *q }
}

fn to_matrix(m: &[[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[i][j])
}

/// Dimension of the fixed space of `v M = v`.
pub fn stationary_nullity(m: &[[f64; 4]; 4]) -> usize {
    let a = to_matrix(m).transpose() - Matrix4::identity();
    a.svd(false, false)
        .singular_values
        .iter()
        .filter(|s| **s < RANK_TOL)
        .count()
}

/// Unique stationary distribution, or `None` when the chain has more than one.
pub fn solve_stationary(m: &[[f64; 4]; 4]) -> Option<[f64; 4]> {
    if stationary_nullity(m) != 1 {
        return None;
    }
    let mut a = to_matrix(m).transpose() - Matrix4::identity();
    for j in 0..4 {
        a[(3, j)] = 1.0;
    }
    let b = Vector4::new(0.0, 0.0, 0.0, 1.0);
    let x = a.lu().solve(&b)?;
    let mut v = [0.0; 4];
    for (i, vi) in v.iter_mut().enumerate() {
        *vi = x[i].max(0.0);
    }
    let sum: f64 = v.iter().sum();
    if sum <= 0.0 || !sum.is_finite() {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= sum);
    Some(v)
}

/// Which strategies are nudged toward 1/2 when the chain is degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturb {
    Both,
    /// Only the co-player. A ZD strategy's line holds for every co-player, so
    /// this keeps scores exactly on the enforced line.
    OpponentOnly,
}

pub fn perturb(p: &[f64; 4], epsilon: f64) -> [f64; 4] {
    p.map(|x| epsilon + (1.0 - 2.0 * epsilon) * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stationary {
    pub v: [f64; 4],
    pub perturbed: bool,
}

/// Stationary distribution of the chain. When it is not unique, every strategy
/// probability is moved toward 1/2 by `epsilon` and the perturbed chain is
/// solved instead; the result is flagged.
pub fn stationary_distribution(tm: &TransitionMatrix, epsilon: f64) -> Stationary {
    stationary_with(tm, epsilon, Perturb::Both)
}

pub fn stationary_with(tm: &TransitionMatrix, epsilon: f64, mode: Perturb) -> Stationary {
    if let Some(v) = solve_stationary(&tm.m) {
        return Stationary {
            v,
            perturbed: false,
        };
    }
    let q = perturb(&tm.q, epsilon);
    if mode == Perturb::OpponentOnly {
        if let Some(v) = solve_stationary(&transition_matrix(&tm.p, &q).m) {
            return Stationary { v, perturbed: true };
        }
    }
    let p = perturb(&tm.p, epsilon);
    let v = solve_stationary(&transition_matrix(&p, &q).m)
        .expect("a chain with all probabilities strictly inside (0, 1) is ergodic");
    Stationary { v, perturbed: true }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LongRunScores {
    pub s_x: f64,
    pub s_y: f64,
    pub stationary: Stationary,
}

fn scores_from(v: &[f64; 4], payoffs: &PdPayoffs) -> (f64, f64) {
    let dot = |w: [f64; 4]| v.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
    (dot(payoffs.scores_x()), dot(payoffs.scores_y()))
}

/// Long-run per-round scores `(s_X, s_Y)`.
pub fn long_run_scores(p: &[f64; 4], q: &[f64; 4], payoffs: &PdPayoffs) -> LongRunScores {
    long_run_scores_with(p, q, payoffs, DEFAULT_EPSILON, Perturb::Both)
}

pub fn long_run_scores_with(
    p: &[f64; 4],
    q: &[f64; 4],
    payoffs: &PdPayoffs,
    epsilon: f64,
    mode: Perturb,
) -> LongRunScores {
    let st = stationary_with(&transition_matrix(p, q), epsilon, mode);
    let (s_x, s_y) = scores_from(&st.v, payoffs);
    LongRunScores {
        s_x,
        s_y,
        stationary: st,
    }
}

/// Score anchor of a ZD relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Baseline {
    /// Punishment payoff: extortionate strategies.
    P,
    /// Reward payoff: generous strategies.
    R,
}

impl Baseline {
    pub fn value(self, payoffs: &PdPayoffs) -> f64 {
        match self {
            Baseline::P => payoffs.p,
            Baseline::R => payoffs.r,
        }
    }
}

impl FromStr for Baseline {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "P" | "p" => Ok(Baseline::P),
            "R" | "r" => Ok(Baseline::R),
            other => Err(Error::Parameter(format!(
                "baseline `{other}` is not P or R"
            ))),
        }
    }
}

/// `alpha * s_X + beta * s_Y + gamma = 0`, normalized to `alpha = 1` unless
/// alpha vanishes (then `beta = 1`). When the line can be written as
/// `s_X - kappa = chi (s_Y - kappa)`, `chi` and `kappa` are filled in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnforcedLine {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub phi: f64,
    pub chi: Option<f64>,
    pub kappa: Option<f64>,
}

impl EnforcedLine {
    /// Normalizes raw coefficients of `p - (1,1,0,0) = a S_X + b S_Y + g 1`.
    /// Returns `None` when `(a, b)` vanishes.
    pub fn from_raw(a: f64, b: f64, g: f64) -> Option<Self> {
        const EPS: f64 = 1e-12;
        if a.abs() > EPS {
            let (beta, gamma) = (b / a, g / a);
            let chi = -beta;
            let kappa = if (chi - 1.0).abs() > EPS {
                Some(gamma / (chi - 1.0))
            } else {
                None
            };
            Some(Self {
                alpha: 1.0,
                beta,
                gamma,
                phi: a,
                chi: Some(chi),
                kappa,
            })
        } else if b.abs() > EPS {
            Some(Self {
                alpha: 0.0,
                beta: 1.0,
                gamma: g / b,
                phi: 0.0,
                chi: None,
                kappa: None,
            })
        } else {
            None
        }
    }

    pub fn residual(&self, s_x: f64, s_y: f64) -> f64 {
        self.alpha * s_x + self.beta * s_y + self.gamma
    }

    /// Unit direction along the line, oriented toward increasing `s_X`
    /// (increasing `s_Y` for vertical lines).
    pub fn direction(&self) -> (f64, f64) {
        let (mut dx, mut dy) = (-self.beta, self.alpha);
        if dx < 0.0 || (dx == 0.0 && dy < 0.0) {
            dx = -dx;
            dy = -dy;
        }
        let n = dx.hypot(dy);
        (dx / n, dy / n)
    }

    /// Coefficient-wise comparison of normalized lines.
    pub fn approx_eq(&self, other: &EnforcedLine, tol: f64) -> bool {
        (self.alpha - other.alpha).abs() <= tol
            && (self.beta - other.beta).abs() <= tol
            && (self.gamma - other.gamma).abs() <= tol
    }
}

impl fmt::Display for EnforcedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::interface::report::fmt_sig9;
        let signed = |x: f64| {
            if x < 0.0 {
                format!("- {}", fmt_sig9(-x))
            } else {
                format!("+ {}", fmt_sig9(x))
            }
        };
        write!(
            f,
            "{} s_X {} s_Y {} = 0",
            fmt_sig9(self.alpha),
            signed(self.beta),
            signed(self.gamma)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZdStrategy {
    pub strategy: MemoryOneStrategy,
    pub line: EnforcedLine,
}

/// Direction `(S_X - kappa) - chi (S_Y - kappa)`, so that `p = (1,1,0,0) + phi * d`.
fn zd_direction(chi: f64, baseline: Baseline, payoffs: &PdPayoffs) -> [f64; 4] {
    let kappa = baseline.value(payoffs);
    let sx = payoffs.scores_x();
    let sy = payoffs.scores_y();
    std::array::from_fn(|i| (sx[i] - kappa) - chi * (sy[i] - kappa))
}

const BASE: [f64; 4] = [1.0, 1.0, 0.0, 0.0];

/// Vertices of the convex hull of the one-shot outcomes, counter-clockwise.
/// `(P, P)` drops out when it lies on or above the segment from `(S, T)` to
/// `(T, S)`.
pub fn feasible_hull(payoffs: &PdPayoffs) -> Vec<(f64, f64)> {
    let PdPayoffs { r, t, s, p } = *payoffs;
    if 2.0 * p < s + t {
        vec![(p, p), (t, s), (r, r), (s, t)]
    } else {
        vec![(t, s), (r, r), (s, t)]
    }
}

/// Largest `phi` keeping every probability of the ZD strategy in `[0, 1]`.
/// Zero when no positive `phi` is feasible.
pub fn phi_max(chi: f64, baseline: Baseline, payoffs: &PdPayoffs) -> f64 {
    let d = zd_direction(chi, baseline, payoffs);
    let mut bound = f64::INFINITY;
    for (base, di) in BASE.iter().zip(d) {
        if di == 0.0 {
            continue;
        }
        // base 1 needs di < 0, base 0 needs di > 0
        if (*base == 1.0) == (di > 0.0) {
            return 0.0;
        }
        bound = bound.min(1.0 / di.abs());
    }
    bound
}

/// ZD strategy enforcing `s_X - kappa = chi (s_Y - kappa)` with scale `phi`.
pub fn zd_construct(
    chi: f64,
    baseline: Baseline,
    phi: f64,
    payoffs: &PdPayoffs,
) -> Result<ZdStrategy> {
    if !chi.is_finite() || chi <= 1.0 {
        return Err(Error::Parameter(format!("chi must exceed 1, got {chi}")));
    }
    if !phi.is_finite() || phi <= 0.0 {
        return Err(Error::Parameter(format!("phi must be positive, got {phi}")));
    }
    let d = zd_direction(chi, baseline, payoffs);
    let mut p = [0.0; 4];
    for i in 0..4 {
        let raw = BASE[i] + phi * d[i];
        if !(-1e-12..=1.0 + 1e-12).contains(&raw) {
            return Err(Error::Parameter(format!(
                "phi = {phi} puts p{} = {raw} outside [0, 1] (phi_max = {})",
                i + 1,
                phi_max(chi, baseline, payoffs)
            )));
        }
        p[i] = raw.clamp(0.0, 1.0);
    }
    let kappa = baseline.value(payoffs);
    let line = EnforcedLine {
        alpha: 1.0,
        beta: -chi,
        gamma: (chi - 1.0) * kappa,
        phi,
        chi: Some(chi),
        kappa: Some(kappa),
    };
    Ok(ZdStrategy {
        strategy: MemoryOneStrategy::new(p, Move::C)?,
        line,
    })
}

/// Least-squares fit of `p - (1,1,0,0)` onto `S_X, S_Y, 1`. Returns the
/// enforced line when the residual is below [`ZD_TOL`].
pub fn zd_detect(p: &[f64; 4], payoffs: &PdPayoffs) -> Option<EnforcedLine> {
    let sx = payoffs.scores_x();
    let sy = payoffs.scores_y();
    let a = Matrix4x3::from_fn(|i, j| match j {
        0 => sx[i],
        1 => sy[i],
        _ => 1.0,
    });
    let target = Vector4::from_fn(|i, _| p[i] - BASE[i]);
    let coef: Vector3<f64> = a.svd(true, true).solve(&target, 1e-14).ok()?;
    let residual = (a * coef - target).norm();
    if residual >= ZD_TOL {
        return None;
    }
    EnforcedLine::from_raw(coef[0], coef[1], coef[2])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentPoint {
    pub s_x: f64,
    pub s_y: f64,
    /// Pure memory-one co-player attaining this point.
    pub witness: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibleSegment {
    pub line: EnforcedLine,
    pub min: SegmentPoint,
    pub max: SegmentPoint,
}

impl FeasibleSegment {
    pub fn endpoints(&self) -> [(f64, f64); 2] {
        [(self.min.s_x, self.min.s_y), (self.max.s_x, self.max.s_y)]
    }

    /// Euclidean distance from a score pair to the segment.
    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        let (ax, ay) = (self.min.s_x, self.min.s_y);
        let (bx, by) = (self.max.s_x, self.max.s_y);
        let (dx, dy) = (bx - ax, by - ay);
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((x - ax) * dx + (y - ay) * dy) / len2).clamp(0.0, 1.0)
        };
        (x - (ax + t * dx)).hypot(y - (ay + t * dy))
    }
}

/// The sixteen deterministic memory-one strategies, in binary order
/// `(0,0,0,0), (0,0,0,1), ..., (1,1,1,1)`.
pub fn pure_memory_one() -> [[f64; 4]; 16] {
    std::array::from_fn(|k| std::array::from_fn(|i| f64::from(((k >> (3 - i)) & 1) as u8)))
}

/// Long-run scores of `p` against each pure memory-one co-player. Degenerate
/// chains are resolved by perturbing the co-player only.
pub fn vertex_scores(p: &[f64; 4], payoffs: &PdPayoffs) -> Vec<([f64; 4], LongRunScores)> {
    pure_memory_one()
        .iter()
        .map(|q| {
            (
                *q,
                long_run_scores_with(p, q, payoffs, DEFAULT_EPSILON, Perturb::OpponentOnly),
            )
        })
        .collect()
}

/// Attainable part of the enforced line: the extreme long-run scores over the
/// sixteen pure co-players. Scores are ratios of functions multilinear in each
/// `q_i`, so the extremes over `[0,1]^4` sit at these vertices.
pub fn feasible_segment(p: &[f64; 4], payoffs: &PdPayoffs) -> Result<FeasibleSegment> {
    let line = zd_detect(p, payoffs)
        .ok_or_else(|| Error::Degenerate(format!("{p:?} is not a zero-determinant strategy")))?;
    let (dx, dy) = line.direction();
    let mut lo: Option<(f64, SegmentPoint)> = None;
    let mut hi: Option<(f64, SegmentPoint)> = None;
    for (q, sc) in vertex_scores(p, payoffs) {
        let t = sc.s_x * dx + sc.s_y * dy;
        let pt = SegmentPoint {
            s_x: sc.s_x,
            s_y: sc.s_y,
            witness: q,
        };
        // strict comparisons keep the first witness in enumeration order
        if lo.as_ref().is_none_or(|(best, _)| t < *best - 1e-12) {
            lo = Some((t, pt));
        }
        if hi.as_ref().is_none_or(|(best, _)| t > *best + 1e-12) {
            hi = Some((t, pt));
        }
    }
    let (_, min) = lo.expect("sixteen vertices");
    let (_, max) = hi.expect("sixteen vertices");
    Ok(FeasibleSegment { line, min, max })
}

/// Parses `p1,p2,p3,p4`, each a decimal or a fraction `a/b`.
pub fn parse_strategy_literal(s: &str) -> Result<[f64; 4]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Parameter(format!(
            "strategy `{s}` needs four comma-separated probabilities"
        )));
    }
    let mut p = [0.0; 4];
    for (slot, part) in p.iter_mut().zip(&parts) {
        *slot = crate::interface::number::parse_exact(part)
            .map(|r| crate::interface::number::to_f64(&r))
            .map_err(|m| Error::Parameter(format!("strategy `{s}`: {m}")))?;
    }
    MemoryOneStrategy::new(p, Move::C)?;
    Ok(p)
}
