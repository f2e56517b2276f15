//! Ethics verdicts from ZD outcome geometry, Axelrod-style trait predicates,
//! and a seeded IPD tournament.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::zd::{
    feasible_segment, vertex_scores, zd_construct, zd_detect, Baseline, EnforcedLine,
    FeasibleSegment, MemoryOneStrategy, Move, PdPayoffs,
};

/// Thresholds used by the verdict and trait predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Probabilities closer than this to 0 or 1 count as 0 or 1.
    pub prob: f64,
    /// Score differences up to this count as equal.
    pub score: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            prob: 1e-9,
            score: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Ethical,
    Unethical,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EthicsVerdict {
    pub verdict: Verdict,
    pub line: Option<EnforcedLine>,
    pub segment: Option<FeasibleSegment>,
    /// Largest `(s_X + s_Y) / 2R` on the segment.
    pub efficiency: f64,
    /// `(R, R)` lies on the segment.
    pub mutual_coop_attainable: bool,
    /// Largest `s_X - s_Y` on the segment.
    pub self_advantage: f64,
    pub diagnostic: Option<String>,
}

pub fn ethics_verdict(p: &[f64; 4], payoffs: &PdPayoffs) -> EthicsVerdict {
    ethics_verdict_with(p, payoffs, Thresholds::default())
}

/// Ethical when mutual cooperation is attainable and the strategy never
/// out-scores its co-player; unethical when mutual cooperation is out of reach
/// and the strategy's best score beats the co-player's best.
pub fn ethics_verdict_with(p: &[f64; 4], payoffs: &PdPayoffs, th: Thresholds) -> EthicsVerdict {
    let segment = match feasible_segment(p, payoffs) {
        Ok(s) => s,
        Err(e) => {
            return EthicsVerdict {
                verdict: Verdict::Indeterminate,
                line: None,
                segment: None,
                efficiency: f64::NAN,
                mutual_coop_attainable: false,
                self_advantage: f64::NAN,
                diagnostic: Some(e.to_string()),
            }
        }
    };
    let ends = segment.endpoints();
    let efficiency = ends
        .iter()
        .map(|(x, y)| (x + y) / (2.0 * payoffs.r))
        .fold(f64::NEG_INFINITY, f64::max)
        .clamp(0.0, 1.0);
    let self_advantage = ends
        .iter()
        .map(|(x, y)| x - y)
        .fold(f64::NEG_INFINITY, f64::max);
    let mutual = segment.distance_to(payoffs.r, payoffs.r) <= th.score;
    let max_x = ends.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    let max_y = ends.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let (verdict, diagnostic) = if mutual && self_advantage <= th.score {
        (Verdict::Ethical, None)
    } else if !mutual && max_x > max_y + th.score {
        (Verdict::Unethical, None)
    } else {
        (
            Verdict::Indeterminate,
            Some(format!(
                "mutual cooperation attainable: {mutual}; self advantage {self_advantage}"
            )),
        )
    };
    EthicsVerdict {
        verdict,
        line: Some(segment.line),
        segment: Some(segment),
        efficiency,
        mutual_coop_attainable: mutual,
        self_advantage,
        diagnostic,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YesNo {
    Yes,
    No,
}

impl YesNo {
    fn from(b: bool) -> Self {
        if b {
            YesNo::Yes
        } else {
            YesNo::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == YesNo::Yes
    }

    pub fn letter(self) -> &'static str {
        match self {
            YesNo::Yes => "Y",
            YesNo::No => "N",
        }
    }
}

impl Serialize for YesNo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trait {
    pub value: YesNo,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraitReport {
    pub nice: Trait,
    pub retaliating: Trait,
    pub forgiving: Trait,
    pub non_envious: Trait,
}

pub fn trait_check(strategy: &MemoryOneStrategy, payoffs: &PdPayoffs) -> TraitReport {
    trait_check_with(strategy, payoffs, Thresholds::default())
}

pub fn trait_check_with(
    strategy: &MemoryOneStrategy,
    payoffs: &PdPayoffs,
    th: Thresholds,
) -> TraitReport {
    let [p1, p2, _, p4] = strategy.p;
    let nice = strategy.initial == Move::C && p1 >= 1.0 - th.prob;
    let retaliating = p2 < 1.0 - th.prob;
    let forgiving = p2 > th.prob || p4 > th.prob;
    let (envy, witness) = vertex_scores(&strategy.p, payoffs)
        .into_iter()
        .map(|(q, sc)| (sc.s_x - sc.s_y, q))
        .fold((f64::NEG_INFINITY, [0.0; 4]), |acc, x| {
            if x.0 > acc.0 {
                x
            } else {
                acc
            }
        });
    let non_envious = envy <= th.score;
    TraitReport {
        nice: Trait {
            value: YesNo::from(nice),
            rationale: format!(
                "opens with {} and cooperates after mutual cooperation with probability {p1}",
                strategy.initial
            ),
        },
        retaliating: Trait {
            value: YesNo::from(retaliating),
            rationale: format!("after being exploited (CD) cooperates with probability {p2}"),
        },
        forgiving: Trait {
            value: YesNo::from(forgiving),
            rationale: format!(
                "cooperation probability after co-player defection: CD {p2}, DD {p4}"
            ),
        },
        non_envious: Trait {
            value: YesNo::from(non_envious),
            rationale: format!(
                "largest long-run lead over a pure memory-one co-player is {envy:.9} (against {witness:?})"
            ),
        },
    }
}

/// Named memory-one strategies. `grim` is not memory-one; use [`Contestant`].
pub fn builtin_strategy(name: &str) -> Result<MemoryOneStrategy> {
    let pd = PdPayoffs::axelrod();
    let name = name.trim();
    if let Some(x) = name
        .strip_prefix("random(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let x: f64 = x
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("random({x}): not a number")))?;
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Parameter(format!(
                "random({x}): probability outside [0, 1]"
            )));
        }
        return MemoryOneStrategy::new([x; 4], Move::C);
    }
    match name {
        "allc" => MemoryOneStrategy::new([1.0; 4], Move::C),
        "alld" => MemoryOneStrategy::new([0.0; 4], Move::D),
        "tft" => MemoryOneStrategy::new([1.0, 0.0, 1.0, 0.0], Move::C),
        "wsls" => MemoryOneStrategy::new([1.0, 0.0, 0.0, 1.0], Move::C),
        "extorter" => Ok(zd_construct(3.0, Baseline::P, 1.0 / 13.0, &pd)?.strategy),
        "generous" => Ok(zd_construct(3.0, Baseline::R, 1.0 / 11.0, &pd)?.strategy),
        "grim" => Err(Error::Parameter(
            "grim is not a memory-one strategy; it is only available in matches".to_string(),
        )),
        other => Err(Error::Unknown {
            kind: "strategy",
            name: other.to_string(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Behaviour {
    MemoryOne(MemoryOneStrategy),
    /// Cooperates until the co-player defects once, then defects forever.
    Grim,
}

/// A tournament entrant.
#[derive(Debug, Clone, PartialEq)]
pub struct Contestant {
    pub name: String,
    pub behaviour: Behaviour,
    /// Probability of cooperating in the first round.
    pub opening: f64,
}

impl Contestant {
    pub fn memory_one(name: impl Into<String>, strategy: MemoryOneStrategy) -> Self {
        let opening = if strategy.initial == Move::C {
            1.0
        } else {
            0.0
        };
        Self {
            name: name.into(),
            behaviour: Behaviour::MemoryOne(strategy),
            opening,
        }
    }

    /// Any [`builtin_strategy`] name, or `grim`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        if name == "grim" {
            return Ok(Self {
                name: name.to_string(),
                behaviour: Behaviour::Grim,
                opening: 1.0,
            });
        }
        let strategy = builtin_strategy(name)?;
        let mut c = Self::memory_one(name, strategy);
        if name.starts_with("random(") {
            c.opening = strategy.p[0];
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchResult {
    pub history: Vec<(Move, Move)>,
    pub scores: (f64, f64),
    pub rounds: usize,
    pub seed: u64,
}

fn draw(rng: &mut ChaCha8Rng, coop_prob: f64) -> Move {
    if rng.random::<f64>() < coop_prob {
        Move::C
    } else {
        Move::D
    }
}

/// Plays `rounds` rounds with a ChaCha8 stream seeded by `seed`. Each round
/// draws X's move, then Y's move, then (when `noise > 0`) one flip draw per
/// player.
pub fn play_match(
    x: &Contestant,
    y: &Contestant,
    rounds: usize,
    seed: u64,
    noise: f64,
    payoffs: &PdPayoffs,
) -> Result<MatchResult> {
    if rounds == 0 {
        return Err(Error::Parameter(
            "a match needs at least one round".to_string(),
        ));
    }
    if !(0.0..=0.5).contains(&noise) {
        return Err(Error::Parameter(format!("noise {noise} outside [0, 0.5]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut history = Vec::with_capacity(rounds);
    let (mut sx, mut sy) = (0.0, 0.0);
    let mut y_defected = false;
    let mut x_defected = false;
    let coop_prob = |c: &Contestant, prev: Option<(Move, Move)>, opp_ever_defected: bool| match prev
    {
        None => c.opening,
        Some((own, other)) => match &c.behaviour {
            Behaviour::MemoryOne(s) => s.coop_prob(own, other),
            Behaviour::Grim => {
                if opp_ever_defected {
                    0.0
                } else {
                    1.0
                }
            }
        },
    };
    for _ in 0..rounds {
        let prev = history.last().copied();
        let px = coop_prob(x, prev, y_defected);
        let py = coop_prob(y, prev.map(|(a, b)| (b, a)), x_defected);
        let mut mx = draw(&mut rng, px);
        let mut my = draw(&mut rng, py);
        if noise > 0.0 {
            if rng.random::<f64>() < noise {
                mx = mx.flipped();
            }
            if rng.random::<f64>() < noise {
                my = my.flipped();
            }
        }
        x_defected |= mx == Move::D;
        y_defected |= my == Move::D;
        let (a, b) = payoffs.one_shot(mx, my);
        sx += a;
        sy += b;
        history.push((mx, my));
    }
    Ok(MatchResult {
        history,
        scores: (sx, sy),
        rounds,
        seed,
    })
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(*b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of one match: `splitmix64(splitmix64(master ^ fnv1a(x ++ 0x00 ++ y)) ^ rep)`,
/// where `x <= y` are the contestant names.
pub fn match_seed(master: u64, name_x: &str, name_y: &str, repetition: u64) -> u64 {
    let mut key = Vec::with_capacity(name_x.len() + name_y.len() + 1);
    key.extend_from_slice(name_x.as_bytes());
    key.push(0);
    key.extend_from_slice(name_y.as_bytes());
    splitmix64(splitmix64(master ^ fnv1a(&key)) ^ repetition)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TournamentOptions {
    pub noise: f64,
    pub self_play: bool,
    pub payoffs: PdPayoffs,
}

impl Default for TournamentOptions {
    fn default() -> Self {
        Self {
            noise: 0.0,
            self_play: true,
            payoffs: PdPayoffs::axelrod(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchRecord {
    pub strategy_x: String,
    pub strategy_y: String,
    pub repetition: u64,
    pub rounds: usize,
    pub seed: u64,
    pub score_x: f64,
    pub score_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pairing {
    pub strategy_x: String,
    pub strategy_y: String,
    pub mean_x: f64,
    pub mean_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Standing {
    pub rank: usize,
    pub strategy: String,
    /// Sum over pairings of the mean match score.
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tournament {
    pub matches: Vec<MatchRecord>,
    pub pairings: Vec<Pairing>,
    pub standings: Vec<Standing>,
}

/// Round robin over every unordered pair (and self-play unless disabled).
/// Contestants are processed in name order, so the output does not depend on
/// the order of `contestants`.
pub fn round_robin(
    contestants: &[Contestant],
    rounds: usize,
    repetitions: u64,
    master_seed: u64,
    options: &TournamentOptions,
) -> Result<Tournament> {
    if contestants.len() < 2 {
        return Err(Error::Parameter(
            "a tournament needs at least two strategies".to_string(),
        ));
    }
    if repetitions == 0 {
        return Err(Error::Parameter(
            "repetitions must be at least 1".to_string(),
        ));
    }
    let mut sorted: Vec<&Contestant> = contestants.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = sorted.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(Error::Parameter(format!(
            "strategy `{}` entered twice",
            w[0].name
        )));
    }
    let n = sorted.len();
    let mut matches = Vec::new();
    let mut pairings = Vec::new();
    let mut totals = vec![0.0; n];
    for i in 0..n {
        for j in i..n {
            if i == j && !options.self_play {
                continue;
            }
            let (x, y) = (sorted[i], sorted[j]);
            let (mut sum_x, mut sum_y) = (0.0, 0.0);
            for rep in 0..repetitions {
                let seed = match_seed(master_seed, &x.name, &y.name, rep);
                let m = play_match(x, y, rounds, seed, options.noise, &options.payoffs)?;
                sum_x += m.scores.0;
                sum_y += m.scores.1;
                matches.push(MatchRecord {
                    strategy_x: x.name.clone(),
                    strategy_y: y.name.clone(),
                    repetition: rep,
                    rounds,
                    seed,
                    score_x: m.scores.0,
                    score_y: m.scores.1,
                });
            }
            let (mean_x, mean_y) = (sum_x / repetitions as f64, sum_y / repetitions as f64);
            if i == j {
                totals[i] += 0.5 * (mean_x + mean_y);
            } else {
                totals[i] += mean_x;
                totals[j] += mean_y;
            }
            pairings.push(Pairing {
                strategy_x: x.name.clone(),
                strategy_y: y.name.clone(),
                mean_x,
                mean_y,
            });
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| totals[b].total_cmp(&totals[a]).then(a.cmp(&b)));
    let standings = order
        .iter()
        .enumerate()
        .map(|(rank, &k)| Standing {
            rank: rank + 1,
            strategy: sorted[k].name.clone(),
            total: totals[k],
        })
        .collect();
    Ok(Tournament {
        matches,
        pairings,
        standings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub strategy: String,
    pub p: [f64; 4],
    pub initial: Move,
    pub is_zd: bool,
    pub line: Option<EnforcedLine>,
    pub segment: Option<FeasibleSegment>,
    pub verdict: EthicsVerdict,
    pub traits: TraitReport,
}

/// ZD detection, feasible segment, verdict and traits in one report.
pub fn audit_report(name: &str, strategy: &MemoryOneStrategy, payoffs: &PdPayoffs) -> AuditReport {
    let line = zd_detect(&strategy.p, payoffs);
    let verdict = ethics_verdict(&strategy.p, payoffs);
    AuditReport {
        strategy: name.to_string(),
        p: strategy.p,
        initial: strategy.initial,
        is_zd: line.is_some(),
        line,
        segment: verdict.segment,
        traits: trait_check(strategy, payoffs),
        verdict,
    }
}
