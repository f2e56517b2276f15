//! JSON and CSV writers for solver, valuation, ZD and audit results.
//!
//! Field order is fixed by the structs below. Floating-point values are
//! rounded to 9 significant digits before printing.

use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::audit::{AuditReport, Tournament};
use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::solvers::{EquilibriumSet, Recommendation, Scheme, SchemeResult};
use crate::valuation::{ConsistencyReport, EstimateKind, KantianEstimate};
use crate::zd::ZdStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Unknown {
                kind: "format",
                name: other.to_string(),
            }),
        }
    }
}

/// Rounds to 9 significant digits.
pub fn sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// 9-significant-digit text without trailing noise.
pub fn fmt_sig9(x: f64) -> String {
    let r = sig9(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        r.to_string()
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(f) = n.as_f64() {
                *v = json!(sig9(f));
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
    round_value(&mut v);
    let mut out = serde_json::to_vec(&v).map_err(|e| Error::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn to_csv<R: Serialize>(header: &[&str], rows: &[R]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header)
        .map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize)]
struct PureJson {
    a: String,
    b: String,
    payoff_a: f64,
    payoff_b: f64,
}

#[derive(Serialize)]
struct MixedJson {
    probs_a: Vec<f64>,
    probs_b: Vec<f64>,
    payoff_a: f64,
    payoff_b: f64,
}

#[derive(Serialize)]
struct EquilibriaJson {
    pure: Vec<PureJson>,
    mixed: Vec<MixedJson>,
    degenerate: bool,
}

impl EquilibriaJson {
    fn of(eq: &EquilibriumSet) -> Self {
        Self {
            pure: eq
                .pure
                .iter()
                .map(|c| PureJson {
                    a: c.strategy_a.clone(),
                    b: c.strategy_b.clone(),
                    payoff_a: c.payoff_a,
                    payoff_b: c.payoff_b,
                })
                .collect(),
            mixed: eq
                .mixed
                .iter()
                .map(|m| MixedJson {
                    probs_a: m.profile.probs_a.clone(),
                    probs_b: m.profile.probs_b.clone(),
                    payoff_a: m.payoff_a,
                    payoff_b: m.payoff_b,
                })
                .collect(),
            degenerate: eq.degenerate,
        }
    }
}

#[derive(Serialize)]
struct DominanceJson {
    human_strategy: String,
    ai_best_responses: Vec<String>,
}

/// Result of `solve`: one scheme, or plain equilibrium analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub game: String,
    pub scheme: String,
    pub beta: Option<f64>,
    pub status: Option<String>,
    pub recommended: Vec<String>,
    pub recommended_mixed: Option<Vec<f64>>,
    pub equilibria: Option<EquilibriumSet>,
    pub pareto_front: Vec<(String, String)>,
    pub cells: Vec<(String, String, f64, f64)>,
    pub dominance: Vec<(String, Vec<String>)>,
    pub diagnostics: Vec<String>,
}

impl SolveReport {
    pub fn nash(game: &BimatrixGame, eq: EquilibriumSet, pareto: &[crate::solvers::Cell]) -> Self {
        Self {
            game: game.name().to_string(),
            scheme: "nash".to_string(),
            beta: None,
            status: None,
            recommended: Vec::new(),
            recommended_mixed: None,
            diagnostics: eq.diagnostics.clone(),
            equilibria: Some(eq),
            pareto_front: pareto
                .iter()
                .map(|c| (c.strategy_a.clone(), c.strategy_b.clone()))
                .collect(),
            cells: Vec::new(),
            dominance: Vec::new(),
        }
    }

    pub fn scheme(game: &BimatrixGame, res: &SchemeResult) -> Self {
        let (scheme, beta) = match res.scheme {
            Scheme::HumanPriority => ("human-priority", None),
            Scheme::SocialWelfare => ("social", None),
            Scheme::BetaWeighted(b) => ("beta", Some(b)),
            Scheme::Kantian => ("kantian", None),
        };
        let (recommended, recommended_mixed) = match &res.recommended {
            Recommendation::Strategies(s) => (s.clone(), None),
            Recommendation::Mixed(m) => (Vec::new(), Some(m.clone())),
        };
        Self {
            game: game.name().to_string(),
            scheme: scheme.to_string(),
            beta,
            status: Some(format!("{:?}", res.status)),
            recommended,
            recommended_mixed,
            equilibria: res.equilibria.clone(),
            pareto_front: Vec::new(),
            cells: res
                .cells
                .iter()
                .map(|c| {
                    (
                        c.strategy_a.clone(),
                        c.strategy_b.clone(),
                        c.payoff_a,
                        c.payoff_b,
                    )
                })
                .collect(),
            dominance: res
                .dominance
                .iter()
                .map(|d| (d.human_strategy.clone(), d.ai_best_responses.clone()))
                .collect(),
            diagnostics: res.diagnostics.clone(),
        }
    }

    fn json(&self) -> Value {
        let mut v = json!({
            "game": self.game,
            "scheme": self.scheme,
        });
        let o = v.as_object_mut().expect("object");
        if let Some(b) = self.beta {
            o.insert("beta".into(), json!(b));
        }
        if let Some(s) = &self.status {
            o.insert("status".into(), json!(s));
        }
        if self.scheme != "nash" {
            o.insert("recommended".into(), json!(self.recommended));
        }
        if let Some(m) = &self.recommended_mixed {
            o.insert("recommended_mixed".into(), json!(m));
        }
        if let Some(eq) = &self.equilibria {
            o.insert("equilibria".into(), json!(EquilibriaJson::of(eq)));
        }
        if self.scheme == "nash" {
            let front: Vec<Value> = self
                .pareto_front
                .iter()
                .map(|(a, b)| json!({"a": a, "b": b}))
                .collect();
            o.insert("pareto_front".into(), Value::Array(front));
        }
        if !self.cells.is_empty() {
            let cells: Vec<Value> = self
                .cells
                .iter()
                .map(|(a, b, pa, pb)| json!({"a": a, "b": b, "payoff_a": pa, "payoff_b": pb}))
                .collect();
            o.insert("cells".into(), Value::Array(cells));
        }
        if !self.dominance.is_empty() {
            let d: Vec<DominanceJson> = self
                .dominance
                .iter()
                .map(|(h, r)| DominanceJson {
                    human_strategy: h.clone(),
                    ai_best_responses: r.clone(),
                })
                .collect();
            o.insert("dominance".into(), json!(d));
        }
        o.insert("diagnostics".into(), json!(self.diagnostics));
        v
    }

    fn csv_rows(&self) -> Vec<[String; 7]> {
        let join = |v: &[f64]| v.iter().map(|x| fmt_sig9(*x)).collect::<Vec<_>>().join(";");
        let mut rows = Vec::new();
        if let Some(eq) = &self.equilibria {
            for c in &eq.pure {
                rows.push([
                    "pure".into(),
                    c.strategy_a.clone(),
                    c.strategy_b.clone(),
                    String::new(),
                    String::new(),
                    fmt_sig9(c.payoff_a),
                    fmt_sig9(c.payoff_b),
                ]);
            }
            for m in &eq.mixed {
                rows.push([
                    "mixed".into(),
                    String::new(),
                    String::new(),
                    join(&m.profile.probs_a),
                    join(&m.profile.probs_b),
                    fmt_sig9(m.payoff_a),
                    fmt_sig9(m.payoff_b),
                ]);
            }
        }
        for (a, b, pa, pb) in &self.cells {
            rows.push([
                "cell".into(),
                a.clone(),
                b.clone(),
                String::new(),
                String::new(),
                fmt_sig9(*pa),
                fmt_sig9(*pb),
            ]);
        }
        for a in &self.recommended {
            rows.push([
                "recommended".into(),
                a.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]);
        }
        rows
    }
}

/// Kantian values of both players plus the consistency residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionReport {
    pub players: [String; 2],
    pub estimate: KantianEstimate,
    pub consistency: Option<ConsistencyReport>,
}

#[derive(Serialize)]
struct EstimateJson<'a> {
    player: &'a str,
    designated_strategy: &'a str,
    #[serde(rename = "K")]
    k: f64,
    kind: EstimateKind,
}

impl ExtractionReport {
    fn rows(&self) -> Vec<EstimateJson<'_>> {
        [&self.estimate.a, &self.estimate.b]
            .into_iter()
            .zip(&self.players)
            .map(|(e, p)| EstimateJson {
                player: p,
                designated_strategy: &e.designated_strategy,
                k: e.k,
                kind: e.kind,
            })
            .collect()
    }

    fn json(&self) -> Value {
        let mut v = json!({
            "K1": self.estimate.a.k,
            "K2": self.estimate.b.k,
            "estimates": self.rows(),
        });
        if let Some(c) = &self.consistency {
            v.as_object_mut()
                .expect("object")
                .insert("consistency".into(), json!(c));
        }
        v
    }
}

#[derive(Serialize)]
struct LineJson {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

#[derive(Serialize)]
struct SegmentJson {
    min: [f64; 2],
    max: [f64; 2],
}

#[derive(Serialize)]
struct TraitsJson {
    nice: &'static str,
    retaliating: &'static str,
    forgiving: &'static str,
    non_envious: &'static str,
}

#[derive(Serialize)]
struct AuditJson {
    strategy: String,
    is_zd: bool,
    line: Option<LineJson>,
    segment: Option<SegmentJson>,
    verdict: String,
    efficiency: Option<f64>,
    self_advantage: Option<f64>,
    traits: TraitsJson,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl AuditJson {
    fn of(r: &AuditReport) -> Self {
        Self {
            strategy: r.strategy.clone(),
            is_zd: r.is_zd,
            line: r.line.map(|l| LineJson {
                alpha: l.alpha,
                beta: l.beta,
                gamma: l.gamma,
            }),
            segment: r.segment.map(|s| SegmentJson {
                min: [s.min.s_x, s.min.s_y],
                max: [s.max.s_x, s.max.s_y],
            }),
            verdict: r.verdict.verdict.to_string(),
            efficiency: finite(r.verdict.efficiency),
            self_advantage: finite(r.verdict.self_advantage),
            traits: TraitsJson {
                nice: r.traits.nice.value.letter(),
                retaliating: r.traits.retaliating.value.letter(),
                forgiving: r.traits.forgiving.value.letter(),
                non_envious: r.traits.non_envious.value.letter(),
            },
        }
    }

    fn csv_row(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(fmt_sig9).unwrap_or_default();
        let (a, b, g) = match &self.line {
            Some(l) => (Some(l.alpha), Some(l.beta), Some(l.gamma)),
            None => (None, None, None),
        };
        let seg: [Option<f64>; 4] = match &self.segment {
            Some(s) => [
                Some(s.min[0]),
                Some(s.min[1]),
                Some(s.max[0]),
                Some(s.max[1]),
            ],
            None => [None; 4],
        };
        let mut row = vec![
            self.strategy.clone(),
            self.is_zd.to_string(),
            opt(a),
            opt(b),
            opt(g),
        ];
        row.extend(seg.iter().map(|x| opt(*x)));
        row.extend([
            self.verdict.clone(),
            opt(self.efficiency),
            opt(self.self_advantage),
            self.traits.nice.to_string(),
            self.traits.retaliating.to_string(),
            self.traits.forgiving.to_string(),
            self.traits.non_envious.to_string(),
        ]);
        row
    }
}

pub const AUDIT_CSV_HEADER: [&str; 16] = [
    "strategy",
    "is_zd",
    "alpha",
    "beta",
    "gamma",
    "min_sx",
    "min_sy",
    "max_sx",
    "max_sy",
    "verdict",
    "efficiency",
    "self_advantage",
    "nice",
    "retaliating",
    "forgiving",
    "non_envious",
];

pub const TOURNAMENT_CSV_HEADER: [&str; 7] = [
    "strategy_x",
    "strategy_y",
    "repetition",
    "rounds",
    "seed",
    "score_x",
    "score_y",
];

/// Anything `write_report` can render.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Solve(SolveReport),
    Extraction(ExtractionReport),
    Construct(ZdStrategy),
    Audit(Vec<AuditReport>),
    Tournament(Tournament),
}

pub fn write_report(report: &Report, format: Format) -> Result<Vec<u8>> {
    match (report, format) {
        (Report::Solve(s), Format::Json) => to_json(&s.json()),
        (Report::Solve(s), Format::Csv) => to_csv(
            &[
                "kind",
                "strategy_a",
                "strategy_b",
                "probs_a",
                "probs_b",
                "payoff_a",
                "payoff_b",
            ],
            &s.csv_rows(),
        ),
        (Report::Extraction(e), Format::Json) => to_json(&e.json()),
        (Report::Extraction(e), Format::Csv) => {
            let rows: Vec<[String; 4]> = e
                .rows()
                .iter()
                .map(|r| {
                    [
                        r.player.to_string(),
                        r.designated_strategy.to_string(),
                        fmt_sig9(r.k),
                        format!("{:?}", r.kind),
                    ]
                })
                .collect();
            to_csv(&["player", "designated_strategy", "K", "kind"], &rows)
        }
        (Report::Construct(z), Format::Json) => {
            let l = &z.line;
            to_json(&json!({
                "p": z.strategy.p,
                "initial": z.strategy.initial,
                "line": {
                    "alpha": l.alpha, "beta": l.beta, "gamma": l.gamma,
                    "phi": l.phi, "chi": l.chi, "kappa": l.kappa,
                },
            }))
        }
        (Report::Construct(z), Format::Csv) => {
            let l = &z.line;
            let mut row: Vec<String> = z.strategy.p.iter().map(|x| fmt_sig9(*x)).collect();
            row.extend([l.alpha, l.beta, l.gamma, l.phi].map(fmt_sig9));
            to_csv(
                &["p1", "p2", "p3", "p4", "alpha", "beta", "gamma", "phi"],
                &[row],
            )
        }
        (Report::Audit(reports), Format::Json) => {
            let items: Vec<AuditJson> = reports.iter().map(AuditJson::of).collect();
            match items.as_slice() {
                [one] => to_json(one),
                _ => to_json(&items),
            }
        }
        (Report::Audit(reports), Format::Csv) => {
            let rows: Vec<Vec<String>> =
                reports.iter().map(|r| AuditJson::of(r).csv_row()).collect();
            to_csv(&AUDIT_CSV_HEADER, &rows)
        }
        (Report::Tournament(t), Format::Json) => to_json(t),
        (Report::Tournament(t), Format::Csv) => {
            let rows: Vec<[String; 7]> = t
                .matches
                .iter()
                .map(|m| {
                    [
                        m.strategy_x.clone(),
                        m.strategy_y.clone(),
                        m.repetition.to_string(),
                        m.rounds.to_string(),
                        m.seed.to_string(),
                        fmt_sig9(m.score_x),
                        fmt_sig9(m.score_y),
                    ]
                })
                .collect();
            to_csv(&TOURNAMENT_CSV_HEADER, &rows)
        }
    }
}
