//! Browser bindings. Each export takes plain numbers and returns a JSON
//! string; the page in `www/` renders it.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use moral_games::audit::ethics_verdict;
use moral_games::game::{
    builtin_game, expected_payoffs, BuiltinGame, KantianAnnotation, KantianValue, Player,
};
use moral_games::interface::plot::{emit_plot_data, PlotFormat, PlotSeries};
use moral_games::interface::report::sig9;
use moral_games::solvers::{
    scheme_beta_weighted, scheme_human_priority, scheme_kantian, scheme_social_welfare,
    SchemeResult,
};
use moral_games::valuation::{consistency_check, extract_kantian, Designation, ObservedCounts};
use moral_games::zd::{
    feasible_segment, long_run_scores, phi_max, zd_construct, Baseline, PdPayoffs,
};
use moral_games::{Error, Result};

fn to_js(r: Result<Value>) -> std::result::Result<String, JsError> {
    r.map(|v| v.to_string())
        .map_err(|e| JsError::new(&e.to_string()))
}

/// ZD strategy for `chi`, baseline and `phi` as a fraction of its maximum,
/// with the long-run score of one co-player `q`.
pub fn zd_outcome(chi: f64, baseline: &str, phi_frac: f64, q: [f64; 4]) -> Result<Value> {
    let pd = PdPayoffs::axelrod();
    let baseline: Baseline = baseline.parse()?;
    if !(phi_frac > 0.0 && phi_frac <= 1.0) {
        return Err(Error::Parameter(format!(
            "phi fraction {phi_frac} outside (0, 1]"
        )));
    }
    if chi.is_nan() || chi <= 1.0 {
        return Err(Error::Parameter(format!("chi must exceed 1, got {chi}")));
    }
    let phi = phi_frac * phi_max(chi, baseline, &pd);
    let z = zd_construct(chi, baseline, phi, &pd)?;
    let seg = feasible_segment(&z.strategy.p, &pd)?;
    let sc = long_run_scores(&z.strategy.p, &q, &pd);
    let series = [
        PlotSeries::segment("ZD line", &seg),
        PlotSeries::scatter("co-player", vec![(sc.s_x, sc.s_y)]),
    ];
    let svg = String::from_utf8(emit_plot_data(&series, PlotFormat::Svg, &pd)?).unwrap_or_default();
    let v = ethics_verdict(&z.strategy.p, &pd);
    Ok(json!({
        "p": z.strategy.p.map(sig9),
        "phi": sig9(phi),
        "line": z.line.to_string(),
        "verdict": v.verdict.to_string(),
        "efficiency": sig9(v.efficiency),
        "self_advantage": sig9(v.self_advantage),
        "segment": seg.endpoints().map(|(x, y)| [sig9(x), sig9(y)]),
        "score": [sig9(sc.s_x), sig9(sc.s_y)],
        "svg": svg,
    }))
}

fn summary(r: &SchemeResult) -> Value {
    let eq = r.equilibria.as_ref().map(|e| {
        json!({
            "pure": e.pure.iter().map(|c| format!("({}, {})", c.strategy_a, c.strategy_b)).collect::<Vec<_>>(),
            "mixed": e.mixed.iter().map(|m| json!({
                "ai": m.profile.probs_a.iter().map(|x| sig9(*x)).collect::<Vec<_>>(),
                "human": m.profile.probs_b.iter().map(|x| sig9(*x)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    });
    json!({
        "status": format!("{:?}", r.status),
        "recommended": r.recommended.strategies(),
        "equilibria": eq,
        "diagnostics": r.diagnostics,
    })
}

/// All four schemes on the wait-or-pass road game. `k_wait` is the AI's
/// value on waiting, ignored when `obligatory` is set.
pub fn wait_or_pass(beta: f64, k_wait: f64, obligatory: bool) -> Result<Value> {
    let game = builtin_game(BuiltinGame::WaitOrPass);
    let k = if obligatory {
        KantianValue::Obligatory
    } else {
        KantianValue::Finite(k_wait)
    };
    let ann = KantianAnnotation::new().with(Player::A, "wait", k);
    Ok(json!({
        "human_priority": summary(&scheme_human_priority(&game)),
        "social_welfare": summary(&scheme_social_welfare(&game)),
        "beta_weighted": summary(&scheme_beta_weighted(&game, beta)?),
        "kantian": summary(&scheme_kantian(&game, &ann)?),
    }))
}

/// Kantian values implied by trust-game counts.
pub fn trust_values(a: u32, b: u32, ap: u32, bp: u32) -> Result<Value> {
    let game = builtin_game(BuiltinGame::TrustNormalForm);
    let counts = ObservedCounts {
        a: vec![("a".into(), a.into()), ("b".into(), b.into())],
        b: vec![("ap".into(), ap.into()), ("bp".into(), bp.into())],
    };
    let obs = counts.profile_for(&game)?;
    let est = extract_kantian(&game, &obs, &Designation::trust_default())?;
    let (e1, e2) = expected_payoffs(&game, &obs)?;
    let residual = consistency_check(&game, &est, &obs)
        .map(|c| sig9(c.residual_a.max(c.residual_b)))
        .ok();
    Ok(json!({
        "K1": sig9(est.a.k),
        "K1_kind": format!("{:?}", est.a.kind),
        "K2": sig9(est.b.k),
        "K2_kind": format!("{:?}", est.b.kind),
        "expected": [sig9(e1), sig9(e2)],
        "residual": residual,
    }))
}

#[wasm_bindgen(js_name = zdOutcome)]
#[allow(clippy::too_many_arguments)]
pub fn zd_outcome_js(
    chi: f64,
    baseline: &str,
    phi_frac: f64,
    q1: f64,
    q2: f64,
    q3: f64,
    q4: f64,
) -> std::result::Result<String, JsError> {
    to_js(zd_outcome(chi, baseline, phi_frac, [q1, q2, q3, q4]))
}

#[wasm_bindgen(js_name = waitOrPass)]
pub fn wait_or_pass_js(
    beta: f64,
    k_wait: f64,
    obligatory: bool,
) -> std::result::Result<String, JsError> {
    to_js(wait_or_pass(beta, k_wait, obligatory))
}

#[wasm_bindgen(js_name = trustValues)]
pub fn trust_values_js(a: u32, b: u32, ap: u32, bp: u32) -> std::result::Result<String, JsError> {
    to_js(trust_values(a, b, ap, bp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extorter_settings() {
        let v = zd_outcome(3.0, "P", 1.0, [1.0; 4]).unwrap();
        assert_eq!(v["verdict"], "Unethical");
        assert_eq!(v["segment"][1][0], 3.72727273);
        assert_eq!(v["score"][0], 3.72727273);
        assert!(v["svg"].as_str().unwrap().starts_with("<svg"));
    }

    #[test]
    fn generous_settings() {
        let v = zd_outcome(3.0, "R", 1.0, [0.5; 4]).unwrap();
        assert_eq!(v["verdict"], "Ethical");
        assert!(zd_outcome(0.5, "R", 1.0, [0.5; 4]).is_err());
        assert!(zd_outcome(3.0, "Q", 1.0, [0.5; 4]).is_err());
    }

    #[test]
    fn road_game_schemes() {
        let v = wait_or_pass(2.0, 0.0, true).unwrap();
        assert_eq!(v["human_priority"]["recommended"], json!(["wait"]));
        assert_eq!(v["social_welfare"]["status"], "NoPureSolution");
        assert_eq!(v["kantian"]["equilibria"]["pure"], json!(["(wait, pass)"]));
        assert_eq!(
            v["beta_weighted"]["equilibria"]["mixed"][0]["human"][0],
            0.777777778
        );
        assert!(wait_or_pass(0.5, 0.0, false).is_err());
    }

    #[test]
    fn trust_counts_from_the_experiment() {
        let v = trust_values(52, 46, 31, 15).unwrap();
        assert_eq!(v["K1"], -0.108695652);
        assert_eq!(v["K2"], 7.04081633);
        assert_eq!(v["K2_kind"], "Point");
    }

    #[test]
    fn all_trusting_gives_a_bound() {
        let v = trust_values(0, 10, 5, 5).unwrap();
        assert_eq!(v["K1_kind"], "LowerBound");
        assert!(trust_values(0, 0, 1, 1).is_err());
    }
}
