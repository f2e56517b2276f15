use nalgebra::Matrix4;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moral_games::audit::{play_match, Contestant};
use moral_games::zd::{
    feasible_segment, long_run_scores, phi_max, stationary_distribution, transition_matrix,
    zd_construct, zd_detect, Baseline, MemoryOneStrategy, Move, PdPayoffs, DEFAULT_EPSILON,
};

fn pd_payoffs() -> impl Strategy<Value = PdPayoffs> {
    // P > S, R > P, T > R, then keep 2R > T + S
    (0.0..2.0f64, 0.1..3.0f64, 0.1..3.0f64, 0.1..3.0f64).prop_filter_map(
        "not a dilemma",
        |(s, dp, dr, dt)| {
            let p = s + dp;
            let r = p + dr;
            let t = r + dt;
            PdPayoffs::new(r, t, s, p).ok()
        },
    )
}

fn zd_params() -> impl Strategy<Value = (PdPayoffs, f64, Baseline, f64)> {
    (pd_payoffs(), 1.05..6.0f64, any::<bool>(), 0.05..1.0f64).prop_map(|(pd, chi, r, frac)| {
        let baseline = if r { Baseline::R } else { Baseline::P };
        let phi = frac * phi_max(chi, baseline, &pd);
        (pd, chi, baseline, phi)
    })
}

fn unit4(lo: f64, hi: f64) -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(lo..hi)
}

/// Press-Dyson determinant `D(p, q, f)` with `q` from Y's own point of view.
fn pd_det(p: &[f64; 4], q: &[f64; 4], f: [f64; 4]) -> f64 {
    Matrix4::new(
        -1.0 + p[0] * q[0],
        -1.0 + p[0],
        -1.0 + q[0],
        f[0],
        p[1] * q[2],
        -1.0 + p[1],
        q[2],
        f[1],
        p[2] * q[1],
        p[2],
        -1.0 + q[1],
        f[2],
        p[3] * q[3],
        p[3],
        q[3],
        f[3],
    )
    .determinant()
}

/// Point in the convex hull of the four outcomes: inside one of the two
/// triangles that fan out from (R,R).
fn in_hull(pd: &PdPayoffs, x: f64, y: f64, slack: f64) -> bool {
    let in_tri = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
        let side = |u: (f64, f64), v: (f64, f64)| {
            let cross = (v.0 - u.0) * (y - u.1) - (v.1 - u.1) * (x - u.0);
            cross / (v.0 - u.0).hypot(v.1 - u.1)
        };
        let (d1, d2, d3) = (side(a, b), side(b, c), side(c, a));
        (d1 >= -slack && d2 >= -slack && d3 >= -slack)
            || (d1 <= slack && d2 <= slack && d3 <= slack)
    };
    let (pp, ts, rr, st) = ((pd.p, pd.p), (pd.t, pd.s), (pd.r, pd.r), (pd.s, pd.t));
    in_tri(rr, st, ts) || in_tri(rr, st, pp) || in_tri(rr, pp, ts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_line_holds_against_random_opponents(
        (pd, chi, baseline, phi) in zd_params(),
        seed in any::<u64>(),
    ) {
        let z = zd_construct(chi, baseline, phi, &pd).unwrap();
        let line = zd_detect(&z.strategy.p, &pd).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.02..0.98));
            let sc = long_run_scores(&z.strategy.p, &q, &pd);
            prop_assert!(line.residual(sc.s_x, sc.s_y).abs() < 1e-7);
        }
    }

    #[test]
    fn detect_recovers_constructed_line((pd, chi, baseline, phi) in zd_params()) {
        let z = zd_construct(chi, baseline, phi, &pd).unwrap();
        let line = zd_detect(&z.strategy.p, &pd).unwrap();
        prop_assert!(line.approx_eq(&z.line, 1e-9), "{} vs {}", line, z.line);
        prop_assert!((line.phi - phi).abs() < 1e-9);
    }

    #[test]
    fn segment_endpoints_lie_on_line_and_in_hull((pd, chi, baseline, phi) in zd_params()) {
        let z = zd_construct(chi, baseline, phi, &pd).unwrap();
        let seg = feasible_segment(&z.strategy.p, &pd).unwrap();
        for (x, y) in seg.endpoints() {
            prop_assert!(seg.line.residual(x, y).abs() < 1e-7);
            prop_assert!(in_hull(&pd, x, y, 1e-7));
        }
    }

    #[test]
    fn stationary_distribution_is_a_fixed_point(p in unit4(0.0, 1.0), q in unit4(0.0, 1.0)) {
        let tm = transition_matrix(&p, &q);
        let st = stationary_distribution(&tm, DEFAULT_EPSILON);
        prop_assert!(st.v.iter().all(|x| *x >= 0.0));
        prop_assert!((st.v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        if !st.perturbed {
            for j in 0..4 {
                let vm: f64 = (0..4).map(|i| st.v[i] * tm.m[i][j]).sum();
                prop_assert!((vm - st.v[j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn scores_agree_with_press_dyson_determinants(
        p in unit4(0.0, 1.0),
        q in unit4(0.0, 1.0),
        pd in pd_payoffs(),
    ) {
        let denom = pd_det(&p, &q, [1.0; 4]);
        prop_assume!(denom.abs() > 1e-8);
        let sc = long_run_scores(&p, &q, &pd);
        prop_assume!(!sc.stationary.perturbed);
        let sx = pd_det(&p, &q, pd.scores_x()) / denom;
        let sy = pd_det(&p, &q, pd.scores_y()) / denom;
        prop_assert!((sx - sc.s_x).abs() < 1e-6 * (1.0 + sx.abs()));
        prop_assert!((sy - sc.s_y).abs() < 1e-6 * (1.0 + sy.abs()));
    }

    #[test]
    fn long_run_scores_lie_in_hull(p in unit4(0.0, 1.0), q in unit4(0.0, 1.0), pd in pd_payoffs()) {
        let sc = long_run_scores(&p, &q, &pd);
        prop_assert!(in_hull(&pd, sc.s_x, sc.s_y, 1e-9));
    }
}

/// Mean of the per-round payoffs with a batch-means standard error.
fn mean_and_se(per_round: &[f64], batches: usize) -> (f64, f64) {
    let n = per_round.len();
    let size = n / batches;
    let means: Vec<f64> = per_round
        .chunks(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    let mean = per_round.iter().sum::<f64>() / n as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

#[test]
fn monte_carlo_means_match_long_run_scores() {
    let pd = PdPayoffs::axelrod();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let rounds = 100_000;
    let mut beyond_fixed = 0;
    for k in 0..50u64 {
        let p: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.05..0.95));
        let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.05..0.95));
        let sc = long_run_scores(&p, &q, &pd);
        let x = Contestant::memory_one("x", MemoryOneStrategy::new(p, Move::C).unwrap());
        let y = Contestant::memory_one("y", MemoryOneStrategy::new(q, Move::C).unwrap());
        let m = play_match(&x, &y, rounds, k, 0.0, &pd).unwrap();
        let (px, py): (Vec<f64>, Vec<f64>) =
            m.history.iter().map(|(a, b)| pd.one_shot(*a, *b)).unzip();
        for (samples, expected) in [(&px, sc.s_x), (&py, sc.s_y)] {
            let (mean, se) = mean_and_se(samples, 50);
            // five standard errors: a correct simulator fails this about once
            // in 1.7 million comparisons
            assert!(
                (mean - expected).abs() < 5.0 * se.max(1e-3),
                "pair {k}: mean {mean} vs {expected}, se {se}"
            );
            if (mean - expected).abs() >= 0.02 {
                beyond_fixed += 1;
            }
        }
    }
    eprintln!("{beyond_fixed} of 100 means are 0.02 or more from the long-run score");
}

#[test]
fn tft_segment_is_the_diagonal() {
    let pd = PdPayoffs::axelrod();
    let seg = feasible_segment(&[1.0, 0.0, 1.0, 0.0], &pd).unwrap();
    assert!((seg.min.s_x - 1.0).abs() < 1e-9 && (seg.min.s_y - 1.0).abs() < 1e-9);
    assert!((seg.max.s_x - 3.0).abs() < 1e-9 && (seg.max.s_y - 3.0).abs() < 1e-9);
}
