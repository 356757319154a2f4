mod common;

use bwtraj_core::bwc::{bwc_sttrace, BwcCompressor, BwcVariant, ImpSign};
use bwtraj_core::classic::{sttrace, tdtr, StTrace, StTraceConfig, TdTrConfig};
use bwtraj_core::eval::window_histogram;
use bwtraj_core::ingest::merge_stream;
use bwtraj_core::types::{Point, Sample, Samples, Trajectories, Trajectory};
use bwtraj_core::{accuracy, Algorithm, AlgorithmKind, Predictor, RatioPlan, SquishCapacity, WindowConfig};
use proptest::prelude::*;

use common::*;

fn arb_trajectories() -> impl Strategy<Value = Trajectories> {
    prop::collection::vec(
        prop::collection::vec((0.1f64..20.0, -100.0f64..100.0, -100.0f64..100.0), 2..30),
        1..5,
    )
    .prop_map(|trajs| {
        trajs
            .into_iter()
            .enumerate()
            .map(|(id, steps)| {
                let id = id as u64;
                let mut t = 0.0;
                let pts = steps
                    .into_iter()
                    .map(|(dt, x, y)| {
                        t += dt;
                        Point::new(id, t, x, y)
                    })
                    .collect();
                (id, Trajectory::new(id, pts).unwrap())
            })
            .collect()
    })
}

fn all_algorithms(window: WindowConfig) -> Vec<Algorithm> {
    vec![
        Algorithm::Squish { capacity: SquishCapacity::Fixed(4) },
        Algorithm::StTrace(StTraceConfig::new(6).unwrap()),
        Algorithm::Dr(bwtraj_core::DrConfig::new(15.0, Predictor::TwoPoint).unwrap()),
        Algorithm::TdTr(TdTrConfig::new(10.0).unwrap()),
        Algorithm::BwcSquish(window),
        Algorithm::BwcStTrace(window),
        Algorithm::BwcStTraceImp(bwtraj_core::ImpConfig::new(window, 1.5).unwrap()),
        Algorithm::BwcDr { window, predictor: Predictor::TwoPoint },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outputs_are_subsequences(data in arb_trajectories(), bw in 1usize..6, delta in 2.0f64..40.0) {
        let window = WindowConfig::new(bw, delta, 0.0).unwrap();
        for alg in all_algorithms(window) {
            let out = alg.run(&data).unwrap();
            for (id, s) in &out {
                prop_assert!(s.is_subsequence_of(data[id].points()), "{}", alg.kind());
            }
        }
    }

    #[test]
    fn bwc_windows_respect_cap(data in arb_trajectories(), bw in 1usize..6, delta in 2.0f64..40.0) {
        let window = WindowConfig::new(bw, delta, 0.0).unwrap();
        for alg in all_algorithms(window).into_iter().filter(|a| a.kind().is_bwc()) {
            let out = alg.run(&data).unwrap();
            let h = window_histogram(&out, &window, None);
            prop_assert!(h.max() <= bw, "{}: {:?}", alg.kind(), h.counts);
            prop_assert_eq!(h.total(), kept(&out));
        }
    }

    #[test]
    fn classic_capacities_hold(data in arb_trajectories(), m in 2usize..8) {
        let squish = Algorithm::Squish { capacity: SquishCapacity::Fixed(m) }.run(&data).unwrap();
        prop_assert!(squish.values().all(|s| s.len() <= m));
        let st = sttrace(&merge_stream(data.values()), StTraceConfig::new(m).unwrap()).unwrap();
        prop_assert!(kept(&st) <= m);
    }

    #[test]
    fn accuracy_of_self_is_zero(data in arb_trajectories(), interval in 0.1f64..10.0) {
        let same: Samples = data.iter().map(|(id, t)| (*id, Sample::new(*id, t.points().to_vec()))).collect();
        prop_assert_eq!(accuracy(&data, &same, interval).unwrap().weighted_mean, 0.0);
    }

    #[test]
    fn accuracy_translation_invariant(data in arb_trajectories(), dx in -1e4f64..1e4, dy in -1e4f64..1e4) {
        let alg = Algorithm::TdTr(TdTrConfig::new(5.0).unwrap());
        let moved: Trajectories = data
            .iter()
            .map(|(id, t)| {
                let pts = t.points().iter().map(|p| Point::new(p.id, p.ts, p.x + dx, p.y + dy)).collect();
                (*id, Trajectory::new(*id, pts).unwrap())
            })
            .collect();
        let a = accuracy(&data, &alg.run(&data).unwrap(), 0.7).unwrap();
        let b = accuracy(&moved, &alg.run(&moved).unwrap(), 0.7).unwrap();
        prop_assert!((a.weighted_mean - b.weighted_mean).abs() < 1e-9 * (1.0 + a.weighted_mean));
    }

    #[test]
    fn histogram_sums_to_points(data in arb_trajectories(), delta in 1.0f64..50.0) {
        let samples: Samples = data.iter().map(|(id, t)| (*id, Sample::new(*id, t.points().to_vec()))).collect();
        let h = window_histogram(&samples, &WindowConfig::new(1, delta, 0.0).unwrap(), None);
        prop_assert_eq!(h.total(), data.values().map(|t| t.len()).sum::<usize>());
    }
}

/// Recursive split oracle: keep the farthest point by SED while it
/// exceeds the tolerance, earliest index on ties.
fn tdtr_oracle(pts: &[Point], tol: f64, out: &mut Vec<Point>) {
    let (a, b) = (pts[0], pts[pts.len() - 1]);
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in pts.iter().enumerate().take(pts.len() - 1).skip(1) {
        let d = sed_oracle(&a, p, &b);
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((i, d));
        }
    }
    match best {
        Some((i, d)) if d > tol => {
            tdtr_oracle(&pts[..=i], tol, out);
            out.pop();
            tdtr_oracle(&pts[i..], tol, out);
        }
        _ => {
            out.push(a);
            out.push(b);
        }
    }
}

#[test]
fn tdtr_matches_recursive_oracle() {
    let mut rng = rng(3);
    for id in 0..50 {
        let t = random_trajectory(&mut rng, id, 20);
        let s = tdtr(&t, TdTrConfig::new(5.0).unwrap()).unwrap();
        let mut expected = Vec::new();
        tdtr_oracle(t.points(), 5.0, &mut expected);
        assert_eq!(s.points, expected, "trajectory {id}");
    }
}

#[test]
fn sttrace_recomputes_exactly() {
    let mut rng = rng(9);
    for case in 0..200 {
        let trajs: Vec<Trajectory> = (0..3).map(|id| random_trajectory(&mut rng, id, 15)).collect();
        let mut st = StTrace::new(StTraceConfig::new(8).unwrap()).unwrap();
        for p in &merge_stream(&trajs) {
            st.push(*p).unwrap();
            let samples = st.samples();
            for q in st.queued() {
                let s = &samples[&q.point.id].points;
                let l = s.iter().position(|x| x.ts == q.point.ts).unwrap();
                let expected = if l == 0 || l + 1 == s.len() {
                    f64::INFINITY
                } else {
                    sed_oracle(&s[l - 1], &s[l], &s[l + 1])
                };
                assert!(
                    q.priority == expected || (q.priority - expected).abs() < 1e-9,
                    "case {case}: {} vs {expected}",
                    q.priority
                );
            }
        }
    }
}

/// A straight trajectory competes with a zigzagging one for a shared
/// budget: the zigzag should get most of it.
#[test]
fn sttrace_budget_goes_to_the_turning_trajectory() {
    for seed in 0..10 {
        let mut rng = rng(seed);
        let straight: Vec<Point> = (0..100).map(|i| Point::new(0, i as f64, 5.0 * i as f64, 0.0)).collect();
        let zig: Vec<Point> = (0..100)
            .map(|i| {
                let jitter = rand::Rng::random_range(&mut rng, -1.0..1.0);
                Point::new(1, i as f64 + 0.5, 5.0 * i as f64, if (i / 5) % 2 == 0 { 0.0 } else { 25.0 } + jitter)
            })
            .collect();
        let data: Trajectories = [
            (0, Trajectory::new(0, straight).unwrap()),
            (1, Trajectory::new(1, zig).unwrap()),
        ]
        .into_iter()
        .collect();
        let out = sttrace(&merge_stream(data.values()), StTraceConfig::new(30).unwrap()).unwrap();
        let n_straight = out.get(&0).map_or(0, |s| s.len());
        let n_zig = out.get(&1).map_or(0, |s| s.len());
        assert!(n_straight <= 3 && n_zig >= 25, "seed {seed}: {n_straight} vs {n_zig}");
    }
}

#[test]
fn bwc_sttrace_keeps_zigzag_corners() {
    // one trajectory, corners every 5 s, windows of 10 s holding 4 points
    let pts: Vec<Point> = (0..40)
        .map(|i| Point::new(0, i as f64, i as f64, if (i / 5) % 2 == 0 { (i % 5) as f64 } else { 5.0 - (i % 5) as f64 }))
        .collect();
    let out = bwc_sttrace(&pts, WindowConfig::new(4, 10.0, 0.0).unwrap()).unwrap();
    let kept: Vec<f64> = out[&0].points.iter().map(|p| p.ts).collect();
    for corner in [5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0] {
        assert!(kept.contains(&corner), "corner {corner} missing from {kept:?}");
    }
}

#[test]
fn imp_sign_switch_changes_choice() {
    let mut rng = rng(1);
    let t = random_trajectory(&mut rng, 0, 60);
    let window = WindowConfig::new(3, 40.0, 0.0).unwrap();
    let run = |sign| {
        let mut c = BwcCompressor::new(window, BwcVariant::StTraceImp { precision: 1.0, sign }).unwrap();
        for p in t.points() {
            c.push(*p).unwrap();
        }
        c.finish().unwrap()
    };
    let inc = run(ImpSign::ErrorIncrease);
    let neg = run(ImpSign::WithMinusWithout);
    assert_ne!(inc[&0].points, neg[&0].points);
    let truth: Trajectories = [(0, t.clone())].into_iter().collect();
    let e_inc = mean_error(&truth, &inc, 1.0);
    let e_neg = mean_error(&truth, &neg, 1.0);
    assert!(e_inc < e_neg, "{e_inc} vs {e_neg}");
}

#[test]
fn ratio_plan_hits_ratio_on_mixed_data() {
    let data = mixed(4, 10, 2_000.0, 10.0);
    let n = data.values().map(|t| t.len()).sum::<usize>() as f64;
    let plan = RatioPlan::new(0.2, 200.0);
    for kind in AlgorithmKind::ALL {
        let r = kept(&plan.derive(kind, &data).unwrap().run(&data).unwrap()) as f64 / n;
        assert!((0.1..=0.25).contains(&r), "{kind}: {r}");
    }
}
