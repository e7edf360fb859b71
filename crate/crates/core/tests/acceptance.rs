//! Acceptance suite. Prints one line per criterion and exits non-zero when a
//! hard criterion fails.

mod common;

#[allow(dead_code)]
#[path = "../examples/compare_distances.rs"]
mod compare_distances;

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    kernel_gradient_error, net_gradient_error, normal_matrix, random_sample, rel, separated_sample,
    sliced_gradient_error, tiny_net, SIZES,
};
use compare_distances::comparison_config;
use sliced_ae::harness::{train, RunSummary};
use sliced_ae::kernels::{cvm_closed, cw_closed, ks_closed, w2_closed};
use sliced_ae::metrics::{mardia_kurtosis, mardia_skewness};
use sliced_ae::net::{Autoencoder, Objective};
use sliced_ae::normal_math::{std_normal_cdf, std_normal_quantile, Probability};
use sliced_ae::oracles::{cvm_numeric, cw_numeric, ks_numeric, w2_numeric, QuadratureSpec};
use sliced_ae::slicer::{composite_cost, sample_directions, sliced_distance};
use sliced_ae::{CostMode, DistanceKind, KsVariant, LatentBatch, Optimizer, SortedSample, TrainState};

enum Verdict {
    Pass,
    Fail,
    Warn,
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        Self { verdict, detail }
    }
}

const TRAINING_EPOCHS: usize = 200;
const SMOOTH: [DistanceKind; 3] = [DistanceKind::Scfw, DistanceKind::Scw, DistanceKind::Scvm];

fn closed_form_certification() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let q_line = QuadratureSpec::new(20_000).expect("panel count above minimum");
    let (mut w, mut c, mut m) = (0.0f64, 0.0f64, 0.0f64);
    let (mut ks_bad, mut ks_equal_cases) = (0usize, 0usize);
    for t in 0..200 {
        let n = SIZES[t % SIZES.len()];
        let y = random_sample(&mut rng, n);
        w = w.max(rel(w2_closed(&y).distance, w2_numeric(&y, QuadratureSpec::certify())));
        c = c.max(rel(cw_closed(&y).distance, cw_numeric(&y, q_line)));
        m = m.max(rel(cvm_closed(&y).distance, cvm_numeric(&y, QuadratureSpec::certify())));

        let closed = ks_closed(&y, KsVariant::Upper).distance;
        let sup = ks_numeric(&y);
        let nf = n as f64;
        let cdf: Vec<f64> = y.values().iter().map(|v| std_normal_cdf(*v).unwrap().value()).collect();
        let upper = (0..n).map(|i| (i + 1) as f64 / nf - cdf[i]).fold(f64::MIN, f64::max);
        let lower = (0..n).map(|i| cdf[i] - i as f64 / nf).fold(f64::MIN, f64::max);
        if closed > sup + 1e-15 {
            ks_bad += 1;
        }
        if upper >= lower {
            ks_equal_cases += 1;
            if (closed - sup).abs() > 1e-15 {
                ks_bad += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::check(
        w <= 1e-6 && c <= 1e-6 && m <= 1e-6 && ks_bad == 0 && secs < 120.0,
        format!(
            "max rel err w2 {w:.1e}, cw {c:.1e}, cvm {m:.1e}; ks violations {ks_bad} \
             ({ks_equal_cases} equality cases); {secs:.1}s"
        ),
    )
}

fn analytic_spot_checks() -> Outcome {
    let mut worst_w2 = 0.0f64;
    let mut worst_cvm = 0.0f64;
    for n in [1, 2, 5, 17, 100] {
        let zeros = SortedSample::new(vec![0.0; n]).unwrap();
        worst_w2 = worst_w2.max((w2_closed(&zeros).distance - 1.0).abs());
        let mid: Vec<f64> = (1..=n)
            .map(|i| std_normal_quantile(Probability::new((2 * i - 1) as f64 / (2 * n) as f64).unwrap()))
            .collect();
        let target = 1.0 / (12.0 * (n * n) as f64);
        worst_cvm = worst_cvm.max((cvm_closed(&SortedSample::new(mid).unwrap()).distance - target).abs());
    }
    for y in [-3.5, -1.0, 0.25, 2.0, 7.0] {
        let single = SortedSample::new(vec![y]).unwrap();
        worst_w2 = worst_w2.max((w2_closed(&single).distance - (1.0 + y * y)).abs());
    }
    Outcome::check(
        worst_w2 <= 1e-9 && worst_cvm <= 1e-8,
        format!("w2 zero/single-point max err {worst_w2:.1e}; cvm midpoint-uniform max err {worst_cvm:.1e}"),
    )
}

fn gradient_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let (mut kernel, mut sliced, mut net, mut step) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for t in 0..50u64 {
        let y = separated_sample(&mut rng, SIZES[t as usize % SIZES.len()]);
        kernel = kernel
            .max(kernel_gradient_error(w2_closed, &y))
            .max(kernel_gradient_error(cw_closed, &y))
            .max(kernel_gradient_error(cvm_closed, &y));

        let (n, d) = (rng.random_range(2..12), rng.random_range(1..5));
        let batch = normal_matrix(&mut rng, n, d);
        let dirs = sample_directions(rng.random_range(1..6), d, &mut rng).unwrap();
        for kind in SMOOTH {
            sliced = sliced.max(sliced_gradient_error(&batch, &dirs, kind, t));
        }

        let ae = tiny_net(&mut rng);
        let x = normal_matrix(&mut rng, 3, 4);
        let dirs = sample_directions(3, 2, &mut rng).unwrap();
        for kind in SMOOTH {
            net = net.max(net_gradient_error(&ae, &x, &dirs, kind, t));
        }
        step = step.max(sgd_step_gap(&ae, &x, &dirs, SMOOTH[t as usize % 3], t));
    }
    Outcome::check(
        kernel <= 1e-4 && sliced <= 1e-4 && net <= 1e-4 && step <= 1e-14,
        format!(
            "max rel err kernels {kernel:.1e}, sliced_distance {sliced:.1e}, network {net:.1e}; \
             backward_step vs gradient {step:.1e}"
        ),
    )
}

fn sgd_step_gap(ae: &Autoencoder, x: &sliced_ae::Matrix, dirs: &sliced_ae::DirectionSet, kind: DistanceKind, seed: u64) -> f64 {
    let lr = 1e-3;
    let rng = ChaCha8Rng::seed_from_u64(seed);
    let objective = Objective::new(kind, CostMode::default());
    let (_, grad) = ae.loss_and_gradient(x, &objective, dirs, &mut rng.clone()).unwrap();
    let mut state = TrainState::from_net(ae.clone(), Optimizer::Sgd { lr }, rng);
    state.backward_step(x, &objective, dirs).unwrap();
    state
        .net
        .params()
        .iter()
        .zip(ae.params())
        .zip(&grad)
        .fold(0.0f64, |m, ((p, q), g)| m.max((p - (q - lr * g)).abs()))
}

fn normality_diagnostics() -> Outcome {
    let (mut skew, mut kurt) = (0.0, 0.0);
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + seed);
        let batch = LatentBatch::new(normal_matrix(&mut rng, 10_000, 5)).unwrap();
        skew += mardia_skewness(&batch) / 20.0;
        kurt += mardia_kurtosis(&batch, true).abs() / 20.0;
    }
    Outcome::check(
        skew < 0.1 && kurt < 1.5,
        format!("mean skewness {skew:.4}, mean |normalized kurtosis| {kurt:.4}"),
    )
}

fn log_cost_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mode = CostMode::default();
    let (mut shift, mut slope) = (0.0f64, 0.0f64);
    for t in 0..50 {
        let batch = LatentBatch::new(normal_matrix(&mut rng, 30, 3)).unwrap();
        let dirs = sample_directions(8, 3, &mut rng).unwrap();
        let d = sliced_distance(&batch, &dirs, DistanceKind::ALL[t % 5], &mut rng).unwrap().distance;
        let mse = rng.random_range(0.0..3.0);
        let base = composite_cost(mse, d, mode).unwrap();
        for lambda in [1e-4, 0.3, 1.0, 7.5, 1e6] {
            let scaled = composite_cost(mse, lambda * d, mode).unwrap();
            let ulp = f64::EPSILON * scaled.total.abs().max(base.total.abs()).max(1.0);
            shift = shift.max((scaled.total - base.total - f64::ln(lambda)).abs() / ulp);
            slope = slope.max(rel(scaled.penalty_slope * lambda, base.penalty_slope));
        }
    }
    Outcome::check(
        shift <= 8.0 && slope <= 1e-14,
        format!("max shift error {shift:.1} ulp; max rel gap in penalty gradient {slope:.1e}"),
    )
}

fn training_runs(root: &std::path::Path) -> (Vec<(DistanceKind, RunSummary)>, Duration) {
    let start = Instant::now();
    let runs = std::thread::scope(|s| {
        let handles: Vec<_> = DistanceKind::ALL
            .into_iter()
            .map(|kind| {
                s.spawn(move || {
                    let run = train(&comparison_config(kind, TRAINING_EPOCHS, root)).expect("training run");
                    (kind, run)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("training thread")).collect()
    });
    (runs, start.elapsed())
}

fn desk_scale_trend(runs: &[(DistanceKind, RunSummary)], wall: Duration) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, run) in runs {
        let (a, b) = (run.first(), run.last());
        let cost = b.cost < a.cost;
        let sw = b.sw_monitor <= 0.5 * a.sw_monitor;
        let kurt = b.mardia_kurtosis_normalized.abs() <= a.mardia_kurtosis_normalized.abs();
        ok &= cost && sw && kurt;
        parts.push(format!(
            "{kind}: cost {:.2}->{:.2} sw {:.3}->{:.4} |kurt| {:.1}->{:.2}{}",
            a.cost,
            b.cost,
            a.sw_monitor,
            b.sw_monitor,
            a.mardia_kurtosis_normalized.abs(),
            b.mardia_kurtosis_normalized.abs(),
            if cost && sw && kurt { "" } else { " (failed)" }
        ));
    }
    let secs = wall.as_secs_f64();
    Outcome::check(ok && secs < 600.0, format!("{}; {secs:.0}s", parts.join("; ")))
}

fn group_contrast(runs: &[(DistanceKind, RunSummary)]) -> Outcome {
    let mean = |kinds: &[DistanceKind]| {
        let v: Vec<f64> = runs
            .iter()
            .filter(|(k, _)| kinds.contains(k))
            .map(|(_, r)| r.last().sw_monitor)
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let fast = mean(&[DistanceKind::Sw, DistanceKind::Scfw, DistanceKind::Scw]);
    let slow = mean(&[DistanceKind::Scvm, DistanceKind::Sks]);
    Outcome {
        verdict: if fast <= slow { Verdict::Pass } else { Verdict::Warn },
        detail: format!("mean final sw_monitor {{sw, scfw, scw}} {fast:.4} vs {{scvm, sks}} {slow:.4}"),
    }
}

fn reproducibility(root: &std::path::Path) -> Outcome {
    let csv = |dir: &str| {
        let mut cfg = comparison_config(DistanceKind::Scfw, 10, root);
        cfg.output = root.join(dir);
        let run = train(&cfg).expect("training run");
        fs::read(run.dir.join("metrics.csv")).expect("metrics file")
    };
    let (a, b) = (csv("repeat-a"), csv("repeat-b"));
    Outcome::check(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let root = tempfile::tempdir().expect("temporary directory");
    let mut hard_failures = 0;
    let mut report = |id: usize, name: &str, outcome: Outcome| {
        let tag = match outcome.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => {
                hard_failures += 1;
                "FAIL"
            }
            Verdict::Warn => "WARN",
        };
        println!("[{tag}] criterion {id}: {name}: {}", outcome.detail);
    };

    report(1, "closed-form certification", closed_form_certification());
    report(2, "analytic spot checks", analytic_spot_checks());
    report(3, "gradient suite", gradient_suite());
    report(4, "normality diagnostics", normality_diagnostics());
    report(5, "log-cost invariance", log_cost_invariance());
    let (runs, wall) = training_runs(root.path());
    report(6, "desk-scale generative trend", desk_scale_trend(&runs, wall));
    report(7, "group contrast (soft)", group_contrast(&runs));
    report(8, "reproducibility", reproducibility(root.path()));

    if hard_failures == 0 {
        println!("acceptance: all hard criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {hard_failures} hard criteria failed");
        ExitCode::FAILURE
    }
}
