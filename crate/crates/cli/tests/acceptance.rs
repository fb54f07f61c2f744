//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::time::{Duration, Instant};

use nagumo::experiments::{figure1_config, initial_field, run_simulation, write_outputs, Panel};
use nagumo::invariants::{self, CheckOutcome, DEFAULT_SEED};
use padic_nagumo::solver::{euler_run, picard_solve, Method, SolverConfig, Trajectory};
use padic_nagumo::RadialField;

struct Verdict {
    pass: bool,
    detail: String,
}

fn suites_verdict(outcomes: &[CheckOutcome]) -> Verdict {
    let pass = outcomes.iter().all(CheckOutcome::passed);
    let detail = outcomes
        .iter()
        .map(|o| {
            format!(
                "{} {}/{} violations, {} {:.3e}",
                o.name, o.violations, o.cases, o.metric, o.worst
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    let failure = outcomes
        .iter()
        .filter_map(|o| o.first_failure.as_ref())
        .next()
        .map(|f| format!(" | first failure: {f}"))
        .unwrap_or_default();
    Verdict {
        pass,
        detail: detail + &failure,
    }
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn criterion_1() -> Verdict {
    let t = Instant::now();
    let mut v = suites_verdict(&[invariants::exactness(DEFAULT_SEED, 500)]);
    let el = t.elapsed();
    v.pass &= within(Duration::from_secs(5), el);
    v.detail += &format!("; runtime {:.2} s (limit 5 s)", el.as_secs_f64());
    v
}

fn criterion_2() -> Verdict {
    let t = Instant::now();
    let mut v = suites_verdict(&[invariants::operator_equivalence(DEFAULT_SEED, 100)]);
    let el = t.elapsed();
    v.pass &= within(Duration::from_secs(30), el);
    v.detail += &format!("; runtime {:.2} s (limit 30 s)", el.as_secs_f64());
    v
}

fn criterion_3() -> Verdict {
    suites_verdict(&[invariants::wavelet_eigenrelation(DEFAULT_SEED, 50)])
}

fn criterion_4() -> Verdict {
    suites_verdict(&[
        invariants::semigroup_contraction(DEFAULT_SEED, 1000),
        invariants::smoothing(DEFAULT_SEED, 1000),
        invariants::interpolation(DEFAULT_SEED, 1000),
        invariants::banach_algebra(DEFAULT_SEED, 1000),
        invariants::lipschitz(DEFAULT_SEED, 1000),
        invariants::product_bound(DEFAULT_SEED, 1000),
        invariants::gronwall(DEFAULT_SEED, 1000),
    ])
}

fn criterion_5() -> Verdict {
    let cfg = figure1_config(Panel::Left);
    let t = Instant::now();
    let out = match run_simulation(&cfg) {
        Ok(o) => o,
        Err(e) => {
            return Verdict {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let el = t.elapsed();
    let tr = &out.trajectory;
    let saved = tr.times.iter().filter(|&&t| t > 0.0).count();
    let monotone = tr.sup_norm.windows(2).all(|w| w[1] <= w[0]);
    let drift = (tr.mass.last().unwrap() - tr.mass[0]).abs();
    let budget = tr.error_budget + 1e-6;
    Verdict {
        pass: saved == 300 && monotone && drift <= budget && within(Duration::from_secs(60), el),
        detail: format!(
            "{saved} saved frames, sup {:.4} -> {:.4} non-increasing: {monotone}; mass drift {drift:.6} vs budget {budget:.6}; runtime {:.2} s (limit 60 s)",
            tr.sup_norm[0],
            tr.sup_norm.last().unwrap(),
            el.as_secs_f64()
        ),
    }
}

fn criterion_6() -> Verdict {
    let cfg = figure1_config(Panel::Right);
    let dir = tempfile::tempdir().expect("temp dir");
    let t = Instant::now();
    let out = match run_simulation(&cfg) {
        Ok(o) => o,
        Err(e) => {
            return Verdict {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let el = t.elapsed();
    if let Err(e) = write_outputs(&out, &cfg, dir.path()) {
        return Verdict {
            pass: false,
            detail: e.to_string(),
        };
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();

    let bracket = json["blowup"]
        .as_object()
        .and_then(|b| Some((b["t_lo"].as_f64()?, b["t_hi"].as_f64()?)));
    let odes: Vec<(String, Option<f64>)> = json["comparison_ode"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|o| {
                    (
                        o["weight"].as_str().unwrap_or("?").to_string(),
                        o["blowup_time"].as_f64(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    let ode_finite = odes.iter().any(|(_, t)| t.is_some());
    let width_ok = bracket.is_some_and(|(lo, hi)| hi - lo <= 1e-3);
    let ode_text = odes
        .iter()
        .map(|(w, t)| match t {
            Some(t) => format!("{w} weight T = {t:.4}"),
            None => format!("{w} weight bounded"),
        })
        .collect::<Vec<_>>()
        .join(", ");
    Verdict {
        pass: width_ok && ode_finite && within(Duration::from_secs(60), el),
        detail: format!(
            "PDE bracket {}; comparison ODE (r = {}): {ode_text}; runtime {:.2} s (limit 60 s)",
            match bracket {
                Some((lo, hi)) => format!("[{lo:.8}, {hi:.8}] width {:.2e}", hi - lo),
                None => "none".into(),
            },
            cfg.weight_r,
            el.as_secs_f64()
        ),
    }
}

fn hs_rel(a: &RadialField, b: &RadialField, s: f64) -> f64 {
    RadialField::linear_combine(1.0, a, -1.0, b)
        .unwrap()
        .norm_sobolev(s)
        / b.norm_sobolev(s)
}

fn final_state(tr: &Trajectory) -> &RadialField {
    tr.snapshots.last().expect("at least one frame")
}

fn criterion_7() -> Verdict {
    let cfg = figure1_config(Panel::Right);
    let params = &cfg.params;
    let u0 = initial_field(&cfg).unwrap();
    let run = |method: Method, dt: f64, t_end: f64| {
        let mut c = SolverConfig {
            dt,
            t_end,
            method,
            ..cfg.solver.clone()
        };
        // Keep only the initial and final frames.
        c.save_every = c.steps();
        match method {
            Method::Picard => picard_solve(&u0, params, &c),
            _ => euler_run(&u0, params, &c, None),
        }
    };
    let s = params.s;

    let pair = run(Method::EulerKochubei, 1e-4, 0.05)
        .and_then(|e| Ok((e, run(Method::Picard, 1e-4, 0.05)?)));
    let consistency = match pair {
        Ok((e, p)) => hs_rel(final_state(&e), final_state(&p), s),
        Err(e) => {
            return Verdict {
                pass: false,
                detail: e.to_string(),
            }
        }
    };

    let h = 1e-4;
    let t_end = 0.04;
    let runs: Result<Vec<Trajectory>, _> = [2.0 * h, h, h / 8.0]
        .into_iter()
        .map(|dt| run(Method::EulerKochubei, dt, t_end))
        .collect();
    let runs = match runs {
        Ok(r) => r,
        Err(e) => {
            return Verdict {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let reference = final_state(&runs[2]);
    let e_coarse = hs_rel(final_state(&runs[0]), reference, s);
    let e_fine = hs_rel(final_state(&runs[1]), reference, s);
    let ratio = e_coarse / e_fine;
    Verdict {
        pass: consistency <= 5e-3 && (1.7..=2.3).contains(&ratio),
        detail: format!(
            "Euler vs Picard relative H_s distance at t = 0.05: {consistency:.3e} (limit 5e-3); \
             error ratio dt = {:.0e} vs {:.0e} against dt = {:.3e}: {ratio:.4} (range [1.7, 2.3])",
            2.0 * h,
            h,
            h / 8.0
        ),
    }
}

fn criterion_8() -> Verdict {
    suites_verdict(&[invariants::existence(DEFAULT_SEED, 20)])
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 8] = [
        ("exactness suite", criterion_1),
        ("operator oracle equivalence", criterion_2),
        ("wavelet eigenrelation", criterion_3),
        ("inequality property suites", criterion_4),
        ("reference run, left: diffusion", criterion_5),
        ("reference run, right: blow-up", criterion_6),
        ("scheme consistency", criterion_7),
        ("existence estimator", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!(
            "[{status}] criterion {}: {name} ({:.2} s) — {}",
            i + 1,
            t.elapsed().as_secs_f64(),
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
