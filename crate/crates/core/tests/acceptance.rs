//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rogonlab::residual::{self, FdOrder, Region};
use rogonlab::rogon::{self, eval_rogon, poly_h2, poly_p2, poly_q2};
use rogonlab::solver::{self, compare_to_analytic, ConservedSeries, Grid, SolverConfig, Stepper};
use rogonlab::{ComplexValue, Order, PointST, RogonParams};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// 1. Constant terms of P₂, Q₂, H₂.
fn exact_constants() -> Outcome {
    for k in [0.0, 0.5] {
        let p = RogonParams::figure(k);
        let x = PointST::ORIGIN;
        let (pv, qv, hv) = (
            poly_p2(&p, x).unwrap(),
            poly_q2(&p, x).unwrap(),
            poly_h2(&p, x).unwrap(),
        );
        ensure(pv == 3.0 / 8.0, format!("P2(0,0) = {pv}"))?;
        ensure(qv == -15.0 / 4.0, format!("Q2(0,0) = {qv}"))?;
        ensure(hv == 3.0 / 32.0, format!("H2(0,0) = {hv}"))?;
    }
    Ok("P2 = 3/8, Q2 = -15/4, H2 = 3/32 exactly".into())
}

// 2. Peak ratios 3 / 5 and the Fig. 1 peak intensity 81/58.
fn peak_ratios() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let p = RogonParams::new(
            rng.gen_range(0.1..4.0),
            rng.gen_range(0.1..4.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-2.0..2.0),
        )
        .unwrap();
        let (a_s, a_p) = rogon::background_amplitudes(&p).unwrap();
        for (order, ratio) in [(Order::One, 3.0), (Order::Two, 5.0)] {
            let v = eval_rogon(&p, order, PointST::ORIGIN).unwrap();
            let info = rogon::peak_info(&p, order).unwrap();
            ensure(info.amplitude_ratio == ratio, "peak_info ratio")?;
            for (val, bg) in [(v.sigma.norm(), a_s.abs()), (v.psi.norm(), a_p.abs())] {
                if bg > 0.0 {
                    ensure(
                        rel(val, ratio * bg) < 1e-14,
                        format!("order {} ratio {}", order.as_int(), val / bg),
                    )?;
                }
            }
        }
    }
    let i0 = eval_rogon(&RogonParams::figure(0.0), Order::One, PointST::ORIGIN)
        .unwrap()
        .intensity_sigma();
    let r = rel(i0, 81.0 / 58.0);
    ensure(r <= 1e-12, format!("I_sigma(0,0) = {i0}, rel err {r:e}"))?;
    Ok(format!(
        "ratios 3 and 5; I_sigma(0,0) = {i0:.10} (rel err {r:.1e})"
    ))
}

// 3. Finite-difference residual verification.
fn residual_verification() -> Outcome {
    let p = RogonParams::figure(0.0);
    let r1 = residual::residual_scan(
        rogon::eval_rogon1,
        &p,
        Region::DEFAULT,
        101,
        61,
        5e-3,
        FdOrder::Eight,
    )
    .map_err(|e| e.to_string())?;
    let r2 = residual::residual_scan(
        rogon::eval_rogon2,
        &p,
        Region::DEFAULT,
        101,
        61,
        5e-3,
        FdOrder::Eight,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        r1.max_abs() <= 1e-6,
        format!("rogon1 max residual {:e}", r1.max_abs()),
    )?;
    ensure(
        r2.max_abs() <= 1e-5,
        format!("rogon2 max residual {:e}", r2.max_abs()),
    )?;

    let x = PointST::new(0.5, 0.3);
    let h_list = [0.08, 0.04, 0.02, 0.01];
    let mut slopes = Vec::new();
    for order in [Order::One, Order::Two] {
        let f = move |p: &RogonParams, x: PointST| eval_rogon(p, order, x);
        for fd in FdOrder::ALL {
            let s =
                residual::convergence_study(f, &p, x, fd, &h_list).map_err(|e| e.to_string())?;
            for slope in [s.slope_sigma, s.slope_psi] {
                let m = slope.measured().ok_or("slope unexpectedly exact")?;
                ensure(
                    (m - fd.as_int() as f64).abs() <= 0.5,
                    format!(
                        "order {} fd {} slope {m:.3}\n{}",
                        order.as_int(),
                        fd.as_int(),
                        s.table()
                    ),
                )?;
                slopes.push(m);
            }
        }
    }

    let bad = residual::residual_scan(
        residual::corrupted_rogon(Order::One),
        &p,
        Region::DEFAULT,
        101,
        61,
        5e-3,
        FdOrder::Eight,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        bad.max_abs() > 0.1,
        format!("negative control residual {:e}", bad.max_abs()),
    )?;
    let bad_study = residual::convergence_study(
        residual::corrupted_rogon(Order::One),
        &p,
        x,
        FdOrder::Eight,
        &h_list,
    )
    .map_err(|e| e.to_string())?;
    let bs = bad_study.slope_sigma.measured().unwrap_or(f64::NAN);
    ensure(bs.abs() < 0.5, format!("negative control slope {bs}"))?;

    Ok(format!(
        "max|r| rogon1 = {:.2e} (<= 1e-6), rogon2 = {:.2e} (<= 1e-5); slopes within 0.5 of 2/4/6/8 \
         (range {:.2}..{:.2}); negative control max|r| = {:.2}, slope {:.2}",
        r1.max_abs(),
        r2.max_abs(),
        slopes.iter().cloned().fold(f64::INFINITY, f64::min),
        slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        bad.max_abs(),
        bs
    ))
}

// 4. Structural invariants.
fn structural_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_ulps = 0.0f64;
    for _ in 0..10_000 {
        let p = RogonParams::new(
            rng.gen_range(0.05..5.0),
            rng.gen_range(0.05..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-3.0..3.0),
        )
        .unwrap();
        let x = PointST::new(rng.gen_range(-20.0..20.0), rng.gen_range(-10.0..10.0));
        let t_flip = PointST::new(x.s, -x.t);
        let s_flip = PointST::new(-x.s, x.t);
        let p0 = p.with_k(0.0);
        let comoving = PointST::new(x.s - p.k * x.t, x.t);
        for order in [Order::One, Order::Two] {
            let v = eval_rogon(&p, order, x).unwrap();
            for (l, r) in [
                ((v.psi * p.a).re, (v.sigma * p.b).re),
                ((v.psi * p.a).im, (v.sigma * p.b).im),
            ] {
                let scale = (v.psi * p.a).norm().max((v.sigma * p.b).norm());
                if scale > 0.0 {
                    worst_ulps = worst_ulps.max((l - r).abs() / (f64::EPSILON * scale));
                }
            }

            // Parity at k = 0.
            let m = eval_rogon(&p0, order, x).unwrap();
            for y in [s_flip, t_flip] {
                let w = eval_rogon(&p0, order, y).unwrap();
                ensure(
                    (m.sigma.norm() - w.sigma.norm()).abs() <= 1e-12 * m.sigma.norm().max(1e-300)
                        && (m.psi.norm() - w.psi.norm()).abs() <= 1e-12 * m.psi.norm().max(1e-300),
                    format!("parity fails at {x:?}"),
                )?;
            }

            // Comoving frame.
            let c = eval_rogon(&p0, order, comoving).unwrap();
            let tol = 1e-9 * (1.0 + v.combined_intensity());
            ensure(
                (v.combined_intensity() - c.combined_intensity()).abs() <= tol,
                format!("comoving identity fails at {x:?} for {p:?}"),
            )?;

            // Combined intensity form.
            let f = rogon::rogon_factor(&p, order, x).unwrap();
            let expect = p.background_intensity() * f.norm_sqr();
            ensure(
                (v.combined_intensity() - expect).abs() <= 1e-13 * expect.max(1e-300),
                "combined intensity form",
            )?;
        }
    }
    ensure(
        worst_ulps <= 4.0,
        format!("a*psi - b*sigma reached {worst_ulps} ulps"),
    )?;

    let p = RogonParams::figure(0.0);
    let mut far_dev = 0.0f64;
    for order in [Order::One, Order::Two] {
        for s in [-1e3, 1e3] {
            let v = eval_rogon(&p, order, PointST::new(s, 0.0)).unwrap();
            far_dev = far_dev.max((v.combined_intensity() - p.background_intensity()).abs());
        }
    }
    ensure(far_dev < 1e-5, format!("far-field deviation {far_dev:e}"))?;

    let mut h_min = f64::INFINITY;
    for _ in 0..1_000_000 {
        let alpha = 5.0 * (1.0 - rng.gen::<f64>()); // (0, 5]
        let p = RogonParams::new(alpha, 1.0, 1.0, 1.0, 0.0).unwrap();
        let x = PointST::new(rng.gen_range(-50.0..=50.0), rng.gen_range(-50.0..=50.0));
        h_min = h_min.min(poly_h2(&p, x).unwrap());
    }
    ensure(h_min > 0.0, format!("H2 minimum {h_min:e}"))?;

    Ok(format!(
        "proportionality <= {worst_ulps:.1} ulps; far-field dev {far_dev:.2e}; parity/comoving on 1e4 points; \
         H2 min over 1e6 scan = {h_min:.4e}"
    ))
}

// 5. Split-step run against the closed form.
fn solver_round_trip() -> Outcome {
    let start = Instant::now();
    let p = RogonParams::new(1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
    let g = Grid::new(100.0, 2048).map_err(|e| e.to_string())?;
    let run = |dt: f64| -> Result<(f64, ConservedSeries), String> {
        let cfg = SolverConfig::new(dt, p.beta).map_err(|e| e.to_string())?;
        let mut st =
            solver::init_from_analytic(&p, Order::One, &g, -5.0).map_err(|e| e.to_string())?;
        let mut stepper = Stepper::new(&g, &cfg).map_err(|e| e.to_string())?;
        let mut series = ConservedSeries::new(&g, p.beta);
        solver::evolve(&mut st, &mut stepper, 10, 5.0, &mut [&mut series])
            .map_err(|e| e.to_string())?;
        let err = compare_to_analytic(&st, &p, Order::One, &g).map_err(|e| e.to_string())?;
        Ok((err.l2_rel, series))
    };
    let (l2, series) = run(1e-3)?;
    let (_, half) = run(5e-4)?;
    let drift = series.max_norm_drift();
    let ratio = series.max_hamiltonian_drift() / half.max_hamiltonian_drift();
    let secs = start.elapsed().as_secs_f64();
    ensure(l2 <= 1e-2, format!("relative L2 error {l2:e}"))?;
    ensure(drift < 1e-9, format!("norm drift {drift:e}"))?;
    ensure(
        (3.0..=5.0).contains(&ratio),
        format!("Hamiltonian drift ratio {ratio}"),
    )?;
    ensure(secs <= 120.0, format!("runtime {secs:.1}s"))?;
    Ok(format!(
        "l2_rel = {l2:.3e} (<= 1e-2); norm drift = {drift:.2e} (< 1e-9); \
         H drift ratio dt/(dt/2) = {ratio:.3}; {secs:.1}s"
    ))
}

/// Classic Peregrine soliton of `i u_t + ½u_xx + β|u|²u = 0` on background `A`.
fn peregrine(amp: f64, beta: f64, x: f64, t: f64) -> ComplexValue {
    let q2 = amp * amp * beta;
    let num = ComplexValue::new(4.0, 8.0 * q2 * t);
    let den = 1.0 + 4.0 * q2 * x * x + 4.0 * q2 * q2 * t * t;
    (ComplexValue::new(1.0, 0.0) - num / den) * ComplexValue::cis(q2 * t) * amp
}

/// Second-order rational solution in the unit-background variables
/// `X = αx/√2`, `T = α²t/2`.
fn second_order_rational(x: f64, t: f64) -> ComplexValue {
    let (x2, t2) = (x * x, t * t);
    let g = 3.0 / 8.0 - 3.0 * x2 - 2.0 * x2 * x2 - 9.0 * t2 - 10.0 * t2 * t2 - 12.0 * x2 * t2;
    let h = 15.0 / 4.0 + 6.0 * x2 - 4.0 * x2 * x2 - 2.0 * t2 - 4.0 * t2 * t2 - 8.0 * x2 * t2;
    let d = (3.0 / 4.0
        + 9.0 * x2
        + 4.0 * x2 * x2
        + 16.0 / 3.0 * x2 * x2 * x2
        + 33.0 * t2
        + 36.0 * t2 * t2
        + 16.0 / 3.0 * t2 * t2 * t2
        - 24.0 * x2 * t2
        + 16.0 * x2 * x2 * t2
        + 16.0 * x2 * t2 * t2)
        / 8.0;
    (ComplexValue::new(1.0, 0.0) + ComplexValue::new(g, t * h) / d) * ComplexValue::cis(t)
}

// 6. Scalar reduction.
fn scalar_reduction() -> Outcome {
    let mut worst = 0.0f64;
    for (alpha, beta, a) in [(1.5, 1.0, 2.0), (0.7, 2.5, -1.3), (2.2, 0.4, 0.9)] {
        let p = RogonParams::new(alpha, beta, a, 0.0, 0.0).unwrap();
        let (a_s, a_p) = rogon::background_amplitudes(&p).unwrap();
        let expected_bg = alpha * a / (2.0 * beta * a * a).sqrt();
        ensure(
            rel(a_s, expected_bg) < 1e-15 && a_p == 0.0,
            "background amplitude",
        )?;
        let f0 = rogon::rogon1_factor(&p, PointST::ORIGIN).unwrap();
        ensure(
            f0 == ComplexValue::new(-3.0, 0.0),
            format!("factor at origin {f0}"),
        )?;
        for i in -20..=20 {
            for j in -10..=10 {
                let x = PointST::new(0.23 * i as f64, 0.17 * j as f64);
                let v = eval_rogon(&p, Order::One, x).unwrap();
                ensure(v.psi == ComplexValue::new(0.0, 0.0), "psi must vanish")?;
                let u = peregrine(a_s, beta, x.s, x.t);
                worst = worst.max((v.sigma - u).norm() / a_s.abs());

                let v2 = eval_rogon(&p, Order::Two, x).unwrap();
                let big_x = alpha * x.s / 2f64.sqrt();
                let big_t = alpha * alpha * x.t / 2.0;
                let u2 = second_order_rational(big_x, big_t) * a_s;
                worst = worst.max((v2.sigma - u2).norm() / a_s.abs());
            }
        }
    }
    ensure(
        worst < 1e-13,
        format!("max deviation from scalar solutions {worst:e}"),
    )?;
    Ok(format!(
        "b = 0 gives factor -3 at origin, A_sigma = alpha*a/sqrt(2*beta*a^2); \
         max deviation from scalar Peregrine / second-order forms {worst:.1e}"
    ))
}

fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty csv")?;
    ensure(
        header == "S,t,re_sigma,im_sigma,re_psi,im_psi,I_sigma,I_psi",
        "csv header",
    )?;
    lines
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().map_err(|e| e.to_string()))
                .collect()
        })
        .collect()
}

// 7. Figure datasets.
fn figure_reproduction() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let argv: Vec<String> = ["rogonlab", "figures", "--out-dir"]
        .iter()
        .map(|s| s.to_string())
        .chain([dir.path().to_string_lossy().into_owned()])
        .collect();
    let code = rogonlab::cli::run(argv);
    ensure(code == 0, format!("figures exited with {code}"))?;

    let captions: [(&str, Order, f64, &[f64]); 4] = [
        ("fig1", Order::One, 0.0, &[0.0, 0.4, 1.0]),
        ("fig2", Order::One, 0.5, &[0.0, 0.4, 1.0]),
        ("fig3", Order::Two, 0.0, &[0.0, 0.4, 1.2]),
        ("fig4", Order::Two, 0.5, &[0.0, 0.8, 1.5]),
    ];
    let mut ridge_rows = 0;
    for (name, order, k, times) in captions {
        let fdir = dir.path().join(name);
        let manifest: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(fdir.join("manifest.json")).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let params = &manifest["parameters"];
        ensure(
            params["alpha"] == 1.5
                && params["beta"] == 1.0
                && params["a"] == 2.0
                && params["b"] == 5.0
                && params["k"] == k
                && params["order"] == order.as_int(),
            format!("{name}: caption parameters in manifest"),
        )?;

        let p = RogonParams::figure(k);
        let (a_s, a_p) = rogon::background_amplitudes(&p).unwrap();
        let ratio2 = rogon::peak_info(&p, order).unwrap().intensity_ratio();

        let surface = read_csv(&fdir.join("surface.csv"))?;
        ensure(surface.len() == 401 * 201, format!("{name}: surface rows"))?;
        let best = surface.iter().max_by(|a, b| a[7].total_cmp(&b[7])).unwrap();
        ensure(
            (best[0] - k * best[1]).abs() < 1e-12,
            format!(
                "{name}: peak at S = {}, t = {} is off S = kt",
                best[0], best[1]
            ),
        )?;
        ensure(
            rel(best[7], ratio2 * a_p * a_p) < 1e-12,
            format!("{name}: peak I_psi {}", best[7]),
        )?;
        let best_s = surface.iter().map(|r| r[6]).fold(0.0, f64::max);
        ensure(
            rel(best_s, ratio2 * a_s * a_s) < 1e-12,
            format!("{name}: peak I_sigma {best_s}"),
        )?;

        // Order-one density maxima follow the ridge S = kt in every t-row.
        if order == Order::One {
            let ds = 8.0 / 400.0;
            for row in surface.chunks(401) {
                let m = row.iter().max_by(|a, b| a[7].total_cmp(&b[7])).unwrap();
                ensure(
                    (m[0] - k * m[1]).abs() <= 0.5 * ds + 1e-12,
                    format!("{name}: row t = {} peaks at S = {}", m[1], m[0]),
                )?;
                ridge_rows += 1;
            }
        }

        for &t in times {
            let label = if t == t.trunc() {
                format!("{}", t as i64)
            } else {
                format!("{t}")
            };
            let rows = read_csv(&fdir.join(format!("slice_t{label}.csv")))?;
            ensure(rows.len() == 401, format!("{name}: slice rows"))?;
            ensure(
                rows.iter().all(|r| r[1] == t),
                format!("{name}: slice time {t}"),
            )?;
            if t == 0.0 {
                let m = rows.iter().max_by(|a, b| a[6].total_cmp(&b[6])).unwrap();
                ensure(
                    m[0] == 0.0 && rel(m[6], ratio2 * a_s * a_s) < 1e-12,
                    format!("{name}: t=0 slice peak"),
                )?;
            }
        }
        ensure(
            fdir.join("slices.py").exists() && fdir.join("surface.py").exists(),
            "plot scripts",
        )?;
    }
    Ok(format!(
        "4 figure directories with caption parameters and slice times; peaks on S = kt with \
         intensity ratios 9 and 25; {ridge_rows} order-one rows on the S = kt ridge"
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 exact constants", exact_constants),
        ("2 peak ratios", peak_ratios),
        ("3 residual verification", residual_verification),
        ("4 structural invariants", structural_invariants),
        ("5 solver round trip", solver_round_trip),
        ("6 scalar reduction", scalar_reduction),
        ("7 figure reproduction", figure_reproduction),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail} ({secs:.1}s)");
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failed,
        failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
