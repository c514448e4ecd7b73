use egfet_core::data_io::{read_gate_sweep, report_from_json, report_to_json, write_gate_sweep};
use egfet_core::extraction::{
    gds_method_extract, ids_over_sqrt_gm_extract, inv_ids_extract, peak_gm_extract, Estimate,
    ExtractOptions, ExtractionReport, Method,
};
use egfet_core::model::{
    beta0, gds_analytic, gm_analytic, ids_implicit, ids_simplified, linear_grid,
    synth_drain_sweep_family, synth_gate_sweep, BiasPoint, CurrentModel, DeviceSpec, ModelParams,
    Synthesis,
};
use egfet_core::numerics::{first_derivative, fit_line, second_derivative, smooth, LineFit, SampledCurve};
use egfet_core::{DrainSweep, DrainSweepFamily, GateSweep};
use proptest::prelude::*;

const EXACT: Synthesis = Synthesis {
    noise: 0.0,
    seed: 0,
    model: CurrentModel::Simplified,
};

fn spec() -> DeviceSpec {
    DeviceSpec::reference_device()
}

/// (V_T, μ_0 in m²/Vs, θ, R_sd) over the ranges of interest.
fn device_params() -> impl Strategy<Value = ModelParams> {
    (1.2..1.8f64, 0.03..0.075f64, 0.0..0.35f64, 0.0..200.0f64)
        .prop_map(|(v, m, t, r)| ModelParams::new(v, m, t, r).unwrap())
}

fn standard_sweep(p: &ModelParams) -> GateSweep {
    synth_gate_sweep(&spec(), p, 0.4, &linear_grid(0.0, 4.0, 0.1), &EXACT).unwrap()
}

fn gate_methods(s: &GateSweep, r_sd: f64) -> Vec<ExtractionReport> {
    let o = ExtractOptions::default();
    vec![
        peak_gm_extract(s).unwrap(),
        ids_over_sqrt_gm_extract(s, &spec(), r_sd, &o).unwrap(),
        inv_ids_extract(s, &spec(), r_sd, &o).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn implicit_current_is_a_fixed_point(p in device_params(), u in 0.01..2.8f64, v_ds in 0.0..1.0f64) {
        let b = BiasPoint::new(p.v_t() + u, v_ds).unwrap();
        let i = ids_implicit(&spec(), &p, &b).unwrap();
        let beta = beta0(&spec(), &p).value();
        let ui = u - i * p.r_s();
        let rhs = beta * ui * (v_ds - i * p.r_sd()) / (1.0 + p.theta() * ui);
        prop_assert!((i - rhs).abs() <= 1e-12 * i.abs().max(1e-30));
    }

    #[test]
    fn simplified_current_differs_by_the_expansion_terms(p in device_params(), u in 0.05..2.8f64) {
        // I = c/b · (1 + q·c/b² + …) for q I² − b I + c = 0
        let v_ds = 0.4;
        let bias = BiasPoint::new(p.v_t() + u, v_ds).unwrap();
        let beta = beta0(&spec(), &p).value();
        let a = p.theta() + beta * p.r_sd();
        let q = p.r_s() * a;
        let b = 1.0 + a * u + beta * p.r_s() * v_ds;
        let c = beta * v_ds * u;
        let x = q * c / (b * b);
        let exact = ids_implicit(&spec(), &p, &bias).unwrap();
        let second_order = c / b * (1.0 + x);
        prop_assert!(((exact - second_order) / exact).abs() <= 3.0 * x * x + 1e-14);
        let simple = ids_simplified(&spec(), &p, &bias).unwrap();
        let dropped = beta * p.r_s() * v_ds / (1.0 + a * u);
        prop_assert!(((exact - simple) / exact).abs() <= 1.01 * (dropped + x) + 1e-14);
    }

    #[test]
    fn analytic_derivatives_match_finite_differences(p in device_params(), u in 0.1..2.5f64, v_ds in 0.05..1.0f64) {
        let h = 1e-3;
        let i = |vg: f64, vd: f64| ids_simplified(&spec(), &p, &BiasPoint::new(vg, vd).unwrap()).unwrap();
        let vg = p.v_t() + u;
        let bias = BiasPoint::new(vg, v_ds).unwrap();
        let gm = gm_analytic(&spec(), &p, &bias).unwrap();
        let gds = gds_analytic(&spec(), &p, &bias).unwrap();
        let gm_fd = (i(vg + h, v_ds) - i(vg - h, v_ds)) / (2.0 * h);
        let gds_fd = (i(vg, v_ds + h) - i(vg, v_ds - h)) / (2.0 * h);
        prop_assert!((gm_fd / gm - 1.0).abs() < 1e-4);
        prop_assert!((gds_fd / gds - 1.0).abs() < 1e-4);
    }

    #[test]
    fn derivative_operators_are_linear(
        ys in prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 6..30),
        a in -10.0..10.0f64,
        b in -10.0..10.0f64,
        steps in prop::collection::vec(0.01..0.5f64, 30),
    ) {
        let mut x = vec![0.0];
        for s in &steps[..ys.len() - 1] {
            x.push(x.last().unwrap() + s);
        }
        let y1: Vec<f64> = ys.iter().map(|p| p.0).collect();
        let y2: Vec<f64> = ys.iter().map(|p| p.1).collect();
        let mix: Vec<f64> = y1.iter().zip(&y2).map(|(p, q)| a * p + b * q).collect();
        let c = |y: &[f64]| SampledCurve::new(x.clone(), y.to_vec()).unwrap();
        for d in [first_derivative, second_derivative] {
            let (d1, d2, dm) = (d(&c(&y1)).unwrap(), d(&c(&y2)).unwrap(), d(&c(&mix)).unwrap());
            for k in 0..dm.len() {
                let lin = a * d1.y()[k] + b * d2.y()[k];
                let scale = (a * d1.y()[k]).abs() + (b * d2.y()[k]).abs() + 1.0;
                prop_assert!((dm.y()[k] - lin).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn smoothing_preserves_quadratics(c0 in -5.0..5.0f64, c1 in -5.0..5.0f64, c2 in -5.0..5.0f64, w in prop::sample::select(vec![3usize, 5, 7, 9])) {
        let x: Vec<f64> = (0..25).map(|k| 0.3 * k as f64 + 0.01 * (k * k) as f64).collect();
        let y: Vec<f64> = x.iter().map(|t| c0 + c1 * t + c2 * t * t).collect();
        let s = smooth(&SampledCurve::new(x, y.clone()).unwrap(), w).unwrap();
        for (a, b) in s.y().iter().zip(&y) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn exact_lines_fit_exactly(m in -100.0..100.0f64, c in -100.0..100.0f64, n in 3usize..40) {
        prop_assume!(m.abs() > 1e-3);
        let x: Vec<f64> = (0..n).map(|k| k as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|t| m * t + c).collect();
        let f = fit_line(&SampledCurve::new(x, y).unwrap(), 0..n).unwrap();
        prop_assert!((f.r_squared - 1.0).abs() < 1e-12);
        prop_assert!((f.slope - m).abs() <= 1e-9 * m.abs());
        prop_assert!((f.intercept - c).abs() <= 1e-9 * (c.abs() + m.abs()));
    }

    #[test]
    fn current_scaling_keeps_threshold_and_scales_mobility(p in device_params(), c in 0.01..100.0f64) {
        let s = standard_sweep(&p);
        let base = gate_methods(&s, p.r_sd());
        let scaled = gate_methods(&s.scaled(c), p.r_sd());
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!((a.v_t.value - b.v_t.value).abs() < 1e-9, "{}: {} vs {}", a.method, a.v_t.value, b.v_t.value);
            if let (Some(ma), Some(mb)) = (a.mu_0, b.mu_0) {
                prop_assert!((mb.value / (c * ma.value) - 1.0).abs() < 1e-9, "{}", a.method);
            }
        }
    }

    #[test]
    fn gate_translation_moves_threshold_only(p in device_params(), delta in -1.0..1.0f64) {
        let s = standard_sweep(&p);
        let base = gate_methods(&s, p.r_sd());
        let moved = gate_methods(&s.shifted(delta), p.r_sd());
        for (a, b) in base.iter().zip(&moved) {
            prop_assert!((b.v_t.value - a.v_t.value - delta).abs() < 1e-9, "{}", a.method);
            if let (Some(ma), Some(mb)) = (a.mu_0, b.mu_0) {
                prop_assert!((mb.value / ma.value - 1.0).abs() < 1e-9);
            }
            if let (Some((a0, a1)), Some((b0, b1))) = (a.theta_range, b.theta_range) {
                prop_assert!((a0 - b0).abs() < 1e-6 && (a1 - b1).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn drain_family_scaling_and_translation(p in device_params(), c in 0.01..100.0f64, delta in -1.0..1.0f64) {
        let fam = synth_drain_sweep_family(&spec(), &p, &linear_grid(2.4, 3.4, 0.2), &linear_grid(0.0, 0.4, 0.1), &EXACT).unwrap();
        let rebuild = |k: f64, d: f64| {
            let sweeps = fam.sweeps().iter().map(|s| {
                DrainSweep::new(s.v_gs() + d, s.v_ds().to_vec(), s.i_ds().iter().map(|i| i * k).collect()).unwrap()
            }).collect();
            DrainSweepFamily::new("f", sweeps).unwrap()
        };
        let o = ExtractOptions::default();
        let base = gds_method_extract(&fam, &spec(), p.r_sd(), &o).unwrap();
        let scaled = gds_method_extract(&rebuild(c, 0.0), &spec(), p.r_sd(), &o).unwrap();
        let moved = gds_method_extract(&rebuild(1.0, delta), &spec(), p.r_sd(), &o).unwrap();
        for ((a, b), m) in base.iter().zip(&scaled).zip(&moved) {
            prop_assert!((a.v_t.value - b.v_t.value).abs() < 1e-9);
            prop_assert!((b.mu_0.unwrap().value / (c * a.mu_0.unwrap().value) - 1.0).abs() < 1e-9);
            prop_assert!((m.v_t.value - a.v_t.value - delta).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_resistance_input_shifts_theta_by_beta_r(p in device_params()) {
        prop_assume!(p.r_sd() > 20.0);
        let s = standard_sweep(&p);
        let offset = beta0(&spec(), &p).value() * p.r_sd();
        let with = ids_over_sqrt_gm_extract(&s, &spec(), p.r_sd(), &ExtractOptions::default()).unwrap();
        let without = ids_over_sqrt_gm_extract(&s, &spec(), 0.0, &ExtractOptions::default()).unwrap();
        // the fit does not depend on r_sd, so the two curves share their V_gs points
        prop_assert_eq!(with.v_t, without.v_t);
        let (a, b) = (with.theta_curve.unwrap(), without.theta_curve.unwrap());
        prop_assert_eq!(a.x(), b.x());
        // the subtracted term uses the extracted β, which sits near β0
        let d: Vec<f64> = a.y().iter().zip(b.y()).map(|(ta, tb)| tb - ta).collect();
        prop_assert!(d.iter().all(|x| (x - d[0]).abs() < 1e-12));
        prop_assert!((d[0] / offset - 1.0).abs() < 0.01);
    }

    #[test]
    fn theta_range_brackets_theta_curve(p in device_params()) {
        let s = standard_sweep(&p);
        for r in gate_methods(&s, p.r_sd()) {
            if let (Some(c), Some((lo, hi))) = (&r.theta_curve, r.theta_range) {
                prop_assert!(c.y().iter().all(|&t| lo <= t && t <= hi));
                prop_assert!(c.y().contains(&lo) && c.y().contains(&hi));
            }
        }
    }

    #[test]
    fn gate_sweep_files_round_trip(
        label in "[A-Za-z0-9_-]([A-Za-z0-9 _-]{0,20}[A-Za-z0-9_-])?",
        v_ds in 0.0..10.0f64,
        start in -5.0..5.0f64,
        steps in prop::collection::vec(1e-6..1.0f64, 1..60),
        currents in prop::collection::vec(prop_oneof![Just(0.0), 1e-15..1e-1f64], 60),
    ) {
        let mut v = vec![start];
        for s in &steps {
            v.push(v.last().unwrap() + s);
        }
        let i = currents[..v.len()].to_vec();
        let sweep = GateSweep::new(label, v_ds, v, i).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        write_gate_sweep(&sweep, &a).unwrap();
        let back = read_gate_sweep(&a).unwrap();
        prop_assert_eq!(&back, &sweep);
        write_gate_sweep(&back, &b).unwrap();
        prop_assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn reports_round_trip(
        v_t in prop::num::f64::NORMAL | prop::num::f64::ZERO,
        mu in prop::num::f64::POSITIVE | prop::num::f64::SUBNORMAL,
        sigma in prop::option::of(prop::num::f64::POSITIVE),
        curve in prop::collection::vec((-1e3..1e3f64, prop::num::f64::NORMAL), 0..8),
        slope in prop::num::f64::NORMAL,
    ) {
        let mut x: Vec<f64> = curve.iter().map(|c| c.0).collect();
        x.sort_by(f64::total_cmp);
        x.dedup();
        let y: Vec<f64> = curve.iter().take(x.len()).map(|c| c.1).collect();
        let c = SampledCurve::sparse(x, y).unwrap();
        let mut r = ExtractionReport {
            method: Method::InvIds,
            label: "trial \"1\"".into(),
            v_ds: 0.4,
            v_t: Estimate { value: v_t, sigma },
            mu_0: Some(Estimate { value: mu, sigma }),
            theta_curve: Some(c.clone()),
            theta_range: c.y_range(),
            mu_eff_curve: Some(c.clone()),
            r_sd_used: 50.0,
            fit: Some(LineFit {
                slope,
                intercept: -slope,
                x_intercept: 1.0,
                r_squared: 0.5,
                window: 0..c.len(),
                slope_sigma: 0.0,
                intercept_sigma: 1e-300,
                x_intercept_sigma: 3.0,
            }),
            linearized: Some(c),
            peak: None,
            diagnostics: vec![],
        };
        prop_assert_eq!(report_from_json(&report_to_json(&r)).unwrap(), r.clone());
        r.mu_0 = None;
        r.fit = None;
        prop_assert_eq!(report_from_json(&report_to_json(&r)).unwrap(), r);
    }
}
