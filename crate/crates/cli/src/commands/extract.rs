use egfet_core::data_io::{emit_plot, write_report};
use egfet_core::extraction::{
    gds_method_extract, ids_over_sqrt_gm_extract, inv_ids_extract, peak_gm_extract, rsd_output_resistance,
};
use egfet_core::{DeviceSpec, DrainSweepFamily, ExtractOptions, ExtractionError, ExtractionReport, GateSweep, Method};
use serde_json::json;

use super::{ensure_dir, fmt_opt, load_family, load_gate, num, opt_num, shown, write_json};
use crate::args::{ExtractArgs, MethodChoice, RsdChoice};
use crate::error::{extraction_code, CliError};
use crate::figures::method_figure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// JSON reports, summary, table; SVGs with `--plot`.
    Extract,
    /// SVGs only.
    Plot,
}

enum Outcome {
    Done(Vec<ExtractionReport>),
    Skipped(String),
    Failed(ExtractionError),
}

struct Resistance {
    value: f64,
    sigma: Option<f64>,
    source: &'static str,
    note: Option<String>,
}

fn selected(choices: &[MethodChoice]) -> (Vec<Method>, bool) {
    if choices.contains(&MethodChoice::All) {
        return (Method::ALL.to_vec(), false);
    }
    let mut ms: Vec<Method> = choices.iter().filter_map(|c| c.method()).collect();
    ms.sort();
    ms.dedup();
    (ms, true)
}

fn stem_of(args: &ExtractArgs) -> String {
    if let Some(s) = &args.stem {
        return s.clone();
    }
    let input = args.gate.as_deref().or(args.drain.as_deref());
    input
        .and_then(|p| p.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "egfet".into())
}

fn resistance(args: &ExtractArgs, gate: Option<&GateSweep>, family: Option<&DrainSweepFamily>) -> Result<Resistance, CliError> {
    let RsdChoice::Ohms(value) = args.rsd else {
        let fam = family.ok_or_else(|| CliError::config("--rsd auto needs a drain family (--drain)"))?;
        let hint = match (args.vt_hint, gate) {
            (Some(h), _) => h,
            (None, Some(g)) => {
                peak_gm_extract(g)
                    .map_err(|e| CliError::extraction("threshold hint for --rsd auto", e))?
                    .v_t
                    .value
            }
            (None, None) => return Err(CliError::config("--rsd auto needs --vt-hint or a gate sweep (--gate)")),
        };
        let est = rsd_output_resistance(fam, hint).map_err(|e| CliError::extraction("--rsd auto", e))?;
        if est.r_sd.value < 0.0 {
            return Err(CliError::extraction("--rsd auto", ExtractionError::InvalidResistance(est.r_sd.value)));
        }
        let note = format!(
            "r_sd = {:.3} ohm from the output-resistance intercept (V_T hint {hint} V); this intercept is R_sd + theta/beta_0",
            est.r_sd.value
        );
        return Ok(Resistance {
            value: est.r_sd.value,
            sigma: est.r_sd.sigma,
            source: "output_resistance",
            note: Some(note),
        });
    };
    Ok(Resistance {
        value,
        sigma: None,
        source: "flag",
        note: None,
    })
}

fn run_method(
    m: Method,
    gate: Option<&GateSweep>,
    family: Option<&DrainSweepFamily>,
    spec: &DeviceSpec,
    r_sd: f64,
    opts: &ExtractOptions,
) -> Outcome {
    let result = match (m, gate, family) {
        (Method::GdsMethod, _, None) => return Outcome::Skipped("needs a drain family (--drain)".into()),
        (Method::GdsMethod, _, Some(f)) => gds_method_extract(f, spec, r_sd, opts),
        (_, None, _) => return Outcome::Skipped("needs a gate sweep (--gate)".into()),
        (Method::PeakGm, Some(g), _) => peak_gm_extract(g).map(|r| vec![r]),
        (Method::IdsOverSqrtGm, Some(g), _) => ids_over_sqrt_gm_extract(g, spec, r_sd, opts).map(|r| vec![r]),
        (Method::InvIds, Some(g), _) => inv_ids_extract(g, spec, r_sd, opts).map(|r| vec![r]),
    };
    match result {
        Ok(r) => Outcome::Done(r),
        Err(e) => Outcome::Failed(e),
    }
}

fn file_names(stem: &str, m: Method, count: usize, ext: &str) -> Vec<String> {
    if count == 1 {
        vec![format!("{stem}.{m}.{ext}")]
    } else {
        (0..count).map(|k| format!("{stem}.{m}.{k:02}.{ext}")).collect()
    }
}

fn table(outcomes: &[(Method, Outcome)]) -> String {
    let mut out = format!(
        "{:<9} {:>8} {:>9} {:>14} {:>21} {:>10}\n",
        "method", "V_ds (V)", "V_T (V)", "μ_0 (cm²/Vs)", "θ range (1/V)", "r²"
    );
    for (m, o) in outcomes {
        match o {
            Outcome::Done(reports) => {
                for r in reports {
                    let theta = match r.theta_range {
                        Some((lo, hi)) => format!("{lo:.4} .. {hi:.4}"),
                        None => "-".into(),
                    };
                    out += &format!(
                        "{:<9} {:>8.3} {:>9.4} {:>14} {:>21} {:>10}\n",
                        m.as_str(),
                        r.v_ds,
                        r.v_t.value,
                        fmt_opt(r.mu_0_cm2(), 2),
                        theta,
                        fmt_opt(r.fit.as_ref().map(|f| f.r_squared), 6)
                    );
                }
            }
            Outcome::Skipped(why) => out += &format!("{:<9} skipped: {why}\n", m.as_str()),
            Outcome::Failed(e) => out += &format!("{:<9} failed: {e}\n", m.as_str()),
        }
    }
    out
}

pub fn run(args: &ExtractArgs, mode: Mode) -> Result<(), CliError> {
    if args.gate.is_none() && args.drain.is_none() {
        return Err(CliError::config("give a gate sweep (--gate) and/or a drain family (--drain)"));
    }
    let (methods, explicit) = selected(&args.method);
    if explicit {
        if methods.contains(&Method::GdsMethod) && args.drain.is_none() {
            return Err(CliError::config("method gds needs a drain family (--drain)"));
        }
        if methods.iter().any(|m| m.uses_gate_sweep()) && args.gate.is_none() {
            return Err(CliError::config("gate-sweep methods need --gate"));
        }
    }
    let spec = args.device.spec()?;
    let gate = args.gate.as_deref().map(load_gate).transpose()?;
    let family = args.drain.as_deref().map(load_family).transpose()?;
    let r = resistance(args, gate.as_ref(), family.as_ref())?;
    let opts = ExtractOptions {
        window: args.window,
        min_points: args.min_points,
        smoothing: args.smooth,
        ..ExtractOptions::default()
    };

    let mut outcomes = Vec::new();
    for m in methods {
        let mut o = run_method(m, gate.as_ref(), family.as_ref(), &spec, r.value, &opts);
        if let (Outcome::Done(reports), Some(note)) = (&mut o, &r.note) {
            for rep in reports.iter_mut().filter(|rep| rep.method != Method::PeakGm) {
                rep.diagnostics.push(note.clone());
            }
        }
        outcomes.push((m, o));
    }

    ensure_dir(&args.out_dir)?;
    let stem = stem_of(args);
    let write_svg = mode == Mode::Plot || args.plot;
    let mut summary = Vec::new();
    for (m, o) in &outcomes {
        let entry = match o {
            Outcome::Done(reports) => {
                let mut files = Vec::new();
                if mode == Mode::Extract {
                    for (rep, name) in reports.iter().zip(file_names(&stem, *m, reports.len(), "json")) {
                        write_report(rep, args.out_dir.join(&name)).map_err(CliError::Output)?;
                        files.push(name);
                    }
                }
                if write_svg {
                    for (rep, name) in reports.iter().zip(file_names(&stem, *m, reports.len(), "svg")) {
                        let fig = method_figure(rep, gate.as_ref(), family.as_ref());
                        emit_plot(&fig, args.out_dir.join(&name)).map_err(CliError::Output)?;
                        files.push(name);
                    }
                }
                json!({ "method": m.as_str(), "status": "ok", "files": files })
            }
            Outcome::Skipped(why) => json!({ "method": m.as_str(), "status": "skipped", "message": why }),
            Outcome::Failed(e) => json!({
                "method": m.as_str(),
                "status": "failed",
                "message": e.to_string(),
                "exit_code": extraction_code(e),
            }),
        };
        summary.push(entry);
    }

    match mode {
        Mode::Extract => {
            let doc = json!({
                "inputs": {
                    "gate": args.gate.as_deref().map(shown),
                    "drain": args.drain.as_deref().map(shown),
                },
                "r_sd": { "value": num(r.value), "sigma": opt_num(r.sigma), "unit": "ohm", "source": r.source },
                "methods": summary,
            });
            let path = args.out_dir.join(format!("{stem}.summary.json"));
            write_json(&path, &doc)?;
            print!("{}", table(&outcomes));
            for (m, o) in &outcomes {
                if let Outcome::Done(reports) = o {
                    let mut seen: Vec<&String> = Vec::new();
                    for d in reports.iter().flat_map(|r| &r.diagnostics) {
                        if !seen.contains(&d) {
                            println!("  [{m}] {d}");
                            seen.push(d);
                        }
                    }
                }
            }
            log::info!("wrote {}", shown(&path));
        }
        Mode::Plot => {
            for e in &summary {
                for f in e["files"].as_array().into_iter().flatten() {
                    println!("wrote {}", shown(&args.out_dir.join(f.as_str().unwrap_or_default())));
                }
                if e["status"] != "ok" {
                    println!("{}: {}", e["method"].as_str().unwrap_or_default(), e["message"].as_str().unwrap_or_default());
                }
            }
        }
    }

    match outcomes.into_iter().find_map(|(m, o)| match o {
        Outcome::Failed(e) => Some((m, e)),
        _ => None,
    }) {
        Some((m, e)) => Err(CliError::extraction(format!("method {m}"), e)),
        None => Ok(()),
    }
}
