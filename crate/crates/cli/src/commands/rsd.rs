use egfet_core::extraction::{peak_gm_extract, rsd_channel_length_intersection, rsd_output_resistance};
use egfet_core::units::{m_to_um, um_to_m};
use serde_json::{json, Map, Value};

use super::{ensure_dir, fmt_opt, load_family, load_gate, num, opt_num, shown, write_json};
use crate::args::RsdArgs;
use crate::error::CliError;

pub fn run(args: &RsdArgs) -> Result<(), CliError> {
    if args.drain.is_none() && args.devices.is_empty() {
        return Err(CliError::config("give a drain family (--drain) and/or devices (--device L_UM:PATH)"));
    }
    let mut doc = Map::new();
    let mut first_err = None;

    if let Some(path) = &args.drain {
        let family = load_family(path)?;
        let hint = match (args.vt_hint, &args.gate) {
            (Some(h), _) => h,
            (None, Some(g)) => {
                peak_gm_extract(&load_gate(g)?)
                    .map_err(|e| CliError::extraction("threshold hint", e))?
                    .v_t
                    .value
            }
            (None, None) => return Err(CliError::config("the output-resistance estimate needs --vt-hint or --gate")),
        };
        match rsd_output_resistance(&family, hint) {
            Ok(est) => {
                println!(
                    "output resistance: R_sd + theta/beta_0 = {:.3} ± {} ohm ({} gate values, min R_tot = {:.3} ohm)",
                    est.r_sd.value,
                    fmt_opt(est.r_sd.sigma, 3),
                    est.points.len(),
                    est.min_r_tot
                );
                for d in &est.diagnostics {
                    println!("  {d}");
                }
                doc.insert(
                    "output_resistance".into(),
                    json!({
                        "r_sd": { "value": num(est.r_sd.value), "sigma": opt_num(est.r_sd.sigma), "unit": "ohm" },
                        "min_r_tot": num(est.min_r_tot),
                        "v_t_hint": num(hint),
                        "gate_values": est.points.len(),
                        "r_squared": num(est.fit.r_squared),
                        "diagnostics": est.diagnostics,
                    }),
                );
            }
            Err(e) => {
                println!("output resistance: failed: {e}");
                first_err = Some(CliError::extraction("output-resistance estimate", e));
            }
        }
    }

    if !args.devices.is_empty() {
        let devices = args
            .devices
            .iter()
            .map(|(l, p)| Ok((um_to_m(*l), load_gate(p)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        match rsd_channel_length_intersection(&devices) {
            Ok(est) => {
                println!(
                    "intersection: R_sd = {:.3} ± {} ohm, delta_L = {:.4} ± {} um ({} lines)",
                    est.r_sd.value,
                    fmt_opt(est.r_sd.sigma, 3),
                    m_to_um(est.delta_l.value),
                    fmt_opt(est.delta_l.sigma.map(m_to_um), 4),
                    est.lines.len()
                );
                for d in &est.diagnostics {
                    println!("  {d}");
                }
                let lines: Vec<Value> = est
                    .lines
                    .iter()
                    .map(|l| json!({ "v_gs": num(l.v_gs), "slope_ohm_per_um": num(l.slope * 1e-6), "intercept_ohm": num(l.intercept) }))
                    .collect();
                doc.insert(
                    "intersection".into(),
                    json!({
                        "r_sd": { "value": num(est.r_sd.value), "sigma": opt_num(est.r_sd.sigma), "unit": "ohm" },
                        "delta_l": { "value": num(m_to_um(est.delta_l.value)), "sigma": opt_num(est.delta_l.sigma.map(m_to_um)), "unit": "um" },
                        "lines": lines,
                        "diagnostics": est.diagnostics,
                    }),
                );
            }
            Err(e) => {
                println!("intersection: failed: {e}");
                first_err.get_or_insert(CliError::extraction("intersection estimate", e));
            }
        }
    }

    ensure_dir(&args.out_dir)?;
    let path = args.out_dir.join(format!("{}.json", args.name));
    write_json(&path, &Value::Object(doc))?;
    log::info!("wrote {}", shown(&path));
    first_err.map_or(Ok(()), Err)
}
