use egfet_core::data_io::read_report;
use egfet_core::extraction::{compare_reports, ids_over_sqrt_gm_extract, inv_ids_extract, peak_gm_extract};
use egfet_core::{ExtractOptions, ExtractionReport};
use serde_json::{json, Value};

use super::{ensure_dir, fmt_opt, load_gate, num, opt_num, shown, write_json};
use crate::args::CompareArgs;
use crate::error::CliError;

pub fn run(args: &CompareArgs) -> Result<(), CliError> {
    let mut reports: Vec<ExtractionReport> = Vec::new();
    let mut notes = Vec::new();
    for p in &args.reports {
        reports.push(read_report(p).map_err(CliError::Input)?);
    }
    if !args.sweeps.is_empty() {
        let spec = args.device.spec()?;
        let opts = ExtractOptions::default();
        for p in &args.sweeps {
            let sweep = load_gate(p)?;
            let results = [
                peak_gm_extract(&sweep),
                ids_over_sqrt_gm_extract(&sweep, &spec, args.rsd, &opts),
                inv_ids_extract(&sweep, &spec, args.rsd, &opts),
            ];
            for r in results {
                match r {
                    Ok(r) => reports.push(r),
                    Err(e) => notes.push(format!("{}: {e}", shown(p))),
                }
            }
        }
    }

    let table = compare_reports(&reports, &args.reference).map_err(|e| CliError::extraction("compare", e))?;
    notes.extend(table.diagnostics.iter().cloned());

    println!("reference: {}", table.reference);
    println!("{:<9} {:<20} {:>8} {:>9} {:>10} {:>8}", "method", "label", "V_ds (V)", "V_T (V)", "ΔV_T (V)", "σ (V)");
    for r in &table.rows {
        println!(
            "{:<9} {:<20} {:>8.3} {:>9.4} {:>+10.4} {:>8}",
            r.method.as_str(),
            r.label,
            r.v_ds,
            r.v_t,
            r.shift,
            fmt_opt(r.sigma, 4)
        );
    }
    for n in &notes {
        println!("  {n}");
    }

    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "method": r.method.as_str(),
                "label": r.label,
                "v_ds": num(r.v_ds),
                "v_t": num(r.v_t),
                "v_t_reference": num(r.v_t_reference),
                "shift": num(r.shift),
                "sigma": opt_num(r.sigma),
            })
        })
        .collect();
    let doc = json!({ "reference": table.reference, "unit": "V", "rows": rows, "diagnostics": notes });
    ensure_dir(&args.out_dir)?;
    let path = args.out_dir.join(format!("{}.json", args.name));
    write_json(&path, &doc)?;
    log::info!("wrote {}", shown(&path));
    Ok(())
}
