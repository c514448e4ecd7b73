use egfet_core::data_io::{write_drain_family, write_drain_family_split, write_gate_sweep};
use egfet_core::model::{beta0, synth_drain_sweep_family, synth_gate_sweep};
use egfet_core::units::mobility_from_cm2;
use egfet_core::{CurrentModel, DrainSweepFamily, ModelParams, Synthesis};

use super::{ensure_dir, shown};
use crate::args::{ModelChoice, SimulateArgs};
use crate::error::CliError;

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let spec = args.device.spec()?;
    let params = ModelParams::new(args.vt, mobility_from_cm2(args.mu0), args.theta, args.rsd)?;
    let model = match args.model {
        ModelChoice::Implicit => CurrentModel::Implicit,
        ModelChoice::Simplified => CurrentModel::Simplified,
    };
    let synth = Synthesis::noisy(model, args.noise, args.seed);
    let model_name = match args.model {
        ModelChoice::Implicit => "implicit",
        ModelChoice::Simplified => "simplified",
    };
    let provenance = format!(
        "synthetic: V_T={} V, mu_0={} cm2/Vs, theta={} 1/V, R_sd={} ohm, W={} um, L={} um, C_ox={:e} F/cm2, model={model_name}, noise={}, seed={}",
        args.vt, args.mu0, args.theta, args.rsd, args.device.width_um, args.device.length_um, args.device.cox_per_cm2, args.noise, args.seed
    );

    println!("V_T    = {} V", args.vt);
    println!("mu_0   = {} cm2/Vs", args.mu0);
    println!("theta  = {} 1/V", args.theta);
    println!("R_sd   = {} ohm", args.rsd);
    println!("beta_0 = {:.6e} A/V2", beta0(&spec, &params).value());
    println!("device = W {} um, L {} um, C_ox {:e} F/cm2", args.device.width_um, args.device.length_um, args.device.cox_per_cm2);
    println!("model  = {model_name}, noise {}, seed {}", args.noise, args.seed);

    ensure_dir(&args.out_dir)?;
    let mut gate = synth_gate_sweep(&spec, &params, args.vds, &args.grid.points(), &synth)?;
    gate.set_label(&args.label);
    let mut notes = vec![provenance.clone()];
    notes.extend(gate.notes().iter().cloned());
    for n in gate.notes() {
        log::warn!("{n}");
    }
    let gate = gate.with_notes(notes);
    let gate_path = args.out_dir.join(format!("{}.gate.csv", args.name));
    write_gate_sweep(&gate, &gate_path).map_err(CliError::Output)?;
    println!("wrote {} ({} points, V_ds = {} V)", shown(&gate_path), gate.len(), args.vds);

    if !args.drain_vgs.is_empty() {
        let mut v_gs = args.drain_vgs.clone();
        v_gs.sort_by(f64::total_cmp);
        let fam = synth_drain_sweep_family(&spec, &params, &v_gs, &args.vds_grid.points(), &synth)?;
        for n in fam.notes() {
            log::warn!("{n}");
        }
        let mut notes = vec![provenance];
        notes.extend(fam.notes().iter().cloned());
        let fam = DrainSweepFamily::new(args.label.clone(), fam.sweeps().to_vec())
            .map_err(|e| CliError::config(e.to_string()))?
            .with_notes(notes);
        if args.split {
            let dir = args.out_dir.join(format!("{}.drain", args.name));
            ensure_dir(&dir)?;
            let files = write_drain_family_split(&fam, &dir).map_err(CliError::Output)?;
            println!("wrote {} ({} files)", shown(&dir), files.len());
        } else {
            let path = args.out_dir.join(format!("{}.drain.csv", args.name));
            write_drain_family(&fam, &path).map_err(CliError::Output)?;
            println!("wrote {} ({} gate voltages)", shown(&path), fam.len());
        }
    }
    Ok(())
}
