//! The three subcommands, callable as library functions.

use std::path::{Path, PathBuf};

use anisoreg_core::mixed_norm::mixed_norm;
use anisoreg_core::monitor::RegularityMonitor;
use anisoreg_core::solver::{cfl_advisory, run};
use anisoreg_core::{Exponent, VectorField};

use crate::config::{sibling, RunManifest, Settings, SimulateSettings, VerifySettings};
use crate::emit::{report_csv, to_json, trajectory_csv, write_atomic, SimulateSummary, VerifySummary};
use crate::error::{CliError, Result};
use crate::fieldio::{read_field, read_vector, write_vector};

/// Files written by a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Outputs {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub manifest: PathBuf,
}

impl Outputs {
    fn next_to(csv: &Path) -> Self {
        Self {
            csv: csv.to_path_buf(),
            summary: sibling(csv, "json"),
            manifest: sibling(csv, "manifest"),
        }
    }

    fn write_manifest<S: Settings>(&self, settings: &S) -> Result<()> {
        let m = RunManifest::new(
            settings,
            vec![
                ("csv", self.csv.clone()),
                ("summary", self.summary.clone()),
                ("manifest", self.manifest.clone()),
            ],
        );
        write_atomic(&self.manifest, m.render().as_bytes())
    }
}

#[derive(Clone, Debug)]
pub struct SimulateOutcome {
    pub outputs: Outputs,
    pub summary: SimulateSummary,
}

fn field_path(dir: &Path, step: u64) -> PathBuf {
    dir.join(format!("u_{step:06}.f64"))
}

/// Runs the solver with the monitor attached and writes CSV, JSON summary
/// and manifest. A blow-up still writes all three, then returns
/// [`CliError::BlowUp`].
pub fn simulate(settings: &SimulateSettings) -> Result<SimulateOutcome> {
    let provided = match &settings.init_file {
        Some(path) => Some(read_vector(path)?),
        None => None,
    };
    let config = settings.solver_config(provided)?;
    let exps = settings.exponents()?;
    let u0: VectorField = config.initial_velocity()?;
    let cfl = cfl_advisory(&config, &u0);
    if let Some(c) = cfl {
        eprintln!(
            "warning: dt = {} exceeds the advective limit {:.3e} (0.5 h_min / max|u0|); results may be inaccurate",
            c.dt, c.limit
        );
    }
    if let Some(dir) = &settings.save_fields {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }

    let mut monitor = RegularityMonitor::new(config.grid, exps);
    let mut dump_error = None;
    let result = run(&config, |state| {
        monitor.observe(state)?;
        if let Some(dir) = &settings.save_fields {
            if let Err(e) = write_vector(&field_path(dir, state.step_index()), state.velocity()) {
                dump_error = Some(e);
                return Err(anisoreg_core::Error::InvalidConfig("field dump failed".into()));
            }
        }
        Ok(())
    });
    if let Some(e) = dump_error {
        return Err(e);
    }
    let blow_up = match result {
        Ok(_) => None,
        Err(anisoreg_core::Error::BlowUp { step, t }) => Some((step, t)),
        Err(e) => return Err(e.into()),
    };

    let outputs = Outputs::next_to(&settings.out);
    let records = monitor.records();
    write_atomic(&outputs.csv, trajectory_csv(records).as_bytes())?;
    let t_final = records.last().map_or(0.0, |r| r.t);
    let steps = match blow_up {
        Some((step, _)) => step - 1,
        None => config.steps(),
    };
    let summary = SimulateSummary::new(
        settings.pairs(),
        &monitor.summary(config.nu)?,
        steps,
        t_final,
        blow_up.map(|(s, _)| s),
        cfl,
    );
    write_atomic(&outputs.summary, to_json(&summary)?.as_bytes())?;
    outputs.write_manifest(settings)?;

    if let Some((step, t)) = blow_up {
        return Err(CliError::BlowUp { step, t });
    }
    Ok(SimulateOutcome { outputs, summary })
}

#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub outputs: Outputs,
    pub summary: VerifySummary,
}

/// Evaluates a test-function family and writes the per-sample ratios.
pub fn verify(settings: &VerifySettings) -> Result<VerifyOutcome> {
    let report = anisoreg_core::inequality::run_family(
        &settings.test_functions(),
        &settings.suite()?,
        settings.samples,
        &settings.grid_list()?,
    )?;
    let outputs = Outputs::next_to(&settings.out);
    write_atomic(&outputs.csv, report_csv(&report).as_bytes())?;
    let summary = VerifySummary::new(settings.pairs(), &report);
    write_atomic(&outputs.summary, to_json(&summary)?.as_bytes())?;
    outputs.write_manifest(settings)?;
    Ok(VerifyOutcome { outputs, summary })
}

/// Mixed norm of a field file; vector files use the pointwise magnitude.
pub fn norm(input: &Path, p: Exponent, q: Exponent, r: Exponent) -> Result<f64> {
    let field = read_field(input)?;
    Ok(mixed_norm(&field.magnitude(), p, q, r)?)
}
