//! Output files: per-sample CSV, JSON summaries, manifests. Every file is
//! written to a temporary sibling and renamed into place.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anisoreg_core::inequality::RatioReport;
use anisoreg_core::monitor::{MonitorRecord, MonitorSummary};
use anisoreg_core::solver::CflAdvisory;
use serde::Serialize;

use crate::error::{CliError, Result};

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| CliError::invalid(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = dir.join(tmp_name);
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}

pub const TRAJECTORY_HEADER: &str = "t,energy,grad_sq,d3u_sq,grad_d3u_sq,mixed,beta,integrand,cumulative,F,\
trilinear,h1_trilinear,audit24_a,audit24_b,audit210_lhs,audit210_rhs";

/// One row per record; just the header when there are none.
pub fn trajectory_csv(records: &[MonitorRecord]) -> String {
    let mut s = String::with_capacity(64 + records.len() * 300);
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for r in records {
        let values = [
            r.t,
            r.energy,
            r.grad_sq,
            r.d3u_sq,
            r.grad_d3u_sq,
            r.mixed,
            r.beta,
            r.integrand,
            r.cumulative,
            r.log_energy,
            r.trilinear,
            r.h1_trilinear,
            r.audit24.a,
            r.audit24.b,
            r.audit210.lhs,
            r.audit210.rhs,
        ];
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v:.16e}");
        }
        s.push('\n');
    }
    s
}

pub const REPORT_HEADER: &str = "sample,ratio,lhs,rhs,grid";

pub fn report_csv(report: &RatioReport) -> String {
    let mut s = String::from(REPORT_HEADER);
    s.push('\n');
    for row in &report.rows {
        let [a, b, c] = row.grid.dims();
        let _ = writeln!(
            s,
            "{},{:.16e},{:.16e},{:.16e},{a}x{b}x{c}",
            row.sample, row.ratio, row.lhs, row.rhs
        );
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct Cfl {
    pub dt: f64,
    pub limit: f64,
}

impl From<CflAdvisory> for Cfl {
    fn from(c: CflAdvisory) -> Self {
        Cfl { dt: c.dt, limit: c.limit }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditCounts {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulateSummary {
    pub status: String,
    pub config: BTreeMap<String, String>,
    pub mode: &'static str,
    pub steps: u64,
    pub samples: usize,
    pub t_final: f64,
    pub final_cumulative: f64,
    pub max_integrand: f64,
    pub audit24: AuditCounts,
    pub audit210: AuditCounts,
    pub energy_inequality: AuditCounts,
    pub min_energy_slack: f64,
    pub max_energy_residual: f64,
    pub max_audit24_constant: f64,
    pub max_audit210_trilinear_ratio: f64,
    pub max_audit210_sobolev_ratio: f64,
    pub cfl_warning: Option<Cfl>,
}

impl SimulateSummary {
    /// `steps` counts completed steps; `blow_up` is the failing step, if any.
    pub fn new(
        config: Vec<(&'static str, String)>,
        summary: &MonitorSummary,
        steps: u64,
        t_final: f64,
        blow_up: Option<u64>,
        cfl: Option<CflAdvisory>,
    ) -> Self {
        Self {
            status: match blow_up {
                None => "ok".to_string(),
                Some(k) => format!("blow-up at step {k}"),
            },
            config: config.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            mode: summary.mode.name(),
            steps,
            samples: summary.samples,
            t_final,
            final_cumulative: summary.final_cumulative,
            max_integrand: summary.max_integrand,
            audit24: AuditCounts {
                pass: summary.audit24_pass,
                fail: summary.audit24_fail,
            },
            audit210: AuditCounts {
                pass: summary.audit210_pass,
                fail: summary.audit210_fail,
            },
            energy_inequality: AuditCounts {
                pass: summary.energy_inequality_pass,
                fail: summary.energy_inequality_fail,
            },
            min_energy_slack: summary.min_energy_slack,
            max_energy_residual: summary.max_energy_residual,
            max_audit24_constant: summary.max_audit24_constant,
            max_audit210_trilinear_ratio: summary.max_audit210_trilinear_ratio,
            max_audit210_sobolev_ratio: summary.max_audit210_sobolev_ratio,
            cfl_warning: cfl.map(Cfl::from),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub status: &'static str,
    pub config: BTreeMap<String, String>,
    pub family: String,
    pub samples: usize,
    pub grids: Vec<String>,
    pub sup_by_grid: Vec<f64>,
    pub empirical_constant: f64,
    pub drift: Option<f64>,
}

impl VerifySummary {
    pub fn new(config: Vec<(&'static str, String)>, report: &RatioReport) -> Self {
        Self {
            status: "ok",
            config: config.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            family: report.family.clone(),
            samples: report.samples,
            grids: report
                .grids
                .iter()
                .map(|g| {
                    let [a, b, c] = g.dims();
                    format!("{a}x{b}x{c}")
                })
                .collect(),
            sup_by_grid: report.sup_by_grid.clone(),
            empirical_constant: report.sup,
            drift: report.drift,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::invalid(format!("summary: {e}")))?;
    s.push('\n');
    Ok(s)
}
