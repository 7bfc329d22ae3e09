//! Subcommand implementations. Each returns a serializable report; printing
//! and exit codes are left to `main`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bellspace::correlation::is_local;
use bellspace::{
    chsh_maximize, chsh_value, criterion_threshold, e_spin, g_factor_montecarlo, g_factor_quadrature,
    lhv_membership, tsirelson_settings, verify_paper_bound, ChshOptions, CorrelationTable, Exec, Scenario,
    UnitVector3, LOCALITY_THRESHOLD,
};

use crate::error::CliError;
use crate::report::{sig12, Bracket, Check, PaperReport, Report, ScanSummary, WitnessEntry};
use crate::scenario_file::ScenarioFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParam {
    HalfWidth,
    Separation,
}

impl ScanParam {
    pub fn name(self) -> &'static str {
        match self {
            ScanParam::HalfWidth => "half_width",
            ScanParam::Separation => "separation",
        }
    }
}

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const DEFAULT_CHSH_TOL: f64 = 1e-6;
pub const DEFAULT_LHV_TOL: f64 = 1e-9;
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn load_scenario(path: &Path) -> Result<(ScenarioFile, Scenario), CliError> {
    let file = ScenarioFile::load(path)?;
    let scenario = file.scenario().map_err(|message| CliError::Parse {
        path: path.to_path_buf(),
        message,
    })?;
    Ok((file, scenario))
}

fn chsh_max_for(g: f64, tol: f64, exec: Exec) -> Result<f64, CliError> {
    let opts = ChshOptions { exec, ..ChshOptions::with_tol(tol) };
    Ok(chsh_maximize(move |a: &UnitVector3, b: &UnitVector3| g * e_spin(a, b), &opts)?.value)
}

pub fn gfactor(path: &Path, method: Method, tol: f64, samples: usize, seed: Option<u64>) -> Result<Report, CliError> {
    let start = Instant::now();
    let (_, s) = load_scenario(path)?;
    let mut report = Report::default();
    match method {
        Method::Closed => {
            report.g = s.g();
            report.method = Some("closed".into());
        }
        Method::Quadrature => {
            report.g = g_factor_quadrature(&s.wave, &s.region1, &s.region2, tol)?;
            report.method = Some("quadrature".into());
        }
        Method::MonteCarlo => {
            let seed = seed.ok_or_else(|| CliError::Usage("--method montecarlo requires --seed".into()))?;
            let est = g_factor_montecarlo(&s.wave, &s.region1, &s.region2, samples, seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            report.g = est.estimate;
            report.stderr = Some(est.stderr);
            report.samples = Some(est.samples);
            report.seed = Some(seed);
            report.method = Some("montecarlo".into());
        }
    }
    report.runtime_ms = elapsed_ms(start);
    Ok(report)
}

pub fn chsh(path: &Path, tol: f64) -> Result<Report, CliError> {
    let start = Instant::now();
    let (file, s) = load_scenario(path)?;
    let g = s.g();
    let correlator = |a: &UnitVector3, b: &UnitVector3| g * e_spin(a, b);
    let chsh_at_settings = file.chsh_settings().map(|st| chsh_value(correlator, &st));
    let chsh_max = chsh_max_for(g, tol, Exec::default())?;
    let exceeds = chsh_at_settings.is_some_and(|v| v.abs() > 2.0) || chsh_max > 2.0;
    Ok(Report {
        g,
        chsh_at_settings,
        chsh_max: Some(chsh_max),
        exceeds_two: Some(exceeds),
        local: Some(is_local(g)),
        runtime_ms: elapsed_ms(start),
        ..Report::default()
    })
}

/// Sidecar path used when `--witness` is not given: `<scenario>.witness.json`.
pub fn default_witness_path(scenario: &Path) -> PathBuf {
    let mut name = scenario.file_stem().unwrap_or_default().to_os_string();
    name.push(".witness.json");
    scenario.with_file_name(name)
}

pub fn lhv(path: &Path, tol: f64, witness: Option<&Path>) -> Result<Report, CliError> {
    let start = Instant::now();
    let (file, s) = load_scenario(path)?;
    let (Some(sa), Some(sb)) = (file.settings_a.clone(), file.settings_b.clone()) else {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            message: "fields `settings_a` and `settings_b` are required for lhv".into(),
        });
    };
    if sa.is_empty() || sb.is_empty() {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            message: "fields `settings_a` and `settings_b` must be non-empty".into(),
        });
    }
    let g = s.g();
    let table = CorrelationTable::from_correlator(sa, sb, |a, b| g * e_spin(a, b))?;
    let membership = lhv_membership(&table, tol)?;
    let mut report = Report {
        g,
        local: Some(is_local(g)),
        lhv_feasible: Some(membership.feasible),
        lhv_residual: Some(membership.residual),
        ..Report::default()
    };
    if let Some(model) = &membership.model {
        let out = witness.map_or_else(|| default_witness_path(path), Path::to_path_buf);
        let entries: Vec<WitnessEntry> = model
            .weights
            .iter()
            .zip(&model.strategies)
            .map(|(&weight, st)| WitnessEntry {
                signs_a: st.signs_a.clone(),
                signs_b: st.signs_b.clone(),
                weight,
            })
            .collect();
        let text = serde_json::to_string_pretty(&entries).expect("witness serializes");
        fs::write(&out, text + "\n").map_err(|source| CliError::Write { path: out.clone(), source })?;
        report.witness = Some(out.display().to_string());
    }
    report.runtime_ms = elapsed_ms(start);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub value: f64,
    pub g: f64,
    pub chsh_max: f64,
    pub local: bool,
}

fn scan_scenario(file: &ScenarioFile, base: &Scenario, param: ScanParam, x: f64) -> Result<Scenario, CliError> {
    let m = file.inverse_width;
    let mut s = *base;
    match param {
        ScanParam::HalfWidth => {
            s.region1 = s.wave.packet1.centered_box(x / m)?;
            s.region2 = s.wave.packet2.centered_box(x / m)?;
        }
        ScanParam::Separation => {
            let mean1 = s.wave.packet1.mean();
            let target = [mean1[0] + x / m, mean1[1], mean1[2]];
            let old = s.wave.packet2.mean();
            let shift = [0, 1, 2].map(|i| target[i] - old[i]);
            s.wave.packet2 = s.wave.packet2.translated(shift);
            s.region2 = s.region2.translate(shift);
        }
    }
    Ok(s)
}

/// Evaluate the grid. Cells run in parallel; rows come back in grid order.
pub fn scan_rows(path: &Path, param: ScanParam, from: f64, to: f64, steps: usize) -> Result<Vec<ScanRow>, CliError> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    if from.partial_cmp(&to) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Usage(format!("--from {from} must be below --to {to}")));
    }
    if param == ScanParam::HalfWidth && from <= 0.0 {
        return Err(CliError::Usage("half_width scan needs --from > 0".into()));
    }
    let (file, base) = load_scenario(path)?;
    let grid: Vec<f64> = (0..steps)
        .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
        .collect();
    Exec::default()
        .map_slice(&grid, |&x| {
            let g = scan_scenario(&file, &base, param, x)?.g();
            Ok(ScanRow {
                value: x,
                g,
                chsh_max: chsh_max_for(g, DEFAULT_CHSH_TOL, Exec::Sequential)?,
                local: is_local(g),
            })
        })
        .into_iter()
        .collect()
}

/// First pair of consecutive rows whose locality flags differ.
pub fn crossing(rows: &[ScanRow]) -> Option<Bracket> {
    rows.windows(2)
        .find(|w| w[0].local != w[1].local)
        .map(|w| Bracket { lo: w[0].value, hi: w[1].value })
}

pub fn scan_csv(param: ScanParam, rows: &[ScanRow]) -> String {
    let mut out = format!("{},g,chsh_max,local\n", param.name());
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", sig12(r.value), sig12(r.g), sig12(r.chsh_max), r.local));
    }
    out
}

pub fn scan(path: &Path, param: ScanParam, from: f64, to: f64, steps: usize, out: &Path) -> Result<ScanSummary, CliError> {
    let start = Instant::now();
    let rows = scan_rows(path, param, from, to, steps)?;
    fs::write(out, scan_csv(param, &rows)).map_err(|source| CliError::Write { path: out.to_path_buf(), source })?;
    Ok(ScanSummary {
        param: param.name().into(),
        rows: rows.len(),
        out: out.display().to_string(),
        crossing: crossing(&rows),
        runtime_ms: elapsed_ms(start),
    })
}

/// End-to-end self-test of the Gaussian example. Returns the report and
/// whether every check held.
pub fn paper() -> Result<(PaperReport, bool), CliError> {
    let start = Instant::now();
    let m = 1.0;
    let s = Scenario::paper(m)?;
    let bound = verify_paper_bound(m)?;
    let g = bound.g;
    let g_quadrature = g_factor_quadrature(&s.wave, &s.region1, &s.region2, DEFAULT_QUAD_TOL)?;
    let chsh_max = chsh_max_for(g, DEFAULT_CHSH_TOL, Exec::default())?;
    let chsh_max_unlocalized = bellspace::tsirelson_maximum(DEFAULT_CHSH_TOL)?.value;

    let t = tsirelson_settings();
    let table = CorrelationTable::from_correlator(vec![t.a, t.a_prime], vec![t.b, t.b_prime], e_spin)?;
    let unlocalized = lhv_membership(&table, DEFAULT_LHV_TOL)?;
    let scaled = table.scaled(g)?;
    let localized = lhv_membership(&scaled, DEFAULT_LHV_TOL)?;
    let witness_ok = localized
        .model
        .as_ref()
        .is_some_and(|w| w.max_deviation(&scaled) <= DEFAULT_LHV_TOL);
    let threshold_half_width = criterion_threshold(m, 1e-8)?;
    let local = is_local(g);

    let checks = vec![
        ("g < (2/pi)^3", bound.holds),
        ("(2/pi)^3 < 1/sqrt(2)", bound.bound_below_threshold),
        ("g <= 1/sqrt(2)", local),
        ("closed form matches quadrature within 1e-10", (g - g_quadrature).abs() <= DEFAULT_QUAD_TOL),
        ("chsh_max = g * 2 sqrt(2)", (chsh_max - g * 2.0 * std::f64::consts::SQRT_2).abs() <= DEFAULT_CHSH_TOL),
        ("chsh_max <= 2", chsh_max <= 2.0),
        ("unlocalized chsh_max exceeds 2", chsh_max_unlocalized > 2.0),
        ("unlocalized singlet table is not LHV", !unlocalized.feasible),
        ("localized table is LHV with witness", localized.feasible && witness_ok),
    ];
    let all_hold = checks.iter().all(|c| c.1);
    let report = PaperReport {
        g,
        g_quadrature,
        bound: bound.bound,
        threshold: LOCALITY_THRESHOLD,
        chsh_max,
        chsh_max_unlocalized,
        verdict: if local { "local".into() } else { "possibly nonlocal".into() },
        lhv_feasible: localized.feasible,
        lhv_feasible_unlocalized: unlocalized.feasible,
        threshold_half_width,
        checks: checks
            .into_iter()
            .map(|(name, holds)| Check { name: name.into(), holds })
            .collect(),
        runtime_ms: elapsed_ms(start),
    };
    Ok((report, all_hold))
}
