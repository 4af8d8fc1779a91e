use std::io::Write;
use std::path::{Path, PathBuf};

use esdsim_core::channels::DampingParams;
use esdsim_core::entanglement::{environment_concurrence, esb_time, esd_time, system_concurrence};
use esdsim_core::gates::{
    random_routed_circuit, transpile_with_rule, unitary_equal_up_to_phase, CxRule, OneQubit, Side,
};
use esdsim_core::protocol::{ancilla_population_diagnostic, derived_seeds, parallel_sets_run};
use esdsim_core::{InitialState, NoiseModel, Shots, Target};
use serde::Serialize;
use serde_json::Value;

use crate::config::{parse_alpha, GridSpec, ResolvedSet, RunConfigFile, ShotsSpec};
use crate::csv::{
    parse_analytic, parse_series, write_analytic, write_series, AnalyticRow, SeriesRow,
};
use crate::error::{CliError, Result};
use crate::svg::{render, Panel};

pub const MANIFEST_NAME: &str = "manifest.json";

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    std::fs::write(path, contents).map_err(CliError::io(path))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(CliError::io(path))
}

fn time_value(t: Option<f64>) -> Value {
    t.map_or_else(|| Value::from("none"), Value::from)
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("manifest is plain data");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SeedEntry {
    target: &'static str,
    grid_index: usize,
    repetition: usize,
    sampling: u64,
    calibration: u64,
}

#[derive(Serialize)]
struct SetManifest {
    index: usize,
    label: String,
    alpha: f64,
    lambda: f64,
    qubits: [usize; 5],
    noise: Option<NoiseModel>,
    csv: String,
    esd_time: Value,
    esb_time: Value,
    grid: Vec<f64>,
    seeds: Vec<SeedEntry>,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    version: &'static str,
    config: &'a RunConfigFile,
    sets: Vec<SetManifest>,
}

fn target_name(t: Target) -> &'static str {
    match t {
        Target::System => "system",
        Target::Environment => "environment",
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub sets: Option<usize>,
    pub no_mitigation: bool,
}

pub fn csv_name(index: usize) -> String {
    format!("set{}.csv", index + 1)
}

/// Runs every configured set and writes `set<i>.csv` plus the manifest into
/// `out_dir`. Returns the CSV paths.
pub fn cmd_run(config_path: &Path, out_dir: &Path, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let mut file = RunConfigFile::load(config_path)?;
    if let Some(seed) = opts.seed {
        file.seed = seed;
    }
    if opts.no_mitigation {
        file.mitigation = false;
    }
    if let Some(n) = opts.sets {
        let available = file.sets.len().max(1);
        if n == 0 || n > available {
            return Err(CliError::Config(format!(
                "--sets {n}: the config defines {available} set(s)"
            )));
        }
        file.sets.truncate(n);
    }
    let sets: Vec<ResolvedSet> = file.resolve()?;
    let configs: Vec<_> = sets.iter().map(|s| s.config.clone()).collect();
    let results = parallel_sets_run(&configs)?;

    std::fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let mut paths = Vec::new();
    let mut manifests = Vec::new();
    for (i, (set, result)) in sets.iter().zip(&results).enumerate() {
        let name = csv_name(i);
        let path = out_dir.join(&name);
        write_file(&path, &write_series(&SeriesRow::from_result(result)))?;
        paths.push(path);

        let cfg = &set.config;
        manifests.push(SetManifest {
            index: i + 1,
            label: set.label.clone(),
            alpha: cfg.init.alpha(),
            lambda: cfg.init.lambda,
            qubits: cfg.layout.physical_qubits(),
            noise: cfg.noise.clone(),
            csv: name,
            esd_time: time_value(esd_time(&cfg.init)),
            esb_time: time_value(esb_time(&cfg.init)),
            grid: cfg.grid.clone(),
            seeds: derived_seeds(cfg)
                .into_iter()
                .map(|d| SeedEntry {
                    target: target_name(d.target),
                    grid_index: d.grid_index,
                    repetition: d.repetition,
                    sampling: d.sampling,
                    calibration: d.calibration,
                })
                .collect(),
        });
    }
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        config: &file,
        sets: manifests,
    };
    write_file(&out_dir.join(MANIFEST_NAME), &json(&manifest))?;
    Ok(paths)
}

/// `foo.csv` -> `foo.manifest.json`.
pub fn analytic_manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

#[derive(Serialize)]
struct AnalyticManifest {
    alpha_spec: String,
    alpha: f64,
    lambda: f64,
    grid: GridSpec,
    esd_time: Value,
    esb_time: Value,
}

pub fn analytic_rows(init: &InitialState, grid: &[f64]) -> Result<Vec<AnalyticRow>> {
    grid.iter()
        .map(|&gamma_t| {
            let p = DampingParams::new(gamma_t)?;
            Ok(AnalyticRow {
                gamma_t,
                c_sys: system_concurrence(init, &p),
                c_env: environment_concurrence(init, &p),
            })
        })
        .collect()
}

/// Closed-form curves for one `alpha`, with ESD/ESB times in the manifest.
pub fn cmd_analytic(alpha_spec: &str, grid: GridSpec, out: &Path) -> Result<()> {
    let alpha = parse_alpha(alpha_spec)?;
    let init = InitialState::from_alpha(alpha)?;
    let rows = analytic_rows(&init, &grid.values()?)?;
    write_file(out, &write_analytic(&rows))?;
    let manifest = AnalyticManifest {
        alpha_spec: alpha_spec.to_string(),
        alpha,
        lambda: init.lambda,
        grid,
        esd_time: time_value(esd_time(&init)),
        esb_time: time_value(esb_time(&init)),
    };
    write_file(&analytic_manifest_path(out), &json(&manifest))
}

/// One panel per series CSV; the i-th analytic CSV, if given, is drawn in
/// the i-th panel.
pub fn cmd_plot(csvs: &[PathBuf], analytic: &[PathBuf], out: &Path) -> Result<()> {
    if csvs.is_empty() {
        return Err(CliError::Config(
            "plot needs at least one series CSV".into(),
        ));
    }
    if analytic.len() > csvs.len() {
        return Err(CliError::Config(
            "more analytic CSVs than series CSVs".into(),
        ));
    }
    let panels = csvs
        .iter()
        .enumerate()
        .map(|(i, path)| {
            let named = |p: &Path, e: CliError| match e {
                CliError::Config(msg) => CliError::Config(format!("{}: {msg}", p.display())),
                other => other,
            };
            let series = parse_series(&read_file(path)?).map_err(|e| named(path, e))?;
            let analytic = analytic
                .get(i)
                .map(|p| parse_analytic(&read_file(p)?).map_err(|e| named(p, e)))
                .transpose()?;
            let title = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(Panel {
                title,
                series,
                analytic,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_file(out, &render(&panels))
}

/// `λ/π` values 0.05, 0.10, ..., 0.95.
pub fn diagnostic_grid() -> Vec<f64> {
    (1..=19).map(|k| k as f64 * 0.05).collect()
}

#[derive(Debug, Clone, Default)]
pub struct DiagnoseOptions {
    pub config: Option<PathBuf>,
    pub noiseless: bool,
    pub shots: Option<ShotsSpec>,
    pub seed: Option<u64>,
}

/// Ancilla `P(0)` after preparation. The noise model comes from the config's
/// `[noise]` block, or the default model when no config is given.
pub fn cmd_diagnose(opts: &DiagnoseOptions, out: &Path) -> Result<Vec<(f64, f64)>> {
    let (noise, seed) = match &opts.config {
        Some(path) => {
            let file = RunConfigFile::load(path)?;
            (file.noise, file.seed)
        }
        None => (Some(NoiseModel::default()), 0),
    };
    let noise = if opts.noiseless { None } else { noise };
    if let Some(n) = &noise {
        n.validate()?;
    }
    let shots = match &opts.shots {
        None => Shots::Exact,
        Some(ShotsSpec::Count(0)) => {
            return Err(CliError::Config("shots must be at least 1".into()))
        }
        Some(ShotsSpec::Count(n)) => Shots::Count(*n),
        Some(ShotsSpec::Mode(m)) if m == "exact" => Shots::Exact,
        Some(ShotsSpec::Mode(m)) => return Err(CliError::Config(format!("bad shots {m:?}"))),
    };
    let lambdas: Vec<f64> = diagnostic_grid()
        .iter()
        .map(|x| x * std::f64::consts::PI)
        .collect();
    let rows =
        ancilla_population_diagnostic(&lambdas, noise.as_ref(), shots, opts.seed.unwrap_or(seed))?;
    let mut text = String::from("lambda_over_pi,p0\n");
    for (x, p0) in &rows {
        text.push_str(&format!("{x:.16e},{p0:.16e}\n"));
    }
    write_file(out, &text)?;
    Ok(rows)
}

/// A dressing rule missing its `RZ`, used to check that failures are caught.
pub fn corrupted_rule() -> CxRule {
    CxRule {
        before: vec![(Side::Control, OneQubit::X)],
        after: vec![(Side::Target, OneQubit::SqrtX)],
    }
}

pub const TRANSPILE_QUBITS: usize = 5;
pub const TRANSPILE_MAX_GATES: usize = 30;

/// Transpiles `n` seeded random circuits (seeds `seed`, `seed + 1`, ...) and
/// compares unitaries up to global phase, printing one row per circuit.
pub fn cmd_transpile_check(seed: u64, n: usize, rule: &CxRule, out: &mut dyn Write) -> Result<()> {
    if n == 0 {
        return Err(CliError::Config(
            "transpile-check needs at least one circuit".into(),
        ));
    }
    let io = |e| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    writeln!(
        out,
        "{:>5} {:>20} {:>6} {:>6}  result",
        "#", "seed", "gates", "basis"
    )
    .map_err(io)?;
    let mut failed = Vec::new();
    for i in 0..n {
        let s = seed.wrapping_add(i as u64);
        let c = random_routed_circuit(s, TRANSPILE_QUBITS, TRANSPILE_MAX_GATES)?;
        let t = transpile_with_rule(&c, rule)?;
        let ok = unitary_equal_up_to_phase(&c.unitary(), &t.unitary())?;
        writeln!(
            out,
            "{:>5} {:>20} {:>6} {:>6}  {}",
            i,
            s,
            c.len(),
            t.len(),
            if ok { "pass" } else { "FAIL" }
        )
        .map_err(io)?;
        if !ok {
            failed.push(s);
        }
    }
    writeln!(out, "{} of {n} circuits passed", n - failed.len()).map_err(io)?;
    if failed.is_empty() {
        Ok(())
    } else {
        let seeds: Vec<String> = failed.iter().map(u64::to_string).collect();
        Err(CliError::Verification(format!(
            "transpiled unitary differs for circuit seed(s) {}",
            seeds.join(", ")
        )))
    }
}
