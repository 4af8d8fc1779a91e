//! Series and analytic CSV files. Floats are written with `{:.16e}`, which
//! round-trips every `f64`; missing values are empty fields.

use std::fmt::Write as _;

use esdsim_core::{ExperimentResult, Target};

use crate::error::{CliError, Result};

pub const SERIES_HEADER: &str =
    "gamma_t,c_sys_mean,c_sys_stderr,c_env_mean,c_env_stderr,p010_sys,p010_env,mitigated";
pub const ANALYTIC_HEADER: &str = "gamma_t,c_sys,c_env";

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub gamma_t: f64,
    pub c_sys_mean: Option<f64>,
    pub c_sys_stderr: Option<f64>,
    pub c_env_mean: Option<f64>,
    pub c_env_stderr: Option<f64>,
    pub p010_sys: Option<f64>,
    pub p010_env: Option<f64>,
    pub mitigated: bool,
}

impl SeriesRow {
    pub fn from_result(result: &ExperimentResult) -> Vec<SeriesRow> {
        let grid = result
            .system
            .as_ref()
            .or(result.environment.as_ref())
            .map(|s| s.gammas())
            .unwrap_or_default();
        let pick = |target: Target, i: usize| result.series(target).map(|s| &s.points[i]);
        grid.iter()
            .enumerate()
            .map(|(i, &gamma_t)| {
                let sys = pick(Target::System, i);
                let env = pick(Target::Environment, i);
                SeriesRow {
                    gamma_t,
                    c_sys_mean: sys.map(|p| p.mean),
                    c_sys_stderr: sys.map(|p| p.stderr),
                    c_env_mean: env.map(|p| p.mean),
                    c_env_stderr: env.map(|p| p.stderr),
                    p010_sys: sys.map(|p| p.p010_mean),
                    p010_env: env.map(|p| p.p010_mean),
                    mitigated: result.mitigated,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticRow {
    pub gamma_t: f64,
    pub c_sys: f64,
    pub c_env: f64,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_series(rows: &[SeriesRow]) -> String {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(r.gamma_t),
            opt(r.c_sys_mean),
            opt(r.c_sys_stderr),
            opt(r.c_env_mean),
            opt(r.c_env_stderr),
            opt(r.p010_sys),
            opt(r.p010_env),
            u8::from(r.mitigated)
        );
    }
    out
}

pub fn write_analytic(rows: &[AnalyticRow]) -> String {
    let mut out = String::from(ANALYTIC_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{}", num(r.gamma_t), num(r.c_sys), num(r.c_env));
    }
    out
}

fn records<'a>(text: &'a str, header: &str, width: usize) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == header => {}
        Some((_, h)) => {
            return Err(CliError::Config(format!(
                "unexpected CSV header {h:?}, want {header:?}"
            )))
        }
        None => return Err(CliError::Config("empty CSV".into())),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            let fields: Vec<&str> = l.trim_end().split(',').collect();
            if fields.len() != width {
                return Err(CliError::Config(format!(
                    "line {}: expected {width} fields, found {}",
                    n + 1,
                    fields.len()
                )));
            }
            Ok((n + 1, fields))
        })
        .collect()
}

fn parse_num(line: usize, field: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| CliError::Config(format!("line {line}: bad number {field:?}")))
}

fn parse_opt(line: usize, field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_num(line, field).map(Some)
    }
}

pub fn parse_series(text: &str) -> Result<Vec<SeriesRow>> {
    records(text, SERIES_HEADER, 8)?
        .into_iter()
        .map(|(n, f)| {
            Ok(SeriesRow {
                gamma_t: parse_num(n, f[0])?,
                c_sys_mean: parse_opt(n, f[1])?,
                c_sys_stderr: parse_opt(n, f[2])?,
                c_env_mean: parse_opt(n, f[3])?,
                c_env_stderr: parse_opt(n, f[4])?,
                p010_sys: parse_opt(n, f[5])?,
                p010_env: parse_opt(n, f[6])?,
                mitigated: match f[7] {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(CliError::Config(format!(
                            "line {n}: bad mitigated flag {other:?}"
                        )))
                    }
                },
            })
        })
        .collect()
}

pub fn parse_analytic(text: &str) -> Result<Vec<AnalyticRow>> {
    records(text, ANALYTIC_HEADER, 3)?
        .into_iter()
        .map(|(n, f)| {
            Ok(AnalyticRow {
                gamma_t: parse_num(n, f[0])?,
                c_sys: parse_num(n, f[1])?,
                c_env: parse_num(n, f[2])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip() {
        let rows = vec![
            SeriesRow {
                gamma_t: 0.2,
                c_sys_mean: Some(1.0 / 3.0),
                c_sys_stderr: Some(1e-17),
                c_env_mean: None,
                c_env_stderr: None,
                p010_sys: Some(0.123_456_789_012_345_68),
                p010_env: None,
                mitigated: true,
            },
            SeriesRow {
                gamma_t: 3.0,
                c_sys_mean: Some(0.0),
                c_sys_stderr: Some(0.0),
                c_env_mean: Some(f64::MIN_POSITIVE),
                c_env_stderr: Some(2.5),
                p010_sys: Some(0.25),
                p010_env: Some(0.5),
                mitigated: false,
            },
        ];
        let text = write_series(&rows);
        assert!(text.starts_with(SERIES_HEADER));
        assert!(!text.contains('\r'));
        assert_eq!(parse_series(&text).unwrap(), rows);
    }

    #[test]
    fn analytic_round_trip() {
        let rows = vec![AnalyticRow {
            gamma_t: 0.1,
            c_sys: 0.7,
            c_env: 1e-300,
        }];
        assert_eq!(parse_analytic(&write_analytic(&rows)).unwrap(), rows);
    }

    #[test]
    fn malformed_rows_rejected() {
        assert!(parse_series("nope\n").is_err());
        let bad = format!("{SERIES_HEADER}\n0.1,0.2\n");
        assert!(parse_series(&bad).is_err());
        let bad = format!("{SERIES_HEADER}\n0.1,x,,,,,,0\n");
        assert!(parse_series(&bad).is_err());
    }
}
