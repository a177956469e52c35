//! Command-line front end: exact distribution tables, seeded simulation with
//! comparison against the exact law, rate-function tables, and the
//! cross-validation suites.
//!
//! Output is deterministic given the full flag set (seed included): JSON uses
//! sorted keys and CSV rows are emitted in index order, so identical
//! invocations are byte-identical.
//!
//! Exit codes: 0 success, 1 validation-suite failure, 2 usage or domain
//! error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use convex_chain::asymptotics::{clt_predictors, legendre_fenchel, mu, mu_prime, rate_i, rate_i1, rate_i2};
use convex_chain::exactdist::{
    distribution, distribution_f64, eval_g, exact_cumulants, ratio_to_f64, tail_dp_snapshots,
};
use convex_chain::geometry::{compare_to_exact, monte_carlo, SimulationConfig};
use convex_chain::validate;

/// Largest n accepted in exact mode (row construction is quadratic with
/// big-integer entries; beyond this it stops being interactive).
const EXACT_N_CAP: usize = 2_000;
/// Largest n accepted in float mode.
const FLOAT_N_CAP: usize = 100_000;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "convex-chain", version, about = "Vertex-count statistics of random convex chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Distribution of the vertex count for a fixed n, with moments and cumulants
    Exact {
        /// Number of sample points
        #[arg(long)]
        n: usize,
        /// Exact rationals or double precision
        #[arg(long, value_enum, default_value_t)]
        mode: Mode,
        /// Cumulant order reported in the summary (1..=12)
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Emit only rows with k <= k-max
        #[arg(long)]
        k_max: Option<usize>,
        /// Also evaluate the generating polynomial at this point
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write the output here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded Monte Carlo histogram with Gaussian overlay and exact comparison
    Simulate {
        /// Points per trial
        #[arg(long)]
        n: usize,
        /// Number of trials
        #[arg(long)]
        reps: u64,
        /// Run seed; identical seeds give byte-identical output
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (does not affect the results)
        #[arg(long, default_value_t = 4)]
        threads: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Large-deviation rate function table with the numeric transform oracle
    Rate {
        /// Explicit evaluation points (repeatable)
        #[arg(long, allow_negative_numbers = true)]
        x: Vec<f64>,
        /// Single evaluation point written as a log-scale ratio c
        #[arg(long, allow_negative_numbers = true)]
        c: Option<f64>,
        /// Grid start when no explicit points are given
        #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
        x_min: f64,
        /// Grid end
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        x_max: f64,
        /// Grid size
        #[arg(long, default_value_t = 60)]
        points: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named validation suite and report per-check diagnostics
    Validate {
        /// One of: oracle, exact, analytic, transfer, cumulants, clt, rate,
        /// probab, saddle, montecarlo, all
        suite: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn json_or_inf(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!("inf")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write stdout: {e}")),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_exact(
    n: usize,
    mode: Mode,
    order: usize,
    k_max: Option<usize>,
    z: Option<f64>,
    format: Format,
    out: Option<PathBuf>,
) -> Result<u8, String> {
    if !(1..=12).contains(&order) {
        return Err(format!("--order must be in 1..=12, got {order}"));
    }
    let cap = if mode == Mode::Exact { EXACT_N_CAP } else { FLOAT_N_CAP };
    if n > cap {
        return Err(format!(
            "n = {n} beyond the {} cap {cap}",
            if mode == Mode::Exact { "exact-mode" } else { "float-mode" }
        ));
    }
    let cumulants: Vec<f64> = if n == 0 {
        // f0 is identically 2
        let mut c = vec![0.0; order];
        c[0] = 2.0;
        c
    } else {
        exact_cumulants(n as u64, order).map_err(|e| e.to_string())?.values
    };
    let g_at_z = match z {
        Some(zv) => Some((zv, eval_g(n as u64, zv).map_err(|e| e.to_string())?)),
        None => None,
    };

    let (rows_json, rows_csv, summary) = match mode {
        Mode::Exact => {
            let d = distribution(n);
            let limit = k_max.map_or(n, |k| k.min(n));
            let rows_json: Vec<Value> = (0..=limit)
                .map(|k| {
                    json!({
                        "k": k,
                        "p": d.prob(k).to_string(),
                        "p_float": ratio_to_f64(d.prob(k)),
                    })
                })
                .collect();
            let rows_csv: Vec<String> =
                std::iter::once(csv_line(&["k".into(), "p".into(), "p_float".into()]))
                    .chain((0..=limit).map(|k| {
                        csv_line(&[
                            k.to_string(),
                            d.prob(k).to_string(),
                            fmt_f64(ratio_to_f64(d.prob(k))),
                        ])
                    }))
                    .collect();
            let mean = d.mean();
            let var = d.variance();
            let mut summary = json!({
                "mean": mean.to_string(),
                "mean_float": ratio_to_f64(&mean),
                "variance": var.to_string(),
                "variance_float": ratio_to_f64(&var),
                "cumulant_order": order,
                "cumulants": cumulants,
            });
            if let Some((zv, gv)) = g_at_z {
                summary["g_at_z"] = json!({"z": zv, "value": gv});
            }
            (rows_json, rows_csv, summary)
        }
        Mode::Float => {
            let row = distribution_f64(n);
            let limit = k_max.map_or(n, |k| k.min(n));
            let rows_json: Vec<Value> =
                (0..=limit).map(|k| json!({"k": k, "p_float": row[k]})).collect();
            let rows_csv: Vec<String> =
                std::iter::once(csv_line(&["k".into(), "p_float".into()]))
                    .chain((0..=limit).map(|k| csv_line(&[k.to_string(), fmt_f64(row[k])])))
                    .collect();
            let stats = convex_chain::exactdist::pmf_stats(&row);
            let mut summary = json!({
                "mean_float": stats.mean,
                "variance_float": stats.variance,
                "cumulant_order": order,
                "cumulants": cumulants,
            });
            if let Some((zv, gv)) = g_at_z {
                summary["g_at_z"] = json!({"z": zv, "value": gv});
            }
            (rows_json, rows_csv, summary)
        }
    };

    let text = match format {
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "exact",
                "mode": if mode == Mode::Exact { "exact" } else { "float" },
                "n": n,
                "rows": rows_json,
                "summary": summary,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => format!("{}\n", rows_csv.join("\n")),
    };
    emit(&out, &text)?;
    Ok(0)
}

fn cmd_simulate(
    n: usize,
    reps: u64,
    seed: u64,
    threads: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<u8, String> {
    if reps == 0 {
        return Err("--reps must be at least 1".into());
    }
    let emp = monte_carlo(&SimulationConfig { n, reps, seed, threads });
    let (mu_n, sigma_n) = if n >= 2 { clt_predictors(n as u64) } else { (2.0 + n as f64, 0.0) };
    let gaussian = |v: f64| -> f64 {
        if sigma_n > 0.0 {
            let d = (v - mu_n) / sigma_n;
            (-0.5 * d * d).exp() / (sigma_n * (2.0 * std::f64::consts::PI).sqrt())
        } else {
            0.0
        }
    };
    // exact comparison row when the float DP is practical
    let exact_row: Option<Vec<f64>> = if n > FLOAT_N_CAP {
        None
    } else if n >= 2 {
        let k_need = emp.max_f0().map_or(2, |v| (v as usize - 2) + 40).min(n);
        let dp = tail_dp_snapshots(n, k_need.max(2), &[n]);
        Some(dp.row(n).to_vec())
    } else {
        let mut row = vec![0.0; n + 1];
        row[n] = 1.0; // f0 is deterministic for n <= 1
        Some(row)
    };
    let comparison = exact_row
        .as_ref()
        .map(|row| compare_to_exact(&emp, row).map_err(|e| e.to_string()))
        .transpose()?;

    let histogram: Vec<(u64, u64, f64)> =
        emp.counts().iter().map(|(&v, &c)| (v, c, c as f64 / reps as f64)).collect();

    let text = match format {
        Format::Json => {
            let hist_json: Vec<Value> = histogram
                .iter()
                .map(|&(v, c, p)| json!({"f0": v, "count": c, "pmf": p}))
                .collect();
            let overlay: Vec<Value> = histogram
                .iter()
                .map(|&(v, _, p)| {
                    let exact =
                        exact_row.as_ref().and_then(|row| row.get(v as usize - 2)).copied();
                    json!({
                        "f0": v,
                        "empirical": p,
                        "gaussian": gaussian(v as f64),
                        "exact": exact.map_or(Value::Null, |e| json!(e)),
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "simulate",
                "n": n,
                "reps": reps,
                "seed": seed,
                "threads": threads,
                "gaussian": {"mu": mu_n, "sigma": sigma_n},
                "histogram": hist_json,
                "overlay": overlay,
                "summary": {"mean": emp.mean(), "variance": emp.variance()},
                "comparison": comparison.map_or(Value::Null, |c| json!({
                    "tv": c.tv, "chi_square": c.chi_square, "mean_z": c.mean_z,
                })),
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => {
            let mut lines = vec![csv_line(&[
                "f0".into(),
                "count".into(),
                "empirical_pmf".into(),
                "gaussian_density".into(),
                "exact_pmf".into(),
            ])];
            for &(v, c, p) in &histogram {
                let exact = exact_row
                    .as_ref()
                    .and_then(|row| row.get(v as usize - 2))
                    .map_or(String::new(), |e| fmt_f64(*e));
                lines.push(csv_line(&[
                    v.to_string(),
                    c.to_string(),
                    fmt_f64(p),
                    fmt_f64(gaussian(v as f64)),
                    exact,
                ]));
            }
            format!("{}\n", lines.join("\n"))
        }
    };
    emit(&out, &text)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_rate(
    xs: Vec<f64>,
    c: Option<f64>,
    x_min: f64,
    x_max: f64,
    points: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<u8, String> {
    let grid: Vec<f64> = if !xs.is_empty() {
        xs
    } else if let Some(cv) = c {
        vec![cv]
    } else {
        if points < 2 || x_max <= x_min {
            return Err("rate grid needs points >= 2 and x-max > x-min".into());
        }
        (0..points)
            .map(|i| x_min + (x_max - x_min) * i as f64 / (points - 1) as f64)
            .collect()
    };
    let rows: Vec<(f64, f64, f64, f64, f64)> = grid
        .iter()
        .map(|&x| {
            let lf = if x < 0.0 {
                f64::INFINITY
            } else {
                legendre_fenchel(mu_prime, mu, x).unwrap_or(f64::INFINITY)
            };
            (x, rate_i(x), rate_i1(x), rate_i2(x), lf)
        })
        .collect();
    let text = match format {
        Format::Json => {
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|&(x, i, i1, i2, lf)| {
                    json!({
                        "x": x,
                        "rate": json_or_inf(i),
                        "i1": json_or_inf(i1),
                        "i2": json_or_inf(i2),
                        "lf": json_or_inf(lf),
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "rate",
                "rows": rows_json,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => {
            let mut lines =
                vec![csv_line(&["x".into(), "I".into(), "I1".into(), "I2".into(), "LF".into()])];
            for &(x, i, i1, i2, lf) in &rows {
                lines.push(csv_line(&[
                    fmt_f64(x),
                    fmt_f64(i),
                    fmt_f64(i1),
                    fmt_f64(i2),
                    fmt_f64(lf),
                ]));
            }
            format!("{}\n", lines.join("\n"))
        }
    };
    emit(&out, &text)?;
    Ok(0)
}

fn cmd_validate(suite: String, format: Format, out: Option<PathBuf>) -> Result<u8, String> {
    let Some(results) = validate::run_suite(&suite) else {
        return Err(format!(
            "unknown suite '{suite}'; available: {}",
            validate::suite_names().join(", ")
        ));
    };
    let all_passed = results.iter().all(|r| r.passed);
    let text = match format {
        Format::Json => {
            let checks: Vec<Value> = results
                .iter()
                .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail}))
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "validate",
                "suite": suite,
                "checks": checks,
                "passed": all_passed,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => {
            // human-readable report; one line per check
            let mut lines: Vec<String> = results
                .iter()
                .map(|r| {
                    format!("{} {} - {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail)
                })
                .collect();
            lines.push(format!(
                "{}: {}/{} checks passed",
                suite,
                results.iter().filter(|r| r.passed).count(),
                results.len()
            ));
            format!("{}\n", lines.join("\n"))
        }
    };
    emit(&out, &text)?;
    Ok(if all_passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exact { n, mode, order, k_max, z, format, out } => {
            cmd_exact(n, mode, order, k_max, z, format, out)
        }
        Command::Simulate { n, reps, seed, threads, format, out } => {
            cmd_simulate(n, reps, seed, threads, format, out)
        }
        Command::Rate { x, c, x_min, x_max, points, format, out } => {
            cmd_rate(x, c, x_min, x_max, points, format, out)
        }
        Command::Validate { suite, format, out } => cmd_validate(suite, format, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
