//! Command-line front end.
//!
//! Three subcommands: `simulate` runs one solver and writes `fields.csv` and
//! `diagnostics.csv`, `verify` runs a named identity suite, `compare` runs
//! several solvers on one configuration and writes `compare.csv`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 runtime abort.

pub mod config;
pub mod report;
pub mod suites;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::dynamics::{simulate, SolverKind, TrajectoryRecord};
use config::{ConfigError, RunConfigFile};
use report::VerificationReport;
use suites::{DEFAULT_GRIDS, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Parser)]
#[command(
    name = "semiflow",
    about = "1-D barotropic compressible flow via four equivalent solver routes",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver and write fields.csv and diagnostics.csv.
    Simulate {
        /// JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Override the solver named in the configuration.
        #[arg(long)]
        solver: Option<String>,
        /// Output directory for the CSV files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a verification suite and print its report.
    Verify {
        /// One of: algebra, duality, lagrangian, bracket, convergence, constraints.
        #[arg(long)]
        suite: String,
        /// Comma-separated grid sizes for convergence-style suites.
        #[arg(long)]
        grids: Option<String>,
        /// Report format: text or json.
        #[arg(long, default_value = "text")]
        format: String,
        /// Seed for the randomized smooth test fields.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run several solvers on one configuration and compare them.
    Compare {
        /// JSON run configuration (its solver entry is ignored).
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated solver list, at least two entries.
        #[arg(long)]
        solvers: String,
        /// Pass/fail bound on the final-time L∞ distances.
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
        /// Output directory for compare.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Parses arguments and runs the requested command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Simulate {
            config,
            solver,
            out,
        } => cmd_simulate(&config, solver.as_deref(), &out),
        Command::Verify {
            suite,
            grids,
            format,
            seed,
        } => cmd_verify(&suite, grids.as_deref(), &format, seed),
        Command::Compare {
            config,
            solvers,
            threshold,
            out,
        } => cmd_compare(&config, &solvers, threshold, &out),
    }
}

/// 17 significant digits, enough to reproduce the f64 bit pattern.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fail_config(e: &ConfigError) -> i32 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}

fn cmd_simulate(config_path: &Path, solver: Option<&str>, out: &Path) -> i32 {
    let file = match RunConfigFile::load(config_path) {
        Ok(f) => f,
        Err(e) => return fail_config(&e),
    };
    let config = match file.build(solver) {
        Ok(c) => c,
        Err(e) => return fail_config(&e),
    };

    // Pre-shock discipline: warn when the initial compression could steepen
    // into a shock within the run.
    if let Ok((_, u0)) = config.ic.build(config.grid) {
        let steepness = u0.derivative().max_abs() * config.t_end;
        if steepness > 0.5 {
            eprintln!(
                "warning: max|u_x|·t_end = {steepness:.2} approaches 1; \
                 the smooth-regime assumptions may fail before t_end"
            );
        }
    }

    let record = match simulate(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("solver aborted: {e}");
            return EXIT_RUNTIME;
        }
    };

    if let Err(e) = write_outputs(&record, config.grid, out) {
        eprintln!("error: cannot write outputs: {e}");
        return EXIT_CONFIG;
    }
    println!(
        "wrote {} snapshots to {}",
        record.times.len(),
        out.display()
    );
    EXIT_OK
}

fn write_outputs(
    record: &TrajectoryRecord,
    grid: crate::grid::Grid,
    out: &Path,
) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;

    let mut fields = BufWriter::new(File::create(out.join("fields.csv"))?);
    writeln!(fields, "t,x,rho,u,m")?;
    for (snap, &t) in record.states.iter().zip(&record.times) {
        for i in 0..grid.n_points() {
            writeln!(
                fields,
                "{},{},{},{},{}",
                fmt(t),
                fmt(grid.node(i)),
                fmt(snap.rho.values()[i]),
                fmt(snap.u.values()[i]),
                fmt(snap.m.values()[i]),
            )?;
        }
    }
    fields.flush()?;

    let mut diag = BufWriter::new(File::create(out.join("diagnostics.csv"))?);
    writeln!(diag, "t,mass,momentum,energy")?;
    for (d, &t) in record.diagnostics.iter().zip(&record.times) {
        writeln!(
            diag,
            "{},{},{},{}",
            fmt(t),
            fmt(d.mass),
            fmt(d.momentum),
            fmt(d.energy)
        )?;
    }
    diag.flush()
}

fn cmd_verify(suite: &str, grids: Option<&str>, format: &str, seed: u64) -> i32 {
    let grids: Vec<usize> = match grids {
        None => DEFAULT_GRIDS.to_vec(),
        Some(list) => {
            let parsed: Result<Vec<usize>, _> =
                list.split(',').map(|s| s.trim().parse::<usize>()).collect();
            match parsed {
                Ok(v) if !v.is_empty() && v.iter().all(|&n| n >= 8 && n % 2 == 0) => v,
                _ => {
                    eprintln!("error: --grids must be a comma list of even sizes >= 8, got '{list}'");
                    return EXIT_CONFIG;
                }
            }
        }
    };

    let report: VerificationReport = match suite {
        "algebra" => suites::algebra_suite(*grids.last().unwrap(), seed),
        "duality" => suites::duality_suite(&grids, seed),
        "lagrangian" => suites::lagrangian_suite(*grids.last().unwrap(), seed),
        "bracket" => suites::bracket_suite(seed),
        "convergence" => suites::convergence_suite(seed),
        "constraints" => suites::constraints_suite((*grids.last().unwrap()).max(512), seed),
        other => {
            eprintln!(
                "error: unknown suite '{other}' \
                 (expected algebra, duality, lagrangian, bracket, convergence, or constraints)"
            );
            return EXIT_CONFIG;
        }
    };

    match format {
        "json" => println!("{}", report.to_json()),
        "text" => print!("{}", report.render_text()),
        other => {
            eprintln!("error: unknown format '{other}' (expected text or json)");
            return EXIT_CONFIG;
        }
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_RUNTIME
    }
}

fn cmd_compare(config_path: &Path, solvers: &str, threshold: f64, out: &Path) -> i32 {
    let file = match RunConfigFile::load(config_path) {
        Ok(f) => f,
        Err(e) => return fail_config(&e),
    };
    let names: Vec<&str> = solvers.split(',').map(str::trim).collect();
    if names.len() < 2 {
        eprintln!("error: --solvers needs at least two comma-separated entries");
        return EXIT_CONFIG;
    }
    let mut kinds: Vec<SolverKind> = Vec::new();
    for name in &names {
        match SolverKind::parse(name) {
            Some(k) => kinds.push(k),
            None => {
                return fail_config(&ConfigError(format!("unknown solver '{name}'")));
            }
        }
    }

    let mut records = Vec::new();
    for &kind in &kinds {
        let config = match file.build(Some(kind.name())) {
            Ok(c) => c,
            Err(e) => return fail_config(&e),
        };
        match simulate(&config) {
            Ok(r) => records.push(r),
            Err(e) => {
                eprintln!("{kind} aborted: {e}");
                return EXIT_RUNTIME;
            }
        }
    }

    if let Err(e) = std::fs::create_dir_all(out) {
        eprintln!("error: cannot create {}: {e}", out.display());
        return EXIT_CONFIG;
    }
    let path = out.join("compare.csv");
    let mut csv = match File::create(&path).map(BufWriter::new) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_CONFIG;
        }
    };

    let mut all_ok = true;
    let times = &records[0].times;
    writeln!(csv, "t,solver_a,solver_b,linf_rho,l2_rho,linf_u,l2_u").expect("write compare.csv");
    for (i, a) in kinds.iter().enumerate() {
        for (j, b) in kinds.iter().enumerate().skip(i + 1) {
            let mut final_linf_u = 0.0;
            let mut final_linf_rho = 0.0;
            for (k, &t) in times.iter().enumerate() {
                let sa = &records[i].states[k];
                let sb = &records[j].states[k];
                let linf_rho = sa.rho.linf_distance(&sb.rho);
                let l2_rho = sa.rho.l2_distance(&sb.rho);
                let linf_u = sa.u.linf_distance(&sb.u);
                let l2_u = sa.u.l2_distance(&sb.u);
                writeln!(
                    csv,
                    "{},{a},{b},{},{},{},{}",
                    fmt(t),
                    fmt(linf_rho),
                    fmt(l2_rho),
                    fmt(linf_u),
                    fmt(l2_u)
                )
                .expect("write compare.csv");
                final_linf_u = linf_u;
                final_linf_rho = linf_rho;
            }
            let pass = final_linf_u <= threshold && final_linf_rho <= threshold;
            all_ok &= pass;
            println!(
                "{a} vs {b}: final Linf(u) = {final_linf_u:.3e}, final Linf(rho) = {final_linf_rho:.3e} \
                 [{}]",
                if pass { "PASS" } else { "FAIL" }
            );
        }
    }
    csv.flush().expect("flush compare.csv");

    if all_ok {
        EXIT_OK
    } else {
        EXIT_RUNTIME
    }
}
