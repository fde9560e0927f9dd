use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use harmlab::analytic::{parse_complex, CATALOG, DEFAULT_ORDER};
use harmlab::family::{family_member, member_series, FamilyParams};
use harmlab::harmonic::{classify_type, GridSpec, HarmonicMap};
use harmlab::report::ReportDocument;
use harmlab::suite::{emit_grid_csv, reconstruct_command, run_suite, SuiteConfig, DEFAULT_SEED};
use harmlab::{Cx, Error, Result};

#[derive(Parser)]
#[command(
    name = "harmlab",
    version,
    about = "Equal-Jacobian families of planar harmonic maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct MapArgs {
    /// Map as "<h-expr>;<g-expr>", or a catalog name.
    #[arg(long)]
    map: Option<String>,
    /// Catalog entry name.
    #[arg(long)]
    catalog: Option<String>,
}

impl MapArgs {
    fn spec(&self) -> String {
        self.map
            .clone()
            .or_else(|| self.catalog.clone())
            .unwrap_or_default()
    }
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = 0.7)]
    rmax: f64,
    #[arg(long, default_value_t = 21)]
    nr: usize,
    #[arg(long, default_value_t = 48)]
    na: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in maps.
    Catalog,
    /// Run the verification suite and write a JSON report.
    Check {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, env = "HARMLAB_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of random family parameters.
        #[arg(long, default_value_t = 20)]
        params: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol_analytic: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol_fd: f64,
        #[arg(long, default_value_t = 2e-2)]
        tol_blackbox: f64,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print Type1 or Type2.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Print the analytic parts of one family member.
    Family {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        /// Complex literal, e.g. 0.4+0.2*i.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        z0: String,
        #[arg(long = "C", default_value = "0", allow_hyphen_values = true)]
        c: String,
        #[arg(long, value_enum, default_value_t = Emit::Series)]
        emit: Emit,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Recover the dilatation from Q and fit it to the true one.
    Reconstruct {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        blackbox: bool,
        #[arg(long, default_value_t = 1e-3)]
        inner_step: f64,
        #[arg(long, default_value_t = 1e-2)]
        outer_step: f64,
    },
    /// Export map values on a polar grid as CSV.
    Grid {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Series,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn build_map(args: &MapArgs) -> Result<HarmonicMap> {
    HarmonicMap::from_spec(&args.spec())
        .map_err(|e| Error::Config(format!("map {:?}: {e}", args.spec())))
}

fn print_coeffs(label: &str, coeffs: &[Cx]) {
    for (k, c) in coeffs.iter().enumerate() {
        println!("{label} {k} {:e} {:e}", c.re, c.im);
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Catalog => {
            for e in CATALOG {
                println!(
                    "{:<14} h = {:<12} g = {:<28} {}",
                    e.name, e.h, e.g, e.description
                );
            }
            Ok(true)
        }
        Command::Check {
            map,
            grid,
            step,
            seed,
            params,
            tol_analytic,
            tol_fd,
            tol_blackbox,
            out,
        } => {
            let mut cfg = SuiteConfig::new(map.spec());
            cfg.r_max = grid.rmax;
            cfg.n_radial = grid.nr;
            cfg.n_angular = grid.na;
            cfg.step = step;
            cfg.seed = seed;
            cfg.params_count = params;
            cfg.tolerances.analytic = tol_analytic;
            cfg.tolerances.fd = tol_fd;
            cfg.tolerances.blackbox = tol_blackbox;
            let outcome = run_suite(&cfg)?;
            for line in outcome.report.summary_lines() {
                eprintln!("{line}");
            }
            let doc = ReportDocument::new(
                outcome.report,
                cfg.map.clone(),
                outcome.map_type.map(|t| t.to_string()),
                seed,
            );
            let json = doc.to_json()?;
            match out {
                Some(path) => fs::write(path, json + "\n")?,
                None => println!("{json}"),
            }
            Ok(doc.all_pass)
        }
        Command::Classify { map, grid } => {
            let f = build_map(&map)?;
            let grid = GridSpec::polar(grid.rmax, grid.nr, grid.na)?;
            println!("{}", classify_type(&f, &grid)?);
            Ok(true)
        }
        Command::Family {
            map,
            alpha,
            beta,
            z0,
            c,
            emit: Emit::Series,
            order,
        } => {
            let f = build_map(&map)?;
            let params = FamilyParams::new(alpha, beta, parse_complex(&z0)?, parse_complex(&c)?)?;
            let member = family_member(&f, &params)?;
            let (h, g) = member_series(&member, order)?;
            println!("# C {:e} {:e}", params.c.re, params.c.im);
            print_coeffs("h", h.coeffs());
            print_coeffs("g", g.coeffs());
            Ok(true)
        }
        Command::Reconstruct {
            map,
            blackbox,
            inner_step,
            outer_step,
        } => {
            let mut cfg = SuiteConfig::new(map.spec());
            cfg.blackbox = blackbox;
            cfg.inner_step = inner_step;
            cfg.outer_step = outer_step;
            let outcome = reconstruct_command(&cfg)?;
            let e = outcome.expected;
            println!(
                "expected  gamma={:.12} z0={:.12}{:+.12}i",
                e.gamma, e.z0.re, e.z0.im
            );
            if let Some(p) = outcome.recovered {
                println!(
                    "recovered gamma={:.12} z0={:.12}{:+.12}i",
                    p.gamma, p.z0.re, p.z0.im
                );
            }
            for line in outcome.report.summary_lines() {
                println!("{line}");
            }
            Ok(outcome.report.all_pass())
        }
        Command::Grid { map, grid, out } => {
            let f = build_map(&map)?;
            let grid = GridSpec::polar(grid.rmax, grid.nr, grid.na)?;
            emit_grid_csv(&f, &grid, out)?;
            Ok(true)
        }
    }
}
