use std::path::{Path, PathBuf};
use std::process;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hyperwind::catalogue::{self, CatalogueParams};
use hyperwind::config::parse_simulate;
use hyperwind::manifest::{ensure_dir, RunManifest};
use hyperwind::plot::{write_plot, PlotSpec};
use hyperwind::scan::{parse_scan, run_scan, ScanSpec};
use hyperwind::simulate::{abort_message, simulate, write_outputs};
use hyperwind::{read_json, thread_count, CliError, ExitCode};

#[derive(Parser)]
#[command(name = "hyperwind", version, about = "Winding solutions of the hyperbolic Heisenberg and sigma models")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads; falls back to HYPERWIND_THREADS.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate a closed-form family.
    Catalogue {
        family: String,
        #[command(flatten)]
        params: CatalogueArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Evolve initial data from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed family named in the config.
        #[arg(long)]
        seed_family: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a parameter scan; without --config the default HHM grid.
    Scan {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Write a gnuplot script for a CSV table.
    Plot {
        table: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        y: Vec<String>,
        #[arg(long)]
        title: Option<String>,
        #[arg(long)]
        logy: bool,
        /// Run gnuplot to produce plot.svg.
        #[arg(long)]
        render: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone, Default)]
struct CatalogueArgs {
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    winding: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    xi0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xmax: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
}

impl From<CatalogueArgs> for CatalogueParams {
    fn from(a: CatalogueArgs) -> Self {
        CatalogueParams {
            k: a.k,
            v: a.v,
            c: a.c,
            winding: a.winding,
            xi0: a.xi0,
            p0: a.p0,
            p1: a.p1,
            p2: a.p2,
            p3: a.p3,
            b: a.b,
            q: a.q,
            rho: a.rho,
            r: a.r,
            t0: a.t0,
            xmin: a.xmin,
            xmax: a.xmax,
            n: a.n,
        }
    }
}

/// Finished command: the manifest to write and the exit status.
struct Done {
    manifest: RunManifest,
    code: ExitCode,
}

fn setup(common: &Common) -> Result<(), CliError> {
    if let Some(n) = thread_count(common.threads)? {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    ensure_dir(&common.out)
}

fn catalogue_cmd(family: &str, params: CatalogueParams, out: &Path) -> Result<Done, CliError> {
    let table = catalogue::tabulate(family, &params)?;
    let path = out.join(format!("{family}.csv"));
    table.write(&path)?;
    let params_json = serde_json::to_value(&params).unwrap_or(Value::Null);
    let mut manifest = RunManifest::new("catalogue", params_json.clone(), Some(family.into()), params_json);
    manifest.outputs.push(path.clone());
    println!("{}", path.display());
    Ok(Done { manifest, code: ExitCode::Success })
}

fn simulate_cmd(config: &Path, seed_family: Option<&str>, out: &Path) -> Result<Done, CliError> {
    let raw = read_json(config)?;
    let cfg = parse_simulate(&raw, seed_family)?;
    let outcome = simulate(&cfg)?;
    let paths = write_outputs(out, &cfg, &outcome)?;
    let sim = &cfg.sim;
    let parameters = json!({
        "model": format!("{:?}", sim.model),
        "representation": format!("{:?}", sim.representation),
        "points": sim.points,
        "space": format!("{:?}", sim.space),
        "scheme": format!("{:?}", sim.scheme),
        "dt": sim.dt,
        "t_end": sim.t_end,
        "cadence": sim.cadence,
        "renormalize": sim.renormalize,
        "constraint_tol": sim.constraint_tol,
        "filter": sim.filter,
        "seed": format!("{:?}", cfg.seed),
        "probes": cfg.probes,
        "final_time": outcome.final_time,
    });
    let mut manifest = RunManifest::new("simulate", raw, Some(cfg.seed.family().into()), parameters);
    manifest.outputs = vec![paths.diagnostics, paths.probes, paths.final_state];
    let code = match abort_message(&outcome) {
        Some(msg) => {
            eprintln!("hyperwind: physical abort: {msg}");
            ExitCode::PhysicalAbort
        }
        None => ExitCode::Success,
    };
    Ok(Done { manifest, code })
}

fn scan_cmd(config: Option<&Path>, out: &Path) -> Result<Done, CliError> {
    let raw = match config {
        Some(p) => read_json(p)?,
        None => json!({}),
    };
    let spec = parse_scan(&raw)?;
    let (name, family) = match spec {
        ScanSpec::Hhm(_) => ("scan_hhm.csv", "hhm"),
        ScanSpec::Hsm(_) => ("scan_hsm.csv", "hsm"),
    };
    let report = out.join(name);
    let summary = run_scan(&spec, &report)?;
    let text = summary.render();
    let summary_path = out.join("summary.txt");
    std::fs::write(&summary_path, &text).map_err(|e| CliError::io(&summary_path, e))?;
    print!("{text}");
    let mut manifest = RunManifest::new("scan", raw, Some(family.into()), json!(format!("{spec:?}")));
    manifest.outputs = vec![report, summary_path];
    Ok(Done { manifest, code: ExitCode::Success })
}

fn run(cli: Cli) -> (Result<Done, CliError>, Option<(PathBuf, Value, &'static str)>) {
    match cli.command {
        Cmd::Catalogue { family, params, common } => {
            let ctx = Some((common.out.clone(), json!({ "family": family }), "catalogue"));
            (setup(&common).and_then(|_| catalogue_cmd(&family, params.into(), &common.out)), ctx)
        }
        Cmd::Simulate { config, seed_family, common } => {
            let ctx = Some((common.out.clone(), json!({ "config": config }), "simulate"));
            (setup(&common).and_then(|_| simulate_cmd(&config, seed_family.as_deref(), &common.out)), ctx)
        }
        Cmd::Scan { config, common } => {
            let ctx = Some((common.out.clone(), json!({ "config": config }), "scan"));
            (setup(&common).and_then(|_| scan_cmd(config.as_deref(), &common.out)), ctx)
        }
        Cmd::Plot { table, x, y, title, logy, render, common } => {
            let ctx = Some((common.out.clone(), json!({ "table": table }), "plot"));
            let spec = PlotSpec { x, y, title, logscale_y: logy };
            let result = setup(&common).and_then(|_| {
                let outputs = write_plot(&table, &spec, &common.out, render)?;
                let mut manifest = RunManifest::new(
                    "plot",
                    json!({ "table": table, "x": spec.x, "y": spec.y, "title": spec.title, "logy": spec.logscale_y }),
                    None,
                    Value::Null,
                );
                manifest.outputs.push(outputs.script.clone());
                manifest.outputs.extend(outputs.svg);
                println!("{}", outputs.script.display());
                Ok(Done { manifest, code: ExitCode::Success })
            });
            (result, ctx)
        }
    }
}

fn main() {
    let started = Instant::now();
    let cli = Cli::parse();
    let (result, ctx) = run(cli);
    let code = match result {
        Ok(Done { manifest, code }) => {
            let out = ctx.as_ref().map(|c| c.0.clone()).unwrap_or_default();
            match manifest.finish(&out, started, code as i32) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("hyperwind: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("hyperwind: {e}");
            let code = e.exit_code();
            if let Some((out, config, command)) = ctx {
                if out.is_dir() {
                    let mut m = RunManifest::new(command, config, None, json!({ "error": e.to_string() }));
                    m.outputs.clear();
                    let _ = m.finish(&out, started, code as i32);
                }
            }
            code
        }
    };
    process::exit(code as i32);
}
