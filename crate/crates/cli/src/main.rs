//! Batch driver: single runs, kinetic sweeps, snapshot comparison and oracle
//! queries, all emitting CSV with a metadata sidecar.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod compare;
mod manifest;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use wcd_core::analysis::{kinetic_sweep, mhd_kinetic_sweep};
use wcd_core::oracles::{
    classical_riemann_cubic, traveling_wave_kinetic, TravelingWaveProblem, Wave,
};
use wcd_core::stencil::DEFAULT_TAIL_TOLERANCE;
use wcd_core::{
    run, tail_sums, BoundaryCondition, CoefficientMode, FieldState, GridSpec, StencilSet,
};

use manifest::{CoefficientSpec, RunManifest, SweepManifest};
use output::{fmt_f64, write_with_sidecar};

#[derive(Debug, Parser)]
#[command(
    name = "wcd",
    version,
    about = "Finite-difference schemes with well-controlled dissipation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one manifest and write snapshot CSVs plus diagnostics.
    Run(RunArgs),
    /// Run a kinetic-function sweep manifest.
    Sweep {
        manifest: PathBuf,
        /// Output directory, overriding the manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// L1, L2 and max distances between two snapshot CSVs.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Interpolate the second snapshot onto the nodes of the first.
        #[arg(long)]
        interpolate: bool,
    },
    /// Inspect finite-difference stencils.
    #[command(subcommand)]
    Stencil(StencilCommand),
    /// Evaluate independent reference solutions.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    manifest: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// WCD tolerance.
    #[arg(long)]
    tau: Option<f64>,
    /// Formal order 2p of the scheme.
    #[arg(long)]
    order: Option<usize>,
    /// `adaptive` or `fixed:<value>`.
    #[arg(long = "c")]
    coefficient: Option<CoefficientSpec>,
    /// Relative enlargement of the critical coefficient.
    #[arg(long)]
    margin: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum StencilCommand {
    /// Print the weights and tail sums of half-width p as CSV.
    Dump {
        #[arg(long)]
        p: usize,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Traveling-wave kinetic function of the cubic law.
    Kinetic {
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long = "uL", allow_negative_numbers = true)]
        u_left: f64,
    },
    /// Classical entropy solution of the cubic Riemann problem.
    Classical {
        #[arg(long = "uL", allow_negative_numbers = true)]
        u_left: f64,
        #[arg(long = "uR", allow_negative_numbers = true)]
        u_right: f64,
        /// Initial jump location.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        x0: f64,
        /// Sample time; with `--out`, writes a snapshot at this time.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        n_cells: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        x_max: f64,
        /// Snapshot CSV path for the sampled solution.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Sweep { manifest, out } => cmd_sweep(&manifest, out.as_deref()),
        Command::Compare { a, b, interpolate } => cmd_compare(&a, &b, interpolate),
        Command::Stencil(StencilCommand::Dump { p }) => cmd_stencil_dump(p),
        Command::Oracle(OracleCommand::Kinetic { delta, u_left }) => {
            cmd_oracle_kinetic(delta, u_left)
        }
        Command::Oracle(OracleCommand::Classical {
            u_left,
            u_right,
            x0,
            t,
            n_cells,
            x_min,
            x_max,
            out,
        }) => cmd_oracle_classical(
            u_left,
            u_right,
            x0,
            t,
            (x_min, x_max, n_cells),
            out.as_deref(),
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let mut m: RunManifest = manifest::load(&args.manifest)?;
    if let Some(tau) = args.tau {
        m.wcd.tau = tau;
    }
    if let Some(order) = args.order {
        if order < 2 || order % 2 != 0 {
            bail!("--order must be an even integer >= 2, got {order}");
        }
        m.wcd.p = order / 2;
    }
    if let Some(c) = args.coefficient {
        m.wcd.c = c;
    }
    if let Some(margin) = args.margin {
        m.wcd.margin = margin;
    }
    let out = args
        .out
        .clone()
        .or_else(|| m.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    m.output_dir = Some(out.clone());

    let cfg = m.build()?;
    let traj = run(&cfg)?;
    let names = cfg.model.component_names();
    let cs: Vec<f64> = traj.steps.iter().map(|s| s.c).collect();
    let dts: Vec<f64> = traj.steps.iter().map(|s| s.dt).collect();
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let grid = cfg.initial.grid;
    let mut common = vec![
        kv("model", cfg.model.name()),
        kv("model_parameters", serde_json::to_string(&m.model)?),
        kv("n_cells", grid.n_cells),
        kv("x_min", fmt_f64(grid.x_min)),
        kv("x_max", fmt_f64(grid.x_max)),
        kv("boundary", format!("{:?}", grid.bc)),
        kv("p", cfg.wcd.p),
        kv("order", 2 * cfg.wcd.p),
        kv("tau", fmt_f64(cfg.wcd.tau)),
        kv(
            "c_mode",
            match cfg.wcd.mode {
                CoefficientMode::Adaptive => "adaptive".to_string(),
                CoefficientMode::Fixed(c) => format!("fixed:{}", fmt_f64(c)),
            },
        ),
        kv("margin", fmt_f64(cfg.wcd.safety_margin)),
        kv("shock_speed_norm", "euclidean"),
        kv("variant", format!("{:?}", cfg.variant)),
        kv("cfl", fmt_f64(cfg.cfl)),
        kv("t_end", fmt_f64(cfg.t_end)),
        kv("steps", traj.steps.len()),
        kv("s_f_hat", fmt_f64(traj.bounds.s_f_hat)),
        kv("s_d_hat", fmt_f64(traj.bounds.s_d_hat)),
        kv(
            "s_c_hat",
            traj.bounds.s_c_hat.map_or("none".to_string(), fmt_f64),
        ),
        kv("c_min", fmt_f64(min(&cs))),
        kv("c_max", fmt_f64(max(&cs))),
        kv("dt_min", fmt_f64(min(&dts))),
        kv("dt_max", fmt_f64(max(&dts))),
        kv("diagnostics", "diagnostics.csv"),
    ];
    common.push(kv("manifest", serde_json::to_string(&m)?));

    for (k, snap) in traj.snapshots.iter().enumerate() {
        let path = out.join(format!("snapshot_{k:03}.csv"));
        let mut meta = vec![kv("time", fmt_f64(snap.time))];
        meta.extend(common.iter().cloned());
        write_with_sidecar(&path, &output::snapshot_csv(snap, &names), &meta)?;
        println!("{}", path.display());
    }
    let diag = out.join("diagnostics.csv");
    write_with_sidecar(&diag, &output::diagnostics_csv(&traj.steps), &common)?;
    println!("{}", diag.display());
    Ok(())
}

fn cmd_sweep(path: &Path, out: Option<&Path>) -> Result<()> {
    let m: SweepManifest = manifest::load(path)?;
    let out = out
        .map(Path::to_path_buf)
        .or_else(|| m.output_dir().map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("out"));
    let manifest_json = serde_json::to_string(&m)?;
    match &m {
        SweepManifest::Kinetic { .. } => {
            for cfg in m.kinetic_configs()? {
                let records = kinetic_sweep(&cfg)?;
                let mut csv = String::from("u_L,u_M,cells,p,tau\n");
                let mut meta = vec![
                    kv("model", "cubic"),
                    kv("delta", fmt_f64(cfg.delta)),
                    kv("u_R", fmt_f64(cfg.u_right)),
                    kv("jump_location", fmt_f64(cfg.jump_location)),
                    kv("cfl", fmt_f64(cfg.cfl)),
                    kv("plateau", format!("{:?}", cfg.plateau)),
                    kv("manifest", &manifest_json),
                ];
                for (k, r) in records.iter().enumerate() {
                    let u_m = r.middle_state.as_ref().map_or(f64::NAN, |m| m[0]);
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        fmt_f64(r.left_state[0]),
                        fmt_f64(u_m),
                        r.mesh_cells,
                        r.p,
                        fmt_f64(r.tau)
                    ));
                    meta.push(kv(
                        &format!("t_end.{k}"),
                        fmt_f64(cfg.final_time(r.left_state[0])),
                    ));
                    if let Some(f) = &r.failure {
                        meta.push(kv(&format!("failure.{k}"), f));
                    }
                }
                let file = out.join(format!("kinetic_{}.csv", cfg.delta));
                write_with_sidecar(&file, &csv, &meta)?;
                println!("{}", file.display());
            }
        }
        SweepManifest::Mhd { .. } => {
            for cfg in m.mhd_configs()? {
                let records = mhd_kinetic_sweep(&cfg)?;
                let mut csv = String::from("r_L,s,phi,phi_over_s2,cells,p,tau\n");
                let mut meta = vec![
                    kv("model", "hall-mhd"),
                    kv("alpha", fmt_f64(cfg.alpha)),
                    kv("right_ratio", fmt_f64(cfg.right_ratio)),
                    kv("theta_left", fmt_f64(cfg.theta_left)),
                    kv("theta_right", fmt_f64(cfg.theta_right)),
                    kv("t_ref", fmt_f64(cfg.t_ref)),
                    kv("manifest", &manifest_json),
                ];
                for (k, (r, r_l)) in records.iter().zip(&cfg.r_left).enumerate() {
                    let nan = f64::NAN;
                    csv.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        fmt_f64(*r_l),
                        fmt_f64(r.shock_speed.unwrap_or(nan)),
                        fmt_f64(r.phi.unwrap_or(nan)),
                        fmt_f64(r.phi_over_s2().unwrap_or(nan)),
                        r.mesh_cells,
                        r.p,
                        fmt_f64(r.tau)
                    ));
                    if let Some(f) = &r.failure {
                        meta.push(kv(&format!("failure.{k}"), f));
                    }
                }
                let file = out.join(format!("mhd_kinetic_{}.csv", cfg.alpha));
                write_with_sidecar(&file, &csv, &meta)?;
                println!("{}", file.display());
            }
        }
    }
    Ok(())
}

fn cmd_compare(a: &Path, b: &Path, interpolate: bool) -> Result<()> {
    let sa = output::read_snapshot(a)?;
    let sb = output::read_snapshot(b)?;
    let d = compare::distances(&sa, &sb, interpolate)?;
    println!("l1,l2,linf");
    println!("{},{},{}", fmt_f64(d.l1), fmt_f64(d.l2), fmt_f64(d.linf));
    Ok(())
}

fn cmd_stencil_dump(p: usize) -> Result<()> {
    let s = StencilSet::build(p)?;
    let bounds = tail_sums(&s, DEFAULT_TAIL_TOLERANCE)?;
    println!("quantity,j,value");
    let mut families = vec![("alpha", &s.alpha), ("beta", &s.beta)];
    if let Some(g) = &s.gamma {
        families.push(("gamma", g));
    }
    for (name, w) in families {
        for (k, v) in w.iter().enumerate() {
            println!("{name},{},{}", k as i64 - p as i64, fmt_f64(*v));
        }
    }
    println!("s_f_hat,,{}", fmt_f64(bounds.s_f_hat));
    println!("s_d_hat,,{}", fmt_f64(bounds.s_d_hat));
    if let Some(c) = bounds.s_c_hat {
        println!("s_c_hat,,{}", fmt_f64(c));
    }
    println!("remainder_bound,,{}", fmt_f64(bounds.remainder_bound));
    Ok(())
}

fn cmd_oracle_kinetic(delta: f64, u_left: f64) -> Result<()> {
    let c = traveling_wave_kinetic(&TravelingWaveProblem::new(u_left, delta))?;
    println!("u_minus,u_plus,speed,residual");
    println!(
        "{},{},{},{}",
        fmt_f64(c.u_minus),
        fmt_f64(c.u_plus),
        fmt_f64(c.speed),
        fmt_f64(c.residual)
    );
    Ok(())
}

fn cmd_oracle_classical(
    u_left: f64,
    u_right: f64,
    x0: f64,
    t: Option<f64>,
    (x_min, x_max, n_cells): (f64, f64, usize),
    out: Option<&Path>,
) -> Result<()> {
    let sol = classical_riemann_cubic(u_left, u_right);
    println!("wave,left,right,speed_min,speed_max");
    for w in &sol.waves {
        let kind = match w {
            Wave::Shock { .. } => "shock",
            Wave::Rarefaction { .. } => "rarefaction",
        };
        let (lo, hi) = w.speed_range();
        println!(
            "{kind},{},{},{},{}",
            fmt_f64(w.left()),
            fmt_f64(w.right()),
            fmt_f64(lo),
            fmt_f64(hi)
        );
    }
    if let Some(path) = out {
        let t = t.context("--out needs a sample time --t")?;
        if !(t > 0.0) {
            bail!("sample time must be positive, got {t}");
        }
        let grid = GridSpec::new(
            x_min,
            x_max,
            n_cells,
            BoundaryCondition::OutflowExtrapolation,
        )?;
        let values = sol.sample_at(&grid.nodes(), x0, t);
        let mut state = FieldState::scalar(grid, values)?;
        state.time = t;
        let meta = vec![
            kv("oracle", "classical-envelope"),
            kv("u_L", fmt_f64(u_left)),
            kv("u_R", fmt_f64(u_right)),
            kv("x0", fmt_f64(x0)),
            kv("time", fmt_f64(t)),
            kv("n_cells", n_cells),
            kv("x_min", fmt_f64(x_min)),
            kv("x_max", fmt_f64(x_max)),
        ];
        write_with_sidecar(path, &output::snapshot_csv(&state, &["u"]), &meta)?;
    }
    Ok(())
}
