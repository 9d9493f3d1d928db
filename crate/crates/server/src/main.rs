use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use tencards::equilibria::nash_equilibria;
use tencards::experiments::output::{equilibria_table, grid_summary, report_rows, report_table, sweep_rows, sweep_table, write_file};
use tencards::experiments::{equilibrium_oracle_grid, run_experiment, run_experiment_parallel, sweep, ExperimentConfig, SweepAxis};
use tencards::game::{EntangledState, PayoffMatrix, StrategyProfile};
use tencards::simulator::Backend;
use tencards_server::store::{SessionStore, StoreConfig};

#[derive(Debug, Parser)]
#[command(name = "tencards", version, about = "Restricted entangled Battle of the Sexes: simulation, analysis and live play")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo estimate of expected payoffs for one configuration.
    Simulate(SimulateArgs),
    /// Repeat `simulate` along one axis.
    Sweep(SweepArgs),
    /// Closed-form equilibria, optionally cross-checked on a grid.
    Analyze(AnalyzeArgs),
    /// Run the session server.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct GameArgs {
    #[arg(long, default_value_t = 5.0)]
    alpha: f64,
    #[arg(long, default_value_t = 3.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Weight of |OO> in the shared state.
    #[arg(long, default_value_t = 0.5)]
    a_sq: f64,
}

impl GameArgs {
    fn parts(&self) -> anyhow::Result<(PayoffMatrix, EntangledState)> {
        Ok((PayoffMatrix::new(self.alpha, self.beta, self.gamma)?, EntangledState::new(self.a_sq)?))
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Probability Alice plays identity.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Probability Bob plays identity.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Backend::Machine)]
    backend: Backend,
    /// Write results to this file (`.csv` for CSV, anything else for JSON).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> anyhow::Result<ExperimentConfig> {
        let (payoffs, state) = self.game.parts()?;
        let config = ExperimentConfig {
            payoffs,
            state,
            profile: StrategyProfile::new(self.p, self.q)?,
            trials: self.trials,
            seed: self.seed,
            backend: self.backend,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Worker threads; 1 is the bit-reproducible serial mode.
    #[arg(long, default_value_t = 1)]
    lanes: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value = "a_sq")]
    axis: SweepAxis,
    /// Comma-separated values, or `start:stop:step`.
    #[arg(long, default_value = "0:1:0.1")]
    values: String,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Also search the strategy grid with this step and compare.
    #[arg(long)]
    grid_check: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Directory for per-session JSONL audit logs.
    #[arg(long)]
    session_log: Option<PathBuf>,
    /// Seat the built-in opponent after this many seconds without a second player.
    #[arg(long)]
    bot_after: Option<f64>,
    /// Serve a built front-end from this directory.
    #[arg(long)]
    static_dir: Option<PathBuf>,
}

fn parse_values(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if let [start, stop, step] = parts[..] {
        let (start, stop, step): (f64, f64, f64) = (start.trim().parse()?, stop.trim().parse()?, step.trim().parse()?);
        if step.is_nan() || step <= 0.0 || stop < start {
            bail!("range {spec} needs start <= stop and a positive step");
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| (start + i as f64 * step).min(stop)).collect());
    }
    spec.split(',').map(|v| v.trim().parse::<f64>().with_context(|| format!("bad value '{v}'"))).collect()
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(args) => {
            let config = args.run.config()?;
            let report =
                if args.lanes > 1 { run_experiment_parallel(&config, args.lanes)? } else { run_experiment(&config)? };
            print!("{}", report_table(&report));
            if let Some(path) = &args.run.out {
                write_file(path, &report, &report_rows(&report))?;
            }
        }
        Command::Sweep(args) => {
            let config = args.run.config()?;
            let table = sweep(&config, args.axis, &parse_values(&args.values)?)?;
            print!("{}", sweep_table(&table));
            if let Some(path) = &args.run.out {
                write_file(path, &table, &sweep_rows(&table))?;
            }
        }
        Command::Analyze(args) => {
            let (payoffs, state) = args.game.parts()?;
            let eqs = nash_equilibria(state, &payoffs);
            print!("{}", equilibria_table(&eqs));
            let grid = args.grid_check.map(|step| equilibrium_oracle_grid(state, &payoffs, step)).transpose()?;
            if let Some(grid) = &grid {
                print!("{}", grid_summary(grid));
            }
            if let Some(path) = &args.out {
                let value = serde_json::json!({ "equilibria": eqs, "grid_check": grid });
                write_file(path, &value, &[])?;
            }
            if grid.is_some_and(|g| !g.agrees()) {
                std::process::exit(2);
            }
        }
        Command::Serve(args) => serve(args)?,
    }
    Ok(())
}

#[tokio::main]
async fn serve(args: ServeArgs) -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();
    if let Some(dir) = &args.session_log {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let bot_window = args.bot_after.map(Duration::try_from_secs_f64).transpose().context("--bot-after")?;
    let store = Arc::new(SessionStore::new(StoreConfig { log_dir: args.session_log, bot_window, ..Default::default() }));
    let addr: SocketAddr = format!("{}:{}", args.host, args.port).parse().context("listen address")?;
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, tencards_server::http::router(store, args.static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
