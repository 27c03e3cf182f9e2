use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use scm_spectra::commands::{
    load_config, run_estimate, run_outliers, run_simulate, run_spectrum, run_table1, EstimateConfig, HeteroForm,
    OutliersConfig, SimulateConfig, SpectrumConfig,
};
use scm_spectra::error::{Result, ScmError};
use scm_spectra::experiment::ExperimentGrid;
use scm_spectra::panel::{LambdaRule, OutlierMode};

/// Outlier eigenvalues of AR(1) precision matrices under coefficient changes.
#[derive(Parser)]
#[command(name = "scm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a path or a panel of series.
    Simulate(Common),
    /// Eigenvalues and histogram of a precision matrix.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Heteroscedastic matrix form, when the config has variance changes.
        #[arg(long, value_enum)]
        hetero_form: Option<FormArg>,
    },
    /// Analytic outliers of a schedule.
    Outliers(Common),
    /// Estimate outliers from a simulated or supplied panel.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Read the panel from a CSV with header j,t,y.
        #[arg(long)]
        panel: Option<PathBuf>,
    },
    /// Monte Carlo MAE grid.
    Table1 {
        #[command(flatten)]
        common: Common,
        /// Use 1000 replications per cell.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct Common {
    /// JSON configuration; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: scm-out/<command>].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    reps: Option<usize>,
    /// Worker threads for parallel sections.
    #[arg(long)]
    threads: Option<usize>,
    /// Constant c in the constraint level c * sqrt(ln n / B).
    #[arg(long)]
    lambda_c: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    KnownCount,
    Threshold,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Display,
    Exact,
}

impl Common {
    fn out_dir(&self, name: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| Path::new("scm-out").join(name))
    }

    fn mode(&self, current: OutlierMode) -> OutlierMode {
        match (self.mode, current) {
            (None, m) => m,
            (Some(ModeArg::Threshold), _) => OutlierMode::Threshold,
            (Some(ModeArg::KnownCount), m @ OutlierMode::KnownCount { .. }) => m,
            (Some(ModeArg::KnownCount), OutlierMode::Threshold) => OutlierMode::default(),
        }
    }

    fn lambda(&self, current: LambdaRule) -> LambdaRule {
        self.lambda_c.map_or(current, |c| LambdaRule::Auto { c })
    }

    fn setup(&self) -> Result<()> {
        if let Some(t) = self.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| ScmError::InvalidArgument(format!("thread pool: {e}")))?;
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Simulate(c) => {
            c.setup()?;
            let mut cfg: SimulateConfig = load_config(c.config.as_deref())?;
            if let Some(s) = c.seed {
                cfg.seed = s;
            }
            run_simulate(&cfg, &c.out_dir("simulate"))
        }
        Command::Spectrum { common: c, hetero_form } => {
            c.setup()?;
            let mut cfg: SpectrumConfig = load_config(c.config.as_deref())?;
            if let (Some(f), Some(h)) = (hetero_form, cfg.hetero.as_mut()) {
                h.form = match f {
                    FormArg::Display => HeteroForm::Display,
                    FormArg::Exact => HeteroForm::Exact,
                };
            }
            run_spectrum(&cfg, &c.out_dir("spectrum"))
        }
        Command::Outliers(c) => {
            c.setup()?;
            let cfg: OutliersConfig = load_config(c.config.as_deref())?;
            run_outliers(&cfg, &c.out_dir("outliers"))
        }
        Command::Estimate { common: c, panel } => {
            c.setup()?;
            let mut cfg: EstimateConfig = load_config(c.config.as_deref())?;
            if let Some(s) = c.seed {
                cfg.seed = s;
            }
            if panel.is_some() {
                cfg.panel = panel;
            }
            cfg.lambda = c.lambda(cfg.lambda);
            cfg.mode = c.mode(cfg.mode);
            run_estimate(&cfg, &c.out_dir("estimate")).map(|(_, text)| text)
        }
        Command::Table1 { common: c, full } => {
            c.setup()?;
            let mut grid: ExperimentGrid = load_config(c.config.as_deref())?;
            if let Some(s) = c.seed {
                grid.seed = s;
            }
            if full {
                grid.replications = 1000;
            }
            if let Some(r) = c.reps {
                grid.replications = r;
            }
            grid.lambda = c.lambda(grid.lambda);
            grid.mode = c.mode(grid.mode);
            run_table1(&grid, &c.out_dir("table1")).map(|(_, text)| text)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
