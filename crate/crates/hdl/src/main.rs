use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hdl_core::lie_model::Theory;
use hdl_core::report::{self, Command, Direction, OutputFormat, RunConfig};

/// Invariant-form cohomology, deformations and Weil-Petersson metrics on Lie-algebra models.
#[derive(Parser)]
#[command(name = "hdl", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural checks: d² = 0, integrability, unimodularity, metric positivity.
    Validate(Common),
    /// Cohomology dimensions by two oracles, ∂∂̄-lemma verdict and metric flags.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// derham, dolbeault or aeppli (all when omitted).
        #[arg(long)]
        theory: Option<Theory>,
    },
    /// Kuranishi series per deformation direction.
    Kuranishi {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Direction index or `all`.
        #[arg(long, default_value = "all")]
        direction: Direction,
    },
    /// Weil-Petersson type metrics on the co-polarised directions.
    Wp(Common),
    /// Randomised pointwise identity suites.
    Identities {
        #[command(flatten)]
        common: Common,
        /// Dimensions to test.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Model file, or a bundled fixture name (torus2, torus3, iwasawa, kodaira_thurston, step2_obstructed).
    model: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long = "rank-tolerance", default_value_t = 1e-8)]
    rank_tolerance: f64,
    /// Emit the JSON report instead of a table.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn config(&self) -> RunConfig {
        let mut c = RunConfig::new(self.model.clone());
        c.seed = self.seed;
        c.tolerance = self.tolerance;
        c.rank_tolerance = self.rank_tolerance;
        c.output = if self.json { OutputFormat::Json } else { OutputFormat::Table };
        c
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (command, config) = match cli.command {
        Cmd::Validate(c) => (Command::Validate, c.config()),
        Cmd::Cohomology { common, theory } => {
            let mut c = common.config();
            c.theory = theory;
            (Command::Cohomology, c)
        }
        Cmd::Kuranishi { common, order, direction } => {
            let mut c = common.config();
            c.order = order;
            c.direction = direction;
            (Command::Kuranishi, c)
        }
        Cmd::Wp(c) => (Command::Wp, c.config()),
        Cmd::Identities { common, dims, trials } => {
            let mut c = common.config();
            c.dims = dims;
            c.trials = trials;
            (Command::Identities, c)
        }
    };
    let rep = report::run(command, &config);
    match config.output {
        OutputFormat::Json => print!("{}", report::render_json(&rep)),
        OutputFormat::Table => print!("{}", report::render_table(&rep)),
    }
    ExitCode::from(rep.exit_code() as u8)
}
