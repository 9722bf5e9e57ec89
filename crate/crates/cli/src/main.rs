use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "bialgebra-forge", version, about = "Exact checks for Lie bialgebras and Hopf presentations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Truncation order in the parameters [default: 5]
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Longest word kept while rewriting [default: 10]
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Extra working order used while parsing divided series [default: 2]
    #[arg(long, global = true)]
    pub slack: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Emitted document for `family` and `specialize`, the report otherwise
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Lie,
    Colie,
    Bialgebra,
    FourPairs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HopfCheck {
    Jacobi,
    Hom,
    Coassoc,
    Counit,
    Antipode,
    ClassF,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Leading,
    Exact,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Jacobi, co-Jacobi and cocycle checks on compositions
    Check {
        /// Path or builtin:NAME
        file: String,
        #[arg(value_enum)]
        which: Which,
        /// Compositions to check; four-pairs takes mu_100 mu_001 delta_010 delta_001
        names: Vec<String>,
    },
    /// Builds the two-parameter bracket and cobracket pencils
    Family {
        file: String,
        /// The four input compositions, in four-pairs order
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
        /// Family parameters multiplying mu_001, mu_100, delta_001, delta_010
        #[arg(long, value_delimiter = ',', default_value = "z1,t,z2,h")]
        params: Vec<String>,
    },
    /// Hopf-axiom checks on a presentation
    Hopf {
        file: String,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        checks: Vec<HopfCheck>,
    },
    /// Substitutes parameter values and emits the presentation
    Specialize {
        file: String,
        /// p=value, repeatable
        #[arg(long = "set", value_name = "P=V")]
        set: Vec<String>,
    },
    /// Taylor coefficients and the order-2 and thz identities
    Expand {
        file: String,
        /// Names of the t, h, z parameters
        #[arg(long, value_delimiter = ',', default_value = "t,h,z")]
        names: Vec<String>,
        /// Componentwise bound on the multi-index
        #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
        up_to: Vec<u32>,
        /// Applied before extraction, p=value, repeatable
        #[arg(long = "set", value_name = "P=V")]
        set: Vec<String>,
        /// Document compositions named like mu_001 to compare with the extraction
        #[arg(long, value_delimiter = ',')]
        compare: Vec<String>,
    },
    /// First-order tangent field along one parameter at zero
    Tangent {
        file: String,
        #[arg(long)]
        direction: Option<String>,
        /// Base point assignments, p=value, repeatable
        #[arg(long = "at", value_name = "P=V")]
        at: Vec<String>,
        /// Builtin field fixture name or a JSON path
        #[arg(long)]
        expect: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match commands::run(&cli.cmd, &cli.global, &echo) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(commands::Failure::Defect(msg)) => {
            eprintln!("defect: {msg}");
            ExitCode::from(1)
        }
        Err(commands::Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
