//! Command-line surface for exact frieze counting over Z/nZ: closed-form
//! and enumerated counts, table sweeps, graph export, frieze rendering,
//! and the self-verification suites.
//!
//! All commands are deterministic given their flags and seed, and their
//! outputs are byte-stable across runs.  Exit codes: 0 on success or
//! agreement, 1 on a verification or mismatch failure, 2 on usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use frieze_core::FriezeKind;

pub mod cache;
pub mod commands;
pub mod verify;

/// Default desk-scale bounds; each keeps a default run well under a minute.
/// `--unsafe-large` lifts them.
pub mod bounds {
    pub const COUNT_N: u64 = 30;
    pub const COUNT_M: u32 = 30;
    pub const TABLE_N: u32 = 12;
    pub const TABLE_M: u32 = 12;
    pub const GRAPH_N: u64 = 30;
    pub const RENDER_N: u64 = 12;
    pub const RENDER_M: u32 = 8;
    pub const VERIFY_N: u32 = 12;
    pub const VERIFY_M: u32 = 7;
    pub const VERIFY_R: u32 = 3;
    pub const VERIFY_K: u32 = 4;
    pub const VERIFY_SAMPLES: u32 = 200;
}

#[derive(Parser, Debug)]
#[command(
    name = "frieze",
    version,
    about = "Exact enumeration of tame friezes over Z/nZ",
    long_about = "Counts tame and regular friezes over Z/nZ by closed formula and by \
                  independent path enumeration, exports the underlying graphs, renders \
                  frieze windows, and runs self-verification suites."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count friezes by closed formula, by path enumeration, or both.
    Count {
        /// Which family of friezes to count.
        #[arg(value_enum)]
        kind: KindArg,
        /// Modulus of the coefficient ring Z/nZ (n >= 2).
        #[arg(long)]
        n: u64,
        /// Frieze width: number of rows minus one (m >= 2).
        #[arg(long)]
        m: u32,
        /// Counting method; `both` cross-checks formula against enumeration.
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Consult and update the on-disk count cache in FRIEZE_CACHE_DIR.
        #[arg(long)]
        cache: bool,
        /// Lift the desk-scale parameter bounds (may run long).
        #[arg(long)]
        unsafe_large: bool,
    },
    /// Sweep a grid of (n, m) cells and report both counts per cell.
    Table {
        /// Which family of friezes to count.
        #[arg(value_enum)]
        kind: KindArg,
        /// Largest modulus to include (rows run n = 2..=n-max).
        #[arg(long)]
        n_max: u32,
        /// Largest width to include (columns run m = 2..=m-max).
        #[arg(long)]
        m_max: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t = TableFormatArg::Csv)]
        format: TableFormatArg,
        /// Lift the desk-scale parameter bounds (may run long).
        #[arg(long)]
        unsafe_large: bool,
    },
    /// Export the directed graph on pairs a/b mod n.
    Graph {
        /// Modulus of the graph (n >= 2).
        #[arg(long)]
        n: u64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = GraphFormatArg::Dot)]
        format: GraphFormatArg,
        /// Lift the desk-scale parameter bounds (may run long).
        #[arg(long)]
        unsafe_large: bool,
    },
    /// Render a frieze window from a semiclosed path.
    Render {
        /// Modulus of the coefficient ring Z/nZ (n >= 2).
        #[arg(long)]
        n: u64,
        /// Width of the rendered window (m >= 2).
        #[arg(long)]
        m: u32,
        /// Pick the index-th semiclosed path in canonical order.
        #[arg(long, conflicts_with = "seed")]
        index: Option<u64>,
        /// Sample a semiclosed path uniformly with this seed instead.
        #[arg(long)]
        seed: Option<u64>,
        /// How many fundamental periods to print.
        #[arg(long, default_value_t = 1)]
        periods: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t = RenderFormatArg::Text)]
        format: RenderFormatArg,
        /// Lift the desk-scale parameter bounds (may run long).
        #[arg(long)]
        unsafe_large: bool,
    },
    /// Run a named verification suite and report machine-readable results.
    Verify {
        /// Which suite to run.
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Seed for the sampled checks; echoed in the report.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Largest modulus for the grid suites (default 12).
        #[arg(long)]
        n_max: Option<u32>,
        /// Largest width for the grid suites (default 7).
        #[arg(long)]
        m_max: Option<u32>,
        /// Largest prime-power exponent for the lift suites (default 3).
        #[arg(long)]
        r_max: Option<u32>,
        /// Largest half-length for the zig-zag suites (default 3).
        #[arg(long)]
        k_max: Option<u32>,
        /// Random samples per sampled check (default 50).
        #[arg(long)]
        samples: Option<u32>,
        /// Lift the desk-scale parameter bounds (may run long).
        #[arg(long)]
        unsafe_large: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Tame,
    Regular,
}

impl KindArg {
    pub fn to_kind(self) -> FriezeKind {
        match self {
            KindArg::Tame => FriezeKind::Tame,
            KindArg::Regular => FriezeKind::Regular,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KindArg::Tame => "tame",
            KindArg::Regular => "regular",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Formula,
    Enumerate,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormatArg {
    Dot,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormatArg {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteArg {
    Crt,
    Lifting,
    Lemma4,
    Lemma7,
    Recurrence,
    OmegaPartition,
    TheoremA,
    TheoremB,
    FriezeRender,
    All,
}

/// Prints a usage error and returns the usage exit code.
pub(crate) fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    2
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Count {
            kind,
            n,
            m,
            method,
            cache,
            unsafe_large,
        } => commands::cmd_count(kind, n, m, method, cache, unsafe_large),
        Command::Table {
            kind,
            n_max,
            m_max,
            format,
            unsafe_large,
        } => commands::cmd_table(kind, n_max, m_max, format, unsafe_large),
        Command::Graph {
            n,
            format,
            unsafe_large,
        } => commands::cmd_graph(n, format, unsafe_large),
        Command::Render {
            n,
            m,
            index,
            seed,
            periods,
            format,
            unsafe_large,
        } => commands::cmd_render(n, m, index, seed, periods, format, unsafe_large),
        Command::Verify {
            suite,
            seed,
            n_max,
            m_max,
            r_max,
            k_max,
            samples,
            unsafe_large,
        } => verify::cmd_verify(
            suite,
            seed,
            n_max,
            m_max,
            r_max,
            k_max,
            samples,
            unsafe_large,
        ),
    }
}
