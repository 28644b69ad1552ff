use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact lattice operations and verification for weak shift-continuous
/// topologies on the bicyclic monoid with zero.
///
/// Descriptors are built-in names (tau_min, tau_c, tau_L, tau_R, top,
/// frechet, F_omega, F_evens, F_odds, F_mult4), inline JSON, or paths to
/// JSON files.
///
/// Exit codes: 0 computed or pass, 1 verification failure, 2 input error,
/// 3 unknown within the bound.
#[derive(Debug, Parser)]
#[command(name = "weaktop", version)]
pub struct Cli {
    /// Output style; `machine` writes one JSON report per line.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two filters, SIF¹ elements or topologies.
    Order(BinaryArgs),
    /// Least upper bound of two filters, SIF¹ elements or topologies.
    Join(BinaryArgs),
    /// Greatest lower bound of two filters, SIF¹ elements or topologies.
    Meet(BinaryArgs),
    /// Membership of a point in a basic neighbourhood of zero.
    Member(MemberArgs),
    /// Members of a row or column trace of a basic neighbourhood.
    Trace(TraceArgs),
    /// Run verification suites on a topology.
    Verify(VerifyArgs),
    /// Build a pairwise incomparable family and certify it.
    Antichain(AntichainArgs),
    /// Build a strictly increasing chain and certify it.
    Chain(ChainArgs),
}

#[derive(Debug, Args)]
pub struct BinaryArgs {
    pub left: String,
    pub right: String,
    /// Search bound for orders that are not decided exactly.
    #[arg(long, default_value_t = 40)]
    pub bound: u64,
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    #[arg(long)]
    pub topology: String,
    /// `0` or `(a,b)`.
    #[arg(long)]
    pub point: String,
    /// `n,m[,li,ri]`; an index is `k`, `g<i>:<k>`, `(<index>,<index>)`, or
    /// `-` for a slot holding 1.
    #[arg(long)]
    pub params: String,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("line").required(true).args(["row", "column"])))]
pub struct TraceArgs {
    #[arg(long)]
    pub topology: String,
    #[arg(long)]
    pub row: Option<u64>,
    #[arg(long)]
    pub column: Option<u64>,
    /// Same syntax as for `member`.
    #[arg(long)]
    pub params: String,
    /// List members up to this value.
    #[arg(long, default_value_t = 200)]
    pub upto: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Continuity,
    Hausdorff,
    Inversion,
    Accumulation,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub topology: String,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Largest cutoff and level of the target neighbourhoods.
    #[arg(long, default_value_t = 10)]
    pub depth: u64,
    /// Largest coordinate of the points separated from zero.
    #[arg(long, default_value_t = 20)]
    pub point_bound: u64,
    /// Coordinate bound for the accumulation search.
    #[arg(long, default_value_t = 40)]
    pub bound: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AntichainFlavorArg {
    Residues,
    FilterInduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChainFlavorArg {
    Tower,
    FilterChain,
}

#[derive(Debug, Args)]
pub struct AntichainArgs {
    #[arg(long)]
    pub size: u64,
    #[arg(long, value_enum, default_value_t = AntichainFlavorArg::Residues)]
    pub flavor: AntichainFlavorArg,
    #[arg(long, default_value_t = 40)]
    pub bound: u64,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long)]
    pub length: u64,
    #[arg(long, value_enum, default_value_t = ChainFlavorArg::Tower)]
    pub flavor: ChainFlavorArg,
    #[arg(long, default_value_t = 40)]
    pub bound: u64,
}
