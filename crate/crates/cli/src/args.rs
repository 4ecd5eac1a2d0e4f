use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "symchar", version, about = "Symmetric supercharacters on (Z/nZ)^d")]
pub struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Cap on superclass evaluations for one job
    #[arg(long, global = true, default_value_t = symchar::DEFAULT_BUDGET)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List orbit representatives and orbit sizes in enumeration order
    Orbits {
        n: i64,
        d: usize,
        #[arg(long, value_enum, default_value_t = Listing::Text)]
        format: Listing,
    },

    /// Evaluate sigma_X(y): exact counts and the complex value
    #[command(allow_negative_numbers = true)]
    Eval {
        n: i64,
        #[arg(required = true, num_args = 1..)]
        x: Vec<i64>,
        #[arg(last = true, required = true)]
        y: Vec<i64>,
    },

    /// Write the image of sigma_X as a point list
    #[command(allow_negative_numbers = true)]
    Image {
        n: i64,
        #[arg(required = true, num_args = 1..)]
        x: Vec<i64>,
        /// Evaluate at every y instead of one y per superclass
        #[arg(long)]
        full_group: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Points::Csv)]
        format: Points,
    },

    /// Rasterize the image of sigma_X to a grayscale PNG
    #[command(allow_negative_numbers = true)]
    Render {
        n: i64,
        #[arg(required = true, num_args = 1..)]
        x: Vec<i64>,
        /// Plot extent, [-range, range] on both axes
        #[arg(long)]
        range: f64,
        /// Pixels per unit
        #[arg(long)]
        unit_res: u32,
        #[arg(long)]
        full_group: bool,
        #[arg(short, long, default_value = "image.png")]
        output: PathBuf,
    },

    /// Run a named identity check and print JSON-lines reports
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(value_enum)]
        identity: Identity,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        d: Option<usize>,
        /// Orbit entries, for checks about a single orbit
        #[arg(long, num_args = 1..)]
        x: Option<Vec<i64>>,
        /// Walk step
        #[arg(long)]
        a: Option<i64>,
        /// Print failing reports only, plus the summary line
        #[arg(long)]
        failures_only: bool,
    },

    /// Row-reduce the orbit matrix of X over Z/nZ
    #[command(allow_negative_numbers = true)]
    Reduce {
        n: i64,
        #[arg(required = true, num_args = 1..)]
        x: Vec<i64>,
        /// JSON file with the expected B (array of integer rows)
        #[arg(long)]
        expect_b: Option<PathBuf>,
    },

    /// Build the supercharacter table
    Table {
        n: i64,
        d: usize,
        /// Print symmetry and unitarity residuals of the normalized table
        #[arg(long)]
        check_unitary: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Compare the image of S_d(0,...,0,a) mod n with S_d(0,...,0,1) mod n/gcd(n,a)
    #[command(allow_negative_numbers = true)]
    Walk { n: i64, d: usize, a: i64 },

    /// Solve a j + b k + d j k = gcd(n, d) mod n
    #[command(allow_negative_numbers = true)]
    Solve { a: i64, b: i64, d: i64, n: i64 },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Listing {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Points {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Conjugate,
    Real,
    Translation,
    Constancy,
    Permanent,
    Dihedral,
    FullUnion,
    Spike,
    PairDifference,
    Hypocycloid,
    Walk,
}
