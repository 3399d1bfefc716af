//! Command-line grammar.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "xychain", version, about = "Entanglement dynamics of cyclic XY chains in a transverse field")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Momentum modes, quasiparticle energies and BCS weights.
    Modes(ModesArgs),
    /// Time series of the one- and two-site entanglement at fixed field.
    Evolve(EvolveArgs),
    /// Maxima over a time window as a function of the field, with peak detection.
    Scan(ScanArgs),
    /// Fast path against the dense oracle on random instances.
    Validate(ValidateArgs),
    /// Closed forms and limits tabulated on a grid.
    #[command(subcommand)]
    Analytic(AnalyticCommand),
}

/// Chain parameters; exactly one of `--g` and `--gamma`.
#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("pairing").required(true).args(["g", "gamma"])))]
pub struct ChainArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub v: f64,
    #[arg(long)]
    pub g: Option<f64>,
    /// Anisotropy g/v.
    #[arg(long)]
    pub gamma: Option<f64>,
}

/// `n`, `v` and the pairing of a field sweep.
#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("pairing").required(true).args(["g", "gamma"])))]
pub struct TemplateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub v: f64,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModesArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// List all n modes instead of the primed ones.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Window end, in units of 1/v when v > 0.
    #[arg(long, default_value_t = 40.0)]
    pub t_max: f64,
    /// Step in the same units; defaults to a resolution set by the largest quasiparticle energy.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Append dense-oracle columns and their maximum deviations.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub chain: TemplateArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub b_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b_max: Option<f64>,
    #[arg(long)]
    pub b_steps: Option<usize>,
    /// Window end, in units of 1/v when v > 0.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Upper bound on the step, same units.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub prominence: Option<f64>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Chain sizes, as a range `2..10` or a list `2,5,7`.
    #[arg(long, default_value = "2..10")]
    pub n: SizeList,
    #[arg(long, default_value_t = 50)]
    pub draws: usize,
    /// Random times per instance.
    #[arg(long, default_value_t = 64)]
    pub times: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub v: f64,
}

#[derive(Debug, Subcommand)]
pub enum AnalyticCommand {
    /// Two-site maximum of C1 against s = b/g.
    C1maxN2 {
        #[arg(long, allow_hyphen_values = true)]
        s: Grid,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Three-site maximum of C1 against s = (b - v/2)/g.
    C1maxN3 {
        #[arg(long, allow_hyphen_values = true)]
        s: Grid,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Three-site maximum of C2 and its type.
    C2maxN3 {
        #[arg(long, allow_hyphen_values = true)]
        s: Grid,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Three-site C2 as a function of the flip probability.
    #[command(name = "c2-of-p-n3")]
    C2OfPN3 {
        #[arg(long)]
        p: Grid,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Resonance limit of C1 for each chain size.
    ResonanceC1 {
        #[arg(long)]
        n: SizeList,
    },
    /// Type I and type II resonance limits of C2 for every primed mode.
    ResonanceC2 {
        #[arg(long)]
        n: usize,
    },
    /// Single-mode harmonic limit at b = v cos ω_k.
    Harmonic {
        #[arg(long)]
        n: usize,
        /// Half-integer mode label, e.g. 0.5 or 3/2.
        #[arg(long)]
        k: String,
        #[arg(long)]
        g: f64,
        #[arg(long)]
        t: Grid,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Isotropic zero-field chain.
    Isotropic {
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long)]
        t: Grid,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Short-time expansions of p, C1 and C2.
    ShortTime {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long)]
        g: f64,
        #[arg(long)]
        t: Grid,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Fields of the four-site commensurability dips, in units of v.
    DipN4 {
        #[arg(long)]
        gamma: Grid,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
    /// Large-field maxima of C1 and C2.
    LargeField {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        b: Grid,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 601)]
        steps: usize,
    },
}

/// `a..b` (inclusive, sampled with `--steps`), a comma list, or one value.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Range(f64, f64),
    List(Vec<f64>),
}

impl Grid {
    pub fn points(&self, steps: usize) -> Result<Vec<f64>, String> {
        match self {
            Grid::List(v) => Ok(v.clone()),
            Grid::Range(a, b) => {
                if steps < 2 {
                    return Err(format!("a range needs at least 2 steps, got {steps}"));
                }
                let h = (b - a) / (steps - 1) as f64;
                Ok((0..steps).map(|i| if i + 1 == steps { *b } else { a + i as f64 * h }).collect())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Grid::Range(a, b) => format!("{a:?}..{b:?}"),
            Grid::List(v) => v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","),
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| {
            let v: f64 = x.trim().parse().map_err(|_| format!("not a number: {x:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("not finite: {x:?}"))
            }
        };
        if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (num(a)?, num(b)?);
            if a >= b {
                return Err(format!("empty range {s}"));
            }
            return Ok(Grid::Range(a, b));
        }
        Ok(Grid::List(s.split(',').map(num).collect::<Result<_, _>>()?))
    }
}

/// Inclusive integer range `a..b` or comma list.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeList(pub Vec<usize>);

impl FromStr for SizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let int = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("not a chain size: {x:?}"));
        if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (int(a)?, int(b)?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            return Ok(SizeList((a..=b).collect()));
        }
        Ok(SizeList(s.split(',').map(int).collect::<Result<_, _>>()?))
    }
}
