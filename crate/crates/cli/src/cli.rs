use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use northcott_lab::heights::DEFAULT_TOL;

#[derive(Debug, Parser)]
#[command(name = "northcott-lab", version, about = "Heights, twists and orbit experiments on elliptic curves")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// Target radius for canonical heights.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Add wall-clock timing to the report (outside the deterministic payload).
    #[arg(long, global = true)]
    pub timing: bool,
    /// key=value file mirroring the flags; explicit flags win.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Naive height h(x(P)).
    Height(PointArgs),
    /// Néron–Tate height with a certified radius.
    CanonicalHeight(PointArgs),
    /// Trace of a point down a Galois extension.
    Trace(TraceArgs),
    /// Zero-trace point of E(F(√d)) to the twist E_d(F), or back with --inverse.
    TwistTransfer(TransferArgs),
    /// Points with h(x) ≤ T in the search box.
    Enumerate(EnumerateArgs),
    /// Bounded-height points with x = ζₙ + ζₙ⁻¹ on the shifted curve E_k.
    QtrFamily(FamilyArgs),
    /// Least k with k³ + ka + b > 8 + 12k + 2(3k² + |a|).
    Kab(KabArgs),
    /// Forward orbit under an endomorphism.
    Orbit(OrbitArgs),
    /// Backward chain of rational halves and the height decay along it.
    BackChain(BackChainArgs),
    /// Runs every invariant check at desk scale.
    VerifySuite,
    /// Multiplicative dependence of two nonzero rationals.
    MultDep(MultDepArgs),
    /// The points (±p, √(±p(p²+1))) on y² = x³ + x.
    CcDemo(CcArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PointArgs {
    /// Curve literal `a,b,c over F` for y² = x³ + ax² + bx + c.
    #[arg(long)]
    pub curve: String,
    /// Point literal `(x,y)` or `inf`.
    #[arg(long)]
    pub point: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TraceArgs {
    /// Extension `L/F`, e.g. `Q(sqrt,10)/Q`.
    #[arg(long)]
    pub ext: String,
    #[arg(long)]
    pub curve: String,
    #[arg(long)]
    pub point: String,
    /// Twist parameter for the transfer of kernel points; defaults to d of a quadratic L.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransferArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    /// Extension `L/F`; defaults to `Q(sqrt,d)/Q`.
    #[arg(long)]
    pub ext: Option<String>,
    /// Curve over F; the point is read on it over L (or on the twist with --inverse).
    #[arg(long)]
    pub curve: String,
    #[arg(long)]
    pub point: String,
    /// Map a point of E_d(F) back to the trace kernel.
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub curve: String,
    /// Q or a quadratic field.
    #[arg(long, default_value = "Q")]
    pub field: String,
    /// Height bound T.
    #[arg(long = "T")]
    pub t: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long)]
    pub k: i64,
    /// Number of points; conductors are the primes from 5 on.
    #[arg(long = "N")]
    pub n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KabArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrbitArgs {
    /// `[m]` or a Gaussian integer such as `1+i`.
    #[arg(long, default_value = "[2]", allow_hyphen_values = true)]
    pub map: String,
    #[arg(long)]
    pub curve: String,
    #[arg(long)]
    pub point: String,
    /// Maximum number of applications of the map.
    #[arg(long, default_value_t = 50)]
    pub max: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BackChainArgs {
    #[arg(long)]
    pub curve: String,
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MultDepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CcArgs {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11")]
    pub primes: Vec<u64>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Height(_) => "height",
            Command::CanonicalHeight(_) => "canonical-height",
            Command::Trace(_) => "trace",
            Command::TwistTransfer(_) => "twist-transfer",
            Command::Enumerate(_) => "enumerate",
            Command::QtrFamily(_) => "qtr-family",
            Command::Kab(_) => "kab",
            Command::Orbit(_) => "orbit",
            Command::BackChain(_) => "back-chain",
            Command::VerifySuite => "verify-suite",
            Command::MultDep(_) => "mult-dep",
            Command::CcDemo(_) => "cc-demo",
        }
    }

    /// The subcommand's own flags as a JSON object.
    pub fn config(&self) -> serde_json::Value {
        let v = match self {
            Command::Height(a) | Command::CanonicalHeight(a) => serde_json::to_value(a),
            Command::Trace(a) => serde_json::to_value(a),
            Command::TwistTransfer(a) => serde_json::to_value(a),
            Command::Enumerate(a) => serde_json::to_value(a),
            Command::QtrFamily(a) => serde_json::to_value(a),
            Command::Kab(a) => serde_json::to_value(a),
            Command::Orbit(a) => serde_json::to_value(a),
            Command::BackChain(a) => serde_json::to_value(a),
            Command::VerifySuite => Ok(serde_json::json!({})),
            Command::MultDep(a) => serde_json::to_value(a),
            Command::CcDemo(a) => serde_json::to_value(a),
        };
        v.expect("flag structs serialize")
    }
}
