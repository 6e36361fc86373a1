use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lonely_spectrum::Rational;
use num_bigint::BigInt;

/// Exact computations on the Lonely Runner spectrum.
///
/// For integer speeds v_1..v_n the maximum loneliness ML(v) is the largest
/// t-uniform lower bound on min_i ||t v_i|| over real t, and the D-value of
/// the line t v in the torus (R/Z)^n is 1/2 - ML(v), its sup-norm distance to
/// the center point (1/2, ..., 1/2). All results are exact rationals "p/q";
/// decimals are marked with "≈" and carry 12 significant digits.
///
/// Exit codes: 0 pass, 1 verification failure, 2 usage or domain error.
#[derive(Parser, Debug)]
#[command(name = "lrspec", version, max_term_width = 100)]
pub struct Cli {
    /// Worker threads for enumeration; overrides LRSPEC_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print the result record as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximum loneliness of a speed tuple.
    ///
    /// ML(v) = max over t of min_i ||t v_i||. The maximum is attained at a
    /// time t = c/(v_i + v_j) where a rising and a falling sawtooth meet, so
    /// a finite exact scan suffices. Prints ML, the smallest maximizing time
    /// in (0, 1) and D = 1/2 - ML.
    Ml(MlArgs),

    /// D-values of subgroups and subtori: the sup-norm distance from the set
    /// to the center (1/2, ..., 1/2) of the torus.
    Dist {
        #[command(subcommand)]
        kind: DistKind,
    },

    /// Lift a line to a plane torus in which it is dense.
    ///
    /// For a primitive direction v, take x in Z^n whose projection orthogonal
    /// to v is shortest. The plane spanned by v and x, saturated in Z^n,
    /// contains the line, and every point of the plane torus lies within
    /// sqrt(delta_sq) of it, where delta_sq = covol^2 / (4 |v|^2). The
    /// certificate is guaranteed when delta_sq <= eps^2.
    Lift(LiftArgs),

    /// Constants of the density argument.
    ///
    /// omega_k is the volume of the unit k-ball, ell(k, V) the k-th root of
    /// the volume bound for a lattice with covolume V, and c_star(n, k, eps)
    /// the squared volume beyond which every k-dimensional subtorus of
    /// (R/Z)^n is eps-dense in a (k+1)-dimensional one. The threshold for
    /// n runners uses eps = 1/(n(n+1)) and is compared against n^(5n/2)
    /// exactly, from rational enclosures of pi.
    Constants(ConstantsArgs),

    /// List canonical speed tuples: 1 <= v_1 <= ... <= v_n, gcd 1,
    /// sum v_i^2 <= max-vol2, in lexicographic order.
    Enumerate(EnumerateArgs),

    /// Build the table of D-values of lines with squared volume up to a bound.
    ///
    /// Every canonical tuple is evaluated in parallel blocks keyed by v_1;
    /// blocks merge commutatively so the output does not depend on the thread
    /// count. Keys are listed from the largest down, with multiplicities
    /// counted over canonical classes and up to 8 witnesses each.
    Spectrum(SpectrumArgs),

    /// Check statements about the spectrum.
    Verify {
        #[command(subcommand)]
        check: VerifyCmd,
    },

    /// Observational reports on a spectrum table.
    Report {
        #[command(subcommand)]
        kind: ReportCmd,
    },

    /// Run every reproduction check and write tables, flat exports, a
    /// manifest and a separate timings file to a directory.
    Repro(ReproArgs),
}

#[derive(Args, Debug)]
pub struct MlArgs {
    /// Integer speeds; signs are dropped, zero is rejected.
    #[arg(required = true, allow_negative_numbers = true)]
    pub speeds: Vec<BigInt>,
}

#[derive(Subcommand, Debug)]
pub enum DistKind {
    /// Finite cyclic subgroup generated by a rational point.
    ///
    /// D is the minimum over the multiples k g (k = 0..order-1) of the
    /// sup-norm distance to the center.
    Cyclic {
        /// Coordinates "p/q" of the generator.
        #[arg(required = true, allow_hyphen_values = true)]
        generator: Vec<Rational>,
    },
    /// Line spanned by integer speeds, optionally shifted to a coset.
    ///
    /// Without a shift this is 1/2 - ML(v). With a shift h it is the
    /// min over t of max_i ||t v_i + h_i - 1/2||.
    Line {
        #[arg(required = true, allow_negative_numbers = true)]
        speeds: Vec<BigInt>,
        /// Coset offset, one "p/q" per coordinate.
        #[arg(long, num_args = 1.., allow_hyphen_values = true)]
        shift: Option<Vec<Rational>>,
    },
    /// Plane subtorus spanned by two integer vectors: `plane u... -- v...`.
    ///
    /// The basis is saturated and reduced, and D is the minimum over the
    /// vertices of the arrangement of lines where two coordinates of
    /// alpha u + beta v reach the same distance from 1/2.
    Plane {
        #[arg(required = true, allow_negative_numbers = true)]
        u: Vec<BigInt>,
        #[arg(required = true, last = true, allow_negative_numbers = true)]
        v: Vec<BigInt>,
    },
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    /// Primitive integer direction, dimension 2 to 4.
    #[arg(long = "v", required = true, num_args = 1.., allow_negative_numbers = true)]
    pub v: Vec<BigInt>,
    /// Density radius to certify.
    #[arg(long)]
    pub eps: Rational,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// Number of runners.
    #[arg(long)]
    pub n: u32,
    /// Subtorus dimension.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Density radius for c_star; defaults to 2/(n(n+1)).
    #[arg(long)]
    pub eps: Option<Rational>,
    /// Covolume V for ell(k, V).
    #[arg(long, default_value = "1")]
    pub volume: Rational,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Bound on sum v_i^2.
    #[arg(long = "max-vol2")]
    pub max_vol2: u64,
    /// Print only the number of tuples.
    #[arg(long)]
    pub count: bool,
    /// Emit every distinct ordering instead of the sorted representative.
    #[arg(long)]
    pub all_orderings: bool,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "max-vol2")]
    pub max_vol2: u64,
    /// Table file (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Flat CSV export; defaults to the table path with extension csv.
    #[arg(long)]
    pub flat: Option<PathBuf>,
    /// Sidecar recording finished blocks; an existing file is resumed.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Count every distinct ordering instead of sorted classes.
    #[arg(long)]
    pub all_orderings: bool,
    /// Report tuples processed on stderr.
    #[arg(long)]
    pub progress: bool,
}

/// A table read from disk, or built on the fly.
#[derive(Args, Debug, Clone)]
pub struct TableSource {
    /// Table written by `spectrum`.
    #[arg(long, conflicts_with_all = ["n", "max_vol2"])]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "max-vol2")]
    pub max_vol2: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Lines in (R/Z)^2 have D-values exactly {0} ∪ {1/(4s+2) : s >= 1}.
    ///
    /// A coprime pair (a, b) with a + b even has D = 0; with a + b odd the
    /// value is 1/(2(a+b)). Checks that every key of the 2-runner table has
    /// this form and that 1/(4s+2) appears for every (1, 2s) inside the bound.
    S2 {
        #[arg(long, conflicts_with = "max_vol2")]
        table: Option<PathBuf>,
        #[arg(long = "max-vol2", default_value_t = 1_000_000)]
        max_vol2: u64,
    },
    /// ML(8, 4r+3, 4r+11, 4r+19) = (2r+7)/(8r+30) for 0 <= r <= r-max.
    ///
    /// This family sits strictly below 1/4 yet is not of the form s/(4s+1).
    FanSun {
        #[arg(long = "r-max", default_value_t = 100)]
        r_max: u64,
    },
    /// Values of ML in (0, 1/n) against the window forms s/(ns + k).
    ///
    /// strict: only k = 1 is allowed (proven for n = 3).
    /// amended: 1 <= k <= n.
    Window {
        #[arg(value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        source: TableSource,
        /// Print the classification but exit 0 regardless.
        #[arg(long)]
        report_only: bool,
    },
    /// No line in (R/Z)^3 has D-value 7/50, although the cyclic subgroup
    /// generated by (12/25, 9/25) does.
    ///
    /// Phase A scans every canonical triple with sum v_i^2 <= cutoff. Phase B
    /// covers longer lines: each lies within 1/25 - eps of a plane subtorus,
    /// whose D-value is 1/6 or at most 1/10; the first gives D >= 1/6 and the
    /// second D <= 1/10 + 1/25 - eps < 7/50. The density step needs
    /// cutoff * (omega_2 (1/25 - eps)^2)^2 > 1, checked with a rational
    /// lower bound for pi.
    Prop81 {
        #[arg(long, default_value = "7/50")]
        target: Rational,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Squared-volume cutoff of the exhaustive phase.
        #[arg(long = "cutoff-vol2", default_value_t = 199 * 199)]
        cutoff_vol2: u64,
        /// Lower end of the rational enclosure of pi.
        #[arg(long, requires = "pi_upper")]
        pi_lower: Option<Rational>,
        #[arg(long, requires = "pi_lower")]
        pi_upper: Option<Rational>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Amended,
}

#[derive(Subcommand, Debug)]
pub enum ReportCmd {
    /// Keys just above and just below each target.
    ///
    /// D-values of plane subtori are limits of D-values of lines from above
    /// only, so the below-counts near them should stay small while the
    /// above-counts grow with the bound.
    Acc {
        #[command(flatten)]
        source: TableSource,
        /// Targets; defaults to 1/6, 1/10, 1/14.
        #[arg(long, num_args = 1..)]
        targets: Option<Vec<Rational>>,
        #[arg(long, default_value = "1/100")]
        window: Rational,
    },
    /// Keys whose multiplicity reaches a threshold. Keys that are D-values of
    /// plane subtori are flagged as expected to grow without bound.
    Mult {
        #[command(flatten)]
        source: TableSource,
        #[arg(long, default_value_t = 2)]
        threshold: u64,
    },
}

#[derive(Args, Debug)]
pub struct ReproArgs {
    #[arg(long)]
    pub out: PathBuf,
}
