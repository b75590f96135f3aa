use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Parametrized probability measures, their quantum models, and the
/// diagnostics built on them.
///
/// Built-in sources: `torus` (Bell state, linear analyzers), `sphere`
/// (singlet, elliptical analyzers), `bb84-alpha` (polarization-only BB84).
/// Anything else is read as a JSON file. Analyzer parameters use the
/// half-angle convention: a parameter theta passes polarization theta/2.
#[derive(Debug, Parser)]
#[command(name = "tracerule", version, about, long_about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub group: Group,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// JSON object of option overrides; explicit flags win over it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Seed for randomized sampling, recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Also write tabular results as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Quantum model files.
    #[command(subcommand)]
    Model(ModelCmd),
    /// PPM tabulation, distances, envelopment.
    #[command(subcommand)]
    Ppm(PpmCmd),
    /// Canonical models reproducing a tabulated PPM.
    #[command(subcommand)]
    Canonical(CanonicalCmd),
    /// Canonical models respecting a prep/meas split.
    #[command(subcommand)]
    Split(SplitCmd),
    /// Holevo bound and mutual information of a channel.
    Holevo(HolevoArgs),
    /// BB84 models and the laser-mismatch attack.
    #[command(subcommand)]
    Bb84(Bb84Cmd),
    /// Bell correlations, contours, and rotation orbits.
    #[command(subcommand)]
    Bell(BellCmd),
    /// Bipartite checks: no-signaling, local reach, marginal invariance.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Level sets of a PPM.
    #[command(subcommand)]
    Levelset(LevelsetCmd),
}

#[derive(Debug, Subcommand)]
pub enum ModelCmd {
    /// Report every invariant residual of a model.
    Validate(ModelValidateArgs),
}

#[derive(Debug, Subcommand)]
pub enum PpmCmd {
    /// Tabulate the PPM a model generates.
    Generate(PpmGenerateArgs),
    /// Supremum L1 distance between two PPMs over a grid.
    Distance(PpmDistanceArgs),
    /// Check that one tabulated PPM envelops another.
    Envelop(PpmEnvelopArgs),
}

#[derive(Debug, Subcommand)]
pub enum CanonicalCmd {
    /// One basis vector per parameter point.
    Build(CanonicalBuildArgs),
}

#[derive(Debug, Subcommand)]
pub enum SplitCmd {
    /// One basis vector per preparation point.
    Build(SplitBuildArgs),
}

#[derive(Debug, Subcommand)]
pub enum Bb84Cmd {
    /// Spectral side channel of a four-laser transmitter.
    Attack(Bb84AttackArgs),
    /// The spectral model envelops the polarization model.
    Envelop(Bb84EnvelopArgs),
}

#[derive(Debug, Subcommand)]
pub enum BellCmd {
    /// Contour table of the torus PPM (CSV).
    Scan(BellScanArgs),
    /// Maximize the CHSH combination.
    Max(BellMaxArgs),
    /// Rotation taking one sphere pair to another.
    Orbit(BellOrbitArgs),
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// One-sided marginals independent of the other side's setting.
    Nosignal(CheckArgs),
    /// Every one-sided move can be compensated by the other side.
    Reach(CheckArgs),
    /// One-sided marginals constant over the whole grid.
    Marginals(CheckArgs),
}

#[derive(Debug, Subcommand)]
pub enum LevelsetCmd {
    /// Grid points whose measure equals the one at a reference point.
    Probe(LevelsetProbeArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ModelValidateArgs {
    /// Built-in model name or model JSON file.
    #[arg(long)]
    pub model: String,
    /// Grid resolution for built-in models.
    #[arg(long, default_value_t = 8)]
    pub res: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PpmGenerateArgs {
    /// Built-in model name or model JSON file.
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 8)]
    pub res: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PpmDistanceArgs {
    /// Built-in PPM name or PPM table file.
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value_t = 8)]
    pub res: usize,
    /// Compare on this many seeded random points instead of a grid.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PpmEnvelopArgs {
    /// Enveloping (finer) PPM table.
    #[arg(long)]
    pub fine: PathBuf,
    /// Enveloped (coarser) PPM table; its points form the check grid.
    #[arg(long)]
    pub coarse: PathBuf,
    /// Injection and outcome map; identity maps when omitted.
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CanonicalBuildArgs {
    /// Built-in PPM name or PPM table file.
    #[arg(long)]
    pub ppm: String,
    #[arg(long, default_value_t = 8)]
    pub res: usize,
    /// Block size of the mixed canonical model; 1 gives pure states.
    #[arg(long, default_value_t = 1)]
    pub multiplicity: usize,
    /// Write the constructed model as a model JSON file.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SplitBuildArgs {
    /// Built-in PPM name or PPM table file.
    #[arg(long)]
    pub ppm: String,
    #[arg(long, default_value_t = 8)]
    pub res: usize,
    /// Preparation component indices (comma separated, may be empty).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub prep: Option<Vec<usize>>,
    /// Measurement component indices.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub meas: Option<Vec<usize>>,
    /// Write the constructed model as a model JSON file.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HolevoArgs {
    /// Channel JSON file, or `bb84` for the uniform four-state ensemble.
    #[arg(long)]
    pub channel: String,
    /// Analyzer angle of the built-in `bb84` channel.
    #[arg(long, default_value_t = 0.0)]
    pub theta_prime: f64,
    /// Add the measurement-diagonal model to the bound's model family.
    #[arg(long, default_value_t = false)]
    pub diagonal: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Bb84AttackArgs {
    /// Nominal wavelength in metres.
    #[arg(long, default_value_t = 1.5e-6)]
    pub wavelength_m: f64,
    /// Pulse duration in seconds.
    #[arg(long, default_value_t = 1e-9)]
    pub pulse_s: f64,
    /// Laser i is centred at w0 (1 + i * detune_frac).
    #[arg(long, default_value_t = 1e-5)]
    pub detune_frac: f64,
    #[arg(long, default_value_t = 2048)]
    pub grid_points: usize,
    /// Off-diagonal |<f_i, f_k>|^2 below this makes the lasers distinguishable.
    #[arg(long, default_value_t = 1e-3)]
    pub threshold: f64,
    /// sigma_omega = sigma_factor / duration.
    #[arg(long, default_value_t = 0.5)]
    pub sigma_factor: f64,
    /// Laser bank JSON; overrides wavelength and detuning.
    #[arg(long)]
    pub bank: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Bb84EnvelopArgs {
    /// Number of uniform polarization angles.
    #[arg(long, default_value_t = 16)]
    pub angles: usize,
    /// Spectral basis size.
    #[arg(long, default_value_t = 8)]
    pub modes: usize,
    /// Mode used as Alice's spectrum (0-based).
    #[arg(long, default_value_t = 0)]
    pub prep_mode: usize,
    /// Mode Bob's detector accepts (0-based).
    #[arg(long, default_value_t = 0)]
    pub meas_mode: usize,
    #[arg(long, default_value_t = 1.5e-6)]
    pub wavelength_m: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub pulse_s: f64,
    #[arg(long, default_value_t = 2048)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BellScanArgs {
    /// Grid points per torus angle.
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchArg {
    Free,
    Diagonal,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BellMaxArgs {
    #[arg(long, default_value_t = 16)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value_t = SearchArg::Free)]
    pub search: SearchArg,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BellOrbitArgs {
    /// theta_A,phi_A,theta_B,phi_B of the first pair.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pair_a: Vec<f64>,
    /// theta_A,phi_A,theta_B,phi_B of the second pair.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pair_b: Vec<f64>,
    /// Admissible difference of the two pair angles.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereGridArg {
    /// Eight cube vertices per side.
    Cube,
    /// res colatitudes times res longitudes per side.
    Latlong,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CheckArgs {
    /// `torus`, `sphere`, or a PPM table file.
    #[arg(long)]
    pub ppm: String,
    /// Points per side (torus angles; sphere latitude-longitude rows).
    #[arg(long, default_value_t = 16)]
    pub res: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Sphere side grid; defaults to cube for reach, latlong otherwise.
    #[arg(long, value_enum)]
    pub sphere_grid: Option<SphereGridArg>,
    /// Side-A component indices of a table file.
    #[arg(long, value_delimiter = ',')]
    pub a_components: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub b_components: Option<Vec<usize>>,
    /// Side-A outcome labels; joint labels are A then B, B fastest.
    #[arg(long, value_delimiter = ',')]
    pub a_outcomes: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub b_outcomes: Option<Vec<String>>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct LevelsetProbeArgs {
    /// Built-in PPM name or PPM table file.
    #[arg(long)]
    pub ppm: String,
    /// Reference point coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Vec<f64>,
    #[arg(long, default_value_t = 16)]
    pub res: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}
