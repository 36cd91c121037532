use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use supercong::arith::is_prime;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read config file {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config file {path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("verifier rejected its input: {0}")]
    Verifier(#[from] supercong::Error),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Key,
    Gen1,
    Gen2,
    Hyp,
    Main,
    Granville,
    LemmaY,
    LemmaInd,
    LemmaBase,
    IntroCoeff,
    P2,
    All,
}

impl Target {
    pub const CONCRETE: [Target; 11] = [
        Target::Key,
        Target::Gen1,
        Target::Gen2,
        Target::Hyp,
        Target::Main,
        Target::Granville,
        Target::LemmaY,
        Target::LemmaInd,
        Target::LemmaBase,
        Target::IntroCoeff,
        Target::P2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Key => "key",
            Target::Gen1 => "gen1",
            Target::Gen2 => "gen2",
            Target::Hyp => "hyp",
            Target::Main => "main",
            Target::Granville => "granville",
            Target::LemmaY => "lemma-y",
            Target::LemmaInd => "lemma-ind",
            Target::LemmaBase => "lemma-base",
            Target::IntroCoeff => "intro-coeff",
            Target::P2 => "p2",
            Target::All => "all",
        }
    }

    pub fn odd_primes_only(self) -> bool {
        matches!(self, Target::Key | Target::Hyp | Target::Main | Target::IntroCoeff)
    }

    pub fn uses_digit_context(self) -> bool {
        matches!(self, Target::Gen1 | Target::Gen2 | Target::LemmaY | Target::LemmaInd | Target::LemmaBase)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BSpec {
    All,
    List(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GranvilleConfig {
    pub samples: usize,
    pub seed: u64,
    pub n_max: u64,
    pub j_max: u32,
    pub l_max: u32,
}

impl Default for GranvilleConfig {
    fn default() -> Self {
        GranvilleConfig { samples: 1000, seed: 20_240_601, n_max: 1_000_000, j_max: 6, l_max: 6 }
    }
}

/// A fully resolved run. Absent `p`, `n` and `a` mean the per-target defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub target: Target,
    pub p: Option<Vec<u64>>,
    pub b: BSpec,
    pub n: Option<Vec<u32>>,
    pub a: Option<Vec<u32>>,
    pub i_max: Option<i64>,
    pub granville: GranvilleConfig,
    pub table: bool,
    pub format: Format,
    #[serde(skip)]
    pub jobs: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(target: Target) -> Self {
        SweepConfig {
            target,
            p: None,
            b: BSpec::All,
            n: None,
            a: None,
            i_max: None,
            granville: GranvilleConfig::default(),
            table: false,
            format: Format::Json,
            jobs: default_jobs(),
            out: None,
        }
    }

    /// Flags override the config file, which overrides defaults.
    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let target = match cli.target.or(file.target) {
            Some(t) => t,
            None => return invalid("no target given (positional argument or `target` in the config file)"),
        };
        let mut cfg = SweepConfig::new(target);
        cfg.p = pick_list(cli.p.as_deref(), file.p.as_ref(), "p")?;
        cfg.n = pick_list(cli.n.as_deref(), file.n.as_ref(), "n")?.map(to_u32);
        cfg.a = pick_list(cli.a.as_deref(), file.a.as_ref(), "a")?.map(to_u32);
        cfg.b = match (cli.b.as_deref(), file.b.as_ref()) {
            (Some(s), _) => parse_b(s)?,
            (None, Some(ListField::Text(s))) => parse_b(s)?,
            (None, Some(ListField::Items(v))) => BSpec::List(v.clone()),
            (None, None) => BSpec::All,
        };
        cfg.i_max = cli.i_max.or(file.i_max);
        if let Some(j) = cli.jobs.or(file.jobs) {
            cfg.jobs = j;
        }
        cfg.format = cli.format.or(file.format).unwrap_or_default();
        cfg.out = cli.out.or(file.out);
        cfg.table = cli.table || file.table.unwrap_or(false);
        let g = &mut cfg.granville;
        g.samples = cli.samples.or(file.samples).unwrap_or(g.samples);
        g.seed = cli.seed.or(file.seed).unwrap_or(g.seed);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.jobs == 0 {
            return invalid("--jobs must be at least 1");
        }
        if let Some(ps) = &self.p {
            if ps.is_empty() {
                return invalid("empty p list");
            }
            if let Some(q) = ps.iter().find(|&&q| !is_prime(q)) {
                return invalid(format!("p = {q} is not prime"));
            }
            if self.target.odd_primes_only() && ps.contains(&2) {
                return invalid(format!("target {} needs odd primes", self.target.name()));
            }
            if self.target == Target::P2 && ps != &[2] {
                return invalid("target p2 only runs at p = 2");
            }
        }
        if let BSpec::List(bs) = &self.b {
            if bs.is_empty() {
                return invalid("empty b list");
            }
            for p in self.p.clone().unwrap_or_default() {
                if let Some(b) = bs.iter().find(|&&b| b == 0 || b >= p) {
                    return invalid(format!("b = {b} is outside 1..=p-1 for p = {p}"));
                }
            }
        }
        if let Some(ns) = &self.n {
            if ns.is_empty() || ns.contains(&0) {
                return invalid("n values must be at least 1");
            }
            if let Some(a_list) = &self.a {
                let n_max = *ns.iter().max().expect("nonempty");
                if let Some(a) = a_list.iter().find(|&&a| a < n_max) {
                    return invalid(format!("a = {a} is smaller than n = {n_max}"));
                }
            }
        }
        if self.a.as_ref().is_some_and(|a| a.is_empty()) {
            return invalid("empty a list");
        }
        let g = &self.granville;
        if g.samples == 0 && self.target == Target::Granville {
            return invalid("--samples must be positive");
        }
        Ok(())
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn to_u32(v: Vec<u64>) -> Vec<u32> {
    v.into_iter().map(|x| x.min(u32::MAX as u64) as u32).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ListField {
    Items(Vec<u64>),
    Text(String),
}

/// Config file schema; every key mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    target: Option<Target>,
    p: Option<ListField>,
    b: Option<ListField>,
    n: Option<ListField>,
    a: Option<ListField>,
    i_max: Option<i64>,
    jobs: Option<usize>,
    format: Option<Format>,
    out: Option<PathBuf>,
    table: Option<bool>,
    samples: Option<usize>,
    seed: Option<u64>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|source| ConfigError::Toml { path: path.into(), source })
    }
}

fn pick_list(flag: Option<&str>, file: Option<&ListField>, name: &str) -> Result<Option<Vec<u64>>, ConfigError> {
    match (flag, file) {
        (Some(s), _) => parse_list(s, name).map(Some),
        (None, Some(ListField::Text(s))) => parse_list(s, name).map(Some),
        (None, Some(ListField::Items(v))) => {
            let mut v = v.clone();
            v.sort_unstable();
            v.dedup();
            Ok(Some(v))
        }
        (None, None) => Ok(None),
    }
}

fn parse_b(s: &str) -> Result<BSpec, ConfigError> {
    if s.trim().eq_ignore_ascii_case("all") {
        Ok(BSpec::All)
    } else {
        parse_list(s, "b").map(BSpec::List)
    }
}

/// `"1,2,5..7"` or `"1..=3"`: comma-separated values and inclusive ranges,
/// returned sorted without duplicates.
pub fn parse_list(s: &str, name: &str) -> Result<Vec<u64>, ConfigError> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| ConfigError::Invalid(format!("bad value `{t}` in --{name}")))
    };
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi || hi - lo > 10_000 {
                return invalid(format!("bad range `{item}` in --{name}"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(num(item)?);
        }
    }
    if out.is_empty() {
        return invalid(format!("empty list for --{name}"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Exact congruence sweeps over small parameter boxes.
#[derive(Debug, Parser)]
#[command(name = "verify", version, about)]
pub struct Cli {
    /// Family to verify.
    #[arg(value_enum)]
    pub target: Option<Target>,
    /// Primes, e.g. `3,5` or `2..7`.
    #[arg(long)]
    pub p: Option<String>,
    /// Digit multipliers, or `all` for 1..=p-1.
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    /// Defaults to n..=n+2.
    #[arg(long)]
    pub a: Option<String>,
    /// Upper bound on i; negative gives an empty sweep.
    #[arg(long, allow_negative_numbers = true)]
    pub i_max: Option<i64>,
    #[arg(long, env = "VERIFY_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Include every cell's valuation margin in the report.
    #[arg(long)]
    pub table: bool,
    /// Granville samples per prime.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}
