//! Run configuration: config file, then flags on top, validated as a whole.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use spinflux::config::{ChainConfig, TermConfig};
use spinflux::oracle::DEFAULT_QUBIT_CAP;
use spinflux::{build_generic, ChainSpec, Letter, Method, Model, PauliString, PauliSum, ProductState, SiteState};

use crate::RunArgs;

pub const DEFAULT_CUTOFF: usize = 60;

/// Everything a config file may contain. Chain keys sit at the top level
/// (or come from `chain = "path"`), run keys live under `[run]`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    chain: Option<PathBuf>,
    n: Option<usize>,
    model: Option<Model>,
    couplings: Option<Vec<f64>>,
    christandl: Option<f64>,
    fields: Option<Vec<f64>>,
    terms: Option<Vec<TermConfig>>,
    #[serde(default)]
    run: RunSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    output_site: Option<usize>,
    output_letter: Option<String>,
    input_letter: Option<String>,
    register: Option<String>,
    grid: Option<String>,
    method: Option<String>,
    cutoff: Option<usize>,
    max_nodes: Option<usize>,
    correction: Option<String>,
    seed: Option<String>,
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correction {
    Raw,
    Corrected,
    Both,
}

impl std::str::FromStr for Correction {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Correction::Raw),
            "corrected" => Ok(Correction::Corrected),
            "both" => Ok(Correction::Both),
            other => bail!("unknown correction `{other}` (expected raw, corrected or both)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn times(&self) -> Vec<f64> {
        match self.points {
            1 => vec![self.start],
            n => (0..n).map(|k| self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

/// `start:stop:points`; bounds accept `pi` multiples such as `pi/4`, `3pi` or `0.5*pi`.
pub fn parse_grid(text: &str) -> Result<Grid> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, points] = parts.as_slice() else {
        bail!("grid `{text}` must look like start:stop:points");
    };
    let grid = Grid {
        start: parse_time(start)?,
        stop: parse_time(stop)?,
        points: points.trim().parse().map_err(|_| anyhow!("grid points `{points}` is not a whole number"))?,
    };
    if grid.points == 0 {
        bail!("grid needs at least one point");
    }
    if grid.stop < grid.start {
        bail!("grid stop {} is before start {}", grid.stop, grid.start);
    }
    Ok(grid)
}

pub fn parse_time(text: &str) -> Result<f64> {
    let s = text.trim().to_ascii_lowercase().replace(' ', "");
    let bad = || anyhow!("cannot read time `{text}`");
    let value = match s.find("pi") {
        None => s.parse::<f64>().map_err(|_| bad())?,
        Some(at) => {
            let head = s[..at].trim_end_matches('*');
            let factor = match head {
                "" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().map_err(|_| bad())?,
            };
            let tail = &s[at + 2..];
            let divisor = match tail.strip_prefix('/') {
                Some(d) => d.parse::<f64>().map_err(|_| bad())?,
                None if tail.is_empty() => 1.0,
                None => return Err(bad()),
            };
            factor * std::f64::consts::PI / divisor
        }
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| anyhow!("`{s}` is not a number")))
        .collect()
}

fn parse_letter(text: &str, what: &str) -> Result<Letter> {
    let letter: Letter = text.parse().map_err(|e| anyhow!("{what}: {e}"))?;
    if letter == Letter::I {
        bail!("{what} must be X, Y or Z");
    }
    Ok(letter)
}

/// Register sites `2..N`: a bit string like `00`, or `;`-separated entries that
/// are each `0`, `1` or a Bloch vector `x,y,z`.
pub fn parse_register(text: &str) -> Result<ProductState> {
    let t = text.trim();
    if !t.is_empty() && t.chars().all(|c| c == '0' || c == '1') {
        return Ok(ProductState::from_bits(t)?);
    }
    let mut sites = Vec::new();
    for entry in t.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        sites.push(match entry {
            "0" => SiteState::Bit(0),
            "1" => SiteState::Bit(1),
            v => {
                let xyz = parse_list(v)?;
                let [x, y, z] = xyz.as_slice() else {
                    bail!("register entry `{v}` is not 0, 1 or x,y,z");
                };
                SiteState::Bloch([*x, *y, *z])
            }
        });
    }
    Ok(ProductState::new(sites)?)
}

/// Validated run description.
#[derive(Clone, Debug)]
pub struct Run {
    pub spec: ChainSpec,
    pub hamiltonian: PauliSum,
    pub output_site: usize,
    pub output_letter: Letter,
    pub input_letter: Letter,
    pub register: ProductState,
    pub grid: Option<Grid>,
    pub method: Method,
    pub max_nodes: usize,
    pub correction: Correction,
    pub seed: PauliString,
    pub out: Option<PathBuf>,
}

impl Run {
    pub fn num_qubits(&self) -> usize {
        self.spec.num_qubits
    }

    pub fn require_grid(&self) -> Result<&Grid> {
        self.grid.as_ref().ok_or_else(|| anyhow!("no time grid: pass --grid start:stop:points or set run.grid"))
    }

    pub fn check_dense_cap(&self) -> Result<()> {
        if self.num_qubits() > DEFAULT_QUBIT_CAP {
            return Err(spinflux::Error::QubitCap {
                what: "fidelity",
                num_qubits: self.num_qubits(),
                cap: DEFAULT_QUBIT_CAP,
            }
            .into());
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_chain(path: &Path) -> Result<ChainConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ChainConfig::from_toml(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// Config file first, flags on top, then one validation pass.
pub fn resolve(args: &RunArgs) -> Result<Run> {
    let file = match &args.config {
        Some(path) => read_file(path)?,
        None => FileConfig::default(),
    };
    let base_dir = args.config.as_deref().and_then(Path::parent).unwrap_or(Path::new("."));

    let chain_path = args.chain.clone().or_else(|| file.chain.as_ref().map(|p| base_dir.join(p)));
    let mut chain = match chain_path {
        Some(p) => Some(read_chain(&p)?),
        None => None,
    };
    let inline = file.n.is_some()
        || file.model.is_some()
        || file.couplings.is_some()
        || file.christandl.is_some()
        || file.fields.is_some()
        || file.terms.is_some();
    if inline || args.n.is_some() || args.model.is_some() {
        let c = chain.get_or_insert_with(|| ChainConfig {
            n: 0,
            model: Model::Xx,
            couplings: Vec::new(),
            christandl: None,
            fields: Vec::new(),
            terms: Vec::new(),
        });
        if let Some(n) = file.n {
            c.n = n;
        }
        if let Some(m) = file.model {
            c.model = m;
        }
        if let Some(v) = file.couplings {
            c.couplings = v;
            c.christandl = None;
        }
        if let Some(j) = file.christandl {
            c.christandl = Some(j);
            c.couplings.clear();
        }
        if let Some(v) = file.fields {
            c.fields = v;
        }
        if let Some(v) = file.terms {
            c.terms = v;
        }
    }
    let mut chain = chain.ok_or_else(|| anyhow!("no chain given: use --config, --chain, or --n with --model"))?;
    if let Some(n) = args.n {
        chain.n = n;
    }
    if let Some(m) = &args.model {
        chain.model = m.parse()?;
    }
    if let Some(v) = &args.couplings {
        chain.couplings = parse_list(v).context("--couplings")?;
        chain.christandl = None;
    }
    if let Some(j) = args.christandl {
        chain.christandl = Some(j);
        chain.couplings.clear();
    }
    if let Some(v) = &args.fields {
        chain.fields = parse_list(v).context("--fields")?;
    }
    if chain.n == 0 {
        bail!("chain size `n` is missing");
    }
    let spec = chain.to_spec()?;
    let hamiltonian = build_generic(&spec)?;
    let n = spec.num_qubits;

    let run = file.run;
    let output_site = args.output_site.or(run.output_site).unwrap_or(n);
    if output_site == 0 || output_site > n {
        bail!("output site {output_site} is outside 1..={n}");
    }
    let output_letter = match args.output_letter.as_deref().or(run.output_letter.as_deref()) {
        Some(s) => parse_letter(s, "output letter")?,
        None => Letter::X,
    };
    let input_letter = match args.input_letter.as_deref().or(run.input_letter.as_deref()) {
        Some(s) => parse_letter(s, "input letter")?,
        None => output_letter,
    };
    let register = match args.register.as_deref().or(run.register.as_deref()) {
        Some(s) => parse_register(s).context("register")?,
        None => ProductState::all_zero(n),
    };
    if register.chain_len() != n {
        bail!("register describes {} sites; sites 2..{n} need {}", register.sites().len(), n - 1);
    }
    let grid = args.grid.as_deref().or(run.grid.as_deref()).map(parse_grid).transpose()?;
    let cutoff = args.cutoff.or(run.cutoff).unwrap_or(DEFAULT_CUTOFF);
    let method = match args.method.as_deref().or(run.method.as_deref()).unwrap_or("exact") {
        "exact" => Method::Exact,
        "taylor" => Method::Taylor { cutoff },
        other => bail!("unknown method `{other}` (expected exact or taylor)"),
    };
    let max_nodes = args.max_nodes.or(run.max_nodes).unwrap_or(spinflux::DEFAULT_MAX_NODES);
    if max_nodes == 0 {
        bail!("max_nodes must be at least 1");
    }
    let correction = args.correction.as_deref().or(run.correction.as_deref()).unwrap_or("raw").parse()?;
    let seed = match args.seed.as_deref().or(run.seed.as_deref()) {
        Some(s) => PauliString::parse(s, n).context("seed")?,
        None => PauliString::single(n, output_site, output_letter)?,
    };
    let out = args.out.clone().or(run.out.map(|p| base_dir.join(p)));
    Ok(Run {
        spec,
        hamiltonian,
        output_site,
        output_letter,
        input_letter,
        register,
        grid,
        method,
        max_nodes,
        correction,
        seed,
        out,
    })
}
