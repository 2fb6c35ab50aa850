//! Run configuration: `key = value` lines grouped under `[section]` headers.
//!
//! Values are resolved in three layers: built-in defaults, the config file,
//! then command-line flags. Every key a run could read is listed in
//! [`KEYS`]; anything else is rejected.

use std::fmt::Write as _;
use std::path::PathBuf;

use binsamp::walsh::Direction;
use binsamp::{Error, Method, Result, Signal, WalshOrdering, WaveletSpec};

/// Recognized `(section, key)` pairs.
pub const KEYS: &[(&str, &str)] = &[
    ("wavelet", "p"),
    ("wavelet", "J0"),
    ("wavelet", "R"),
    ("wavelet", "d"),
    ("wavelet", "q"),
    ("wavelet", "basis_file"),
    ("sampling", "ordering"),
    ("sampling", "M"),
    ("sampling", "theta"),
    ("signal", "builtin"),
    ("signal", "file"),
    ("noise", "kind"),
    ("noise", "sigma"),
    ("output", "dir"),
    ("output", "seed"),
    ("output", "strict"),
    ("ssr", "R_min"),
    ("ssr", "granularity"),
    ("ssr", "cap"),
    ("transform", "input"),
    ("transform", "direction"),
    ("reconstruct", "methods"),
    ("gramian", "method"),
    ("gramian", "format"),
    ("decay", "piece"),
    ("decay", "m_max"),
];

#[derive(Clone, Debug, PartialEq)]
pub enum SignalSource {
    Builtin(Signal),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Noise {
    None,
    Gaussian(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodSelection {
    All,
    One(binsamp::solver::ReconMethod),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub order: usize,
    pub coarse_level: Option<u32>,
    pub level: u32,
    pub dim: usize,
    pub depth: Option<u32>,
    pub basis_file: Option<PathBuf>,
    pub ordering: WalshOrdering,
    pub samples: Option<usize>,
    pub theta: f64,
    pub signal: SignalSource,
    pub noise: Noise,
    pub out: PathBuf,
    pub seed: u64,
    pub strict: bool,
    pub ssr_min_level: Option<u32>,
    pub granularity: Option<usize>,
    pub cap: Option<usize>,
    pub input: Option<PathBuf>,
    pub direction: Direction,
    pub methods: MethodSelection,
    pub assembly: Method,
    pub binary_output: bool,
    pub piece: Option<i64>,
    pub m_max: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            order: 2,
            coarse_level: None,
            level: 6,
            dim: 1,
            depth: None,
            basis_file: None,
            ordering: WalshOrdering::Kaczmarz,
            samples: None,
            theta: 2.0,
            signal: SignalSource::Builtin(Signal::Cos),
            noise: Noise::None,
            out: PathBuf::from("binsamp-out"),
            seed: 0,
            strict: false,
            ssr_min_level: None,
            granularity: None,
            cap: None,
            input: None,
            direction: Direction::Forward,
            methods: MethodSelection::All,
            assembly: Method::QuadratureWht,
            binary_output: false,
            piece: None,
            m_max: 64,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("invalid value '{value}' for '{key}'")))
}

fn parse_opt<T: std::str::FromStr>(key: &str, value: &str) -> Result<Option<T>> {
    if value.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        parse(key, value).map(Some)
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Parse(format!("invalid boolean '{value}' for '{key}'"))),
    }
}

pub fn parse_direction(value: &str) -> Result<Direction> {
    match value.to_ascii_lowercase().as_str() {
        "forward" => Ok(Direction::Forward),
        "inverse" => Ok(Direction::Inverse),
        _ => Err(Error::Parse(format!("unknown transform direction '{value}'"))),
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Forward => "forward",
        Direction::Inverse => "inverse",
    }
}

impl ExperimentConfig {
    /// Parse a config document on top of the defaults.
    #[cfg(test)]
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut section: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| at(format!("malformed section header '{line}'")))?
                    .trim();
                if !KEYS.iter().any(|(s, _)| *s == name) {
                    return Err(at(format!("unknown section '{name}'")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected 'key = value', got '{line}'")))?;
            let sec = section
                .as_deref()
                .ok_or_else(|| at(format!("key '{}' appears before any section", key.trim())))?;
            self.set(sec, key.trim(), value.trim()).map_err(|e| at(e.to_string()))?;
        }
        Ok(())
    }

    /// Assign one key; unknown keys are errors.
    pub fn set(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        let name = format!("{section}.{key}");
        match (section, key) {
            ("wavelet", "p") => self.order = parse(&name, value)?,
            ("wavelet", "J0") => self.coarse_level = parse_opt(&name, value)?,
            ("wavelet", "R") => self.level = parse(&name, value)?,
            ("wavelet", "d") => self.dim = parse(&name, value)?,
            ("wavelet", "q") => self.depth = parse_opt(&name, value)?,
            ("wavelet", "basis_file") => self.basis_file = Some(PathBuf::from(value)),
            ("sampling", "ordering") => self.ordering = value.parse()?,
            ("sampling", "M") => self.samples = parse_opt(&name, value)?,
            ("sampling", "theta") => self.theta = parse(&name, value)?,
            ("signal", "builtin") => self.signal = SignalSource::Builtin(value.parse()?),
            ("signal", "file") => self.signal = SignalSource::File(PathBuf::from(value)),
            ("noise", "kind") => {
                self.noise = match value.to_ascii_lowercase().as_str() {
                    "none" => Noise::None,
                    "gaussian" => match self.noise {
                        Noise::Gaussian(s) => Noise::Gaussian(s),
                        Noise::None => Noise::Gaussian(0.0),
                    },
                    _ => return Err(Error::Parse(format!("unknown noise kind '{value}'"))),
                }
            }
            ("noise", "sigma") => {
                let sigma: f64 = parse(&name, value)?;
                if !(sigma >= 0.0 && sigma.is_finite()) {
                    return Err(Error::Parse(format!("noise sigma must be non-negative, got {value}")));
                }
                self.noise = Noise::Gaussian(sigma);
            }
            ("output", "dir") => self.out = PathBuf::from(value),
            ("output", "seed") => self.seed = parse(&name, value)?,
            ("output", "strict") => self.strict = parse_bool(&name, value)?,
            ("ssr", "R_min") => self.ssr_min_level = parse_opt(&name, value)?,
            ("ssr", "granularity") => self.granularity = parse_opt(&name, value)?,
            ("ssr", "cap") => self.cap = parse_opt(&name, value)?,
            ("transform", "input") => self.input = Some(PathBuf::from(value)),
            ("transform", "direction") => self.direction = parse_direction(value)?,
            ("reconstruct", "methods") => {
                self.methods = if value.eq_ignore_ascii_case("all") {
                    MethodSelection::All
                } else {
                    MethodSelection::One(value.parse()?)
                }
            }
            ("gramian", "method") => self.assembly = value.parse()?,
            ("gramian", "format") => {
                self.binary_output = match value.to_ascii_lowercase().as_str() {
                    "csv" => false,
                    "binary" | "bin" => true,
                    _ => return Err(Error::Parse(format!("unknown output format '{value}'"))),
                }
            }
            ("decay", "piece") => self.piece = parse_opt(&name, value)?,
            ("decay", "m_max") => self.m_max = parse(&name, value)?,
            _ => return Err(Error::Parse(format!("unknown key '{name}'"))),
        }
        Ok(())
    }

    pub fn coarse_level(&self) -> u32 {
        self.coarse_level
            .unwrap_or_else(|| WaveletSpec::min_coarse_level(self.order))
    }

    /// Grid depth used at top level `level`.
    pub fn depth_for(&self, level: u32) -> u32 {
        self.depth
            .unwrap_or(if self.dim == 1 { level + 7 } else { level + 4 })
    }

    pub fn wavelet_spec(&self) -> Result<WaveletSpec> {
        self.wavelet_spec_at(self.level)
    }

    pub fn wavelet_spec_at(&self, level: u32) -> Result<WaveletSpec> {
        WaveletSpec::new(
            self.order,
            self.coarse_level(),
            level,
            self.dim,
            self.depth_for(level),
        )
    }

    /// Fully resolved settings in the config syntax.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<String>| v.unwrap_or_else(|| "auto".into());
        let _ = writeln!(s, "[wavelet]");
        let _ = writeln!(s, "p = {}", self.order);
        let _ = writeln!(s, "J0 = {}", self.coarse_level());
        let _ = writeln!(s, "R = {}", self.level);
        let _ = writeln!(s, "d = {}", self.dim);
        let _ = writeln!(s, "q = {}", self.depth_for(self.level));
        if let Some(p) = &self.basis_file {
            let _ = writeln!(s, "basis_file = {}", p.display());
        }
        let _ = writeln!(s, "[sampling]");
        let _ = writeln!(s, "ordering = {}", self.ordering);
        let _ = writeln!(s, "M = {}", opt(self.samples.map(|m| m.to_string())));
        let _ = writeln!(s, "theta = {}", self.theta);
        let _ = writeln!(s, "[signal]");
        match &self.signal {
            SignalSource::Builtin(sig) => {
                let _ = writeln!(s, "builtin = {sig}");
            }
            SignalSource::File(p) => {
                let _ = writeln!(s, "file = {}", p.display());
            }
        }
        let _ = writeln!(s, "[noise]");
        match self.noise {
            Noise::None => {
                let _ = writeln!(s, "kind = none");
            }
            Noise::Gaussian(sigma) => {
                let _ = writeln!(s, "kind = gaussian");
                let _ = writeln!(s, "sigma = {sigma}");
            }
        }
        let _ = writeln!(s, "[output]");
        let _ = writeln!(s, "dir = {}", self.out.display());
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "strict = {}", self.strict);
        let _ = writeln!(s, "[ssr]");
        let _ = writeln!(s, "R_min = {}", opt(self.ssr_min_level.map(|v| v.to_string())));
        let _ = writeln!(s, "granularity = {}", opt(self.granularity.map(|v| v.to_string())));
        let _ = writeln!(s, "cap = {}", opt(self.cap.map(|v| v.to_string())));
        let _ = writeln!(s, "[transform]");
        if let Some(p) = &self.input {
            let _ = writeln!(s, "input = {}", p.display());
        }
        let _ = writeln!(s, "direction = {}", direction_name(self.direction));
        let _ = writeln!(s, "[reconstruct]");
        let methods = match self.methods {
            MethodSelection::All => "all".to_string(),
            MethodSelection::One(m) => m.to_string(),
        };
        let _ = writeln!(s, "methods = {methods}");
        let _ = writeln!(s, "[gramian]");
        let _ = writeln!(s, "method = {}", self.assembly);
        let _ = writeln!(s, "format = {}", if self.binary_output { "binary" } else { "csv" });
        let _ = writeln!(s, "[decay]");
        let _ = writeln!(s, "piece = {}", opt(self.piece.map(|v| v.to_string())));
        let _ = writeln!(s, "m_max = {}", self.m_max);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let cfg = ExperimentConfig::from_text(
            "# smooth signal run\n[wavelet]\np = 8\nR = 6\n\n[sampling]\nM = 77\nordering = paley\n[noise]\nsigma = 0.01\n",
        )
        .unwrap();
        assert_eq!(cfg.order, 8);
        assert_eq!(cfg.samples, Some(77));
        assert_eq!(cfg.ordering, WalshOrdering::Paley);
        assert_eq!(cfg.noise, Noise::Gaussian(0.01));
        assert_eq!(cfg.coarse_level(), WaveletSpec::min_coarse_level(8));
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(ExperimentConfig::from_text("[wavelet]\norder = 3\n").is_err());
        assert!(ExperimentConfig::from_text("[plot]\nwidth = 3\n").is_err());
        assert!(ExperimentConfig::from_text("p = 3\n").is_err());
        assert!(ExperimentConfig::from_text("[wavelet]\np 3\n").is_err());
        assert!(ExperimentConfig::from_text("[wavelet]\np = three\n").is_err());
    }

    #[test]
    fn rendered_config_parses_back() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("sampling", "M", "40").unwrap();
        cfg.set("transform", "input", "x.csv").unwrap();
        cfg.set("noise", "sigma", "0.5").unwrap();
        let back = ExperimentConfig::from_text(&cfg.render()).unwrap();
        assert_eq!(back.render(), cfg.render());
        assert_eq!(back.samples, Some(40));
        assert_eq!(back.noise, Noise::Gaussian(0.5));
    }
}
