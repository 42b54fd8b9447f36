//! Layered run configuration: documented defaults, overridden by a flat
//! `key = value` configuration file (the `GRIBOV_LAB_CONFIG` environment
//! variable or `--config` names it), overridden by command-line flags.
//! Every report embeds the fully resolved configuration.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

/// Output format of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (csv or json)")),
        }
    }
}

/// Inclusive m-range or explicit list; rows are always emitted in
/// ascending m order, so the values are sorted and deduplicated here.
#[derive(Debug, Clone, Serialize)]
pub struct MRange(pub Vec<usize>);

impl std::str::FromStr for MRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut vals: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
            let a: usize = a
                .trim()
                .parse()
                .map_err(|e| format!("bad range start: {e}"))?;
            let b: usize = b
                .trim()
                .parse()
                .map_err(|e| format!("bad range end: {e}"))?;
            if b < a {
                return Err(format!("empty range {a}..{b}"));
            }
            (a..=b).collect()
        } else {
            let parsed: Result<Vec<usize>, _> =
                s.split(',').map(|t| t.trim().parse::<usize>()).collect();
            parsed.map_err(|e| format!("bad m list: {e}"))?
        };
        if vals.is_empty() {
            return Err("empty m list".into());
        }
        vals.sort_unstable();
        vals.dedup();
        Ok(MRange(vals))
    }
}

/// Flat `key = value` file with `#` comments, no nesting.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "{}:{}: expected 'key = value', got '{raw}'",
                path.display(),
                lineno + 1
            ));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// One layered lookup: flag value, else config-file value, else default.
pub struct Layers {
    file: BTreeMap<String, String>,
}

impl Layers {
    pub fn new(explicit_path: Option<&Path>) -> Result<Self, String> {
        let path = explicit_path
            .map(|p| p.to_path_buf())
            .or_else(|| std::env::var_os("GRIBOV_LAB_CONFIG").map(Into::into));
        let file = match path {
            Some(p) => parse_config_file(&p)?,
            None => BTreeMap::new(),
        };
        Ok(Self { file })
    }

    pub fn resolve<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map_err(|e| format!("config key '{key}': {e}")),
            None => Ok(default),
        }
    }

    pub fn resolve_optional<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| format!("config key '{key}': {e}")),
            None => Ok(None),
        }
    }
}

/// Fully resolved configuration, embedded verbatim in every report.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub command: String,
    pub lambda2: f64,
    pub mu: f64,
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_values: Option<Vec<usize>>,
    pub dim_factor: usize,
    pub dim_floor: usize,
    pub nodes: usize,
    pub j_max: usize,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grids: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl ResolvedConfig {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            lambda2: 1.0,
            mu: 1.0,
            lambda: 0.1,
            m_values: None,
            dim_factor: 4,
            dim_floor: 60,
            nodes: 1024,
            j_max: 4,
            format: OutputFormat::Csv,
            output: None,
            seed: 0,
            dim: None,
            sigma_re: None,
            sigma_im: None,
            check: None,
            potential: None,
            grids: None,
            n_max: None,
            samples: None,
        }
    }

    /// Truncation dimension policy N(m) = max(factor * m, m + floor).
    pub fn dim_for(&self, m: usize) -> usize {
        (self.dim_factor * m).max(m + self.dim_floor)
    }
}
