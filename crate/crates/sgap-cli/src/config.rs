//! Line-oriented `key = value` scenario files.
//!
//! Keys are namespaced (`sgap.*`, `contraction.*`, `ifs.*`, `solver.*`,
//! `points.*`, `boxdim.*`, `pressure.*`, `counts.*`); `#` starts a comment.
//! Unknown and duplicate keys are rejected with line-numbered messages.
//! Numeric values accept plain floats and simple fractions like `1/3`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use sgap_core::{
    ContractionPair, Dimension, GapSet, Similarity, SimilarityIfs, SolverOptions,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(path: &Path, line: usize, message: impl Into<String>) -> Self {
        ConfigError { path: path.to_path_buf(), line: Some(line), message: message.into() }
    }

    fn whole(path: &Path, message: impl Into<String>) -> Self {
        ConfigError { path: path.to_path_buf(), line: None, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: {}", self.path.display(), line, self.message),
            None => write!(f, "{}: {}", self.path.display(), self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSettings {
    pub depth: usize,
    pub cap: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxdimSettings {
    pub scale_min_exp: u32,
    pub scale_max_exp: u32,
    pub drop_low: usize,
    pub drop_high: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureSettings {
    pub n_max: usize,
    /// Explicit exponent grid; when absent the grid is derived from the
    /// solved root.
    pub t_grid: Option<Vec<f64>>,
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub gaps: GapSet,
    pub contraction: ContractionPair,
    pub ifs: Option<SimilarityIfs>,
    pub solver: SolverOptions,
    pub points: PointSettings,
    pub boxdim: BoxdimSettings,
    pub pressure: PressureSettings,
    pub counts_n_max: usize,
}

struct RawConfig {
    path: PathBuf,
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn take_required(&mut self, key: &str) -> Result<(usize, String), ConfigError> {
        self.take(key)
            .ok_or_else(|| ConfigError::whole(&self.path, format!("missing required key `{key}`")))
    }

    fn take_f64(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((line, raw)) => parse_number(&raw)
                .map_err(|msg| ConfigError::at(&self.path, line, format!("{key}: {msg}"))),
        }
    }

    fn take_u64(&mut self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((line, raw)) => raw
                .parse::<u64>()
                .map_err(|_| ConfigError::at(&self.path, line, format!("{key}: malformed integer `{raw}`"))),
        }
    }

    fn take_bool(&mut self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((line, raw)) => match raw.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(ConfigError::at(
                    &self.path,
                    line,
                    format!("{key}: expected true or false, got `{other}`"),
                )),
            },
        }
    }

    fn error_at(&self, line: usize, message: impl Into<String>) -> ConfigError {
        ConfigError::at(&self.path, line, message)
    }

    fn error(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::whole(&self.path, message)
    }
}

/// Accept `0.25` and `1/3` style numbers; reject NaN and infinities.
fn parse_number(raw: &str) -> Result<f64, String> {
    let value = if let Some((num, den)) = raw.split_once('/') {
        let n: f64 =
            num.trim().parse().map_err(|_| format!("malformed number `{raw}`"))?;
        let d: f64 =
            den.trim().parse().map_err(|_| format!("malformed number `{raw}`"))?;
        if d == 0.0 {
            return Err(format!("zero denominator in `{raw}`"));
        }
        n / d
    } else {
        raw.parse().map_err(|_| format!("malformed number `{raw}`"))?
    };
    if !f64::is_finite(value) {
        return Err(format!("non-finite number `{raw}`"));
    }
    Ok(value)
}

fn parse_number_list(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',').map(|part| parse_number(part.trim())).collect()
}

fn parse_u64_list(raw: &str) -> Result<Vec<u64>, String> {
    raw.split(',')
        .map(|part| part.trim().parse::<u64>().map_err(|_| format!("malformed integer `{part}`")))
        .collect()
}

fn read_raw(path: &Path) -> Result<RawConfig, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError::whole(path, format!("cannot read config: {e}")))?;
    let mut entries = BTreeMap::new();
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.split_once('#') {
            Some((before, _)) => before,
            None => full_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::at(path, line_no, "expected `key = value`"))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(ConfigError::at(path, line_no, "empty key"));
        }
        if let Some((first_line, _)) = entries.get(&key) {
            return Err(ConfigError::at(
                path,
                line_no,
                format!("duplicate key `{key}` (first set on line {first_line})"),
            ));
        }
        entries.insert(key, (line_no, value));
    }
    Ok(RawConfig { path: path.to_path_buf(), entries })
}

fn parse_gap_set(raw: &mut RawConfig, config_dir: &Path) -> Result<GapSet, ConfigError> {
    let (kind_line, kind) = raw.take_required("sgap.kind")?;
    match kind.as_str() {
        "finite" => {
            let (line, values) = raw.take_required("sgap.values")?;
            let values =
                parse_u64_list(&values).map_err(|msg| raw.error_at(line, format!("sgap.values: {msg}")))?;
            GapSet::finite(values).map_err(|e| raw.error_at(line, format!("sgap.values: {e}")))
        }
        "arithmetic" => {
            let start = raw.take_u64("sgap.start", 0)?;
            let (line, step) = raw.take_required("sgap.step")?;
            let step = step
                .parse::<u64>()
                .map_err(|_| raw.error_at(line, format!("sgap.step: malformed integer `{step}`")))?;
            GapSet::arithmetic(start, step).map_err(|e| raw.error_at(line, format!("sgap.step: {e}")))
        }
        "primes" => Ok(GapSet::primes()),
        "naturals" => Ok(GapSet::naturals_from(raw.take_u64("sgap.offset", 0)?)),
        "file" => {
            let (line, rel) = raw.take_required("sgap.path")?;
            let gap_path = config_dir.join(&rel);
            let values = read_gap_file(&gap_path)?;
            GapSet::file_backed(values).map_err(|e| raw.error_at(line, format!("sgap.path: {e}")))
        }
        other => Err(raw.error_at(
            kind_line,
            format!("sgap.kind: unknown kind `{other}` (finite, arithmetic, primes, naturals, file)"),
        )),
    }
}

/// Plain text gap files: one non-negative decimal integer per line,
/// ascending, duplicates rejected; `#` comments and blank lines allowed.
pub fn read_gap_file(path: &Path) -> Result<Vec<u64>, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError::whole(path, format!("cannot read gap file: {e}")))?;
    let mut values = Vec::new();
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.split_once('#') {
            Some((before, _)) => before,
            None => full_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let v: u64 = line
            .parse()
            .map_err(|_| ConfigError::at(path, line_no, format!("malformed integer `{line}`")))?;
        if let Some(&last) = values.last() {
            if v <= last {
                return Err(ConfigError::at(
                    path,
                    line_no,
                    format!("values must be strictly ascending ({v} after {last})"),
                ));
            }
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(ConfigError::whole(path, "gap file holds no values"));
    }
    Ok(values)
}

fn parse_contraction(raw: &mut RawConfig) -> Result<ContractionPair, ConfigError> {
    let mut bound = |name: &str| -> Result<(f64, f64), ConfigError> {
        let both = raw.take(&format!("contraction.{name}"));
        let lower = raw.take(&format!("contraction.{name}_lower"));
        let upper = raw.take(&format!("contraction.{name}_upper"));
        match (both, lower, upper) {
            (Some((line, v)), None, None) => {
                let v = parse_number(&v)
                    .map_err(|msg| raw.error_at(line, format!("contraction.{name}: {msg}")))?;
                Ok((v, v))
            }
            (None, Some((ll, lv)), Some((ul, uv))) => {
                let lo = parse_number(&lv)
                    .map_err(|msg| raw.error_at(ll, format!("contraction.{name}_lower: {msg}")))?;
                let hi = parse_number(&uv)
                    .map_err(|msg| raw.error_at(ul, format!("contraction.{name}_upper: {msg}")))?;
                Ok((lo, hi))
            }
            (Some((line, _)), Some(_), _) | (Some((line, _)), _, Some(_)) => Err(raw.error_at(
                line,
                format!("contraction.{name} conflicts with contraction.{name}_lower/_upper"),
            )),
            _ => Err(raw.error(format!(
                "set contraction.{name} or both contraction.{name}_lower and contraction.{name}_upper"
            ))),
        }
    };
    let (c0_lower, c0_upper) = bound("c0")?;
    let (c1_lower, c1_upper) = bound("c1")?;
    ContractionPair::new(c0_lower, c0_upper, c1_lower, c1_upper)
        .map_err(|e| raw.error(format!("contraction: {e}")))
}

fn parse_ifs(
    raw: &mut RawConfig,
    contraction: &ContractionPair,
) -> Result<Option<SimilarityIfs>, ConfigError> {
    let has_ifs = raw.entries.keys().any(|k| k.starts_with("ifs."));
    if !has_ifs {
        return Ok(None);
    }
    let (dim_line, dim) = raw.take_required("ifs.dimension")?;
    let dimension = match dim.as_str() {
        "1" => Dimension::One,
        "2" => Dimension::Two,
        other => {
            return Err(raw.error_at(dim_line, format!("ifs.dimension: expected 1 or 2, got `{other}`")))
        }
    };
    let mut parse_map = |name: &str| -> Result<Similarity, ConfigError> {
        let (ratio_line, ratio) = raw.take_required(&format!("ifs.{name}.ratio"))?;
        let ratio = parse_number(&ratio)
            .map_err(|msg| raw.error_at(ratio_line, format!("ifs.{name}.ratio: {msg}")))?;
        let angle = raw.take_f64(&format!("ifs.{name}.angle"), 0.0)?;
        let translation = match raw.take(&format!("ifs.{name}.translate")) {
            None => [0.0, 0.0],
            Some((line, v)) => {
                let parts = parse_number_list(&v)
                    .map_err(|msg| raw.error_at(line, format!("ifs.{name}.translate: {msg}")))?;
                match (parts.len(), dimension) {
                    (1, Dimension::One) => [parts[0], 0.0],
                    (2, Dimension::Two) => [parts[0], parts[1]],
                    _ => {
                        return Err(raw.error_at(
                            line,
                            format!(
                                "ifs.{name}.translate: expected {} coordinate(s)",
                                dimension.coords()
                            ),
                        ))
                    }
                }
            }
        };
        Similarity::new(ratio, angle, translation)
            .map_err(|e| raw.error_at(ratio_line, format!("ifs.{name}: {e}")))
    };
    let map0 = parse_map("map0")?;
    let map1 = parse_map("map1")?;
    let osc_attested = raw.take_bool("ifs.osc_attested", false)?;
    let ifs = SimilarityIfs::new(dimension, map0, map1, osc_attested)
        .map_err(|e| raw.error(format!("ifs: {e}")))?;
    if !ifs.consistent_with(contraction) {
        return Err(raw.error(
            "ifs map ratios fall outside the contraction intervals".to_string(),
        ));
    }
    Ok(Some(ifs))
}

/// Parse and validate a scenario file.
pub fn parse_config(path: &Path) -> Result<Scenario, ConfigError> {
    let mut raw = read_raw(path)?;
    let config_dir = path.parent().unwrap_or_else(|| Path::new("."));

    let gaps = parse_gap_set(&mut raw, config_dir)?;
    let contraction = parse_contraction(&mut raw)?;
    let ifs = parse_ifs(&mut raw, &contraction)?;

    let solver = SolverOptions {
        tolerance: raw.take_f64("solver.tolerance", 1e-9)?,
        series_eps: raw.take_f64("solver.series_eps", 1e-12)?,
        t_max: raw.take_f64("solver.t_max", 1024.0)?,
    };
    if solver.tolerance <= 0.0 || solver.series_eps <= 0.0 || solver.t_max < 1.0 {
        return Err(raw.error("solver settings must be positive (t_max at least 1)"));
    }

    let points = PointSettings {
        depth: raw.take_u64("points.depth", 14)? as usize,
        cap: raw.take_u64("points.cap", 200_000)? as usize,
        seed: raw.take_u64("points.seed", 0)?,
    };
    if points.depth < 1 || points.depth > sgap_core::MAX_EXACT_LEN {
        return Err(raw.error(format!(
            "points.depth must lie in 1..={}",
            sgap_core::MAX_EXACT_LEN
        )));
    }
    if points.cap < 1 {
        return Err(raw.error("points.cap must be positive"));
    }

    let boxdim = BoxdimSettings {
        scale_min_exp: raw.take_u64("boxdim.scale_min_exp", 2)? as u32,
        scale_max_exp: raw.take_u64("boxdim.scale_max_exp", 12)? as u32,
        drop_low: raw.take_u64("boxdim.drop_low", 2)? as usize,
        drop_high: raw.take_u64("boxdim.drop_high", 2)? as usize,
    };
    if boxdim.scale_min_exp < 1 || boxdim.scale_min_exp > boxdim.scale_max_exp {
        return Err(raw.error("boxdim scale exponents must satisfy 1 <= min <= max"));
    }
    if boxdim.scale_max_exp > 60 {
        return Err(raw.error("boxdim.scale_max_exp above 60 underflows the grid"));
    }

    let pressure_n_max = raw.take_u64("pressure.n_max", 20)? as usize;
    if !(1..=200).contains(&pressure_n_max) {
        return Err(raw.error("pressure.n_max must lie in 1..=200"));
    }
    let t_grid = match raw.take("pressure.t_grid") {
        None => None,
        Some((line, v)) => {
            let grid = parse_number_list(&v)
                .map_err(|msg| raw.error_at(line, format!("pressure.t_grid: {msg}")))?;
            if grid.is_empty() {
                return Err(raw.error_at(line, "pressure.t_grid: empty grid"));
            }
            Some(grid)
        }
    };

    let counts_n_max = raw.take_u64("counts.n_max", 20)? as usize;
    if counts_n_max > sgap_core::MAX_EXACT_LEN {
        return Err(raw.error(format!(
            "counts.n_max must not exceed {}",
            sgap_core::MAX_EXACT_LEN
        )));
    }

    if let Some((key, &(line, _))) = raw.entries.iter().next().map(|(k, v)| (k.clone(), v)) {
        return Err(raw.error_at(line, format!("unknown key `{key}`")));
    }

    Ok(Scenario {
        gaps,
        contraction,
        ifs,
        solver,
        points,
        boxdim,
        pressure: PressureSettings { n_max: pressure_n_max, t_grid },
        counts_n_max,
    })
}
