//! Run configuration: flat key/value maps from a JSON file and flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Scatter,
    Bounds,
    Gp,
    Tf,
    GpTfLimit,
    Foldy,
    Bogolubov,
    Verify,
}

pub const COMMANDS: [Command; 8] = [
    Command::Scatter,
    Command::Bounds,
    Command::Gp,
    Command::Tf,
    Command::GpTfLimit,
    Command::Foldy,
    Command::Bogolubov,
    Command::Verify,
];

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Scatter => "scatter",
            Command::Bounds => "bounds",
            Command::Gp => "gp",
            Command::Tf => "tf",
            Command::GpTfLimit => "gp-tf-limit",
            Command::Foldy => "foldy",
            Command::Bogolubov => "bogolubov",
            Command::Verify => "verify",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, CliError> {
        COMMANDS.iter().copied().find(|c| c.name() == name).ok_or_else(|| CliError::Parse {
            location: "command".into(),
            message: format!(
                "unknown command `{name}`{}",
                suggest(name, COMMANDS.iter().map(|c| c.name())).map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default()
            ),
        })
    }

    pub fn keys(self) -> &'static [KeySpec] {
        match self {
            Command::Scatter => SCATTER_KEYS,
            Command::Bounds => BOUNDS_KEYS,
            Command::Gp => GP_KEYS,
            Command::Tf => TF_KEYS,
            Command::GpTfLimit => GP_TF_KEYS,
            Command::Foldy => FOLDY_KEYS,
            Command::Bogolubov => BOGOLUBOV_KEYS,
            Command::Verify => VERIFY_KEYS,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyKind {
    Number,
    /// A number or a `lo:hi:points[log]` sweep.
    Sweep,
    Count,
    Text,
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: KeyKind,
    pub default: Option<&'static str>,
}

const fn key(name: &'static str, kind: KeyKind, default: Option<&'static str>) -> KeySpec {
    KeySpec { name, kind, default }
}

use KeyKind::{Count, Number, Sweep, Text};

const SCATTER_KEYS: &[KeySpec] = &[
    key("potential", Text, None),
    key("dim", Count, Some("3")),
    key("mu", Sweep, Some("1")),
    key("grid_points", Count, Some("1000")),
    key("radius", Number, None),
];
const BOUNDS_KEYS: &[KeySpec] = &[
    key("dim", Count, Some("3")),
    key("y_grid", Sweep, Some("1e-12:1e-4:50log")),
    key("a", Number, Some("1")),
    key("mu", Number, Some("1")),
    key("c_lsy", Number, Some("8.9")),
];
const GP_KEYS: &[KeySpec] = &[
    key("trap", Text, Some("harmonic:scale=1")),
    key("dim", Count, Some("3")),
    key("n", Number, Some("1")),
    key("a", Number, Some("0")),
    key("mu", Number, Some("1")),
    key("cells", Count, Some("800")),
    key("r_max", Number, None),
];
const TF_KEYS: &[KeySpec] = &[
    key("trap", Text, Some("harmonic:scale=1")),
    key("dim", Count, Some("3")),
    key("n", Sweep, Some("1")),
    key("a", Number, Some("1")),
    key("mu", Number, Some("1")),
];
const GP_TF_KEYS: &[KeySpec] = &[
    key("trap", Text, Some("harmonic:scale=1")),
    key("dim", Count, Some("3")),
    key("g_grid", Sweep, Some("10:1e4:4log")),
    key("mu", Number, Some("1")),
    key("cells", Count, Some("3000")),
];
const FOLDY_KEYS: &[KeySpec] = &[
    key("rho_grid", Sweep, Some("1:256:5log")),
    key("mu", Number, Some("1")),
    key("scaling_n", Sweep, None),
];
const BOGOLUBOV_KEYS: &[KeySpec] = &[
    key("mode_a", Number, Some("5")),
    key("mode_b", Sweep, Some("3")),
    key("n_max", Count, Some("200")),
];
const VERIFY_KEYS: &[KeySpec] = &[key("seed", Count, Some("1"))];

/// Keys accepted by every command.
pub const COMMON_KEYS: &[&str] = &["output", "format", "abs_tol", "rel_tol", "max_iter"];

/// Inner keys of `--potential` and `--trap` specifications.
const POTENTIAL_INNER: &[&str] = &["r0", "v0", "path", "tail"];
const TRAP_INNER: &[&str] = &["scale", "s", "l"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ToleranceOverrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Command parameters as given, without defaults filled in.
    pub parameters: BTreeMap<String, String>,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub tolerances: ToleranceOverrides,
}

/// Closest candidate within edit distance 3.
pub fn suggest<'a>(key: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .into_iter()
        .map(|c| (strsim::damerau_levenshtein(key, c), c))
        .filter(|(d, _)| *d <= 3)
        .min_by_key(|(d, _)| *d)
        .map(|(_, c)| c)
}

/// Inclusive grid of `points` values, linear or logarithmic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub log: bool,
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let (lo, hi, mut count, mut log) = match parts.as_slice() {
            [lo, hi, n] => (*lo, *hi, *n, false),
            [lo, hi, n, "log"] => (*lo, *hi, *n, true),
            _ => return Err(format!("`{text}` is not lo:hi:points[log]")),
        };
        if let Some(stripped) = count.strip_suffix("log") {
            count = stripped;
            log = true;
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let points: usize = count.parse().map_err(|_| format!("`{count}` is not a point count"))?;
        if points == 0 || (points == 1 && lo != hi) {
            return Err(format!("sweep `{text}` needs at least 2 points"));
        }
        if log && !(lo > 0.0 && hi > 0.0) {
            return Err(format!("log sweep `{text}` needs positive end points"));
        }
        Ok(Self { lo, hi, points, log })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.points {
                    self.hi
                } else if self.log {
                    10f64.powf(self.lo.log10() + t * (self.hi.log10() - self.lo.log10()))
                } else {
                    self.lo + t * (self.hi - self.lo)
                }
            })
            .collect()
    }
}

/// Values of a sweep-capable parameter: one number or a grid.
pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    if text.contains(':') {
        return Ok(SweepSpec::parse(text)?.values());
    }
    text.trim().parse::<f64>().map(|x| vec![x]).map_err(|_| format!("`{text}` is not a number or lo:hi:points sweep"))
}

fn check_inner_keys(spec: &str, known: &[&str], location: &str) -> Result<(), CliError> {
    let rest = spec.split_once(':').map(|(_, r)| r).unwrap_or("");
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let k = item.split_once('=').map(|(k, _)| k.trim()).unwrap_or(item.trim());
        if !known.contains(&k) && k != "L" {
            return Err(CliError::UnknownKey {
                key: k.to_string(),
                location: location.to_string(),
                suggestion: suggest(k, known.iter().copied()).map(str::to_string),
            });
        }
    }
    Ok(())
}

impl RunConfig {
    /// Validates and assembles a configuration; `flags` override `file`.
    pub fn assemble(
        command_hint: Option<&str>,
        file: Option<(&Path, Map<String, Value>)>,
        flags: &[(String, String)],
    ) -> Result<Self, CliError> {
        let mut entries: Vec<(String, String, String)> = Vec::new();
        if let Some((path, map)) = &file {
            for (k, v) in map {
                let text = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    other => {
                        return Err(CliError::Parse {
                            location: format!("{}: key `{k}`", path.display()),
                            message: format!("expected a string or number, got {other}"),
                        })
                    }
                };
                entries.push((k.clone(), text, format!("{}: key `{k}`", path.display())));
            }
        }
        for (k, v) in flags {
            let k = k.trim_start_matches("--").replace('-', "_");
            entries.retain(|(ek, _, _)| *ek != k);
            entries.push((k.clone(), v.clone(), format!("--{}", k.replace('_', "-"))));
        }

        let mut command_name = command_hint.map(str::to_string);
        if let Some(pos) = entries.iter().position(|(k, _, _)| k == "command") {
            let (_, v, _) = entries.remove(pos);
            command_name.get_or_insert(v);
        }
        let command = Command::from_name(
            command_name
                .as_deref()
                .ok_or_else(|| CliError::Parse { location: "command".into(), message: "no command given".into() })?,
        )?;

        let mut config = RunConfig {
            command,
            parameters: BTreeMap::new(),
            output_path: None,
            output_format: OutputFormat::Csv,
            tolerances: ToleranceOverrides::default(),
        };
        let specs = command.keys();
        for (k, v, location) in entries {
            let parse_err = |message: String| CliError::Parse { location: location.clone(), message };
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| parse_err(format!("`{v}` is not a number")));
            match k.as_str() {
                "output" => config.output_path = Some(PathBuf::from(v)),
                "format" => {
                    config.output_format = match v.as_str() {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        other => return Err(parse_err(format!("format must be csv or json, got `{other}`"))),
                    }
                }
                "abs_tol" => config.tolerances.abs_tol = Some(num(&v)?),
                "rel_tol" => config.tolerances.rel_tol = Some(num(&v)?),
                "max_iter" => {
                    config.tolerances.max_iterations =
                        Some(v.trim().parse().map_err(|_| parse_err(format!("`{v}` is not a count")))?)
                }
                _ => {
                    let spec = specs.iter().find(|s| s.name == k).ok_or_else(|| CliError::UnknownKey {
                        key: k.clone(),
                        location: location.clone(),
                        suggestion: suggest(&k, specs.iter().map(|s| s.name).chain(COMMON_KEYS.iter().copied()))
                            .map(str::to_string),
                    })?;
                    match spec.kind {
                        KeyKind::Number => {
                            num(&v)?;
                        }
                        KeyKind::Sweep => {
                            parse_values(&v).map_err(parse_err)?;
                        }
                        KeyKind::Count => {
                            v.trim().parse::<usize>().map_err(|_| parse_err(format!("`{v}` is not a count")))?;
                        }
                        KeyKind::Text => {}
                    }
                    match k.as_str() {
                        "potential" => check_inner_keys(&v, POTENTIAL_INNER, &location)?,
                        "trap" => check_inner_keys(&v, TRAP_INNER, &location)?,
                        _ => {}
                    }
                    config.parameters.insert(k, v);
                }
            }
        }
        for spec in specs {
            if spec.default.is_none() && spec.kind == KeyKind::Text && !config.parameters.contains_key(spec.name) {
                return Err(CliError::Parse {
                    location: format!("--{}", spec.name.replace('_', "-")),
                    message: format!("`{}` requires `{}`", command, spec.name),
                });
            }
        }
        Ok(config)
    }

    pub fn from_json_str(text: &str, origin: &Path) -> Result<Map<String, Value>, CliError> {
        match serde_json::from_str::<Value>(text) {
            Ok(Value::Object(map)) => Ok(map),
            Ok(_) => Err(CliError::Parse {
                location: format!("{}:1", origin.display()),
                message: "config must be a flat JSON object".into(),
            }),
            Err(e) => Err(CliError::Parse {
                location: format!("{}:{}:{}", origin.display(), e.line(), e.column()),
                message: e.to_string(),
            }),
        }
    }

    pub fn load(path: &Path, flags: &[(String, String)], command_hint: Option<&str>) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse { location: path.display().to_string(), message: e.to_string() })?;
        let map = Self::from_json_str(&text, path)?;
        Self::assemble(command_hint, Some((path, map)), flags)
    }

    /// Flat JSON object that [`RunConfig::assemble`] accepts back.
    pub fn to_json(&self) -> Map<String, Value> {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(self.command.name().into()));
        for (k, v) in &self.parameters {
            map.insert(k.clone(), Value::String(v.clone()));
        }
        if let Some(p) = &self.output_path {
            map.insert("output".into(), Value::String(p.display().to_string()));
        }
        map.insert("format".into(), Value::String(self.output_format.name().into()));
        let t = &self.tolerances;
        if let Some(x) = t.abs_tol {
            map.insert("abs_tol".into(), Value::String(x.to_string()));
        }
        if let Some(x) = t.rel_tol {
            map.insert("rel_tol".into(), Value::String(x.to_string()));
        }
        if let Some(x) = t.max_iterations {
            map.insert("max_iter".into(), Value::String(x.to_string()));
        }
        map
    }

    pub fn from_json(map: Map<String, Value>) -> Result<Self, CliError> {
        Self::assemble(None, Some((Path::new("<json>"), map)), &[])
    }

    /// Parameter value with the command default filled in.
    pub fn get(&self, name: &str) -> Option<&str> {
        self.parameters
            .get(name)
            .map(String::as_str)
            .or_else(|| self.command.keys().iter().find(|s| s.name == name).and_then(|s| s.default))
    }
}

/// Help text listing every command with its keys and defaults.
pub fn keys_help() -> String {
    let mut out = String::from("Commands and parameters (defaults in brackets):\n");
    for c in COMMANDS {
        out.push_str(&format!("  {}:", c.name()));
        for k in c.keys() {
            let name = k.name.replace('_', "-");
            match k.default {
                Some(d) => out.push_str(&format!(" --{name} [{d}]")),
                None => out.push_str(&format!(" --{name}")),
            }
        }
        out.push('\n');
    }
    out.push_str("  all: --output <path>, --format csv|json, --abs-tol, --rel-tol, --max-iter\n");
    out.push_str("Sweeps are written lo:hi:points, with a `log` suffix for log spacing (e.g. 1e-12:1e-4:50log).\n");
    out.push_str("BOSEGAS_THREADS caps the number of worker threads.\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_values() {
        let s = SweepSpec::parse("1:100:3log").unwrap();
        let v = s.values();
        assert_eq!(v.len(), 3);
        assert!((v[1] - 10.0).abs() < 1e-12 && v[2] == 100.0);
        assert_eq!(SweepSpec::parse("0:1:5").unwrap().values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(SweepSpec::parse("0:1:5:log").is_err());
        assert!(SweepSpec::parse("1:2").is_err());
    }

    #[test]
    fn suggestion_is_nearest() {
        assert_eq!(suggest("ro", POTENTIAL_INNER.iter().copied()), Some("r0"));
        assert_eq!(suggest("zzzzzzzz", POTENTIAL_INNER.iter().copied()), None);
    }
}
