//! Run configuration and its nested key-value text format.
//!
//! The format is line based:
//!
//! ```text
//! # comment
//! scenario = flat
//! output = out.csv
//! format = csv
//! [params]
//! kind = dirac
//! qr = 1.0
//! [grid]
//! start = 0
//! stop = 0.785398
//! points = 50
//! [truncation]
//! n_max = 40
//! [tolerances]
//! tol_neg = 1e-10
//! ```
//!
//! Top-level keys configure the run; `[params]` holds scenario parameters;
//! `[grid]`, `[truncation]` and `[tolerances]` are optional sections.
//! Unknown top-level keys and unknown sections are rejected.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Result, RqiError};

pub const SCENARIOS: [&str; 11] = [
    "flat",
    "bounded",
    "multimode",
    "sectors",
    "amplify",
    "blackhole",
    "collapse",
    "expansion",
    "berry",
    "smearing",
    "verify",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl ParamValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            ParamValue::Number(v) => Some(*v),
            ParamValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> String {
        match self {
            ParamValue::Number(v) => v.to_string(),
            ParamValue::Text(s) => s.clone(),
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Number(v) => write!(f, "{v}"),
            ParamValue::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(RqiError::invalid(
                "format",
                format!("expected csv or json, got `{other}`"),
            )),
        }
    }
}

/// One fully specified run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub params: BTreeMap<String, ParamValue>,
    pub output: Option<String>,
    pub format: OutputFormat,
    pub grid: Option<GridSpec>,
    pub n_max: Option<u32>,
    pub tol_neg: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: String::new(),
            params: BTreeMap::new(),
            output: None,
            format: OutputFormat::Csv,
            grid: None,
            n_max: None,
            tol_neg: None,
        }
    }
}

impl RunConfig {
    pub fn number(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(|v| v.as_number())
    }

    pub fn text(&self, key: &str) -> Option<String> {
        self.params.get(key).map(|v| v.as_text())
    }

    /// Serializes back to the text format (round-trips through `parse`).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario = {}\n", self.scenario));
        if let Some(o) = &self.output {
            out.push_str(&format!("output = {o}\n"));
        }
        out.push_str(&format!(
            "format = {}\n",
            match self.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
        ));
        if !self.params.is_empty() {
            out.push_str("[params]\n");
            for (k, v) in &self.params {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        if let Some(g) = &self.grid {
            out.push_str("[grid]\n");
            out.push_str(&format!("start = {}\n", g.start));
            out.push_str(&format!("stop = {}\n", g.stop));
            out.push_str(&format!("points = {}\n", g.points));
        }
        if let Some(n) = self.n_max {
            out.push_str("[truncation]\n");
            out.push_str(&format!("n_max = {n}\n"));
        }
        if let Some(t) = self.tol_neg {
            out.push_str("[tolerances]\n");
            out.push_str(&format!("tol_neg = {t}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Top,
    Params,
    Grid,
    Truncation,
    Tolerances,
}

/// Parses the nested key-value text format. Rejects unknown keys, unknown
/// sections, duplicate keys and malformed numbers with a line number.
pub fn parse_config(input: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut section = Section::Top;
    let mut grid_fields: BTreeMap<&str, f64> = BTreeMap::new();
    let mut seen_top: Vec<String> = Vec::new();

    for (ln, raw) in input.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| RqiError::ConfigParse {
                line: line_no,
                reason: "unterminated section header".into(),
            })?;
            section = match name.trim() {
                "params" => Section::Params,
                "grid" => Section::Grid,
                "truncation" => Section::Truncation,
                "tolerances" => Section::Tolerances,
                other => {
                    return Err(RqiError::ConfigParse {
                        line: line_no,
                        reason: format!("unknown section `[{other}]`"),
                    });
                }
            };
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| RqiError::ConfigParse {
            line: line_no,
            reason: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(RqiError::ConfigParse {
                line: line_no,
                reason: "empty key".into(),
            });
        }
        let parse_num = |v: &str| -> Result<f64> {
            let x: f64 = v.parse().map_err(|_| RqiError::ConfigParse {
                line: line_no,
                reason: format!("`{v}` is not a number"),
            })?;
            if !x.is_finite() {
                return Err(RqiError::ConfigParse {
                    line: line_no,
                    reason: format!("`{v}` is not finite"),
                });
            }
            Ok(x)
        };
        match section {
            Section::Top => {
                if seen_top.iter().any(|k| k == key) {
                    return Err(RqiError::ConfigParse {
                        line: line_no,
                        reason: format!("duplicate key `{key}`"),
                    });
                }
                seen_top.push(key.to_string());
                match key {
                    "scenario" => {
                        if !SCENARIOS.contains(&value) {
                            return Err(RqiError::ConfigParse {
                                line: line_no,
                                reason: format!("unknown scenario `{value}`"),
                            });
                        }
                        cfg.scenario = value.to_string();
                    }
                    "output" => cfg.output = Some(value.to_string()),
                    "format" => {
                        cfg.format = OutputFormat::parse(value).map_err(|_| {
                            RqiError::ConfigParse {
                                line: line_no,
                                reason: format!("format must be csv or json, got `{value}`"),
                            }
                        })?;
                    }
                    other => {
                        return Err(RqiError::ConfigParse {
                            line: line_no,
                            reason: format!("unknown key `{other}`"),
                        });
                    }
                }
            }
            Section::Params => {
                if !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(RqiError::ConfigParse {
                        line: line_no,
                        reason: format!("invalid parameter name `{key}`"),
                    });
                }
                if cfg.params.contains_key(key) {
                    return Err(RqiError::ConfigParse {
                        line: line_no,
                        reason: format!("duplicate parameter `{key}`"),
                    });
                }
                let v = match value.parse::<f64>() {
                    Ok(x) if x.is_finite() => ParamValue::Number(x),
                    _ => ParamValue::Text(value.to_string()),
                };
                cfg.params.insert(key.to_string(), v);
            }
            Section::Grid => {
                let v = parse_num(value)?;
                match key {
                    "start" | "stop" | "points" => {
                        if grid_fields.insert(key, v).is_some() {
                            return Err(RqiError::ConfigParse {
                                line: line_no,
                                reason: format!("duplicate grid key `{key}`"),
                            });
                        }
                    }
                    other => {
                        return Err(RqiError::ConfigParse {
                            line: line_no,
                            reason: format!("unknown grid key `{other}`"),
                        });
                    }
                }
            }
            Section::Truncation => match key {
                "n_max" => {
                    let v = parse_num(value)?;
                    if !(1.0..=100_000.0).contains(&v) || v.fract() != 0.0 {
                        return Err(RqiError::ConfigParse {
                            line: line_no,
                            reason: format!("n_max must be an integer in [1, 100000], got {value}"),
                        });
                    }
                    cfg.n_max = Some(v as u32);
                }
                other => {
                    return Err(RqiError::ConfigParse {
                        line: line_no,
                        reason: format!("unknown truncation key `{other}`"),
                    });
                }
            },
            Section::Tolerances => match key {
                "tol_neg" => {
                    let v = parse_num(value)?;
                    if !(v > 0.0 && v < 1.0) {
                        return Err(RqiError::ConfigParse {
                            line: line_no,
                            reason: "tol_neg must lie in (0, 1)".into(),
                        });
                    }
                    cfg.tol_neg = Some(v);
                }
                other => {
                    return Err(RqiError::ConfigParse {
                        line: line_no,
                        reason: format!("unknown tolerance key `{other}`"),
                    });
                }
            },
        }
    }

    if !grid_fields.is_empty() {
        let start = *grid_fields.get("start").ok_or_else(|| RqiError::ConfigParse {
            line: 0,
            reason: "[grid] requires start".into(),
        })?;
        let stop = *grid_fields.get("stop").ok_or_else(|| RqiError::ConfigParse {
            line: 0,
            reason: "[grid] requires stop".into(),
        })?;
        let points = *grid_fields.get("points").ok_or_else(|| RqiError::ConfigParse {
            line: 0,
            reason: "[grid] requires points".into(),
        })?;
        if !(2.0..=1_000_000.0).contains(&points) || points.fract() != 0.0 {
            return Err(RqiError::ConfigParse {
                line: 0,
                reason: "grid points must be an integer in [2, 1000000]".into(),
            });
        }
        if stop <= start {
            return Err(RqiError::ConfigParse {
                line: 0,
                reason: "grid stop must exceed start".into(),
            });
        }
        cfg.grid = Some(GridSpec {
            start,
            stop,
            points: points as usize,
        });
    }

    if cfg.scenario.is_empty() {
        return Err(RqiError::ConfigParse {
            line: 0,
            reason: "missing `scenario` key".into(),
        });
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# example run
scenario = flat
output = out.csv
format = csv
[params]
kind = dirac
qr = 1.0
[grid]
start = 0
stop = 0.785398163
points = 50
[truncation]
n_max = 40
[tolerances]
tol_neg = 1e-10
";

    #[test]
    fn parses_sample() {
        let cfg = parse_config(SAMPLE).unwrap();
        assert_eq!(cfg.scenario, "flat");
        assert_eq!(cfg.text("kind").as_deref(), Some("dirac"));
        assert_eq!(cfg.number("qr"), Some(1.0));
        assert_eq!(cfg.grid.unwrap().points, 50);
        assert_eq!(cfg.n_max, Some(40));
        assert_eq!(cfg.tol_neg, Some(1e-10));
    }

    #[test]
    fn round_trips() {
        let cfg = parse_config(SAMPLE).unwrap();
        let again = parse_config(&cfg.to_text()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(parse_config("scenario = flat\nbogus = 1\n").is_err());
        assert!(parse_config("scenario = flat\n[wat]\nx = 1\n").is_err());
        assert!(parse_config("scenario = teleport\n").is_err());
        assert!(parse_config("scenario = flat\n[grid]\nstart = 0\n").is_err());
        assert!(parse_config("scenario = flat\nscenario = flat\n").is_err());
        assert!(parse_config("[params]\nx = 1\n").is_err()); // no scenario
        assert!(parse_config("scenario = flat\n[truncation]\nn_max = 0\n").is_err());
        assert!(parse_config("scenario = flat\n[truncation]\nn_max = 2.5\n").is_err());
    }

    #[test]
    fn line_numbers_in_errors() {
        let err = parse_config("scenario = flat\nbroken line\n").unwrap_err();
        match err {
            RqiError::ConfigParse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
