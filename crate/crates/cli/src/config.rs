//! `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use padic_nagumo::operators::{PdTerms, TailPolicy};
use padic_nagumo::solver::{Method, ModelParams, SolverConfig};
use padic_nagumo::wavelets::WeightKind;
use padic_nagumo::Prime;
use serde::Serialize;

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InitialDatum {
    /// `amplitude · e^{-p^{|ord|} / width}`.
    Gauss { amplitude: f64, width: f64 },
    /// Indicator of the ball `B_k`.
    Ball { k: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub solver: SolverConfig,
    pub initial: InitialDatum,
    pub weight_r: i64,
    pub weight_kind: WeightKind,
    pub out_dir: PathBuf,
    pub png_scale: u32,
}

const REQUIRED: &[&str] = &["p", "gamma", "alpha", "initial"];

const KNOWN: &[&str] = &[
    "p",
    "gamma",
    "alpha",
    "beta",
    "m",
    "pd_terms",
    "s",
    "reaction",
    "j_min",
    "j_max",
    "dt",
    "t_end",
    "save_every",
    "tail_depth",
    "blowup_threshold",
    "max_picard_iters",
    "picard_tol",
    "method",
    "initial",
    "weight_r",
    "weight_kind",
    "out_dir",
    "png_scale",
];

struct Entry<'a> {
    line: usize,
    value: &'a str,
}

struct Entries<'a> {
    map: BTreeMap<&'a str, Entry<'a>>,
}

impl<'a> Entries<'a> {
    fn get<T>(
        &self,
        key: &str,
        default: Option<T>,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<T, ConfigError> {
        match self.map.get(key) {
            Some(e) => parse(e.value).map_err(|msg| ConfigError::Invalid {
                line: e.line,
                key: key.to_string(),
                message: msg,
            }),
            None => default.ok_or_else(|| ConfigError::Missing(key.to_string())),
        }
    }

    fn line_of(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |e| e.line)
    }
}

fn float(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{v}` is not finite"))
    }
}

fn positive(v: &str) -> Result<f64, String> {
    let x = float(v)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive, got {x}"))
    }
}

fn nonnegative(v: &str) -> Result<f64, String> {
    let x = float(v)?;
    if x >= 0.0 {
        Ok(x)
    } else {
        Err(format!("must be nonnegative, got {x}"))
    }
}

fn integer<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("`{v}` is not an integer"))
}

fn positive_integer<T: std::str::FromStr + PartialOrd + Default>(v: &str) -> Result<T, String> {
    let x: T = integer(v)?;
    if x > T::default() {
        Ok(x)
    } else {
        Err(format!("`{v}` must be a positive integer"))
    }
}

fn pd_terms(v: &str) -> Result<PdTerms, String> {
    let terms = v
        .split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (c, d) = t
                .split_once(':')
                .ok_or_else(|| format!("term `{t}` is not `coef:exponent`"))?;
            Ok((float(c.trim())?, float(d.trim())?))
        })
        .collect::<Result<Vec<_>, String>>()?;
    PdTerms::new(terms).map_err(|e| e.to_string())
}

fn initial(v: &str) -> Result<InitialDatum, String> {
    let parts: Vec<&str> = v.split(':').map(str::trim).collect();
    match parts.as_slice() {
        ["gauss", a, b] => Ok(InitialDatum::Gauss {
            amplitude: float(a)?,
            width: positive(b)?,
        }),
        ["ball", k] => Ok(InitialDatum::Ball { k: integer(k)? }),
        _ => Err(format!("`{v}` is neither `gauss:A:B` nor `ball:k`")),
    }
}

fn method(v: &str) -> Result<Method, String> {
    match v {
        "euler-kochubei" => Ok(Method::EulerKochubei),
        "euler-spectral" => Ok(Method::EulerSpectral),
        "picard" => Ok(Method::Picard),
        _ => Err(format!("unknown method `{v}`")),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::EulerKochubei => "euler-kochubei",
        Method::EulerSpectral => "euler-spectral",
        Method::Picard => "picard",
    }
}

fn on_off(v: &str) -> Result<bool, String> {
    match v {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        _ => Err(format!("expected `on` or `off`, got `{v}`")),
    }
}

fn weight_kind(v: &str) -> Result<WeightKind, String> {
    match v {
        "signed-square" | "signed" => Ok(WeightKind::SignedSquare),
        "modulus" => Ok(WeightKind::Modulus),
        _ => Err(format!("expected `signed-square` or `modulus`, got `{v}`")),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        if !KNOWN.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        }
        if let Some(prev) = map.insert(
            key,
            Entry {
                line,
                value: value.trim(),
            },
        ) {
            return Err(ConfigError::Duplicate {
                line,
                key: key.to_string(),
                first: prev.line,
            });
        }
    }
    for key in REQUIRED {
        if !map.contains_key(key) {
            return Err(ConfigError::Missing(key.to_string()));
        }
    }
    let e = Entries { map };
    let defaults = SolverConfig::default();

    let p = e.get("p", None, |v| {
        Prime::new(integer(v)?).map_err(|err| err.to_string())
    })?;
    let params = ModelParams {
        p,
        gamma: e.get("gamma", None, positive)?,
        alpha: e.get("alpha", None, positive)?,
        beta: e.get("beta", Some(0.0), nonnegative)?,
        m: e.get("m", Some(3), positive_integer)?,
        pd: e.get("pd_terms", Some(PdTerms::empty()), pd_terms)?,
        s: e.get("s", Some(1.5), float)?,
        reaction: e.get("reaction", Some(true), on_off)?,
    };
    params.validate().map_err(|err| ConfigError::Invalid {
        line: e.line_of("s"),
        key: "s".into(),
        message: err.to_string(),
    })?;

    let solver = SolverConfig {
        j_min: e.get("j_min", Some(defaults.j_min), integer)?,
        j_max: e.get("j_max", Some(defaults.j_max), integer)?,
        dt: e.get("dt", Some(defaults.dt), positive)?,
        t_end: e.get("t_end", Some(defaults.t_end), nonnegative)?,
        save_every: e.get("save_every", Some(defaults.save_every), positive_integer)?,
        tail: e.get("tail_depth", Some(defaults.tail), |v| {
            TailPolicy::new(positive_integer(v)?).map_err(|err| err.to_string())
        })?,
        blowup_threshold: e.get(
            "blowup_threshold",
            Some(defaults.blowup_threshold),
            positive,
        )?,
        max_picard_iters: e.get(
            "max_picard_iters",
            Some(defaults.max_picard_iters),
            positive_integer,
        )?,
        picard_tol: e.get("picard_tol", Some(defaults.picard_tol), positive)?,
        method: e.get("method", Some(defaults.method), method)?,
    };
    solver.validate().map_err(|err| ConfigError::Invalid {
        line: e.line_of("j_min"),
        key: "j_min".into(),
        message: err.to_string(),
    })?;

    let weight_r = e.get("weight_r", Some(0i64), |v| {
        let r: i64 = integer(v)?;
        if r <= 0 {
            Ok(r)
        } else {
            Err(format!("must be <= 0, got {r}"))
        }
    })?;

    Ok(RunConfig {
        params,
        solver,
        initial: e.get("initial", None, initial)?,
        weight_r,
        weight_kind: e.get("weight_kind", Some(WeightKind::SignedSquare), weight_kind)?,
        out_dir: e.get("out_dir", Some(PathBuf::from("out")), |v| {
            Ok(PathBuf::from(v))
        })?,
        png_scale: e.get("png_scale", Some(4u32), positive_integer)?,
    })
}

/// Canonical text form listing every key; `parse_config(to_text(c)) == c`.
pub fn to_text(c: &RunConfig) -> String {
    let mut s = String::new();
    let p = &c.params;
    let pd =
        p.pd.terms()
            .iter()
            .map(|(c, d)| format!("{c}:{d}"))
            .collect::<Vec<_>>()
            .join(";");
    let initial = match c.initial {
        InitialDatum::Gauss { amplitude, width } => format!("gauss:{amplitude}:{width}"),
        InitialDatum::Ball { k } => format!("ball:{k}"),
    };
    let kind = match c.weight_kind {
        WeightKind::SignedSquare => "signed-square",
        WeightKind::Modulus => "modulus",
    };
    let v = &c.solver;
    let lines: [(&str, String); 23] = [
        ("p", p.p.to_string()),
        ("gamma", p.gamma.to_string()),
        ("alpha", p.alpha.to_string()),
        ("beta", p.beta.to_string()),
        ("m", p.m.to_string()),
        ("pd_terms", pd),
        ("s", p.s.to_string()),
        (
            "reaction",
            if p.reaction { "on" } else { "off" }.to_string(),
        ),
        ("j_min", v.j_min.to_string()),
        ("j_max", v.j_max.to_string()),
        ("dt", v.dt.to_string()),
        ("t_end", v.t_end.to_string()),
        ("save_every", v.save_every.to_string()),
        ("tail_depth", v.tail.tail_depth.to_string()),
        ("blowup_threshold", v.blowup_threshold.to_string()),
        ("max_picard_iters", v.max_picard_iters.to_string()),
        ("picard_tol", v.picard_tol.to_string()),
        ("method", method_name(v.method).to_string()),
        ("initial", initial),
        ("weight_r", c.weight_r.to_string()),
        ("weight_kind", kind.to_string()),
        ("out_dir", c.out_dir.display().to_string()),
        ("png_scale", c.png_scale.to_string()),
    ];
    for (k, v) in lines {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEFT: &str = "\
# pure diffusion
p = 3
alpha = 0.2
gamma = 1
beta = 0
pd_terms =
reaction = off
initial = gauss:4:100
j_min = -20
j_max = 20
";

    #[test]
    fn parses_figure_config() {
        let c = parse_config(LEFT).unwrap();
        assert_eq!(c.params.p.get(), 3);
        assert!(!c.params.reaction);
        assert!(c.params.pd.is_empty());
        assert_eq!(
            c.initial,
            InitialDatum::Gauss {
                amplitude: 4.0,
                width: 100.0
            }
        );

        let right = LEFT
            .replace("reaction = off", "reaction = on")
            .replace("beta = 0", "beta = 0.7\nm = 3")
            .replace("pd_terms =", "pd_terms = 1:0.1");
        let c = parse_config(&right).unwrap();
        assert_eq!(c.params.pd.terms(), &[(1.0, 0.1)]);
        assert_eq!(c.params.beta, 0.7);
    }

    #[test]
    fn rejects_bad_input() {
        let err = parse_config(&LEFT.replace("alpha = 0.2", "alpha = -1")).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { line: 3, .. }), "{err}");
        assert!(matches!(
            parse_config(&format!("{LEFT}color = red\n")),
            Err(ConfigError::UnknownKey { line: 11, .. })
        ));
        assert!(matches!(
            parse_config(&format!("{LEFT}p = 5\n")),
            Err(ConfigError::Duplicate {
                line: 11,
                first: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_config(&LEFT.replace("initial = gauss:4:100", "")),
            Err(ConfigError::Missing(_))
        ));
        assert!(parse_config(&LEFT.replace("p = 3", "p = 4")).is_err());
        assert!(parse_config("p 3").is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = parse_config(LEFT).unwrap();
        let text = to_text(&c);
        let again = parse_config(&text).unwrap();
        assert_eq!(again, c);
        assert_eq!(to_text(&again), text);
    }
}
