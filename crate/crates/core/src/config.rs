//! Run configuration: a JSON document with `spec`, `command`, `params` and
//! `output` sections.

use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numerics::{MultiplicativeRelations, Rational, DEFAULT_MAX_PRECISION};
use crate::odometer::OdometerSpec;
use crate::product_spaces::{Block, Epsilon0, SequenceSpec};

pub const PRECISION_ENV: &str = "ERGOFLOW_PRECISION";

/// Comparison precision from `ERGOFLOW_PRECISION`, or the default.
pub fn default_precision() -> Result<u32> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|p| *p >= 8)
            .ok_or_else(|| Error::Validation {
                field: PRECISION_ENV.into(),
                message: format!("expected an integer >= 8, got `{v}`"),
            }),
        Err(_) => Ok(DEFAULT_MAX_PRECISION),
    }
}

/// Exact rational from `"p/q"`, an integer, or a finite decimal `"0.125"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Validation {
        field: "rational".into(),
        message: format!("cannot read `{text}` as an exact rational"),
    };
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let denom = BigInt::from(10).pow(frac_part.len() as u32);
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct RationalText(Rational);

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(i) => i.to_string(),
            Raw::Text(s) => s,
        };
        parse_rational(&text)
            .map(RationalText)
            .map_err(|_| de::Error::custom(format!("`{text}` is not an exact rational")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    l: u32,
    lambda: RationalText,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEpsilon {
    scale: RationalText,
    base: RationalText,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    index: u32,
    base: RationalText,
    exponent: u32,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawSpec {
    Sequence {
        blocks: Vec<RawBlock>,
        epsilon0: Option<RawEpsilon>,
        #[serde(default)]
        relations: Vec<RawRelation>,
        #[serde(default = "yes")]
        monotone: bool,
    },
    Constant {
        l: u32,
        lambda: RationalText,
        length: usize,
    },
    Odometer {
        lambda: u32,
        k: u32,
    },
}

fn yes() -> bool {
    true
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawParams {
    n: Option<usize>,
    m: Option<usize>,
    targets: Option<Vec<RawTarget>>,
    epsilon: Option<RationalText>,
    max_depth: Option<usize>,
    seed: Option<u64>,
    samples: Option<u64>,
    horizon: Option<u32>,
    max_range: Option<usize>,
    max_l: Option<u32>,
    lambdas: Option<Vec<RationalText>>,
    points: Option<Vec<RawFlowPoint>>,
    instances: Option<u64>,
    levels: Option<u32>,
    cylinder_length: Option<usize>,
    coding_levels: Option<u32>,
    min_hits: Option<u64>,
    tolerance: Option<RationalText>,
    precision: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    cylinders: Vec<Vec<u32>>,
    #[serde(default)]
    coefficients: Option<Vec<RationalText>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlowPoint {
    z: Vec<u32>,
    #[serde(default)]
    t: Vec<i64>,
    #[serde(default)]
    q: Option<RationalText>,
    s: Vec<i64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    spec: Option<RawSpec>,
    command: Command,
    #[serde(default)]
    params: RawParams,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Identities,
    Defects,
    Certify,
    Flow,
    Odometer,
    Recurrence,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Identities => "identities",
            Command::Defects => "defects",
            Command::Certify => "certify",
            Command::Flow => "flow",
            Command::Odometer => "odometer",
            Command::Recurrence => "recurrence",
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| {
            Error::Validation {
                field: "command".into(),
                message: format!("unknown command `{s}`"),
            }
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Validation {
                field: "format".into(),
                message: format!("expected csv or json, got `{s}`"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecConfig {
    Sequence(SequenceSpec),
    Odometer(OdometerSpec),
}

/// A nonnegative step function `Σ cᵢ·χ_{C(aᵢ)}` given in the config.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetConfig {
    pub cylinders: Vec<Vec<u32>>,
    pub coefficients: Vec<Rational>,
}

/// Base point `(z, t·log + q·δ)` and flow time `s`, all log parts as integer
/// coefficient vectors over `log λ₁, log λ₂, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowPointConfig {
    pub z: Vec<u32>,
    pub t: Vec<i64>,
    pub q: Rational,
    pub s: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    pub m: Option<usize>,
    pub targets: Vec<TargetConfig>,
    pub epsilon: Rational,
    pub max_depth: usize,
    pub seed: u64,
    pub samples: u64,
    pub horizon: u32,
    pub max_range: usize,
    pub max_l: u32,
    pub lambdas: Vec<Rational>,
    pub points: Vec<FlowPointConfig>,
    pub instances: u64,
    pub levels: u32,
    pub cylinder_length: usize,
    pub coding_levels: u32,
    pub min_hits: u64,
    pub tolerance: Rational,
    pub precision: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub spec: Option<SpecConfig>,
    pub command: Command,
    pub params: Params,
    pub output: OutputConfig,
    raw: serde_json::Value,
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub max_depth: Option<usize>,
    pub format: Option<Format>,
    pub m: Option<usize>,
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        field: field.into(),
        message: message.into(),
    }
}

fn positive<T: PartialOrd + Default + Copy>(field: &str, v: T) -> Result<T> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(invalid(field, "must be positive"))
    }
}

fn build_spec(raw: RawSpec) -> Result<SpecConfig> {
    let spec_err = |e: Error| match e {
        Error::InvalidSpec(m) => invalid("spec", m),
        Error::InvalidRelation { index, reason } => {
            invalid("spec.relations", format!("index {index}: {reason}"))
        }
        other => other,
    };
    Ok(match raw {
        RawSpec::Sequence {
            blocks,
            epsilon0,
            relations,
            monotone,
        } => {
            let blocks: Vec<Block> = blocks.into_iter().map(|b| Block::new(b.l, b.lambda.0)).collect();
            let eps = match epsilon0 {
                Some(e) => Epsilon0::new(e.scale.0, e.base.0).map_err(spec_err)?,
                None => Epsilon0::log2(),
            };
            let rel = MultiplicativeRelations::new(
                relations.into_iter().map(|r| (r.index, r.base.0, r.exponent)),
            )
            .map_err(spec_err)?;
            let spec = if monotone {
                SequenceSpec::new(blocks, eps, rel)
            } else {
                SequenceSpec::relaxed(blocks, eps, rel)
            };
            SpecConfig::Sequence(spec.map_err(spec_err)?)
        }
        RawSpec::Constant { l, lambda, length } => {
            SpecConfig::Sequence(SequenceSpec::constant(l, lambda.0, positive("spec.length", length)?).map_err(spec_err)?)
        }
        RawSpec::Odometer { lambda, k } => {
            SpecConfig::Odometer(OdometerSpec::new(lambda, k).map_err(spec_err)?)
        }
    })
}

fn build_params(raw: RawParams) -> Result<Params> {
    let targets = raw
        .targets
        .unwrap_or_default()
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let coefficients = match t.coefficients {
                Some(c) => c.into_iter().map(|x| x.0).collect(),
                None => vec![Rational::from_integer(1.into()); t.cylinders.len()],
            };
            if coefficients.len() != t.cylinders.len() {
                return Err(invalid(
                    &format!("params.targets[{i}]"),
                    "coefficients and cylinders differ in length",
                ));
            }
            if coefficients.iter().any(|c| c.is_negative()) {
                return Err(invalid(&format!("params.targets[{i}]"), "negative coefficient"));
            }
            Ok(TargetConfig {
                cylinders: t.cylinders,
                coefficients,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let points = raw
        .points
        .unwrap_or_default()
        .into_iter()
        .map(|p| FlowPointConfig {
            z: p.z,
            t: p.t,
            q: p.q.map(|q| q.0).unwrap_or_default(),
            s: p.s,
        })
        .collect();
    let epsilon = raw.epsilon.map(|e| e.0).unwrap_or_else(|| Rational::new(1.into(), 10.into()));
    if !epsilon.is_positive() {
        return Err(invalid("params.epsilon", "must be positive"));
    }
    let tolerance = raw.tolerance.map(|e| e.0).unwrap_or_else(|| Rational::new(1.into(), 20.into()));
    if tolerance.is_negative() {
        return Err(invalid("params.tolerance", "must be nonnegative"));
    }
    let lambdas = match raw.lambdas {
        Some(ls) => ls.into_iter().map(|l| l.0).collect(),
        None => vec![
            Rational::new(1.into(), 2.into()),
            Rational::new(1.into(), 3.into()),
            Rational::new(2.into(), 7.into()),
        ],
    };
    if lambdas.is_empty() || lambdas.iter().any(|l| !l.is_positive()) {
        return Err(invalid("params.lambdas", "need positive values"));
    }
    if let Some(p) = raw.precision {
        if p < 8 {
            return Err(invalid("params.precision", "must be at least 8"));
        }
    }
    Ok(Params {
        n: raw.n.unwrap_or(0),
        m: raw.m,
        targets,
        epsilon,
        max_depth: positive("params.max_depth", raw.max_depth.unwrap_or(64))?,
        seed: raw.seed.unwrap_or(0),
        samples: positive("params.samples", raw.samples.unwrap_or(2000))?,
        horizon: positive("params.horizon", raw.horizon.unwrap_or(200))?,
        max_range: positive("params.max_range", raw.max_range.unwrap_or(3))?,
        max_l: positive("params.max_l", raw.max_l.unwrap_or(3))?,
        lambdas,
        points,
        instances: raw.instances.unwrap_or(0),
        levels: raw.levels.unwrap_or(3),
        cylinder_length: raw.cylinder_length.unwrap_or(4),
        coding_levels: raw.coding_levels.unwrap_or(5),
        min_hits: raw.min_hits.unwrap_or(1),
        tolerance,
        precision: raw.precision,
    })
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &Overrides::default())
}

pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<RunConfig> {
    let mut value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    apply_overrides(&mut value, overrides);
    let raw: RawConfig = serde_json::from_value(value.clone()).map_err(|e| {
        let located = serde_json::from_str::<RawConfig>(text).err();
        match located {
            Some(l) if l.line() > 0 => Error::Parse {
                line: l.line(),
                column: l.column(),
                message: l.to_string(),
            },
            _ => Error::Parse {
                line: 0,
                column: 0,
                message: e.to_string(),
            },
        }
    })?;
    let spec = raw.spec.map(build_spec).transpose()?;
    let params = build_params(raw.params)?;
    let config = RunConfig {
        spec,
        command: raw.command,
        params,
        output: OutputConfig {
            dir: raw.output.dir.unwrap_or_else(|| PathBuf::from("out")),
            format: raw.output.format.unwrap_or_default(),
        },
        raw: value,
    };
    config.check_command()?;
    Ok(config)
}

fn apply_overrides(value: &mut serde_json::Value, o: &Overrides) {
    use serde_json::{json, Value};
    let Some(obj) = value.as_object_mut() else {
        return;
    };
    if let Some(c) = o.command {
        obj.insert("command".into(), json!(c.name()));
    }
    let mut section = |name: &str, key: &str, v: Value| {
        let entry = obj.entry(name).or_insert_with(|| json!({}));
        if let Some(map) = entry.as_object_mut() {
            map.insert(key.into(), v);
        }
    };
    if let Some(seed) = o.seed {
        section("params", "seed", json!(seed));
    }
    if let Some(d) = o.max_depth {
        section("params", "max_depth", json!(d));
    }
    if let Some(m) = o.m {
        section("params", "m", json!(m));
    }
    if let Some(dir) = &o.out {
        section("output", "dir", json!(dir));
    }
    if let Some(f) = o.format {
        section(
            "output",
            "format",
            json!(match f {
                Format::Csv => "csv",
                Format::Json => "json",
            }),
        );
    }
}

impl RunConfig {
    fn check_command(&self) -> Result<()> {
        let needs_sequence = matches!(
            self.command,
            Command::Defects | Command::Certify | Command::Flow
        );
        let needs_odometer = matches!(self.command, Command::Odometer | Command::Recurrence);
        match (&self.spec, needs_sequence, needs_odometer) {
            (Some(SpecConfig::Sequence(_)), true, _) | (Some(SpecConfig::Odometer(_)), _, true) => Ok(()),
            (_, false, false) => Ok(()),
            (None, _, true) => Ok(()),
            _ => Err(invalid(
                "spec",
                format!("command `{}` needs a different spec kind", self.command.name()),
            )),
        }
    }

    pub fn sequence_spec(&self) -> Option<&SequenceSpec> {
        match &self.spec {
            Some(SpecConfig::Sequence(s)) => Some(s),
            _ => None,
        }
    }

    pub fn odometer_spec(&self) -> Option<&OdometerSpec> {
        match &self.spec {
            Some(SpecConfig::Odometer(s)) => Some(s),
            _ => None,
        }
    }

    /// The output directory does not enter the hash.
    pub fn canonical_json(&self) -> String {
        let mut v = self.raw.clone();
        if let Some(obj) = v.as_object_mut() {
            if let Some(out) = obj.get_mut("output").and_then(|o| o.as_object_mut()) {
                out.remove("dir");
                if out.is_empty() {
                    obj.remove("output");
                }
            }
        }
        serde_json::to_string(&v).expect("json value serialises")
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn config_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Effective comparison precision: the config, then the environment.
    pub fn precision(&self) -> Result<u32> {
        match self.params.precision {
            Some(p) => Ok(p),
            None => default_precision(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    const TOY2: &str = r#"{
        "spec": {"kind": "sequence",
                 "blocks": [{"l": 1, "lambda": "1/2"}, {"l": 2, "lambda": "1/32"}],
                 "relations": [{"index": 2, "base": "1/2", "exponent": 5}]},
        "command": "flow",
        "params": {"points": [{"z": [0, 0], "s": [0, 1]}]}
    }"#;

    #[test]
    fn minimal_sequence_config() {
        let c = parse_config(TOY2).unwrap();
        assert_eq!(c.sequence_spec().unwrap().len(), 2);
        assert_eq!(c.command, Command::Flow);
        assert_eq!(c.output.format, Format::Csv);
    }

    #[test]
    fn decimal_lambda() {
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational(" 3/12 ").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        for bad in ["", "1/0", "0.5e3", "abc", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        let text = TOY2.replace("\"1/2\"}, {", "\"0.5\"}, {");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.sequence_spec().unwrap().block(1).lambda, ratio(1, 2));
    }

    #[test]
    fn first_block_must_have_l_one() {
        let text = TOY2.replace("{\"l\": 1, \"lambda\": \"1/2\"}", "{\"l\": 2, \"lambda\": \"1/2\"}");
        assert!(matches!(parse_config(&text), Err(Error::Validation { .. })));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_config("{\n  \"command\": \"flow\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = parse_config("{\"command\": \"nope\"}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn overrides_and_hash() {
        let base = parse_config(TOY2).unwrap();
        let o = Overrides {
            seed: Some(9),
            out: Some("elsewhere".into()),
            ..Default::default()
        };
        let c = parse_config_with(TOY2, &o).unwrap();
        assert_eq!(c.params.seed, 9);
        assert_eq!(c.output.dir, PathBuf::from("elsewhere"));
        assert_ne!(c.config_hash(), base.config_hash());
        let only_dir = Overrides {
            out: Some("x".into()),
            ..Default::default()
        };
        assert_eq!(parse_config_with(TOY2, &only_dir).unwrap().config_hash(), base.config_hash());
        assert_eq!(base.config_hash().len(), 64);
    }

    #[test]
    fn spec_kind_must_fit_command() {
        let text = TOY2.replace("\"flow\"", "\"odometer\"");
        assert!(parse_config(&text).is_err());
        let c = parse_config(r#"{"command": "identities"}"#).unwrap();
        assert!(c.spec.is_none());
    }
}
