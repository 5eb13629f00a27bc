//! Command dispatch and report emission.
//!
//! Every command produces named tables plus check summaries. CSV output
//! writes `<command>.csv` for the main table, `<command>_<table>.csv` for the
//! others and `<command>_checks.csv`; JSON output writes one
//! `<command>.json` carrying the config hash. Rationals appear as
//! `num/den` with a companion `_decimal` column.

use std::fs;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::certify::{certify_family, digit_box, FamilyOptions, StepFunction};
use crate::config::{Format, RunConfig, TargetConfig};
use crate::error::{Error, Result};
use crate::flows::{FlowPoint, FlowTime, Orbits, QuotientString};
use crate::numerics::Rational;
use crate::odometer::{recurrence_stats, OdometerSpec};
use crate::product_spaces::SequenceSpec;
use crate::residue::defect_profile;
use crate::verify::{
    defect_grid, flow_law_trials, identity_grid, odometer_checks, projection_checks,
    CheckSummary,
};

/// A cell of a report table.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i128),
    Bool(bool),
    Ratio(Rational),
    Float(f64),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Ratio(r)
    }
}

impl From<&BigInt> for Cell {
    fn from(b: &BigInt) -> Self {
        match b.to_i128() {
            Some(v) => Cell::Int(v),
            None => Cell::Text(b.to_string()),
        }
    }
}

macro_rules! int_cells {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i128)
            }
        }
    )*};
}
int_cells!(u32, u64, usize, i64);

/// Fixed decimal rendering: plain notation in `[1e-4, 1e6)`, scientific
/// otherwise.
pub fn decimal(r: &Rational) -> String {
    format_float(r.to_f64().unwrap_or(f64::NAN))
}

fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    fn csv_header(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, c) in self.columns.iter().enumerate() {
            out.push(c.clone());
            if matches!(self.rows.first().map(|r| &r[i]), Some(Cell::Ratio(_))) {
                out.push(format!("{c}_decimal"));
            }
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(self.csv_header()).map_err(io)?;
        for row in &self.rows {
            let mut rec = Vec::new();
            for cell in row {
                match cell {
                    Cell::Text(s) => rec.push(s.clone()),
                    Cell::Int(i) => rec.push(i.to_string()),
                    Cell::Bool(b) => rec.push(b.to_string()),
                    Cell::Float(x) => rec.push(format_float(*x)),
                    Cell::Ratio(r) => {
                        rec.push(r.to_string());
                        rec.push(decimal(r));
                    }
                }
            }
            w.write_record(rec).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (c, cell) in self.columns.iter().zip(row) {
                    match cell {
                        Cell::Text(s) => {
                            obj.insert(c.clone(), json!(s));
                        }
                        Cell::Int(i) => {
                            obj.insert(c.clone(), json!(*i as i64));
                        }
                        Cell::Bool(b) => {
                            obj.insert(c.clone(), json!(b));
                        }
                        Cell::Float(x) => {
                            obj.insert(c.clone(), json!(format_float(*x)));
                        }
                        Cell::Ratio(r) => {
                            obj.insert(c.clone(), json!(r.to_string()));
                            obj.insert(format!("{c}_decimal"), json!(decimal(r)));
                        }
                    }
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// Everything a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config_hash: String,
    pub tables: Vec<Table>,
    pub checks: Vec<CheckSummary>,
    pub extra: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::passed)
    }

    fn checks_table(&self) -> Table {
        let mut t = Table::new("checks", &["check", "checked", "failed", "skipped", "passed"]);
        for c in &self.checks {
            t.push(vec![
                c.name.as_str().into(),
                c.checked.into(),
                c.failed.into(),
                c.skipped.into(),
                c.passed().into(),
            ]);
        }
        t
    }

    pub fn to_json(&self) -> Value {
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| (t.name.clone(), t.to_json()))
            .collect();
        json!({
            "command": self.command,
            "config_hash": self.config_hash,
            "passed": self.passed(),
            "checks": self.checks,
            "tables": tables,
            "extra": self.extra,
        })
    }

    /// `(file name, contents)` pairs for a format.
    pub fn render(&self, format: Format) -> Result<Vec<(String, String)>> {
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.to_json())
                    .map_err(|e| Error::Io(e.to_string()))?;
                Ok(vec![(format!("{}.json", self.command), text + "\n")])
            }
            Format::Csv => {
                let mut files = Vec::new();
                for (i, t) in self.tables.iter().enumerate() {
                    let name = if i == 0 {
                        format!("{}.csv", self.command)
                    } else {
                        format!("{}_{}.csv", self.command, t.name)
                    };
                    files.push((name, t.to_csv()?));
                }
                files.push((format!("{}_checks.csv", self.command), self.checks_table().to_csv()?));
                Ok(files)
            }
        }
    }
}

/// Result of one run: the report and the files written.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            1
        }
    }
}

/// Exit status for a finished or failed run: 0, 1, or 2 on errors.
pub fn exit_code(outcome: &Result<RunOutcome>) -> i32 {
    match outcome {
        Ok(o) => o.exit_code(),
        Err(_) => 2,
    }
}

/// Computes the report without touching the file system.
pub fn build_report(config: &RunConfig) -> Result<Report> {
    let precision = config.precision()?;
    let (tables, checks, extra) = match config.command {
        crate::config::Command::Identities => run_identities(config)?,
        crate::config::Command::Defects => run_defects(config, need_sequence(config)?)?,
        crate::config::Command::Certify => run_certify(config, need_sequence(config)?)?,
        crate::config::Command::Flow => run_flow(config, need_sequence(config)?, precision)?,
        crate::config::Command::Odometer => run_odometer(config, need_odometer(config)?)?,
        crate::config::Command::Recurrence => run_recurrence(config, need_odometer(config)?)?,
    };
    Ok(Report {
        command: config.command.name().to_string(),
        config_hash: config.config_hash(),
        tables,
        checks,
        extra,
    })
}

/// Runs the configured command and writes its reports.
pub fn run_suite(config: &RunConfig) -> Result<RunOutcome> {
    let report = build_report(config)?;
    fs::create_dir_all(&config.output.dir)?;
    let mut files = Vec::new();
    for (name, text) in report.render(config.output.format)? {
        let path = config.output.dir.join(name);
        fs::write(&path, text)?;
        files.push(path);
    }
    Ok(RunOutcome { report, files })
}

type Parts = (Vec<Table>, Vec<CheckSummary>, Value);

fn need_sequence(config: &RunConfig) -> Result<&SequenceSpec> {
    config.sequence_spec().ok_or_else(|| Error::Validation {
        field: "spec".into(),
        message: "a sequence spec is required".into(),
    })
}

fn need_odometer(config: &RunConfig) -> Result<OdometerSpec> {
    match config.odometer_spec() {
        Some(s) => Ok(*s),
        None => OdometerSpec::new(2, 2),
    }
}

fn list(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("[{}]", parts.join(" "))
}

fn run_identities(config: &RunConfig) -> Result<Parts> {
    let p = &config.params;
    let (id_summary, id_rows) = identity_grid(p.max_range, p.max_l)?;
    let (def_summary, def_rows) = defect_grid(p.max_range, p.max_l, &p.lambdas)?;
    let mut ids = Table::new("ranges", &["ls", "tuples", "failures"]);
    for r in id_rows {
        ids.push(vec![list(&r.ls).into(), r.tuples.into(), r.failures.into()]);
    }
    let mut defs = Table::new(
        "defects",
        &["ls", "lambdas", "pair", "defect", "bound", "matches_enumeration"],
    );
    for r in def_rows {
        defs.push(vec![
            list(&r.ls).into(),
            format!("[{}]", r.lambdas.join(" ")).into(),
            r.pair.into(),
            r.value.into(),
            r.bound.into(),
            r.agrees.into(),
        ]);
    }
    Ok((vec![ids, defs], vec![id_summary, def_summary], Value::Null))
}

fn run_defects(config: &RunConfig, spec: &SequenceSpec) -> Result<Parts> {
    let p = &config.params;
    let m = p.m.unwrap_or(spec.len());
    if m <= p.n {
        return Err(Error::Validation {
            field: "params.m".into(),
            message: format!("need n < m, got n = {}, m = {m}", p.n),
        });
    }
    let rows = defect_profile(spec, p.n, m)?;
    let mut table = Table::new("defects", &["m", "pair", "defect", "bound", "within_bound"]);
    let mut summary = CheckSummary::new("defect-bound");
    let mut positive = CheckSummary::new("defect-positive");
    for row in rows {
        for d in row.defects {
            let within = d.value <= d.bound;
            summary.record(within, || format!("m={} {}", row.m, d.pair));
            positive.record(d.value > Rational::default(), || format!("m={} {}", row.m, d.pair));
            table.push(vec![
                row.m.into(),
                d.pair.to_string().into(),
                d.value.into(),
                d.bound.into(),
                within.into(),
            ]);
        }
    }
    Ok((vec![table], vec![summary, positive], json!({"n": p.n, "m": m})))
}

fn target_function(spec: &SequenceSpec, t: &TargetConfig) -> Result<StepFunction> {
    let mut f = StepFunction::zero();
    for (c, coeff) in t.cylinders.iter().zip(&t.coefficients) {
        spec.check_digits(c)?;
        f.add_term(c.clone(), coeff.clone());
    }
    Ok(f)
}

fn run_certify(config: &RunConfig, spec: &SequenceSpec) -> Result<Parts> {
    let p = &config.params;
    let targets: Vec<StepFunction> = if p.targets.is_empty() {
        let tops: Vec<u32> = spec.range(0, p.n)?.iter().map(|b| 2 * b.l).collect();
        digit_box(&tops).map(StepFunction::indicator).collect()
    } else {
        p.targets
            .iter()
            .map(|t| target_function(spec, t))
            .collect::<Result<_>>()?
    };
    let options = FamilyOptions {
        max_depth: p.max_depth,
        list_moves: false,
    };
    let cert = certify_family(spec, &targets, &p.epsilon, &options)?;
    let mut table = Table::new(
        "certificate",
        &[
            "target", "cylinder", "coefficient", "measure", "error", "relative_error", "bound",
            "pass",
        ],
    );
    let mut summary = CheckSummary::new("certificate");
    for (i, t) in cert.targets.iter().enumerate() {
        summary.record(t.pass, || format!("target {i}"));
        for (c, piece) in &t.pieces {
            table.push(vec![
                i.into(),
                list(&piece.a).into(),
                c.clone().into(),
                piece.measure.clone().into(),
                piece.error.clone().into(),
                piece.relative_error().into(),
                piece.bound.clone().into(),
                piece.pass.into(),
            ]);
        }
    }
    let targets_json: Vec<Value> = cert
        .targets
        .iter()
        .map(|t| {
            json!({
                "norm": t.norm.to_string(),
                "error": t.error.to_string(),
                "error_decimal": decimal(&t.error),
                "pass": t.pass,
            })
        })
        .collect();
    let extra = json!({
        "n": cert.n,
        "m": cert.m,
        "epsilon": cert.epsilon.to_string(),
        "bound": cert.bound.to_string(),
        "bound_decimal": decimal(&cert.bound),
        "f_terms": cert.f_terms,
        "targets": targets_json,
    });
    Ok((vec![table], vec![summary], extra))
}

fn run_flow(config: &RunConfig, spec: &SequenceSpec, precision: u32) -> Result<Parts> {
    let p = &config.params;
    let orbits = Orbits::new(spec, precision);
    let mut table = Table::new(
        "flow",
        &["z", "t", "q", "s", "image", "image_t", "image_q", "rn", "roundtrip"],
    );
    let mut summary = CheckSummary::new("flow-roundtrip");
    for pt in &p.points {
        let z = QuotientString::new(spec, pt.z.clone())?;
        let form = |c: &[i64]| {
            if c.len() > spec.len() {
                return Err(Error::Validation {
                    field: "params.points".into(),
                    message: "more coefficients than blocks".into(),
                });
            }
            Ok(spec.weighted_logs(0, c))
        };
        let start = FlowPoint {
            base: z,
            time: FlowTime {
                log_part: form(&pt.t)?,
                delta_part: pt.q.clone(),
            },
        };
        let s = form(&pt.s)?;
        let (image, rn) = orbits.flow_apply(&start, &s)?;
        let (back, rn_back) = orbits.flow_apply(&image, &-s.clone())?;
        let roundtrip = back.base == start.base
            && back.time.delta_part == start.time.delta_part
            && orbits
                .comparator()
                .compare(&back.time.log_part, &start.time.log_part)?
                .is_eq()
            && &rn * &rn_back == Rational::from_integer(1.into());
        summary.record(roundtrip, || format!("z={:?} s={:?}", pt.z, pt.s));
        table.push(vec![
            list(start.base.digits()).into(),
            start.time.log_part.to_string().into(),
            start.time.delta_part.clone().into(),
            s.to_string().into(),
            list(image.base.digits()).into(),
            image.time.log_part.to_string().into(),
            image.time.delta_part.clone().into(),
            rn.into(),
            roundtrip.into(),
        ]);
    }
    let mut checks = vec![summary];
    if p.instances > 0 {
        checks.push(flow_law_trials(p.instances, p.seed, precision)?);
    }
    Ok((vec![table], checks, json!({"seed": p.seed, "instances": p.instances})))
}

fn run_odometer(config: &RunConfig, spec: OdometerSpec) -> Result<Parts> {
    let p = &config.params;
    let (summary, rows) =
        odometer_checks(&[spec.k], p.levels, p.cylinder_length, p.coding_levels)?;
    let (proj, blocks) = projection_checks(&[spec.lambda], &[spec.k], p.levels.min(2))?;
    let mut tower = Table::new("tower", &["n", "index", "cell", "measure"]);
    for r in rows {
        tower.push(vec![r.n.into(), r.index.into(), r.cell.into(), r.measure.into()]);
    }
    let mut bt = Table::new("blocks", &["n", "block", "size", "mass"]);
    for b in blocks {
        bt.push(vec![b.n.into(), b.block.into(), (&b.size).into(), b.mass.into()]);
    }
    Ok((
        vec![tower, bt],
        vec![summary, proj],
        json!({"lambda": spec.lambda, "k": spec.k}),
    ))
}

fn run_recurrence(config: &RunConfig, spec: OdometerSpec) -> Result<Parts> {
    let p = &config.params;
    let report = recurrence_stats(&spec, p.samples, p.horizon, p.seed)?;
    let mut hist = Table::new("histogram", &["hits", "pairs"]);
    for (h, c) in report.histogram.iter().enumerate() {
        if *c > 0 {
            hist.push(vec![h.into(), (*c).into()]);
        }
    }
    let mut freq = Table::new("frequency", &["n", "pairs_hitting", "frequency"]);
    for (i, c) in report.per_index_hits.iter().enumerate() {
        freq.push(vec![
            (i + 1).into(),
            (*c).into(),
            Rational::new((*c).into(), report.samples.into()).into(),
        ]);
    }
    let mut min_check = CheckSummary::new("minimum-hits");
    min_check.record(report.min_hits >= p.min_hits, || {
        format!("minimum {} below {}", report.min_hits, p.min_hits)
    });
    let mut freq_check = CheckSummary::new("first-index-frequency");
    let f1 = Rational::new(report.per_index_hits[0].into(), report.samples.into());
    let target = Rational::new(1.into(), spec.k.into());
    let gap = if f1 > target { &f1 - &target } else { &target - &f1 };
    freq_check.record(gap <= p.tolerance, || format!("frequency {f1} vs {target}"));
    let extra = json!({
        "k": spec.k,
        "samples": report.samples,
        "horizon": report.horizon,
        "seed": report.seed,
        "min_hits": report.min_hits,
        "max_hits": report.max_hits,
        "mean_hits": format_float(report.mean_hits),
    });
    Ok((vec![hist, freq], vec![min_check, freq_check], extra))
}
