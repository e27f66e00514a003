//! Problem and result files, command dispatch and plot sampling.
//!
//! Both file kinds are JSON. Scalars are written as strings (`"-inf"`,
//! `"3"`, `"-1/2"`, `"0.25"`) so exact rationals survive; bare JSON numbers
//! are also accepted on input. Output is always canonical: reduced
//! fractions, normalized generators, sorted lists.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::maxplus::{MaxPlus, MaxPlusMatrix, MaxPlusVector};
use crate::reach::{self, StageSummary, SystemModel, TargetSet};
use crate::sets::Polyhedron;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Scalar(MaxPlus);

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(de::Error::custom(format!(
                    "expected a number or \"-inf\", found {other}"
                )))
            }
        };
        if text.trim() != text {
            return Err(de::Error::custom(format!("invalid scalar {text:?}")));
        }
        text.parse()
            .map(Scalar)
            .map_err(|_| de::Error::custom(format!("invalid scalar {text:?}")))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

type Grid = Vec<Vec<Scalar>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct RawDims {
    state: usize,
    control: usize,
    disturbance: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct RawPolyhedron {
    #[serde(default)]
    span: Grid,
    #[serde(default)]
    conv: Grid,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    lhs: Grid,
    rhs: Grid,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    dims: RawDims,
    #[serde(rename = "A")]
    a: Grid,
    #[serde(rename = "B")]
    b: Grid,
    #[serde(rename = "C")]
    c: Grid,
    control: RawPolyhedron,
    disturbance: RawPolyhedron,
    target: RawTarget,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.inner();
        let location = if path == "." {
            format!("line {}, column {}", inner.line(), inner.column())
        } else {
            format!("{path} (line {}, column {})", inner.line(), inner.column())
        };
        let message = inner.to_string();
        let message = message
            .split(" at line ")
            .next()
            .unwrap_or(&message)
            .to_string();
        Error::parse(location, message)
    })?;
    de.end().map_err(|e| {
        Error::parse(
            format!("line {}, column {}", e.line(), e.column()),
            "trailing characters",
        )
    })?;
    Ok(value)
}

fn to_matrix(field: &str, grid: &Grid, rows: usize, cols: usize) -> Result<MaxPlusMatrix> {
    if grid.len() != rows {
        return Err(Error::dims(format!("{field} rows"), rows, grid.len()));
    }
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != cols {
                return Err(Error::dims(
                    format!("{field}[{i}] columns"),
                    cols,
                    row.len(),
                ));
            }
            Ok(row.iter().map(|s| s.0.clone()).collect())
        })
        .collect::<Result<Vec<Vec<MaxPlus>>>>()?;
    MaxPlusMatrix::from_rows(cols, rows)
}

fn to_vectors(field: &str, grid: &Grid, dim: usize) -> Result<Vec<MaxPlusVector>> {
    grid.iter()
        .enumerate()
        .map(|(i, g)| {
            if g.len() != dim {
                return Err(Error::dims(format!("{field}[{i}]"), dim, g.len()));
            }
            Ok(g.iter().map(|s| s.0.clone()).collect())
        })
        .collect()
}

fn to_polyhedron(field: &str, raw: &RawPolyhedron, dim: usize) -> Result<Polyhedron> {
    Polyhedron::new(
        dim,
        to_vectors(&format!("{field}.span"), &raw.span, dim)?,
        to_vectors(&format!("{field}.conv"), &raw.conv, dim)?,
    )
}

fn grid_of_matrix(m: &MaxPlusMatrix) -> Grid {
    (0..m.nrows())
        .map(|i| m.row(i).iter().cloned().map(Scalar).collect())
        .collect()
}

fn grid_of_vectors(gens: &[MaxPlusVector]) -> Grid {
    gens.iter()
        .map(|g| g.iter().cloned().map(Scalar).collect())
        .collect()
}

fn raw_polyhedron(p: &Polyhedron) -> RawPolyhedron {
    RawPolyhedron {
        span: grid_of_vectors(p.span_generators()),
        conv: grid_of_vectors(p.conv_generators()),
    }
}

/// A validated problem: system, admissible sets and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub model: SystemModel,
    pub target: TargetSet,
}

impl ProblemFile {
    pub fn parse_str(text: &str) -> Result<Self> {
        let raw: RawProblem = from_json(text)?;
        let RawDims {
            state: n,
            control: m,
            disturbance: q,
        } = raw.dims;
        if n == 0 {
            return Err(Error::dims("dims.state", ">= 1", 0));
        }
        let a = to_matrix("A", &raw.a, n, n)?;
        let b = to_matrix("B", &raw.b, n, m)?;
        let c = to_matrix("C", &raw.c, n, q)?;
        let control = to_polyhedron("control", &raw.control, m)?;
        let disturbance = to_polyhedron("disturbance", &raw.disturbance, q)?;
        if raw.target.lhs.len() != raw.target.rhs.len() {
            return Err(Error::dims(
                "target.rhs rows",
                raw.target.lhs.len(),
                raw.target.rhs.len(),
            ));
        }
        let rows = raw.target.lhs.len();
        let lhs = to_matrix("target.lhs", &raw.target.lhs, rows, n + 1)?;
        let rhs = to_matrix("target.rhs", &raw.target.rhs, rows, n + 1)?;
        Ok(ProblemFile {
            model: SystemModel::new(a, b, c, control, disturbance)?,
            target: TargetSet::new(lhs, rhs)?,
        })
    }

    /// Canonical JSON text, stable across runs.
    pub fn to_json(&self) -> String {
        let model = &self.model;
        let raw = RawProblem {
            dims: RawDims {
                state: model.state_dim(),
                control: model.control().dim(),
                disturbance: model.disturbance().dim(),
            },
            a: grid_of_matrix(model.a()),
            b: grid_of_matrix(model.b()),
            c: grid_of_matrix(model.c()),
            control: raw_polyhedron(model.control()),
            disturbance: raw_polyhedron(model.disturbance()),
            target: RawTarget {
                lhs: grid_of_matrix(self.target.lhs()),
                rhs: grid_of_matrix(self.target.rhs()),
            },
        };
        let mut text = serde_json::to_string_pretty(&raw).expect("plain data serializes");
        text.push('\n');
        text
    }
}

pub fn parse_problem_str(text: &str) -> Result<ProblemFile> {
    ProblemFile::parse_str(text)
}

pub fn parse_problem(path: impl AsRef<Path>) -> Result<ProblemFile> {
    parse_problem_str(&read(path.as_ref())?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Nonempty,
    Empty,
}

/// Generator counts after one stage of a computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageRecord {
    pub stage: String,
    pub span: usize,
    pub conv: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl From<&StageSummary> for StageRecord {
    fn from(s: &StageSummary) -> Self {
        StageRecord {
            stage: s.stage.to_string(),
            span: s.span,
            conv: s.conv,
            detail: s.note.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResult {
    status: Status,
    dim: usize,
    span: Grid,
    conv: Grid,
    #[serde(default)]
    provenance: Vec<StageRecord>,
}

/// A computed polyhedron with the trace that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultFile {
    pub polyhedron: Polyhedron,
    pub provenance: Vec<StageRecord>,
}

impl ResultFile {
    pub fn new(polyhedron: Polyhedron, trace: &[StageSummary]) -> Self {
        ResultFile {
            polyhedron,
            provenance: trace.iter().map(StageRecord::from).collect(),
        }
    }

    pub fn status(&self) -> Status {
        if self.polyhedron.is_empty() {
            Status::Empty
        } else {
            Status::Nonempty
        }
    }

    pub fn to_json(&self) -> String {
        let raw = RawResult {
            status: self.status(),
            dim: self.polyhedron.dim(),
            span: grid_of_vectors(self.polyhedron.span_generators()),
            conv: grid_of_vectors(self.polyhedron.conv_generators()),
            provenance: self.provenance.clone(),
        };
        let mut text = serde_json::to_string_pretty(&raw).expect("plain data serializes");
        text.push('\n');
        text
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let raw: RawResult = from_json(text)?;
        let polyhedron = Polyhedron::new(
            raw.dim,
            to_vectors("span", &raw.span, raw.dim)?,
            to_vectors("conv", &raw.conv, raw.dim)?,
        )?;
        let result = ResultFile {
            polyhedron,
            provenance: raw.provenance,
        };
        if result.status() != raw.status {
            return Err(Error::parse(
                "status",
                format!(
                    "declared {:?} but generators say {:?}",
                    raw.status,
                    result.status()
                ),
            ));
        }
        Ok(result)
    }
}

pub fn parse_result_str(text: &str) -> Result<ResultFile> {
    ResultFile::parse_str(text)
}

/// The operator a command runs on a problem file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// `A⁻¹(target)`.
    AInv,
    /// `γ_𝒰(target)`.
    Gamma,
    /// `φ_{C⊗𝒲}(target)`.
    Phi,
    /// `Υ(target)`.
    Upsilon,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::AInv => "ainv",
            Command::Gamma => "gamma",
            Command::Phi => "phi",
            Command::Upsilon => "upsilon",
        }
    }
}

fn target_stage(target: &TargetSet) -> (crate::sets::ConeV, StageSummary) {
    let cone = target.lifted_cone().remove_redundant();
    let p = target.to_polyhedron();
    let summary = StageSummary {
        stage: "target",
        span: p.span_generators().len(),
        conv: p.conv_generators().len(),
        note: Some(format!("{} constraint rows", target.nrows())),
    };
    (cone, summary)
}

fn single_stage(stage: &'static str, p: &Polyhedron) -> StageSummary {
    StageSummary {
        stage,
        span: p.span_generators().len(),
        conv: p.conv_generators().len(),
        note: None,
    }
}

pub fn run_command(cmd: Command, problem: &ProblemFile) -> Result<ResultFile> {
    let model = &problem.model;
    let target = &problem.target;
    if target.dim() != model.state_dim() {
        return Err(Error::dims("target", model.state_dim(), target.dim()));
    }
    let (polyhedron, trace) = match cmd {
        Command::Upsilon => reach::upsilon_traced(model, target)?,
        Command::Phi => reach::phi_traced(model, target)?,
        Command::AInv => {
            let (cone, first) = target_stage(target);
            let p = reach::a_inverse(model.a(), &cone).map_err(|e| e.in_stage("ainv"))?;
            let last = single_stage("ainv", &p);
            (p, vec![first, last])
        }
        Command::Gamma => {
            let (cone, first) = target_stage(target);
            let p =
                reach::gamma(model.b(), model.control(), &cone).map_err(|e| e.in_stage("gamma"))?;
            let last = single_stage("gamma", &p);
            (p, vec![first, last])
        }
    };
    Ok(ResultFile::new(polyhedron, &trace))
}

/// A rectangular grid `[x1min, x1max] × [x2min, x2max]` with `res` points per
/// axis, endpoints included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleGrid {
    bounds: [MaxPlus; 4],
    res: usize,
}

impl SampleGrid {
    pub fn new(bounds: [MaxPlus; 4], res: usize) -> Result<Self> {
        if let Some(b) = bounds.iter().find(|b| b.is_bottom()) {
            return Err(Error::parse(
                "box",
                format!("bounds must be finite, found {b}"),
            ));
        }
        if bounds[0] > bounds[1] || bounds[2] > bounds[3] {
            return Err(Error::parse("box", "each axis needs min <= max"));
        }
        if res == 0 {
            return Err(Error::parse("res", "resolution must be at least 1"));
        }
        Ok(SampleGrid { bounds, res })
    }

    fn axis(&self, lo: &MaxPlus, hi: &MaxPlus) -> Vec<MaxPlus> {
        let (Some(lo), Some(hi)) = (lo.as_rational(), hi.as_rational()) else {
            unreachable!("bounds checked finite")
        };
        if self.res == 1 {
            return vec![MaxPlus::Finite(lo.clone())];
        }
        let step = (hi - lo) / num_rational::BigRational::from_integer((self.res - 1).into());
        (0..self.res)
            .map(|i| {
                MaxPlus::Finite(lo + &step * num_rational::BigRational::from_integer(i.into()))
            })
            .collect()
    }
}

/// CSV rows `x1,x2,member` for every grid point, `x1` varying slowest.
pub fn sample(p: &Polyhedron, grid: &SampleGrid) -> Result<String> {
    if p.dim() != 2 {
        return Err(Error::dims("sampled polyhedron", 2, p.dim()));
    }
    let xs = grid.axis(&grid.bounds[0], &grid.bounds[1]);
    let ys = grid.axis(&grid.bounds[2], &grid.bounds[3]);
    let lifted = p.lift();
    let mut out = String::from("x1,x2,member\n");
    for x in &xs {
        for y in &ys {
            let point = MaxPlusVector::new(vec![MaxPlus::unit(), x.clone(), y.clone()]);
            let member = lifted.contains(&point)?;
            writeln!(out, "{},{},{}", x.to_f64(), y.to_f64(), u8::from(member))
                .expect("string write");
        }
    }
    Ok(out)
}

/// The polyhedron to sample from a file: a result file is read as is, a
/// problem file is first pushed through `Υ`.
pub fn sample_source(text: &str) -> Result<Polyhedron> {
    let is_result = serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.as_object().map(|o| o.contains_key("status")))
        .unwrap_or(false);
    if is_result {
        Ok(parse_result_str(text)?.polyhedron)
    } else {
        let problem = parse_problem_str(text)?;
        Ok(run_command(Command::Upsilon, &problem)?.polyhedron)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE_STUDY: &str = r#"{
        "dims": {"state": 2, "control": 1, "disturbance": 2},
        "A": [["2", "3"], ["5", "1"]],
        "B": [["-inf"], ["0"]],
        "C": [["0", "-inf"], ["-inf", "0"]],
        "control": {"span": [["0"]], "conv": [["-inf"]]},
        "disturbance": {"span": [], "conv": [["1", "1"], ["3", "1"], ["1", "3"]]},
        "target": {
            "lhs": [["-inf", "-inf", "0"], ["-inf", "-1", "-inf"]],
            "rhs": [["-inf", "1", "-inf"], ["-inf", "-inf", "0"]]
        }
    }"#;

    fn v(text: &str) -> MaxPlusVector {
        text.parse().unwrap()
    }

    #[test]
    fn parses_case_study() {
        let p = parse_problem_str(CASE_STUDY).unwrap();
        assert_eq!(
            p.model.a(),
            &MaxPlusMatrix::from_ints(&[&[2, 3], &[5, 1]]).unwrap()
        );
        assert_eq!(p.model.c(), &MaxPlusMatrix::identity(2));
        assert_eq!(p.model.b().get(0, 0), &MaxPlus::Bottom);
        assert_eq!(
            p.model.disturbance().conv_generators(),
            &[v("[1,1]"), v("[1,3]"), v("[3,1]")]
        );
        assert!(p.model.disturbance().span_generators().is_empty());
        assert!(p.model.control().same_set(&Polyhedron::whole(1)).unwrap());
    }

    #[test]
    fn bad_entry_is_parse_error_with_path() {
        let text = CASE_STUDY.replacen("\"5\"", "\"foo\"", 1);
        match parse_problem_str(&text) {
            Err(Error::Parse { location, message }) => {
                assert!(location.starts_with("A[1][0]"), "{location}");
                assert!(message.contains("foo"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_shape_is_dimension_mismatch() {
        let text = CASE_STUDY.replace(r#"[["-inf"], ["0"]]"#, r#"[["-inf", "0"], ["0", "0"]]"#);
        match parse_problem_str(&text) {
            Err(Error::DimensionMismatch { what, .. }) => assert_eq!(what, "B[0] columns"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn numbers_and_fractions_accepted() {
        let text = CASE_STUDY
            .replace(r#"["2", "3"]"#, r#"[2, 3.5]"#)
            .replace(r#"["5", "1"]"#, r#"["10/2", 1]"#);
        let p = parse_problem_str(&text).unwrap();
        assert_eq!(p.model.a().get(0, 1), &MaxPlus::ratio(7, 2));
        assert_eq!(p.model.a().get(1, 0), &MaxPlus::int(5));
    }

    #[test]
    fn rejects_other_infinity_spellings() {
        for bad in [
            "\"-Infinity\"",
            "\"inf\"",
            "\"-INF\"",
            "null",
            "1e3",
            "\" -inf\"",
        ] {
            let text = CASE_STUDY.replacen("\"-inf\"", bad, 1);
            assert!(
                matches!(parse_problem_str(&text), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn canonical_round_trip() {
        let p = parse_problem_str(CASE_STUDY).unwrap();
        let text = p.to_json();
        let again = parse_problem_str(&text).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.to_json(), text);
    }

    #[test]
    fn result_round_trip() {
        let problem = parse_problem_str(CASE_STUDY).unwrap();
        let result = run_command(Command::Phi, &problem).unwrap();
        let text = result.to_json();
        let back = parse_result_str(&text).unwrap();
        assert_eq!(back, result);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("recession check passed"));
    }

    #[test]
    fn result_status_must_agree() {
        let text = r#"{"status": "nonempty", "dim": 1, "span": [], "conv": []}"#;
        assert!(matches!(parse_result_str(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn sample_whole_space() {
        let grid = SampleGrid::new(
            [
                MaxPlus::int(-1),
                MaxPlus::int(1),
                MaxPlus::int(-1),
                MaxPlus::int(1),
            ],
            3,
        )
        .unwrap();
        let csv = sample(&Polyhedron::whole(2), &grid).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x1,x2,member");
        assert_eq!(lines.len(), 10);
        assert!(lines[1..].iter().all(|l| l.ends_with(",1")));
        assert_eq!(lines[1], "-1,-1,1");
        assert_eq!(lines[9], "1,1,1");
    }

    #[test]
    fn sample_grid_validation() {
        let b = |x: i64| MaxPlus::int(x);
        assert!(SampleGrid::new([b(1), b(0), b(0), b(1)], 2).is_err());
        assert!(SampleGrid::new([b(0), b(1), b(0), b(1)], 0).is_err());
        assert!(SampleGrid::new([MaxPlus::Bottom, b(1), b(0), b(1)], 2).is_err());
        let empty = sample(
            &Polyhedron::empty(2),
            &SampleGrid::new([b(0), b(0), b(0), b(0)], 1).unwrap(),
        );
        assert_eq!(empty.unwrap(), "x1,x2,member\n0,0,0\n");
    }

    proptest::proptest! {
        #[test]
        fn arbitrary_text_never_panics(text in "\\PC{0,200}") {
            let _ = parse_problem_str(&text);
            let _ = parse_result_str(&text);
        }

        #[test]
        fn mutated_problems_round_trip(pos in 0usize..600, len in 0usize..4, ins in "[-0-9/.\\[\\],\"inf ]{0,4}") {
            let mut text = CASE_STUDY.to_string();
            let start = pos.min(text.len());
            let end = (start + len).min(text.len());
            text.replace_range(start..end, &ins);
            if let Ok(p) = parse_problem_str(&text) {
                let canonical = p.to_json();
                proptest::prop_assert_eq!(parse_problem_str(&canonical).unwrap(), p);
            }
        }
    }
}
