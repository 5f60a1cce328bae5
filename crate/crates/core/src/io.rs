//! File formats: graph JSON, mesh edge lists, certificates, piecewise-linear and profile CSVs.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};
use crate::oned::PiecewiseLinearFn;
use crate::spectral::EigenCertificate;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub boundary: Vec<usize>,
}

impl GraphFile {
    pub fn from_graph(graph: &WeightedGraph) -> Self {
        Self {
            vertices: graph.vertex_count(),
            edges: graph.edges().iter().map(|e| (e.a, e.b, e.weight)).collect(),
            boundary: graph.boundary().to_vec(),
        }
    }

    pub fn build(&self) -> Result<WeightedGraph> {
        WeightedGraph::new(self.vertices, &self.edges, &self.boundary)
    }
}

pub fn parse_graph_json(text: &str) -> Result<WeightedGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(parse_err)?;
    file.build()
}

pub fn graph_to_json(graph: &WeightedGraph) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(graph)).expect("graph serializes")
}

/// Graph ingested from an edge list with external string ids.
#[derive(Debug, Clone)]
pub struct MeshGraph {
    pub graph: WeightedGraph,
    /// External id of each internal vertex.
    pub ids: Vec<String>,
}

/// Reads `source,target[,weight]` rows (header required, weight defaults to 1).
/// Vertices are numbered in order of first appearance.
pub fn parse_mesh_edges(text: &str, boundary_ids: &[String]) -> Result<MeshGraph> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut ids = Vec::new();
    let mut intern = |id: &str| {
        *index.entry(id.to_string()).or_insert_with(|| {
            ids.push(id.to_string());
            ids.len() - 1
        })
    };
    let mut edges = Vec::new();
    for record in reader.records() {
        let record = record.map_err(parse_err)?;
        if record.len() < 2 {
            return Err(Error::Parse(format!("edge row needs two ids: {record:?}")));
        }
        let a = intern(&record[0]);
        let b = intern(&record[1]);
        let w = match record.get(2) {
            Some(s) if !s.is_empty() => s.parse::<f64>().map_err(parse_err)?,
            _ => 1.0,
        };
        edges.push((a, b, w));
    }
    let mut boundary = Vec::with_capacity(boundary_ids.len());
    for id in boundary_ids {
        match index.get(id) {
            Some(&x) => boundary.push(x),
            None => {
                return Err(Error::Parse(format!(
                    "boundary id {id:?} does not occur in the edge list"
                )))
            }
        }
    }
    let graph = WeightedGraph::new(ids.len().max(1), &edges, &boundary)?;
    Ok(MeshGraph { graph, ids })
}

/// Reads vertex values from `vertex,value` rows or a single `value` column,
/// with an optional header row.
pub fn parse_vertex_values(text: &str, n: usize) -> Result<VertexFunction> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut records = reader.records().peekable();
    if let Some(Ok(first)) = records.peek() {
        if first.get(0).is_some_and(|h| h.parse::<f64>().is_err()) {
            records.next();
        }
    }
    for (row, record) in records.enumerate() {
        let record = record.map_err(parse_err)?;
        let (x, v) = match record.len() {
            1 => (row, &record[0]),
            _ => (record[0].parse::<usize>().map_err(parse_err)?, &record[1]),
        };
        if x >= n {
            return Err(Error::VertexOutOfRange { index: x, len: n });
        }
        values[x] = v.parse::<f64>().map_err(parse_err)?;
        seen[x] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Parse(format!("no value given for vertex {missing}")));
    }
    Ok(VertexFunction::new(values))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateResiduals {
    pub residual_inf: f64,
    pub support_violation: f64,
    pub parallel_violation: f64,
    pub norm_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub lambda: f64,
    /// `(i, j, q(i, j))` for every ordered pair.
    pub q: Vec<(usize, usize, f64)>,
    pub residuals: CertificateResiduals,
}

impl CertificateFile {
    pub fn new(graph: &WeightedGraph, cert: &EigenCertificate) -> Self {
        Self {
            lambda: cert.lambda,
            q: cert.q.ordered_triples(graph).collect(),
            residuals: CertificateResiduals {
                residual_inf: cert.residual_inf,
                support_violation: cert.support_violation,
                parallel_violation: cert.parallel_violation,
                norm_gap: cert.norm_gap,
            },
        }
    }
}

pub fn certificate_to_json(graph: &WeightedGraph, cert: &EigenCertificate) -> String {
    serde_json::to_string_pretty(&CertificateFile::new(graph, cert))
        .expect("certificate serializes")
}

/// Parses `p/q`, an integer, or a decimal with optional exponent into an exact rational.
pub fn parse_exact(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.trim_start_matches(['+', '-']).is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches(['+', '-']), frac_part);
    let numer =
        BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let numer = if negative { -numer } else { numer };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut value = BigRational::from_integer(numer);
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(value)
}

/// Reads `breakpoint,value` rows. When `breakpoint_exact` and `value_exact`
/// columns are present they take precedence.
pub fn parse_pl_csv(text: &str) -> Result<PiecewiseLinearFn<BigRational>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(parse_err)?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let (cx, cy) = match (column("breakpoint_exact"), column("value_exact")) {
        (Some(cx), Some(cy)) => (cx, cy),
        _ => (0, 1),
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for record in reader.records() {
        let record = record.map_err(parse_err)?;
        match (record.get(cx), record.get(cy)) {
            (Some(x), Some(y)) => {
                xs.push(parse_exact(x)?);
                ys.push(parse_exact(y)?);
            }
            _ => {
                return Err(Error::Parse(format!(
                    "row needs breakpoint and value: {record:?}"
                )))
            }
        }
    }
    PiecewiseLinearFn::new(xs, ys)
}

fn fraction(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `breakpoint,value,breakpoint_exact,value_exact` rows.
pub fn pl_to_csv(f: &PiecewiseLinearFn<BigRational>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["breakpoint", "value", "breakpoint_exact", "value_exact"])
        .expect("in-memory write");
    let approx = f.to_f64();
    for i in 0..f.breakpoints().len() {
        writer
            .write_record([
                fmt_f64(approx.breakpoints()[i]),
                fmt_f64(approx.values()[i]),
                fraction(&f.breakpoints()[i]),
                fraction(&f.values()[i]),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
}

/// Reads a `tau,perimeter` table.
pub fn parse_profile_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut tau = Vec::new();
    let mut perimeter = Vec::new();
    for record in reader.records() {
        let record = record.map_err(parse_err)?;
        if record.len() < 2 {
            return Err(Error::Parse(format!(
                "row needs tau and perimeter: {record:?}"
            )));
        }
        tau.push(record[0].parse::<f64>().map_err(parse_err)?);
        perimeter.push(record[1].parse::<f64>().map_err(parse_err)?);
    }
    Ok((tau, perimeter))
}
