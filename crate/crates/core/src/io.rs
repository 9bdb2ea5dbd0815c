//! JSON formats for spaces, measures, fields, isometries and chains.
//!
//! A space is `{points, dist | edges, weight, boundary}`. Point ids may be
//! strings or numbers; numbers are read by their decimal text. Measures and
//! fields are objects keyed by point id, isometries are lists of id pairs,
//! chains are lists of ids.

use crate::error::{Error, Result};
use crate::gluing::{BoundaryIsometry, GluedSpace, ProvenanceEntry};
use crate::space::{metric_from_graph, MetricMeasureSpace};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointId {
    Text(String),
    Number(serde_json::Number),
}

impl PointId {
    pub fn into_string(self) -> String {
        match self {
            PointId::Text(s) => s,
            PointId::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<PointId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(PointId, PointId, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<PointId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<ProvenanceEntry>>,
}

impl SpaceFile {
    pub fn into_space(self) -> Result<MetricMeasureSpace> {
        let ids: Vec<String> = self.points.into_iter().map(PointId::into_string).collect();
        let n = ids.len();
        let weight = self.weight.unwrap_or_else(|| vec![1.0; n]);
        if weight.len() != n {
            return Err(Error::InvalidInput(format!("{} weights for {n} points", weight.len())));
        }
        let space = match (self.dist, self.edges) {
            (Some(dist), None) => MetricMeasureSpace::new(ids, dist, weight)?,
            (None, Some(edges)) => {
                let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
                let lookup = |p: PointId| -> Result<usize> {
                    let id = p.into_string();
                    index.get(id.as_str()).copied().ok_or(Error::UnknownPoint(id))
                };
                let mut e = Vec::with_capacity(edges.len());
                for (a, b, w) in edges {
                    e.push((lookup(a)?, lookup(b)?, w));
                }
                metric_from_graph(ids.clone(), &e, Some(weight))?
            }
            _ => return Err(Error::InvalidInput("a space needs exactly one of `dist` or `edges`".into())),
        };
        let boundary: Vec<String> = self.boundary.into_iter().map(PointId::into_string).collect();
        space.with_boundary(&boundary)
    }

    pub fn from_space(s: &MetricMeasureSpace) -> Self {
        SpaceFile {
            points: s.ids().iter().cloned().map(PointId::Text).collect(),
            dist: Some(s.dist_rows()),
            edges: None,
            weight: Some(s.weights().to_vec()),
            boundary: s.boundary().iter().map(|&i| PointId::Text(s.id(i).to_string())).collect(),
            provenance: None,
        }
    }

    pub fn from_glued(g: &GluedSpace) -> Self {
        let mut f = SpaceFile::from_space(g.space());
        f.provenance = Some(g.provenance());
        f
    }
}

pub fn parse_space(text: &str) -> Result<MetricMeasureSpace> {
    serde_json::from_str::<SpaceFile>(text)?.into_space()
}

pub fn read_space(path: &Path) -> Result<MetricMeasureSpace> {
    parse_space(&fs::read_to_string(path)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn id_map(text: &str) -> Result<BTreeMap<String, f64>> {
    let raw: BTreeMap<String, f64> = serde_json::from_str(text)?;
    Ok(raw)
}

/// Values keyed by id; ids absent from the file get `missing`, or an error if
/// `missing` is `None`.
pub fn parse_point_values(text: &str, s: &MetricMeasureSpace, missing: Option<f64>) -> Result<Vec<f64>> {
    let map = id_map(text)?;
    let mut out = vec![f64::NAN; s.len()];
    for (id, v) in map {
        out[s.index_of(&id)?] = v;
    }
    for (i, v) in out.iter_mut().enumerate() {
        if v.is_nan() {
            *v = missing.ok_or_else(|| Error::InvalidInput(format!("no value for point `{}`", s.id(i))))?;
        }
    }
    Ok(out)
}

/// A measure: absent points carry no mass.
pub fn read_measure(path: &Path, s: &MetricMeasureSpace) -> Result<Vec<f64>> {
    parse_point_values(&fs::read_to_string(path)?, s, Some(0.0))
}

/// A field: every point needs a value.
pub fn read_field(path: &Path, s: &MetricMeasureSpace) -> Result<Vec<f64>> {
    parse_point_values(&fs::read_to_string(path)?, s, None)
}

/// One field or a list of fields.
pub fn read_fields(path: &Path, s: &MetricMeasureSpace) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    match value {
        serde_json::Value::Array(items) => items.iter().map(|v| parse_point_values(&v.to_string(), s, None)).collect(),
        other => Ok(vec![parse_point_values(&other.to_string(), s, None)?]),
    }
}

pub fn parse_isometry(text: &str) -> Result<BoundaryIsometry> {
    let pairs: Vec<(PointId, PointId)> = serde_json::from_str(text)?;
    Ok(BoundaryIsometry::new(pairs.into_iter().map(|(a, b)| (a.into_string(), b.into_string())).collect()))
}

pub fn read_isometry(path: &Path) -> Result<BoundaryIsometry> {
    parse_isometry(&fs::read_to_string(path)?)
}

/// Lists of ids resolved to point indices.
pub fn parse_chains(text: &str, s: &MetricMeasureSpace) -> Result<Vec<Vec<usize>>> {
    let chains: Vec<Vec<PointId>> = serde_json::from_str(text)?;
    chains
        .into_iter()
        .map(|c| c.into_iter().map(|p| s.index_of(&p.into_string())).collect())
        .collect()
}

pub fn read_chains(path: &Path, s: &MetricMeasureSpace) -> Result<Vec<Vec<usize>>> {
    parse_chains(&fs::read_to_string(path)?, s)
}
