//! JSON file formats for configurations, fibration profiles and declared models.
//!
//! Canonical field order is the declaration order of the structs below; `degree` is
//! always written, `delta` only when nonzero.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::fibration::{DeclaredCurve, DeclaredModel, FiberInstance, FibrationProfile};
use crate::graph::{CurveConfig, CurveVertex};
use crate::kodaira::FiberType;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid file: {0}")]
    Validation(String),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn one() -> u64 {
    1
}

fn is_zero(x: &u32) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    pub square: i64,
    #[serde(default = "one")]
    pub degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub a: String,
    pub b: String,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub name: String,
    pub vertices: Vec<VertexEntry>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl ConfigFile {
    pub fn to_config(&self) -> Result<CurveConfig, FormatError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| CurveVertex::new(v.id.clone(), v.square, v.degree))
            .collect();
        CurveConfig::new(vertices, self.edges.iter().map(|e| (e.a.as_str(), e.b.as_str(), e.mult)))
            .map_err(|e| FormatError::Validation(e.to_string()))
    }

    pub fn from_config(name: impl Into<String>, cfg: &CurveConfig) -> Self {
        ConfigFile {
            name: name.into(),
            vertices: cfg
                .vertices()
                .iter()
                .map(|v| VertexEntry { id: v.id.clone(), square: v.square, degree: v.degree })
                .collect(),
            edges: cfg
                .edges()
                .map(|((a, b), mult)| EdgeEntry { a: cfg.vertex(a).id.clone(), b: cfg.vertex(b).id.clone(), mult })
                .collect(),
            metadata: Map::new(),
        }
    }

    /// Characteristic recorded in the metadata, if any.
    pub fn characteristic(&self) -> Option<u64> {
        self.metadata.get("characteristic").and_then(Value::as_u64)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

pub fn parse_config(text: &str) -> Result<ConfigFile, FormatError> {
    let file: ConfigFile = serde_json::from_str(text)?;
    if let Some(e) = file.edges.iter().find(|e| e.mult == 0) {
        return Err(FormatError::Validation(format!("edge {}-{} has multiplicity 0", e.a, e.b)));
    }
    file.to_config()?;
    Ok(file)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberEntry {
    #[serde(rename = "type")]
    pub fiber: String,
    pub count: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub delta: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub quasi_elliptic: bool,
    pub characteristic: u64,
    pub fibers: Vec<FiberEntry>,
}

impl ProfileFile {
    pub fn to_profile(&self) -> Result<FibrationProfile, FormatError> {
        let mut fibers = Vec::new();
        for f in &self.fibers {
            let fiber: FiberType = f.fiber.parse().map_err(FormatError::Validation)?;
            fibers.extend(std::iter::repeat(FiberInstance { fiber, delta: f.delta }).take(f.count));
        }
        Ok(FibrationProfile { fibers, quasi_elliptic: self.quasi_elliptic, characteristic: self.characteristic })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }
}

pub fn parse_profile(text: &str) -> Result<ProfileFile, FormatError> {
    let file: ProfileFile = serde_json::from_str(text)?;
    file.to_profile()?;
    Ok(file)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub label: String,
    pub pa: u32,
    #[serde(rename = "H_dot")]
    pub h_dot: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(rename = "H_square")]
    pub h_square: i64,
    #[serde(rename = "H_two_divisible")]
    pub h_two_divisible: bool,
    pub curves: Vec<CurveEntry>,
}

impl ModelFile {
    pub fn to_model(&self) -> DeclaredModel {
        DeclaredModel {
            h_square: self.h_square,
            h_two_divisible: self.h_two_divisible,
            curves: self
                .curves
                .iter()
                .map(|c| DeclaredCurve { label: c.label.clone(), pa: c.pa, h_dot: c.h_dot })
                .collect(),
        }
    }
}

pub fn parse_model(text: &str) -> Result<ModelFile, FormatError> {
    let file: ModelFile = serde_json::from_str(text)?;
    if file.h_square <= 0 || file.h_square % 2 != 0 {
        return Err(FormatError::Validation(format!("H_square = {} must be even and positive", file.h_square)));
    }
    Ok(file)
}
