//! JSON point-set documents.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "points": [["0", "0"], ["1/2", "3"]],
//!   "labels": [1, 0],
//!   "metadata": {"source": "hand"}
//! }
//! ```
//!
//! Coordinates are strings (`"p/q"` or integers); floats are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{PointSet, RationalPoint};
use crate::rational;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetDocument {
    pub dimension: usize,
    pub points: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl PointSetDocument {
    pub fn from_point_set(points: &PointSet) -> Self {
        PointSetDocument {
            dimension: points.dimension(),
            points: points
                .iter()
                .map(|p| rational::format_vec(p.coords()))
                .collect(),
            labels: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_labels(mut self, labels: &[bool]) -> Self {
        self.labels = Some(labels.iter().map(|&b| b as u8).collect());
        self
    }

    pub fn point_set(&self) -> Result<PointSet> {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.dimension {
                    return Err(Error::InvalidInput(format!(
                        "point {i} has {} coordinates, expected {}",
                        row.len(),
                        self.dimension
                    )));
                }
                RationalPoint::parse(row)
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(self.dimension, points)
    }

    pub fn labels(&self) -> Result<Option<Vec<bool>>> {
        let Some(raw) = &self.labels else {
            return Ok(None);
        };
        if raw.len() != self.points.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} points",
                raw.len(),
                self.points.len()
            )));
        }
        raw.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidInput(format!("label {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PointSetDocument =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        doc.point_set()?;
        doc.labels()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}
