//! JSON input documents.

use std::path::Path;

use clonecheck_core::linalg::ComplexMatrix;
use clonecheck_core::states::{DensityOperator, NamedQubit};
use clonecheck_core::ChannelDocument;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Matrix,
    Named,
}

/// A qubit state, either by name or as an explicit density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub dim: usize,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

pub const STATE_NAMES: [&str; 7] = ["zero", "one", "plus", "minus", "plus_i", "minus_i", "mixed"];

pub fn named_state(name: &str) -> Result<DensityOperator, String> {
    if name == "mixed" {
        return Ok(DensityOperator::maximally_mixed(2));
    }
    NamedQubit::ALL
        .iter()
        .find(|q| q.name() == name)
        .map(|q| q.density())
        .ok_or_else(|| {
            format!(
                "unknown state name {name:?}; expected one of {}",
                STATE_NAMES.join(", ")
            )
        })
}

impl StateDocument {
    pub fn to_state(&self) -> Result<DensityOperator, String> {
        let state = match (self.kind, &self.matrix, &self.name) {
            (StateKind::Named, None, Some(name)) => named_state(name)?,
            (StateKind::Matrix, Some(m), None) => DensityOperator::new(m.clone())
                .map_err(|e| format!("state matrix rejected: {e}"))?,
            (StateKind::Named, _, _) => {
                return Err("a named state document needs \"name\" and no \"matrix\"".into())
            }
            (StateKind::Matrix, _, _) => {
                return Err("a matrix state document needs \"matrix\" and no \"name\"".into())
            }
        };
        if state.dim() != self.dim {
            return Err(format!(
                "declared dim {} but the state has dim {}",
                self.dim,
                state.dim()
            ));
        }
        Ok(state)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed JSON in {}: {e}", path.display()))
}

pub fn read_state(path: &Path) -> Result<DensityOperator, String> {
    read_json::<StateDocument>(path)?.to_state()
}

pub fn read_channel(path: &Path) -> Result<ChannelDocument, String> {
    read_json(path)
}
