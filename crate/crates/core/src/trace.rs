//! Pivot/delete traces: the certificate every extraction emits.
//!
//! JSON form is a plain list, `[{"pivot":[u,v]}, {"delete":v}, ...]`.

use serde::{Deserialize, Serialize};

use crate::graph::VertexId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Pivot(VertexId, VertexId),
    Delete(VertexId),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PivotTrace {
    pub steps: Vec<Step>,
}

impl PivotTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: PivotTrace) {
        self.steps.extend(other.steps);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn pivot_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Pivot(..)))
            .count()
    }

    pub fn is_deletion_only(&self) -> bool {
        self.pivot_count() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serialises")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl FromIterator<Step> for PivotTrace {
    fn from_iter<I: IntoIterator<Item = Step>>(iter: I) -> Self {
        PivotTrace {
            steps: iter.into_iter().collect(),
        }
    }
}
