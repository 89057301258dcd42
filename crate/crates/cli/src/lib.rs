//! Report data model shared between the binary and its tests.

use serde::{Deserialize, Serialize};

use plumbing_census::{Counts, Embeddability, PlumbingSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub spec: PlumbingSpec,
    pub counts: Counts,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub embeddable: Option<Embeddability>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub rows: usize,
    pub stein: u64,
    pub weak: u64,
    pub stein_if_embeddable: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
    pub summary: GridSummary,
}
