//! Hardware topology families and the experiment configuration grids.

pub mod havel_hakimi;
pub mod zephyr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};

pub use havel_hakimi::{havel_hakimi_edge_count, havel_hakimi_graph, HavelHakimiParams};
pub use zephyr::{
    zephyr_coord, zephyr_edge_count, zephyr_edge_family_counts, zephyr_graph,
    zephyr_linear_index, zephyr_node_count, ZephyrCoord, ZephyrParams,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("invalid Zephyr parameters m={m}, t={t}: both must be at least 1")]
    InvalidZephyrParams { m: u32, t: u32 },
    #[error("Zephyr coordinate {coord:?} out of bounds for m={m}, t={t}")]
    ZephyrCoordOutOfBounds { coord: ZephyrCoord, m: u32, t: u32 },
    #[error("Zephyr node index {index} out of bounds for m={m}, t={t}")]
    ZephyrIndexOutOfBounds { index: NodeId, m: u32, t: u32 },
    #[error("invalid Havel-Hakimi parameters deg={deg}, num_qubits={num_qubits}: both must be at least 1")]
    InvalidHavelHakimiParams { deg: u32, num_qubits: u32 },
    #[error("degree {deg} exceeds the physical-plausibility cap of {cap}")]
    DegreeAbovePlausibilityCap { deg: u32, cap: u32 },
    #[error("constant degree sequence deg={deg}, num_qubits={num_qubits} is not graphical: {condition}")]
    NotGraphical {
        deg: u32,
        num_qubits: u32,
        condition: String,
    },
}

/// Topology family of a hardware graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Zephyr,
    HavelHakimi,
    /// Host graphs supplied as files rather than generated.
    Custom,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Zephyr => "zephyr",
            Family::HavelHakimi => "havel_hakimi",
            Family::Custom => "custom",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A generatable hardware-graph configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum QpuConfig {
    Zephyr(ZephyrParams),
    HavelHakimi(HavelHakimiParams),
}

impl QpuConfig {
    pub fn family(&self) -> Family {
        match self {
            QpuConfig::Zephyr(_) => Family::Zephyr,
            QpuConfig::HavelHakimi(_) => Family::HavelHakimi,
        }
    }

    /// Unique label derived from family and parameters.
    pub fn label(&self) -> String {
        match self {
            QpuConfig::Zephyr(p) => format!("zephyr_m{}_t{}", p.m, p.t),
            QpuConfig::HavelHakimi(p) => format!("hh_deg{}_n{}", p.deg, p.num_qubits),
        }
    }

    pub fn build(&self) -> Result<Graph, TopologyError> {
        match self {
            QpuConfig::Zephyr(p) => Ok(zephyr_graph(*p)),
            QpuConfig::HavelHakimi(p) => havel_hakimi_graph(*p),
        }
    }
}

/// The full experiment grid: 150 Zephyr configurations with
/// `(m, t) in [2,7] x [1,25]` followed by 150 Havel-Hakimi configurations
/// with `deg in {5+25k}` and `num_qubits in {50+350j}`, each family in
/// ascending parameter order.
pub fn sweep_configs() -> Vec<QpuConfig> {
    let mut configs = Vec::with_capacity(300);
    for m in 2..=7 {
        for t in 1..=25 {
            configs.push(QpuConfig::Zephyr(ZephyrParams::new(m, t).unwrap()));
        }
    }
    for k in 0..5 {
        for j in 0..30 {
            let deg = 5 + 25 * k;
            let num_qubits = 50 + 350 * j;
            configs.push(QpuConfig::HavelHakimi(
                HavelHakimiParams::new(deg, num_qubits).unwrap(),
            ));
        }
    }
    configs
}

/// Small subset of the grid that runs the whole pipeline in minutes:
/// Zephyr `m in [2,3] x t in {1,2,4}` and Havel-Hakimi
/// `deg in {5,30} x num_qubits in {50,400}`.
pub fn desk_configs() -> Vec<QpuConfig> {
    let mut configs = Vec::new();
    for m in 2..=3 {
        for t in [1, 2, 4] {
            configs.push(QpuConfig::Zephyr(ZephyrParams::new(m, t).unwrap()));
        }
    }
    for deg in [5, 30] {
        for num_qubits in [50, 400] {
            configs.push(QpuConfig::HavelHakimi(
                HavelHakimiParams::new(deg, num_qubits).unwrap(),
            ));
        }
    }
    configs
}
