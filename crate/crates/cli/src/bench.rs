//! Benchmark harness: runs a suite over (size, seed) pairs and emits CSV.
//!
//! Schema: `suite,d,n,seed,separator_size,width_k,wall_ms,result` — one row
//! per run. All columns except `wall_ms` are deterministic for a fixed
//! seed.

use crate::gen::{gen_random_instance, InstanceKind};
use anyhow::Result;
use fatgraph_core::cutuncut::{solve_cutuncut, CutUncutInstance};
use fatgraph_core::error::Error as CoreError;
use fatgraph_core::geometry::{
    kappa_partition_for_objects, separator_size_within_bound, steiner_cap_hint,
};
use fatgraph_core::graph::Graph;
use fatgraph_core::modulator::decomposition_from_geometry;
use fatgraph_core::subcoloring::solve_subcoloring;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Separator,
    Subcoloring,
    CutUncut,
}

impl Suite {
    fn name(&self) -> &'static str {
        match self {
            Suite::Separator => "separator",
            Suite::Subcoloring => "subcoloring",
            Suite::CutUncut => "cutuncut",
        }
    }
}

pub const CSV_HEADER: &str = "suite,d,n,seed,separator_size,width_k,wall_ms,result";

pub fn run_bench(suite: Suite, dim: usize, sizes: &[usize], seeds: &[u64]) -> Result<String> {
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for &n in sizes {
        for &seed in seeds {
            let set = gen_random_instance(InstanceKind::UnitBalls, dim, n, 4.0, seed);
            let start = Instant::now();
            let (sep_size, width, result) = match suite {
                Suite::Separator => {
                    let decomp = decomposition_from_geometry(&set).map_err(anyhow::Error::new)?;
                    let ok = separator_size_within_bound(
                        decomp.modulator.len() as u64,
                        n as u64,
                        dim as u32,
                    );
                    (decomp.modulator.len(), decomp.k, if ok { "ok" } else { "violated" }.to_string())
                }
                Suite::Subcoloring => {
                    let decomp = decomposition_from_geometry(&set).map_err(anyhow::Error::new)?;
                    let result = match solve_subcoloring(&decomp) {
                        Ok(Some(_)) => "yes".to_string(),
                        Ok(None) => "no".to_string(),
                        Err(CoreError::CapExceeded { .. }) => "cap-exceeded".to_string(),
                        Err(e) => return Err(anyhow::Error::new(e)),
                    };
                    (decomp.modulator.len(), decomp.k, result)
                }
                Suite::CutUncut => {
                    let decomp = decomposition_from_geometry(&set).map_err(anyhow::Error::new)?;
                    let inst = terminal_instance(decomp.graph.clone())?;
                    // Geometric inputs get the Steiner cap of the
                    // kappa-partition bound.
                    let partition = kappa_partition_for_objects(&set, &decomp.graph);
                    let cap = decomp
                        .components
                        .iter()
                        .map(|c| steiner_cap_hint(&partition, c))
                        .max();
                    let result = match solve_cutuncut(&inst, &decomp, cap) {
                        Ok(Some(sol)) => sol.weight.to_string(),
                        Ok(None) => "infeasible".to_string(),
                        Err(CoreError::CapExceeded { .. }) => "cap-exceeded".to_string(),
                        Err(e) => return Err(anyhow::Error::new(e)),
                    };
                    (decomp.modulator.len(), decomp.k, result)
                }
            };
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            writeln!(
                csv,
                "{},{},{},{},{},{},{:.3},{}",
                suite.name(),
                dim,
                n,
                seed,
                sep_size,
                width,
                wall_ms,
                result
            )?;
        }
    }
    Ok(csv)
}

/// Wraps a geometric graph into a cut-uncut instance: first and last vertex
/// as terminals, unit weights.
fn terminal_instance(g: Graph) -> Result<CutUncutInstance> {
    let n = g.vertex_count();
    anyhow::ensure!(n >= 2, "need at least two vertices for terminals");
    let mut weighted = Graph::new(n);
    for (u, v) in g.edges() {
        weighted.add_weighted_edge(u, v, 1);
    }
    CutUncutInstance::new(weighted, vec![0], vec![(n - 1) as u32]).map_err(anyhow::Error::new)
}
