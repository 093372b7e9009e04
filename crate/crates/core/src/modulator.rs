//! The alpha-modulator parameter: a vertex set S of size at most k whose
//! removal leaves every component with independence number at most k.
//! Verification, exact XP computation by subset guessing, and the
//! decomposition type both solvers consume.

use crate::error::{Error, Result};
use crate::geometry::{self, ObjectSet};
use crate::graph::{
    connected_components, independence_number_capped, Graph, EXACT_ALPHA_CAP,
};

/// Hard cap for [`amod_exact`]; the search enumerates vertex subsets.
pub const AMOD_EXACT_CAP: usize = 18;

/// A modulator S together with the components of `G - S` and certified
/// per-component independence bounds. The width `k` is
/// `max(|S|, max alpha_bound)`.
#[derive(Debug, Clone)]
pub struct ModulatorDecomposition {
    pub graph: Graph,
    pub modulator: Vec<u32>,
    pub components: Vec<Vec<u32>>,
    pub alpha_bounds: Vec<u64>,
    pub k: u64,
}

impl ModulatorDecomposition {
    /// Builds a decomposition from a graph and a modulator, computing exact
    /// per-component independence numbers (components must be within the
    /// exact-search cap).
    pub fn from_modulator(graph: Graph, modulator: Vec<u32>) -> Result<Self> {
        let mut modulator = modulator;
        modulator.sort_unstable();
        modulator.dedup();
        let components = connected_components(&graph, &modulator);
        let mut alpha_bounds = Vec::with_capacity(components.len());
        for comp in &components {
            let (sub, _) = graph.induced(comp);
            alpha_bounds.push(independence_number_capped(&sub, EXACT_ALPHA_CAP)?.size);
        }
        let k = (modulator.len() as u64).max(alpha_bounds.iter().copied().max().unwrap_or(0));
        Ok(ModulatorDecomposition { graph, modulator, components, alpha_bounds, k })
    }

    /// Re-checks the stored structure: components must equal
    /// `connected_components(graph, modulator)` and each alpha bound must
    /// dominate the component's independence number (verified exactly for
    /// components up to `exact_cap` vertices, by greedy clique cover above).
    pub fn check(&self, exact_cap: usize) -> Result<()> {
        let comps = connected_components(&self.graph, &self.modulator);
        if comps != self.components {
            return Err(Error::InvalidInput("stored components are stale".into()));
        }
        if comps.len() != self.alpha_bounds.len() {
            return Err(Error::InvalidInput("alpha_bounds length mismatch".into()));
        }
        for (comp, &bound) in self.components.iter().zip(&self.alpha_bounds) {
            let (sub, _) = self.graph.induced(comp);
            let alpha_or_upper = if comp.len() <= exact_cap {
                independence_number_capped(&sub, exact_cap)?.size
            } else {
                crate::graph::independence_upper_bound(&sub)
            };
            if comp.len() <= exact_cap && alpha_or_upper > bound {
                return Err(Error::InvalidInput(format!(
                    "component alpha {alpha_or_upper} exceeds certified bound {bound}"
                )));
            }
        }
        if self.k < self.modulator.len() as u64
            || self.alpha_bounds.iter().any(|&b| b > self.k)
        {
            return Err(Error::InvalidInput("width k does not cover the decomposition".into()));
        }
        Ok(())
    }
}

/// True iff `|s| <= k` and every component of `g - s` has exact independence
/// number at most `k`.
pub fn verify_modulator(g: &Graph, s: &[u32], k: u64) -> Result<bool> {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() as u64 > k {
        return Ok(false);
    }
    for comp in connected_components(g, &s) {
        let (sub, _) = g.induced(&comp);
        if independence_number_capped(&sub, EXACT_ALPHA_CAP)?.size > k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact alpha-modulator number with a witness, by guessing the modulator:
/// for k = 0, 1, ... enumerate candidate sets of size <= k (sizes ascending,
/// lexicographic within a size) and return the first that verifies.
pub fn amod_exact(g: &Graph) -> Result<(u64, Vec<u32>)> {
    let n = g.vertex_count();
    if n > AMOD_EXACT_CAP {
        return Err(Error::CapExceeded { size: n, cap: AMOD_EXACT_CAP, what: "amod_exact" });
    }
    for k in 0..=n as u64 {
        let mut found: Option<Vec<u32>> = None;
        for size in 0..=k.min(n as u64) {
            let mut subset: Vec<u32> = Vec::with_capacity(size as usize);
            if enumerate_lex(g, n, size as usize, 0, &mut subset, k, &mut found)? {
                break;
            }
        }
        if let Some(s) = found {
            return Ok((k, s));
        }
    }
    unreachable!("k = n always verifies");
}

/// Lexicographic subset enumeration; returns true once a witness is found.
fn enumerate_lex(
    g: &Graph,
    n: usize,
    size: usize,
    start: u32,
    subset: &mut Vec<u32>,
    k: u64,
    found: &mut Option<Vec<u32>>,
) -> Result<bool> {
    if subset.len() == size {
        if verify_modulator(g, subset, k)? {
            *found = Some(subset.clone());
            return Ok(true);
        }
        return Ok(false);
    }
    let remaining = size - subset.len();
    for v in start..=(n - remaining) as u32 {
        subset.push(v);
        if enumerate_lex(g, n, size, v + 1, subset, k, found)? {
            return Ok(true);
        }
        subset.pop();
    }
    Ok(false)
}

/// Wraps the geometric slab separator into a decomposition, certifying
/// components by the hypercube bound and tightening small ones exactly.
/// Single-object sets get the trivial decomposition.
pub fn decomposition_from_geometry(f: &ObjectSet) -> Result<ModulatorDecomposition> {
    f.validate()?;
    if f.len() < 2 {
        let graph = geometry::build_intersection_graph(f)?;
        let components = connected_components(&graph, &[]);
        let alpha_bounds = vec![1; components.len()];
        let k = if components.is_empty() { 0 } else { 1 };
        return Ok(ModulatorDecomposition {
            graph,
            modulator: Vec::new(),
            components,
            alpha_bounds,
            k,
        });
    }
    Ok(geometry::slab_separator(f)?.decomposition)
}

/// The join `G + G`: two disjoint copies of g plus all edges between them.
pub fn join_graph(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut j = Graph::new(2 * n);
    for (u, v) in g.edges() {
        j.add_edge(u, v);
        j.add_edge(u + n as u32, v + n as u32);
    }
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            j.add_edge(u, v + n as u32);
        }
    }
    j
}
