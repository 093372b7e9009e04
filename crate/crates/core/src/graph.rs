//! Undirected simple graphs with dense integer vertex ids, plus the exact
//! combinatorial subroutines the solvers are built from: connected
//! components, exact and certified independence numbers, cluster-graph
//! recognition, torsos, and greedy kappa-partitions.
//!
//! Vertices are `0..n`. All tie-breaks go to the smallest vertex id so that
//! every operation is deterministic.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Default cap on exact independence-number searches.
pub const EXACT_ALPHA_CAP: usize = 40;

/// An undirected simple graph. Neighbor lists are kept sorted; edge weights
/// are optional (absent means unweighted) and keyed by `(min, max)` endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    weights: Option<BTreeMap<(u32, u32), u64>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], weights: None, labels: None }
    }

    /// Builds an unweighted graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Adds an edge. Self-loops and duplicates are rejected by panic: they
    /// indicate construction bugs, not recoverable conditions.
    pub fn add_edge(&mut self, u: u32, v: u32) {
        assert!(u != v, "self-loop at {u}");
        assert!((u as usize) < self.adj.len() && (v as usize) < self.adj.len());
        assert!(!self.has_edge(u, v), "duplicate edge {u}-{v}");
        let pu = self.adj[u as usize].partition_point(|&w| w < v);
        self.adj[u as usize].insert(pu, v);
        let pv = self.adj[v as usize].partition_point(|&w| w < u);
        self.adj[v as usize].insert(pv, u);
    }

    /// Adds an edge carrying a nonnegative integer weight. Mixing weighted
    /// and unweighted insertion is allowed; missing weights read as 1.
    pub fn add_weighted_edge(&mut self, u: u32, v: u32, w: u64) {
        self.add_edge(u, v);
        self.weights.get_or_insert_with(BTreeMap::new).insert(key(u, v), w);
    }

    pub fn set_weight(&mut self, u: u32, v: u32, w: u64) {
        assert!(self.has_edge(u, v));
        self.weights.get_or_insert_with(BTreeMap::new).insert(key(u, v), w);
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of the edge `u-v`; 1 when the graph is unweighted.
    pub fn weight(&self, u: u32, v: u32) -> u64 {
        debug_assert!(self.has_edge(u, v));
        match &self.weights {
            Some(map) => *map.get(&key(u, v)).unwrap_or(&1),
            None => 1,
        }
    }

    pub fn total_weight(&self) -> u64 {
        self.edges().map(|(u, v)| self.weight(u, v)).sum()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter().filter_map(move |&v| if (u as u32) < v { Some((u as u32, v)) } else { None })
        })
    }

    pub fn set_label(&mut self, v: u32, label: String) {
        let n = self.adj.len();
        self.labels.get_or_insert_with(|| vec![String::new(); n])[v as usize] = label;
    }

    pub fn label(&self, v: u32) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v as usize].as_str())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Induced subgraph on `verts` (need not be sorted; output vertex `i`
    /// corresponds to `verts_sorted[i]`). Returns the graph and the sorted
    /// original ids.
    pub fn induced(&self, verts: &[u32]) -> (Graph, Vec<u32>) {
        let mut ids: Vec<u32> = verts.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let index: BTreeMap<u32, u32> =
            ids.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let mut g = Graph::new(ids.len());
        let weighted = self.is_weighted();
        for (i, &v) in ids.iter().enumerate() {
            for &w in self.neighbors(v) {
                if w > v {
                    if let Some(&j) = index.get(&w) {
                        if weighted {
                            g.add_weighted_edge(i as u32, j, self.weight(v, w));
                        } else {
                            g.add_edge(i as u32, j);
                        }
                    }
                }
            }
        }
        (g, ids)
    }

    /// Adjacency as one bitmask per vertex. Only valid for `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.vertex_count() <= 64);
        self.adj
            .iter()
            .map(|nbrs| nbrs.iter().fold(0u64, |m, &v| m | (1u64 << v)))
            .collect()
    }
}

fn key(u: u32, v: u32) -> (u32, u32) {
    (u.min(v), u.max(v))
}

/// Connected components of `g - removed`, each sorted, ordered by smallest
/// member.
pub fn connected_components(g: &Graph, removed: &[u32]) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut gone = vec![false; n];
    for &v in removed {
        gone[v as usize] = true;
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n as u32 {
        if gone[s as usize] || seen[s as usize] {
            continue;
        }
        let mut comp = vec![s];
        let mut queue = vec![s];
        seen[s as usize] = true;
        while let Some(v) = queue.pop() {
            for &w in g.neighbors(v) {
                if !gone[w as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                    queue.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// A maximum independent set together with its size.
#[derive(Debug, Clone)]
pub struct IndependentSet {
    pub size: u64,
    pub witness: Vec<u32>,
}

/// Exact independence number by branch and bound, with a witness.
///
/// Branches on a maximum-degree vertex (exclude it, or include it and delete
/// its closed neighborhood); prunes with the greedy clique-cover bound.
/// Rejects graphs above `EXACT_ALPHA_CAP` vertices unless
/// [`independence_number_capped`] is given a larger cap.
pub fn independence_number(g: &Graph) -> Result<IndependentSet> {
    independence_number_capped(g, EXACT_ALPHA_CAP)
}

pub fn independence_number_capped(g: &Graph, cap: usize) -> Result<IndependentSet> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::CapExceeded { size: n, cap, what: "independence_number" });
    }
    if n > 64 {
        return Err(Error::CapExceeded { size: n, cap: 64, what: "independence_number (bitset)" });
    }
    if n == 0 {
        return Ok(IndependentSet { size: 0, witness: Vec::new() });
    }
    let masks = g.adjacency_masks();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = BnB { masks: &masks, best_size: 0, best_set: 0 };
    best.search(full, 0, 0);
    let mut witness: Vec<u32> = (0..n as u32).filter(|&v| best.best_set >> v & 1 == 1).collect();
    witness.sort_unstable();
    Ok(IndependentSet { size: best.best_size as u64, witness })
}

struct BnB<'a> {
    masks: &'a [u64],
    best_size: u32,
    best_set: u64,
}

impl BnB<'_> {
    fn search(&mut self, remaining: u64, chosen: u64, chosen_count: u32) {
        if remaining == 0 {
            if chosen_count > self.best_size {
                self.best_size = chosen_count;
                self.best_set = chosen;
            }
            return;
        }
        if chosen_count + clique_cover_bound(self.masks, remaining) <= self.best_size {
            return;
        }
        // Pick the max-degree vertex inside `remaining` (ties to smallest id).
        let mut pick = u32::MAX;
        let mut pick_deg = -1i64;
        let mut scan = remaining;
        while scan != 0 {
            let v = scan.trailing_zeros();
            scan &= scan - 1;
            let deg = (self.masks[v as usize] & remaining).count_ones() as i64;
            if deg > pick_deg {
                pick_deg = deg;
                pick = v;
            }
        }
        // Degree-0 vertices are all forced into the set.
        if pick_deg == 0 {
            let total = chosen_count + remaining.count_ones();
            if total > self.best_size {
                self.best_size = total;
                self.best_set = chosen | remaining;
            }
            return;
        }
        let vbit = 1u64 << pick;
        // Include pick.
        self.search(remaining & !(self.masks[pick as usize] | vbit), chosen | vbit, chosen_count + 1);
        // Exclude pick.
        self.search(remaining & !vbit, chosen, chosen_count);
    }
}

/// Greedy clique-cover size on the subgraph induced by `remaining`; an upper
/// bound on its independence number.
fn clique_cover_bound(masks: &[u64], remaining: u64) -> u32 {
    let mut left = remaining;
    let mut cliques = 0;
    while left != 0 {
        cliques += 1;
        // Grow a clique from the max-degree vertex in `left`.
        let mut seed = u32::MAX;
        let mut seed_deg = -1i64;
        let mut scan = left;
        while scan != 0 {
            let v = scan.trailing_zeros();
            scan &= scan - 1;
            let deg = (masks[v as usize] & left).count_ones() as i64;
            if deg > seed_deg {
                seed_deg = deg;
                seed = v;
            }
        }
        let mut clique = 1u64 << seed;
        let mut cands = masks[seed as usize] & left;
        while cands != 0 {
            let v = cands.trailing_zeros();
            clique |= 1u64 << v;
            cands &= masks[v as usize];
        }
        left &= !clique;
    }
    cliques
}

/// Greedy clique-cover size of the whole graph: a certified upper bound on
/// the independence number that does not need the exact-search cap.
pub fn independence_upper_bound(g: &Graph) -> u64 {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let mut left: Vec<bool> = vec![true; n];
    let mut left_count = n;
    let mut cliques = 0u64;
    while left_count > 0 {
        cliques += 1;
        let seed = (0..n as u32)
            .filter(|&v| left[v as usize])
            .max_by_key(|&v| {
                let deg = g.neighbors(v).iter().filter(|&&w| left[w as usize]).count();
                (deg, std::cmp::Reverse(v))
            })
            .unwrap();
        let mut clique = vec![seed];
        // Candidates ordered by remaining degree (desc), then id.
        let mut cands: Vec<u32> =
            g.neighbors(seed).iter().copied().filter(|&v| left[v as usize]).collect();
        cands.sort_by_key(|&v| {
            let deg = g.neighbors(v).iter().filter(|&&w| left[w as usize]).count();
            (std::cmp::Reverse(deg), v)
        });
        for v in cands {
            if clique.iter().all(|&c| g.has_edge(c, v)) {
                clique.push(v);
            }
        }
        for v in clique {
            left[v as usize] = false;
            left_count -= 1;
        }
    }
    cliques
}

/// Returns `None` when `g[subset]` is a cluster graph (disjoint union of
/// cliques), otherwise the smallest induced path `(a, b, c)` witnessing the
/// violation (`ab`, `bc` edges, `ac` a non-edge).
pub fn cluster_violation(g: &Graph, subset: &[u32]) -> Option<(u32, u32, u32)> {
    let mut inset = vec![false; g.vertex_count()];
    for &v in subset {
        inset[v as usize] = true;
    }
    let mut sorted: Vec<u32> = subset.to_vec();
    sorted.sort_unstable();
    for &b in &sorted {
        let nbrs: Vec<u32> =
            g.neighbors(b).iter().copied().filter(|&v| inset[v as usize]).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                if !g.has_edge(a, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// True iff `g[subset]` has no induced path on three vertices.
pub fn is_cluster_graph(g: &Graph, subset: &[u32]) -> bool {
    cluster_violation(g, subset).is_none()
}

/// The torso of `g` on `x`: `g[x]` plus a clique on the `x`-neighborhood of
/// every component of `g - x`.
pub fn torso(g: &Graph, x: &[u32]) -> Graph {
    let mut ids: Vec<u32> = x.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let index: BTreeMap<u32, u32> = ids.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let (mut t, _) = g.induced(&ids);
    for comp in connected_components(g, &ids) {
        let mut nbhd: Vec<u32> = Vec::new();
        for &v in &comp {
            for &w in g.neighbors(v) {
                if let Some(&j) = index.get(&w) {
                    nbhd.push(j);
                }
            }
        }
        nbhd.sort_unstable();
        nbhd.dedup();
        for (i, &a) in nbhd.iter().enumerate() {
            for &b in &nbhd[i + 1..] {
                if !t.has_edge(a, b) {
                    t.add_edge(a, b);
                }
            }
        }
    }
    // Torso keeps the original ids as labels only if the caller relabels;
    // vertex i of the result is ids[i].
    t
}

/// A partition of `V(G)` around a maximal independent set, with per-part
/// clique covers and the contraction graph.
#[derive(Debug, Clone)]
pub struct KappaPartition {
    /// Parts, each sorted; part `i` contains `representatives[i]`.
    pub parts: Vec<Vec<u32>>,
    /// One representative per part; together a maximal independent set.
    pub representatives: Vec<u32>,
    /// Per part, a partition of the part into cliques.
    pub clique_covers: Vec<Vec<Vec<u32>>>,
    /// Max number of cliques over all parts.
    pub kappa: usize,
    /// Graph on parts: edge iff some original edge crosses the parts.
    pub contraction: Graph,
    /// Max degree of the contraction.
    pub delta: usize,
}

/// Greedy kappa-partition. `order` is the vertex processing order for the
/// maximal independent set (defaults to ascending ids); geometric callers
/// pass a lexicographic center order, which tends to lower kappa.
///
/// Instance-specific kappa and delta are measured and reported; no constant
/// bound is enforced.
pub fn greedy_kappa_partition(g: &Graph, order: Option<&[u32]>) -> KappaPartition {
    let n = g.vertex_count();
    let default_order: Vec<u32>;
    let order: &[u32] = match order {
        Some(o) => o,
        None => {
            default_order = (0..n as u32).collect();
            &default_order
        }
    };
    assert_eq!(order.len(), n);

    let mut in_mis = vec![false; n];
    let mut blocked = vec![false; n];
    let mut reps = Vec::new();
    for &v in order {
        if !blocked[v as usize] {
            in_mis[v as usize] = true;
            blocked[v as usize] = true;
            reps.push(v);
            for &w in g.neighbors(v) {
                blocked[w as usize] = true;
            }
        }
    }
    reps.sort_unstable();
    let rep_index: BTreeMap<u32, usize> =
        reps.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut part_of = vec![usize::MAX; n];
    for (i, &r) in reps.iter().enumerate() {
        part_of[r as usize] = i;
    }
    for v in 0..n as u32 {
        if in_mis[v as usize] {
            continue;
        }
        // Smallest adjacent representative; one exists by maximality.
        let rep = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| in_mis[w as usize])
            .min()
            .expect("maximal independent set dominates the graph");
        part_of[v as usize] = rep_index[&rep];
    }

    let mut parts: Vec<Vec<u32>> = vec![Vec::new(); reps.len()];
    for v in 0..n as u32 {
        parts[part_of[v as usize]].push(v);
    }

    let mut clique_covers = Vec::with_capacity(parts.len());
    let mut kappa = 0;
    for part in &parts {
        let cover = greedy_clique_cover(g, part);
        kappa = kappa.max(cover.len());
        clique_covers.push(cover);
    }
    kappa = kappa.max(1);

    let mut contraction = Graph::new(parts.len());
    for (u, v) in g.edges() {
        let (pu, pv) = (part_of[u as usize], part_of[v as usize]);
        if pu != pv && !contraction.has_edge(pu as u32, pv as u32) {
            contraction.add_edge(pu as u32, pv as u32);
        }
    }
    let delta = (0..parts.len()).map(|p| contraction.degree(p as u32)).max().unwrap_or(0);

    KappaPartition { parts, representatives: reps, clique_covers, kappa, contraction, delta }
}

/// Greedy clique cover of `g[part]`, growing each clique from the max-degree
/// remaining vertex.
fn greedy_clique_cover(g: &Graph, part: &[u32]) -> Vec<Vec<u32>> {
    let mut left: Vec<u32> = part.to_vec();
    left.sort_unstable();
    let mut cover = Vec::new();
    while !left.is_empty() {
        let seed = *left
            .iter()
            .max_by_key(|&&v| {
                let deg = g.neighbors(v).iter().filter(|w| left.contains(w)).count();
                (deg, std::cmp::Reverse(v))
            })
            .unwrap();
        let mut clique = vec![seed];
        let mut cands: Vec<u32> =
            left.iter().copied().filter(|&v| v != seed && g.has_edge(seed, v)).collect();
        cands.sort_by_key(|&v| {
            let deg = g.neighbors(v).iter().filter(|w| left.contains(w)).count();
            (std::cmp::Reverse(deg), v)
        });
        for v in cands {
            if clique.iter().all(|&c| g.has_edge(c, v)) {
                clique.push(v);
            }
        }
        clique.sort_unstable();
        left.retain(|v| !clique.contains(v));
        cover.push(clique);
    }
    cover
}
