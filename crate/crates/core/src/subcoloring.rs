//! 2-Subcoloring: partition the vertices into two cluster graphs (no
//! monochromatic induced P3).
//!
//! Three deciders live here. `brute_subcoloring` is the small-scale oracle.
//! `extend_partial_subcoloring` is a complete backtracking extender with
//! forced-move propagation and a cluster budget, matching the interface of
//! the partial-extension subroutine the dynamic program calls.
//! `solve_subcoloring` is the signature DP over a modulator decomposition.

use crate::error::{Error, Result};
use crate::graph::{cluster_violation, is_cluster_graph, Graph};
use crate::modulator::ModulatorDecomposition;
use std::collections::BTreeMap;

/// Cap for the plain exhaustive oracle.
pub const BRUTE_SUBCOLORING_CAP: usize = 22;

/// A total or partial 2-coloring; `None` marks unassigned vertices.
pub type Coloring = Vec<Option<u8>>;

/// True iff `c` is total on `g` and both color classes induce cluster
/// graphs.
pub fn verify_subcoloring(g: &Graph, c: &[Option<u8>]) -> bool {
    if c.len() != g.vertex_count() || c.iter().any(|x| x.is_none()) {
        return false;
    }
    for color in 0..2u8 {
        let class: Vec<u32> = (0..g.vertex_count() as u32)
            .filter(|&v| c[v as usize] == Some(color))
            .collect();
        if !is_cluster_graph(g, &class) {
            return false;
        }
    }
    true
}

/// Exhaustive search over all 2^n colorings with early pruning on partial
/// monochromatic P3s. Returns the lexicographically first witness.
pub fn brute_subcoloring(g: &Graph) -> Result<Option<Coloring>> {
    let n = g.vertex_count();
    if n > BRUTE_SUBCOLORING_CAP {
        return Err(Error::CapExceeded { size: n, cap: BRUTE_SUBCOLORING_CAP, what: "brute_subcoloring" });
    }
    let mut colors: Coloring = vec![None; n];
    if brute_rec(g, &mut colors, 0) {
        Ok(Some(colors))
    } else {
        Ok(None)
    }
}

fn brute_rec(g: &Graph, colors: &mut Coloring, v: usize) -> bool {
    if v == g.vertex_count() {
        return true;
    }
    for c in 0..2u8 {
        if !creates_mono_p3(g, colors, v as u32, c) {
            colors[v] = Some(c);
            if brute_rec(g, colors, v + 1) {
                return true;
            }
            colors[v] = None;
        }
    }
    false
}

/// Would assigning color `c` to `v` create a monochromatic induced P3 among
/// assigned vertices?
fn creates_mono_p3(g: &Graph, colors: &[Option<u8>], v: u32, c: u8) -> bool {
    let same: Vec<u32> =
        g.neighbors(v).iter().copied().filter(|&u| colors[u as usize] == Some(c)).collect();
    // v as the middle vertex.
    for (i, &a) in same.iter().enumerate() {
        for &b in &same[i + 1..] {
            if !g.has_edge(a, b) {
                return true;
            }
        }
    }
    // v as an endpoint: v - u - w with w in u's same-colored neighborhood.
    for &u in &same {
        for &w in g.neighbors(u) {
            if w != v && colors[w as usize] == Some(c) && !g.has_edge(v, w) {
                return true;
            }
        }
    }
    false
}

/// Complete backtracking extender: find a total extension of `partial` whose
/// classes are cluster graphs with at most `cluster_budget` clusters in
/// total, or prove none exists.
///
/// The search propagates forced moves to a fixpoint (a vertex refuted in one
/// color takes the other; a vertex refuted in both backtracks), then
/// branches on the most constrained vertex (most assigned neighbors,
/// smallest id on ties). Cluster counting prunes: clusters of a partial
/// coloring never merge later, so the running count is a valid lower bound.
pub fn extend_partial_subcoloring(
    g: &Graph,
    partial: &[Option<u8>],
    cluster_budget: usize,
) -> Result<Option<Coloring>> {
    let n = g.vertex_count();
    assert_eq!(partial.len(), n);
    // Precondition: the assigned part must itself be P3-free.
    for color in 0..2u8 {
        let class: Vec<u32> =
            (0..n as u32).filter(|&v| partial[v as usize] == Some(color)).collect();
        if let Some((a, b, c)) = cluster_violation(g, &class) {
            return Err(Error::InvalidPartial { a, b, c });
        }
    }
    let mut search = Extender {
        g,
        colors: partial.to_vec(),
        budget: cluster_budget,
        clusters: 0,
        trail: Vec::new(),
    };
    search.clusters = search.count_clusters();
    if search.clusters > cluster_budget {
        return Ok(None);
    }
    if search.solve() {
        Ok(Some(search.colors))
    } else {
        Ok(None)
    }
}

struct Extender<'a> {
    g: &'a Graph,
    colors: Coloring,
    budget: usize,
    clusters: usize,
    trail: Vec<u32>,
}

impl Extender<'_> {
    fn count_clusters(&self) -> usize {
        // Connected components of each assigned color class; classes are
        // P3-free here, so components are cliques.
        let n = self.g.vertex_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n as u32 {
            if seen[s as usize] || self.colors[s as usize].is_none() {
                continue;
            }
            count += 1;
            let c = self.colors[s as usize];
            let mut stack = vec![s];
            seen[s as usize] = true;
            while let Some(v) = stack.pop() {
                for &w in self.g.neighbors(v) {
                    if !seen[w as usize] && self.colors[w as usize] == c {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    fn assign(&mut self, v: u32, c: u8) {
        debug_assert!(self.colors[v as usize].is_none());
        let joins = self
            .g
            .neighbors(v)
            .iter()
            .any(|&u| self.colors[u as usize] == Some(c));
        if !joins {
            self.clusters += 1;
        }
        self.colors[v as usize] = Some(c);
        self.trail.push(v);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            let c = self.colors[v as usize].take().unwrap();
            let joined = self
                .g
                .neighbors(v)
                .iter()
                .any(|&u| self.colors[u as usize] == Some(c));
            if !joined {
                self.clusters -= 1;
            }
        }
    }

    /// Propagate forced moves. Returns false on a dead end.
    fn propagate(&mut self) -> bool {
        loop {
            if self.clusters > self.budget {
                return false;
            }
            let mut changed = false;
            for v in 0..self.g.vertex_count() as u32 {
                if self.colors[v as usize].is_some() {
                    continue;
                }
                let bad0 = creates_mono_p3(self.g, &self.colors, v, 0);
                let bad1 = creates_mono_p3(self.g, &self.colors, v, 1);
                match (bad0, bad1) {
                    (true, true) => return false,
                    (true, false) => {
                        self.assign(v, 1);
                        changed = true;
                    }
                    (false, true) => {
                        self.assign(v, 0);
                        changed = true;
                    }
                    (false, false) => {}
                }
                if self.clusters > self.budget {
                    return false;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn solve(&mut self) -> bool {
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo_to(mark);
            return false;
        }
        // Branch vertex: most assigned neighbors, smallest id on ties.
        let pick = (0..self.g.vertex_count() as u32)
            .filter(|&v| self.colors[v as usize].is_none())
            .max_by_key(|&v| {
                let assigned =
                    self.g.neighbors(v).iter().filter(|&&u| self.colors[u as usize].is_some()).count();
                (assigned, std::cmp::Reverse(v))
            });
        let Some(v) = pick else {
            return true; // total and consistent
        };
        for c in 0..2u8 {
            if creates_mono_p3(self.g, &self.colors, v, c) {
                continue;
            }
            let inner = self.trail.len();
            self.assign(v, c);
            if self.solve() {
                return true;
            }
            self.undo_to(inner);
        }
        self.undo_to(mark);
        false
    }
}

/// Unbudgeted decision wrapper used where only existence matters: the number
/// of clusters of any 2-subcoloring is at most n.
pub fn decide_subcoloring(g: &Graph) -> Option<Coloring> {
    let none = vec![None; g.vertex_count()];
    extend_partial_subcoloring(g, &none, g.vertex_count().max(1))
        .expect("empty partial is always valid")
}

// ---------------------------------------------------------------------------
// Signature DP over a modulator decomposition
// ---------------------------------------------------------------------------

/// One DP state: a coloring of the modulator and a signature flag per
/// modulator vertex (bit set = the vertex's cluster may extend outside S).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignatureState {
    pub mu: u32,
    pub sigma: u32,
}

/// Decides 2-Subcoloring of `decomp.graph` by the signature DP and returns
/// a witness coloring.
///
/// Stage 0 holds every pair (mu, sigma) where mu 2-subcolors G[S] and sigma
/// is constant on each mu-clique. The transition to stage t keeps a pair if
/// some ancestor passes the rejection rules and the forced partial coloring
/// on S and C_t extends to a 2-subcoloring of G[S + C_t] within the cluster
/// budget 2(|S| + alpha_bound(C_t)).
pub fn solve_subcoloring(decomp: &ModulatorDecomposition) -> Result<Option<Coloring>> {
    Ok(solve_subcoloring_detailed(decomp)?.map(|(coloring, _)| coloring))
}

/// Like [`solve_subcoloring`], additionally returning the accepting final
/// state, whose signature conditions the test suite re-verifies against the
/// reconstructed witness.
pub fn solve_subcoloring_detailed(
    decomp: &ModulatorDecomposition,
) -> Result<Option<(Coloring, SignatureState)>> {
    let g = &decomp.graph;
    let s: &[u32] = &decomp.modulator;
    let sn = s.len();
    if sn > 20 {
        return Err(Error::CapExceeded { size: sn, cap: 20, what: "solve_subcoloring modulator" });
    }

    // Stage 0.
    let mut table: BTreeMap<SignatureState, StateInfo> = BTreeMap::new();
    for mu in 0u32..(1 << sn) {
        if !modulator_coloring_valid(g, s, mu) {
            continue;
        }
        let cliques = mu_cliques(g, s, mu);
        // sigma must be constant on each mu-clique: one bit per clique.
        for pick in 0u32..(1 << cliques.len()) {
            let mut sigma = 0u32;
            for (ci, clique) in cliques.iter().enumerate() {
                if pick >> ci & 1 == 1 {
                    for &i in clique {
                        sigma |= 1 << i;
                    }
                }
            }
            table.insert(SignatureState { mu, sigma }, StateInfo { ancestor: None, extension: Vec::new() });
        }
    }

    let mut stages: Vec<BTreeMap<SignatureState, StateInfo>> = vec![table];

    for (t, comp) in decomp.components.iter().enumerate() {
        let prev = &stages[t];
        if prev.is_empty() {
            stages.push(BTreeMap::new());
            continue;
        }
        let mut verts: Vec<u32> = s.to_vec();
        verts.extend_from_slice(comp);
        let (sub, ids) = g.induced(&verts);
        // Positions of the modulator vertices inside the subgraph.
        let spos: Vec<u32> = s
            .iter()
            .map(|&v| ids.binary_search(&v).expect("modulator in subgraph") as u32)
            .collect();
        let budget = 2 * (sn + decomp.alpha_bounds[t] as usize);

        let mut next: BTreeMap<SignatureState, StateInfo> = BTreeMap::new();
        let mus: Vec<u32> = {
            let mut m: Vec<u32> = prev.keys().map(|st| st.mu).collect();
            m.dedup();
            m
        };
        for mu in mus {
            for sigma2 in 0u32..(1 << sn) {
                let cand = SignatureState { mu, sigma: sigma2 };
                if next.contains_key(&cand) {
                    continue;
                }
                // Signature condition (i) for sigma2.
                if violates_condition_i(g, s, mu, sigma2) {
                    continue;
                }
                // A component vertex with two bottom neighbors of different
                // colors can take neither color.
                if bottom_conflict(g, s, comp, mu, sigma2) {
                    continue;
                }
                // Try ancestors (mu, sigma1) with top(sigma1) subset of top(sigma2).
                let ancestors: Vec<u32> = prev
                    .keys()
                    .filter(|st| st.mu == mu && st.sigma & !sigma2 == 0)
                    .map(|st| st.sigma)
                    .collect();
                for sigma1 in ancestors {
                    let Some(partial) =
                        forced_partial(g, s, comp, &ids, &spos, mu, sigma1, sigma2)
                    else {
                        continue;
                    };
                    match extend_partial_subcoloring(&sub, &partial, budget) {
                        Ok(Some(full)) => {
                            let extension: Vec<u8> = ids
                                .iter()
                                .enumerate()
                                .filter(|(_, v)| comp.binary_search(v).is_ok())
                                .map(|(i, _)| full[i].unwrap())
                                .collect();
                            next.insert(
                                cand,
                                StateInfo {
                                    ancestor: Some(SignatureState { mu, sigma: sigma1 }),
                                    extension,
                                },
                            );
                            break;
                        }
                        Ok(None) => {}
                        Err(Error::InvalidPartial { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        stages.push(next);
    }

    let last = stages.last().unwrap();
    let Some((&final_state, _)) = last.iter().next() else {
        return Ok(None);
    };

    // Reconstruct by replaying ancestors.
    let mut colors: Coloring = vec![None; g.vertex_count()];
    for (i, &v) in s.iter().enumerate() {
        colors[v as usize] = Some((final_state.mu >> i & 1) as u8);
    }
    let mut state = final_state;
    for t in (0..decomp.components.len()).rev() {
        let info = &stages[t + 1][&state];
        for (v, &c) in decomp.components[t].iter().zip(&info.extension) {
            colors[*v as usize] = Some(c);
        }
        if let Some(anc) = info.ancestor {
            state = anc;
        }
    }
    debug_assert!(verify_subcoloring(g, &colors));
    Ok(Some((colors, final_state)))
}

#[derive(Debug, Clone)]
struct StateInfo {
    ancestor: Option<SignatureState>,
    /// Colors of the component vertices (in component order) found by the
    /// extension call; replayed during witness reconstruction.
    extension: Vec<u8>,
}

/// Does mu 2-subcolor G[S]?
fn modulator_coloring_valid(g: &Graph, s: &[u32], mu: u32) -> bool {
    for (i, &a) in s.iter().enumerate() {
        for (j, &b) in s.iter().enumerate().skip(i + 1) {
            if mu >> i & 1 != mu >> j & 1 {
                continue;
            }
            // a, b same color: any same-colored common structure forming a P3?
            for (l, &c) in s.iter().enumerate() {
                if l == i || l == j || mu >> l & 1 != mu >> i & 1 {
                    continue;
                }
                // Induced P3 with middle c? a-c, c-b edges, a-b non-edge.
                if g.has_edge(a, c) && g.has_edge(c, b) && !g.has_edge(a, b) {
                    return false;
                }
            }
        }
    }
    true
}

/// Connected components of same-colored adjacency inside S (the mu-cliques,
/// when mu is valid), as index lists into `s`.
fn mu_cliques(g: &Graph, s: &[u32], mu: u32) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut seen = vec![false; n];
    let mut cliques = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j]
                    && mu >> i & 1 == mu >> j & 1
                    && g.has_edge(s[i], s[j])
                {
                    seen[j] = true;
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        cliques.push(comp);
    }
    cliques
}

/// Condition (i): adjacent same-colored modulator vertices must share the
/// sigma flag.
fn violates_condition_i(g: &Graph, s: &[u32], mu: u32, sigma: u32) -> bool {
    for (i, &a) in s.iter().enumerate() {
        for (j, &b) in s.iter().enumerate().skip(i + 1) {
            if g.has_edge(a, b) && mu >> i & 1 == mu >> j & 1 && sigma >> i & 1 != sigma >> j & 1 {
                return true;
            }
        }
    }
    false
}

/// Rejection rule: some component vertex has two neighbors in S that are
/// both flagged bottom but carry different colors.
fn bottom_conflict(g: &Graph, s: &[u32], comp: &[u32], mu: u32, sigma2: u32) -> bool {
    for &u in comp {
        let mut forced: Option<u8> = None;
        for (i, &v) in s.iter().enumerate() {
            if sigma2 >> i & 1 == 0 && g.has_edge(u, v) {
                let color = (mu >> i & 1) as u8;
                match forced {
                    None => forced = Some(color),
                    Some(c) if c != color => return true,
                    _ => {}
                }
            }
        }
    }
    false
}

/// Builds the forced partial coloring on S and C_t: component vertices with
/// a neighbor u in S flagged bottom in sigma2 or top in sigma1 must take the
/// opposite color of u. Returns None on conflicting forced values.
#[allow(clippy::too_many_arguments)]
fn forced_partial(
    g: &Graph,
    s: &[u32],
    comp: &[u32],
    ids: &[u32],
    spos: &[u32],
    mu: u32,
    sigma1: u32,
    sigma2: u32,
) -> Option<Coloring> {
    let mut partial: Coloring = vec![None; ids.len()];
    for (i, &p) in spos.iter().enumerate() {
        partial[p as usize] = Some((mu >> i & 1) as u8);
    }
    for &v in comp {
        let pos = ids.binary_search(&v).unwrap();
        for (i, &u) in s.iter().enumerate() {
            if !g.has_edge(u, v) {
                continue;
            }
            if sigma2 >> i & 1 == 0 || sigma1 >> i & 1 == 1 {
                let forced = 1 - (mu >> i & 1) as u8;
                match partial[pos] {
                    None => partial[pos] = Some(forced),
                    Some(c) if c != forced => return None,
                    _ => {}
                }
            }
        }
    }
    Some(partial)
}

/// Checks the literal signature conditions of a state against a witness
/// coloring: (i) same-cluster modulator vertices share flags, (ii) bottom
/// vertices have their whole cluster inside S union V_t. Used by the test
/// suite to validate stored states.
pub fn signature_holds(
    g: &Graph,
    s: &[u32],
    coloring: &[Option<u8>],
    vt: &[u32],
    mu: u32,
    sigma: u32,
) -> bool {
    for (i, &v) in s.iter().enumerate() {
        if coloring[v as usize] != Some((mu >> i & 1) as u8) {
            return false;
        }
    }
    for (i, &v) in s.iter().enumerate() {
        // The cluster of v within the colored region.
        let cluster: Vec<u32> = cluster_of(g, coloring, v);
        for &u in &cluster {
            if let Some(j) = s.iter().position(|&w| w == u) {
                if sigma >> i & 1 != sigma >> j & 1 {
                    return false; // (i)
                }
            }
        }
        if sigma >> i & 1 == 0 {
            // (ii): bottom means the cluster stays inside S.
            if cluster.iter().any(|u| !s.contains(u) && vt.contains(u)) {
                return false;
            }
        }
    }
    true
}

/// Same-colored closed neighborhood of v (its cluster in a valid coloring).
fn cluster_of(g: &Graph, coloring: &[Option<u8>], v: u32) -> Vec<u32> {
    let c = coloring[v as usize];
    let mut cl = vec![v];
    cl.extend(g.neighbors(v).iter().copied().filter(|&u| coloring[u as usize] == c));
    cl
}
