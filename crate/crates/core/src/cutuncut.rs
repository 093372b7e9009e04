//! Two Sets Cut-Uncut: find a minimum-weight S-T cut (A, B) such that S
//! lies inside one connected component of G[A] and T inside one component
//! of G[B].
//!
//! `solve_cutuncut` runs the partition-state dynamic program over a
//! modulator decomposition. Components are absorbed one at a time; a state
//! records, for each side, how the processed part connects through the
//! modulator (a partition of the modulator's side) and which blocks already
//! hold terminals. Component-internal side assignments come either from
//! exhaustive enumeration (when the Steiner cap covers the component) or
//! from Steiner guess bundles plus a constrained minimum cut.
//!
//! `brute_cutuncut` is the oracle; `zero_weight_cut` decides the weight-0
//! special case by contracting positive-weight classes.

use crate::error::{Error, Result};
use crate::flow;
use crate::graph::{connected_components, Graph};
use crate::modulator::ModulatorDecomposition;
use std::collections::BTreeMap;

/// Cap for the exhaustive oracle.
pub const BRUTE_CUTUNCUT_CAP: usize = 20;

/// Side of the cut a vertex is assigned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CutSide {
    A,
    B,
}

/// A weighted graph with two disjoint nonempty terminal sets.
#[derive(Debug, Clone)]
pub struct CutUncutInstance {
    pub graph: Graph,
    pub s_terminals: Vec<u32>,
    pub t_terminals: Vec<u32>,
}

impl CutUncutInstance {
    pub fn new(graph: Graph, mut s: Vec<u32>, mut t: Vec<u32>) -> Result<Self> {
        s.sort_unstable();
        s.dedup();
        t.sort_unstable();
        t.dedup();
        if s.is_empty() || t.is_empty() {
            return Err(Error::InvalidInput("terminal sets must be nonempty".into()));
        }
        if s.iter().any(|v| t.binary_search(v).is_ok()) {
            return Err(Error::InvalidInput("terminal sets must be disjoint".into()));
        }
        let n = graph.vertex_count() as u32;
        if s.iter().chain(&t).any(|&v| v >= n) {
            return Err(Error::InvalidInput("terminal out of range".into()));
        }
        Ok(CutUncutInstance { graph, s_terminals: s, t_terminals: t })
    }
}

/// A feasible side assignment and its crossing weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSolution {
    pub side: Vec<CutSide>,
    pub weight: u64,
}

/// Feasibility and weight check: terminals on their sides, each terminal
/// set inside a single component of its side, weight equal to the crossing
/// sum.
pub fn verify_cut_solution(inst: &CutUncutInstance, sol: &CutSolution) -> bool {
    let g = &inst.graph;
    if sol.side.len() != g.vertex_count() {
        return false;
    }
    if inst.s_terminals.iter().any(|&v| sol.side[v as usize] != CutSide::A)
        || inst.t_terminals.iter().any(|&v| sol.side[v as usize] != CutSide::B)
    {
        return false;
    }
    for (terminals, side) in
        [(&inst.s_terminals, CutSide::A), (&inst.t_terminals, CutSide::B)]
    {
        let class: Vec<u32> =
            (0..g.vertex_count() as u32).filter(|&v| sol.side[v as usize] == side).collect();
        let (sub, ids) = g.induced(&class);
        let comps = connected_components(&sub, &[]);
        let home = |v: u32| -> usize {
            let local = ids.binary_search(&v).expect("terminal on its side") as u32;
            comps.iter().position(|c| c.binary_search(&local).is_ok()).unwrap()
        };
        let first = home(terminals[0]);
        if terminals.iter().any(|&v| home(v) != first) {
            return false;
        }
    }
    let weight: u64 = g
        .edges()
        .filter(|&(u, v)| sol.side[u as usize] != sol.side[v as usize])
        .map(|(u, v)| g.weight(u, v))
        .sum();
    weight == sol.weight
}

fn feasible(inst: &CutUncutInstance, side: &[CutSide]) -> bool {
    let weight: u64 = inst
        .graph
        .edges()
        .filter(|&(u, v)| side[u as usize] != side[v as usize])
        .map(|(u, v)| inst.graph.weight(u, v))
        .sum();
    verify_cut_solution(inst, &CutSolution { side: side.to_vec(), weight })
}

/// Exhaustive minimum over all side assignments; ties break to the
/// lexicographically smallest side vector (A before B, ascending ids).
pub fn brute_cutuncut(inst: &CutUncutInstance) -> Result<Option<CutSolution>> {
    let n = inst.graph.vertex_count();
    if n > BRUTE_CUTUNCUT_CAP {
        return Err(Error::CapExceeded { size: n, cap: BRUTE_CUTUNCUT_CAP, what: "brute_cutuncut" });
    }
    let free: Vec<u32> = (0..n as u32)
        .filter(|v| {
            inst.s_terminals.binary_search(v).is_err() && inst.t_terminals.binary_search(v).is_err()
        })
        .collect();
    let mut best: Option<CutSolution> = None;
    // Iterating with the first free vertex as the most significant bit makes
    // the sweep lexicographic over full side vectors.
    let bits = free.len();
    for mask in 0u64..(1u64 << bits) {
        let mut side = vec![CutSide::A; n];
        for &v in &inst.t_terminals {
            side[v as usize] = CutSide::B;
        }
        for (i, &v) in free.iter().enumerate() {
            if mask >> (bits - 1 - i) & 1 == 1 {
                side[v as usize] = CutSide::B;
            }
        }
        if !feasible(inst, &side) {
            continue;
        }
        let weight: u64 = inst
            .graph
            .edges()
            .filter(|&(u, v)| side[u as usize] != side[v as usize])
            .map(|(u, v)| inst.graph.weight(u, v))
            .sum();
        if best.as_ref().map_or(true, |b| weight < b.weight) {
            best = Some(CutSolution { side, weight });
        }
    }
    Ok(best)
}

/// Decides whether a feasible cut of weight exactly 0 exists, by collapsing
/// the components of the positive-weight subgraph (each must be mono-side)
/// and enumerating assignments of the terminal-free classes.
pub fn zero_weight_cut(inst: &CutUncutInstance) -> Result<Option<CutSolution>> {
    let g = &inst.graph;
    let n = g.vertex_count();
    // Union positive-weight edges.
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], v: u32) -> u32 {
        let mut root = v;
        while parent[root as usize] != root {
            root = parent[root as usize];
        }
        let mut cur = v;
        while parent[cur as usize] != root {
            let next = parent[cur as usize];
            parent[cur as usize] = root;
            cur = next;
        }
        root
    }
    for (u, v) in g.edges() {
        if g.weight(u, v) > 0 {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv) as usize] = ru.min(rv);
            }
        }
    }
    let mut class_of = vec![0u32; n];
    let mut reps: Vec<u32> = Vec::new();
    for v in 0..n as u32 {
        let r = find(&mut parent, v);
        let idx = match reps.binary_search(&r) {
            Ok(i) => i,
            Err(i) => {
                reps.insert(i, r);
                i
            }
        };
        class_of[v as usize] = idx as u32;
    }
    // Re-map after insertions shifted indices.
    for v in 0..n as u32 {
        let r = find(&mut parent, v);
        class_of[v as usize] = reps.binary_search(&r).unwrap() as u32;
    }
    let nclasses = reps.len();
    let mut forced: Vec<Option<CutSide>> = vec![None; nclasses];
    for &v in &inst.s_terminals {
        let c = class_of[v as usize] as usize;
        if forced[c] == Some(CutSide::B) {
            return Ok(None);
        }
        forced[c] = Some(CutSide::A);
    }
    for &v in &inst.t_terminals {
        let c = class_of[v as usize] as usize;
        if forced[c] == Some(CutSide::A) {
            return Ok(None);
        }
        forced[c] = Some(CutSide::B);
    }
    let free: Vec<usize> = (0..nclasses).filter(|&c| forced[c].is_none()).collect();
    if free.len() > 26 {
        return Err(Error::CapExceeded {
            size: free.len(),
            cap: 26,
            what: "zero_weight_cut free classes",
        });
    }
    for mask in 0u64..(1u64 << free.len()) {
        let mut side_of_class = forced.clone();
        for (i, &c) in free.iter().enumerate() {
            side_of_class[c] =
                Some(if mask >> (free.len() - 1 - i) & 1 == 1 { CutSide::B } else { CutSide::A });
        }
        let side: Vec<CutSide> =
            (0..n).map(|v| side_of_class[class_of[v] as usize].unwrap()).collect();
        if feasible(inst, &side) {
            return Ok(Some(CutSolution { side, weight: 0 }));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Steiner guess bundles
// ---------------------------------------------------------------------------

/// One guess: disjoint independent "anchor" sets per prospective side
/// component, each with a connected superset that will be forced whole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessBundle {
    pub a_sets: Vec<Vec<u32>>,
    pub b_sets: Vec<Vec<u32>>,
    pub x_sets: Vec<Vec<u32>>,
    pub y_sets: Vec<Vec<u32>>,
}

/// Enumerates all guess bundles for a component: families of pairwise
/// disjoint nonempty independent sets with total size at most `2k`, split
/// into an A family and a B family, together with connected supersets of
/// size at most `cap` per set. Deterministic order, duplicate-free.
pub fn enumerate_steiner_guesses(
    component: &[u32],
    g: &Graph,
    k: u64,
    cap: usize,
) -> Vec<GuessBundle> {
    assert!(cap >= 1);
    let mut comp = component.to_vec();
    comp.sort_unstable();
    let budget = (2 * k) as usize;
    // All nonempty independent sets of g[comp], ascending lexicographic.
    let indep_sets = independent_sets(g, &comp, budget);
    let mut bundles = Vec::new();
    let mut family: Vec<(usize, bool)> = Vec::new(); // (set index, is_b)
    enumerate_families(g, &comp, &indep_sets, 0, budget, &mut family, cap, &mut bundles);
    bundles
}

fn independent_sets(g: &Graph, comp: &[u32], max_size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        g: &Graph,
        comp: &[u32],
        start: usize,
        max_size: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_size {
            return;
        }
        for i in start..comp.len() {
            let v = comp[i];
            if cur.iter().all(|&u| !g.has_edge(u, v)) {
                cur.push(v);
                rec(g, comp, i + 1, max_size, cur, out);
                cur.pop();
            }
        }
    }
    rec(g, comp, 0, max_size, &mut cur, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_families(
    g: &Graph,
    comp: &[u32],
    indep: &[Vec<u32>],
    start: usize,
    budget_left: usize,
    family: &mut Vec<(usize, bool)>,
    cap: usize,
    out: &mut Vec<GuessBundle>,
) {
    // Emit the current family with every superset combination.
    emit_with_supersets(g, comp, indep, family, cap, out);
    for i in start..indep.len() {
        let set = &indep[i];
        if set.len() > budget_left {
            continue;
        }
        let disjoint = family
            .iter()
            .all(|&(j, _)| indep[j].iter().all(|v| set.binary_search(v).is_err()));
        if !disjoint {
            continue;
        }
        for is_b in [false, true] {
            family.push((i, is_b));
            enumerate_families(g, comp, indep, i + 1, budget_left - set.len(), family, cap, out);
            family.pop();
        }
    }
}

fn emit_with_supersets(
    g: &Graph,
    comp: &[u32],
    indep: &[Vec<u32>],
    family: &[(usize, bool)],
    cap: usize,
    out: &mut Vec<GuessBundle>,
) {
    // Connected supersets per family member.
    let per_set: Vec<Vec<Vec<u32>>> = family
        .iter()
        .map(|&(i, _)| connected_supersets(g, comp, &indep[i], cap))
        .collect();
    if per_set.iter().any(|s| s.is_empty()) {
        return;
    }
    let mut choice = vec![0usize; family.len()];
    loop {
        // Supersets must be pairwise disjoint across the whole bundle.
        let chosen: Vec<&Vec<u32>> =
            choice.iter().enumerate().map(|(i, &c)| &per_set[i][c]).collect();
        let mut seen: Vec<u32> = Vec::new();
        let mut ok = true;
        'overlap: for set in &chosen {
            for v in set.iter() {
                if seen.binary_search(v).is_ok() {
                    ok = false;
                    break 'overlap;
                }
            }
            for v in set.iter() {
                let pos = seen.binary_search(v).unwrap_err();
                seen.insert(pos, *v);
            }
        }
        if ok {
            let mut bundle = GuessBundle {
                a_sets: Vec::new(),
                b_sets: Vec::new(),
                x_sets: Vec::new(),
                y_sets: Vec::new(),
            };
            for (slot, &(i, is_b)) in family.iter().enumerate() {
                if is_b {
                    bundle.b_sets.push(indep[i].clone());
                    bundle.y_sets.push(per_set[slot][choice[slot]].clone());
                } else {
                    bundle.a_sets.push(indep[i].clone());
                    bundle.x_sets.push(per_set[slot][choice[slot]].clone());
                }
            }
            out.push(bundle);
        }
        // Odometer over superset choices.
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return;
            }
            choice[pos] += 1;
            if choice[pos] < per_set[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// All connected vertex sets X with `anchor` a subset of X, X inside the
/// component, and |X| at most `cap`. Standard connected-subgraph
/// enumeration (grow from the smallest anchor vertex with an exclusion set),
/// filtered to supersets of the full anchor.
fn connected_supersets(g: &Graph, comp: &[u32], anchor: &[u32], cap: usize) -> Vec<Vec<u32>> {
    if anchor.is_empty() || anchor.len() > cap {
        return Vec::new();
    }
    let root = anchor[0];
    let mut out = Vec::new();
    let mut current = vec![root];
    let mut forbidden: Vec<u32> = Vec::new();
    grow(g, comp, anchor, cap, &mut current, &mut forbidden, &mut out);
    out.sort();
    out.dedup();
    out
}

fn grow(
    g: &Graph,
    comp: &[u32],
    anchor: &[u32],
    cap: usize,
    current: &mut Vec<u32>,
    forbidden: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if anchor.iter().all(|v| current.contains(v)) {
        let mut set = current.clone();
        set.sort_unstable();
        out.push(set);
    }
    if current.len() == cap {
        return;
    }
    // Frontier: neighbors of current inside comp, not already used or banned.
    let mut frontier: Vec<u32> = Vec::new();
    for &v in current.iter() {
        for &w in g.neighbors(v) {
            if comp.binary_search(&w).is_ok()
                && !current.contains(&w)
                && !forbidden.contains(&w)
                && !frontier.contains(&w)
            {
                frontier.push(w);
            }
        }
    }
    frontier.sort_unstable();
    let mut banned_here = 0;
    for &w in &frontier {
        current.push(w);
        grow(g, comp, anchor, cap, current, forbidden, out);
        current.pop();
        forbidden.push(w);
        banned_here += 1;
    }
    for _ in 0..banned_here {
        forbidden.pop();
    }
}

// ---------------------------------------------------------------------------
// The constrained component cut
// ---------------------------------------------------------------------------

/// Forcing outcome for a component vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Forcing {
    Free,
    To(CutSide),
}

/// Applies the five forcing rules and runs a minimum cut over the free
/// vertices of the component. Returns the side assignment on the modulator
/// plus component and the crossing weight of edges incident to the
/// component, or an infeasibility error on contradictory forcing.
pub fn constrained_component_cut(
    g: &Graph,
    x_verts: &[u32],
    sigma: &[CutSide],
    component: &[u32],
    bundle: &GuessBundle,
    inst: &CutUncutInstance,
) -> Result<(BTreeMap<u32, CutSide>, u64)> {
    let mut force: BTreeMap<u32, Forcing> = component.iter().map(|&v| (v, Forcing::Free)).collect();
    let apply = |map: &mut BTreeMap<u32, Forcing>, v: u32, side: CutSide| -> Result<()> {
        match map.get_mut(&v) {
            Some(Forcing::Free) => {
                map.insert(v, Forcing::To(side));
                Ok(())
            }
            Some(Forcing::To(s)) if *s == side => Ok(()),
            Some(_) => Err(Error::Infeasible(format!("vertex {v} forced to both sides"))),
            None => Err(Error::Infeasible(format!("vertex {v} outside component"))),
        }
    };
    for &v in &inst.s_terminals {
        if component.binary_search(&v).is_ok() {
            apply(&mut force, v, CutSide::A)?;
        }
    }
    for &v in &inst.t_terminals {
        if component.binary_search(&v).is_ok() {
            apply(&mut force, v, CutSide::B)?;
        }
    }
    for xs in &bundle.x_sets {
        for &v in xs {
            apply(&mut force, v, CutSide::A)?;
        }
    }
    for ys in &bundle.y_sets {
        for &v in ys {
            apply(&mut force, v, CutSide::B)?;
        }
    }
    let in_structure: Vec<u32> = {
        let mut s: Vec<u32> =
            bundle.x_sets.iter().chain(&bundle.y_sets).flatten().copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    for &v in component {
        if in_structure.binary_search(&v).is_ok() {
            continue;
        }
        let touches = |sets: &[Vec<u32>]| -> usize {
            sets.iter().filter(|s| s.iter().any(|&u| g.has_edge(u, v))).count()
        };
        let a_touch = touches(&bundle.a_sets);
        let b_touch = touches(&bundle.b_sets);
        if a_touch >= 2 {
            apply(&mut force, v, CutSide::B)?;
        }
        if b_touch >= 2 {
            apply(&mut force, v, CutSide::A)?;
        }
        if a_touch == 0 {
            apply(&mut force, v, CutSide::B)?;
        }
        if b_touch == 0 {
            apply(&mut force, v, CutSide::A)?;
        }
    }

    // Flow graph over X and the component, with only component-incident
    // edges; X-internal crossings are fixed by sigma and accounted in
    // earlier stages.
    let mut verts: Vec<u32> = x_verts.to_vec();
    verts.extend_from_slice(component);
    verts.sort_unstable();
    let index = |v: u32| verts.binary_search(&v).unwrap();
    let n = verts.len();
    let mut h = Graph::new(n as usize + 2);
    let source = n as u32;
    let sink = n as u32 + 1;
    for (i, &v) in verts.iter().enumerate() {
        for &w in g.neighbors(v) {
            if w > v && verts.binary_search(&w).is_ok() {
                let incident_comp = component.binary_search(&v).is_ok()
                    || component.binary_search(&w).is_ok();
                if incident_comp {
                    h.add_weighted_edge(i as u32, index(w) as u32, g.weight(v, w));
                }
            }
        }
    }
    let mut forced_a: Vec<u32> = Vec::new();
    let mut forced_b: Vec<u32> = Vec::new();
    for (i, &x) in x_verts.iter().enumerate() {
        match sigma[i] {
            CutSide::A => forced_a.push(index(x) as u32),
            CutSide::B => forced_b.push(index(x) as u32),
        }
    }
    for (&v, f) in &force {
        match f {
            Forcing::To(CutSide::A) => forced_a.push(index(v) as u32),
            Forcing::To(CutSide::B) => forced_b.push(index(v) as u32),
            Forcing::Free => {}
        }
    }
    let (_, sides) = flow::max_flow_min_cut(&h, source, sink, &forced_a, &forced_b)?;
    let mut assignment: BTreeMap<u32, CutSide> = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        assignment.insert(
            v,
            if sides[i] == flow::Side::Source { CutSide::A } else { CutSide::B },
        );
    }
    // Crossing weight of component-incident edges, recomputed from the
    // assignment (sentinel arcs never cross, but recomputing is simplest).
    let mut weight = 0u64;
    for &v in component {
        for &w in g.neighbors(v) {
            if w > v && component.binary_search(&w).is_ok() {
                if assignment[&v] != assignment[&w] {
                    weight += g.weight(v, w);
                }
            } else if component.binary_search(&w).is_err() {
                // component-to-X edge (count each once from the component side)
                if let Ok(xi) = x_verts.binary_search(&w) {
                    if assignment[&v] != sigma[xi] {
                        weight += g.weight(v, w);
                    }
                }
            }
        }
    }
    Ok((assignment, weight))
}

// ---------------------------------------------------------------------------
// The dynamic program
// ---------------------------------------------------------------------------

/// Canonical DP state: side assignment of the modulator, one partition per
/// side in restricted-growth form over that side's vertices (ascending),
/// and a mark bit per block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct StateKey {
    sigma: u32,
    pa: Vec<u8>,
    pb: Vec<u8>,
    ma: u32,
    mb: u32,
}

#[derive(Debug, Clone)]
struct StateEntry {
    weight: u64,
    /// 0 = A, 1 = B, 2 = unassigned; ties in weight keep the
    /// lexicographically smallest vector.
    side: Vec<u8>,
}

fn better(candidate: &StateEntry, incumbent: &StateEntry) -> bool {
    candidate.weight < incumbent.weight
        || (candidate.weight == incumbent.weight && candidate.side < incumbent.side)
}

/// Solves the instance over the given decomposition. `steiner_cap` bounds
/// the connected supersets guessed per anchor set; `None` means the whole
/// component may be guessed, which keeps the search complete on arbitrary
/// (non-geometric) inputs.
pub fn solve_cutuncut(
    inst: &CutUncutInstance,
    decomp: &ModulatorDecomposition,
    steiner_cap: Option<usize>,
) -> Result<Option<CutSolution>> {
    let g = &inst.graph;
    let x: &[u32] = &decomp.modulator;
    let xn = x.len();
    if xn > 20 {
        return Err(Error::CapExceeded { size: xn, cap: 20, what: "solve_cutuncut modulator" });
    }
    let in_s = |v: u32| inst.s_terminals.binary_search(&v).is_ok();
    let in_t = |v: u32| inst.t_terminals.binary_search(&v).is_ok();

    let mut table = stage_zero(inst, x);

    // Absorb components one at a time.
    for (t, comp) in decomp.components.iter().enumerate() {
        if comp.len() > 25 {
            return Err(Error::CapExceeded {
                size: comp.len(),
                cap: 25,
                what: "solve_cutuncut component",
            });
        }
        let cap = steiner_cap.unwrap_or(comp.len()).max(1);
        let mut next: BTreeMap<StateKey, StateEntry> = BTreeMap::new();

        // Group states by sigma so per-(sigma, assignment) work runs once.
        let mut by_sigma: BTreeMap<u32, Vec<(StateKey, StateEntry)>> = BTreeMap::new();
        for (k, e) in table {
            by_sigma.entry(k.sigma).or_default().push((k, e));
        }

        for (sigma_bits, states) in by_sigma {
            let sigma: Vec<CutSide> = (0..xn)
                .map(|i| if sigma_bits >> i & 1 == 1 { CutSide::B } else { CutSide::A })
                .collect();

            let assignments: Vec<BTreeMap<u32, CutSide>> = if cap >= comp.len() {
                // Exhaustive component assignments (complete).
                let mut all = Vec::new();
                'mask: for mask in 0u64..(1u64 << comp.len()) {
                    let mut a = BTreeMap::new();
                    for (i, &v) in comp.iter().enumerate() {
                        let side = if mask >> (comp.len() - 1 - i) & 1 == 1 {
                            CutSide::B
                        } else {
                            CutSide::A
                        };
                        if (in_s(v) && side == CutSide::B) || (in_t(v) && side == CutSide::A) {
                            continue 'mask;
                        }
                        a.insert(v, side);
                    }
                    for (i, &xv) in x.iter().enumerate() {
                        a.insert(xv, sigma[i]);
                    }
                    all.push(a);
                }
                all
            } else {
                // Steiner-guess mode: each bundle yields one constrained cut.
                let mut all = Vec::new();
                let mut seen: std::collections::BTreeSet<Vec<u8>> = Default::default();
                for bundle in enumerate_steiner_guesses(comp, g, decomp.k, cap) {
                    match constrained_component_cut(g, x, &sigma, comp, &bundle, inst) {
                        Ok((assignment, _)) => {
                            let fingerprint: Vec<u8> = comp
                                .iter()
                                .map(|v| if assignment[v] == CutSide::B { 1 } else { 0 })
                                .collect();
                            if seen.insert(fingerprint) {
                                all.push(assignment);
                            }
                        }
                        Err(Error::Infeasible(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
                all
            };

            for assignment in &assignments {
                let Some(info) = transition_info(g, inst, x, &sigma, comp, assignment) else {
                    continue;
                };
                for (key, entry) in &states {
                    let Some((new_key, added)) = apply_transition(&info, key) else {
                        continue;
                    };
                    let mut side = entry.side.clone();
                    for (&v, &s) in assignment {
                        if comp.binary_search(&v).is_ok() {
                            side[v as usize] = if s == CutSide::B { 1 } else { 0 };
                        }
                    }
                    let cand = StateEntry { weight: entry.weight + added, side };
                    match next.get(&new_key) {
                        Some(old) if !better(&cand, old) => {}
                        _ => {
                            next.insert(new_key, cand);
                        }
                    }
                }
            }
        }
        table = next;
        let _ = t;
    }

    // Feasible final states: at most one marked block per side (zero means
    // the terminal set was sealed inside a finished component).
    let mut best: Option<StateEntry> = None;
    for (key, entry) in &table {
        if key.ma.count_ones() <= 1 && key.mb.count_ones() <= 1 {
            if best.as_ref().map_or(true, |b| better(entry, b)) {
                best = Some(entry.clone());
            }
        }
    }
    let Some(win) = best else {
        return Ok(None);
    };
    let side: Vec<CutSide> =
        win.side.iter().map(|&s| if s == 1 { CutSide::B } else { CutSide::A }).collect();
    let sol = CutSolution { side, weight: win.weight };
    debug_assert!(verify_cut_solution(inst, &sol));
    Ok(Some(sol))
}

/// Stage-0 table: one state per side assignment of the modulator that puts
/// S-terminals on A and T-terminals on B; partitions are the connectivity
/// classes of G[X] per side, marks flag blocks holding terminals, the value
/// is the crossing weight inside X.
fn stage_zero(inst: &CutUncutInstance, x: &[u32]) -> BTreeMap<StateKey, StateEntry> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let xn = x.len();
    let in_s = |v: u32| inst.s_terminals.binary_search(&v).is_ok();
    let in_t = |v: u32| inst.t_terminals.binary_search(&v).is_ok();
    let mut table: BTreeMap<StateKey, StateEntry> = BTreeMap::new();
    for sigma_bits in 0u32..(1 << xn) {
        let sigma: Vec<CutSide> = (0..xn)
            .map(|i| if sigma_bits >> i & 1 == 1 { CutSide::B } else { CutSide::A })
            .collect();
        if x.iter().enumerate().any(|(i, &v)| in_s(v) && sigma[i] == CutSide::B)
            || x.iter().enumerate().any(|(i, &v)| in_t(v) && sigma[i] == CutSide::A)
        {
            continue;
        }
        let mut side = vec![2u8; n];
        for (i, &v) in x.iter().enumerate() {
            side[v as usize] = if sigma[i] == CutSide::B { 1 } else { 0 };
        }
        let (pa, ma) = side_partition(g, x, &sigma, CutSide::A, &side, &inst.s_terminals);
        let (pb, mb) = side_partition(g, x, &sigma, CutSide::B, &side, &inst.t_terminals);
        let mut weight = 0u64;
        for (i, &u) in x.iter().enumerate() {
            for &w in g.neighbors(u) {
                if w > u {
                    if let Ok(j) = x.binary_search(&w) {
                        if sigma[i] != sigma[j] {
                            weight += g.weight(u, w);
                        }
                    }
                }
            }
        }
        table.insert(StateKey { sigma: sigma_bits, pa, pb, ma, mb }, StateEntry { weight, side });
    }
    table
}

/// Partition of one side of the modulator into connectivity classes of the
/// already-assigned region, in restricted-growth form, plus terminal marks.
fn side_partition(
    g: &Graph,
    x: &[u32],
    sigma: &[CutSide],
    side: CutSide,
    side_vec: &[u8],
    terminals: &[u32],
) -> (Vec<u8>, u32) {
    let members: Vec<u32> = x
        .iter()
        .enumerate()
        .filter(|(i, _)| sigma[*i] == side)
        .map(|(_, &v)| v)
        .collect();
    // Connectivity over all currently-assigned vertices of this side.
    let want = if side == CutSide::B { 1u8 } else { 0u8 };
    let region: Vec<u32> =
        (0..side_vec.len() as u32).filter(|&v| side_vec[v as usize] == want).collect();
    let (sub, ids) = g.induced(&region);
    let comps = connected_components(&sub, &[]);
    let comp_of = |v: u32| -> usize {
        let local = ids.binary_search(&v).unwrap() as u32;
        comps.iter().position(|c| c.binary_search(&local).is_ok()).unwrap()
    };
    let mut rgs: Vec<u8> = Vec::with_capacity(members.len());
    let mut block_of_comp: BTreeMap<usize, u8> = BTreeMap::new();
    let mut marks = 0u32;
    for &v in &members {
        let c = comp_of(v);
        let next_id = block_of_comp.len() as u8;
        let id = *block_of_comp.entry(c).or_insert(next_id);
        rgs.push(id);
    }
    for (&c, &id) in &block_of_comp {
        let has_terminal = comps[c]
            .iter()
            .any(|&local| terminals.binary_search(&ids[local as usize]).is_ok());
        if has_terminal {
            marks |= 1 << id;
        }
    }
    (rgs, marks)
}

/// Per-(sigma, component assignment) transition data, computed once and
/// applied to every state in the sigma group.
struct TransitionInfo {
    /// For each side: connectivity classes of the modulator's side members
    /// induced by the component assignment (restricted-growth over side
    /// members), and which classes pick up a terminal through the component.
    hat_a: Vec<u8>,
    hat_a_marks: u32,
    hat_b: Vec<u8>,
    hat_b_marks: u32,
    added_weight: u64,
}

/// Computes the connectivity the component adds between modulator vertices,
/// performing the seal check: a component-internal side region that
/// contains some but not all of a terminal set kills the assignment.
fn transition_info(
    g: &Graph,
    inst: &CutUncutInstance,
    x: &[u32],
    sigma: &[CutSide],
    comp: &[u32],
    assignment: &BTreeMap<u32, CutSide>,
) -> Option<TransitionInfo> {
    let mut verts: Vec<u32> = x.to_vec();
    verts.extend_from_slice(comp);
    verts.sort_unstable();

    let mut hat = Vec::new();
    let mut hat_marks = Vec::new();
    for side in [CutSide::A, CutSide::B] {
        let region: Vec<u32> =
            verts.iter().copied().filter(|v| assignment[v] == side).collect();
        let (sub, ids) = g.induced(&region);
        let comps = connected_components(&sub, &[]);
        let terminals = if side == CutSide::A { &inst.s_terminals } else { &inst.t_terminals };
        // Seal check on component-internal regions.
        for c in &comps {
            let touches_x = c.iter().any(|&l| x.binary_search(&ids[l as usize]).is_ok());
            if touches_x {
                continue;
            }
            let holds: Vec<u32> = c
                .iter()
                .map(|&l| ids[l as usize])
                .filter(|v| terminals.binary_search(v).is_ok())
                .collect();
            if !holds.is_empty() && holds.len() != terminals.len() {
                return None;
            }
        }
        let members: Vec<u32> = x
            .iter()
            .enumerate()
            .filter(|(i, _)| sigma[*i] == side)
            .map(|(_, &v)| v)
            .collect();
        let comp_of = |v: u32| -> usize {
            let local = ids.binary_search(&v).unwrap() as u32;
            comps.iter().position(|c| c.binary_search(&local).is_ok()).unwrap()
        };
        let mut rgs = Vec::with_capacity(members.len());
        let mut block_of: BTreeMap<usize, u8> = BTreeMap::new();
        for &v in &members {
            let c = comp_of(v);
            let next = block_of.len() as u8;
            rgs.push(*block_of.entry(c).or_insert(next));
        }
        let mut marks = 0u32;
        for (&c, &id) in &block_of {
            let has_terminal = comps[c].iter().any(|&l| {
                let v = ids[l as usize];
                comp.binary_search(&v).is_ok() && terminals.binary_search(&v).is_ok()
            });
            if has_terminal {
                marks |= 1 << id;
            }
        }
        hat.push(rgs);
        hat_marks.push(marks);
    }

    let mut added = 0u64;
    for &v in comp {
        for &w in g.neighbors(v) {
            let crossing = assignment.get(&w).map_or(false, |&s| s != assignment[&v]);
            if !crossing {
                continue;
            }
            if comp.binary_search(&w).is_ok() {
                if w > v {
                    added += g.weight(v, w);
                }
            } else if x.binary_search(&w).is_ok() {
                added += g.weight(v, w);
            }
        }
    }

    Some(TransitionInfo {
        hat_a: hat.remove(0),
        hat_a_marks: hat_marks[0],
        hat_b: hat.remove(0),
        hat_b_marks: hat_marks[1],
        added_weight: added,
    })
}

/// Joins a state's partitions with the component-induced connectivity and
/// recomputes marks. Returns the successor key and the added weight.
fn apply_transition(info: &TransitionInfo, key: &StateKey) -> Option<(StateKey, u64)> {
    let (pa, ma) = join_partition(&key.pa, key.ma, &info.hat_a, info.hat_a_marks)?;
    let (pb, mb) = join_partition(&key.pb, key.mb, &info.hat_b, info.hat_b_marks)?;
    Some((StateKey { sigma: key.sigma, pa, pb, ma, mb }, info.added_weight))
}

/// Transitive closure of two partitions (given in restricted-growth form
/// over the same element sequence), with marks carried over: a joined block
/// is marked iff it contains a marked block of either input.
fn join_partition(p1: &[u8], m1: u32, p2: &[u8], m2: u32) -> Option<(Vec<u8>, u32)> {
    if p1.len() != p2.len() {
        return None;
    }
    let n = p1.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = v;
        while parent[c] != r {
            let nx = parent[c];
            parent[c] = r;
            c = nx;
        }
        r
    }
    for p in [p1, p2] {
        let mut first_of: BTreeMap<u8, usize> = BTreeMap::new();
        for (i, &b) in p.iter().enumerate() {
            if let Some(&f) = first_of.get(&b) {
                let (ra, rb) = (find(&mut parent, f), find(&mut parent, i));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            } else {
                first_of.insert(b, i);
            }
        }
    }
    let mut rgs = vec![0u8; n];
    let mut id_of_root: BTreeMap<usize, u8> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let next = id_of_root.len() as u8;
        rgs[i] = *id_of_root.entry(r).or_insert(next);
    }
    let mut marks = 0u32;
    for i in 0..n {
        if m1 >> p1[i] & 1 == 1 || m2 >> p2[i] & 1 == 1 {
            marks |= 1 << rgs[i];
        }
    }
    Some((rgs, marks))
}
