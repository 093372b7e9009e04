//! Monotone NAE-3-SAT and its compilation into hard geometric instances.
//!
//! A formula in which every variable occurs exactly four times is embedded
//! into a d-dimensional grid: each clause gets a cell, each cell carries a
//! gadget over the occurrences appearing in its BFS subtree, propagation
//! edges glue gadgets along tree edges, and a check structure per clause
//! enforces the not-all-equal constraint. The subcoloring variant adds a
//! variable-consistency clique; the cut-uncut variant adds terminal pairs
//! and weights edges so that weight-0 cuts are exactly the consistent truth
//! assignments.

use crate::cutuncut::CutUncutInstance;
use crate::error::{Error, Result};
use crate::graph::Graph;
use std::collections::BTreeSet;

/// Cap for the exhaustive NAE solver.
pub const NAE_BRUTE_CAP: usize = 24;

/// A negation-free 3-CNF formula; variables are 0-based, clauses are
/// ordered triples of variable indices (repeats allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NAEFormula {
    pub var_count: usize,
    pub clauses: Vec<[usize; 3]>,
}

impl NAEFormula {
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.var_count];
        for c in &self.clauses {
            for &v in c {
                counts[v] += 1;
            }
        }
        counts
    }

    /// Every variable occurs exactly four times.
    pub fn is_exactly_four(&self) -> bool {
        self.occurrence_counts().iter().all(|&c| c == 4)
    }
}

/// Parses the `p nae <n> <m>` format and rejects negative literals and
/// variables with more than four occurrences.
pub fn parse_nae3sat_raw(text: &str) -> Result<NAEFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p nae") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("line {}: bad header", lineno + 1)));
            }
            let n = parts[0].parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
            let m = parts[1].parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(Error::Parse(format!("line {}: clause before header", lineno + 1)));
        };
        let lits: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?;
        if lits.len() != 3 {
            return Err(Error::Parse(format!("line {}: clause needs 3 literals", lineno + 1)));
        }
        let mut clause = [0usize; 3];
        for (slot, &lit) in clause.iter_mut().zip(&lits) {
            if lit < 0 {
                return Err(Error::NegativeLiteral { clause: clauses.len(), literal: lit });
            }
            if lit == 0 || lit as usize > n {
                return Err(Error::Parse(format!(
                    "line {}: literal {lit} out of range 1..={n}",
                    lineno + 1
                )));
            }
            *slot = lit as usize - 1;
        }
        clauses.push(clause);
    }
    let Some((n, m)) = header else {
        return Err(Error::Parse("missing `p nae` header".into()));
    };
    if clauses.len() != m {
        return Err(Error::Parse(format!("header says {m} clauses, found {}", clauses.len())));
    }
    let f = NAEFormula { var_count: n, clauses };
    if let Some((v, c)) = f.occurrence_counts().iter().enumerate().find(|(_, &c)| c > 4) {
        return Err(Error::Parse(format!("variable {} occurs {c} times (max 4)", v + 1)));
    }
    Ok(f)
}

/// Parses and pads so that every variable occurs exactly four times.
pub fn parse_nae3sat(text: &str) -> Result<NAEFormula> {
    Ok(pad_to_four(&parse_nae3sat_raw(text)?))
}

pub fn write_nae3sat(f: &NAEFormula) -> String {
    let mut out = format!("p nae {} {}\n", f.var_count, f.clauses.len());
    for c in &f.clauses {
        out.push_str(&format!("{} {} {}\n", c[0] + 1, c[1] + 1, c[2] + 1));
    }
    out
}

/// Pads a formula (every variable occurring at most four times) to exactly
/// four occurrences per variable, preserving NAE-satisfiability.
///
/// Missing occurrences go into a pool; repeatedly, a fresh variable pair
/// (a, b) absorbs up to four pool slots via clauses `(slot, a, b)`. Setting
/// a true and b false satisfies every padding clause regardless of the slot
/// variable, so the original formula's NAE status is untouched. Fresh pairs
/// used fewer than four times feed their own deficit back into the pool;
/// the pool provably drains.
pub fn pad_to_four(f: &NAEFormula) -> NAEFormula {
    let mut result = f.clone();
    let mut pool: Vec<usize> = Vec::new();
    for (v, &c) in f.occurrence_counts().iter().enumerate() {
        for _ in c..4 {
            pool.push(v);
        }
    }
    while !pool.is_empty() {
        let take = pool.len().min(4);
        let a = result.var_count;
        let b = result.var_count + 1;
        result.var_count += 2;
        for slot in pool.drain(..take).collect::<Vec<_>>() {
            result.clauses.push([slot, a, b]);
        }
        for _ in take..4 {
            pool.push(a);
            pool.push(b);
        }
    }
    debug_assert!(result.is_exactly_four());
    result
}

/// Exhaustive NAE assignment search; lexicographically first witness.
pub fn solve_nae_brute(f: &NAEFormula) -> Result<Option<Vec<bool>>> {
    let n = f.var_count;
    if n > NAE_BRUTE_CAP {
        return Err(Error::CapExceeded { size: n, cap: NAE_BRUTE_CAP, what: "solve_nae_brute" });
    }
    'outer: for mask in 0u64..(1u64 << n) {
        for c in &f.clauses {
            let vals: Vec<bool> = c.iter().map(|&v| mask >> v & 1 == 1).collect();
            if vals[0] == vals[1] && vals[1] == vals[2] {
                continue 'outer;
            }
        }
        return Ok(Some((0..n).map(|v| mask >> v & 1 == 1).collect()));
    }
    Ok(None)
}

pub fn nae_satisfied(f: &NAEFormula, assignment: &[bool]) -> bool {
    f.clauses.iter().all(|c| {
        let (a, b, d) = (assignment[c[0]], assignment[c[1]], assignment[c[2]]);
        !(a == b && b == d)
    })
}

// ---------------------------------------------------------------------------
// Literal order
// ---------------------------------------------------------------------------

/// Occurrence bookkeeping: occurrence ids are clause-major (`3c + position`),
/// h-values pack each variable's four occurrences consecutively
/// (`4 * var .. 4 * var + 4`), ordered by (clause, position) within a
/// variable.
#[derive(Debug, Clone)]
pub struct LiteralOrder {
    pub h_of_occ: Vec<usize>,
    pub occ_of_h: Vec<usize>,
}

impl LiteralOrder {
    pub fn var_of_h(&self, h: usize) -> usize {
        h / 4
    }

    /// Mean h of a variable's four occurrences.
    pub fn h_tilde(&self, var: usize) -> f64 {
        4.0 * var as f64 + 1.5
    }
}

pub fn literal_order(f: &NAEFormula) -> Result<LiteralOrder> {
    if !f.is_exactly_four() {
        return Err(Error::InvalidInput("literal order needs exactly-four occurrences".into()));
    }
    let total = 3 * f.clauses.len();
    let mut h_of_occ = vec![0usize; total];
    let mut occ_of_h = vec![0usize; total];
    let mut next_rank = vec![0usize; f.var_count];
    for (c, clause) in f.clauses.iter().enumerate() {
        for (pos, &v) in clause.iter().enumerate() {
            let occ = 3 * c + pos;
            let h = 4 * v + next_rank[v];
            next_rank[v] += 1;
            h_of_occ[occ] = h;
            occ_of_h[h] = occ;
        }
    }
    debug_assert!(next_rank.iter().all(|&r| r == 4));
    Ok(LiteralOrder { h_of_occ, occ_of_h })
}

// ---------------------------------------------------------------------------
// Grid BFS tree
// ---------------------------------------------------------------------------

/// A BFS tree of the d-dimensional grid graph on `[p]^d`, rooted at the
/// central cell, with clauses injected into non-central cells in BFS order
/// and per-cell occurrence sets accumulated over subtrees.
#[derive(Debug, Clone)]
pub struct GridTree {
    pub dim: usize,
    pub p: usize,
    /// Coordinates of each cell, indexed by linear id (row-major).
    pub coords: Vec<Vec<usize>>,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    /// BFS discovery order; the root comes first.
    pub bfs_order: Vec<usize>,
    pub cell_of_clause: Vec<usize>,
    pub clause_of_cell: Vec<Option<usize>>,
    /// Sorted h-values of occurrences in each cell's subtree (including the
    /// cell's own clause).
    pub g_sets: Vec<Vec<usize>>,
}

impl GridTree {
    pub fn cell_index(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.p + c)
    }
}

/// Smallest odd p with `p^d > n` and enough non-central cells for all
/// clauses (`p^d > m`). The paper picks the first condition only; the
/// second is needed because m exceeds n.
pub fn grid_side(n: usize, m: usize, dim: usize) -> usize {
    let mut p = 1usize;
    loop {
        let cells = (p as u128).pow(dim as u32);
        if cells > n as u128 && cells > m as u128 {
            return p;
        }
        p += 2;
    }
}

pub fn build_grid_tree(f: &NAEFormula, order: &LiteralOrder, dim: usize) -> Result<GridTree> {
    if dim < 2 {
        return Err(Error::InvalidInput("grid dimension must be at least 2".into()));
    }
    let n = f.var_count;
    let m = f.clauses.len();
    let p = grid_side(n, m, dim);
    let cell_count = p.pow(dim as u32);
    if m > cell_count - 1 {
        return Err(Error::GridTooSmall { cells: cell_count - 1, clauses: m });
    }

    let mut coords = vec![Vec::new(); cell_count];
    for (idx, coord) in coords.iter_mut().enumerate() {
        let mut rest = idx;
        let mut c = vec![0usize; dim];
        for k in (0..dim).rev() {
            c[k] = rest % p;
            rest /= p;
        }
        *c.first_mut().unwrap() += 0;
        *coord = c;
    }
    let center = vec![(p - 1) / 2; dim];
    let root = center.iter().fold(0, |acc, &c| acc * p + c);

    // BFS with a fixed neighbor order: per dimension ascending, minus then
    // plus.
    let mut parent: Vec<Option<usize>> = vec![None; cell_count];
    let mut seen = vec![false; cell_count];
    let mut bfs_order = Vec::with_capacity(cell_count);
    let mut queue = std::collections::VecDeque::new();
    seen[root] = true;
    queue.push_back(root);
    while let Some(t) = queue.pop_front() {
        bfs_order.push(t);
        for k in 0..dim {
            for delta in [-1i64, 1] {
                let ck = coords[t][k] as i64 + delta;
                if ck < 0 || ck >= p as i64 {
                    continue;
                }
                let mut nc = coords[t].clone();
                nc[k] = ck as usize;
                let nidx = nc.iter().fold(0, |acc, &c| acc * p + c);
                if !seen[nidx] {
                    seen[nidx] = true;
                    parent[nidx] = Some(t);
                    queue.push_back(nidx);
                }
            }
        }
    }

    let cell_of_clause: Vec<usize> = bfs_order[1..=m].to_vec();
    let mut clause_of_cell = vec![None; cell_count];
    for (j, &cell) in cell_of_clause.iter().enumerate() {
        clause_of_cell[cell] = Some(j);
    }

    // Subtree occurrence sets, accumulated in reverse BFS order.
    let mut g_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cell_count];
    for &t in bfs_order.iter().rev() {
        if let Some(j) = clause_of_cell[t] {
            for pos in 0..3 {
                g_sets[t].insert(order.h_of_occ[3 * j + pos]);
            }
        }
        if let Some(par) = parent[t] {
            let child_set: Vec<usize> = g_sets[t].iter().copied().collect();
            g_sets[par].extend(child_set);
        }
    }
    let g_sets: Vec<Vec<usize>> = g_sets.into_iter().map(|s| s.into_iter().collect()).collect();

    Ok(GridTree {
        dim,
        p,
        coords,
        root,
        parent,
        bfs_order,
        cell_of_clause,
        clause_of_cell,
        g_sets,
    })
}

// ---------------------------------------------------------------------------
// Skeleton and cell gadget
// ---------------------------------------------------------------------------

/// Skeleton nodes in canonical order: the main path (i, 1) for i in
/// 1..=2d+1, then the short paths (1..=4, j) for j in 2..=d, then the
/// clause node (1, d+1).
pub fn skeleton_nodes(d: usize) -> Vec<(usize, usize)> {
    let mut nodes = Vec::with_capacity(6 * d - 2);
    for i in 1..=2 * d + 1 {
        nodes.push((i, 1));
    }
    for j in 2..=d {
        for i in 1..=4 {
            nodes.push((i, j));
        }
    }
    nodes.push((1, d + 1));
    nodes
}

pub fn skeleton_edges(d: usize) -> Vec<((usize, usize), (usize, usize))> {
    let mut edges = Vec::new();
    for i in 1..2 * d + 1 {
        edges.push(((i, 1), (i + 1, 1)));
    }
    for j in 2..=d {
        edges.push(((1, j), (2, j)));
        edges.push(((2, j), (2 * j - 2, 1)));
        edges.push(((2 * j - 2, 1), (3, j)));
        edges.push(((3, j), (4, j)));
    }
    edges.push(((1, d + 1), (2 * d, 1)));
    edges
}

/// The skeleton as a labeled graph (`6d - 2` vertices).
pub fn build_skeleton(d: usize) -> Graph {
    assert!(d >= 2);
    let nodes = skeleton_nodes(d);
    let index = |n: (usize, usize)| nodes.iter().position(|&x| x == n).unwrap() as u32;
    let mut g = Graph::new(nodes.len());
    for (a, b) in skeleton_edges(d) {
        g.add_edge(index(a), index(b));
    }
    for (v, (i, j)) in nodes.iter().enumerate() {
        g.set_label(v as u32, format!("v{i},{j}"));
    }
    g
}

/// Blow-up of the skeleton over an occurrence set: each node becomes a
/// clique over `l`, each skeleton edge a per-occurrence matching.
pub fn build_cell_gadget(d: usize, l: &[usize]) -> Graph {
    assert!(d >= 2 && !l.is_empty());
    let nodes = skeleton_nodes(d);
    let node_index = |n: (usize, usize)| nodes.iter().position(|&x| x == n).unwrap();
    let w = l.len();
    let mut g = Graph::new(nodes.len() * w);
    let vid = |node: usize, li: usize| (node * w + li) as u32;
    for node in 0..nodes.len() {
        for a in 0..w {
            for b in a + 1..w {
                g.add_edge(vid(node, a), vid(node, b));
            }
        }
    }
    for (x, y) in skeleton_edges(d) {
        let (nx, ny) = (node_index(x), node_index(y));
        for li in 0..w {
            g.add_edge(vid(nx, li), vid(ny, li));
        }
    }
    for (node, (i, j)) in nodes.iter().enumerate() {
        for (li, &h) in l.iter().enumerate() {
            g.set_label(vid(node, li), format!("v{i},{j},h{h}"));
        }
    }
    g
}

// ---------------------------------------------------------------------------
// The full abstract graph
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionVariant {
    Subcoloring,
    CutUncut,
}

/// What each vertex of the generated graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    /// u_i of the variable-consistency clique (subcoloring variant).
    Consistency { var: usize },
    /// v_{i,j,l} of the gadget at `cell`; `h` identifies the occurrence.
    Gadget { cell: usize, i: usize, j: usize, h: usize },
    /// a_t^b of the clause check at `cell` (`b` in 0..3); `h` is the
    /// occurrence the check vertex is wired to.
    Check { cell: usize, b: usize, h: usize },
    /// b_t^1 / b_t^2 terminals (cut-uncut variant), `which` in {0, 1}.
    Terminal { cell: usize, which: usize },
}

impl VertexKind {
    /// The variable this vertex represents, if any.
    pub fn var(&self) -> Option<usize> {
        match *self {
            VertexKind::Consistency { var } => Some(var),
            VertexKind::Gadget { h, .. } | VertexKind::Check { h, .. } => Some(h / 4),
            VertexKind::Terminal { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            VertexKind::Consistency { var } => format!("u{var}"),
            VertexKind::Gadget { cell, i, j, h } => format!("v{i},{j},h{h}@c{cell}"),
            VertexKind::Check { cell, b, h } => format!("a{},h{h}@c{cell}", b + 1),
            VertexKind::Terminal { cell, which } => format!("b{}@c{cell}", which + 1),
        }
    }
}

/// The generated instance: abstract graph, vertex metadata, and (for the
/// cut-uncut variant) terminal sets.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub graph: Graph,
    pub kinds: Vec<VertexKind>,
    pub formula: NAEFormula,
    pub order: LiteralOrder,
    pub grid: GridTree,
    pub dim: usize,
    pub variant: ReductionVariant,
    pub s_terminals: Vec<u32>,
    pub t_terminals: Vec<u32>,
}

impl ReductionOutput {
    pub fn instance(&self) -> Result<CutUncutInstance> {
        if self.variant != ReductionVariant::CutUncut {
            return Err(Error::InvalidInput("not a cut-uncut reduction".into()));
        }
        CutUncutInstance::new(self.graph.clone(), self.s_terminals.clone(), self.t_terminals.clone())
    }
}

/// Builds the abstract graph for a padded formula.
pub fn build_abstract_graph(
    f: &NAEFormula,
    dim: usize,
    variant: ReductionVariant,
) -> Result<ReductionOutput> {
    if !f.is_exactly_four() {
        return Err(Error::InvalidInput(
            "build_abstract_graph needs a padded (exactly-four) formula".into(),
        ));
    }
    if dim < 2 {
        return Err(Error::InvalidInput("dimension must be at least 2".into()));
    }
    let order = literal_order(f)?;
    let grid = build_grid_tree(f, &order, dim)?;
    let n = f.var_count;

    // Vertex enumeration. The consistency clique comes first: the
    // backtracking deciders branch in id order, and fixing the per-variable
    // vertices first lets propagation color the rest of the fabric.
    let mut kinds: Vec<VertexKind> = Vec::new();
    if variant == ReductionVariant::Subcoloring {
        for var in 0..n {
            kinds.push(VertexKind::Consistency { var });
        }
    }
    let nodes = skeleton_nodes(dim);
    // (cell, skeleton node index, h) -> vertex id
    let mut gadget_id: std::collections::BTreeMap<(usize, usize, usize), u32> =
        std::collections::BTreeMap::new();
    for &cell in &grid.bfs_order {
        let l = &grid.g_sets[cell];
        if l.is_empty() {
            continue;
        }
        for (ni, &(i, j)) in nodes.iter().enumerate() {
            for &h in l {
                gadget_id.insert((cell, ni, h), kinds.len() as u32);
                kinds.push(VertexKind::Gadget { cell, i, j, h });
            }
        }
    }
    let mut check_ids: Vec<[u32; 3]> = Vec::new();
    let mut terminal_ids: Vec<[u32; 2]> = Vec::new();
    for (j, &cell) in grid.cell_of_clause.iter().enumerate() {
        let mut hs: Vec<usize> = (0..3).map(|pos| order.h_of_occ[3 * j + pos]).collect();
        hs.sort_unstable();
        let mut ids = [0u32; 3];
        for (b, &h) in hs.iter().enumerate() {
            ids[b] = kinds.len() as u32;
            kinds.push(VertexKind::Check { cell, b, h });
        }
        check_ids.push(ids);
        if variant == ReductionVariant::CutUncut {
            let b1 = kinds.len() as u32;
            kinds.push(VertexKind::Terminal { cell, which: 0 });
            let b2 = kinds.len() as u32;
            kinds.push(VertexKind::Terminal { cell, which: 1 });
            terminal_ids.push([b1, b2]);
        }
    }

    // Edges.
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    let add = |edges: &mut BTreeSet<(u32, u32)>, u: u32, v: u32| {
        debug_assert_ne!(u, v);
        edges.insert((u.min(v), u.max(v)));
    };
    let clause_node = nodes.iter().position(|&x| x == (1, dim + 1)).unwrap();
    if variant == ReductionVariant::Subcoloring {
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                add(&mut edges, a, b);
            }
        }
        // u_i to the four occurrence columns of x_i in the root gadget.
        for var in 0..n {
            for h in 4 * var..4 * var + 4 {
                let v = gadget_id[&(grid.root, clause_node, h)];
                add(&mut edges, var as u32, v);
            }
        }
    }
    // Per-cell gadget cliques and matchings.
    let sk_edges = skeleton_edges(dim);
    let node_index = |nd: (usize, usize)| nodes.iter().position(|&x| x == nd).unwrap();
    for &cell in &grid.bfs_order {
        let l = &grid.g_sets[cell];
        if l.is_empty() {
            continue;
        }
        for ni in 0..nodes.len() {
            for (ai, &ha) in l.iter().enumerate() {
                for &hb in &l[ai + 1..] {
                    add(&mut edges, gadget_id[&(cell, ni, ha)], gadget_id[&(cell, ni, hb)]);
                }
            }
        }
        for &(x, y) in &sk_edges {
            let (nx, ny) = (node_index(x), node_index(y));
            for &h in l {
                add(&mut edges, gadget_id[&(cell, nx, h)], gadget_id[&(cell, ny, h)]);
            }
        }
    }
    // Clause checks.
    for (j, &cell) in grid.cell_of_clause.iter().enumerate() {
        let ids = check_ids[j];
        add(&mut edges, ids[0], ids[1]);
        add(&mut edges, ids[1], ids[2]);
        if variant == ReductionVariant::CutUncut {
            add(&mut edges, ids[0], ids[2]);
            let [b1, b2] = terminal_ids[j];
            add(&mut edges, b1, b2);
            for &a in &ids {
                add(&mut edges, a, b1);
                add(&mut edges, a, b2);
            }
        }
        for (b, &a) in ids.iter().enumerate() {
            let h = match kinds[a as usize] {
                VertexKind::Check { h, .. } => h,
                _ => unreachable!(),
            };
            let _ = b;
            add(&mut edges, a, gadget_id[&(cell, clause_node, h)]);
        }
    }
    // Propagation edges along tree edges.
    for &cell in &grid.bfs_order {
        let Some(par) = grid.parent[cell] else {
            continue;
        };
        if grid.g_sets[cell].is_empty() {
            continue;
        }
        // Edge dimension (1-based) and orientation.
        let k = (0..dim)
            .find(|&k| grid.coords[cell][k] != grid.coords[par][k])
            .expect("tree edge differs in one coordinate");
        let dprime = k + 1;
        let (lower, upper) = if grid.coords[cell][k] < grid.coords[par][k] {
            (cell, par)
        } else {
            (par, cell)
        };
        let (lo_node, hi_node) = if dprime == 1 {
            (node_index((2 * dim + 1, 1)), node_index((1, 1)))
        } else {
            (node_index((4, dprime)), node_index((1, dprime)))
        };
        for &h in &grid.g_sets[cell] {
            add(&mut edges, gadget_id[&(lower, lo_node, h)], gadget_id[&(upper, hi_node, h)]);
        }
    }

    // Materialize, weighting the cut-uncut variant: weight 1 iff both
    // endpoints represent the same variable.
    let mut graph = Graph::new(kinds.len());
    for &(u, v) in &edges {
        match variant {
            ReductionVariant::Subcoloring => graph.add_edge(u, v),
            ReductionVariant::CutUncut => {
                let w = match (kinds[u as usize].var(), kinds[v as usize].var()) {
                    (Some(a), Some(b)) if a == b => 1,
                    _ => 0,
                };
                graph.add_weighted_edge(u, v, w);
            }
        }
    }
    for (v, kind) in kinds.iter().enumerate() {
        graph.set_label(v as u32, kind.label());
    }
    let (s_terminals, t_terminals) = match variant {
        ReductionVariant::Subcoloring => (Vec::new(), Vec::new()),
        ReductionVariant::CutUncut => (
            terminal_ids.iter().map(|ids| ids[0]).collect(),
            terminal_ids.iter().map(|ids| ids[1]).collect(),
        ),
    };
    Ok(ReductionOutput {
        graph,
        kinds,
        formula: f.clone(),
        order,
        grid,
        dim,
        variant,
        s_terminals,
        t_terminals,
    })
}

// ---------------------------------------------------------------------------
// Propagation check
// ---------------------------------------------------------------------------

/// Tests the alternation property on a clique-pair graph: `g` must consist
/// of two cliques (each with at least 3 vertices) joined by a matching of
/// at least 2 edges; returns true iff every matching edge is bichromatic
/// under the given total 2-subcoloring.
pub fn check_propagation(g: &Graph, coloring: &[Option<u8>]) -> Result<bool> {
    let n = g.vertex_count();
    if coloring.len() != n || coloring.iter().any(|c| c.is_none()) {
        return Err(Error::ShapeMismatch("coloring must be total".into()));
    }
    // The complement of (two cliques + matching) is complete bipartite minus
    // a matching; its 2-coloring recovers the cliques.
    let mut side = vec![u8::MAX; n];
    side[0] = 0;
    let mut queue = vec![0u32];
    while let Some(v) = queue.pop() {
        for w in 0..n as u32 {
            if w != v && !g.has_edge(v, w) {
                if side[w as usize] == u8::MAX {
                    side[w as usize] = 1 - side[v as usize];
                    queue.push(w);
                } else if side[w as usize] == side[v as usize] {
                    return Err(Error::ShapeMismatch(
                        "complement is not bipartite; not a clique pair".into(),
                    ));
                }
            }
        }
    }
    if side.iter().any(|&s| s == u8::MAX) {
        return Err(Error::ShapeMismatch("complement is disconnected".into()));
    }
    let a: Vec<u32> = (0..n as u32).filter(|&v| side[v as usize] == 0).collect();
    let b: Vec<u32> = (0..n as u32).filter(|&v| side[v as usize] == 1).collect();
    if a.len() < 3 || b.len() < 3 {
        return Err(Error::ShapeMismatch(format!(
            "clique sides have sizes {} and {}; need at least 3 each",
            a.len(),
            b.len()
        )));
    }
    for side_set in [&a, &b] {
        for (i, &u) in side_set.iter().enumerate() {
            for &v in &side_set[i + 1..] {
                if !g.has_edge(u, v) {
                    return Err(Error::ShapeMismatch("side is not a clique".into()));
                }
            }
        }
    }
    let mut matched_a = BTreeSet::new();
    let mut matched_b = BTreeSet::new();
    let mut matching = Vec::new();
    for &u in &a {
        for &v in &b {
            if g.has_edge(u, v) {
                if !matched_a.insert(u) || !matched_b.insert(v) {
                    return Err(Error::ShapeMismatch("cross edges are not a matching".into()));
                }
                matching.push((u, v));
            }
        }
    }
    if matching.len() < 2 {
        return Err(Error::ShapeMismatch("matching needs at least 2 edges".into()));
    }
    Ok(matching
        .iter()
        .all(|&(u, v)| coloring[u as usize] != coloring[v as usize]))
}
