//! Integer maximum flow / minimum cut on undirected weighted graphs, with
//! side forcing via sentinel capacities.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Which side of the returned cut a vertex landed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Sink,
}

/// Minimum s-t cut value and a side assignment.
///
/// Forcing is realized by attaching every forced vertex to the source (resp.
/// sink) with capacity `total_weight + 1`, which exceeds any finite cut, so
/// a minimum cut never separates a forced vertex from its terminal. The flow
/// algorithm is shortest-augmenting-path (BFS) on the residual network; the
/// source side of the cut is the set of residual-reachable vertices, which
/// makes the assignment deterministic.
pub fn max_flow_min_cut(
    g: &Graph,
    source: u32,
    sink: u32,
    forced_source: &[u32],
    forced_sink: &[u32],
) -> Result<(u64, Vec<Side>)> {
    assert!(source != sink, "source and sink must differ");
    for &v in forced_source {
        if forced_sink.contains(&v) {
            return Err(Error::Infeasible(format!("vertex {v} forced to both sides")));
        }
    }
    let sentinel = g.total_weight() + 1;
    let mut net = FlowNetwork::new(g.vertex_count());
    for (u, v) in g.edges() {
        net.add_undirected(u as usize, v as usize, g.weight(u, v));
    }
    for &v in forced_source {
        if v != source {
            net.add_undirected(source as usize, v as usize, sentinel);
        }
    }
    for &v in forced_sink {
        if v != sink {
            net.add_undirected(sink as usize, v as usize, sentinel);
        }
    }
    let value = net.max_flow(source as usize, sink as usize);
    let reach = net.residual_reachable(source as usize);
    let assignment =
        (0..g.vertex_count()).map(|v| if reach[v] { Side::Source } else { Side::Sink }).collect();
    Ok((value, assignment))
}

/// Residual network with paired directed arcs.
pub struct FlowNetwork {
    head: Vec<u32>,
    next: Vec<u32>,
    first: Vec<u32>,
    cap: Vec<u64>,
}

const NONE: u32 = u32::MAX;

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork { head: Vec::new(), next: Vec::new(), first: vec![NONE; n], cap: Vec::new() }
    }

    fn add_arc(&mut self, u: usize, v: usize, c: u64) {
        self.head.push(v as u32);
        self.cap.push(c);
        self.next.push(self.first[u]);
        self.first[u] = (self.head.len() - 1) as u32;
    }

    /// An undirected edge of capacity `c` is a pair of opposite arcs each of
    /// capacity `c`; pushing flow one way frees the other.
    pub fn add_undirected(&mut self, u: usize, v: usize, c: u64) {
        self.add_arc(u, v, c);
        self.add_arc(v, u, c);
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let n = self.first.len();
        let mut total = 0u64;
        loop {
            // BFS for a shortest augmenting path.
            let mut pred_arc = vec![NONE; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(s);
            'bfs: while let Some(u) = queue.pop_front() {
                let mut a = self.first[u];
                while a != NONE {
                    let v = self.head[a as usize] as usize;
                    if !seen[v] && self.cap[a as usize] > 0 {
                        seen[v] = true;
                        pred_arc[v] = a;
                        if v == t {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                    a = self.next[a as usize];
                }
            }
            if !seen[t] {
                return total;
            }
            // Find the bottleneck, then augment.
            let mut bottleneck = u64::MAX;
            let mut v = t;
            while v != s {
                let a = pred_arc[v] as usize;
                bottleneck = bottleneck.min(self.cap[a]);
                v = self.head[a ^ 1] as usize;
            }
            let mut v = t;
            while v != s {
                let a = pred_arc[v] as usize;
                self.cap[a] -= bottleneck;
                self.cap[a ^ 1] += bottleneck;
                v = self.head[a ^ 1] as usize;
            }
            total += bottleneck;
        }
    }

    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let n = self.first.len();
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let mut a = self.first[u];
            while a != NONE {
                let v = self.head[a as usize] as usize;
                if !seen[v] && self.cap[a as usize] > 0 {
                    seen[v] = true;
                    stack.push(v);
                }
                a = self.next[a as usize];
            }
        }
        seen
    }
}
