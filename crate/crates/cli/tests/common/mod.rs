#![allow(dead_code)]

//! Shared helpers for the integration and acceptance tests.

use fatgraph_core::geometry::{GeomObject, ObjectSet};
use fatgraph_core::graph::Graph;
use fatgraph_core::reduction::{pad_to_four, NAEFormula};
use fatgraph_core::rng::SplitMix64;
use std::path::Path;
use std::process::Command;

pub fn random_graph(n: usize, p: f64, rng: &mut SplitMix64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.chance(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Unit-diameter balls with centers uniform in a square sized for roughly
/// the requested expected degree.
pub fn unit_ball_instance(dim: usize, n: usize, density: f64, seed: u64) -> ObjectSet {
    let mut rng = SplitMix64::new(seed);
    let volume = match dim {
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        _ => panic!("unsupported dimension"),
    };
    let l = (((n.max(2) - 1) as f64) * volume / density).powf(1.0 / dim as f64);
    let objects = (0..n)
        .map(|i| {
            let center: Vec<f64> = (0..dim).map(|_| rng.next_f64() * l).collect();
            GeomObject::ball(format!("o{i}"), center, 0.5)
        })
        .collect();
    ObjectSet { dim, beta: 1.0, scale: 1.0, objects }
}

/// A random monotone formula over `n` variables with every occurrence count
/// at most 4 (pre-padding).
pub fn random_formula(n: usize, rng: &mut SplitMix64) -> NAEFormula {
    let mut counts = vec![0usize; n];
    let mut clauses = Vec::new();
    let target = n + rng.next_below(n as u64 / 2 + 1) as usize;
    let mut attempts = 0;
    while clauses.len() < target && attempts < 50 * target {
        attempts += 1;
        let c = [
            rng.next_below(n as u64) as usize,
            rng.next_below(n as u64) as usize,
            rng.next_below(n as u64) as usize,
        ];
        let mut local = counts.clone();
        let mut ok = true;
        for &v in &c {
            local[v] += 1;
            if local[v] > 4 {
                ok = false;
            }
        }
        if ok {
            counts = local;
            clauses.push(c);
        }
    }
    if clauses.is_empty() {
        clauses.push([0, 1 % n, 2 % n]);
    }
    NAEFormula { var_count: n, clauses }
}

/// The fixed seeded sample for the reduction-equivalence criterion: a few
/// crafted satisfiable/unsatisfiable formulas plus random ones, all over at
/// most 4 original variables, padded.
pub fn formula_sample(count: usize) -> Vec<NAEFormula> {
    let mut sample: Vec<NAEFormula> = Vec::new();
    let crafted = vec![
        // All-equal clause: unsatisfiable.
        NAEFormula { var_count: 1, clauses: vec![[0, 0, 0]] },
        // Pairwise difference forces a 2-coloring of a triangle: unsat.
        NAEFormula {
            var_count: 3,
            clauses: vec![[0, 0, 1], [0, 0, 2], [1, 1, 2], [1, 2, 2]],
        },
        // Same pattern on 4 variables, still unsat (odd cycle 0-1-2).
        NAEFormula {
            var_count: 4,
            clauses: vec![[0, 0, 1], [1, 1, 2], [2, 2, 0], [3, 3, 0]],
        },
        // Plain satisfiable formulas.
        NAEFormula { var_count: 3, clauses: vec![[0, 1, 2]; 4] },
        NAEFormula { var_count: 4, clauses: vec![[0, 1, 2], [1, 2, 3], [0, 2, 3], [0, 1, 3]] },
        NAEFormula { var_count: 2, clauses: vec![[0, 0, 1], [0, 1, 1]] },
    ];
    for f in crafted {
        sample.push(pad_to_four(&f));
    }
    let mut rng = SplitMix64::new(66);
    while sample.len() < count {
        let n = 2 + rng.next_below(3) as usize; // 2..=4 original variables
        sample.push(pad_to_four(&random_formula(n, &mut rng)));
    }
    sample.truncate(count);
    sample
}

/// Tiny formulas whose padded occurrence count stays within the ball
/// embedding budget (at most 6 padded variables).
pub fn tiny_formula_sample(count: usize) -> Vec<NAEFormula> {
    let mut rng = SplitMix64::new(77);
    let mut sample = Vec::new();
    while sample.len() < count {
        let n = 2 + rng.next_below(2) as usize; // 2..=3 original variables
        let padded = pad_to_four(&random_formula(n, &mut rng));
        if padded.var_count <= 6 {
            sample.push(padded);
        }
    }
    sample
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Runs the fatgraph binary, asserting a successful (0 or 1) exit.
pub fn run_bin(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_fatgraph"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    assert!(
        code == 0 || code == 1,
        "fatgraph {args:?} exited {code}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}
