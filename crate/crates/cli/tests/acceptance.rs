//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Every tolerance is pinned here; the suite is the exit gate for the
//! whole workspace.

mod common;

use common::*;
use fatgraph_core::cutuncut::{brute_cutuncut, solve_cutuncut, verify_cut_solution, zero_weight_cut};
use fatgraph_core::embed;
use fatgraph_core::geometry::{
    alpha_within_bound_unit, separator_size_within_bound, slab_separator,
};
use fatgraph_core::graph::{independence_number, independence_number_capped, Graph};
use fatgraph_core::modulator::{amod_exact, join_graph, verify_modulator, ModulatorDecomposition};
use fatgraph_core::reduction::{
    build_abstract_graph, pad_to_four, solve_nae_brute, ReductionVariant,
};
use fatgraph_core::rng::SplitMix64;
use fatgraph_core::subcoloring::{brute_subcoloring, solve_subcoloring, verify_subcoloring};
use std::time::Instant;

/// Criterion 1: on seeded random unit-ball instances (50 per dimension and
/// size, d in {2,3}, n in {50, 200, 1000, 2000}), the slab separator
/// satisfies |S| <= d * n^(1-1/(d+1)) and every component's centers span at
/// most beta * p per axis. Total runtime under 60 s.
#[test]
fn criterion_01_separator_bound() {
    let start = Instant::now();
    let mut runs = 0usize;
    for d in [2usize, 3] {
        for &n in &[50usize, 200, 1000, 2000] {
            for seed in 0..50u64 {
                let set = unit_ball_instance(d, n, 4.0, seed ^ (n as u64) << 8 ^ (d as u64) << 40);
                let sep = slab_separator(&set).expect("separator");
                assert!(
                    separator_size_within_bound(
                        sep.decomposition.modulator.len() as u64,
                        n as u64,
                        d as u32
                    ),
                    "d={d} n={n} seed={seed}: |S| = {}",
                    sep.decomposition.modulator.len()
                );
                let side_bound = sep.p as f64 * set.beta * set.scale;
                for comp in &sep.decomposition.components {
                    for axis in 0..d {
                        let mut lo = f64::INFINITY;
                        let mut hi = f64::NEG_INFINITY;
                        for &v in comp {
                            let c = set.objects[v as usize].center();
                            lo = lo.min(c[axis]);
                            hi = hi.max(c[axis]);
                        }
                        assert!(
                            hi - lo <= side_bound + 1e-9,
                            "d={d} n={n} seed={seed}: component spans {} > beta*p = {side_bound}",
                            hi - lo
                        );
                    }
                }
                runs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 1 took {elapsed:?}");
    println!("criterion 01 separator-bound: PASS ({runs} runs in {elapsed:?})");
}

/// Criterion 2: in the same runs, every component with at most 25 vertices
/// has exact alpha <= (2 beta d)^d * n^(1-1/(d+1)) (beta = 1, checked in
/// integers).
#[test]
fn criterion_02_component_alpha_bound() {
    let mut checked = 0usize;
    for d in [2usize, 3] {
        for &n in &[50usize, 200, 1000, 2000] {
            for seed in 0..50u64 {
                let set = unit_ball_instance(d, n, 4.0, seed ^ (n as u64) << 8 ^ (d as u64) << 40);
                let sep = slab_separator(&set).expect("separator");
                for comp in &sep.decomposition.components {
                    if comp.len() > 25 {
                        continue;
                    }
                    let (sub, _) = sep.decomposition.graph.induced(comp);
                    let alpha = independence_number_capped(&sub, 25).expect("within cap").size;
                    assert!(
                        alpha_within_bound_unit(alpha, n as u64, d as u32),
                        "d={d} n={n} seed={seed}: component alpha {alpha} violates bound"
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 02 component-alpha-bound: PASS ({checked} components)");
}

/// Criterion 3: for every labeled graph on 1..=5 vertices plus 200 random
/// graphs on 6-7 vertices, ceil(alpha/2) <= amod(G+G) <= alpha. Runtime
/// under 10 min.
#[test]
fn criterion_03_amod_sandwich() {
    let start = Instant::now();
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 1..=5usize {
        let pairs: Vec<(u32, u32)> =
            (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        for code in 0u32..(1 << pairs.len()) {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| code >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            graphs.push(Graph::from_edges(n, &edges));
        }
    }
    let exhaustive = graphs.len();
    let mut rng = SplitMix64::new(33);
    for _ in 0..200 {
        let n = 6 + rng.next_below(2) as usize;
        graphs.push(random_graph(n, 0.2 + 0.6 * rng.next_f64(), &mut rng));
    }
    for (i, g) in graphs.iter().enumerate() {
        let alpha = independence_number(g).expect("small graph").size;
        let (amod_join, _) = amod_exact(&join_graph(g)).expect("join within cap");
        assert!(
            amod_join >= alpha.div_ceil(2) && amod_join <= alpha,
            "graph {i}: alpha = {alpha}, amod(G+G) = {amod_join}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "criterion 3 took {elapsed:?}");
    println!(
        "criterion 03 amod-sandwich: PASS ({exhaustive} exhaustive + 200 random graphs in {elapsed:?})"
    );
}

/// Criterion 4: on 200 seeded random graphs (n <= 16) with random verified
/// modulators, the signature DP decision equals the brute-force decision
/// and every yes-witness verifies. Runtime under 5 min.
#[test]
fn criterion_04_subcoloring_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(44);
    let mut yes = 0usize;
    for trial in 0..200 {
        let n = 4 + rng.next_below(13) as usize;
        let g = random_graph(n, 0.15 + 0.5 * rng.next_f64(), &mut rng);
        let msize = rng.next_below(7) as usize;
        let mut pool: Vec<u32> = (0..n as u32).collect();
        rng.shuffle(&mut pool);
        pool.truncate(msize.min(n));
        let decomp =
            ModulatorDecomposition::from_modulator(g.clone(), pool).expect("small components");
        assert!(
            verify_modulator(&g, &decomp.modulator, decomp.k).expect("within cap"),
            "trial {trial}: modulator does not verify"
        );
        let dp = solve_subcoloring(&decomp).expect("dp");
        let brute = brute_subcoloring(&g).expect("within cap");
        assert_eq!(dp.is_some(), brute.is_some(), "trial {trial}: decision mismatch");
        if let Some(w) = dp {
            assert!(verify_subcoloring(&g, &w), "trial {trial}: witness invalid");
            yes += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "criterion 4 took {elapsed:?}");
    println!("criterion 04 subcoloring-oracle: PASS (200 graphs, {yes} yes, in {elapsed:?})");
}

/// Criterion 5: on 100 seeded random weighted graphs (n <= 12, weights
/// 0..9, |S|, |T| <= 2) with random verified modulators, the DP optimum
/// equals the brute-force optimum, including infeasibility. Runtime under
/// 10 min.
#[test]
fn criterion_05_cutuncut_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(55);
    let mut feasible = 0usize;
    for trial in 0..100 {
        let n = 4 + rng.next_below(9) as usize;
        let mut g = Graph::new(n);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.chance(0.45) {
                    g.add_weighted_edge(u, v, rng.next_below(10));
                }
            }
        }
        let mut pool: Vec<u32> = (0..n as u32).collect();
        rng.shuffle(&mut pool);
        let s_count = 1 + rng.next_below(2) as usize;
        let t_count = 1 + rng.next_below(2) as usize;
        let s: Vec<u32> = pool[..s_count].to_vec();
        let t: Vec<u32> = pool[s_count..s_count + t_count].to_vec();
        let inst = fatgraph_core::cutuncut::CutUncutInstance::new(g.clone(), s, t)
            .expect("valid instance");
        let msize = rng.next_below(6) as usize;
        let modulator: Vec<u32> =
            pool[s_count + t_count..(s_count + t_count + msize).min(n)].to_vec();
        let decomp =
            ModulatorDecomposition::from_modulator(g.clone(), modulator).expect("small");
        assert!(verify_modulator(&g, &decomp.modulator, decomp.k).expect("within cap"));
        let dp = solve_cutuncut(&inst, &decomp, None).expect("dp");
        let brute = brute_cutuncut(&inst).expect("within cap");
        match (&dp, &brute) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                assert_eq!(a.weight, b.weight, "trial {trial}: value mismatch");
                assert!(verify_cut_solution(&inst, a), "trial {trial}: witness invalid");
                feasible += 1;
            }
            _ => panic!(
                "trial {trial}: feasibility mismatch (dp {:?}, brute {:?})",
                dp.as_ref().map(|s| s.weight),
                brute.as_ref().map(|s| s.weight)
            ),
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "criterion 5 took {elapsed:?}");
    println!("criterion 05 cutuncut-oracle: PASS (100 instances, {feasible} feasible, in {elapsed:?})");
}

/// Criterion 6: for a fixed seeded sample of 60 padded formulas over at
/// most 4 original variables, NAE-satisfiability coincides with (a)
/// 2-subcolorability of the abstract d=2 graph and (b) feasibility of a
/// weight-0 cut in the cut-uncut variant. Runtime under 15 min.
#[test]
fn criterion_06_reduction_equivalence() {
    let start = Instant::now();
    let sample = formula_sample(60);
    assert_eq!(sample.len(), 60);
    let mut sat_count = 0usize;
    for (i, padded) in sample.iter().enumerate() {
        let nae = solve_nae_brute(padded).expect("within cap").is_some();
        sat_count += nae as usize;

        let sub = build_abstract_graph(padded, 2, ReductionVariant::Subcoloring).expect("build");
        let decided = fatgraph_core::subcoloring::decide_subcoloring(&sub.graph);
        assert_eq!(decided.is_some(), nae, "formula {i}: subcoloring equivalence");
        if let Some(w) = decided {
            assert!(verify_subcoloring(&sub.graph, &w), "formula {i}: witness invalid");
        }

        let cut = build_abstract_graph(padded, 2, ReductionVariant::CutUncut).expect("build");
        let inst = cut.instance().expect("instance");
        let zero = zero_weight_cut(&inst).expect("within cap");
        assert_eq!(zero.is_some(), nae, "formula {i}: cut-uncut equivalence");
        if let Some(sol) = zero {
            assert!(verify_cut_solution(&inst, &sol), "formula {i}: cut witness invalid");
            assert_eq!(sol.weight, 0);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 900, "criterion 6 took {elapsed:?}");
    println!(
        "criterion 06 reduction-equivalence: PASS (60 formulas, {sat_count} satisfiable, in {elapsed:?})"
    );
}

/// Criterion 7: for 20 tiny formulas (10 at d=2 as polygons, 10 at d=3 as
/// unit balls), the intersection graph of the embedding is label-isomorphic
/// to the abstract graph, and non-designed pairs clear the adjacency
/// threshold by at least 10 tolerances (enforced inside the embedders).
#[test]
fn criterion_07_embedding_fidelity() {
    let start = Instant::now();
    let sample = tiny_formula_sample(10);
    for (i, padded) in sample.iter().enumerate() {
        let variant = if i % 2 == 0 {
            ReductionVariant::Subcoloring
        } else {
            ReductionVariant::CutUncut
        };
        let out2 = build_abstract_graph(padded, 2, variant).expect("build d=2");
        let polygons = embed::embed_2d(&out2).expect("2d embedding with slack");
        assert!(
            embed::label_isomorphic(&polygons, &out2.graph).expect("fidelity check"),
            "formula {i}: polygon embedding not label-isomorphic"
        );

        let out3 = build_abstract_graph(padded, 3, variant).expect("build d=3");
        let balls = embed::embed_balls(&out3).expect("ball embedding with slack");
        assert!(
            embed::label_isomorphic(&balls, &out3.graph).expect("fidelity check"),
            "formula {i}: ball embedding not label-isomorphic"
        );
    }
    let elapsed = start.elapsed();
    println!("criterion 07 embedding-fidelity: PASS (20 embeddings in {elapsed:?})");
}

/// Criterion 8: the measured size ratio |V(G_{phi,d})| / (d^2 n^((d+1)/d))
/// stays at most 64 for padded variable counts across 4..=40 original
/// variables and d in {2, 3}.
#[test]
fn criterion_08_size_bound() {
    let mut rng = SplitMix64::new(88);
    let mut worst: f64 = 0.0;
    for n_orig in 4..=40usize {
        let f = random_formula(n_orig, &mut rng);
        let padded = pad_to_four(&f);
        let n = padded.var_count as f64;
        for d in [2usize, 3] {
            let out = build_abstract_graph(&padded, d, ReductionVariant::Subcoloring)
                .expect("build");
            let ratio = out.graph.vertex_count() as f64
                / ((d * d) as f64 * n.powf((d as f64 + 1.0) / d as f64));
            worst = worst.max(ratio);
            assert!(
                ratio <= 64.0,
                "n_orig={n_orig} (padded {n}), d={d}: ratio {ratio}"
            );
        }
    }
    println!("criterion 08 size-bound: PASS (worst ratio {worst:.2} <= 64)");
}

/// Criterion 9: the cylinder displays hold for m in {10, 50, 200} with
/// margin above 1e-9: same-occurrence path distances below 1 (touching
/// exactly at h = m) and cross-occurrence distances above 1, both for the
/// published expressions and for true chord distances.
#[test]
fn criterion_09_cylinder_inequalities() {
    for m in [10u64, 50, 200] {
        for h in 1..m {
            let sq = embed::paper_same_occ_sq(m, h);
            assert!(sq < 1.0 - 1e-9, "m={m} h={h}: same-occ display {sq}");
        }
        assert!((embed::paper_same_occ_sq(m, m) - 1.0).abs() < 1e-12);
        let lower = embed::paper_cross_occ_lower_sq(m);
        assert!(lower > 1.0 + 1e-9, "m={m}: cross display {lower}");

        // True chord distances at the same constants.
        let eps = 1.0 / (4.0 * (m as f64).powi(3));
        let epsp = std::f64::consts::PI / m as f64;
        for h in 1..m {
            let theta = -std::f64::consts::FRAC_PI_2 + epsp * h as f64;
            let same = embed::cylinder_sq_dist(theta, -1.0 + eps * m as f64, theta, eps * h as f64);
            assert!(same < 1.0 - 1e-9, "m={m} h={h}: true same-occ {same}");
            let theta2 = theta + epsp;
            let cross =
                embed::cylinder_sq_dist(theta2, -1.0 + eps * m as f64, theta, eps * h as f64);
            assert!(cross > 1.0 + 1e-9, "m={m} h={h}: true cross-occ {cross}");
        }
    }
    println!("criterion 09 cylinder-inequalities: PASS (m in {{10, 50, 200}})");
}

/// Criterion 10: every CLI command re-run with the same seed produces
/// byte-identical non-timing artifacts.
#[test]
fn criterion_10_cli_determinism() {
    let dir = tempfile::tempdir().expect("tempdir");
    let base = dir.path();
    let formula_path = base.join("formula.cnf");
    std::fs::write(&formula_path, "p nae 3 4\n1 2 3\n1 2 3\n1 2 3\n1 2 3\n").unwrap();

    let artifacts_of = |tag: &str| -> Vec<(String, Vec<u8>)> {
        let sub = base.join(tag);
        std::fs::create_dir_all(&sub).unwrap();
        let objects = sub.join("objects.json");
        run_bin(&["gen", "--n", "60", "--dim", "2", "--seed", "9", "-o", path_str(&objects)]);
        let graph = sub.join("graph.txt");
        run_bin(&["build-graph", path_str(&objects), "-o", path_str(&graph)]);
        let decomp = sub.join("decomp.json");
        run_bin(&["separator", path_str(&objects), "-o", path_str(&decomp)]);
        let prefix = sub.join("red");
        run_bin(&[
            "reduce",
            path_str(&formula_path),
            "--dim",
            "2",
            "--variant",
            "cutuncut",
            "--embed",
            "polygons",
            "-o",
            path_str(&prefix),
        ]);
        let csv = sub.join("bench.csv");
        run_bin(&[
            "bench",
            "--suite",
            "separator",
            "--sizes",
            "40,80",
            "--seeds",
            "1,2",
            "-o",
            path_str(&csv),
        ]);
        let mut named = Vec::new();
        for name in
            ["objects.json", "graph.txt", "decomp.json", "red.graph.txt", "red.inst.json", "red.objects.json"]
        {
            named.push((name.to_string(), std::fs::read(sub.join(name)).unwrap()));
        }
        // The bench CSV is compared with its wall-time column removed.
        let csv_text = std::fs::read_to_string(sub.join("bench.csv")).unwrap();
        let stripped: String = csv_text
            .lines()
            .map(|l| {
                let cols: Vec<&str> = l.split(',').collect();
                if cols.len() >= 8 {
                    [&cols[..6], &cols[7..]].concat().join(",")
                } else {
                    l.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n");
        named.push(("bench.csv".into(), stripped.into_bytes()));
        named
    };

    let first = artifacts_of("run1");
    let second = artifacts_of("run2");
    for ((name_a, bytes_a), (name_b, bytes_b)) in first.iter().zip(&second) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "artifact {name_a} differs between runs");
    }
    println!("criterion 10 cli-determinism: PASS ({} artifacts)", first.len());
}
