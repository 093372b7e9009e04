//! Seeded random instance generation.

use fatgraph_core::geometry::{GeomObject, ObjectSet};
use fatgraph_core::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    UnitBalls,
    FatBoxes,
}

/// Volume of the d-dimensional unit-radius ball.
fn unit_ball_volume(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    std::f64::consts::PI.powf(half) / gamma_half_integer(d)
}

/// Gamma(d/2 + 1) for integer d.
fn gamma_half_integer(d: usize) -> f64 {
    if d % 2 == 0 {
        // (d/2)!
        (1..=d / 2).map(|k| k as f64).product()
    } else {
        // Gamma(d/2 + 1) = (d/2)(d/2 - 1)...(1/2) * sqrt(pi)
        let mut v = std::f64::consts::PI.sqrt();
        let mut x = d as f64 / 2.0;
        while x > 0.0 {
            v *= x;
            x -= 1.0;
        }
        v
    }
}

/// `n` objects with centers uniform in a cube sized so the expected degree
/// is roughly `density`. Unit balls have radius 1/2; fat boxes have sides
/// in `[1, 2/sqrt(d)]`, which keeps the in/out ratio within beta = 2.
/// Fully determined by the seed.
pub fn gen_random_instance(
    kind: InstanceKind,
    dim: usize,
    n: usize,
    density: f64,
    seed: u64,
) -> ObjectSet {
    assert!(dim >= 2 && n >= 1);
    let mut rng = SplitMix64::new(seed);
    // Two unit-diameter balls intersect iff centers are within distance 1,
    // so the expected degree is about (n-1) * V_d(1) / L^d.
    let volume = unit_ball_volume(dim);
    let l = if n > 1 {
        (((n - 1) as f64) * volume / density.max(1e-9)).powf(1.0 / dim as f64)
    } else {
        1.0
    };
    let mut objects = Vec::with_capacity(n);
    for i in 0..n {
        let center: Vec<f64> = (0..dim).map(|_| rng.next_f64() * l).collect();
        match kind {
            InstanceKind::UnitBalls => {
                objects.push(GeomObject::ball(format!("o{i}"), center, 0.5));
            }
            InstanceKind::FatBoxes => {
                let max_half = 1.0 / (dim as f64).sqrt();
                let halves: Vec<f64> =
                    (0..dim).map(|_| 0.5 + rng.next_f64() * (max_half - 0.5)).collect();
                let mut vertices = Vec::with_capacity(1 << dim);
                for corner in 0u32..(1 << dim) {
                    let v: Vec<f64> = (0..dim)
                        .map(|k| {
                            center[k] + if corner >> k & 1 == 1 { halves[k] } else { -halves[k] }
                        })
                        .collect();
                    vertices.push(v);
                }
                let inradius = halves.iter().cloned().fold(f64::INFINITY, f64::min);
                objects.push(GeomObject::polytope(format!("o{i}"), vertices, inradius));
            }
        }
    }
    let beta = match kind {
        InstanceKind::UnitBalls => 1.0,
        InstanceKind::FatBoxes => 2.0,
    };
    ObjectSet { dim, beta, scale: 1.0, objects }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fatgraph_core::geometry::build_intersection_graph;

    #[test]
    fn generation_is_deterministic() {
        let a = gen_random_instance(InstanceKind::UnitBalls, 2, 50, 4.0, 7);
        let b = gen_random_instance(InstanceKind::UnitBalls, 2, 50, 4.0, 7);
        assert_eq!(a, b);
        let c = gen_random_instance(InstanceKind::UnitBalls, 2, 50, 4.0, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_sets_validate() {
        for kind in [InstanceKind::UnitBalls, InstanceKind::FatBoxes] {
            for d in [2, 3] {
                let set = gen_random_instance(kind, d, 40, 5.0, 11);
                set.validate().unwrap();
                build_intersection_graph(&set).unwrap();
            }
        }
    }

    #[test]
    fn density_calibration_within_thirty_percent() {
        for &density in &[4.0f64, 8.0] {
            let mut total_degree = 0.0;
            let mut total_n = 0.0;
            for seed in 0..20u64 {
                let set = gen_random_instance(InstanceKind::UnitBalls, 2, 800, density, seed);
                let g = build_intersection_graph(&set).unwrap();
                total_degree += 2.0 * g.edge_count() as f64;
                total_n += g.vertex_count() as f64;
            }
            let avg = total_degree / total_n;
            assert!(
                (avg - density).abs() <= 0.3 * density,
                "density {density}: measured {avg}"
            );
        }
    }
}
