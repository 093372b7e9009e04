//! Geometric realizations of the generated graphs: fat polygons in the
//! plane, unit balls in dimension three and up.
//!
//! Every embedding is validated before it is returned: designed contacts
//! (abstract edges) must read as intersections, and every other pair must
//! clear the adjacency threshold by at least ten tolerances, so the
//! intersection graph cannot depend on rounding.
//!
//! The ball placement follows the cylinder construction: the blow-up
//! dimension doubles as the occurrence-offset axis, and the last short path
//! lives on a unit cylinder with per-occurrence angular offsets. The
//! angular step and the offset unit are chosen so that every non-designed
//! pair keeps clearance; the published step of pi/m makes the short-path
//! balls sweep into neighboring cliques once the occurrence count grows,
//! so a flatter, explicitly validated pair of constants is used instead.

use crate::error::{Error, Result};
use crate::geometry::{self, GeomObject, ObjectSet, Point, GEOM_TOLERANCE};
use crate::graph::Graph;
use crate::reduction::{ReductionOutput, ReductionVariant, VertexKind};

/// Uniform scale applied to the planar construction so that the thinnest
/// polygon (the rightmost check triangle) still contains a ball of
/// diameter 1.
pub const LAMBDA_2D: f64 = 2.5;

/// Occurrence offset unit for ball embeddings.
pub const BALL_EPS: f64 = 2e-4;
/// Angular step per occurrence on the short-path cylinder.
pub const BALL_EPS_PRIME: f64 = 0.0205;
/// Largest admissible total angular sweep; beyond this the short-path
/// balls approach the neighboring main-path cliques.
pub const BALL_MAX_SWEEP: f64 = 0.475;

// ---------------------------------------------------------------------------
// Cylinder arithmetic (exposed for the inequality checks)
// ---------------------------------------------------------------------------

/// Squared distance between `(r=1, theta, z)` and `(r=1, theta', z')` in
/// cylindrical coordinates: `(z - z')^2 + 4 sin^2((theta - theta') / 2)`.
pub fn cylinder_sq_dist(theta1: f64, z1: f64, theta2: f64, z2: f64) -> f64 {
    let half = (theta1 - theta2) / 2.0;
    (z1 - z2) * (z1 - z2) + 4.0 * half.sin() * half.sin()
}

/// The published same-occurrence squared distance `(1 - eps (m - h))^2`
/// with `eps = 1/(4 m^3)`.
pub fn paper_same_occ_sq(m: u64, h: u64) -> f64 {
    let eps = 1.0 / (4.0 * (m as f64).powi(3));
    let d = 1.0 - eps * (m as f64 - h as f64);
    d * d
}

/// The published cross-occurrence lower bound
/// `(1 - eps m)^2 + 2 sin^2(eps' / 2)` with `eps = 1/(4 m^3)`,
/// `eps' = pi / m`.
pub fn paper_cross_occ_lower_sq(m: u64) -> f64 {
    let mf = m as f64;
    let eps = 1.0 / (4.0 * mf.powi(3));
    let eps_prime = std::f64::consts::PI / mf;
    let a = 1.0 - eps * mf;
    let s = (eps_prime / 2.0).sin();
    a * a + 2.0 * s * s
}

// ---------------------------------------------------------------------------
// 2D polygons
// ---------------------------------------------------------------------------

/// Embeds a d=2 reduction as similarly sized fat polygons.
pub fn embed_2d(out: &ReductionOutput) -> Result<ObjectSet> {
    if out.dim != 2 {
        return Err(Error::InvalidInput("embed_2d needs a 2-dimensional reduction".into()));
    }
    let total_occ = 4 * out.formula.var_count;
    let eps = 1.0 / (2.0 * total_occ as f64);
    let mut objects = Vec::with_capacity(out.kinds.len());
    for (v, kind) in out.kinds.iter().enumerate() {
        let cell = cell_of(kind, &out.grid.root);
        let (cx, cy) = {
            let c = &out.grid.coords[cell];
            (10.0 * c[0] as f64, 10.0 * c[1] as f64 + 5.0)
        };
        let local = local_polygon(kind, out, eps)?;
        let vertices: Vec<Point> = local
            .iter()
            .map(|&(x, y)| vec![LAMBDA_2D * (cx + x), LAMBDA_2D * (cy + y)])
            .collect();
        let inradius = polygon_inradius(&vertices);
        objects.push(GeomObject::polytope(
            out.graph.label(v as u32).unwrap_or_default().to_string(),
            vertices,
            inradius,
        ));
    }
    let beta = objects.iter().map(|o| o.outdiameter).fold(0.0f64, f64::max) + 1e-9;
    let set = ObjectSet { dim: 2, beta, scale: 1.0, objects };
    set.validate()?;
    validate_against_graph(&set, &out.graph)?;
    Ok(set)
}

fn cell_of(kind: &VertexKind, root: &usize) -> usize {
    match *kind {
        VertexKind::Consistency { .. } => *root,
        VertexKind::Gadget { cell, .. }
        | VertexKind::Check { cell, .. }
        | VertexKind::Terminal { cell, .. } => cell,
    }
}

/// Local polygon coordinates inside the 10 x 10 cell (x in [0, 10],
/// y in [-5, 5]).
fn local_polygon(
    kind: &VertexKind,
    out: &ReductionOutput,
    eps: f64,
) -> Result<Vec<(f64, f64)>> {
    let he = |h: usize| h as f64 * eps;
    Ok(match *kind {
        VertexKind::Gadget { i, j: 1, h, .. } => {
            let hh = he(h);
            if i % 2 == 1 {
                let x = (2 * (i - 1)) as f64; // 0, 4, 8
                vec![(x, hh), (x + 1.0, 1.0), (x + 2.0, hh), (x + 1.0, -1.0)]
            } else {
                let x = (4 * (i / 2) - 2) as f64; // 2, 6
                vec![(x, hh), (x + 1.0 + hh, 1.0), (x + 2.0, hh), (x + 1.0 + hh, -1.0)]
            }
        }
        VertexKind::Gadget { i, j: 2, h, .. } => {
            let hh = he(h);
            let y = [-5.0, -3.0, 1.0, 3.0][i - 1];
            vec![(3.0 + hh, y), (2.0, y + 1.0), (3.0 + hh, y + 2.0), (4.0, y + 1.0)]
        }
        VertexKind::Gadget { i: 1, j: 3, h, .. } => {
            let hh = he(h);
            vec![(7.0 + hh, -3.0), (6.0, -2.0), (7.0 + hh, -1.0), (8.0, -2.0)]
        }
        VertexKind::Gadget { .. } => {
            return Err(Error::InvalidInput("unexpected gadget node for d=2".into()))
        }
        VertexKind::Check { b, h, .. } => {
            let hh = he(h);
            match (out.variant, b) {
                // Path variant: left triangle, middle kite, right triangle.
                (ReductionVariant::Subcoloring, 0) => {
                    vec![(7.0 + hh, -3.0), (7.0 + hh, -5.0), (6.0, -4.0)]
                }
                (ReductionVariant::Subcoloring, 1) => {
                    vec![(7.0 + hh, -3.0), (8.0, -4.0), (7.0 + hh, -5.0), (6.0, -4.0)]
                }
                (ReductionVariant::Subcoloring, 2) => {
                    vec![(7.0 + hh, -3.0), (7.0 + hh, -5.0), (8.0, -4.0)]
                }
                // Clique variant: the first two become kites so all three
                // pairwise intersect.
                (ReductionVariant::CutUncut, 0) | (ReductionVariant::CutUncut, 1) => {
                    vec![(7.0 + hh, -3.0), (8.0, -4.0), (7.0 + hh, -5.0), (6.0, -4.0)]
                }
                (ReductionVariant::CutUncut, 2) => {
                    vec![(7.0 + hh, -3.0), (7.0 + hh, -5.0), (8.0, -4.0)]
                }
                _ => return Err(Error::InvalidInput("check index out of range".into())),
            }
        }
        VertexKind::Consistency { var } => {
            let lo = he(4 * var);
            let hi = he(4 * var + 3);
            vec![(7.0 + lo, -3.0), (7.0 + hi, -3.0), (8.0, -4.0), (7.0, -5.0), (6.0, -4.0)]
        }
        VertexKind::Terminal { which: 0, .. } => {
            vec![(7.0, -5.0), (8.0, -5.0), (8.0, -6.0), (7.0, -6.0)]
        }
        VertexKind::Terminal { .. } => {
            vec![(7.0, -5.0), (8.0, -5.0), (8.0, -6.1), (7.0, -6.1)]
        }
    })
}

/// Radius of a ball inscribed in a convex polygon (vertices in boundary
/// order): the exact incenter for triangles, otherwise the centroid's
/// distance to the edge lines, which is a valid inscribed radius for convex
/// shapes.
fn polygon_inradius(vertices: &[Point]) -> f64 {
    let k = vertices.len();
    let center: Point = if k == 3 {
        let side = |a: &Point, b: &Point| geometry::dist(a, b);
        let (a, b, c) = (&vertices[0], &vertices[1], &vertices[2]);
        let (la, lb, lc) = (side(b, c), side(a, c), side(a, b));
        let per = la + lb + lc;
        vec![
            (la * a[0] + lb * b[0] + lc * c[0]) / per,
            (la * a[1] + lb * b[1] + lc * c[1]) / per,
        ]
    } else {
        let mut c = vec![0.0, 0.0];
        for v in vertices {
            c[0] += v[0];
            c[1] += v[1];
        }
        c[0] /= k as f64;
        c[1] /= k as f64;
        c
    };
    let mut r = f64::INFINITY;
    for e in 0..k {
        let (p, q) = (&vertices[e], &vertices[(e + 1) % k]);
        let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
        let len = (dx * dx + dy * dy).sqrt();
        if len < 1e-12 {
            continue;
        }
        let d = ((center[0] - p[0]) * dy - (center[1] - p[1]) * dx).abs() / len;
        r = r.min(d);
    }
    r
}

// ---------------------------------------------------------------------------
// Unit balls, d >= 3
// ---------------------------------------------------------------------------

/// Embeds a d>=3 reduction as unit-diameter balls.
pub fn embed_balls(out: &ReductionOutput) -> Result<ObjectSet> {
    let d = out.dim;
    if d < 3 {
        return Err(Error::InvalidInput("embed_balls needs dimension at least 3".into()));
    }
    let total_occ = 4 * out.formula.var_count;
    let sweep = BALL_EPS_PRIME * (total_occ.saturating_sub(1)) as f64;
    if sweep > BALL_MAX_SWEEP {
        return Err(Error::InvalidInput(format!(
            "{total_occ} occurrences need an angular sweep of {sweep:.3} rad; \
             beyond {BALL_MAX_SWEEP} the short-path balls crowd the main path"
        )));
    }
    let eps = BALL_EPS;
    let epsp = BALL_EPS_PRIME;

    let mut pitch = vec![5.0; d];
    pitch[0] = (2 * d + 1) as f64;
    pitch[d - 1] = 3.0;

    let mut objects = Vec::with_capacity(out.kinds.len());
    for (v, kind) in out.kinds.iter().enumerate() {
        let cell = cell_of(kind, &out.grid.root);
        let type_two = out.grid.coords[cell].iter().sum::<usize>() % 2 == 1;
        let mut center = ball_center(kind, out, d, eps, epsp, type_two)?;
        for (k, c) in center.iter_mut().enumerate() {
            *c += out.grid.coords[cell][k] as f64 * pitch[k];
        }
        objects.push(GeomObject::ball(
            out.graph.label(v as u32).unwrap_or_default().to_string(),
            center,
            0.5,
        ));
    }
    let set = ObjectSet { dim: d, beta: 1.0, scale: 1.0, objects };
    set.validate()?;
    validate_against_graph(&set, &out.graph)?;
    Ok(set)
}

/// Local (within-cell) ball center for one vertex.
fn ball_center(
    kind: &VertexKind,
    out: &ReductionOutput,
    d: usize,
    eps: f64,
    epsp: f64,
    type_two: bool,
) -> Result<Point> {
    let z = |h: usize| h as f64 * eps;
    // Cylinder point around planar center (cx, cy) with height on axis d-1.
    let cyl = |cx: f64, cy: f64, theta: f64, height: f64| -> Point {
        let mut p = vec![0.0; d];
        p[0] = cx + theta.cos();
        p[1] = cy + theta.sin();
        p[d - 1] = height;
        p
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    Ok(match *kind {
        VertexKind::Gadget { i, j: 1, h, .. } => {
            let mut p = vec![0.0; d];
            p[0] = i as f64;
            p[d - 1] = z(h);
            p
        }
        VertexKind::Gadget { i, j, h, .. } if j >= 2 && j <= d - 1 => {
            let mut p = vec![0.0; d];
            p[0] = (2 * j - 2) as f64;
            p[j - 1] = [-2.0, -1.0, 1.0, 2.0][i - 1];
            p[d - 1] = z(h);
            p
        }
        VertexKind::Gadget { i, j, h, .. } if j == d => {
            // Short path on the cylinder around the attachment clique.
            let (base, sign) = if type_two { (half_pi, -1.0) } else { (-half_pi, 1.0) };
            let theta_low = base + epsp * h as f64; // v1, v2 family
            let theta_high = -base * 1.0 + epsp * h as f64; // v3, v4 family
            let _ = sign;
            let cx = (2 * d - 2) as f64;
            match i {
                1 => cyl(cx, 0.0, theta_low, -1.0 + z(h)),
                2 => cyl(cx, 0.0, theta_low, z(h)),
                3 => cyl(cx, 0.0, theta_high, z(h)),
                4 => cyl(cx, 0.0, theta_high, 1.0 + z(h)),
                _ => return Err(Error::InvalidInput("short path index out of range".into())),
            }
        }
        VertexKind::Gadget { j, h, .. } if j == d + 1 => {
            let mut p = vec![0.0; d];
            p[0] = (2 * d) as f64;
            p[1] = -1.0;
            p[d - 1] = z(h);
            p
        }
        VertexKind::Gadget { .. } => {
            return Err(Error::InvalidInput("unexpected gadget node".into()))
        }
        VertexKind::Check { b, h, .. } => {
            let pi = std::f64::consts::PI;
            let angles = match out.variant {
                // Path: a1-a2 and a2-a3 adjacent, a1-a3 apart.
                ReductionVariant::Subcoloring => [-0.3 * pi, -0.4 * pi, -0.7 * pi],
                // Clique: all three pairwise within distance 1.
                ReductionVariant::CutUncut => [-0.3 * pi, -0.4 * pi, -0.5 * pi],
            };
            cyl((2 * d) as f64, -1.0, angles[b], z(h))
        }
        VertexKind::Terminal { which, .. } => {
            let mut p = vec![0.0; d];
            p[0] = (2 * d) as f64;
            p[1] = -2.3;
            p[d - 1] = if which == 0 { 0.0 } else { 0.35 };
            p
        }
        VertexKind::Consistency { var } => {
            let mut p = vec![0.0; d];
            p[0] = (2 * d) as f64;
            let delta = 1.5 * eps;
            p[1] = -1.0 - (1.0 - delta * delta).sqrt();
            p[d - 1] = out.order.h_tilde(var) * eps;
            p
        }
    })
}

// ---------------------------------------------------------------------------
// Embedding validation and fidelity
// ---------------------------------------------------------------------------

/// Checks that the object set realizes exactly the abstract adjacency:
/// designed pairs intersect within tolerance, all other pairs clear the
/// threshold by at least ten tolerances.
pub fn validate_against_graph(set: &ObjectSet, abstract_graph: &Graph) -> Result<()> {
    let n = set.len();
    assert_eq!(n, abstract_graph.vertex_count());
    let centers: Vec<Point> = set.objects.iter().map(|o| o.center()).collect();
    let reach: Vec<f64> = set.objects.iter().map(|o| o.outdiameter / 2.0).collect();
    for i in 0..n {
        for j in i + 1..n {
            // Pairs with clearly separated enclosing balls cannot be near
            // the threshold; skip the exact test.
            let center_gap = geometry::dist(&centers[i], &centers[j]) - reach[i] - reach[j];
            if center_gap > 1.0 {
                debug_assert!(!abstract_graph.has_edge(i as u32, j as u32));
                continue;
            }
            let gap = geometry::object_gap(&set.objects[i], &set.objects[j])?;
            if abstract_graph.has_edge(i as u32, j as u32) {
                if gap > GEOM_TOLERANCE {
                    return Err(Error::InvalidInput(format!(
                        "designed contact {}-{} missing: gap {gap:e}",
                        i, j
                    )));
                }
            } else if gap <= 10.0 * GEOM_TOLERANCE {
                return Err(Error::SlackViolation {
                    pair: (i, j),
                    distance: gap,
                    threshold: 10.0 * GEOM_TOLERANCE,
                });
            }
        }
    }
    Ok(())
}

/// True iff the intersection graph of the set is label-isomorphic to the
/// abstract graph: the label bijection must exist and preserve adjacency
/// exactly.
pub fn label_isomorphic(set: &ObjectSet, abstract_graph: &Graph) -> Result<bool> {
    let built = geometry::build_intersection_graph(set)?;
    if built.vertex_count() != abstract_graph.vertex_count() {
        return Ok(false);
    }
    let n = built.vertex_count() as u32;
    let mut to_abstract = vec![u32::MAX; n as usize];
    for v in 0..n {
        let label = built.label(v).unwrap_or_default();
        let Some(target) = (0..n).find(|&u| abstract_graph.label(u) == Some(label)) else {
            return Ok(false);
        };
        to_abstract[v as usize] = target;
    }
    {
        let mut seen = to_abstract.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n as usize {
            return Ok(false);
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if built.has_edge(u, v)
                != abstract_graph.has_edge(to_abstract[u as usize], to_abstract[v as usize])
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
