//! Reference-element machinery: quadrature rules, Lagrange and bubble bases,
//! and H(div) elements (RT0, BDM1) mapped with the contravariant Piola
//! transform.
//!
//! Reference triangle: vertices `(0,0), (1,0), (0,1)`; local edge `k` runs
//! from vertex `k` to vertex `k+1 (mod 3)`. H(div) degrees of freedom are
//! flux moments against `{1, s - 1/2}` along each edge; the shifted second
//! moment makes the global coupling sign-diagonal: only the constant moment
//! flips sign when an element traverses an edge against its canonical
//! direction.

use std::sync::OnceLock;

use thiserror::Error;

use crate::mesh::Mesh;

#[derive(Debug, Error)]
pub enum ElementError {
    #[error("no triangle quadrature rule of degree {0} (table goes up to 6)")]
    TriangleDegree(usize),
    #[error("no segment quadrature rule of degree {0} (table goes up to 7)")]
    SegmentDegree(usize),
}

/// Quadrature rule on the reference triangle. Weights sum to 1/2.
#[derive(Debug, Clone)]
pub struct TriQuadrature {
    pub degree: usize,
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

/// Gauss rule on the unit segment [0, 1]. Weights sum to 1.
#[derive(Debug, Clone)]
pub struct SegQuadrature {
    pub degree: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Symmetric rule from barycentric orbits `(a, a, 1-2a)` etc.
fn orbit3(a: f64) -> [[f64; 2]; 3] {
    let b = 1.0 - 2.0 * a;
    // barycentric (b, a, a), (a, b, a), (a, a, b) -> (x, y) = (l1, l2)
    [[a, a], [b, a], [a, b]]
}

fn orbit6(a: f64, b: f64) -> [[f64; 2]; 6] {
    let c = 1.0 - a - b;
    [
        [b, c],
        [c, b],
        [a, c],
        [c, a],
        [a, b],
        [b, a],
    ]
}

pub fn triangle_rule(degree: usize) -> Result<TriQuadrature, ElementError> {
    let (points, weights): (Vec<[f64; 2]>, Vec<f64>) = match degree {
        0 | 1 => (vec![[1.0 / 3.0, 1.0 / 3.0]], vec![1.0]),
        2 => (
            orbit3(1.0 / 6.0).to_vec(),
            vec![1.0 / 3.0; 3],
        ),
        3 | 4 => {
            let mut pts = orbit3(0.445_948_490_915_965).to_vec();
            pts.extend(orbit3(0.091_576_213_509_771));
            let mut w = vec![0.223_381_589_678_011; 3];
            w.extend(vec![0.109_951_743_655_322; 3]);
            (pts, w)
        }
        5 => {
            let mut pts = vec![[1.0 / 3.0, 1.0 / 3.0]];
            pts.extend(orbit3(0.470_142_064_105_115));
            pts.extend(orbit3(0.101_286_507_323_456));
            let mut w = vec![0.225];
            w.extend(vec![0.132_394_152_788_506; 3]);
            w.extend(vec![0.125_939_180_544_827; 3]);
            (pts, w)
        }
        6 => {
            let mut pts = orbit3(0.249_286_745_170_910).to_vec();
            pts.extend(orbit3(0.063_089_014_491_502));
            pts.extend(orbit6(0.053_145_049_844_816, 0.310_352_451_033_785).to_vec());
            let mut w = vec![0.116_786_275_726_379; 3];
            w.extend(vec![0.050_844_906_370_207; 3]);
            w.extend(vec![0.082_851_075_618_374; 6]);
            (pts, w)
        }
        d => return Err(ElementError::TriangleDegree(d)),
    };
    // Tabulated weights are normalized to unit total; the reference triangle
    // has measure 1/2.
    let weights = weights.into_iter().map(|w| 0.5 * w).collect();
    Ok(TriQuadrature {
        degree,
        points,
        weights,
    })
}

pub fn segment_rule(degree: usize) -> Result<SegQuadrature, ElementError> {
    // Gauss-Legendre on [-1, 1], mapped to [0, 1].
    let (xs, ws): (Vec<f64>, Vec<f64>) = match degree {
        0 | 1 => (vec![0.0], vec![2.0]),
        2 | 3 => {
            let a = 1.0 / 3f64.sqrt();
            (vec![-a, a], vec![1.0, 1.0])
        }
        4 | 5 => {
            let a = (3.0f64 / 5.0).sqrt();
            (vec![-a, 0.0, a], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        6 | 7 => (
            vec![
                -0.861_136_311_594_052_6,
                -0.339_981_043_584_856_3,
                0.339_981_043_584_856_3,
                0.861_136_311_594_052_6,
            ],
            vec![
                0.347_854_845_137_453_9,
                0.652_145_154_862_546_1,
                0.652_145_154_862_546_1,
                0.347_854_845_137_453_9,
            ],
        ),
        d => return Err(ElementError::SegmentDegree(d)),
    };
    Ok(SegQuadrature {
        degree,
        points: xs.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: ws.iter().map(|w| 0.5 * w).collect(),
    })
}

/// Affine map `x = B x_ref + b` of a triangle, with the data needed to push
/// gradients and H(div) fields to the physical element.
#[derive(Debug, Clone, Copy)]
pub struct GeometryMap {
    pub b: [[f64; 2]; 2],
    pub origin: [f64; 2],
    pub det: f64,
    /// Inverse transpose of `B`, for gradients.
    pub inv_t: [[f64; 2]; 2],
}

impl GeometryMap {
    pub fn new(p0: [f64; 2], p1: [f64; 2], p2: [f64; 2]) -> Self {
        let b = [
            [p1[0] - p0[0], p2[0] - p0[0]],
            [p1[1] - p0[1], p2[1] - p0[1]],
        ];
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        debug_assert!(det > 0.0, "triangle must be counter-clockwise");
        let inv_t = [
            [b[1][1] / det, -b[1][0] / det],
            [-b[0][1] / det, b[0][0] / det],
        ];
        GeometryMap {
            b,
            origin: p0,
            det,
            inv_t,
        }
    }

    pub fn from_triangle(mesh: &Mesh, t: usize) -> Self {
        let [a, b, c] = mesh.triangles[t];
        Self::new(mesh.vertices[a], mesh.vertices[b], mesh.vertices[c])
    }

    pub fn to_physical(&self, r: [f64; 2]) -> [f64; 2] {
        [
            self.origin[0] + self.b[0][0] * r[0] + self.b[0][1] * r[1],
            self.origin[1] + self.b[1][0] * r[0] + self.b[1][1] * r[1],
        ]
    }

    /// Physical gradient from a reference gradient: `B^{-T} g`.
    pub fn push_gradient(&self, g: [f64; 2]) -> [f64; 2] {
        [
            self.inv_t[0][0] * g[0] + self.inv_t[0][1] * g[1],
            self.inv_t[1][0] * g[0] + self.inv_t[1][1] * g[1],
        ]
    }

    /// Contravariant Piola transform of a reference vector value.
    pub fn piola(&self, v: [f64; 2]) -> [f64; 2] {
        [
            (self.b[0][0] * v[0] + self.b[0][1] * v[1]) / self.det,
            (self.b[1][0] * v[0] + self.b[1][1] * v[1]) / self.det,
        ]
    }
}

/// Scalar Lagrange-type reference bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagrangeKind {
    P0,
    /// Linear basis, also used element-wise for the discontinuous variant.
    P1,
    /// P1 plus the cubic bubble `27 l0 l1 l2`, normalized to 1 at the centroid.
    P1Bubble,
}

impl LagrangeKind {
    pub fn n_basis(&self) -> usize {
        match self {
            LagrangeKind::P0 => 1,
            LagrangeKind::P1 => 3,
            LagrangeKind::P1Bubble => 4,
        }
    }
}

/// Values and reference gradients of a scalar Lagrange basis at `points`.
/// Returned as `values[basis][point]`, `grads[basis][point]`.
pub fn eval_lagrange(
    kind: LagrangeKind,
    points: &[[f64; 2]],
) -> (Vec<Vec<f64>>, Vec<Vec<[f64; 2]>>) {
    let n = kind.n_basis();
    let mut values = vec![vec![0.0; points.len()]; n];
    let mut grads = vec![vec![[0.0; 2]; points.len()]; n];
    for (q, &[x, y]) in points.iter().enumerate() {
        let l = [1.0 - x - y, x, y];
        let dl = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
        match kind {
            LagrangeKind::P0 => {
                values[0][q] = 1.0;
            }
            LagrangeKind::P1 => {
                for i in 0..3 {
                    values[i][q] = l[i];
                    grads[i][q] = dl[i];
                }
            }
            LagrangeKind::P1Bubble => {
                for i in 0..3 {
                    values[i][q] = l[i];
                    grads[i][q] = dl[i];
                }
                values[3][q] = 27.0 * l[0] * l[1] * l[2];
                for c in 0..2 {
                    grads[3][q][c] = 27.0
                        * (dl[0][c] * l[1] * l[2] + l[0] * dl[1][c] * l[2] + l[0] * l[1] * dl[2][c]);
                }
            }
        }
    }
    (values, grads)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HdivKind {
    Rt0,
    Bdm1,
}

impl HdivKind {
    pub fn n_basis(&self) -> usize {
        match self {
            HdivKind::Rt0 => 3,
            HdivKind::Bdm1 => 6,
        }
    }

    /// Moments per edge.
    pub fn moments(&self) -> usize {
        match self {
            HdivKind::Rt0 => 1,
            HdivKind::Bdm1 => 2,
        }
    }
}

// Vector monomial bases used to construct the dual bases:
// RT0 spans {(1,0), (0,1), (x,y)}; BDM1 spans full vector P1.
const RT0_DIM: usize = 3;
const BDM1_DIM: usize = 6;

fn rt0_monomial(i: usize, p: [f64; 2]) -> ([f64; 2], f64) {
    match i {
        0 => ([1.0, 0.0], 0.0),
        1 => ([0.0, 1.0], 0.0),
        2 => ([p[0], p[1]], 2.0),
        _ => unreachable!(),
    }
}

fn bdm1_monomial(i: usize, p: [f64; 2]) -> ([f64; 2], f64) {
    match i {
        0 => ([1.0, 0.0], 0.0),
        1 => ([p[0], 0.0], 1.0),
        2 => ([p[1], 0.0], 0.0),
        3 => ([0.0, 1.0], 0.0),
        4 => ([0.0, p[0]], 0.0),
        5 => ([0.0, p[1]], 1.0),
        _ => unreachable!(),
    }
}

/// Reference edge `k`: start vertex, edge vector, and the outward normal
/// scaled by edge length (the rotation of the edge vector by -90 degrees).
fn ref_edge(k: usize) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let verts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let p = verts[k];
    let q = verts[(k + 1) % 3];
    let d = [q[0] - p[0], q[1] - p[1]];
    (p, d, [d[1], -d[0]])
}

/// Flux moments of a reference monomial along local edge `k`:
/// `int_0^1 v(p + s d) . n_scaled q_m(s) ds` with `q_0 = 1`, `q_1 = s - 1/2`.
fn edge_moment(
    monomial: impl Fn([f64; 2]) -> [f64; 2],
    k: usize,
    moment: usize,
) -> f64 {
    let (p, d, n) = ref_edge(k);
    // Degree-3 Gauss is exact: the integrand is at most quadratic in s.
    let rule = segment_rule(3).unwrap();
    let mut acc = 0.0;
    for (s, w) in rule.points.iter().zip(&rule.weights) {
        let x = [p[0] + s * d[0], p[1] + s * d[1]];
        let v = monomial(x);
        let q = if moment == 0 { 1.0 } else { s - 0.5 };
        acc += w * q * (v[0] * n[0] + v[1] * n[1]);
    }
    acc
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut rhs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    // Gaussian elimination with partial pivoting; rhs holds columns.
    let n = a.len();
    let m = rhs.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        for r in rhs.iter_mut() {
            r.swap(col, piv);
        }
        let p = a[col][col];
        assert!(p.abs() > 1e-14, "singular duality system");
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col] / p;
            for j in 0..n {
                a[row][j] -= f * a[col][j];
            }
            for r in rhs.iter_mut() {
                r[row] -= f * r[col];
            }
        }
    }
    for r in rhs.iter_mut() {
        for (row, rv) in r.iter_mut().enumerate() {
            *rv /= a[row][row];
        }
    }
    rhs
}

/// Coefficients of the dual basis in the monomial basis:
/// `coeff[dof][monomial]` with dof order (edge 0 moments.., edge 1.., edge 2..).
fn dual_coefficients(kind: HdivKind) -> &'static Vec<Vec<f64>> {
    static RT0: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    static BDM1: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    let build = move || {
        let (dim, moments) = match kind {
            HdivKind::Rt0 => (RT0_DIM, 1),
            HdivKind::Bdm1 => (BDM1_DIM, 2),
        };
        let eval = |i: usize, p: [f64; 2]| match kind {
            HdivKind::Rt0 => rt0_monomial(i, p).0,
            HdivKind::Bdm1 => bdm1_monomial(i, p).0,
        };
        // a[dof][monomial] = l_dof(monomial)
        let mut a = vec![vec![0.0; dim]; dim];
        for k in 0..3 {
            for m in 0..moments {
                for j in 0..dim {
                    a[k * moments + m][j] = edge_moment(|p| eval(j, p), k, m);
                }
            }
        }
        let rhs: Vec<Vec<f64>> = (0..dim)
            .map(|d| (0..dim).map(|i| if i == d { 1.0 } else { 0.0 }).collect())
            .collect();
        solve_dense(a, rhs)
    };
    match kind {
        HdivKind::Rt0 => RT0.get_or_init(build),
        HdivKind::Bdm1 => BDM1.get_or_init(build),
    }
}

/// Physical values and divergences of the H(div) basis at reference
/// `points`, pushed through the Piola transform of `map`.
/// Local dof order: `(edge k, moment m)` flattened as `k * moments + m`.
/// Returned as `(values[dof][point], divs[dof])`; divergences of RT0 and
/// BDM1 fields are constant per element.
pub fn eval_hdiv(
    kind: HdivKind,
    map: &GeometryMap,
    points: &[[f64; 2]],
) -> (Vec<Vec<[f64; 2]>>, Vec<f64>) {
    let coeff = dual_coefficients(kind);
    let dim = kind.n_basis();
    let monomial = |i: usize, p: [f64; 2]| match kind {
        HdivKind::Rt0 => rt0_monomial(i, p),
        HdivKind::Bdm1 => bdm1_monomial(i, p),
    };
    let mut values = vec![vec![[0.0; 2]; points.len()]; dim];
    let mut divs = vec![0.0; dim];
    for dof in 0..dim {
        let mut div_ref = 0.0;
        for i in 0..dim {
            div_ref += coeff[dof][i] * monomial(i, [0.0, 0.0]).1;
        }
        divs[dof] = div_ref / map.det;
        for (q, &p) in points.iter().enumerate() {
            let mut v = [0.0, 0.0];
            for i in 0..dim {
                let (m, _) = monomial(i, p);
                v[0] += coeff[dof][i] * m[0];
                v[1] += coeff[dof][i] * m[1];
            }
            values[dof][q] = map.piola(v);
        }
    }
    (values, divs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exact integral of `x^a y^b` over the reference triangle.
    fn tri_monomial_integral(a: u32, b: u32) -> f64 {
        fn fact(n: u32) -> f64 {
            (1..=n).map(|k| k as f64).product::<f64>().max(1.0)
        }
        fact(a) * fact(b) / fact(a + b + 2)
    }

    #[test]
    fn triangle_rules_are_exact() {
        for degree in 0..=6 {
            let rule = triangle_rule(degree).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 0.5).abs() < 1e-14, "degree {degree} weight sum");
            for a in 0..=degree as u32 {
                for b in 0..=(degree as u32 - a) {
                    let num: f64 = rule
                        .points
                        .iter()
                        .zip(&rule.weights)
                        .map(|(&[x, y], w)| w * x.powi(a as i32) * y.powi(b as i32))
                        .sum();
                    let exact = tri_monomial_integral(a, b);
                    assert!(
                        (num - exact).abs() < 1e-14 * exact.abs().max(1.0),
                        "degree {degree}, monomial x^{a} y^{b}: {num} vs {exact}"
                    );
                }
            }
        }
        assert!(triangle_rule(7).is_err());
    }

    #[test]
    fn centroid_rule() {
        let rule = triangle_rule(1).unwrap();
        assert_eq!(rule.points.len(), 1);
        assert!((rule.weights[0] - 0.5).abs() < 1e-15);
        // Symbolic oracle: int x^2 over the reference triangle = 1/12,
        // needs the degree-2 rule.
        let rule2 = triangle_rule(2).unwrap();
        let num: f64 = rule2
            .points
            .iter()
            .zip(&rule2.weights)
            .map(|(&[x, _], w)| w * x * x)
            .sum();
        assert!((num - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn segment_rules_are_exact() {
        for degree in 0..=7 {
            let rule = segment_rule(degree).unwrap();
            for p in 0..=degree as u32 {
                let num: f64 = rule
                    .points
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x.powi(p as i32))
                    .sum();
                let exact = 1.0 / (p as f64 + 1.0);
                assert!((num - exact).abs() < 1e-14, "degree {degree}, s^{p}");
            }
        }
        // Symbolic oracle: int_0^1 s^3 ds = 1/4 with the 2-point rule.
        let rule = segment_rule(3).unwrap();
        assert_eq!(rule.points.len(), 2);
        let num: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.powi(3))
            .sum();
        assert!((num - 0.25).abs() < 1e-15);
        assert!(segment_rule(8).is_err());
    }

    #[test]
    fn p1_kronecker_and_gradients() {
        let nodes = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let (vals, grads) = eval_lagrange(LagrangeKind::P1, &nodes);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((vals[i][j] - expect).abs() < 1e-15);
            }
            // Constant gradients (-1,-1), (1,0), (0,1).
            let expect = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]][i];
            for q in 0..3 {
                assert_eq!(grads[i][q], expect);
            }
        }
    }

    #[test]
    fn bubble_values() {
        let pts = [[1.0 / 3.0, 1.0 / 3.0], [0.5, 0.0], [0.0, 0.5], [0.5, 0.5]];
        let (vals, _) = eval_lagrange(LagrangeKind::P1Bubble, &pts);
        // 27 (1/3)^3 = 1 at the centroid, zero on all edges.
        assert!((vals[3][0] - 1.0).abs() < 1e-14);
        for q in 1..4 {
            assert!(vals[3][q].abs() < 1e-15);
        }
        // Partition of unity for the P1 part.
        for q in 0..4 {
            let sum: f64 = (0..3).map(|i| vals[i][q]).sum();
            assert!((sum - 1.0).abs() < 1e-15);
        }
    }

    /// Flux moment of a field over a physical edge, by Gauss quadrature on
    /// the edge with the unnormalized rotated edge vector.
    fn physical_edge_moment(
        f: impl Fn([f64; 2]) -> [f64; 2],
        p: [f64; 2],
        q: [f64; 2],
        moment: usize,
    ) -> f64 {
        let d = [q[0] - p[0], q[1] - p[1]];
        let n = [d[1], -d[0]];
        let rule = segment_rule(5).unwrap();
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(&s, w)| {
                let x = [p[0] + s * d[0], p[1] + s * d[1]];
                let v = f(x);
                let qm = if moment == 0 { 1.0 } else { s - 0.5 };
                w * qm * (v[0] * n[0] + v[1] * n[1])
            })
            .sum()
    }

    fn random_map(seed: u64) -> GeometryMap {
        // Deterministic scrambled triangles with positive orientation.
        let r = |k: u64| ((seed.wrapping_mul(6364136223846793005).wrapping_add(k) >> 33) as f64
            / (u32::MAX as f64)
            - 0.5)
            * 2.0;
        let p0 = [r(1), r(2)];
        let mut p1 = [p0[0] + 1.0 + 0.5 * r(3), p0[1] + 0.4 * r(4)];
        let mut p2 = [p0[0] + 0.4 * r(5), p0[1] + 1.0 + 0.5 * r(6)];
        let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        if det < 0.0 {
            std::mem::swap(&mut p1, &mut p2);
        }
        GeometryMap::new(p0, p1, p2)
    }

    #[test]
    fn rt0_duality_on_physical_elements() {
        // Quadrature oracle: the Piola image of edge basis k has unit flux
        // moment over its own physical edge and zero over the others.
        for seed in 0..5 {
            let map = random_map(seed);
            let verts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]].map(|v| map.to_physical(v));
            for dof in 0..3 {
                for k in 0..3 {
                    let flux = physical_edge_moment(
                        |x| {
                            // invert the affine map to reference coordinates
                            let d = [x[0] - map.origin[0], x[1] - map.origin[1]];
                            let r = [
                                (map.b[1][1] * d[0] - map.b[0][1] * d[1]) / map.det,
                                (-map.b[1][0] * d[0] + map.b[0][0] * d[1]) / map.det,
                            ];
                            let (vals, _) = eval_hdiv(HdivKind::Rt0, &map, &[r]);
                            vals[dof][0]
                        },
                        verts[k],
                        verts[(k + 1) % 3],
                        0,
                    );
                    let expect = if dof == k { 1.0 } else { 0.0 };
                    assert!(
                        (flux - expect).abs() < 1e-12,
                        "seed {seed}, dof {dof}, edge {k}: {flux}"
                    );
                }
            }
        }
    }

    #[test]
    fn bdm1_duality_on_physical_elements() {
        for seed in 0..5 {
            let map = random_map(seed);
            let verts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]].map(|v| map.to_physical(v));
            for dof in 0..6 {
                for k in 0..3 {
                    for m in 0..2 {
                        let flux = physical_edge_moment(
                            |x| {
                                let d = [x[0] - map.origin[0], x[1] - map.origin[1]];
                                let r = [
                                    (map.b[1][1] * d[0] - map.b[0][1] * d[1]) / map.det,
                                    (-map.b[1][0] * d[0] + map.b[0][0] * d[1]) / map.det,
                                ];
                                let (vals, _) = eval_hdiv(HdivKind::Bdm1, &map, &[r]);
                                vals[dof][0]
                            },
                            verts[k],
                            verts[(k + 1) % 3],
                            m,
                        );
                        let expect = if dof == 2 * k + m { 1.0 } else { 0.0 };
                        assert!(
                            (flux - expect).abs() < 1e-12,
                            "seed {seed}, dof {dof}, edge {k}, moment {m}: {flux}"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn piola_commutes_with_divergence(seed in 0u64..200) {
            // Physical divergence equals reference divergence / det B.
            let map = random_map(seed);
            for kind in [HdivKind::Rt0, HdivKind::Bdm1] {
                let pts = [[0.2, 0.3], [0.5, 0.1]];
                let (_, divs) = eval_hdiv(kind, &map, &pts);
                let identity = GeometryMap::new([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
                let (_, ref_divs) = eval_hdiv(kind, &identity, &pts);
                for (d, rd) in divs.iter().zip(&ref_divs) {
                    prop_assert!((d - rd / map.det).abs() < 1e-13 * rd.abs().max(1.0));
                }
            }
        }
    }
}
