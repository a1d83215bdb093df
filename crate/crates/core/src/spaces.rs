//! Global degree-of-freedom numbering for the nine field spaces, essential
//! boundary conditions, and canonical interpolation of analytic fields.
//!
//! Dof layouts (deterministic, index formulas tested below):
//! - fluid velocity (MINI): `2 * v + c` for vertex `v`, component `c`, then
//!   `2 * n_vertices + 2 * t + c` for the bubble of triangle `t`;
//! - fluid pressure (P1): vertex index;
//! - poroelastic stress (tensor BDM1): `4 * e + 2 * row + moment` per edge;
//! - solid velocity (vector P0): `2 * t + c`;
//! - rotation (continuous P1): vertex index;
//! - Darcy velocity (RT0): edge index;
//! - Darcy pressure (P0): triangle index;
//! - flux multiplier (P0 per interface edge): trace-segment ordinal;
//! - velocity multiplier (vector P1 per interface edge, discontinuous):
//!   `4 * seg + 2 * node + c`, node 0 at the canonical edge start.

use thiserror::Error;

use crate::elements::{segment_rule, triangle_rule, GeometryMap};
use crate::mesh::{BoundaryTag, InterfaceTrace, Mesh, Subdomain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldId {
    /// Stokes velocity u_f.
    FluidVelocity,
    /// Stokes pressure p_f.
    FluidPressure,
    /// Poroelastic stress sigma_p.
    Stress,
    /// Solid velocity u_s.
    SolidVelocity,
    /// Rotation gamma_p.
    Rotation,
    /// Darcy velocity u_p.
    DarcyVelocity,
    /// Darcy pressure p_p.
    DarcyPressure,
    /// Flux continuity multiplier lambda on the interface.
    FluxMultiplier,
    /// Structure velocity trace multiplier theta on the interface.
    VelocityMultiplier,
}

impl FieldId {
    pub fn subdomain(&self) -> Subdomain {
        match self {
            FieldId::FluidVelocity | FieldId::FluidPressure => Subdomain::Fluid,
            _ => Subdomain::Poro,
        }
    }

    pub fn is_multiplier(&self) -> bool {
        matches!(self, FieldId::FluxMultiplier | FieldId::VelocityMultiplier)
    }
}

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("field {0:?} lives on the {1:?} mesh")]
    WrongSubdomain(FieldId, Subdomain),
    #[error("multiplier space requires interface edges")]
    NoInterface,
    #[error("conflicting essential values at dof {dof}: {a} vs {b}")]
    ConflictingBc { dof: usize, a: f64, b: f64 },
}

/// Global numbering for one field space.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub field: FieldId,
    pub n_dofs: usize,
    /// Per-element `(global dof, sign)` in the local order of the element
    /// basis. Empty for multiplier fields.
    pub cell_dofs: Vec<Vec<(usize, f64)>>,
}

impl DofMap {
    fn from_cells(field: FieldId, n_dofs: usize, cell_dofs: Vec<Vec<(usize, f64)>>) -> Self {
        DofMap {
            field,
            n_dofs,
            cell_dofs,
        }
    }
}

/// Builds the dof map of `field` over `mesh` (or over the interface `trace`
/// for multiplier fields, which must come from the poroelastic mesh).
pub fn build_dofmap(
    mesh: &Mesh,
    trace: Option<&InterfaceTrace>,
    field: FieldId,
) -> Result<DofMap, SpaceError> {
    if !field.is_multiplier() && field.subdomain() != mesh.subdomain {
        return Err(SpaceError::WrongSubdomain(field, mesh.subdomain));
    }
    let nv = mesh.n_vertices();
    let nt = mesh.n_triangles();
    let ne = mesh.n_edges();
    let map = match field {
        FieldId::FluidVelocity => {
            let cells = mesh
                .triangles
                .iter()
                .enumerate()
                .map(|(t, tri)| {
                    let mut dofs = Vec::with_capacity(8);
                    for &v in tri {
                        dofs.push((2 * v, 1.0));
                        dofs.push((2 * v + 1, 1.0));
                    }
                    dofs.push((2 * nv + 2 * t, 1.0));
                    dofs.push((2 * nv + 2 * t + 1, 1.0));
                    dofs
                })
                .collect();
            DofMap::from_cells(field, 2 * (nv + nt), cells)
        }
        FieldId::FluidPressure | FieldId::Rotation => {
            let cells = mesh
                .triangles
                .iter()
                .map(|tri| tri.iter().map(|&v| (v, 1.0)).collect())
                .collect();
            DofMap::from_cells(field, nv, cells)
        }
        FieldId::Stress => {
            let cells = mesh
                .tri_edges
                .iter()
                .map(|loc| {
                    let mut dofs = Vec::with_capacity(12);
                    for row in 0..2 {
                        for &(e, s) in loc {
                            // Sign applies to the constant moment only.
                            dofs.push((4 * e + 2 * row, f64::from(s)));
                            dofs.push((4 * e + 2 * row + 1, 1.0));
                        }
                    }
                    dofs
                })
                .collect();
            DofMap::from_cells(field, 4 * ne, cells)
        }
        FieldId::SolidVelocity => {
            let cells = (0..nt)
                .map(|t| vec![(2 * t, 1.0), (2 * t + 1, 1.0)])
                .collect();
            DofMap::from_cells(field, 2 * nt, cells)
        }
        FieldId::DarcyVelocity => {
            let cells = mesh
                .tri_edges
                .iter()
                .map(|loc| loc.iter().map(|&(e, s)| (e, f64::from(s))).collect())
                .collect();
            DofMap::from_cells(field, ne, cells)
        }
        FieldId::DarcyPressure => {
            let cells = (0..nt).map(|t| vec![(t, 1.0)]).collect();
            DofMap::from_cells(field, nt, cells)
        }
        FieldId::FluxMultiplier => {
            let trace = trace.ok_or(SpaceError::NoInterface)?;
            if trace.segments.is_empty() {
                return Err(SpaceError::NoInterface);
            }
            DofMap::from_cells(field, trace.segments.len(), Vec::new())
        }
        FieldId::VelocityMultiplier => {
            let trace = trace.ok_or(SpaceError::NoInterface)?;
            if trace.segments.is_empty() {
                return Err(SpaceError::NoInterface);
            }
            DofMap::from_cells(field, 4 * trace.segments.len(), Vec::new())
        }
    };
    Ok(map)
}

/// Essential boundary conditions. Natural (flux/traction/pressure) data is
/// handled by the load assembly in [`crate::system`].
pub enum EssentialBc {
    /// Dirichlet velocity on tagged fluid sides; constrains vertex dofs.
    FluidVelocity {
        tags: Vec<BoundaryTag>,
        value: Box<dyn Fn(f64, [f64; 2]) -> [f64; 2] + Send + Sync>,
    },
    /// `u_p . n = 0` on tagged poroelastic sides; zeroes RT0 edge dofs.
    DarcyNoFlux { tags: Vec<BoundaryTag> },
    /// `sigma_p n = 0` on tagged poroelastic sides; zeroes all stress edge dofs.
    ZeroTraction { tags: Vec<BoundaryTag> },
}

impl EssentialBc {
    pub fn field(&self) -> FieldId {
        match self {
            EssentialBc::FluidVelocity { .. } => FieldId::FluidVelocity,
            EssentialBc::DarcyNoFlux { .. } => FieldId::DarcyVelocity,
            EssentialBc::ZeroTraction { .. } => FieldId::Stress,
        }
    }
}

/// The constrained dofs of one field, with a closure evaluating their values
/// at a given time.
pub struct ConstraintSet {
    pub field: FieldId,
    pub dofs: Vec<usize>,
    evaluate: Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
}

impl ConstraintSet {
    pub fn values(&self, t: f64) -> Vec<f64> {
        (self.evaluate)(t)
    }
}

/// Resolves essential boundary conditions into constrained dof sets.
/// Conflicting assignments of one dof (beyond 1e-12) are rejected.
pub fn apply_essential_bcs(
    mesh: &Mesh,
    bcs: Vec<EssentialBc>,
    probe_time: f64,
) -> Result<Vec<ConstraintSet>, SpaceError> {
    let mut sets = Vec::new();
    for bc in bcs {
        match bc {
            EssentialBc::FluidVelocity { tags, value } => {
                let mut vertices = Vec::new();
                for (&e, tag) in &mesh.boundary_tags {
                    if tags.contains(tag) {
                        let [a, b] = mesh.edges[e];
                        vertices.push(a);
                        vertices.push(b);
                    }
                }
                vertices.sort_unstable();
                vertices.dedup();
                let dofs: Vec<usize> = vertices
                    .iter()
                    .flat_map(|&v| [2 * v, 2 * v + 1])
                    .collect();
                let coords: Vec<[f64; 2]> = vertices.iter().map(|&v| mesh.vertices[v]).collect();
                let eval = move |t: f64| {
                    coords
                        .iter()
                        .flat_map(|&x| {
                            let g = value(t, x);
                            [g[0], g[1]]
                        })
                        .collect()
                };
                // Conflict check: a vertex shared by differently tagged edges
                // gets one value from the single closure, so only duplicate
                // sets can conflict; checked across sets below.
                sets.push(ConstraintSet {
                    field: FieldId::FluidVelocity,
                    dofs,
                    evaluate: Box::new(eval),
                });
            }
            EssentialBc::DarcyNoFlux { tags } => {
                let dofs: Vec<usize> = mesh
                    .boundary_tags
                    .iter()
                    .filter(|(_, tag)| tags.contains(tag))
                    .map(|(&e, _)| e)
                    .collect();
                let n = dofs.len();
                sets.push(ConstraintSet {
                    field: FieldId::DarcyVelocity,
                    dofs,
                    evaluate: Box::new(move |_| vec![0.0; n]),
                });
            }
            EssentialBc::ZeroTraction { tags } => {
                let dofs: Vec<usize> = mesh
                    .boundary_tags
                    .iter()
                    .filter(|(_, tag)| tags.contains(tag))
                    .flat_map(|(&e, _)| (0..4).map(move |k| 4 * e + k))
                    .collect();
                let n = dofs.len();
                sets.push(ConstraintSet {
                    field: FieldId::Stress,
                    dofs,
                    evaluate: Box::new(move |_| vec![0.0; n]),
                });
            }
        }
    }

    // Reject conflicting double assignments across sets.
    let mut seen: std::collections::HashMap<(usize, usize), f64> = std::collections::HashMap::new();
    for (si, set) in sets.iter().enumerate() {
        let vals = set.values(probe_time);
        for (&dof, &v) in set.dofs.iter().zip(&vals) {
            let key = (field_ordinal(set.field), dof);
            if let Some(&prev) = seen.get(&key) {
                if (prev - v).abs() > 1e-12 {
                    return Err(SpaceError::ConflictingBc { dof, a: prev, b: v });
                }
            }
            seen.insert(key, v);
        }
        let _ = si;
    }
    Ok(sets)
}

pub(crate) fn field_ordinal(field: FieldId) -> usize {
    match field {
        FieldId::FluidVelocity => 0,
        FieldId::VelocityMultiplier => 1,
        FieldId::DarcyVelocity => 2,
        FieldId::Stress => 3,
        FieldId::DarcyPressure => 4,
        FieldId::FluidPressure => 5,
        FieldId::SolidVelocity => 6,
        FieldId::Rotation => 7,
        FieldId::FluxMultiplier => 8,
    }
}

/// Canonical interpolation of scalar data: vertex values (P1), cell means (P0).
pub fn interpolate_scalar(
    mesh: &Mesh,
    dofmap: &DofMap,
    f: impl Fn([f64; 2]) -> f64,
) -> Vec<f64> {
    let mut coeffs = vec![0.0; dofmap.n_dofs];
    match dofmap.field {
        FieldId::FluidPressure | FieldId::Rotation => {
            for (v, &x) in mesh.vertices.iter().enumerate() {
                coeffs[v] = f(x);
            }
        }
        FieldId::DarcyPressure => {
            let rule = triangle_rule(5).unwrap();
            for t in 0..mesh.n_triangles() {
                let map = GeometryMap::from_triangle(mesh, t);
                let mut mean = 0.0;
                for (&p, w) in rule.points.iter().zip(&rule.weights) {
                    mean += w * f(map.to_physical(p)) * map.det;
                }
                coeffs[t] = mean / mesh.signed_area(t);
            }
        }
        other => panic!("interpolate_scalar on {other:?}"),
    }
    coeffs
}

/// Canonical interpolation of vector data.
pub fn interpolate_vector(
    mesh: &Mesh,
    dofmap: &DofMap,
    f: impl Fn([f64; 2]) -> [f64; 2],
) -> Vec<f64> {
    let mut coeffs = vec![0.0; dofmap.n_dofs];
    match dofmap.field {
        FieldId::FluidVelocity => {
            let nv = mesh.n_vertices();
            for (v, &x) in mesh.vertices.iter().enumerate() {
                let g = f(x);
                coeffs[2 * v] = g[0];
                coeffs[2 * v + 1] = g[1];
            }
            // Bubble dofs restore the centroid value.
            for (t, tri) in mesh.triangles.iter().enumerate() {
                let c = centroid(mesh, t);
                let g = f(c);
                for comp in 0..2 {
                    let p1 = tri.iter().map(|&v| coeffs[2 * v + comp]).sum::<f64>() / 3.0;
                    coeffs[2 * nv + 2 * t + comp] = g[comp] - p1;
                }
            }
        }
        FieldId::SolidVelocity => {
            let rule = triangle_rule(5).unwrap();
            for t in 0..mesh.n_triangles() {
                let map = GeometryMap::from_triangle(mesh, t);
                let area = mesh.signed_area(t);
                let mut mean = [0.0, 0.0];
                for (&p, w) in rule.points.iter().zip(&rule.weights) {
                    let g = f(map.to_physical(p));
                    mean[0] += w * g[0] * map.det;
                    mean[1] += w * g[1] * map.det;
                }
                coeffs[2 * t] = mean[0] / area;
                coeffs[2 * t + 1] = mean[1] / area;
            }
        }
        FieldId::DarcyVelocity => {
            for (e, &[a, b]) in mesh.edges.iter().enumerate() {
                coeffs[e] = edge_flux_moment(mesh.vertices[a], mesh.vertices[b], 0, |x| f(x));
            }
        }
        other => panic!("interpolate_vector on {other:?}"),
    }
    coeffs
}

/// Canonical interpolation of tensor data into the stress space: per edge
/// and row, flux moments of the row against `{1, s - 1/2}`.
pub fn interpolate_tensor(
    mesh: &Mesh,
    dofmap: &DofMap,
    f: impl Fn([f64; 2]) -> [[f64; 2]; 2],
) -> Vec<f64> {
    assert_eq!(dofmap.field, FieldId::Stress);
    let mut coeffs = vec![0.0; dofmap.n_dofs];
    for (e, &[a, b]) in mesh.edges.iter().enumerate() {
        let pa = mesh.vertices[a];
        let pb = mesh.vertices[b];
        for row in 0..2 {
            for m in 0..2 {
                coeffs[4 * e + 2 * row + m] =
                    edge_flux_moment(pa, pb, m, |x| f(x)[row]);
            }
        }
    }
    coeffs
}

/// Interpolates interface data into the multiplier spaces. `lambda` gets
/// edge means, `theta` endpoint values in canonical edge order.
pub fn interpolate_multiplier(
    mesh: &Mesh,
    trace: &InterfaceTrace,
    dofmap: &DofMap,
    f_scalar: Option<&dyn Fn([f64; 2]) -> f64>,
    f_vector: Option<&dyn Fn([f64; 2]) -> [f64; 2]>,
) -> Vec<f64> {
    let mut coeffs = vec![0.0; dofmap.n_dofs];
    match dofmap.field {
        FieldId::FluxMultiplier => {
            let f = f_scalar.expect("lambda needs scalar data");
            let rule = segment_rule(5).unwrap();
            for (i, seg) in trace.segments.iter().enumerate() {
                let [a, b] = mesh.edges[seg.edge];
                let pa = mesh.vertices[a];
                let pb = mesh.vertices[b];
                let mut mean = 0.0;
                for (&s, w) in rule.points.iter().zip(&rule.weights) {
                    mean += w * f([pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])]);
                }
                coeffs[i] = mean;
            }
        }
        FieldId::VelocityMultiplier => {
            let f = f_vector.expect("theta needs vector data");
            for (i, seg) in trace.segments.iter().enumerate() {
                let [a, b] = mesh.edges[seg.edge];
                for (node, &v) in [a, b].iter().enumerate() {
                    let g = f(mesh.vertices[v]);
                    coeffs[4 * i + 2 * node] = g[0];
                    coeffs[4 * i + 2 * node + 1] = g[1];
                }
            }
        }
        other => panic!("interpolate_multiplier on {other:?}"),
    }
    coeffs
}

pub(crate) fn centroid(mesh: &Mesh, t: usize) -> [f64; 2] {
    let [a, b, c] = mesh.triangles[t];
    let (p, q, r) = (mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]);
    [
        (p[0] + q[0] + r[0]) / 3.0,
        (p[1] + q[1] + r[1]) / 3.0,
    ]
}

/// Flux moment of a vector field over the edge from `pa` to `pb` (canonical
/// direction), against `{1, s - 1/2}`, with the unnormalized rotated edge
/// vector absorbing the arc length.
pub(crate) fn edge_flux_moment(
    pa: [f64; 2],
    pb: [f64; 2],
    moment: usize,
    f: impl Fn([f64; 2]) -> [f64; 2],
) -> f64 {
    let d = [pb[0] - pa[0], pb[1] - pa[1]];
    let n = [d[1], -d[0]];
    let rule = segment_rule(5).unwrap();
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(&s, w)| {
            let x = [pa[0] + s * d[0], pa[1] + s * d[1]];
            let v = f(x);
            let q = if moment == 0 { 1.0 } else { s - 0.5 };
            w * q * (v[0] * n[0] + v[1] * n[1])
        })
        .sum()
}
