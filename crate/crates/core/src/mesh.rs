//! Structured triangular meshes of axis-aligned rectangles for the two
//! subdomains, with tagged boundary sides and interface traces on `y = 0`.

use std::collections::BTreeMap;

use thiserror::Error;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }
}

/// Which physical subdomain a mesh represents. The fluid region sits above
/// the interface line `y = 0`, the poroelastic region below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subdomain {
    Fluid,
    Poro,
}

/// Geometric side tag for boundary edges. The interface carries its own tag;
/// scenario drivers map exterior sides to boundary-condition roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryTag {
    FluidLeft,
    FluidTop,
    FluidRight,
    /// Edge on the fluid/poroelastic interface `y = 0`.
    Interface,
    PoroLeft,
    PoroRight,
    PoroBottom,
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("subdivision counts must be positive, got nx={nx}, ny={ny}")]
    BadCounts { nx: usize, ny: usize },
    #[error("degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]")]
    DegenerateRect { x0: f64, x1: f64, y0: f64, y1: f64 },
    #[error("mesh has no interface edges")]
    NoInterface,
    #[error("interface traces cover different intervals: [{a0}, {a1}] vs [{b0}, {b1}]")]
    TraceMismatch { a0: f64, a1: f64, b0: f64, b1: f64 },
}

/// Conforming triangulation of a rectangle.
///
/// Edges are stored with canonical orientation (lower global vertex index
/// first); `tri_edges[t][k]` gives the edge index of the local edge from
/// vertex `k` to `k+1 (mod 3)` of triangle `t` along with the incidence sign:
/// `+1` if the local traversal agrees with the canonical orientation.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub subdomain: Subdomain,
    pub vertices: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<[usize; 2]>,
    pub tri_edges: Vec<[(usize, i8); 3]>,
    /// Tag per boundary edge; interior edges are absent.
    pub boundary_tags: BTreeMap<usize, BoundaryTag>,
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let p = self.vertices[a];
        let q = self.vertices[b];
        let r = self.vertices[c];
        0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        let p = self.vertices[a];
        let q = self.vertices[b];
        ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
    }

    /// Unit normal of edge `e` in the canonical direction: the tangent from
    /// the lower-index vertex to the higher one, rotated by -90 degrees.
    pub fn edge_normal(&self, e: usize) -> [f64; 2] {
        let [a, b] = self.edges[e];
        let p = self.vertices[a];
        let q = self.vertices[b];
        let len = self.edge_length(e);
        [(q[1] - p[1]) / len, -(q[0] - p[0]) / len]
    }

    /// Triangles incident to each edge, in element-index order.
    pub fn edge_triangles(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.edges.len()];
        for (t, loc) in self.tri_edges.iter().enumerate() {
            for (k, &(e, _)) in loc.iter().enumerate() {
                inc[e].push((t, k));
            }
        }
        inc
    }

    /// The unique triangle owning a boundary edge.
    pub fn boundary_edge_owner(&self, e: usize) -> (usize, usize, i8) {
        for (t, loc) in self.tri_edges.iter().enumerate() {
            for (k, &(ei, s)) in loc.iter().enumerate() {
                if ei == e {
                    return (t, k, s);
                }
            }
        }
        unreachable!("edge {e} not referenced by any triangle");
    }

    /// Outward unit normal of the subdomain on boundary edge `e`.
    pub fn outward_normal(&self, e: usize) -> [f64; 2] {
        let (_, _, sign) = self.boundary_edge_owner(e);
        let n = self.edge_normal(e);
        [f64::from(sign) * n[0], f64::from(sign) * n[1]]
    }
}

/// Builds a structured triangulation of `rect` with `nx * ny` cells, each cell
/// split along its lower-left to upper-right diagonal. Boundary edges are
/// tagged by side according to `subdomain`: the fluid mesh has its interface
/// on the bottom side, the poroelastic mesh on the top side.
pub fn build_rect_mesh(
    rect: Rect,
    nx: usize,
    ny: usize,
    subdomain: Subdomain,
) -> Result<Mesh, MeshError> {
    if nx == 0 || ny == 0 {
        return Err(MeshError::BadCounts { nx, ny });
    }
    if !(rect.x0 < rect.x1) || !(rect.y0 < rect.y1) {
        return Err(MeshError::DegenerateRect {
            x0: rect.x0,
            x1: rect.x1,
            y0: rect.y0,
            y1: rect.y1,
        });
    }

    let nvx = nx + 1;
    let mut vertices = Vec::with_capacity(nvx * (ny + 1));
    for j in 0..=ny {
        let y = rect.y0 + (rect.y1 - rect.y0) * j as f64 / ny as f64;
        for i in 0..=nx {
            let x = rect.x0 + (rect.x1 - rect.x0) * i as f64 / nx as f64;
            vertices.push([x, y]);
        }
    }

    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let v00 = j * nvx + i;
            let v10 = v00 + 1;
            let v01 = v00 + nvx;
            let v11 = v01 + 1;
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }

    let mut edge_index: BTreeMap<[usize; 2], usize> = BTreeMap::new();
    for tri in &triangles {
        for k in 0..3 {
            let a = tri[k];
            let b = tri[(k + 1) % 3];
            let key = [a.min(b), a.max(b)];
            let next = edge_index.len();
            edge_index.entry(key).or_insert(next);
        }
    }
    // Renumber edges in sorted key order for determinism.
    let mut edges: Vec<[usize; 2]> = edge_index.keys().copied().collect();
    edges.sort_unstable();
    let edge_index: BTreeMap<[usize; 2], usize> =
        edges.iter().enumerate().map(|(i, &k)| (k, i)).collect();

    let tri_edges = triangles
        .iter()
        .map(|tri| {
            let mut loc = [(0usize, 0i8); 3];
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                let key = [a.min(b), a.max(b)];
                let e = edge_index[&key];
                loc[k] = (e, if a < b { 1 } else { -1 });
            }
            loc
        })
        .collect::<Vec<_>>();

    // Boundary edges appear in exactly one triangle.
    let mut counts = vec![0u8; edges.len()];
    for loc in &tri_edges {
        for &(e, _) in loc {
            counts[e] += 1;
        }
    }

    let tol = 1e-12 * (rect.x1 - rect.x0).max(rect.y1 - rect.y0);
    let mut boundary_tags = BTreeMap::new();
    for (e, &[a, b]) in edges.iter().enumerate() {
        if counts[e] != 1 {
            continue;
        }
        let pa = vertices[a];
        let pb = vertices[b];
        let tag = if (pa[1] - rect.y0).abs() < tol && (pb[1] - rect.y0).abs() < tol {
            match subdomain {
                Subdomain::Fluid => BoundaryTag::Interface,
                Subdomain::Poro => BoundaryTag::PoroBottom,
            }
        } else if (pa[1] - rect.y1).abs() < tol && (pb[1] - rect.y1).abs() < tol {
            match subdomain {
                Subdomain::Fluid => BoundaryTag::FluidTop,
                Subdomain::Poro => BoundaryTag::Interface,
            }
        } else if (pa[0] - rect.x0).abs() < tol && (pb[0] - rect.x0).abs() < tol {
            match subdomain {
                Subdomain::Fluid => BoundaryTag::FluidLeft,
                Subdomain::Poro => BoundaryTag::PoroLeft,
            }
        } else if (pa[0] - rect.x1).abs() < tol && (pb[0] - rect.x1).abs() < tol {
            match subdomain {
                Subdomain::Fluid => BoundaryTag::FluidRight,
                Subdomain::Poro => BoundaryTag::PoroRight,
            }
        } else {
            unreachable!("boundary edge {e} not on any rectangle side");
        };
        boundary_tags.insert(e, tag);
    }

    Ok(Mesh {
        subdomain,
        vertices,
        triangles,
        edges,
        tri_edges,
        boundary_tags,
    })
}

/// One interface segment: an x-interval on `y = 0` owned by a boundary edge.
#[derive(Debug, Clone, Copy)]
pub struct TraceSegment {
    pub x0: f64,
    pub x1: f64,
    pub edge: usize,
    pub tri: usize,
}

/// Ordered partition of the interface seen from one side.
#[derive(Debug, Clone)]
pub struct InterfaceTrace {
    pub side: Subdomain,
    pub segments: Vec<TraceSegment>,
}

impl InterfaceTrace {
    pub fn x_min(&self) -> f64 {
        self.segments.first().map(|s| s.x0).unwrap_or(0.0)
    }

    pub fn x_max(&self) -> f64 {
        self.segments.last().map(|s| s.x1).unwrap_or(0.0)
    }

    pub fn length(&self) -> f64 {
        self.x_max() - self.x_min()
    }
}

/// Extracts the ordered interface trace of a mesh.
pub fn extract_interface_trace(mesh: &Mesh) -> Result<InterfaceTrace, MeshError> {
    let mut segments = Vec::new();
    for (&e, &tag) in &mesh.boundary_tags {
        if tag != BoundaryTag::Interface {
            continue;
        }
        let [a, b] = mesh.edges[e];
        let xa = mesh.vertices[a][0];
        let xb = mesh.vertices[b][0];
        let (tri, _, _) = mesh.boundary_edge_owner(e);
        segments.push(TraceSegment {
            x0: xa.min(xb),
            x1: xa.max(xb),
            edge: e,
            tri,
        });
    }
    if segments.is_empty() {
        return Err(MeshError::NoInterface);
    }
    segments.sort_by(|s, t| s.x0.partial_cmp(&t.x0).unwrap());
    Ok(InterfaceTrace {
        side: mesh.subdomain,
        segments,
    })
}

/// Segment of the merged interface partition, with back-references into the
/// fluid and poroelastic traces it lies inside.
#[derive(Debug, Clone, Copy)]
pub struct MergedSegment {
    pub x0: f64,
    pub x1: f64,
    /// Index into the fluid trace's segment list.
    pub fluid: usize,
    /// Index into the poroelastic trace's segment list.
    pub poro: usize,
}

#[derive(Debug, Clone)]
pub struct MergedTrace {
    pub segments: Vec<MergedSegment>,
}

impl MergedTrace {
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.segments.iter().map(|s| s.x0).collect();
        if let Some(last) = self.segments.last() {
            pts.push(last.x1);
        }
        pts
    }
}

fn breakpoints_of(trace: &InterfaceTrace) -> Vec<f64> {
    let mut pts: Vec<f64> = trace.segments.iter().map(|s| s.x0).collect();
    pts.push(trace.x_max());
    pts
}

/// Merges the two one-sided traces into a common partition whose breakpoints
/// are the union of both sides' breakpoints. Coincidence is decided with a
/// tolerance of `1e-12` times the interface length.
pub fn merge_traces(
    fluid: &InterfaceTrace,
    poro: &InterfaceTrace,
) -> Result<MergedTrace, MeshError> {
    let length = fluid.length();
    let tol = 1e-12 * length.max(poro.length());
    if (fluid.x_min() - poro.x_min()).abs() > tol || (fluid.x_max() - poro.x_max()).abs() > tol {
        return Err(MeshError::TraceMismatch {
            a0: fluid.x_min(),
            a1: fluid.x_max(),
            b0: poro.x_min(),
            b1: poro.x_max(),
        });
    }

    let mut pts = breakpoints_of(fluid);
    pts.extend(breakpoints_of(poro));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= tol);

    let locate = |trace: &InterfaceTrace, mid: f64| -> usize {
        trace
            .segments
            .iter()
            .position(|s| s.x0 - tol <= mid && mid <= s.x1 + tol)
            .expect("merged segment midpoint outside covering trace")
    };

    let mut segments = Vec::with_capacity(pts.len().saturating_sub(1));
    for w in pts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let mid = 0.5 * (x0 + x1);
        segments.push(MergedSegment {
            x0,
            x1,
            fluid: locate(fluid, mid),
            poro: locate(poro, mid),
        });
    }
    Ok(MergedTrace { segments })
}
