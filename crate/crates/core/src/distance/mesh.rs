//! Boundary meshes, the intrinsic boundary distance and the filling distance.

use std::collections::{BTreeSet, BinaryHeap, HashMap};

use super::graph::DistanceReport;
use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{axpy, check_dim, dist, norm};

/// Boundary samples joined by straight edges.
#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    vertices: Vec<Vec<f64>>,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

fn icosahedron() -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let p = 0.5 * (1.0 + 5f64.sqrt());
    let raw = [
        [-1.0, p, 0.0],
        [1.0, p, 0.0],
        [-1.0, -p, 0.0],
        [1.0, -p, 0.0],
        [0.0, -1.0, p],
        [0.0, 1.0, p],
        [0.0, -1.0, -p],
        [0.0, 1.0, -p],
        [p, 0.0, -1.0],
        [p, 0.0, 1.0],
        [-p, 0.0, -1.0],
        [-p, 0.0, 1.0],
    ];
    let verts = raw
        .iter()
        .map(|v| {
            let n = norm(v);
            [v[0] / n, v[1] / n, v[2] / n]
        })
        .collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}

/// Unit icosphere after `level` midpoint subdivisions.
pub fn icosphere(level: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let (mut verts, mut faces) = icosahedron();
    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                let m = [
                    verts[a][0] + verts[b][0],
                    verts[a][1] + verts[b][1],
                    verts[a][2] + verts[b][2],
                ];
                let n = norm(&m);
                verts.push([m[0] / n, m[1] / n, m[2] / n]);
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (verts, faces)
}

impl BoundaryMesh {
    /// Builds a mesh from vertices and index pairs; edge lengths are Euclidean.
    pub fn new(vertices: Vec<Vec<f64>>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = vertices.len();
        let mut set = BTreeSet::new();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidBody(format!("edge ({a}, {b}) out of range")));
            }
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        }
        let edges: Vec<(usize, usize, f64)> = set
            .into_iter()
            .map(|(a, b)| (a, b, dist(&vertices[a], &vertices[b])))
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b, w) in &edges {
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        let mesh = Self {
            vertices,
            edges,
            adjacency,
        };
        if !mesh.is_connected() {
            return Err(Error::DisconnectedMesh);
        }
        Ok(mesh)
    }

    /// Icosphere directions cast from the body's anchor onto the boundary of
    /// a three-dimensional body, with edges to first and second ring neighbours.
    pub fn icosphere(body: &ConvexBody, level: usize) -> Result<Self> {
        check_dim(3, &vec![0.0; body.dim()])?;
        let anchor = body.anchor();
        let (dirs, faces) = icosphere(level);
        let mut vertices = Vec::with_capacity(dirs.len());
        for u in &dirs {
            let t = body.ray_exit(&anchor, u)?;
            if !t.is_finite() {
                return Err(Error::DisconnectedMesh);
            }
            vertices.push(axpy(&anchor, t, u).to_vec());
        }
        let mut ring: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); dirs.len()];
        for [a, b, c] in faces {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                ring[p].insert(q);
                ring[q].insert(p);
            }
        }
        let mut pairs = Vec::new();
        for (v, nbrs) in ring.iter().enumerate() {
            for &w in nbrs {
                pairs.push((v, w));
                for &z in &ring[w] {
                    pairs.push((v, z));
                }
            }
        }
        Self::new(vertices, &pairs)
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Index of the vertex nearest to `p`.
    pub fn snap(&self, p: &[f64]) -> usize {
        self.vertices
            .iter()
            .enumerate()
            .min_by(|a, b| dist(a.1, p).total_cmp(&dist(b.1, p)))
            .map(|(i, _)| i)
            .expect("mesh is nonempty")
    }

    /// Shortest edge-path length between two vertices.
    pub fn path_length(&self, s: usize, t: usize) -> f64 {
        #[derive(PartialEq)]
        struct Item(f64, usize);
        impl Eq for Item {}
        impl Ord for Item {
            fn cmp(&self, o: &Self) -> std::cmp::Ordering {
                o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
            }
        }
        impl PartialOrd for Item {
            fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(o))
            }
        }
        let mut cost = vec![f64::INFINITY; self.vertices.len()];
        cost[s] = 0.0;
        let mut heap = BinaryHeap::from([Item(0.0, s)]);
        while let Some(Item(c, v)) = heap.pop() {
            if v == t {
                return c;
            }
            if c > cost[v] {
                continue;
            }
            for &(w, len) in &self.adjacency[v] {
                if c + len < cost[w] {
                    cost[w] = c + len;
                    heap.push(Item(c + len, w));
                }
            }
        }
        cost[t]
    }
}

/// Intrinsic boundary distance `H(xi, eta)` approximated on the mesh after
/// snapping both points to their nearest vertices.
pub fn boundary_intrinsic_distance(mesh: &BoundaryMesh, xi: &[f64], eta: &[f64]) -> f64 {
    mesh.path_length(mesh.snap(xi), mesh.snap(eta))
}

/// Foot of `x` on the boundary, snapped to the mesh. Points without a
/// unique nearest boundary point use the mesh vertex nearest to `x`.
fn mesh_foot(body: &ConvexBody, mesh: &BoundaryMesh, x: &[f64]) -> usize {
    match body.nearest_boundary(x) {
        Ok(foot) => mesh.snap(&foot.point),
        Err(_) => mesh.snap(x),
    }
}

/// Filling distance `2 log((H(pi x, pi y) + max(h(x), h(y))) / sqrt(h(x) h(y)))`
/// with `h = sqrt(delta)`.
pub fn filling_distance(body: &ConvexBody, mesh: &BoundaryMesh, x: &[f64], y: &[f64]) -> Result<f64> {
    let hx = body.boundary_distance(x)?.sqrt();
    let hy = body.boundary_distance(y)?.sqrt();
    if dist(x, y) == 0.0 {
        return Ok(0.0);
    }
    let h = mesh.path_length(mesh_foot(body, mesh, x), mesh_foot(body, mesh, y));
    Ok(2.0 * ((h + hx.max(hy)) / (hx * hy).sqrt()).ln())
}

/// Filling distance packaged as a report (it is a model distance, so both
/// bounds carry the same value).
pub fn filling_report(body: &ConvexBody, mesh: &BoundaryMesh, x: &[f64], y: &[f64]) -> Result<DistanceReport> {
    Ok(DistanceReport::exact(filling_distance(body, mesh, x, y)?, "filling/mesh"))
}
