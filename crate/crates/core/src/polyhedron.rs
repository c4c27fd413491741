//! Polyhedron descriptions and their structural diagnostics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{v3, Scalar};

/// Vertices plus faces given as vertex cycles, counter-clockwise seen from
/// outside. Coordinates are optional so that purely combinatorial documents
/// can be loaded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyhedronSpec<T = f64> {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[T; 3]>>,
    pub faces: Vec<Vec<usize>>,
}

/// Unordered vertex pair with `a < b`.
pub type VertexPair = (usize, usize);

#[inline]
pub(crate) fn pair(a: usize, b: usize) -> VertexPair {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl<T: Scalar> PolyhedronSpec<T> {
    pub fn new(name: impl Into<String>, vertices: Vec<[T; 3]>, faces: Vec<Vec<usize>>) -> Self {
        PolyhedronSpec {
            name: name.into(),
            vertices: Some(vertices),
            faces,
        }
    }

    /// Topology-only description.
    pub fn from_faces(name: impl Into<String>, faces: Vec<Vec<usize>>) -> Self {
        PolyhedronSpec {
            name: name.into(),
            vertices: None,
            faces,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match &self.vertices {
            Some(v) => v.len(),
            None => self.faces.iter().flatten().max().map_or(0, |&m| m + 1),
        }
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn coordinates(&self) -> Result<&[[T; 3]]> {
        self.vertices
            .as_deref()
            .ok_or_else(|| Error::MissingGeometry(self.name.clone()))
    }

    /// Every face-cycle edge mapped to the faces containing it, in face order.
    pub fn edge_faces(&self) -> BTreeMap<VertexPair, Vec<usize>> {
        let mut map: BTreeMap<VertexPair, Vec<usize>> = BTreeMap::new();
        for (f, face) in self.faces.iter().enumerate() {
            for (i, &a) in face.iter().enumerate() {
                let b = face[(i + 1) % face.len()];
                if a != b {
                    map.entry(pair(a, b)).or_default().push(f);
                }
            }
        }
        map
    }

    /// Index and degeneracy checks shared by every graph builder.
    pub(crate) fn check_faces(&self) -> Result<()> {
        let n = self.vertex_count();
        for (f, face) in self.faces.iter().enumerate() {
            if let Some(&index) = face.iter().find(|&&i| i >= n) {
                return Err(Error::VertexIndexOutOfRange {
                    face: f,
                    index,
                    vertex_count: n,
                });
            }
            if face.len() < 3 {
                return Err(Error::DegenerateFace {
                    face: f,
                    reason: format!("{} vertices", face.len()),
                });
            }
            let mut sorted = face.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != face.len() {
                return Err(Error::DegenerateFace {
                    face: f,
                    reason: "repeated vertex".into(),
                });
            }
        }
        Ok(())
    }

    /// Face vertices as 3D points.
    pub fn face_points(&self, face: usize) -> Result<Vec<[T; 3]>> {
        let coords = self.coordinates()?;
        Ok(self.faces[face].iter().map(|&i| coords[i]).collect())
    }

    /// Converts coordinates to another scalar type.
    pub fn cast<U: Scalar>(&self) -> PolyhedronSpec<U> {
        PolyhedronSpec {
            name: self.name.clone(),
            vertices: self.vertices.as_ref().map(|vs| {
                vs.iter()
                    .map(|p| p.map(|x| U::from_f64(x.as_f64()).unwrap_or_else(U::nan)))
                    .collect()
            }),
            faces: self.faces.clone(),
        }
    }

    /// Drops the listed faces and every vertex no remaining face uses.
    ///
    /// Returns the reduced spec and, for each new vertex index, its index in
    /// `self`. Vertex order is preserved.
    pub fn without_faces(&self, removed: &[usize]) -> Result<(Self, Vec<usize>)> {
        for &f in removed {
            if f >= self.faces.len() {
                return Err(Error::InvalidHole(format!(
                    "face {f} does not exist ({} faces)",
                    self.faces.len()
                )));
            }
        }
        let kept: Vec<&Vec<usize>> = self
            .faces
            .iter()
            .enumerate()
            .filter(|(f, _)| !removed.contains(f))
            .map(|(_, face)| face)
            .collect();
        let n = self.vertex_count();
        let mut used = vec![false; n];
        for &v in kept.iter().copied().flatten() {
            used[v] = true;
        }
        let old_of_new: Vec<usize> = (0..n).filter(|&v| used[v]).collect();
        let mut new_of_old = vec![usize::MAX; n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let faces = kept
            .iter()
            .map(|face| face.iter().map(|&v| new_of_old[v]).collect())
            .collect();
        let vertices = self
            .vertices
            .as_ref()
            .map(|vs| old_of_new.iter().map(|&v| vs[v]).collect());
        Ok((
            PolyhedronSpec {
                name: self.name.clone(),
                vertices,
                faces,
            },
            old_of_new,
        ))
    }
}

/// An edge whose face count differs from two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeIncidence {
    pub a: usize,
    pub b: usize,
    pub faces: usize,
}

/// Structural report produced by [`validate_polyhedron`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub euler_characteristic: i64,
    /// `(face, vertex index)` pairs that point past the vertex list.
    pub index_errors: Vec<(usize, usize)>,
    pub degenerate_faces: Vec<usize>,
    pub non_manifold_edges: Vec<EdgeIncidence>,
    /// Edges that both neighboring faces traverse in the same direction.
    pub misoriented_edges: Vec<(usize, usize)>,
    pub unused_vertices: Vec<usize>,
    pub connected: bool,
    /// Largest distance of a face vertex from its face plane, divided by the
    /// mean edge length. `None` without coordinates.
    pub max_planarity_residual: Option<f64>,
    pub min_edge_length: Option<f64>,
}

/// Relative tolerance for the planarity diagnostic.
pub const PLANARITY_TOLERANCE: f64 = 1e-9;

impl Diagnostics {
    pub fn euler_ok(&self) -> bool {
        self.euler_characteristic == 2
    }

    pub fn manifold_ok(&self) -> bool {
        self.non_manifold_edges.is_empty()
    }

    pub fn planar_ok(&self) -> Option<bool> {
        self.max_planarity_residual
            .map(|r| r <= PLANARITY_TOLERANCE)
    }

    /// Everything a closed shell needs. Planarity is informational only.
    pub fn passes(&self) -> bool {
        self.index_errors.is_empty()
            && self.degenerate_faces.is_empty()
            && self.unused_vertices.is_empty()
            && self.manifold_ok()
            && self.misoriented_edges.is_empty()
            && self.euler_ok()
            && self.connected
            && self.min_edge_length.is_none_or(|l| l > 0.0)
    }
}

/// Reports Euler characteristic, manifoldness, connectivity and face
/// planarity. Never fails; callers decide what to reject.
pub fn validate_polyhedron<T: Scalar>(spec: &PolyhedronSpec<T>) -> Diagnostics {
    let n = spec.vertex_count();
    let mut index_errors = Vec::new();
    let mut degenerate_faces = Vec::new();
    for (f, face) in spec.faces.iter().enumerate() {
        for &i in face {
            if i >= n {
                index_errors.push((f, i));
            }
        }
        let mut sorted = face.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if face.len() < 3 || sorted.len() != face.len() {
            degenerate_faces.push(f);
        }
    }

    let edge_faces = spec.edge_faces();
    let non_manifold_edges = edge_faces
        .iter()
        .filter(|(_, fs)| fs.len() != 2)
        .map(|(&(a, b), fs)| EdgeIncidence {
            a,
            b,
            faces: fs.len(),
        })
        .collect();

    let mut directed = BTreeMap::new();
    for face in &spec.faces {
        for (k, &a) in face.iter().enumerate() {
            *directed
                .entry((a, face[(k + 1) % face.len()]))
                .or_insert(0usize) += 1;
        }
    }
    let misoriented_edges = edge_faces
        .keys()
        .filter(|&&(a, b)| {
            directed.get(&(a, b)).copied().unwrap_or(0) > 1
                || directed.get(&(b, a)).copied().unwrap_or(0) > 1
        })
        .copied()
        .collect();

    let mut used = vec![false; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in edge_faces.keys() {
        if a < n && b < n {
            used[a] = true;
            used[b] = true;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let unused_vertices: Vec<usize> = (0..n).filter(|&v| !used[v]).collect();
    let roots = (0..n)
        .filter(|&v| used[v])
        .map(|v| find(&mut parent, v))
        .collect::<std::collections::BTreeSet<_>>();
    let connected = roots.len() <= 1 && unused_vertices.is_empty();

    let (max_planarity_residual, min_edge_length) = match &spec.vertices {
        Some(coords) if index_errors.is_empty() => {
            let lengths: Vec<f64> = edge_faces
                .keys()
                .map(|&(a, b)| v3::norm(v3::sub(coords[a], coords[b])).as_f64())
                .collect();
            let mean = lengths.iter().sum::<f64>() / lengths.len().max(1) as f64;
            let min = lengths.iter().copied().fold(f64::INFINITY, f64::min);
            let mut worst = 0.0f64;
            for face in spec.faces.iter().filter(|f| f.len() >= 3) {
                let pts: Vec<[T; 3]> = face.iter().map(|&i| coords[i]).collect();
                let normal = v3::normalize(v3::newell(&pts));
                let c = v3::centroid(&pts);
                for p in &pts {
                    let d = v3::dot(v3::sub(*p, c), normal).as_f64().abs();
                    worst = worst.max(d);
                }
            }
            let rel = if mean > 0.0 { worst / mean } else { worst };
            (Some(rel), Some(min))
        }
        _ => (None, None),
    };

    Diagnostics {
        vertex_count: n,
        edge_count: edge_faces.len(),
        face_count: spec.faces.len(),
        euler_characteristic: n as i64 - edge_faces.len() as i64 + spec.faces.len() as i64,
        index_errors,
        degenerate_faces,
        non_manifold_edges,
        misoriented_edges,
        unused_vertices,
        connected,
        max_planarity_residual,
        min_edge_length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> PolyhedronSpec<f64> {
        let v = (0..8)
            .map(|i| [(i & 1) as f64, (i >> 1 & 1) as f64, (i >> 2 & 1) as f64])
            .collect();
        let faces = vec![
            vec![0, 2, 3, 1],
            vec![4, 5, 7, 6],
            vec![0, 1, 5, 4],
            vec![2, 6, 7, 3],
            vec![0, 4, 6, 2],
            vec![1, 3, 7, 5],
        ];
        PolyhedronSpec::new("cube", v, faces)
    }

    #[test]
    fn cube_passes() {
        let d = validate_polyhedron(&cube());
        assert_eq!((d.vertex_count, d.edge_count, d.face_count), (8, 12, 6));
        assert!(d.euler_ok());
        assert!(d.passes());
        assert_eq!(d.planar_ok(), Some(true));
    }

    #[test]
    fn missing_face_breaks_manifoldness() {
        let mut spec = cube();
        spec.faces.pop();
        let d = validate_polyhedron(&spec);
        assert!(!d.manifold_ok());
        assert_eq!(d.non_manifold_edges.len(), 4);
        assert!(d.non_manifold_edges.iter().all(|e| e.faces == 1));
        assert!(!d.passes());
    }

    #[test]
    fn reversed_face_is_rejected() {
        let mut spec = cube();
        spec.faces[0].reverse();
        let d = validate_polyhedron(&spec);
        assert!(d.manifold_ok());
        assert_eq!(d.misoriented_edges.len(), 4);
        assert!(!d.passes());
    }

    #[test]
    fn bent_face_is_reported_not_rejected() {
        let mut spec = cube();
        spec.vertices.as_mut().unwrap()[7][2] = 1.1;
        let d = validate_polyhedron(&spec);
        assert_eq!(d.planar_ok(), Some(false));
        assert!(d.passes());
    }

    #[test]
    fn bad_index_is_reported() {
        let mut spec = cube();
        spec.faces[2][1] = 11;
        let d = validate_polyhedron(&spec);
        assert_eq!(d.index_errors, vec![(2, 11)]);
        assert!(matches!(
            spec.check_faces(),
            Err(Error::VertexIndexOutOfRange {
                face: 2,
                index: 11,
                ..
            })
        ));
    }

    #[test]
    fn dropping_faces_compacts_vertices() {
        let spec = cube();
        let (open, map) = spec.without_faces(&[0]).unwrap();
        assert_eq!(open.faces.len(), 5);
        assert_eq!(map, (0..8).collect::<Vec<_>>());
        let (two, map) = spec.without_faces(&[0, 2, 4]).unwrap();
        // vertex 0 only lies on faces 0, 2 and 4
        assert_eq!(map, (1..8).collect::<Vec<_>>());
        assert_eq!(two.vertex_count(), 7);
    }
}
