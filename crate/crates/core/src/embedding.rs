//! Combinatorially embedded planar triangulations.
//!
//! A triangulation is given by its rotation system: for every vertex, the
//! clockwise cyclic order of its neighbors. Faces are traced with the
//! left-face rule: from the directed edge (u,v) the walk continues with
//! (v, succ_v(u)), where succ_v is the clockwise successor at v. Interior
//! faces come out counterclockwise and each directed edge lies on exactly
//! one face.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

/// One traced face: boundary vertices in walk order and the edge ids between
/// consecutive boundary vertices (`edges[i]` joins `vertices[i]` and
/// `vertices[i+1]`, cyclically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkedFace {
    pub id: FaceId,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl WalkedFace {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A validated rotation system on the sphere, with derived edge and face
/// structure. Shared by the primal triangulation and its dual.
#[derive(Debug, Clone)]
pub struct PlaneMap {
    rotations: Vec<Vec<VertexId>>,
    /// Undirected edges as sorted pairs; index = edge id, lexicographic order.
    edges: Vec<(VertexId, VertexId)>,
    edge_ids: BTreeMap<(VertexId, VertexId), EdgeId>,
    faces: Vec<WalkedFace>,
    /// dart (u,v) -> id of the face to its left.
    dart_face: BTreeMap<(VertexId, VertexId), FaceId>,
    /// edge id -> the two incident face ids.
    edge_faces: Vec<(FaceId, FaceId)>,
    /// neighbor -> position in rotation, per vertex.
    rot_pos: Vec<BTreeMap<VertexId, usize>>,
}

impl PlaneMap {
    /// Validate a rotation system and trace its faces. Requires a simple,
    /// connected sphere embedding (V - E + F = 2).
    pub fn new(rotations: Vec<Vec<VertexId>>) -> Result<PlaneMap> {
        let n = rotations.len();
        let mut rot_pos: Vec<BTreeMap<VertexId, usize>> = vec![BTreeMap::new(); n];
        for (v, nbrs) in rotations.iter().enumerate() {
            for (i, &w) in nbrs.iter().enumerate() {
                if w >= n {
                    return Err(Error::NeighborOutOfRange { v, w });
                }
                if w == v {
                    return Err(Error::LoopEdge(v));
                }
                if rot_pos[v].insert(w, i).is_some() {
                    return Err(Error::ParallelEdge { u: v, v: w });
                }
            }
        }
        for (v, nbrs) in rotations.iter().enumerate() {
            for &w in nbrs {
                if !rot_pos[w].contains_key(&v) {
                    return Err(Error::NotSymmetric { u: v, v: w });
                }
            }
        }

        // Connectivity.
        if n > 0 {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = queue.pop_front() {
                for &w in &rotations[v] {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
            if count != n {
                return Err(Error::Disconnected);
            }
        }

        // Edge ids in lexicographic order of sorted endpoint pairs.
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (v, nbrs) in rotations.iter().enumerate() {
            for &w in nbrs {
                pairs.insert((v.min(w), v.max(w)));
            }
        }
        let edges: Vec<(usize, usize)> = pairs.into_iter().collect();
        let edge_ids: BTreeMap<(usize, usize), usize> = edges
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();

        // Face walk: lexicographically first unvisited dart starts a face.
        let mut dart_face: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut faces: Vec<WalkedFace> = Vec::new();
        for v in 0..n {
            for &w in &rotations[v] {
                if dart_face.contains_key(&(v, w)) {
                    continue;
                }
                let id = faces.len();
                let mut verts = Vec::new();
                let mut face_edges = Vec::new();
                let (mut a, mut b) = (v, w);
                loop {
                    dart_face.insert((a, b), id);
                    verts.push(a);
                    face_edges.push(edge_ids[&(a.min(b), a.max(b))]);
                    let pos = rot_pos[b][&a];
                    let next = rotations[b][(pos + 1) % rotations[b].len()];
                    a = b;
                    b = next;
                    if (a, b) == (v, w) {
                        break;
                    }
                }
                faces.push(WalkedFace {
                    id,
                    vertices: verts,
                    edges: face_edges,
                });
            }
        }

        let euler = n as i64 - edges.len() as i64 + faces.len() as i64;
        if n > 0 && euler != 2 {
            return Err(Error::NotPlanar(euler));
        }

        let mut edge_faces = vec![(usize::MAX, usize::MAX); edges.len()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            edge_faces[i] = (dart_face[&(u, v)], dart_face[&(v, u)]);
        }

        Ok(PlaneMap {
            rotations,
            edges,
            edge_ids,
            faces,
            dart_face,
            edge_faces,
            rot_pos,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn rotations(&self) -> &[Vec<VertexId>] {
        &self.rotations
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.rotations[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations[v].len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_ids.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn faces(&self) -> &[WalkedFace] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &WalkedFace {
        &self.faces[id]
    }

    /// Face to the left of the directed edge (u,v).
    pub fn face_of_dart(&self, u: VertexId, v: VertexId) -> FaceId {
        self.dart_face[&(u, v)]
    }

    /// The two faces incident to an edge.
    pub fn edge_faces(&self, e: EdgeId) -> (FaceId, FaceId) {
        self.edge_faces[e]
    }

    /// Clockwise successor of u in the rotation at v.
    pub fn succ(&self, v: VertexId, u: VertexId) -> VertexId {
        let pos = self.rot_pos[v][&u];
        self.rotations[v][(pos + 1) % self.rotations[v].len()]
    }

    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        self.rotations.clone()
    }
}

/// JSON instance format: `{"n": <int>, "rotations": [[...], ...]}` with
/// `rotations[v]` the clockwise neighbor cycle of vertex v.
#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub rotations: Vec<Vec<usize>>,
}

/// A validated plane triangulation: every face of the rotation system is a
/// 3-cycle and the usual Euler counts hold.
#[derive(Debug, Clone)]
pub struct Triangulation {
    map: PlaneMap,
}

impl Triangulation {
    pub fn new(n: usize, rotations: Vec<Vec<usize>>) -> Result<Triangulation> {
        if rotations.len() != n {
            return Err(Error::RotationLength {
                n,
                got: rotations.len(),
            });
        }
        if n < 4 {
            return Err(Error::TooFewVertices(n));
        }
        let map = PlaneMap::new(rotations)?;
        for f in map.faces() {
            if f.len() != 3 {
                return Err(Error::NonTriangularFace(f.vertices.clone()));
            }
        }
        if map.edge_count() != 3 * n - 6 || map.face_count() != 2 * n - 4 {
            return Err(Error::Internal(format!(
                "euler counts off: E={} F={} for n={}",
                map.edge_count(),
                map.face_count(),
                n
            )));
        }
        Ok(Triangulation { map })
    }

    pub fn n(&self) -> usize {
        self.map.vertex_count()
    }

    pub fn map(&self) -> &PlaneMap {
        &self.map
    }

    pub fn edge_count(&self) -> usize {
        self.map.edge_count()
    }

    pub fn face_count(&self) -> usize {
        self.map.face_count()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.map.degree(v)
    }

    pub fn to_instance(&self) -> InstanceFile {
        InstanceFile {
            n: self.n(),
            rotations: self.map.rotations().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_instance()).expect("serialize instance")
    }
}

/// A face of the triangulation: ordered vertex triple plus its edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimalFace {
    pub id: FaceId,
    pub boundary: [VertexId; 3],
    pub boundary_edges: [EdgeId; 3],
}

/// Parse a JSON instance and validate all triangulation invariants.
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let inst: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    Triangulation::new(inst.n, inst.rotations)
}

/// All faces in deterministic (discovery) order.
pub fn faces(t: &Triangulation) -> Vec<PrimalFace> {
    t.map()
        .faces()
        .iter()
        .map(|f| PrimalFace {
            id: f.id,
            boundary: [f.vertices[0], f.vertices[1], f.vertices[2]],
            boundary_edges: [f.edges[0], f.edges[1], f.edges[2]],
        })
        .collect()
}

/// Maximum vertex degree.
pub fn max_degree(t: &Triangulation) -> usize {
    (0..t.n()).map(|v| t.degree(v)).max().unwrap_or(0)
}
