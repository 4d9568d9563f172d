//! The plane dual T* of a triangulation T.
//!
//! Dual vertices reuse primal face ids and dual faces reuse primal vertex
//! ids, so "face of T* around vertex v" is an identity lookup. The dual of a
//! triangulation is cubic; for n >= 4 it is 3-connected and any two of its
//! faces share at most one edge.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embedding::{EdgeId, FaceId, PlaneMap, Triangulation, VertexId, WalkedFace};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DualGraph {
    map: PlaneMap,
    /// dual edge id -> primal edge id (bijection).
    edge_corr: Vec<EdgeId>,
    /// primal edge id -> dual edge id (inverse).
    primal_to_dual: Vec<EdgeId>,
    /// primal vertex id -> face id in the dual plane map.
    face_by_vertex: Vec<FaceId>,
    /// dual plane-map face id -> primal vertex id.
    vertex_by_face: Vec<VertexId>,
}

impl DualGraph {
    /// Underlying plane map; its vertices are primal face ids.
    pub fn map(&self) -> &PlaneMap {
        &self.map
    }

    pub fn vertex_count(&self) -> usize {
        self.map.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.map.edge_count()
    }

    pub fn face_count(&self) -> usize {
        self.map.face_count()
    }

    /// Boundary of the dual face corresponding to primal vertex v.
    pub fn face_of_vertex(&self, v: VertexId) -> &WalkedFace {
        self.map.face(self.face_by_vertex[v])
    }

    /// Primal vertex whose dual face is the given plane-map face.
    pub fn vertex_of_face(&self, f: FaceId) -> VertexId {
        self.vertex_by_face[f]
    }

    pub fn primal_edge(&self, dual_edge: EdgeId) -> EdgeId {
        self.edge_corr[dual_edge]
    }

    pub fn dual_edge(&self, primal_edge: EdgeId) -> EdgeId {
        self.primal_to_dual[primal_edge]
    }

    pub fn edge_corr(&self) -> &[EdgeId] {
        &self.edge_corr
    }

    /// The two dual faces flanking a dual edge, as primal vertex ids. These
    /// are exactly the endpoints of the crossed primal edge.
    pub fn flanking_vertices(&self, dual_edge: EdgeId) -> (VertexId, VertexId) {
        let (fa, fb) = self.map.edge_faces(dual_edge);
        (self.vertex_by_face[fa], self.vertex_by_face[fb])
    }
}

/// JSON emitted by the `dualize` CLI subcommand.
#[derive(Debug, Serialize)]
pub struct DualFile {
    pub n: usize,
    pub rotations: Vec<Vec<usize>>,
    pub edge_corr: Vec<[usize; 2]>,
}

impl DualGraph {
    pub fn to_file(&self) -> DualFile {
        DualFile {
            n: self.vertex_count(),
            rotations: self.map.rotations().to_vec(),
            edge_corr: self
                .edge_corr
                .iter()
                .enumerate()
                .map(|(d, &p)| [d, p])
                .collect(),
        }
    }
}

/// Build the plane dual of a triangulation.
pub fn dualize(t: &Triangulation) -> Result<DualGraph> {
    let pm = t.map();
    let nf = pm.face_count();

    // Clockwise rotation at a dual vertex f: faces across f's boundary darts,
    // in reverse walk order.
    let mut rotations: Vec<Vec<usize>> = Vec::with_capacity(nf);
    for f in pm.faces() {
        let k = f.len();
        let mut opp = Vec::with_capacity(k);
        for i in 0..k {
            let (u, v) = (f.vertices[i], f.vertices[(i + 1) % k]);
            opp.push(pm.face_of_dart(v, u));
        }
        opp.reverse();
        rotations.push(opp);
    }

    let map = PlaneMap::new(rotations)
        .map_err(|e| Error::Internal(format!("dual map invalid: {e}")))?;

    for v in 0..map.vertex_count() {
        if map.degree(v) != 3 {
            return Err(Error::Internal(format!("dual vertex {v} not cubic")));
        }
    }
    if map.face_count() != t.n() {
        return Err(Error::Internal(format!(
            "dual has {} faces, expected n = {}",
            map.face_count(),
            t.n()
        )));
    }

    // Edge correspondence: primal edge {u,v} <-> dual edge between the faces
    // on its two sides.
    let mut primal_to_dual = vec![usize::MAX; pm.edge_count()];
    let mut edge_corr = vec![usize::MAX; map.edge_count()];
    for (pe, &(u, v)) in pm.edges().iter().enumerate() {
        let fa = pm.face_of_dart(u, v);
        let fb = pm.face_of_dart(v, u);
        let de = map
            .edge_id(fa, fb)
            .ok_or_else(|| Error::Internal(format!("no dual edge for primal {pe}")))?;
        if edge_corr[de] != usize::MAX {
            return Err(Error::Internal(format!(
                "dual edge {de} hit twice; correspondence not bijective"
            )));
        }
        edge_corr[de] = pe;
        primal_to_dual[pe] = de;
    }
    if edge_corr.iter().any(|&e| e == usize::MAX) {
        return Err(Error::Internal("edge correspondence not total".into()));
    }

    // Each dual face corresponds to the unique primal vertex common to all
    // the primal faces on its boundary.
    let mut vertex_by_face = vec![usize::MAX; map.face_count()];
    let mut face_by_vertex = vec![usize::MAX; t.n()];
    for df in map.faces() {
        let mut common: Option<BTreeMap<usize, ()>> = None;
        for &pv in &df.vertices {
            let verts: BTreeMap<usize, ()> = pm.face(pv)
                .vertices
                .iter()
                .map(|&x| (x, ()))
                .collect();
            common = Some(match common {
                None => verts,
                Some(prev) => prev
                    .into_iter()
                    .filter(|(k, _)| verts.contains_key(k))
                    .collect(),
            });
        }
        let common = common.unwrap_or_default();
        if common.len() != 1 {
            return Err(Error::Internal(format!(
                "dual face {} has {} common primal vertices",
                df.id,
                common.len()
            )));
        }
        let v = *common.keys().next().unwrap();
        if df.len() != t.degree(v) {
            return Err(Error::Internal(format!(
                "dual face of vertex {v} has length {} != deg {}",
                df.len(),
                t.degree(v)
            )));
        }
        if face_by_vertex[v] != usize::MAX {
            return Err(Error::Internal(format!(
                "primal vertex {v} matched two dual faces"
            )));
        }
        vertex_by_face[df.id] = v;
        face_by_vertex[v] = df.id;
    }

    Ok(DualGraph {
        map,
        edge_corr,
        primal_to_dual,
        face_by_vertex,
        vertex_by_face,
    })
}

/// Exhaustive 3-connectivity test on an adjacency structure: true iff the
/// graph stays connected after removing any two vertices.
pub fn three_connected_adjacency(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n < 4 {
        return false;
    }
    let connected_without = |removed: [usize; 2]| -> bool {
        let start = (0..n).find(|v| !removed.contains(v)).unwrap();
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !removed.contains(&w) && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n - 2
    };
    for a in 0..n {
        for b in (a + 1)..n {
            if !connected_without([a, b]) {
                return false;
            }
        }
    }
    true
}

/// Brute-force 3-connectivity of the dual.
pub fn check_three_connected(d: &DualGraph) -> bool {
    three_connected_adjacency(&d.map().adjacency())
}

/// Witness for a violation of the one-shared-edge property.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SharedEdgeViolation {
    /// The two faces (as plane-map face ids) sharing more than one edge.
    pub faces: (FaceId, FaceId),
    pub shared_edges: Vec<EdgeId>,
}

/// Check that every pair of faces of the map shares at most one edge.
pub fn shared_edge_bound(map: &PlaneMap) -> std::result::Result<(), SharedEdgeViolation> {
    let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in 0..map.edge_count() {
        let (fa, fb) = map.edge_faces(e);
        by_pair
            .entry((fa.min(fb), fa.max(fb)))
            .or_default()
            .push(e);
    }
    for (pair, edges) in by_pair {
        if edges.len() > 1 {
            return Err(SharedEdgeViolation {
                faces: pair,
                shared_edges: edges,
            });
        }
    }
    Ok(())
}

/// One-shared-edge check on the dual of a triangulation.
pub fn verify_shared_edge_bound(d: &DualGraph) -> bool {
    shared_edge_bound(d.map()).is_ok()
}
