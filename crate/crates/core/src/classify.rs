//! Classification of dual faces against a cycle C: a face f is touched when
//! f and C intersect, pinched when the intersection is the whole boundary
//! cycle or has two or more connected components, and caressed when it is
//! touched but not pinched. Counts tau / rho / kappa are kept globally and
//! per side of C.

use serde::Serialize;

use crate::cycles::DualCycle;
use crate::dual::DualGraph;
use crate::embedding::{EdgeId, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceStatus {
    Untouched,
    Caressed,
    Pinched,
}

/// One connected component of f expressed along f's boundary walk: the
/// cycle vertices it contains and the cycle edges joining them. An isolated
/// cycle vertex yields a component with one vertex and no edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceComponent {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Intersection of one dual face with the cycle.
#[derive(Debug, Clone, Serialize)]
pub struct FaceTrace {
    /// Dual face id = primal vertex id.
    pub face: VertexId,
    pub components: Vec<TraceComponent>,
    /// True when the whole boundary of the face lies on the cycle.
    pub is_full_cycle: bool,
}

impl FaceTrace {
    pub fn status(&self) -> FaceStatus {
        if self.components.is_empty() {
            FaceStatus::Untouched
        } else if self.is_full_cycle || self.components.len() >= 2 {
            FaceStatus::Pinched
        } else {
            FaceStatus::Caressed
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SideCounts {
    pub tau: usize,
    pub rho: usize,
    pub kappa: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    /// Status per dual face, indexed by primal vertex id.
    pub status: Vec<FaceStatus>,
    pub tau: usize,
    pub rho: usize,
    pub kappa: usize,
    /// Index 0 = interior of C, index 1 = exterior.
    pub per_side: [SideCounts; 2],
}

impl Classification {
    pub fn caressed_faces(&self) -> Vec<VertexId> {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == FaceStatus::Caressed)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn pinched_faces(&self) -> Vec<VertexId> {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == FaceStatus::Pinched)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Connected components of f along the boundary walk of the dual face of
/// primal vertex `v`.
pub fn trace_face(d: &DualGraph, c: &DualCycle, v: VertexId) -> FaceTrace {
    let f = d.face_of_vertex(v);
    let k = f.len();
    let on_vertex: Vec<bool> = f.vertices.iter().map(|&x| c.contains_vertex(x)).collect();
    let on_edge: Vec<bool> = f.edges.iter().map(|&e| c.contains_edge(e)).collect();

    if on_edge.iter().all(|&b| b) {
        return FaceTrace {
            face: v,
            components: vec![TraceComponent {
                vertices: f.vertices.clone(),
                edges: f.edges.clone(),
            }],
            is_full_cycle: true,
        };
    }

    let mut components = Vec::new();
    for i in 0..k {
        // a component starts at a marked vertex whose incoming edge is unmarked
        if !on_vertex[i] || on_edge[(i + k - 1) % k] {
            continue;
        }
        let mut vertices = vec![f.vertices[i]];
        let mut edges = Vec::new();
        let mut j = i;
        while on_edge[j] {
            edges.push(f.edges[j]);
            j = (j + 1) % k;
            vertices.push(f.vertices[j]);
        }
        components.push(TraceComponent { vertices, edges });
    }

    FaceTrace {
        face: v,
        components,
        is_full_cycle: false,
    }
}

/// Classify every dual face against the cycle.
pub fn classify(d: &DualGraph, c: &DualCycle) -> Classification {
    let n = d.face_count();
    let mut status = Vec::with_capacity(n);
    let mut tau = 0;
    let mut rho = 0;
    let mut kappa = 0;
    let mut per_side = [SideCounts::default(); 2];
    for v in 0..n {
        let s = trace_face(d, c, v).status();
        let side = c.side_of_face(v);
        match s {
            FaceStatus::Untouched => {}
            FaceStatus::Caressed => {
                tau += 1;
                kappa += 1;
                per_side[side].tau += 1;
                per_side[side].kappa += 1;
            }
            FaceStatus::Pinched => {
                tau += 1;
                rho += 1;
                per_side[side].tau += 1;
                per_side[side].rho += 1;
            }
        }
        status.push(s);
    }
    debug_assert_eq!(tau, rho + kappa);
    Classification {
        status,
        tau,
        rho,
        kappa,
        per_side,
    }
}

/// A cycle of length l in the dual of a triangulation with maximum degree
/// `max_degree` touches at least 2l/max_degree faces, at least l/max_degree
/// on each side. Exact integer arithmetic.
pub fn check_touched_lower_bound(
    max_degree: usize,
    cls: &Classification,
    c: &DualCycle,
) -> bool {
    let l = c.len();
    cls.tau * max_degree >= 2 * l
        && cls.per_side[0].tau * max_degree >= l
        && cls.per_side[1].tau * max_degree >= l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::orient_and_partition;
    use crate::dual::dualize;
    use crate::embedding::max_degree;
    use crate::generate::{self, Kind};

    fn tetra_dual() -> (crate::embedding::Triangulation, DualGraph) {
        let t = generate::generate(Kind::Tetrahedron).unwrap().triangulation;
        let d = dualize(&t).unwrap();
        (t, d)
    }

    #[test]
    fn facial_cycle_on_k4_dual() {
        let (t, d) = tetra_dual();
        let seq = d.map().face(0).vertices.clone();
        let c = orient_and_partition(&d, &seq).unwrap();
        // the bounded face is pinched (full boundary), the other 3 caressed
        let cls = classify(&d, &c);
        assert_eq!(cls.tau, 4);
        assert_eq!(cls.rho, 1);
        assert_eq!(cls.kappa, 3);
        let inner = d.vertex_of_face(0);
        assert_eq!(cls.status[inner], FaceStatus::Pinched);
        let tr = trace_face(&d, &c, inner);
        assert!(tr.is_full_cycle);
        assert_eq!(tr.components.len(), 1);
        // any other face meets C in one component (an edge with endpoints)
        for v in 0..d.face_count() {
            if v == inner {
                continue;
            }
            let tr = trace_face(&d, &c, v);
            assert_eq!(tr.components.len(), 1);
            assert_eq!(tr.components[0].edges.len(), 1);
        }
        assert!(check_touched_lower_bound(max_degree(&t), &cls, &c));
    }

    #[test]
    fn cube_hamiltonian_opposite_edges_face() {
        let t = generate::generate(Kind::Octahedron).unwrap().triangulation;
        let d = dualize(&t).unwrap();
        let res = crate::cycles::longest_cycle_exact(&d, Default::default()).unwrap();
        let c = res.cycle;
        assert_eq!(c.len(), 8);
        // every face of the cube has 4 edges; a Hamiltonian cycle uses 8 of
        // the 12 edges, so each face carries 8*2/6 > 2 on average; some face
        // meets the cycle in two opposite edges = two components
        let two_comp = (0..d.face_count())
            .map(|v| trace_face(&d, &c, v))
            .filter(|tr| tr.components.len() == 2)
            .count();
        assert!(two_comp > 0);
        let cls = classify(&d, &c);
        assert_eq!(cls.tau, cls.rho + cls.kappa);
        assert!(check_touched_lower_bound(max_degree(&t), &cls, &c));
    }

    #[test]
    fn serpentine_kappa_is_four() {
        for k in [4usize, 6, 9] {
            let gen = generate::generate(Kind::Serpentine { k }).unwrap();
            let t = gen.triangulation;
            let d = dualize(&t).unwrap();
            let c = orient_and_partition(&d, &gen.canonical_cycle.unwrap()).unwrap();
            let cls = classify(&d, &c);
            assert_eq!(cls.kappa, 4, "serpentine({k})");
            assert_eq!(cls.per_side[0].kappa, 2);
            assert_eq!(cls.per_side[1].kappa, 2);
        }
    }

    #[test]
    fn status_invariant_under_rotation_and_reflection() {
        let gen = generate::generate(Kind::Serpentine { k: 5 }).unwrap();
        let d = dualize(&gen.triangulation).unwrap();
        let seq = gen.canonical_cycle.unwrap();
        let base = classify(&d, &orient_and_partition(&d, &seq).unwrap());

        let mut rot = seq.clone();
        rot.rotate_left(3);
        let cls_rot = classify(&d, &orient_and_partition(&d, &rot).unwrap());
        assert_eq!(base.status, cls_rot.status);
        assert_eq!(base.per_side, cls_rot.per_side);

        let mut rev = seq;
        rev.reverse();
        let cls_rev = classify(&d, &orient_and_partition(&d, &rev).unwrap());
        assert_eq!(base.status, cls_rev.status);
        // reflection swaps interior and exterior
        assert_eq!(base.per_side[0], cls_rev.per_side[1]);
        assert_eq!(base.per_side[1], cls_rev.per_side[0]);
    }

    /// Independent oracle: rasterize f as boundary items and union-find
    /// them together, instead of walking runs.
    fn union_find_status(d: &DualGraph, c: &DualCycle, v: usize) -> FaceStatus {
        let f = d.face_of_vertex(v);
        let k = f.len();
        let mut parent: Vec<usize> = (0..2 * k).collect(); // vertex i, edge k+i
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut items = Vec::new();
        for i in 0..k {
            if c.contains_vertex(f.vertices[i]) {
                items.push(i);
            }
            if c.contains_edge(f.edges[i]) {
                items.push(k + i);
                // edge i connects vertices i and i+1
                let a = find(&mut parent, i);
                let b = find(&mut parent, k + i);
                parent[a] = b;
                let a = find(&mut parent, (i + 1) % k);
                let b = find(&mut parent, k + i);
                parent[a] = b;
            }
        }
        if items.is_empty() {
            return FaceStatus::Untouched;
        }
        let mut roots = std::collections::BTreeSet::new();
        for &it in &items {
            roots.insert(find(&mut parent, it));
        }
        let full = (0..k).all(|i| c.contains_edge(f.edges[i]));
        if full || roots.len() >= 2 {
            FaceStatus::Pinched
        } else {
            FaceStatus::Caressed
        }
    }

    #[test]
    fn statuses_match_union_find_oracle() {
        for kind in [
            Kind::Tetrahedron,
            Kind::Octahedron,
            Kind::Serpentine { k: 6 },
            Kind::RandomStacked { n: 14, seed: 9 },
            Kind::RandomFlip { n: 14, flips: 20, seed: 9 },
        ] {
            let t = generate::generate(kind).unwrap().triangulation;
            let d = dualize(&t).unwrap();
            let c = crate::cycles::long_cycle_heuristic(&d, 2).unwrap();
            let cls = classify(&d, &c);
            for v in 0..d.face_count() {
                assert_eq!(cls.status[v], union_find_status(&d, &c, v), "face {v}");
            }
        }
    }
}
