//! Simple cycles in the dual: exact longest-cycle search at small scale,
//! a local-improvement heuristic at larger scale, and the orientation /
//! interior-exterior partition shared by everything downstream.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dual::DualGraph;
use crate::embedding::{EdgeId, VertexId};
use crate::error::{Error, Result};

/// A simple cycle in T* together with its interior/exterior face partition.
/// Faces are identified by primal vertex id. The stored vertex sequence is
/// rotated to its lexicographic minimum without changing direction; the
/// direction is the cycle's counterclockwise orientation, i.e. the dual face
/// to the left of each directed cycle edge is interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCycle {
    vertex_seq: Vec<VertexId>,
    edge_set: BTreeSet<EdgeId>,
    interior_faces: BTreeSet<VertexId>,
    exterior_faces: BTreeSet<VertexId>,
    counterclockwise: bool,
}

impl DualCycle {
    pub fn len(&self) -> usize {
        self.vertex_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_seq.is_empty()
    }

    pub fn vertex_seq(&self) -> &[VertexId] {
        &self.vertex_seq
    }

    pub fn edge_set(&self) -> &BTreeSet<EdgeId> {
        &self.edge_set
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edge_set.contains(&e)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertex_seq.contains(&v)
    }

    pub fn interior_faces(&self) -> &BTreeSet<VertexId> {
        &self.interior_faces
    }

    pub fn exterior_faces(&self) -> &BTreeSet<VertexId> {
        &self.exterior_faces
    }

    pub fn counterclockwise(&self) -> bool {
        self.counterclockwise
    }

    /// Side of a dual face (by primal vertex id): 0 interior, 1 exterior.
    pub fn side_of_face(&self, v: VertexId) -> usize {
        if self.interior_faces.contains(&v) {
            0
        } else {
            1
        }
    }

    /// Cycle edges in traversal order; edge i joins seq[i] and seq[i+1].
    pub fn edges_in_order(&self, d: &DualGraph) -> Vec<EdgeId> {
        let l = self.vertex_seq.len();
        (0..l)
            .map(|i| {
                d.map()
                    .edge_id(self.vertex_seq[i], self.vertex_seq[(i + 1) % l])
                    .expect("cycle edge")
            })
            .collect()
    }
}

/// Cycle file format: `{"cycle": [<dual vertex ids>...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CycleFile {
    pub cycle: Vec<usize>,
}

/// Rotate a cyclic sequence to its lexicographically smallest rotation,
/// keeping direction.
pub fn canonical_rotation(seq: &[usize]) -> Vec<usize> {
    let l = seq.len();
    if l == 0 {
        return Vec::new();
    }
    let mut best = 0usize;
    for s in 1..l {
        for k in 0..l {
            let a = seq[(s + k) % l];
            let b = seq[(best + k) % l];
            if a != b {
                if a < b {
                    best = s;
                }
                break;
            }
        }
    }
    (0..l).map(|k| seq[(best + k) % l]).collect()
}

/// Canonical form over rotation and reflection: the lexicographically
/// smallest among all rotations of the sequence and of its reversal.
pub fn canonical_form(seq: &[usize]) -> Vec<usize> {
    let fwd = canonical_rotation(seq);
    let mut rev: Vec<usize> = seq.to_vec();
    rev.reverse();
    let rev = canonical_rotation(&rev);
    if rev < fwd {
        rev
    } else {
        fwd
    }
}

/// Validate a closed walk as a simple cycle in the dual and compute the
/// interior/exterior partition of dual faces. The given direction is kept:
/// faces left of the walk become the interior.
pub fn orient_and_partition(d: &DualGraph, seq: &[VertexId]) -> Result<DualCycle> {
    let l = seq.len();
    if l < 3 {
        return Err(Error::InvalidCycle(format!("length {l} < 3")));
    }
    let mut seen = BTreeSet::new();
    for &v in seq {
        if v >= d.vertex_count() {
            return Err(Error::InvalidCycle(format!("vertex {v} out of range")));
        }
        if !seen.insert(v) {
            return Err(Error::InvalidCycle(format!("not simple: vertex {v} repeats")));
        }
    }
    let mut edge_set = BTreeSet::new();
    for i in 0..l {
        let (u, v) = (seq[i], seq[(i + 1) % l]);
        match d.map().edge_id(u, v) {
            Some(e) => {
                edge_set.insert(e);
            }
            None => {
                return Err(Error::InvalidCycle(format!("{u}-{v} is not a dual edge")));
            }
        }
    }

    // Flood fill over dual faces, blocked by cycle edges.
    let nf = d.face_count();
    let mut comp = vec![usize::MAX; nf];
    let mut ncomp = 0;
    for start in 0..nf {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = ncomp;
        ncomp += 1;
        let mut stack = vec![start];
        comp[start] = id;
        while let Some(f) = stack.pop() {
            for &e in &d.map().face(f).edges {
                if edge_set.contains(&e) {
                    continue;
                }
                let (fa, fb) = d.map().edge_faces(e);
                let g = if fa == f { fb } else { fa };
                if comp[g] == usize::MAX {
                    comp[g] = id;
                    stack.push(g);
                }
            }
        }
    }
    if ncomp != 2 {
        return Err(Error::Internal(format!(
            "cycle splits dual faces into {ncomp} regions, expected 2"
        )));
    }

    // Left faces of the directed walk must all fall in one region.
    let left0 = comp[d.map().face_of_dart(seq[0], seq[1])];
    for i in 0..l {
        let f = d.map().face_of_dart(seq[i], seq[(i + 1) % l]);
        if comp[f] != left0 {
            return Err(Error::Internal(
                "left faces of cycle darts straddle both regions".into(),
            ));
        }
    }

    let mut interior_faces = BTreeSet::new();
    let mut exterior_faces = BTreeSet::new();
    for f in 0..nf {
        let v = d.vertex_of_face(f);
        if comp[f] == left0 {
            interior_faces.insert(v);
        } else {
            exterior_faces.insert(v);
        }
    }

    Ok(DualCycle {
        vertex_seq: canonical_rotation(seq),
        edge_set,
        interior_faces,
        exterior_faces,
        counterclockwise: true,
    })
}

/// Budget for the exact search. `max_nodes` gives deterministic truncation;
/// `time_limit` is a wall-clock guard for CLI use.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn with_time_limit(secs: f64) -> Self {
        SearchBudget {
            max_nodes: None,
            time_limit: Some(Duration::from_secs_f64(secs)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycleSearch {
    pub cycle: DualCycle,
    /// False when the budget expired before the search space was exhausted.
    pub optimal: bool,
    pub nodes_expanded: u64,
}

struct ExactSearch<'a> {
    adj: &'a [Vec<usize>],
    budget: SearchBudget,
    start_time: Instant,
    nodes: u64,
    exhausted: bool,
    best_len: usize,
    best_seq: Vec<usize>,
    on_path: Vec<bool>,
    path: Vec<usize>,
}

impl<'a> ExactSearch<'a> {
    fn budget_ok(&mut self) -> bool {
        if let Some(m) = self.budget.max_nodes {
            if self.nodes >= m {
                self.exhausted = false;
                return false;
            }
        }
        if let Some(t) = self.budget.time_limit {
            if self.nodes % 4096 == 0 && self.start_time.elapsed() > t {
                self.exhausted = false;
                return false;
            }
        }
        true
    }

    fn record(&mut self, seq: &[usize]) {
        let cand = canonical_form(seq);
        if seq.len() > self.best_len || (seq.len() == self.best_len && cand < self.best_seq) {
            self.best_len = seq.len();
            self.best_seq = cand;
        }
    }

    /// Vertices reachable from `from` through unvisited vertices >= root
    /// (the root itself counts as reachable when adjacent through them).
    fn reachable_bound(&self, from: usize, root: usize) -> (usize, bool) {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from] = true;
        let mut count = 0usize;
        let mut hits_root = false;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if w == root {
                    hits_root = true;
                    continue;
                }
                if w < root || self.on_path[w] || seen[w] {
                    continue;
                }
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
        (count, hits_root)
    }

    fn dfs(&mut self, root: usize) {
        self.nodes += 1;
        if !self.budget_ok() {
            return;
        }
        let cur = *self.path.last().unwrap();
        let (extra, hits_root) = self.reachable_bound(cur, root);
        if !hits_root && !(self.path.len() >= 3 && self.adj[cur].contains(&root)) {
            return;
        }
        if self.path.len() + extra < self.best_len {
            return;
        }
        if self.path.len() >= 3 && self.adj[cur].contains(&root) && self.path[1] < cur {
            let seq = self.path.clone();
            self.record(&seq);
        }
        let nbrs: Vec<usize> = self.adj[cur].to_vec();
        for w in nbrs {
            if w <= root || self.on_path[w] {
                continue;
            }
            self.path.push(w);
            self.on_path[w] = true;
            self.dfs(root);
            self.on_path[w] = false;
            self.path.pop();
        }
    }
}

/// Exact maximum-length simple cycle by DFS with reachability pruning.
/// Deterministic: ties are broken by the lexicographically smallest canonical
/// vertex sequence. Under an expired budget the best cycle found so far is
/// returned with `optimal = false`.
pub fn longest_cycle_exact(d: &DualGraph, budget: SearchBudget) -> Result<CycleSearch> {
    let adj = d.map().adjacency();
    let n = adj.len();
    let mut search = ExactSearch {
        adj: &adj,
        budget,
        start_time: Instant::now(),
        nodes: 0,
        exhausted: true,
        best_len: 0,
        best_seq: Vec::new(),
        on_path: vec![false; n],
        path: Vec::new(),
    };
    for root in 0..n {
        if n - root < search.best_len {
            break;
        }
        search.path.clear();
        search.path.push(root);
        search.on_path = vec![false; n];
        search.on_path[root] = true;
        search.dfs(root);
        if !search.exhausted {
            break;
        }
    }
    if search.best_len < 3 {
        return Err(Error::Internal("no cycle found in cubic dual".into()));
    }
    let cycle = orient_and_partition(d, &search.best_seq.clone())?;
    Ok(CycleSearch {
        cycle,
        optimal: search.exhausted,
        nodes_expanded: search.nodes,
    })
}

/// Reference implementations used by the test and acceptance suites.
pub mod oracle {
    use super::canonical_form;
    use std::collections::BTreeSet;

    /// Enumerate every simple cycle of the graph, each once, in canonical
    /// form. Exponential; intended for graphs with at most ~14 vertices.
    pub fn enumerate_simple_cycles(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let n = adj.len();
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut path: Vec<usize> = Vec::new();
        let mut on_path = vec![false; n];

        fn dfs(
            adj: &[Vec<usize>],
            root: usize,
            path: &mut Vec<usize>,
            on_path: &mut Vec<bool>,
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            let cur = *path.last().unwrap();
            for &w in &adj[cur] {
                if w == root && path.len() >= 3 {
                    out.insert(canonical_form(path));
                }
                if w <= root || on_path[w] {
                    continue;
                }
                path.push(w);
                on_path[w] = true;
                dfs(adj, root, path, on_path, out);
                on_path[w] = false;
                path.pop();
            }
        }

        for root in 0..n {
            path.clear();
            path.push(root);
            on_path.iter_mut().for_each(|b| *b = false);
            on_path[root] = true;
            dfs(adj, root, &mut path, &mut on_path, &mut out);
        }
        out.into_iter().collect()
    }

    /// Longest cycle by exhaustive enumeration; ties resolved by canonical
    /// lexicographic order.
    pub fn longest_cycle_bruteforce(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
        enumerate_simple_cycles(adj)
            .into_iter()
            .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
    }
}

/// Local-improvement heuristic: start from a longest facial boundary and
/// repeatedly reroute the cycle around a face that currently meets it in a
/// single arc, whenever the detour is longer. Deterministic per seed.
pub fn long_cycle_heuristic(d: &DualGraph, seed: u64) -> Result<DualCycle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let map = d.map();

    // longest facial boundary, ties by smallest corresponding primal vertex
    let mut best_face = 0usize;
    for f in 0..map.face_count() {
        let better = map.face(f).len() > map.face(best_face).len()
            || (map.face(f).len() == map.face(best_face).len()
                && d.vertex_of_face(f) < d.vertex_of_face(best_face));
        if better {
            best_face = f;
        }
    }
    let mut seq: Vec<usize> = map.face(best_face).vertices.clone();

    loop {
        let on_cycle: BTreeSet<usize> = seq.iter().copied().collect();
        let edge_set: BTreeSet<EdgeId> = {
            let l = seq.len();
            (0..l)
                .map(|i| map.edge_id(seq[i], seq[(i + 1) % l]).unwrap())
                .collect()
        };

        let mut face_order: Vec<usize> = (0..map.face_count()).collect();
        face_order.shuffle(&mut rng);

        let mut improved = false;
        'faces: for &f in &face_order {
            let fb = map.face(f);
            let k = fb.len();
            // positions of boundary edges on the cycle
            let on: Vec<bool> = fb.edges.iter().map(|e| edge_set.contains(e)).collect();
            let arc_edges = on.iter().filter(|&&b| b).count();
            if arc_edges == 0 || arc_edges == k {
                continue;
            }
            // single contiguous run?
            let mut runs = 0;
            for i in 0..k {
                if on[i] && !on[(i + k - 1) % k] {
                    runs += 1;
                }
            }
            if runs != 1 {
                continue;
            }
            let detour_len = k - arc_edges;
            if detour_len <= arc_edges {
                continue;
            }
            // run start position
            let start = (0..k)
                .find(|&i| on[i] && !on[(i + k - 1) % k])
                .unwrap();
            // arc vertices: fb.vertices[start..=start+arc_edges]; interior
            // vertices of the complementary path must avoid the cycle
            for off in (arc_edges + 1)..k {
                let v = fb.vertices[(start + off) % k];
                if on_cycle.contains(&v) {
                    continue 'faces;
                }
            }
            let arc_first = fb.vertices[start];
            let arc_last = fb.vertices[(start + arc_edges) % k];
            // complement runs arc_last, interior..., arc_first along the face
            let complement: Vec<usize> = (arc_edges..=k)
                .map(|off| fb.vertices[(start + off) % k])
                .collect();
            let interior = &complement[1..complement.len() - 1];
            let l = seq.len();
            let pf = seq.iter().position(|&v| v == arc_first).unwrap();
            let mut new_seq: Vec<usize> = Vec::with_capacity(l - arc_edges + detour_len);
            if seq[(pf + arc_edges) % l] == arc_last {
                // outer part arc_last..arc_first, then interior reversed
                let mut i = (pf + arc_edges) % l;
                loop {
                    new_seq.push(seq[i]);
                    if i == pf {
                        break;
                    }
                    i = (i + 1) % l;
                }
                new_seq.extend(interior.iter().rev());
            } else if seq[(pf + l - arc_edges) % l] == arc_last {
                // outer part arc_first..arc_last, then interior as-is
                let back = (pf + l - arc_edges) % l;
                let mut i = pf;
                loop {
                    new_seq.push(seq[i]);
                    if i == back {
                        break;
                    }
                    i = (i + 1) % l;
                }
                new_seq.extend(interior.iter());
            } else {
                continue; // arc not contiguous on the cycle; skip
            }
            debug_assert_eq!(new_seq.len(), l - arc_edges + detour_len);
            seq = new_seq;
            improved = true;
            break;
        }
        if !improved {
            break;
        }
    }

    orient_and_partition(d, &canonical_form(&seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::dualize;
    use crate::generate::{self, Kind};

    fn dual_of(kind: Kind) -> DualGraph {
        dualize(&generate::generate(kind).unwrap().triangulation).unwrap()
    }

    #[test]
    fn tetra_dual_longest_cycle_is_4() {
        let d = dual_of(Kind::Tetrahedron);
        let res = longest_cycle_exact(&d, SearchBudget::unlimited()).unwrap();
        assert!(res.optimal);
        assert_eq!(res.cycle.len(), 4);
    }

    #[test]
    fn cube_longest_cycle_is_8() {
        let d = dual_of(Kind::Octahedron);
        let res = longest_cycle_exact(&d, SearchBudget::unlimited()).unwrap();
        assert!(res.optimal);
        assert_eq!(res.cycle.len(), 8);
        // Hamiltonian cube cycle splits the 6 faces 3 / 3
        assert_eq!(res.cycle.interior_faces().len(), 3);
        assert_eq!(res.cycle.exterior_faces().len(), 3);
    }

    #[test]
    fn dodecahedron_longest_cycle_is_20() {
        let d = dual_of(Kind::Icosahedron);
        let res = longest_cycle_exact(&d, SearchBudget::unlimited()).unwrap();
        assert!(res.optimal);
        assert_eq!(res.cycle.len(), 20);
    }

    #[test]
    fn exact_matches_bruteforce_on_small_duals() {
        for kind in [
            Kind::Tetrahedron,
            Kind::Octahedron,
            Kind::RandomStacked { n: 7, seed: 1 },
            Kind::RandomStacked { n: 8, seed: 2 },
        ] {
            let d = dual_of(kind);
            if d.vertex_count() > 14 {
                continue;
            }
            let exact = longest_cycle_exact(&d, SearchBudget::unlimited()).unwrap();
            let brute = oracle::longest_cycle_bruteforce(&d.map().adjacency()).unwrap();
            assert_eq!(exact.cycle.len(), brute.len());
            assert_eq!(canonical_form(exact.cycle.vertex_seq()), brute);
        }
    }

    #[test]
    fn facial_cycle_partition_of_k4_dual() {
        let d = dual_of(Kind::Tetrahedron);
        // boundary walk of some dual face, passed in its own direction
        let f = d.map().face(0).vertices.clone();
        let c = orient_and_partition(&d, &f).unwrap();
        assert_eq!(c.interior_faces().len(), 1);
        assert_eq!(c.exterior_faces().len(), 3);
        assert!(c
            .interior_faces()
            .contains(&d.vertex_of_face(0)));
    }

    #[test]
    fn rejects_repeated_vertex() {
        let d = dual_of(Kind::Octahedron);
        let mut seq = d.map().face(0).vertices.clone();
        seq.push(seq[0]);
        assert!(matches!(
            orient_and_partition(&d, &seq),
            Err(Error::InvalidCycle(_))
        ));
    }

    #[test]
    fn heuristic_valid_and_deterministic() {
        let d = dual_of(Kind::RandomStacked { n: 60, seed: 11 });
        let a = long_cycle_heuristic(&d, 0).unwrap();
        let b = long_cycle_heuristic(&d, 0).unwrap();
        assert_eq!(a.vertex_seq(), b.vertex_seq());
        // validated by construction; also: faces partition
        assert_eq!(
            a.interior_faces().len() + a.exterior_faces().len(),
            d.face_count()
        );
        let girth_witness = d.map().faces().iter().map(|f| f.len()).min().unwrap();
        assert!(a.len() >= girth_witness);
    }

    #[test]
    fn heuristic_on_cube_reaches_at_least_girth() {
        let d = dual_of(Kind::Octahedron);
        let c = long_cycle_heuristic(&d, 0).unwrap();
        assert!(c.len() >= 4);
        let c1 = long_cycle_heuristic(&d, 1).unwrap();
        assert!(c1.len() >= 4);
    }

    #[test]
    fn canonical_form_invariance() {
        let seq = vec![3usize, 7, 2, 9, 4];
        let c = canonical_form(&seq);
        let mut rot = seq.clone();
        rot.rotate_left(2);
        assert_eq!(canonical_form(&rot), c);
        let mut rev = seq;
        rev.reverse();
        assert_eq!(canonical_form(&rev), c);
    }
}
