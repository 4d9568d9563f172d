//! Auxiliary graphs over a classified cycle: H (cycle edges plus pinched-face
//! boundaries), the keeper chord paths, the reduced graph H~' and the two
//! side trees T0 (interior) and T1 (exterior), with per-node statistics and
//! badness levels, plus runnable checkers for the structural lemmas.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::classify::{Classification, FaceStatus};
use crate::cycles::DualCycle;
use crate::dual::DualGraph;
use crate::embedding::{EdgeId, VertexId};
use crate::error::{Error, Result};

pub const INTERIOR: usize = 0;
pub const EXTERIOR: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecialKind {
    A,
    B,
    Y,
}

/// A chord path in the dual: endpoints on C, internal vertices off C.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChordPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// A keeper: a chord path along a pinched face boundary from a Type A
/// special vertex to a Type B special vertex with no internal specials.
#[derive(Debug, Clone, Serialize)]
pub struct Keeper {
    pub path: ChordPath,
    /// 0 when the keeper lies inside C, 1 outside.
    pub side: usize,
    /// Pinched faces whose boundary contains the whole keeper.
    pub faces: Vec<VertexId>,
}

/// An arc of C between two consecutive keeper endpoints (a B-labelled edge
/// of the reduced graph H~').
#[derive(Debug, Clone, Serialize)]
pub struct BArc {
    pub from: VertexId,
    pub to: VertexId,
    pub edges: Vec<EdgeId>,
}

/// The reduced graph H~' (H~ with degree-2 vertices suppressed): its
/// vertices are the keeper endpoints, its edges split into B (arcs of C)
/// and the keepers, labelled E0 or E1 by `Keeper::side`. Absent when the
/// cycle has no keepers at all.
#[derive(Debug, Clone, Serialize)]
pub struct HPrime {
    pub vertices: Vec<VertexId>,
    pub b_arcs: Vec<BArc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuxGraphs {
    /// Edges of H: cycle edges plus all edges on pinched face boundaries.
    pub h_edges: BTreeSet<EdgeId>,
    /// Per pinched face: its special vertices in boundary-walk order.
    pub specials: BTreeMap<VertexId, Vec<(VertexId, SpecialKind)>>,
    pub keepers: Vec<Keeper>,
    /// Edges of H~: cycle edges plus all keeper edges.
    pub htilde_edges: BTreeSet<EdgeId>,
    pub hprime: Option<HPrime>,
}

/// Build H, the specials, the keepers and H~'.
pub fn build_aux(d: &DualGraph, c: &DualCycle, cls: &Classification) -> Result<AuxGraphs> {
    let mut h_edges: BTreeSet<EdgeId> = c.edge_set().clone();
    let pinched: Vec<VertexId> = cls.pinched_faces();
    for &v in &pinched {
        h_edges.extend(d.face_of_vertex(v).edges.iter().copied());
    }

    // degree of each dual vertex in H
    let mut deg_h = vec![0usize; d.vertex_count()];
    for &e in &h_edges {
        let (a, b) = d.map().edge_endpoints(e);
        deg_h[a] += 1;
        deg_h[b] += 1;
    }

    let mut specials: BTreeMap<VertexId, Vec<(VertexId, SpecialKind)>> = BTreeMap::new();
    let mut keepers_by_key: BTreeMap<Vec<EdgeId>, Keeper> = BTreeMap::new();

    for &pv in &pinched {
        let f = d.face_of_vertex(pv);
        let k = f.len();
        let on_edge: Vec<bool> = f.edges.iter().map(|&e| c.contains_edge(e)).collect();
        let on_vertex: Vec<bool> = f.vertices.iter().map(|&x| c.contains_vertex(x)).collect();
        let kind_at = |i: usize| -> Option<SpecialKind> {
            let prev = on_edge[(i + k - 1) % k];
            let next = on_edge[i];
            if prev && !next {
                Some(SpecialKind::A)
            } else if !prev && next {
                Some(SpecialKind::B)
            } else if !on_vertex[i] && deg_h[f.vertices[i]] == 3 {
                Some(SpecialKind::Y)
            } else {
                None
            }
        };
        let kinds: Vec<Option<SpecialKind>> = (0..k).map(kind_at).collect();
        let listed: Vec<(VertexId, SpecialKind)> = (0..k)
            .filter_map(|i| kinds[i].map(|s| (f.vertices[i], s)))
            .collect();
        if !listed.is_empty() {
            specials.insert(pv, listed);
        }

        for i in 0..k {
            if kinds[i] != Some(SpecialKind::A) {
                continue;
            }
            let mut j = i;
            let mut vertices = vec![f.vertices[i]];
            let mut edges = Vec::new();
            let mut ok = false;
            loop {
                edges.push(f.edges[j]);
                j = (j + 1) % k;
                vertices.push(f.vertices[j]);
                if j == i {
                    break; // wrapped without a terminating special
                }
                match kinds[j] {
                    Some(SpecialKind::B) => {
                        ok = true;
                        break;
                    }
                    Some(_) => break,
                    None => {}
                }
            }
            if !ok {
                continue;
            }
            // a keeper is a chord path: endpoints on C, internals off C
            for (t, &w) in vertices.iter().enumerate() {
                let want_on = t == 0 || t == vertices.len() - 1;
                if c.contains_vertex(w) != want_on {
                    return Err(Error::Internal(format!(
                        "keeper candidate on face {pv} is not a chord path at {w}"
                    )));
                }
            }
            let mut key = edges.clone();
            key.sort_unstable();
            match keepers_by_key.get_mut(&key) {
                Some(existing) => {
                    if !existing.faces.contains(&pv) {
                        existing.faces.push(pv);
                    }
                }
                None => {
                    let side = c.side_of_face(d.flanking_vertices(edges[0]).0);
                    for &e in &edges {
                        let (xa, xb) = d.flanking_vertices(e);
                        if c.side_of_face(xa) != side || c.side_of_face(xb) != side {
                            return Err(Error::Internal(format!(
                                "keeper edges straddle sides near face {pv}"
                            )));
                        }
                    }
                    keepers_by_key.insert(
                        key,
                        Keeper {
                            path: ChordPath { vertices, edges },
                            side,
                            faces: vec![pv],
                        },
                    );
                }
            }
        }
    }

    let keepers: Vec<Keeper> = keepers_by_key.into_values().collect();

    let mut htilde_edges: BTreeSet<EdgeId> = c.edge_set().clone();
    for kp in &keepers {
        htilde_edges.extend(kp.path.edges.iter().copied());
    }

    // H~': suppress degree-2 vertices. Its vertices are exactly the keeper
    // endpoints; each cycle vertex carries at most one keeper end.
    let hprime = if keepers.is_empty() {
        None
    } else {
        let mut endpoint_count: BTreeMap<VertexId, usize> = BTreeMap::new();
        for kp in &keepers {
            let first = *kp.path.vertices.first().unwrap();
            let last = *kp.path.vertices.last().unwrap();
            *endpoint_count.entry(first).or_insert(0) += 1;
            *endpoint_count.entry(last).or_insert(0) += 1;
        }
        for (&v, &cnt) in &endpoint_count {
            if cnt != 1 {
                return Err(Error::Internal(format!(
                    "cycle vertex {v} is an endpoint of {cnt} keepers"
                )));
            }
        }
        let vertices: Vec<VertexId> = endpoint_count.keys().copied().collect();
        let vert_set: BTreeSet<VertexId> = vertices.iter().copied().collect();

        let seq = c.vertex_seq();
        let l = seq.len();
        let anchor = (0..l)
            .find(|&i| vert_set.contains(&seq[i]))
            .expect("keeper endpoints lie on C");
        let mut b_arcs = Vec::new();
        let mut arc_start = anchor;
        let mut edges: Vec<EdgeId> = Vec::new();
        for off in 0..l {
            let i = (anchor + off) % l;
            let j = (i + 1) % l;
            edges.push(d.map().edge_id(seq[i], seq[j]).expect("cycle edge"));
            if vert_set.contains(&seq[j]) {
                b_arcs.push(BArc {
                    from: seq[arc_start],
                    to: seq[j],
                    edges: std::mem::take(&mut edges),
                });
                arc_start = j;
            }
        }
        // every H~' vertex has degree 2 (arcs) + 1 (keeper) = 3
        Some(HPrime { vertices, b_arcs })
    };

    Ok(AuxGraphs {
        h_edges,
        specials,
        keepers,
        htilde_edges,
        hprime,
    })
}

/// (side, node index) address of a tree node.
pub type NodeRef = (usize, usize);

#[derive(Debug, Clone, Serialize)]
pub struct TreeNode {
    /// Dual faces (primal vertex ids) forming this node, sorted.
    pub faces: Vec<VertexId>,
    pub tau: usize,
    pub rho: usize,
    /// Faces pinched because their whole boundary is the cycle. Nonzero only
    /// when C is a facial cycle; such a face has no chord paths on its
    /// boundary and sits outside the discharging bounds.
    pub rho_full: usize,
    pub kappa: usize,
    /// Degree in the side tree = number of keeper paths on the boundary.
    pub degree: usize,
    /// Positions (into the cycle's edge order) of the C-edges on this
    /// node's boundary, sorted.
    pub c_positions: Vec<usize>,
    /// Components of C, node: runs of circularly consecutive positions,
    /// each in cycle order.
    pub arcs: Vec<Vec<usize>>,
    /// Tree neighbors plus opposite-side nodes sharing a C-edge.
    pub neighbors: BTreeSet<NodeRef>,
    /// 0 = not bad, 1 = bad, 2 = really bad, 3 = really really bad.
    pub badness: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    /// Index into `AuxGraphs::keepers`.
    pub keeper: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SideTree {
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<TreeEdge>,
}

impl SideTree {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn bad_count(&self) -> usize {
        self.nodes.iter().filter(|u| u.badness >= 1).count()
    }
}

/// The two side trees with shared lookup structure.
#[derive(Debug, Clone, Serialize)]
pub struct SideTrees {
    pub sides: [SideTree; 2],
    /// Dual face (primal vertex id) -> owning node.
    pub node_of_face: BTreeMap<VertexId, NodeRef>,
    /// Cycle edges in traversal order.
    pub cycle_edges: Vec<EdgeId>,
    /// Per cycle-edge position: (interior node, exterior node) flanking it.
    pub cross_nodes: Vec<(usize, usize)>,
}

impl SideTrees {
    pub fn node(&self, r: NodeRef) -> &TreeNode {
        &self.sides[r.0].nodes[r.1]
    }

    /// Keeper index of the tree edge joining two nodes of one side.
    pub fn keeper_between(&self, side: usize, a: usize, b: usize) -> Option<usize> {
        self.sides[side]
            .edges
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .map(|e| e.keeper)
    }
}

/// Group sorted positions on a cycle of length `l` into runs of circularly
/// consecutive values, each run listed in cycle order.
fn circular_runs(positions: &BTreeSet<usize>, l: usize) -> Vec<Vec<usize>> {
    if positions.is_empty() {
        return Vec::new();
    }
    if positions.len() == l {
        return vec![(0..l).collect()];
    }
    let mut runs = Vec::new();
    for &p in positions {
        if positions.contains(&((p + l - 1) % l)) {
            continue; // not a run start
        }
        let mut run = vec![p];
        let mut q = (p + 1) % l;
        while positions.contains(&q) {
            run.push(q);
            q = (q + 1) % l;
        }
        runs.push(run);
    }
    runs
}

/// Build the side trees T0 and T1 over groups of dual faces.
pub fn build_side_trees(
    d: &DualGraph,
    c: &DualCycle,
    aux: &AuxGraphs,
    cls: &Classification,
) -> Result<SideTrees> {
    let blocked: BTreeSet<EdgeId> = {
        let mut b = c.edge_set().clone();
        for kp in &aux.keepers {
            b.extend(kp.path.edges.iter().copied());
        }
        b
    };

    // Flood fill dual faces within each side across unblocked edges.
    let nf = d.face_count();
    let mut node_ref: BTreeMap<VertexId, NodeRef> = BTreeMap::new();
    let mut sides: [Vec<Vec<VertexId>>; 2] = [Vec::new(), Vec::new()];
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    for v0 in 0..nf {
        if seen.contains(&v0) {
            continue;
        }
        let side = c.side_of_face(v0);
        let mut members = Vec::new();
        let mut queue = VecDeque::from([v0]);
        seen.insert(v0);
        while let Some(v) = queue.pop_front() {
            members.push(v);
            for &e in &d.face_of_vertex(v).edges {
                if blocked.contains(&e) {
                    continue;
                }
                let (fa, fb) = d.flanking_vertices(e);
                let w = if fa == v { fb } else { fa };
                if !seen.contains(&w) {
                    if c.side_of_face(w) != side {
                        return Err(Error::Internal(
                            "unblocked edge crosses between sides".into(),
                        ));
                    }
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        let idx = sides[side].len();
        for &m in &members {
            node_ref.insert(m, (side, idx));
        }
        sides[side].push(members);
    }

    // Deterministic node order: by smallest face id.
    for side in 0..2 {
        let mut order: Vec<usize> = (0..sides[side].len()).collect();
        order.sort_by_key(|&i| sides[side][i][0]);
        let remap: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut reordered = vec![Vec::new(); sides[side].len()];
        for (old, members) in sides[side].iter().enumerate() {
            reordered[remap[&old]] = members.clone();
        }
        sides[side] = reordered;
        for r in node_ref.values_mut() {
            if r.0 == side {
                *r = (side, remap[&r.1]);
            }
        }
    }

    // Tree edges from keepers.
    let mut tree_edges: [Vec<TreeEdge>; 2] = [Vec::new(), Vec::new()];
    for (ki, kp) in aux.keepers.iter().enumerate() {
        let mut pair: Option<(usize, usize)> = None;
        for &e in &kp.path.edges {
            let (fa, fb) = d.flanking_vertices(e);
            let (sa, ia) = node_ref[&fa];
            let (sb, ib) = node_ref[&fb];
            if sa != kp.side || sb != kp.side {
                return Err(Error::Internal("keeper flanks off its side".into()));
            }
            let this = (ia.min(ib), ia.max(ib));
            match pair {
                None => pair = Some(this),
                Some(p) if p == this => {}
                Some(_) => {
                    return Err(Error::Internal(
                        "keeper flanked by different node pairs along its length".into(),
                    ))
                }
            }
        }
        let (a, b) = pair.expect("keeper has edges");
        if a == b {
            return Err(Error::Internal(format!(
                "keeper {ki} appears twice on one node boundary"
            )));
        }
        tree_edges[kp.side].push(TreeEdge { a, b, keeper: ki });
    }

    // Cycle edge order and cross nodes.
    let cycle_edges = c.edges_in_order(d);
    let mut cross_nodes = Vec::with_capacity(cycle_edges.len());
    for &e in &cycle_edges {
        let (fa, fb) = d.flanking_vertices(e);
        let (int_f, ext_f) = if c.side_of_face(fa) == INTERIOR {
            (fa, fb)
        } else {
            (fb, fa)
        };
        if c.side_of_face(int_f) != INTERIOR || c.side_of_face(ext_f) != EXTERIOR {
            return Err(Error::Internal("cycle edge does not separate sides".into()));
        }
        cross_nodes.push((node_ref[&int_f].1, node_ref[&ext_f].1));
    }

    // Assemble nodes with stats.
    let l = cycle_edges.len();
    let mut trees: [SideTree; 2] = [
        SideTree {
            nodes: Vec::new(),
            edges: tree_edges[0].clone(),
        },
        SideTree {
            nodes: Vec::new(),
            edges: tree_edges[1].clone(),
        },
    ];
    for side in 0..2 {
        let mut degree = vec![0usize; sides[side].len()];
        for e in &trees[side].edges {
            degree[e.a] += 1;
            degree[e.b] += 1;
        }
        let mut positions: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); sides[side].len()];
        for (pos, &(ni, ne)) in cross_nodes.iter().enumerate() {
            let idx = if side == INTERIOR { ni } else { ne };
            positions[idx].insert(pos);
        }
        for (idx, members) in sides[side].iter().enumerate() {
            let mut tau = 0;
            let mut rho = 0;
            let mut rho_full = 0;
            let mut kappa = 0;
            for &v in members {
                match cls.status[v] {
                    FaceStatus::Untouched => {}
                    FaceStatus::Caressed => {
                        tau += 1;
                        kappa += 1;
                    }
                    FaceStatus::Pinched => {
                        tau += 1;
                        rho += 1;
                        let f = d.face_of_vertex(v);
                        if f.edges.iter().all(|e| c.contains_edge(*e)) {
                            rho_full += 1;
                        }
                    }
                }
            }
            let arcs = circular_runs(&positions[idx], l);
            trees[side].nodes.push(TreeNode {
                faces: members.clone(),
                tau,
                rho,
                rho_full,
                kappa,
                degree: degree[idx],
                c_positions: positions[idx].iter().copied().collect(),
                arcs,
                neighbors: BTreeSet::new(),
                badness: 0,
            });
        }

        // tree sanity: connected and acyclic
        let n = trees[side].nodes.len();
        if n > 0 {
            if trees[side].edges.len() != n - 1 {
                return Err(Error::Internal(format!(
                    "side {side}: {} nodes but {} keeper edges (not a tree)",
                    n,
                    trees[side].edges.len()
                )));
            }
            let mut adj = vec![Vec::new(); n];
            for e in &trees[side].edges {
                adj[e.a].push(e.b);
                adj[e.b].push(e.a);
            }
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut cnt = 1;
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        cnt += 1;
                        queue.push_back(y);
                    }
                }
            }
            if cnt != n {
                return Err(Error::Internal(format!("side {side} tree disconnected")));
            }
        }
    }

    // Neighbor map: tree neighbors plus cross-side nodes sharing a C-edge.
    for side in 0..2 {
        let edges = trees[side].edges.clone();
        for e in edges {
            trees[side].nodes[e.a].neighbors.insert((side, e.b));
            trees[side].nodes[e.b].neighbors.insert((side, e.a));
        }
    }
    for &(ni, ne) in &cross_nodes {
        trees[INTERIOR].nodes[ni].neighbors.insert((EXTERIOR, ne));
        trees[EXTERIOR].nodes[ne].neighbors.insert((INTERIOR, ni));
    }

    // Stat conservation against the classification.
    for side in 0..2 {
        let t_sum: usize = trees[side].nodes.iter().map(|u| u.tau).sum();
        let r_sum: usize = trees[side].nodes.iter().map(|u| u.rho).sum();
        let k_sum: usize = trees[side].nodes.iter().map(|u| u.kappa).sum();
        let sc = cls.per_side[side];
        if (t_sum, r_sum, k_sum) != (sc.tau, sc.rho, sc.kappa) {
            return Err(Error::Internal(format!(
                "side {side} stat sums {t_sum}/{r_sum}/{k_sum} != {sc:?}"
            )));
        }
    }

    Ok(SideTrees {
        sides: trees,
        node_of_face: node_ref,
        cycle_edges,
        cross_nodes,
    })
}

/// Annotate badness levels: bad = degree 2 with no caressed face; really^r
/// bad = bad with every node within r neighbor steps bad. Levels above
/// `r_max` + 1 are not computed.
pub fn badness_levels(trees: &mut SideTrees, r_max: u8) {
    let is_bad = |t: &SideTrees, r: NodeRef| -> bool {
        let u = t.node(r);
        u.degree == 2 && u.kappa == 0
    };
    for side in 0..2 {
        for i in 0..trees.sides[side].nodes.len() {
            let b = is_bad(trees, (side, i));
            trees.sides[side].nodes[i].badness = b as u8;
        }
    }
    for level in 2..=(r_max as u8 + 1) {
        let mut next: Vec<(usize, usize)> = Vec::new();
        for side in 0..2 {
            for i in 0..trees.sides[side].nodes.len() {
                let u = &trees.sides[side].nodes[i];
                if u.badness >= level - 1
                    && u.neighbors
                        .iter()
                        .all(|&r| trees.node(r).badness >= level - 1)
                {
                    next.push((side, i));
                }
            }
        }
        for (side, i) in next {
            trees.sides[side].nodes[i].badness = level;
        }
    }
}

/// Failure witness shared by the lemma checkers.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub enum CheckFailure {
    NodeInequality {
        side: usize,
        node: usize,
        rho: usize,
        kappa: usize,
        degree: usize,
    },
    LeafWithoutCaress {
        side: usize,
        node: usize,
    },
    CountingNodesVsBad {
        side: usize,
        n: usize,
        b: usize,
        kappa: usize,
    },
    CountingFewCaressed {
        side: usize,
        n: usize,
        tau: usize,
        kappa: usize,
    },
    CommonFaceMissing {
        side: usize,
        node: usize,
    },
    CrossPairSharesEdges {
        interior_node: usize,
        exterior_node: usize,
        count: usize,
    },
    KeeperBetweenBadNotSingle {
        side: usize,
        a: usize,
        b: usize,
        len: usize,
    },
}

/// rho_u <= 2 (kappa_u + delta_u) for every node of both trees. A face
/// pinched by the full-boundary clause (C facial) carries no chord paths,
/// so the discharging bound does not cover it and it is left out of rho_u.
pub fn node_inequality_check(trees: &SideTrees) -> std::result::Result<(), CheckFailure> {
    for side in 0..2 {
        for (i, u) in trees.sides[side].nodes.iter().enumerate() {
            if u.rho - u.rho_full > 2 * (u.kappa + u.degree) {
                return Err(CheckFailure::NodeInequality {
                    side,
                    node: i,
                    rho: u.rho,
                    kappa: u.kappa,
                    degree: u.degree,
                });
            }
        }
    }
    Ok(())
}

/// Every leaf of T0 / T1 contains a caressed face.
pub fn leaf_caress_check(trees: &SideTrees) -> std::result::Result<(), CheckFailure> {
    for side in 0..2 {
        for (i, u) in trees.sides[side].nodes.iter().enumerate() {
            if u.degree == 1 && u.kappa == 0 {
                return Err(CheckFailure::LeafWithoutCaress { side, node: i });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SideCountingReport {
    pub n: usize,
    pub b: usize,
    pub tau: usize,
    pub rho: usize,
    pub kappa: usize,
    /// b_i >= n_i - 3 kappa_i.
    pub nodes_vs_bad_ok: bool,
    /// kappa_i <= tau_i / 6 implies n_i >= tau_i / 8 (vacuous when the
    /// premise fails).
    pub few_caressed_premise: bool,
    pub few_caressed_ok: bool,
    /// True when the side is the inside of a facial cycle: a single node
    /// holding the one face whose boundary is all of C. The node count
    /// bound assumes every node has positive degree and is skipped here.
    pub facial_degenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountingReport {
    pub per_side: [SideCountingReport; 2],
}

impl CountingReport {
    pub fn ok(&self) -> bool {
        self.per_side
            .iter()
            .all(|s| s.nodes_vs_bad_ok && s.few_caressed_ok)
    }
}

/// Counting consequences: b_i >= n_i - 3 kappa_i always, and if
/// kappa_i <= tau_i / 6 then n_i >= tau_i / 8. Exact integer arithmetic.
pub fn counting_checks(trees: &SideTrees) -> CountingReport {
    let mut per_side = [SideCountingReport {
        n: 0,
        b: 0,
        tau: 0,
        rho: 0,
        kappa: 0,
        nodes_vs_bad_ok: true,
        few_caressed_premise: false,
        few_caressed_ok: true,
        facial_degenerate: false,
    }; 2];
    for side in 0..2 {
        let t = &trees.sides[side];
        let n = t.node_count();
        let b = t.bad_count();
        let tau: usize = t.nodes.iter().map(|u| u.tau).sum();
        let rho: usize = t.nodes.iter().map(|u| u.rho).sum();
        let kappa: usize = t.nodes.iter().map(|u| u.kappa).sum();
        let facial_degenerate = n == 1 && t.nodes[0].rho_full > 0;
        let nodes_vs_bad_ok = facial_degenerate || b + 3 * kappa >= n;
        let premise = 6 * kappa <= tau;
        let few_caressed_ok = !premise || 8 * n >= tau;
        per_side[side] = SideCountingReport {
            n,
            b,
            tau,
            rho,
            kappa,
            nodes_vs_bad_ok,
            few_caressed_premise: premise,
            few_caressed_ok,
            facial_degenerate,
        };
    }
    CountingReport { per_side }
}

/// The side-appropriate dual face flanking a cycle edge for a node side.
fn flank_on_side(d: &DualGraph, c: &DualCycle, e: EdgeId, side: usize) -> VertexId {
    let (fa, fb) = d.flanking_vertices(e);
    if c.side_of_face(fa) == side {
        fa
    } else {
        fb
    }
}

/// Structural facts about bad nodes: a single face inside each bad node
/// carries all of its C-edges; bad nodes on opposite sides share at most
/// one C-edge; keepers joining bad nodes of the same side are single edges.
pub fn structural_bad_checks(
    trees: &SideTrees,
    aux: &AuxGraphs,
    d: &DualGraph,
    c: &DualCycle,
) -> std::result::Result<(), CheckFailure> {
    for side in 0..2 {
        for (i, u) in trees.sides[side].nodes.iter().enumerate() {
            if u.badness == 0 {
                continue;
            }
            let mut common: Option<VertexId> = None;
            for &pos in &u.c_positions {
                let e = trees.cycle_edges[pos];
                let f = flank_on_side(d, c, e, side);
                match common {
                    None => common = Some(f),
                    Some(g) if g == f => {}
                    Some(_) => {
                        return Err(CheckFailure::CommonFaceMissing { side, node: i });
                    }
                }
            }
        }
    }

    let mut pair_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(ni, ne) in &trees.cross_nodes {
        if trees.sides[INTERIOR].nodes[ni].badness >= 1
            && trees.sides[EXTERIOR].nodes[ne].badness >= 1
        {
            *pair_count.entry((ni, ne)).or_insert(0) += 1;
        }
    }
    for ((ni, ne), count) in pair_count {
        if count > 1 {
            return Err(CheckFailure::CrossPairSharesEdges {
                interior_node: ni,
                exterior_node: ne,
                count,
            });
        }
    }

    for side in 0..2 {
        for e in &trees.sides[side].edges {
            let ba = trees.sides[side].nodes[e.a].badness >= 1;
            let bb = trees.sides[side].nodes[e.b].badness >= 1;
            if ba && bb {
                let len = aux.keepers[e.keeper].path.edges.len();
                if len != 1 {
                    return Err(CheckFailure::KeeperBetweenBadNotSingle {
                        side,
                        a: e.a,
                        b: e.b,
                        len,
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::cycles::{long_cycle_heuristic, orient_and_partition};
    use crate::dual::dualize;
    use crate::generate::{self, Kind};

    fn setup(kind: Kind) -> (DualGraph, DualCycle, Classification) {
        let gen = generate::generate(kind).unwrap();
        let d = dualize(&gen.triangulation).unwrap();
        let c = match gen.canonical_cycle {
            Some(seq) => orient_and_partition(&d, &seq).unwrap(),
            None => long_cycle_heuristic(&d, 0).unwrap(),
        };
        let cls = classify(&d, &c);
        (d, c, cls)
    }

    #[test]
    fn facial_cycle_on_k4_dual_has_no_keepers() {
        let t = generate::generate(Kind::Tetrahedron).unwrap().triangulation;
        let d = dualize(&t).unwrap();
        let seq = d.map().face(0).vertices.clone();
        let c = orient_and_partition(&d, &seq).unwrap();
        let cls = classify(&d, &c);
        let aux = build_aux(&d, &c, &cls).unwrap();
        // the single pinched face's boundary is C itself: no specials
        assert!(aux.keepers.is_empty());
        assert!(aux.specials.is_empty());
        assert!(aux.hprime.is_none());
        assert_eq!(aux.h_edges, *c.edge_set());
        let trees = build_side_trees(&d, &c, &aux, &cls).unwrap();
        assert_eq!(trees.sides[INTERIOR].node_count(), 1);
        assert_eq!(trees.sides[EXTERIOR].node_count(), 1);
        assert_eq!(trees.sides[INTERIOR].nodes[0].degree, 0);
    }

    #[test]
    fn serpentine_interior_tree_is_a_path() {
        for k in [4usize, 7] {
            let (d, c, cls) = setup(Kind::Serpentine { k });
            let aux = build_aux(&d, &c, &cls).unwrap();
            let mut trees = build_side_trees(&d, &c, &aux, &cls).unwrap();
            // k+1 single-face nodes per side, path shaped
            for side in 0..2 {
                let t = &trees.sides[side];
                assert_eq!(t.node_count(), k + 1, "side {side} of serpentine({k})");
                for u in &t.nodes {
                    assert_eq!(u.faces.len(), 1);
                }
                let deg1 = t.nodes.iter().filter(|u| u.degree == 1).count();
                let deg2 = t.nodes.iter().filter(|u| u.degree == 2).count();
                assert_eq!(deg1, 2);
                assert_eq!(deg2, k - 1);
            }
            // keepers between consecutive path nodes are single edges
            for kp in &aux.keepers {
                assert_eq!(kp.path.edges.len(), 1);
            }
            badness_levels(&mut trees, 2);
            // leaves are caressed, middles bad
            assert!(leaf_caress_check(&trees).is_ok());
            assert!(node_inequality_check(&trees).is_ok());
            assert!(counting_checks(&trees).ok());
            assert!(structural_bad_checks(&trees, &aux, &d, &c).is_ok());
        }
    }

    #[test]
    fn serpentine_badness_profile() {
        let k = 20;
        let (d, c, cls) = setup(Kind::Serpentine { k });
        let aux = build_aux(&d, &c, &cls).unwrap();
        let mut trees = build_side_trees(&d, &c, &aux, &cls).unwrap();
        badness_levels(&mut trees, 2);
        // interior nodes come out in face-id order f_0..f_k; recompute the
        // expected flags from the definitions
        let t0 = &trees.sides[INTERIOR];
        for (i, u) in t0.nodes.iter().enumerate() {
            let bad = u.degree == 2 && u.kappa == 0;
            assert_eq!(u.badness >= 1, bad, "node {i}");
            let rb = bad && u.neighbors.iter().all(|&r| {
                let w = trees.node(r);
                w.degree == 2 && w.kappa == 0
            });
            assert_eq!(u.badness >= 2, rb, "node {i}");
        }
        // a really-really-bad path exists in the middle
        let rrb = t0.nodes.iter().filter(|u| u.badness >= 3).count();
        assert_eq!(rrb, k - 7);
    }

    #[test]
    fn pinwheel_has_the_tight_node() {
        for k in [1usize, 2, 3] {
            let (d, c, cls) = setup(Kind::Pinwheel { k });
            let aux = build_aux(&d, &c, &cls).unwrap();
            let trees = build_side_trees(&d, &c, &aux, &cls).unwrap();
            let found = trees.sides[INTERIOR]
                .nodes
                .iter()
                .chain(trees.sides[EXTERIOR].nodes.iter())
                .any(|u| u.rho == 2 * k + 1 && u.kappa == 0 && u.degree == k + 2);
            assert!(found, "pinwheel({k}) lacks the (2k+1, 0, k+2) node");
            assert!(node_inequality_check(&trees).is_ok());
            assert!(leaf_caress_check(&trees).is_ok());
        }
    }

    #[test]
    fn pinwheel_2_node_inequality_slack() {
        let (d, c, cls) = setup(Kind::Pinwheel { k: 2 });
        let aux = build_aux(&d, &c, &cls).unwrap();
        let trees = build_side_trees(&d, &c, &aux, &cls).unwrap();
        let u = trees.sides[INTERIOR]
            .nodes
            .iter()
            .chain(trees.sides[EXTERIOR].nodes.iter())
            .find(|u| u.rho == 5 && u.kappa == 0 && u.degree == 4)
            .expect("tight node");
        assert!(u.rho <= 2 * (u.kappa + u.degree));
        assert_eq!(2 * (u.kappa + u.degree) - u.rho, 3);
    }

    #[test]
    fn keepers_lie_on_pinched_face_boundaries() {
        let (d, c, cls) = setup(Kind::Serpentine { k: 8 });
        let aux = build_aux(&d, &c, &cls).unwrap();
        for kp in &aux.keepers {
            assert!(!kp.faces.is_empty());
            for &pv in &kp.faces {
                assert_eq!(cls.status[pv], FaceStatus::Pinched);
                let boundary: BTreeSet<EdgeId> =
                    d.face_of_vertex(pv).edges.iter().copied().collect();
                for e in &kp.path.edges {
                    assert!(boundary.contains(e));
                }
            }
        }
        // H~' has no degree-2 vertices: every vertex carries 2 arcs + 1 keeper
        let hp = aux.hprime.as_ref().unwrap();
        let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
        for arc in &hp.b_arcs {
            *deg.entry(arc.from).or_insert(0) += 1;
            *deg.entry(arc.to).or_insert(0) += 1;
        }
        for kp in &aux.keepers {
            *deg.entry(kp.path.vertices[0]).or_insert(0) += 1;
            *deg.entry(*kp.path.vertices.last().unwrap()).or_insert(0) += 1;
        }
        for v in &hp.vertices {
            assert!(deg[v] >= 3, "H~' vertex {v} has degree {}", deg[v]);
        }
    }

    #[test]
    fn stats_and_degrees_conserved_on_random_instances() {
        for seed in [1u64, 4, 9] {
            let (d, c, cls) = setup(Kind::RandomStacked { n: 16, seed });
            let aux = build_aux(&d, &c, &cls).unwrap();
            let mut trees = build_side_trees(&d, &c, &aux, &cls).unwrap();
            badness_levels(&mut trees, 2);
            for side in 0..2 {
                let t = &trees.sides[side];
                let deg_sum: usize = t.nodes.iter().map(|u| u.degree).sum();
                assert_eq!(deg_sum, 2 * (t.node_count() - 1).max(0));
                let faces: usize = t.nodes.iter().map(|u| u.faces.len()).sum();
                let side_faces = if side == INTERIOR {
                    c.interior_faces().len()
                } else {
                    c.exterior_faces().len()
                };
                assert_eq!(faces, side_faces);
            }
            assert!(node_inequality_check(&trees).is_ok());
            assert!(leaf_caress_check(&trees).is_ok());
            assert!(counting_checks(&trees).ok());
            assert!(structural_bad_checks(&trees, &aux, &d, &c).is_ok());
        }
    }
}
