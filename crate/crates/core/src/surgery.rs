//! Cycle surgery: locate a really-really-bad path, pick the surgery site
//! around a node u = x_0 and the opposite-side node a_1 spanning the corner
//! toward x_1, and recolor x_0..x_{i-1} to the other side while pulling a_1
//! in. Every applied step is re-verified: the new boundary must be a simple
//! cycle, the caressed set must strictly grow, faces in non-bad nodes must
//! keep their exact intersection with the cycle, and the designated face of
//! a_0 must be caressed afterwards.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::auxtrees::{self, AuxGraphs, SideTrees};
use crate::classify::{classify, Classification, FaceStatus};
use crate::cycles::{canonical_form, orient_and_partition, DualCycle};
use crate::dual::DualGraph;
use crate::embedding::{max_degree, EdgeId, Triangulation, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurgeryCase {
    /// q lies on the y-side: direct recoloring.
    CY,
    /// q lay on the x-side; the site was rewritten around u' = x_i first.
    CX,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurgerySite {
    /// Side whose tree carried the really-really-bad path (0 = interior).
    pub side: usize,
    /// The path X of really-really-bad nodes (node indices on `side`).
    pub x_path: Vec<usize>,
    /// u = x_0 after any rewrite.
    pub u: usize,
    /// Nodes x_0..x_i spanned by a_1's arc, starting at u.
    pub x_span: Vec<usize>,
    /// Nodes recolored to the other side: x_0..x_{i-1}.
    pub recolor_nodes: Vec<usize>,
    pub a1: usize,
    pub a0: usize,
    pub a2: usize,
    pub case: SurgeryCase,
    /// Corner vertex of the keeper between u and x_1 spanned by a_1.
    pub corner: VertexId,
    pub recolor_faces: BTreeSet<VertexId>,
    pub gain_faces: BTreeSet<VertexId>,
    /// The face of a_0 that must be caressed after the surgery.
    pub designated_face: VertexId,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurgeryStep {
    pub len_before: usize,
    pub len_after: usize,
    pub kappa_before: usize,
    pub kappa_after: usize,
    pub new_caressed_face: VertexId,
    pub case: SurgeryCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    NoSite,
    LengthBudget,
    MaxIters,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurgeryLog {
    pub steps: Vec<SurgeryStep>,
    pub stop: StopReason,
}

/// Maximal paths of really-really-bad nodes on one side, each oriented so
/// its smaller endpoint id comes first, longest first.
fn rrb_paths(trees: &SideTrees, side: usize) -> Vec<Vec<usize>> {
    let t = &trees.sides[side];
    let rrb: BTreeSet<usize> = (0..t.nodes.len())
        .filter(|&i| t.nodes[i].badness >= 3)
        .collect();
    let mut adj: BTreeMap<usize, Vec<usize>> = rrb.iter().map(|&i| (i, Vec::new())).collect();
    for e in &t.edges {
        if rrb.contains(&e.a) && rrb.contains(&e.b) {
            adj.get_mut(&e.a).unwrap().push(e.b);
            adj.get_mut(&e.b).unwrap().push(e.a);
        }
    }
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut paths = Vec::new();
    for &start in &rrb {
        if seen.contains(&start) || adj[&start].len() > 1 {
            continue; // walk from endpoints only
        }
        let mut path = vec![start];
        seen.insert(start);
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().find(|&&x| !seen.contains(&x)).copied();
            match next {
                Some(x) => {
                    seen.insert(x);
                    path.push(x);
                    cur = x;
                }
                None => break,
            }
        }
        if *path.last().unwrap() < path[0] {
            path.reverse();
        }
        paths.push(path);
    }
    // bad nodes have tree degree 2, so induced components are paths and the
    // endpoint scan covers everything
    debug_assert_eq!(paths.iter().map(|p| p.len()).sum::<usize>(), rrb.len());
    paths.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
    paths
}

struct SiteSearch<'a> {
    trees: &'a SideTrees,
    aux: &'a AuxGraphs,
    d: &'a DualGraph,
    c: &'a DualCycle,
    seq_pos: BTreeMap<VertexId, usize>,
    edge_to_keeper: BTreeMap<EdgeId, usize>,
}

struct Candidate {
    i: usize,
    corner: VertexId,
    dir_flag: usize,
    site: SurgerySite,
}

impl<'a> SiteSearch<'a> {
    fn new(trees: &'a SideTrees, aux: &'a AuxGraphs, d: &'a DualGraph, c: &'a DualCycle) -> Self {
        let seq_pos = c
            .vertex_seq()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let edge_to_keeper = aux
            .keepers
            .iter()
            .enumerate()
            .flat_map(|(i, kp)| kp.path.edges.iter().map(move |&e| (e, i)))
            .collect();
        SiteSearch {
            trees,
            aux,
            d,
            c,
            seq_pos,
            edge_to_keeper,
        }
    }

    /// Node (on `side`) flanking the cycle edge at `pos`.
    fn node_at(&self, side: usize, pos: usize) -> usize {
        let (ni, ne) = self.trees.cross_nodes[pos];
        if side == auxtrees::INTERIOR {
            ni
        } else {
            ne
        }
    }

    fn badness(&self, side: usize, node: usize) -> u8 {
        self.trees.sides[side].nodes[node].badness
    }

    /// The other-side keeper incident to cycle vertex w, as a tree edge of
    /// side `other`; returns the node opposite `from_node`.
    fn across_keeper_at(&self, other: usize, w: VertexId, from_node: usize) -> Option<usize> {
        let free = self
            .d
            .map()
            .neighbors(w)
            .iter()
            .find(|&&x| {
                let e = self.d.map().edge_id(w, x).unwrap();
                !self.c.contains_edge(e)
            })
            .copied()?;
        let e = self.d.map().edge_id(w, free).unwrap();
        let ki = *self.edge_to_keeper.get(&e)?;
        if self.aux.keepers[ki].side != other {
            return None;
        }
        let te = self.trees.sides[other]
            .edges
            .iter()
            .find(|te| te.keeper == ki)?;
        if te.a == from_node {
            Some(te.b)
        } else if te.b == from_node {
            Some(te.a)
        } else {
            None
        }
    }

    /// Try to realize a surgery site at u = X[pos] walking toward
    /// x_1 = X[next_pos], entering the other side at corner vertex `v`.
    fn try_candidate(
        &self,
        side: usize,
        x_path: &[usize],
        pos: usize,
        next_pos: usize,
        v: VertexId,
        dir_flag: usize,
        punted: bool,
    ) -> Option<Candidate> {
        let other = 1 - side;
        let l = self.c.len();
        let u = x_path[pos];
        let x1 = x_path[next_pos];

        let pv = *self.seq_pos.get(&v)?;
        let e_in = (pv + l - 1) % l;
        let e_out = pv;

        // the two cycle edges at v flank u and x1 on `side`
        let (fu_pos, fx_pos) = if self.node_at(side, e_in) == u && self.node_at(side, e_out) == x1
        {
            (e_in, e_out)
        } else if self.node_at(side, e_out) == u && self.node_at(side, e_in) == x1 {
            (e_out, e_in)
        } else {
            return None;
        };

        // a_1 spans the corner: both edges at v lie on one other-side node
        let a1 = self.node_at(other, e_in);
        if self.node_at(other, e_out) != a1 {
            return None;
        }
        if self.badness(other, a1) < 2 {
            return None; // a_1 must be really bad
        }
        let a1_node = &self.trees.sides[other].nodes[a1];
        if a1_node.arcs.len() != 2 {
            return None;
        }
        let (p_arc, q_arc) = {
            let first_has = a1_node.arcs[0].contains(&fu_pos);
            if first_has {
                (&a1_node.arcs[0], &a1_node.arcs[1])
            } else {
                (&a1_node.arcs[1], &a1_node.arcs[0])
            }
        };
        if !p_arc.contains(&fu_pos) || !p_arc.contains(&fx_pos) {
            return None;
        }

        // p must terminate at its u-edge (no extension past u)
        let forward = if p_arc[0] == fu_pos {
            true // run extends in cycle direction from fu
        } else if *p_arc.last().unwrap() == fu_pos {
            false // run extends against cycle direction from fu
        } else {
            return None;
        };

        // the x-span: side nodes flanking p in order away from u
        let ordered: Vec<usize> = if forward {
            p_arc.clone()
        } else {
            p_arc.iter().rev().copied().collect()
        };
        let mut x_span: Vec<usize> = Vec::new();
        for &p in &ordered {
            let nd = self.node_at(side, p);
            if x_span.last() != Some(&nd) {
                x_span.push(nd);
            }
        }
        if x_span.first() != Some(&u) || x_span.len() < 2 {
            return None;
        }
        // the span must follow X consecutively from u toward x1
        let step: isize = if next_pos > pos { 1 } else { -1 };
        for (t, &nd) in x_span.iter().enumerate() {
            let want = pos as isize + step * t as isize;
            if want < 0 || want as usize >= x_path.len() {
                return None;
            }
            if x_path[want as usize] != nd {
                return None;
            }
        }
        let i = x_span.len() - 1;
        debug_assert_eq!(x_span[1], x1);

        // q avoids all of x_0..x_i
        for &p in q_arc {
            if x_span.contains(&self.node_at(side, p)) {
                return None;
            }
        }

        // q side: x-side (punt) or y-side (direct)
        let t_x: BTreeSet<usize> = {
            // component of the side tree minus u containing x1
            let tree = &self.trees.sides[side];
            let mut seen = BTreeSet::from([x1]);
            let mut stack = vec![x1];
            while let Some(a) = stack.pop() {
                for e in &tree.edges {
                    let b = if e.a == a {
                        e.b
                    } else if e.b == a {
                        e.a
                    } else {
                        continue;
                    };
                    if b != u && !seen.contains(&b) {
                        seen.insert(b);
                        stack.push(b);
                    }
                }
            }
            seen
        };
        let q_in_x = q_arc
            .iter()
            .all(|&p| t_x.contains(&self.node_at(side, p)));

        if q_in_x {
            if punted {
                return None;
            }
            // punt: redo the search at u' = x_i walking back toward x_{i-1};
            // the corner is the vertex between the p-edges of x_i and x_{i-1}
            let far_pos_of = |nd: usize| -> Option<usize> {
                ordered
                    .iter()
                    .rev()
                    .find(|&&p| self.node_at(side, p) == nd)
                    .copied()
            };
            let e_xi = far_pos_of(x_span[i])?;
            // corner between consecutive p-edges of x_{i-1} and x_i
            let prev_e = if forward { (e_xi + l - 1) % l } else { (e_xi + 1) % l };
            if !p_arc.contains(&prev_e) {
                return None;
            }
            let corner2 = if forward {
                self.c.vertex_seq()[e_xi]
            } else {
                self.c.vertex_seq()[(e_xi + 1) % l]
            };
            let new_pos = (pos as isize + step * i as isize) as usize;
            let new_next = (pos as isize + step * (i as isize - 1)) as usize;
            let mut cand =
                self.try_candidate(side, x_path, new_pos, new_next, corner2, dir_flag, true)?;
            cand.site.case = SurgeryCase::CX;
            return Some(cand);
        }

        // direct case: far end of p and the node a_0 beyond it
        let far_pos = if forward {
            *p_arc.last().unwrap()
        } else {
            p_arc[0]
        };
        let w_far = if forward {
            self.c.vertex_seq()[(far_pos + 1) % l]
        } else {
            self.c.vertex_seq()[far_pos]
        };
        let a0 = self.across_keeper_at(other, w_far, a1)?;
        if self.badness(other, a0) < 1 {
            return None;
        }
        // near end and a_2
        let near_pos = fu_pos;
        let w_near = if forward {
            self.c.vertex_seq()[near_pos]
        } else {
            self.c.vertex_seq()[(near_pos + 1) % l]
        };
        let a2 = self.across_keeper_at(other, w_near, a1)?;
        if a2 == a0 || self.badness(other, a2) < 1 {
            return None;
        }
        // a_2 shares an edge with u
        let a2_node = &self.trees.sides[other].nodes[a2];
        if !a2_node
            .c_positions
            .iter()
            .any(|&p| self.node_at(side, p) == u)
        {
            return None;
        }

        // a_0's arc continuing past the far keeper must start at x_i, and
        // its other arc may only flank recolored nodes or the y-side
        let a0_node = &self.trees.sides[other].nodes[a0];
        if a0_node.arcs.len() != 2 {
            return None;
        }
        let cont = if forward {
            (far_pos + 1) % l
        } else {
            (far_pos + l - 1) % l
        };
        if self.node_at(other, cont) != a0 {
            return None;
        }
        let (p0, q0) = {
            let first_has = a0_node.arcs[0].contains(&cont);
            if first_has {
                (&a0_node.arcs[0], &a0_node.arcs[1])
            } else {
                (&a0_node.arcs[1], &a0_node.arcs[0])
            }
        };
        if !p0.contains(&cont) {
            return None;
        }
        let recolor: BTreeSet<usize> = x_span[..i].iter().copied().collect();
        for &p in p0 {
            if recolor.contains(&self.node_at(side, p)) {
                return None; // the x_i..x_{i+j} span must stay unrecolored
            }
        }
        // q0 may only flank recolored nodes or the y-side
        for &p in q0 {
            let nd = self.node_at(side, p);
            let in_y_side = nd != u && !t_x.contains(&nd);
            if !recolor.contains(&nd) && !in_y_side {
                return None;
            }
        }

        // designated face: the common face of a_0
        let mut designated: Option<VertexId> = None;
        for &p in &a0_node.c_positions {
            let e = self.trees.cycle_edges[p];
            let (fa, fb) = self.d.flanking_vertices(e);
            let f = if self.c.side_of_face(fa) == other { fa } else { fb };
            match designated {
                None => designated = Some(f),
                Some(g) if g == f => {}
                Some(_) => return None,
            }
        }
        let designated_face = designated?;

        let recolor_nodes: Vec<usize> = x_span[..i].to_vec();
        let mut recolor_faces = BTreeSet::new();
        for &nd in &recolor_nodes {
            recolor_faces.extend(self.trees.sides[side].nodes[nd].faces.iter().copied());
        }
        let gain_faces: BTreeSet<VertexId> =
            a1_node.faces.iter().copied().collect();

        Some(Candidate {
            i,
            corner: v,
            dir_flag,
            site: SurgerySite {
                side,
                x_path: x_path.to_vec(),
                u,
                x_span,
                recolor_nodes,
                a1,
                a0,
                a2,
                case: SurgeryCase::CY,
                corner: v,
                recolor_faces,
                gain_faces,
                designated_face,
            },
        })
    }
}

/// Search both side trees for a surgery site: a really-really-bad path with
/// at least 5 * max_degree nodes, a qualifying node u more than 2 * max_degree
/// from either end with |N(u)| >= 5, and the surrounding structure. Among
/// candidates at the first qualifying u, the one minimizing the span i wins.
pub fn find_site(
    trees: &SideTrees,
    aux: &AuxGraphs,
    d: &DualGraph,
    c: &DualCycle,
    delta: usize,
) -> Option<SurgerySite> {
    let search = SiteSearch::new(trees, aux, d, c);
    for side in [auxtrees::INTERIOR, auxtrees::EXTERIOR] {
        for x_path in rrb_paths(trees, side) {
            if x_path.len() < 5 * delta {
                continue;
            }
            let lo = 2 * delta;
            let hi = x_path.len() - 1 - 2 * delta;
            for pos in lo..=hi {
                let u = x_path[pos];
                if trees.sides[side].nodes[u].neighbors.len() < 5 {
                    continue;
                }
                let mut candidates: Vec<Candidate> = Vec::new();
                for (dir_flag, next_pos) in [(0usize, pos + 1), (1usize, pos.wrapping_sub(1))] {
                    if next_pos >= x_path.len() {
                        continue;
                    }
                    let x1 = x_path[next_pos];
                    let Some(ki) = trees.keeper_between(side, u, x1) else {
                        continue;
                    };
                    let kp = &aux.keepers[ki];
                    if kp.path.edges.len() != 1 {
                        continue; // keepers between bad nodes are single edges
                    }
                    let mut corners = kp.path.vertices.clone();
                    corners.sort_unstable();
                    for v in corners {
                        if let Some(cand) =
                            search.try_candidate(side, &x_path, pos, next_pos, v, dir_flag, false)
                        {
                            candidates.push(cand);
                        }
                    }
                }
                if let Some(best) = candidates.into_iter().min_by(|a, b| {
                    a.i.cmp(&b.i)
                        .then_with(|| a.corner.cmp(&b.corner))
                        .then_with(|| a.dir_flag.cmp(&b.dir_flag))
                }) {
                    return Some(best.site);
                }
            }
        }
    }
    None
}

/// Apply the recoloring and verify every claimed property of the step.
pub fn apply_surgery(
    d: &DualGraph,
    c: &DualCycle,
    site: &SurgerySite,
    delta: usize,
    trees: &SideTrees,
    cls: &Classification,
) -> Result<(DualCycle, SurgeryStep)> {
    // new interior as a face set
    let all: BTreeSet<VertexId> = (0..d.face_count()).collect();
    let new_interior: BTreeSet<VertexId> = if site.side == auxtrees::INTERIOR {
        let mut s = c.interior_faces().clone();
        for f in &site.recolor_faces {
            s.remove(f);
        }
        s.extend(site.gain_faces.iter().copied());
        s
    } else {
        let mut ext = c.exterior_faces().clone();
        for f in &site.recolor_faces {
            ext.remove(f);
        }
        ext.extend(site.gain_faces.iter().copied());
        all.difference(&ext).copied().collect()
    };

    // boundary edges of the recolored region
    let mut adjacency: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut boundary_edges = 0usize;
    for e in 0..d.edge_count() {
        let (fa, fb) = d.flanking_vertices(e);
        if new_interior.contains(&fa) != new_interior.contains(&fb) {
            boundary_edges += 1;
            let (x, y) = d.map().edge_endpoints(e);
            adjacency.entry(x).or_default().push(y);
            adjacency.entry(y).or_default().push(x);
        }
    }
    for (v, nbrs) in &adjacency {
        if nbrs.len() != 2 {
            return Err(Error::Surgery(format!(
                "recolored boundary is not a simple cycle: vertex {v} has degree {}",
                nbrs.len()
            )));
        }
    }
    let start = *adjacency
        .keys()
        .next()
        .ok_or_else(|| Error::Surgery("recolored boundary empty".into()))?;
    let mut walk = vec![start];
    let mut prev = start;
    let mut cur = adjacency[&start][0];
    while cur != start {
        walk.push(cur);
        let nbrs = &adjacency[&cur];
        let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
        prev = cur;
        cur = next;
    }
    if walk.len() != boundary_edges {
        return Err(Error::Surgery(format!(
            "recolored boundary splits into several cycles ({} of {} edges walked)",
            walk.len(),
            boundary_edges
        )));
    }

    let c_new = orient_and_partition(d, &canonical_form(&walk))?;

    // length change bound
    let (l0, l1) = (c.len(), c_new.len());
    if l0.abs_diff(l1) > delta * delta {
        return Err(Error::Surgery(format!(
            "length changed by {} > delta^2 = {}",
            l0.abs_diff(l1),
            delta * delta
        )));
    }

    let cls_new = classify(d, &c_new);
    if cls_new.kappa <= cls.kappa {
        return Err(Error::Surgery(format!(
            "kappa did not increase: {} -> {}",
            cls.kappa, cls_new.kappa
        )));
    }
    if cls_new.status[site.designated_face] != FaceStatus::Caressed {
        return Err(Error::Surgery(format!(
            "designated face {} of a_0 is not caressed after surgery",
            site.designated_face
        )));
    }

    // faces outside bad nodes keep their exact intersection with the cycle
    let mut bad_faces: BTreeSet<VertexId> = BTreeSet::new();
    for side in 0..2 {
        for u in &trees.sides[side].nodes {
            if u.badness >= 1 {
                bad_faces.extend(u.faces.iter().copied());
            }
        }
    }
    for v in 0..d.face_count() {
        if bad_faces.contains(&v) {
            continue;
        }
        let f = d.face_of_vertex(v);
        for &e in &f.edges {
            if c.contains_edge(e) != c_new.contains_edge(e) {
                return Err(Error::Surgery(format!(
                    "face {v} outside bad nodes changed its cycle edges"
                )));
            }
        }
        for &x in &f.vertices {
            if c.contains_vertex(x) != c_new.contains_vertex(x) {
                return Err(Error::Surgery(format!(
                    "face {v} outside bad nodes changed its cycle vertices"
                )));
            }
        }
        // statuses of untouched-by-surgery faces are preserved as a result
        debug_assert_eq!(cls.status[v], cls_new.status[v]);
    }

    let step = SurgeryStep {
        len_before: l0,
        len_after: l1,
        kappa_before: cls.kappa,
        kappa_after: cls_new.kappa,
        new_caressed_face: site.designated_face,
        case: site.case,
    };
    Ok((c_new, step))
}

/// Iterate find/apply until no site remains, the length budget l_0 / 2 would
/// be violated, or `max_iters` steps were applied.
pub fn surgery_loop(
    t: &Triangulation,
    d: &DualGraph,
    c0: &DualCycle,
    max_iters: usize,
) -> Result<(DualCycle, SurgeryLog)> {
    let delta = max_degree(t);
    let l0 = c0.len();
    let mut c = c0.clone();
    let mut steps = Vec::new();
    let stop;
    loop {
        if steps.len() >= max_iters {
            stop = StopReason::MaxIters;
            break;
        }
        let cls = classify(d, &c);
        let aux = auxtrees::build_aux(d, &c, &cls)?;
        let mut trees = auxtrees::build_side_trees(d, &c, &aux, &cls)?;
        auxtrees::badness_levels(&mut trees, 2);
        let Some(site) = find_site(&trees, &aux, d, &c, delta) else {
            stop = StopReason::NoSite;
            break;
        };
        let (c_new, step) = apply_surgery(d, &c, &site, delta, &trees, &cls)?;
        if 2 * c_new.len() < l0 {
            stop = StopReason::LengthBudget;
            break;
        }
        steps.push(step);
        c = c_new;
    }
    Ok((c, SurgeryLog { steps, stop }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::long_cycle_heuristic;
    use crate::dual::dualize;
    use crate::generate::{self, Kind};

    fn serp(k: usize) -> (Triangulation, DualGraph, DualCycle) {
        let gen = generate::generate(Kind::Serpentine { k }).unwrap();
        let d = dualize(&gen.triangulation).unwrap();
        let c = orient_and_partition(&d, &gen.canonical_cycle.unwrap()).unwrap();
        (gen.triangulation, d, c)
    }

    #[test]
    fn no_site_on_tetrahedron_facial_cycle() {
        let t = generate::generate(Kind::Tetrahedron).unwrap().triangulation;
        let d = dualize(&t).unwrap();
        let seq = d.map().face(0).vertices.clone();
        let c = orient_and_partition(&d, &seq).unwrap();
        let (c_out, log) = surgery_loop(&t, &d, &c, 100).unwrap();
        assert_eq!(log.stop, StopReason::NoSite);
        assert!(log.steps.is_empty());
        assert_eq!(c_out.len(), c.len());
    }

    #[test]
    fn no_site_when_every_touched_face_is_caressed() {
        // dodecahedron-like: pick the exact longest cycle of the icosahedron
        // dual; whatever the badness profile, absence of bad nodes means no
        // site. Tetrahedron's Hamiltonian cycle: all 4 faces caressed.
        let t = generate::generate(Kind::Tetrahedron).unwrap().triangulation;
        let d = dualize(&t).unwrap();
        let res = crate::cycles::longest_cycle_exact(&d, Default::default()).unwrap();
        let cls = classify(&d, &res.cycle);
        assert_eq!(cls.kappa, cls.tau); // nothing pinched
        let (_, log) = surgery_loop(&t, &d, &res.cycle, 10).unwrap();
        assert_eq!(log.stop, StopReason::NoSite);
    }

    #[test]
    fn serpentine_below_threshold_has_no_site() {
        // X has k - 7 nodes; for k = 34 that is 27 < 5 * 6
        let (t, d, c) = serp(34);
        assert_eq!(max_degree(&t), 6);
        let (_, log) = surgery_loop(&t, &d, &c, 10).unwrap();
        assert_eq!(log.stop, StopReason::NoSite);
        assert!(log.steps.is_empty());
    }

    #[test]
    fn serpentine_long_enough_gets_surgery() {
        let (t, d, c) = serp(40);
        let delta = max_degree(&t);
        assert_eq!(delta, 6);
        let cls = classify(&d, &c);
        assert_eq!(cls.kappa, 4);
        let (c_out, log) = surgery_loop(&t, &d, &c, 50).unwrap();
        assert!(!log.steps.is_empty(), "expected at least one applied step");
        // kappa strictly increases along the log
        for w in log.steps.windows(2) {
            assert!(w[1].kappa_before >= w[0].kappa_after);
        }
        for s in &log.steps {
            assert!(s.kappa_after > s.kappa_before);
            assert!(s.len_before.abs_diff(s.len_after) <= delta * delta);
        }
        let cls_out = classify(&d, &c_out);
        assert!(cls_out.kappa > 4);
        assert!(2 * c_out.len() >= c.len());
    }

    #[test]
    fn surgery_log_deterministic() {
        let (t, d, c) = serp(40);
        let (c1, log1) = surgery_loop(&t, &d, &c, 50).unwrap();
        let (c2, log2) = surgery_loop(&t, &d, &c, 50).unwrap();
        assert_eq!(c1.vertex_seq(), c2.vertex_seq());
        assert_eq!(
            serde_json::to_string(&log1).unwrap(),
            serde_json::to_string(&log2).unwrap()
        );
    }

    #[test]
    fn heuristic_cycles_survive_loop_on_random_instances() {
        for seed in [0u64, 5] {
            let gen = generate::generate(Kind::RandomStacked { n: 30, seed }).unwrap();
            let t = gen.triangulation;
            let d = dualize(&t).unwrap();
            let c = long_cycle_heuristic(&d, seed).unwrap();
            let (c_out, log) = surgery_loop(&t, &d, &c, 200).unwrap();
            assert!(2 * c_out.len() >= c.len() || log.stop == StopReason::LengthBudget);
            let cls0 = classify(&d, &c);
            let cls1 = classify(&d, &c_out);
            assert!(cls1.kappa >= cls0.kappa);
        }
    }
}
