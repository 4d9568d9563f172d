//! Instance generators. Every generator returns a validated triangulation;
//! the strip-shaped families also return the canonical dual cycle their
//! guarantees refer to, and those guarantees are re-verified at generation
//! time.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::classify;
use crate::cycles::orient_and_partition;
use crate::dual::dualize;
use crate::embedding::{FaceId, Triangulation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Tetrahedron,
    Octahedron,
    Icosahedron,
    /// Ladder of two vertex paths whose canonical Hamiltonian dual cycle
    /// caresses exactly four faces; the interior tree is a path of k+1 nodes.
    Serpentine { k: usize },
    /// Crown construction whose canonical cycle yields an interior node with
    /// exactly 2k+1 pinched faces, no caressed face, and degree k+2.
    Pinwheel { k: usize },
    RandomStacked { n: usize, seed: u64 },
    RandomFlip { n: usize, flips: usize, seed: u64 },
}

impl Kind {
    pub fn name(&self) -> String {
        match self {
            Kind::Tetrahedron => "tetrahedron".into(),
            Kind::Octahedron => "octahedron".into(),
            Kind::Icosahedron => "icosahedron".into(),
            Kind::Serpentine { k } => format!("serpentine({k})"),
            Kind::Pinwheel { k } => format!("pinwheel({k})"),
            Kind::RandomStacked { n, seed } => format!("random_stacked({n},{seed})"),
            Kind::RandomFlip { n, flips, seed } => format!("random_flip({n},{flips},{seed})"),
        }
    }
}

pub struct Generated {
    pub triangulation: Triangulation,
    /// For serpentine and pinwheel: the dual cycle (as a face-id sequence)
    /// that realizes the family's guarantees.
    pub canonical_cycle: Option<Vec<FaceId>>,
}

/// Orient a sphere triangulation's triangle list consistently (each directed
/// edge used exactly once) by propagation from the first triangle.
fn orient_faces(n: usize, tris: &[[usize; 3]]) -> Result<Vec<[usize; 3]>> {
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    for (e, ts) in &by_edge {
        if ts.len() != 2 {
            return Err(Error::InvalidParams(format!(
                "edge {e:?} lies on {} triangles, expected 2",
                ts.len()
            )));
        }
    }
    let mut oriented: Vec<Option<[usize; 3]>> = vec![None; tris.len()];
    oriented[0] = Some(tris[0]);
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let t = oriented[i].unwrap();
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let &[x, y] = &by_edge[&(a.min(b), a.max(b))][..] else {
                unreachable!()
            };
            let j = if x == i { y } else { x };
            // neighbor must traverse the shared edge as (b, a); try the
            // rotations of the stored triple, then of its reflection
            let u = tris[j];
            let refl = [u[0], u[2], u[1]];
            let has_dart =
                |t: &[usize; 3]| (0..3).any(|s| t[s] == b && t[(s + 1) % 3] == a);
            let orientations = [
                [u[0], u[1], u[2]],
                [u[1], u[2], u[0]],
                [u[2], u[0], u[1]],
                refl,
                [refl[1], refl[2], refl[0]],
                [refl[2], refl[0], refl[1]],
            ];
            let cand = *orientations.iter().find(|r| has_dart(r)).ok_or_else(|| {
                Error::InvalidParams("triangle list is not orientable".into())
            })?;
            match oriented[j] {
                Some(prev) => {
                    let same_cycle = (0..3).any(|r| {
                        prev == [cand[r], cand[(r + 1) % 3], cand[(r + 2) % 3]]
                    });
                    if !same_cycle {
                        return Err(Error::InvalidParams(
                            "triangle list not consistently orientable".into(),
                        ));
                    }
                }
                None => {
                    oriented[j] = Some(cand);
                    stack.push(j);
                }
            }
        }
    }
    if oriented.iter().any(|o| o.is_none()) {
        return Err(Error::InvalidParams("triangle list disconnected".into()));
    }
    let out: Vec<[usize; 3]> = oriented.into_iter().map(|o| o.unwrap()).collect();
    // sanity: every dart exactly once
    let mut darts = std::collections::BTreeSet::new();
    for t in &out {
        for k in 0..3 {
            if !darts.insert((t[k], t[(k + 1) % 3])) {
                return Err(Error::InvalidParams("dart used twice".into()));
            }
        }
    }
    let _ = n;
    Ok(out)
}

/// Clockwise rotation system from consistently oriented triangles: a
/// triangle walked v -> x -> y contributes succ_v(y) = x.
fn rotations_from_oriented(n: usize, faces: &[[usize; 3]]) -> Result<Vec<Vec<usize>>> {
    let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for t in faces {
        for k in 0..3 {
            let (v, x, y) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
            if succ[v].insert(y, x).is_some() {
                return Err(Error::InvalidParams(format!(
                    "vertex {v}: successor of {y} defined twice"
                )));
            }
        }
    }
    let mut rotations = Vec::with_capacity(n);
    for v in 0..n {
        let deg = succ[v].len();
        if deg == 0 {
            return Err(Error::InvalidParams(format!("isolated vertex {v}")));
        }
        let start = *succ[v].keys().next().unwrap();
        let mut order = vec![start];
        let mut cur = succ[v][&start];
        while cur != start {
            order.push(cur);
            cur = *succ[v].get(&cur).ok_or_else(|| {
                Error::InvalidParams(format!("vertex {v}: rotation does not close"))
            })?;
            if order.len() > deg {
                return Err(Error::InvalidParams(format!(
                    "vertex {v}: rotation has multiple orbits"
                )));
            }
        }
        if order.len() != deg {
            return Err(Error::InvalidParams(format!(
                "vertex {v}: rotation has multiple orbits"
            )));
        }
        rotations.push(order);
    }
    Ok(rotations)
}

fn triangulation_from_tris(n: usize, tris: &[[usize; 3]]) -> Result<Triangulation> {
    let oriented = orient_faces(n, tris)?;
    let rotations = rotations_from_oriented(n, &oriented)?;
    Triangulation::new(n, rotations)
}

/// Map a list of triangle triples to the face ids assigned by the
/// deterministic face walk.
fn face_ids_of(t: &Triangulation, tris: &[[usize; 3]]) -> Result<Vec<FaceId>> {
    let mut lookup: BTreeMap<[usize; 3], FaceId> = BTreeMap::new();
    for f in t.map().faces() {
        let mut key = [f.vertices[0], f.vertices[1], f.vertices[2]];
        key.sort_unstable();
        lookup.insert(key, f.id);
    }
    tris.iter()
        .map(|t3| {
            let mut key = *t3;
            key.sort_unstable();
            lookup
                .get(&key)
                .copied()
                .ok_or_else(|| Error::Internal(format!("triangle {key:?} not a face")))
        })
        .collect()
}

fn tetrahedron() -> Result<Generated> {
    let tris = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    Ok(Generated {
        triangulation: triangulation_from_tris(4, &tris)?,
        canonical_cycle: None,
    })
}

fn octahedron() -> Result<Generated> {
    // poles 0 and 5, equator 1-2-3-4
    let tris = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 1],
        [5, 2, 1],
        [5, 3, 2],
        [5, 4, 3],
        [5, 1, 4],
    ];
    Ok(Generated {
        triangulation: triangulation_from_tris(6, &tris)?,
        canonical_cycle: None,
    })
}

fn icosahedron() -> Result<Generated> {
    // poles 0 and 11, upper ring 1..=5, lower ring 6..=10
    let mut tris = Vec::new();
    for i in 0..5usize {
        let j = (i + 1) % 5;
        let (u, uj) = (1 + i, 1 + j);
        let (l, lj) = (6 + i, 6 + j);
        tris.push([0, u, uj]);
        tris.push([u, l, uj]);
        tris.push([uj, l, lj]);
        tris.push([11, lj, l]);
    }
    Ok(Generated {
        triangulation: triangulation_from_tris(12, &tris)?,
        canonical_cycle: None,
    })
}

/// Two vertex paths a_0..a_m-1 and b_0..b_m-1 (m = k+1) joined by a front
/// strip (diagonals a_i b_i, a_i b_i+1) and a rear strip (diagonals
/// a_i b_i-1, a_i b_i-2). The canonical dual cycle runs once through each
/// strip, crossing between them at the two end rungs.
fn serpentine(k: usize) -> Result<Generated> {
    if k < 2 {
        return Err(Error::InvalidParams(format!(
            "serpentine requires k >= 2, got {k}"
        )));
    }
    let m = k + 1;
    let a = |i: usize| i;
    let b = |i: usize| m + i;
    let n = 2 * m;

    let mut front: Vec<[usize; 3]> = Vec::new();
    for i in 0..m - 1 {
        front.push([a(i), b(i), b(i + 1)]); // T1_i
        front.push([a(i), b(i + 1), a(i + 1)]); // T2_i
    }
    let mut rear: Vec<[usize; 3]> = Vec::new();
    rear.push([a(0), a(1), b(0)]);
    for t in 1..m - 1 {
        rear.push([a(t), a(t + 1), b(t - 1)]);
        rear.push([a(t + 1), b(t - 1), b(t)]);
    }
    rear.push([a(m - 1), b(m - 2), b(m - 1)]);

    let mut tris = front.clone();
    tris.extend(rear.iter().copied());
    let t = triangulation_from_tris(n, &tris)?;

    // cycle: front strip in order, then the rear strip reversed
    let mut cyc_tris = front;
    cyc_tris.extend(rear.into_iter().rev());
    let cycle = face_ids_of(&t, &cyc_tris)?;

    // re-verify the guarantee: the canonical cycle caresses exactly 4 faces
    let d = dualize(&t)?;
    let c = orient_and_partition(&d, &cycle)?;
    let cls = classify(&d, &c);
    if cls.kappa != 4 || cls.per_side[0].kappa != 2 || cls.per_side[1].kappa != 2 {
        return Err(Error::Internal(format!(
            "serpentine({k}) classifies to kappa={} (per side {:?}), expected 4 (2+2)",
            cls.kappa, cls.per_side
        )));
    }

    Ok(Generated {
        triangulation: t,
        canonical_cycle: Some(cycle),
    })
}

/// Blades around a row of touched hub vertices. Each of the k+2 blades
/// carries a lens (a caressed leaf behind a single-edge keeper). The k-1
/// hubs each receive exactly two contact runs from end wedges and hub-gap
/// fingers of the strip, so every interior face except the lenses is
/// pinched, and all of them merge into one node: blade-blade, blade-hub and
/// hub-hub separations all pass an off-strip triangle whose corners are
/// pinched, which blocks them from being keeper paths.
fn pinwheel(k: usize) -> Result<Generated> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidParams(format!(
            "pinwheel is realized for k in 1..=3, got {k}"
        )));
    }

    // vertex allocation
    let s = k + 2; // blades and lenses
    let blade = |j: usize| j; // u_0 .. u_{s-1}
    let lens = |j: usize| s + j; // l_0 .. l_{s-1}
    let hub = |t: usize| 2 * s + t; // h_1 .. h_{k-1}  (index from 0)
    let rail_base = 2 * s + (k - 1);

    // Per k: the rail ring (in cycle order), the strip and the off-strip
    // interior triangles, laid out per the gap plan:
    // k=1: three direct gaps around a central triangle;
    // k=2: two end wedges to the single hub plus two direct gaps;
    // k=3: end wedges to h_1 and h_2, one finger into the hub gap, two
    //      direct gaps.
    let mut rails_needed = 0usize;
    let mut rail_ids: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut rail = |name: &'static str| -> usize {
        *rail_ids.entry(name).or_insert_with(|| {
            let id = rail_base + rails_needed;
            rails_needed += 1;
            id
        })
    };

    let mut strip: Vec<[usize; 3]> = Vec::new();
    let mut interior_off: Vec<[usize; 3]> = Vec::new();
    let rail_ring: Vec<usize>;

    // lens zone of blade j between rails `a` and `b`
    let lens_zone = |strip: &mut Vec<[usize; 3]>, j: usize, a: usize, b: usize| {
        strip.push([blade(j), a, lens(j)]);
        strip.push([lens(j), a, b]);
        strip.push([lens(j), b, blade(j)]);
    };

    match k {
        1 => {
            let r = [rail("r0"), rail("r1"), rail("r2")];
            for j in 0..3 {
                lens_zone(&mut strip, j, r[(j + 2) % 3], r[j]);
                strip.push([blade(j), r[j], blade((j + 1) % 3)]);
            }
            interior_off.push([blade(0), blade(1), blade(2)]);
            rail_ring = r.to_vec();
        }
        2 => {
            let (a0, r01, b1, rr) = (rail("a0"), rail("r01"), rail("b1"), rail("rr"));
            let (a2, r23, b3, rl) = (rail("a2"), rail("r23"), rail("b3"), rail("rl"));
            let h1 = hub(0);
            lens_zone(&mut strip, 0, a0, r01);
            strip.push([blade(0), r01, blade(1)]); // direct gap (u0,u1)
            lens_zone(&mut strip, 1, r01, b1);
            strip.push([blade(1), b1, rr]);
            strip.push([blade(1), rr, h1]); // right end wedge
            strip.push([h1, rr, blade(2)]);
            strip.push([blade(2), rr, a2]);
            lens_zone(&mut strip, 2, a2, r23);
            strip.push([blade(2), r23, blade(3)]); // direct gap (u2,u3)
            lens_zone(&mut strip, 3, r23, b3);
            strip.push([blade(3), b3, rl]);
            strip.push([blade(3), rl, h1]); // left end wedge
            strip.push([h1, rl, blade(0)]);
            strip.push([blade(0), rl, a0]);
            interior_off.push([blade(0), blade(1), h1]);
            interior_off.push([blade(2), blade(3), h1]);
            rail_ring = vec![a0, r01, b1, rr, a2, r23, b3, rl];
        }
        3 => {
            let (a0, r01, b1) = (rail("a0"), rail("r01"), rail("b1"));
            let (fa, ft, fd) = (rail("fa"), rail("ft"), rail("fd"));
            let (a2, r23, b3, rw) = (rail("a2"), rail("r23"), rail("b3"), rail("rw"));
            let (a4, b4, rl) = (rail("a4"), rail("b4"), rail("rl"));
            let (h1, h2) = (hub(0), hub(1));
            lens_zone(&mut strip, 0, a0, r01);
            strip.push([blade(0), r01, blade(1)]); // direct over h1
            lens_zone(&mut strip, 1, r01, b1);
            strip.push([blade(1), b1, fa]);
            strip.push([blade(1), fa, h1]); // finger: left wall
            strip.push([h1, fa, ft]);
            strip.push([h1, ft, h2]); // finger tip
            strip.push([h2, ft, fd]);
            strip.push([h2, fd, blade(2)]); // finger: right wall
            strip.push([blade(2), fd, a2]);
            lens_zone(&mut strip, 2, a2, r23);
            strip.push([blade(2), r23, blade(3)]); // direct over h2
            lens_zone(&mut strip, 3, r23, b3);
            strip.push([blade(3), b3, rw]);
            strip.push([blade(3), rw, h2]); // right end wedge
            strip.push([h2, rw, blade(4)]);
            strip.push([blade(4), rw, a4]);
            lens_zone(&mut strip, 4, a4, b4);
            strip.push([blade(4), b4, rl]);
            strip.push([blade(4), rl, h1]); // left end wedge
            strip.push([h1, rl, blade(0)]);
            strip.push([blade(0), rl, a0]);
            interior_off.push([blade(0), blade(1), h1]);
            interior_off.push([blade(2), blade(3), h2]);
            interior_off.push([blade(4), h1, h2]);
            rail_ring = vec![a0, r01, b1, fa, ft, fd, a2, r23, b3, rw, a4, b4, rl];
        }
        _ => unreachable!(),
    }

    let outer = rail_base + rails_needed;
    let n = outer + 1;

    let mut tris = strip.clone();
    tris.extend(interior_off.iter().copied());
    for t in 0..rail_ring.len() {
        tris.push([outer, rail_ring[(t + 1) % rail_ring.len()], rail_ring[t]]);
    }

    let t = triangulation_from_tris(n, &tris)?;
    let cycle = face_ids_of(&t, &strip)?;

    // re-verify the guarantee: some node has exactly (2k+1, 0, k+2)
    let d = dualize(&t)?;
    let c = orient_and_partition(&d, &cycle)?;
    let cls = classify(&d, &c);
    let aux = crate::auxtrees::build_aux(&d, &c, &cls)?;
    let trees = crate::auxtrees::build_side_trees(&d, &c, &aux, &cls)?;
    let found = trees.sides[0]
        .nodes
        .iter()
        .chain(trees.sides[1].nodes.iter())
        .any(|u| u.rho == 2 * k + 1 && u.kappa == 0 && u.degree == k + 2);
    if !found {
        return Err(Error::Internal(format!(
            "pinwheel({k}) lacks a node with (rho, kappa, delta) = ({}, 0, {})",
            2 * k + 1,
            k + 2
        )));
    }

    Ok(Generated {
        triangulation: t,
        canonical_cycle: Some(cycle),
    })
}

/// Oriented triangle list grown by repeated vertex insertion into a random
/// face, starting from the tetrahedron.
fn stacked_faces(n: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 3]> {
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 3], [0, 2, 1], [0, 3, 2], [1, 2, 3]];
    for v in 4..n {
        let i = rng.gen_range(0..faces.len());
        let [x, y, z] = faces[i];
        faces[i] = [x, y, v];
        faces.push([y, z, v]);
        faces.push([z, x, v]);
    }
    faces
}

fn random_stacked(n: usize, seed: u64) -> Result<Generated> {
    if n < 4 {
        return Err(Error::InvalidParams(format!(
            "random_stacked requires n >= 4, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let faces = stacked_faces(n, &mut rng);
    let rotations = rotations_from_oriented(n, &faces)?;
    Ok(Generated {
        triangulation: Triangulation::new(n, rotations)?,
        canonical_cycle: None,
    })
}

fn random_flip(n: usize, flips: usize, seed: u64) -> Result<Generated> {
    if n < 4 {
        return Err(Error::InvalidParams(format!(
            "random_flip requires n >= 4, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut faces = stacked_faces(n, &mut rng);

    // dart -> face index
    let rebuild = |faces: &Vec<[usize; 3]>| -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for (i, t) in faces.iter().enumerate() {
            for k in 0..3 {
                m.insert((t[k], t[(k + 1) % 3]), i);
            }
        }
        m
    };
    let mut dart_face = rebuild(&faces);
    let mut adj: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for t in &faces {
        for k in 0..3 {
            adj[t[k]].insert(t[(k + 1) % 3]);
            adj[t[(k + 1) % 3]].insert(t[k]);
        }
    }

    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < flips && attempts < flips * 20 + 50 {
        attempts += 1;
        let u = rng.gen_range(0..n);
        if adj[u].is_empty() {
            continue;
        }
        let nbrs: Vec<usize> = adj[u].iter().copied().collect();
        let v = nbrs[rng.gen_range(0..nbrs.len())];
        if adj[u].len() <= 3 || adj[v].len() <= 3 {
            continue;
        }
        let fi = dart_face[&(u, v)];
        let fj = dart_face[&(v, u)];
        // rotate triangles so they read (u, v, w) and (v, u, x)
        let rot_to = |t: [usize; 3], first: usize| -> [usize; 3] {
            let p = (0..3).find(|&i| t[i] == first).unwrap();
            [t[p], t[(p + 1) % 3], t[(p + 2) % 3]]
        };
        let [_, _, w] = rot_to(faces[fi], u);
        let [_, _, x] = rot_to(faces[fj], v);
        if w == x || adj[w].contains(&x) {
            continue;
        }
        faces[fi] = [x, v, w];
        faces[fj] = [w, u, x];
        adj[u].remove(&v);
        adj[v].remove(&u);
        adj[w].insert(x);
        adj[x].insert(w);
        for &f in &[fi, fj] {
            for k in 0..3 {
                dart_face.insert((faces[f][k], faces[f][(k + 1) % 3]), f);
            }
        }
        done += 1;
    }

    let rotations = rotations_from_oriented(n, &faces)?;
    Ok(Generated {
        triangulation: Triangulation::new(n, rotations)?,
        canonical_cycle: None,
    })
}

pub fn generate(kind: Kind) -> Result<Generated> {
    match kind {
        Kind::Tetrahedron => tetrahedron(),
        Kind::Octahedron => octahedron(),
        Kind::Icosahedron => icosahedron(),
        Kind::Serpentine { k } => serpentine(k),
        Kind::Pinwheel { k } => pinwheel(k),
        Kind::RandomStacked { n, seed } => random_stacked(n, seed),
        Kind::RandomFlip { n, flips, seed } => random_flip(n, flips, seed),
    }
}
