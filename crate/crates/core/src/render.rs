//! SVG rendering: the triangulation drawn with a barycentric (Tutte)
//! embedding, dual cells shaded by classification (caressed teal, pinched
//! pink), and the cycle or curve drawn bold on top. Output bytes are
//! deterministic for identical inputs.

use std::fmt::Write as _;

use crate::classify::{Classification, FaceStatus};
use crate::curve::{CurveEvent, ProperGoodCurve};
use crate::cycles::DualCycle;
use crate::dual::DualGraph;
use crate::embedding::Triangulation;
use crate::error::{Error, Result};

pub enum Overlay<'a> {
    Cycle(&'a DualCycle),
    Curve(&'a ProperGoodCurve),
    None,
}

const CARESSED_FILL: &str = "#7fd4c8";
const PINCHED_FILL: &str = "#f4a6c8";

/// Barycentric embedding: the three vertices of face 0 are pinned to an
/// outer triangle and every other vertex is iterated to the average of its
/// neighbors until the largest move is at most 1e-9.
pub fn tutte_embedding(t: &Triangulation) -> Result<Vec<(f64, f64)>> {
    let n = t.n();
    let outer = t.map().face(0).vertices.clone();
    let corners = [(0.5, 0.02), (0.98, 0.85), (0.02, 0.85)];
    let mut pos = vec![(0.5f64, 0.5f64); n];
    let mut pinned = vec![false; n];
    for (i, &v) in outer.iter().enumerate() {
        pos[v] = corners[i];
        pinned[v] = true;
    }
    let mut iters = 0usize;
    loop {
        let mut max_move = 0.0f64;
        for v in 0..n {
            if pinned[v] {
                continue;
            }
            let nbrs = t.map().neighbors(v);
            let (mut sx, mut sy) = (0.0, 0.0);
            for &w in nbrs {
                sx += pos[w].0;
                sy += pos[w].1;
            }
            let k = nbrs.len() as f64;
            let np = (sx / k, sy / k);
            let d = (np.0 - pos[v].0).abs().max((np.1 - pos[v].1).abs());
            max_move = max_move.max(d);
            pos[v] = np;
        }
        iters += 1;
        if max_move <= 1e-9 {
            break;
        }
        if iters > 500_000 {
            return Err(Error::Internal(
                "barycentric iteration did not converge".into(),
            ));
        }
    }
    Ok(pos)
}

fn fmt_coord(x: f64) -> String {
    // fixed precision keeps output bytes stable
    format!("{:.6}", x * 1000.0)
}

fn face_barycenter(t: &Triangulation, pos: &[(f64, f64)], f: usize) -> (f64, f64) {
    let vs = &t.map().face(f).vertices;
    let k = vs.len() as f64;
    (
        vs.iter().map(|&v| pos[v].0).sum::<f64>() / k,
        vs.iter().map(|&v| pos[v].1).sum::<f64>() / k,
    )
}

/// Render the instance to an SVG document string.
pub fn render_svg(
    t: &Triangulation,
    d: &DualGraph,
    overlay: Overlay<'_>,
    cls: Option<&Classification>,
) -> Result<String> {
    let pos = tutte_embedding(t)?;
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-20 -20 1040 1040\">\n",
    );

    // dual cells shaded by status: polygon through the barycenters of the
    // triangles around each primal vertex
    if let Some(cls) = cls {
        for v in 0..t.n() {
            let fill = match cls.status[v] {
                FaceStatus::Caressed => CARESSED_FILL,
                FaceStatus::Pinched => PINCHED_FILL,
                FaceStatus::Untouched => continue,
            };
            let cell = d.face_of_vertex(v);
            let mut pts = String::new();
            for &f in &cell.vertices {
                let (x, y) = face_barycenter(t, &pos, f);
                let _ = write!(pts, "{},{} ", fmt_coord(x), fmt_coord(y));
            }
            let _ = writeln!(
                svg,
                "<polygon points=\"{}\" fill=\"{}\" stroke=\"none\" opacity=\"0.85\"/>",
                pts.trim_end(),
                fill
            );
        }
    }

    // primal edges
    for &(u, v) in t.map().edges() {
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888888\" stroke-width=\"1\"/>",
            fmt_coord(pos[u].0),
            fmt_coord(pos[u].1),
            fmt_coord(pos[v].0),
            fmt_coord(pos[v].1)
        );
    }

    match overlay {
        Overlay::Cycle(c) => {
            let seq = c.vertex_seq();
            let l = seq.len();
            let mut pts = String::new();
            for i in 0..=l {
                let f = seq[i % l];
                let (x, y) = face_barycenter(t, &pos, f);
                let _ = write!(pts, "{},{} ", fmt_coord(x), fmt_coord(y));
            }
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#222222\" stroke-width=\"4\"/>",
                pts.trim_end()
            );
        }
        Overlay::Curve(curve) => {
            let mut pts = String::new();
            let events = &curve.events;
            for i in 0..=events.len() {
                let (x, y) = match &events[i % events.len()] {
                    CurveEvent::InFace(f) => face_barycenter(t, &pos, *f),
                    CurveEvent::CrossEdge(e) => {
                        let (a, b) = t.map().edge_endpoints(*e);
                        ((pos[a].0 + pos[b].0) / 2.0, (pos[a].1 + pos[b].1) / 2.0)
                    }
                    CurveEvent::AtVertex(v) => pos[*v],
                };
                let _ = write!(pts, "{},{} ", fmt_coord(x), fmt_coord(y));
            }
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#1d4ed8\" stroke-width=\"4\"/>",
                pts.trim_end()
            );
        }
        Overlay::None => {}
    }

    // primal vertices
    for v in 0..t.n() {
        let _ = writeln!(
            svg,
            "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"#111111\"/>",
            fmt_coord(pos[v].0),
            fmt_coord(pos[v].1)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
