//! The envelope curve through the leaves of a spanning tree: a closed curve
//! that crosses tree edges with a leaf endpoint once (at the leaf), other
//! tree edges never, and every non-tree edge exactly twice. Subdividing the
//! doubly-crossed edges makes the curve 1-proper, certifying the leaves as a
//! one-bend collinear set.
//!
//! The curve itself is combinatorial: segments along tree-edge sides, arcs
//! sweeping rotation intervals at vertices, and leaf touch points. Geometry
//! only enters for SVG rendering.

use crate::error::{GraphError, Result};
use crate::greedy::SpanningTree;
use crate::plane::{PlaneGraph, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

// ----------------------------------------------------------------------
// Straight-line layout (barycentric)
// ----------------------------------------------------------------------

pub type Layout = Vec<(f64, f64)>;

/// Barycentric layout: the outer walk is fixed on a regular polygon and each
/// interior vertex sits at the average of its neighbors (conjugate-gradient
/// solve of the interior Laplacian system).
pub fn straight_line_layout(g: &PlaneGraph) -> Result<Layout> {
    if g.component_count() != 1 {
        return Err(GraphError::LayoutFailed("disconnected".into()));
    }
    let n_bound = g.id_bound();
    let walks = g.outer_walks();
    let walk = walks
        .first()
        .ok_or_else(|| GraphError::LayoutFailed("no outer face".into()))?;
    let k = walk.len();
    let mut pos: Layout = vec![(0.0, 0.0); n_bound];
    let mut fixed = vec![false; n_bound];
    for (i, &v) in walk.iter().enumerate() {
        let a = 2.0 * std::f64::consts::PI * (i as f64) / (k as f64);
        pos[v as usize] = (a.cos(), a.sin());
        fixed[v as usize] = true;
    }
    let interior: Vec<VertexId> = g.alive_vertices().filter(|&v| !fixed[v as usize]).collect();
    if interior.is_empty() {
        return Ok(pos);
    }
    let idx: BTreeMap<VertexId, usize> = interior.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = interior.len();
    // L x = b per coordinate, L = deg on diagonal minus interior adjacency
    let mut bx = vec![0.0f64; m];
    let mut by = vec![0.0f64; m];
    for (i, &v) in interior.iter().enumerate() {
        for w in g.neighbors(v) {
            if fixed[w as usize] {
                bx[i] += pos[w as usize].0;
                by[i] += pos[w as usize].1;
            }
        }
    }
    let matvec = |x: &[f64], out: &mut [f64]| {
        for (i, &v) in interior.iter().enumerate() {
            let mut acc = g.degree_of(v) as f64 * x[i];
            for w in g.neighbors(v) {
                if let Some(&j) = idx.get(&w) {
                    acc -= x[j];
                }
            }
            out[i] = acc;
        }
    };
    let solve = |b: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; m];
        let mut r = b.to_vec();
        let mut p = r.clone();
        let mut rs: f64 = r.iter().map(|v| v * v).sum();
        let mut ap = vec![0.0; m];
        let tol = 1e-24 * (rs.max(1e-300));
        for _ in 0..20 * m + 100 {
            if rs <= tol {
                break;
            }
            matvec(&p, &mut ap);
            let alpha = rs / p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>();
            for i in 0..m {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let rs2: f64 = r.iter().map(|v| v * v).sum();
            let beta = rs2 / rs;
            rs = rs2;
            for i in 0..m {
                p[i] = r[i] + beta * p[i];
            }
        }
        x
    };
    let sx = solve(&bx);
    let sy = solve(&by);
    for (i, &v) in interior.iter().enumerate() {
        pos[v as usize] = (sx[i], sy[i]);
    }
    // degenerate coordinates mean the solve failed (or the graph was not
    // internally 3-connected enough)
    for &v in &interior {
        let (x, y) = pos[v as usize];
        if !x.is_finite() || !y.is_finite() {
            return Err(GraphError::LayoutFailed(format!("vertex {v} diverged")));
        }
    }
    Ok(pos)
}

/// Count proper crossings between non-adjacent edges of the drawing.
pub fn count_crossings(g: &PlaneGraph, layout: &Layout) -> usize {
    let edges: Vec<(VertexId, VertexId)> = g
        .alive_vertices()
        .flat_map(|v| {
            g.neighbors(v)
                .into_iter()
                .filter(move |&w| v < w)
                .map(move |w| (v, w))
        })
        .collect();
    let mut crossings = 0;
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if segments_cross(
                layout[a as usize],
                layout[b as usize],
                layout[c as usize],
                layout[d as usize],
            ) {
                crossings += 1;
            }
        }
    }
    crossings
}

fn orient(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> f64 {
    (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
}

fn segments_cross(p1: (f64, f64), p2: (f64, f64), p3: (f64, f64), p4: (f64, f64)) -> bool {
    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

// ----------------------------------------------------------------------
// The envelope curve
// ----------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveEvent {
    /// Travel along the right side of the tree edge from -> to.
    Seg { from: VertexId, to: VertexId },
    /// Touch the leaf (crosses the leaf's tree edge exactly once).
    Touch { leaf: VertexId, via: VertexId },
    /// Circular arc at `at` from the dart toward `entered_from` to the dart
    /// toward `exit_to` (clockwise rotation order), crossing every edge
    /// strictly between them. `entered_from == exit_to` sweeps the full
    /// circle (leaf arcs).
    Arc {
        at: VertexId,
        entered_from: VertexId,
        exit_to: VertexId,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeCurve {
    pub events: Vec<CurveEvent>,
    /// an arc corner inside a face, witnessing goodness
    pub goodness_witness: (VertexId, VertexId, VertexId),
}

fn tree_degree(g: &PlaneGraph, tree: &SpanningTree, v: VertexId) -> usize {
    tree.degree_in_tree(g, v)
}

fn is_tree_edge(tree: &SpanningTree, u: VertexId, v: VertexId) -> bool {
    tree.parent[u as usize] == v || tree.parent[v as usize] == u
}

/// Build the envelope curve by walking the contour of the tree: the unique
/// face orbit of T in G's embedding, touching each leaf once.
pub fn build_envelope_curve(g: &PlaneGraph, tree: &SpanningTree) -> Result<EnvelopeCurve> {
    let root = tree.root;
    if tree_degree(g, tree, root) < 2 {
        return Err(GraphError::RootIsLeaf(root));
    }
    // next tree dart clockwise from d (skipping non-tree darts), as an
    // origin/target pair
    let next_tree_dart = |v: VertexId, toward: VertexId| -> (VertexId, VertexId) {
        let rot = g.neighbors(v);
        let k = rot.len();
        let p = rot.iter().position(|&u| u == toward).unwrap();
        for i in 1..=k {
            let w = rot[(p + i) % k];
            if is_tree_edge(tree, v, w) {
                return (v, w);
            }
        }
        unreachable!("tree vertex with no tree dart")
    };
    // start: root's lowest-target tree dart
    let start_to = g
        .neighbors(root)
        .into_iter()
        .filter(|&w| is_tree_edge(tree, root, w))
        .min()
        .unwrap();
    let mut events = Vec::new();
    let mut witness = None;
    let (mut u, mut v) = (root, start_to);
    loop {
        events.push(CurveEvent::Seg { from: u, to: v });
        if tree_degree(g, tree, v) == 1 {
            events.push(CurveEvent::Touch { leaf: v, via: u });
            events.push(CurveEvent::Arc {
                at: v,
                entered_from: u,
                exit_to: u,
            });
            if witness.is_none() {
                witness = Some((v, u, u));
            }
            let (nu, nv) = (v, u);
            u = nu;
            v = nv;
        } else {
            let (_, w) = next_tree_dart(v, u);
            events.push(CurveEvent::Arc {
                at: v,
                entered_from: u,
                exit_to: w,
            });
            if witness.is_none() {
                witness = Some((v, u, w));
            }
            let nu = v;
            u = nu;
            v = w;
        }
        if u == root && v == start_to {
            break;
        }
    }
    Ok(EnvelopeCurve {
        events,
        goodness_witness: witness.expect("trees with >= 2 vertices have arcs"),
    })
}

/// The edges crossed by an arc: rotation targets strictly between
/// `entered_from` and `exit_to` clockwise (all other darts for a full
/// sweep).
fn arc_crossings(g: &PlaneGraph, at: VertexId, entered_from: VertexId, exit_to: VertexId) -> Vec<VertexId> {
    let rot = g.neighbors(at);
    let k = rot.len();
    let p = rot.iter().position(|&u| u == entered_from).unwrap();
    if entered_from == exit_to {
        return (1..k).map(|i| rot[(p + i) % k]).collect();
    }
    let mut out = Vec::new();
    let mut i = (p + 1) % k;
    while rot[i] != exit_to {
        out.push(rot[i]);
        i = (i + 1) % k;
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct CurveReport {
    pub closed: bool,
    pub two_proper: bool,
    pub leaves_on_curve: bool,
    pub good: bool,
    /// crossing count per edge (u < v)
    pub histogram: BTreeMap<(VertexId, VertexId), usize>,
    pub failures: Vec<String>,
}

impl CurveReport {
    pub fn ok(&self) -> bool {
        self.closed && self.two_proper && self.leaves_on_curve && self.good
    }
}

/// Check closedness, the per-edge crossing bound (<= 2), leaf containment,
/// and goodness; returns the per-edge crossing histogram.
pub fn verify_proper_good(g: &PlaneGraph, tree: &SpanningTree, curve: &EnvelopeCurve) -> CurveReport {
    let mut rep = CurveReport {
        closed: true,
        two_proper: true,
        leaves_on_curve: true,
        good: false,
        histogram: BTreeMap::new(),
        failures: Vec::new(),
    };
    let events = &curve.events;
    if events.is_empty() {
        rep.closed = false;
        rep.failures.push("empty curve".into());
        return rep;
    }
    // grammar: Seg(u,v) [Touch(v)] Arc(v, u, w) Seg(v, w) ... cyclically
    let k = events.len();
    for i in 0..k {
        if let CurveEvent::Seg { from, to } = events[i] {
            if !is_tree_edge(tree, from, to) {
                rep.closed = false;
                rep.failures
                    .push(format!("segment along non-tree edge {from}-{to}"));
            }
            // the next arc must be at `to` entering from `from`
            let mut j = (i + 1) % k;
            if let CurveEvent::Touch { leaf, via } = events[j] {
                if leaf != to || via != from {
                    rep.closed = false;
                    rep.failures.push(format!("touch chain broken at {leaf}"));
                }
                j = (j + 1) % k;
            }
            match events[j] {
                CurveEvent::Arc {
                    at,
                    entered_from,
                    exit_to,
                } => {
                    if at != to || entered_from != from {
                        rep.closed = false;
                        rep.failures.push(format!("arc chain broken at {at}"));
                    }
                    let nxt = (j + 1) % k;
                    match events[nxt] {
                        CurveEvent::Seg { from: f2, to: t2 } => {
                            if f2 != at || t2 != exit_to {
                                rep.closed = false;
                                rep.failures.push(format!("segment chain broken at {at}"));
                            }
                        }
                        _ => {
                            rep.closed = false;
                            rep.failures.push("arc not followed by a segment".into());
                        }
                    }
                }
                _ => {
                    rep.closed = false;
                    rep.failures.push("segment not followed by an arc".into());
                }
            }
        }
    }
    // crossings
    let add = |u: VertexId, v: VertexId, hist: &mut BTreeMap<(u32, u32), usize>| {
        *hist.entry((u.min(v), u.max(v))).or_insert(0) += 1;
    };
    let mut touched: BTreeMap<VertexId, usize> = BTreeMap::new();
    for ev in events {
        match *ev {
            CurveEvent::Seg { .. } => {}
            CurveEvent::Touch { leaf, via } => {
                add(leaf, via, &mut rep.histogram);
                *touched.entry(leaf).or_insert(0) += 1;
            }
            CurveEvent::Arc {
                at,
                entered_from,
                exit_to,
            } => {
                for w in arc_crossings(g, at, entered_from, exit_to) {
                    add(at, w, &mut rep.histogram);
                }
                rep.good = true;
            }
        }
    }
    for (&(u, v), &c) in &rep.histogram {
        if c > 2 {
            rep.two_proper = false;
            rep.failures.push(format!("edge {u}-{v} crossed {c} times"));
        }
    }
    // each leaf touched exactly once, and only leaves touched
    for v in g.alive_vertices() {
        let deg = tree_degree(g, tree, v);
        let count = touched.get(&v).copied().unwrap_or(0);
        if deg == 1 && count != 1 {
            rep.leaves_on_curve = false;
            rep.failures.push(format!("leaf {v} touched {count} times"));
        }
        if deg != 1 && count != 0 {
            rep.leaves_on_curve = false;
            rep.failures.push(format!("non-leaf {v} touched"));
        }
    }
    if !rep.good {
        rep.failures.push("no arc event (goodness witness)".into());
    }
    rep
}

/// Classify every edge and compare the histogram with the exact expectation:
/// tree-internal 0, tree-leaf 1, non-tree 2.
pub fn histogram_matches_classes(
    g: &PlaneGraph,
    tree: &SpanningTree,
    report: &CurveReport,
) -> bool {
    for v in g.alive_vertices() {
        for w in g.neighbors(v) {
            if v >= w {
                continue;
            }
            let count = report.histogram.get(&(v, w)).copied().unwrap_or(0);
            let expected = if is_tree_edge(tree, v, w) {
                let leafy =
                    tree_degree(g, tree, v) == 1 || tree_degree(g, tree, w) == 1;
                usize::from(leafy)
            } else {
                2
            };
            if count != expected {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollinearCert {
    #[serde(rename = "S")]
    pub s: Vec<VertexId>,
    pub subdivided_edges: Vec<(VertexId, VertexId)>,
}

/// Subdivide each doubly-crossed edge once; the curve becomes 1-proper for
/// the subdivision G+, certifying the leaves as a one-bend collinear set.
pub fn subdivide_along_curve(
    g: &PlaneGraph,
    tree: &SpanningTree,
    curve: &EnvelopeCurve,
) -> Result<(PlaneGraph, CollinearCert, EnvelopeCurve)> {
    let report = verify_proper_good(g, tree, curve);
    if !report.ok() {
        return Err(GraphError::NotProperGood(report.failures.join("; ")));
    }
    let doubly: Vec<(VertexId, VertexId)> = report
        .histogram
        .iter()
        .filter(|&(_, &c)| c == 2)
        .map(|(&e, _)| e)
        .collect();
    // relabel alive vertices 0..n, then append one subdivision vertex per
    // doubly-crossed edge
    let alive: Vec<VertexId> = g.alive_vertices().collect();
    let mut new_id: BTreeMap<VertexId, u32> = BTreeMap::new();
    for (i, &v) in alive.iter().enumerate() {
        new_id.insert(v, i as u32);
    }
    let mut sub_of: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut next = alive.len() as u32;
    for &(u, v) in &doubly {
        sub_of.insert((u, v), next);
        next += 1;
    }
    let total = next as usize;
    let mut rotations: Vec<Vec<u32>> = Vec::with_capacity(total);
    for &v in &alive {
        let rot = g
            .neighbors(v)
            .into_iter()
            .map(|w| {
                let key = (v.min(w), v.max(w));
                match sub_of.get(&key) {
                    Some(&s) => s,
                    None => new_id[&w],
                }
            })
            .collect();
        rotations.push(rot);
    }
    for &(u, v) in &doubly {
        rotations.push(vec![new_id[&u], new_id[&v]]);
    }
    // outer walk with subdivision vertices spliced in
    let walk = g.outer_walks().into_iter().next().unwrap_or_default();
    let mut outer = Vec::new();
    for i in 0..walk.len() {
        let a = walk[i];
        let b = walk[(i + 1) % walk.len()];
        outer.push(new_id[&a]);
        if let Some(&s) = sub_of.get(&(a.min(b), a.max(b))) {
            outer.push(s);
        }
    }
    let g_plus = PlaneGraph::build_from_rotation(total, &rotations, &outer)?;
    // remap curve events through the relabeling; arc endpoints référence
    // rotation targets, which subdivision replaces
    let map_target = |at: VertexId, toward: VertexId| -> u32 {
        let key = (at.min(toward), at.max(toward));
        match sub_of.get(&key) {
            Some(&s) => s,
            None => new_id[&toward],
        }
    };
    let events = curve
        .events
        .iter()
        .map(|ev| match *ev {
            CurveEvent::Seg { from, to } => CurveEvent::Seg {
                from: new_id[&from],
                to: new_id[&to],
            },
            CurveEvent::Touch { leaf, via } => CurveEvent::Touch {
                leaf: new_id[&leaf],
                via: map_target(leaf, via),
            },
            CurveEvent::Arc {
                at,
                entered_from,
                exit_to,
            } => CurveEvent::Arc {
                at: new_id[&at],
                entered_from: map_target(at, entered_from),
                exit_to: map_target(at, exit_to),
            },
        })
        .collect();
    let (a, b, c) = curve.goodness_witness;
    let curve_plus = EnvelopeCurve {
        events,
        goodness_witness: (new_id[&a], map_target(a, b), map_target(a, c)),
    };
    let leaves: Vec<VertexId> = g
        .alive_vertices()
        .filter(|&v| tree_degree(g, tree, v) == 1)
        .collect();
    let cert = CollinearCert {
        s: leaves,
        subdivided_edges: doubly,
    };
    Ok((g_plus, cert, curve_plus))
}

/// Per-edge crossings of a remapped curve on the subdivided graph (no tree
/// structure needed).
pub fn crossing_histogram(g: &PlaneGraph, curve: &EnvelopeCurve) -> BTreeMap<(u32, u32), usize> {
    let mut hist = BTreeMap::new();
    for ev in &curve.events {
        match *ev {
            CurveEvent::Seg { .. } => {}
            CurveEvent::Touch { leaf, via } => {
                *hist.entry((leaf.min(via), leaf.max(via))).or_insert(0) += 1;
            }
            CurveEvent::Arc {
                at,
                entered_from,
                exit_to,
            } => {
                for w in arc_crossings(g, at, entered_from, exit_to) {
                    *hist.entry((at.min(w), at.max(w))).or_insert(0) += 1;
                }
            }
        }
    }
    hist
}

// ----------------------------------------------------------------------
// SVG rendering
// ----------------------------------------------------------------------

fn dist_point_seg(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let (wx, wy) = (p.0 - a.0, p.1 - a.1);
    let len2 = vx * vx + vy * vy;
    let t = if len2 <= 0.0 {
        0.0
    } else {
        ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0)
    };
    let (dx, dy) = (p.0 - (a.0 + t * vx), p.1 - (a.1 + t * vy));
    (dx * dx + dy * dy).sqrt()
}

/// Envelope radii: a third of the distance to the nearest other vertex or
/// non-incident edge.
pub fn envelope_radii(g: &PlaneGraph, layout: &Layout) -> Vec<f64> {
    let alive: Vec<VertexId> = g.alive_vertices().collect();
    let mut radii = vec![0.0; g.id_bound()];
    for &v in &alive {
        let p = layout[v as usize];
        let mut d = f64::INFINITY;
        for &w in &alive {
            if w != v {
                let q = layout[w as usize];
                d = d.min(((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt());
            }
        }
        for &a in &alive {
            for b in g.neighbors(a) {
                if a > b || a == v || b == v {
                    continue;
                }
                d = d.min(dist_point_seg(p, layout[a as usize], layout[b as usize]));
            }
        }
        radii[v as usize] = d / 3.0;
    }
    radii
}

/// Deterministic SVG: graph edges, optional tree highlight, optional
/// envelope circles and curve polyline.
pub fn export_svg(
    g: &PlaneGraph,
    layout: &Layout,
    tree: Option<&SpanningTree>,
    curve: Option<&EnvelopeCurve>,
) -> String {
    let scale = 400.0;
    let tx = |p: (f64, f64)| -> (f64, f64) { (scale * p.0 + 500.0, 500.0 - scale * p.1) };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">"
    );
    for v in g.alive_vertices() {
        for w in g.neighbors(v) {
            if v >= w {
                continue;
            }
            let a = tx(layout[v as usize]);
            let b = tx(layout[w as usize]);
            let treeish = tree.map_or(false, |t| is_tree_edge(t, v, w));
            let style = if treeish {
                "stroke=\"#c62828\" stroke-width=\"2.5\""
            } else {
                "stroke=\"#90a4ae\" stroke-width=\"1\""
            };
            let _ = writeln!(
                out,
                "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" {style}/>",
                a.0, a.1, b.0, b.1
            );
        }
    }
    if curve.is_some() {
        let radii = envelope_radii(g, layout);
        for v in g.alive_vertices() {
            let c = tx(layout[v as usize]);
            let _ = writeln!(
                out,
                "  <circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" fill=\"none\" stroke=\"#c8e6c9\" stroke-width=\"0.7\"/>",
                c.0,
                c.1,
                scale * radii[v as usize]
            );
        }
        let pts = curve_polyline(g, layout, &radii, curve.unwrap());
        let path: Vec<String> = pts
            .iter()
            .map(|p| {
                let q = tx(*p);
                format!("{:.4},{:.4}", q.0, q.1)
            })
            .collect();
        let _ = writeln!(
            out,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1.2\"/>",
            path.join(" ")
        );
    }
    for v in g.alive_vertices() {
        let c = tx(layout[v as usize]);
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"3\" fill=\"#263238\"/>",
            c.0, c.1
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.4}\" y=\"{:.4}\" font-size=\"9\">{v}</text>",
            c.0 + 4.0,
            c.1 - 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Geometric trace of the curve: per segment event, the right-side parallel
/// segment; per arc, sampled circle points; per touch, the vertex itself.
fn curve_polyline(
    _g: &PlaneGraph,
    layout: &Layout,
    radii: &[f64],
    curve: &EnvelopeCurve,
) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for ev in &curve.events {
        match *ev {
            CurveEvent::Seg { from, to } => {
                let a = layout[from as usize];
                let b = layout[to as usize];
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let len = (dx * dx + dy * dy).sqrt().max(1e-12);
                let (ux, uy) = (dx / len, dy / len);
                // right side of the travel direction in standard coordinates
                let (px, py) = (uy, -ux);
                let off = 0.25 * radii[from as usize].min(radii[to as usize]);
                let ra = radii[from as usize];
                let rb = radii[to as usize];
                pts.push((a.0 + ux * ra + px * off, a.1 + uy * ra + py * off));
                pts.push((b.0 - ux * rb + px * off, b.1 - uy * rb + py * off));
            }
            CurveEvent::Touch { leaf, .. } => {
                pts.push(layout[leaf as usize]);
            }
            CurveEvent::Arc {
                at,
                entered_from,
                exit_to,
            } => {
                let c = layout[at as usize];
                let r = radii[at as usize];
                let ang = |w: VertexId| -> f64 {
                    let q = layout[w as usize];
                    (q.1 - c.1).atan2(q.0 - c.0)
                };
                let a0 = ang(entered_from);
                let mut a1 = ang(exit_to);
                if entered_from == exit_to {
                    a1 = a0 - 2.0 * std::f64::consts::PI;
                } else if a1 >= a0 {
                    a1 -= 2.0 * std::f64::consts::PI;
                }
                let steps = 6;
                for s in 0..=steps {
                    let t = a0 + (a1 - a0) * (s as f64) / (steps as f64);
                    pts.push((c.0 + r * t.cos(), c.1 + r * t.sin()));
                }
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{gen_fixture, gen_random_triangulation, Fixture};
    use crate::greedy::{better_greedy, spanning_tree_from_cds, EngineMode};

    fn star_tree_k4() -> (PlaneGraph, SpanningTree) {
        let g = gen_fixture(Fixture::K4).unwrap();
        let t = spanning_tree_from_cds(&g, &[0]).unwrap();
        (g, t)
    }

    #[test]
    fn k4_layout_centroid() {
        let g = gen_fixture(Fixture::K4).unwrap();
        let layout = straight_line_layout(&g).unwrap();
        let c = layout[3];
        // inner vertex at the barycenter of the outer triangle
        let bx = (layout[0].0 + layout[1].0 + layout[2].0) / 3.0;
        let by = (layout[0].1 + layout[1].1 + layout[2].1) / 3.0;
        assert!((c.0 - bx).abs() < 1e-9 && (c.1 - by).abs() < 1e-9);
        assert_eq!(count_crossings(&g, &layout), 0);
    }

    #[test]
    fn octahedron_layout_crossing_free() {
        let g = gen_fixture(Fixture::Octahedron).unwrap();
        let layout = straight_line_layout(&g).unwrap();
        assert_eq!(count_crossings(&g, &layout), 0);
    }

    #[test]
    fn big_random_layout_crossing_free() {
        let g = gen_random_triangulation(500, 11, 500).unwrap();
        let layout = straight_line_layout(&g).unwrap();
        assert_eq!(count_crossings(&g, &layout), 0);
    }

    #[test]
    fn k4_star_curve() {
        let (g, t) = star_tree_k4();
        let curve = build_envelope_curve(&g, &t).unwrap();
        let rep = verify_proper_good(&g, &t, &curve);
        assert!(rep.ok(), "{:?}", rep.failures);
        assert!(histogram_matches_classes(&g, &t, &rep));
        // 3 leaves touched; 3 non-tree edges each crossed twice
        let doubles = rep.histogram.values().filter(|&&c| c == 2).count();
        assert_eq!(doubles, 3);
        let (gp, cert, curve_plus) = subdivide_along_curve(&g, &t, &curve).unwrap();
        assert_eq!(gp.vertex_count(), 7);
        assert_eq!(cert.s.len(), 3);
        assert_eq!(cert.subdivided_edges.len(), 3);
        let hist = crossing_histogram(&gp, &curve_plus);
        assert!(hist.values().all(|&c| c <= 1));
        gp.validate().unwrap();
    }

    #[test]
    fn triangle_path_tree() {
        let g = gen_fixture(Fixture::Triangle).unwrap();
        // path tree rooted at the middle: 1 - 0 - 2
        let t = SpanningTree {
            root: 0,
            parent: vec![0, 0, 0],
        };
        let curve = build_envelope_curve(&g, &t).unwrap();
        let rep = verify_proper_good(&g, &t, &curve);
        assert!(rep.ok(), "{:?}", rep.failures);
        // one non-tree edge (1,2) crossed twice
        assert_eq!(rep.histogram.get(&(1, 2)), Some(&2));
        let (gp, cert, _) = subdivide_along_curve(&g, &t, &curve).unwrap();
        assert_eq!(cert.subdivided_edges, vec![(1, 2)]);
        assert_eq!(gp.vertex_count(), 4);
    }

    #[test]
    fn root_must_be_internal() {
        let g = gen_fixture(Fixture::K4).unwrap();
        let t = SpanningTree {
            root: 1,
            parent: vec![0, 0, 0, 0],
        };
        assert!(matches!(
            build_envelope_curve(&g, &t),
            Err(GraphError::RootIsLeaf(1))
        ));
    }

    #[test]
    fn tampered_curve_flagged() {
        let (g, t) = star_tree_k4();
        let mut curve = build_envelope_curve(&g, &t).unwrap();
        // drop a touch event: the leaf is no longer on the curve and its
        // tree edge loses its crossing
        curve.events.retain(|e| !matches!(e, CurveEvent::Touch { leaf: 1, .. }));
        let rep = verify_proper_good(&g, &t, &curve);
        assert!(!rep.ok());
    }

    #[test]
    fn corpus_histograms() {
        for seed in 0..6u64 {
            let n = 12 + 7 * (seed as usize);
            let g = gen_random_triangulation(n, seed, n).unwrap();
            let cert = better_greedy(&g, EngineMode::Incremental).unwrap();
            let tree = spanning_tree_from_cds(&g, &cert.x)
                .unwrap()
                .with_internal_root(&g);
            let curve = build_envelope_curve(&g, &tree).unwrap();
            let rep = verify_proper_good(&g, &tree, &curve);
            assert!(rep.ok(), "n={n} seed={seed}: {:?}", rep.failures);
            assert!(histogram_matches_classes(&g, &tree, &rep), "n={n} seed={seed}");
            let (gp, cert2, curve_plus) = subdivide_along_curve(&g, &tree, &curve).unwrap();
            let hist = crossing_histogram(&gp, &curve_plus);
            assert!(hist.values().all(|&c| c <= 1), "n={n} seed={seed}");
            assert!(!cert2.s.is_empty());
        }
    }

    #[test]
    fn svg_deterministic() {
        let (g, t) = star_tree_k4();
        let layout = straight_line_layout(&g).unwrap();
        let curve = build_envelope_curve(&g, &t).unwrap();
        let a = export_svg(&g, &layout, Some(&t), Some(&curve));
        let b = export_svg(&g, &layout, Some(&t), Some(&curve));
        assert_eq!(a, b);
        assert_eq!(a.matches("<line").count(), 6);
        // 4 envelope circles + 4 vertex dots
        assert_eq!(a.matches("<circle").count(), 8);
        assert!(a.len() < 100_000);
    }

    #[test]
    fn envelope_geometry_safe() {
        // circles only touch incident edges; parallel segments never cross
        // foreign edges
        let g = gen_fixture(Fixture::Octahedron).unwrap();
        let layout = straight_line_layout(&g).unwrap();
        let radii = envelope_radii(&g, &layout);
        for v in g.alive_vertices() {
            for a in g.alive_vertices() {
                for b in g.neighbors(a) {
                    if a > b || a == v || b == v {
                        continue;
                    }
                    let d = dist_point_seg(
                        layout[v as usize],
                        layout[a as usize],
                        layout[b as usize],
                    );
                    assert!(
                        d > radii[v as usize],
                        "circle at {v} touches foreign edge {a}-{b}"
                    );
                }
            }
        }
    }
}
