//! Dom-minimal reduction: repeatedly remove or replace boundary structure
//! until every biconnected component satisfies
//!
//! - DM1: every boundary vertex has inner degree >= 1,
//! - DM2: inner degree 1 forces a K4 closed neighborhood,
//! - DM3: every outer edge borders an inner face with an inner apex,
//!
//! certifying that the result dom-respects the input (DP1: boundary shrinks,
//! DP2: inner vertices are preserved, DP3: no inner adjacency is added).
//!
//! Fixes are applied in a canonical priority order (vertex candidates by id,
//! then edge candidates), with re-validation on pop, so a full rescan and an
//! incrementally-seeded queue converge to the same graph.

use crate::error::{GraphError, Result};
use crate::plane::{MutEvent, PlaneGraph, VertexId};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// Boundary vertex with inner degree 0.
    Dm1 { vertex: VertexId },
    /// Boundary vertex with inner degree 1 whose closed neighborhood is not K4.
    Dm2 { vertex: VertexId },
    /// Outer edge with no inner face apexed at an inner vertex.
    Dm3 { edge: (VertexId, VertexId) },
}

/// Counter source for the reduction: the standalone path recomputes inner
/// degrees by scanning; the greedy engine serves them from its counters and
/// reacts to mutation events.
pub trait ReduceHooks {
    fn delta(&self, g: &PlaneGraph, v: VertexId) -> usize;
    fn on_events(&mut self, g: &PlaneGraph, events: &[MutEvent]);
}

/// Scanning hooks: no state, inner degree recomputed per query.
pub struct ScanHooks;

impl ReduceHooks for ScanHooks {
    fn delta(&self, g: &PlaneGraph, v: VertexId) -> usize {
        g.inner_degree(v).unwrap_or(0)
    }
    fn on_events(&mut self, _g: &PlaneGraph, _events: &[MutEvent]) {}
}

/// Candidate queue ordered by (kind, ids); vertices before edges. Edge
/// candidates carry the dart id for O(1) revalidation; vertex candidates
/// are deduplicated through a pending bitmap.
#[derive(Default)]
pub struct ReduceQueue {
    heap: BinaryHeap<Reverse<(u8, u32, u32, u32)>>,
    pending_vertex: Vec<bool>,
}

impl ReduceQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_vertex(&mut self, v: VertexId) {
        if self.pending_vertex.len() <= v as usize {
            self.pending_vertex.resize(v as usize + 1, false);
        }
        if !self.pending_vertex[v as usize] {
            self.pending_vertex[v as usize] = true;
            self.heap.push(Reverse((0, v, 0, 0)));
        }
    }

    pub fn push_edge(&mut self, u: VertexId, w: VertexId, dart: u32) {
        self.heap.push(Reverse((1, u.min(w), u.max(w), dart)));
    }

    pub fn seed_full(&mut self, g: &PlaneGraph) {
        for v in g.alive_vertices() {
            if g.is_boundary(v) {
                self.push_vertex(v);
            }
            for d in g.darts_around(v) {
                let w = g.target(d);
                if v < w && (g.dart_is_outer(d) || g.dart_is_outer(PlaneGraph::twin(d))) {
                    self.push_edge(v, w, d);
                }
            }
        }
    }

    /// Seed candidates from mutation events.
    pub fn absorb_events(&mut self, g: &PlaneGraph, events: &[MutEvent]) {
        for ev in events {
            match *ev {
                MutEvent::Exposed(x) => {
                    self.push_vertex(x);
                    // neighbors lose an inner neighbor (DM1/DM2 candidates),
                    // and every face incident to x now has a boundary apex,
                    // so the edges of those faces become DM3 candidates
                    if let Some(start) = g.first_dart_of(x) {
                        let mut d = start;
                        loop {
                            let u = g.target(d);
                            if g.is_boundary(u) {
                                self.push_vertex(u);
                            }
                            let next = g.rot_next_of(d);
                            // the third side of the triangle between the
                            // consecutive darts d and next
                            let side = g.face_next(next);
                            self.push_edge(u, g.target(next), side);
                            d = next;
                            if d == start {
                                break;
                            }
                        }
                    }
                }
                MutEvent::OuterEdge(u, w, dart) => {
                    self.push_edge(u, w, dart);
                    self.push_vertex(u);
                    self.push_vertex(w);
                }
                MutEvent::Touched(u) => {
                    if g.is_alive(u) && g.is_boundary(u) {
                        self.push_vertex(u);
                    }
                }
                MutEvent::Died(_) => {}
            }
        }
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ReduceStats {
    pub dm1_fixes: usize,
    pub dm2_fixes: usize,
    pub dm3_fixes: usize,
}

/// DM3 check for an alive edge; `None` means no violation (or not an outer
/// edge).
fn dm3_violation(g: &PlaneGraph, u: VertexId, w: VertexId) -> Option<bool> {
    let d = g.dart_between(u, w)?;
    dm3_violation_dart(g, d)
}

fn dm3_violation_dart(g: &PlaneGraph, d: u32) -> Option<bool> {
    let t = PlaneGraph::twin(d);
    let d_out = g.dart_is_outer(d);
    let t_out = g.dart_is_outer(t);
    if !d_out && !t_out {
        return None; // interior edge
    }
    if d_out && t_out {
        return Some(true); // bridge or doubly-exposed edge: no inner apex
    }
    let inner_side = if d_out { t } else { d };
    let apex = g.target(g.face_next(inner_side));
    Some(g.is_boundary(apex))
}

/// Apply fixes until no candidate in the queue is a violation.
pub fn run_reduce<H: ReduceHooks>(
    g: &mut PlaneGraph,
    q: &mut ReduceQueue,
    hooks: &mut H,
) -> Result<ReduceStats> {
    let mut stats = ReduceStats::default();
    let mut ev: Vec<MutEvent> = Vec::new();
    while let Some(Reverse((kind, a, b, dart))) = q.heap.pop() {
        ev.clear();
        if kind == 0 {
            let v = a;
            q.pending_vertex[v as usize] = false;
            if !g.is_alive(v) || !g.is_boundary(v) {
                continue;
            }
            let delta = hooks.delta(g, v);
            if delta == 0 {
                g.delete_vertex(v, &mut ev)?;
                stats.dm1_fixes += 1;
                debug_assert!(
                    ev.iter().all(|e| !matches!(e, MutEvent::Exposed(_))),
                    "reduction must not expose inner vertices (DP1)"
                );
                hooks.on_events(g, &ev);
                q.absorb_events(g, &ev);
            } else if delta == 1 {
                // guard: fix DM3 on v's incident outer edges first
                let mut guarded = false;
                for d in g.darts_around(v) {
                    let u = g.target(d);
                    if g.dart_is_outer(d) || g.dart_is_outer(PlaneGraph::twin(d)) {
                        if dm3_violation_dart(g, d) == Some(true) {
                            g.delete_edge(v, u, &mut ev)?;
                            stats.dm3_fixes += 1;
                            hooks.on_events(g, &ev);
                            q.absorb_events(g, &ev);
                            q.push_vertex(v);
                            guarded = true;
                            break;
                        }
                    }
                }
                if guarded {
                    continue;
                }
                // after the guard, v has exactly its two outer neighbors
                // and the unique inner neighbor w
                let nbrs = g.neighbors(v);
                debug_assert_eq!(nbrs.len(), 3, "DM2 candidate must have degree 3");
                if nbrs.len() != 3 {
                    continue;
                }
                let w = *nbrs
                    .iter()
                    .find(|&&x| g.is_inner(x))
                    .expect("delta == 1 guarantees an inner neighbor");
                let rest: Vec<VertexId> = nbrs.iter().copied().filter(|&x| x != w).collect();
                let (x, y) = (rest[0], rest[1]);
                let k4 = g.has_edge(x, y) && g.has_edge(x, w) && g.has_edge(y, w);
                if k4 {
                    continue; // DM2 satisfied
                }
                // fix: remove vw, replace xv,vy by xy, drop the isolated v
                g.delete_edge(v, w, &mut ev)?;
                g.replace_path_with_edge(x, v, y, &mut ev)?;
                g.delete_vertex(v, &mut ev)?;
                stats.dm2_fixes += 1;
                debug_assert!(ev.iter().all(|e| !matches!(e, MutEvent::Exposed(_))));
                hooks.on_events(g, &ev);
                q.absorb_events(g, &ev);
            }
        } else {
            let (u, w) = (a, b);
            if !g.dart_is_alive(dart) {
                continue;
            }
            let (o, t) = (g.origin(dart), g.target(dart));
            if (o.min(t), o.max(t)) != (u, w) {
                continue; // dart slot was recycled for another edge
            }
            if dm3_violation_dart(g, dart) == Some(true) {
                g.delete_edge(u, w, &mut ev)?;
                stats.dm3_fixes += 1;
                debug_assert!(ev.iter().all(|e| !matches!(e, MutEvent::Exposed(_))));
                hooks.on_events(g, &ev);
                q.absorb_events(g, &ev);
            }
        }
    }
    Ok(stats)
}

/// First violation in canonical order (vertices ascending, then edges), or
/// `None` when H is dom-minimal.
pub fn is_dom_minimal(h: &PlaneGraph) -> Result<Option<Violation>> {
    if !h.is_generalized_near_triangulation() {
        return Err(GraphError::NotGnt);
    }
    Ok(violations(h).into_iter().next())
}

/// All current violations, vertices first, ascending ids.
pub fn violations(h: &PlaneGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    for v in h.alive_vertices() {
        if !h.is_boundary(v) {
            continue;
        }
        let delta = h.inner_degree(v).unwrap_or(0);
        if delta == 0 {
            out.push(Violation::Dm1 { vertex: v });
        } else if delta == 1 {
            let nbrs = h.neighbors(v);
            let k4 = nbrs.len() == 3 && {
                let w = nbrs[0];
                let x = nbrs[1];
                let y = nbrs[2];
                h.has_edge(w, x) && h.has_edge(w, y) && h.has_edge(x, y)
            };
            if !k4 {
                out.push(Violation::Dm2 { vertex: v });
            }
        }
    }
    let mut edges = Vec::new();
    for v in h.alive_vertices() {
        for d in h.darts_around(v) {
            let w = h.target(d);
            if v < w && dm3_violation(h, v, w) == Some(true) {
                edges.push(Violation::Dm3 { edge: (v, w) });
            }
        }
    }
    out.extend(edges);
    out
}

/// Snapshot of the dom-respecting data of a graph: boundary set, inner set,
/// and each vertex's inner neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub boundary: Vec<VertexId>,
    pub inner: Vec<VertexId>,
    pub inner_adj: Vec<(VertexId, Vec<VertexId>)>,
}

impl Snapshot {
    pub fn of(g: &PlaneGraph) -> Snapshot {
        let bc = g.classify_boundary();
        let inner_adj = g
            .alive_vertices()
            .map(|v| {
                let mut nbrs: Vec<VertexId> = g
                    .neighbors(v)
                    .into_iter()
                    .filter(|&w| g.is_inner(w))
                    .collect();
                nbrs.sort_unstable();
                (v, nbrs)
            })
            .collect();
        Snapshot {
            boundary: bc.boundary,
            inner: bc.inner,
            inner_adj,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DomRespectsCertificate {
    pub before: Snapshot,
    pub after: Snapshot,
}

/// Reduce a generalized near-triangulation to a dom-minimal one that
/// dom-respects it. The input is not modified.
pub fn reduce(h: &PlaneGraph) -> Result<(PlaneGraph, DomRespectsCertificate)> {
    if !h.is_generalized_near_triangulation() {
        return Err(GraphError::NotGnt);
    }
    let before = Snapshot::of(h);
    let mut g = h.clone();
    let mut q = ReduceQueue::new();
    q.seed_full(&g);
    run_reduce(&mut g, &mut q, &mut ScanHooks)?;
    let after = Snapshot::of(&g);
    Ok((g, DomRespectsCertificate { before, after }))
}

/// Check DP1–DP3 for `h_after` against `h_before`, and that the certificate
/// snapshots match the two graphs.
pub fn verify_dom_respects(
    h_after: &PlaneGraph,
    h_before: &PlaneGraph,
    cert: &DomRespectsCertificate,
) -> bool {
    if cert.before != Snapshot::of(h_before) || cert.after != Snapshot::of(h_after) {
        return false;
    }
    dom_respects(h_after, h_before)
}

/// DP1: B(H') ⊆ B(H); DP2: I(H') = I(H); DP3: inner neighborhoods only shrink.
pub fn dom_respects(h_after: &PlaneGraph, h_before: &PlaneGraph) -> bool {
    let before = Snapshot::of(h_before);
    let after = Snapshot::of(h_after);
    let b_before: std::collections::HashSet<_> = before.boundary.iter().collect();
    if !after.boundary.iter().all(|v| b_before.contains(v)) {
        return false; // DP1
    }
    if before.inner != after.inner {
        return false; // DP2
    }
    let before_adj: std::collections::HashMap<_, _> =
        before.inner_adj.iter().map(|(v, n)| (*v, n)).collect();
    for (v, nbrs_after) in &after.inner_adj {
        match before_adj.get(v) {
            None => return false,
            Some(nbrs_before) => {
                let set: std::collections::HashSet<_> = nbrs_before.iter().collect();
                if !nbrs_after.iter().all(|w| set.contains(w)) {
                    return false; // DP3
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{gen_fixture, gen_random_triangulation, Fixture};
    use crate::oracle;

    #[test]
    fn k4_already_dom_minimal() {
        let g = gen_fixture(Fixture::K4).unwrap();
        assert_eq!(is_dom_minimal(&g).unwrap(), None);
        let (r, cert) = reduce(&g).unwrap();
        assert_eq!(r.vertex_count(), 4);
        assert!(verify_dom_respects(&r, &g, &cert));
        assert_eq!(cert.before, cert.after);
    }

    #[test]
    fn triangle_reduces_to_empty() {
        let g = gen_fixture(Fixture::Triangle).unwrap();
        assert!(matches!(
            is_dom_minimal(&g).unwrap(),
            Some(Violation::Dm1 { vertex: 0 })
        ));
        let (r, cert) = reduce(&g).unwrap();
        assert_eq!(r.vertex_count(), 0);
        assert!(verify_dom_respects(&r, &g, &cert));
    }

    #[test]
    fn triangulations_are_dom_minimal() {
        for seed in 0..5u64 {
            let g = gen_random_triangulation(30, seed, 60).unwrap();
            assert_eq!(is_dom_minimal(&g).unwrap(), None, "seed {seed}");
        }
    }

    #[test]
    fn wheel5_reduces_to_k4() {
        // every rim vertex has inner degree 1 with a non-K4 neighborhood;
        // two replace fixes leave a K4
        let g = gen_fixture(Fixture::Wheel(5)).unwrap();
        assert!(matches!(
            is_dom_minimal(&g).unwrap(),
            Some(Violation::Dm2 { vertex: 0 })
        ));
        let (r, cert) = reduce(&g).unwrap();
        assert!(verify_dom_respects(&r, &g, &cert));
        assert_eq!(r.vertex_count(), 4);
        assert_eq!(r.edge_count(), 6);
        assert_eq!(is_dom_minimal(&r).unwrap(), None);
        assert!(r.is_inner(5), "the hub must survive (DP2)");
    }

    #[test]
    fn bridge_fixture_has_dm3_at_bridge() {
        // two triangles joined by the bridge 2-3
        let g = PlaneGraph::build_from_rotation(
            6,
            &[
                vec![1, 2],
                vec![0, 2],
                vec![0, 3, 1],
                vec![4, 2, 5],
                vec![3, 5],
                vec![4, 3],
            ],
            &[0, 1, 2, 3, 4, 5, 3, 2],
        )
        .unwrap();
        assert!(g.is_generalized_near_triangulation());
        assert!(!g.is_near_triangulation());
        let all = violations(&g);
        assert!(all.contains(&Violation::Dm3 { edge: (2, 3) }));
        // the reduction erases the whole outerplanar-only graph
        let (r, cert) = reduce(&g).unwrap();
        assert_eq!(r.vertex_count(), 0);
        assert!(verify_dom_respects(&r, &g, &cert));
    }

    #[test]
    fn reduce_is_idempotent() {
        let g = gen_fixture(Fixture::Wheel(7)).unwrap();
        let (r1, _) = reduce(&g).unwrap();
        let (r2, cert2) = reduce(&r1).unwrap();
        assert_eq!(
            crate::fixtures::rotation_fingerprint(&r1),
            crate::fixtures::rotation_fingerprint(&r2)
        );
        assert_eq!(cert2.before, cert2.after);
    }

    #[test]
    fn reduce_shrinks_unless_minimal() {
        let g = gen_fixture(Fixture::Wheel(6)).unwrap();
        let (r, _) = reduce(&g).unwrap();
        assert!(r.vertex_count() + r.edge_count() < g.vertex_count() + g.edge_count());
    }

    #[test]
    fn dominating_sets_lift_through_reduction() {
        // any Δ' dominating I(H') in H' dominates I(H) in H
        for (fixture, name) in [
            (gen_fixture(Fixture::Wheel(6)).unwrap(), "wheel6"),
            (gen_fixture(Fixture::Wheel(9)).unwrap(), "wheel9"),
        ] {
            let (r, _) = reduce(&fixture).unwrap();
            if r.vertex_count() == 0 {
                continue;
            }
            // take Δ' = all boundary vertices of r: dominates I(r)
            let delta: Vec<u32> = r.classify_boundary().boundary;
            let inner_r: Vec<u32> = r.classify_boundary().inner;
            assert!(
                inner_r.iter().all(|&w| delta
                    .iter()
                    .any(|&v| r.has_edge(v, w) || v == w)),
                "{name}: Δ' must dominate I(H')"
            );
            // now check in the original
            let inner_h: Vec<u32> = fixture.classify_boundary().inner;
            assert_eq!(inner_h, inner_r, "DP2");
            for &w in &inner_h {
                assert!(
                    delta.iter().any(|&v| fixture.has_edge(v, w) || v == w),
                    "{name}: Δ' must dominate {w} in H"
                );
            }
        }
    }

    #[test]
    fn random_near_triangulation_reductions_validate() {
        // delete a few boundary vertices from random triangulations and
        // reduce; everything must stay consistent
        for seed in 0..6u64 {
            let mut g = gen_random_triangulation(40, seed, 80).unwrap();
            let mut ev = Vec::new();
            let b0 = g.classify_boundary().boundary[0];
            g.delete_vertex(b0, &mut ev).unwrap();
            let snapshot = g.clone();
            let (r, cert) = reduce(&g).unwrap();
            r.validate().unwrap();
            assert!(verify_dom_respects(&r, &snapshot, &cert));
            assert_eq!(is_dom_minimal(&r).unwrap(), None);
            assert!(r.is_generalized_near_triangulation());
            // DP2 sanity via oracle: boundary of r dominates inner of r
            let _ = oracle::is_dominating(&r, &r.classify_boundary().boundary);
        }
    }
}
