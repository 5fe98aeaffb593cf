//! Combinatorial plane graphs: a half-edge rotation system with a designated
//! outer region, supporting in-place deletion of boundary structure.
//!
//! Darts are allocated in twin pairs (`twin(d) = d ^ 1`). Per-vertex rotations
//! are circular doubly-linked lists over darts in clockwise order. Faces are
//! orbits of `face_next(d) = rot_next(twin(d))`; the face lies to the left of
//! each of its darts. `dart_outer[d]` marks darts whose left face is the outer
//! region; `v_boundary[v]` marks vertices on it. Under the mutations used by
//! the solvers the outer region only grows, so both flags are monotone until
//! the element dies.

use crate::error::{GraphError, Result};
use std::sync::{Arc, Mutex};

pub const NIL: u32 = u32::MAX;

pub type VertexId = u32;
pub type DartId = u32;

/// Events emitted by mutations, consumed by the greedy engines to maintain
/// counters and dom-minimality work queues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutEvent {
    /// Vertex moved from the interior onto the outer face.
    Exposed(VertexId),
    /// Vertex removed from the graph.
    Died(VertexId),
    /// Edge (u, v) is now on the outer face (dart flipped or created
    /// outer); the dart id allows O(1) revalidation.
    OuterEdge(VertexId, VertexId, DartId),
    /// Structure near this alive vertex changed (neighbor or edge deleted).
    Touched(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryClassification {
    pub boundary: Vec<VertexId>,
    pub inner: Vec<VertexId>,
}

/// Traced faces of the current revision: each face is a dart cycle.
#[derive(Debug, Clone)]
pub struct FaceSet {
    pub faces: Vec<Vec<DartId>>,
    /// dart -> index into `faces` (NIL for dead darts)
    pub face_of: Vec<u32>,
    pub outer_faces: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
struct DartRec {
    target: u32,
    origin: u32,
    next: u32,
    prev: u32,
}

#[derive(Clone)]
pub struct PlaneGraph {
    darts: Vec<DartRec>,
    dart_alive: Vec<bool>,
    dart_outer: Vec<bool>,
    first_dart: Vec<u32>,
    v_alive: Vec<bool>,
    v_boundary: Vec<bool>,
    degree: Vec<u32>,
    n_alive: usize,
    n_boundary: usize,
    m_alive: usize,
    free_pairs: Vec<u32>,
    revision: u64,
    face_cache: Arc<Mutex<Option<(u64, Arc<FaceSet>)>>>,
}

impl std::fmt::Debug for PlaneGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PlaneGraph(n={}, m={}, boundary={})",
            self.n_alive, self.m_alive, self.n_boundary
        )
    }
}

impl PlaneGraph {
    pub fn twin(d: DartId) -> DartId {
        d ^ 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n_alive
    }
    pub fn edge_count(&self) -> usize {
        self.m_alive
    }
    pub fn boundary_count(&self) -> usize {
        self.n_boundary
    }
    pub fn inner_count(&self) -> usize {
        self.n_alive - self.n_boundary
    }
    pub fn id_bound(&self) -> usize {
        self.v_alive.len()
    }
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        (v as usize) < self.v_alive.len() && self.v_alive[v as usize]
    }
    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.v_boundary[v as usize]
    }
    pub fn is_inner(&self, v: VertexId) -> bool {
        self.v_alive[v as usize] && !self.v_boundary[v as usize]
    }
    pub fn degree_of(&self, v: VertexId) -> usize {
        self.degree[v as usize] as usize
    }
    pub fn dart_is_alive(&self, d: DartId) -> bool {
        self.dart_alive[d as usize]
    }
    pub fn dart_is_outer(&self, d: DartId) -> bool {
        self.dart_outer[d as usize]
    }
    pub fn origin(&self, d: DartId) -> VertexId {
        self.darts[d as usize].origin
    }
    pub fn target(&self, d: DartId) -> VertexId {
        self.darts[d as usize].target
    }
    pub fn rot_next_of(&self, d: DartId) -> DartId {
        self.darts[d as usize].next
    }
    pub fn rot_prev_of(&self, d: DartId) -> DartId {
        self.darts[d as usize].prev
    }
    pub fn face_next(&self, d: DartId) -> DartId {
        self.darts[Self::twin(d) as usize].next
    }
    pub fn first_dart_of(&self, v: VertexId) -> Option<DartId> {
        let d = self.first_dart[v as usize];
        if d == NIL {
            None
        } else {
            Some(d)
        }
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.v_alive.len() as u32).filter(move |&v| self.v_alive[v as usize])
    }

    /// Outgoing darts of `v` in clockwise rotation order.
    pub fn darts_around(&self, v: VertexId) -> Vec<DartId> {
        let mut out = Vec::with_capacity(self.degree[v as usize] as usize);
        if let Some(start) = self.first_dart_of(v) {
            let mut d = start;
            loop {
                out.push(d);
                d = self.darts[d as usize].next;
                if d == start {
                    break;
                }
            }
        }
        out
    }

    /// Neighbors of `v` in clockwise rotation order.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.darts_around(v)
            .into_iter()
            .map(|d| self.darts[d as usize].target)
            .collect()
    }

    pub fn dart_between(&self, u: VertexId, v: VertexId) -> Option<DartId> {
        let start = self.first_dart_of(u)?;
        let mut d = start;
        loop {
            if self.darts[d as usize].target == v {
                return Some(d);
            }
            d = self.darts[d as usize].next;
            if d == start {
                return None;
            }
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        if !self.is_alive(u) || !self.is_alive(v) {
            return false;
        }
        let (a, b) = if self.degree[u as usize] <= self.degree[v as usize] {
            (u, v)
        } else {
            (v, u)
        };
        self.dart_between(a, b).is_some()
    }

    // ------------------------------------------------------------------
    // Construction
    // ------------------------------------------------------------------

    /// Build a validated plane graph from a clockwise rotation system plus the
    /// outer face walk. The walk may be given in either traversal direction.
    pub fn build_from_rotation(
        n: usize,
        rotations: &[Vec<VertexId>],
        outer_walk: &[VertexId],
    ) -> Result<PlaneGraph> {
        if rotations.len() != n {
            return Err(GraphError::BadParam(format!(
                "expected {n} rotation lists, got {}",
                rotations.len()
            )));
        }
        for (v, rot) in rotations.iter().enumerate() {
            let mut seen = rot.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != rot.len() {
                return Err(GraphError::NotSimple(format!(
                    "vertex {v} lists a neighbor twice"
                )));
            }
            for &w in rot {
                if w as usize >= n {
                    return Err(GraphError::BadParam(format!(
                        "vertex {v} lists out-of-range neighbor {w}"
                    )));
                }
                if w as usize == v {
                    return Err(GraphError::NotSimple(format!("self-loop at {v}")));
                }
            }
        }
        // Symmetry: allocate dart pairs for u<v occurrences.
        let dart_total: usize = rotations.iter().map(|r| r.len()).sum();
        if dart_total % 2 != 0 {
            return Err(GraphError::InconsistentRotation(0, 0));
        }
        let m: usize = dart_total / 2;
        let mut g = PlaneGraph {
            darts: vec![
                DartRec {
                    target: NIL,
                    origin: NIL,
                    next: NIL,
                    prev: NIL
                };
                2 * m
            ],
            dart_alive: vec![false; 2 * m],
            dart_outer: vec![false; 2 * m],
            first_dart: vec![NIL; n],
            v_alive: vec![true; n],
            v_boundary: vec![false; n],
            degree: vec![0; n],
            n_alive: n,
            n_boundary: 0,
            m_alive: m,
            free_pairs: Vec::new(),
            revision: 0,
            face_cache: Arc::new(Mutex::new(None)),
        };
        // Assign dart ids: map edge {u,v} -> pair index.
        let mut edge_ids: std::collections::HashMap<(u32, u32), u32> =
            std::collections::HashMap::with_capacity(m);
        let mut next_pair = 0u32;
        let mut dart_of: Vec<Vec<DartId>> = Vec::with_capacity(n);
        for (v, rot) in rotations.iter().enumerate() {
            let v = v as u32;
            let mut darts = Vec::with_capacity(rot.len());
            for &w in rot {
                let key = (v.min(w), v.max(w));
                let pair = *edge_ids.entry(key).or_insert_with(|| {
                    let p = next_pair;
                    next_pair += 1;
                    p
                });
                if pair as usize >= m {
                    return Err(GraphError::InconsistentRotation(v, w));
                }
                // dart 2p goes min->max, dart 2p+1 goes max->min
                let d = if v < w { 2 * pair } else { 2 * pair + 1 };
                if g.dart_alive[d as usize] {
                    return Err(GraphError::NotSimple(format!("parallel edge {v}-{w}")));
                }
                g.dart_alive[d as usize] = true;
                g.darts[d as usize].origin = v;
                g.darts[d as usize].target = w;
                darts.push(d);
            }
            dart_of.push(darts);
        }
        if next_pair as usize != m {
            // some (u,v) appeared only one direction: its twin slot is dead
            return Err(GraphError::InconsistentRotation(0, 0));
        }
        for d in 0..2 * m {
            if !g.dart_alive[d] {
                let t = Self::twin(d as u32) as usize;
                return Err(GraphError::InconsistentRotation(
                    g.darts[t].origin,
                    g.darts[t].target,
                ));
            }
        }
        // Link rotations.
        for (v, darts) in dart_of.iter().enumerate() {
            g.degree[v] = darts.len() as u32;
            if darts.is_empty() {
                continue;
            }
            g.first_dart[v] = darts[0];
            let k = darts.len();
            for i in 0..k {
                g.darts[darts[i] as usize].next = darts[(i + 1) % k];
                g.darts[darts[i] as usize].prev = darts[(i + k - 1) % k];
            }
        }
        // Trace faces and check Euler's formula.
        let faces = g.trace_faces_uncached();
        let comps = g.component_count();
        if comps != 1 {
            return Err(GraphError::Disconnected);
        }
        let isolated = (0..n).filter(|&v| g.degree[v] == 0).count();
        if g.n_alive + faces.faces.len() + isolated != g.m_alive + 2 * comps {
            return Err(GraphError::NotPlanar {
                v: g.n_alive,
                e: g.m_alive,
                f: faces.faces.len(),
                c: comps,
            });
        }
        // Locate the outer walk among traced faces.
        let walk_darts = |walk: &[VertexId]| -> Option<Vec<DartId>> {
            let k = walk.len();
            let mut ds = Vec::with_capacity(k);
            for i in 0..k {
                let d = g.dart_between(walk[i], walk[(i + 1) % k])?;
                ds.push(d);
            }
            Some(ds)
        };
        let mut rev: Vec<VertexId> = outer_walk.to_vec();
        rev.reverse();
        let mut matched = None;
        for cand in [outer_walk.to_vec(), rev] {
            if cand.is_empty() {
                continue;
            }
            if let Some(ds) = walk_darts(&cand) {
                // the dart sequence must be one orbit, in order
                let f0 = ds[0];
                let mut orbit = Vec::new();
                let mut d = f0;
                loop {
                    orbit.push(d);
                    d = g.face_next(d);
                    if d == f0 {
                        break;
                    }
                }
                if orbit.len() == ds.len() && orbit.iter().zip(&ds).all(|(a, b)| a == b) {
                    matched = Some(ds);
                    break;
                }
            }
        }
        let outer = matched.ok_or(GraphError::BadOuterFace)?;
        for &d in &outer {
            g.dart_outer[d as usize] = true;
            let t = g.darts[d as usize].target as usize;
            if !g.v_boundary[t] {
                g.v_boundary[t] = true;
                g.n_boundary += 1;
            }
        }
        g.validate()?;
        Ok(g)
    }

    /// Graph with `n` isolated vertices, all on the outer face.
    pub fn edgeless(n: usize) -> PlaneGraph {
        PlaneGraph {
            darts: Vec::new(),
            dart_alive: Vec::new(),
            dart_outer: Vec::new(),
            first_dart: vec![NIL; n],
            v_alive: vec![true; n],
            v_boundary: vec![true; n],
            degree: vec![0; n],
            n_alive: n,
            n_boundary: n,
            m_alive: 0,
            free_pairs: Vec::new(),
            revision: 0,
            face_cache: Arc::new(Mutex::new(None)),
        }
    }

    /// Full structural validation: rotation symmetry, simplicity, Euler's
    /// formula per component, and consistency of the outer/boundary flags.
    pub fn validate(&self) -> Result<()> {
        for v in self.alive_vertices() {
            let nbrs = self.neighbors(v);
            let mut s = nbrs.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != nbrs.len() {
                return Err(GraphError::NotSimple(format!("parallel edge at {v}")));
            }
            if nbrs.iter().any(|&w| w == v) {
                return Err(GraphError::NotSimple(format!("self-loop at {v}")));
            }
            for d in self.darts_around(v) {
                if !self.dart_alive[d as usize] {
                    return Err(GraphError::InconsistentRotation(v, self.target(d)));
                }
                if self.origin(d) != v {
                    return Err(GraphError::InconsistentRotation(v, self.target(d)));
                }
                if !self.dart_alive[Self::twin(d) as usize] {
                    return Err(GraphError::InconsistentRotation(v, self.target(d)));
                }
            }
        }
        let faces = self.trace_faces_uncached();
        let comps = self.component_count();
        let isolated = self
            .alive_vertices()
            .filter(|&v| self.degree[v as usize] == 0)
            .count();
        if self.n_alive + faces.faces.len() + isolated != self.m_alive + 2 * comps {
            return Err(GraphError::NotPlanar {
                v: self.n_alive,
                e: self.m_alive,
                f: faces.faces.len(),
                c: comps,
            });
        }
        // outer flags cover whole orbits
        for f in &faces.faces {
            let o = self.dart_outer[f[0] as usize];
            if f.iter().any(|&d| self.dart_outer[d as usize] != o) {
                return Err(GraphError::AssertionFailed(
                    "outer flags split a face orbit".into(),
                ));
            }
        }
        // boundary flags match outer darts (isolated vertices keep their flag)
        for v in self.alive_vertices() {
            if self.degree[v as usize] == 0 {
                continue;
            }
            let on_outer = self
                .darts_around(v)
                .iter()
                .any(|&d| self.dart_outer[d as usize] || self.dart_outer[Self::twin(d) as usize]);
            // v is on the outer face iff some incident face is outer; incident
            // faces are left of outgoing darts and left of incoming darts.
            let mut incident_outer = false;
            for d in self.darts_around(v) {
                if self.dart_outer[Self::twin(d) as usize] {
                    incident_outer = true;
                }
                if self.dart_outer[d as usize] {
                    incident_outer = true;
                }
            }
            let _ = on_outer;
            if incident_outer != self.v_boundary[v as usize] {
                return Err(GraphError::AssertionFailed(format!(
                    "boundary flag of {v} disagrees with outer darts"
                )));
            }
        }
        Ok(())
    }

    pub fn component_count(&self) -> usize {
        let n = self.v_alive.len();
        let mut seen = vec![false; n];
        let mut comps = 0;
        let mut stack = Vec::new();
        for v in 0..n {
            if !self.v_alive[v] || seen[v] {
                continue;
            }
            comps += 1;
            seen[v] = true;
            stack.push(v as u32);
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        comps
    }

    fn trace_faces_uncached(&self) -> FaceSet {
        let nd = self.darts.len();
        let mut face_of = vec![NIL; nd];
        let mut faces = Vec::new();
        let mut outer_faces = Vec::new();
        for d0 in 0..nd as u32 {
            if !self.dart_alive[d0 as usize] || face_of[d0 as usize] != NIL {
                continue;
            }
            let idx = faces.len() as u32;
            let mut orbit = Vec::new();
            let mut d = d0;
            loop {
                face_of[d as usize] = idx;
                orbit.push(d);
                d = self.face_next(d);
                if d == d0 {
                    break;
                }
            }
            if self.dart_outer[d0 as usize] {
                outer_faces.push(idx);
            }
            faces.push(orbit);
        }
        FaceSet {
            faces,
            face_of,
            outer_faces,
        }
    }

    /// Traced faces, cached per revision.
    pub fn faces(&self) -> Arc<FaceSet> {
        let mut guard = self.face_cache.lock().unwrap();
        if let Some((rev, ref fs)) = *guard {
            if rev == self.revision {
                return Arc::clone(fs);
            }
        }
        let fs = Arc::new(self.trace_faces_uncached());
        *guard = Some((self.revision, Arc::clone(&fs)));
        fs
    }

    fn bump(&mut self) {
        self.revision += 1;
    }

    // ------------------------------------------------------------------
    // Queries
    // ------------------------------------------------------------------

    pub fn classify_boundary(&self) -> BoundaryClassification {
        let mut boundary = Vec::new();
        let mut inner = Vec::new();
        for v in self.alive_vertices() {
            if self.v_boundary[v as usize] {
                boundary.push(v);
            } else {
                inner.push(v);
            }
        }
        BoundaryClassification { boundary, inner }
    }

    /// Number of inner neighbors of `v`.
    pub fn inner_degree(&self, v: VertexId) -> Result<usize> {
        if !self.is_alive(v) {
            return Err(GraphError::DeadVertex(v));
        }
        Ok(self
            .neighbors(v)
            .into_iter()
            .filter(|&w| !self.v_boundary[w as usize])
            .count())
    }

    /// The outer walks, one vertex cycle per connected component with edges.
    pub fn outer_walks(&self) -> Vec<Vec<VertexId>> {
        let faces = self.trace_faces_uncached();
        faces
            .outer_faces
            .iter()
            .map(|&fi| {
                faces.faces[fi as usize]
                    .iter()
                    .map(|&d| self.origin(d))
                    .collect()
            })
            .collect()
    }

    /// Every inner face is a triangle. Holds for generalized
    /// near-triangulations (components, cut vertices and bridges allowed).
    pub fn is_generalized_near_triangulation(&self) -> bool {
        let faces = self.trace_faces_uncached();
        faces.faces.iter().enumerate().all(|(i, f)| {
            self.dart_outer[f[0] as usize] || {
                let _ = i;
                f.len() == 3
            }
        })
    }

    /// Generalized near-triangulation whose outer face is bounded by a simple
    /// cycle (connected, no repeated boundary vertices).
    pub fn is_near_triangulation(&self) -> bool {
        if self.component_count() != 1 || self.n_alive < 3 {
            return false;
        }
        if !self.is_generalized_near_triangulation() {
            return false;
        }
        let walks = self.outer_walks();
        if walks.len() != 1 {
            return false;
        }
        let mut w = walks[0].clone();
        w.sort_unstable();
        w.dedup();
        w.len() == walks[0].len()
    }

    /// Edge-maximal planar graph: connected, simple, every face (including
    /// the outer face) a triangle.
    pub fn is_triangulation(&self) -> bool {
        if self.component_count() != 1 || self.n_alive < 3 {
            return false;
        }
        let faces = self.trace_faces_uncached();
        faces.faces.iter().all(|f| f.len() == 3)
    }

    // ------------------------------------------------------------------
    // Mutations
    // ------------------------------------------------------------------

    /// Unlink dart `d` from its origin's rotation (does not touch the twin).
    fn unlink(&mut self, d: DartId) {
        let v = self.darts[d as usize].origin as usize;
        let next = self.darts[d as usize].next;
        let prev = self.darts[d as usize].prev;
        if next == d {
            self.first_dart[v] = NIL;
        } else {
            self.darts[prev as usize].next = next;
            self.darts[next as usize].prev = prev;
            if self.first_dart[v] == d {
                self.first_dart[v] = next;
            }
        }
        self.degree[v] -= 1;
        self.dart_alive[d as usize] = false;
        self.dart_outer[d as usize] = false;
    }

    /// Mark the face left of `d` as outer, expose its vertices, and report
    /// surviving darts as outer edges. `dying(v)` tells which vertices are
    /// about to be removed.
    fn absorb_face(&mut self, d0: DartId, dying: VertexId, events: &mut Vec<MutEvent>) {
        let mut d = d0;
        loop {
            self.dart_outer[d as usize] = true;
            let o = self.darts[d as usize].origin;
            let t = self.darts[d as usize].target;
            if t != dying && !self.v_boundary[t as usize] {
                self.v_boundary[t as usize] = true;
                self.n_boundary += 1;
                events.push(MutEvent::Exposed(t));
            }
            if o != dying && t != dying {
                events.push(MutEvent::OuterEdge(o.min(t), o.max(t), d));
            }
            d = self.face_next(d);
            if d == d0 {
                break;
            }
        }
    }

    /// Delete an alive vertex. If it is a boundary vertex, every incident
    /// inner face merges with the outer region and its corners are exposed.
    /// Deleting an inner vertex merges its faces into one inner face.
    pub fn delete_vertex(&mut self, v: VertexId, events: &mut Vec<MutEvent>) -> Result<()> {
        if !self.is_alive(v) {
            return Err(GraphError::DeadVertex(v));
        }
        if self.v_boundary[v as usize] {
            if let Some(start) = self.first_dart_of(v) {
                let mut d = start;
                loop {
                    if !self.dart_outer[d as usize] {
                        self.absorb_face(d, v, events);
                    }
                    d = self.darts[d as usize].next;
                    if d == start {
                        break;
                    }
                }
            }
        }
        while let Some(d) = self.first_dart_of(v) {
            let w = self.darts[d as usize].target;
            events.push(MutEvent::Touched(w));
            self.unlink(Self::twin(d));
            self.unlink(d);
            self.free_pairs.push(d & !1);
            self.m_alive -= 1;
        }
        self.v_alive[v as usize] = false;
        if self.v_boundary[v as usize] {
            self.v_boundary[v as usize] = false;
            self.n_boundary -= 1;
        }
        self.n_alive -= 1;
        events.push(MutEvent::Died(v));
        self.bump();
        Ok(())
    }

    /// Delete an alive edge. If exactly one side is the outer region the
    /// inner side is absorbed into it; if both sides are inner the two faces
    /// merge into one inner face.
    pub fn delete_edge(&mut self, u: VertexId, w: VertexId, events: &mut Vec<MutEvent>) -> Result<()> {
        let d = self
            .dart_between(u, w)
            .ok_or(GraphError::DeadEdge(u, w))?;
        let t = Self::twin(d);
        let d_out = self.dart_outer[d as usize];
        let t_out = self.dart_outer[t as usize];
        if d_out && !t_out {
            self.absorb_face(t, NIL, events);
        } else if t_out && !d_out {
            self.absorb_face(d, NIL, events);
        }
        self.unlink(d);
        self.unlink(t);
        self.free_pairs.push(d & !1);
        self.m_alive -= 1;
        events.push(MutEvent::Touched(u));
        events.push(MutEvent::Touched(w));
        self.bump();
        Ok(())
    }

    fn alloc_pair(&mut self) -> DartId {
        if let Some(p) = self.free_pairs.pop() {
            p
        } else {
            let base = self.darts.len() as u32;
            for _ in 0..2 {
                self.darts.push(DartRec {
                    target: NIL,
                    origin: NIL,
                    next: NIL,
                    prev: NIL,
                });
                self.dart_alive.push(false);
                self.dart_outer.push(false);
            }
            base
        }
    }

    /// Insert dart `d` into `v`'s rotation immediately after `after`
    /// (clockwise). `after == NIL` means `v` currently has no darts.
    fn link_after(&mut self, v: VertexId, d: DartId, after: DartId) {
        self.darts[d as usize].origin = v;
        self.dart_alive[d as usize] = true;
        if after == NIL {
            debug_assert_eq!(self.first_dart[v as usize], NIL);
            self.first_dart[v as usize] = d;
            self.darts[d as usize].next = d;
            self.darts[d as usize].prev = d;
        } else {
            let next = self.darts[after as usize].next;
            self.darts[after as usize].next = d;
            self.darts[d as usize].prev = after;
            self.darts[d as usize].next = next;
            self.darts[next as usize].prev = d;
        }
        self.degree[v as usize] += 1;
    }

    /// Replace the boundary path x–v–y by the edge xy, leaving v in place
    /// (possibly isolated on the outer face). Requires v to have exactly the
    /// neighbors x and y, the path to run along the outer face with a proper
    /// inner side, and xy to be absent.
    pub fn replace_path_with_edge(
        &mut self,
        x: VertexId,
        v: VertexId,
        y: VertexId,
        events: &mut Vec<MutEvent>,
    ) -> Result<()> {
        if !self.is_alive(v) {
            return Err(GraphError::DeadVertex(v));
        }
        if self.degree[v as usize] != 2 {
            return Err(GraphError::BadReplace(format!(
                "vertex {v} must have degree 2"
            )));
        }
        let dvx = self.dart_between(v, x).ok_or(GraphError::DeadEdge(v, x))?;
        let dvy = self.dart_between(v, y).ok_or(GraphError::DeadEdge(v, y))?;
        if self.has_edge(x, y) {
            return Err(GraphError::EdgeExists(x, y));
        }
        let dxv = Self::twin(dvx);
        let dyv = Self::twin(dvy);
        // Normalize direction: the outer walk passes a -> v -> b.
        let (da_in, db_out, a, b) = if self.dart_outer[dxv as usize] && self.dart_outer[dvy as usize]
        {
            (dxv, dvy, x, y)
        } else if self.dart_outer[dyv as usize] && self.dart_outer[dvx as usize] {
            (dyv, dvx, y, x)
        } else {
            return Err(GraphError::BadReplace(
                "path x-v-y is not on the outer face".into(),
            ));
        };
        if self.dart_outer[Self::twin(da_in) as usize] || self.dart_outer[Self::twin(db_out) as usize]
        {
            return Err(GraphError::BadReplace(
                "path has the outer region on both sides".into(),
            ));
        }
        // New pair: dart p goes a->b (outer side), twin q goes b->a.
        let p = self.alloc_pair();
        let q = Self::twin(p);
        self.darts[p as usize].target = b;
        self.darts[q as usize].target = a;
        // splice p where a's dart to v sat, q where b's dart to v sat
        let a_to_v = da_in; // origin a, target v
        let b_to_v = Self::twin(db_out); // origin b, target v
        let a_anchor = if self.degree[a as usize] == 1 {
            NIL
        } else {
            self.darts[a_to_v as usize].prev
        };
        self.unlink(a_to_v);
        self.unlink(Self::twin(a_to_v));
        self.link_after(a, p, a_anchor);
        let b_anchor = if self.degree[b as usize] == 1 {
            NIL
        } else {
            self.darts[b_to_v as usize].prev
        };
        self.unlink(b_to_v);
        self.unlink(Self::twin(b_to_v));
        self.link_after(b, q, b_anchor);
        self.free_pairs.push(a_to_v & !1);
        self.free_pairs.push(b_to_v & !1);
        self.dart_outer[p as usize] = true;
        self.dart_outer[q as usize] = false;
        self.m_alive -= 1;
        events.push(MutEvent::OuterEdge(a.min(b), a.max(b), p));
        events.push(MutEvent::Touched(a));
        events.push(MutEvent::Touched(b));
        events.push(MutEvent::Touched(v));
        self.bump();
        Ok(())
    }

    /// Insert edge x–y where x's new dart lands right after x's dart to
    /// `after_x` in clockwise order, and y's right after its dart to
    /// `after_y`. Both sides of the new edge are marked inner; the caller is
    /// responsible for choosing a placement where that is correct (diagonal
    /// flips, hole triangulation).
    pub fn insert_edge_after(
        &mut self,
        x: VertexId,
        y: VertexId,
        after_x: VertexId,
        after_y: VertexId,
    ) -> Result<()> {
        if self.has_edge(x, y) {
            return Err(GraphError::EdgeExists(x, y));
        }
        let ax = self
            .dart_between(x, after_x)
            .ok_or(GraphError::DeadEdge(x, after_x))?;
        let ay = self
            .dart_between(y, after_y)
            .ok_or(GraphError::DeadEdge(y, after_y))?;
        let p = self.alloc_pair();
        let q = Self::twin(p);
        self.darts[p as usize].target = y;
        self.darts[q as usize].target = x;
        self.dart_outer[p as usize] = false;
        self.dart_outer[q as usize] = false;
        self.link_after(x, p, ax);
        self.link_after(y, q, ay);
        self.m_alive += 1;
        self.bump();
        Ok(())
    }

    /// Number of alive vertices strictly inside the cycle xyz. Requires a
    /// connected graph.
    pub fn cycle_interior_count(&self, x: VertexId, y: VertexId, z: VertexId) -> Result<usize> {
        Ok(self.cycle_interior_vertices(x, y, z)?.len())
    }

    /// The alive vertices strictly inside the cycle xyz.
    pub fn cycle_interior_vertices(
        &self,
        x: VertexId,
        y: VertexId,
        z: VertexId,
    ) -> Result<Vec<VertexId>> {
        if x == y || y == z || x == z {
            return Err(GraphError::NotACycle([x, y, z]));
        }
        if self.component_count() != 1 {
            return Err(GraphError::Disconnected);
        }
        let dxy = self
            .dart_between(x, y)
            .ok_or(GraphError::NotACycle([x, y, z]))?;
        let dyz = self
            .dart_between(y, z)
            .ok_or(GraphError::NotACycle([x, y, z]))?;
        let dzx = self
            .dart_between(z, x)
            .ok_or(GraphError::NotACycle([x, y, z]))?;
        let cycle_edges: Vec<u32> = vec![dxy & !1, dyz & !1, dzx & !1];
        let is_cycle_edge = |d: DartId| cycle_edges.contains(&(d & !1));
        // flood the faces on one side of the cycle
        let flood = |start: DartId| -> (bool, std::collections::HashSet<VertexId>) {
            let mut hit_outer = false;
            let mut verts = std::collections::HashSet::new();
            let mut seen = std::collections::HashSet::new();
            let mut stack = vec![start];
            while let Some(d0) = stack.pop() {
                if !seen.insert(d0) {
                    continue;
                }
                let mut d = d0;
                loop {
                    seen.insert(d);
                    if self.dart_outer[d as usize] {
                        hit_outer = true;
                    }
                    verts.insert(self.darts[d as usize].target);
                    if !is_cycle_edge(d) {
                        let t = Self::twin(d);
                        if !seen.contains(&t) {
                            stack.push(t);
                        }
                    }
                    d = self.face_next(d);
                    if d == d0 {
                        break;
                    }
                }
            }
            (hit_outer, verts)
        };
        let (hit, verts) = flood(dxy);
        let inside = if hit {
            let (hit2, verts2) = flood(Self::twin(dxy));
            if hit2 {
                // cycle touches the outer region on both sides: no interior
                return Err(GraphError::NotACycle([x, y, z]));
            }
            verts2
        } else {
            verts
        };
        let mut out: Vec<VertexId> = inside
            .into_iter()
            .filter(|&v| v != x && v != y && v != z)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Induced embedded subgraph on `keep` (alive vertices only). Returns the
    /// subgraph with vertices relabeled 0..k in ascending original-id order,
    /// plus the original ids. Boundary flags are NOT set; the caller decides
    /// the outer region.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> (Vec<Vec<u32>>, Vec<VertexId>) {
        let mut ids: Vec<VertexId> = keep.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut index = std::collections::HashMap::new();
        for (i, &v) in ids.iter().enumerate() {
            index.insert(v, i as u32);
        }
        let rotations: Vec<Vec<u32>> = ids
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .into_iter()
                    .filter_map(|w| index.get(&w).copied())
                    .collect()
            })
            .collect();
        (rotations, ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> PlaneGraph {
        PlaneGraph::build_from_rotation(
            3,
            &[vec![1, 2], vec![0, 2], vec![0, 1]],
            &[0, 1, 2],
        )
        .unwrap()
    }

    pub(crate) fn k4() -> PlaneGraph {
        PlaneGraph::build_from_rotation(
            4,
            &[
                vec![2, 3, 1],
                vec![0, 3, 2],
                vec![1, 3, 0],
                vec![2, 1, 0],
            ],
            &[0, 1, 2],
        )
        .unwrap()
    }

    #[test]
    fn triangle_faces() {
        let g = triangle();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        let faces = g.faces();
        assert_eq!(faces.faces.len(), 2);
        assert_eq!(g.boundary_count(), 3);
        assert!(g.is_triangulation());
        assert!(g.is_near_triangulation());
    }

    #[test]
    fn k4_classify() {
        let g = k4();
        assert_eq!(g.faces().faces.len(), 4);
        let bc = g.classify_boundary();
        assert_eq!(bc.boundary, vec![0, 1, 2]);
        assert_eq!(bc.inner, vec![3]);
        assert_eq!(g.inner_degree(0).unwrap(), 1);
        assert!(g.is_triangulation());
        assert_eq!(g.cycle_interior_count(0, 1, 2).unwrap(), 1);
        // facial triangle has empty interior
        assert_eq!(g.cycle_interior_count(0, 1, 3).unwrap(), 0);
    }

    #[test]
    fn dart_without_twin_rejected() {
        // vertex 1 lists 2, but 2 does not list 1
        let err = PlaneGraph::build_from_rotation(
            3,
            &[vec![1, 2], vec![0, 2], vec![0]],
            &[0, 1, 2],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::InconsistentRotation(_, _)));
    }

    #[test]
    fn bad_outer_face_rejected() {
        // a single edge is not a closed traced face of K4
        let err = PlaneGraph::build_from_rotation(
            4,
            &[
                vec![2, 3, 1],
                vec![0, 3, 2],
                vec![1, 3, 0],
                vec![2, 1, 0],
            ],
            &[0, 1],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::BadOuterFace);
    }

    #[test]
    fn any_facial_triangle_may_be_outer() {
        // every triangle of K4 is a face; re-rooting on 0,1,3 is legal
        let g = PlaneGraph::build_from_rotation(
            4,
            &[
                vec![2, 3, 1],
                vec![0, 3, 2],
                vec![1, 3, 0],
                vec![2, 1, 0],
            ],
            &[0, 1, 3],
        )
        .unwrap();
        let bc = g.classify_boundary();
        assert_eq!(bc.inner, vec![2]);
    }

    #[test]
    fn square_not_gnt() {
        // 4-cycle with no chord: inner face is a square
        let g = PlaneGraph::build_from_rotation(
            4,
            &[vec![1, 3], vec![0, 2], vec![1, 3], vec![2, 0]],
            &[0, 1, 2, 3],
        )
        .unwrap();
        assert!(!g.is_generalized_near_triangulation());
        assert!(!g.is_near_triangulation());
    }

    #[test]
    fn delete_inner_vertex_of_k4() {
        let mut g = k4();
        let mut ev = Vec::new();
        g.delete_vertex(3, &mut ev).unwrap();
        g.validate().unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.is_near_triangulation());
        // no exposures: 3 was inner, its face merge stays inner
        assert!(ev.iter().all(|e| !matches!(e, MutEvent::Exposed(_))));
        assert_eq!(g.boundary_count(), 3);
    }

    #[test]
    fn delete_outer_vertex_of_k4() {
        let mut g = k4();
        let mut ev = Vec::new();
        g.delete_vertex(0, &mut ev).unwrap();
        g.validate().unwrap();
        assert!(ev.contains(&MutEvent::Exposed(3)));
        assert_eq!(g.boundary_count(), 3);
        assert!(g.is_near_triangulation());
    }

    #[test]
    fn delete_outer_edge_of_triangle() {
        let mut g = triangle();
        let mut ev = Vec::new();
        g.delete_edge(0, 1, &mut ev).unwrap();
        g.validate().unwrap();
        assert_eq!(g.edge_count(), 2);
        // path: single face
        assert_eq!(g.faces().faces.len(), 1);
        assert_eq!(g.boundary_count(), 3);
    }

    #[test]
    fn replace_path() {
        // W5 wheel: rim 0..4, hub 5. Remove hub edge to 0, then replace 4-0-1 by 4-1.
        let rim = 5u32;
        let mut rot: Vec<Vec<u32>> = Vec::new();
        for i in 0..rim {
            rot.push(vec![(i + 1) % rim, 5, (i + rim - 1) % rim]);
        }
        rot.push((0..rim).collect());
        let mut g =
            PlaneGraph::build_from_rotation(6, &rot, &[0, 1, 2, 3, 4]).unwrap();
        assert!(g.is_near_triangulation());
        let mut ev = Vec::new();
        g.delete_edge(0, 5, &mut ev).unwrap();
        g.validate().unwrap();
        g.replace_path_with_edge(4, 0, 1, &mut ev).unwrap();
        g.validate().unwrap();
        assert!(g.has_edge(4, 1));
        assert_eq!(g.degree_of(0), 0);
        assert!(g.is_boundary(0));
        // vertex 0 still alive and isolated; 5 still inner
        assert!(g.is_inner(5));
        let mut ev2 = Vec::new();
        g.delete_vertex(0, &mut ev2).unwrap();
        g.validate().unwrap();
        assert!(g.is_near_triangulation());
    }

    #[test]
    fn replace_rejects_existing_edge() {
        let mut g = k4();
        let mut ev = Vec::new();
        // 0 has neighbors 1,2,3: degree 3, so replace must fail on degree
        let err = g.replace_path_with_edge(1, 0, 2, &mut ev).unwrap_err();
        assert!(matches!(err, GraphError::BadReplace(_)));
    }

    #[test]
    fn euler_holds_after_random_deletions() {
        let mut g = k4();
        let mut ev = Vec::new();
        g.delete_vertex(1, &mut ev).unwrap();
        g.validate().unwrap();
        g.delete_edge(0, 2, &mut ev).unwrap();
        g.validate().unwrap();
        g.delete_vertex(3, &mut ev).unwrap();
        g.validate().unwrap();
        assert_eq!(g.vertex_count(), 2);
    }
}
