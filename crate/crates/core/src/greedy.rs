//! The two connected-dominating-set engines.
//!
//! SimpleGreedy repeatedly removes a boundary vertex of maximum inner degree
//! while one of inner degree >= 2 exists, then finishes via `critical_delta`,
//! giving |X| <= (4n−9)/7.
//!
//! BetterGreedy keeps the working graph dom-minimal between steps and picks,
//! in order: a boundary vertex of inner degree >= 3 (bg1); the 2–3 combo pair
//! when the inner graph is not critical (bg4); the leaf and isolated-vertex
//! eliminations on the inner graph (bg2, bg3); and finally the 2-critical
//! handler (bg5), giving |X| <= (10n−18)/21.
//!
//! Counters: δ(v) = |N_G(v) ∩ I(G_i)| over the ORIGINAL adjacency (inner
//! adjacencies never change for surviving vertices), and φ(v) = number of
//! "deep" neighbors (inner vertices with no boundary neighbor). Vertices move
//! monotonically Deep → Ring → Boundary → Dead, so each counter only
//! decreases and each vertex enters and leaves each board at most once.

use crate::critical;
use crate::error::{GraphError, Result};
use crate::oracle;
use crate::plane::{MutEvent, PlaneGraph, VertexId};
use crate::reduce::{self, ReduceHooks, ReduceQueue};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Simple,
    Better,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    G1,
    G2,
    Bg1,
    Bg2,
    Bg3,
    Bg4,
    Bg5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    /// Full rescan each step; counters recomputed from the graph.
    Reference,
    /// Bucket boards plus incremental dom-minimality repair (default).
    Incremental,
}

/// One engine step: the removed batch plus the accounting snapshot used by
/// the per-step inequalities of the size analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub delta: Vec<VertexId>,
    /// inner degree of the selected vertex at selection time (bg1/g1)
    pub selected_inner_degree: usize,
    pub pre_alive: usize,
    pub pre_boundary: usize,
    pub pre_dominated: usize,
    pub post_alive: usize,
    pub post_boundary: usize,
    pub post_dominated: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CdsCertificate {
    pub n: usize,
    pub algo: Algo,
    #[serde(rename = "X")]
    pub x: Vec<VertexId>,
    pub steps: Vec<Step>,
}

/// ⌊(4n−9)/7⌋, the SimpleGreedy guarantee for n >= 4.
pub fn simple_bound(n: usize) -> usize {
    (4 * n - 9) / 7
}

/// ⌊(10n−18)/21⌋, the BetterGreedy guarantee for n >= 5 (1 for n = 3, 4).
pub fn better_bound(n: usize) -> usize {
    if n <= 4 {
        1
    } else {
        (10 * n - 18) / 21
    }
}

// ----------------------------------------------------------------------
// Bucket boards: per-key BTreeSets (lowest-id queries) with a monotone
// max-key scan pointer.
// ----------------------------------------------------------------------

#[derive(Debug, Default)]
struct Board {
    /// min-id heaps with lazy deletion: stale entries are skipped at query
    /// time using the caller's validity predicate
    buckets: Vec<std::collections::BinaryHeap<std::cmp::Reverse<u32>>>,
    /// live membership count per bucket
    live: Vec<usize>,
    max_key: usize,
    len: usize,
}

impl Board {
    fn grow(&mut self, key: usize) {
        if key >= self.buckets.len() {
            self.buckets
                .resize_with(key + 1, std::collections::BinaryHeap::new);
            self.live.resize(key + 1, 0);
        }
    }
    fn insert(&mut self, v: u32, key: usize) {
        self.grow(key);
        self.buckets[key].push(std::cmp::Reverse(v));
        self.live[key] += 1;
        self.max_key = self.max_key.max(key);
        self.len += 1;
    }
    /// Logical removal: the heap entry stays and is skipped later.
    fn remove(&mut self, _v: u32, key: usize) {
        debug_assert!(self.live[key] > 0, "board desync at key {key}");
        self.live[key] -= 1;
        self.len -= 1;
    }
    fn decrement(&mut self, v: u32, old_key: usize) {
        debug_assert!(old_key > 0);
        self.remove(v, old_key);
        self.insert(v, old_key - 1);
    }
    /// (max key, lowest live id in that bucket); `valid(v, key)` tells
    /// whether a popped entry still belongs to this bucket.
    fn max_entry(&mut self, valid: impl Fn(u32, usize) -> bool) -> Option<(usize, u32)> {
        if self.len == 0 {
            return None;
        }
        while self.max_key > 0 && self.live[self.max_key] == 0 {
            self.max_key -= 1;
        }
        let key = self.max_key;
        self.min_id_at(key, valid).map(|v| (key, v))
    }
    fn min_id_at(&mut self, key: usize, valid: impl Fn(u32, usize) -> bool) -> Option<u32> {
        if key >= self.buckets.len() || self.live[key] == 0 {
            return None;
        }
        let bucket = &mut self.buckets[key];
        while let Some(&std::cmp::Reverse(v)) = bucket.peek() {
            if valid(v, key) {
                return Some(v);
            }
            bucket.pop();
        }
        debug_assert!(false, "live count positive but no valid entry");
        None
    }
}

// ----------------------------------------------------------------------
// Engine counters: vertex states, δ and φ, optional boards.
// ----------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VState {
    Deep,
    Ring,
    Boundary,
    Dead,
}

struct Csr {
    off: Vec<u32>,
    nbr: Vec<u32>,
}

impl Csr {
    fn of(g: &PlaneGraph) -> Csr {
        let n = g.id_bound();
        let mut off = vec![0u32; n + 1];
        for v in g.alive_vertices() {
            off[v as usize + 1] = g.degree_of(v) as u32;
        }
        for i in 0..n {
            off[i + 1] += off[i];
        }
        let mut nbr = vec![0u32; off[n] as usize];
        let mut cur = off.clone();
        for v in g.alive_vertices() {
            for w in g.neighbors(v) {
                nbr[cur[v as usize] as usize] = w;
                cur[v as usize] += 1;
            }
        }
        Csr { off, nbr }
    }
    fn nbrs(&self, v: u32) -> &[u32] {
        &self.nbr[self.off[v as usize] as usize..self.off[v as usize + 1] as usize]
    }
}

/// Engine counter state: vertex phases, δ/φ counters, optional boards.
pub struct Counters {
    adj: Csr,
    state: Vec<VState>,
    delta: Vec<u32>,
    phi: Vec<u32>,
    boards: Option<Boards>,
    dead: usize,
}

pub(crate) struct Boards {
    beta: Board,
    zeta: Board,
    phi: Board,
}

impl Counters {
    /// Build counters for a fresh engine run.
    pub fn init(g: &PlaneGraph, with_boards: bool) -> Counters {
        let n = g.id_bound();
        let adj = Csr::of(g);
        let mut state = vec![VState::Dead; n];
        for v in g.alive_vertices() {
            state[v as usize] = if g.is_boundary(v) {
                VState::Boundary
            } else if g.neighbors(v).iter().any(|&u| g.is_boundary(u)) {
                VState::Ring
            } else {
                VState::Deep
            };
        }
        let mut delta = vec![0u32; n];
        let mut phi = vec![0u32; n];
        for v in g.alive_vertices() {
            for &w in adj.nbrs(v) {
                match state[w as usize] {
                    VState::Ring | VState::Deep => delta[v as usize] += 1,
                    _ => {}
                }
                if state[w as usize] == VState::Deep {
                    phi[v as usize] += 1;
                }
            }
        }
        let boards = with_boards.then(|| {
            let mut b = Boards {
                beta: Board::default(),
                zeta: Board::default(),
                phi: Board::default(),
            };
            for v in g.alive_vertices() {
                match state[v as usize] {
                    VState::Boundary => b.beta.insert(v, delta[v as usize] as usize),
                    VState::Ring => {
                        b.zeta.insert(v, delta[v as usize] as usize);
                        b.phi.insert(v, phi[v as usize] as usize);
                    }
                    _ => {}
                }
            }
            b
        });
        Counters {
            adj,
            state,
            delta,
            phi,
            boards,
            dead: 0,
        }
    }

    fn dominated_count(&self, g: &PlaneGraph) -> usize {
        g.boundary_count() + self.dead
    }

    fn expose(&mut self, x: u32) {
        debug_assert_eq!(self.state[x as usize], VState::Ring, "exposure skips Ring");
        self.state[x as usize] = VState::Boundary;
        if let Some(b) = self.boards.as_mut() {
            b.zeta.remove(x, self.delta[x as usize] as usize);
            b.phi.remove(x, self.phi[x as usize] as usize);
            b.beta.insert(x, self.delta[x as usize] as usize);
        }
        // x left the inner set: δ decrements around it
        for i in self.adj.off[x as usize]..self.adj.off[x as usize + 1] {
            let u = self.adj.nbr[i as usize];
            if self.state[u as usize] == VState::Dead {
                continue;
            }
            let old = self.delta[u as usize] as usize;
            self.delta[u as usize] -= 1;
            if let Some(b) = self.boards.as_mut() {
                match self.state[u as usize] {
                    VState::Boundary => b.beta.decrement(u, old),
                    VState::Ring => b.zeta.decrement(u, old),
                    _ => {}
                }
            }
        }
        // deep neighbors of x gain their first boundary neighbor
        for i in self.adj.off[x as usize]..self.adj.off[x as usize + 1] {
            let u = self.adj.nbr[i as usize];
            if self.state[u as usize] != VState::Deep {
                continue;
            }
            self.state[u as usize] = VState::Ring;
            if let Some(b) = self.boards.as_mut() {
                b.zeta.insert(u, self.delta[u as usize] as usize);
                b.phi.insert(u, self.phi[u as usize] as usize);
            }
            // u left the deep set: φ decrements around it
            for j in self.adj.off[u as usize]..self.adj.off[u as usize + 1] {
                let t = self.adj.nbr[j as usize];
                if self.state[t as usize] == VState::Dead {
                    continue;
                }
                let old = self.phi[t as usize] as usize;
                self.phi[t as usize] -= 1;
                if let Some(b) = self.boards.as_mut() {
                    if self.state[t as usize] == VState::Ring {
                        b.phi.decrement(t, old);
                    }
                }
            }
        }
    }

    fn bury(&mut self, v: u32) {
        debug_assert_eq!(self.state[v as usize], VState::Boundary, "only boundary dies");
        self.state[v as usize] = VState::Dead;
        self.dead += 1;
        if let Some(b) = self.boards.as_mut() {
            b.beta.remove(v, self.delta[v as usize] as usize);
        }
    }
}

impl ReduceHooks for Counters {
    fn delta(&self, g: &PlaneGraph, v: VertexId) -> usize {
        let d = self.delta[v as usize] as usize;
        debug_assert!(
            g.vertex_count() > 300 || d == g.inner_degree(v).unwrap_or(0),
            "δ counter desync at {v}"
        );
        d
    }
    fn on_events(&mut self, _g: &PlaneGraph, events: &[MutEvent]) {
        for ev in events {
            match *ev {
                MutEvent::Exposed(x) => self.expose(x),
                MutEvent::Died(v) => self.bury(v),
                _ => {}
            }
        }
    }
}

// ----------------------------------------------------------------------
// Step selection
// ----------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepChoice {
    /// Boundary vertex of maximum inner degree (g1 needs >= 2, bg1 >= 3).
    MaxDegree { v: VertexId, inner_degree: usize },
    /// Inner leaf elimination: delete `v` (bg2).
    Leaf { v: VertexId },
    /// Inner isolated-vertex elimination: delete `v` (bg3).
    Isolated { v: VertexId },
    /// 2–3 combo: delete `v0` then `w` (bg4).
    Combo { v0: VertexId, w: VertexId },
    /// 2-critical remainder (bg5) / critical remainder (g2).
    Final,
}

/// The bg4 witness search around the Φ-max vertex `w`: maximal runs of
/// consecutive boundary neighbors in w's rotation, flanked by inner vertices.
/// Returns (v0, vj) = the endpoints of the run containing the smallest
/// endpoint id.
fn fan_search(g: &PlaneGraph, w: VertexId) -> Result<(VertexId, VertexId)> {
    let rot = g.neighbors(w);
    let k = rot.len();
    let is_b: Vec<bool> = rot.iter().map(|&u| g.is_boundary(u)).collect();
    if is_b.iter().all(|&b| !b) || is_b.iter().all(|&b| b) {
        return Err(GraphError::InconsistentBoard(format!(
            "no boundary run at {w}"
        )));
    }
    // collect maximal boundary runs over the cyclic list
    let start = (0..k).find(|&i| !is_b[i]).unwrap();
    let mut runs: Vec<(usize, usize)> = Vec::new(); // (first, last) positions
    let mut i = start;
    let mut steps = 0;
    while steps < k {
        i = (i + 1) % k;
        steps += 1;
        if is_b[i] {
            let first = i;
            let mut last = i;
            while steps < k && is_b[(last + 1) % k] {
                last = (last + 1) % k;
                i = last;
                steps += 1;
            }
            runs.push((first, last));
        }
    }
    let mut best: Option<(VertexId, VertexId)> = None;
    for (f, l) in runs {
        if f == l {
            // a lone boundary vertex between inner flanks would have inner
            // degree >= 3, impossible once bg1 no longer fires
            debug_assert!(false, "length-1 boundary run at {w}");
            continue;
        }
        let (a, b) = (rot[f], rot[l]);
        let (lo, hi) = (a.min(b), a.max(b));
        if best.map_or(true, |(bl, _)| lo < bl) {
            best = Some((lo, hi));
        }
    }
    best.ok_or_else(|| GraphError::InconsistentBoard(format!("no usable run at {w}")))
}

/// The bg2 witness: the inner-graph leaf `w_leaf` has a unique inner
/// neighbor x; delete the smaller of the two rotation neighbors of x
/// around w_leaf (both boundary).
fn leaf_search(g: &PlaneGraph, w_leaf: VertexId) -> Result<VertexId> {
    let rot = g.neighbors(w_leaf);
    let k = rot.len();
    let pos = (0..k)
        .filter(|&i| g.is_inner(rot[i]))
        .collect::<Vec<_>>();
    if pos.len() != 1 {
        return Err(GraphError::InconsistentBoard(format!(
            "leaf {w_leaf} has {} inner neighbors",
            pos.len()
        )));
    }
    let p = pos[0];
    let before = rot[(p + k - 1) % k];
    let after = rot[(p + 1) % k];
    debug_assert!(g.is_boundary(before) && g.is_boundary(after));
    Ok(before.min(after))
}

/// The bg3 witness around an isolated inner vertex `w` (all neighbors
/// boundary), following the three elimination cases.
fn isolated_search(
    g: &PlaneGraph,
    w: VertexId,
    delta_of: &dyn Fn(VertexId) -> usize,
) -> Result<VertexId> {
    let rot = g.neighbors(w);
    debug_assert!(rot.iter().all(|&u| g.is_boundary(u)));
    // case (i): some neighbor has inner degree 1; its closed neighborhood is
    // K4 by dom-minimality; delete the smaller of its two non-w neighbors
    if let Some(z) = rot.iter().copied().filter(|&z| delta_of(z) == 1).min() {
        let zn = g.neighbors(z);
        debug_assert_eq!(zn.len(), 3, "DM2 forces a K4 neighborhood at {z}");
        return Ok(zn.into_iter().filter(|&u| u != w).min().unwrap());
    }
    // case (ii): adjacent face vertices with identical inner neighborhoods
    let other_inner = |z: VertexId| -> Option<VertexId> {
        g.neighbors(z)
            .into_iter()
            .find(|&u| u != w && g.is_inner(u))
    };
    let k = rot.len();
    let others: Vec<Option<VertexId>> = rot.iter().map(|&z| other_inner(z)).collect();
    let mut best: Option<(VertexId, VertexId)> = None;
    for i in 0..k {
        let j = (i + 1) % k;
        if others[i].is_some() && others[i] == others[j] {
            let (lo, hi) = (rot[i].min(rot[j]), rot[i].max(rot[j]));
            if best.map_or(true, |b| (lo, hi) < b) {
                best = Some((lo, hi));
            }
        }
    }
    if let Some((lo, _)) = best {
        return Ok(lo);
    }
    // case (iii): all adjacent pairs differ; any face vertex works
    Ok(rot.into_iter().min().unwrap())
}

/// Decide the next step of BetterGreedy on a dom-minimal graph.
pub fn select_step(
    g: &PlaneGraph,
    counters: &mut Counters,
) -> Result<StepChoice> {
    if g.inner_count() == 0 {
        return Ok(StepChoice::Final);
    }
    match counters.boards.as_mut() {
        Some(_) => select_incremental(g, counters),
        None => select_by_scan(g),
    }
}

fn select_incremental(g: &PlaneGraph, counters: &mut Counters) -> Result<StepChoice> {
    let Counters {
        boards,
        state,
        delta,
        phi,
        ..
    } = counters;
    let boards = boards.as_mut().unwrap();
    let beta_valid =
        |v: u32, k: usize| state[v as usize] == VState::Boundary && delta[v as usize] as usize == k;
    let zeta_valid =
        |v: u32, k: usize| state[v as usize] == VState::Ring && delta[v as usize] as usize == k;
    let phi_valid =
        |v: u32, k: usize| state[v as usize] == VState::Ring && phi[v as usize] as usize == k;
    if let Some((key, v)) = boards.beta.max_entry(beta_valid) {
        if key >= 3 {
            return Ok(StepChoice::MaxDegree {
                v,
                inner_degree: key,
            });
        }
    }
    if let Some((key, w)) = boards.phi.max_entry(phi_valid) {
        if key >= 2 {
            let (v0, _vj) = fan_search(g, w)?;
            return Ok(StepChoice::Combo { v0, w });
        }
    }
    if let Some(x) = boards.zeta.min_id_at(1, zeta_valid) {
        let v = leaf_search(g, x)?;
        return Ok(StepChoice::Leaf { v });
    }
    if let Some(x) = boards.zeta.min_id_at(0, zeta_valid) {
        let v = isolated_search(g, x, &|u| delta[u as usize] as usize)?;
        return Ok(StepChoice::Isolated { v });
    }
    Ok(StepChoice::Final)
}

/// Reference selection: everything recomputed by scanning the graph.
fn select_by_scan(g: &PlaneGraph) -> Result<StepChoice> {
    let mut beta_best: Option<(usize, VertexId)> = None;
    for v in g.alive_vertices() {
        if g.is_boundary(v) {
            let d = g.inner_degree(v)?;
            if beta_best.map_or(true, |(bd, bv)| d > bd || (d == bd && v < bv)) {
                beta_best = Some((d, v));
            }
        }
    }
    if let Some((d, v)) = beta_best {
        if d >= 3 {
            return Ok(StepChoice::MaxDegree {
                v,
                inner_degree: d,
            });
        }
    }
    let ring: Vec<VertexId> = g
        .alive_vertices()
        .filter(|&v| g.is_inner(v) && g.neighbors(v).iter().any(|&u| g.is_boundary(u)))
        .collect();
    let is_deep =
        |v: VertexId| g.is_inner(v) && !g.neighbors(v).iter().any(|&u| g.is_boundary(u));
    let mut phi_best: Option<(usize, VertexId)> = None;
    for &w in &ring {
        let p = g.neighbors(w).into_iter().filter(|&u| is_deep(u)).count();
        if phi_best.map_or(true, |(bp, bw)| p > bp || (p == bp && w < bw)) {
            phi_best = Some((p, w));
        }
    }
    if let Some((p, w)) = phi_best {
        if p >= 2 {
            let (v0, _vj) = fan_search(g, w)?;
            return Ok(StepChoice::Combo { v0, w });
        }
    }
    let zeta_of = |w: VertexId| -> usize {
        g.neighbors(w).into_iter().filter(|&u| g.is_inner(u)).count()
    };
    if let Some(x) = ring.iter().copied().filter(|&w| zeta_of(w) == 1).min() {
        let v = leaf_search(g, x)?;
        return Ok(StepChoice::Leaf { v });
    }
    if let Some(x) = ring.iter().copied().filter(|&w| zeta_of(w) == 0).min() {
        let v = isolated_search(g, x, &|u| g.inner_degree(u).unwrap_or(0))?;
        return Ok(StepChoice::Isolated { v });
    }
    Ok(StepChoice::Final)
}

// ----------------------------------------------------------------------
// Engines
// ----------------------------------------------------------------------

fn check_triangulation(g: &PlaneGraph) -> Result<()> {
    if !g.is_triangulation() {
        return Err(GraphError::NotTriangulation(format!(
            "n={}, m={}",
            g.vertex_count(),
            g.edge_count()
        )));
    }
    Ok(())
}

/// SimpleGreedy: no reduction; pick max inner degree while >= 2, finish with
/// `critical_delta`.
pub fn simple_greedy(g: &PlaneGraph, mode: EngineMode) -> Result<CdsCertificate> {
    check_triangulation(g)?;
    let n = g.vertex_count();
    if n == 3 {
        return Ok(trivial_certificate(g, Algo::Simple));
    }
    let mut work = g.clone();
    let mut counters = Counters::init(&work, mode == EngineMode::Incremental);
    let mut steps: Vec<Step> = Vec::new();
    let mut x: Vec<VertexId> = Vec::new();
    loop {
        let pre = snapshot(&work, &counters);
        // max inner degree over the boundary
        let best = match counters.boards.is_some() {
            true => {
                let Counters {
                    boards,
                    state,
                    delta,
                    ..
                } = &mut counters;
                let beta_valid = |v: u32, k: usize| {
                    state[v as usize] == VState::Boundary && delta[v as usize] as usize == k
                };
                boards.as_mut().unwrap().beta.max_entry(beta_valid)
            }
            false => {
                let mut best: Option<(usize, VertexId)> = None;
                for v in work.alive_vertices() {
                    if work.is_boundary(v) {
                        let d = work.inner_degree(v)?;
                        if best.map_or(true, |(bd, bv)| d > bd || (d == bd && v < bv)) {
                            best = Some((d, v));
                        }
                    }
                }
                best
            }
        };
        match best {
            Some((d, v)) if d >= 2 => {
                let mut ev = Vec::new();
                work.delete_vertex(v, &mut ev)?;
                counters.on_events(&work, &ev);
                x.push(v);
                steps.push(finish_step(
                    Step {
                        kind: StepKind::G1,
                        delta: vec![v],
                        selected_inner_degree: d,
                        pre_alive: pre.0,
                        pre_boundary: pre.1,
                        pre_dominated: pre.2,
                        post_alive: 0,
                        post_boundary: 0,
                        post_dominated: 0,
                    },
                    &work,
                    &counters,
                ));
            }
            _ => {
                // critical remainder
                debug_assert!(critical::is_critical(&work).unwrap_or(false));
                if !critical::critical_counts_hold(&work) {
                    return Err(GraphError::AssertionFailed(
                        "critical remainder violates |B| >= 3|I|".into(),
                    ));
                }
                let delta = critical::critical_delta(&work)?;
                if !delta.is_empty() {
                    x.extend(delta.iter().copied());
                    steps.push(finish_step(
                        Step {
                            kind: StepKind::G2,
                            delta,
                            selected_inner_degree: 0,
                            pre_alive: pre.0,
                            pre_boundary: pre.1,
                            pre_dominated: pre.2,
                            post_alive: 0,
                            post_boundary: 0,
                            post_dominated: 0,
                        },
                        &work,
                        &counters,
                    ));
                }
                break;
            }
        }
    }
    x.sort_unstable();
    Ok(CdsCertificate {
        n,
        algo: Algo::Simple,
        x,
        steps,
    })
}

/// BetterGreedy (the main engine).
pub fn better_greedy(g: &PlaneGraph, mode: EngineMode) -> Result<CdsCertificate> {
    check_triangulation(g)?;
    let n = g.vertex_count();
    if n == 3 {
        return Ok(trivial_certificate(g, Algo::Better));
    }
    let mut work = g.clone();
    let mut counters = Counters::init(&work, mode == EngineMode::Incremental);
    let mut queue = ReduceQueue::new();
    // a triangulation with n >= 4 is already dom-minimal; run a full pass
    // anyway so both engines start from the same canonical state
    queue.seed_full(&work);
    reduce::run_reduce(&mut work, &mut queue, &mut counters)?;
    let mut steps: Vec<Step> = Vec::new();
    let mut x: Vec<VertexId> = Vec::new();
    loop {
        let pre = snapshot(&work, &counters);
        let choice = match mode {
            EngineMode::Incremental => select_incremental(&work, &mut counters)?,
            EngineMode::Reference => {
                if work.inner_count() == 0 {
                    StepChoice::Final
                } else {
                    select_by_scan(&work)?
                }
            }
        };
        if work.inner_count() == 0 {
            break; // fully reduced away: remainder is outerplane
        }
        let (kind, delta, sel_deg) = match choice {
            StepChoice::MaxDegree { v, inner_degree } => {
                debug_assert!(inner_degree >= 3);
                delete_and_repair(&mut work, &mut counters, &mut queue, v)?;
                (StepKind::Bg1, vec![v], inner_degree)
            }
            StepChoice::Leaf { v } => {
                delete_and_repair(&mut work, &mut counters, &mut queue, v)?;
                (StepKind::Bg2, vec![v], 0)
            }
            StepChoice::Isolated { v } => {
                delete_and_repair(&mut work, &mut counters, &mut queue, v)?;
                (StepKind::Bg3, vec![v], 0)
            }
            StepChoice::Combo { v0, w } => {
                // delete v0; w becomes a boundary vertex; delete w; repair
                let mut ev = Vec::new();
                work.delete_vertex(v0, &mut ev)?;
                counters.on_events(&work, &ev);
                queue.absorb_events(&work, &ev);
                if counters.state[w as usize] != VState::Boundary {
                    return Err(GraphError::InconsistentBoard(format!(
                        "combo vertex {w} not exposed by deleting {v0}"
                    )));
                }
                ev.clear();
                work.delete_vertex(w, &mut ev)?;
                counters.on_events(&work, &ev);
                queue.absorb_events(&work, &ev);
                let _ = reduce::run_reduce(&mut work, &mut queue, &mut counters)?;
                (StepKind::Bg4, vec![v0, w], 0)
            }
            StepChoice::Final => {
                // 2-critical remainder
                let delta = final_two_critical(&work)?;
                if !delta.is_empty() {
                    x.extend(delta.iter().copied());
                    steps.push(finish_step(
                        Step {
                            kind: StepKind::Bg5,
                            delta,
                            selected_inner_degree: 0,
                            pre_alive: pre.0,
                            pre_boundary: pre.1,
                            pre_dominated: pre.2,
                            post_alive: 0,
                            post_boundary: 0,
                            post_dominated: 0,
                        },
                        &work,
                        &counters,
                    ));
                }
                break;
            }
        };
        debug_assert!(
            work.vertex_count() > 300
                || reduce::is_dom_minimal(&work).map_or(true, |v| v.is_none()),
            "incremental repair left a violation"
        );
        x.extend(delta.iter().copied());
        steps.push(finish_step(
            Step {
                kind,
                delta,
                selected_inner_degree: sel_deg,
                pre_alive: pre.0,
                pre_boundary: pre.1,
                pre_dominated: pre.2,
                post_alive: 0,
                post_boundary: 0,
                post_dominated: 0,
            },
            &work,
            &counters,
        ));
    }
    x.sort_unstable();
    x.dedup();
    Ok(CdsCertificate {
        n,
        algo: Algo::Better,
        x,
        steps,
    })
}

fn delete_and_repair(
    work: &mut PlaneGraph,
    counters: &mut Counters,
    queue: &mut ReduceQueue,
    v: VertexId,
) -> Result<()> {
    let mut ev = Vec::new();
    work.delete_vertex(v, &mut ev)?;
    counters.on_events(work, &ev);
    queue.absorb_events(work, &ev);
    reduce::run_reduce(work, queue, counters)?;
    Ok(())
}

/// The bg5 handler: assert the 2-critical debug facts, the per-component
/// critical counts, then return the smallest of the three sets.
fn final_two_critical(work: &PlaneGraph) -> Result<Vec<VertexId>> {
    if work.inner_count() == 0 {
        return Ok(Vec::new());
    }
    critical::two_critical_checks(work)?;
    for comp in critical::inner_components(work)? {
        if !critical::critical_counts_hold(&comp.graph) {
            return Err(GraphError::AssertionFailed(
                "inner component violates |B| >= 3|I|".into(),
            ));
        }
    }
    critical::two_critical_delta(work)
}

fn snapshot(g: &PlaneGraph, c: &Counters) -> (usize, usize, usize) {
    (g.vertex_count(), g.boundary_count(), c.dominated_count(g))
}

fn finish_step(mut s: Step, g: &PlaneGraph, c: &Counters) -> Step {
    s.post_alive = g.vertex_count();
    s.post_boundary = g.boundary_count();
    s.post_dominated = c.dominated_count(g);
    s
}

fn trivial_certificate(g: &PlaneGraph, algo: Algo) -> CdsCertificate {
    let v = g
        .alive_vertices()
        .filter(|&v| g.is_boundary(v))
        .min()
        .expect("non-empty triangulation");
    let kind = match algo {
        Algo::Simple => StepKind::G2,
        Algo::Better => StepKind::Bg5,
    };
    CdsCertificate {
        n: g.vertex_count(),
        algo,
        x: vec![v],
        steps: vec![Step {
            kind,
            delta: vec![v],
            selected_inner_degree: 0,
            pre_alive: g.vertex_count(),
            pre_boundary: g.boundary_count(),
            pre_dominated: g.boundary_count(),
            post_alive: g.vertex_count(),
            post_boundary: g.boundary_count(),
            post_dominated: g.vertex_count(),
        }],
    }
}

// ----------------------------------------------------------------------
// Verification
// ----------------------------------------------------------------------

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub dominating: bool,
    pub connected: bool,
    pub staged: bool,
    pub remainder_outerplane: bool,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.dominating && self.connected && self.staged && self.remainder_outerplane
    }
}

/// Check a certificate against the original graph: domination, connectivity,
/// the staged boundary conditions, and the outerplane remainder.
pub fn verify_certificate(g: &PlaneGraph, cert: &CdsCertificate) -> VerifyReport {
    let mut rep = VerifyReport {
        dominating: oracle::is_dominating(g, &cert.x),
        connected: oracle::is_connected_induced(g, &cert.x),
        staged: true,
        remainder_outerplane: true,
        failures: Vec::new(),
    };
    if !rep.dominating {
        rep.failures.push("X does not dominate V(G)".into());
    }
    if !rep.connected {
        rep.failures.push("G[X] is not connected".into());
    }
    // the deltas must partition X
    let mut union: Vec<VertexId> = cert.steps.iter().flat_map(|s| s.delta.clone()).collect();
    let total: usize = union.len();
    union.sort_unstable();
    union.dedup();
    if union != cert.x || total != cert.x.len() {
        rep.staged = false;
        rep.failures.push("deltas do not partition X".into());
    }
    // staged replay on the unreduced graph
    let mut replay = g.clone();
    let mut ev = Vec::new();
    let last = cert.steps.len().saturating_sub(1);
    for (i, step) in cert.steps.iter().enumerate() {
        let final_step = i == last && matches!(step.kind, StepKind::G2 | StepKind::Bg5);
        if final_step {
            match step.kind {
                StepKind::G2 => {
                    for &v in &step.delta {
                        if !replay.is_alive(v) || !replay.is_boundary(v) {
                            rep.staged = false;
                            rep.failures
                                .push(format!("final delta vertex {v} not on B(G-X)"));
                        }
                    }
                }
                StepKind::Bg5 => {
                    // every component of G[Δ] must contain a vertex on the
                    // current boundary
                    let dset: BTreeSet<VertexId> = step.delta.iter().copied().collect();
                    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
                    for &s in &dset {
                        if seen.contains(&s) {
                            continue;
                        }
                        let mut stack = vec![s];
                        seen.insert(s);
                        let mut touches = replay.is_boundary(s);
                        while let Some(u) = stack.pop() {
                            for w in replay.neighbors(u) {
                                if dset.contains(&w) && seen.insert(w) {
                                    touches |= replay.is_boundary(w);
                                    stack.push(w);
                                }
                            }
                        }
                        if !touches {
                            rep.staged = false;
                            rep.failures.push(format!(
                                "final delta component at {s} misses B(G-X)"
                            ));
                        }
                    }
                }
                _ => unreachable!(),
            }
            break;
        }
        for &v in &step.delta {
            if !replay.is_alive(v) || !replay.is_boundary(v) {
                rep.staged = false;
                rep.failures
                    .push(format!("step {i}: {v} not on the current boundary"));
                break;
            }
            ev.clear();
            if replay.delete_vertex(v, &mut ev).is_err() {
                rep.staged = false;
                rep.failures.push(format!("step {i}: cannot delete {v}"));
                break;
            }
        }
        if !rep.staged {
            break;
        }
    }
    // remainder outerplane (vacuous for n < 4)
    if g.vertex_count() >= 4 {
        let xset: BTreeSet<VertexId> = cert.x.iter().copied().collect();
        let rest: Vec<VertexId> = g
            .alive_vertices()
            .filter(|v| !xset.contains(v))
            .collect();
        rep.remainder_outerplane = oracle::is_outerplane(g, &rest);
        if !rep.remainder_outerplane {
            rep.failures.push("G - X is not outerplane".into());
        }
    }
    rep
}

/// Check the per-step inequalities of the size analysis (the constraint rows
/// behind the (10n−18)/21 bound). Returns human-readable violations.
pub fn step_accounting_violations(cert: &CdsCertificate) -> Vec<String> {
    let mut out = Vec::new();
    for (i, s) in cert.steps.iter().enumerate() {
        match s.kind {
            StepKind::Bg1 => {
                if s.selected_inner_degree < 3 {
                    out.push(format!("step {i}: bg1 with inner degree < 3"));
                }
                if s.post_dominated < s.pre_dominated + s.selected_inner_degree {
                    out.push(format!(
                        "step {i}: bg1 dominated set grew by {} < {}",
                        s.post_dominated - s.pre_dominated,
                        s.selected_inner_degree
                    ));
                }
            }
            StepKind::Bg2 | StepKind::Bg3 => {
                if s.post_alive + 3 > s.pre_alive {
                    out.push(format!("step {i}: {:?} shrank |H| by < 3", s.kind));
                }
                if s.post_boundary + 1 > s.pre_boundary {
                    out.push(format!("step {i}: {:?} did not shrink |B|", s.kind));
                }
            }
            StepKind::Bg4 => {
                if s.post_dominated < s.pre_dominated + 5 {
                    out.push(format!(
                        "step {i}: bg4 dominated set grew by {} < 5",
                        s.post_dominated - s.pre_dominated
                    ));
                }
                if s.post_boundary > s.pre_boundary + 2 {
                    out.push(format!("step {i}: bg4 grew |B| by > 2"));
                }
            }
            _ => {}
        }
    }
    out
}

// ----------------------------------------------------------------------
// Spanning tree extraction
// ----------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpanningTree {
    pub root: VertexId,
    /// parent[v] = parent vertex id; the root maps to itself; dead ids map
    /// to u32::MAX.
    pub parent: Vec<VertexId>,
}

impl SpanningTree {
    pub fn leaf_count(&self, g: &PlaneGraph) -> usize {
        let mut child_count = vec![0u32; self.parent.len()];
        for v in g.alive_vertices() {
            let p = self.parent[v as usize];
            if p != u32::MAX && p != v {
                child_count[p as usize] += 1;
            }
        }
        g.alive_vertices()
            .filter(|&v| child_count[v as usize] == 0 && v != self.root)
            .count()
    }

    pub fn degree_in_tree(&self, g: &PlaneGraph, v: VertexId) -> usize {
        let mut d = 0;
        for u in g.alive_vertices() {
            if u != v && self.parent[u as usize] == v {
                d += 1;
            }
        }
        if self.parent[v as usize] != v {
            d += 1;
        }
        d
    }

    /// The same tree rooted at `new_root` (pointers along the old root path
    /// reversed).
    pub fn rerooted(&self, new_root: VertexId) -> SpanningTree {
        let mut parent = self.parent.clone();
        let mut path = vec![new_root];
        let mut cur = new_root;
        while parent[cur as usize] != cur {
            cur = parent[cur as usize];
            path.push(cur);
        }
        for w in path.windows(2) {
            parent[w[1] as usize] = w[0];
        }
        parent[new_root as usize] = new_root;
        SpanningTree {
            root: new_root,
            parent,
        }
    }

    /// Re-root at the lowest-id internal vertex if the root is a leaf (the
    /// envelope walk needs an internal root).
    pub fn with_internal_root(&self, g: &PlaneGraph) -> SpanningTree {
        if self.degree_in_tree(g, self.root) >= 2 {
            return self.clone();
        }
        let internal = g
            .alive_vertices()
            .find(|&v| self.degree_in_tree(g, v) >= 2)
            .expect("trees on >= 3 vertices have an internal vertex");
        self.rerooted(internal)
    }
}

/// Spanning tree whose non-X vertices are all leaves: BFS tree of G[X] from
/// the lowest-id member, then every v ∉ X hangs off its lowest-id X-neighbor.
pub fn spanning_tree_from_cds(g: &PlaneGraph, x: &[VertexId]) -> Result<SpanningTree> {
    if !oracle::is_dominating(g, x) || !oracle::is_connected_induced(g, x) {
        return Err(GraphError::NotCds(format!("|X| = {}", x.len())));
    }
    let n = g.id_bound();
    let mut in_x = vec![false; n];
    for &v in x {
        in_x[v as usize] = true;
    }
    let root = *x.iter().min().unwrap();
    let mut parent = vec![u32::MAX; n];
    parent[root as usize] = root;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let mut nbrs = g.neighbors(v);
        nbrs.sort_unstable();
        for w in nbrs {
            if in_x[w as usize] && parent[w as usize] == u32::MAX {
                parent[w as usize] = v;
                queue.push_back(w);
            }
        }
    }
    for v in g.alive_vertices() {
        if !in_x[v as usize] {
            let p = g
                .neighbors(v)
                .into_iter()
                .filter(|&u| in_x[u as usize])
                .min()
                .expect("X dominates v");
            parent[v as usize] = p;
        }
    }
    Ok(SpanningTree { root, parent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{gen_fixture, gen_random_triangulation, Fixture};

    fn run_both(g: &PlaneGraph) -> (CdsCertificate, CdsCertificate) {
        let a = better_greedy(g, EngineMode::Incremental).unwrap();
        let b = better_greedy(g, EngineMode::Reference).unwrap();
        (a, b)
    }

    #[test]
    fn k4_single_vertex() {
        let g = gen_fixture(Fixture::K4).unwrap();
        for algo in [Algo::Simple, Algo::Better] {
            let cert = match algo {
                Algo::Simple => simple_greedy(&g, EngineMode::Incremental).unwrap(),
                Algo::Better => better_greedy(&g, EngineMode::Incremental).unwrap(),
            };
            assert_eq!(cert.x.len(), 1, "{algo:?}");
            assert!(verify_certificate(&g, &cert).ok(), "{algo:?}");
        }
        assert_eq!(better_bound(4), 1);
        assert_eq!(simple_bound(4), 1);
    }

    #[test]
    fn triangle_single_vertex() {
        let g = gen_fixture(Fixture::Triangle).unwrap();
        let cert = better_greedy(&g, EngineMode::Incremental).unwrap();
        assert_eq!(cert.x, vec![0]);
        assert!(verify_certificate(&g, &cert).ok());
        let cert = simple_greedy(&g, EngineMode::Incremental).unwrap();
        assert_eq!(cert.x, vec![0]);
        assert!(verify_certificate(&g, &cert).ok());
    }

    #[test]
    fn nested_triangles_better() {
        let g = gen_fixture(Fixture::NestedTriangles(3)).unwrap();
        let cert = better_greedy(&g, EngineMode::Incremental).unwrap();
        assert!(cert.x.len() <= better_bound(9), "{:?}", cert.x);
        assert!(verify_certificate(&g, &cert).ok());
        assert!(step_accounting_violations(&cert).is_empty());
        let (min, _) = oracle::min_cds_bruteforce(&g).unwrap();
        assert!(cert.x.len() >= min);
    }

    #[test]
    fn nested_triangles_simple() {
        let g = gen_fixture(Fixture::NestedTriangles(3)).unwrap();
        let cert = simple_greedy(&g, EngineMode::Incremental).unwrap();
        assert!(cert.x.len() <= simple_bound(9));
        assert!(verify_certificate(&g, &cert).ok());
    }

    #[test]
    fn octahedron_is_two_critical_instance() {
        let g = gen_fixture(Fixture::Octahedron).unwrap();
        let cert = better_greedy(&g, EngineMode::Incremental).unwrap();
        // goes straight to bg5
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.steps[0].kind, StepKind::Bg5);
        assert_eq!(cert.x.len(), 2);
        assert!(verify_certificate(&g, &cert).ok());
    }

    #[test]
    fn goldner_harary_runs() {
        let g = gen_fixture(Fixture::GoldnerHarary).unwrap();
        let cert = better_greedy(&g, EngineMode::Incremental).unwrap();
        assert!(verify_certificate(&g, &cert).ok());
        assert!(cert.x.len() <= better_bound(11));
        let (min, _) = oracle::min_cds_bruteforce(&g).unwrap();
        assert!(cert.x.len() >= min);
    }

    #[test]
    fn engines_agree_on_small_corpus() {
        for seed in 0..20u64 {
            let n = 5 + (seed as usize % 20);
            let g = gen_random_triangulation(n, seed, 2 * n).unwrap();
            let (a, b) = run_both(&g);
            assert_eq!(a.x, b.x, "X differs on n={n} seed={seed}");
            assert_eq!(
                a.steps.len(),
                b.steps.len(),
                "step count differs on n={n} seed={seed}"
            );
            for (sa, sb) in a.steps.iter().zip(&b.steps) {
                assert_eq!(sa.kind, sb.kind, "kind differs n={n} seed={seed}");
                assert_eq!(sa.delta, sb.delta, "delta differs n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn bounds_hold_on_random_corpus() {
        for seed in 0..10u64 {
            let n = 30 + 13 * (seed as usize);
            let g = gen_random_triangulation(n, seed, n).unwrap();
            let cert = better_greedy(&g, EngineMode::Incremental).unwrap();
            assert!(
                cert.x.len() <= better_bound(n),
                "better bound violated n={n} seed={seed}: {} > {}",
                cert.x.len(),
                better_bound(n)
            );
            assert!(verify_certificate(&g, &cert).ok(), "n={n} seed={seed}");
            assert!(
                step_accounting_violations(&cert).is_empty(),
                "accounting n={n} seed={seed}"
            );
            let simple = simple_greedy(&g, EngineMode::Incremental).unwrap();
            assert!(simple.x.len() <= simple_bound(n));
            assert!(verify_certificate(&g, &simple).ok());
        }
    }

    #[test]
    fn spanning_tree_leaves() {
        let g = gen_fixture(Fixture::K4).unwrap();
        let t = spanning_tree_from_cds(&g, &[0]).unwrap();
        assert_eq!(t.leaf_count(&g), 3);
        // disconnected X rejected
        let g2 = gen_fixture(Fixture::Octahedron).unwrap();
        assert!(matches!(
            spanning_tree_from_cds(&g2, &[0, 5]),
            Err(GraphError::NotCds(_))
        ));
    }

    #[test]
    fn tampered_certificate_fails() {
        let g = gen_fixture(Fixture::NestedTriangles(3)).unwrap();
        let mut cert = better_greedy(&g, EngineMode::Incremental).unwrap();
        // claim an inner vertex as the first delta
        if let Some(step) = cert.steps.first_mut() {
            step.delta = vec![8];
        }
        cert.x = {
            let mut v = cert.x.clone();
            v.push(8);
            v.sort_unstable();
            v.dedup();
            v
        };
        assert!(!verify_certificate(&g, &cert).ok());
    }

    #[test]
    fn whole_vertex_set_verifies_partially() {
        let g = gen_fixture(Fixture::K4).unwrap();
        let all: Vec<u32> = g.alive_vertices().collect();
        assert!(oracle::is_dominating(&g, &all));
        assert!(oracle::is_connected_induced(&g, &all));
    }

    #[test]
    fn certificate_json_roundtrip() {
        let g = gen_fixture(Fixture::NestedTriangles(4)).unwrap();
        let cert = better_greedy(&g, EngineMode::Incremental).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"algo\":\"better\""));
        assert!(json.contains("\"X\""));
        let back: CdsCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back.x, cert.x);
        assert!(verify_certificate(&g, &back).ok());
    }
}
