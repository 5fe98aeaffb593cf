//! Critical and 2-critical graphs: recognition, the dominating set Δ for
//! critical remainders, and the three-set partition machinery used by the
//! final step of the greedy engine.
//!
//! A generalized near-triangulation H is critical when every boundary vertex
//! has inner degree at most 1, and 2-critical when boundary inner degrees are
//! at most 2, H−B(H) is critical, and H−B(H) has minimum degree 2.

use crate::error::{GraphError, Result};
use crate::plane::{PlaneGraph, VertexId};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeSetPartition {
    pub sets: [Vec<VertexId>; 3],
}

impl ThreeSetPartition {
    pub fn total_size(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }
}

/// All boundary inner-degrees <= 1.
pub fn is_critical(h: &PlaneGraph) -> Result<bool> {
    if !h.is_generalized_near_triangulation() {
        return Err(GraphError::NotGnt);
    }
    for v in h.alive_vertices() {
        if h.is_boundary(v) && h.inner_degree(v)? > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// In a critical graph every inner vertex is the single hub of its marked
/// face, adjacent to every face vertex, and marked faces share no vertices.
/// Asserts that structure, then picks the lowest-id neighbor per hub.
pub fn critical_delta(h: &PlaneGraph) -> Result<Vec<VertexId>> {
    if !is_critical(h)? {
        return Err(GraphError::NotCritical);
    }
    let mut delta = BTreeSet::new();
    let mut seen_face_vertex: BTreeSet<VertexId> = BTreeSet::new();
    for x in h.alive_vertices() {
        if h.is_boundary(x) {
            continue;
        }
        let nbrs = h.neighbors(x);
        if nbrs.iter().any(|&u| !h.is_boundary(u)) {
            return Err(GraphError::AssertionFailed(format!(
                "inner vertex {x} of a critical graph has an inner neighbor"
            )));
        }
        if nbrs.len() < 3 {
            return Err(GraphError::AssertionFailed(format!(
                "inner vertex {x} has fewer than 3 neighbors"
            )));
        }
        for &u in &nbrs {
            if !seen_face_vertex.insert(u) {
                return Err(GraphError::AssertionFailed(format!(
                    "boundary vertex {u} lies on two marked faces"
                )));
            }
        }
        delta.insert(*nbrs.iter().min().unwrap());
    }
    Ok(delta.into_iter().collect())
}

/// |B(H)| >= 3|I(H)| for critical graphs (checked literally).
pub fn critical_counts_hold(h: &PlaneGraph) -> bool {
    h.boundary_count() >= 3 * h.inner_count()
}

/// 2-C1: boundary inner degrees <= 2; 2-C2: H−B(H) critical;
/// 2-C3: H−B(H) has minimum degree >= 2.
pub fn is_two_critical(h: &PlaneGraph) -> Result<bool> {
    if !h.is_generalized_near_triangulation() {
        return Err(GraphError::NotGnt);
    }
    for v in h.alive_vertices() {
        if h.is_boundary(v) {
            if h.inner_degree(v)? > 2 {
                return Ok(false); // 2-C1
            }
        } else {
            let nbrs = h.neighbors(v);
            let inner_nbrs = nbrs.iter().filter(|&&w| h.is_inner(w)).count();
            if inner_nbrs < 2 {
                return Ok(false); // 2-C3
            }
            // 2-C2: a ring vertex (inner with a boundary neighbor) may have
            // at most one deep neighbor
            let on_ring = nbrs.iter().any(|&w| h.is_boundary(w));
            if on_ring {
                let deep_nbrs = nbrs
                    .iter()
                    .filter(|&&w| {
                        h.is_inner(w) && !h.neighbors(w).iter().any(|&u| h.is_boundary(u))
                    })
                    .count();
                if deep_nbrs > 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct TwoCriticalReport {
    pub boundary_size: usize,
    pub ring_size: usize,
    pub deep_size: usize,
}

/// Debug oracle for dom-minimal 2-critical graphs: every boundary vertex has
/// inner degree exactly 2, and |B(H)| >= |B(H−B(H))|.
pub fn two_critical_checks(h: &PlaneGraph) -> Result<TwoCriticalReport> {
    let mut ring = 0usize;
    let mut deep = 0usize;
    for v in h.alive_vertices() {
        if h.is_boundary(v) {
            let d = h.inner_degree(v)?;
            if d != 2 {
                return Err(GraphError::AssertionFailed(format!(
                    "boundary vertex {v} has inner degree {d}, expected 2"
                )));
            }
        } else if h.neighbors(v).iter().any(|&u| h.is_boundary(u)) {
            ring += 1;
        } else {
            deep += 1;
        }
    }
    if h.boundary_count() < ring {
        return Err(GraphError::AssertionFailed(format!(
            "|B(H)| = {} < |B(H-B(H))| = {ring}",
            h.boundary_count()
        )));
    }
    Ok(TwoCriticalReport {
        boundary_size: h.boundary_count(),
        ring_size: ring,
        deep_size: deep,
    })
}

// ----------------------------------------------------------------------
// Local component representation: adjacency over local labels 0..n, plus
// which local vertices lie on the component's own outer face.
// ----------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Comp {
    adj: Vec<Vec<u32>>,
    boundary: Vec<bool>,
}

impl Comp {
    fn n(&self) -> usize {
        self.adj.len()
    }
    fn from_graph(h: &PlaneGraph) -> (Comp, Vec<VertexId>) {
        let ids: Vec<VertexId> = h.alive_vertices().collect();
        let mut local = BTreeMap::new();
        for (i, &v) in ids.iter().enumerate() {
            local.insert(v, i as u32);
        }
        let adj = ids
            .iter()
            .map(|&v| h.neighbors(v).into_iter().map(|w| local[&w]).collect())
            .collect();
        let boundary = ids.iter().map(|&v| h.is_boundary(v)).collect();
        (Comp { adj, boundary }, ids)
    }
    /// Induced sub-component on `keep` (local labels), relabeled 0..k
    /// ascending. Returns the kept original labels.
    fn induced(&self, keep: &[u32]) -> (Comp, Vec<u32>) {
        let mut keep: Vec<u32> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut local = vec![u32::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                self.adj[v as usize]
                    .iter()
                    .copied()
                    .filter(|&w| local[w as usize] != u32::MAX)
                    .map(|w| local[w as usize])
                    .collect()
            })
            .collect();
        let boundary = keep.iter().map(|&v| self.boundary[v as usize]).collect();
        (Comp { adj, boundary }, keep)
    }
}

/// Wheel with >= 4 rim vertices: a unique hub adjacent to everything, all
/// others of degree 3 forming one cycle. Returns (hub, rim in cycle order
/// from the lowest rim id toward its smaller neighbor).
fn detect_wheel(c: &Comp) -> Option<(u32, Vec<u32>)> {
    let n = c.n();
    if n < 5 {
        return None; // W3 = K4 has no unique hub; treated as an odd wheel
    }
    let hubs: Vec<u32> = (0..n as u32)
        .filter(|&v| c.adj[v as usize].len() == n - 1)
        .collect();
    if hubs.len() != 1 {
        return None;
    }
    let hub = hubs[0];
    if (0..n as u32).any(|v| v != hub && c.adj[v as usize].len() != 3) {
        return None;
    }
    let start = (0..n as u32).find(|&v| v != hub).unwrap();
    let mut rim = vec![start];
    let first_nbrs: Vec<u32> = c.adj[start as usize]
        .iter()
        .copied()
        .filter(|&w| w != hub)
        .collect();
    if first_nbrs.len() != 2 {
        return None;
    }
    let mut prev = start;
    let mut cur = *first_nbrs.iter().min().unwrap();
    while cur != start {
        rim.push(cur);
        let next = c.adj[cur as usize]
            .iter()
            .copied()
            .find(|&w| w != hub && w != prev)?;
        prev = cur;
        cur = next;
    }
    if rim.len() != n - 1 {
        return None;
    }
    Some((hub, rim))
}

fn is_even_wheel(c: &Comp) -> bool {
    matches!(detect_wheel(c), Some((_, rim)) if rim.len() % 2 == 0)
}

/// Anchored protocol triple: [weak, strong1, strong2] where strong1 contains
/// the anchor, strong1 and strong2 dominate the whole subgraph, and weak
/// dominates everything except possibly the anchor.
type Triple = [Vec<u32>; 3];

const WEAK: usize = 0;
const STRONG1: usize = 1;
const STRONG2: usize = 2;

/// Even-wheel partition anchored at rim vertex `v`: strong1 = {v, hub},
/// strong2 = odd rim positions, weak = even rim positions except v.
fn wheel_partition_anchored(c: &Comp, v: u32) -> Result<Triple> {
    let (hub, rim) = detect_wheel(c).ok_or(GraphError::NotEvenWheel)?;
    if rim.len() % 2 != 0 {
        return Err(GraphError::NotEvenWheel);
    }
    let pos = rim
        .iter()
        .position(|&r| r == v)
        .ok_or_else(|| GraphError::BadParam(format!("{v} is not a rim vertex")))?;
    let k = rim.len();
    let rim_from_v: Vec<u32> = (0..k).map(|i| rim[(pos + i) % k]).collect();
    let strong1 = vec![v, hub];
    let strong2: Vec<u32> = (1..k).step_by(2).map(|i| rim_from_v[i]).collect();
    let weak: Vec<u32> = (2..k).step_by(2).map(|i| rim_from_v[i]).collect();
    Ok([weak, strong1, strong2])
}

/// Reorder a full partition (every class dominates) into the anchored
/// protocol: the anchor's class becomes strong1, the remaining classes
/// become strong2 and weak in index order.
fn normalize_anchor(full: Triple, anchor: u32) -> Triple {
    let ai = (0..3)
        .find(|&i| full[i].contains(&anchor))
        .expect("anchor must lie in some class");
    let others: Vec<usize> = (0..3).filter(|&i| i != ai).collect();
    let mut out: Triple = Default::default();
    out[STRONG1] = full[ai].clone();
    out[STRONG2] = full[others[0]].clone();
    out[WEAK] = full[others[1]].clone();
    out
}

/// Proper 3-coloring of a maximal outerplanar graph by repeatedly removing
/// the lowest-id degree-2 vertex. Returns a color per local vertex.
fn three_color_outerplanar(adj_in: &[Vec<u32>]) -> Result<Vec<u8>> {
    let n = adj_in.len();
    if n < 3 {
        return Err(GraphError::BadParam(
            "3-coloring needs at least 3 vertices".into(),
        ));
    }
    let mut adj: Vec<BTreeSet<u32>> = adj_in
        .iter()
        .map(|ns| ns.iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<u32> = (0..n as u32).collect();
    let mut deg2: BTreeSet<u32> = (0..n as u32)
        .filter(|&v| adj[v as usize].len() == 2)
        .collect();
    let mut ears: Vec<(u32, u32, u32)> = Vec::new();
    while alive.len() > 3 {
        let v = *deg2
            .iter()
            .next()
            .ok_or_else(|| GraphError::AssertionFailed("no degree-2 ear".into()))?;
        deg2.remove(&v);
        let ns: Vec<u32> = adj[v as usize].iter().copied().collect();
        let (a, b) = (ns[0], ns[1]);
        if !adj[a as usize].contains(&b) {
            return Err(GraphError::AssertionFailed(
                "ear neighbors not adjacent: not maximal outerplanar".into(),
            ));
        }
        ears.push((v, a, b));
        alive.remove(&v);
        for &u in &ns {
            adj[u as usize].remove(&v);
            if adj[u as usize].len() == 2 {
                deg2.insert(u);
            } else {
                deg2.remove(&u);
            }
        }
        adj[v as usize].clear();
    }
    let mut color = vec![u8::MAX; n];
    for (i, v) in alive.into_iter().enumerate() {
        color[v as usize] = i as u8;
    }
    for &(v, a, b) in ears.iter().rev() {
        debug_assert_ne!(color[a as usize], color[b as usize]);
        color[v as usize] = 3 - color[a as usize] - color[b as usize];
    }
    Ok(color)
}

/// Full partition of a biconnected critical component: odd wheels by the
/// explicit formula, outerplanar graphs by 3-coloring, and otherwise each
/// hub contracts into a chord-incident (degree >= 4) neighbor of its marked
/// face before 3-coloring the contracted maximal outerplanar graph.
fn biconnected_partition(c: &Comp) -> Result<Triple> {
    let n = c.n();
    if n < 3 {
        return Err(GraphError::BadParam("need at least 3 vertices".into()));
    }
    if is_even_wheel(c) {
        return Err(GraphError::IsEvenWheel);
    }
    let inner: Vec<u32> = (0..n as u32).filter(|&v| !c.boundary[v as usize]).collect();
    // odd wheel (including K4 = W3): one hub adjacent to all rim vertices
    if inner.len() == 1 && c.adj[inner[0] as usize].len() == n - 1 {
        let hub = inner[0];
        if (0..n as u32).all(|v| v == hub || c.adj[v as usize].len() == 3) {
            let rim_len = n - 1;
            debug_assert!(rim_len % 2 == 1, "even wheels rejected above");
            let start = (0..n as u32).find(|&v| v != hub).unwrap();
            let mut rim = vec![start];
            let mut prev = start;
            let mut cur = *c.adj[start as usize]
                .iter()
                .filter(|&&w| w != hub)
                .min()
                .unwrap();
            while cur != start {
                rim.push(cur);
                let next = c.adj[cur as usize]
                    .iter()
                    .copied()
                    .find(|&w| w != hub && w != prev)
                    .unwrap();
                prev = cur;
                cur = next;
            }
            let x0 = vec![start, hub];
            let x1: Vec<u32> = (1..rim_len).step_by(2).map(|i| rim[i]).collect();
            let x2: Vec<u32> = (2..rim_len).step_by(2).map(|i| rim[i]).collect();
            return Ok([x0, x1, x2]);
        }
    }
    if inner.is_empty() {
        let color = three_color_outerplanar(&c.adj)?;
        let mut sets: Triple = Default::default();
        for v in 0..n as u32 {
            sets[color[v as usize] as usize].push(v);
        }
        return Ok(sets);
    }
    // contraction of each hub into a chord-incident neighbor
    let mut o_adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    for v in 0..n as u32 {
        if c.boundary[v as usize] {
            for &w in &c.adj[v as usize] {
                if c.boundary[w as usize] {
                    o_adj[v as usize].insert(w);
                }
            }
        }
    }
    let mut target = vec![u32::MAX; n];
    for &x in &inner {
        let v = c.adj[x as usize]
            .iter()
            .copied()
            .filter(|&u| c.adj[u as usize].len() >= 4)
            .min()
            .ok_or_else(|| {
                GraphError::AssertionFailed(format!("hub {x} has no chord-incident neighbor"))
            })?;
        target[x as usize] = v;
        for &u in &c.adj[x as usize] {
            if u != v {
                o_adj[v as usize].insert(u);
                o_adj[u as usize].insert(v);
            }
        }
    }
    let bverts: Vec<u32> = (0..n as u32).filter(|&v| c.boundary[v as usize]).collect();
    let mut local = vec![u32::MAX; n];
    for (i, &v) in bverts.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let sub_adj: Vec<Vec<u32>> = bverts
        .iter()
        .map(|&v| o_adj[v as usize].iter().map(|&w| local[w as usize]).collect())
        .collect();
    let color = three_color_outerplanar(&sub_adj)?;
    let mut sets: Triple = Default::default();
    for (i, &v) in bverts.iter().enumerate() {
        sets[color[i] as usize].push(v);
    }
    for &x in &inner {
        let v = target[x as usize];
        sets[color[local[v as usize] as usize] as usize].push(x);
    }
    for s in sets.iter_mut() {
        s.sort_unstable();
    }
    Ok(sets)
}

/// Biconnected components over the residual `alive` mask (iterative lowpoint
/// DFS). Returns blocks as local vertex lists plus cut-vertex flags.
fn blocks_of(c: &Comp, alive: &[bool]) -> (Vec<Vec<u32>>, Vec<bool>) {
    let n = c.n();
    let mut num = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut parent = vec![u32::MAX; n];
    let mut is_cut = vec![false; n];
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut edge_stack: Vec<(u32, u32)> = Vec::new();
    let mut timer = 0u32;
    for root in 0..n as u32 {
        if !alive[root as usize] || num[root as usize] != u32::MAX {
            continue;
        }
        if !c.adj[root as usize].iter().any(|&w| alive[w as usize]) {
            num[root as usize] = timer;
            timer += 1;
            blocks.push(vec![root]);
            continue;
        }
        num[root as usize] = timer;
        low[root as usize] = timer;
        timer += 1;
        let mut root_children = 0usize;
        let mut stack: Vec<(u32, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx < c.adj[v as usize].len() {
                let w = c.adj[v as usize][*idx];
                *idx += 1;
                if !alive[w as usize] || w == parent[v as usize] {
                    continue;
                }
                if num[w as usize] == u32::MAX {
                    parent[w as usize] = v;
                    edge_stack.push((v, w));
                    num[w as usize] = timer;
                    low[w as usize] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, 0));
                } else if num[w as usize] < num[v as usize] {
                    edge_stack.push((v, w));
                    low[v as usize] = low[v as usize].min(num[w as usize]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _)) = stack.last() {
                    low[u as usize] = low[u as usize].min(low[v as usize]);
                    if low[v as usize] >= num[u as usize] {
                        if u != root {
                            is_cut[u as usize] = true;
                        }
                        let mut verts = BTreeSet::new();
                        while let Some(&(a, b)) = edge_stack.last() {
                            edge_stack.pop();
                            verts.insert(a);
                            verts.insert(b);
                            if (a, b) == (u, v) {
                                break;
                            }
                        }
                        blocks.push(verts.into_iter().collect());
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root as usize] = true;
        }
    }
    (blocks, is_cut)
}

/// Solve a leaf block anchored at its cut vertex. Blocks of a critical
/// component with minimum degree 2 are biconnected with >= 3 vertices.
fn solve_block_anchored(c: &Comp, verts: &[u32], anchor: u32) -> Result<Triple> {
    let (sub, ids) = c.induced(verts);
    let local_anchor = ids
        .binary_search(&anchor)
        .map_err(|_| GraphError::AssertionFailed("anchor not in block".into()))?
        as u32;
    let triple = if is_even_wheel(&sub) {
        wheel_partition_anchored(&sub, local_anchor)?
    } else {
        normalize_anchor(biconnected_partition(&sub)?, local_anchor)
    };
    Ok(triple.map(|s| s.into_iter().map(|v| ids[v as usize]).collect()))
}

enum Frame {
    /// A solved leaf block with anchor = its cut vertex (strong1[0]).
    Block { triple: Triple, anchor: u32 },
    /// A peeled degree-one chain v = chain[0], v_1, ..., v_{r-1}; the far end
    /// v_r survives in the inner solution.
    Path { chain: Vec<u32>, v_r: u32 },
}

/// Partition of a connected critical component with minimum
/// degree 2 that is not an even wheel: three sets over local labels, each
/// dominating the whole component, boundary edges properly split.
fn connected_partition(c: &Comp) -> Result<Triple> {
    let n = c.n();
    if n < 3 {
        return Err(GraphError::BadParam("need at least 3 vertices".into()));
    }
    if is_even_wheel(c) {
        return Err(GraphError::IsEvenWheel);
    }
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| c.adj[v].len()).collect();
    let mut frames: Vec<Frame> = Vec::new();

    // Peel leaf blocks (and any degree-one chains they leave) until the
    // residual is a single block; solve that base anchored at the innermost
    // frame's anchor.
    let base: Triple = loop {
        let (blocks, is_cut) = blocks_of(c, &alive);
        if blocks.len() <= 1 {
            let live: Vec<u32> = (0..n as u32).filter(|&v| alive[v as usize]).collect();
            let (sub, ids) = c.induced(&live);
            let inner_anchor = frames.last().map(|f| match f {
                Frame::Block { anchor, .. } => *anchor,
                Frame::Path { v_r, .. } => *v_r,
            });
            match inner_anchor {
                None => {
                    // plain biconnected component
                    return biconnected_partition(&sub).map(|t| {
                        t.map(|s| s.into_iter().map(|v| ids[v as usize]).collect())
                    });
                }
                Some(anchor) => {
                    let la = ids.binary_search(&anchor).map_err(|_| {
                        GraphError::AssertionFailed("base anchor vanished".into())
                    })? as u32;
                    let triple = if is_even_wheel(&sub) {
                        wheel_partition_anchored(&sub, la)?
                    } else {
                        normalize_anchor(biconnected_partition(&sub)?, la)
                    };
                    break triple.map(|s| s.into_iter().map(|v| ids[v as usize]).collect());
                }
            }
        }
        let leaf_blocks: Vec<&Vec<u32>> = blocks
            .iter()
            .filter(|b| b.iter().filter(|&&v| is_cut[v as usize]).count() <= 1)
            .collect();
        let block: Vec<u32> = (*leaf_blocks
            .iter()
            .min_by_key(|b| b.iter().min().copied())
            .expect("a block tree has leaves"))
        .clone();
        let cut: u32 = *block
            .iter()
            .find(|&&v| is_cut[v as usize])
            .ok_or_else(|| GraphError::AssertionFailed("leaf block without cut vertex".into()))?;
        let triple = solve_block_anchored(c, &block, cut)?;
        frames.push(Frame::Block {
            triple,
            anchor: cut,
        });
        for &u in &block {
            if u == cut {
                continue;
            }
            alive[u as usize] = false;
            for &w in &c.adj[u as usize] {
                if alive[w as usize] {
                    deg[w as usize] -= 1;
                }
            }
        }
        deg[cut as usize] = c.adj[cut as usize]
            .iter()
            .filter(|&&w| alive[w as usize])
            .count();
        if deg[cut as usize] == 1 {
            // maximal chain of degree-2 vertices out of the cut vertex
            let mut chain = vec![cut];
            let mut prev = u32::MAX;
            let mut cur = cut;
            let v_r = loop {
                let next = c.adj[cur as usize]
                    .iter()
                    .copied()
                    .find(|&w| alive[w as usize] && w != prev)
                    .expect("chain must continue in a min-degree-2 component");
                if deg[next as usize] == 2 {
                    chain.push(next);
                    prev = cur;
                    cur = next;
                } else {
                    break next;
                }
            };
            for &u in &chain {
                alive[u as usize] = false;
                for &w in &c.adj[u as usize] {
                    if alive[w as usize] {
                        deg[w as usize] -= 1;
                    }
                }
            }
            frames.push(Frame::Path { chain, v_r });
        }
    };

    // Merge back, innermost frame first. The running state is an anchored
    // triple at the frame's own anchor, and block merges yield a partition
    // where every class dominates the merged subgraph.
    let mut state = base;
    while let Some(frame) = frames.pop() {
        state = match frame {
            Frame::Path { chain, v_r } => {
                // state is anchored at v_r. Place it so that strong1 plays
                // X_{(r-1) mod 3}, strong2 plays X_{r mod 3}, weak plays
                // X_{(r-2) mod 3}; then the chain joins X1 (i ≡ 0 including
                // v = chain[0]), X2 (i ≡ 1), X0 (i ≡ 2).
                debug_assert!(state[STRONG1].contains(&v_r));
                let r = chain.len();
                let mut cls: Triple = Default::default();
                cls[(r + 2) % 3] = state[STRONG1].clone();
                cls[r % 3] = state[STRONG2].clone();
                cls[(r + 1) % 3] = state[WEAK].clone();
                for (i, &u) in chain.iter().enumerate() {
                    match i % 3 {
                        0 => cls[1].push(u),
                        1 => cls[2].push(u),
                        _ => cls[0].push(u),
                    }
                }
                // the result is anchored at v = chain[0]: X1 ∋ v and X1, X2
                // dominate while X0 may miss v
                let [x0, x1, x2] = cls;
                [x0, x1, x2]
            }
            Frame::Block { triple, anchor } => {
                // state must be anchored at this block's cut vertex
                let inner = if state[STRONG1].contains(&anchor) {
                    state
                } else {
                    // previous merge produced a full partition
                    normalize_anchor(state, anchor)
                };
                let mut x0 = triple[WEAK].clone();
                x0.extend(inner[STRONG2].iter().copied());
                let mut x1 = triple[STRONG1].clone();
                x1.extend(inner[STRONG1].iter().copied().filter(|&u| u != anchor));
                let mut x2 = triple[STRONG2].clone();
                x2.extend(inner[WEAK].iter().copied());
                // all three classes dominate the merged subgraph; keep the
                // anchored layout (anchor in x1) for the next frame out
                [x0, x1, x2]
            }
        };
    }
    for s in state.iter_mut() {
        s.sort_unstable();
    }
    Ok(state)
}

// ----------------------------------------------------------------------
// Public operations over embedded graphs
// ----------------------------------------------------------------------

fn lift_partition(sets: Triple, ids: &[VertexId]) -> ThreeSetPartition {
    let map = |s: Vec<u32>| -> Vec<VertexId> {
        let mut out: Vec<VertexId> = s.into_iter().map(|u| ids[u as usize]).collect();
        out.sort_unstable();
        out
    };
    let [a, b, c] = sets;
    ThreeSetPartition {
        sets: [map(a), map(b), map(c)],
    }
}

/// Partition an even wheel anchored at rim vertex `v`: sets[1] = {v, hub},
/// sets[2] = odd rim, sets[0] = even rim minus v (dominates all but v).
pub fn partition_even_wheel(h: &PlaneGraph, v: VertexId) -> Result<ThreeSetPartition> {
    let (c, ids) = Comp::from_graph(h);
    let local = ids.binary_search(&v).map_err(|_| GraphError::DeadVertex(v))? as u32;
    let [weak, s1, s2] = wheel_partition_anchored(&c, local)?;
    Ok(lift_partition([weak, s1, s2], &ids))
}

/// Partition a biconnected critical graph that is not an even wheel.
pub fn partition_biconnected_critical(h: &PlaneGraph) -> Result<ThreeSetPartition> {
    let (c, ids) = Comp::from_graph(h);
    if c.n() >= 2 {
        let alive = vec![true; c.n()];
        let (blocks, _) = blocks_of(&c, &alive);
        if blocks.len() != 1 {
            return Err(GraphError::NotBiconnected);
        }
    }
    if is_even_wheel(&c) {
        return Err(GraphError::IsEvenWheel);
    }
    let sets = biconnected_partition(&c)?;
    Ok(lift_partition(sets, &ids))
}

/// Partition a connected critical graph with minimum degree 2 that is not an
/// even wheel: three sets, each dominating the whole graph, boundary edges
/// properly split.
pub fn partition_connected_critical(h: &PlaneGraph) -> Result<ThreeSetPartition> {
    let (c, ids) = Comp::from_graph(h);
    if c.n() == 0 {
        return Err(GraphError::BadParam("empty graph".into()));
    }
    if h.component_count() != 1 {
        return Err(GraphError::Disconnected);
    }
    if let Some(v) = (0..c.n()).find(|&v| c.adj[v].len() == 1) {
        return Err(GraphError::HasDegreeOneVertex(ids[v]));
    }
    if is_even_wheel(&c) {
        return Err(GraphError::IsEvenWheel);
    }
    let sets = connected_partition(&c)?;
    Ok(lift_partition(sets, &ids))
}

/// Embedded inner components of H−B(H), with original-id maps. Boundary
/// flags of each component mark B(H−B(H)).
pub struct InnerComponent {
    pub graph: PlaneGraph,
    pub orig: Vec<VertexId>,
}

pub fn inner_components(h: &PlaneGraph) -> Result<Vec<InnerComponent>> {
    let inner: Vec<VertexId> = h.alive_vertices().filter(|&v| h.is_inner(v)).collect();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let in_inner: BTreeSet<VertexId> = inner.iter().copied().collect();
    let mut comp_of: BTreeMap<VertexId, u32> = BTreeMap::new();
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for &v in &inner {
        if comp_of.contains_key(&v) {
            continue;
        }
        let id = comps.len() as u32;
        let mut stack = vec![v];
        let mut members = Vec::new();
        comp_of.insert(v, id);
        while let Some(u) = stack.pop() {
            members.push(u);
            for w in h.neighbors(u) {
                if in_inner.contains(&w) && !comp_of.contains_key(&w) {
                    comp_of.insert(w, id);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    let mut out = Vec::new();
    for members in comps {
        if members.len() == 1 {
            out.push(InnerComponent {
                graph: PlaneGraph::edgeless(1),
                orig: members,
            });
            continue;
        }
        let mut local = BTreeMap::new();
        for (i, &v) in members.iter().enumerate() {
            local.insert(v, i as u32);
        }
        let rotations: Vec<Vec<u32>> = members
            .iter()
            .map(|&v| {
                h.neighbors(v)
                    .into_iter()
                    .filter_map(|w| local.get(&w).copied())
                    .collect()
            })
            .collect();
        // The component's outer face lies left of the first inner-target dart
        // clockwise from a dart (w -> b) into the boundary of H.
        let (w, b) = members
            .iter()
            .find_map(|&w| {
                h.neighbors(w)
                    .into_iter()
                    .find(|&u| h.is_boundary(u))
                    .map(|b| (w, b))
            })
            .ok_or_else(|| {
                GraphError::AssertionFailed(
                    "inner component with no ring vertex (nested component)".into(),
                )
            })?;
        let walk = {
            let rot = h.neighbors(w);
            let pos = rot.iter().position(|&u| u == b).unwrap();
            let k = rot.len();
            let first = (1..=k)
                .map(|i| rot[(pos + i) % k])
                .find(|u| in_inner.contains(u))
                .expect("ring vertices keep inner neighbors under 2-C3");
            let sub_next = |from: VertexId, to: VertexId| -> (VertexId, VertexId) {
                let rot_to = h.neighbors(to);
                let p = rot_to.iter().position(|&u| u == from).unwrap();
                let kk = rot_to.len();
                let nxt = (1..=kk)
                    .map(|i| rot_to[(p + i) % kk])
                    .find(|u| in_inner.contains(u))
                    .unwrap();
                (to, nxt)
            };
            let mut walk = vec![local[&w]];
            let (mut cf, mut ct) = (w, first);
            loop {
                let (nf, nt) = sub_next(cf, ct);
                if (nf, nt) == (w, first) {
                    break;
                }
                walk.push(local[&nf]);
                cf = nf;
                ct = nt;
            }
            walk
        };
        let g = PlaneGraph::build_from_rotation(members.len(), &rotations, &walk)?;
        debug_assert!(members.iter().enumerate().all(|(i, &v)| {
            let ring = h.neighbors(v).iter().any(|&u| h.is_boundary(u));
            ring == g.is_boundary(i as u32)
        }));
        out.push(InnerComponent {
            graph: g,
            orig: members,
        });
    }
    Ok(out)
}

/// Three sets over V(H) for a 2-critical H: each dominates I(H), every
/// component of H[X_i] contains a boundary vertex, total size at most
/// 2|B(H−B(H))| + |I(H−B(H))|. Even-wheel components contribute
/// {link, rim, hub} to all three sets; other components contribute their
/// full partition plus one boundary link per ring member.
pub fn three_sets(h: &PlaneGraph) -> Result<ThreeSetPartition> {
    if !is_two_critical(h)? {
        return Err(GraphError::NotTwoCritical);
    }
    let comps = inner_components(h)?;
    let mut sets: [BTreeSet<VertexId>; 3] = Default::default();
    for comp in &comps {
        let g = &comp.graph;
        let (c, local_ids) = Comp::from_graph(g);
        let min_boundary_link = |orig_w: VertexId| -> VertexId {
            h.neighbors(orig_w)
                .into_iter()
                .filter(|&u| h.is_boundary(u))
                .min()
                .expect("ring vertex has a boundary neighbor")
        };
        if is_even_wheel(&c) {
            let (hub, rim) = detect_wheel(&c).unwrap();
            let hub_orig = comp.orig[local_ids[hub as usize] as usize];
            let w_orig = rim
                .iter()
                .map(|&r| comp.orig[local_ids[r as usize] as usize])
                .min()
                .unwrap();
            let v = min_boundary_link(w_orig);
            for s in sets.iter_mut() {
                s.insert(v);
                s.insert(w_orig);
                s.insert(hub_orig);
            }
        } else {
            let full = connected_partition(&c)?;
            for (i, class) in full.into_iter().enumerate() {
                for u in class {
                    let orig = comp.orig[local_ids[u as usize] as usize];
                    sets[i].insert(orig);
                    if g.is_boundary(local_ids[u as usize]) {
                        sets[i].insert(min_boundary_link(orig));
                    }
                }
            }
        }
    }
    let partition = ThreeSetPartition {
        sets: [
            sets[0].iter().copied().collect(),
            sets[1].iter().copied().collect(),
            sets[2].iter().copied().collect(),
        ],
    };
    debug_assert!(three_sets_invariants_hold(h, &partition));
    Ok(partition)
}

/// The three invariants of the partition, checked literally.
pub fn three_sets_invariants_hold(h: &PlaneGraph, p: &ThreeSetPartition) -> bool {
    let ring_count = h
        .alive_vertices()
        .filter(|&v| h.is_inner(v) && h.neighbors(v).iter().any(|&u| h.is_boundary(u)))
        .count();
    let deep_count = h.inner_count() - ring_count;
    if p.total_size() > 2 * ring_count + deep_count {
        return false;
    }
    for class in &p.sets {
        let set: BTreeSet<VertexId> = class.iter().copied().collect();
        for v in h.alive_vertices().filter(|&v| h.is_inner(v)) {
            if !set.contains(&v) && !h.neighbors(v).iter().any(|u| set.contains(u)) {
                return false;
            }
        }
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for &s in &set {
            if seen.contains(&s) {
                continue;
            }
            let mut stack = vec![s];
            let mut touches = false;
            seen.insert(s);
            while let Some(u) = stack.pop() {
                if h.is_boundary(u) {
                    touches = true;
                }
                for w in h.neighbors(u) {
                    if set.contains(&w) && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            if !touches {
                return false;
            }
        }
    }
    true
}

/// The final delta for a 2-critical remainder: the smallest of the three
/// sets; 3|X| <= 2|B(H−B(H))| + |I(H−B(H))|.
pub fn two_critical_delta(h: &PlaneGraph) -> Result<Vec<VertexId>> {
    let p = three_sets(h)?;
    Ok(p.sets
        .iter()
        .enumerate()
        .min_by_key(|(i, s)| (s.len(), *i))
        .map(|(_, s)| s.clone())
        .unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{gen_fixture, Fixture};
    use crate::oracle;

    #[test]
    fn wheels_are_critical() {
        let w5 = gen_fixture(Fixture::Wheel(5)).unwrap();
        assert!(is_critical(&w5).unwrap());
        let k4 = gen_fixture(Fixture::K4).unwrap();
        assert!(is_critical(&k4).unwrap());
        let oct = gen_fixture(Fixture::Octahedron).unwrap();
        assert!(!is_critical(&oct).unwrap());
    }

    #[test]
    fn critical_delta_wheel() {
        let w5 = gen_fixture(Fixture::Wheel(5)).unwrap();
        let d = critical_delta(&w5).unwrap();
        assert_eq!(d.len(), 1);
        assert!(oracle::is_dominating(&w5, &[d[0], 5]));
        assert!(critical_counts_hold(&w5));
    }

    #[test]
    fn critical_delta_empty_inner() {
        // edge-maximal outerplanar fan: no inner vertices, Δ = ∅
        let fan = PlaneGraph::build_from_rotation(
            5,
            &[
                vec![1, 2, 3, 4],
                vec![2, 0],
                vec![3, 0, 1],
                vec![4, 0, 2],
                vec![0, 3],
            ],
            &[0, 1, 2, 3, 4],
        )
        .unwrap();
        assert!(is_critical(&fan).unwrap());
        assert_eq!(critical_delta(&fan).unwrap(), Vec::<u32>::new());
    }

    #[test]
    fn two_k4s_in_shell() {
        // critical GNT with two marked faces: triangles abc and def joined by
        // the edge c-d, each with a hub inside
        let g = PlaneGraph::build_from_rotation(
            8,
            &[
                vec![1, 6, 2],
                vec![2, 6, 0],
                vec![0, 6, 1, 3],
                vec![4, 7, 5, 2],
                vec![5, 7, 3],
                vec![3, 7, 4],
                vec![0, 1, 2],
                vec![3, 4, 5],
            ],
            &[0, 1, 2, 3, 4, 5, 3, 2],
        )
        .unwrap();
        assert!(g.is_generalized_near_triangulation());
        assert!(is_critical(&g).unwrap());
        let d = critical_delta(&g).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().any(|&v| g.has_edge(v, 6)));
        assert!(d.iter().any(|&v| g.has_edge(v, 7)));
    }

    #[test]
    fn octahedron_is_two_critical() {
        let oct = gen_fixture(Fixture::Octahedron).unwrap();
        assert!(is_two_critical(&oct).unwrap());
        let k4 = gen_fixture(Fixture::K4).unwrap();
        assert!(!is_two_critical(&k4).unwrap());
        let w5 = gen_fixture(Fixture::Wheel(5)).unwrap();
        assert!(!is_two_critical(&w5).unwrap());
    }

    #[test]
    fn two_critical_checks_work() {
        let oct = gen_fixture(Fixture::Octahedron).unwrap();
        let rep = two_critical_checks(&oct).unwrap();
        assert_eq!(rep.boundary_size, 3);
        assert_eq!(rep.ring_size, 3);
        assert_eq!(rep.deep_size, 0);
        let w5 = gen_fixture(Fixture::Wheel(5)).unwrap();
        assert!(matches!(
            two_critical_checks(&w5),
            Err(GraphError::AssertionFailed(_))
        ));
    }

    #[test]
    fn even_wheel_partition() {
        let w4 = gen_fixture(Fixture::Wheel(4)).unwrap();
        let p = partition_even_wheel(&w4, 0).unwrap();
        assert_eq!(p.sets[1], vec![0, 4]);
        assert_eq!(p.sets[2], vec![1, 3]);
        assert_eq!(p.sets[0], vec![2]);
        assert!(oracle::is_dominating(&w4, &p.sets[1]));
        assert!(oracle::is_dominating(&w4, &p.sets[2]));
        for v in [1u32, 2, 3, 4] {
            assert!(
                p.sets[0].contains(&v) || p.sets[0].iter().any(|&u| w4.has_edge(u, v)),
                "X0 must dominate {v}"
            );
        }
        let w6 = gen_fixture(Fixture::Wheel(6)).unwrap();
        let p6 = partition_even_wheel(&w6, 0).unwrap();
        assert_eq!(p6.sets[0].len(), 2);
        assert_eq!(p6.sets[1].len(), 2);
        assert_eq!(p6.sets[2].len(), 3);
        for i in 0..6u32 {
            let j = (i + 1) % 6;
            let ci = (0..3).find(|&k| p6.sets[k].contains(&i)).unwrap();
            let cj = (0..3).find(|&k| p6.sets[k].contains(&j)).unwrap();
            assert_ne!(ci, cj);
        }
        assert!(matches!(
            partition_even_wheel(&gen_fixture(Fixture::Wheel(5)).unwrap(), 0),
            Err(GraphError::NotEvenWheel)
        ));
    }

    #[test]
    fn odd_wheel_biconnected_partition() {
        let k4 = gen_fixture(Fixture::K4).unwrap();
        let p = partition_biconnected_critical(&k4).unwrap();
        for s in &p.sets {
            assert!(oracle::is_dominating(&k4, s), "{s:?} must dominate K4");
        }
        assert_eq!(p.total_size(), 4);
        let w5 = gen_fixture(Fixture::Wheel(5)).unwrap();
        let p5 = partition_biconnected_critical(&w5).unwrap();
        for s in &p5.sets {
            assert!(oracle::is_dominating(&w5, s), "{s:?} must dominate W5");
        }
        assert!(matches!(
            partition_biconnected_critical(&gen_fixture(Fixture::Wheel(4)).unwrap()),
            Err(GraphError::IsEvenWheel)
        ));
    }

    #[test]
    fn outerplanar_partition() {
        let fan = PlaneGraph::build_from_rotation(
            5,
            &[
                vec![1, 2, 3, 4],
                vec![2, 0],
                vec![3, 0, 1],
                vec![4, 0, 2],
                vec![0, 3],
            ],
            &[0, 1, 2, 3, 4],
        )
        .unwrap();
        let p = partition_biconnected_critical(&fan).unwrap();
        for s in &p.sets {
            assert!(oracle::is_dominating(&fan, s));
        }
        for v in 0..5u32 {
            for w in fan.neighbors(v) {
                let cv = (0..3).find(|&k| p.sets[k].contains(&v)).unwrap();
                let cw = (0..3).find(|&k| p.sets[k].contains(&w)).unwrap();
                assert_ne!(cv, cw, "edge {v}-{w} monochromatic");
            }
        }
    }

    #[test]
    fn connected_partition_triangle() {
        let t = gen_fixture(Fixture::Triangle).unwrap();
        let p = partition_connected_critical(&t).unwrap();
        for s in &p.sets {
            assert_eq!(s.len(), 1);
            assert!(oracle::is_dominating(&t, s));
        }
    }

    #[test]
    fn connected_partition_two_triangles_cut_vertex() {
        // two triangles sharing the cut vertex 2
        let g = PlaneGraph::build_from_rotation(
            5,
            &[
                vec![1, 2],
                vec![2, 0],
                vec![0, 1, 3, 4],
                vec![4, 2],
                vec![2, 3],
            ],
            &[0, 1, 2, 3, 4, 2],
        )
        .unwrap();
        let p = partition_connected_critical(&g).unwrap();
        for s in &p.sets {
            assert!(oracle::is_dominating(&g, s), "{s:?} must dominate");
        }
        for v in 0..5u32 {
            for w in g.neighbors(v) {
                let cv = (0..3).find(|&k| p.sets[k].contains(&v)).unwrap();
                let cw = (0..3).find(|&k| p.sets[k].contains(&w)).unwrap();
                assert_ne!(cv, cw);
            }
        }
    }

    #[test]
    fn connected_partition_wheel_glued_to_triangle() {
        // K4 (= W3 on {0,1,2} + hub 3) glued to triangle {0,4,5} at vertex 0
        let g = PlaneGraph::build_from_rotation(
            6,
            &[
                vec![2, 3, 1, 4, 5],
                vec![0, 3, 2],
                vec![1, 3, 0],
                vec![2, 1, 0],
                vec![5, 0],
                vec![0, 4],
            ],
            &[0, 4, 5, 0, 2, 1],
        )
        .unwrap();
        assert!(g.is_generalized_near_triangulation());
        assert!(is_critical(&g).unwrap());
        let p = partition_connected_critical(&g).unwrap();
        for s in &p.sets {
            assert!(oracle::is_dominating(&g, s), "{s:?} must dominate");
        }
    }

    #[test]
    fn three_sets_octahedron() {
        let oct = gen_fixture(Fixture::Octahedron).unwrap();
        let p = three_sets(&oct).unwrap();
        assert!(three_sets_invariants_hold(&oct, &p));
        assert!(p.total_size() <= 6);
        let x = two_critical_delta(&oct).unwrap();
        assert!(3 * x.len() <= 6);
        assert!(!x.is_empty());
    }

    #[test]
    fn three_sets_even_wheel_inner() {
        // W4 inner graph inside a 2-critical shell: contributes 9 total
        let h = two_critical_with_w4_inside();
        assert!(is_two_critical(&h).unwrap(), "fixture must be 2-critical");
        let p = three_sets(&h).unwrap();
        assert!(three_sets_invariants_hold(&h, &p));
        assert_eq!(p.total_size(), 9);
        let x = two_critical_delta(&h).unwrap();
        assert_eq!(x.len(), 3);
    }

    /// A 2-critical near-triangulation whose inner graph is W4: an outer
    /// 8-cycle shell triangulated onto the rim of the wheel. Rim vertex i is
    /// adjacent to shell vertices 2i, 2i+1, 2i+2 (mod 8); annulus faces are
    /// (2i, 2i+1, rim i), (2i+1, 2i+2, rim i), (2i+2, rim i, rim i+1).
    fn two_critical_with_w4_inside() -> PlaneGraph {
        let rim = |i: u32| i % 4;
        let shell = |j: u32| 5 + (j % 8);
        let mut rot: Vec<Vec<u32>> = Vec::new();
        for i in 0..4u32 {
            rot.push(vec![
                4,
                rim(i + 1),
                shell(2 * i + 2),
                shell(2 * i + 1),
                shell(2 * i),
                rim(i + 3),
            ]);
        }
        rot.push(vec![3, 2, 1, 0]); // hub
        for j in 0..8u32 {
            let m = j / 2;
            if j % 2 == 0 {
                rot.push(vec![shell(j + 7), rim(m + 3), rim(m), shell(j + 1)]);
            } else {
                rot.push(vec![shell(j + 7), rim(m), shell(j + 1)]);
            }
        }
        let outer: Vec<u32> = (0..8).map(shell).collect();
        match PlaneGraph::build_from_rotation(13, &rot, &outer) {
            Ok(g) => g,
            Err(e) => panic!("fixture construction failed: {e}"),
        }
    }
}
