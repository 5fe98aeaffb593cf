//! Orientable surface triangulations: rotation systems without a designated
//! outer face, Euler genus from face tracing, slicing along a planarizing
//! subgraph, planar completion, and lifting of connected dominating sets.

use crate::error::{GraphError, Result};
use crate::greedy::{self, EngineMode};
use crate::plane::{PlaneGraph, VertexId};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

/// Rotation system on an orientable surface. Darts are indexed by flattening
/// the per-vertex rotation lists; twins are matched by edge.
pub struct SurfaceMap {
    pub rotations: Vec<Vec<VertexId>>,
    off: Vec<u32>,
    target: Vec<u32>,
    origin: Vec<u32>,
    twin: Vec<u32>,
}

impl SurfaceMap {
    pub fn from_rotation(n: usize, rotations: &[Vec<VertexId>]) -> Result<SurfaceMap> {
        if rotations.len() != n {
            return Err(GraphError::BadParam(format!(
                "expected {n} rotation lists, got {}",
                rotations.len()
            )));
        }
        let mut off = vec![0u32; n + 1];
        for v in 0..n {
            off[v + 1] = off[v] + rotations[v].len() as u32;
        }
        let nd = off[n] as usize;
        let mut target = vec![0u32; nd];
        let mut origin = vec![0u32; nd];
        let mut twin = vec![u32::MAX; nd];
        let mut pending: HashMap<(u32, u32), u32> = HashMap::new();
        for v in 0..n {
            for (i, &w) in rotations[v].iter().enumerate() {
                let d = off[v] + i as u32;
                if w as usize >= n {
                    return Err(GraphError::BadParam(format!("neighbor {w} out of range")));
                }
                if w as usize == v {
                    return Err(GraphError::NotSimple(format!("self-loop at {v}")));
                }
                target[d as usize] = w;
                origin[d as usize] = v as u32;
                let key = ((v as u32).min(w), (v as u32).max(w));
                match pending.remove(&key) {
                    None => {
                        if pending.insert(key, d).is_some() {
                            return Err(GraphError::NotSimple(format!("parallel edge {v}-{w}")));
                        }
                    }
                    Some(t) => {
                        if origin[t as usize] != w {
                            return Err(GraphError::NotSimple(format!("parallel edge {v}-{w}")));
                        }
                        twin[d as usize] = t;
                        twin[t as usize] = d;
                    }
                }
            }
        }
        if let Some(((u, w), _)) = pending.into_iter().next() {
            return Err(GraphError::InconsistentRotation(u, w));
        }
        let map = SurfaceMap {
            rotations: rotations.to_vec(),
            off,
            target,
            origin,
            twin,
        };
        if map.component_count() != 1 {
            return Err(GraphError::Disconnected);
        }
        Ok(map)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.target.len() / 2
    }

    fn dart_count(&self) -> usize {
        self.target.len()
    }

    fn rot_next(&self, d: u32) -> u32 {
        let v = self.origin[d as usize] as usize;
        let i = d - self.off[v];
        let k = self.rotations[v].len() as u32;
        self.off[v] + (i + 1) % k
    }

    fn face_next(&self, d: u32) -> u32 {
        self.rot_next(self.twin[d as usize])
    }

    fn component_count(&self) -> usize {
        let n = self.vertex_count();
        if n == 0 {
            return 0;
        }
        let mut seen = vec![false; n];
        let mut comps = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            comps += 1;
            seen[s] = true;
            let mut stack = vec![s as u32];
            while let Some(v) = stack.pop() {
                for &w in &self.rotations[v as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        comps
    }

    /// Face orbits (each face as a dart cycle).
    pub fn faces(&self) -> Vec<Vec<u32>> {
        let nd = self.dart_count();
        let mut seen = vec![false; nd];
        let mut faces = Vec::new();
        for d0 in 0..nd as u32 {
            if seen[d0 as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = d0;
            loop {
                seen[d as usize] = true;
                orbit.push(d);
                d = self.face_next(d);
                if d == d0 {
                    break;
                }
            }
            faces.push(orbit);
        }
        faces
    }

    /// Euler genus 2 − V + E − F (even for orientable rotation systems).
    pub fn euler_genus(&self) -> Result<usize> {
        if self.component_count() != 1 {
            return Err(GraphError::Disconnected);
        }
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.faces().len() as i64;
        let genus = 2 - v + e - f;
        debug_assert!(genus >= 0 && genus % 2 == 0);
        Ok(genus as usize)
    }

    /// Every face a 3-cycle.
    pub fn is_surface_triangulation(&self) -> bool {
        self.faces().iter().all(|f| f.len() == 3)
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.rotations[v as usize]
    }

    pub fn has_edge(&self, u: VertexId, w: VertexId) -> bool {
        self.rotations[u as usize].contains(&w)
    }
}

// ----------------------------------------------------------------------
// Fixtures
// ----------------------------------------------------------------------

/// Triangulated k×k torus grid: vertex (i,j) joins (i,j±1), (i±1,j),
/// (i+1,j+1) and (i−1,j−1); Euler genus 2.
pub fn gen_torus_grid(k: usize) -> Result<SurfaceMap> {
    if k < 3 {
        return Err(GraphError::BadParam("torus grid needs k >= 3".into()));
    }
    let id = |i: usize, j: usize| ((i % k) * k + (j % k)) as u32;
    let rotations: Vec<Vec<u32>> = (0..k * k)
        .map(|v| {
            let (i, j) = (v / k, v % k);
            vec![
                id(i, j + 1),
                id(i + 1, j + 1),
                id(i + 1, j),
                id(i, j + k - 1),
                id(i + k - 1, j + k - 1),
                id(i + k - 1, j),
            ]
        })
        .collect();
    SurfaceMap::from_rotation(k * k, &rotations)
}

/// K7 embedded on the torus: each vertex sees v+1, v+3, v+2, v+6, v+4, v+5.
pub fn gen_k7_torus() -> Result<SurfaceMap> {
    let rotations: Vec<Vec<u32>> = (0..7u32)
        .map(|v| [1u32, 3, 2, 6, 4, 5].iter().map(|&o| (v + o) % 7).collect())
        .collect();
    SurfaceMap::from_rotation(7, &rotations)
}

// ----------------------------------------------------------------------
// Surface file format
// ----------------------------------------------------------------------

/// Same rotation format as the planar one minus `outer:`, plus the header
/// comment `# genus-check: auto`.
pub fn parse_surface(text: &str) -> Result<SurfaceMap> {
    let mut n: Option<usize> = None;
    let mut rotations: Vec<Vec<u32>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if n.is_none() {
            let v = line.parse::<usize>().map_err(|_| GraphError::ParseError {
                line: lineno,
                msg: format!("expected vertex count, got {line:?}"),
            })?;
            n = Some(v);
            rotations = vec![Vec::new(); v];
            continue;
        }
        let (head, rest) = line.split_once(':').ok_or(GraphError::ParseError {
            line: lineno,
            msg: "expected `v: ...`".into(),
        })?;
        let v = head
            .trim()
            .parse::<usize>()
            .map_err(|_| GraphError::ParseError {
                line: lineno,
                msg: format!("bad vertex id {head:?}"),
            })?;
        if v >= rotations.len() {
            return Err(GraphError::ParseError {
                line: lineno,
                msg: format!("vertex {v} out of range"),
            });
        }
        rotations[v] = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>().map_err(|_| GraphError::ParseError {
                    line: lineno,
                    msg: format!("bad vertex id {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
    }
    let n = n.ok_or(GraphError::ParseError {
        line: 0,
        msg: "empty input".into(),
    })?;
    SurfaceMap::from_rotation(n, &rotations)
}

pub fn serialize_surface(map: &SurfaceMap) -> String {
    let mut out = String::from("# genus-check: auto\n");
    let _ = writeln!(out, "{}", map.vertex_count());
    for (v, rot) in map.rotations.iter().enumerate() {
        let ids: Vec<String> = rot.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(out, "{v}: {}", ids.join(" "));
    }
    out
}

// ----------------------------------------------------------------------
// Slicing
// ----------------------------------------------------------------------

/// A multigraph rotation structure used between slicing and planar
/// completion (copies of cut edges may be parallel until holes collapse).
struct MultiMap {
    target: Vec<u32>,
    twin: Vec<u32>,
    rot_next: Vec<u32>,
    rot_prev: Vec<u32>,
    first: Vec<u32>,
    origin: Vec<u32>,
    n: usize,
    dead: Vec<bool>,
}

impl MultiMap {
    fn darts_around(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let start = self.first[v as usize];
        if start == u32::MAX {
            return out;
        }
        let mut d = start;
        loop {
            out.push(d);
            d = self.rot_next[d as usize];
            if d == start {
                break;
            }
        }
        out
    }
    fn face_next(&self, d: u32) -> u32 {
        self.rot_next[self.twin[d as usize] as usize]
    }
    fn has_edge(&self, u: u32, w: u32) -> bool {
        self.darts_around(u)
            .iter()
            .any(|&d| self.target[d as usize] == w)
    }
    fn faces(&self) -> Vec<Vec<u32>> {
        let nd = self.target.len();
        let mut seen = vec![false; nd];
        let mut out = Vec::new();
        for d0 in 0..nd as u32 {
            if self.dead[d0 as usize] || seen[d0 as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = d0;
            loop {
                seen[d as usize] = true;
                orbit.push(d);
                d = self.face_next(d);
                if d == d0 {
                    break;
                }
            }
            out.push(orbit);
        }
        out
    }
    /// Insert a chord from origin(da) to origin(dc), where da and dc are
    /// consecutive-but-one darts on a hole orbit (da, db, dc): the chord cuts
    /// off the triangle (origin da, origin db, origin dc). Returns the new
    /// hole-side dart.
    fn insert_chord(&mut self, da: u32, db: u32) -> u32 {
        let a = self.origin[da as usize];
        let c = self.target[db as usize];
        let c_in = self.twin[db as usize]; // dart c -> origin(db)
        let p = self.target.len() as u32; // a -> c, hole side
        let q = p + 1; // c -> a, triangle side
        self.target.push(c);
        self.target.push(a);
        self.origin.push(a);
        self.origin.push(c);
        self.twin.push(q);
        self.twin.push(p);
        self.dead.push(false);
        self.dead.push(false);
        // at a: insert p immediately before da (rot_prev side)
        let prev_a = self.rot_prev[da as usize];
        self.rot_next.push(da); // rot_next[p] = da
        self.rot_prev.push(prev_a);
        self.rot_next[prev_a as usize] = p;
        self.rot_prev[da as usize] = p;
        // at c: insert q immediately after c_in
        let next_c = self.rot_next[c_in as usize];
        self.rot_next.push(next_c); // rot_next[q] = next_c
        self.rot_prev.push(c_in);
        self.rot_next[c_in as usize] = q;
        self.rot_prev[next_c as usize] = q;
        p
    }
    /// Add a hub vertex inside a hole given by its dart orbit; the hub joins
    /// every hole vertex. Returns the hub id.
    fn insert_hub(&mut self, hole: &[u32]) -> u32 {
        let hub = self.n as u32;
        self.n += 1;
        self.first.push(u32::MAX);
        let k = hole.len();
        let mut spokes_out: Vec<u32> = Vec::with_capacity(k);
        // one spoke per hole corner, in orbit order
        for &d in hole {
            let v = self.origin[d as usize];
            let p = self.target.len() as u32; // hub -> v
            let q = p + 1; // v -> hub
            self.target.push(v);
            self.target.push(hub);
            self.origin.push(hub);
            self.origin.push(v);
            self.twin.push(q);
            self.twin.push(p);
            self.dead.push(false);
            self.dead.push(false);
            // at v: insert q immediately before d (the hole corner)
            let prev = self.rot_prev[d as usize];
            self.rot_next.push(0); // placeholder for p, fixed below
            self.rot_prev.push(0);
            self.rot_next[q as usize] = d;
            self.rot_prev[q as usize] = prev;
            self.rot_next[prev as usize] = q;
            self.rot_prev[d as usize] = q;
            spokes_out.push(p);
        }
        // hub rotation: spokes in REVERSE orbit order close the triangles
        for i in 0..k {
            let p = spokes_out[i];
            let prev_spoke = spokes_out[(i + 1) % k];
            self.rot_next[prev_spoke as usize] = p;
            self.rot_prev[p as usize] = prev_spoke;
        }
        self.first[hub as usize] = spokes_out[0];
        hub
    }
    /// Remove one edge of a parallel pair bounding a 2-gon hole.
    fn remove_edge(&mut self, d: u32) {
        let t = self.twin[d as usize];
        for e in [d, t] {
            let v = self.origin[e as usize] as usize;
            let next = self.rot_next[e as usize];
            let prev = self.rot_prev[e as usize];
            if next == e {
                self.first[v] = u32::MAX;
            } else {
                self.rot_next[prev as usize] = next;
                self.rot_prev[next as usize] = prev;
                if self.first[v] == e {
                    self.first[v] = next;
                }
            }
            self.dead[e as usize] = true;
        }
    }
    fn rotations(&self) -> Vec<Vec<u32>> {
        (0..self.n as u32)
            .map(|v| {
                self.darts_around(v)
                    .into_iter()
                    .map(|d| self.target[d as usize])
                    .collect()
            })
            .collect()
    }
}

/// The sliced map: vertex copies with their originals, plus the holes opened
/// along the cut subgraph.
pub struct SlicedMap {
    mm: MultiMap,
    /// original vertex id per copy
    pub vertex_origin: Vec<VertexId>,
    /// holes as vertex-copy walks (in face-orbit order)
    pub holes: Vec<Vec<u32>>,
    hole_darts: Vec<Vec<u32>>,
    pub genus: usize,
}

/// Cut the map open along the subgraph Z (given as an edge list): every
/// vertex v of Z splits into deg_Z(v) sector copies, every Z-edge doubles,
/// and at least one hole face opens. Copies on one hole boundary originate
/// from a single component of Z.
pub fn slice(map: &SurfaceMap, z_edges: &[(VertexId, VertexId)], require_planar: bool) -> Result<SlicedMap> {
    if z_edges.is_empty() {
        return Err(GraphError::NotSubgraph);
    }
    let mut zset: BTreeSet<(u32, u32)> = BTreeSet::new();
    for &(u, w) in z_edges {
        if !map.has_edge(u, w) {
            return Err(GraphError::NotSubgraph);
        }
        zset.insert((u.min(w), u.max(w)));
    }
    let is_z = |d: u32| -> bool {
        let u = map.origin[d as usize];
        let w = map.target[d as usize];
        zset.contains(&(u.min(w), u.max(w)))
    };
    let n = map.vertex_count();
    // sector copies
    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    enum Role {
        Only, // non-Z dart
        First,
        Last,
    }
    let mut copy_count = 0u32;
    let mut vertex_origin: Vec<u32> = Vec::new();
    // per original dart: copy owning (dart, role)
    let mut owner: HashMap<(u32, Role), u32> = HashMap::new();
    // per copy: the slot list in rotation order: (original dart, role)
    let mut slots: Vec<Vec<(u32, Role)>> = Vec::new();
    for v in 0..n as u32 {
        let rot: Vec<u32> = (map.off[v as usize]..map.off[v as usize + 1]).collect();
        let k = rot.len();
        let zpos: Vec<usize> = (0..k).filter(|&i| is_z(rot[i])).collect();
        if zpos.is_empty() {
            let c = copy_count;
            copy_count += 1;
            vertex_origin.push(v);
            let mut list = Vec::with_capacity(k);
            for &d in &rot {
                owner.insert((d, Role::Only), c);
                list.push((d, Role::Only));
            }
            slots.push(list);
            continue;
        }
        let t = zpos.len();
        for j in 0..t {
            let c = copy_count;
            copy_count += 1;
            vertex_origin.push(v);
            let start = zpos[j];
            let end = zpos[(j + 1) % t];
            let mut list = Vec::new();
            owner.insert((rot[start], Role::First), c);
            list.push((rot[start], Role::First));
            let mut i = (start + 1) % k;
            while i != end {
                owner.insert((rot[i], Role::Only), c);
                list.push((rot[i], Role::Only));
                i = (i + 1) % k;
            }
            owner.insert((rot[end], Role::Last), c);
            list.push((rot[end], Role::Last));
            slots.push(list);
        }
    }
    // allocate new darts: pair slots via edge keys
    let mut new_target: Vec<u32> = Vec::new();
    let mut new_origin: Vec<u32> = Vec::new();
    let mut new_twin: Vec<u32> = Vec::new();
    let mut slot_dart: HashMap<(u32, Role), u32> = HashMap::new();
    let mut first: Vec<u32> = vec![u32::MAX; copy_count as usize];
    let mut rot_next: Vec<u32> = Vec::new();
    let mut rot_prev: Vec<u32> = Vec::new();
    for (c, list) in slots.iter().enumerate() {
        let base = new_target.len() as u32;
        for (i, &(d, role)) in list.iter().enumerate() {
            let id = base + i as u32;
            slot_dart.insert((d, role), id);
            new_origin.push(c as u32);
            new_target.push(u32::MAX);
            new_twin.push(u32::MAX);
            rot_next.push(base + ((i + 1) % list.len()) as u32);
            rot_prev.push(base + ((i + list.len() - 1) % list.len()) as u32);
        }
        if !list.is_empty() {
            first[c] = base;
        }
    }
    // resolve targets and twins
    for (&(d, role), &id) in &slot_dart {
        let td = map.twin[d as usize];
        let (partner_role, partner_owner_role) = match role {
            Role::Only => (Role::Only, Role::Only),
            Role::First => (Role::Last, Role::Last),
            Role::Last => (Role::First, Role::First),
        };
        let _ = partner_owner_role;
        let partner = slot_dart[&(td, partner_role)];
        new_twin[id as usize] = partner;
        new_target[id as usize] = owner[&(td, partner_role)];
    }
    let mm = MultiMap {
        target: new_target,
        twin: new_twin,
        rot_next,
        rot_prev,
        first,
        origin: new_origin,
        n: copy_count as usize,
        dead: vec![false; slot_dart.len()],
    };
    // identify holes: faces that are not images of original faces
    let mut old_orbit_reps: BTreeSet<u32> = BTreeSet::new();
    {
        let nd = map.dart_count();
        let mut seen = vec![false; nd];
        for d0 in 0..nd as u32 {
            if seen[d0 as usize] {
                continue;
            }
            let mut d = d0;
            loop {
                seen[d as usize] = true;
                d = map.face_next(d);
                if d == d0 {
                    break;
                }
            }
            // image of d0 on the original face's side: non-Z darts map to
            // their unique slot; Z-darts to their Last slot
            let img = if is_z(d0) {
                slot_dart[&(d0, Role::Last)]
            } else {
                slot_dart[&(d0, Role::Only)]
            };
            old_orbit_reps.insert(img);
        }
    }
    let faces = mm.faces();
    let mut holes = Vec::new();
    let mut hole_darts = Vec::new();
    let mut face_count_old = 0usize;
    for orbit in &faces {
        if orbit.iter().any(|d| old_orbit_reps.contains(d)) {
            face_count_old += 1;
        } else {
            holes.push(orbit.iter().map(|&d| mm.origin[d as usize]).collect());
            hole_darts.push(orbit.clone());
        }
    }
    // Euler genus of the sliced map (components of copies may exceed 1 only
    // for disconnecting Z, which a cut graph is not)
    let v = copy_count as i64;
    let e = (mm.target.len() / 2) as i64;
    let f = (face_count_old + holes.len()) as i64;
    let comps = {
        // component count over copies
        let mut seen = vec![false; copy_count as usize];
        let mut comps = 0;
        for s in 0..copy_count {
            if seen[s as usize] {
                continue;
            }
            comps += 1;
            seen[s as usize] = true;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for d in mm.darts_around(x) {
                    let w = mm.target[d as usize];
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        comps
    };
    let genus_i = 2 * comps - (v - e + f);
    debug_assert!(genus_i >= 0);
    let genus = genus_i as usize;
    if require_planar && genus != 0 {
        return Err(GraphError::NotPlanarizing(genus));
    }
    // key slicing property: one Z-component per hole
    debug_assert!({
        let mut dsu: BTreeMap<u32, u32> = BTreeMap::new();
        fn find(dsu: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
            let p = *dsu.get(&x).unwrap_or(&x);
            if p == x {
                x
            } else {
                let r = find(dsu, p);
                dsu.insert(x, r);
                r
            }
        }
        for &(u, w) in &zset {
            let (a, b) = (find(&mut dsu, u), find(&mut dsu, w));
            if a != b {
                dsu.insert(a, b);
            }
        }
        holes.iter().all(|hole: &Vec<u32>| {
            let mut roots: BTreeSet<u32> = BTreeSet::new();
            for &c in hole {
                roots.insert(find(&mut dsu, vertex_origin[c as usize]));
            }
            roots.len() == 1
        })
    });
    Ok(SlicedMap {
        mm,
        vertex_origin,
        holes,
        hole_darts,
        genus,
    })
}

/// Tree–cotree planarizing subgraph: with a BFS spanning tree T and a dual
/// spanning tree avoiding T, exactly 2g "leftover" edges remain; Z is the
/// union of their fundamental cycles through T, which carries a homology
/// basis, so slicing along it yields a genus-0 map. No size guarantee.
/// For a planar map the single lowest-id edge is returned.
pub fn naive_planarizer(map: &SurfaceMap) -> Result<Vec<(VertexId, VertexId)>> {
    let genus = map.euler_genus()?;
    let n = map.vertex_count();
    if genus == 0 {
        let v = (0..n as u32)
            .find(|&v| !map.rotations[v as usize].is_empty())
            .ok_or(GraphError::NotSubgraph)?;
        let w = map.rotations[v as usize][0];
        return Ok(vec![(v.min(w), v.max(w))]);
    }
    // primal BFS tree, remembering parents for fundamental cycles
    let mut tree: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut parent = vec![u32::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    parent[0] = 0;
    let mut queue = std::collections::VecDeque::from([0u32]);
    while let Some(v) = queue.pop_front() {
        let mut nbrs = map.rotations[v as usize].clone();
        nbrs.sort_unstable();
        for w in nbrs {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = v;
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    // dual spanning tree over faces, crossing only non-tree edges
    let faces = map.faces();
    let mut face_of = vec![u32::MAX; map.dart_count()];
    for (i, f) in faces.iter().enumerate() {
        for &d in f {
            face_of[d as usize] = i as u32;
        }
    }
    let mut cotree: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut fseen = vec![false; faces.len()];
    fseen[0] = true;
    let mut fqueue = std::collections::VecDeque::from([0u32]);
    while let Some(fi) = fqueue.pop_front() {
        for &d in &faces[fi as usize] {
            let u = map.origin[d as usize];
            let w = map.target[d as usize];
            let key = (u.min(w), u.max(w));
            if tree.contains(&key) {
                continue;
            }
            let other = face_of[map.twin[d as usize] as usize];
            if !fseen[other as usize] {
                fseen[other as usize] = true;
                cotree.insert(key);
                fqueue.push_back(other);
            }
        }
    }
    // leftover edges: neither in the tree nor in the cotree; their
    // fundamental cycles through T form the cut system
    let mut z: BTreeSet<(u32, u32)> = BTreeSet::new();
    let tree_path_to_root = |mut v: u32, z: &mut BTreeSet<(u32, u32)>| {
        let mut path = Vec::new();
        while parent[v as usize] != v {
            let p = parent[v as usize];
            path.push((v.min(p), v.max(p)));
            v = p;
        }
        // add edges until the first one already present (shared root path)
        for e in path {
            z.insert(e);
        }
    };
    for v in 0..n as u32 {
        for &w in &map.rotations[v as usize] {
            if v < w {
                let key = (v, w);
                if !tree.contains(&key) && !cotree.contains(&key) {
                    z.insert(key);
                    tree_path_to_root(v, &mut z);
                    tree_path_to_root(w, &mut z);
                }
            }
        }
    }
    let mut z: Vec<(u32, u32)> = z.into_iter().collect();
    z.sort_unstable();
    Ok(z)
}

/// Planar completion of a sliced map: collapse 2-gon holes, ear-clip the
/// rest (hub fallback when no simple ear exists), keep the largest hole as
/// the outer face. Returns the triangulation, the original id per vertex
/// (None for inserted hubs), and the number of added edges.
pub struct CompletedPlanar {
    pub graph: PlaneGraph,
    pub vertex_origin: Vec<Option<VertexId>>,
    pub added_edges: usize,
    pub hole_of_added_edge: Vec<(VertexId, VertexId, usize)>,
}

pub fn complete_to_triangulation(sliced: SlicedMap) -> Result<CompletedPlanar> {
    if sliced.genus != 0 {
        return Err(GraphError::NotPlanarizing(sliced.genus));
    }
    let mut mm = sliced.mm;
    let mut origin: Vec<Option<u32>> = sliced.vertex_origin.iter().map(|&v| Some(v)).collect();
    let mut added = 0usize;
    let mut added_list: Vec<(u32, u32, usize)> = Vec::new();
    // largest hole last (kept as outer face)
    let mut order: Vec<usize> = (0..sliced.hole_darts.len()).collect();
    order.sort_by_key(|&i| sliced.hole_darts[i].len());
    let outer_idx = *order.last().expect("slicing opens at least one hole");
    for &hi in &order {
        let is_outer = hi == outer_idx;
        let mut hole: Vec<u32> = sliced.hole_darts[hi].clone();
        if hole.len() == 2 {
            // parallel pair from slicing an isolated Z-edge: merge back
            mm.remove_edge(hole[0]);
            continue;
        }
        let stop_len = if is_outer { 3 } else { 3 };
        // ear-clip down to a triangle; a 3-hole is already a face
        'clip: while hole.len() > stop_len {
            let k = hole.len();
            for i in 0..k {
                let da = hole[i];
                let db = hole[(i + 1) % k];
                let a = mm.origin[da as usize];
                let b = mm.origin[db as usize];
                let c = mm.target[db as usize];
                if a == c || a == b || b == c || mm.has_edge(a, c) {
                    continue;
                }
                let chord = mm.insert_chord(da, db);
                added += 1;
                added_list.push((a, c, hi));
                let mut next: Vec<u32> = Vec::with_capacity(k - 1);
                for (j, &d) in hole.iter().enumerate() {
                    if j == i {
                        next.push(chord);
                    } else if j == (i + 1) % k {
                        continue;
                    } else {
                        next.push(d);
                    }
                }
                hole = next;
                continue 'clip;
            }
            // no simple ear: insert a hub joined to the whole hole
            let hub = mm.insert_hub(&hole);
            origin.push(None);
            added += hole.len();
            for &d in &hole {
                added_list.push((mm.origin[d as usize], hub, hi));
            }
            hole.clear();
            break;
        }
    }
    // export and validate as a plane graph rooted at the outer hole
    let rotations = mm.rotations();
    // after triangulation the outer hole orbit shrank to a triangle; rescan
    // for itsske remaining face by tracing from one of its surviving darts
    let outer_walk: Vec<u32> = {
        let d0 = sliced.hole_darts[outer_idx]
            .iter()
            .copied()
            .find(|&d| !mm.dead[d as usize])
            .ok_or_else(|| GraphError::AssertionFailed("outer hole vanished".into()))?;
        let mut walk = Vec::new();
        let mut d = d0;
        loop {
            walk.push(mm.origin[d as usize]);
            d = mm.face_next(d);
            if d == d0 {
                break;
            }
        }
        walk
    };
    let graph = PlaneGraph::build_from_rotation(mm.n, &rotations, &outer_walk)
        .map_err(|_| GraphError::CannotTriangulateSimply)?;
    Ok(CompletedPlanar {
        graph,
        vertex_origin: origin,
        added_edges: added,
        hole_of_added_edge: added_list,
    })
}

// ----------------------------------------------------------------------
// The lift
// ----------------------------------------------------------------------

pub struct SurfaceCds {
    pub x: Vec<VertexId>,
    pub z_vertices: Vec<VertexId>,
    pub planar_n: usize,
    pub planar_x_size: usize,
    pub genus: usize,
}

/// Connected dominating set of a surface triangulation: slice along a cut
/// graph Z, complete to a planar triangulation G', run the planar engine,
/// then lift X := (X' ∩ V(G)) ∪ V(Z). Planar maps fall through to the
/// planar engine directly.
pub fn surface_cds(map: &SurfaceMap) -> Result<SurfaceCds> {
    if !map.is_surface_triangulation() {
        return Err(GraphError::NotTriangulation("surface map".into()));
    }
    let genus = map.euler_genus()?;
    if genus == 0 {
        // already planar: root at any face and run the engine
        let faces = map.faces();
        let f0 = &faces[0];
        let walk: Vec<u32> = f0.iter().map(|&d| map.origin[d as usize]).collect();
        let g = PlaneGraph::build_from_rotation(map.vertex_count(), &map.rotations, &walk)?;
        let cert = greedy::better_greedy(&g, EngineMode::Incremental)?;
        return Ok(SurfaceCds {
            planar_n: map.vertex_count(),
            planar_x_size: cert.x.len(),
            x: cert.x,
            z_vertices: Vec::new(),
            genus,
        });
    }
    let z = naive_planarizer(map)?;
    let sliced = slice(map, &z, true)?;
    let completed = complete_to_triangulation(sliced)?;
    let cert = greedy::better_greedy(&completed.graph, EngineMode::Incremental)?;
    let mut x: BTreeSet<u32> = BTreeSet::new();
    for &v in &cert.x {
        if let Some(orig) = completed.vertex_origin[v as usize] {
            x.insert(orig);
        }
    }
    let mut z_vertices: BTreeSet<u32> = BTreeSet::new();
    for &(u, w) in &z {
        z_vertices.insert(u);
        z_vertices.insert(w);
    }
    x.extend(z_vertices.iter().copied());
    let x: Vec<u32> = x.into_iter().collect();
    // verify the lift literally on the surface graph
    if !surface_dominating(map, &x) {
        return Err(GraphError::AssertionFailed(
            "lifted set does not dominate the surface graph".into(),
        ));
    }
    if !surface_connected(map, &x) {
        return Err(GraphError::AssertionFailed(
            "lifted set is not connected on the surface graph".into(),
        ));
    }
    Ok(SurfaceCds {
        planar_n: completed.graph.vertex_count(),
        planar_x_size: cert.x.len(),
        x,
        z_vertices: z_vertices.into_iter().collect(),
        genus,
    })
}

pub fn surface_dominating(map: &SurfaceMap, x: &[VertexId]) -> bool {
    let mut in_x = vec![false; map.vertex_count()];
    for &v in x {
        in_x[v as usize] = true;
    }
    (0..map.vertex_count() as u32).all(|v| {
        in_x[v as usize]
            || map.rotations[v as usize]
                .iter()
                .any(|&w| in_x[w as usize])
    })
}

pub fn surface_connected(map: &SurfaceMap, x: &[VertexId]) -> bool {
    if x.is_empty() {
        return map.vertex_count() == 0;
    }
    let mut in_x = vec![false; map.vertex_count()];
    for &v in x {
        in_x[v as usize] = true;
    }
    let mut seen = vec![false; map.vertex_count()];
    seen[x[0] as usize] = true;
    let mut stack = vec![x[0]];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &map.rotations[v as usize] {
            if in_x[w as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == x.len()
}
