//! Deterministic fixtures, seeded random triangulations, and the text/JSON
//! rotation formats.
//!
//! Text format (one graph per file, `#` lines are comments):
//! ```text
//! n
//! v: w1 w2 ... wk      (clockwise rotation, one line per vertex)
//! outer: a b c ...
//! ```

use crate::error::{GraphError, Result};
use crate::plane::{PlaneGraph, VertexId};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    K4,
    Triangle,
    Octahedron,
    /// r-wheel: rim cycle v0..v_{r-1} plus a hub adjacent to all rim vertices.
    Wheel(u32),
    /// k pairwise-nested triangles joined ring-to-ring by the antiprism
    /// pattern; a triangulation on 3k vertices with 9k−6 edges.
    NestedTriangles(u32),
    GoldnerHarary,
}

pub fn gen_fixture(which: Fixture) -> Result<PlaneGraph> {
    match which {
        Fixture::Triangle => PlaneGraph::build_from_rotation(
            3,
            &[vec![1, 2], vec![0, 2], vec![0, 1]],
            &[0, 1, 2],
        ),
        Fixture::K4 => PlaneGraph::build_from_rotation(
            4,
            &[vec![2, 3, 1], vec![0, 3, 2], vec![1, 3, 0], vec![2, 1, 0]],
            &[0, 1, 2],
        ),
        Fixture::Octahedron => gen_fixture(Fixture::NestedTriangles(2)),
        Fixture::Wheel(r) => {
            if r < 3 {
                return Err(GraphError::BadParam("wheel needs r >= 3".into()));
            }
            let hub = r;
            let mut rot: Vec<Vec<u32>> = Vec::with_capacity(r as usize + 1);
            for i in 0..r {
                rot.push(vec![(i + 1) % r, hub, (i + r - 1) % r]);
            }
            rot.push((0..r).collect());
            let outer: Vec<u32> = (0..r).collect();
            PlaneGraph::build_from_rotation(r as usize + 1, &rot, &outer)
        }
        Fixture::NestedTriangles(k) => {
            if k < 1 {
                return Err(GraphError::BadParam("nested triangles need k >= 1".into()));
            }
            if k == 1 {
                return gen_fixture(Fixture::Triangle);
            }
            let k = k as usize;
            let id = |ring: usize, i: usize| (3 * ring + i % 3) as u32;
            let mut rot: Vec<Vec<u32>> = Vec::with_capacity(3 * k);
            for ring in 0..k {
                for i in 0..3 {
                    // ring vertex r_i joins ring-below vertices s_i and s_{i+1}
                    // and ring-above vertices a_i and a_{i-1}
                    let mut r = Vec::new();
                    if ring + 1 < k {
                        r.push(id(ring + 1, i)); // s_i
                        r.push(id(ring + 1, i + 1)); // s_{i+1}
                        r.push(id(ring, i + 1)); // r_{i+1}
                    } else {
                        // innermost ring: the central face replaces the s's
                        r.push(id(ring, i + 1));
                    }
                    if ring > 0 {
                        r.push(id(ring - 1, i)); // a_i
                        r.push(id(ring - 1, i + 2)); // a_{i-1}
                    }
                    r.push(id(ring, i + 2)); // r_{i-1}
                    rot.push(r);
                }
            }
            // clockwise rotations make the outer walk run 0,2,1
            PlaneGraph::build_from_rotation(3 * k, &rot, &[0, 2, 1])
        }
        Fixture::GoldnerHarary => {
            // Triangular bipyramid (apexes t=0, b=1, ring u0..u2 = 2,3,4)
            // with a vertex stacked into each of the six faces:
            // p_i = 5,6,7 in the upper faces, q_i = 8,9,10 in the lower.
            let t = 0u32;
            let b = 1u32;
            let u = [2u32, 3, 4];
            let p = [5u32, 6, 7];
            let q = [8u32, 9, 10];
            let rot: Vec<Vec<u32>> = vec![
                vec![u[0], p[2], u[2], p[1], u[1], p[0]],
                vec![u[0], q[0], u[1], q[1], u[2], q[2]],
                vec![t, p[0], u[1], q[0], b, q[2], u[2], p[2]],
                vec![t, p[1], u[2], q[1], b, q[0], u[0], p[0]],
                vec![t, p[2], u[0], q[2], b, q[1], u[1], p[1]],
                vec![t, u[1], u[0]],
                vec![t, u[2], u[1]],
                vec![t, u[0], u[2]],
                vec![b, u[0], u[1]],
                vec![b, u[1], u[2]],
                vec![b, u[2], u[0]],
            ];
            PlaneGraph::build_from_rotation(11, &rot, &[p[0], t, u[0]])
        }
    }
}

/// Seeded random triangulation: start from K4, insert n−4 vertices into
/// uniformly random inner faces (stacked/Apollonian growth), then apply
/// `flips` random diagonal flips, skipping outer edges and any flip that
/// would create a parallel edge. PRNG: ChaCha8 seeded with `seed`.
pub fn gen_random_triangulation(n: usize, seed: u64, flips: usize) -> Result<PlaneGraph> {
    if n < 4 {
        return Err(GraphError::BadParam("random triangulation needs n >= 4".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rot: Vec<Vec<u32>> = vec![
        vec![2, 3, 1],
        vec![0, 3, 2],
        vec![1, 3, 0],
        vec![2, 1, 0],
    ];
    // inner faces as corner triples in face-orbit order (a,b,c)
    let mut faces: Vec<[u32; 3]> = vec![[0, 1, 3], [1, 2, 3], [2, 0, 3]];
    // per-vertex rotations as Vec; position map not needed since we insert by
    // value scan (degrees stay small in expectation, and this is build-time).
    for v in 4..n as u32 {
        let fi = rng.random_range(0..faces.len());
        let [a, b, c] = faces[fi];
        // new vertex v inside face (a,b,c): rotation [a, c, b] (clockwise)
        rot.push(vec![a, c, b]);
        // at each corner x with incoming edge from p and outgoing to qn,
        // insert x->v right after x->p (p = previous corner in the face cycle)
        for (x, prev) in [(a, c), (b, a), (c, b)] {
            let rx = &mut rot[x as usize];
            let pos = rx.iter().position(|&w| w == prev).unwrap();
            rx.insert(pos + 1, v);
        }
        faces[fi] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([c, a, v]);
    }
    let mut g = PlaneGraph::build_from_rotation(n, &rot, &[0, 2, 1])?;
    // Diagonal flips on the finished graph.
    let m = g.edge_count();
    let mut ev = Vec::new();
    for _ in 0..flips {
        let pair = rng.random_range(0..m as u32);
        let d = 2 * pair;
        if !g.dart_is_alive(d) {
            continue;
        }
        if g.dart_is_outer(d) || g.dart_is_outer(PlaneGraph::twin(d)) {
            continue;
        }
        let u = g.origin(d);
        let v = g.target(d);
        // x = apex of face left of d, y = apex of face left of twin
        let x = g.target(g.face_next(d));
        let y = g.target(g.face_next(PlaneGraph::twin(d)));
        if x == y || g.has_edge(x, y) {
            continue;
        }
        flip_edge(&mut g, u, v, x, y, &mut ev)?;
    }
    debug_assert!(g.validate().is_ok());
    Ok(g)
}

/// Replace inner edge uv (with incident triangles uvx and vuy) by xy.
fn flip_edge(
    g: &mut PlaneGraph,
    u: VertexId,
    v: VertexId,
    x: VertexId,
    y: VertexId,
    ev: &mut Vec<crate::plane::MutEvent>,
) -> Result<()> {
    // Checked by caller: uv inner, x != y, xy absent. Deleting uv merges the
    // two triangles into an inner quad; re-triangulate it with xy. The quad's
    // outer boundary darts keep their flags, so we only need to re-insert.
    g.delete_edge(u, v, ev)?;
    // Insert edge xy: at x between x->v and x->u (clockwise: after x->v);
    // at y between y->u and y->v (after y->u).
    g.insert_edge_after(x, y, v, u)?;
    Ok(())
}

/// Parse the rotation text format.
pub fn parse(text: &str) -> Result<PlaneGraph> {
    let mut n: Option<usize> = None;
    let mut rotations: Vec<Vec<u32>> = Vec::new();
    let mut outer: Option<Vec<u32>> = None;
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
            msg: "expected `v: ...` or `outer: ...`".into(),
        })?;
        let ids: Vec<u32> = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>().map_err(|_| GraphError::ParseError {
                    line: lineno,
                    msg: format!("bad vertex id {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if head.trim() == "outer" {
            outer = Some(ids);
        } else {
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
            rotations[v] = ids;
        }
    }
    let n = n.ok_or(GraphError::ParseError {
        line: 0,
        msg: "empty input".into(),
    })?;
    let outer = outer.ok_or(GraphError::ParseError {
        line: 0,
        msg: "missing `outer:` line".into(),
    })?;
    PlaneGraph::build_from_rotation(n, &rotations, &outer)
}

/// Serialize to the rotation text format. Dead vertices are compacted away
/// (alive vertices are relabeled 0..k in ascending original order when any
/// deletion happened). `header` lines are emitted as comments.
pub fn serialize(g: &PlaneGraph, header: &[String]) -> String {
    let alive: Vec<u32> = g.alive_vertices().collect();
    let mut relabel = std::collections::HashMap::new();
    for (i, &v) in alive.iter().enumerate() {
        relabel.insert(v, i as u32);
    }
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "{}", alive.len());
    for &v in &alive {
        let nbrs: Vec<String> = g
            .neighbors(v)
            .into_iter()
            .map(|w| relabel[&w].to_string())
            .collect();
        let _ = writeln!(out, "{}: {}", relabel[&v], nbrs.join(" "));
    }
    let walks = g.outer_walks();
    // one outer line; callers serialize connected graphs
    let walk = walks.first().cloned().unwrap_or_default();
    let ids: Vec<String> = walk.iter().map(|w| relabel[w].to_string()).collect();
    let _ = writeln!(out, "outer: {}", ids.join(" "));
    out
}

#[derive(Serialize, Deserialize)]
pub struct RotationJson {
    pub n: usize,
    pub rotations: Vec<Vec<u32>>,
    pub outer: Vec<u32>,
}

pub fn to_json(g: &PlaneGraph) -> String {
    let alive: Vec<u32> = g.alive_vertices().collect();
    let mut relabel = std::collections::HashMap::new();
    for (i, &v) in alive.iter().enumerate() {
        relabel.insert(v, i as u32);
    }
    let doc = RotationJson {
        n: alive.len(),
        rotations: alive
            .iter()
            .map(|&v| g.neighbors(v).into_iter().map(|w| relabel[&w]).collect())
            .collect(),
        outer: g
            .outer_walks()
            .first()
            .map(|w| w.iter().map(|v| relabel[v]).collect())
            .unwrap_or_default(),
    };
    serde_json::to_string_pretty(&doc).unwrap()
}

pub fn from_json(text: &str) -> Result<PlaneGraph> {
    let doc: RotationJson = serde_json::from_str(text).map_err(|e| GraphError::ParseError {
        line: 0,
        msg: e.to_string(),
    })?;
    PlaneGraph::build_from_rotation(doc.n, &doc.rotations, &doc.outer)
}

/// DOT export for eyeballing; the embedding is lost.
pub fn to_dot(g: &PlaneGraph) -> String {
    let mut out = String::from("graph {\n");
    for v in g.alive_vertices() {
        let _ = writeln!(out, "  {v};");
    }
    for v in g.alive_vertices() {
        for w in g.neighbors(v) {
            if v < w {
                let _ = writeln!(out, "  {v} -- {w};");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Rotation system normalized for comparison: each vertex's cyclic list is
/// rotated to start at its smallest neighbor. Two graphs on the same labels
/// have equal fingerprints iff their embeddings agree.
pub fn rotation_fingerprint(g: &PlaneGraph) -> Vec<(u32, Vec<u32>)> {
    let mut out = Vec::new();
    for v in g.alive_vertices() {
        let nbrs = g.neighbors(v);
        let canon = if nbrs.is_empty() {
            nbrs
        } else {
            let k = nbrs.len();
            let min_pos = (0..k).min_by_key(|&i| nbrs[i]).unwrap();
            (0..k).map(|i| nbrs[(min_pos + i) % k]).collect()
        };
        out.push((v, canon));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goldner_harary_shape() {
        let g = gen_fixture(Fixture::GoldnerHarary).unwrap();
        assert_eq!(g.vertex_count(), 11);
        assert_eq!(g.edge_count(), 27);
        assert!(g.is_triangulation());
        assert!(g.is_near_triangulation());
        let min_deg = g.alive_vertices().map(|v| g.degree_of(v)).min().unwrap();
        assert_eq!(min_deg, 3);
    }

    #[test]
    fn wheel_shape() {
        let g = gen_fixture(Fixture::Wheel(4)).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert!(g.is_near_triangulation());
        assert!(!g.is_triangulation()); // outer face is a 4-gon
        let bc = g.classify_boundary();
        assert_eq!(bc.boundary.len(), 4);
        assert_eq!(bc.inner, vec![4]);
        // hub adjacent to all rim vertices
        assert_eq!(g.degree_of(4), 4);
        // rim inner degree 1, hub inner degree 0
        assert_eq!(g.inner_degree(0).unwrap(), 1);
        assert_eq!(g.inner_degree(4).unwrap(), 0);
    }

    #[test]
    fn nested_triangles_shape() {
        let g = gen_fixture(Fixture::NestedTriangles(3)).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 21);
        assert!(g.is_triangulation());
        // outermost-ring vertex sees 2 inner vertices
        assert_eq!(g.inner_degree(0).unwrap(), 2);
        // ring 1 strictly inside ring 0: the outer triangle contains 6
        assert_eq!(g.cycle_interior_count(0, 1, 2).unwrap(), 6);
        // middle triangle nests the innermost one
        assert_eq!(g.cycle_interior_count(3, 4, 5).unwrap(), 3);
    }

    #[test]
    fn octahedron_shape() {
        let g = gen_fixture(Fixture::Octahedron).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);
        assert!(g.is_triangulation());
        assert!(g.alive_vertices().all(|v| g.degree_of(v) == 4));
    }

    #[test]
    fn random_triangulation_determinism() {
        let a = gen_random_triangulation(100, 7, 0).unwrap();
        let b = gen_random_triangulation(100, 7, 0).unwrap();
        assert_eq!(rotation_fingerprint(&a), rotation_fingerprint(&b));
        assert_eq!(a.edge_count(), 3 * 100 - 6);
        assert!(a.is_triangulation());
    }

    #[test]
    fn random_triangulation_with_flips() {
        let g = gen_random_triangulation(1000, 1, 3000).unwrap();
        assert_eq!(g.edge_count(), 2994);
        assert!(g.is_triangulation());
        g.validate().unwrap();
        let h = gen_random_triangulation(1000, 1, 3000).unwrap();
        assert_eq!(rotation_fingerprint(&g), rotation_fingerprint(&h));
    }

    #[test]
    fn k4_is_only_4_vertex_triangulation() {
        let g = gen_random_triangulation(4, 99, 0).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn roundtrip_fixtures() {
        for f in [
            Fixture::K4,
            Fixture::Triangle,
            Fixture::Octahedron,
            Fixture::Wheel(5),
            Fixture::NestedTriangles(4),
            Fixture::GoldnerHarary,
        ] {
            let g = gen_fixture(f).unwrap();
            let text = serialize(&g, &[]);
            let h = parse(&text).unwrap();
            assert_eq!(rotation_fingerprint(&g), rotation_fingerprint(&h));
            let j = to_json(&g);
            let h2 = from_json(&j).unwrap();
            assert_eq!(rotation_fingerprint(&g), rotation_fingerprint(&h2));
        }
    }

    #[test]
    fn parse_missing_outer_fails() {
        let err = parse("3\n0: 1 2\n1: 0 2\n2: 0 1\n").unwrap_err();
        assert!(matches!(err, GraphError::ParseError { .. }));
    }
}
