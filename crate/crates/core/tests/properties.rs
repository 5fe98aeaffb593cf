//! Property tests over random triangulations and mutation sequences.

use proptest::prelude::*;
use tricds_core::fixtures::{
    gen_fixture, gen_random_triangulation, parse, rotation_fingerprint, serialize, Fixture,
};
use tricds_core::greedy::{
    better_bound, better_greedy, simple_bound, simple_greedy, verify_certificate, EngineMode,
};
use tricds_core::plane::PlaneGraph;
use tricds_core::reduce;

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    /// Generated triangulations validate, round-trip through the text
    /// format, and are deterministic in (n, seed, flips).
    #[test]
    fn generator_roundtrip(n in 4usize..60, seed in 0u64..1000, flips in 0usize..150) {
        let g = gen_random_triangulation(n, seed, flips).unwrap();
        prop_assert!(g.is_triangulation());
        prop_assert_eq!(g.edge_count(), 3 * n - 6);
        g.validate().unwrap();
        let h = parse(&serialize(&g, &[])).unwrap();
        prop_assert_eq!(rotation_fingerprint(&g), rotation_fingerprint(&h));
        let g2 = gen_random_triangulation(n, seed, flips).unwrap();
        prop_assert_eq!(rotation_fingerprint(&g), rotation_fingerprint(&g2));
    }

    /// Euler's formula and flag consistency survive arbitrary sequences of
    /// boundary-vertex and outer-edge deletions.
    #[test]
    fn mutation_fuzz(n in 5usize..40, seed in 0u64..500, ops in 1usize..25) {
        let mut g = gen_random_triangulation(n, seed, n).unwrap();
        let mut ev = Vec::new();
        let mut rng = seed;
        for _ in 0..ops {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let boundary: Vec<u32> = g.alive_vertices().filter(|&v| g.is_boundary(v)).collect();
            if boundary.is_empty() || g.vertex_count() <= 1 {
                break;
            }
            let v = boundary[(rng >> 33) as usize % boundary.len()];
            if rng % 2 == 0 {
                g.delete_vertex(v, &mut ev).unwrap();
            } else {
                // delete an outer edge at v when one exists
                let outer_nbr = g
                    .darts_around(v)
                    .into_iter()
                    .find(|&d| g.dart_is_outer(d) || g.dart_is_outer(PlaneGraph::twin(d)))
                    .map(|d| g.target(d));
                if let Some(w) = outer_nbr {
                    g.delete_edge(v, w, &mut ev).unwrap();
                }
            }
            g.validate().unwrap();
        }
        // classification stays consistent with the walks
        let bc = g.classify_boundary();
        prop_assert_eq!(bc.boundary.len() + bc.inner.len(), g.vertex_count());
    }

    /// Both engines emit verified certificates within their bounds.
    #[test]
    fn engine_bounds(n in 5usize..48, seed in 0u64..400) {
        let g = gen_random_triangulation(n, seed, 2 * n).unwrap();
        let better = better_greedy(&g, EngineMode::Incremental).unwrap();
        prop_assert!(better.x.len() <= better_bound(n));
        prop_assert!(verify_certificate(&g, &better).ok());
        let simple = simple_greedy(&g, EngineMode::Incremental).unwrap();
        prop_assert!(simple.x.len() <= simple_bound(n));
        prop_assert!(verify_certificate(&g, &simple).ok());
        // monotone progress: every step shrinks the working graph
        for s in &better.steps {
            prop_assert!(s.post_alive <= s.pre_alive);
        }
        prop_assert!(better.steps.len() <= n);
    }

    /// Reduction of a mutated near-triangulation dom-respects its input and
    /// is idempotent.
    #[test]
    fn reduce_respects(n in 6usize..40, seed in 0u64..300, cuts in 1usize..4) {
        let mut g = gen_random_triangulation(n, seed, n).unwrap();
        let mut ev = Vec::new();
        for _ in 0..cuts {
            let b = g.classify_boundary().boundary;
            if g.vertex_count() <= 4 || b.is_empty() {
                break;
            }
            g.delete_vertex(b[0], &mut ev).unwrap();
        }
        let (r, cert) = reduce::reduce(&g).unwrap();
        prop_assert!(reduce::verify_dom_respects(&r, &g, &cert));
        prop_assert_eq!(reduce::is_dom_minimal(&r).unwrap(), None);
        let (r2, _) = reduce::reduce(&r).unwrap();
        prop_assert_eq!(rotation_fingerprint(&r), rotation_fingerprint(&r2));
    }
}

/// Interior-cycle structure: a cycle with k >= 1 interior vertices gives all
/// three corners an interior neighbor; k >= 2 gives two corners at least two
/// interior neighbors each.
#[test]
fn cycle_interior_neighbor_structure() {
    let mut graphs = vec![
        gen_fixture(Fixture::K4).unwrap(),
        gen_fixture(Fixture::NestedTriangles(3)).unwrap(),
        gen_fixture(Fixture::NestedTriangles(5)).unwrap(),
        gen_fixture(Fixture::GoldnerHarary).unwrap(),
    ];
    for seed in 0..6u64 {
        graphs.push(gen_random_triangulation(9 + seed as usize, seed, 20).unwrap());
    }
    let mut cycles_with_interior = 0;
    for g in &graphs {
        // enumerate all triangles via edges and common neighbors
        let verts: Vec<u32> = g.alive_vertices().collect();
        for &x in &verts {
            for y in g.neighbors(x) {
                if y <= x {
                    continue;
                }
                for z in g.neighbors(y) {
                    if z <= y || !g.has_edge(z, x) {
                        continue;
                    }
                    let inside = g.cycle_interior_vertices(x, y, z).unwrap();
                    if inside.is_empty() {
                        continue;
                    }
                    cycles_with_interior += 1;
                    let inner_nbrs = |v: u32| {
                        g.neighbors(v)
                            .into_iter()
                            .filter(|w| inside.contains(w))
                            .count()
                    };
                    let counts = [inner_nbrs(x), inner_nbrs(y), inner_nbrs(z)];
                    assert!(
                        counts.iter().all(|&c| c >= 1),
                        "cycle {x},{y},{z}: corner without interior neighbor"
                    );
                    if inside.len() >= 2 {
                        assert!(
                            counts.iter().filter(|&&c| c >= 2).count() >= 2,
                            "cycle {x},{y},{z}: fewer than two corners with two interior neighbors"
                        );
                    }
                }
            }
        }
    }
    assert!(cycles_with_interior > 10, "corpus too thin");
}
