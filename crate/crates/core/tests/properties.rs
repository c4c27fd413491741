use optinet::catalog;
use optinet::{
    canonical_cut, centroid_and_rg, find_automorphisms, AutomorphismGroup, Cut, EdgeSet,
    Polyhedron, ShellGraph, Unfolder,
};
use proptest::prelude::*;
use std::sync::OnceLock;

/// Solids small enough that every property below runs in microseconds.
const SOLIDS: &[&str] = &[
    "tetrahedron",
    "cube",
    "octahedron",
    "dodecahedron",
    "icosahedron",
    "truncated-tetrahedron",
    "cuboctahedron",
    "truncated-octahedron",
    "snub-cube",
    "octagonal-dipyramid",
    "pentakis-dodecahedron",
];

struct Solid {
    spec: Polyhedron,
    graph: ShellGraph,
    unfolder: Unfolder<f64>,
    group: AutomorphismGroup,
}

fn solids() -> &'static [Solid] {
    static CELL: OnceLock<Vec<Solid>> = OnceLock::new();
    CELL.get_or_init(|| {
        SOLIDS
            .iter()
            .map(|name| {
                let spec = catalog::builtin(name).unwrap();
                let graph = optinet::build_shell_graph(&spec).unwrap();
                let group = find_automorphisms(&graph);
                let unfolder = Unfolder::new(&spec).unwrap();
                Solid {
                    spec,
                    graph,
                    unfolder,
                    group,
                }
            })
            .collect()
    })
}

/// Kruskal over the given edge weights.
fn spanning_tree(graph: &ShellGraph, weights: &[u32]) -> Cut {
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&e| (weights[e % weights.len()], e));
    let mut parent: Vec<usize> = (0..graph.vertex_count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut edges = EdgeSet::default();
    for e in order {
        let (a, b) = graph.edge(e);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            edges.insert(e);
        }
    }
    Cut(edges)
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn tree_strategy() -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0..SOLIDS.len(), prop::collection::vec(any::<u32>(), 150))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_spanning_tree_unfolds_isometrically((solid, weights) in tree_strategy()) {
        let s = &solids()[solid];
        let cut = spanning_tree(&s.graph, &weights);
        prop_assert!(cut.is_spanning_tree(&s.graph));
        let net = s.unfolder.unfold(&cut).unwrap();
        let coords = s.spec.coordinates().unwrap();
        for f in &net.faces {
            let n = f.points.len();
            for i in 0..n {
                let (u, v) = (coords[f.vertices[i]], coords[f.vertices[(i + 1) % n]]);
                let l3 = ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2) + (u[2] - v[2]).powi(2)).sqrt();
                prop_assert!((dist(f.points[i], f.points[(i + 1) % n]) - l3).abs() < 1e-9 * l3);
            }
        }
        prop_assert_eq!(net.connections.len(), cut.leaf_count(&s.graph));
        prop_assert_eq!(net.hinges.len(), s.spec.face_count() - 1);
    }

    #[test]
    fn rg_is_invariant_under_rigid_motion(
        (solid, weights) in tree_strategy(),
        angle in -10.0f64..10.0,
        dx in -1e3f64..1e3,
        dy in -1e3f64..1e3,
        root in 0usize..200,
    ) {
        let s = &solids()[solid];
        let cut = spanning_tree(&s.graph, &weights);
        let net = s.unfolder.unfold(&cut).unwrap();
        let (_, rg) = centroid_and_rg(&net).unwrap();
        let (_, moved) = centroid_and_rg(&net.transformed(angle, [dx, dy])).unwrap();
        prop_assert!((rg - moved).abs() <= 1e-9 * rg);
        let other = s.unfolder.unfold_from(&cut, root % s.spec.face_count()).unwrap();
        let (_, rerooted) = centroid_and_rg(&other).unwrap();
        prop_assert!((rg - rerooted).abs() <= 1e-9 * rg);
    }

    #[test]
    fn canonical_form_is_constant_on_orbits((solid, weights) in tree_strategy(), k in any::<usize>()) {
        let s = &solids()[solid];
        let cut = spanning_tree(&s.graph, &weights);
        let image = Cut(s.group.apply(k % s.group.order(), cut.edges()));
        prop_assert!(image.is_spanning_tree(&s.graph));
        prop_assert_eq!(image.leaf_count(&s.graph), cut.leaf_count(&s.graph));
        let a = canonical_cut(&cut, &s.group);
        let b = canonical_cut(&image, &s.group);
        prop_assert_eq!(&a.representative, &b.representative);
        prop_assert_eq!(a.orbit_size, b.orbit_size);
        prop_assert_eq!(s.group.order() % a.orbit_size, 0);
    }
}
