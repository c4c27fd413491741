use optinet::io::{self, RunResults, RunSummary};
use optinet::{
    catalog, count_spanning_trees, dedupe_cuts, enumerate_mlsts, find_automorphisms, rank_nets,
    Error,
};

const CUBE: &str = r#"{
  "name": "cube",
  "vertices": [
    [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
    [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]
  ],
  "faces": [
    [0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4],
    [1, 2, 6, 5], [2, 3, 7, 6], [3, 0, 4, 7]
  ]
}"#;

#[test]
fn cube_document_matches_the_builtin() {
    let doc = io::load_polyhedron(CUBE).unwrap();
    let builtin = catalog::builtin("cube").unwrap();
    let (a, b) = (
        optinet::build_shell_graph(&doc).unwrap(),
        optinet::build_shell_graph(&builtin).unwrap(),
    );
    assert_eq!(count_spanning_trees(&a), count_spanning_trees(&b));
    let (ra, rb) = (enumerate_mlsts(&a).unwrap(), enumerate_mlsts(&b).unwrap());
    assert_eq!(ra.leaf_count, rb.leaf_count);
    assert_eq!(ra.cuts.len(), rb.cuts.len());
    let reps = dedupe_cuts(&ra.cuts, &find_automorphisms(&a));
    assert_eq!(reps.len(), 4);
    let nets = rank_nets(&doc, &reps).unwrap();
    let builtin_nets =
        rank_nets(&builtin, &dedupe_cuts(&rb.cuts, &find_automorphisms(&b))).unwrap();
    // The builtin cube has a different edge length; compare scale-free.
    let scale = builtin_nets[0].layout.mean_edge_length();
    for (x, y) in nets.iter().zip(&builtin_nets) {
        assert!((x.radius_of_gyration - y.radius_of_gyration / scale).abs() < 1e-12);
    }
}

#[test]
fn polyhedron_json_round_trips() {
    for entry in catalog::catalog() {
        let spec = entry.spec();
        let text = io::polyhedron_to_json(&spec).unwrap();
        assert_eq!(io::load_polyhedron(&text).unwrap(), spec, "{}", entry.name);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("snub.json");
    let spec = catalog::builtin("snub-cube").unwrap();
    io::save_polyhedron(&spec, &path).unwrap();
    assert_eq!(io::load_polyhedron_file(&path).unwrap(), spec);
}

#[test]
fn schema_errors_name_the_offending_field() {
    let bad = CUBE.replace("[3, 0, 4, 7]", "[3, 0, 4, 9]");
    match io::load_polyhedron(&bad) {
        Err(Error::Schema { field, message }) => {
            assert_eq!(field, "faces[5][3]");
            assert!(message.contains("vertex 9"), "{message}");
        }
        other => panic!("expected a schema error, got {other:?}"),
    }
    let short = CUBE.replace("[3, 0, 4, 7]", "[3, 0]");
    assert!(
        matches!(io::load_polyhedron(&short), Err(Error::Schema { field, .. }) if field == "faces[5]")
    );
    let unnamed = CUBE.replace("\"cube\"", "\"  \"");
    assert!(
        matches!(io::load_polyhedron(&unnamed), Err(Error::Schema { field, .. }) if field == "name")
    );
}

#[test]
fn parse_errors_carry_a_position() {
    let broken = CUBE.replace("[1, 0, 0],", "[1, 0 0],");
    match io::load_polyhedron(&broken) {
        Err(Error::Parse { line, column, .. }) => {
            assert_eq!(line, 4);
            assert!(column > 0);
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn topology_only_documents_load() {
    let doc = r#"{"name": "square pyramid", "faces": [[0,1,2,3],[0,4,1],[1,4,2],[2,4,3],[3,4,0]]}"#;
    let spec = io::load_polyhedron(doc).unwrap();
    assert!(spec.vertices.is_none());
    let graph = optinet::build_shell_graph(&spec).unwrap();
    assert_eq!(enumerate_mlsts(&graph).unwrap().leaf_count, 4);
    assert!(matches!(
        rank_nets(&spec, &[]),
        Err(Error::MissingGeometry(_))
    ));
}

#[test]
fn run_results_round_trip() {
    let spec = catalog::builtin("cuboctahedron").unwrap();
    let graph = optinet::build_shell_graph(&spec).unwrap();
    let group = find_automorphisms(&graph);
    let r = enumerate_mlsts(&graph).unwrap();
    let reps = dedupe_cuts(&r.cuts, &group);
    let results = RunResults {
        summary: RunSummary {
            name: spec.name.clone(),
            hole_faces: vec![],
            vertices: graph.vertex_count(),
            edges: graph.edge_count(),
            faces: spec.face_count(),
            complete: true,
            leaf_count: Some(r.leaf_count),
            interior_size: Some(r.interior_size),
            labeled_cuts: Some(r.cuts.len() as u64),
            non_isomorphic_cuts: Some(reps.len() as u64),
            automorphisms: group.order(),
            spanning_trees: count_spanning_trees(&graph).to_string(),
            nodes_visited: r.stats.nodes_visited,
            levels: r.stats.levels.clone(),
        },
        edges: io::edge_table(&graph),
        labeled: r.cuts.clone(),
        representatives: reps.clone(),
    };
    let dir = tempfile::tempdir().unwrap();
    io::save_results(&results, dir.path()).unwrap();
    let back = io::load_results(dir.path()).unwrap();
    assert_eq!(back.summary, results.summary);
    assert_eq!(back.edges, results.edges);
    assert_eq!(back.labeled, results.labeled);
    assert_eq!(back.representatives, results.representatives);

    let ranked = rank_nets(&spec, &reps).unwrap();
    let text = io::format_ranking(&ranked, &reps).unwrap();
    let rows = io::parse_ranking(&text).unwrap();
    assert_eq!(rows.len(), 34);
    for (row, net) in rows.iter().zip(&ranked) {
        assert_eq!(row.rank, net.rank);
        assert_eq!(reps[row.cut_id].representative, net.cut.representative);
        assert!(
            (row.radius_of_gyration - net.radius_of_gyration).abs()
                <= 1e-14 * net.radius_of_gyration
        );
        assert_eq!(row.overlap, net.overlap);
    }
}
