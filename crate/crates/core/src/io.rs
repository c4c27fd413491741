//! Reading and writing polyhedra, cut lists, run summaries and rankings.
//!
//! Polyhedra are JSON documents `{"name", "vertices"?, "faces"}`. Everything
//! else is written as plain text with one record per line, in canonical
//! order, so repeated runs produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitset::{EdgeSet, MAX_EDGES};
use crate::error::{Error, Result};
use crate::geometry::RankedNet;
use crate::graph::{Cut, ShellGraph};
use crate::mlst::LevelStats;
use crate::polyhedron::PolyhedronSpec;
use crate::scalar::Scalar;
use crate::symmetry::CanonicalCut;

/// Parses a polyhedron document and checks its schema: a non-empty name,
/// at least one face, at least three entries per face, and indices within
/// the vertex list when coordinates are given.
pub fn load_polyhedron(document: &str) -> Result<PolyhedronSpec> {
    let spec: PolyhedronSpec = serde_json::from_str(document)?;
    check_schema(&spec)?;
    Ok(spec)
}

pub fn load_polyhedron_file(path: impl AsRef<Path>) -> Result<PolyhedronSpec> {
    load_polyhedron(&fs::read_to_string(path)?)
}

fn check_schema<T: Scalar>(spec: &PolyhedronSpec<T>) -> Result<()> {
    let schema = |field: String, message: String| Err(Error::Schema { field, message });
    if spec.name.trim().is_empty() {
        return schema("name".into(), "must not be empty".into());
    }
    if spec.faces.is_empty() {
        return schema("faces".into(), "must list at least one face".into());
    }
    let vertex_count = spec.vertices.as_ref().map(Vec::len);
    for (f, face) in spec.faces.iter().enumerate() {
        if face.len() < 3 {
            return schema(
                format!("faces[{f}]"),
                format!("has {} vertices, at least 3 needed", face.len()),
            );
        }
        for (k, &i) in face.iter().enumerate() {
            if let Some(n) = vertex_count {
                if i >= n {
                    return schema(
                        format!("faces[{f}][{k}]"),
                        format!("face {f} references vertex {i}, but only {n} vertices exist"),
                    );
                }
            }
        }
    }
    if let Some(vs) = &spec.vertices {
        if let Some(v) = vs.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
            return schema(format!("vertices[{v}]"), "non-finite coordinate".into());
        }
    }
    Ok(())
}

pub fn polyhedron_to_json<T: Scalar + Serialize>(spec: &PolyhedronSpec<T>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(spec).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

pub fn save_polyhedron<T: Scalar + Serialize>(
    spec: &PolyhedronSpec<T>,
    path: impl AsRef<Path>,
) -> Result<()> {
    fs::write(path, polyhedron_to_json(spec)?)?;
    Ok(())
}

/// Everything a run reports besides the cut lists. Wall time is left out so
/// the file is reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    /// Removed faces, for open shells.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hole_faces: Vec<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// False when a budget ran out; counts then describe the partial run.
    pub complete: bool,
    pub leaf_count: Option<usize>,
    pub interior_size: Option<usize>,
    pub labeled_cuts: Option<u64>,
    pub non_isomorphic_cuts: Option<u64>,
    pub automorphisms: usize,
    /// Decimal, since it can exceed 64 bits.
    pub spanning_trees: String,
    pub nodes_visited: u64,
    pub levels: Vec<LevelStats>,
}

/// A run's summary with its cut lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResults {
    pub summary: RunSummary,
    /// Endpoints of each shell edge, by edge index.
    pub edges: Vec<(usize, usize)>,
    pub labeled: Vec<Cut>,
    pub representatives: Vec<CanonicalCut>,
}

pub const SUMMARY_FILE: &str = "summary.json";
pub const EDGES_FILE: &str = "edges.tsv";
pub const LABELED_FILE: &str = "labeled_cuts.txt";
pub const REPRESENTATIVES_FILE: &str = "representatives.tsv";
pub const RANKING_FILE: &str = "ranking.tsv";

/// Writes the four result files into `dir`, creating it if needed.
pub fn save_results(results: &RunResults, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut summary = serde_json::to_string_pretty(&results.summary).map_err(Error::from)?;
    summary.push('\n');
    fs::write(dir.join(SUMMARY_FILE), summary)?;
    fs::write(dir.join(EDGES_FILE), format_edges(&results.edges))?;
    fs::write(dir.join(LABELED_FILE), format_cuts(&results.labeled))?;
    fs::write(
        dir.join(REPRESENTATIVES_FILE),
        format_representatives(&results.representatives),
    )?;
    Ok(())
}

pub fn load_results(dir: impl AsRef<Path>) -> Result<RunResults> {
    let dir = dir.as_ref();
    let summary = serde_json::from_str(&fs::read_to_string(dir.join(SUMMARY_FILE))?)?;
    Ok(RunResults {
        summary,
        edges: parse_edges(&fs::read_to_string(dir.join(EDGES_FILE))?)?,
        labeled: parse_cuts(&fs::read_to_string(dir.join(LABELED_FILE))?)?,
        representatives: parse_representatives(&fs::read_to_string(
            dir.join(REPRESENTATIVES_FILE),
        )?)?,
    })
}

pub fn edge_table(graph: &ShellGraph) -> Vec<(usize, usize)> {
    graph.edges().to_vec()
}

pub fn format_edges(edges: &[(usize, usize)]) -> String {
    let mut out = String::from("edge\ta\tb\n");
    for (i, (a, b)) in edges.iter().enumerate() {
        writeln!(out, "{i}\t{a}\t{b}").unwrap();
    }
    out
}

pub fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (line_no, line) in data_lines(text, "edge") {
        let f = fields(line, line_no, 3)?;
        if f[0] != out.len() {
            return Err(parse_error(line_no, "edge indices must be consecutive"));
        }
        out.push((f[1], f[2]));
    }
    Ok(out)
}

/// One cut per line as space-separated ascending edge indices.
pub fn format_cuts(cuts: &[Cut]) -> String {
    let mut out = String::new();
    for c in cuts {
        out.push_str(&join(c.edges()));
        out.push('\n');
    }
    out
}

pub fn parse_cuts(text: &str) -> Result<Vec<Cut>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_edge_set(l, i + 1).map(Cut))
        .collect()
}

/// `id`, orbit size and edges of each representative, in canonical order.
pub fn format_representatives(reps: &[CanonicalCut]) -> String {
    let mut out = String::from("id\torbit\tedges\n");
    for (i, c) in reps.iter().enumerate() {
        writeln!(
            out,
            "{i}\t{}\t{}",
            c.orbit_size,
            join(c.representative.edges())
        )
        .unwrap();
    }
    out
}

pub fn parse_representatives(text: &str) -> Result<Vec<CanonicalCut>> {
    let mut out = Vec::new();
    for (line_no, line) in data_lines(text, "id") {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(parse_error(line_no, "expected 3 tab-separated columns"));
        }
        let orbit_size = cols[1]
            .parse()
            .map_err(|_| parse_error(line_no, "orbit size is not an integer"))?;
        out.push(CanonicalCut {
            representative: Cut(parse_edge_set(cols[2], line_no)?),
            orbit_size,
        });
    }
    Ok(out)
}

/// Columns `rank`, `cut_id`, `rg`, `overlap`. The cut id is the
/// representative's position in canonical order (as in the representatives
/// file), so `reps` must be that same list.
pub fn format_ranking<T: Scalar>(ranked: &[RankedNet<T>], reps: &[CanonicalCut]) -> Result<String> {
    let mut out = String::from("rank\tcut_id\trg\toverlap\n");
    for r in ranked {
        let id = reps
            .binary_search(&r.cut)
            .map_err(|_| Error::InvalidCut("ranked cut missing from representatives".into()))?;
        writeln!(
            out,
            "{}\t{id}\t{:.15e}\t{}",
            r.rank,
            r.radius_of_gyration.as_f64(),
            u8::from(r.overlap)
        )
        .unwrap();
    }
    Ok(out)
}

/// One row of a ranking file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankingRow {
    pub rank: usize,
    pub cut_id: usize,
    pub radius_of_gyration: f64,
    pub overlap: bool,
}

pub fn parse_ranking(text: &str) -> Result<Vec<RankingRow>> {
    let mut out = Vec::new();
    for (line_no, line) in data_lines(text, "rank") {
        let cols: Vec<&str> = line.split('\t').collect();
        let bad = || parse_error(line_no, "expected rank, cut_id, rg, overlap");
        if cols.len() != 4 {
            return Err(bad());
        }
        out.push(RankingRow {
            rank: cols[0].parse().map_err(|_| bad())?,
            cut_id: cols[1].parse().map_err(|_| bad())?,
            radius_of_gyration: cols[2].parse().map_err(|_| bad())?,
            overlap: match cols[3] {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            },
        });
    }
    Ok(out)
}

fn join(edges: &EdgeSet) -> String {
    edges
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_edge_set(s: &str, line: usize) -> Result<EdgeSet> {
    let mut set = EdgeSet::new();
    for tok in s.split_whitespace() {
        let e: usize = tok
            .parse()
            .map_err(|_| parse_error(line, &format!("'{tok}' is not an edge index")))?;
        if e >= MAX_EDGES {
            return Err(parse_error(
                line,
                &format!("edge index {e} exceeds {MAX_EDGES}"),
            ));
        }
        set.insert(e);
    }
    Ok(set)
}

/// Non-empty lines after the header, with 1-based line numbers.
fn data_lines<'a>(text: &'a str, header: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(move |(_, l)| !l.trim().is_empty() && !l.starts_with(header))
}

fn fields(line: &str, line_no: usize, n: usize) -> Result<Vec<usize>> {
    let v: Vec<usize> = line
        .split('\t')
        .map(|t| t.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_error(line_no, "expected integers"))?;
    if v.len() != n {
        return Err(parse_error(line_no, &format!("expected {n} columns")));
    }
    Ok(v)
}

fn parse_error(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        column: 1,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_face_index_is_named() {
        let doc =
            r#"{"name": "bad", "vertices": [[0,0,0],[1,0,0],[0,1,0]], "faces": [[0,1,2],[0,2,7]]}"#;
        match load_polyhedron(doc).unwrap_err() {
            Error::Schema { field, message } => {
                assert_eq!(field, "faces[1][2]");
                assert!(message.contains("face 1") && message.contains("vertex 7"));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let doc = "{\n  \"name\": \"x\",\n  \"faces\": [[0, 1, 2],\n}";
        match load_polyhedron(doc).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            e => panic!("unexpected {e}"),
        }
        let missing = r#"{"name": "x"}"#;
        assert!(matches!(load_polyhedron(missing), Err(Error::Parse { .. })));
    }

    #[test]
    fn faces_only_documents_load() {
        let spec = load_polyhedron(r#"{"name": "k4", "faces": [[0,1,2],[0,3,1],[0,2,3],[1,3,2]]}"#)
            .unwrap();
        assert!(spec.vertices.is_none());
        assert_eq!(spec.vertex_count(), 4);
        assert!(matches!(spec.coordinates(), Err(Error::MissingGeometry(_))));
    }

    #[test]
    fn cut_lines_round_trip() {
        let cuts = vec![
            Cut([0, 3, 5].into_iter().collect()),
            Cut([1, 2, 200].into_iter().collect()),
        ];
        assert_eq!(parse_cuts(&format_cuts(&cuts)).unwrap(), cuts);
        let reps: Vec<CanonicalCut> = cuts
            .iter()
            .map(|&c| CanonicalCut {
                representative: c,
                orbit_size: 12,
            })
            .collect();
        assert_eq!(
            parse_representatives(&format_representatives(&reps)).unwrap(),
            reps
        );
        assert!(parse_cuts("1 x 3\n").is_err());
    }
}
