use std::fs;
use std::ops::ControlFlow;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use optinet::analysis::{
    build_statistics_table, format_plot_data, format_statistics_table, trend_report,
};
use optinet::catalog::{self, Tier};
use optinet::counting::for_each_spanning_tree;
use optinet::geometry::{rank_with, select_optimal_net, RankedNet};
use optinet::holes::enumerate_hole_cuts_with;
use optinet::io::{self, RunResults, RunSummary};
use optinet::{
    count_spanning_trees, dedupe_cuts, enumerate_mlsts_with, export_svg, find_automorphisms,
    AutomorphismGroup, Cut, Error, OpenShell, Polyhedron, SearchConfig, ShellGraph, SvgOptions,
    Unfolder,
};

use crate::{Command, InputArgs, OptionalInputArgs, RunArgs};

pub const EXIT_ERROR: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;
pub const EXIT_FALLBACK: u8 = 5;

pub fn dispatch(command: Command) -> Result<ExitCode> {
    let result = match command {
        Command::Enumerate { input, run } => enumerate(&input, &run),
        Command::Rank {
            input,
            run,
            svg_ranks,
        } => rank(&input, &run, &svg_ranks),
        Command::Verify {
            input,
            run,
            tree_cap,
        } => verify(&input, &run, tree_cap),
        Command::Estimate { input, run } => estimate(&input, &run),
        Command::Count { input } => count(&input),
        Command::ExportSvg {
            input,
            run,
            cut,
            svg_ranks,
        } => export(&input, &run, cut.as_deref(), &svg_ranks),
    };
    match result {
        Err(err)
            if matches!(
                err.downcast_ref::<Error>(),
                Some(Error::UnknownBuiltin { .. })
            ) =>
        {
            eprintln!("error: {err:#}");
            Ok(ExitCode::from(EXIT_USAGE))
        }
        other => other,
    }
}

/// A loaded shell: the closed polyhedron and, with a hole, the open shell.
struct Shell {
    closed: Polyhedron,
    tier: Option<Tier>,
    open: Option<OpenShell>,
    graph: ShellGraph,
    group: AutomorphismGroup,
}

impl Shell {
    fn load(input: &InputArgs) -> Result<Shell> {
        let (closed, tier) = load_spec(
            input.source.input.as_deref(),
            input.source.builtin.as_deref(),
        )?;
        let (open, graph) = if input.hole.is_empty() {
            let graph = optinet::build_shell_graph(&closed)?;
            (None, graph)
        } else {
            let open = OpenShell::new(&closed, &input.hole)?;
            let graph = open.graph.clone();
            (Some(open), graph)
        };
        let full = find_automorphisms(&graph);
        let group = match &open {
            // only symmetries that keep the hole in place
            Some(o) => full.stabilizer(&graph, &o.hole.boundary_edges),
            None => full,
        };
        Ok(Shell {
            closed,
            tier,
            open,
            graph,
            group,
        })
    }

    fn name(&self) -> &str {
        &self.closed.name
    }

    fn check_long_run(&self, run: &RunArgs) -> Result<()> {
        if self.tier == Some(Tier::Long)
            && !run.long_run
            && run.budget_nodes.is_none()
            && run.time_limit.is_none()
        {
            bail!(
                "'{}' takes hours to enumerate exactly; pass --long-run, or bound it with --budget-nodes or --time-limit",
                self.name()
            );
        }
        Ok(())
    }

    fn unfolder(&self) -> Result<Unfolder<f64>> {
        Ok(match &self.open {
            Some(o) => Unfolder::with_graph(&o.spec, o.graph.clone())?,
            None => Unfolder::new(&self.closed)?,
        })
    }

    fn face_count(&self) -> usize {
        self.open
            .as_ref()
            .map_or(self.closed.face_count(), |o| o.spec.face_count())
    }
}

fn load_spec(path: Option<&Path>, builtin: Option<&str>) -> Result<(Polyhedron, Option<Tier>)> {
    match (path, builtin) {
        (Some(p), None) => {
            let spec =
                io::load_polyhedron_file(p).with_context(|| format!("loading {}", p.display()))?;
            let diag = optinet::validate_polyhedron(&spec);
            if !diag.passes() {
                bail!("{} fails validation: {diag:?}", p.display());
            }
            Ok((spec, None))
        }
        (None, Some(name)) => {
            let entry = catalog::lookup(name)?;
            Ok((catalog::builtin(entry.name)?, Some(entry.tier)))
        }
        _ => bail!("give exactly one of --input and --builtin"),
    }
}

/// Outcome of the search stage.
struct Enumeration {
    results: RunResults,
    error: Option<Error>,
}

fn run_enumeration(shell: &Shell, config: &SearchConfig) -> Result<Enumeration> {
    let g = &shell.graph;
    let mut summary = RunSummary {
        name: shell.name().to_string(),
        hole_faces: shell
            .open
            .as_ref()
            .map_or_else(Vec::new, |o| o.hole.removed_faces.clone()),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        faces: shell.face_count(),
        complete: false,
        leaf_count: None,
        interior_size: None,
        labeled_cuts: None,
        non_isomorphic_cuts: None,
        automorphisms: shell.group.order(),
        spanning_trees: count_spanning_trees(g).to_string(),
        nodes_visited: 0,
        levels: vec![],
    };
    let found = match &shell.open {
        None => enumerate_mlsts_with(g, config)
            .map(|r| (r.leaf_count, r.interior_size, r.cuts, r.stats)),
        Some(o) => enumerate_hole_cuts_with(g, &o.hole, config)
            .map(|r| (r.leaf_count, r.interior_size, r.cuts, r.stats)),
    };
    let (labeled, representatives, error) = match found {
        Ok((leaves, interior, cuts, stats)) => {
            let reps = dedupe_cuts(&cuts, &shell.group);
            summary.complete = true;
            summary.leaf_count = Some(leaves);
            summary.interior_size = Some(interior);
            summary.labeled_cuts = Some(cuts.len() as u64);
            summary.non_isomorphic_cuts = Some(reps.len() as u64);
            summary.nodes_visited = stats.nodes_visited;
            summary.levels = stats.levels;
            (cuts, reps, None)
        }
        Err(err @ (Error::BudgetExceeded { .. } | Error::TimeLimitExceeded { .. })) => {
            if let Error::BudgetExceeded { nodes_visited, .. } = err {
                summary.nodes_visited = nodes_visited;
            }
            (vec![], vec![], Some(err))
        }
        Err(err) => return Err(err.into()),
    };
    Ok(Enumeration {
        results: RunResults {
            summary,
            edges: io::edge_table(g),
            labeled,
            representatives,
        },
        error,
    })
}

fn write_enumeration(e: &Enumeration, out: &Path) -> Result<()> {
    io::save_results(&e.results, out)
        .with_context(|| format!("writing results to {}", out.display()))
}

fn report_budget(err: &Error, out: &Path) -> ExitCode {
    eprintln!("error: {err}");
    eprintln!(
        "partial summary written to {}",
        out.join(io::SUMMARY_FILE).display()
    );
    ExitCode::from(EXIT_BUDGET)
}

fn print_summary(s: &RunSummary) {
    let show = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
    println!("shell\t{}", s.name);
    if !s.hole_faces.is_empty() {
        println!("hole\t{:?}", s.hole_faces);
    }
    println!("V E F\t{} {} {}", s.vertices, s.edges, s.faces);
    println!(
        "leaves\t{}",
        s.leaf_count.map_or("-".to_string(), |l| l.to_string())
    );
    println!("labeled\t{}", show(s.labeled_cuts));
    println!("non-isomorphic\t{}", show(s.non_isomorphic_cuts));
    println!("automorphisms\t{}", s.automorphisms);
    println!("nodes\t{}", s.nodes_visited);
}

fn enumerate(input: &InputArgs, run: &RunArgs) -> Result<ExitCode> {
    run.init_workers()?;
    let shell = Shell::load(input)?;
    shell.check_long_run(run)?;
    let e = run_enumeration(&shell, &run.search_config()?)?;
    write_enumeration(&e, &run.out_dir)?;
    print_summary(&e.results.summary);
    Ok(match &e.error {
        Some(err) => report_budget(err, &run.out_dir),
        None => ExitCode::SUCCESS,
    })
}

fn ranked_nets(shell: &Shell, e: &Enumeration) -> Result<Vec<RankedNet<f64>>> {
    Ok(rank_with(&shell.unfolder()?, &e.results.representatives)?)
}

fn svg_title(shell: &Shell, rank: usize) -> String {
    format!("{} net, rank {rank}", shell.name())
}

fn write_svgs(shell: &Shell, ranked: &[RankedNet<f64>], ranks: &[usize], out: &Path) -> Result<()> {
    for &k in ranks {
        let r = ranked
            .get(k.wrapping_sub(1))
            .ok_or_else(|| anyhow!("rank {k} out of range 1..={}", ranked.len()))?;
        let opts = SvgOptions {
            title: Some(svg_title(shell, k)),
            ..SvgOptions::default()
        };
        let path = out.join(format!("net_rank_{k:05}.svg"));
        fs::write(&path, export_svg(&r.layout, &opts)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn rank(input: &InputArgs, run: &RunArgs, svg_ranks: &[usize]) -> Result<ExitCode> {
    run.init_workers()?;
    let shell = Shell::load(input)?;
    shell.check_long_run(run)?;
    let e = run_enumeration(&shell, &run.search_config()?)?;
    write_enumeration(&e, &run.out_dir)?;
    if let Some(err) = &e.error {
        return Ok(report_budget(err, &run.out_dir));
    }
    let ranked = ranked_nets(&shell, &e)?;
    let table = io::format_ranking(&ranked, &e.results.representatives)?;
    fs::write(run.out_dir.join(io::RANKING_FILE), table)?;
    write_svgs(&shell, &ranked, svg_ranks, &run.out_dir)?;
    print_summary(&e.results.summary);
    if let (Some(first), Some(last)) = (ranked.first(), ranked.last()) {
        println!(
            "rg range\t{:.6} .. {:.6} (ratio {:.4})",
            first.radius_of_gyration,
            last.radius_of_gyration,
            last.radius_of_gyration / first.radius_of_gyration
        );
    }
    match select_optimal_net(&ranked) {
        Ok(best) => {
            let id = e
                .results
                .representatives
                .binary_search(&best.cut)
                .expect("ranked cut listed");
            let line = format!(
                "rank\t{}\ncut_id\t{id}\nrg\t{:.15e}\n",
                best.rank, best.radius_of_gyration
            );
            fs::write(run.out_dir.join("selected.tsv"), &line)?;
            println!("selected\trank {} (cut {id})", best.rank);
            Ok(ExitCode::SUCCESS)
        }
        Err(err @ Error::FallbackExhausted(_)) => {
            fs::write(
                run.out_dir.join("selected.tsv"),
                "none\tall optimal nets self-overlap\n",
            )?;
            eprintln!("error: {err}; nets with fewer leaves would be needed");
            Ok(ExitCode::from(EXIT_FALLBACK))
        }
        Err(err) => Err(err.into()),
    }
}

fn export(
    input: &InputArgs,
    run: &RunArgs,
    cut: Option<&str>,
    ranks: &[usize],
) -> Result<ExitCode> {
    run.init_workers()?;
    let shell = Shell::load(input)?;
    fs::create_dir_all(&run.out_dir)?;
    if let Some(text) = cut {
        let cuts = io::parse_cuts(text)?;
        let [cut] = cuts.as_slice() else {
            bail!("--cut takes one cut");
        };
        let layout = shell.unfolder()?.unfold(cut)?;
        let opts = SvgOptions {
            title: Some(format!("{} net", shell.name())),
            ..SvgOptions::default()
        };
        let path = run.out_dir.join("net.svg");
        fs::write(&path, export_svg(&layout, &opts)?)?;
        println!("{}", path.display());
        return Ok(ExitCode::SUCCESS);
    }
    shell.check_long_run(run)?;
    let e = run_enumeration(&shell, &run.search_config()?)?;
    if let Some(err) = &e.error {
        eprintln!("error: {err}");
        return Ok(ExitCode::from(EXIT_BUDGET));
    }
    let ranked = ranked_nets(&shell, &e)?;
    write_svgs(&shell, &ranked, ranks, &run.out_dir)?;
    Ok(ExitCode::SUCCESS)
}

fn count(input: &InputArgs) -> Result<ExitCode> {
    let shell = Shell::load(input)?;
    let g = &shell.graph;
    let n_st = count_spanning_trees(g);
    println!("shell\t{}", shell.name());
    println!(
        "V E F\t{} {} {}",
        g.vertex_count(),
        g.edge_count(),
        shell.face_count()
    );
    println!("spanning trees\t{n_st}");
    println!("automorphisms\t{}", shell.group.order());
    let est = optinet::symmetry::estimate_with_group(g, &shell.group);
    println!("N_ST/N_aut\t{est}");
    Ok(ExitCode::SUCCESS)
}

fn estimate(input: &OptionalInputArgs, run: &RunArgs) -> Result<ExitCode> {
    run.init_workers()?;
    let specs: Vec<Polyhedron> = match (&input.input, &input.builtin) {
        (None, None) => catalog::catalog()
            .iter()
            .filter(|e| e.tier != Tier::Long || run.long_run)
            .map(|e| catalog::builtin(e.name))
            .collect::<Result<_, _>>()?,
        (path, name) => {
            let (spec, tier) = load_spec(path.as_deref(), name.as_deref())?;
            if tier == Some(Tier::Long)
                && !run.long_run
                && run.budget_nodes.is_none()
                && run.time_limit.is_none()
            {
                bail!(
                    "'{}' needs --long-run, --budget-nodes or --time-limit",
                    spec.name
                );
            }
            vec![spec]
        }
    };
    let rows = build_statistics_table(&specs, &run.search_config()?)?;
    fs::create_dir_all(&run.out_dir)?;
    let table = format_statistics_table(&rows);
    fs::write(run.out_dir.join("statistics.tsv"), &table)?;
    fs::write(run.out_dir.join("plot_data.tsv"), format_plot_data(&rows))?;
    print!("{table}");
    if let Some(t) = trend_report(&rows) {
        let text = format!(
            "rows\t{}\nslope_log2_fraction_per_edge\t{:.6}\nspearman\t{:.6}\noutside_factor_30\t{}\n",
            t.rows_used,
            t.slope,
            t.rank_correlation,
            t.outside_envelope.join(",")
        );
        fs::write(run.out_dir.join("trend.tsv"), &text)?;
        print!("{text}");
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(input: &InputArgs, run: &RunArgs, tree_cap: u64) -> Result<ExitCode> {
    run.init_workers()?;
    let shell = Shell::load(input)?;
    shell.check_long_run(run)?;
    let g = &shell.graph;
    let mut lines = Vec::new();
    let mut failed = false;
    let mut check = |name: &str, ok: Option<bool>, detail: String| {
        let status = match ok {
            Some(true) => "PASS",
            Some(false) => {
                failed = true;
                "FAIL"
            }
            None => "SKIP",
        };
        lines.push(format!("{status}\t{name}\t{detail}"));
    };

    let group_ok = shell.group.check_axioms(g).is_ok();
    check(
        "automorphism group axioms",
        Some(group_ok),
        format!("order {}", shell.group.order()),
    );

    let e = run_enumeration(&shell, &run.search_config()?)?;
    if let Some(err) = &e.error {
        eprintln!("error: {err}");
        return Ok(ExitCode::from(EXIT_BUDGET));
    }
    let labeled = &e.results.labeled;
    let orbit_sum: usize = e.results.representatives.iter().map(|c| c.orbit_size).sum();
    check(
        "orbit sizes sum to labeled count",
        Some(orbit_sum == labeled.len()),
        format!("{orbit_sum} vs {}", labeled.len()),
    );

    let n_st = count_spanning_trees(g);
    let too_many = n_st > tree_cap.into();
    if too_many {
        check(
            "kirchhoff count equals oracle",
            None,
            format!("{n_st} trees exceed the cap {tree_cap}"),
        );
        check(
            "optimal cuts equal oracle max-leaf filter",
            None,
            "oracle skipped".into(),
        );
    } else {
        // the hole boundary minus one edge must lie in the tree
        let forced = shell.open.as_ref().map(|o| {
            let mut b = o.hole.boundary_edges;
            let first = b.first().expect("boundary");
            b.remove(first);
            (b, first)
        });
        let mut trees = 0u64;
        let mut best = 0usize;
        let mut oracle: Vec<Cut> = Vec::new();
        let _ = for_each_spanning_tree(g, |t| {
            trees += 1;
            let cut = match &forced {
                None => *t,
                Some((path, closing)) => {
                    if !path.is_subset(t.edges()) {
                        return ControlFlow::Continue(());
                    }
                    let mut edges = *t.edges();
                    edges.insert(*closing);
                    Cut(edges)
                }
            };
            let l = cut.leaf_count(g);
            if l > best {
                best = l;
                oracle.clear();
            }
            if l == best {
                oracle.push(cut);
            }
            ControlFlow::Continue(())
        });
        oracle.sort_unstable();
        check(
            "kirchhoff count equals oracle",
            Some(n_st == trees.into()),
            format!("{n_st} vs {trees}"),
        );
        check(
            "optimal cuts equal oracle max-leaf filter",
            Some(oracle == *labeled),
            format!(
                "{} cuts vs {} from oracle, {best} leaves",
                labeled.len(),
                oracle.len()
            ),
        );
    }
    for l in &lines {
        println!("{l}");
    }
    fs::create_dir_all(&run.out_dir)?;
    fs::write(run.out_dir.join("verify.tsv"), lines.join("\n") + "\n")?;
    Ok(if failed {
        ExitCode::from(EXIT_MISMATCH)
    } else {
        ExitCode::SUCCESS
    })
}
