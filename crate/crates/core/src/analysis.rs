//! Closed-form size estimates and the statistics table that compares them
//! with exact enumeration across a set of shells.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::counting::count_spanning_trees;
use crate::error::{Error, Result};
use crate::graph::build_shell_graph;
use crate::mlst::{enumerate_mlsts_with, SearchConfig};
use crate::polyhedron::PolyhedronSpec;
use crate::symmetry::{dedupe_cuts, find_automorphisms};

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn positive(what: &str, value: usize) -> Result<i64> {
    if value == 0 {
        return Err(Error::Domain(format!("{what} must be positive")));
    }
    Ok(value as i64)
}

/// `L ≈ E/4 + 2`
pub fn leaf_estimate(edges: usize) -> Result<BigRational> {
    let e = positive("edge count", edges)?;
    Ok(ratio(e, 4) + ratio(2, 1))
}

/// `L ≈ (V + 3)/2`, for cubic-like shells with `V ≥ 4`.
pub fn leaf_estimate_v(vertices: usize) -> Result<BigRational> {
    if vertices < 4 {
        return Err(Error::Domain(format!("vertex count {vertices} is below 4")));
    }
    Ok(ratio(vertices as i64 + 3, 2))
}

/// `V ≈ E/2 + 1`
pub fn vertex_estimate(edges: usize) -> Result<BigRational> {
    let e = positive("edge count", edges)?;
    Ok(ratio(e, 2) + ratio(1, 1))
}

/// `N_MLST / N_ST ≈ 2^(-E/2 + 3/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioEstimate {
    /// Exact base-2 logarithm.
    pub log2: BigRational,
    pub value: f64,
}

pub fn mlst_ratio_estimate(edges: usize) -> Result<RatioEstimate> {
    let e = positive("edge count", edges)?;
    let log2 = ratio(3 - e, 2);
    let value = log2.to_f64().unwrap().exp2();
    Ok(RatioEstimate { log2, value })
}

/// Base-2 logarithm of a big integer, accurate to double precision.
pub fn log2_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// Why a statistics row is incomplete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Complete,
    /// The search stopped; the message says where.
    Partial(String),
}

/// Exact counts and estimates for one shell.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellStatistics {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub spanning_trees: BigUint,
    pub automorphisms: usize,
    pub leaves: Option<usize>,
    pub labeled_mlsts: Option<u64>,
    pub optimal_nets: Option<u64>,
    pub leaf_estimate: BigRational,
    pub ratio_estimate: RatioEstimate,
    pub status: RowStatus,
}

impl ShellStatistics {
    pub fn is_complete(&self) -> bool {
        self.status == RowStatus::Complete
    }

    /// `log₂(N_MLST / N_ST)` for complete rows.
    pub fn log2_ratio(&self) -> Option<f64> {
        let m = self.labeled_mlsts?;
        Some((m as f64).log2() - log2_biguint(&self.spanning_trees))
    }

    /// `N_ST / N_aut`, a lower bound on the number of distinct nets.
    pub fn net_estimate(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.spanning_trees.clone()),
            BigInt::from(self.automorphisms),
        )
    }
}

/// Runs the exact pipeline on every shell. A shell whose search exceeds the
/// budget in `config` yields a partial row instead of failing the table.
pub fn build_statistics_table(
    specs: &[PolyhedronSpec],
    config: &SearchConfig,
) -> Result<Vec<ShellStatistics>> {
    specs
        .par_iter()
        .map(|s| shell_statistics(s, config))
        .collect()
}

pub fn shell_statistics(spec: &PolyhedronSpec, config: &SearchConfig) -> Result<ShellStatistics> {
    let graph = build_shell_graph(spec)?;
    let group = find_automorphisms(&graph);
    let e = graph.edge_count();
    let mut row = ShellStatistics {
        name: spec.name.clone(),
        vertices: graph.vertex_count(),
        edges: e,
        faces: spec.face_count(),
        spanning_trees: count_spanning_trees(&graph),
        automorphisms: group.order(),
        leaves: None,
        labeled_mlsts: None,
        optimal_nets: None,
        leaf_estimate: leaf_estimate(e)?,
        ratio_estimate: mlst_ratio_estimate(e)?,
        status: RowStatus::Complete,
    };
    match enumerate_mlsts_with(&graph, config) {
        Ok(r) => {
            row.leaves = Some(r.leaf_count);
            row.labeled_mlsts = Some(r.cuts.len() as u64);
            row.optimal_nets = Some(dedupe_cuts(&r.cuts, &group).len() as u64);
        }
        Err(err @ (Error::BudgetExceeded { .. } | Error::TimeLimitExceeded { .. })) => {
            row.status = RowStatus::Partial(err.to_string());
        }
        Err(err) => return Err(err),
    }
    Ok(row)
}

/// Tab-separated statistics with estimates and residuals. Missing values
/// are written as `-`.
pub fn format_statistics_table(rows: &[ShellStatistics]) -> String {
    let mut out = String::from(
        "name\tV\tE\tF\tN_ST\tN_aut\tL\tN_MLST\tN_opt_nets\tN_ST/N_aut\t\
         L_est_E\tL_est_V\tV_est_E\tL-L_est_E\tL-L_est_V\tV-V_est_E\t\
         log2_ratio\tlog2_ratio_est\tlog2_residual\tstatus\n",
    );
    for r in rows {
        let dash = || "-".to_string();
        let l_est_v = leaf_estimate_v(r.vertices).ok();
        let v_est = vertex_estimate(r.edges).unwrap();
        let est_log2 = r.ratio_estimate.log2.to_f64().unwrap();
        let log2 = r.log2_ratio();
        let cols = [
            r.name.clone(),
            r.vertices.to_string(),
            r.edges.to_string(),
            r.faces.to_string(),
            r.spanning_trees.to_string(),
            r.automorphisms.to_string(),
            r.leaves.map_or_else(dash, |l| l.to_string()),
            r.labeled_mlsts.map_or_else(dash, |m| m.to_string()),
            r.optimal_nets.map_or_else(dash, |n| n.to_string()),
            decimal(&r.net_estimate()),
            decimal(&r.leaf_estimate),
            l_est_v.as_ref().map_or_else(dash, decimal),
            decimal(&v_est),
            r.leaves.map_or_else(dash, |l| {
                decimal(&(BigRational::from_integer(BigInt::from(l)) - &r.leaf_estimate))
            }),
            match (r.leaves, &l_est_v) {
                (Some(l), Some(est)) => {
                    decimal(&(BigRational::from_integer(BigInt::from(l)) - est))
                }
                _ => dash(),
            },
            decimal(&(BigRational::from_integer(BigInt::from(r.vertices)) - v_est)),
            log2.map_or_else(dash, |x| format!("{x:.6}")),
            format!("{est_log2:.6}"),
            log2.map_or_else(dash, |x| format!("{:.6}", x - est_log2)),
            match &r.status {
                RowStatus::Complete => "complete".to_string(),
                RowStatus::Partial(why) => format!("partial: {why}"),
            },
        ];
        out.push_str(&cols.join("\t"));
        out.push('\n');
    }
    out
}

/// Plot series as `figure, name, x, y` rows: leaves against edges, the
/// optimal fraction `log₂(N_MLST/N_ST)` against edges, and `log₂(N_ST/N_aut)`
/// against edges, followed by each trend line sampled at the same `E`.
pub fn format_plot_data(rows: &[ShellStatistics]) -> String {
    let mut out = String::from("figure\tname\tx\ty\n");
    for r in rows {
        if let Some(l) = r.leaves {
            writeln!(out, "leaves_vs_edges\t{}\t{}\t{l}", r.name, r.edges).unwrap();
        }
        if let Some(y) = r.log2_ratio() {
            writeln!(
                out,
                "log2_mlst_fraction_vs_edges\t{}\t{}\t{y:.6}",
                r.name, r.edges
            )
            .unwrap();
        }
        let nets = log2_biguint(&r.spanning_trees) - (r.automorphisms as f64).log2();
        writeln!(
            out,
            "log2_nets_estimate_vs_edges\t{}\t{}\t{nets:.6}",
            r.name, r.edges
        )
        .unwrap();
    }
    for r in rows {
        writeln!(
            out,
            "leaves_trend\t{}\t{}\t{}",
            r.name,
            r.edges,
            decimal(&r.leaf_estimate)
        )
        .unwrap();
        writeln!(
            out,
            "log2_mlst_fraction_trend\t{}\t{}\t{}",
            r.name,
            r.edges,
            decimal(&r.ratio_estimate.log2)
        )
        .unwrap();
    }
    out
}

/// Trend checks over the complete rows.
#[derive(Clone, Debug, PartialEq)]
pub struct TrendReport {
    pub rows_used: usize,
    /// Least-squares slope of `log₂(N_MLST/N_ST)` against `E`.
    pub slope: f64,
    /// Spearman correlation of `E` and `log₂(N_MLST/N_ST)`.
    pub rank_correlation: f64,
    /// Complete rows with `E ≤ 60` whose fraction is more than a factor 30
    /// off the trend.
    pub outside_envelope: Vec<String>,
}

pub fn trend_report(rows: &[ShellStatistics]) -> Option<TrendReport> {
    let pts: Vec<(f64, f64, &ShellStatistics)> = rows
        .iter()
        .filter_map(|r| r.log2_ratio().map(|y| (r.edges as f64, y, r)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let factor = 30f64.log2();
    let outside_envelope = pts
        .iter()
        .filter(|(x, y, r)| {
            *x <= 60.0 && (y - r.ratio_estimate.log2.to_f64().unwrap()).abs() > factor
        })
        .map(|(_, _, r)| r.name.clone())
        .collect();
    Some(TrendReport {
        rows_used: pts.len(),
        slope: slope(&xs, &ys),
        rank_correlation: spearman(&xs, &ys),
        outside_envelope,
    })
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Spearman's rho with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Exact rational as a decimal with up to six places, trailing zeros
/// trimmed.
pub fn decimal(r: &BigRational) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let s = format!("{:.6}", r.to_f64().unwrap());
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
