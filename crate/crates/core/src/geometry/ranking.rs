use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{centroid_and_rg, check_overlap, NetLayout, Point2, Unfolder};
use crate::error::{Error, Result};
use crate::polyhedron::PolyhedronSpec;
use crate::scalar::Scalar;
use crate::symmetry::CanonicalCut;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedNet<T> {
    pub cut: CanonicalCut,
    pub layout: NetLayout<T>,
    pub centroid: Point2<T>,
    pub radius_of_gyration: T,
    pub overlap: bool,
    /// 1-based position by increasing radius of gyration.
    pub rank: usize,
}

/// Unfolds, measures and sorts closed-shell nets.
pub fn rank_nets<T: Scalar>(
    spec: &PolyhedronSpec<T>,
    cuts: &[CanonicalCut],
) -> Result<Vec<RankedNet<T>>> {
    rank_with(&Unfolder::new(spec)?, cuts)
}

/// Ranks with a prepared unfolder, which also serves open shells. Ties in
/// `R_g` fall back to the representative's edge-set order.
pub fn rank_with<T: Scalar>(
    unfolder: &Unfolder<T>,
    cuts: &[CanonicalCut],
) -> Result<Vec<RankedNet<T>>> {
    let mut ranked = cuts
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let wrap = |e: Error| {
                Error::InvalidCut(format!(
                    "cut #{i} {:?}: {e}",
                    c.representative.edges().to_vec()
                ))
            };
            let layout = unfolder.unfold(&c.representative).map_err(wrap)?;
            let (centroid, rg) = centroid_and_rg(&layout).map_err(wrap)?;
            let overlap = check_overlap(&layout).overlapping;
            Ok(RankedNet {
                cut: *c,
                layout,
                centroid,
                radius_of_gyration: rg,
                overlap,
                rank: 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| {
        a.radius_of_gyration
            .partial_cmp(&b.radius_of_gyration)
            .expect("finite radius")
            .then_with(|| a.cut.representative.cmp(&b.cut.representative))
    });
    for (i, r) in ranked.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(ranked)
}

/// The first net in rank order that does not overlap itself.
pub fn select_optimal_net<T: Scalar>(ranked: &[RankedNet<T>]) -> Result<&RankedNet<T>> {
    if ranked.is_empty() {
        return Err(Error::EmptyInput("ranking"));
    }
    ranked
        .iter()
        .find(|r| !r.overlap)
        .ok_or(Error::FallbackExhausted(ranked.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Cut;

    fn entry(rank: usize, overlap: bool) -> RankedNet<f64> {
        RankedNet {
            cut: CanonicalCut {
                representative: Cut(Default::default()),
                orbit_size: 1,
            },
            layout: NetLayout {
                root_face: 0,
                faces: vec![],
                hinges: vec![],
                connections: vec![],
            },
            centroid: [0.0, 0.0],
            radius_of_gyration: rank as f64,
            overlap,
            rank,
        }
    }

    #[test]
    fn selection_skips_overlapping() {
        let list = vec![entry(1, true), entry(2, false), entry(3, false)];
        assert_eq!(select_optimal_net(&list).unwrap().rank, 2);
        assert_eq!(select_optimal_net(&list[1..]).unwrap().rank, 2);
    }

    #[test]
    fn selection_errors() {
        assert!(matches!(
            select_optimal_net::<f64>(&[]),
            Err(Error::EmptyInput(_))
        ));
        let all = vec![entry(1, true), entry(2, true)];
        assert!(matches!(
            select_optimal_net(&all),
            Err(Error::FallbackExhausted(2))
        ));
    }
}
