//! The concrete search graphs: extension graphs over solids through the
//! distinguished point, extension graphs for 4×4 rank-metric codes, and the
//! census of admissible solids.

use rayon::prelude::*;

use super::SearchGraph;
use crate::codes::{rank_distance, ConstantDimensionCode, RankMetricCode};
use crate::geometry::{enumerate_grassmannian, special_hyperplane, Subspace};
use crate::linalg::{rank_of_rows, BitMatrix};
use crate::{Error, Result};

/// All solids of F₂⁸ intersecting every codeword in at most a point, in
/// canonical order. The scan over the full Grassmannian parallelizes; the
/// result is order-independent.
pub fn admissible_solids(code: &ConstantDimensionCode) -> Vec<Subspace> {
    assert_eq!(code.ambient(), 8);
    assert_eq!(code.dim(), 4);
    enumerate_grassmannian(8, 4)
        .into_par_iter()
        .filter(|u| code.words().iter().all(|w| u.intersection_dim(w) <= 1))
        .collect()
}

/// Number of solids intersecting every codeword in at most a point.
pub fn count_admissible_solids(code: &ConstantDimensionCode) -> usize {
    admissible_solids(code).len()
}

/// Builds the extension graph of a set of solids inside the distinguished
/// hyperplane: vertices are the solids containing the distinguished point
/// that intersect every member of `f` in at most a point; two vertices are
/// adjacent iff they intersect exactly in the distinguished point.
///
/// Vertices are labeled with the solids in canonical subspace order.
pub fn build_extension_graph(f: &[Subspace]) -> Result<SearchGraph<Subspace>> {
    let hyperplane = special_hyperplane(8);
    for s in f {
        if s.ambient() != 8 {
            return Err(Error::AmbientMismatch {
                left: s.ambient(),
                right: 8,
            });
        }
        if s.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                actual: s.dim(),
            });
        }
        if !hyperplane.contains(s) {
            return Err(Error::Precondition {
                reason: "extension graph input solids must lie in the distinguished hyperplane"
                    .into(),
            });
        }
    }
    // Solids through the distinguished point ⟨e8⟩ correspond to planes of
    // the quotient by it, i.e. planes of F2^7 extended by the e8 row.
    let vertices: Vec<Subspace> = enumerate_grassmannian(7, 3)
        .into_par_iter()
        .map(|plane| {
            let mut rows = plane.rows().to_vec();
            rows.push(1u64 << 7);
            Subspace::from_rows(8, rows)
        })
        .filter(|solid| f.iter().all(|s| solid.intersection_dim(s) <= 1))
        .collect();
    // Both vertices contain the distinguished point, so a 1-dimensional
    // intersection is exactly that point.
    Ok(SearchGraph::from_edge_fn(vertices, |u, w| {
        u.intersection_dim(w) == 1
    }))
}

/// Builds the extension graph of a 16-word 4×4 rank-metric code of minimum
/// distance 3 whose words all have zero last row: vertices are the 4×4
/// matrices (optionally restricted to a fixed last row) at rank distance ≥ 3
/// from every base word; edges join matrices at rank distance ≥ 3.
///
/// Vertices are ordered by (last row, row 0, row 1, row 2), so matrices
/// sharing a last row are consecutive — the order the clique engine wants.
pub fn build_mrd_extension_graph(
    base: &RankMetricCode,
    restrict_last_row: Option<u64>,
) -> Result<SearchGraph<BitMatrix>> {
    if base.shape() != (4, 4) {
        return Err(Error::Precondition {
            reason: "the base code must consist of 4x4 matrices".into(),
        });
    }
    if base.len() != 16 {
        return Err(Error::WrongBaseCode {
            expected: 16,
            actual: base.len(),
        });
    }
    if base.min_distance() != Some(3) {
        return Err(Error::Precondition {
            reason: "the base code must have minimum rank distance exactly 3".into(),
        });
    }
    if base.words().iter().any(|w| w.row(3) != 0) {
        return Err(Error::Precondition {
            reason: "every base word must have an all-zero last row".into(),
        });
    }
    if let Some(v) = restrict_last_row {
        if v >= 16 {
            return Err(Error::Precondition {
                reason: "the last-row restriction must be a 4-bit vector".into(),
            });
        }
    }

    let last_rows: Vec<u64> = match restrict_last_row {
        Some(v) => vec![v],
        None => (0..16).collect(),
    };
    let mut vertices = Vec::new();
    for &v in &last_rows {
        for r0 in 0..16u64 {
            for r1 in 0..16u64 {
                for r2 in 0..16u64 {
                    let rows = [r0, r1, r2, v];
                    let admissible = base.words().iter().all(|b| {
                        rank_of_rows(rows.iter().zip(b.rows()).map(|(&x, &y)| x ^ y)) >= 3
                    });
                    if admissible {
                        vertices.push(BitMatrix::from_rows(rows.to_vec(), 4));
                    }
                }
            }
        }
    }
    Ok(SearchGraph::from_edge_fn(vertices, |x, y| {
        rank_distance(x, y).unwrap() >= 3
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{
        configuration_to_solids, extended_lmrd, gabidulin, lifted_gabidulin, load_configuration,
        special_solid, zero_last_row_subcode, ExtensionVariant,
    };

    #[test]
    fn empty_code_admits_every_solid() {
        let empty = ConstantDimensionCode::new(8, 4, 6, Vec::new()).unwrap();
        assert_eq!(count_admissible_solids(&empty), 200787);
    }

    #[test]
    fn admissible_solids_of_the_lifted_code_meet_the_special_solid() {
        let lifted = lifted_gabidulin();
        let admissible = admissible_solids(&lifted);
        assert_eq!(admissible.len(), 451);
        // The same set, computed the other way: solids meeting S in at
        // least a plane.
        let s = special_solid();
        let by_plane: Vec<Subspace> = enumerate_grassmannian(8, 4)
            .into_iter()
            .filter(|u| u.intersection_dim(&s) >= 3)
            .collect();
        assert_eq!(admissible, by_plane);
    }

    #[test]
    fn no_solid_is_admissible_for_the_extended_code() {
        // Every solid admissible for the lifted code meets S in at least a
        // plane, so adding S to the code empties the census.
        let code = extended_lmrd(ExtensionVariant::A);
        assert_eq!(count_admissible_solids(&code), 0);
    }

    #[test]
    fn extension_graph_without_forbidden_solids_has_all_quotient_planes() {
        let g = build_extension_graph(&[]).unwrap();
        assert_eq!(g.len(), 11811);
        let point = crate::geometry::special_point(8);
        for v in [0usize, 1, 5000, 11810] {
            assert!(g.label(v).contains(&point));
        }
        assert!(g.labels().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn extension_graph_rejects_solids_outside_the_hyperplane() {
        assert!(build_extension_graph(&[special_solid()]).is_err());
    }

    #[test]
    fn extension_graph_vertex_count_for_one_configuration() {
        let planes = load_configuration(7).unwrap();
        let solids = configuration_to_solids(&planes).unwrap();
        let g = build_extension_graph(&solids).unwrap();
        assert_eq!(g.len(), 864);
    }

    #[test]
    fn mrd_extension_graph_validates_its_base() {
        let base = zero_last_row_subcode(&gabidulin(3));
        assert!(build_mrd_extension_graph(&base, Some(16)).is_err());
        let wrong_size = RankMetricCode::new(base.words()[..8].to_vec(), 3).unwrap();
        assert!(build_mrd_extension_graph(&wrong_size, None).is_err());
    }

    #[test]
    fn mrd_extension_graph_per_row_slices() {
        let base = zero_last_row_subcode(&gabidulin(3));
        // No candidate shares the zero last row with the base words.
        let zero_row = build_mrd_extension_graph(&base, Some(0)).unwrap();
        assert_eq!(zero_row.len(), 0);
        // Each nonzero last row contributes 128 vertices and supports a
        // 16-clique (one sixteenth of a full extension).
        let one = build_mrd_extension_graph(&base, Some(1)).unwrap();
        assert_eq!(one.len(), 128);
        assert_eq!(one.max_clique().0, 16);
    }
}
