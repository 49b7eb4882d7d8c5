//! Rank-metric codes, lifted MRD codes, and the two optimal (8,257,6;4)₂
//! codes, together with code verification and file I/O.

mod encoding;
mod files;
mod fixtures;

pub use encoding::{format_plane_encoding, parse_plane_encoding};
pub use files::{read_code_file, write_code_file, CodeFile};
pub use fixtures::{
    configuration_dual_solids, configuration_to_solids, format_configuration,
    load_configuration, CONFIGURATION_COUNT, CONFIGURATION_SIZES,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{incidence_cap, KnownValues};
use crate::geometry::{degree_profile, Subspace};
use crate::linalg::{rank_of_rows, BitMatrix, Gf16, LinearizedPoly};
use crate::{Error, Result};

/// Rank distance of two matrices of equal shape: the rank of their
/// difference (entrywise XOR in characteristic 2).
pub fn rank_distance(a: &BitMatrix, b: &BitMatrix) -> Result<usize> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::ShapeMismatch {
            left_rows: a.nrows(),
            left_cols: a.ncols(),
            right_rows: b.nrows(),
            right_cols: b.ncols(),
        });
    }
    Ok(rank_of_rows(
        a.rows().iter().zip(b.rows()).map(|(&x, &y)| x ^ y),
    ))
}

/// A set of m×n matrices over F₂ with a declared minimum rank distance,
/// verified on construction.
#[derive(Clone, Debug)]
pub struct RankMetricCode {
    nrows: usize,
    ncols: usize,
    words: Vec<BitMatrix>,
    declared_distance: usize,
}

impl RankMetricCode {
    pub fn new(words: Vec<BitMatrix>, declared_distance: usize) -> Result<Self> {
        let mut words = words;
        words.sort_unstable();
        let (nrows, ncols) = match words.first() {
            Some(w) => (w.nrows(), w.ncols()),
            None => (0, 0),
        };
        for w in &words {
            if w.nrows() != nrows || w.ncols() != ncols {
                return Err(Error::ShapeMismatch {
                    left_rows: nrows,
                    left_cols: ncols,
                    right_rows: w.nrows(),
                    right_cols: w.ncols(),
                });
            }
        }
        let code = RankMetricCode {
            nrows,
            ncols,
            words,
            declared_distance,
        };
        if let Some(found) = code.min_distance() {
            if found < declared_distance {
                return Err(Error::RankDistanceViolation {
                    found,
                    declared: declared_distance,
                });
            }
        }
        Ok(code)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn declared_distance(&self) -> usize {
        self.declared_distance
    }

    pub fn words(&self) -> &[BitMatrix] {
        &self.words
    }

    /// Exact minimum pairwise rank distance; `None` for fewer than two
    /// words.
    pub fn min_distance(&self) -> Option<usize> {
        if self.words.len() < 2 {
            return None;
        }
        (0..self.words.len() - 1)
            .into_par_iter()
            .map(|i| {
                (i + 1..self.words.len())
                    .map(|j| rank_distance(&self.words[i], &self.words[j]).unwrap())
                    .min()
                    .unwrap()
            })
            .min()
    }
}

/// The 4×4 binary Gabidulin code of minimum rank distance `d`: the matrices
/// of the q-polynomials a₀x + a₁x² + … + a_{4−d}x^(2^(4−d)) over F₁₆ in the
/// fixed basis {1, α, α², α³}. Its size meets the maximum-rank-distance
/// bound 2^((4−d+1)·4).
pub fn gabidulin(d: usize) -> RankMetricCode {
    assert!((1..=4).contains(&d), "distance must be between 1 and 4");
    let coeff_count = 4 - d + 1;
    let mut words = Vec::with_capacity(16usize.pow(coeff_count as u32));
    let mut coeffs = vec![Gf16::ZERO; coeff_count];
    loop {
        words.push(LinearizedPoly::new(coeffs.clone()).matrix());
        // Odometer step over all coefficient tuples.
        let mut i = 0;
        loop {
            if i == coeff_count {
                return RankMetricCode::new(words, d).expect("Gabidulin codes meet their distance");
            }
            let next = coeffs[i].value() + 1;
            if next < 16 {
                coeffs[i] = Gf16::new(next);
                break;
            }
            coeffs[i] = Gf16::ZERO;
            i += 1;
        }
    }
}

/// The subcode of a rank-metric code consisting of the words with all-zero
/// last row.
pub fn zero_last_row_subcode(code: &RankMetricCode) -> RankMetricCode {
    let words: Vec<BitMatrix> = code
        .words()
        .iter()
        .filter(|w| w.row(w.nrows() - 1) == 0)
        .cloned()
        .collect();
    RankMetricCode::new(words, code.declared_distance()).expect("subcode keeps the distance")
}

/// A constant-dimension code: equal-dimension subspaces of F₂^v with a
/// declared minimum subspace distance (verified on demand via
/// [`ConstantDimensionCode::verify`]).
#[derive(Clone, Debug)]
pub struct ConstantDimensionCode {
    ambient: usize,
    dim: usize,
    declared_distance: usize,
    words: Vec<Subspace>,
}

impl ConstantDimensionCode {
    pub fn new(
        ambient: usize,
        dim: usize,
        declared_distance: usize,
        mut words: Vec<Subspace>,
    ) -> Result<Self> {
        for w in &words {
            if w.ambient() != ambient {
                return Err(Error::AmbientMismatch {
                    left: w.ambient(),
                    right: ambient,
                });
            }
            if w.dim() != dim {
                return Err(Error::MixedDimensions {
                    expected: dim,
                    actual: w.dim(),
                });
            }
        }
        words.sort_unstable();
        if words.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::SubspaceDistanceViolation {
                found: 0,
                required: declared_distance,
            });
        }
        Ok(ConstantDimensionCode {
            ambient,
            dim,
            declared_distance,
            words,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn declared_distance(&self) -> usize {
        self.declared_distance
    }

    /// Codewords in canonical order.
    pub fn words(&self) -> &[Subspace] {
        &self.words
    }

    pub fn contains(&self, u: &Subspace) -> bool {
        self.words.binary_search(u).is_ok()
    }

    /// Exact minimum pairwise subspace distance; `None` for fewer than two
    /// words. The pairwise scan parallelizes with an order-independent min
    /// reduction.
    pub fn min_distance(&self) -> Option<usize> {
        min_distance_of(&self.words)
    }

    /// Distances from `u` to every codeword distinct from `u`, as a
    /// histogram distance → count.
    pub fn distance_profile(&self, u: &Subspace) -> std::collections::BTreeMap<usize, usize> {
        let mut hist = std::collections::BTreeMap::new();
        for w in &self.words {
            if w != u {
                *hist.entry(u.distance(w).unwrap()).or_insert(0) += 1;
            }
        }
        hist
    }

    /// The element-wise orthogonal code, with parameters (v, N, d; v−k).
    pub fn orthogonal(&self) -> ConstantDimensionCode {
        let words = self.words.iter().map(|u| u.dual()).collect();
        ConstantDimensionCode::new(
            self.ambient,
            self.ambient - self.dim,
            self.declared_distance,
            words,
        )
        .expect("duality preserves distinctness and dimensions")
    }

    /// Structural verification: exact minimum distance, incidence caps, and
    /// the off-hyperplane witness audit for near-maximum codes.
    pub fn verify(&self, table: &KnownValues) -> VerifyReport {
        verify_words(
            self.ambient,
            self.dim,
            &self.words,
            Some(self.declared_distance),
            table,
        )
    }
}

fn min_distance_of(words: &[Subspace]) -> Option<usize> {
    if words.len() < 2 {
        return None;
    }
    (0..words.len() - 1)
        .into_par_iter()
        .map(|i| {
            let u = &words[i];
            words[i + 1..]
                .iter()
                .map(|w| u.dim() + w.dim() - 2 * u.intersection_dim(w))
                .min()
                .unwrap()
        })
        .min()
}

/// Verification report for a set of equal-dimension subspaces.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub word_count: usize,
    pub ambient: usize,
    pub dimension: usize,
    pub dimension_ok: bool,
    /// Exact minimum distance; `None` for fewer than two words. Duplicated
    /// words register as a distance-0 pair.
    pub min_distance: Option<usize>,
    /// Declared distance if one was supplied, and whether it is met.
    pub declared_distance: Option<usize>,
    pub distance_ok: bool,
    pub max_point_degree: u32,
    pub max_hyperplane_degree: u32,
    /// Incidence caps derived from the computed minimum distance, when the
    /// parameters fall in the supported window.
    pub point_cap: Option<u64>,
    pub hyperplane_cap: Option<u64>,
    pub degree_caps_ok: bool,
    /// For near-maximum (8,N,6;4) codes (N ≥ 255): hyperplanes for which no
    /// point off the hyperplane has degree ≥ 14. Empty means the audit
    /// passed; `None` means the audit does not apply.
    pub hyperplane_witness_misses: Option<Vec<u64>>,
    pub ok: bool,
}

/// Runs the full verification over a word list that may contain duplicates.
pub fn verify_words(
    ambient: usize,
    dim: usize,
    words: &[Subspace],
    declared_distance: Option<usize>,
    table: &KnownValues,
) -> VerifyReport {
    let dimension_ok = words
        .iter()
        .all(|w| w.ambient() == ambient && w.dim() == dim);
    let mut sorted: Vec<Subspace> = words.to_vec();
    sorted.sort_unstable();
    let has_duplicates = sorted.windows(2).any(|w| w[0] == w[1]);
    let min_distance = if !dimension_ok || words.len() < 2 {
        None
    } else if has_duplicates {
        Some(0)
    } else {
        min_distance_of(&sorted)
    };
    let distance_ok = match (min_distance, declared_distance) {
        (Some(found), Some(declared)) => found >= declared,
        _ => true,
    };

    let profile = if dimension_ok {
        degree_profile(words).ok()
    } else {
        None
    };
    let max_point_degree = profile.as_ref().map_or(0, |p| p.max_point_degree());
    let max_hyperplane_degree = profile.as_ref().map_or(0, |p| p.max_hyperplane_degree());

    let caps = min_distance
        .filter(|&d| d >= 2 && d % 2 == 0 && d <= 2 * dim.min(ambient - dim))
        .and_then(|d| {
            let point = incidence_cap(2, ambient as u64, d as u64, dim as u64, 1, table).ok()?;
            let hyper = incidence_cap(
                2,
                ambient as u64,
                d as u64,
                dim as u64,
                ambient as u64 - 1,
                table,
            )
            .ok()?;
            Some((point, hyper))
        });
    let degree_caps_ok = caps.map_or(true, |(p, h)| {
        max_point_degree as u64 <= p && max_hyperplane_degree as u64 <= h
    });

    // Near-maximum audit: every hyperplane must see a point off it with
    // degree at least 14.
    let witness_audit = match (&profile, min_distance) {
        (Some(profile), Some(d)) if ambient == 8 && dim == 4 && d >= 6 && words.len() >= 255 => {
            let mut misses = Vec::new();
            for h in 1u64..(1 << ambient) {
                let found = (1u64..(1 << ambient))
                    .any(|p| (p & h).count_ones() % 2 == 1 && profile.point_degree(p) >= 14);
                if !found {
                    misses.push(h);
                }
            }
            Some(misses)
        }
        _ => None,
    };

    let ok = dimension_ok
        && distance_ok
        && degree_caps_ok
        && !has_duplicates
        && witness_audit.as_ref().map_or(true, |m| m.is_empty());
    VerifyReport {
        word_count: words.len(),
        ambient,
        dimension: dim,
        dimension_ok,
        min_distance,
        declared_distance,
        distance_ok,
        max_point_degree,
        max_hyperplane_degree,
        point_cap: caps.map(|c| c.0),
        hyperplane_cap: caps.map(|c| c.1),
        degree_caps_ok,
        hyperplane_witness_misses: witness_audit,
        ok,
    }
}

/// The lifting map: each m×n word A becomes the row space of (I_m | A) in
/// F₂^(m+n). Lifting doubles distances: dₛ(Λ(A), Λ(B)) = 2·d_r(A, B).
pub fn lift(code: &RankMetricCode) -> ConstantDimensionCode {
    let (m, n) = code.shape();
    let words = code
        .words()
        .iter()
        .map(|a| {
            let rows = (0..m).map(|i| (1u64 << i) | (a.row(i) << m)).collect();
            Subspace::from_rows(m + n, rows)
        })
        .collect();
    ConstantDimensionCode::new(m + n, m, 2 * code.declared_distance(), words)
        .expect("lifting is injective and doubles distances")
}

/// The special solid S = ⟨e₅, …, e₈⟩ of F₂⁸: the common complement of all
/// lifted 4×4 codewords.
pub fn special_solid() -> Subspace {
    Subspace::from_rows(8, (4..8).map(|i| 1u64 << i).collect())
}

/// The lifted 4×4 Gabidulin code with minimum subspace distance 6: an
/// (8, 256, 6; 4)₂ code.
pub fn lifted_gabidulin() -> ConstantDimensionCode {
    lift(&gabidulin(3))
}

/// The two ways of extending the lifted Gabidulin code by one codeword to an
/// optimal (8, 257, 6; 4)₂ code.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtensionVariant {
    /// Extra word ⟨(0₄ₓ₄ | I₄)⟩ = S, disjoint from every lifted codeword.
    A,
    /// Extra word ⟨(0₄ₓ₃ | I₄ | 0₄ₓ₁)⟩, meeting S in a plane.
    B,
}

impl ExtensionVariant {
    /// The extra codeword of the variant.
    pub fn extra_word(self) -> Subspace {
        match self {
            ExtensionVariant::A => special_solid(),
            ExtensionVariant::B => Subspace::from_rows(8, (3..7).map(|i| 1u64 << i).collect()),
        }
    }
}

/// An optimal (8, 257, 6; 4)₂ code: the lifted Gabidulin code extended by a
/// single codeword.
pub fn extended_lmrd(variant: ExtensionVariant) -> ConstantDimensionCode {
    let mut words = lifted_gabidulin().words().to_vec();
    words.push(variant.extra_word());
    ConstantDimensionCode::new(8, 4, 6, words).expect("the extension keeps distance 6")
}

/// Generators of the automorphism group of the lifted Gabidulin code as
/// invertible 8×8 matrices over F₂, identifying F₂⁸ with F₁₆ × F₁₆.
///
/// The four families are the simultaneous Frobenius (x,y) ↦ (x², y²), the
/// scalings (x,y) ↦ (αx, y) and (x,y) ↦ (x, αy), and the translations
/// (x,y) ↦ (x, p(x) + y) for the defining q-polynomials p; the translation
/// family is generated by the eight monomial basis polynomials. The group
/// they generate has order 4 · 15² · 2⁸ = 230400.
pub fn lmrd_automorphism_generators() -> Vec<BitMatrix> {
    let identity = BitMatrix::identity(4);
    let zero = BitMatrix::zero(4, 4);
    let frobenius = LinearizedPoly::new(vec![Gf16::ZERO, Gf16::ONE]).matrix();
    let alpha = LinearizedPoly::new(vec![Gf16::generator()]).matrix();

    let mut gens = vec![
        block_matrix(&frobenius, &zero, &zero, &frobenius),
        block_matrix(&alpha, &zero, &zero, &identity),
        block_matrix(&identity, &zero, &zero, &alpha),
    ];
    for degree in 0..2 {
        for i in 0..4 {
            let mut coeffs = vec![Gf16::ZERO; degree + 1];
            coeffs[degree] = Gf16::new(1 << i);
            let translation = LinearizedPoly::new(coeffs).matrix();
            gens.push(block_matrix(&identity, &translation, &zero, &identity));
        }
    }
    debug_assert!(gens.iter().all(|g| g.is_invertible()));
    gens
}

/// Assembles an 8×8 matrix from 4×4 blocks ((a, b), (c, d)).
fn block_matrix(a: &BitMatrix, b: &BitMatrix, c: &BitMatrix, d: &BitMatrix) -> BitMatrix {
    let mut rows = Vec::with_capacity(8);
    for i in 0..4 {
        rows.push(a.row(i) | (b.row(i) << 4));
    }
    for i in 0..4 {
        rows.push(c.row(i) | (d.row(i) << 4));
    }
    BitMatrix::from_rows(rows, 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{enumerate_grassmannian, special_hyperplane};
    use proptest::prelude::*;

    #[test]
    fn rank_distance_basics() {
        let i4 = BitMatrix::identity(4);
        let zero = BitMatrix::zero(4, 4);
        assert_eq!(rank_distance(&i4, &i4).unwrap(), 0);
        assert_eq!(rank_distance(&i4, &zero).unwrap(), 4);
        assert!(rank_distance(&i4, &BitMatrix::zero(3, 4)).is_err());
    }

    #[test]
    fn gabidulin_code_size_meets_the_mrd_bound() {
        let code = gabidulin(3);
        assert_eq!(code.len(), 256);
        assert_eq!(code.len(), 1 << ((4 - 3 + 1) * 4));
        assert_eq!(code.min_distance(), Some(3));
    }

    #[test]
    fn gabidulin_last_rows_are_equidistributed() {
        let code = gabidulin(3);
        let mut counts = [0usize; 16];
        for w in code.words() {
            counts[w.row(3) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c == 16));
        let base = zero_last_row_subcode(&code);
        assert_eq!(base.len(), 16);
        assert_eq!(base.min_distance(), Some(3));
    }

    #[test]
    fn lift_of_the_zero_matrix() {
        let code = RankMetricCode::new(vec![BitMatrix::zero(4, 4)], 3).unwrap();
        let lifted = lift(&code);
        assert_eq!(lifted.words()[0], Subspace::from_rows(8, vec![1, 2, 4, 8]));
    }

    #[test]
    fn lifted_gabidulin_is_an_8_256_6_4_code() {
        let code = lifted_gabidulin();
        assert_eq!((code.ambient(), code.len(), code.dim()), (8, 256, 4));
        assert_eq!(code.min_distance(), Some(6));
        // Every lifted word meets the special solid trivially.
        let s = special_solid();
        assert!(code.words().iter().all(|u| u.intersection_dim(&s) == 0));
    }

    proptest! {
        #[test]
        fn lifting_doubles_rank_distances(
            a0 in 0u8..16, a1 in 0u8..16, b0 in 0u8..16, b1 in 0u8..16,
        ) {
            let pa = LinearizedPoly::new(vec![Gf16::new(a0), Gf16::new(a1)]).matrix();
            let pb = LinearizedPoly::new(vec![Gf16::new(b0), Gf16::new(b1)]).matrix();
            prop_assume!(pa != pb);
            let code = RankMetricCode::new(vec![pa.clone(), pb.clone()], 0).unwrap();
            let lifted = lift(&code);
            let ds = lifted.words()[0].distance(&lifted.words()[1]).unwrap();
            prop_assert_eq!(ds, 2 * rank_distance(&pa, &pb).unwrap());
        }

        #[test]
        fn rank_distance_triangle_inequality(
            a in proptest::collection::vec(0u64..16, 4),
            b in proptest::collection::vec(0u64..16, 4),
            c in proptest::collection::vec(0u64..16, 4),
        ) {
            let a = BitMatrix::from_rows(a, 4);
            let b = BitMatrix::from_rows(b, 4);
            let c = BitMatrix::from_rows(c, 4);
            let ab = rank_distance(&a, &b).unwrap();
            let bc = rank_distance(&b, &c).unwrap();
            let ac = rank_distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc);
        }
    }

    #[test]
    fn extended_codes_reach_257_words_at_distance_6() {
        for variant in [ExtensionVariant::A, ExtensionVariant::B] {
            let code = extended_lmrd(variant);
            assert_eq!(code.len(), 257);
            assert_eq!(code.min_distance(), Some(6));
        }
    }

    #[test]
    fn extra_word_distance_profiles() {
        let a = extended_lmrd(ExtensionVariant::A);
        let hist = a.distance_profile(&ExtensionVariant::A.extra_word());
        assert_eq!(hist.get(&8), Some(&256));

        let b = extended_lmrd(ExtensionVariant::B);
        let hist = b.distance_profile(&ExtensionVariant::B.extra_word());
        assert_eq!(hist.get(&6), Some(&128));
        assert_eq!(hist.get(&8), Some(&128));
    }

    #[test]
    fn orthogonal_code_involutes_and_preserves_parameters() {
        let code = extended_lmrd(ExtensionVariant::B);
        let dual = code.orthogonal();
        assert_eq!(dual.len(), 257);
        assert_eq!(dual.dim(), 4);
        let back = dual.orthogonal();
        assert_eq!(back.words(), code.words());
    }

    #[test]
    fn lifted_gabidulin_dual_has_the_same_parameters() {
        let dual = lifted_gabidulin().orthogonal();
        assert_eq!((dual.ambient(), dual.len(), dual.dim()), (8, 256, 4));
        assert_eq!(dual.min_distance(), Some(6));
    }

    #[test]
    fn dualized_configuration_is_a_set_of_point_intersecting_solids() {
        let planes = load_configuration(7).unwrap();
        let code = ConstantDimensionCode::new(7, 3, 6, planes).unwrap();
        assert_eq!(code.min_distance(), Some(6));
        let dual = code.orthogonal();
        assert_eq!(dual.dim(), 4);
        assert_eq!(dual.min_distance(), Some(6));
    }

    #[test]
    fn verify_flags_single_word_codes() {
        let code = ConstantDimensionCode::new(8, 4, 6, vec![special_solid()]).unwrap();
        let report = code.verify(&KnownValues::default());
        assert_eq!(report.min_distance, None);
        assert!(report.ok);
    }

    #[test]
    fn verify_extended_codes() {
        let table = KnownValues::default();
        let report = extended_lmrd(ExtensionVariant::A).verify(&table);
        assert_eq!(report.min_distance, Some(6));
        assert_eq!(report.point_cap, Some(17));
        assert_eq!(report.hyperplane_cap, Some(17));
        assert!(report.degree_caps_ok);
        assert_eq!(report.hyperplane_witness_misses.as_deref(), Some(&[][..]));
        assert!(report.ok);

        // The lifted code alone already triggers the near-maximum audit.
        let report = lifted_gabidulin().verify(&table);
        assert!(report.max_point_degree <= 17 && report.max_hyperplane_degree <= 17);
        assert!(report.ok);
    }

    #[test]
    fn variant_b_witness_audit_passes_on_every_hyperplane() {
        let report = extended_lmrd(ExtensionVariant::B).verify(&KnownValues::default());
        assert_eq!(report.hyperplane_witness_misses.as_deref(), Some(&[][..]));
    }

    #[test]
    fn verify_detects_duplicates() {
        let mut words = lifted_gabidulin().words().to_vec();
        words.push(words[0].clone());
        let report = verify_words(8, 4, &words, Some(6), &KnownValues::default());
        assert_eq!(report.min_distance, Some(0));
        assert!(!report.ok);
    }

    #[test]
    fn automorphism_generators_stabilize_the_lifted_code() {
        let code = lifted_gabidulin();
        let words: std::collections::BTreeSet<_> = code.words().iter().cloned().collect();
        for g in lmrd_automorphism_generators() {
            let mapped: std::collections::BTreeSet<_> =
                code.words().iter().map(|u| u.apply(&g)).collect();
            assert_eq!(mapped, words);
        }
    }

    #[test]
    fn variant_b_extra_word_lies_in_the_special_hyperplane() {
        let b = ExtensionVariant::B.extra_word();
        assert!(special_hyperplane(8).contains(&b));
        assert_eq!(b.intersection_dim(&special_solid()), 3);
        assert!(!special_hyperplane(8).contains(&ExtensionVariant::A.extra_word()));
    }

    #[test]
    fn plane_count_sanity() {
        assert_eq!(enumerate_grassmannian(7, 3).len(), 11811);
    }
}
