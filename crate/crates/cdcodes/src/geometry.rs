//! Subspaces of F₂^v as a metric space.
//!
//! A [`Subspace`] is stored as the unique reduced row echelon form of a
//! generator matrix, so equality, hashing and ordering are canonical. The
//! module provides the subspace distance, orthogonal complements, incidence
//! queries, Grassmannian enumeration in a deterministic canonical order, the
//! embedding of F₂⁷ into the distinguished hyperplane of F₂⁸, and per
//! point/hyperplane incidence counts.

use crate::linalg::{rank_of_rows, rref_rows, vec_mul, BitMatrix};
use crate::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_AMBIENT: usize = 9;

/// A subspace of F₂^v, canonically represented by its RREF generator matrix.
///
/// The canonical order on subspaces of a common ambient space is the
/// lexicographic order of the RREF rows read as little-endian integers,
/// smallest first; [`enumerate_grassmannian`] emits subspaces in this order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    ambient: usize,
    gens: BitMatrix,
}

impl Subspace {
    /// Builds the subspace spanned by arbitrary row words; the generator
    /// matrix is canonicalized to RREF.
    pub fn from_rows(ambient: usize, rows: Vec<u64>) -> Self {
        Self::from_matrix(ambient, BitMatrix::from_rows(rows, ambient))
    }

    /// Builds the subspace spanned by the rows of `m`.
    pub fn from_matrix(ambient: usize, m: BitMatrix) -> Self {
        assert!(ambient <= 64, "ambient dimension exceeds one machine word");
        assert_eq!(m.ncols(), ambient);
        Subspace {
            ambient,
            gens: m.rref(),
        }
    }

    /// The zero subspace of F₂^v.
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            gens: BitMatrix::zero(0, ambient),
        }
    }

    /// The full space F₂^v.
    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            gens: BitMatrix::identity(ambient),
        }
    }

    /// The point (1-space) spanned by a nonzero vector.
    pub fn point(ambient: usize, vector: u64) -> Self {
        assert_ne!(vector, 0, "a point needs a nonzero generator");
        Self::from_rows(ambient, vec![vector])
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.gens.nrows()
    }

    /// The canonical (RREF) generator matrix.
    pub fn gens(&self) -> &BitMatrix {
        &self.gens
    }

    /// Generator rows as packed words.
    pub fn rows(&self) -> &[u64] {
        self.gens.rows()
    }

    /// Membership test for a single vector.
    pub fn contains_vector(&self, x: u64) -> bool {
        let mut r = x;
        for &b in self.rows() {
            if (r >> b.trailing_zeros()) & 1 == 1 {
                r ^= b;
            }
        }
        r == 0
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && other.rows().iter().all(|&x| self.contains_vector(x))
    }

    /// All 2^dim − 1 nonzero vectors of the subspace.
    pub fn nonzero_vectors(&self) -> Vec<u64> {
        let k = self.dim();
        let mut out = vec![0u64; 1 << k];
        for m in 1usize..(1 << k) {
            out[m] = out[m & (m - 1)] ^ self.rows()[m.trailing_zeros() as usize];
        }
        out.remove(0);
        out
    }

    /// Subspace distance dim(U+W) − dim(U∩W).
    pub fn distance(&self, other: &Subspace) -> Result<usize> {
        self.check_ambient(other)?;
        let sum_dim = rank_of_rows(self.rows().iter().chain(other.rows()).copied());
        // dim(U∩W) = dim U + dim W − dim(U+W)
        Ok(2 * sum_dim - self.dim() - other.dim())
    }

    /// Dimension of the intersection, computed from ranks without
    /// materializing the intersection.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        debug_assert_eq!(self.ambient, other.ambient);
        let sum_dim = rank_of_rows(self.rows().iter().chain(other.rows()).copied());
        self.dim() + other.dim() - sum_dim
    }

    /// The subspace U + W.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_rows(
            self.ambient,
            self.rows().iter().chain(other.rows()).copied().collect(),
        ))
    }

    /// The subspace U ∩ W, via duality: (U^⊥ + W^⊥)^⊥.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let stacked = rref_rows(
            self.gens
                .kernel()
                .rows()
                .iter()
                .chain(other.gens.kernel().rows())
                .copied(),
        );
        let m = BitMatrix::from_rows(stacked, self.ambient);
        Ok(Subspace {
            ambient: self.ambient,
            gens: m.kernel(),
        })
    }

    /// The orthogonal complement with respect to the standard dot product.
    pub fn dual(&self) -> Subspace {
        Subspace {
            ambient: self.ambient,
            gens: self.gens.kernel(),
        }
    }

    /// Image under an invertible v×v matrix acting on row vectors from the
    /// right.
    pub fn apply(&self, m: &BitMatrix) -> Subspace {
        assert_eq!(m.nrows(), self.ambient);
        assert_eq!(m.ncols(), self.ambient);
        Subspace::from_rows(
            self.ambient,
            self.rows().iter().map(|&r| vec_mul(r, m)).collect(),
        )
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }
}

/// Whether `a` and `b` are incident, i.e. one contains the other.
pub fn incident(a: &Subspace, b: &Subspace) -> bool {
    a.contains(b) || b.contains(a)
}

/// Filters `collection` by incidence with `pivot`, preserving order.
pub fn incident_set<'a>(
    collection: impl IntoIterator<Item = &'a Subspace>,
    pivot: &Subspace,
) -> Vec<Subspace> {
    collection
        .into_iter()
        .filter(|u| incident(u, pivot))
        .cloned()
        .collect()
}

/// Enumerates every k-subspace of F₂^v exactly once, sorted in the canonical
/// order (lexicographic on RREF row tuples).
///
/// Generation walks the RREF pivot patterns directly, so the full middle
/// layer of F₂⁸ (200787 solids) enumerates in well under a second.
pub fn enumerate_grassmannian(v: usize, k: usize) -> Vec<Subspace> {
    assert!(v <= MAX_AMBIENT, "ambient dimension {v} not supported");
    assert!(k <= v);
    let mut out = Vec::with_capacity(grassmannian_size(v, k));
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        emit_pivot_pattern(v, &pivots, &mut out);
        // Advance the pivot combination lexicographically.
        let mut i = k;
        loop {
            if i == 0 {
                pivots.clear();
                break;
            }
            i -= 1;
            if pivots[i] + (k - i) < v {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if pivots.is_empty() || k == 0 {
            break;
        }
    }
    out.sort_unstable();
    out
}

/// Number of k-subspaces of F₂^v (Gaussian binomial at q = 2), as usize.
fn grassmannian_size(v: usize, k: usize) -> usize {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 1..=k {
        num *= (1u128 << (v - k + i)) - 1;
        den *= (1u128 << i) - 1;
    }
    (num / den) as usize
}

fn emit_pivot_pattern(v: usize, pivots: &[usize], out: &mut Vec<Subspace>) {
    let k = pivots.len();
    let pivot_mask: u64 = pivots.iter().map(|&p| 1u64 << p).sum();
    // Free coordinates per row: non-pivot columns to the right of the pivot.
    let mut free: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut total = 0usize;
    for &p in pivots {
        let cols: Vec<usize> = (p + 1..v)
            .filter(|j| pivot_mask >> j & 1 == 0)
            .collect();
        total += cols.len();
        free.push(cols);
    }
    for assignment in 0u64..(1u64 << total) {
        let mut rows = Vec::with_capacity(k);
        let mut offset = 0;
        for (i, cols) in free.iter().enumerate() {
            let mut row = 1u64 << pivots[i];
            for (t, &j) in cols.iter().enumerate() {
                row |= ((assignment >> (offset + t)) & 1) << j;
            }
            offset += cols.len();
            rows.push(row);
        }
        out.push(Subspace {
            ambient: v,
            gens: BitMatrix::from_rows(rows, v),
        });
    }
}

/// The distinguished point ⟨e_v⟩ (last coordinate).
pub fn special_point(v: usize) -> Subspace {
    Subspace::point(v, 1u64 << (v - 1))
}

/// The distinguished hyperplane {x | x_v = 0} = ⟨e₁, …, e_{v−1}⟩.
pub fn special_hyperplane(v: usize) -> Subspace {
    Subspace::from_rows(v, (0..v - 1).map(|i| 1u64 << i).collect())
}

/// The canonical embedding of F₂⁷ into the distinguished hyperplane of F₂⁸,
/// appending a zero eighth coordinate to every generator.
pub fn embed_in_hyperplane(u: &Subspace) -> Result<Subspace> {
    if u.ambient() != 7 {
        return Err(Error::AmbientMismatch {
            left: u.ambient(),
            right: 7,
        });
    }
    // Bit 7 is unused in 7-column rows, so the RREF carries over verbatim.
    Ok(Subspace {
        ambient: 8,
        gens: BitMatrix::from_rows(u.rows().to_vec(), 8),
    })
}

/// Restricts a subspace of the distinguished hyperplane of F₂⁸ back to F₂⁷.
pub fn restrict_from_hyperplane(u: &Subspace) -> Result<Subspace> {
    if u.ambient() != 8 {
        return Err(Error::AmbientMismatch {
            left: u.ambient(),
            right: 8,
        });
    }
    if !special_hyperplane(8).contains(u) {
        return Err(Error::PointInHyperplane);
    }
    Ok(Subspace {
        ambient: 7,
        gens: BitMatrix::from_rows(u.rows().to_vec(), 7),
    })
}

/// For a point p = ⟨(p′ | 1)⟩ of F₂⁸ off the distinguished hyperplane,
/// returns the invertible matrix (I₇ 0; p′ 1) in the hyperplane stabilizer
/// that maps p to the distinguished point. The matrix is an involution.
pub fn normalize_point(p: &Subspace) -> Result<BitMatrix> {
    if p.ambient() != 8 {
        return Err(Error::AmbientMismatch {
            left: p.ambient(),
            right: 8,
        });
    }
    if p.dim() != 1 {
        return Err(Error::WrongDimension {
            expected: 1,
            actual: p.dim(),
        });
    }
    let g = p.rows()[0];
    if g >> 7 & 1 == 0 {
        return Err(Error::PointInHyperplane);
    }
    let mut rows: Vec<u64> = (0..7).map(|i| 1u64 << i).collect();
    rows.push(g);
    Ok(BitMatrix::from_rows(rows, 8))
}

/// Incidence counts of a family of equal-dimensional subspaces with every
/// point and every hyperplane of the ambient space.
#[derive(Clone, Debug)]
pub struct DegreeProfile {
    ambient: usize,
    point: Vec<u32>,
    hyperplane: Vec<u32>,
}

impl DegreeProfile {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Number of family members through the point spanned by `vector`.
    pub fn point_degree(&self, vector: u64) -> u32 {
        self.point[vector as usize]
    }

    /// Number of family members inside the hyperplane with normal `vector`.
    pub fn hyperplane_degree(&self, normal: u64) -> u32 {
        self.hyperplane[normal as usize]
    }

    pub fn max_point_degree(&self) -> u32 {
        self.point.iter().copied().max().unwrap_or(0)
    }

    pub fn max_hyperplane_degree(&self) -> u32 {
        self.hyperplane.iter().copied().max().unwrap_or(0)
    }

    pub fn point_degree_sum(&self) -> u64 {
        self.point.iter().map(|&d| d as u64).sum()
    }

    /// Nonzero vectors of the ambient space, i.e. all point generators.
    pub fn vectors(&self) -> impl Iterator<Item = u64> {
        1..(1u64 << self.ambient)
    }
}

/// Computes the degree profile of a family of subspaces of equal ambient
/// dimension and equal dimension.
pub fn degree_profile(family: &[Subspace]) -> Result<DegreeProfile> {
    let ambient = family.first().map_or(8, |u| u.ambient());
    let dim = family.first().map_or(0, |u| u.dim());
    for u in family {
        if u.ambient() != ambient {
            return Err(Error::AmbientMismatch {
                left: u.ambient(),
                right: ambient,
            });
        }
        if u.dim() != dim {
            return Err(Error::MixedDimensions {
                expected: dim,
                actual: u.dim(),
            });
        }
    }
    let n = 1usize << ambient;
    let mut point = vec![0u32; n];
    let mut hyperplane = vec![0u32; n];
    for u in family {
        for x in u.nonzero_vectors() {
            point[x as usize] += 1;
        }
        for h in u.dual().nonzero_vectors() {
            hyperplane[h as usize] += 1;
        }
    }
    Ok(DegreeProfile {
        ambient,
        point,
        hyperplane,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::gaussian_binomial;
    use proptest::prelude::*;

    fn solid_left() -> Subspace {
        // ⟨(I4 | 0)⟩ in F2^8
        Subspace::from_rows(8, (0..4).map(|i| 1u64 << i).collect())
    }

    fn solid_right() -> Subspace {
        // ⟨(0 | I4)⟩ in F2^8
        Subspace::from_rows(8, (4..8).map(|i| 1u64 << i).collect())
    }

    #[test]
    fn distance_to_self_is_zero() {
        let u = solid_left();
        assert_eq!(u.distance(&u).unwrap(), 0);
    }

    #[test]
    fn complementary_solids_are_at_distance_eight() {
        let (u, w) = (solid_left(), solid_right());
        assert_eq!(u.distance(&w).unwrap(), 8);
        assert_eq!(u.intersect(&w).unwrap(), Subspace::zero(8));
        assert_eq!(u.sum(&w).unwrap(), Subspace::full(8));
    }

    #[test]
    fn distance_requires_matching_ambient() {
        let u = Subspace::full(7);
        let w = Subspace::full(8);
        assert!(u.distance(&w).is_err());
    }

    #[test]
    fn dual_of_full_space_is_zero() {
        assert_eq!(Subspace::full(8).dual(), Subspace::zero(8));
    }

    #[test]
    fn dual_of_special_hyperplane_is_special_point() {
        assert_eq!(special_hyperplane(8).dual(), special_point(8));
        assert!(!special_hyperplane(8).contains(&special_point(8)));
    }

    #[test]
    fn dual_of_a_plane_in_dim_seven_is_a_solid() {
        let plane = Subspace::from_rows(7, vec![0b0000001, 0b0000110, 0b0111000]);
        assert_eq!(plane.dim(), 3);
        assert_eq!(plane.dual().dim(), 4);
    }

    #[test]
    fn idempotent_lattice_operations() {
        let u = solid_left();
        assert_eq!(u.intersect(&u).unwrap(), u);
        assert_eq!(u.sum(&u).unwrap(), u);
    }

    #[test]
    fn grassmannian_counts() {
        assert_eq!(enumerate_grassmannian(4, 2).len(), 35);
        assert_eq!(enumerate_grassmannian(4, 0).len(), 1);
        assert_eq!(enumerate_grassmannian(7, 3).len(), 11811);
        assert_eq!(
            enumerate_grassmannian(8, 4).len() as u64,
            gaussian_binomial(8, 4, 2).unwrap()
        );
    }

    #[test]
    fn grassmannian_is_sorted_and_duplicate_free() {
        let all = enumerate_grassmannian(5, 2);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|u| u.dim() == 2 && u.gens().is_rref()));
    }

    #[test]
    fn incident_set_with_extreme_pivots() {
        let lines = enumerate_grassmannian(4, 2);
        assert_eq!(incident_set(&lines, &Subspace::full(4)).len(), 35);
        assert_eq!(incident_set(&lines, &Subspace::zero(4)).len(), 35);
        let point = Subspace::point(4, 0b0001);
        assert_eq!(incident_set(&lines, &point).len(), 7);
    }

    #[test]
    fn embedding_lands_in_the_special_hyperplane() {
        assert_eq!(
            embed_in_hyperplane(&Subspace::zero(7)).unwrap(),
            Subspace::zero(8)
        );
        assert_eq!(
            embed_in_hyperplane(&Subspace::full(7)).unwrap(),
            special_hyperplane(8)
        );
        assert!(embed_in_hyperplane(&Subspace::full(8)).is_err());
        let h = special_hyperplane(8);
        for plane in enumerate_grassmannian(7, 3).iter().step_by(997) {
            let img = embed_in_hyperplane(plane).unwrap();
            assert!(h.contains(&img));
            assert_eq!(img.dim(), 3);
            assert_eq!(restrict_from_hyperplane(&img).unwrap(), *plane);
        }
    }

    #[test]
    fn normalize_point_fixes_hyperplane_and_moves_point() {
        let p = Subspace::point(8, 0b10000001);
        let m = normalize_point(&p).unwrap();
        assert!(m.is_invertible());
        assert_eq!(p.apply(&m), special_point(8));
        assert_eq!(special_hyperplane(8).apply(&m), special_hyperplane(8));
    }

    #[test]
    fn normalize_point_identity_case() {
        let m = normalize_point(&special_point(8)).unwrap();
        assert_eq!(special_point(8).apply(&m), special_point(8));
    }

    #[test]
    fn normalize_point_all_off_hyperplane_points() {
        let mut count = 0;
        for x in 1u64..256 {
            if x >> 7 & 1 == 0 {
                continue;
            }
            let p = Subspace::point(8, x);
            let m = normalize_point(&p).unwrap();
            assert_eq!(p.apply(&m), special_point(8));
            assert_eq!(special_hyperplane(8).apply(&m), special_hyperplane(8));
            count += 1;
        }
        assert_eq!(count, 128);
        assert!(normalize_point(&Subspace::point(8, 0b1)).is_err());
    }

    #[test]
    fn degree_profile_of_a_single_solid() {
        let profile = degree_profile(&[solid_left()]).unwrap();
        let ones = profile.vectors().filter(|&x| profile.point_degree(x) == 1).count();
        assert_eq!(ones, 15);
        assert_eq!(profile.point_degree_sum(), 15);
    }

    #[test]
    fn degree_profile_of_empty_family() {
        let profile = degree_profile(&[]).unwrap();
        assert_eq!(profile.max_point_degree(), 0);
        assert_eq!(profile.max_hyperplane_degree(), 0);
    }

    #[test]
    fn dual_is_a_bijection_between_complementary_grassmannians() {
        let planes = enumerate_grassmannian(6, 3);
        let duals: std::collections::BTreeSet<_> =
            planes.iter().map(|u| u.dual()).collect();
        assert_eq!(duals.len(), planes.len());
        assert!(duals.iter().all(|u| u.dim() == 3));

        let lines = enumerate_grassmannian(5, 2);
        let solids = enumerate_grassmannian(5, 3);
        assert_eq!(lines.len(), solids.len());
        let mut mapped: Vec<_> = lines.iter().map(|u| u.dual()).collect();
        mapped.sort_unstable();
        assert_eq!(mapped, solids);
    }

    fn arb_subspace(v: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(0u64..(1 << v), 0..=v)
            .prop_map(move |rows| Subspace::from_rows(v, rows))
    }

    proptest! {
        #[test]
        fn modular_law(u in arb_subspace(6), w in arb_subspace(6)) {
            let s = u.sum(&w).unwrap();
            let i = u.intersect(&w).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
            prop_assert_eq!(i.dim(), u.intersection_dim(&w));
            prop_assert!(s.contains(&u) && s.contains(&w));
            prop_assert!(u.contains(&i) && w.contains(&i));
        }

        #[test]
        fn distance_is_a_metric(
            u in arb_subspace(6),
            w in arb_subspace(6),
            x in arb_subspace(6),
        ) {
            let duw = u.distance(&w).unwrap();
            prop_assert_eq!(duw % 2, (u.dim() + w.dim()) % 2);
            prop_assert_eq!(duw, w.distance(&u).unwrap());
            prop_assert_eq!(duw == 0, u == w);
            prop_assert!(duw <= u.distance(&x).unwrap() + x.distance(&w).unwrap());
        }

        #[test]
        fn dual_is_an_isometry(u in arb_subspace(6), w in arb_subspace(6)) {
            prop_assert_eq!(
                u.distance(&w).unwrap(),
                u.dual().distance(&w.dual()).unwrap()
            );
        }

        #[test]
        fn dual_reverses_incidence(u in arb_subspace(6), w in arb_subspace(6)) {
            prop_assert_eq!(w.contains(&u), u.dual().contains(&w.dual()));
            prop_assert_eq!(u.dual().dual(), u);
        }
    }
}
