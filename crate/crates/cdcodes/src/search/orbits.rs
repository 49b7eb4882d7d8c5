//! Group actions on graph vertices, orbit transversals, and orbit-anchored
//! splitting of clique enumeration.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;

use super::SearchGraph;
use crate::geometry::Subspace;
use crate::linalg::BitMatrix;
use crate::{Error, Result};

/// A permutation group acting on the vertices 0..n of a graph, given by
/// generator permutations. Construction verifies that every generator is a
/// bijection of the domain.
#[derive(Clone, Debug)]
pub struct GroupAction {
    n: usize,
    perms: Vec<Vec<u32>>,
}

impl GroupAction {
    /// The trivial action (no generators).
    pub fn identity(n: usize) -> Self {
        GroupAction {
            n,
            perms: Vec::new(),
        }
    }

    pub fn from_permutations(n: usize, perms: Vec<Vec<u32>>) -> Result<Self> {
        for perm in &perms {
            if perm.len() != n {
                return Err(Error::NotAPermutation {
                    reason: format!("length {} does not match domain size {n}", perm.len()),
                });
            }
            let mut seen = vec![false; n];
            for &img in perm {
                if img as usize >= n || seen[img as usize] {
                    return Err(Error::NotAPermutation {
                        reason: format!("image {img} repeated or out of range"),
                    });
                }
                seen[img as usize] = true;
            }
        }
        Ok(GroupAction { n, perms })
    }

    /// Derives vertex permutations from invertible matrices acting on
    /// subspace labels. Fails if a matrix does not map the domain onto
    /// itself.
    pub fn from_matrices(generators: &[BitMatrix], domain: &[Subspace]) -> Result<Self> {
        let index: std::collections::BTreeMap<&Subspace, u32> = domain
            .iter()
            .enumerate()
            .map(|(i, u)| (u, i as u32))
            .collect();
        if index.len() != domain.len() {
            return Err(Error::NotAPermutation {
                reason: "domain contains duplicate subspaces".into(),
            });
        }
        let mut perms = Vec::with_capacity(generators.len());
        for g in generators {
            if !g.is_invertible() {
                return Err(Error::SingularGenerator);
            }
            let mut perm = Vec::with_capacity(domain.len());
            for u in domain {
                let image = u.apply(g);
                match index.get(&image) {
                    Some(&i) => perm.push(i),
                    None => {
                        return Err(Error::NotAPermutation {
                            reason: "a generator maps the domain outside itself".into(),
                        })
                    }
                }
            }
            perms.push(perm);
        }
        GroupAction::from_permutations(domain.len(), perms)
    }

    pub fn domain_size(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.perms
    }

    /// Whether every generator preserves the adjacency of `g`.
    pub fn is_automorphism_of<L>(&self, g: &SearchGraph<L>) -> bool {
        if g.len() != self.n {
            return false;
        }
        self.perms.iter().all(|perm| {
            (0..self.n).all(|u| {
                (u + 1..self.n).all(|v| {
                    g.has_edge(u, v) == g.has_edge(perm[u] as usize, perm[v] as usize)
                })
            })
        })
    }

    /// The orbit of a vertex set under the generated group, as canonical
    /// sorted vectors.
    pub fn orbit_of_set(&self, set: &[usize]) -> BTreeSet<Vec<usize>> {
        let mut start = set.to_vec();
        start.sort_unstable();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(current) = queue.pop_front() {
            for perm in &self.perms {
                let mut image: Vec<usize> =
                    current.iter().map(|&v| perm[v] as usize).collect();
                image.sort_unstable();
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        seen
    }
}

/// An orbit transversal: one representative per orbit, ordered by weakly
/// decreasing orbit size (ties broken by the smallest vertex), plus the map
/// from each vertex to the position of its orbit.
#[derive(Clone, Debug)]
pub struct Transversal {
    representatives: Vec<usize>,
    sizes: Vec<usize>,
    orbit_index: Vec<u32>,
}

impl Transversal {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Position (0-based) of the orbit containing `v`.
    pub fn orbit_index(&self, v: usize) -> usize {
        self.orbit_index[v] as usize
    }
}

/// Computes the orbit partition of the domain under the action.
pub fn orbits(action: &GroupAction) -> Transversal {
    let n = action.domain_size();
    let mut orbit_of = vec![u32::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = members.len() as u32;
        let mut queue = VecDeque::from([start]);
        orbit_of[start] = id;
        let mut orbit = vec![start];
        while let Some(v) = queue.pop_front() {
            for perm in action.generators() {
                let img = perm[v] as usize;
                if orbit_of[img] == u32::MAX {
                    orbit_of[img] = id;
                    orbit.push(img);
                    queue.push_back(img);
                }
            }
        }
        members.push(orbit);
    }
    // Order orbits by decreasing size, ties by smallest representative.
    let mut order: Vec<usize> = (0..members.len()).collect();
    let rep_of = |orbit: &Vec<usize>| *orbit.iter().min().unwrap();
    order.sort_by_key(|&i| (usize::MAX - members[i].len(), rep_of(&members[i])));
    let mut representatives = Vec::with_capacity(members.len());
    let mut sizes = Vec::with_capacity(members.len());
    let mut orbit_index = vec![0u32; n];
    for (pos, &i) in order.iter().enumerate() {
        representatives.push(rep_of(&members[i]));
        sizes.push(members[i].len());
        for &v in &members[i] {
            orbit_index[v] = pos as u32;
        }
    }
    Transversal {
        representatives,
        sizes,
        orbit_index,
    }
}

/// One orbit-anchored subproblem of a clique enumeration.
#[derive(Clone, Debug)]
pub struct Subproblem {
    /// The forced transversal vertex.
    pub forced: usize,
    /// Candidate vertices: neighbors of `forced` whose orbit position is not
    /// smaller than the position of the forced vertex's orbit, ascending.
    pub vertices: Vec<usize>,
    /// Remaining clique size to find among `vertices`.
    pub target: usize,
}

/// Splits the search for cliques of size `target` into one subproblem per
/// transversal representative. The union over all subproblems of the orbits
/// of {forced} ∪ (cliques of the residual graph) is exactly the set of all
/// `target`-cliques of `g`.
pub fn split_subproblems<L>(
    g: &SearchGraph<L>,
    transversal: &Transversal,
    target: usize,
) -> Vec<Subproblem> {
    assert!(target >= 1, "target must be at least 1");
    transversal
        .representatives()
        .iter()
        .enumerate()
        .map(|(position, &rep)| {
            let vertices: Vec<usize> = (0..g.len())
                .filter(|&v| {
                    v != rep && g.has_edge(rep, v) && transversal.orbit_index(v) >= position
                })
                .collect();
            Subproblem {
                forced: rep,
                vertices,
                target: target - 1,
            }
        })
        .collect()
}

/// Enumerates all cliques of size `target` via orbit splitting: solves the
/// subproblems independently (in parallel), closes each found clique under
/// the group, and de-duplicates. The result equals the direct enumeration,
/// independent of worker scheduling.
pub fn enumerate_cliques_split<L: Clone + Send + Sync>(
    g: &SearchGraph<L>,
    action: &GroupAction,
    target: usize,
) -> Result<Vec<Vec<usize>>> {
    if !action.is_automorphism_of(g) {
        return Err(Error::NotAPermutation {
            reason: "a generator is not a graph automorphism".into(),
        });
    }
    if target == 0 {
        return Ok(vec![Vec::new()]);
    }
    let transversal = orbits(action);
    let subproblems = split_subproblems(g, &transversal, target);
    let found: Vec<Vec<usize>> = subproblems
        .par_iter()
        .flat_map_iter(|sub| {
            let residual = g.induced(&sub.vertices);
            residual
                .enumerate_cliques(sub.target)
                .into_iter()
                .map(|clique| {
                    let mut full: Vec<usize> =
                        clique.iter().map(|&i| sub.vertices[i]).collect();
                    full.push(sub.forced);
                    full.sort_unstable();
                    full
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for clique in found {
        for image in action.orbit_of_set(&clique) {
            all.insert(image);
        }
    }
    Ok(all.into_iter().collect())
}

/// Size of the matrix group generated by invertible v×v matrices over F₂,
/// by breadth-first closure. Supports v ≤ 11 (one 128-bit key per matrix).
pub fn group_closure_order(generators: &[BitMatrix]) -> Result<usize> {
    if generators.is_empty() {
        return Ok(1);
    }
    let v = generators[0].nrows();
    assert!(v * v <= 128, "group closure supports at most 11x11 matrices");
    for g in generators {
        if g.nrows() != v || g.ncols() != v {
            return Err(Error::ShapeMismatch {
                left_rows: v,
                left_cols: v,
                right_rows: g.nrows(),
                right_cols: g.ncols(),
            });
        }
        if !g.is_invertible() {
            return Err(Error::SingularGenerator);
        }
    }
    let pack = |m: &BitMatrix| -> u128 {
        m.rows()
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &r)| acc | ((r as u128) << (v * i)))
    };
    let identity = BitMatrix::identity(v);
    let mut seen = std::collections::HashSet::new();
    seen.insert(pack(&identity));
    let mut queue = VecDeque::from([identity]);
    while let Some(m) = queue.pop_front() {
        for g in generators {
            let next = m.mul(g);
            if seen.insert(pack(&next)) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> SearchGraph<()> {
        SearchGraph::from_edge_fn(vec![(); n], |_, _| true)
    }

    fn cycle(n: usize) -> SearchGraph<()> {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SearchGraph::from_edges(vec![(); n], &edges)
    }

    fn rotation(n: usize) -> GroupAction {
        let perm: Vec<u32> = (0..n).map(|i| ((i + 1) % n) as u32).collect();
        GroupAction::from_permutations(n, vec![perm]).unwrap()
    }

    #[test]
    fn identity_action_gives_singleton_orbits() {
        let t = orbits(&GroupAction::identity(5));
        assert_eq!(t.len(), 5);
        assert_eq!(t.sizes(), &[1, 1, 1, 1, 1]);
        assert_eq!(t.representatives(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn transitive_rotation_gives_one_orbit() {
        let t = orbits(&rotation(6));
        assert_eq!(t.len(), 1);
        assert_eq!(t.sizes(), &[6]);
        assert_eq!(t.representatives(), &[0]);
        assert!((0..6).all(|v| t.orbit_index(v) == 0));
    }

    #[test]
    fn orbit_sizes_are_weakly_decreasing() {
        // Two orbits: {0,2,4} and {1,3,5} under the double rotation, then
        // singletons 6, 7.
        let perm: Vec<u32> = vec![2, 3, 4, 5, 0, 1, 6, 7];
        let action = GroupAction::from_permutations(8, vec![perm]).unwrap();
        let t = orbits(&action);
        assert_eq!(t.sizes(), &[3, 3, 1, 1]);
        assert_eq!(t.representatives(), &[0, 1, 6, 7]);
        let total: usize = t.sizes().iter().sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(GroupAction::from_permutations(3, vec![vec![0, 0, 1]]).is_err());
        assert!(GroupAction::from_permutations(3, vec![vec![0, 1]]).is_err());
        assert!(GroupAction::from_permutations(3, vec![vec![0, 1, 3]]).is_err());
    }

    #[test]
    fn split_on_a_triangle_with_trivial_group() {
        let g = complete(3);
        let action = GroupAction::identity(3);
        let cliques = enumerate_cliques_split(&g, &action, 3).unwrap();
        assert_eq!(cliques, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn split_reconstructs_the_edge_set_of_a_cycle() {
        let g = cycle(6);
        let action = rotation(6);
        let mut edges = enumerate_cliques_split(&g, &action, 2).unwrap();
        edges.sort_unstable();
        let mut expected: Vec<Vec<usize>> =
            (0..6).map(|i| {
                let mut e = vec![i, (i + 1) % 6];
                e.sort_unstable();
                e
            }).collect();
        expected.sort_unstable();
        expected.dedup();
        assert_eq!(edges, expected);
    }

    #[test]
    fn split_rejects_non_automorphisms() {
        // A path is not preserved by rotation.
        let g = SearchGraph::from_edges(vec![(); 4], &[(0, 1), (1, 2), (2, 3)]);
        let action = rotation(4);
        assert!(enumerate_cliques_split(&g, &action, 2).is_err());
    }

    #[test]
    fn split_matches_direct_enumeration_on_planted_symmetry() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xfeed);
        for trial in 0..10 {
            let half = rng.gen_range(5..=12);
            let n = 2 * half;
            // Planted involution: v <-> v + half.
            let perm: Vec<u32> = (0..n).map(|v| ((v + half) % n) as u32).collect();
            let mut edges = BTreeSet::new();
            let edge_count = rng.gen_range(n..3 * n);
            for _ in 0..edge_count {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    let (a, b) = (u.min(v), u.max(v));
                    edges.insert((a, b));
                    let (ia, ib) = (perm[a] as usize, perm[b] as usize);
                    edges.insert((ia.min(ib), ia.max(ib)));
                }
            }
            let edges: Vec<(usize, usize)> = edges.into_iter().collect();
            let g = SearchGraph::from_edges(vec![(); n], &edges);
            let action = GroupAction::from_permutations(n, vec![perm]).unwrap();
            assert!(action.is_automorphism_of(&g), "trial {trial}");
            for target in 2..=4 {
                let direct = g.enumerate_cliques(target);
                let split = enumerate_cliques_split(&g, &action, target).unwrap();
                assert_eq!(direct, split, "trial {trial}, target {target}");
            }
        }
    }

    #[test]
    fn closure_of_the_general_linear_group_of_rank_two() {
        let swap = BitMatrix::from_rows(vec![0b10, 0b01], 2);
        let shear = BitMatrix::from_rows(vec![0b11, 0b10], 2);
        assert_eq!(group_closure_order(&[swap, shear]).unwrap(), 6);
        assert_eq!(group_closure_order(&[]).unwrap(), 1);
        let singular = BitMatrix::from_rows(vec![0b11, 0b11], 2);
        assert!(group_closure_order(&[singular]).is_err());
    }
}
