//! Construction of the packing models: the ambient model over the middle
//! Grassmannian layer of an even-dimensional space, the restriction model
//! inside the distinguished hyperplane, and plain (partial) spread models.

use super::{Constraint, LinearModel, Sense, Variable};
use crate::geometry::{degree_profile, enumerate_grassmannian, Subspace};
use crate::search::SearchGraph;
use crate::{Error, Result};

/// All `dim`-dimensional subspaces of `u`, one per coordinate pattern of the
/// internal basis.
fn sub_subspaces(u: &Subspace, patterns: &[Subspace]) -> Vec<Subspace> {
    patterns
        .iter()
        .map(|pattern| {
            let rows = pattern
                .rows()
                .iter()
                .map(|&bits| {
                    let mut row = 0u64;
                    let mut b = bits;
                    while b != 0 {
                        row ^= u.rows()[b.trailing_zeros() as usize];
                        b &= b - 1;
                    }
                    row
                })
                .collect();
            Subspace::from_rows(u.ambient(), rows)
        })
        .collect()
}

fn check_pairwise_point_intersections(subspaces: &[Subspace], required: usize) -> Result<()> {
    for (i, a) in subspaces.iter().enumerate() {
        for b in &subspaces[i + 1..] {
            let shared = a.intersection_dim(b);
            if shared > 1 {
                return Err(Error::SubspaceDistanceViolation {
                    found: a.dim() + b.dim() - 2 * shared,
                    required,
                });
            }
        }
    }
    Ok(())
}

/// The plain packing model of a spread search: one binary variable per
/// k-space of F₂^v, one `≤ 1` constraint per point.
pub fn build_spread_model(v: usize, k: usize) -> Result<LinearModel> {
    if k == 0 || k > v {
        return Err(Error::Precondition {
            reason: "spread models need 0 < k <= v".into(),
        });
    }
    let layer = enumerate_grassmannian(v, k);
    let vars: Vec<Variable> = layer
        .iter()
        .enumerate()
        .map(|(key, u)| Variable {
            key: key as u32,
            subspace: Some(u.clone()),
            binary: true,
        })
        .collect();
    let mut model = LinearModel::new(format!("spread-v{v}-k{k}"), (v, k), vars);
    let mut terms: Vec<Vec<(u32, i32)>> = vec![Vec::new(); (1 << v) - 1];
    for (pos, u) in layer.iter().enumerate() {
        for x in u.nonzero_vectors() {
            terms[x as usize - 1].push((pos as u32, 1));
        }
    }
    for (i, terms) in terms.into_iter().enumerate() {
        model.push_constraint(Constraint {
            label: format!("w1_{i}"),
            terms,
            sense: Sense::Le,
            rhs: 1,
        });
    }
    Ok(model)
}

/// The ambient extension model for an even-dimensional space: binary
/// variables for all (v/2)-spaces of F₂^v, incidence constraints `≤ f` for
/// points and hyperplanes and `≤ 1` for lines and co-lines, and equality
/// fixings for a prescribed codeword set.
///
/// For `v = 8` this is the full 200787-variable model with the constraint
/// census 255 / 10795 / 10795 / 255.
pub fn build_ambient_model(
    v: usize,
    fixed: &[Subspace],
    f: u64,
    relax: bool,
) -> Result<LinearModel> {
    if !matches!(v, 4 | 6 | 8) {
        return Err(Error::Precondition {
            reason: "ambient models support v in {4, 6, 8}".into(),
        });
    }
    let k = v / 2;
    for u in fixed {
        if u.ambient() != v {
            return Err(Error::AmbientMismatch {
                left: u.ambient(),
                right: v,
            });
        }
        if u.dim() != k {
            return Err(Error::WrongDimension {
                expected: k,
                actual: u.dim(),
            });
        }
    }
    check_pairwise_point_intersections(fixed, 2 * k - 2)?;
    if !fixed.is_empty() {
        let profile = degree_profile(fixed)?;
        let max_incidence = profile.max_point_degree().max(profile.max_hyperplane_degree());
        if (max_incidence as u64) > f {
            return Err(Error::Precondition {
                reason: format!(
                    "f = {f} is below the prescribed set's maximum incidence {max_incidence}"
                ),
            });
        }
    }

    let layer = enumerate_grassmannian(v, k);
    let vars: Vec<Variable> = layer
        .iter()
        .enumerate()
        .map(|(key, u)| Variable {
            key: key as u32,
            subspace: Some(u.clone()),
            binary: !relax,
        })
        .collect();
    let mut model = LinearModel::new(format!("ambient-v{v}"), (v, k), vars);

    let mut family_dims = vec![1, 2, v - 2, v - 1];
    family_dims.dedup();

    let families: Vec<Vec<Constraint>> = {
        use rayon::prelude::*;
        family_dims
            .par_iter()
            .map(|&w| {
                let rhs = if w == 1 || w == v - 1 { f as i64 } else { 1 };
                build_incidence_family(v, w, rhs, &layer)
            })
            .collect()
    };
    for family in families {
        for c in family {
            model.push_constraint(c);
        }
    }

    for u in fixed {
        let pos = layer
            .binary_search(u)
            .map_err(|_| Error::UnknownVariable {
                name: format!("{u:?}"),
            })?;
        model.fix(pos as u32, 1);
    }
    Ok(model)
}

/// Constraints `Σ x_U ≤ rhs` over all w-dimensional subspaces W of F₂^v,
/// where the sum ranges over the layer members incident with W.
fn build_incidence_family(
    v: usize,
    w: usize,
    rhs: i64,
    layer: &[Subspace],
) -> Vec<Constraint> {
    let k = layer.first().map_or(0, |u| u.dim());
    let spaces = enumerate_grassmannian(v, w);
    let mut terms: Vec<Vec<(u32, i32)>> = vec![Vec::new(); spaces.len()];

    if w == 1 {
        for (pos, u) in layer.iter().enumerate() {
            for x in u.nonzero_vectors() {
                terms[x as usize - 1].push((pos as u32, 1));
            }
        }
    } else if w == v - 1 {
        // Hyperplanes containing U correspond to the nonzero vectors of U's
        // orthogonal complement.
        let mut index_of_normal = vec![u32::MAX; 1 << v];
        for (i, h) in spaces.iter().enumerate() {
            index_of_normal[h.dual().rows()[0] as usize] = i as u32;
        }
        for (pos, u) in layer.iter().enumerate() {
            for h in u.dual().nonzero_vectors() {
                terms[index_of_normal[h as usize] as usize].push((pos as u32, 1));
            }
        }
    } else if w < k {
        let patterns = enumerate_grassmannian(k, w);
        for (pos, u) in layer.iter().enumerate() {
            for sub in sub_subspaces(u, &patterns) {
                let i = spaces.binary_search(&sub).expect("subspace is enumerated");
                terms[i].push((pos as u32, 1));
            }
        }
    } else {
        // Superspaces of U correspond to subspaces of its dual.
        let patterns = enumerate_grassmannian(v - k, v - w);
        for (pos, u) in layer.iter().enumerate() {
            let dual = u.dual();
            for sub in sub_subspaces(&dual, &patterns) {
                let sup = sub.dual();
                let i = spaces.binary_search(&sup).expect("subspace is enumerated");
                terms[i].push((pos as u32, 1));
            }
        }
    }

    terms
        .into_iter()
        .enumerate()
        .map(|(i, terms)| Constraint {
            label: format!("w{w}_{i}"),
            terms,
            sense: Sense::Le,
            rhs,
        })
        .collect()
}

/// Largest number of variable planes inside the 5-space `w` that pairwise
/// intersect in at most a point, for the restriction model of `f` (solids of
/// F₂⁷). Computed exactly with the clique engine.
pub fn omega(f: &[Subspace], w: &Subspace) -> Result<usize> {
    if w.ambient() != 7 || w.dim() != 5 {
        return Err(Error::WrongDimension {
            expected: 5,
            actual: w.dim(),
        });
    }
    if f.iter().any(|s| w.contains(s)) {
        return Err(Error::Precondition {
            reason: "the 5-space contains a prescribed solid".into(),
        });
    }
    let patterns = enumerate_grassmannian(5, 3);
    let planes: Vec<Subspace> = sub_subspaces(w, &patterns)
        .into_iter()
        .filter(|p| f.iter().all(|s| p.intersection_dim(s) <= 1))
        .collect();
    Ok(max_point_intersecting_set(&planes))
}

fn max_point_intersecting_set(planes: &[Subspace]) -> usize {
    if planes.is_empty() {
        return 0;
    }
    let graph = SearchGraph::from_edge_fn(planes.to_vec(), |a, b| a.intersection_dim(b) <= 1);
    graph.max_clique().0
}

/// The restriction model of a hyperplane configuration: variables are the
/// planes of F₂⁷ meeting every prescribed solid in at most a point, with
/// incidence constraints over points, lines, solids, 5-spaces (capped by the
/// packing number ω) and hyperplanes, plus the cardinality cut.
///
/// `f` must consist of 16 or 17 solids of F₂⁷ that pairwise intersect in at
/// most a point (the duals of a configuration of pairwise disjoint planes).
/// The objective carries the constant offset #f; the cardinality cut is
/// stored in normalized form `Σ x ≥ 255 − #f`.
pub fn build_restriction_model(f: &[Subspace]) -> Result<LinearModel> {
    if !matches!(f.len(), 16 | 17) {
        return Err(Error::Precondition {
            reason: format!("restriction models need 16 or 17 solids, got {}", f.len()),
        });
    }
    for s in f {
        if s.ambient() != 7 {
            return Err(Error::AmbientMismatch {
                left: s.ambient(),
                right: 7,
            });
        }
        if s.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                actual: s.dim(),
            });
        }
    }
    check_pairwise_point_intersections(f, 6)?;
    let size = f.len() as i64;

    let planes = enumerate_grassmannian(7, 3);
    let mut vars = Vec::new();
    let mut var_planes = Vec::new();
    for (key, p) in planes.iter().enumerate() {
        if f.iter().all(|s| p.intersection_dim(s) <= 1) {
            vars.push(Variable {
                key: key as u32,
                subspace: Some(p.clone()),
                binary: true,
            });
            var_planes.push(p.clone());
        }
    }
    let mut model = LinearModel::new("restriction-v7".to_string(), (7, 3), vars);
    model.set_objective_constant(size);

    let lines = enumerate_grassmannian(7, 2);
    let solids = enumerate_grassmannian(7, 4);
    let five_spaces = enumerate_grassmannian(7, 5);

    // Subspaces incident with a prescribed solid are excluded from their
    // constraint families.
    let mut line_excluded = vec![false; lines.len()];
    let mut five_excluded = vec![false; five_spaces.len()];
    let line_patterns = enumerate_grassmannian(4, 2);
    let five_over_solid_patterns = enumerate_grassmannian(3, 2);
    for s in f {
        for line in sub_subspaces(s, &line_patterns) {
            line_excluded[lines.binary_search(&line).unwrap()] = true;
        }
        let dual = s.dual();
        for sub in sub_subspaces(&dual, &five_over_solid_patterns) {
            let sup = sub.dual();
            five_excluded[five_spaces.binary_search(&sup).unwrap()] = true;
        }
    }

    // Incidence counts of the prescribed solids with points and hyperplanes.
    let f_profile = degree_profile(f)?;

    // Gather terms per family.
    let mut point_terms: Vec<Vec<(u32, i32)>> = vec![Vec::new(); 127];
    let mut line_terms: Vec<Vec<(u32, i32)>> = vec![Vec::new(); lines.len()];
    let mut solid_terms: Vec<Vec<(u32, i32)>> = vec![Vec::new(); solids.len()];
    let mut five_terms: Vec<Vec<(u32, i32)>> = vec![Vec::new(); five_spaces.len()];
    let mut hyper_terms: Vec<Vec<(u32, i32)>> = vec![Vec::new(); 127];

    let plane_line_patterns = enumerate_grassmannian(3, 2);
    let solid_over_patterns = enumerate_grassmannian(4, 3);
    let five_over_patterns = enumerate_grassmannian(4, 2);
    for (pos, p) in var_planes.iter().enumerate() {
        let pos = pos as u32;
        for x in p.nonzero_vectors() {
            point_terms[x as usize - 1].push((pos, 1));
        }
        for line in sub_subspaces(p, &plane_line_patterns) {
            line_terms[lines.binary_search(&line).unwrap()].push((pos, 1));
        }
        let dual = p.dual();
        for sub in sub_subspaces(&dual, &solid_over_patterns) {
            solid_terms[solids.binary_search(&sub.dual()).unwrap()].push((pos, 1));
        }
        for sub in sub_subspaces(&dual, &five_over_patterns) {
            five_terms[five_spaces.binary_search(&sub.dual()).unwrap()].push((pos, 1));
        }
        for h in dual.nonzero_vectors() {
            hyper_terms[h as usize - 1].push((pos, 1));
        }
    }

    for (i, terms) in point_terms.into_iter().enumerate() {
        let x = (i + 1) as u64;
        model.push_constraint(Constraint {
            label: format!("w1_{i}"),
            terms,
            sense: Sense::Le,
            rhs: size - f_profile.point_degree(x) as i64,
        });
    }
    for (i, terms) in line_terms.into_iter().enumerate() {
        if !line_excluded[i] {
            model.push_constraint(Constraint {
                label: format!("w2_{i}"),
                terms,
                sense: Sense::Le,
                rhs: 1,
            });
        }
    }
    for (i, terms) in solid_terms.into_iter().enumerate() {
        if !f.contains(&solids[i]) {
            model.push_constraint(Constraint {
                label: format!("w4_{i}"),
                terms,
                sense: Sense::Le,
                rhs: 1,
            });
        }
    }
    for (i, terms) in five_terms.into_iter().enumerate() {
        if five_excluded[i] {
            continue;
        }
        // Exact packing number of the member planes, capped by the number
        // of ambient 6-spaces through the embedded 5-space.
        let member_planes: Vec<Subspace> = terms
            .iter()
            .map(|&(pos, _)| var_planes[pos as usize].clone())
            .collect();
        let cap = max_point_intersecting_set(&member_planes).min(7) as i64;
        model.push_constraint(Constraint {
            label: format!("w5_{i}"),
            terms,
            sense: Sense::Le,
            rhs: cap,
        });
    }
    for (i, terms) in hyper_terms.into_iter().enumerate() {
        let normal = (i + 1) as u64;
        model.push_constraint(Constraint {
            label: format!("w6_{i}"),
            terms,
            sense: Sense::Le,
            rhs: 2 * (size - f_profile.hyperplane_degree(normal) as i64),
        });
    }
    let all_terms: Vec<(u32, i32)> = (0..model.variables().len() as u32).map(|p| (p, 1)).collect();
    model.push_constraint(Constraint {
        label: "card".to_string(),
        terms: all_terms,
        sense: Sense::Ge,
        rhs: 255 - size,
    });
    Ok(model)
}
