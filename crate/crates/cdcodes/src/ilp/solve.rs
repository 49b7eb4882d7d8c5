//! An exact solver for tiny binary packing models, and a rational bound
//! from the packing structure.
//!
//! The solver accepts models whose objective maximizes a sum of variables
//! under `≤` constraints with positive coefficients, optional `≥` side
//! constraints, and fixings. Models where every active `≤` constraint is a
//! unit-coefficient, right-hand-side-1 packing constraint reduce to a
//! maximum clique of the compatibility graph; everything else runs through
//! branch and bound with constraint propagation and a counting bound per
//! constraint family.

use super::{LinearModel, Sense};
use crate::search::SearchGraph;
use crate::{Error, Result};

/// Internal size cap: larger models are export-only.
pub const SOLVE_LIMIT: usize = 2000;

/// An exact optimum of a tiny model.
#[derive(Clone, Debug)]
pub struct TinySolution {
    /// Optimal objective value including the constant offset.
    pub objective: i64,
    /// Canonical keys of the variables set to one, ascending.
    pub ones: Vec<u32>,
}

struct Problem {
    n: usize,
    /// Per-constraint supports and data.
    le_terms: Vec<Vec<(u32, i32)>>,
    le_rhs: Vec<i64>,
    ge_terms: Vec<Vec<(u32, i32)>>,
    ge_rhs: Vec<i64>,
    /// Constraint indices per family, and per-variable membership counts.
    family_cover: Vec<Vec<u32>>,
    family_constraints: Vec<Vec<u32>>,
    /// var → list of (le index, coef).
    var_le: Vec<Vec<(u32, i32)>>,
}

#[derive(Clone)]
struct State {
    assigned: Vec<i8>, // -1 free, 0, 1
    residual: Vec<i64>,
    ones: usize,
}

pub fn solve_tiny(model: &LinearModel) -> Result<TinySolution> {
    let n = model.variables().len();
    if n > SOLVE_LIMIT {
        return Err(Error::ModelTooLarge {
            vars: n,
            limit: SOLVE_LIMIT,
        });
    }
    for &(_, coef) in model
        .constraints()
        .iter()
        .flat_map(|c| c.terms.iter())
        .chain(std::iter::empty())
    {
        if coef <= 0 {
            return Err(Error::Precondition {
                reason: "the internal solver needs positive constraint coefficients".into(),
            });
        }
    }
    if model.constraints().iter().any(|c| c.sense == Sense::Eq) {
        return Err(Error::Precondition {
            reason: "equality constraints are not supported by the internal solver".into(),
        });
    }

    // Family bookkeeping for the counting bound.
    let mut families: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
    let mut le_terms = Vec::new();
    let mut le_rhs = Vec::new();
    let mut le_family = Vec::new();
    let mut ge_terms = Vec::new();
    let mut ge_rhs = Vec::new();
    for c in model.constraints() {
        match c.sense {
            Sense::Le => {
                let family_name = c.label.split('_').next().unwrap_or("").to_string();
                let next = families.len();
                let fam = *families.entry(family_name).or_insert(next);
                le_terms.push(c.terms.clone());
                le_rhs.push(c.rhs);
                le_family.push(fam);
            }
            Sense::Ge => {
                ge_terms.push(c.terms.clone());
                ge_rhs.push(c.rhs);
            }
            Sense::Eq => unreachable!(),
        }
    }
    let mut family_cover = vec![vec![0u32; n]; families.len()];
    let mut family_constraints = vec![Vec::new(); families.len()];
    let mut var_le = vec![Vec::new(); n];
    for (ci, terms) in le_terms.iter().enumerate() {
        family_constraints[le_family[ci]].push(ci as u32);
        for &(pos, coef) in terms {
            family_cover[le_family[ci]][pos as usize] += 1;
            var_le[pos as usize].push((ci as u32, coef));
        }
    }

    let problem = Problem {
        n,
        le_terms,
        le_rhs,
        ge_terms,
        ge_rhs,
        family_cover,
        family_constraints,
        var_le,
    };

    let mut state = State {
        assigned: vec![-1; n],
        residual: problem.le_rhs.clone(),
        ones: 0,
    };
    for (&pos, &value) in model.fixings() {
        if !assign(&problem, &mut state, pos as usize, value == 1) {
            return Err(Error::Infeasible);
        }
    }
    if !propagate(&problem, &mut state) {
        return Err(Error::Infeasible);
    }

    let solution = if problem.ge_terms.is_empty() && is_unit_packing(&problem, &state) {
        solve_by_clique(&problem, &state)
    } else {
        solve_by_branch_and_bound(&problem, &state)?
    };
    let mut ones: Vec<u32> = solution
        .iter()
        .map(|&pos| model.variables()[pos].key)
        .collect();
    ones.sort_unstable();
    Ok(TinySolution {
        objective: solution.len() as i64 + model.objective_constant(),
        ones,
    })
}

/// Sets a variable, updating residuals. Returns false on immediate
/// infeasibility.
fn assign(problem: &Problem, state: &mut State, pos: usize, value: bool) -> bool {
    match state.assigned[pos] {
        -1 => {}
        old => return (old == 1) == value,
    }
    state.assigned[pos] = value as i8;
    if value {
        state.ones += 1;
        for &(ci, coef) in &problem.var_le[pos] {
            state.residual[ci as usize] -= coef as i64;
            if state.residual[ci as usize] < 0 {
                return false;
            }
        }
    }
    true
}

/// Forces to zero every free variable whose coefficient no longer fits its
/// residual; checks `≥` reachability. Returns false on infeasibility.
fn propagate(problem: &Problem, state: &mut State) -> bool {
    loop {
        let mut changed = false;
        for (ci, terms) in problem.le_terms.iter().enumerate() {
            if state.residual[ci] == 0 {
                for &(pos, _) in terms {
                    if state.assigned[pos as usize] == -1 {
                        state.assigned[pos as usize] = 0;
                        changed = true;
                    }
                }
            } else {
                for &(pos, coef) in terms {
                    if state.assigned[pos as usize] == -1 && coef as i64 > state.residual[ci] {
                        state.assigned[pos as usize] = 0;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (gi, terms) in problem.ge_terms.iter().enumerate() {
        let reachable: i64 = terms
            .iter()
            .filter(|&&(pos, _)| state.assigned[pos as usize] != 0)
            .map(|&(_, coef)| coef as i64)
            .sum();
        if reachable < problem.ge_rhs[gi] {
            return false;
        }
    }
    true
}

/// After propagation: every constraint with free support either is slack
/// (residual covers all free members) or is a unit-coefficient constraint
/// with residual 1.
fn is_unit_packing(problem: &Problem, state: &State) -> bool {
    problem.le_terms.iter().enumerate().all(|(ci, terms)| {
        let free: Vec<i32> = terms
            .iter()
            .filter(|&&(pos, _)| state.assigned[pos as usize] == -1)
            .map(|&(_, coef)| coef)
            .collect();
        let unit = free.iter().all(|&c| c == 1);
        (unit && state.residual[ci] >= free.len() as i64)
            || (unit && state.residual[ci] == 1)
            || free.is_empty()
    })
}

/// Maximum independent set in the conflict graph = maximum clique in the
/// compatibility graph over the free variables.
fn solve_by_clique(problem: &Problem, state: &State) -> Vec<usize> {
    let free: Vec<usize> = (0..problem.n)
        .filter(|&pos| state.assigned[pos] == -1)
        .collect();
    let mut conflict = std::collections::BTreeSet::new();
    for (ci, terms) in problem.le_terms.iter().enumerate() {
        let members: Vec<usize> = terms
            .iter()
            .map(|&(pos, _)| pos as usize)
            .filter(|&pos| state.assigned[pos] == -1)
            .collect();
        if state.residual[ci] == 1 && members.len() >= 2 {
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    conflict.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    let graph = SearchGraph::from_edge_fn(free.clone(), |&a, &b| {
        let (x, y) = (a.min(b), a.max(b));
        !conflict.contains(&(x, y))
    });
    let (_, clique) = graph.max_clique();
    let mut chosen: Vec<usize> = (0..problem.n)
        .filter(|&pos| state.assigned[pos] == 1)
        .collect();
    chosen.extend(clique.into_iter().map(|i| free[i]));
    chosen
}

/// Counting bound: for each constraint family covering every free variable,
/// the residual capacity divided by the minimum cover multiplicity.
fn counting_bound(problem: &Problem, state: &State, free_count: usize) -> usize {
    let mut bound = free_count;
    for (fam, constraints) in problem.family_constraints.iter().enumerate() {
        let mut min_cover = u32::MAX;
        for pos in 0..problem.n {
            if state.assigned[pos] == -1 {
                min_cover = min_cover.min(problem.family_cover[fam][pos]);
            }
        }
        if min_cover == 0 || min_cover == u32::MAX {
            continue;
        }
        let capacity: i64 = constraints
            .iter()
            .map(|&ci| state.residual[ci as usize])
            .sum();
        bound = bound.min((capacity / min_cover as i64) as usize);
    }
    bound
}

fn solve_by_branch_and_bound(problem: &Problem, root: &State) -> Result<Vec<usize>> {
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut stack = vec![root.clone()];
    while let Some(state) = stack.pop() {
        let free_count = state.assigned.iter().filter(|&&a| a == -1).count();
        let current_best = best.as_ref().map_or(0, |(size, _)| *size);
        if best.is_some() && state.ones + counting_bound(problem, &state, free_count) <= current_best
        {
            continue;
        }
        let branch_var = (0..problem.n).find(|&pos| state.assigned[pos] == -1);
        match branch_var {
            None => {
                // All ≥ constraints must hold at a leaf.
                let feasible = problem.ge_terms.iter().enumerate().all(|(gi, terms)| {
                    let lhs: i64 = terms
                        .iter()
                        .filter(|&&(pos, _)| state.assigned[pos as usize] == 1)
                        .map(|&(_, coef)| coef as i64)
                        .sum();
                    lhs >= problem.ge_rhs[gi]
                });
                if feasible && best.as_ref().map_or(true, |(size, _)| state.ones > *size) {
                    let chosen: Vec<usize> = (0..problem.n)
                        .filter(|&pos| state.assigned[pos] == 1)
                        .collect();
                    best = Some((state.ones, chosen));
                }
            }
            Some(pos) => {
                // Explore x=0 after x=1 (stack order: push 0 first).
                let mut zero = state.clone();
                zero.assigned[pos] = 0;
                if propagate(problem, &mut zero) {
                    stack.push(zero);
                }
                let mut one = state;
                if assign(problem, &mut one, pos, true) && propagate(problem, &mut one) {
                    stack.push(one);
                }
            }
        }
    }
    match best {
        Some((_, chosen)) => Ok(chosen),
        None => Err(Error::Infeasible),
    }
}

/// A rational upper bound `(numerator, denominator)` on the sum of all
/// variables of the model, from the best uniformly covering family of
/// unit-coefficient `≤` constraints: if every variable lies in at least `t`
/// constraints of total capacity `C`, no 0/1 (or fractional in [0,1])
/// solution exceeds `C / t`. Returns `None` when no family covers every
/// variable.
pub fn packing_bound(model: &LinearModel) -> Option<(u64, u64)> {
    let n = model.variables().len();
    let mut families: std::collections::BTreeMap<&str, (Vec<u32>, i64)> =
        std::collections::BTreeMap::new();
    for c in model.constraints() {
        if c.sense != Sense::Le || c.terms.iter().any(|&(_, coef)| coef != 1) {
            continue;
        }
        let name = c.label.split('_').next().unwrap_or("");
        let entry = families.entry(name).or_insert((vec![0; n], 0));
        for &(pos, _) in &c.terms {
            entry.0[pos as usize] += 1;
        }
        entry.1 += c.rhs;
    }
    let mut best: Option<(u64, u64)> = None;
    for (cover, capacity) in families.values() {
        let t = *cover.iter().min().unwrap_or(&0);
        if t == 0 || *capacity < 0 {
            continue;
        }
        let candidate = (*capacity as u64, t as u64);
        best = Some(match best {
            None => candidate,
            // Compare fractions by cross-multiplication.
            Some(current) if candidate.0 * current.1 < current.0 * candidate.1 => candidate,
            Some(current) => current,
        });
    }
    best
}
