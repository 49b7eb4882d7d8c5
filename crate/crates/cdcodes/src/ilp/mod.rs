//! Integer-linear-programming models over subspace variables: construction,
//! deterministic LP text export, structural audits, and an exact solver for
//! tiny instances.
//!
//! Variables are named `x<key>` where `<key>` is the canonical Grassmannian
//! index of the subspace (its position in the deterministic enumeration of
//! its dimension layer), so exported files diff stably across runs.

mod builders;
mod solve;

pub use builders::{build_ambient_model, build_restriction_model, build_spread_model, omega};
pub use solve::{packing_bound, solve_tiny, TinySolution};

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::geometry::Subspace;
use crate::{Error, Result};

/// Constraint sense.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// A single linear constraint; terms reference variable positions and are
/// sorted by position.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub label: String,
    pub terms: Vec<(u32, i32)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// A model variable: the canonical Grassmannian key, the subspace it stands
/// for (absent in models re-read from text), and its integrality flag.
#[derive(Clone, Debug)]
pub struct Variable {
    pub key: u32,
    pub subspace: Option<Subspace>,
    pub binary: bool,
}

/// A linear model with binary (or relaxed) subspace variables.
#[derive(Clone, Debug)]
pub struct LinearModel {
    name: String,
    /// Ambient space parameters (v, k) of the variable layer.
    space: (usize, usize),
    vars: Vec<Variable>,
    /// Objective coefficients by variable position (all variables appear).
    objective: Vec<(u32, i32)>,
    objective_constant: i64,
    constraints: Vec<Constraint>,
    /// Variable position → forced value.
    fixings: BTreeMap<u32, u8>,
}

impl LinearModel {
    pub(crate) fn new(name: String, space: (usize, usize), vars: Vec<Variable>) -> Self {
        let objective = (0..vars.len() as u32).map(|p| (p, 1)).collect();
        LinearModel {
            name,
            space,
            vars,
            objective,
            objective_constant: 0,
            constraints: Vec::new(),
            fixings: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// (v, k) of the variable layer.
    pub fn space(&self) -> (usize, usize) {
        self.space
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_constant(&self) -> i64 {
        self.objective_constant
    }

    pub(crate) fn set_objective_constant(&mut self, c: i64) {
        self.objective_constant = c;
    }

    pub fn fixings(&self) -> &BTreeMap<u32, u8> {
        &self.fixings
    }

    pub(crate) fn push_constraint(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub(crate) fn fix(&mut self, position: u32, value: u8) {
        self.fixings.insert(position, value);
    }

    /// Position of the variable with canonical key `key`.
    pub fn position_of_key(&self, key: u32) -> Option<u32> {
        self.vars
            .binary_search_by_key(&key, |v| v.key)
            .ok()
            .map(|p| p as u32)
    }

    /// Position of the variable standing for `u`.
    pub fn position_of_subspace(&self, u: &Subspace) -> Option<u32> {
        self.vars
            .iter()
            .position(|v| v.subspace.as_ref() == Some(u))
            .map(|p| p as u32)
    }

    /// Fixes a variable, or appends a coverage constraint, on an existing
    /// model.
    pub fn apply_cut(&mut self, cut: Cut) -> Result<()> {
        match cut {
            Cut::FixZero { variable } => {
                let pos = self
                    .position_of_key(variable)
                    .ok_or(Error::UnknownVariable {
                        name: format!("x{variable}"),
                    })?;
                self.fix(pos, 0);
                Ok(())
            }
            Cut::Coverage { variable, rhs } => {
                let pos = self
                    .position_of_key(variable)
                    .ok_or(Error::UnknownVariable {
                        name: format!("x{variable}"),
                    })?;
                let solid = self.vars[pos as usize]
                    .subspace
                    .clone()
                    .ok_or(Error::Precondition {
                        reason: "coverage cuts need subspace-labeled variables".into(),
                    })?;
                // Coefficient of x_U = number of points of `solid` on U.
                let mut terms = Vec::new();
                for (p, var) in self.vars.iter().enumerate() {
                    let u = var.subspace.as_ref().ok_or(Error::Precondition {
                        reason: "coverage cuts need subspace-labeled variables".into(),
                    })?;
                    let shared = solid.intersection_dim(u);
                    if shared > 0 {
                        terms.push((p as u32, (1i32 << shared) - 1));
                    }
                }
                self.push_constraint(Constraint {
                    label: format!("cov{variable}"),
                    terms,
                    sense: Sense::Ge,
                    rhs,
                });
                Ok(())
            }
        }
    }

    /// Violated constraint and fixing labels for a 0/1 assignment given as a
    /// list of variable keys set to one.
    pub fn violations(&self, one_keys: &[u32]) -> Vec<String> {
        let ones = self.ones_by_position(one_keys);
        let mut violated = Vec::new();
        for c in &self.constraints {
            let lhs: i64 = c
                .terms
                .iter()
                .filter(|&&(p, _)| ones[p as usize])
                .map(|&(_, coef)| coef as i64)
                .sum();
            let ok = match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Ge => lhs >= c.rhs,
                Sense::Eq => lhs == c.rhs,
            };
            if !ok {
                violated.push(c.label.clone());
            }
        }
        for (&pos, &value) in &self.fixings {
            if ones[pos as usize] != (value == 1) {
                violated.push(format!("fx{}", self.vars[pos as usize].key));
            }
        }
        violated
    }

    /// Objective value of an assignment (including the constant offset).
    pub fn objective_value(&self, one_keys: &[u32]) -> i64 {
        let ones = self.ones_by_position(one_keys);
        self.objective_constant
            + self
                .objective
                .iter()
                .filter(|&&(p, _)| ones[p as usize])
                .map(|&(_, c)| c as i64)
                .sum::<i64>()
    }

    fn ones_by_position(&self, one_keys: &[u32]) -> Vec<bool> {
        let mut ones = vec![false; self.vars.len()];
        for &key in one_keys {
            if let Some(pos) = self.position_of_key(key) {
                ones[pos as usize] = true;
            }
        }
        ones
    }

    /// Structural audit of the model.
    pub fn audit(&self) -> ModelAudit {
        let mut families: BTreeMap<String, usize> = BTreeMap::new();
        for c in &self.constraints {
            let family = match c.label.split_once('_') {
                Some((prefix, _)) => prefix.to_string(),
                None => c
                    .label
                    .trim_end_matches(|ch: char| ch.is_ascii_digit())
                    .to_string(),
            };
            *families.entry(family).or_insert(0) += 1;
        }
        ModelAudit {
            name: self.name.clone(),
            space_v: self.space.0,
            space_k: self.space.1,
            variables: self.vars.len(),
            binary_variables: self.vars.iter().filter(|v| v.binary).count(),
            constraints: self.constraints.len(),
            constraint_families: families,
            fixings_zero: self.fixings.values().filter(|&&v| v == 0).count(),
            fixings_one: self.fixings.values().filter(|&&v| v == 1).count(),
            objective_constant: self.objective_constant,
            lp_safety_epsilon: 0.1,
        }
    }

    /// Serializes the model as deterministic LP text.
    pub fn write_lp(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "\\ model {}", self.name)?;
        writeln!(w, "\\ space q=2 v={} k={}", self.space.0, self.space.1)?;
        if self.objective_constant != 0 {
            // LP text has no objective constant; report it as a comment and
            // in the audit.
            writeln!(w, "\\ objective constant {}", self.objective_constant)?;
        }
        writeln!(w, "Maximize")?;
        write!(w, " obj:")?;
        for &(pos, coef) in &self.objective {
            write!(w, " + ")?;
            if coef != 1 {
                write!(w, "{coef} ")?;
            }
            write!(w, "x{}", self.vars[pos as usize].key)?;
        }
        writeln!(w)?;
        writeln!(w, "Subject To")?;
        for c in &self.constraints {
            write!(w, " {}:", c.label)?;
            if c.terms.is_empty() {
                // A constraint with empty support keeps an explicit zero term.
                write!(w, " 0 x{}", self.vars.first().map(|v| v.key).unwrap_or(0))?;
            }
            for &(pos, coef) in &c.terms {
                write!(w, " + ")?;
                if coef != 1 {
                    write!(w, "{coef} ")?;
                }
                write!(w, "x{}", self.vars[pos as usize].key)?;
            }
            writeln!(w, " {} {}", c.sense.symbol(), c.rhs)?;
        }
        for (&pos, &value) in &self.fixings {
            let key = self.vars[pos as usize].key;
            writeln!(w, " fx{key}: x{key} = {value}")?;
        }
        let has_relaxed = self.vars.iter().any(|v| !v.binary);
        if has_relaxed {
            writeln!(w, "Bounds")?;
            for v in self.vars.iter().filter(|v| !v.binary) {
                writeln!(w, " 0 <= x{} <= 1", v.key)?;
            }
        }
        if self.vars.iter().any(|v| v.binary) {
            writeln!(w, "Binary")?;
            for v in self.vars.iter().filter(|v| v.binary) {
                writeln!(w, " x{}", v.key)?;
            }
        }
        writeln!(w, "End")?;
        Ok(())
    }

    pub fn to_lp_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_lp(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("LP text is ASCII")
    }

    /// Structural equality: identical names, spaces, variables (keys and
    /// integrality), objective, constraints, and fixings. Subspace labels
    /// are ignored, since parsed models do not carry them.
    pub fn same_structure(&self, other: &LinearModel) -> bool {
        self.name == other.name
            && self.space == other.space
            && self.objective_constant == other.objective_constant
            && self.vars.len() == other.vars.len()
            && self
                .vars
                .iter()
                .zip(&other.vars)
                .all(|(a, b)| a.key == b.key && a.binary == b.binary)
            && self.objective == other.objective
            && self.constraints.len() == other.constraints.len()
            && self
                .constraints
                .iter()
                .zip(&other.constraints)
                .all(|(a, b)| {
                    a.label == b.label && a.terms == b.terms && a.sense == b.sense && a.rhs == b.rhs
                })
            && self.fixings == other.fixings
    }
}

/// Structural audit of a model, serializable as the JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct ModelAudit {
    pub name: String,
    pub space_v: usize,
    pub space_k: usize,
    pub variables: usize,
    pub binary_variables: usize,
    pub constraints: usize,
    pub constraint_families: BTreeMap<String, usize>,
    pub fixings_zero: usize,
    pub fixings_one: usize,
    pub objective_constant: i64,
    /// Safety margin applied when interpreting external LP optima near an
    /// integer threshold; recorded for report consumers, never used
    /// internally.
    pub lp_safety_epsilon: f64,
}

/// Additional constraints for pinning down extension searches.
#[derive(Clone, Copy, Debug)]
pub enum Cut {
    /// Force the variable with the given canonical key to zero.
    FixZero { variable: u32 },
    /// Require the codewords meeting the given solid in at least a point to
    /// cover its points with total weight at least `rhs`; the coefficient of
    /// each variable is the number of points it shares with the solid.
    Coverage { variable: u32, rhs: i64 },
}

/// Parses LP text produced by [`LinearModel::write_lp`]. The result carries
/// keys but no subspace labels.
pub fn parse_lp(text: &str) -> Result<LinearModel> {
    let parse_err = |line: usize, reason: &str| Error::Parse {
        line,
        reason: reason.to_string(),
    };
    let mut name = String::new();
    let mut space = (0usize, 0usize);
    let mut objective_constant = 0i64;
    let mut objective_line = None;
    let mut constraint_lines = Vec::new();
    let mut bounds_lines = Vec::new();
    let mut binary_lines = Vec::new();

    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Objective,
        Constraints,
        Bounds,
        Binary,
        End,
    }
    let mut section = Section::Preamble;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('\\') {
            let comment = comment.trim();
            if let Some(n) = comment.strip_prefix("model ") {
                name = n.to_string();
            } else if let Some(s) = comment.strip_prefix("space ") {
                for field in s.split_whitespace() {
                    match field.split_once('=') {
                        Some(("v", value)) => {
                            space.0 = value.parse().map_err(|_| parse_err(lineno, "bad v"))?
                        }
                        Some(("k", value)) => {
                            space.1 = value.parse().map_err(|_| parse_err(lineno, "bad k"))?
                        }
                        _ => {}
                    }
                }
            } else if let Some(c) = comment.strip_prefix("objective constant ") {
                objective_constant = c.parse().map_err(|_| parse_err(lineno, "bad constant"))?;
            }
            continue;
        }
        match line {
            "Maximize" => section = Section::Objective,
            "Subject To" => section = Section::Constraints,
            "Bounds" => section = Section::Bounds,
            "Binary" => section = Section::Binary,
            "End" => section = Section::End,
            _ => match section {
                Section::Objective => objective_line = Some((lineno, line.to_string())),
                Section::Constraints => constraint_lines.push((lineno, line.to_string())),
                Section::Bounds => bounds_lines.push((lineno, line.to_string())),
                Section::Binary => binary_lines.push((lineno, line.to_string())),
                _ => return Err(parse_err(lineno, "content outside any section")),
            },
        }
    }

    let key_of = |token: &str, lineno: usize| -> Result<u32> {
        token
            .strip_prefix('x')
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(lineno, &format!("expected a variable, got {token:?}")))
    };
    // Terms look like: + x5, + 3 x5.
    let parse_terms = |tokens: &[&str], lineno: usize| -> Result<Vec<(u32, i32)>> {
        let mut terms = Vec::new();
        let mut iter = tokens.iter().peekable();
        while let Some(&tok) = iter.next() {
            if tok != "+" {
                return Err(parse_err(lineno, &format!("expected '+', got {tok:?}")));
            }
            let &next = iter
                .next()
                .ok_or_else(|| parse_err(lineno, "dangling '+'"))?;
            if let Ok(coef) = next.parse::<i32>() {
                let &var = iter
                    .next()
                    .ok_or_else(|| parse_err(lineno, "missing variable"))?;
                terms.push((key_of(var, lineno)?, coef));
            } else {
                terms.push((key_of(next, lineno)?, 1));
            }
        }
        Ok(terms)
    };

    let (obj_lineno, obj) = objective_line.ok_or_else(|| parse_err(1, "missing objective"))?;
    let obj_body = obj
        .strip_prefix("obj:")
        .ok_or_else(|| parse_err(obj_lineno, "objective must be labeled obj"))?;
    let tokens: Vec<&str> = obj_body.split_whitespace().collect();
    let objective_terms = parse_terms(&tokens, obj_lineno)?;

    // Variables appear in the objective in model order.
    let mut vars: Vec<Variable> = objective_terms
        .iter()
        .map(|&(key, _)| Variable {
            key,
            subspace: None,
            binary: false,
        })
        .collect();
    let mut pos_of = BTreeMap::new();
    for (p, v) in vars.iter().enumerate() {
        if pos_of.insert(v.key, p as u32).is_some() {
            return Err(parse_err(obj_lineno, "duplicate variable in objective"));
        }
    }
    for (lineno, line) in &binary_lines {
        let key = key_of(line.trim(), *lineno)?;
        let &pos = pos_of
            .get(&key)
            .ok_or_else(|| parse_err(*lineno, "binary variable not in objective"))?;
        vars[pos as usize].binary = true;
    }
    for (lineno, line) in &bounds_lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 5 || tokens[0] != "0" || tokens[1] != "<=" || tokens[4] != "1" {
            return Err(parse_err(*lineno, "unsupported bounds line"));
        }
        key_of(tokens[2], *lineno)?;
    }

    let mut model = LinearModel {
        name,
        space,
        vars,
        objective: objective_terms
            .iter()
            .enumerate()
            .map(|(p, &(_, c))| (p as u32, c))
            .collect(),
        objective_constant,
        constraints: Vec::new(),
        fixings: BTreeMap::new(),
    };

    let zero_term_marker = format!("x{}", model.vars.first().map(|v| v.key).unwrap_or(0));
    for (lineno, line) in constraint_lines {
        let (label, body) = line
            .split_once(':')
            .ok_or_else(|| parse_err(lineno, "constraint without label"))?;
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let sense_at = tokens
            .iter()
            .position(|&t| t == "<=" || t == ">=" || t == "=")
            .ok_or_else(|| parse_err(lineno, "constraint without sense"))?;
        let sense = match tokens[sense_at] {
            "<=" => Sense::Le,
            ">=" => Sense::Ge,
            _ => Sense::Eq,
        };
        let rhs: i64 = tokens
            .get(sense_at + 1)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(lineno, "constraint without right-hand side"))?;
        if let Some(rest) = label.trim().strip_prefix("fx") {
            let key: u32 = rest
                .parse()
                .map_err(|_| parse_err(lineno, "bad fixing label"))?;
            let &pos = pos_of
                .get(&key)
                .ok_or_else(|| parse_err(lineno, "fixing of unknown variable"))?;
            model.fixings.insert(pos, rhs as u8);
            continue;
        }
        let terms = if tokens[..sense_at] == ["0", zero_term_marker.as_str()] {
            Vec::new()
        } else {
            let raw = parse_terms(&tokens[..sense_at], lineno)?;
            raw.into_iter()
                .map(|(key, coef)| {
                    pos_of
                        .get(&key)
                        .map(|&p| (p, coef))
                        .ok_or_else(|| parse_err(lineno, "constraint uses unknown variable"))
                })
                .collect::<Result<_>>()?
        };
        model.constraints.push(Constraint {
            label: label.trim().to_string(),
            terms,
            sense,
            rhs,
        });
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_text_round_trip_of_a_small_model() {
        let model = build_spread_model(4, 2).unwrap();
        let text = model.to_lp_string();
        let parsed = parse_lp(&text).unwrap();
        assert!(model.same_structure(&parsed));
        assert_eq!(parsed.to_lp_string(), text);
    }

    #[test]
    fn lp_export_is_deterministic() {
        let a = build_spread_model(5, 2).unwrap().to_lp_string();
        let b = build_spread_model(5, 2).unwrap().to_lp_string();
        assert_eq!(a, b);
    }

    #[test]
    fn cuts_require_known_variables() {
        let mut model = build_spread_model(4, 2).unwrap();
        assert!(model.apply_cut(Cut::FixZero { variable: 9999 }).is_err());
        model.apply_cut(Cut::FixZero { variable: 0 }).unwrap();
        assert_eq!(model.fixings().len(), 1);
    }

    #[test]
    fn violations_and_objective_of_assignments() {
        let mut model = build_spread_model(4, 2).unwrap();
        model.set_objective_constant(3);
        // All 35 lines at once violate every point constraint.
        let all: Vec<u32> = (0..35).collect();
        assert!(!model.violations(&all).is_empty());
        assert_eq!(model.objective_value(&all), 35 + 3);
        assert!(model.violations(&[]).is_empty());
    }

    #[test]
    fn lp_text_matches_the_hand_written_golden() {
        // The spread model over the 7 lines of F2^3 (the Fano plane),
        // derived by hand: variables in canonical order are the row pairs
        // (1,2) (1,4) (1,6) (2,4) (3,4) (5,2) (5,6); each point lies on
        // three lines and any two lines meet, so the optimum is 1.
        let golden = "\\ model spread-v3-k2\n\
                      \\ space q=2 v=3 k=2\n\
                      Maximize\n \
                      obj: + x0 + x1 + x2 + x3 + x4 + x5 + x6\n\
                      Subject To\n \
                      w1_0: + x0 + x1 + x2 <= 1\n \
                      w1_1: + x0 + x3 + x5 <= 1\n \
                      w1_2: + x0 + x4 + x6 <= 1\n \
                      w1_3: + x1 + x3 + x4 <= 1\n \
                      w1_4: + x1 + x5 + x6 <= 1\n \
                      w1_5: + x2 + x3 + x6 <= 1\n \
                      w1_6: + x2 + x4 + x5 <= 1\n\
                      Binary\n x0\n x1\n x2\n x3\n x4\n x5\n x6\nEnd\n";
        let model = build_spread_model(3, 2).unwrap();
        assert_eq!(model.to_lp_string(), golden);
        assert_eq!(solve_tiny(&model).unwrap().objective, 1);
    }

    #[test]
    fn empty_model_exports_minimal_text() {
        let model = LinearModel::new("empty".into(), (4, 2), Vec::new());
        let text = model.to_lp_string();
        assert!(text.contains("Maximize"));
        assert!(text.ends_with("End\n"));
        let parsed = parse_lp(&text).unwrap();
        assert!(model.same_structure(&parsed));
    }
}
