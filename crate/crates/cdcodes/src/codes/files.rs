//! The code file format.
//!
//! A header line `q=2 v=<v> k=<k>` is followed by one codeword per line:
//! the comma-separated hexadecimal row words of the RREF generator matrix,
//! in canonical row order. Files written by [`write_code_file`] list the
//! codewords in canonical subspace order and are byte-reproducible.

use std::io::{BufRead, Write};

use super::ConstantDimensionCode;
use crate::geometry::Subspace;
use crate::{Error, Result};

/// A parsed code file. Words keep their file order and multiplicity so that
/// verification can flag duplicated lines.
#[derive(Clone, Debug)]
pub struct CodeFile {
    pub ambient: usize,
    pub dim: usize,
    pub words: Vec<Subspace>,
}

impl CodeFile {
    /// Converts into a code with the given declared distance; fails on
    /// duplicates or dimension mismatches.
    pub fn into_code(self, declared_distance: usize) -> Result<ConstantDimensionCode> {
        ConstantDimensionCode::new(self.ambient, self.dim, declared_distance, self.words)
    }
}

pub fn write_code_file(code: &ConstantDimensionCode, mut w: impl Write) -> Result<()> {
    writeln!(w, "q=2 v={} k={}", code.ambient(), code.dim())?;
    for word in code.words() {
        let line: Vec<String> = word.rows().iter().map(|r| format!("{r:x}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_code_file(r: impl BufRead) -> Result<CodeFile> {
    let parse_err = |line: usize, reason: &str| Error::Parse {
        line,
        reason: reason.to_string(),
    };
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let header = header?;
    let mut v = None;
    let mut k = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("q", "2")) => {}
            Some(("q", other)) => {
                return Err(parse_err(1, &format!("unsupported field size q={other}")))
            }
            Some(("v", value)) => v = value.parse::<usize>().ok(),
            Some(("k", value)) => k = value.parse::<usize>().ok(),
            _ => return Err(parse_err(1, "malformed header field")),
        }
    }
    let (ambient, dim) = match (v, k) {
        (Some(v), Some(k)) if k <= v && v <= 64 => (v, k),
        _ => return Err(parse_err(1, "header must declare q=2 v=<v> k=<k>")),
    };

    let mut words = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rows: Vec<u64> = line
            .trim()
            .split(',')
            .map(|t| u64::from_str_radix(t.trim(), 16))
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(lineno, "rows must be hexadecimal words"))?;
        if rows.len() != dim {
            return Err(parse_err(
                lineno,
                &format!("expected {dim} rows, found {}", rows.len()),
            ));
        }
        if rows.iter().any(|&r| r >> ambient != 0) {
            return Err(parse_err(lineno, "row has coordinates outside the ambient space"));
        }
        let word = Subspace::from_rows(ambient, rows.clone());
        if word.dim() != dim {
            return Err(parse_err(lineno, "rows are linearly dependent"));
        }
        if word.rows() != rows {
            return Err(parse_err(
                lineno,
                "rows are not the canonical reduced echelon form",
            ));
        }
        words.push(word);
    }
    Ok(CodeFile {
        ambient,
        dim,
        words,
    })
}
