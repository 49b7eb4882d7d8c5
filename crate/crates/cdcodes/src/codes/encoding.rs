//! Compact decimal encoding of planes of F₂⁷.
//!
//! A plane has a unique 3×7 generator matrix in reduced row echelon form.
//! Each column is read as a 2-adic digit (row 1 contributes 1, row 2
//! contributes 2, row 3 contributes 4), giving a string of seven digits in
//! 0..=7 with leading zeroes omitted. Since the matrix is in RREF, the pivot
//! columns appear as the first occurrences of the digits 1, 2 and 4,
//! in that order.

use crate::geometry::Subspace;
use crate::{Error, Result};

fn encoding_error(input: &str, reason: impl Into<String>) -> Error {
    Error::PlaneEncoding {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Decodes a digit string of length ≤ 7 into a plane of F₂⁷.
pub fn parse_plane_encoding(s: &str) -> Result<Subspace> {
    if s.is_empty() || s.len() > 7 {
        return Err(encoding_error(s, "expected between 1 and 7 digits"));
    }
    let mut rows = [0u64; 3];
    for (j, c) in format!("{s:0>7}").bytes().enumerate() {
        let digit = match c {
            b'0'..=b'7' => c - b'0',
            _ => return Err(encoding_error(s, "digits must be between 0 and 7")),
        };
        for (r, row) in rows.iter_mut().enumerate() {
            *row |= (((digit >> r) & 1) as u64) << j;
        }
    }
    let plane = Subspace::from_rows(7, rows.to_vec());
    if plane.dim() != 3 {
        return Err(encoding_error(s, format!("rank {} instead of 3", plane.dim())));
    }
    if plane.rows() != rows {
        return Err(encoding_error(s, "decoded matrix is not in reduced echelon form"));
    }
    Ok(plane)
}

/// Encodes a plane of F₂⁷ as its digit string, leading zeroes omitted.
pub fn format_plane_encoding(p: &Subspace) -> Result<String> {
    if p.ambient() != 7 {
        return Err(Error::AmbientMismatch {
            left: p.ambient(),
            right: 7,
        });
    }
    if p.dim() != 3 {
        return Err(Error::WrongDimension {
            expected: 3,
            actual: p.dim(),
        });
    }
    let rows = p.rows();
    let digits: String = (0..7)
        .map(|j| {
            let d = ((rows[0] >> j) & 1) | (((rows[1] >> j) & 1) << 1) | (((rows[2] >> j) & 1) << 2);
            (b'0' + d as u8) as char
        })
        .collect();
    Ok(digits.trim_start_matches('0').to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_grassmannian;

    /// Coordinate string, first character = coordinate 1.
    fn row(s: &str) -> u64 {
        s.bytes()
            .enumerate()
            .filter(|&(_, b)| b == b'1')
            .map(|(i, _)| 1u64 << i)
            .sum()
    }

    #[test]
    fn decodes_the_reference_example() {
        let plane = parse_plane_encoding("1024062").unwrap();
        assert_eq!(
            plane.rows(),
            &[row("1000000"), row("0010011"), row("0001010")]
        );
    }

    #[test]
    fn short_strings_are_left_padded() {
        let plane = parse_plane_encoding("124").unwrap();
        assert_eq!(plane, Subspace::from_rows(7, vec![1 << 4, 1 << 5, 1 << 6]));
        assert_eq!(format_plane_encoding(&plane).unwrap(), "124");
    }

    #[test]
    fn rejects_bad_digits_rank_and_echelon_violations() {
        assert!(parse_plane_encoding("8").is_err());
        assert!(parse_plane_encoding("12x").is_err());
        assert!(parse_plane_encoding("").is_err());
        assert!(parse_plane_encoding("12345678").is_err());
        // Rank 1.
        assert!(parse_plane_encoding("1").is_err());
        // Pivot rows out of order: decodes to a matrix that is not RREF.
        assert!(parse_plane_encoding("214").is_err());
        // A later row's pivot column is dirty in an earlier row.
        assert!(parse_plane_encoding("134").is_err());
    }

    #[test]
    fn round_trips_every_plane() {
        for plane in enumerate_grassmannian(7, 3) {
            let s = format_plane_encoding(&plane).unwrap();
            assert!(!s.is_empty() && s.len() <= 7);
            assert_eq!(parse_plane_encoding(&s).unwrap(), plane);
        }
    }
}
