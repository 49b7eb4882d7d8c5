//! The 38 bundled hyperplane configurations: sets of 16 or 17 pairwise
//! disjoint planes of F₂⁷, shipped verbatim in the decimal plane encoding.
//! Every load re-validates sizes and pairwise disjointness, so a corrupted
//! fixture fails loudly.

use super::encoding::{format_plane_encoding, parse_plane_encoding};
use crate::geometry::{embed_in_hyperplane, Subspace};
use crate::{Error, Result};

const CONFIGURATION_DATA: &str = include_str!("configurations.txt");

/// Number of bundled configurations.
pub const CONFIGURATION_COUNT: usize = 38;

/// Expected plane count of each configuration, by index.
pub const CONFIGURATION_SIZES: [usize; CONFIGURATION_COUNT] = [
    16, 16, 16, 16, 16, 16, 17, 17, 16, 16, 16, 16, 16, 16, 16, 16, 17, 16, 16, 16, 16, 16, 16,
    16, 16, 16, 16, 16, 16, 17, 16, 16, 16, 16, 16, 16, 16, 17,
];

/// Loads configuration `index` (1-based) as a list of planes of F₂⁷ in the
/// stored order, validating size and pairwise disjointness.
pub fn load_configuration(index: usize) -> Result<Vec<Subspace>> {
    if !(1..=CONFIGURATION_COUNT).contains(&index) {
        return Err(Error::ConfigurationIndex { index });
    }
    let line = CONFIGURATION_DATA
        .lines()
        .nth(index - 1)
        .ok_or(Error::ConfigurationIndex { index })?;
    let planes: Vec<Subspace> = line
        .split(',')
        .map(parse_plane_encoding)
        .collect::<Result<_>>()?;
    if planes.len() != CONFIGURATION_SIZES[index - 1] {
        return Err(Error::ConfigurationInvalid {
            reason: format!(
                "configuration {index} has {} planes, expected {}",
                planes.len(),
                CONFIGURATION_SIZES[index - 1]
            ),
        });
    }
    for (i, a) in planes.iter().enumerate() {
        for b in &planes[i + 1..] {
            if a.intersection_dim(b) != 0 {
                return Err(Error::ConfigurationInvalid {
                    reason: format!(
                        "configuration {index}: planes {} and {} intersect nontrivially",
                        format_plane_encoding(a)?,
                        format_plane_encoding(b)?,
                    ),
                });
            }
        }
    }
    Ok(planes)
}

/// The canonical textual form of a configuration: comma-separated plane
/// encodings in the given order.
pub fn format_configuration(planes: &[Subspace]) -> Result<String> {
    let parts: Vec<String> = planes.iter().map(format_plane_encoding).collect::<Result<_>>()?;
    Ok(parts.join(","))
}

/// Dualizes a set of pairwise disjoint planes of F₂⁷ into solids of F₂⁷;
/// the solids pairwise intersect in exactly a point.
pub fn configuration_dual_solids(planes: &[Subspace]) -> Result<Vec<Subspace>> {
    let solids: Vec<Subspace> = planes.iter().map(|p| p.dual()).collect();
    for (i, a) in solids.iter().enumerate() {
        if a.ambient() != 7 || a.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                actual: a.dim(),
            });
        }
        for b in &solids[i + 1..] {
            if a.intersection_dim(b) > 1 {
                return Err(Error::ConfigurationInvalid {
                    reason: "dual solids intersect in more than a point".into(),
                });
            }
        }
    }
    Ok(solids)
}

/// Maps a configuration of planes of F₂⁷ to its set of solids inside the
/// distinguished hyperplane of F₂⁸: the embedded duals.
pub fn configuration_to_solids(planes: &[Subspace]) -> Result<Vec<Subspace>> {
    configuration_dual_solids(planes)?
        .iter()
        .map(embed_in_hyperplane)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::special_hyperplane;

    #[test]
    fn all_configurations_load_and_validate() {
        for index in 1..=CONFIGURATION_COUNT {
            let planes = load_configuration(index).unwrap();
            assert_eq!(planes.len(), CONFIGURATION_SIZES[index - 1]);
        }
        assert!(load_configuration(0).is_err());
        assert!(load_configuration(39).is_err());
    }

    #[test]
    fn sizes_by_index() {
        assert_eq!(load_configuration(1).unwrap().len(), 16);
        assert_eq!(load_configuration(7).unwrap().len(), 17);
        assert_eq!(load_configuration(8).unwrap().len(), 17);
    }

    #[test]
    fn formatting_reproduces_the_stored_rows() {
        for (index, line) in CONFIGURATION_DATA.lines().enumerate() {
            let planes = load_configuration(index + 1).unwrap();
            assert_eq!(format_configuration(&planes).unwrap(), line);
        }
    }

    #[test]
    fn embedded_solids_live_in_the_special_hyperplane() {
        let h = special_hyperplane(8);
        for index in [1, 7, 8] {
            let planes = load_configuration(index).unwrap();
            let solids = configuration_to_solids(&planes).unwrap();
            assert_eq!(solids.len(), planes.len());
            for (i, s) in solids.iter().enumerate() {
                assert_eq!(s.dim(), 4);
                assert!(h.contains(s));
                for t in &solids[i + 1..] {
                    assert!(s.intersection_dim(t) <= 1);
                }
            }
        }
    }
}
