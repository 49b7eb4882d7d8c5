//! Upper bounds on the sizes of constant-dimension codes.
//!
//! Everything here is exact integer arithmetic: Gaussian binomials, spread
//! and partial-spread sizes, the iterated Johnson bound, its refinement via
//! a representability-restricted floor, and the incidence caps used by code
//! verification. Intermediate products are computed in 128 bits and checked
//! against overflow.

use std::collections::BTreeMap;

use crate::{Error, Result};

fn pow_checked(q: u64, e: u64) -> Result<u128> {
    (q as u128).checked_pow(e as u32).ok_or(Error::BoundOverflow)
}

fn to_u64(x: u128) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::BoundOverflow)
}

/// The Gaussian binomial coefficient `[v k]_q`: the number of k-dimensional
/// subspaces of F_q^v.
pub fn gaussian_binomial(v: u64, k: u64, q: u64) -> Result<u64> {
    assert!(q >= 2);
    if k > v {
        return Ok(0);
    }
    let mut acc: u128 = 1;
    for i in 1..=k {
        let num = pow_checked(q, v - k + i)? - 1;
        let den = pow_checked(q, i)? - 1;
        acc = acc.checked_mul(num).ok_or(Error::BoundOverflow)?;
        debug_assert_eq!(acc % den, 0);
        acc /= den;
    }
    to_u64(acc)
}

/// Size of a spread of k-spaces in F_q^v: `(q^v - 1) / (q^k - 1)`. Requires
/// `k | v`.
pub fn spread_size(q: u64, v: u64, k: u64) -> Result<u64> {
    assert!(k >= 1 && v % k == 0);
    let num = pow_checked(q, v)? - 1;
    let den = pow_checked(q, k)? - 1;
    to_u64(num / den)
}

/// Maximum size of a partial spread of k-spaces in F_q^v for
/// `v ≡ 1 (mod k)`: `(q^v - q) / (q^k - 1) - q + 1`.
pub fn partial_spread_size(q: u64, v: u64, k: u64) -> Result<u64> {
    if k < 2 || k > v || v % k != 1 {
        return Err(Error::PartialSpreadPrecondition { v, k });
    }
    let num = pow_checked(q, v)? - q as u128;
    let den = pow_checked(q, k)? - 1;
    debug_assert_eq!(num % den, 0);
    to_u64(num / den + 1 - q as u128)
}

/// How a resolved value of A_q(v,d;k) was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Source {
    /// A shipped exact value.
    Table,
    /// The spread size formula (exact).
    Spread,
    /// The partial spread formula (exact).
    PartialSpread,
    /// Degenerate parameters admit at most one codeword (exact).
    Degenerate,
    /// The iterated Johnson bound (an upper bound, not necessarily exact).
    Johnson,
}

impl Source {
    pub fn is_exact(self) -> bool {
        !matches!(self, Source::Johnson)
    }
}

/// A table of known exact values of A_q(v,d;k), keyed by (q, v, d, k) with
/// k normalized to min(k, v−k).
#[derive(Clone, Debug)]
pub struct KnownValues {
    entries: BTreeMap<(u64, u64, u64, u64), u64>,
}

impl Default for KnownValues {
    /// Ships the two exact values every supported bound computation relies
    /// on: A₂(7,6;3) = 17 and A₂(8,6;3) = 34.
    fn default() -> Self {
        let mut t = KnownValues {
            entries: BTreeMap::new(),
        };
        t.insert(2, 7, 6, 3, 17);
        t.insert(2, 8, 6, 3, 34);
        t
    }
}

impl KnownValues {
    pub fn empty() -> Self {
        KnownValues {
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, q: u64, v: u64, d: u64, k: u64, value: u64) {
        self.entries.insert((q, v, d, k.min(v - k)), value);
    }

    pub fn get(&self, q: u64, v: u64, d: u64, k: u64) -> Option<u64> {
        if k > v {
            return None;
        }
        self.entries.get(&(q, v, d, k.min(v - k))).copied()
    }
}

fn validate_query(q: u64, v: u64, d: u64, k: u64) -> Result<()> {
    let reason = if q < 2 {
        Some("q must be a prime power >= 2")
    } else if k == 0 || k >= v {
        Some("k must satisfy 0 < k < v")
    } else if d % 2 != 0 {
        Some("the minimum distance of a constant-dimension code is even")
    } else if d < 2 || d > 2 * k.min(v - k) {
        Some("d must satisfy 2 <= d <= 2 min(k, v-k)")
    } else {
        None
    };
    match reason {
        Some(reason) => Err(Error::BoundQuery {
            q,
            v,
            d,
            k,
            reason: reason.into(),
        }),
        None => Ok(()),
    }
}

/// Resolves A_q(v,d;k) to the most precise value available: a table entry,
/// an exact (partial) spread size, a degenerate case, or the iterated
/// Johnson bound.
pub fn resolve_max_size(
    q: u64,
    v: u64,
    d: u64,
    k: u64,
    table: &KnownValues,
) -> Result<(u64, Source)> {
    let k = k.min(v.checked_sub(k).ok_or(Error::BoundQuery {
        q,
        v,
        d,
        k,
        reason: "k exceeds v".into(),
    })?);
    if k == 0 || d > 2 * k {
        // At most one codeword fits.
        return Ok((1, Source::Degenerate));
    }
    if let Some(value) = table.get(q, v, d, k) {
        return Ok((value, Source::Table));
    }
    if d == 2 * k {
        return if v % k == 0 {
            Ok((spread_size(q, v, k)?, Source::Spread))
        } else if v % k == 1 {
            Ok((partial_spread_size(q, v, k)?, Source::PartialSpread))
        } else {
            Err(Error::MissingBaseValue { q, v, d, k })
        };
    }
    Ok((johnson_bound(q, v, d, k, table)?, Source::Johnson))
}

/// The iterated Johnson bound: peels one ambient dimension per step down to
/// v′ = v − k + d/2, where the value of a maximal partial spread is taken
/// from the table or the exact formulas.
pub fn johnson_bound(q: u64, v: u64, d: u64, k: u64, table: &KnownValues) -> Result<u64> {
    validate_query(q, v, d, k)?;
    let k = k.min(v - k);
    let v_base = v - k + d / 2;
    let (base, _) = resolve_max_size(q, v_base, d, d / 2, table)?;
    let mut value = base as u128;
    for j in d / 2 + 1..=k {
        let num = pow_checked(q, v - k + j)? - 1;
        let den = pow_checked(q, j)? - 1;
        value = value.checked_mul(num).ok_or(Error::BoundOverflow)? / den;
    }
    to_u64(value)
}

/// One attempted quotient in [`divisible_floor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorTrial {
    /// Candidate quotient.
    pub b: u64,
    /// Residual `a − b·[k 1]_q`.
    pub residual: u64,
    /// A decomposition of the residual over the admissible summands, largest
    /// summand first, if one exists.
    pub witness: Option<Vec<u64>>,
}

/// Result of [`divisible_floor`], including the trial trace.
#[derive(Clone, Debug)]
pub struct DivisibleFloor {
    pub value: u64,
    /// The admissible summands `q^(k−1−i)·(q^(i+1)−1)/(q−1)` for 0 ≤ i < k.
    pub summands: Vec<u64>,
    /// Trials in decreasing order of `b`; the last one is the accepted one.
    pub trials: Vec<FloorTrial>,
}

/// The representability-restricted floor: the largest b such that
/// `a − b·[k 1]_q` is a non-negative integer combination of the summands
/// `q^(k−1−i)·(q^(i+1)−1)/(q−1)`, 0 ≤ i < k.
///
/// For q = 2 and k = 4 the summands are 8, 12, 14 and 15. Representability
/// is decided by dynamic programming over achievable sums.
pub fn divisible_floor(a: u64, k: u64, q: u64) -> Result<DivisibleFloor> {
    assert!(k >= 1 && q >= 2);
    let summands: Vec<u64> = (0..k)
        .map(|i| {
            let factor = pow_checked(q, k - 1 - i)?;
            let rep = (pow_checked(q, i + 1)? - 1) / (q as u128 - 1);
            to_u64(factor * rep)
        })
        .collect::<Result<_>>()?;
    let gauss1 = to_u64((pow_checked(q, k)? - 1) / (q as u128 - 1))?;
    let mut trials = Vec::new();
    let mut b = a / gauss1;
    loop {
        let residual = a - b * gauss1;
        let witness = decompose(residual, &summands);
        let found = witness.is_some();
        trials.push(FloorTrial {
            b,
            residual,
            witness,
        });
        if found {
            return Ok(DivisibleFloor {
                value: b,
                summands,
                trials,
            });
        }
        if b == 0 {
            return Err(Error::BoundQuery {
                q,
                v: 0,
                d: 0,
                k,
                reason: format!("no residual of {a} is representable"),
            });
        }
        b -= 1;
    }
}

/// Greedy-free decomposition of `target` over `summands` by dynamic
/// programming; returns the used summands largest first.
fn decompose(target: u64, summands: &[u64]) -> Option<Vec<u64>> {
    let t = target as usize;
    // used[x] = some summand completing a decomposition of x, 0 marks "none".
    let mut used = vec![0u64; t + 1];
    let mut reachable = vec![false; t + 1];
    reachable[0] = true;
    for x in 1..=t {
        for &s in summands {
            if s as usize <= x && reachable[x - s as usize] {
                reachable[x] = true;
                used[x] = s;
                break;
            }
        }
    }
    if !reachable[t] {
        return None;
    }
    let mut parts = Vec::new();
    let mut x = t;
    while x > 0 {
        parts.push(used[x]);
        x -= used[x] as usize;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Some(parts)
}

/// Trace of one level of [`improved_johnson_bound`].
#[derive(Clone, Debug)]
pub struct LevelTrace {
    /// Dimension index j of this level (applied from d/2+1 up to k).
    pub level: u64,
    /// The dividend `[v−k+j 1]_q · previous`.
    pub dividend: u64,
    pub floor: DivisibleFloor,
}

/// The refinement of the Johnson bound that replaces each floor by the
/// representability-restricted floor. Never exceeds [`johnson_bound`].
pub fn improved_johnson_bound(
    q: u64,
    v: u64,
    d: u64,
    k: u64,
    table: &KnownValues,
) -> Result<u64> {
    Ok(improved_johnson_bound_with_trace(q, v, d, k, table)?.0)
}

/// As [`improved_johnson_bound`], also returning the per-level trial trace.
pub fn improved_johnson_bound_with_trace(
    q: u64,
    v: u64,
    d: u64,
    k: u64,
    table: &KnownValues,
) -> Result<(u64, Vec<LevelTrace>)> {
    validate_query(q, v, d, k)?;
    let k = k.min(v - k);
    let v_base = v - k + d / 2;
    let (base, _) = resolve_max_size(q, v_base, d, d / 2, table)?;
    let mut value = base;
    let mut trace = Vec::new();
    for j in d / 2 + 1..=k {
        let ones = (pow_checked(q, v - k + j)? - 1) / (q as u128 - 1);
        let dividend = to_u64(ones.checked_mul(value as u128).ok_or(Error::BoundOverflow)?)?;
        let floor = divisible_floor(dividend, j, q)?;
        value = floor.value;
        trace.push(LevelTrace {
            level: j,
            dividend,
            floor,
        });
    }
    Ok((value, trace))
}

/// Upper bound on the number of codewords of a (v, N, d; k)_q code incident
/// with a fixed subspace of dimension `dim_x`: A_q(dim_x, d; k) when
/// dim_x ≥ k, and A_q(v − dim_x, d; k − dim_x) otherwise.
pub fn incidence_cap(
    q: u64,
    v: u64,
    d: u64,
    k: u64,
    dim_x: u64,
    table: &KnownValues,
) -> Result<u64> {
    assert!(dim_x > 0 && dim_x < v, "the fixed subspace must be proper");
    let (value, _) = if dim_x >= k {
        resolve_max_size(q, dim_x, d, k, table)?
    } else {
        resolve_max_size(q, v - dim_x, d, k - dim_x, table)?
    };
    Ok(value)
}
