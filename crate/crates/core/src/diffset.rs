//! Cyclic planar difference sets and the rank-3 presentations built on them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::plane_from_difference_set;
use crate::gf::{prime_power, GaloisField};
use crate::presentation::TrianglePresentation;
use crate::{Error, Result};

/// A subset `D` of `Z/N` of size `q + 1`, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DifferenceSet {
    pub modulus: u64,
    pub q: u64,
    pub set: Vec<u64>,
}

impl DifferenceSet {
    /// Validates `set` as a planar difference set mod `modulus`.
    pub fn new(modulus: u64, set: &[u64]) -> Result<Self> {
        let report = verify_planar_difference_set(modulus, set);
        if !report.valid {
            return Err(Error::InvalidDifferenceSet(report.describe()));
        }
        let mut set = set.to_vec();
        set.sort_unstable();
        Ok(Self {
            modulus,
            q: set.len() as u64 - 1,
            set,
        })
    }

    pub fn sum(&self) -> u64 {
        self.set.iter().fold(0, |acc, &d| (acc + d) % self.modulus)
    }

    /// `D + s`.
    pub fn translate(&self, s: u64) -> Self {
        let mut set: Vec<u64> = self.set.iter().map(|&d| (d + s) % self.modulus).collect();
        set.sort_unstable();
        Self {
            modulus: self.modulus,
            q: self.q,
            set,
        }
    }
}

/// Outcome of [`verify_planar_difference_set`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceReport {
    pub valid: bool,
    /// `N = q² + q + 1` with `q = |D| - 1`.
    pub modulus_matches_size: bool,
    /// Entries out of range or repeated.
    pub bad_entries: Vec<u64>,
    /// Nonzero residues hit a number of times other than once, with counts.
    pub bad_residues: Vec<(u64, usize)>,
}

impl DifferenceReport {
    pub fn describe(&self) -> String {
        if self.valid {
            return String::from("valid planar difference set");
        }
        let mut parts = Vec::new();
        if !self.modulus_matches_size {
            parts.push(String::from("modulus is not q^2+q+1 for q = |D|-1"));
        }
        if !self.bad_entries.is_empty() {
            parts.push(format!("out-of-range or repeated entries {:?}", self.bad_entries));
        }
        for &(r, c) in self.bad_residues.iter().take(8) {
            parts.push(format!("residue {r} hit {c} times"));
        }
        parts.join("; ")
    }
}

/// Checks that `(d1, d2) ↦ d1 - d2` over ordered pairs of distinct elements
/// hits every nonzero residue mod `modulus` exactly once.
pub fn verify_planar_difference_set(modulus: u64, set: &[u64]) -> DifferenceReport {
    let k = set.len() as u64;
    let modulus_matches_size = k >= 2 && k.checked_mul(k).and_then(|kk| kk.checked_sub(k)).map(|x| x + 1) == Some(modulus);
    let mut bad_entries = Vec::new();
    let mut seen = Vec::new();
    for &d in set {
        if d >= modulus || seen.contains(&d) {
            bad_entries.push(d);
        } else {
            seen.push(d);
        }
    }
    let mut bad_residues = Vec::new();
    if modulus > 0 && modulus <= 1 << 24 {
        let mut hits = vec![0usize; modulus as usize];
        for &a in &seen {
            for &b in &seen {
                if a != b {
                    hits[((a + modulus - b) % modulus) as usize] += 1;
                }
            }
        }
        bad_residues = (1..modulus as usize)
            .filter(|&r| hits[r] != 1)
            .map(|r| (r as u64, hits[r]))
            .collect();
    }
    DifferenceReport {
        valid: modulus_matches_size && bad_entries.is_empty() && bad_residues.is_empty(),
        modulus_matches_size,
        bad_entries,
        bad_residues,
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (t0, t1) = (t1, t0 - quot * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

/// The translate `D + s0` with `s0 = -(q+1)^{-1} Σd mod N`, whose element
/// sum is 0.
pub fn standardize(modulus: u64, q: u64, set: &[u64]) -> Result<DifferenceSet> {
    let ds = DifferenceSet::new(modulus, set)?;
    if ds.q != q {
        return Err(Error::InvalidDifferenceSet(format!(
            "set has {} elements, expected q+1 = {}",
            ds.set.len(),
            q + 1
        )));
    }
    let inv = mod_inverse(q + 1, modulus)
        .ok_or_else(|| Error::InvalidDifferenceSet(format!("q+1 = {} is not invertible mod {modulus}", q + 1)))?;
    let c = ds.sum() as u128;
    let s0 = (modulus as u128 - (inv as u128 * c) % modulus as u128) % modulus as u128;
    Ok(ds.translate(s0 as u64))
}

/// Whether `p·D = D` as sets and `Σd ≡ 0 (mod N)`.
pub fn is_standard(modulus: u64, p: u64, set: &[u64]) -> bool {
    if modulus == 0 {
        return false;
    }
    let mut a: Vec<u64> = set.iter().map(|&d| d % modulus).collect();
    let mut b: Vec<u64> = set.iter().map(|&d| (d as u128 * p as u128 % modulus as u128) as u64).collect();
    a.sort_unstable();
    b.sort_unstable();
    let sum = a.iter().fold(0u64, |acc, &d| (acc + d) % modulus);
    a == b && sum == 0
}

/// Trace-zero exponents of a primitive element of GF(q³), read mod
/// `q² + q + 1` and standardized.
pub fn singer_difference_set(q: u64) -> Result<DifferenceSet> {
    let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let field = GaloisField::new(p, 3 * m as usize, None)?;
    let modulus = q * q + q + 1;
    let g = field.primitive_element().clone();
    let mut set = Vec::new();
    let mut x = field.one();
    for i in 0..modulus {
        if field.is_zero(&field.trace_to_subfield(&x, m as usize)?) {
            set.push(i);
        }
        x = field.mul(&x, &g);
    }
    standardize(modulus, q, &set)
}

/// The prime `p` with `q = p^m`.
pub fn characteristic_of_order(q: u64) -> Result<u64> {
    prime_power(q).map(|(p, _)| p).ok_or(Error::NotPrimePower(q))
}

/// Rank-3 presentation on `Z/N`: point `m` has id `m`, line `m + D` has id
/// `N + m`, and `σ` swaps them. The point triples are `(m, m+d, m+(q+1)d)`
/// and the line triples their reversed images under `σ`.
pub fn presentation_from_difference_set(modulus: u64, q: u64, set: &[u64]) -> Result<TrianglePresentation> {
    let p = characteristic_of_order(q)?;
    let ds = DifferenceSet::new(modulus, set)?;
    if ds.q != q {
        return Err(Error::InvalidDifferenceSet(format!("expected {} elements, got {}", q + 1, ds.set.len())));
    }
    if !is_standard(modulus, p, &ds.set) {
        return Err(Error::InvalidDifferenceSet(format!(
            "{:?} is not standard (needs p·D = D for p = {p} and element sum 0 mod {modulus})",
            ds.set
        )));
    }
    let geometry = plane_from_difference_set(modulus, &ds.set)?;
    let n = modulus as usize;
    let sigma: Vec<usize> = (0..2 * n).map(|id| (id + n) % (2 * n)).collect();
    let mut triples = Vec::with_capacity(2 * n * ds.set.len());
    for m in 0..modulus {
        for &d in &ds.set {
            let a = m as usize;
            let b = ((m + d) % modulus) as usize;
            let c = ((m as u128 + (q as u128 + 1) * d as u128) % modulus as u128) as usize;
            triples.push([a, b, c]);
            triples.push([sigma[c], sigma[b], sigma[a]]);
        }
    }
    TrianglePresentation::build(geometry, sigma, triples, false)
}
