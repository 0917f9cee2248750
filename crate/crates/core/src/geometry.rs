//! Subspace counting over finite fields together with abstract incidence geometries.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::diffset;
use crate::{Error, Result};

/// `[m]_q = 1 + q + ... + q^{m-1}`.
pub fn q_integer(m: u64, q: u64) -> BigUint {
    let mut acc = BigUint::zero();
    let mut pow = BigUint::one();
    for _ in 0..m {
        acc += &pow;
        pow *= q;
    }
    acc
}

/// Gaussian binomial `[n choose k]_q` from the sum form of `[m]_q`.
///
/// Returns 0 when `k < 0` or `k > n`; negative upper arguments are not
/// supported and also give 0.
pub fn q_binomial(n: i64, k: i64, q: u64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let (n, k) = (n as u64, k as u64);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q_integer(n - i, q);
        den *= q_integer(i + 1, q);
    }
    num / den
}

/// `x (x-1) ... (x-t+1) / t!` for any integer `x`.
pub fn generalized_binomial(x: i64, t: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..t {
        num *= BigInt::from(x) - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Number of subspaces of algebraic dimension `k` in a geometry of
/// algebraic dimension `n` and order `q`.
pub fn count_subspaces(n: u64, k: u64, q: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::InvalidArgument(format!("need k <= n, got k={k}, n={n}")));
    }
    Ok(q_binomial(n as i64, k as i64, q))
}

/// Number of `k`-dimensional subspaces containing a fixed `m`-dimensional one.
pub fn count_containing(n: u64, k: u64, m: u64, q: u64) -> Result<BigUint> {
    if !(m <= k && k <= n) {
        return Err(Error::InvalidArgument(format!(
            "need m <= k <= n, got m={m}, k={k}, n={n}"
        )));
    }
    Ok(q_binomial((n - m) as i64, (k - m) as i64, q))
}

/// Where the incidence table of a geometry came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryModel {
    /// Points `Z/N`, lines the translates `s + D`.
    DifferenceSet { modulus: u64, set: Vec<u64> },
    /// Nonempty proper subsets of `{0, ..., ground-1}` under inclusion;
    /// `masks[id]` is the subset of element `id`.
    Powerset { ground: usize, masks: Vec<u64> },
    /// A table supplied directly, or reconstructed from triples.
    Explicit,
}

/// Graded elements with a symmetric incidence relation between elements of
/// distinct dimensions. Element ids are `0..len()`.
///
/// Equality compares the combinatorial data only, not the [`GeometryModel`].
#[derive(Debug, Clone)]
pub struct IncidenceGeometry {
    n: usize,
    order: u64,
    dims: Vec<usize>,
    names: Vec<String>,
    incidence: Vec<bool>,
    model: GeometryModel,
}

impl PartialEq for IncidenceGeometry {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.order == other.order
            && self.dims == other.dims
            && self.names == other.names
            && self.incidence == other.incidence
    }
}

impl Eq for IncidenceGeometry {}

impl IncidenceGeometry {
    /// Assembles a geometry from per-element tables plus incident pairs.
    /// Pairs are symmetrized.
    pub fn new(
        n: usize,
        order: u64,
        dims: Vec<usize>,
        names: Vec<String>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        model: GeometryModel,
    ) -> Result<Self> {
        let len = dims.len();
        if names.len() != len {
            return Err(Error::InvalidArgument(String::from("one name per element required")));
        }
        if let Some((id, d)) = dims.iter().enumerate().find(|(_, &d)| d == 0 || d >= n) {
            return Err(Error::InvalidArgument(format!(
                "element {id} has dimension {d} outside 1..{}",
                n.saturating_sub(1)
            )));
        }
        let mut incidence = vec![false; len * len];
        for (u, v) in pairs {
            if u >= len || v >= len {
                return Err(Error::InvalidArgument(format!("incidence ({u}, {v}) has a dangling id")));
            }
            if dims[u] == dims[v] {
                return Err(Error::InvalidArgument(format!(
                    "incidence ({u}, {v}) relates elements of equal dimension"
                )));
            }
            incidence[u * len + v] = true;
            incidence[v * len + u] = true;
        }
        Ok(Self {
            n,
            order,
            dims,
            names,
            incidence,
            model,
        })
    }

    /// Algebraic dimension of the whole geometry (3 for planes).
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, id: usize) -> usize {
        self.dims[id]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn model(&self) -> &GeometryModel {
        &self.model
    }

    pub fn is_degenerate(&self) -> bool {
        self.order == 1
    }

    pub fn incident(&self, u: usize, v: usize) -> bool {
        self.incidence[u * self.len() + v]
    }

    /// Incident pairs `(u, v)` with `u < v`.
    pub fn incident_pairs(&self) -> Vec<(usize, usize)> {
        let len = self.len();
        (0..len)
            .flat_map(|u| (u + 1..len).map(move |v| (u, v)))
            .filter(|&(u, v)| self.incident(u, v))
            .collect()
    }

    /// Ids of dimension `k`, ascending.
    pub fn elements_of_dim(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&id| self.dims[id] == k).collect()
    }

    pub fn points(&self) -> Vec<usize> {
        self.elements_of_dim(1)
    }

    pub fn lines(&self) -> Vec<usize> {
        self.elements_of_dim(2)
    }

    /// Elements of dimension `k` incident with `id`.
    pub fn incident_of_dim(&self, id: usize, k: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.dims[v] == k && self.incident(id, v))
            .collect()
    }
}

/// Plane from a cyclic planar difference set: point `m` has id `m`, line
/// `s + D` has id `N + s`.
pub fn plane_from_difference_set(modulus: u64, set: &[u64]) -> Result<IncidenceGeometry> {
    let report = diffset::verify_planar_difference_set(modulus, set);
    if !report.valid {
        return Err(Error::InvalidDifferenceSet(report.describe()));
    }
    let n = modulus as usize;
    let q = set.len() as u64 - 1;
    let mut dims = vec![1; n];
    dims.extend(core::iter::repeat_n(2, n));
    let mut names: Vec<String> = (0..n).map(|m| format!("{m}")).collect();
    names.extend((0..n).map(|s| format!("{s}+D")));
    let mut pairs = Vec::with_capacity(n * set.len());
    for s in 0..modulus {
        for &d in set {
            pairs.push((((s + d) % modulus) as usize, n + s as usize));
        }
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    IncidenceGeometry::new(
        3,
        q,
        dims,
        names,
        pairs,
        GeometryModel::DifferenceSet {
            modulus,
            set: sorted,
        },
    )
}

fn mask_name(mask: u64) -> String {
    let parts: Vec<String> = (0..64).filter(|b| mask >> b & 1 == 1).map(|b| format!("{b}")).collect();
    format!("{{{}}}", parts.join(","))
}

/// Nonempty proper subsets of an `ground`-element set, graded by size and
/// ordered by size then by bitmask.
pub fn powerset_geometry(ground: usize) -> Result<IncidenceGeometry> {
    if ground < 3 {
        return Err(Error::InvalidArgument(format!("ground set needs >= 3 elements, got {ground}")));
    }
    if ground > 16 {
        return Err(Error::InvalidArgument(format!("ground set of {ground} elements is too large")));
    }
    let full = (1u64 << ground) - 1;
    let mut masks: Vec<u64> = (1..full).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let dims: Vec<usize> = masks.iter().map(|m| m.count_ones() as usize).collect();
    let names = masks.iter().map(|&m| mask_name(m)).collect();
    let mut pairs = Vec::new();
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            if i != j && a & b == a {
                pairs.push((i, j));
            }
        }
    }
    IncidenceGeometry::new(
        ground,
        1,
        dims,
        names,
        pairs,
        GeometryModel::Powerset { ground, masks },
    )
}

/// One checked axiom with a counterexample on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneAxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl PlaneAxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const UNIQUE_LINE: &str = "unique line through two points";
pub const LINES_MEET_ONCE: &str = "distinct lines meet in at most one point";
pub const THREE_POINTS_PER_LINE: &str = "every line has at least three points";
pub const NON_COLLINEAR_TRIPLE: &str = "three non-collinear points exist";

/// Checks the projective-plane axioms on a rank-3 geometry.
///
/// Degenerate (order 1) geometries are refused unless `allow_degenerate`.
pub fn verify_plane_axioms(g: &IncidenceGeometry, allow_degenerate: bool) -> Result<PlaneAxiomReport> {
    if g.rank() != 3 {
        return Err(Error::UnsupportedRank(format!(
            "plane axioms need algebraic dimension 3, got {}",
            g.rank()
        )));
    }
    if g.is_degenerate() && !allow_degenerate {
        return Err(Error::UnsupportedRank(String::from(
            "degenerate geometry requires allow_degenerate",
        )));
    }
    let points = g.points();
    let lines = g.lines();
    let line_points: Vec<BTreeSet<usize>> =
        lines.iter().map(|&l| g.incident_of_dim(l, 1).into_iter().collect()).collect();

    let mut checks = Vec::new();

    let mut witness = None;
    'pairs: for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let through: Vec<usize> = lines
                .iter()
                .zip(&line_points)
                .filter(|(_, pts)| pts.contains(&a) && pts.contains(&b))
                .map(|(&l, _)| l)
                .collect();
            if through.len() != 1 {
                let mut w = vec![a, b];
                w.extend(through);
                witness = Some(w);
                break 'pairs;
            }
        }
    }
    checks.push(AxiomCheck {
        name: UNIQUE_LINE,
        pass: witness.is_none(),
        witness,
    });

    let mut witness = None;
    'lines: for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let common: Vec<usize> = line_points[i].intersection(&line_points[j]).copied().collect();
            if common.len() > 1 {
                let mut w = vec![lines[i], lines[j]];
                w.extend(common);
                witness = Some(w);
                break 'lines;
            }
        }
    }
    checks.push(AxiomCheck {
        name: LINES_MEET_ONCE,
        pass: witness.is_none(),
        witness,
    });

    let witness = lines
        .iter()
        .zip(&line_points)
        .find(|(_, pts)| pts.len() < 3)
        .map(|(&l, pts)| {
            let mut w = vec![l];
            w.extend(pts.iter().copied());
            w
        });
    checks.push(AxiomCheck {
        name: THREE_POINTS_PER_LINE,
        pass: witness.is_none(),
        witness,
    });

    let mut found = None;
    'triples: for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate().skip(i + 1) {
            for &c in &points[j + 1..] {
                let collinear = line_points
                    .iter()
                    .any(|pts| pts.contains(&a) && pts.contains(&b) && pts.contains(&c));
                if !collinear {
                    found = Some(vec![a, b, c]);
                    break 'triples;
                }
            }
        }
    }
    checks.push(AxiomCheck {
        name: NON_COLLINEAR_TRIPLE,
        pass: found.is_some(),
        // For an existence axiom the witness of failure is the (small) point set.
        witness: if found.is_some() { None } else { Some(points.clone()) },
    });

    Ok(PlaneAxiomReport { checks })
}
