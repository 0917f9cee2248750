//! Triangle presentations with indexed lookups, plus their condition checks
//! and built-in fixtures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{powerset_geometry, verify_plane_axioms, GeometryModel, IncidenceGeometry};
use crate::{Error, Result};

pub type Triple = [usize; 3];

/// A set `T` of ordered triples over the elements of a graded geometry,
/// together with the dimension-reversing involution `σ`.
///
/// Construction only checks that `σ` is well formed; [`verify_axioms`]
/// reports on the presentation conditions.
#[derive(Debug, Clone)]
pub struct TrianglePresentation {
    geometry: IncidenceGeometry,
    sigma: Vec<usize>,
    characteristic_zero_only: bool,
    triples: Vec<Triple>,
    duplicates_dropped: usize,
    by_first_two: BTreeMap<(usize, usize), Vec<usize>>,
    by_third: Vec<Vec<(usize, usize)>>,
    by_first: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for TrianglePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.geometry == other.geometry
            && self.sigma == other.sigma
            && self.characteristic_zero_only == other.characteristic_zero_only
            && self.triples == other.triples
    }
}

impl Eq for TrianglePresentation {}

impl TrianglePresentation {
    pub fn build(
        geometry: IncidenceGeometry,
        sigma: Vec<usize>,
        triples: impl IntoIterator<Item = Triple>,
        characteristic_zero_only: bool,
    ) -> Result<Self> {
        let len = geometry.len();
        let n = geometry.rank();
        if sigma.len() != len {
            return Err(Error::InvalidPresentation(format!(
                "sigma has {} entries for {len} elements",
                sigma.len()
            )));
        }
        for (u, &s) in sigma.iter().enumerate() {
            if s >= len {
                return Err(Error::InvalidPresentation(format!("sigma({u}) = {s} is a dangling id")));
            }
            if sigma[s] != u {
                return Err(Error::InvalidPresentation(format!(
                    "sigma is not an involution: sigma(sigma({u})) = {}",
                    sigma[s]
                )));
            }
            if geometry.dim(s) + geometry.dim(u) != n {
                return Err(Error::InvalidPresentation(format!(
                    "sigma dimension swap violated: dim({u}) = {}, dim(sigma({u})) = {}",
                    geometry.dim(u),
                    geometry.dim(s)
                )));
            }
        }
        let mut raw: Vec<Triple> = triples.into_iter().collect();
        if let Some(t) = raw.iter().find(|t| t.iter().any(|&x| x >= len)) {
            return Err(Error::InvalidPresentation(format!("triple {t:?} has a dangling id")));
        }
        let before = raw.len();
        raw.sort_unstable();
        raw.dedup();
        let duplicates_dropped = before - raw.len();

        let mut by_first_two: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut by_third = vec![Vec::new(); len];
        let mut by_first = vec![Vec::new(); len];
        for &[u, v, w] in &raw {
            by_first_two.entry((u, v)).or_default().push(w);
            by_third[w].push((u, v));
            by_first[u].push((v, w));
        }
        Ok(Self {
            geometry,
            sigma,
            characteristic_zero_only,
            triples: raw,
            duplicates_dropped,
            by_first_two,
            by_third,
            by_first,
        })
    }

    /// Same elements and `σ`, different triples.
    pub fn with_triples(&self, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        Self::build(
            self.geometry.clone(),
            self.sigma.clone(),
            triples,
            self.characteristic_zero_only,
        )
    }

    /// The algebraic dimension `n` (type `Ã_{n-1}`).
    pub fn n(&self) -> usize {
        self.geometry.rank()
    }

    pub fn q(&self) -> u64 {
        self.geometry.order()
    }

    pub fn characteristic_zero_only(&self) -> bool {
        self.characteristic_zero_only
    }

    pub fn geometry(&self) -> &IncidenceGeometry {
        &self.geometry
    }

    pub fn len(&self) -> usize {
        self.geometry.len()
    }

    pub fn is_empty(&self) -> bool {
        self.geometry.is_empty()
    }

    pub fn dim(&self, id: usize) -> usize {
        self.geometry.dim(id)
    }

    pub fn name(&self, id: usize) -> &str {
        self.geometry.name(id)
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.geometry.names().iter().position(|n| n == name)
    }

    pub fn sigma(&self, id: usize) -> usize {
        self.sigma[id]
    }

    pub fn sigma_table(&self) -> &[usize] {
        &self.sigma
    }

    /// Sorted, deduplicated triples.
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Number of repeated triples discarded by [`build`](Self::build).
    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    /// All `w` with `(u, v, w)` in `T`.
    pub fn thirds(&self, u: usize, v: usize) -> &[usize] {
        self.by_first_two.get(&(u, v)).map_or(&[], Vec::as_slice)
    }

    /// The `w` with `(u, v, w)` in `T` when there is exactly one.
    pub fn third(&self, u: usize, v: usize) -> Option<usize> {
        match self.thirds(u, v) {
            [w] => Some(*w),
            _ => None,
        }
    }

    /// Pairs `(u, v)` with `(u, v, w)` in `T`.
    pub fn with_third(&self, w: usize) -> &[(usize, usize)] {
        &self.by_third[w]
    }

    /// Pairs `(v, w)` with `(u, v, w)` in `T`.
    pub fn with_first(&self, u: usize) -> &[(usize, usize)] {
        &self.by_first[u]
    }

    /// Ids of dimension `k`, ascending. This ordering fixes the basis of
    /// the functor's vector spaces.
    pub fn elements_of_dim(&self, k: usize) -> Vec<usize> {
        self.geometry.elements_of_dim(k)
    }

    pub fn incident(&self, u: usize, v: usize) -> bool {
        self.geometry.incident(u, v)
    }

    /// Applies a permutation of ids (`perm[old] = new`) to every table.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let len = self.len();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..len).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument(String::from("relabeling is not a permutation")));
        }
        let mut dims = vec![0; len];
        let mut names = vec![String::new(); len];
        let mut sigma = vec![0; len];
        for old in 0..len {
            dims[perm[old]] = self.dim(old);
            names[perm[old]] = String::from(self.name(old));
            sigma[perm[old]] = perm[self.sigma[old]];
        }
        let pairs = self
            .geometry
            .incident_pairs()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]));
        let geometry =
            IncidenceGeometry::new(self.n(), self.q(), dims, names, pairs, GeometryModel::Explicit)?;
        let triples = self.triples.iter().map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]]);
        Self::build(geometry, sigma, triples, self.characteristic_zero_only)
    }

    /// Human-readable triple.
    pub fn show(&self, t: &[usize]) -> String {
        let parts: Vec<&str> = t.iter().map(|&x| self.name(x)).collect();
        format!("({})", parts.join(","))
    }
}

/// One presentation condition with a counterexample on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    pub condition: u8,
    pub pass: bool,
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<ConditionCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn condition(&self, k: u8) -> &ConditionCheck {
        &self.checks[k as usize - 1]
    }

    /// Whether conditions 1 through 5 all hold.
    pub fn first_five_pass(&self) -> bool {
        self.checks.iter().filter(|c| c.condition <= 5).all(|c| c.pass)
    }
}

fn check(condition: u8, witness: Option<Vec<usize>>) -> ConditionCheck {
    ConditionCheck {
        condition,
        pass: witness.is_none(),
        witness,
    }
}

fn condition_1(tp: &TrianglePresentation) -> Option<Vec<usize>> {
    for u in 0..tp.len() {
        let su = tp.sigma(u);
        for v in 0..tp.len() {
            if v != su && tp.incident(su, v) && tp.thirds(u, v).is_empty() {
                return Some(vec![u, v]);
            }
        }
    }
    tp.triples()
        .iter()
        .find(|&&[u, v, _]| v == tp.sigma(u) || !tp.incident(tp.sigma(u), v))
        .map(|t| t.to_vec())
}

fn condition_2(tp: &TrianglePresentation) -> Option<Vec<usize>> {
    tp.triples().iter().find_map(|&[u, v, w]| {
        let rotated = [v, w, u];
        (!tp.contains(&rotated)).then(|| rotated.to_vec())
    })
}

fn condition_3(tp: &TrianglePresentation) -> Option<Vec<usize>> {
    let n = tp.n();
    tp.triples()
        .iter()
        .find(|t| t.iter().map(|&x| tp.dim(x)).sum::<usize>() % n != 0)
        .map(|t| t.to_vec())
}

fn condition_4(tp: &TrianglePresentation) -> Option<Vec<usize>> {
    tp.by_first_two
        .iter()
        .find(|(_, ws)| ws.len() > 1)
        .map(|(&(u, v), ws)| vec![u, v, ws[0], ws[1]])
}

fn condition_5(tp: &TrianglePresentation) -> Option<Vec<usize>> {
    tp.triples().iter().find_map(|&[u, v, w]| {
        let mirrored = [tp.sigma(w), tp.sigma(v), tp.sigma(u)];
        (!tp.contains(&mirrored)).then(|| mirrored.to_vec())
    })
}

/// `(u1,v1,w), (u2,v2,σw)` with both first-two dimension sums below `n`
/// must admit exactly one `z` with `(v2,u1,z), (v1,u2,σz)` in `T`.
/// The witness is `[u1, v1, w, u2, v2, number of z found]`.
fn condition_6(tp: &TrianglePresentation) -> Option<Vec<usize>> {
    let n = tp.n();
    for w in 0..tp.len() {
        let sw = tp.sigma(w);
        for &(u1, v1) in tp.with_third(w) {
            if tp.dim(u1) + tp.dim(v1) >= n {
                continue;
            }
            for &(u2, v2) in tp.with_third(sw) {
                if tp.dim(u2) + tp.dim(v2) >= n {
                    continue;
                }
                let found = tp
                    .thirds(v2, u1)
                    .iter()
                    .filter(|&&z| tp.contains(&[v1, u2, tp.sigma(z)]))
                    .count();
                if found != 1 {
                    return Some(vec![u1, v1, w, u2, v2, found]);
                }
            }
        }
    }
    None
}

/// `(u,v,σr), (r,w,σs)` with `dim u + dim v + dim w < n` must admit exactly
/// one `t` with `(u,t,σs), (v,w,σt)` in `T`.
fn condition_6_prime(tp: &TrianglePresentation) -> Option<Vec<usize>> {
    let n = tp.n();
    for &[u, v, x] in tp.triples() {
        let r = tp.sigma(x);
        for &(w, y) in tp.with_first(r) {
            if tp.dim(u) + tp.dim(v) + tp.dim(w) >= n {
                continue;
            }
            let ss = y;
            let found = tp
                .with_third(ss)
                .iter()
                .filter(|&&(a, _)| a == u)
                .filter(|&&(_, t)| tp.contains(&[v, w, tp.sigma(t)]))
                .count();
            if found != 1 {
                return Some(vec![u, v, r, w, tp.sigma(y), found]);
            }
        }
    }
    None
}

/// `(u,t,σs), (v,w,σt)` with `dim u + dim v + dim w < n` must admit exactly
/// one `r` with `(u,v,σr), (r,w,σs)` in `T`.
fn condition_6_double_prime(tp: &TrianglePresentation) -> Option<Vec<usize>> {
    let n = tp.n();
    for &[u, t, x] in tp.triples() {
        let st = tp.sigma(t);
        for &(v, w) in tp.with_third(st) {
            if tp.dim(u) + tp.dim(v) + tp.dim(w) >= n {
                continue;
            }
            let found = tp
                .thirds(u, v)
                .iter()
                .filter(|&&sr| tp.contains(&[tp.sigma(sr), w, x]))
                .count();
            if found != 1 {
                return Some(vec![u, t, tp.sigma(x), v, w, found]);
            }
        }
    }
    None
}

/// Checks the six presentation conditions exhaustively.
pub fn verify_axioms(tp: &TrianglePresentation) -> AxiomReport {
    AxiomReport {
        checks: vec![
            check(1, condition_1(tp)),
            check(2, condition_2(tp)),
            check(3, condition_3(tp)),
            check(4, condition_4(tp)),
            check(5, condition_5(tp)),
            check(6, condition_6(tp)),
        ],
    }
}

/// Results of the three equivalent forms of condition 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Condition6Variants {
    pub six: bool,
    pub six_prime: bool,
    pub six_double_prime: bool,
}

impl Condition6Variants {
    pub fn agree(&self) -> bool {
        self.six == self.six_prime && self.six_prime == self.six_double_prime
    }
}

/// Evaluates 6, 6′ and 6″. Errors with `PreconditionsUnmet` when any of
/// conditions 1 to 5 fails.
pub fn verify_condition_6_variants(tp: &TrianglePresentation) -> Result<Condition6Variants> {
    let report = verify_axioms(tp);
    if let Some(bad) = report.checks.iter().find(|c| c.condition <= 5 && !c.pass) {
        return Err(Error::PreconditionsUnmet(format!(
            "preconditions unmet: condition {} fails",
            bad.condition
        )));
    }
    Ok(Condition6Variants {
        six: report.condition(6).pass,
        six_prime: condition_6_prime(tp).is_none(),
        six_double_prime: condition_6_double_prime(tp).is_none(),
    })
}

/// Incidence implied by condition 1: `σ(u)` is incident with every `v`
/// appearing as `(u, v, ·)`.
pub fn incidence_from_triples(sigma: &[usize], triples: &[Triple]) -> Vec<(usize, usize)> {
    let set: BTreeSet<(usize, usize)> = triples
        .iter()
        .map(|&[u, v, _]| {
            let a = sigma[u];
            (a.min(v), a.max(v))
        })
        .collect();
    set.into_iter().collect()
}

/// Rebuilds the lines of a rank-3 presentation as point sets, with
/// `σ(u) = {v : (u, v, ·) ∈ T}` over the point triples, and checks the
/// result is a projective plane of order `q`.
pub fn lines_from_triples(
    q: u64,
    dims: &[usize],
    names: &[String],
    sigma: &[usize],
    triples: &[Triple],
) -> Result<IncidenceGeometry> {
    if dims.iter().any(|&d| d != 1 && d != 2) {
        return Err(Error::UnsupportedRank(String::from("line reconstruction needs rank 3")));
    }
    let len = dims.len();
    let mut members: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); len];
    for &[u, v, w] in triples {
        if dims[u] == 1 && dims[v] == 1 && dims[w] == 1 {
            members[sigma[u]].insert(v);
        }
    }
    for line in (0..len).filter(|&l| dims[l] == 2) {
        if members[line].len() as u64 != q + 1 {
            return Err(Error::InvalidPresentation(format!(
                "line {} reconstructs to {} points, expected {}",
                names[line],
                members[line].len(),
                q + 1
            )));
        }
    }
    let pairs = members
        .iter()
        .enumerate()
        .flat_map(|(l, pts)| pts.iter().map(move |&p| (p, l)));
    let geometry =
        IncidenceGeometry::new(3, q, dims.to_vec(), names.to_vec(), pairs, GeometryModel::Explicit)?;
    let report = verify_plane_axioms(&geometry, false)?;
    if let Some(bad) = report.checks.iter().find(|c| !c.pass) {
        return Err(Error::InvalidPresentation(format!(
            "reconstructed lines fail '{}' at {:?}",
            bad.name, bad.witness
        )));
    }
    Ok(geometry)
}

const EXOTIC_SIGMA: [usize; 13] = [0, 3, 12, 1, 9, 10, 8, 2, 11, 6, 4, 5, 7];

/// One representative per cyclic class of point triples.
const EXOTIC_CLASSES: [Triple; 18] = [
    [0, 0, 0],
    [10, 10, 5],
    [11, 11, 5],
    [0, 1, 4],
    [0, 4, 2],
    [0, 6, 12],
    [1, 3, 5],
    [1, 7, 3],
    [1, 9, 6],
    [2, 3, 7],
    [2, 5, 3],
    [2, 12, 8],
    [4, 9, 10],
    [4, 10, 8],
    [6, 8, 11],
    [6, 9, 7],
    [7, 8, 12],
    [9, 12, 11],
];

/// The exotic order-3 presentation labelled 15.1. Points `p0..p12` have ids
/// `0..13`, lines `l0..l12` ids `13..26`.
pub fn builtin_exotic_15_1() -> TrianglePresentation {
    let mut dims = vec![1; 13];
    dims.extend([2; 13]);
    let mut names: Vec<String> = (0..13).map(|i| format!("p{i}")).collect();
    names.extend((0..13).map(|i| format!("l{i}")));
    let mut sigma = vec![0; 26];
    for (p, &l) in EXOTIC_SIGMA.iter().enumerate() {
        sigma[p] = 13 + l;
        sigma[13 + l] = p;
    }
    let mut triples: Vec<Triple> = EXOTIC_CLASSES
        .iter()
        .flat_map(|&[a, b, c]| [[a, b, c], [b, c, a], [c, a, b]])
        .collect();
    triples.sort_unstable();
    triples.dedup();
    let geometry = lines_from_triples(3, &dims, &names, &sigma, &triples)
        .expect("embedded fixture reconstructs to a plane");
    let mirrored: Vec<Triple> = triples
        .iter()
        .map(|&[u, v, w]| [sigma[w], sigma[v], sigma[u]])
        .collect();
    triples.extend(mirrored);
    TrianglePresentation::build(geometry, sigma, triples, false)
        .expect("embedded fixture has a well-formed sigma")
}

/// Presentation on the nonempty proper subsets of a `ground`-element set:
/// `σ` is complement, and `T` consists of the ordered partitions of the
/// ground set into three blocks together with their reversed complements.
/// The dimension condition is taken mod `ground`.
pub fn degenerate(ground: usize) -> Result<TrianglePresentation> {
    let geometry = powerset_geometry(ground)?;
    let masks = match geometry.model() {
        GeometryModel::Powerset { masks, .. } => masks.clone(),
        _ => unreachable!("powerset geometry carries its masks"),
    };
    let full = (1u64 << ground) - 1;
    let index: BTreeMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let sigma: Vec<usize> = masks.iter().map(|&m| index[&(full ^ m)]).collect();
    let mut triples = Vec::new();
    for (i, &x) in masks.iter().enumerate() {
        for (j, &y) in masks.iter().enumerate() {
            let z = full ^ x ^ y;
            if x & y == 0 && z != 0 {
                let k = index[&z];
                triples.push([i, j, k]);
                triples.push([sigma[k], sigma[j], sigma[i]]);
            }
        }
    }
    TrianglePresentation::build(geometry, sigma, triples, true)
}
