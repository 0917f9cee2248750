//! The fiber functor of a triangle presentation: sparse matrices for the
//! generating webs and exact checks of the web relations.
//!
//! `V_a` has basis `Π_a` in ascending id order for `0 < a < n`; `V_0` and
//! `V_n` are one-dimensional. Label 0 is the monoidal unit, so merges and
//! splits with a 0 label are identities.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use once_cell::race::OnceBox;

use crate::geometry::generalized_binomial;
use crate::gf::ScalarField;
use crate::presentation::TrianglePresentation;
use crate::sparsemat::SparseMatrix;
use crate::{Error, Result};

/// Whether a presentation and a characteristic meet the functor's
/// hypotheses, with a message per violated condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypotheses {
    pub characteristic: u64,
    pub n: usize,
    pub q: u64,
    pub violations: Vec<String>,
    pub overridden: bool,
}

impl Hypotheses {
    pub fn evaluate(tp: &TrianglePresentation, characteristic: u64) -> Self {
        let n = tp.n();
        let q = tp.q();
        let mut violations = Vec::new();
        if characteristic == 0 {
            if q != 1 {
                violations.push(format!(
                    "q ≡ 1 mod p fails: characteristic 0 needs q = 1, got q = {q}"
                ));
            }
        } else {
            if (characteristic as usize) < n - 1 {
                violations.push(format!("p ≥ n−1 fails: p = {characteristic}, n−1 = {}", n - 1));
            }
            if !(q - 1).is_multiple_of(characteristic) {
                violations.push(format!("q ≡ 1 mod p fails: q = {q}, p = {characteristic}"));
            }
            if tp.characteristic_zero_only() {
                violations.push(String::from("presentation is marked characteristic-0 only"));
            }
        }
        Self {
            characteristic,
            n,
            q,
            violations,
            overridden: false,
        }
    }

    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Merge = 0,
    Split = 1,
    Crossing = 2,
}

/// A presentation over a chosen field, with generator matrices memoized.
pub struct FunctorContext<K: ScalarField> {
    tp: TrianglePresentation,
    field: K,
    hypotheses: Hypotheses,
    /// Position of each element inside the basis of its `V_a`.
    position: Vec<usize>,
    bases: Vec<Vec<usize>>,
    cache: [Vec<OnceBox<SparseMatrix<K>>>; 3],
}

impl<K: ScalarField> fmt::Debug for FunctorContext<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctorContext")
            .field("n", &self.tp.n())
            .field("q", &self.tp.q())
            .field("field", &self.field)
            .field("hypotheses", &self.hypotheses)
            .finish()
    }
}

impl<K: ScalarField> FunctorContext<K> {
    /// Refuses presentations outside the hypotheses.
    pub fn new(tp: TrianglePresentation, field: K) -> Result<Self> {
        let hypotheses = Hypotheses::evaluate(&tp, field.characteristic());
        if !hypotheses.satisfied() {
            return Err(Error::Hypothesis(hypotheses.violations.join("; ")));
        }
        Ok(Self::assemble(tp, field, hypotheses))
    }

    /// Builds the context regardless of the hypotheses. Reports produced
    /// from it carry `hypotheses_overridden`.
    pub fn with_override(tp: TrianglePresentation, field: K) -> Self {
        let mut hypotheses = Hypotheses::evaluate(&tp, field.characteristic());
        hypotheses.overridden = !hypotheses.satisfied();
        Self::assemble(tp, field, hypotheses)
    }

    fn assemble(tp: TrianglePresentation, field: K, hypotheses: Hypotheses) -> Self {
        let n = tp.n();
        let mut position = vec![0; tp.len()];
        let mut bases = vec![Vec::new(); n + 1];
        for (a, basis) in bases.iter_mut().enumerate().take(n).skip(1) {
            *basis = tp.elements_of_dim(a);
            for (i, &id) in basis.iter().enumerate() {
                position[id] = i;
            }
        }
        let slots = (n + 1) * (n + 1);
        let cache = [(); 3].map(|_| (0..slots).map(|_| OnceBox::new()).collect());
        Self {
            tp,
            field,
            hypotheses,
            position,
            bases,
            cache,
        }
    }

    pub fn presentation(&self) -> &TrianglePresentation {
        &self.tp
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn hypotheses(&self) -> &Hypotheses {
        &self.hypotheses
    }

    pub fn n(&self) -> usize {
        self.tp.n()
    }

    /// `dim V_a`.
    pub fn dim(&self, a: usize) -> usize {
        if a == 0 || a == self.n() {
            1
        } else {
            self.bases[a].len()
        }
    }

    /// Element ids forming the basis of `V_a`; empty for `a = 0` and `a = n`,
    /// whose single basis vector is written `1`.
    pub fn basis(&self, a: usize) -> &[usize] {
        &self.bases[a]
    }

    pub fn basis_label(&self, a: usize, i: usize) -> String {
        if a == 0 || a == self.n() {
            String::from("1")
        } else {
            String::from(self.tp.name(self.bases[a][i]))
        }
    }

    pub fn identity(&self, a: usize) -> SparseMatrix<K> {
        SparseMatrix::identity(self.dim(a), self.field.clone())
    }

    fn check_label(&self, a: usize) -> Result<()> {
        if a > self.n() {
            return Err(Error::NoSuchLabel(format!("label {a} exceeds n = {}", self.n())));
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_label(a)?;
        self.check_label(b)?;
        if a + b > self.n() {
            return Err(Error::NoSuchLabel(format!(
                "no such label: {a} + {b} exceeds n = {}",
                self.n()
            )));
        }
        Ok(())
    }

    fn cached(
        &self,
        kind: Kind,
        a: usize,
        b: usize,
        build: impl FnOnce() -> Result<SparseMatrix<K>>,
    ) -> Result<&SparseMatrix<K>> {
        self.cache[kind as usize][a * (self.n() + 1) + b].get_or_try_init(|| build().map(Box::new))
    }

    /// `V_a ⊗ V_b → V_{a+b}`.
    pub fn merge(&self, a: usize, b: usize) -> Result<&SparseMatrix<K>> {
        self.check_pair(a, b)?;
        self.cached(Kind::Merge, a, b, || self.build_merge(a, b))
    }

    fn build_merge(&self, a: usize, b: usize) -> Result<SparseMatrix<K>> {
        let n = self.n();
        if a == 0 || b == 0 {
            return Ok(self.identity(a + b));
        }
        let db = self.dim(b);
        let one = self.field.one();
        let entries: Vec<(usize, usize, K::Elem)> = if a + b == n {
            self.bases[a]
                .iter()
                .map(|&u| (0, self.position[u] * db + self.position[self.tp.sigma(u)], one.clone()))
                .collect()
        } else {
            self.tp
                .triples()
                .iter()
                .filter(|&&[u, v, _]| self.tp.dim(u) == a && self.tp.dim(v) == b)
                .map(|&[u, v, x]| {
                    let w = self.tp.sigma(x);
                    (self.position[w], self.position[u] * db + self.position[v], one.clone())
                })
                .collect()
        };
        SparseMatrix::from_triplets(self.dim(a + b), self.dim(a) * db, self.field.clone(), entries)
    }

    /// `V_{a+b} → V_a ⊗ V_b`, built directly from the triples.
    pub fn split(&self, a: usize, b: usize) -> Result<&SparseMatrix<K>> {
        self.check_pair(a, b)?;
        self.cached(Kind::Split, a, b, || self.build_split(a, b))
    }

    fn build_split(&self, a: usize, b: usize) -> Result<SparseMatrix<K>> {
        let n = self.n();
        if a == 0 || b == 0 {
            return Ok(self.identity(a + b));
        }
        let db = self.dim(b);
        let one = self.field.one();
        let entries: Vec<(usize, usize, K::Elem)> = if a + b == n {
            self.bases[a]
                .iter()
                .map(|&v| (self.position[v] * db + self.position[self.tp.sigma(v)], 0, one.clone()))
                .collect()
        } else {
            self.bases[a + b]
                .iter()
                .flat_map(|&u| {
                    self.tp
                        .with_third(self.tp.sigma(u))
                        .iter()
                        .filter(|&&(v, w)| self.tp.dim(v) == a && self.tp.dim(w) == b)
                        .map(move |&(v, w)| (v, w, u))
                })
                .map(|(v, w, u)| (self.position[v] * db + self.position[w], self.position[u], one.clone()))
                .collect()
        };
        SparseMatrix::from_triplets(self.dim(a) * db, self.dim(a + b), self.field.clone(), entries)
    }

    /// The univalent vertex `V_n → V_0`.
    pub fn dot_in(&self) -> SparseMatrix<K> {
        SparseMatrix::identity(1, self.field.clone())
    }

    /// The univalent vertex `V_0 → V_n`.
    pub fn dot_out(&self) -> SparseMatrix<K> {
        SparseMatrix::identity(1, self.field.clone())
    }

    /// Kronecker product of a sequence of matrices, in order.
    pub fn tensor(&self, factors: &[&SparseMatrix<K>]) -> Result<SparseMatrix<K>> {
        let mut acc = SparseMatrix::identity(1, self.field.clone());
        for f in factors {
            acc = acc.kron(f)?;
        }
        Ok(acc)
    }

    /// Ladder rung moving `k` from the left strand to the right:
    /// `V_a ⊗ V_b → V_{a-k} ⊗ V_{b+k}`.
    pub fn transfer_right(&self, a: usize, b: usize, k: usize) -> Result<SparseMatrix<K>> {
        if k > a || b + k > self.n() {
            return Err(Error::NoSuchLabel(format!("cannot move {k} right across ({a},{b})")));
        }
        let bottom = self.tensor(&[self.split(a - k, k)?, &self.identity(b)])?;
        let top = self.tensor(&[&self.identity(a - k), self.merge(k, b)?])?;
        top.matmul(&bottom)
    }

    /// Ladder rung moving `k` from the right strand to the left:
    /// `V_a ⊗ V_b → V_{a+k} ⊗ V_{b-k}`.
    pub fn transfer_left(&self, a: usize, b: usize, k: usize) -> Result<SparseMatrix<K>> {
        if k > b || a + k > self.n() {
            return Err(Error::NoSuchLabel(format!("cannot move {k} left across ({a},{b})")));
        }
        let bottom = self.tensor(&[&self.identity(a), self.split(k, b - k)?])?;
        let top = self.tensor(&[self.merge(a, k)?, &self.identity(b - k)])?;
        top.matmul(&bottom)
    }

    /// `V_a ⊗ V_b → V_b ⊗ V_a` as the signed ladder sum
    /// `Σ_t (-1)^t · transfer_left(t, a+b-t, b-t) ∘ transfer_right(a, b, a-t)`.
    pub fn crossing(&self, a: usize, b: usize) -> Result<&SparseMatrix<K>> {
        self.check_label(a)?;
        self.check_label(b)?;
        self.cached(Kind::Crossing, a, b, || {
            let lo = (a + b).saturating_sub(self.n());
            let mut acc = SparseMatrix::zeros(self.dim(b) * self.dim(a), self.dim(a) * self.dim(b), self.field.clone());
            for t in lo..=a.min(b) {
                let term = self
                    .transfer_left(t, a + b - t, b - t)?
                    .matmul(&self.transfer_right(a, b, a - t)?)?;
                acc = if t % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            Ok(acc)
        })
    }

    fn scalar(&self, x: i64) -> K::Elem {
        self.field.from_i64(x)
    }

    fn report(
        &self,
        relation: &str,
        labels: &[usize],
        lhs: &SparseMatrix<K>,
        rhs: &SparseMatrix<K>,
    ) -> Result<RelationReport> {
        let witness = lhs.first_difference(rhs)?.map(|d| Witness {
            row: d.row,
            col: d.col,
            lhs: d.lhs.to_string(),
            rhs: d.rhs.to_string(),
        });
        Ok(RelationReport {
            relation: String::from(relation),
            labels: labels.to_vec(),
            pass: witness.is_none(),
            witness,
            hypotheses_overridden: self.hypotheses.overridden,
        })
    }

    fn not_applicable(relation: &str, labels: &[usize]) -> Error {
        Error::NotApplicable(format!("{relation} not applicable to labels {labels:?}"))
    }

    /// `merge_{a+b,c} ∘ (merge_{a,b} ⊗ id) = merge_{a,b+c} ∘ (id ⊗ merge_{b,c})`.
    pub fn check_associativity(&self, a: usize, b: usize, c: usize) -> Result<RelationReport> {
        if a + b + c > self.n() {
            return Err(Self::not_applicable(ASSOCIATIVITY, &[a, b, c]));
        }
        let lhs = self.merge(a + b, c)?.matmul(&self.tensor(&[self.merge(a, b)?, &self.identity(c)])?)?;
        let rhs = self.merge(a, b + c)?.matmul(&self.tensor(&[&self.identity(a), self.merge(b, c)?])?)?;
        self.report(ASSOCIATIVITY, &[a, b, c], &lhs, &rhs)
    }

    /// `(split_{a,b} ⊗ id) ∘ split_{a+b,c} = (id ⊗ split_{b,c}) ∘ split_{a,b+c}`.
    pub fn check_coassociativity(&self, a: usize, b: usize, c: usize) -> Result<RelationReport> {
        if a + b + c > self.n() {
            return Err(Self::not_applicable(COASSOCIATIVITY, &[a, b, c]));
        }
        let lhs = self.tensor(&[self.split(a, b)?, &self.identity(c)])?.matmul(self.split(a + b, c)?)?;
        let rhs = self.tensor(&[&self.identity(a), self.split(b, c)?])?.matmul(self.split(a, b + c)?)?;
        self.report(COASSOCIATIVITY, &[a, b, c], &lhs, &rhs)
    }

    /// `merge_{a,b} ∘ split_{a,b} = binom(a+b, a) · id`.
    pub fn check_bigon(&self, a: usize, b: usize) -> Result<RelationReport> {
        if a + b > self.n() {
            return Err(Self::not_applicable(BIGON, &[a, b]));
        }
        let lhs = self.merge(a, b)?.matmul(self.split(a, b)?)?;
        let c = self.field.from_bigint(&generalized_binomial((a + b) as i64, a as u64));
        let rhs = self.identity(a + b).scale(&c);
        self.report(BIGON, &[a, b], &lhs, &rhs)
    }

    /// `split_{b,d} ∘ merge_{a,c}` against the sum over `s` of
    /// `(merge ⊗ merge) ∘ (id ⊗ crossing(a-b+s, s) ⊗ id) ∘ (split ⊗ split)`.
    pub fn check_bialgebra(&self, a: usize, c: usize, b: usize, d: usize) -> Result<RelationReport> {
        let labels = [a, c, b, d];
        if a + c != b + d || a + c > self.n() {
            return Err(Self::not_applicable(BIALGEBRA, &labels));
        }
        let lhs = self.split(b, d)?.matmul(self.merge(a, c)?)?;
        let mut rhs = SparseMatrix::zeros(lhs.rows(), lhs.cols(), self.field.clone());
        for s in b.saturating_sub(a)..=b.min(c) {
            let (x, y) = (b - s, a + s - b);
            let bottom = self.tensor(&[self.split(x, y)?, self.split(s, c - s)?])?;
            let middle = self.tensor(&[&self.identity(x), self.crossing(y, s)?, &self.identity(c - s)])?;
            let top = self.tensor(&[self.merge(x, s)?, self.merge(y, c - s)?])?;
            rhs = rhs.add(&top.matmul(&middle.matmul(&bottom)?)?)?;
        }
        self.report(BIALGEBRA, &labels, &lhs, &rhs)
    }

    fn in_range(&self, labels: &[i64]) -> bool {
        labels.iter().all(|&x| (0..=self.n() as i64).contains(&x))
    }

    /// Square switch on `V_a ⊗ V_b` with rungs `c` and `d`.
    ///
    /// Orientation 1 moves `d` right then `c` left, and expands into
    /// `Σ_t binom(a-b+c-d, t)` times `c-t` left then `d-t` right.
    /// Orientation 2 is the mirror image with coefficient
    /// `binom(b-a+d-c, t)`.
    pub fn check_square_switch(
        &self,
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        orientation: u8,
    ) -> Result<RelationReport> {
        let (ai, bi, ci, di) = (a as i64, b as i64, c as i64, d as i64);
        let name = if orientation == 1 { SQUARE_SWITCH_1 } else { SQUARE_SWITCH_2 };
        let labels = [a, b, c, d];
        let admissible = match orientation {
            1 => self.in_range(&[ai, bi, ci, di, ai - di, bi + di, ai - di + ci, bi + di - ci]),
            2 => self.in_range(&[ai, bi, ci, di, ai + ci, bi - ci, ai + ci - di, bi - ci + di]),
            _ => return Err(Error::InvalidArgument(format!("orientation must be 1 or 2, got {orientation}"))),
        };
        if !admissible {
            return Err(Self::not_applicable(name, &labels));
        }
        let (lhs, top) = if orientation == 1 {
            let lhs = self.transfer_left(a - d, b + d, c)?.matmul(&self.transfer_right(a, b, d)?)?;
            (lhs, ai - bi + ci - di)
        } else {
            let lhs = self.transfer_right(a + c, b - c, d)?.matmul(&self.transfer_left(a, b, c)?)?;
            (lhs, bi - ai + di - ci)
        };
        let mut rhs = SparseMatrix::zeros(lhs.rows(), lhs.cols(), self.field.clone());
        for t in 0..=c.min(d) {
            let ti = t as i64;
            let term = if orientation == 1 {
                if !self.in_range(&[ai + ci - ti, bi - ci + ti, ai + ci - di, bi - ci + di]) {
                    continue;
                }
                let first = self.transfer_left(a, b, c - t)?;
                self.transfer_right(a + c - t, b + t - c, d - t)?.matmul(&first)?
            } else {
                if !self.in_range(&[ai - di + ti, bi + di - ti, ai - di + ci, bi + di - ci]) {
                    continue;
                }
                let first = self.transfer_right(a, b, d - t)?;
                self.transfer_left(a + t - d, b + d - t, c - t)?.matmul(&first)?
            };
            let coeff = self.field.from_bigint(&generalized_binomial(top, t as u64));
            rhs = rhs.add(&term.scale(&coeff))?;
        }
        self.report(name, &labels, &lhs, &rhs)
    }

    /// The two-term special cases. `side = Right` works on `V_a ⊗ V_1`,
    /// `side = Left` on `V_1 ⊗ V_a`; in both the ladder equals
    /// `split ∘ merge + (a-1) · id`, the first term absent when `a + 1 > n`.
    pub fn check_special_square_switch(&self, a: usize, side: Side) -> Result<RelationReport> {
        if a == 0 || a > self.n() {
            return Err(Self::not_applicable(SPECIAL_SQUARE_SWITCH, &[a]));
        }
        let (lhs, pair) = match side {
            Side::Right => (
                self.transfer_left(a - 1, 2, 1)?.matmul(&self.transfer_right(a, 1, 1)?)?,
                (a, 1),
            ),
            Side::Left => (
                self.transfer_right(2, a - 1, 1)?.matmul(&self.transfer_left(1, a, 1)?)?,
                (1, a),
            ),
        };
        let mut rhs = self.identity(pair.0).kron(&self.identity(pair.1))?.scale(&self.scalar(a as i64 - 1));
        if a < self.n() {
            rhs = rhs.add(&self.split(pair.0, pair.1)?.matmul(self.merge(pair.0, pair.1)?)?)?;
        }
        let labels = [pair.0, pair.1];
        self.report(SPECIAL_SQUARE_SWITCH, &labels, &lhs, &rhs)
    }

    fn zigzags(&self, a: usize) -> Result<(SparseMatrix<K>, SparseMatrix<K>)> {
        let n = self.n();
        let ia = self.identity(a);
        let z1 = self
            .tensor(&[&self.dot_in(), &ia])?
            .matmul(&self.tensor(&[self.merge(a, n - a)?, &ia])?)?
            .matmul(&self.tensor(&[&ia, self.split(n - a, a)?])?)?
            .matmul(&self.tensor(&[&ia, &self.dot_out()])?)?;
        let z2 = self
            .tensor(&[&ia, &self.dot_in()])?
            .matmul(&self.tensor(&[&ia, self.merge(n - a, a)?])?)?
            .matmul(&self.tensor(&[self.split(a, n - a)?, &ia])?)?
            .matmul(&self.tensor(&[&self.dot_out(), &ia])?)?;
        Ok((z1, z2))
    }

    /// Both zigzags through `V_n` equal `id_{V_a}`.
    pub fn check_snake(&self, a: usize) -> Result<RelationReport> {
        if a == 0 || a >= self.n() {
            return Err(Self::not_applicable(SNAKE, &[a]));
        }
        let (z1, z2) = self.zigzags(a)?;
        let id = self.identity(a);
        let first = self.report(SNAKE, &[a], &z1, &id)?;
        if !first.pass {
            return Ok(first);
        }
        self.report(SNAKE, &[a], &z2, &id)
    }

    /// `(dot_in ⊗ id) ∘ crossing(a, n) = (-1)^a (id ⊗ dot_in)` and the
    /// mirror statement for `crossing(n, a)`.
    pub fn check_dot_crossing(&self, a: usize) -> Result<RelationReport> {
        if a > self.n() {
            return Err(Self::not_applicable(DOT_CROSSING, &[a]));
        }
        let n = self.n();
        let ia = self.identity(a);
        let sign = self.scalar(if a.is_multiple_of(2) { 1 } else { -1 });
        let lhs = self.tensor(&[&self.dot_in(), &ia])?.matmul(self.crossing(a, n)?)?;
        let rhs = self.tensor(&[&ia, &self.dot_in()])?.scale(&sign);
        let first = self.report(DOT_CROSSING, &[a, n], &lhs, &rhs)?;
        if !first.pass {
            return Ok(first);
        }
        let lhs = self.tensor(&[&ia, &self.dot_in()])?.matmul(self.crossing(n, a)?)?;
        let rhs = self.tensor(&[&self.dot_in(), &ia])?.scale(&sign);
        self.report(DOT_CROSSING, &[n, a], &lhs, &rhs)
    }

    /// `dot_out ∘ dot_in = id_{V_n}` and `dot_in ∘ dot_out = id_{V_0}`.
    pub fn check_univalent(&self) -> Result<RelationReport> {
        let n = self.n();
        let first = self.report(UNIVALENT, &[n], &self.dot_out().matmul(&self.dot_in())?, &self.identity(n))?;
        if !first.pass {
            return Ok(first);
        }
        self.report(UNIVALENT, &[0], &self.dot_in().matmul(&self.dot_out())?, &self.identity(0))
    }

    /// `crossing(b, a) ∘ crossing(a, b) = id`.
    pub fn check_crossing_inverse(&self, a: usize, b: usize) -> Result<RelationReport> {
        if a > self.n() || b > self.n() {
            return Err(Self::not_applicable(CROSSING_INVERSE, &[a, b]));
        }
        let lhs = self.crossing(b, a)?.matmul(self.crossing(a, b)?)?;
        let rhs = self.identity(a).kron(&self.identity(b))?;
        self.report(CROSSING_INVERSE, &[a, b], &lhs, &rhs)
    }

    /// Every admissible instance of every relation with labels at most
    /// `max_label`, in a fixed order.
    pub fn instances(&self, max_label: usize) -> Vec<Instance> {
        let n = self.n();
        let m = max_label.min(n);
        let mut out = Vec::new();
        for a in 1..=m {
            for b in 1..=m {
                for c in 1..=m {
                    if a + b + c <= n {
                        out.push(Instance::Associativity(a, b, c));
                        out.push(Instance::Coassociativity(a, b, c));
                    }
                }
            }
        }
        for a in 1..=m {
            for b in 1..=m {
                if a + b <= n {
                    out.push(Instance::Bigon(a, b));
                }
            }
        }
        for a in 1..=m {
            for c in 1..=m {
                for b in 1..=m {
                    for d in 1..=m {
                        if a + c == b + d && a + c <= n {
                            out.push(Instance::Bialgebra(a, c, b, d));
                        }
                    }
                }
            }
        }
        for orientation in [1u8, 2] {
            for a in 0..=m {
                for b in 0..=m {
                    for c in 0..=m {
                        for d in 0..=m {
                            let (ai, bi, ci, di) = (a as i64, b as i64, c as i64, d as i64);
                            let ok = if orientation == 1 {
                                self.in_range(&[ai - di, bi + di, ai - di + ci, bi + di - ci])
                            } else {
                                self.in_range(&[ai + ci, bi - ci, ai + ci - di, bi - ci + di])
                            };
                            if ok {
                                out.push(Instance::SquareSwitch(a, b, c, d, orientation));
                            }
                        }
                    }
                }
            }
        }
        for a in 1..=m {
            out.push(Instance::SpecialSquareSwitch(a, Side::Right));
            out.push(Instance::SpecialSquareSwitch(a, Side::Left));
        }
        for a in 1..=m.min(n - 1) {
            out.push(Instance::Snake(a));
        }
        for a in 0..=m {
            out.push(Instance::DotCrossing(a));
        }
        out.push(Instance::Univalent);
        for a in 0..=m {
            for b in 0..=m {
                out.push(Instance::CrossingInverse(a, b));
            }
        }
        out
    }

    pub fn run_instance(&self, instance: &Instance) -> Result<RelationReport> {
        match *instance {
            Instance::Associativity(a, b, c) => self.check_associativity(a, b, c),
            Instance::Coassociativity(a, b, c) => self.check_coassociativity(a, b, c),
            Instance::Bigon(a, b) => self.check_bigon(a, b),
            Instance::Bialgebra(a, c, b, d) => self.check_bialgebra(a, c, b, d),
            Instance::SquareSwitch(a, b, c, d, o) => self.check_square_switch(a, b, c, d, o),
            Instance::SpecialSquareSwitch(a, side) => self.check_special_square_switch(a, side),
            Instance::Snake(a) => self.check_snake(a),
            Instance::DotCrossing(a) => self.check_dot_crossing(a),
            Instance::Univalent => self.check_univalent(),
            Instance::CrossingInverse(a, b) => self.check_crossing_inverse(a, b),
        }
    }

    /// Runs the instances whose relation name passes `keep`.
    pub fn run_suite(&self, max_label: usize, keep: impl Fn(&str) -> bool) -> Result<Vec<RelationReport>> {
        let selected: Vec<Instance> = self
            .instances(max_label)
            .into_iter()
            .filter(|i| keep(i.relation()))
            .collect();
        self.run_all(&selected)
    }

    /// Every relation instance up to label `max_label`.
    pub fn run_full_suite(&self, max_label: usize) -> Result<Vec<RelationReport>> {
        self.run_suite(max_label, |_| true)
    }

    #[cfg(feature = "parallel")]
    fn run_all(&self, selected: &[Instance]) -> Result<Vec<RelationReport>> {
        use rayon::prelude::*;
        selected.par_iter().map(|i| self.run_instance(i)).collect()
    }

    #[cfg(not(feature = "parallel"))]
    fn run_all(&self, selected: &[Instance]) -> Result<Vec<RelationReport>> {
        selected.iter().map(|i| self.run_instance(i)).collect()
    }
}

pub const ASSOCIATIVITY: &str = "associativity";
pub const COASSOCIATIVITY: &str = "coassociativity";
pub const BIGON: &str = "bigon";
pub const BIALGEBRA: &str = "bialgebra";
pub const SQUARE_SWITCH_1: &str = "square-switch-1";
pub const SQUARE_SWITCH_2: &str = "square-switch-2";
pub const SPECIAL_SQUARE_SWITCH: &str = "special-square-switch";
pub const SNAKE: &str = "snake";
pub const DOT_CROSSING: &str = "dot-crossing";
pub const UNIVALENT: &str = "univalent";
pub const CROSSING_INVERSE: &str = "crossing-inverse";

pub const RELATIONS: [&str; 11] = [
    ASSOCIATIVITY,
    COASSOCIATIVITY,
    BIGON,
    BIALGEBRA,
    SQUARE_SWITCH_1,
    SQUARE_SWITCH_2,
    SPECIAL_SQUARE_SWITCH,
    SNAKE,
    DOT_CROSSING,
    UNIVALENT,
    CROSSING_INVERSE,
];

/// Which tensor factor carries the `V_1` in the special square switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `V_a ⊗ V_1`.
    Right,
    /// `V_1 ⊗ V_a`.
    Left,
}

/// One relation at one label tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instance {
    Associativity(usize, usize, usize),
    Coassociativity(usize, usize, usize),
    Bigon(usize, usize),
    Bialgebra(usize, usize, usize, usize),
    SquareSwitch(usize, usize, usize, usize, u8),
    SpecialSquareSwitch(usize, Side),
    Snake(usize),
    DotCrossing(usize),
    Univalent,
    CrossingInverse(usize, usize),
}

impl Instance {
    pub fn relation(&self) -> &'static str {
        match self {
            Instance::Associativity(..) => ASSOCIATIVITY,
            Instance::Coassociativity(..) => COASSOCIATIVITY,
            Instance::Bigon(..) => BIGON,
            Instance::Bialgebra(..) => BIALGEBRA,
            Instance::SquareSwitch(.., 1) => SQUARE_SWITCH_1,
            Instance::SquareSwitch(..) => SQUARE_SWITCH_2,
            Instance::SpecialSquareSwitch(..) => SPECIAL_SQUARE_SWITCH,
            Instance::Snake(..) => SNAKE,
            Instance::DotCrossing(..) => DOT_CROSSING,
            Instance::Univalent => UNIVALENT,
            Instance::CrossingInverse(..) => CROSSING_INVERSE,
        }
    }
}

/// First differing entry of a failed relation, values rendered as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: String,
    pub labels: Vec<usize>,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub hypotheses_overridden: bool,
}

pub fn all_pass(reports: &[RelationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{PrimeField, Rationals};
    use crate::presentation::{builtin_exotic_15_1, degenerate};

    fn exotic() -> FunctorContext<PrimeField> {
        FunctorContext::new(builtin_exotic_15_1(), PrimeField::new(2).unwrap()).unwrap()
    }

    fn col(ctx: &FunctorContext<PrimeField>, u: &str, v: &str) -> usize {
        let tp = ctx.presentation();
        let (u, v) = (tp.id_of(u).unwrap(), tp.id_of(v).unwrap());
        let pos = |x| ctx.basis(tp.dim(x)).iter().position(|&y| y == x).unwrap();
        pos(u) * ctx.dim(tp.dim(v)) + pos(v)
    }

    #[test]
    fn hypotheses() {
        let tp = builtin_exotic_15_1();
        assert!(Hypotheses::evaluate(&tp, 2).satisfied());
        let err = FunctorContext::new(tp.clone(), PrimeField::new(3).unwrap()).unwrap_err();
        assert!(format!("{err}").contains("q ≡ 1 mod p"));
        assert!(FunctorContext::new(degenerate(4).unwrap(), Rationals).is_ok());
        assert!(FunctorContext::new(degenerate(4).unwrap(), PrimeField::new(5).unwrap()).is_err());
        let ctx = FunctorContext::with_override(tp, PrimeField::new(3).unwrap());
        assert!(ctx.hypotheses().overridden);
    }

    #[test]
    fn merge_examples() {
        let ctx = exotic();
        let m = ctx.merge(1, 1).unwrap();
        let l0 = ctx.presentation().id_of("l0").unwrap();
        let row = ctx.basis(2).iter().position(|&x| x == l0).unwrap();
        assert_eq!(m.get(row, col(&ctx, "p0", "p0")), 1);
        assert_eq!(m.row(row).count(), 4);
        let c = col(&ctx, "p0", "p5");
        assert!((0..13).all(|r| m.get(r, c) == 0));
        let m12 = ctx.merge(1, 2).unwrap();
        assert_eq!(m12.get(0, col(&ctx, "p1", "l3")), 1);
        assert_eq!(m12.nnz(), 13);
        assert!(matches!(ctx.merge(2, 2), Err(Error::NoSuchLabel(_))));
        assert_eq!(ctx.merge(0, 2).unwrap(), &ctx.identity(2));
    }

    #[test]
    fn split_is_transpose_of_merge() {
        let ctx = exotic();
        for a in 0..=3 {
            for b in 0..=3 - a {
                assert_eq!(ctx.split(a, b).unwrap(), &ctx.merge(a, b).unwrap().transpose());
            }
        }
    }

    #[test]
    fn crossing_one_one_is_split_merge_minus_identity() {
        let ctx = FunctorContext::new(degenerate(4).unwrap(), Rationals).unwrap();
        let direct = ctx
            .split(1, 1)
            .unwrap()
            .matmul(ctx.merge(1, 1).unwrap())
            .unwrap()
            .sub(&ctx.identity(1).kron(&ctx.identity(1)).unwrap())
            .unwrap();
        assert_eq!(ctx.crossing(1, 1).unwrap(), &direct);
        assert_eq!(ctx.crossing(0, 2).unwrap(), &ctx.identity(2));
    }

    #[test]
    fn bigon_examples() {
        let ctx = exotic();
        assert!(ctx.check_bigon(1, 1).unwrap().pass);
        let deg = FunctorContext::new(degenerate(4).unwrap(), Rationals).unwrap();
        assert!(deg.check_bigon(1, 1).unwrap().pass);
        assert!(deg.check_bigon(2, 2).unwrap().pass);
        assert!(ctx.check_bigon(2, 2).is_err());
    }

    #[test]
    fn exotic_suite_passes() {
        let ctx = exotic();
        let reports = ctx.run_full_suite(3).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn degenerate_suites_pass() {
        for ground in [3, 4, 5] {
            let ctx = FunctorContext::new(degenerate(ground).unwrap(), Rationals).unwrap();
            let reports = ctx.run_full_suite(ground).unwrap();
            let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
            assert!(failed.is_empty(), "ground {ground}: {failed:?}");
        }
    }
}
