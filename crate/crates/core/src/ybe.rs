//! The involutive Yang-Baxter operator `R̂ = crossing(1, 1)` on `V_1 ⊗ V_1`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::gf::ScalarField;
use crate::presentation::TrianglePresentation;
use crate::sparsemat::SparseMatrix;
use crate::webfun::{FunctorContext, RelationReport, Witness};
use crate::{Error, Result};

/// `R̂` with the data needed to interpret it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YbeSolution<K: ScalarField> {
    pub matrix: SparseMatrix<K>,
    /// `dim V_1`.
    pub points: usize,
    pub q: u64,
    pub characteristic: u64,
    pub hypotheses_overridden: bool,
}

pub fn rhat<K: ScalarField>(ctx: &FunctorContext<K>) -> Result<YbeSolution<K>> {
    Ok(YbeSolution {
        matrix: ctx.crossing(1, 1)?.clone(),
        points: ctx.dim(1),
        q: ctx.presentation().q(),
        characteristic: ctx.field().characteristic(),
        hypotheses_overridden: ctx.hypotheses().overridden,
    })
}

/// `R̂` straight from the relation `(u,v) ≈ (z,w)`, meaning both pairs
/// complete to a triple with the same third point. Column `u ⊗ v` holds the
/// other members of its class when `σ(u)` is incident with `v`, and `-u ⊗ v`
/// otherwise.
pub fn rhat_closed_form<K: ScalarField>(tp: &TrianglePresentation, field: K) -> Result<SparseMatrix<K>> {
    if tp.n() != 3 {
        return Err(Error::UnsupportedRank(String::from("closed form defined for n=3 only")));
    }
    let points = tp.elements_of_dim(1);
    let size = points.len();
    let mut position = alloc::vec![usize::MAX; tp.len()];
    for (i, &p) in points.iter().enumerate() {
        position[p] = i;
    }
    let mut entries = Vec::new();
    for &u in &points {
        for &v in &points {
            let col = position[u] * size + position[v];
            match tp.third(u, v).filter(|_| tp.incident(tp.sigma(u), v)) {
                Some(s) => {
                    for &(z, w) in tp.with_third(s) {
                        if (z, w) != (u, v) {
                            entries.push((position[z] * size + position[w], col, field.one()));
                        }
                    }
                }
                None => entries.push((col, col, field.from_i64(-1))),
            }
        }
    }
    SparseMatrix::from_triplets(size * size, size * size, field, entries)
}

/// `R_{+-}`: swaps `e_i ⊗ e_j` for `i ≠ j` and negates `e_i ⊗ e_i`.
pub fn signed_swap<K: ScalarField>(dim: usize, field: K) -> SparseMatrix<K> {
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let value = if i == j { field.from_i64(-1) } else { field.one() };
            entries.push((j * dim + i, i * dim + j, value));
        }
    }
    SparseMatrix::from_triplets(dim * dim, dim * dim, field, entries).expect("indices in range")
}

fn report<K: ScalarField>(
    relation: &str,
    sol: &YbeSolution<K>,
    lhs: &SparseMatrix<K>,
    rhs: &SparseMatrix<K>,
) -> Result<RelationReport> {
    let witness = lhs.first_difference(rhs)?.map(|d| Witness {
        row: d.row,
        col: d.col,
        lhs: alloc::format!("{}", d.lhs),
        rhs: alloc::format!("{}", d.rhs),
    });
    Ok(RelationReport {
        relation: String::from(relation),
        labels: alloc::vec![1, 1],
        pass: witness.is_none(),
        witness,
        hypotheses_overridden: sol.hypotheses_overridden,
    })
}

/// `R̂² = id`.
pub fn check_involutive<K: ScalarField>(sol: &YbeSolution<K>) -> Result<RelationReport> {
    let r = &sol.matrix;
    let id = SparseMatrix::identity(r.rows(), r.field().clone());
    report("involutive", sol, &r.matmul(r)?, &id)
}

fn braid_check<K: ScalarField>(relation: &str, sol: &YbeSolution<K>, r: &SparseMatrix<K>) -> Result<RelationReport> {
    let id = SparseMatrix::identity(sol.points, r.field().clone());
    let left = r.kron(&id)?;
    let right = id.kron(r)?;
    let lhs = left.matmul(&right)?.matmul(&left)?;
    let rhs = right.matmul(&left)?.matmul(&right)?;
    report(relation, sol, &lhs, &rhs)
}

/// `(R̂ ⊗ 1)(1 ⊗ R̂)(R̂ ⊗ 1) = (1 ⊗ R̂)(R̂ ⊗ 1)(1 ⊗ R̂)` on `V_1^{⊗3}`.
pub fn check_ybe<K: ScalarField>(sol: &YbeSolution<K>) -> Result<RelationReport> {
    braid_check("ybe", sol, &sol.matrix)
}

/// The same braid equation for `-R̂`.
pub fn check_ybe_negated<K: ScalarField>(sol: &YbeSolution<K>) -> Result<RelationReport> {
    braid_check("ybe-negated", sol, &sol.matrix.neg())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityReport {
    pub nnz: usize,
    pub points: usize,
    pub q: u64,
    /// `nnz / N⁴ < q / N²`, decided in integers as `nnz < q·N²`.
    pub bound_ok: bool,
}

pub fn density_report<K: ScalarField>(sol: &YbeSolution<K>) -> DensityReport {
    let nnz = sol.matrix.nnz();
    let n2 = (sol.points as u128) * (sol.points as u128);
    DensityReport {
        nnz,
        points: sol.points,
        q: sol.q,
        bound_ok: (nnz as u128) < sol.q as u128 * n2,
    }
}

/// Columns whose nonzero count differs from `q` (when `σ(u)` meets `v`)
/// or 1 (otherwise), as `(u, v, count)` with element ids.
pub fn column_census_violations<K: ScalarField>(
    sol: &YbeSolution<K>,
    tp: &TrianglePresentation,
) -> Vec<(usize, usize, usize)> {
    let points = tp.elements_of_dim(1);
    let counts = sol.matrix.column_counts();
    let mut bad = Vec::new();
    for (i, &u) in points.iter().enumerate() {
        for (j, &v) in points.iter().enumerate() {
            let got = counts[i * points.len() + j];
            let want = if tp.incident(tp.sigma(u), v) { sol.q as usize } else { 1 };
            if got != want {
                bad.push((u, v, got));
            }
        }
    }
    bad
}
