//! Sparse rational matrices with fraction-free (Bareiss) elimination.
//!
//! Rows are cleared of denominators before elimination, so the forward pass
//! runs entirely over `BigInt`. Pivots are chosen in the leftmost column that
//! has a nonzero entry at or below the current row, taking the smallest row
//! index; this fixes the echelon form and therefore the nullspace basis for a
//! given input. Rows start out sparse and are densified once fill-in passes
//! half of the entries.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{denominator_lcm, Rational};

/// Fill ratio above which elimination switches to dense rows.
const DENSE_FILL_RATIO: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rational>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from sparse columns `(row, value)`.
    pub fn from_columns(rows: usize, columns: &[Vec<(usize, Rational)>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                let cur = m.get(*r, c);
                m.set(*r, c, cur + v);
            }
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sets an entry; zero values remove the entry.
    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.data[r].iter().map(|(c, v)| (*c, v))
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Rational::zero(), |acc, (c, v)| acc + v * &x[*c])
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.echelon(None).pivots.len()
    }

    /// Pivot columns of the echelon form, ascending. These index a maximal
    /// linearly independent subset of the columns, chosen greedily from the
    /// left.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.echelon(None).pivots.iter().map(|p| p.1).collect()
    }

    /// Exact basis of `{x : Mx = 0}`. Each basis vector has a 1 in one free
    /// column and 0 in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let ech = self.echelon(None);
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|p| p.1).collect();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|c| !is_pivot[*c])
            .map(|free| {
                let mut x = vec![Rational::zero(); self.cols];
                x[free] = Rational::one();
                ech.back_substitute(&mut x, None);
                x
            })
            .collect()
    }

    /// One exact solution of `Mx = b`, free variables set to zero, or `None`
    /// if the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let ech = self.echelon(Some(b));
        // A nonzero right-hand side below the last pivot row means no solution.
        if ech.rows[ech.pivots.len()..]
            .iter()
            .any(|row| !row.rhs.is_zero())
        {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        ech.back_substitute(&mut x, Some(()));
        Some(x)
    }

    fn echelon(&self, rhs: Option<&[Rational]>) -> Echelon {
        let mut rows: Vec<IntRow> = (0..self.rows)
            .map(|i| {
                let extra = rhs.map(|b| &b[i]);
                let scale = denominator_lcm(self.data[i].values().chain(extra));
                let entries = self.data[i]
                    .iter()
                    .map(|(c, v)| (*c, (v * &scale).to_integer()))
                    .collect();
                let rhs = extra
                    .map(|v| (v * &scale).to_integer())
                    .unwrap_or_else(BigInt::zero);
                IntRow {
                    entries: RowData::Sparse(entries),
                    rhs,
                }
            })
            .collect();
        let pivots = bareiss(&mut rows, self.cols);
        Echelon { rows, pivots }
    }
}

#[derive(Clone, Debug)]
enum RowData {
    Sparse(BTreeMap<usize, BigInt>),
    Dense(Vec<BigInt>),
}

#[derive(Clone, Debug)]
struct IntRow {
    entries: RowData,
    rhs: BigInt,
}

impl IntRow {
    fn get(&self, c: usize) -> BigInt {
        match &self.entries {
            RowData::Sparse(m) => m.get(&c).cloned().unwrap_or_else(BigInt::zero),
            RowData::Dense(v) => v[c].clone(),
        }
    }

    fn is_zero_at(&self, c: usize) -> bool {
        match &self.entries {
            RowData::Sparse(m) => !m.contains_key(&c),
            RowData::Dense(v) => v[c].is_zero(),
        }
    }

    fn nnz(&self) -> usize {
        match &self.entries {
            RowData::Sparse(m) => m.len(),
            RowData::Dense(v) => v.iter().filter(|x| !x.is_zero()).count(),
        }
    }

    fn densify(&mut self, cols: usize) {
        if let RowData::Sparse(m) = &self.entries {
            let mut v = vec![BigInt::zero(); cols];
            for (c, x) in m {
                v[*c] = x.clone();
            }
            self.entries = RowData::Dense(v);
        }
    }

    /// `self = (a * self - b * pivot) / div`, restricted to columns `> col`;
    /// column `col` becomes zero. Division is exact by Bareiss' identity.
    fn bareiss_update(&mut self, a: &BigInt, pivot: &IntRow, b: &BigInt, div: &BigInt, col: usize) {
        let reduce = |x: BigInt| -> BigInt {
            debug_assert!((&x % div).is_zero(), "inexact Bareiss division");
            x / div
        };
        match (&mut self.entries, &pivot.entries) {
            (RowData::Dense(row), RowData::Dense(prow)) => {
                row[col] = BigInt::zero();
                for c in col + 1..row.len() {
                    let x = a * &row[c] - b * &prow[c];
                    row[c] = if x.is_zero() { x } else { reduce(x) };
                }
            }
            (RowData::Sparse(row), RowData::Sparse(prow)) => {
                let mut out = BTreeMap::new();
                let mut keys: Vec<usize> = row.keys().chain(prow.keys()).copied().collect();
                keys.sort_unstable();
                keys.dedup();
                for c in keys.into_iter().filter(|c| *c > col) {
                    let mine = row.get(&c);
                    let theirs = prow.get(&c);
                    let x = match (mine, theirs) {
                        (Some(m), Some(t)) => a * m - b * t,
                        (Some(m), None) => a * m,
                        (None, Some(t)) => -(b * t),
                        (None, None) => continue,
                    };
                    if !x.is_zero() {
                        out.insert(c, reduce(x));
                    }
                }
                *row = out;
            }
            _ => unreachable!("mixed row storage"),
        }
        self.rhs = reduce(a * &self.rhs - b * &pivot.rhs);
    }
}

struct Echelon {
    rows: Vec<IntRow>,
    /// `(row, col)` of each pivot, in order.
    pivots: Vec<(usize, usize)>,
}

impl Echelon {
    /// Fills the pivot variables of `x` so the echelon system holds, given
    /// the free variables already in `x`. With `rhs` the augmented column is
    /// used; otherwise the system is homogeneous.
    fn back_substitute(&self, x: &mut [Rational], rhs: Option<()>) {
        for &(r, c) in self.pivots.iter().rev() {
            let row = &self.rows[r];
            let mut acc = if rhs.is_some() {
                Rational::from_integer(row.rhs.clone())
            } else {
                Rational::zero()
            };
            match &row.entries {
                RowData::Sparse(m) => {
                    for (j, v) in m.range(c + 1..) {
                        if !x[*j].is_zero() {
                            acc -= Rational::from_integer(v.clone()) * &x[*j];
                        }
                    }
                }
                RowData::Dense(v) => {
                    for j in c + 1..v.len() {
                        if !v[j].is_zero() && !x[j].is_zero() {
                            acc -= Rational::from_integer(v[j].clone()) * &x[j];
                        }
                    }
                }
            }
            x[c] = acc / Rational::from_integer(row.get(c));
        }
    }
}

fn bareiss(rows: &mut [IntRow], cols: usize) -> Vec<(usize, usize)> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut dense = false;
    for c in 0..cols {
        if r >= nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| !rows[i].is_zero_at(c)) else {
            continue;
        };
        rows.swap(r, found);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot = &head[r];
        let pval = pivot.get(c);
        for row in tail.iter_mut() {
            let b = row.get(c);
            row.bareiss_update(&pval, pivot, &b, &prev, c);
        }
        pivots.push((r, c));
        prev = pval;
        r += 1;

        if !dense && cols > 0 {
            let fill: usize = rows[r..].iter().map(IntRow::nnz).sum();
            let total = (nrows - r) * cols;
            if total > 0 && fill as f64 > DENSE_FILL_RATIO * total as f64 {
                for row in rows.iter_mut() {
                    row.densify(cols);
                }
                dense = true;
            }
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(SparseMatrix::identity(2).nullspace().is_empty());
        assert_eq!(SparseMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let m = SparseMatrix::zeros(1, 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        assert_eq!(ns[0], vec![int(1), int(0)]);
        assert_eq!(ns[1], vec![int(0), int(1)]);
    }

    #[test]
    fn empty_shapes() {
        assert!(SparseMatrix::zeros(0, 0).nullspace().is_empty());
        assert_eq!(SparseMatrix::zeros(0, 3).nullspace().len(), 3);
        assert_eq!(SparseMatrix::zeros(3, 0).solve(&[int(0), int(0), int(0)]), Some(vec![]));
        assert_eq!(SparseMatrix::zeros(2, 0).solve(&[int(0), int(1)]), None);
    }

    #[test]
    fn pivot_columns_pick_leftmost_independent() {
        let m = SparseMatrix::from_dense(&[
            vec![int(1), int(2), int(0), int(1)],
            vec![int(2), int(4), int(1), int(0)],
        ]);
        assert_eq!(m.pivot_columns(), vec![0, 2]);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let b = vec![rat(1, 2), int(-3), rat(7, 5)];
        assert_eq!(SparseMatrix::identity(3).solve(&b), Some(b.clone()));
        assert_eq!(SparseMatrix::zeros(3, 3).solve(&b), None);
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        // x + y = 2 with y free.
        let m = SparseMatrix::from_dense(&[vec![int(1), int(1)]]);
        assert_eq!(m.solve(&[int(2)]), Some(vec![int(2), int(0)]));
    }

    #[test]
    fn rational_entries() {
        let m = SparseMatrix::from_dense(&[
            vec![rat(1, 2), rat(1, 3), int(0)],
            vec![int(1), rat(2, 3), int(0)],
        ]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert_eq!(ns[0], vec![rat(-2, 3), int(1), int(0)]);
    }

    fn arb_matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec(
                    prop_oneof![
                        3 => Just((0i64, 1i64)),
                        2 => (-4i64..5, 1i64..4),
                    ],
                    c,
                ),
                r,
            )
            .prop_map(|rows| {
                let dense: Vec<Vec<Rational>> = rows
                    .into_iter()
                    .map(|row| row.into_iter().map(|(n, d)| rat(n, d)).collect())
                    .collect();
                SparseMatrix::from_dense(&dense)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), m.cols());
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
            // Kernel vectors are independent: they carry unit entries in distinct free columns.
            let stacked = SparseMatrix::from_dense(&ns);
            if !ns.is_empty() {
                prop_assert_eq!(stacked.rank(), ns.len());
            }
        }

        #[test]
        fn solutions_are_exact(m in arb_matrix(), seed in proptest::collection::vec(-3i64..4, 7)) {
            let x0: Vec<Rational> = (0..m.cols()).map(|i| int(seed[i])).collect();
            let b = m.mul_vec(&x0);
            let x = m.solve(&b).expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x), b);
        }

        #[test]
        fn deterministic(m in arb_matrix()) {
            prop_assert_eq!(m.nullspace(), m.clone().nullspace());
        }
    }
}
