use std::fmt;

use crate::metrics;
use crate::tropical::{FiniteCoefficient, FiniteCoefficients, TropicalScalar};
use crate::{Error, Result};

/// Dimension cap for the brute-force permanent (test support only).
pub const PERMANENT_CAP: usize = 10;

/// A dense matrix over the max-plus semiring.
///
/// Also serves as the bound-matrix storage for difference-bound matrices.
/// Row-major, indexed from zero.
#[derive(Clone, PartialEq, Eq)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropicalScalar>,
}

impl TropicalMatrix {
    /// All-ε matrix of the given shape.
    pub fn new(rows: usize, cols: usize) -> TropicalMatrix {
        TropicalMatrix {
            rows,
            cols,
            entries: vec![TropicalScalar::Epsilon; rows * cols],
        }
    }

    /// Build from rows of optional integers, `None` encoding ε.
    ///
    /// Fails if the rows are ragged.
    pub fn from_rows(rows: &[Vec<Option<i64>>]) -> Result<TropicalMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = TropicalMatrix::new(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    m.set(i, j, TropicalScalar::Finite(*v));
                }
            }
        }
        Ok(m)
    }

    /// The n×n tropical identity: unit diagonal, ε elsewhere.
    pub fn identity(n: usize) -> TropicalMatrix {
        let mut m = TropicalMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, TropicalScalar::UNIT);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> TropicalScalar {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: TropicalScalar) {
        self.entries[i * self.cols + j] = v;
    }

    /// Entrywise maximum `A ⊕ B`.
    pub fn oplus(&self, other: &TropicalMatrix) -> Result<TropicalMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{} matrices",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        metrics::add_ops((self.rows * self.cols) as u64);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a.oplus(b))
            .collect();
        Ok(TropicalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Tropical product `A ⊗ C`: entry (i,j) = max_k (A(i,k) + C(k,j)).
    pub fn otimes(&self, other: &TropicalMatrix) -> Result<TropicalMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = TropicalMatrix::new(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TropicalScalar::Epsilon;
                for k in 0..self.cols {
                    acc = acc.oplus(self.get(i, k).otimes(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        metrics::add_ops((self.rows * self.cols * other.cols) as u64);
        Ok(out)
    }

    /// Tropical power `A^{⊗m}`, with `A^{⊗0} = I`.
    pub fn power(&self, m: usize) -> Result<TropicalMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "tropical power needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let mut acc = TropicalMatrix::identity(self.rows);
        for _ in 0..m {
            acc = acc.otimes(self)?;
        }
        Ok(acc)
    }

    /// Apply the matrix to a real point: `(A ⊗ x)_i = max_k (A(i,k) + x_k)`.
    ///
    /// Supports the sampling oracles; for a row-finite matrix the result is
    /// finite everywhere.
    pub fn apply_real(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, matrix expects {}",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter_map(|k| self.get(i, k).finite().map(|a| a as f64 + x[k]))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect())
    }

    /// True when every row has at least one finite entry.
    pub fn is_row_finite(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).any(|j| self.get(i, j).is_finite()))
    }

    /// Enumerate all finite coefficients of a square row-finite matrix.
    ///
    /// A finite coefficient picks one finite column per row; the stream is
    /// the Cartesian product of the per-row finite-column sets in
    /// lexicographic order. The returned set is indexable, so ranges can be
    /// consumed in parallel and merged back in order.
    pub fn finite_coefficients(&self) -> Result<FiniteCoefficients> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "finite coefficients need a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let mut columns = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let finite: Vec<usize> = (0..self.cols)
                .filter(|&j| self.get(i, j).is_finite())
                .collect();
            if finite.is_empty() {
                return Err(Error::NotRowFinite { row: i });
            }
            columns.push(finite);
        }
        Ok(FiniteCoefficients::new(columns))
    }

    /// True when `g` selects a finite entry in every row.
    pub fn is_finite_coefficient(&self, g: &FiniteCoefficient) -> bool {
        g.len() == self.rows
            && g.cols()
                .iter()
                .enumerate()
                .all(|(i, &j)| j < self.cols && self.get(i, j).is_finite())
    }

    fn check_coefficient(&self, g: &FiniteCoefficient) -> Result<()> {
        if g.len() != self.rows {
            return Err(Error::Dimension(format!(
                "coefficient has {} entries, matrix has {} rows",
                g.len(),
                self.rows
            )));
        }
        for (i, &j) in g.cols().iter().enumerate() {
            if j >= self.cols || !self.get(i, j).is_finite() {
                return Err(Error::InvalidCoefficient { row: i, col: j });
            }
        }
        Ok(())
    }

    /// The region matrix `A_g`: keeps the entries selected by `g`, ε elsewhere.
    pub fn region_matrix(&self, g: &FiniteCoefficient) -> Result<TropicalMatrix> {
        self.check_coefficient(g)?;
        let mut out = TropicalMatrix::new(self.rows, self.cols);
        for (i, &j) in g.cols().iter().enumerate() {
            out.set(i, j, self.get(i, j));
        }
        Ok(out)
    }

    /// The conjugate `A^c`: negated transpose of the finite entries,
    /// `A^c(i,j) = −A(j,i)` where `A(j,i)` is finite, ε elsewhere.
    pub fn conjugate(&self) -> TropicalMatrix {
        let mut out = TropicalMatrix::new(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, -self.get(i, j));
            }
        }
        out
    }

    /// The row-definite form `_gĀ = A_g^c ⊗ A`.
    pub fn row_definite(&self, g: &FiniteCoefficient) -> Result<TropicalMatrix> {
        let region = self.region_matrix(g)?;
        region.conjugate().otimes(self)
    }

    /// The column-definite form `Ā_g = A ⊗ A_g^c`.
    pub fn col_definite(&self, g: &FiniteCoefficient) -> Result<TropicalMatrix> {
        let region = self.region_matrix(g)?;
        self.otimes(&region.conjugate())
    }

    /// The tropical permanent: max over permutations σ of Σ_i A(i,σ(i)).
    ///
    /// Brute force with ε pruning, capped at [`PERMANENT_CAP`]; exposed for
    /// definiteness checks in tests, never needed at scale.
    pub fn permanent(&self) -> Result<TropicalScalar> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "permanent needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rows > PERMANENT_CAP {
            return Err(Error::PermanentCap {
                dim: self.rows,
                cap: PERMANENT_CAP,
            });
        }
        let mut used = vec![false; self.cols];
        Ok(self.permanent_rec(0, &mut used))
    }

    fn permanent_rec(&self, row: usize, used: &mut Vec<bool>) -> TropicalScalar {
        if row == self.rows {
            return TropicalScalar::UNIT;
        }
        let mut best = TropicalScalar::Epsilon;
        for col in 0..self.cols {
            if used[col] {
                continue;
            }
            let entry = self.get(row, col);
            if !entry.is_finite() {
                continue;
            }
            used[col] = true;
            best = best.oplus(entry.otimes(self.permanent_rec(row + 1, used)));
            used[col] = false;
        }
        best
    }

    /// Extend an n×n matrix with the 0th row and column of the dummy
    /// variable: entry (0,0) = 0, the rest of row/column 0 is ε, and the
    /// original matrix occupies the 1..n block.
    pub fn augment_zero(&self) -> TropicalMatrix {
        let n = self.rows;
        let mut out = TropicalMatrix::new(n + 1, self.cols + 1);
        out.set(0, 0, TropicalScalar::UNIT);
        for i in 0..n {
            for j in 0..self.cols {
                out.set(i + 1, j + 1, self.get(i, j));
            }
        }
        out
    }

    /// Inverse of [`TropicalMatrix::augment_zero`]: drop row and column 0.
    pub fn strip_zero(&self) -> TropicalMatrix {
        debug_assert!(self.rows >= 1 && self.cols >= 1);
        let mut out = TropicalMatrix::new(self.rows - 1, self.cols - 1);
        for i in 1..self.rows {
            for j in 1..self.cols {
                out.set(i - 1, j - 1, self.get(i, j));
            }
        }
        out
    }
}

impl fmt::Debug for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: i64) -> TropicalScalar {
        TropicalScalar::Finite(v)
    }

    /// The 3×3 matrix used by the worked examples throughout the crate.
    pub(crate) fn example_matrix() -> TropicalMatrix {
        TropicalMatrix::from_rows(&[
            vec![None, Some(1), Some(3)],
            vec![Some(5), None, Some(4)],
            vec![Some(7), Some(8), None],
        ])
        .unwrap()
    }

    // Column indices are 0-based here; the worked example's coefficient
    // (2,1,1) becomes [1,0,0].
    fn g211() -> FiniteCoefficient {
        FiniteCoefficient::new(vec![1, 0, 0])
    }

    #[test]
    fn oplus_with_zero_matrix_and_idempotence() {
        let a = TropicalMatrix::from_rows(&[vec![None, Some(1)], vec![Some(5), None]]).unwrap();
        let zeros =
            TropicalMatrix::from_rows(&[vec![Some(0), Some(0)], vec![Some(0), Some(0)]]).unwrap();
        let want =
            TropicalMatrix::from_rows(&[vec![Some(0), Some(1)], vec![Some(5), Some(0)]]).unwrap();
        assert_eq!(a.oplus(&zeros).unwrap(), want);
        assert_eq!(a.oplus(&a).unwrap(), a);
    }

    #[test]
    fn oplus_with_identity_on_example() {
        let a = example_matrix();
        let want = TropicalMatrix::from_rows(&[
            vec![Some(0), Some(1), Some(3)],
            vec![Some(5), Some(0), Some(4)],
            vec![Some(7), Some(8), Some(0)],
        ])
        .unwrap();
        assert_eq!(a.oplus(&TropicalMatrix::identity(3)).unwrap(), want);
    }

    #[test]
    fn oplus_shape_mismatch() {
        let a = TropicalMatrix::new(2, 2);
        let b = TropicalMatrix::new(2, 3);
        assert!(matches!(a.oplus(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn otimes_identity_and_row_maxima() {
        let a = example_matrix();
        assert_eq!(TropicalMatrix::identity(3).otimes(&a).unwrap(), a);
        assert_eq!(a.otimes(&TropicalMatrix::identity(3)).unwrap(), a);

        let ones =
            TropicalMatrix::from_rows(&[vec![Some(0)], vec![Some(0)], vec![Some(0)]]).unwrap();
        let maxima = a.otimes(&ones).unwrap();
        assert_eq!(maxima.get(0, 0), fin(3));
        assert_eq!(maxima.get(1, 0), fin(5));
        assert_eq!(maxima.get(2, 0), fin(8));
    }

    #[test]
    fn power_zero_one_two() {
        let a = example_matrix();
        assert_eq!(a.power(0).unwrap(), TropicalMatrix::identity(3));
        assert_eq!(a.power(1).unwrap(), a);
        // (A^2)(0,0) = max(1+5, 3+7) = 10
        assert_eq!(a.power(2).unwrap().get(0, 0), fin(10));
        assert!(TropicalMatrix::new(2, 3).power(2).is_err());
    }

    #[test]
    fn coefficient_enumeration_counts() {
        let a = example_matrix();
        assert_eq!(a.finite_coefficients().unwrap().len(), 8);

        let diag = TropicalMatrix::from_rows(&[vec![Some(2), None], vec![None, Some(3)]]).unwrap();
        let coeffs: Vec<_> = diag.finite_coefficients().unwrap().iter().collect();
        assert_eq!(coeffs, vec![FiniteCoefficient::new(vec![0, 1])]);

        let full = TropicalMatrix::from_rows(&[
            vec![Some(1), Some(1), Some(1)],
            vec![Some(1), Some(1), Some(1)],
            vec![Some(1), Some(1), Some(1)],
        ])
        .unwrap();
        assert_eq!(full.finite_coefficients().unwrap().len(), 27);
    }

    #[test]
    fn coefficient_enumeration_rejects_empty_row() {
        let a = TropicalMatrix::from_rows(&[vec![Some(1), Some(2)], vec![None, None]]).unwrap();
        assert!(matches!(
            a.finite_coefficients(),
            Err(Error::NotRowFinite { row: 1 })
        ));
    }

    #[test]
    fn region_matrix_example() {
        let a = example_matrix();
        let want = TropicalMatrix::from_rows(&[
            vec![None, Some(1), None],
            vec![Some(5), None, None],
            vec![Some(7), None, None],
        ])
        .unwrap();
        let got = a.region_matrix(&g211()).unwrap();
        assert_eq!(got, want);
        // each row has exactly one finite entry
        for i in 0..3 {
            assert_eq!((0..3).filter(|&j| got.get(i, j).is_finite()).count(), 1);
        }
        let bad = FiniteCoefficient::new(vec![0, 0, 0]);
        assert!(matches!(
            a.region_matrix(&bad),
            Err(Error::InvalidCoefficient { row: 0, col: 0 })
        ));
    }

    #[test]
    fn conjugate_example_and_involution() {
        let a = example_matrix();
        let region = a.region_matrix(&g211()).unwrap();
        let want = TropicalMatrix::from_rows(&[
            vec![None, Some(-5), Some(-7)],
            vec![Some(-1), None, None],
            vec![None, None, None],
        ])
        .unwrap();
        assert_eq!(region.conjugate(), want);
        assert_eq!(region.conjugate().conjugate(), region);
        let id = TropicalMatrix::identity(4);
        assert_eq!(id.conjugate(), id);
    }

    #[test]
    fn definite_forms_match_worked_example() {
        let a = example_matrix();
        let row = a.row_definite(&g211()).unwrap();
        let want_row = TropicalMatrix::from_rows(&[
            vec![Some(0), Some(1), Some(-1)],
            vec![None, Some(0), Some(2)],
            vec![None, None, None],
        ])
        .unwrap();
        assert_eq!(row, want_row);

        let col = a.col_definite(&g211()).unwrap();
        let want_col = TropicalMatrix::from_rows(&[
            vec![Some(0), None, None],
            vec![None, Some(0), Some(-2)],
            vec![Some(7), Some(2), Some(0)],
        ])
        .unwrap();
        assert_eq!(col, want_col);
    }

    #[test]
    fn definite_forms_of_permutations_have_zero_diagonal() {
        let a = example_matrix();
        // (3,1,2) in 1-based terms is a permutation.
        let g = FiniteCoefficient::new(vec![2, 0, 1]);
        let row = a.row_definite(&g).unwrap();
        let col = a.col_definite(&g).unwrap();
        for i in 0..3 {
            assert_eq!(row.get(i, i), fin(0));
            assert_eq!(col.get(i, i), fin(0));
        }
    }

    #[test]
    fn permanent_examples() {
        let a = example_matrix();
        // best permutation: 1→3, 2→1, 3→2 giving 3+5+8 = 16
        assert_eq!(a.permanent().unwrap(), fin(16));
        assert_eq!(TropicalMatrix::identity(4).permanent().unwrap(), fin(0));
        assert_eq!(
            TropicalMatrix::new(3, 3).permanent().unwrap(),
            TropicalScalar::Epsilon
        );
        assert!(matches!(
            TropicalMatrix::new(11, 11).permanent(),
            Err(Error::PermanentCap { dim: 11, cap: 10 })
        ));
    }

    #[test]
    fn augment_zero_shapes() {
        let a = example_matrix();
        let aug = a.augment_zero();
        assert_eq!(aug.rows(), 4);
        assert_eq!(aug.get(0, 0), fin(0));
        for k in 1..4 {
            assert_eq!(aug.get(0, k), TropicalScalar::Epsilon);
            assert_eq!(aug.get(k, 0), TropicalScalar::Epsilon);
        }
        assert_eq!(aug.strip_zero(), a);

        let empty = TropicalMatrix::new(0, 0);
        let aug0 = empty.augment_zero();
        assert_eq!(aug0.rows(), 1);
        assert_eq!(aug0.get(0, 0), fin(0));

        // every finite coefficient of the augmented matrix starts with 0
        for g in aug.finite_coefficients().unwrap().iter() {
            assert_eq!(g.cols()[0], 0);
        }
    }
}
