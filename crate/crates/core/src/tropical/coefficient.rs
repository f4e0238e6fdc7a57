use std::fmt;

/// A finite coefficient: one column choice per row, `A(i, g_i) ≠ ε`.
///
/// Column indices are 0-based. For matrices augmented with the dummy
/// variable the first entry is always 0, and the remaining entries coincide
/// with the conventional 1-based labels of the original rows and columns.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteCoefficient {
    cols: Vec<usize>,
}

impl FiniteCoefficient {
    pub fn new(cols: Vec<usize>) -> FiniteCoefficient {
        FiniteCoefficient { cols }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// Column selected for `row`.
    pub fn col(&self, row: usize) -> usize {
        self.cols[row]
    }

    /// True when no column is selected twice.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.cols.len()];
        self.cols.iter().all(|&c| {
            if c >= seen.len() || seen[c] {
                false
            } else {
                seen[c] = true;
                true
            }
        })
    }

    /// Adjacency in the ordered sense: exactly one entry of `self` exceeds
    /// the corresponding entry of `other`, all others are equal.
    pub fn dominates_adjacent(&self, other: &FiniteCoefficient) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut greater = 0usize;
        for (&a, &b) in self.cols.iter().zip(other.cols.iter()) {
            if a > b {
                greater += 1;
            } else if a != b {
                return false;
            }
        }
        greater == 1
    }
}

impl fmt::Debug for FiniteCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g(")?;
        for (k, c) in self.cols.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The set of all finite coefficients of a row-finite matrix.
///
/// Stored as the per-row finite-column sets; concrete coefficients are the
/// Cartesian product in lexicographic order. The set is randomly
/// addressable through mixed-radix decoding, so disjoint index ranges can
/// be consumed in parallel and the merged result keeps a deterministic
/// order.
#[derive(Clone, Debug)]
pub struct FiniteCoefficients {
    columns: Vec<Vec<usize>>,
    count: usize,
}

impl FiniteCoefficients {
    pub(crate) fn new(columns: Vec<Vec<usize>>) -> FiniteCoefficients {
        let count = columns.iter().map(Vec::len).product();
        FiniteCoefficients { columns, count }
    }

    /// Number of finite coefficients: ∏_i |{j : A(i,j) ≠ ε}|.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// The `index`-th coefficient in lexicographic order.
    pub fn get(&self, index: usize) -> FiniteCoefficient {
        debug_assert!(index < self.count);
        let mut cols = vec![0usize; self.columns.len()];
        let mut rem = index;
        for (row, choices) in self.columns.iter().enumerate().rev() {
            cols[row] = choices[rem % choices.len()];
            rem /= choices.len();
        }
        FiniteCoefficient::new(cols)
    }

    pub fn iter(&self) -> impl Iterator<Item = FiniteCoefficient> + '_ {
        (0..self.count).map(|i| self.get(i))
    }
}
