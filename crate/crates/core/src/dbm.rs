//! Difference-bound matrices stored as tropical matrices.
//!
//! A DBM over variables `x_1..x_n` (plus the dummy `x_0 ≡ 0`) is the
//! intersection of constraints `x_i − x_j ≥ d` or `x_i − x_j > d`. The
//! bounds form an (n+1)×(n+1) tropical matrix with ε meaning
//! "unconstrained"; a parallel sign matrix records which comparisons are
//! strict. Note the inequality direction: entry (i,j) is a *lower* bound
//! on `x_i − x_j`, so tightening means growing and the canonical form is
//! an all-pairs *longest*-path closure.

use crate::metrics;
use crate::tropical::{TropicalMatrix, TropicalScalar};
use crate::{Error, Result};

/// Comparison operator of one constraint. `Strict` sorts below
/// `NonStrict`, so `min` matches the sign rule for intersections: on equal
/// bounds the strict operator wins.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Sign {
    /// `>`
    Strict,
    /// `≥`
    NonStrict,
}

impl Sign {
    pub fn is_strict(self) -> bool {
        self == Sign::Strict
    }
}

/// A zone in ℝⁿ: bounds plus signs over `x_0..x_n` with `x_0 ≡ 0`.
///
/// Unconstrained pairs are normalized to (ε, strict) so structural
/// equality of DBMs is meaningful. Values are immutable; tightening
/// operations return new DBMs.
#[derive(Clone)]
pub struct Dbm {
    n: usize,
    bounds: TropicalMatrix,
    signs: Vec<Sign>,
    canonical: bool,
}

impl PartialEq for Dbm {
    fn eq(&self, other: &Self) -> bool {
        // the canonical flag is a cache, not part of the value
        self.n == other.n && self.bounds == other.bounds && self.signs == other.signs
    }
}

impl Eq for Dbm {}

impl Dbm {
    /// The full space ℝⁿ: zero diagonal, ε elsewhere.
    pub fn full_space(n: usize) -> Dbm {
        let dim = n + 1;
        let mut signs = vec![Sign::Strict; dim * dim];
        for i in 0..dim {
            signs[i * dim + i] = Sign::NonStrict;
        }
        Dbm {
            n,
            bounds: TropicalMatrix::identity(dim),
            signs,
            canonical: true,
        }
    }

    /// Build from constraints `x_i − x_j ≥ bound` (or `>` when `strict`).
    ///
    /// Indices range over `0..=n` with 0 the dummy variable. Repeated
    /// constraints on a pair keep the tighter bound; on equal bounds the
    /// strict sign wins. A constraint `x_i − x_i > 0` is accepted and
    /// yields an immediately empty zone.
    pub fn from_constraints(n: usize, constraints: &[(usize, usize, i64, bool)]) -> Result<Dbm> {
        let mut dbm = Dbm::full_space(n);
        dbm.canonical = false;
        for &(i, j, bound, strict) in constraints {
            if i > n || j > n {
                return Err(Error::Dimension(format!(
                    "constraint on (x{i}, x{j}) out of range for n = {n}"
                )));
            }
            let sign = if strict {
                Sign::Strict
            } else {
                Sign::NonStrict
            };
            dbm.tighten(i, j, TropicalScalar::Finite(bound), sign);
        }
        Ok(dbm)
    }

    /// The axis-aligned box `lo_i ≤ x_i ≤ hi_i` (all bounds non-strict).
    ///
    /// A reversed interval is constructed as stated and comes out empty.
    pub fn from_box(lo: &[i64], hi: &[i64]) -> Result<Dbm> {
        if lo.len() != hi.len() {
            return Err(Error::Dimension(format!(
                "box corners have {} and {} coordinates",
                lo.len(),
                hi.len()
            )));
        }
        let n = lo.len();
        let mut constraints = Vec::with_capacity(2 * n);
        for i in 0..n {
            constraints.push((i + 1, 0, lo[i], false));
            constraints.push((0, i + 1, -hi[i], false));
        }
        Dbm::from_constraints(n, &constraints)
    }

    /// Assemble from raw parts, normalizing ε signs. Internal constructor
    /// for the region/reach pipelines.
    pub(crate) fn from_parts(bounds: TropicalMatrix, signs: Vec<Sign>, canonical: bool) -> Dbm {
        debug_assert!(bounds.is_square());
        debug_assert!(bounds.rows() >= 1);
        debug_assert_eq!(signs.len(), bounds.rows() * bounds.cols());
        let mut dbm = Dbm {
            n: bounds.rows() - 1,
            bounds,
            signs,
            canonical,
        };
        dbm.normalize();
        dbm
    }

    /// Bound matrix with all finite entries non-strict, as produced by the
    /// plain region construction.
    pub(crate) fn from_bounds_nonstrict(bounds: TropicalMatrix) -> Dbm {
        let dim = bounds.rows();
        let signs = vec![Sign::NonStrict; dim * dim];
        Dbm::from_parts(bounds, signs, false)
    }

    fn normalize(&mut self) {
        let dim = self.dim();
        // x_i − x_i ≥ 0 is implicit in every zone; emptiness markers
        // (zero-strict or positive diagonals) stay as they are
        for i in 0..dim {
            self.tighten(i, i, TropicalScalar::UNIT, Sign::NonStrict);
        }
        for i in 0..dim {
            for j in 0..dim {
                if !self.bounds.get(i, j).is_finite() {
                    self.signs[i * dim + j] = Sign::Strict;
                }
            }
        }
    }

    /// Keep the tighter of the current entry and `(bound, sign)`.
    pub(crate) fn tighten(&mut self, i: usize, j: usize, bound: TropicalScalar, sign: Sign) {
        let dim = self.dim();
        let cur = self.bounds.get(i, j);
        if bound > cur {
            self.bounds.set(i, j, bound);
            self.signs[i * dim + j] = sign;
        } else if bound == cur {
            self.signs[i * dim + j] = self.signs[i * dim + j].min(sign);
        }
    }

    /// Variables excluding the dummy.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix dimension n + 1.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn bound(&self, i: usize, j: usize) -> TropicalScalar {
        self.bounds.get(i, j)
    }

    pub fn sign(&self, i: usize, j: usize) -> Sign {
        self.signs[i * self.dim() + j]
    }

    /// The underlying bound matrix.
    pub fn bounds(&self) -> &TropicalMatrix {
        &self.bounds
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Drop the canonical cache after raw entry updates.
    pub(crate) fn mark_raw(&mut self) {
        self.canonical = false;
    }

    /// Intersection: entrywise maximum of bounds; the sign follows the
    /// tighter bound, and the strict operator wins ties. The result is not
    /// canonicalized.
    pub fn intersect(&self, other: &Dbm) -> Result<Dbm> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "cannot intersect DBMs over {} and {} variables",
                self.n, other.n
            )));
        }
        let dim = self.dim();
        metrics::add_ops((dim * dim) as u64);
        let mut out = self.clone();
        out.canonical = false;
        for i in 0..dim {
            for j in 0..dim {
                out.tighten(i, j, other.bounds.get(i, j), other.sign(i, j));
            }
        }
        Ok(out)
    }

    /// Canonical form: the tightest bounds, computed by Floyd-Warshall on
    /// the longest-path formulation with sign propagation (a derived
    /// constraint is strict when any edge on its path is strict; on
    /// equal-weight paths the strict sign wins, as in intersections).
    ///
    /// An empty zone canonicalizes to the designated form
    /// [`Dbm::canonical_empty`], so all empty canonical DBMs of one
    /// dimension are structurally identical across both implementations
    /// and `is_empty` reads the verdict off the diagonal.
    pub fn canonical_form(&self) -> Dbm {
        let dim = self.dim();
        let mut out = self.clone();
        for k in 0..dim {
            for i in 0..dim {
                let ik = out.bounds.get(i, k);
                if !ik.is_finite() {
                    continue;
                }
                let s_ik = out.sign(i, k);
                for j in 0..dim {
                    let cand = ik.otimes(out.bounds.get(k, j));
                    if cand.is_finite() {
                        let sign = s_ik.min(out.sign(k, j));
                        out.tighten(i, j, cand, sign);
                    }
                }
            }
        }
        metrics::add_ops((dim * dim * dim) as u64);
        out.canonical = true;
        if out.diagonal_violation() {
            return Dbm::canonical_empty(self.n);
        }
        out
    }

    /// Canonical form through the tropical-power formula
    /// `cf(D) = ⊕_{m=0}^{n+1} D^{⊗m}`, with the intersection sign rule
    /// applied throughout. Interchangeable with [`Dbm::canonical_form`].
    pub fn canonical_form_by_powers(&self) -> Dbm {
        let dim = self.dim();
        let mut acc = Dbm::full_space(self.n); // ⊕ starts from the identity, m = 0
        acc.canonical = false;
        let mut power = self.clone();
        for m in 1..=self.n + 1 {
            if m > 1 {
                power = power.signed_product(self);
            }
            for i in 0..dim {
                for j in 0..dim {
                    acc.tighten(i, j, power.bounds.get(i, j), power.sign(i, j));
                }
            }
            metrics::add_ops((dim * dim) as u64);
        }
        acc.canonical = true;
        if acc.diagonal_violation() {
            return Dbm::canonical_empty(self.n);
        }
        acc
    }

    /// Sign-carrying tropical product of bound matrices: bounds multiply
    /// as usual, each term's sign is the minimum over its two factors, and
    /// ties between terms keep the strict sign.
    fn signed_product(&self, other: &Dbm) -> Dbm {
        let dim = self.dim();
        let mut bounds = TropicalMatrix::new(dim, dim);
        let mut signs = vec![Sign::Strict; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut best = TropicalScalar::Epsilon;
                let mut best_sign = Sign::Strict;
                for k in 0..dim {
                    let cand = self.bounds.get(i, k).otimes(other.bounds.get(k, j));
                    if !cand.is_finite() {
                        continue;
                    }
                    let sign = self.sign(i, k).min(other.sign(k, j));
                    if cand > best {
                        best = cand;
                        best_sign = sign;
                    } else if cand == best {
                        best_sign = best_sign.min(sign);
                    }
                }
                bounds.set(i, j, best);
                signs[i * dim + j] = best_sign;
            }
        }
        metrics::add_ops((dim * dim * dim) as u64);
        Dbm::from_parts(bounds, signs, false)
    }

    fn diagonal_violation(&self) -> bool {
        (0..self.dim()).any(|i| {
            let d = self.bounds.get(i, i);
            d > TropicalScalar::UNIT || (d == TropicalScalar::UNIT && self.sign(i, i).is_strict())
        })
    }

    /// The designated canonical form of the empty zone over n variables:
    /// the full-space entries with `x_0 − x_0 > 0` recorded at (0,0).
    pub fn canonical_empty(n: usize) -> Dbm {
        let mut out = Dbm::full_space(n);
        out.signs[0] = Sign::Strict;
        out.canonical = true;
        out
    }

    /// Emptiness: some diagonal bound is positive, or zero with a strict
    /// sign. Canonicalizes internally when needed.
    pub fn is_empty(&self) -> bool {
        if self.canonical {
            self.diagonal_violation()
        } else {
            self.canonical_form().diagonal_violation()
        }
    }

    /// Definiteness of the bound matrix: tropical permanent 0 and all-zero
    /// diagonal. Test support for the fact that every non-empty canonical
    /// DBM is definite; requires a canonical input and the brute-force
    /// permanent cap.
    pub fn is_definite(&self) -> Result<bool> {
        if !self.canonical {
            return Err(Error::NotCanonical { op: "is_definite" });
        }
        let per = self.bounds.permanent()?;
        let diag_zero = (0..self.dim()).all(|i| self.bounds.get(i, i) == TropicalScalar::UNIT);
        Ok(per == TropicalScalar::UNIT && diag_zero)
    }

    /// Point membership with `x_0 = 0`; `x` carries the n real variables.
    pub fn contains_point(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, DBM has {} variables",
                x.len(),
                self.n
            )));
        }
        let coord = |i: usize| if i == 0 { 0.0 } else { x[i - 1] };
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if let Some(d) = self.bounds.get(i, j).finite() {
                    let diff = coord(i) - coord(j);
                    let ok = match self.sign(i, j) {
                        Sign::NonStrict => diff >= d as f64,
                        Sign::Strict => diff > d as f64,
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Restrict to the variables listed in `keep` (which must start with
    /// the dummy index 0). Exact for canonical DBMs: the closure already
    /// carries the tightest bound between every remaining pair.
    pub(crate) fn project(&self, keep: &[usize]) -> Dbm {
        debug_assert_eq!(keep.first(), Some(&0));
        let dim = keep.len();
        let mut bounds = TropicalMatrix::new(dim, dim);
        let mut signs = vec![Sign::Strict; dim * dim];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                bounds.set(a, b, self.bounds.get(i, j));
                signs[a * dim + b] = self.sign(i, j);
            }
        }
        Dbm::from_parts(bounds, signs, self.canonical)
    }
}

impl std::fmt::Debug for Dbm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Dbm(n={}{})",
            self.n,
            if self.canonical { ", canonical" } else { "" }
        )?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if let Some(d) = self.bounds.get(i, j).finite() {
                    if i == j && d == 0 && !self.sign(i, j).is_strict() {
                        continue;
                    }
                    let op = if self.sign(i, j).is_strict() {
                        ">"
                    } else {
                        ">="
                    };
                    writeln!(f, "  x{i} - x{j} {op} {d}")?;
                }
            }
        }
        Ok(())
    }
}
