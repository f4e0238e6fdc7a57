//! Images and inverse images of zones under affine dynamics and under the
//! full MPL system, plus forward/backward reach-set sequences.
//!
//! The direct routines transfer bounds entry by entry in O(n²); the
//! tropical-product forms express the same bounds as two matrix products;
//! and the lifting construction — a 2n-variable zone over current and next
//! variables, closed and projected — serves as the independent O(n³)
//! oracle the cheaper routes are checked against.

use rayon::prelude::*;

use crate::dbm::{Dbm, Sign};
use crate::metrics;
use crate::pwa::PwaSystem;
use crate::tropical::{FiniteCoefficient, TropicalMatrix};
use crate::{Error, Result};

/// Which variable block the lifting construction projects onto.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LiftDirection {
    /// Keep the next-state block: the image of the input zone.
    Forward,
    /// Keep the current-state block: the inverse image of the input zone.
    Backward,
}

/// Which image implementation system-level operations use.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ImageBackend {
    /// The O(n²) entry-transfer routines.
    #[default]
    Direct,
    /// The 2n-variable lifting oracle, for differential runs.
    LiftingOracle,
}

/// A finite union of zones; the empty union is the empty set.
///
/// Parts are canonical, non-empty and kept in the deterministic order they
/// were produced in (they may overlap; no coalescing is attempted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DbmUnion {
    n: usize,
    parts: Vec<Dbm>,
}

impl DbmUnion {
    /// The empty set over n variables.
    pub fn empty(n: usize) -> DbmUnion {
        DbmUnion {
            n,
            parts: Vec::new(),
        }
    }

    /// A single-zone union; the zone is canonicalized and dropped if empty.
    pub fn from_dbm(d: &Dbm) -> DbmUnion {
        DbmUnion::from_zones(d.n(), std::iter::once(d.clone()))
    }

    /// Build from arbitrary zones: each is canonicalized, empties are
    /// dropped, order is kept.
    pub fn from_zones(n: usize, zones: impl IntoIterator<Item = Dbm>) -> DbmUnion {
        let parts = zones
            .into_iter()
            .map(|d| {
                if d.is_canonical() {
                    d
                } else {
                    d.canonical_form()
                }
            })
            .filter(|d| !d.is_empty())
            .inspect(|d| debug_assert_eq!(d.n(), n))
            .collect();
        DbmUnion { n, parts }
    }

    pub(crate) fn from_parts(n: usize, parts: Vec<Dbm>) -> DbmUnion {
        debug_assert!(parts
            .iter()
            .all(|p| p.is_canonical() && !p.is_empty() && p.n() == n));
        DbmUnion { n, parts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Dbm] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Membership is the disjunction over parts.
    pub fn contains_point(&self, x: &[f64]) -> Result<bool> {
        for part in &self.parts {
            if part.contains_point(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn check_affine_inputs(d: &Dbm, g: &FiniteCoefficient, dynamics: &TropicalMatrix) -> Result<()> {
    let dim = d.dim();
    if dynamics.rows() != dim || dynamics.cols() != dim || g.len() != dim {
        return Err(Error::Dimension(format!(
            "zone over {} variables, dynamics {}x{}, coefficient of length {}",
            d.n(),
            dynamics.rows(),
            dynamics.cols(),
            g.len()
        )));
    }
    if g.col(0) != 0 {
        return Err(Error::InvalidCoefficient {
            row: 0,
            col: g.col(0),
        });
    }
    if !dynamics.is_finite_coefficient(g) {
        let row = (0..dim)
            .find(|&i| !dynamics.get(i, g.col(i)).is_finite())
            .unwrap_or(0);
        return Err(Error::InvalidCoefficient {
            row,
            col: g.col(row),
        });
    }
    Ok(())
}

/// The image of a canonical zone `D ⊆ R_g` under `x' = A_g ⊗ x`:
/// `D'(i,j) = D(g_i, g_j) + A_g(i, g_i) − A_g(j, g_j)` with the sign
/// copied from the source entry. O(n²).
///
/// The input must be canonical — the transfer reads bounds directly, so a
/// stale bound would come out loose. The output is canonical whenever the
/// input is non-empty.
pub fn image_affine(d: &Dbm, g: &FiniteCoefficient, dynamics: &TropicalMatrix) -> Result<Dbm> {
    check_affine_inputs(d, g, dynamics)?;
    if !d.is_canonical() {
        return Err(Error::NotCanonical { op: "image_affine" });
    }
    metrics::count_image_call();
    let dim = d.dim();
    let mut bounds = TropicalMatrix::new(dim, dim);
    let mut signs = vec![Sign::Strict; dim * dim];
    for i in 0..dim {
        let ci = dynamics.get(i, g.col(i));
        for j in 0..dim {
            let cj = dynamics.get(j, g.col(j));
            let b = d.bound(g.col(i), g.col(j)).otimes(ci).otimes(-cj);
            bounds.set(i, j, b);
            signs[i * dim + j] = d.sign(g.col(i), g.col(j));
        }
    }
    metrics::add_ops((dim * dim) as u64);
    Ok(Dbm::from_parts(bounds, signs, true))
}

/// The image bound matrix as two tropical products, `A_g ⊗ D ⊗ A_g^c`.
/// Produces bounds only; signs are carried by [`image_affine`].
pub fn image_product_form(d: &Dbm, dynamics: &TropicalMatrix) -> Result<TropicalMatrix> {
    dynamics.otimes(d.bounds())?.otimes(&dynamics.conjugate())
}

/// The inverse image of a zone under `x' = A_g ⊗ x`: starting from the
/// full space, each source entry (i,j) proposes the bound
/// `D'(i,j) + A_g(j, g_j) − A_g(i, g_i)` at position `(g_i, g_j)`; the
/// larger bound wins and equal bounds keep the strict sign. O(n²).
///
/// The result is the exact inverse image, not yet intersected with `R_g`.
pub fn preimage_affine(dp: &Dbm, g: &FiniteCoefficient, dynamics: &TropicalMatrix) -> Result<Dbm> {
    check_affine_inputs(dp, g, dynamics)?;
    let dim = dp.dim();
    let mut out = Dbm::full_space(dp.n());
    out.mark_raw();
    for i in 0..dim {
        let ci = dynamics.get(i, g.col(i));
        for j in 0..dim {
            let cj = dynamics.get(j, g.col(j));
            let b = dp.bound(i, j).otimes(cj).otimes(-ci);
            if b.is_finite() {
                out.tighten(g.col(i), g.col(j), b, dp.sign(i, j));
            }
        }
    }
    metrics::add_ops((dim * dim) as u64);
    Ok(out)
}

/// The inverse-image bound matrix as tropical products,
/// `(A_g^c ⊗ D' ⊗ A_g) ⊕ I`; the identity restores the zero diagonal when
/// `g` is not a permutation.
pub fn preimage_product_form(dp: &Dbm, dynamics: &TropicalMatrix) -> Result<TropicalMatrix> {
    let conj = dynamics.conjugate();
    let product = conj.otimes(dp.bounds())?.otimes(dynamics)?;
    product.oplus(&TropicalMatrix::identity(dp.dim()))
}

/// Image or inverse image through the explicit 2n-variable construction:
/// current and next variables side by side, the affine update as equality
/// constraints, one canonical-form pass, then projection onto the block of
/// interest. O(n³); the independent oracle for the direct routines.
pub fn image_via_lifting(
    d: &Dbm,
    g: &FiniteCoefficient,
    dynamics: &TropicalMatrix,
    direction: LiftDirection,
) -> Result<Dbm> {
    check_affine_inputs(d, g, dynamics)?;
    let n = d.n();
    // variable layout: 0 dummy, 1..=n current, n+1..=2n next
    let block = |idx: usize| -> usize {
        match direction {
            LiftDirection::Forward => idx,
            LiftDirection::Backward => {
                if idx == 0 {
                    0
                } else {
                    n + idx
                }
            }
        }
    };
    let mut constraints = Vec::new();
    for i in 0..d.dim() {
        for j in 0..d.dim() {
            // diagonal entries carry emptiness markers and must transfer
            if let Some(b) = d.bound(i, j).finite() {
                constraints.push((block(i), block(j), b, d.sign(i, j).is_strict()));
            }
        }
    }
    for i in 1..=n {
        let c = dynamics
            .get(i, g.col(i))
            .finite()
            .expect("checked finite coefficient");
        constraints.push((n + i, g.col(i), c, false));
        constraints.push((g.col(i), n + i, -c, false));
    }
    let lifted = Dbm::from_constraints(2 * n, &constraints)?.canonical_form();
    let keep: Vec<usize> = match direction {
        LiftDirection::Forward => std::iter::once(0).chain(n + 1..=2 * n).collect(),
        LiftDirection::Backward => (0..=n).collect(),
    };
    Ok(lifted.project(&keep))
}

/// The image of a zone under the full MPL system: intersect with every
/// partition cell, canonicalize, and push each non-empty piece through its
/// cell's affine dynamics. Parts follow cell order.
pub fn image_mpl(d: &Dbm, pwa: &PwaSystem) -> Result<DbmUnion> {
    image_mpl_with(d, pwa, ImageBackend::Direct)
}

/// [`image_mpl`] with a selectable image implementation.
pub fn image_mpl_with(d: &Dbm, pwa: &PwaSystem, backend: ImageBackend) -> Result<DbmUnion> {
    if !pwa.is_partitioned() {
        return Err(Error::NotPartitioned { op: "image_mpl" });
    }
    if d.n() != pwa.n() {
        return Err(Error::Dimension(format!(
            "zone over {} variables, system over {}",
            d.n(),
            pwa.n()
        )));
    }
    let parts: Result<Vec<Option<Dbm>>> = pwa
        .regions()
        .par_iter()
        .map(|region| {
            let piece = d.intersect(region.zone())?.canonical_form();
            if piece.is_empty() {
                return Ok(None);
            }
            let image = match backend {
                ImageBackend::Direct => {
                    image_affine(&piece, region.coefficient(), region.dynamics())?
                }
                ImageBackend::LiftingOracle => image_via_lifting(
                    &piece,
                    region.coefficient(),
                    region.dynamics(),
                    LiftDirection::Forward,
                )?,
            };
            Ok((!image.is_empty()).then_some(image))
        })
        .collect();
    Ok(DbmUnion::from_parts(
        d.n(),
        parts?.into_iter().flatten().collect(),
    ))
}

/// The inverse image of a zone under the full MPL system: invert through
/// every cell's dynamics, intersect with the cell, keep what is non-empty.
pub fn preimage_mpl(dp: &Dbm, pwa: &PwaSystem) -> Result<DbmUnion> {
    preimage_mpl_with(dp, pwa, ImageBackend::Direct)
}

/// [`preimage_mpl`] with a selectable implementation.
pub fn preimage_mpl_with(dp: &Dbm, pwa: &PwaSystem, backend: ImageBackend) -> Result<DbmUnion> {
    if !pwa.is_partitioned() {
        return Err(Error::NotPartitioned { op: "preimage_mpl" });
    }
    if dp.n() != pwa.n() {
        return Err(Error::Dimension(format!(
            "zone over {} variables, system over {}",
            dp.n(),
            pwa.n()
        )));
    }
    let parts: Result<Vec<Option<Dbm>>> = pwa
        .regions()
        .par_iter()
        .map(|region| {
            let inverse = match backend {
                ImageBackend::Direct => {
                    preimage_affine(dp, region.coefficient(), region.dynamics())?
                }
                ImageBackend::LiftingOracle => image_via_lifting(
                    dp,
                    region.coefficient(),
                    region.dynamics(),
                    LiftDirection::Backward,
                )?,
            };
            let piece = inverse.intersect(region.zone())?.canonical_form();
            Ok((!piece.is_empty()).then_some(piece))
        })
        .collect();
    Ok(DbmUnion::from_parts(
        dp.n(),
        parts?.into_iter().flatten().collect(),
    ))
}

/// Forward reach sets X₁..X_N: each step is the image of the previous set.
pub fn forward_reach(x0: &DbmUnion, pwa: &PwaSystem, steps: usize) -> Result<Vec<DbmUnion>> {
    forward_reach_with(x0, pwa, steps, ImageBackend::Direct)
}

/// [`forward_reach`] with a selectable image implementation.
pub fn forward_reach_with(
    x0: &DbmUnion,
    pwa: &PwaSystem,
    steps: usize,
    backend: ImageBackend,
) -> Result<Vec<DbmUnion>> {
    let mut out = Vec::with_capacity(steps);
    let mut current = x0.clone();
    for _ in 0..steps {
        let mut parts = Vec::new();
        for part in current.parts() {
            parts.extend(image_mpl_with(part, pwa, backend)?.parts().to_vec());
        }
        current = DbmUnion::from_parts(x0.n(), parts);
        out.push(current.clone());
    }
    Ok(out)
}

/// Backward reach sets Y₋₁..Y₋N via inverse images. Once a step is empty
/// every later one is as well, so computation stops there and the
/// remaining sets are reported empty.
pub fn backward_reach(y0: &DbmUnion, pwa: &PwaSystem, steps: usize) -> Result<Vec<DbmUnion>> {
    backward_reach_with(y0, pwa, steps, ImageBackend::Direct)
}

/// [`backward_reach`] with a selectable implementation.
pub fn backward_reach_with(
    y0: &DbmUnion,
    pwa: &PwaSystem,
    steps: usize,
    backend: ImageBackend,
) -> Result<Vec<DbmUnion>> {
    let mut out = Vec::with_capacity(steps);
    let mut current = y0.clone();
    for _ in 0..steps {
        if current.is_empty() {
            out.push(DbmUnion::empty(y0.n()));
            continue;
        }
        let mut parts = Vec::new();
        for part in current.parts() {
            parts.extend(preimage_mpl_with(part, pwa, backend)?.parts().to_vec());
        }
        current = DbmUnion::from_parts(y0.n(), parts);
        out.push(current.clone());
    }
    Ok(out)
}
