//! Piecewise-affine representation of an MPL system and the disjoint
//! partition whose cells are the abstract states.
//!
//! Every finite coefficient `g` of the (augmented) system matrix selects
//! one affine mode `x_i' = x_{g_i} + A(i, g_i)`; the region where that
//! mode attains the row maxima is a DBM obtained from the row-definite
//! form. Overlapping region boundaries are split between neighbours by a
//! sign rule on the raw bounds, turning the covering family into a
//! partition of ℝⁿ.

use rayon::prelude::*;

use crate::dbm::{Dbm, Sign};
use crate::tropical::{FiniteCoefficient, TropicalMatrix, TropicalScalar};
use crate::{Error, Result};

/// One affine mode of the PWA system.
///
/// All matrices are augmented with the dummy variable: `zone` is a DBM
/// over `x_0..x_n` and `dynamics` is the (n+1)-dimensional region matrix.
/// The coefficient likewise has `g_0 = 0`; its remaining entries coincide
/// with the 1-based column labels used in hand calculations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    coefficient: FiniteCoefficient,
    zone: Dbm,
    dynamics: TropicalMatrix,
}

impl Region {
    pub fn coefficient(&self) -> &FiniteCoefficient {
        &self.coefficient
    }

    /// The mode's zone: canonical and non-empty.
    pub fn zone(&self) -> &Dbm {
        &self.zone
    }

    /// The augmented region matrix `A_g`.
    pub fn dynamics(&self) -> &TropicalMatrix {
        &self.dynamics
    }

    /// The region matrix without the dummy row/column.
    pub fn dynamics_raw(&self) -> TropicalMatrix {
        self.dynamics.strip_zero()
    }

    pub(crate) fn from_parts(
        coefficient: FiniteCoefficient,
        zone: Dbm,
        dynamics: TropicalMatrix,
    ) -> Region {
        Region {
            coefficient,
            zone,
            dynamics,
        }
    }
}

/// A PWA system: the augmented source matrix plus its non-empty regions in
/// lexicographic coefficient order.
#[derive(Clone, Debug)]
pub struct PwaSystem {
    source: TropicalMatrix,
    regions: Vec<Region>,
    partitioned: bool,
}

impl PwaSystem {
    /// Number of real variables.
    pub fn n(&self) -> usize {
        self.source.rows() - 1
    }

    /// The augmented system matrix.
    pub fn source(&self) -> &TropicalMatrix {
        &self.source
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// True when built by the partitioning construction (disjoint cells).
    pub fn is_partitioned(&self) -> bool {
        self.partitioned
    }

    /// Index of the unique partition cell containing `x`.
    pub fn locate(&self, x: &[f64]) -> Result<usize> {
        if !self.partitioned {
            return Err(Error::NotPartitioned { op: "locate" });
        }
        let mut found = None;
        for (idx, region) in self.regions.iter().enumerate() {
            if region.zone.contains_point(x)? {
                if let Some(first) = found {
                    return Err(Error::Internal(format!(
                        "point {x:?} lies in two partition cells ({first} and {idx})"
                    )));
                }
                found = Some(idx);
            }
        }
        found.ok_or_else(|| Error::Internal(format!("point {x:?} lies in no partition cell")))
    }

    /// Ordered adjacency of two non-empty regions: true iff `g` exceeds
    /// `g2` in exactly one entry and matches it elsewhere.
    pub fn are_adjacent(&self, g: &FiniteCoefficient, g2: &FiniteCoefficient) -> Result<bool> {
        for c in [g, g2] {
            if !self.regions.iter().any(|r| &r.coefficient == c) {
                return Err(Error::UnknownCoefficient(format!("{c:?}")));
            }
        }
        Ok(g.dominates_adjacent(g2))
    }
}

/// The zone of coefficient `g` as a raw bound matrix: the row-definite
/// form `⊕` the identity, equivalently the intersection of
/// `x_{g_i} − x_j ≥ A(i,j) − A(i,g_i)` over all pairs with the larger
/// bound kept on collisions. Signs are all non-strict at this stage; the
/// result is not canonicalized.
pub fn region_zone(augmented: &TropicalMatrix, g: &FiniteCoefficient) -> Result<Dbm> {
    check_augmented(augmented)?;
    if g.cols().first() != Some(&0) {
        return Err(Error::InvalidCoefficient {
            row: 0,
            col: g.cols().first().copied().unwrap_or(0),
        });
    }
    let definite = augmented.row_definite(g)?;
    let bounds = definite.oplus(&TropicalMatrix::identity(augmented.rows()))?;
    Ok(Dbm::from_bounds_nonstrict(bounds))
}

/// The sign rule that splits shared boundaries between neighbouring
/// regions, applied to a raw region bound matrix: a finite bound gets `≥`
/// when positive (or zero with row ≤ column) and `>` when negative (or
/// zero with row > column). Unconstrained entries keep their normalized
/// strict sign.
pub fn sign_rule(region: &Dbm) -> Dbm {
    let dim = region.dim();
    let mut signs = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let sign = match region.bound(i, j).finite() {
                Some(d) if d > 0 => Sign::NonStrict,
                Some(d) if d < 0 => Sign::Strict,
                Some(_) if i <= j => Sign::NonStrict,
                Some(_) => Sign::Strict,
                None => Sign::Strict,
            };
            signs.push(sign);
        }
    }
    Dbm::from_parts(region.bounds().clone(), signs, false)
}

/// All non-empty PWA regions of a row-finite matrix, with non-strict
/// signs everywhere; adjacent regions may overlap on their boundaries.
pub fn generate_pwa(a: &TropicalMatrix) -> Result<PwaSystem> {
    generate(a, false)
}

/// The disjoint partition of ℝⁿ whose cells are the abstract states:
/// non-empty regions with the sign rule applied before canonicalization.
pub fn generate_partition(a: &TropicalMatrix) -> Result<PwaSystem> {
    generate(a, true)
}

fn generate(a: &TropicalMatrix, partitioned: bool) -> Result<PwaSystem> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "system matrix must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_row_finite() {
        let row = (0..a.rows())
            .find(|&i| (0..a.cols()).all(|j| !a.get(i, j).is_finite()))
            .unwrap_or(0);
        return Err(Error::NotRowFinite { row });
    }
    let augmented = a.augment_zero();
    let coefficients = augmented.finite_coefficients()?;

    // Coefficient slots are independent; evaluate them in parallel and let
    // the indexed collect restore lexicographic order.
    let regions: Vec<Option<Region>> = (0..coefficients.len())
        .into_par_iter()
        .map(|idx| {
            let g = coefficients.get(idx);
            let raw = region_zone(&augmented, &g).expect("enumerated coefficient is finite");
            let zone = if partitioned {
                sign_rule(&raw).canonical_form()
            } else {
                raw.canonical_form()
            };
            if zone.is_empty() {
                None
            } else {
                let dynamics = augmented
                    .region_matrix(&g)
                    .expect("enumerated coefficient is finite");
                Some(Region::from_parts(g, zone, dynamics))
            }
        })
        .collect();

    Ok(PwaSystem {
        source: augmented,
        regions: regions.into_iter().flatten().collect(),
        partitioned,
    })
}

fn check_augmented(m: &TropicalMatrix) -> Result<()> {
    let ok = m.is_square()
        && m.rows() >= 1
        && m.get(0, 0) == TropicalScalar::UNIT
        && (1..m.rows()).all(|k| !m.get(0, k).is_finite() && !m.get(k, 0).is_finite());
    if ok {
        Ok(())
    } else {
        Err(Error::Dimension(
            "matrix is not augmented with the dummy row/column".to_string(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_matrix() -> TropicalMatrix {
        TropicalMatrix::from_rows(&[
            vec![None, Some(1), Some(3)],
            vec![Some(5), None, Some(4)],
            vec![Some(7), Some(8), None],
        ])
        .unwrap()
    }

    fn g(cols: &[usize]) -> FiniteCoefficient {
        FiniteCoefficient::new(cols.to_vec())
    }

    #[test]
    fn region_zone_of_first_mode() {
        let aug = example_matrix().augment_zero();
        let zone = region_zone(&aug, &g(&[0, 2, 1, 1]))
            .unwrap()
            .canonical_form();
        let want =
            Dbm::from_constraints(3, &[(1, 2, 1, false), (1, 3, 3, false), (2, 3, 2, false)])
                .unwrap()
                .canonical_form();
        assert_eq!(zone, want);
    }

    #[test]
    fn region_zone_of_empty_mode() {
        let aug = example_matrix().augment_zero();
        let zone = region_zone(&aug, &g(&[0, 2, 3, 1]))
            .unwrap()
            .canonical_form();
        assert!(zone.is_empty());
    }

    #[test]
    fn single_mode_covers_everything() {
        let a = TropicalMatrix::from_rows(&[vec![Some(5)]]).unwrap();
        let aug = a.augment_zero();
        let zone = region_zone(&aug, &g(&[0, 1])).unwrap().canonical_form();
        assert_eq!(zone, Dbm::full_space(1));
    }

    #[test]
    fn sign_rule_splits_boundaries() {
        let aug = example_matrix().augment_zero();
        let raw = region_zone(&aug, &g(&[0, 2, 1, 2])).unwrap();
        let signed = sign_rule(&raw);
        // bound(2,1) = −1 becomes strict: x2 − x1 > −1, i.e. x1 − x2 < 1
        assert_eq!(signed.bound(2, 1), TropicalScalar::Finite(-1));
        assert_eq!(signed.sign(2, 1), Sign::Strict);
        // zero bounds break the tie by index order
        let flat = Dbm::from_constraints(2, &[(1, 2, 0, false), (2, 1, 0, false)]).unwrap();
        let signed = sign_rule(&flat);
        assert_eq!(signed.sign(1, 2), Sign::NonStrict);
        assert_eq!(signed.sign(2, 1), Sign::Strict);
        assert_eq!(signed.sign(1, 1), Sign::NonStrict);
    }

    #[test]
    fn pwa_and_partition_share_coefficients() {
        let a = example_matrix();
        let pwa = generate_pwa(&a).unwrap();
        let partition = generate_partition(&a).unwrap();
        assert_eq!(pwa.regions().len(), 7);
        assert_eq!(partition.regions().len(), 7);
        assert!(!pwa.is_partitioned());
        assert!(partition.is_partitioned());
        for (r, s) in pwa.regions().iter().zip(partition.regions()) {
            assert_eq!(r.coefficient(), s.coefficient());
            assert!(!r.zone().is_empty());
        }
    }

    #[test]
    fn degenerate_ties_collapse_boundary_modes() {
        // A(1,1)−A(1,2) = A(2,1)−A(2,2) = 50: the modes (1,2) and (2,1)
        // are active exactly on the line x1−x2 = −50, which the covering
        // keeps as degenerate regions and the partition folds into the
        // neighbouring cell
        let a = TropicalMatrix::from_rows(&[vec![Some(3), Some(-47)], vec![Some(2), Some(-48)]])
            .unwrap();
        let covering = generate_pwa(&a).unwrap();
        let partition = generate_partition(&a).unwrap();
        assert_eq!(covering.regions().len(), 4);
        assert_eq!(partition.regions().len(), 2);
        // the boundary line belongs to exactly one cell
        assert_eq!(partition.locate(&[0.0, 50.0]).unwrap(), 1);
        assert_eq!(partition.locate(&[0.0, 49.9]).unwrap(), 0);
    }

    #[test]
    fn partition_rejects_non_row_finite() {
        let a = TropicalMatrix::from_rows(&[vec![Some(1), None], vec![None, None]]).unwrap();
        assert!(matches!(
            generate_partition(&a),
            Err(Error::NotRowFinite { row: 1 })
        ));
    }

    #[test]
    fn diagonal_matrix_has_single_full_region() {
        let a = TropicalMatrix::from_rows(&[vec![Some(2), None], vec![None, Some(3)]]).unwrap();
        let partition = generate_partition(&a).unwrap();
        assert_eq!(partition.regions().len(), 1);
        assert_eq!(*partition.regions()[0].zone(), Dbm::full_space(2));
    }

    #[test]
    fn locate_picks_unique_cell() {
        let partition = generate_partition(&example_matrix()).unwrap();
        // the origin lies strictly inside the bounded cell r5
        assert_eq!(partition.locate(&[0.0, 0.0, 0.0]).unwrap(), 4);
        // (10, 0, 0) satisfies x1−x2 ≥ 1 and x2−x3 < 2: cell r4
        assert_eq!(partition.locate(&[10.0, 0.0, 0.0]).unwrap(), 3);
        let pwa = generate_pwa(&example_matrix()).unwrap();
        assert!(matches!(
            pwa.locate(&[0.0, 0.0, 0.0]),
            Err(Error::NotPartitioned { .. })
        ));
    }

    #[test]
    fn adjacency_through_the_system() {
        let partition = generate_partition(&example_matrix()).unwrap();
        let a = g(&[0, 2, 1, 2]);
        let b = g(&[0, 2, 1, 1]);
        assert!(partition.are_adjacent(&a, &b).unwrap());
        assert!(!partition.are_adjacent(&b, &a).unwrap());
        assert!(!partition.are_adjacent(&a, &a).unwrap());
        let unknown = g(&[0, 2, 3, 1]); // the empty mode
        assert!(matches!(
            partition.are_adjacent(&unknown, &b),
            Err(Error::UnknownCoefficient(_))
        ));
    }
}
