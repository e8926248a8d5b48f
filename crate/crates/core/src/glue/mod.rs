//! Vector bundles on `P¹_R` glued from transition matrices.
//!
//! A bundle is recorded by its transition matrix `g` over `B`, comparing the
//! trivialization near `z = 0` with the one away from it. Sections are pairs
//! `(s, t)` with `s` a vector of polynomials in `z`, `t` a vector of
//! polynomials in `w = 1/z`, and `t = g·s` on the overlap. Under this
//! convention the scalar transition `z^(-d)` is `O(d)`, and
//! `deg E = -val(det g)`.

mod cohomology;

pub use cohomology::{
    cech_h1, global_sections, random_chart_change, random_laurent_transition, splitting_type,
    SectionPair, SectionSpace, SplittingType,
};

use crate::error::{Error, Result};
use crate::laurent::{invert_in_b_certified, BFraction, UnitCertificate};
use crate::matfact::factorize_gdelta;
use crate::matrix::{FractionMatrix, SeriesMatrix};
use crate::ring::Ring;

pub const CHART_NEAR_P: &str = "Spec of polynomials in z (localized data as fractions)";
pub const CHART_AWAY: &str = "Spec of polynomials in w = 1/z";

/// Transition matrix certified invertible over `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionDatum {
    g: FractionMatrix,
    det_inverse: BFraction,
    det_certificate: UnitCertificate,
}

impl TransitionDatum {
    pub fn new(g: FractionMatrix) -> Result<Self> {
        let (det_inverse, det_certificate) =
            invert_in_b_certified(&g.det()).map_err(|e| match e {
                Error::NotAUnit(why) => Error::NotInvertible(why),
                other => other,
            })?;
        Ok(TransitionDatum {
            g,
            det_inverse,
            det_certificate,
        })
    }

    pub fn matrix(&self) -> &FractionMatrix {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn ring(&self) -> &Ring {
        self.g.ring()
    }

    pub fn det_inverse(&self) -> &BFraction {
        &self.det_inverse
    }

    pub fn det_certificate(&self) -> &UnitCertificate {
        &self.det_certificate
    }
}

/// A bundle with its two trivializations, stored by its transition matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleTriple {
    transition: TransitionDatum,
    /// Change of the formal trivialization, when built from a series matrix.
    formal_delta: Option<SeriesMatrix>,
}

impl BundleTriple {
    pub fn new(transition: TransitionDatum, formal_delta: Option<SeriesMatrix>) -> Result<Self> {
        if let Some(d) = &formal_delta {
            if d.n() != transition.n() || d.ring() != transition.ring() {
                return Err(Error::Schema(
                    "δ does not match the transition matrix".into(),
                ));
            }
        }
        Ok(BundleTriple {
            transition,
            formal_delta,
        })
    }

    pub fn n(&self) -> usize {
        self.transition.n()
    }

    pub fn formal_delta(&self) -> Option<&SeriesMatrix> {
        self.formal_delta.as_ref()
    }

    pub fn chart_labels(&self) -> (&'static str, &'static str) {
        (CHART_NEAR_P, CHART_AWAY)
    }
}

/// The bundle whose transition matrix is `g`.
pub fn bundle_from_matrix(g: &FractionMatrix) -> Result<BundleTriple> {
    BundleTriple::new(TransitionDatum::new(g.clone())?, None)
}

/// The transition matrix of a triple; inverse of [`bundle_from_matrix`].
pub fn transition_of_triple(t: &BundleTriple) -> TransitionDatum {
    t.transition.clone()
}

/// Factor `γ = g·δ` and glue along `g`, keeping `δ` as the change of the
/// formal trivialization.
pub fn formal_from_matrix(gamma: &SeriesMatrix, prec: i64) -> Result<BundleTriple> {
    let f = factorize_gdelta(gamma, prec)?;
    BundleTriple::new(TransitionDatum::new(f.g)?, Some(f.delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{LaurentPoly, TruncatedSeries};
    use crate::matrix::PolyMatrix;

    fn frac(m: &PolyMatrix) -> FractionMatrix {
        m.map(|e| BFraction::from_poly(e.clone()))
    }

    #[test]
    fn glue_examples() {
        let q = Ring::rationals();
        let id = FractionMatrix::identity(&q, 2);
        let t = bundle_from_matrix(&id).unwrap();
        assert_eq!(transition_of_triple(&t).matrix(), &id);

        let o1 = frac(&PolyMatrix::from_i64_rows(&q, &[&[(-1, &[1])]]));
        assert_eq!(
            transition_of_triple(&bundle_from_matrix(&o1).unwrap()).matrix(),
            &o1
        );

        let sing = frac(&PolyMatrix::from_i64_rows(
            &q,
            &[&[(1, &[1]), (0, &[])], &[(0, &[]), (0, &[])]],
        ));
        assert!(matches!(
            bundle_from_matrix(&sing),
            Err(Error::NotInvertible(_))
        ));

        let g = frac(&PolyMatrix::from_i64_rows(&q, &[&[(-1, &[1, 1])]]));
        assert_eq!(
            transition_of_triple(&bundle_from_matrix(&g).unwrap()).matrix(),
            &g
        );
    }

    #[test]
    fn formal_examples() {
        let f5 = Ring::prime_field(5).unwrap();
        let geo = BFraction::new(
            LaurentPoly::one(&f5),
            LaurentPoly::from_i64s(&f5, 0, &[1, -1]),
        )
        .unwrap()
        .expand(10);
        let gamma = SeriesMatrix::new(&f5, 1, vec![geo.clone()]).unwrap();
        let t = formal_from_matrix(&gamma, 10).unwrap();
        assert!(transition_of_triple(&t)
            .matrix()
            .get(0, 0)
            .as_poly()
            .unwrap()
            .is_one());
        assert_eq!(t.formal_delta().unwrap().get(0, 0), &geo);

        let tail = SeriesMatrix::new(
            &f5,
            1,
            vec![TruncatedSeries::from_i64s(&f5, -1, &[1; 11], Some(10))],
        )
        .unwrap();
        let t = formal_from_matrix(&tail, 10).unwrap();
        let g = transition_of_triple(&t).matrix().clone();
        assert_eq!(
            g.get(0, 0).as_poly().unwrap(),
            &LaurentPoly::from_i64s(&f5, -1, &[1, 1])
        );
        // Φ-normal form: the stored transition is g, not g·δ
        assert!(t.formal_delta().is_some());
        let back = g.to_series(20).mul(t.formal_delta().unwrap());
        assert!(back.agrees_below(&tail, 10));

        let id = SeriesMatrix::identity(&f5, 2);
        let t = formal_from_matrix(&id, 6).unwrap();
        assert_eq!(
            transition_of_triple(&t).matrix(),
            &FractionMatrix::identity(&f5, 2)
        );
        assert!(t.formal_delta().unwrap().agrees_below(&id, 6));
    }

    #[test]
    fn chart_labels_present() {
        let q = Ring::rationals();
        let t = bundle_from_matrix(&FractionMatrix::identity(&q, 1)).unwrap();
        assert_eq!(t.chart_labels().1, CHART_AWAY);
        assert_eq!(t.n(), 1);
    }
}
