//! Laurent polynomials, windowed Laurent series, and the approximation ring `B`.

mod fraction;
mod poly;
mod series;
mod unit;

pub use fraction::BFraction;
pub use poly::LaurentPoly;
pub use series::TruncatedSeries;
pub use unit::{
    classify_series_unit, invert_in_b, invert_in_b_certified, invert_series_unit,
    invert_truncated_unit, ComponentWitness, NilpotencyCertificate, UnitCertificate, UnitClass,
    UnitWitness,
};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// A value of any of the three series representations.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesValue {
    Poly(LaurentPoly),
    Series(TruncatedSeries),
    Fraction(BFraction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

impl SeriesValue {
    pub fn ring(&self) -> &Ring {
        match self {
            SeriesValue::Poly(p) => p.ring(),
            SeriesValue::Series(s) => s.ring(),
            SeriesValue::Fraction(f) => f.ring(),
        }
    }

    fn as_fraction(&self) -> Option<BFraction> {
        match self {
            SeriesValue::Poly(p) => Some(BFraction::from_poly(p.clone())),
            SeriesValue::Fraction(f) => Some(f.clone()),
            SeriesValue::Series(_) => None,
        }
    }

    /// Expansion precise enough not to limit a product with `partner`.
    fn as_series_for(&self, partner: &TruncatedSeries) -> TruncatedSeries {
        match self {
            SeriesValue::Series(s) => s.clone(),
            SeriesValue::Poly(p) => p.to_series(),
            SeriesValue::Fraction(f) => {
                let p = partner.prec().expect("partner is truncated");
                let own_val = f.valuation().unwrap_or(p);
                let partner_val = partner.val_lower_bound().unwrap_or(p);
                f.expand(p + (own_val - partner_val).max(0))
            }
        }
    }
}

/// Checked arithmetic across representations.
///
/// Polynomials and fractions combine exactly (a polynomial is promoted to a
/// fraction with denominator `1` when the other side is a fraction). Anything
/// combined with a truncated series is carried out on series, with the
/// z-adic ball rule deciding the result precision.
pub fn series_arith(a: &SeriesValue, b: &SeriesValue, op: SeriesOp) -> Result<SeriesValue> {
    if a.ring() != b.ring() {
        return Err(Error::MixedRings);
    }
    let apply_series = |x: &TruncatedSeries, y: &TruncatedSeries| match op {
        SeriesOp::Add => x.add(y),
        SeriesOp::Sub => x.sub(y),
        SeriesOp::Mul => x.mul(y),
    };
    Ok(match (a, b) {
        (SeriesValue::Poly(x), SeriesValue::Poly(y)) => SeriesValue::Poly(match op {
            SeriesOp::Add => x.add(y),
            SeriesOp::Sub => x.sub(y),
            SeriesOp::Mul => x.mul(y),
        }),
        (SeriesValue::Series(x), other) | (other, SeriesValue::Series(x))
            if !matches!(other, SeriesValue::Series(_)) =>
        {
            let y = other.as_series_for(x);
            // keep operand order for subtraction
            if matches!(a, SeriesValue::Series(_)) {
                SeriesValue::Series(apply_series(x, &y))
            } else {
                SeriesValue::Series(apply_series(&y, x))
            }
        }
        (SeriesValue::Series(x), SeriesValue::Series(y)) => SeriesValue::Series(apply_series(x, y)),
        _ => {
            let x = a.as_fraction().unwrap();
            let y = b.as_fraction().unwrap();
            SeriesValue::Fraction(match op {
                SeriesOp::Add => x.add(&y),
                SeriesOp::Sub => x.sub(&y),
                SeriesOp::Mul => x.mul(&y),
            })
        }
    })
}
