use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Classification, Ring};

use super::{invert_series_unit, LaurentPoly, TruncatedSeries};

/// An element `num / den` of the approximation ring `B = ∪ R[z, z⁻¹, P⁻¹]`.
///
/// `den` is a polynomial in `z` whose constant term is a unit; it is kept
/// normalized so that constant term is `1`. Fractions are not reduced, and
/// equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct BFraction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl BFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if num.ring() != den.ring() {
            return Err(Error::MixedRings);
        }
        let ring = den.ring().clone();
        if den.min_degree().is_some_and(|d| d < 0) {
            return Err(Error::Schema(format!(
                "denominator {den} has negative-degree terms"
            )));
        }
        let inv = match ring.classify(&den.coeff(0)) {
            Classification::Unit(inv) => inv,
            _ => {
                return Err(Error::Schema(format!(
                    "denominator {den} does not have a unit constant term"
                )))
            }
        };
        Ok(BFraction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let den = LaurentPoly::one(p.ring());
        BFraction { num: p, den }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::from_poly(LaurentPoly::zero(ring))
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_poly(LaurentPoly::one(ring))
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// The polynomial itself when the denominator is `1`.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// z-adic valuation; the denominator is a power-series unit so this is
    /// the numerator's lowest degree.
    pub fn valuation(&self) -> Option<i64> {
        self.num.min_degree()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return BFraction {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
        }
        BFraction {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn neg(&self) -> Self {
        BFraction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let den = if self.den.is_one() {
            other.den.clone()
        } else if other.den.is_one() {
            self.den.clone()
        } else {
            self.den.mul(&other.den)
        };
        BFraction {
            num: self.num.mul(&other.num),
            den,
        }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        BFraction {
            num: self.num.mul(p),
            den: self.den.clone(),
        }
    }

    /// Expand into `R((z))` up to `O(z^prec)`.
    pub fn expand(&self, prec: i64) -> TruncatedSeries {
        let ring = self.ring();
        let Some(v) = self.num.min_degree() else {
            return TruncatedSeries::big_o(ring, prec);
        };
        if prec <= v {
            return TruncatedSeries::big_o(ring, prec);
        }
        let den_inv = invert_series_unit(&self.den.to_series(), prec - v)
            .expect("denominator constant term is a unit");
        self.num.to_series().mul(&den_inv).truncate(prec)
    }
}

/// Cross-multiplication equality.
impl PartialEq for BFraction {
    fn eq(&self, other: &Self) -> bool {
        self.ring() == other.ring() && self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for BFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
