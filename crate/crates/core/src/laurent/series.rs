use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

use super::LaurentPoly;

/// An element of `R((z))` known on a dense coefficient window.
///
/// The value is `Σ coeffs[i]·z^(val_floor+i) + O(z^prec)`. With `prec = None`
/// the series is an exact Laurent polynomial and `coeffs` lists every
/// coefficient from `val_floor` on. `val_floor` is a lower bound, not the true
/// valuation: leading coefficients may be zero.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    ring: Ring,
    val_floor: i64,
    coeffs: Vec<Elem>,
    prec: Option<i64>,
}

impl TruncatedSeries {
    /// Checked constructor. Truncated windows shorter than `prec - val_floor`
    /// are padded with zeros.
    pub fn new(
        ring: &Ring,
        val_floor: i64,
        mut coeffs: Vec<Elem>,
        prec: Option<i64>,
    ) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !ring.contains(c)) {
            return Err(Error::Schema(format!(
                "coefficient {c} is not an element of the ring"
            )));
        }
        if let Some(p) = prec {
            if p <= val_floor {
                return Err(Error::Schema(format!(
                    "precision {p} must exceed the window start {val_floor}"
                )));
            }
            let len = (p - val_floor) as usize;
            if coeffs.len() > len {
                return Err(Error::Schema(format!(
                    "{} coefficients do not fit the window [{val_floor}, {p})",
                    coeffs.len()
                )));
            }
            coeffs.resize(len, ring.zero());
        }
        Ok(TruncatedSeries {
            ring: ring.clone(),
            val_floor,
            coeffs,
            prec,
        })
    }

    pub fn exact(ring: &Ring, val_floor: i64, coeffs: Vec<Elem>) -> Self {
        TruncatedSeries {
            ring: ring.clone(),
            val_floor,
            coeffs,
            prec: None,
        }
    }

    pub fn truncated(ring: &Ring, val_floor: i64, coeffs: Vec<Elem>, prec: i64) -> Self {
        Self::new(ring, val_floor, coeffs, Some(prec)).expect("well-formed truncated window")
    }

    pub fn from_i64s(ring: &Ring, val_floor: i64, coeffs: &[i64], prec: Option<i64>) -> Self {
        let cs = coeffs.iter().map(|&c| ring.from_i64(c)).collect();
        Self::new(ring, val_floor, cs, prec).expect("well-formed window")
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::exact(ring, 0, Vec::new())
    }

    pub fn one(ring: &Ring) -> Self {
        Self::exact(ring, 0, vec![ring.one()])
    }

    /// `O(z^prec)`.
    pub fn big_o(ring: &Ring, prec: i64) -> Self {
        Self::truncated(ring, prec - 1, vec![ring.zero()], prec)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn val_floor(&self) -> i64 {
        self.val_floor
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// One past the last stored degree.
    fn end(&self) -> i64 {
        self.val_floor + self.coeffs.len() as i64
    }

    /// Coefficient of `z^d`, or `None` when `d` lies at or beyond the precision.
    pub fn coeff(&self, d: i64) -> Option<Elem> {
        if self.prec.is_some_and(|p| d >= p) {
            return None;
        }
        Some(self.coeff_or_zero(d))
    }

    fn coeff_or_zero(&self, d: i64) -> Elem {
        if d < self.val_floor || d >= self.end() {
            self.ring.zero()
        } else {
            self.coeffs[(d - self.val_floor) as usize].clone()
        }
    }

    /// Degree of the first nonzero represented coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !self.ring.is_zero(c))
            .map(|i| self.val_floor + i as i64)
    }

    /// Guaranteed lower bound on the true valuation; `None` means `+∞`
    /// (the exact zero series).
    pub fn val_lower_bound(&self) -> Option<i64> {
        self.valuation().or(self.prec)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.valuation().is_none()
    }

    /// Drop leading zeros (and trailing zeros when exact). A truncated
    /// all-zero window keeps a single slot below the precision.
    pub fn trimmed(&self) -> Self {
        match self.valuation() {
            Some(v) => {
                let start = (v - self.val_floor) as usize;
                let mut coeffs = self.coeffs[start..].to_vec();
                if self.is_exact() {
                    while coeffs.last().is_some_and(|c| self.ring.is_zero(c)) {
                        coeffs.pop();
                    }
                }
                TruncatedSeries {
                    ring: self.ring.clone(),
                    val_floor: v,
                    coeffs,
                    prec: self.prec,
                }
            }
            None => match self.prec {
                Some(p) => Self::big_o(&self.ring, p),
                None => Self::zero(&self.ring),
            },
        }
    }

    /// Reduce the precision to `min(prec, p)`.
    pub fn truncate(&self, p: i64) -> Self {
        let p = self.prec.map_or(p, |q| q.min(p));
        if p <= self.val_floor {
            return Self::big_o(&self.ring, p);
        }
        let coeffs = (self.val_floor..p).map(|d| self.coeff_or_zero(d)).collect();
        Self::truncated(&self.ring, self.val_floor, coeffs, p)
    }

    /// Re-express on a window starting at `floor` (must not drop nonzero terms).
    pub fn with_floor(&self, floor: i64) -> Self {
        let end = match self.prec {
            Some(p) => p,
            None => self.end().max(floor),
        };
        debug_assert!(self.valuation().is_none_or(|v| v >= floor));
        let floor = match self.prec {
            Some(p) => floor.min(p - 1),
            None => floor,
        };
        let coeffs = (floor..end).map(|d| self.coeff_or_zero(d)).collect();
        TruncatedSeries {
            ring: self.ring.clone(),
            val_floor: floor,
            coeffs,
            prec: self.prec,
        }
    }

    /// All represented terms as an exact polynomial.
    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::from_coeffs(&self.ring, self.val_floor, self.coeffs.clone())
    }

    /// Represented terms of degree `< t`.
    pub fn poly_below(&self, t: i64) -> LaurentPoly {
        self.to_poly().truncate_below(t)
    }

    pub fn map_ring(&self, target: &Ring, f: impl Fn(&Elem) -> Elem) -> Self {
        TruncatedSeries {
            ring: target.clone(),
            val_floor: self.val_floor,
            coeffs: self.coeffs.iter().map(f).collect(),
            prec: self.prec,
        }
    }

    /// Do the two series agree on every degree below `upto` (and below both precisions)?
    pub fn agrees_below(&self, other: &Self, upto: i64) -> bool {
        let lo = self.val_floor.min(other.val_floor);
        let hi = [Some(upto), self.prec, other.prec]
            .into_iter()
            .flatten()
            .min()
            .unwrap();
        (lo..hi).all(|d| self.coeff_or_zero(d) == other.coeff_or_zero(d))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = min_opt(self.prec, other.prec);
        let lo = self.val_floor.min(other.val_floor);
        let hi = prec.unwrap_or_else(|| self.end().max(other.end()));
        let coeffs = (lo..hi)
            .map(|d| {
                self.ring
                    .add(&self.coeff_or_zero(d), &other.coeff_or_zero(d))
            })
            .collect();
        TruncatedSeries {
            ring: self.ring.clone(),
            val_floor: lo,
            coeffs,
            prec,
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            val_floor: self.val_floor,
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product under the z-adic ball rule
    /// `prec = min(prec_a + val_b, prec_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.ring);
        }
        let a = self.trimmed();
        let b = other.trimmed();
        let va = a.val_lower_bound().unwrap();
        let vb = b.val_lower_bound().unwrap();
        let prec = min_opt(a.prec.map(|p| p + vb), b.prec.map(|p| p + va));
        let lo = a.val_floor + b.val_floor;
        let len = match prec {
            Some(p) if p <= lo => return Self::big_o(&self.ring, p),
            Some(p) => (p - lo) as usize,
            None => a.coeffs.len() + b.coeffs.len() - 1,
        };
        let ring = &self.ring;
        let mut out = vec![ring.zero(); len];
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if ring.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
            }
        }
        TruncatedSeries {
            ring: ring.clone(),
            val_floor: lo,
            coeffs: out,
            prec,
        }
    }

    pub fn scale(&self, c: &Elem) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            val_floor: self.val_floor,
            coeffs: self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect(),
            prec: self.prec,
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            val_floor: self.val_floor + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Equality of values: same precision and same coefficients on the window.
impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring || self.prec != other.prec {
            return false;
        }
        let lo = self.val_floor.min(other.val_floor);
        let hi = self.end().max(other.end());
        (lo..hi).all(|d| self.coeff_or_zero(d) == other.coeff_or_zero(d))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_poly();
        match self.prec {
            None => write!(f, "{p}"),
            Some(prec) if p.is_zero() => write!(f, "O(z^{prec})"),
            Some(prec) => write!(f, "{p} + O(z^{prec})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_rule_product() {
        let q = Ring::rationals();
        let a = TruncatedSeries::from_i64s(&q, 0, &[1], Some(3));
        let b = TruncatedSeries::from_i64s(&q, -1, &[1], Some(2));
        let c = a.mul(&b);
        assert_eq!(c.prec(), Some(2));
        assert_eq!(c, TruncatedSeries::from_i64s(&q, -1, &[1], Some(2)));
    }

    #[test]
    fn exact_product_stays_exact() {
        let q = Ring::rationals();
        let a = TruncatedSeries::from_i64s(&q, 0, &[1, 1], None);
        let b = TruncatedSeries::from_i64s(&q, 0, &[1, -1], None);
        assert_eq!(
            a.mul(&b),
            TruncatedSeries::from_i64s(&q, 0, &[1, 0, -1], None)
        );
    }

    #[test]
    fn addition_takes_min_precision() {
        let f5 = Ring::prime_field(5).unwrap();
        let a = TruncatedSeries::from_i64s(&f5, -2, &[1, 2, 3], Some(4));
        let b = TruncatedSeries::from_i64s(&f5, 0, &[4], Some(2));
        let c = a.add(&b);
        assert_eq!(c.prec(), Some(2));
        assert_eq!(c.coeff(0), Some(Elem::Res(2)));
        assert_eq!(c.coeff(2), None);
    }

    #[test]
    fn zero_window_product() {
        let q = Ring::rationals();
        let o = TruncatedSeries::big_o(&q, 3);
        let f = TruncatedSeries::from_i64s(&q, -1, &[1, 5], Some(4));
        // O(z³)·(z⁻¹ + …) = O(z²)
        let p = o.mul(&f);
        assert_eq!(p.prec(), Some(2));
        assert!(p.valuation().is_none());
        assert!(o.mul(&TruncatedSeries::zero(&q)).is_exact_zero());
    }

    #[test]
    fn constructor_validates_window() {
        let q = Ring::rationals();
        assert!(TruncatedSeries::new(&q, 3, vec![], Some(3)).is_err());
        assert!(TruncatedSeries::new(&q, 0, vec![q.one(); 4], Some(3)).is_err());
        let padded = TruncatedSeries::new(&q, 0, vec![q.one()], Some(3)).unwrap();
        assert_eq!(padded.coeffs().len(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn series(vals: Vec<i64>, floor: i64, prec: Option<i64>) -> TruncatedSeries {
            let r = Ring::integers_mod(8).unwrap();
            let vals: Vec<i64> = match prec {
                Some(p) => vals.into_iter().take((p - floor).max(0) as usize).collect(),
                None => vals,
            };
            TruncatedSeries::from_i64s(&r, floor, &vals, prec)
        }

        proptest! {
            #[test]
            fn precision_coherence(
                a in proptest::collection::vec(0i64..8, 1..8),
                b in proptest::collection::vec(0i64..8, 1..8),
                fa in -3i64..3, fb in -3i64..3,
                pa in 4i64..10, pb in 4i64..10,
                cut in -2i64..8,
            ) {
                let x = series(a, fa, Some(pa));
                let y = series(b, fb, Some(pb));
                // truncate-then-op agrees with op-then-truncate on the output window
                let direct = x.mul(&y).truncate(cut);
                let pre = x.truncate(cut - fb.min(0)).mul(&y.truncate(cut - fa.min(0)));
                if let (Some(p1), Some(p2)) = (direct.prec(), pre.prec()) {
                    prop_assert!(direct.agrees_below(&pre, p1.min(p2)));
                }
                let s1 = x.add(&y).truncate(cut);
                let s2 = x.truncate(cut).add(&y.truncate(cut));
                prop_assert_eq!(s1, s2);
            }

            #[test]
            fn truncated_product_matches_exact_product(
                a in proptest::collection::vec(0i64..8, 1..8),
                b in proptest::collection::vec(0i64..8, 1..8),
                fa in -3i64..3, fb in -3i64..3,
                pa in 0i64..10,
            ) {
                let xe = series(a.clone(), fa, None);
                let ye = series(b, fb, None);
                let xt = xe.truncate(fa + pa.max(1));
                let exact = xe.mul(&ye);
                let trunc = xt.mul(&ye);
                let Some(p) = trunc.prec() else {
                    prop_assert!(trunc.is_exact_zero());
                    return Ok(());
                };
                prop_assert!(exact.agrees_below(&trunc, p));
            }
        }
    }
}
