use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

use super::TruncatedSeries;

/// Exact Laurent polynomial in `R[z, z⁻¹]`, stored sparsely without zero terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    ring: Ring,
    terms: BTreeMap<i64, Elem>,
}

impl LaurentPoly {
    pub fn zero(ring: &Ring) -> Self {
        LaurentPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::monomial(ring, 0, ring.one())
    }

    pub fn constant(ring: &Ring, c: Elem) -> Self {
        Self::monomial(ring, 0, c)
    }

    pub fn monomial(ring: &Ring, deg: i64, c: Elem) -> Self {
        let mut p = Self::zero(ring);
        p.set(deg, c);
        p
    }

    /// `coeffs[i]` is the coefficient of `z^(low + i)`.
    pub fn from_coeffs(ring: &Ring, low: i64, coeffs: Vec<Elem>) -> Self {
        let mut p = Self::zero(ring);
        for (i, c) in coeffs.into_iter().enumerate() {
            p.set(low + i as i64, c);
        }
        p
    }

    pub fn from_i64s(ring: &Ring, low: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            ring,
            low,
            coeffs.iter().map(|&c| ring.from_i64(c)).collect(),
        )
    }

    /// Build from `(degree, coefficient)` pairs; repeated degrees accumulate.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (i64, Elem)>) -> Result<Self> {
        let mut p = Self::zero(ring);
        for (d, c) in terms {
            if !ring.contains(&c) {
                return Err(Error::MixedRings);
            }
            let acc = ring.add(&p.coeff(d), &c);
            p.set(d, acc);
        }
        Ok(p)
    }

    fn set(&mut self, deg: i64, c: Elem) {
        if self.ring.is_zero(&c) {
            self.terms.remove(&deg);
        } else {
            self.terms.insert(deg, c);
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Elem)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, deg: i64) -> Elem {
        self.terms
            .get(&deg)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| self.ring.is_one(c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            let s = self.ring.add(&out.coeff(*d), c);
            out.set(*d, s);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (*d, self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<i64, Elem> = BTreeMap::new();
        for (da, ca) in &self.terms {
            for (db, cb) in &other.terms {
                let prod = self.ring.mul(ca, cb);
                let slot = acc.entry(da + db).or_insert_with(|| self.ring.zero());
                *slot = self.ring.add(slot, &prod);
            }
        }
        acc.retain(|_, c| !self.ring.is_zero(c));
        LaurentPoly {
            ring: self.ring.clone(),
            terms: acc,
        }
    }

    pub fn scale(&self, c: &Elem) -> Self {
        let mut out = Self::zero(&self.ring);
        for (d, x) in &self.terms {
            out.set(*d, self.ring.mul(x, c));
        }
        out
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Terms of degree `< t`.
    pub fn truncate_below(&self, t: i64) -> Self {
        LaurentPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .range(..t)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    /// Split into (terms of degree `< j`, terms of degree `>= j`).
    pub fn split_at(&self, j: i64) -> (Self, Self) {
        let hi = LaurentPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .range(j..)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        };
        (self.truncate_below(j), hi)
    }

    /// Apply a coefficient map into another ring (used for CRT projections).
    pub fn map_ring(&self, target: &Ring, f: impl Fn(&Elem) -> Elem) -> Self {
        let mut out = Self::zero(target);
        for (d, c) in &self.terms {
            out.set(*d, f(c));
        }
        out
    }

    pub fn to_series(&self) -> TruncatedSeries {
        match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => {
                let coeffs = (lo..=hi).map(|d| self.coeff(d)).collect();
                TruncatedSeries::exact(&self.ring, lo, coeffs)
            }
            _ => TruncatedSeries::exact(&self.ring, 0, Vec::new()),
        }
    }

    /// Render with an arbitrary variable name.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, c)| match *d {
                0 => format!("{c}"),
                1 => format!("{c}·{var}"),
                _ => format!("{c}·{var}^{d}"),
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}
