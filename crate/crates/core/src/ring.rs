//! Coefficient rings.
//!
//! Every series in this crate has coefficients in one of four ring families:
//! the rationals, a prime field, `Z/m`, or a truncated polynomial extension
//! `base[ε]/(ε^k)` over any of these. Elements are stored as bare [`Elem`]
//! values; the [`Ring`] handle carries the descriptor and performs the
//! arithmetic. [`RingElement`] pairs the two for callers that want checked
//! operations.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Canonical representative of a ring element.
///
/// The variant is determined by the ring: `Rat` for the rationals, `Res` for
/// prime fields and `Z/m` (reduced residue), `Dual` for `base[ε]/(ε^k)`
/// (exactly `k` base coefficients, ascending in ε).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Rat(BigRational),
    Res(u64),
    Dual(Vec<Elem>),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Rat(q) => write!(f, "{q}"),
            Elem::Res(r) => write!(f, "{r}"),
            Elem::Dual(cs) => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    match i {
                        0 => write!(f, "{c}")?,
                        1 => write!(f, "{c}ε")?,
                        _ => write!(f, "{c}ε^{i}")?,
                    }
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Rationals,
    PrimeField {
        p: u64,
    },
    /// `Z/m`, with the prime factorization of `m` as `(prime, exponent)` pairs.
    IntegersMod {
        m: u64,
        factors: Vec<(u64, u32)>,
    },
    /// `base[ε]/(ε^k)`.
    DualExtension {
        base: Ring,
        k: usize,
    },
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    kind: RingKind,
    nilradical_exponent: u32,
    local_artinian: bool,
}

impl RingDescriptor {
    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    /// Smallest `K` with `(nilradical)^K = 0`.
    pub fn nilradical_exponent(&self) -> u32 {
        self.nilradical_exponent
    }

    /// True iff every element is a unit or nilpotent.
    pub fn local_artinian(&self) -> bool {
        self.local_artinian
    }
}

/// Shared handle to a ring descriptor. Cheap to clone.
#[derive(Clone, Debug, Eq)]
pub struct Ring(Arc<RingDescriptor>);

impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl std::ops::Deref for Ring {
    type Target = RingDescriptor;

    fn deref(&self) -> &RingDescriptor {
        &self.0
    }
}

/// Result of classifying a single ring element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Unit(Elem),
    /// `a^index = 0` and `a^(index-1) != 0`.
    Nilpotent(u32),
    /// Neither unit nor nilpotent (zero divisors of non-local rings).
    Other,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

fn pow_u64(p: u64, e: u32) -> u64 {
    p.checked_pow(e)
        .expect("prime power fits in u64 since it divides the modulus")
}

impl Ring {
    fn from_kind(kind: RingKind) -> Ring {
        let (nilradical_exponent, local_artinian) = match &kind {
            RingKind::Rationals | RingKind::PrimeField { .. } => (1, true),
            RingKind::IntegersMod { factors, .. } => (
                factors.iter().map(|&(_, e)| e).max().unwrap_or(1),
                factors.len() == 1,
            ),
            RingKind::DualExtension { base, k } => (
                base.nilradical_exponent + *k as u32 - 1,
                base.local_artinian,
            ),
        };
        Ring(Arc::new(RingDescriptor {
            kind,
            nilradical_exponent,
            local_artinian,
        }))
    }

    pub fn rationals() -> Ring {
        Ring::from_kind(RingKind::Rationals)
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(Ring::from_kind(RingKind::PrimeField { p }))
    }

    pub fn integers_mod(m: u64) -> Result<Ring> {
        if m < 2 {
            return Err(Error::InvalidRing(format!(
                "modulus {m} must be at least 2"
            )));
        }
        if m > u32::MAX as u64 {
            return Err(Error::InvalidRing(format!("modulus {m} too large")));
        }
        Ok(Ring::from_kind(RingKind::IntegersMod {
            m,
            factors: factorize(m),
        }))
    }

    pub fn dual(base: Ring, k: usize) -> Result<Ring> {
        if k < 2 {
            return Err(Error::InvalidRing(format!(
                "ε-order {k} must be at least 2"
            )));
        }
        Ok(Ring::from_kind(RingKind::DualExtension { base, k }))
    }

    /// True for the rationals, prime fields and `Z/p`.
    pub fn is_field(&self) -> bool {
        match &self.kind {
            RingKind::Rationals | RingKind::PrimeField { .. } => true,
            RingKind::IntegersMod { factors, .. } => factors.len() == 1 && factors[0].1 == 1,
            RingKind::DualExtension { .. } => false,
        }
    }

    fn modulus(&self) -> Option<u64> {
        match &self.kind {
            RingKind::PrimeField { p } => Some(*p),
            RingKind::IntegersMod { m, .. } => Some(*m),
            _ => None,
        }
    }

    pub fn zero(&self) -> Elem {
        match &self.kind {
            RingKind::Rationals => Elem::Rat(BigRational::zero()),
            RingKind::PrimeField { .. } | RingKind::IntegersMod { .. } => Elem::Res(0),
            RingKind::DualExtension { base, k } => Elem::Dual(vec![base.zero(); *k]),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        match &self.kind {
            RingKind::Rationals => Elem::Rat(BigRational::from_integer(BigInt::from(v))),
            RingKind::PrimeField { .. } | RingKind::IntegersMod { .. } => {
                let m = self.modulus().unwrap();
                Elem::Res((v as i128).rem_euclid(m as i128) as u64)
            }
            RingKind::DualExtension { base, k } => {
                let mut cs = vec![base.zero(); *k];
                cs[0] = base.from_i64(v);
                Elem::Dual(cs)
            }
        }
    }

    /// Shape check: is `a` a canonical element of this ring?
    pub fn contains(&self, a: &Elem) -> bool {
        match (&self.kind, a) {
            (RingKind::Rationals, Elem::Rat(_)) => true,
            (RingKind::PrimeField { .. } | RingKind::IntegersMod { .. }, Elem::Res(r)) => {
                *r < self.modulus().unwrap()
            }
            (RingKind::DualExtension { base, k }, Elem::Dual(cs)) => {
                cs.len() == *k && cs.iter().all(|c| base.contains(c))
            }
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(q) => q.is_zero(),
            Elem::Res(r) => *r == 0,
            Elem::Dual(cs) => match &self.kind {
                RingKind::DualExtension { base, .. } => cs.iter().all(|c| base.is_zero(c)),
                _ => unreachable!("dual element over non-dual ring"),
            },
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (RingKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (_, Elem::Res(x), Elem::Res(y)) => Elem::Res(add_mod(*x, *y, self.modulus().unwrap())),
            (RingKind::DualExtension { base, .. }, Elem::Dual(x), Elem::Dual(y)) => {
                Elem::Dual(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            _ => panic!("element does not belong to ring"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.kind, a) {
            (RingKind::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (_, Elem::Res(x)) => {
                let m = self.modulus().unwrap();
                Elem::Res(if *x == 0 { 0 } else { m - x })
            }
            (RingKind::DualExtension { base, .. }, Elem::Dual(x)) => {
                Elem::Dual(x.iter().map(|u| base.neg(u)).collect())
            }
            _ => panic!("element does not belong to ring"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (RingKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (_, Elem::Res(x), Elem::Res(y)) => Elem::Res(mul_mod(*x, *y, self.modulus().unwrap())),
            (RingKind::DualExtension { base, k }, Elem::Dual(x), Elem::Dual(y)) => {
                let mut out = vec![base.zero(); *k];
                for (i, u) in x.iter().enumerate() {
                    if base.is_zero(u) {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate().take(k - i) {
                        out[i + j] = base.add(&out[i + j], &base.mul(u, v));
                    }
                }
                Elem::Dual(out)
            }
            _ => panic!("element does not belong to ring"),
        }
    }

    pub fn pow(&self, a: &Elem, e: u32) -> Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        match self.classify(a) {
            Classification::Unit(b) => Some(b),
            _ => None,
        }
    }

    pub fn classify(&self, a: &Elem) -> Classification {
        match (&self.kind, a) {
            (RingKind::Rationals, Elem::Rat(x)) => {
                if x.is_zero() {
                    Classification::Nilpotent(1)
                } else {
                    Classification::Unit(Elem::Rat(x.recip()))
                }
            }
            (RingKind::PrimeField { p }, Elem::Res(x)) => {
                if *x == 0 {
                    Classification::Nilpotent(1)
                } else {
                    Classification::Unit(Elem::Res(inv_mod(*x, *p).unwrap()))
                }
            }
            (RingKind::IntegersMod { m, factors }, Elem::Res(x)) => {
                let mut units = 0;
                let mut index = 0u32;
                for &(p, e) in factors {
                    let q = pow_u64(p, e);
                    let r = x % q;
                    if !r.is_multiple_of(p) {
                        units += 1;
                    } else if r == 0 {
                        index = index.max(1);
                    } else {
                        let mut v = 0;
                        let mut t = r;
                        while t.is_multiple_of(p) {
                            t /= p;
                            v += 1;
                        }
                        index = index.max(e.div_ceil(v));
                    }
                }
                if units == factors.len() {
                    Classification::Unit(Elem::Res(inv_mod(*x, *m).unwrap()))
                } else if units == 0 {
                    Classification::Nilpotent(index)
                } else {
                    Classification::Other
                }
            }
            (RingKind::DualExtension { base, k }, Elem::Dual(cs)) => match base.classify(&cs[0]) {
                Classification::Unit(inv0) => {
                    let mut out = vec![base.zero(); *k];
                    out[0] = inv0.clone();
                    for t in 1..*k {
                        let mut s = base.zero();
                        for i in 1..=t {
                            s = base.add(&s, &base.mul(&cs[i], &out[t - i]));
                        }
                        out[t] = base.neg(&base.mul(&inv0, &s));
                    }
                    Classification::Unit(Elem::Dual(out))
                }
                Classification::Nilpotent(_) => {
                    let mut acc = a.clone();
                    let mut index = 1;
                    while !self.is_zero(&acc) {
                        acc = self.mul(&acc, a);
                        index += 1;
                    }
                    Classification::Nilpotent(index)
                }
                Classification::Other => Classification::Other,
            },
            _ => panic!("element does not belong to ring"),
        }
    }

    /// For a non-local `Z/m`, the prime-power moduli of its CRT components.
    pub fn crt_moduli(&self) -> Option<Vec<u64>> {
        match &self.kind {
            RingKind::IntegersMod { factors, .. } if factors.len() > 1 => {
                Some(factors.iter().map(|&(p, e)| pow_u64(p, e)).collect())
            }
            _ => None,
        }
    }

    /// Reduce a residue of this `Z/m` modulo a divisor `q`.
    pub fn project(&self, a: &Elem, q: u64) -> Elem {
        match a {
            Elem::Res(x) => Elem::Res(x % q),
            _ => panic!("projection is only defined for residues"),
        }
    }

    /// Chinese-remainder lift of component residues (ordered as [`Ring::crt_moduli`]).
    pub fn crt_lift(&self, parts: &[Elem]) -> Elem {
        let m = self.modulus().expect("CRT lift over Z/m");
        let moduli = self.crt_moduli().expect("CRT lift over composite Z/m");
        let mut acc = 0u64;
        for (part, &q) in parts.iter().zip(&moduli) {
            let Elem::Res(r) = part else {
                panic!("CRT components are residues")
            };
            let cofactor = m / q;
            let inv = inv_mod(cofactor % q, q).expect("coprime components");
            let basis = mul_mod(cofactor, inv, m);
            acc = add_mod(acc, mul_mod(basis, *r, m), m);
        }
        Elem::Res(acc)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &self.kind {
            RingKind::Rationals => {
                let n: i64 = rng.gen_range(-6..=6);
                let d: i64 = rng.gen_range(1..=4);
                Elem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            RingKind::PrimeField { .. } | RingKind::IntegersMod { .. } => {
                Elem::Res(rng.gen_range(0..self.modulus().unwrap()))
            }
            RingKind::DualExtension { base, k } => {
                Elem::Dual((0..*k).map(|_| base.random(rng)).collect())
            }
        }
    }

    /// Uniform-ish random element of the nilradical.
    pub fn random_nilpotent<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &self.kind {
            RingKind::Rationals | RingKind::PrimeField { .. } => self.zero(),
            RingKind::IntegersMod { m, factors } => {
                let rad: u64 = factors.iter().map(|&(p, _)| p).product();
                Elem::Res(rad * rng.gen_range(0..m / rad) % m)
            }
            RingKind::DualExtension { base, k } => {
                let mut cs = vec![base.random_nilpotent(rng)];
                cs.extend((1..*k).map(|_| base.random(rng)));
                Elem::Dual(cs)
            }
        }
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let a = self.random(rng);
            if matches!(self.classify(&a), Classification::Unit(_)) {
                return a;
            }
        }
    }

    pub fn random_nonzero_nilpotent<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Elem> {
        if self.nilradical_exponent == 1 {
            return None;
        }
        loop {
            let a = self.random_nilpotent(rng);
            if !self.is_zero(&a) {
                return Some(a);
            }
        }
    }
}

/// An element paired with its ring, for checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    pub ring: Ring,
    pub value: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithOutput {
    Element(RingElement),
    Bool(bool),
}

impl RingElement {
    pub fn new(ring: Ring, value: Elem) -> Result<RingElement> {
        if !ring.contains(&value) {
            return Err(Error::MixedRings);
        }
        Ok(RingElement { ring, value })
    }

    pub fn from_i64(ring: &Ring, v: i64) -> RingElement {
        RingElement {
            value: ring.from_i64(v),
            ring: ring.clone(),
        }
    }

    pub fn rational(n: i64, d: i64) -> RingElement {
        RingElement {
            ring: Ring::rationals(),
            value: Elem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn classify(&self) -> Classification {
        self.ring.classify(&self.value)
    }
}

/// Checked binary arithmetic. `Neg` ignores `b` beyond the ring check.
pub fn ring_arith(a: &RingElement, b: &RingElement, op: ArithOp) -> Result<ArithOutput> {
    if a.ring != b.ring {
        return Err(Error::MixedRings);
    }
    let ring = &a.ring;
    let value = match op {
        ArithOp::Add => ring.add(&a.value, &b.value),
        ArithOp::Mul => ring.mul(&a.value, &b.value),
        ArithOp::Neg => ring.neg(&a.value),
        ArithOp::Eq => return Ok(ArithOutput::Bool(a.value == b.value)),
    };
    Ok(ArithOutput::Element(RingElement {
        ring: ring.clone(),
        value,
    }))
}

pub fn classify_element(a: &RingElement) -> Classification {
    a.classify()
}

/// Parse `"a/b"` or `"a"` into a normalized rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.denom().is_negative() {
        format!("{}/{}", -q.numer(), -q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
