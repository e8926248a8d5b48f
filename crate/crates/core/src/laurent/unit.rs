//! Unit detection and inversion in `R((z))` and in the approximation ring `B`.
//!
//! A Laurent polynomial `f` whose coefficients below some degree `j` are all
//! nilpotent, and whose degree-`j` coefficient is a unit, splits as
//! `f = -N + Q` with `N` nilpotent. The identity
//! `(-N + Q)(N^(i-1) + N^(i-2)Q + … + Q^(i-1)) = Q^i - N^i` with `N^i = 0`
//! reduces inversion to `Q^i`, whose lowest coefficient is a unit, so that
//! `z^(-j·i)·Q^i` is an admissible denominator.

use crate::error::{Error, Result};
use crate::ring::{Classification, Ring};

use super::{BFraction, LaurentPoly, TruncatedSeries};

/// Certified split `f = -N + Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitWitness {
    /// Lowest represented degree carrying a unit coefficient.
    pub j: i64,
    /// Negated part of `f` below degree `j`; all coefficients nilpotent.
    pub n: LaurentPoly,
    /// Part of `f` from degree `j` on; its degree-`j` coefficient is a unit.
    pub q: TruncatedSeries,
}

/// Unit witness for one CRT component `Z/q` of a non-local `Z/m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentWitness {
    pub modulus: u64,
    pub witness: UnitWitness,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UnitCertificate {
    Local(UnitWitness),
    Componentwise(Vec<ComponentWitness>),
}

/// `f^index = 0` (in the named CRT component, if any).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyCertificate {
    pub index: u32,
    pub component: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UnitClass {
    Unit(UnitCertificate),
    NotUnit(NilpotencyCertificate),
    /// No unit coefficient inside the window; the value is known up to `O(z^known_to)`.
    Undecidable {
        known_to: i64,
    },
}

impl UnitClass {
    pub fn is_unit(&self) -> bool {
        matches!(self, UnitClass::Unit(_))
    }
}

fn nilpotency_index(p: &LaurentPoly) -> u32 {
    let bound = p.ring().nilradical_exponent();
    let mut acc = p.clone();
    let mut index = 1;
    while !acc.is_zero() && index <= bound {
        acc = acc.mul(p);
        index += 1;
    }
    index
}

fn classify_local(f: &TruncatedSeries) -> Result<UnitClass> {
    let ring = f.ring();
    for (i, c) in f.coeffs().iter().enumerate() {
        let d = f.val_floor() + i as i64;
        match ring.classify(c) {
            Classification::Unit(_) => {
                let poly = f.to_poly();
                let n = poly.truncate_below(d).neg();
                let q = match f.prec() {
                    None => poly.split_at(d).1.to_series(),
                    Some(p) => TruncatedSeries::truncated(ring, d, f.coeffs()[i..].to_vec(), p),
                };
                return Ok(UnitClass::Unit(UnitCertificate::Local(UnitWitness {
                    j: d,
                    n,
                    q,
                })));
            }
            Classification::Nilpotent(_) => {}
            Classification::Other => {
                return Err(Error::UnsupportedRing(format!(
                    "coefficient {c} at degree {d} is neither a unit nor nilpotent"
                )))
            }
        }
    }
    Ok(match f.prec() {
        None => UnitClass::NotUnit(NilpotencyCertificate {
            index: nilpotency_index(&f.to_poly()),
            component: None,
        }),
        Some(p) => UnitClass::Undecidable { known_to: p },
    })
}

fn component_rings(ring: &Ring) -> Option<Vec<(u64, Ring)>> {
    ring.crt_moduli().map(|qs| {
        qs.into_iter()
            .map(|q| (q, Ring::integers_mod(q).expect("prime power modulus")))
            .collect()
    })
}

/// Decide whether `f` is a unit of `R((z))` from its represented coefficients.
///
/// Non-local `Z/m` is handled one CRT component at a time.
pub fn classify_series_unit(f: &TruncatedSeries) -> Result<UnitClass> {
    let ring = f.ring();
    let Some(components) = component_rings(ring) else {
        return classify_local(f);
    };
    let mut witnesses = Vec::new();
    let mut undecidable = None;
    for (q, ring_q) in components {
        let fq = f.map_ring(&ring_q, |c| ring.project(c, q));
        match classify_local(&fq)? {
            UnitClass::Unit(UnitCertificate::Local(witness)) => witnesses.push(ComponentWitness {
                modulus: q,
                witness,
            }),
            UnitClass::Unit(UnitCertificate::Componentwise(_)) => {
                unreachable!("prime-power components are local")
            }
            UnitClass::NotUnit(cert) => {
                return Ok(UnitClass::NotUnit(NilpotencyCertificate {
                    component: Some(q),
                    ..cert
                }))
            }
            UnitClass::Undecidable { known_to } => undecidable = Some(known_to),
        }
    }
    Ok(match undecidable {
        Some(known_to) => UnitClass::Undecidable { known_to },
        None => UnitClass::Unit(UnitCertificate::Componentwise(witnesses)),
    })
}

/// Telescoping inverse of `num/den` given a witness for `num`.
fn telescoping_inverse(den: &LaurentPoly, w: &UnitWitness) -> Result<BFraction> {
    let ring = den.ring();
    let q = w.q.to_poly();
    // smallest i with N^i = 0
    let mut n_pows = vec![LaurentPoly::one(ring)];
    while !n_pows.last().unwrap().is_zero() {
        if n_pows.len() as u32 > ring.nilradical_exponent() {
            return Err(Error::UnsupportedRing(
                "nilpotent part did not vanish".into(),
            ));
        }
        let next = n_pows.last().unwrap().mul(&w.n);
        n_pows.push(next);
    }
    let i = n_pows.len() - 1;
    let mut m = LaurentPoly::zero(ring);
    let mut q_pow = LaurentPoly::one(ring);
    for a in 0..i {
        m = m.add(&n_pows[i - 1 - a].mul(&q_pow));
        q_pow = q_pow.mul(&q);
    }
    let shift = -w.j * i as i64;
    BFraction::new(den.mul(&m).shift(shift), q_pow.shift(shift))
}

/// Inverse in `B` with the certificate used to build it.
pub fn invert_in_b_certified(f: &BFraction) -> Result<(BFraction, UnitCertificate)> {
    let ring = f.ring();
    let cert = match classify_series_unit(&f.num().to_series())? {
        UnitClass::Unit(cert) => cert,
        UnitClass::NotUnit(c) => {
            return Err(Error::NotAUnit(format!(
                "{f} is nilpotent (power {} vanishes)",
                c.index
            )))
        }
        UnitClass::Undecidable { .. } => unreachable!("exact input is always decidable"),
    };
    let inv = match &cert {
        UnitCertificate::Local(w) => telescoping_inverse(f.den(), w)?,
        UnitCertificate::Componentwise(parts) => {
            let mut nums = Vec::new();
            let mut dens = Vec::new();
            for part in parts {
                let ring_q = part.witness.q.ring().clone();
                let den_q = f.den().map_ring(&ring_q, |c| ring.project(c, part.modulus));
                let inv_q = telescoping_inverse(&den_q, &part.witness)?;
                nums.push(inv_q.num().clone());
                dens.push(inv_q.den().clone());
            }
            BFraction::new(crt_lift_poly(ring, &nums), crt_lift_poly(ring, &dens))?
        }
    };
    Ok((inv, cert))
}

fn crt_lift_poly(ring: &Ring, parts: &[LaurentPoly]) -> LaurentPoly {
    let lo = parts.iter().filter_map(|p| p.min_degree()).min();
    let hi = parts.iter().filter_map(|p| p.max_degree()).max();
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return LaurentPoly::zero(ring);
    };
    let coeffs = (lo..=hi)
        .map(|d| {
            let residues: Vec<_> = parts.iter().map(|p| p.coeff(d)).collect();
            ring.crt_lift(&residues)
        })
        .collect();
    LaurentPoly::from_coeffs(ring, lo, coeffs)
}

/// Inverse of a unit of `B`; `f · invert_in_b(f) = 1` exactly.
pub fn invert_in_b(f: &BFraction) -> Result<BFraction> {
    invert_in_b_certified(f).map(|(inv, _)| inv)
}

/// Inverse of a power series with unit constant term, to `O(z^prec)`.
pub fn invert_series_unit(f: &TruncatedSeries, prec: i64) -> Result<TruncatedSeries> {
    let ring = f.ring();
    if let Some(v) = f.valuation() {
        if v < 0 {
            return Err(Error::NotAUnit(format!(
                "{f} has a term of negative degree {v}; not a power series"
            )));
        }
    }
    let Some(c0) = f.coeff(0) else {
        return Err(Error::Undecidable(format!(
            "constant term of {f} is unknown"
        )));
    };
    let Classification::Unit(u) = ring.classify(&c0) else {
        return Err(Error::NotAUnit(format!(
            "constant term {c0} of {f} is not a unit"
        )));
    };
    let prec = f.prec().map_or(prec, |p| p.min(prec));
    if prec <= 0 {
        return Ok(TruncatedSeries::big_o(ring, prec));
    }
    let len = prec as usize;
    let fc: Vec<_> = (0..prec).map(|d| f.coeff(d).unwrap()).collect();
    let mut out = Vec::with_capacity(len);
    out.push(u.clone());
    for t in 1..len {
        let mut s = ring.zero();
        for i in 1..=t {
            if !ring.is_zero(&fc[i]) {
                s = ring.add(&s, &ring.mul(&fc[i], &out[t - i]));
            }
        }
        out.push(ring.neg(&ring.mul(&u, &s)));
    }
    Ok(TruncatedSeries::truncated(ring, 0, out, prec))
}

/// Inverse of a unit of `R((z))` known on a window.
///
/// Exact inputs are inverted in `B` and expanded to `O(z^prec)`. For a window
/// `f = p + O(z^P)` the inverse of `p` has valuation `v`, and
/// `f⁻¹ = p⁻¹ + O(z^(P + 2v))` provided `P + v > 0`.
pub fn invert_truncated_unit(f: &TruncatedSeries, prec: i64) -> Result<TruncatedSeries> {
    let p = BFraction::from_poly(f.to_poly());
    match classify_series_unit(f)? {
        UnitClass::Unit(_) => {}
        UnitClass::NotUnit(_) => return Err(Error::NotAUnit(format!("{f} is nilpotent"))),
        UnitClass::Undecidable { known_to } => {
            return Err(Error::Undecidable(format!(
                "no unit coefficient below degree {known_to}"
            )))
        }
    }
    let inv = invert_in_b(&p)?;
    let Some(known) = f.prec() else {
        return Ok(inv.expand(prec));
    };
    let v = inv.valuation().expect("inverse of a unit is nonzero");
    if known + v <= 0 {
        return Err(Error::Undecidable(format!(
            "window O(z^{known}) too short to invert a series of valuation {}",
            -v
        )));
    }
    Ok(inv.expand((known + 2 * v).min(prec)))
}
