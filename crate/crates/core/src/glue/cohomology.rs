//! Sections and H¹ over the standard two-chart atlas of P¹ over a field.
//!
//! Only transitions with Laurent-polynomial entries and monomial determinant
//! are accepted; those are exactly the matrices in `GL_n(k[z, 1/z])`.
//!
//! Both solvers use a-priori degree bounds from `g` and `g⁻¹`, then confirm
//! that the dimension stays put for two more increments.

use std::collections::HashMap;

use rand::Rng;

use super::TransitionDatum;
use crate::error::{Error, Result};
use crate::laurent::{BFraction, LaurentPoly};
use crate::linalg;
use crate::matfact::{elementary, random_pair, random_poly};
use crate::matrix::FractionMatrix;
use crate::ring::{Elem, Ring};

/// Largest linear system the solvers will build (number of unknowns).
const MAX_UNKNOWNS: usize = 4000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType(pub Vec<i64>);

impl SplittingType {
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// A global section: `s` in `z` near the point, `t` in `w = 1/z` away from it.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionPair {
    pub s: Vec<LaurentPoly>,
    pub t: Vec<LaurentPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionSpace {
    pub twist: i64,
    pub dimension: usize,
    pub basis: Vec<SectionPair>,
}

impl SectionSpace {
    /// Checks `t = z^(-m)·g·s` exactly for every basis pair.
    pub fn satisfies(&self, g: &TransitionDatum) -> bool {
        let Ok(c) = Chart::new(g) else {
            return false;
        };
        self.basis.iter().all(|p| {
            p.s.iter().all(|x| x.min_degree().is_none_or(|d| d >= 0))
                && p.t.iter().all(|x| x.min_degree().is_none_or(|d| d >= 0))
                && c.apply(&p.s, -self.twist) == p.t.iter().map(from_w).collect::<Vec<_>>()
        })
    }
}

/// `g` and `g⁻¹` as Laurent-polynomial matrices.
struct Chart {
    ring: Ring,
    n: usize,
    g: Vec<Vec<LaurentPoly>>,
    ginv: Vec<Vec<LaurentPoly>>,
    maxdeg_g: i64,
    maxdeg_ginv: i64,
    span: i64,
}

fn max_deg(m: &[Vec<LaurentPoly>]) -> i64 {
    m.iter()
        .flatten()
        .filter_map(|p| p.max_degree())
        .max()
        .unwrap_or(0)
}

fn min_deg(m: &[Vec<LaurentPoly>]) -> i64 {
    m.iter()
        .flatten()
        .filter_map(|p| p.min_degree())
        .min()
        .unwrap_or(0)
}

/// Re-read a polynomial in `w` as a Laurent polynomial in `z`.
fn from_w(p: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(p.ring(), p.terms().map(|(e, c)| (-e, c.clone())))
        .expect("terms from a valid polynomial")
}

impl Chart {
    fn new(t: &TransitionDatum) -> Result<Self> {
        let ring = t.ring().clone();
        if !ring.is_field() {
            return Err(Error::UnsupportedRing(
                "sections and cohomology are only computed over a field".into(),
            ));
        }
        let gm = t.matrix();
        let g: Vec<Vec<LaurentPoly>> = gm
            .rows()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        e.as_poly().cloned().ok_or_else(|| {
                            Error::UnsupportedTransition(format!(
                                "entry {e} has a denominator other than a power of z"
                            ))
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let poly = gm.map(|e| e.as_poly().expect("checked above").clone());
        let (det, adj) = poly.det_adj();
        if det.num_terms() != 1 {
            return Err(Error::UnsupportedTransition(format!(
                "det g = {det} is not a monomial, so g is not a two-chart transition"
            )));
        }
        let (v, c) = det
            .terms()
            .next()
            .map(|(e, c)| (e, c.clone()))
            .expect("one term");
        let scale = LaurentPoly::monomial(&ring, -v, ring.inv(&c).expect("nonzero in a field"));
        let ginv: Vec<Vec<LaurentPoly>> = adj
            .rows()
            .map(|r| r.iter().map(|e| e.mul(&scale)).collect())
            .collect();
        let (maxdeg_g, maxdeg_ginv) = (max_deg(&g), max_deg(&ginv));
        let span = maxdeg_g - min_deg(&g);
        Ok(Chart {
            ring,
            n: t.n(),
            g,
            ginv,
            maxdeg_g,
            maxdeg_ginv,
            span,
        })
    }

    /// `z^shift · g · s`.
    fn apply(&self, s: &[LaurentPoly], shift: i64) -> Vec<LaurentPoly> {
        self.g
            .iter()
            .map(|row| {
                row.iter()
                    .zip(s)
                    .fold(LaurentPoly::zero(&self.ring), |acc, (a, b)| {
                        acc.add(&a.mul(b))
                    })
                    .shift(shift)
            })
            .collect()
    }

    fn cap(&self, start: i64, m: i64) -> i64 {
        start + 2 + m.abs() + self.n as i64 * self.span + 4
    }

    fn check_size(&self, unknowns: usize) -> Result<()> {
        if unknowns > MAX_UNKNOWNS {
            return Err(Error::CapExceeded(format!(
                "linear system with {unknowns} unknowns exceeds the limit of {MAX_UNKNOWNS}"
            )));
        }
        Ok(())
    }

    /// Kernel of `s ↦ positive part of z^(-m)·g·s` on `s` of degree ≤ `d`.
    fn sections_upto(&self, m: i64, d: i64) -> Result<Vec<Vec<Elem>>> {
        let width = (d + 1) as usize;
        let ncols = self.n * width;
        self.check_size(ncols)?;
        let mut index: HashMap<(usize, i64), usize> = HashMap::new();
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for i in 0..self.n {
            for a in 0..width {
                let col = i * width + a;
                for (r, grow) in self.g.iter().enumerate() {
                    for (e, c) in grow[i].terms() {
                        let deg = e + a as i64 - m;
                        if deg <= 0 {
                            continue;
                        }
                        let k = *index.entry((r, deg)).or_insert_with(|| {
                            rows.push(vec![self.ring.zero(); ncols]);
                            rows.len() - 1
                        });
                        rows[k][col] = c.clone();
                    }
                }
            }
        }
        Ok(linalg::nullspace(&self.ring, &rows, ncols))
    }

    /// No section of `E(m)` has `s` of degree above this.
    fn section_bound(&self, m: i64) -> i64 {
        (m + self.maxdeg_ginv).max(0)
    }

    fn h0_with_degree(&self, m: i64) -> Result<(usize, i64)> {
        let start = self.section_bound(m);
        let cap = self.cap(start, m);
        stabilize(start, cap, |d| Ok(self.sections_upto(m, d)?.len()))
    }

    /// `n·W − rank` of the negative parts of `z^m·g⁻¹·t` truncated at `z^(-W)`.
    fn h1_window(&self, m: i64, w: i64) -> Result<usize> {
        let width = w as usize;
        let ncols = self.n * width;
        let top = (w + m + self.maxdeg_ginv).max(0);
        self.check_size(ncols.max(self.n * (top as usize + 1)))?;
        let mut rows = Vec::new();
        for i in 0..self.n {
            for e in 0..=top {
                let mut v = vec![self.ring.zero(); ncols];
                for (r, grow) in self.ginv.iter().enumerate() {
                    for (d, c) in grow[i].terms() {
                        let deg = d + m - e;
                        if (-w..0).contains(&deg) {
                            v[r * width + (-deg - 1) as usize] = c.clone();
                        }
                    }
                }
                rows.push(v);
            }
        }
        Ok(ncols - linalg::rank(&self.ring, &rows, ncols))
    }
}

/// Evaluates `f` at `start`, `start+1`, … until two consecutive increments
/// leave the value unchanged; returns the value and the degree it settled at.
fn stabilize(
    start: i64,
    cap: i64,
    mut f: impl FnMut(i64) -> Result<usize>,
) -> Result<(usize, i64)> {
    let mut at = start;
    let mut val = f(at)?;
    let mut same = 0;
    let mut d = start;
    while same < 2 {
        d += 1;
        if d > cap {
            return Err(Error::CapExceeded(format!(
                "dimension not stable by degree bound {cap}"
            )));
        }
        let next = f(d)?;
        if next == val {
            same += 1;
        } else {
            val = next;
            at = d;
            same = 0;
        }
    }
    Ok((val, at))
}

/// Global sections of `E(m)`.
pub fn global_sections(t: &TransitionDatum, m: i64) -> Result<SectionSpace> {
    let c = Chart::new(t)?;
    let (dimension, d) = c.h0_with_degree(m)?;
    let width = (d + 1) as usize;
    let basis = c
        .sections_upto(m, d)?
        .into_iter()
        .map(|v| {
            let s: Vec<LaurentPoly> = (0..c.n)
                .map(|i| {
                    LaurentPoly::from_coeffs(&c.ring, 0, v[i * width..(i + 1) * width].to_vec())
                })
                .collect();
            let t = c.apply(&s, -m).iter().map(from_w).collect();
            SectionPair { s, t }
        })
        .collect();
    Ok(SectionSpace {
        twist: m,
        dimension,
        basis,
    })
}

/// `dim H¹(E(m))`, computed through `g⁻¹` independently of the section solver.
pub fn cech_h1(t: &TransitionDatum, m: i64) -> Result<usize> {
    let c = Chart::new(t)?;
    // Monomials below z^(-W) with W ≥ maxdeg(g) − m are hit exactly.
    let start = (c.maxdeg_g - m - 1).max(1);
    let cap = c.cap(start, m);
    Ok(stabilize(start, cap, |w| c.h1_window(m, w))?.0)
}

/// Splitting type `(d₁ ≥ … ≥ d_n)` from the profile of `h⁰(E(m))`.
pub fn splitting_type(t: &TransitionDatum) -> Result<SplittingType> {
    let c = Chart::new(t)?;
    let n = c.n;
    // below this twist every section vanishes
    let first = -c.maxdeg_ginv - 1;
    // every d_i ≥ −maxdeg(g), so Δ reaches n by this twist
    let last = c.maxdeg_g.max(first) + 1;
    let (mut prev_h0, mut prev_delta) = (0usize, 0usize);
    let mut degrees = Vec::with_capacity(n);
    for m in first..=last {
        let h0 = c.h0_with_degree(m)?.0;
        if m == first && h0 != 0 {
            return Err(Error::CapExceeded(format!(
                "h⁰ does not vanish at twist {m}"
            )));
        }
        let delta = h0 - prev_h0;
        for _ in prev_delta..delta {
            degrees.push(-m);
        }
        if delta == n {
            degrees.sort_unstable_by(|a, b| b.cmp(a));
            return Ok(SplittingType(degrees));
        }
        prev_h0 = h0;
        prev_delta = delta;
    }
    Err(Error::CapExceeded(format!(
        "h⁰ profile did not reach rank {n} by twist {last}"
    )))
}

/// Random element of `GL_n(k[z, 1/z])`: scaled monomial diagonal times
/// elementary matrices with Laurent-polynomial entries.
pub fn random_laurent_transition<R: Rng>(ring: &Ring, n: usize, rng: &mut R) -> FractionMatrix {
    let diag = (0..n)
        .map(|_| {
            let d = rng.gen_range(-3..=3);
            BFraction::from_poly(LaurentPoly::monomial(ring, d, ring.random_unit(rng)))
        })
        .collect();
    let mut g = FractionMatrix::diagonal(ring, diag);
    if n > 1 {
        for k in 0..2 {
            let (i, j) = random_pair(rng, n);
            let lo = rng.gen_range(-2..=0);
            let hi = rng.gen_range(lo..=2);
            let e = elementary(
                ring,
                n,
                i,
                j,
                BFraction::from_poly(random_poly(ring, rng, lo, hi)),
            );
            g = if k % 2 == 0 { e.mul(&g) } else { g.mul(&e) };
        }
    }
    g
}

/// Random change of trivialization regular on one chart: invertible over
/// `k[z]` when `near`, over `k[w]` otherwise.
pub fn random_chart_change<R: Rng>(
    ring: &Ring,
    n: usize,
    rng: &mut R,
    near: bool,
) -> FractionMatrix {
    let diag = (0..n)
        .map(|_| BFraction::from_poly(LaurentPoly::constant(ring, ring.random_unit(rng))))
        .collect();
    let mut a = FractionMatrix::diagonal(ring, diag);
    if n > 1 {
        for _ in 0..2 {
            let (i, j) = random_pair(rng, n);
            let p = if near {
                random_poly(ring, rng, 0, 2)
            } else {
                random_poly(ring, rng, -2, 0)
            };
            a = a.mul(&elementary(ring, n, i, j, BFraction::from_poly(p)));
        }
    }
    a
}
