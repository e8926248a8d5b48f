//! Square matrices over the series representations.

use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::{BFraction, LaurentPoly, TruncatedSeries};
use crate::ring::Ring;

/// Arithmetic needed from a matrix entry.
pub trait Entry: Clone + fmt::Debug + fmt::Display {
    fn ring(&self) -> &Ring;
    fn zero(ring: &Ring) -> Self;
    fn one(ring: &Ring) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_exact_zero(&self) -> bool;
    /// View as a series; exact kinds are expanded to at least `O(z^prec)`.
    fn to_series(&self, prec: i64) -> TruncatedSeries;
}

impl Entry for LaurentPoly {
    fn ring(&self) -> &Ring {
        LaurentPoly::ring(self)
    }
    fn zero(ring: &Ring) -> Self {
        LaurentPoly::zero(ring)
    }
    fn one(ring: &Ring) -> Self {
        LaurentPoly::one(ring)
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LaurentPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn to_series(&self, _prec: i64) -> TruncatedSeries {
        LaurentPoly::to_series(self)
    }
}

impl Entry for TruncatedSeries {
    fn ring(&self) -> &Ring {
        TruncatedSeries::ring(self)
    }
    fn zero(ring: &Ring) -> Self {
        TruncatedSeries::zero(ring)
    }
    fn one(ring: &Ring) -> Self {
        TruncatedSeries::one(ring)
    }
    fn add(&self, other: &Self) -> Self {
        TruncatedSeries::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        TruncatedSeries::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        TruncatedSeries::mul(self, other)
    }
    fn neg(&self) -> Self {
        TruncatedSeries::neg(self)
    }
    fn is_exact_zero(&self) -> bool {
        TruncatedSeries::is_exact_zero(self)
    }
    fn to_series(&self, _prec: i64) -> TruncatedSeries {
        self.clone()
    }
}

impl Entry for BFraction {
    fn ring(&self) -> &Ring {
        BFraction::ring(self)
    }
    fn zero(ring: &Ring) -> Self {
        BFraction::zero(ring)
    }
    fn one(ring: &Ring) -> Self {
        BFraction::one(ring)
    }
    fn add(&self, other: &Self) -> Self {
        BFraction::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        BFraction::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        BFraction::mul(self, other)
    }
    fn neg(&self) -> Self {
        BFraction::neg(self)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn to_series(&self, prec: i64) -> TruncatedSeries {
        match self.as_poly() {
            Some(p) => p.to_series(),
            None => self.expand(prec),
        }
    }
}

/// Dense row-major `n × n` matrix whose entries share one ring.
#[derive(Clone, Debug)]
pub struct Matrix<E> {
    ring: Ring,
    n: usize,
    entries: Vec<E>,
}

pub type PolyMatrix = Matrix<LaurentPoly>;
pub type SeriesMatrix = Matrix<TruncatedSeries>;
pub type FractionMatrix = Matrix<BFraction>;

impl<E: Entry> Matrix<E> {
    pub fn new(ring: &Ring, n: usize, entries: Vec<E>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Schema("matrix must have positive size".into()));
        }
        if entries.len() != n * n {
            return Err(Error::Schema(format!(
                "expected {} entries for a {n}×{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(Error::MixedRings);
        }
        Ok(Matrix {
            ring: ring.clone(),
            n,
            entries,
        })
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<E>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Schema("matrix must be square".into()));
        }
        Self::new(ring, n, rows.into_iter().flatten().collect())
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::diagonal(ring, (0..n).map(|_| E::one(ring)).collect())
    }

    pub fn diagonal(ring: &Ring, diag: Vec<E>) -> Self {
        let n = diag.len();
        let mut entries: Vec<E> = (0..n * n).map(|_| E::zero(ring)).collect();
        for (i, d) in diag.into_iter().enumerate() {
            entries[i * n + i] = d;
        }
        Matrix {
            ring: ring.clone(),
            n,
            entries,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: E) {
        self.entries[i * self.n + j] = e;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[E]> {
        self.entries.chunks(self.n)
    }

    pub fn map<F: Entry>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix {
            ring: self.ring.clone(),
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = E::zero(&self.ring);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                entries.push(acc);
            }
        }
        Matrix {
            ring: self.ring.clone(),
            n,
            entries,
        }
    }

    pub fn scale(&self, c: &E) -> Self {
        self.map(|e| c.mul(e))
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut out = Self::diagonal(&self.ring, (0..n).map(|_| E::zero(&self.ring)).collect());
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                out.set(self.n + i, self.n + j, other.get(i, j).clone());
            }
        }
        out
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> E {
        match rows.len() {
            0 => E::one(&self.ring),
            1 => self.get(rows[0], cols[0]).clone(),
            _ => {
                let r = rows[0];
                let sub_rows = &rows[1..];
                let mut acc = E::zero(&self.ring);
                for (idx, &c) in cols.iter().enumerate() {
                    let a = self.get(r, c);
                    if a.is_exact_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = a.mul(&self.minor_det(sub_rows, &sub_cols));
                    acc = if idx % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }

    /// Determinant of the `k × k` submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> E {
        self.minor_det(rows, cols)
    }

    /// Determinant by cofactor expansion.
    pub fn det(&self) -> E {
        let all: Vec<usize> = (0..self.n).collect();
        self.minor_det(&all, &all)
    }

    /// Adjugate: `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(&self.ring, 1);
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // cofactor of (j, i)
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let m = self.minor_det(&rows, &cols);
                entries.push(if (i + j) % 2 == 0 { m } else { m.neg() });
            }
        }
        Matrix {
            ring: self.ring.clone(),
            n,
            entries,
        }
    }

    pub fn det_adj(&self) -> (E, Self) {
        (self.det(), self.adjugate())
    }

    pub fn to_series(&self, prec: i64) -> SeriesMatrix {
        self.map(|e| e.to_series(prec))
    }
}

impl<E: PartialEq> PartialEq for Matrix<E> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

impl<E: Entry> fmt::Display for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl SeriesMatrix {
    /// Smallest precision among the entries (`None` if all exact).
    pub fn prec(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.prec()).min()
    }

    pub fn truncate(&self, p: i64) -> Self {
        self.map(|e| e.truncate(p))
    }

    /// Entrywise agreement below `upto` and below every entry precision.
    pub fn agrees_below(&self, other: &Self, upto: i64) -> bool {
        self.n == other.n
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.agrees_below(b, upto))
    }
}

impl PolyMatrix {
    pub fn from_i64_rows(ring: &Ring, rows: &[&[(i64, &[i64])]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(lo, cs)| LaurentPoly::from_i64s(ring, *lo, cs))
                    .collect()
            })
            .collect();
        Self::from_rows(ring, rows).expect("square literal matrix")
    }
}

/// A matrix over any one of the three entry kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum MatLaurent {
    Poly(PolyMatrix),
    Series(SeriesMatrix),
    Fraction(FractionMatrix),
}

impl MatLaurent {
    pub fn ring(&self) -> &Ring {
        match self {
            MatLaurent::Poly(m) => m.ring(),
            MatLaurent::Series(m) => m.ring(),
            MatLaurent::Fraction(m) => m.ring(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            MatLaurent::Poly(m) => m.n(),
            MatLaurent::Series(m) => m.n(),
            MatLaurent::Fraction(m) => m.n(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            MatLaurent::Series(m) => m.entries().iter().all(|e| e.is_exact()),
            _ => true,
        }
    }

    /// Exact view over `B`, when every entry is exact.
    pub fn to_fraction(&self) -> Option<FractionMatrix> {
        match self {
            MatLaurent::Poly(m) => Some(m.map(|e| BFraction::from_poly(e.clone()))),
            MatLaurent::Fraction(m) => Some(m.clone()),
            MatLaurent::Series(m) if self.is_exact() => {
                Some(m.map(|e| BFraction::from_poly(e.to_poly())))
            }
            MatLaurent::Series(_) => None,
        }
    }

    /// Series view; truncated entries are cut to `prec`, fractions expanded to it.
    pub fn to_series(&self, prec: i64) -> SeriesMatrix {
        match self {
            MatLaurent::Poly(m) => m.to_series(prec),
            MatLaurent::Series(m) => m.truncate(prec),
            MatLaurent::Fraction(m) => m.to_series(prec),
        }
    }
}
