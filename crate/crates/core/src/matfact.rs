//! Factorization `γ = g·δ` of invertible Laurent-series matrices, membership
//! in `GL_n(R[[z]])`, Cartan type over a field, and coset equality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laurent::{
    classify_series_unit, invert_in_b, invert_in_b_certified, invert_truncated_unit, BFraction,
    LaurentPoly, TruncatedSeries, UnitCertificate, UnitClass,
};
use crate::matrix::{Entry, FractionMatrix, MatLaurent, Matrix, PolyMatrix, SeriesMatrix};
use crate::ring::{Classification, Elem, Ring};

/// `γ = g·δ` with `g` over `B` and `δ` a unit of `Mat_n(R[[z]])`.
#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub g: FractionMatrix,
    pub delta: SeriesMatrix,
    /// Precision to which `δ` is known.
    pub prec: i64,
    pub det_g: UnitCertificate,
    /// Inverse of the constant term of `det δ`.
    pub det_delta_const_inverse: Elem,
    pub truncation_order: i64,
}

impl FactorizationResult {
    /// `g·δ` as a windowed series matrix.
    pub fn product(&self) -> SeriesMatrix {
        let g = self.g.to_series(self.prec + self.delta_window_margin());
        g.mul(&self.delta)
    }

    fn delta_window_margin(&self) -> i64 {
        // g expansions only need to cover the window of δ shifted by val(g)
        self.g
            .entries()
            .iter()
            .filter_map(|e| e.valuation())
            .map(|v| v.abs())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonMembership {
    /// Entry `(row, col)` has a nonzero term of negative degree.
    NegativeDegree { row: usize, col: usize, degree: i64 },
    /// `det(M)(0)` is not a unit.
    DetConstantNotUnit { constant: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes { det_const_inverse: Elem },
    No(NonMembership),
    Undecidable(String),
}

/// Is `m` in `GL_n(R[[z]])`?
pub fn membership_gl_power_series<E: Entry>(m: &Matrix<E>) -> Membership {
    let series: Vec<TruncatedSeries> = m.entries().iter().map(|e| e.to_series(1)).collect();
    let n = m.n();
    for (idx, s) in series.iter().enumerate() {
        if let Some(v) = s.valuation() {
            if v < 0 {
                return Membership::No(NonMembership::NegativeDegree {
                    row: idx / n,
                    col: idx % n,
                    degree: v,
                });
            }
        }
    }
    if let Some((idx, p)) = series
        .iter()
        .enumerate()
        .find_map(|(i, s)| s.prec().filter(|&p| p <= 0).map(|p| (i, p)))
    {
        return Membership::Undecidable(format!(
            "entry ({}, {}) is only known to O(z^{p})",
            idx / n,
            idx % n
        ));
    }
    let det = m.det().to_series(1);
    match det.coeff(0) {
        None => Membership::Undecidable("constant term of the determinant is unknown".into()),
        Some(c) => match m.ring().classify(&c) {
            Classification::Unit(inv) => Membership::Yes {
                det_const_inverse: inv,
            },
            _ => Membership::No(NonMembership::DetConstantNotUnit { constant: c }),
        },
    }
}

/// Factor `γ = g·δ` by truncating `γ` at increasing orders `T`.
///
/// For each `T`, `g_T` keeps the terms of degree `< T`. When `det g_T` is a
/// unit of `B`, `δ = g_T⁻¹·γ` is formed and accepted if it has no negative
/// terms and a unit constant determinant. The search starts at
/// `T = max(val + 1, 1)` so that constant terms are always part of `g`.
pub fn factorize_gdelta(gamma: &SeriesMatrix, prec: i64) -> Result<FactorizationResult> {
    let n = gamma.n();
    if let Some(p) = gamma.prec() {
        if p < prec {
            return Err(Error::Schema(format!(
                "entries are known only to O(z^{p}), below the requested precision {prec}"
            )));
        }
    }
    if let UnitClass::NotUnit(c) = classify_series_unit(&gamma.det())? {
        return Err(Error::NotInvertible(format!(
            "determinant is nilpotent (power {} vanishes)",
            c.index
        )));
    }
    let gamma = gamma.truncate(prec);
    let vmin = gamma
        .entries()
        .iter()
        .filter_map(|e| e.valuation())
        .min()
        .unwrap_or(prec);
    // lowest valuation in each row of γ, used to size the expansions of g⁻¹
    let row_val: Vec<i64> = (0..n)
        .map(|k| {
            (0..n)
                .filter_map(|j| gamma.get(k, j).val_lower_bound())
                .min()
                .unwrap_or(prec)
        })
        .collect();

    let mut failure = String::from("no truncation order was tried");
    for t in (vmin + 1).max(1)..=prec {
        let g_poly: PolyMatrix = gamma.map(|e| e.poly_below(t));
        let (det_g, adj_g) = g_poly.det_adj();
        let det_frac = BFraction::from_poly(det_g.clone());
        match classify_series_unit(&det_g.to_series())? {
            UnitClass::Unit(_) => {}
            _ => {
                failure = format!("det g_T = {det_g} is not a unit of B");
                continue;
            }
        }
        let (inv_det, cert) = invert_in_b_certified(&det_frac)?;
        let mut delta_entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = TruncatedSeries::zero(gamma.ring());
                for (k, &rv) in row_val.iter().enumerate() {
                    let a = adj_g.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let ginv = inv_det.mul_poly(a);
                    let v = ginv.valuation().unwrap();
                    let term = ginv.expand(prec + v - rv).mul(gamma.get(k, j));
                    acc = acc.add(&term);
                }
                delta_entries.push(acc);
            }
        }
        let delta = SeriesMatrix::new(gamma.ring(), n, delta_entries)?;
        let dprec = delta.prec().unwrap_or(prec);
        if let Some((d, _)) = delta
            .entries()
            .iter()
            .filter_map(|e| e.valuation().map(|v| (v, e)))
            .find(|(v, _)| *v < 0)
        {
            failure = format!("δ has a nonzero term of degree {d}");
            continue;
        }
        if dprec <= 0 {
            failure = format!("δ is only known to O(z^{dprec})");
            continue;
        }
        let delta = delta.map(|e| e.with_floor(0));
        let det_const_inv = match membership_gl_power_series(&delta) {
            Membership::Yes { det_const_inverse } => det_const_inverse,
            Membership::No(w) => {
                failure = format!("δ is not a power-series unit: {w:?}");
                continue;
            }
            Membership::Undecidable(why) => {
                failure = why;
                continue;
            }
        };
        return Ok(FactorizationResult {
            g: g_poly.map(|e| BFraction::from_poly(e.clone())),
            delta,
            prec: dprec,
            det_g: cert,
            det_delta_const_inverse: det_const_inv,
            truncation_order: t,
        });
    }
    Err(Error::PrecisionExhausted(format!(
        "no truncation order up to {prec} certified a factorization; last check: {failure}"
    )))
}

/// Sorted (descending) exponents of the Smith form over `k[z]` localized at `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanType(pub Vec<i64>);

/// Cartan type of an exact Laurent-polynomial matrix over a field.
///
/// Pivots on an entry of minimal valuation and clears its row and column with
/// multipliers of nonnegative valuation.
pub fn cartan_type(m: &PolyMatrix) -> Result<CartanType> {
    let ring = m.ring();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(
            "Cartan type is only computed over a field".into(),
        ));
    }
    let n = m.n();
    let mut a: Vec<Vec<BFraction>> = m
        .rows()
        .map(|r| r.iter().map(|e| BFraction::from_poly(e.clone())).collect())
        .collect();
    let mut exps = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| a[i][j].valuation().map(|v| (v, i, j)))
            .min();
        let Some((v, pi, pj)) = pivot else {
            return Err(Error::SingularMatrix);
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let p_inv = invert_in_b(&a[k][k])?;
        let (upper, lower) = a.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let factor = row[k].mul(&p_inv);
            for (x, y) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x = x.sub(&factor.mul(y));
            }
        }
        for j in k + 1..n {
            if a[k][j].is_zero() {
                continue;
            }
            let factor = p_inv.mul(&a[k][j]);
            for row in a.iter_mut().skip(k) {
                let t = row[k].mul(&factor);
                row[j] = row[j].sub(&t);
            }
        }
        exps.push(v);
    }
    exps.sort_unstable_by(|x, y| y.cmp(x));
    Ok(CartanType(exps))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetRelation {
    Equal,
    NotEqual(NonMembership),
    Undecidable(String),
}

fn check_invertible_exact(m: &FractionMatrix, label: &str) -> Result<BFraction> {
    let det = m.det();
    invert_in_b(&det).map_err(|e| match e {
        Error::NotAUnit(why) => Error::NotInvertible(format!("{label}: {why}")),
        other => other,
    })
}

/// Do `a` and `b` lie in the same left coset `γ·GL_n(R[[z]])`?
///
/// Exact inputs are decided exactly over `B`; otherwise `a⁻¹·b` is computed
/// to `O(z^prec)` and an undecidable window is reported as such.
pub fn coset_equal(a: &MatLaurent, b: &MatLaurent, prec: i64) -> Result<CosetRelation> {
    if a.ring() != b.ring() {
        return Err(Error::MixedRings);
    }
    if a.n() != b.n() {
        return Err(Error::Schema("matrices have different sizes".into()));
    }
    let verdict = |m: Membership| match m {
        Membership::Yes { .. } => CosetRelation::Equal,
        Membership::No(w) => CosetRelation::NotEqual(w),
        Membership::Undecidable(why) => CosetRelation::Undecidable(why),
    };
    if let (Some(fa), Some(fb)) = (a.to_fraction(), b.to_fraction()) {
        let inv_det = check_invertible_exact(&fa, "first matrix")?;
        check_invertible_exact(&fb, "second matrix")?;
        let a_inv = fa.adjugate().map(|e| e.mul(&inv_det));
        return Ok(verdict(membership_gl_power_series(&a_inv.mul(&fb))));
    }
    let sb = b.to_series(prec);
    if let UnitClass::NotUnit(_) = classify_series_unit(&sb.det())? {
        return Err(Error::NotInvertible(
            "second matrix has nilpotent determinant".into(),
        ));
    }
    if let Some(fa) = a.to_fraction() {
        // keep the exact side exact: invert over B, then expand far enough
        // that the product's precision is limited by b alone
        let inv_det = check_invertible_exact(&fa, "first matrix")?;
        let a_inv = fa.adjugate().map(|e| e.mul(&inv_det));
        let spread = |vals: Vec<i64>| vals.into_iter().map(i64::abs).max().unwrap_or(0);
        let b_low = spread(
            sb.entries()
                .iter()
                .filter_map(|e| e.val_lower_bound())
                .collect(),
        );
        let a_val = spread(
            a_inv
                .entries()
                .iter()
                .filter_map(|e| e.valuation())
                .collect(),
        );
        let expanded = a_inv.to_series(sb.prec().unwrap_or(prec) + b_low + a_val + 1);
        return Ok(verdict(membership_gl_power_series(&expanded.mul(&sb))));
    }
    let sa = a.to_series(prec);
    let (det_a, adj_a) = sa.det_adj();
    let inv_det = match invert_truncated_unit(&det_a, prec) {
        Ok(inv) => inv,
        Err(Error::NotAUnit(why)) => return Err(Error::NotInvertible(why)),
        Err(Error::Undecidable(why)) => return Ok(CosetRelation::Undecidable(why)),
        Err(e) => return Err(e),
    };
    let a_inv = adj_a.map(|e| e.mul(&inv_det));
    Ok(verdict(membership_gl_power_series(&a_inv.mul(&sb))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    PowerSeriesUnit,
    BMatrix,
    Product,
}

/// Seeded fixture from [`random_gl`].
#[derive(Clone, Debug)]
pub enum RandomGl {
    PowerSeriesUnit(SeriesMatrix),
    BMatrix(FractionMatrix),
    /// `γ = g₀·δ₀` on `γ`'s window.
    Product {
        gamma: SeriesMatrix,
        g0: FractionMatrix,
        delta0: SeriesMatrix,
    },
}

pub(crate) fn random_poly<R: Rng>(ring: &Ring, rng: &mut R, lo: i64, hi: i64) -> LaurentPoly {
    LaurentPoly::from_coeffs(ring, lo, (lo..=hi).map(|_| ring.random(rng)).collect())
}

/// Polynomial in `z` with unit constant term.
fn random_admissible<R: Rng>(ring: &Ring, rng: &mut R, deg: i64) -> LaurentPoly {
    let c = LaurentPoly::constant(ring, ring.random_unit(rng));
    if deg == 0 {
        return c;
    }
    c.add(&random_poly(ring, rng, 1, deg))
}

/// Elementary matrix `I + p·e_ij`.
pub(crate) fn elementary<E: Entry>(ring: &Ring, n: usize, i: usize, j: usize, p: E) -> Matrix<E> {
    let mut m = Matrix::identity(ring, n);
    m.set(i, j, p);
    m
}

pub(crate) fn random_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Random element of `GL_n(R[[z]])` known to `O(z^prec)`.
pub fn random_power_series_unit<R: Rng>(
    ring: &Ring,
    n: usize,
    rng: &mut R,
    prec: i64,
) -> SeriesMatrix {
    let diag = (0..n)
        .map(|_| {
            let (dn, dd) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let num = random_admissible(ring, rng, dn);
            let den = random_admissible(ring, rng, dd);
            BFraction::new(num, den)
                .expect("admissible denominator")
                .expand(prec)
        })
        .collect();
    let mut m = SeriesMatrix::diagonal(ring, diag);
    if n > 1 {
        for _ in 0..2 {
            let (i, j) = random_pair(rng, n);
            let p = random_poly(ring, rng, 0, 2).to_series();
            m = m.mul(&elementary(ring, n, i, j, p));
        }
    }
    m.truncate(prec)
}

/// Random element of `GL_n(B)`: elementary Laurent factors around a diagonal
/// of shifted units with nilpotent tails, times one fraction unit.
pub fn random_b_matrix<R: Rng>(ring: &Ring, n: usize, rng: &mut R) -> FractionMatrix {
    let diag = (0..n)
        .map(|_| {
            let k = rng.gen_range(-2..=2);
            let mut d = LaurentPoly::monomial(ring, k, ring.random_unit(rng));
            for lower in 1..=2 {
                if let Some(eps) = ring.random_nonzero_nilpotent(rng) {
                    d = d.add(&LaurentPoly::monomial(ring, k - lower, eps));
                }
            }
            if rng.gen_bool(0.5) {
                d = d.add(&LaurentPoly::monomial(ring, k + 1, ring.random(rng)));
            }
            BFraction::from_poly(d)
        })
        .collect();
    let mut m = FractionMatrix::diagonal(ring, diag);
    let unit_frac = BFraction::new(
        random_admissible(ring, rng, 1),
        random_admissible(ring, rng, 1),
    )
    .expect("admissible denominator");
    let scale_row = rng.gen_range(0..n);
    for j in 0..n {
        let e = m.get(scale_row, j).mul(&unit_frac);
        m.set(scale_row, j, e);
    }
    if n > 1 {
        for side in 0..2 {
            let (i, j) = random_pair(rng, n);
            let p = BFraction::from_poly(random_poly(ring, rng, -2, 1));
            let e = elementary(ring, n, i, j, p);
            m = if side == 0 { e.mul(&m) } else { m.mul(&e) };
        }
    }
    m
}

/// `γ = g₀·δ₀` known to `O(z^prec)`.
pub fn random_product<R: Rng>(
    ring: &Ring,
    n: usize,
    rng: &mut R,
    prec: i64,
) -> (SeriesMatrix, FractionMatrix, SeriesMatrix) {
    let g0 = random_b_matrix(ring, n, rng);
    let min_val = g0
        .entries()
        .iter()
        .filter_map(|e| e.valuation())
        .min()
        .unwrap_or(0);
    let delta0 = random_power_series_unit(ring, n, rng, prec - min_val.min(0));
    let gamma = g0.to_series(prec).mul(&delta0).truncate(prec);
    debug_assert!(gamma.prec().is_some_and(|p| p >= prec) || gamma.prec().is_none());
    (gamma, g0, delta0)
}

/// Deterministic fixture generator.
pub fn random_gl(
    ring: &Ring,
    n: usize,
    kind: RandomKind,
    seed: u64,
    prec: i64,
) -> Result<RandomGl> {
    if n == 0 {
        return Err(Error::Schema("rank must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        RandomKind::PowerSeriesUnit => {
            RandomGl::PowerSeriesUnit(random_power_series_unit(ring, n, &mut rng, prec))
        }
        RandomKind::BMatrix => RandomGl::BMatrix(random_b_matrix(ring, n, &mut rng)),
        RandomKind::Product => {
            let (gamma, g0, delta0) = random_product(ring, n, &mut rng, prec);
            RandomGl::Product { gamma, g0, delta0 }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ring: &Ring, v: i64, cs: &[i64], p: Option<i64>) -> TruncatedSeries {
        TruncatedSeries::from_i64s(ring, v, cs, p)
    }

    #[test]
    fn factorize_power_series_unit() {
        let q = Ring::rationals();
        let gamma = SeriesMatrix::new(&q, 1, vec![s(&q, 0, &[1, 1], Some(10))]).unwrap();
        let r = factorize_gdelta(&gamma, 10).unwrap();
        assert_eq!(r.truncation_order, 1);
        assert!(r.g.get(0, 0).as_poly().unwrap().is_one());
        assert_eq!(r.delta.get(0, 0), &s(&q, 0, &[1, 1], Some(10)));
    }

    #[test]
    fn factorize_geometric_tail() {
        let f5 = Ring::prime_field(5).unwrap();
        let gamma = SeriesMatrix::new(&f5, 1, vec![s(&f5, -1, &[1; 9], Some(8))]).unwrap();
        let r = factorize_gdelta(&gamma, 8).unwrap();
        assert_eq!(
            r.g.get(0, 0).as_poly().unwrap(),
            &LaurentPoly::from_i64s(&f5, -1, &[1, 1])
        );
        // δ = 1/(1 − z²); g⁻¹ has valuation 1, so δ is known one degree past γ
        assert_eq!(r.prec, 9);
        assert!(r
            .delta
            .get(0, 0)
            .agrees_below(&s(&f5, 0, &[1, 0, 1, 0, 1, 0, 1, 0, 1], None), 9));
        // oracle: g·δ reproduces γ on the window
        let back = r.product();
        assert!(back.agrees_below(&gamma, 8));
        assert!(back.prec().unwrap() >= 7);
    }

    #[test]
    fn factorize_exact_laurent_input() {
        let q = Ring::rationals();
        let gamma = SeriesMatrix::from_rows(
            &q,
            vec![
                vec![s(&q, -1, &[1], None), s(&q, 0, &[1], None)],
                vec![TruncatedSeries::zero(&q), s(&q, 1, &[1], None)],
            ],
        )
        .unwrap();
        let r = factorize_gdelta(&gamma, 8).unwrap();
        assert_eq!(r.truncation_order, 2);
        let g = r.g.map(|e| e.as_poly().unwrap().clone());
        assert_eq!(g, gamma.map(|e| e.to_poly()));
        assert!(r.delta.agrees_below(&SeriesMatrix::identity(&q, 2), 8));
    }

    #[test]
    fn factorize_rejects_nilpotent_det() {
        let z8 = Ring::integers_mod(8).unwrap();
        let gamma = SeriesMatrix::new(&z8, 1, vec![s(&z8, -1, &[2, 4], None)]).unwrap();
        assert!(matches!(
            factorize_gdelta(&gamma, 8),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn factorize_reports_exhaustion() {
        let f5 = Ring::prime_field(5).unwrap();
        // det known only as O(z^3) of zero: never certifies
        let gamma = SeriesMatrix::new(&f5, 1, vec![TruncatedSeries::big_o(&f5, 3)]).unwrap();
        match factorize_gdelta(&gamma, 3) {
            Err(Error::PrecisionExhausted(msg)) => assert!(msg.contains("3")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn factorize_with_nilpotent_tail() {
        let z8 = Ring::integers_mod(8).unwrap();
        // γ = (2z⁻² + z⁻¹)·(1 + z + z² + …)
        let g0 = LaurentPoly::from_i64s(&z8, -2, &[2, 1]);
        let geo = BFraction::new(
            LaurentPoly::one(&z8),
            LaurentPoly::from_i64s(&z8, 0, &[1, -1]),
        )
        .unwrap()
        .expand(12);
        let gamma = SeriesMatrix::new(&z8, 1, vec![g0.to_series().mul(&geo).truncate(10)]).unwrap();
        let r = factorize_gdelta(&gamma, 10).unwrap();
        assert!(r.product().agrees_below(&gamma, 10));
        assert!(matches!(
            membership_gl_power_series(&r.delta),
            Membership::Yes { .. }
        ));
    }

    #[test]
    fn membership_examples() {
        let q = Ring::rationals();
        assert!(matches!(
            membership_gl_power_series(&PolyMatrix::identity(&q, 2)),
            Membership::Yes { .. }
        ));
        assert_eq!(
            membership_gl_power_series(&PolyMatrix::from_i64_rows(&q, &[&[(-1, &[1])]])),
            Membership::No(NonMembership::NegativeDegree {
                row: 0,
                col: 0,
                degree: -1
            })
        );
        assert_eq!(
            membership_gl_power_series(&PolyMatrix::from_i64_rows(&q, &[&[(1, &[1])]])),
            Membership::No(NonMembership::DetConstantNotUnit { constant: q.zero() })
        );
        let short = SeriesMatrix::new(&q, 1, vec![s(&q, -3, &[0, 0], Some(-1))]).unwrap();
        assert!(matches!(
            membership_gl_power_series(&short),
            Membership::Undecidable(_)
        ));
    }

    /// Sum of the `k` smallest exponents equals the minimal valuation among
    /// `k × k` minors.
    fn cartan_by_minors(m: &PolyMatrix) -> Vec<i64> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            (0..n)
                .flat_map(|last| {
                    subsets(last, k - 1).into_iter().map(move |mut s| {
                        s.push(last);
                        s
                    })
                })
                .collect()
        }
        let n = m.n();
        let mut partial = vec![0i64];
        for k in 1..=n {
            let mut best: Option<i64> = None;
            for rows in subsets(n, k) {
                for cols in subsets(n, k) {
                    if let Some(v) = m.minor(&rows, &cols).min_degree() {
                        best = Some(best.map_or(v, |b| b.min(v)));
                    }
                }
            }
            partial.push(best.expect("nonsingular"));
        }
        let mut exps: Vec<i64> = partial.windows(2).map(|w| w[1] - w[0]).collect();
        exps.sort_unstable_by(|x, y| y.cmp(x));
        exps
    }

    #[test]
    fn cartan_examples() {
        let q = Ring::rationals();
        let d = PolyMatrix::from_i64_rows(&q, &[&[(2, &[1]), (0, &[])], &[(0, &[]), (-1, &[1])]]);
        assert_eq!(cartan_type(&d).unwrap(), CartanType(vec![2, -1]));

        let j = PolyMatrix::from_i64_rows(&q, &[&[(1, &[1]), (0, &[1])], &[(0, &[]), (1, &[1])]]);
        assert_eq!(cartan_type(&j).unwrap(), CartanType(vec![2, 0]));
        assert_eq!(cartan_by_minors(&j), vec![2, 0]);

        let a = PolyMatrix::from_i64_rows(&q, &[&[(0, &[1]), (1, &[1])], &[(0, &[]), (0, &[1])]]);
        let b = PolyMatrix::from_i64_rows(&q, &[&[(0, &[1]), (0, &[])], &[(3, &[1]), (0, &[1])]]);
        let m = a.mul(&d).mul(&b);
        assert_eq!(cartan_type(&m).unwrap(), CartanType(vec![2, -1]));
        assert_eq!(cartan_by_minors(&m), vec![2, -1]);
    }

    #[test]
    fn cartan_errors() {
        let q = Ring::rationals();
        let sing =
            PolyMatrix::from_i64_rows(&q, &[&[(0, &[1]), (0, &[1])], &[(0, &[1]), (0, &[1])]]);
        assert_eq!(cartan_type(&sing), Err(Error::SingularMatrix));
        let z8 = Ring::integers_mod(8).unwrap();
        assert!(matches!(
            cartan_type(&PolyMatrix::identity(&z8, 1)),
            Err(Error::UnsupportedRing(_))
        ));
    }

    #[test]
    fn cartan_matches_minor_oracle_on_random_matrices() {
        let f7 = Ring::prime_field(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=3);
            let entries: Vec<LaurentPoly> = (0..n * n)
                .map(|_| {
                    let lo = rng.gen_range(-2..=2);
                    let hi = lo + rng.gen_range(0..=2);
                    random_poly(&f7, &mut rng, lo, hi)
                })
                .collect();
            let m = PolyMatrix::new(&f7, n, entries).unwrap();
            if m.det().is_zero() {
                continue;
            }
            let c = cartan_type(&m).unwrap();
            assert_eq!(c.0, cartan_by_minors(&m));
            assert_eq!(c.0.iter().sum::<i64>(), m.det().min_degree().unwrap());
        }
    }

    #[test]
    fn coset_examples() {
        let q = Ring::rationals();
        let gamma =
            PolyMatrix::from_i64_rows(&q, &[&[(-1, &[1, 2]), (0, &[3])], &[(1, &[1]), (0, &[1])]]);
        let u =
            PolyMatrix::from_i64_rows(&q, &[&[(0, &[1]), (1, &[1])], &[(0, &[]), (0, &[1, 1])]]);
        assert_eq!(
            coset_equal(
                &MatLaurent::Poly(gamma.clone()),
                &MatLaurent::Poly(gamma.mul(&u)),
                10
            )
            .unwrap(),
            CosetRelation::Equal
        );
        let one = PolyMatrix::from_i64_rows(&q, &[&[(0, &[1])]]);
        let z = PolyMatrix::from_i64_rows(&q, &[&[(1, &[1])]]);
        assert!(matches!(
            coset_equal(&MatLaurent::Poly(one), &MatLaurent::Poly(z), 10).unwrap(),
            CosetRelation::NotEqual(_)
        ));
    }

    #[test]
    fn coset_of_jordan_and_diagonal_matches_explicit_quotient() {
        let q = Ring::rationals();
        let a = PolyMatrix::from_i64_rows(&q, &[&[(1, &[1]), (0, &[1])], &[(0, &[]), (1, &[1])]]);
        let b = PolyMatrix::from_i64_rows(&q, &[&[(2, &[1]), (0, &[])], &[(0, &[]), (0, &[1])]]);
        // explicit a⁻¹·b = [[z, −z⁻²], [0, z⁻¹]]
        let explicit =
            PolyMatrix::from_i64_rows(&q, &[&[(1, &[1]), (-2, &[-1])], &[(0, &[]), (-1, &[1])]]);
        let expected = match membership_gl_power_series(&explicit) {
            Membership::Yes { .. } => CosetRelation::Equal,
            Membership::No(w) => CosetRelation::NotEqual(w),
            Membership::Undecidable(w) => CosetRelation::Undecidable(w),
        };
        let got = coset_equal(
            &MatLaurent::Poly(a.clone()),
            &MatLaurent::Poly(b.clone()),
            12,
        )
        .unwrap();
        assert_eq!(got, expected);
        // the truncated route agrees
        let ta = MatLaurent::Series(a.to_series(12).truncate(12));
        let tb = MatLaurent::Series(b.to_series(12).truncate(12));
        assert_eq!(coset_equal(&ta, &tb, 12).unwrap(), expected);
    }

    #[test]
    fn coset_truncated_equal_and_shift() {
        let z8 = Ring::integers_mod(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (gamma, _, _) = random_product(&z8, 2, &mut rng, 32);
        let u = random_power_series_unit(&z8, 2, &mut rng, 32);
        let gu = gamma.mul(&u);
        assert_eq!(
            coset_equal(
                &MatLaurent::Series(gamma.clone()),
                &MatLaurent::Series(gu),
                32
            )
            .unwrap(),
            CosetRelation::Equal
        );
        let zg = gamma.map(|e| e.shift(1));
        assert!(matches!(
            coset_equal(&MatLaurent::Series(gamma), &MatLaurent::Series(zg), 32).unwrap(),
            CosetRelation::NotEqual(_)
        ));
    }

    #[test]
    fn random_fixtures_are_deterministic_and_certified() {
        let r = Ring::dual(Ring::prime_field(2).unwrap(), 2).unwrap();
        let a = random_gl(&r, 2, RandomKind::BMatrix, 9, 16).unwrap();
        let b = random_gl(&r, 2, RandomKind::BMatrix, 9, 16).unwrap();
        let (RandomGl::BMatrix(a), RandomGl::BMatrix(b)) = (a, b) else {
            panic!()
        };
        assert_eq!(a, b);
        assert!(invert_in_b(&a.det()).is_ok());

        let RandomGl::PowerSeriesUnit(u) =
            random_gl(&r, 1, RandomKind::PowerSeriesUnit, 3, 8).unwrap()
        else {
            panic!()
        };
        assert!(matches!(
            membership_gl_power_series(&u),
            Membership::Yes { .. }
        ));

        let RandomGl::Product { gamma, g0, delta0 } =
            random_gl(&r, 2, RandomKind::Product, 4, 16).unwrap()
        else {
            panic!()
        };
        assert_eq!(gamma.prec(), Some(16));
        assert!(g0.to_series(40).mul(&delta0).agrees_below(&gamma, 16));
    }
}
