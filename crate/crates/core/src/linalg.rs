//! Gaussian elimination over a field ring.

use crate::ring::{Elem, Ring};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(ring: &Ring, rows: &mut [Vec<Elem>], ncols: usize) -> Vec<usize> {
    debug_assert!(ring.is_field());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !ring.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = ring.inv(&rows[r][c]).expect("nonzero field element");
        for x in rows[r].iter_mut() {
            *x = ring.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || ring.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !ring.is_zero(y) {
                    *x = ring.sub(x, &ring.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(ring: &Ring, rows: &[Vec<Elem>], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(ring, &mut work, ncols).len()
}

/// Basis of `{x : A·x = 0}`.
pub fn nullspace(ring: &Ring, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut work = rows.to_vec();
    let pivots = rref(ring, &mut work, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![ring.zero(); ncols];
            v[free] = ring.one();
            for (row, &p) in work.iter().zip(&pivots) {
                v[p] = ring.neg(&row[free]);
            }
            v
        })
        .collect()
}
