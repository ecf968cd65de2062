//! Exact integer linear algebra for full-rank sublattices of `Z^n`.
//!
//! All intermediate arithmetic is done in `i128` with overflow checks; the
//! final bases are narrowed to `i64` and rejected if they do not fit.

use crate::error::{Error, Result};

type Row = Vec<i128>;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a x + b y = g >= 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b)
        .ok_or(Error::Overflow("lattice arithmetic"))
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b)
        .ok_or(Error::Overflow("lattice arithmetic"))
}

/// `x * a + y * b`, entrywise.
fn combine(x: i128, a: &Row, y: i128, b: &Row) -> Result<Row> {
    a.iter()
        .zip(b)
        .map(|(&u, &v)| add(mul(x, u)?, mul(y, v)?))
        .collect()
}

/// Lower-triangular Hermite normal form of the lattice generated by `gens`
/// together with `modulus * e_i` for every `i`.
///
/// The result has a positive diagonal `d_j` dividing `modulus` and entries
/// left of the diagonal reduced into `[0, d_j)` of their column, so equal
/// lattices always produce identical rows.
pub fn hnf_with_modulus(n: usize, gens: &[Vec<i128>], modulus: i128) -> Result<Vec<Vec<i128>>> {
    assert!(modulus > 0);
    let mut work: Vec<Row> = gens
        .iter()
        .map(|g| g.iter().map(|c| c.rem_euclid(modulus)).collect())
        .collect();
    for i in 0..n {
        let mut r = vec![0; n];
        r[i] = modulus;
        work.push(r);
    }
    let mut pivots: Vec<Row> = vec![Vec::new(); n];
    for col in (0..n).rev() {
        let mut pivot: Option<Row> = None;
        let mut rest = Vec::with_capacity(work.len());
        for row in work.drain(..) {
            if row[col] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (a, b) = (p[col], row[col]);
                    let (g, x, y) = ext_gcd(a, b);
                    let mut new_p = combine(x, &p, y, &row)?;
                    let mut other = combine(b / g, &p, -(a / g), &row)?;
                    debug_assert_eq!(other[col], 0);
                    for (k, c) in new_p.iter_mut().enumerate() {
                        if k != col {
                            *c = c.rem_euclid(modulus);
                        }
                    }
                    for c in other.iter_mut() {
                        *c = c.rem_euclid(modulus);
                    }
                    pivot = Some(new_p);
                    if other.iter().any(|&c| c != 0) {
                        rest.push(other);
                    }
                }
            }
        }
        let mut p = pivot.expect("modulus * e_col always supplies a pivot");
        if p[col] < 0 {
            p.iter_mut().for_each(|c| *c = -*c);
            for (k, c) in p.iter_mut().enumerate() {
                if k != col {
                    *c = c.rem_euclid(modulus);
                }
            }
        }
        pivots[col] = p;
        work = rest;
    }
    reduce_lower_triangular(&mut pivots)?;
    Ok(pivots)
}

/// Reduces entries left of the diagonal into `[0, d_j)`.
fn reduce_lower_triangular(rows: &mut [Row]) -> Result<()> {
    let n = rows.len();
    for i in 0..n {
        for j in (0..i).rev() {
            let d = rows[j][j];
            let q = rows[i][j].div_euclid(d);
            if q != 0 {
                let pivot = rows[j].clone();
                for k in 0..=j {
                    rows[i][k] = add(rows[i][k], mul(-q, pivot[k])?)?;
                }
            }
        }
    }
    Ok(())
}

/// Basis, in lower-triangular Hermite normal form, of
/// `{x in Z^n : sum_i x_i * images[i][j] = 0 (mod factors[j]) for all j}`.
///
/// Works component by component: the current basis is rotated by
/// unimodular row operations until a single row carries a nonzero value in
/// the next cyclic factor, and that row is scaled to the factor's order.
pub fn kernel_hnf(images: &[Vec<u64>], factors: &[u64]) -> Result<Vec<Vec<i64>>> {
    let n = images.len();
    assert!(n >= 1, "kernel of a map from Z^0");
    let exponent = factors.iter().fold(1i128, |acc, &t| {
        let t = t as i128;
        let (g, _, _) = ext_gcd(acc, t);
        acc / g * t
    });
    let mut basis: Vec<Row> = (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect();
    for (j, &t) in factors.iter().enumerate() {
        let t = t as i128;
        let value = |row: &Row| -> Result<i128> {
            let mut acc = 0i128;
            for (x, img) in row.iter().zip(images) {
                acc = add(acc, mul(x.rem_euclid(t), img[j] as i128)?)?.rem_euclid(t);
            }
            Ok(acc)
        };
        let mut vals: Vec<i128> = basis.iter().map(&value).collect::<Result<_>>()?;
        let Some(p) = vals.iter().position(|&v| v != 0) else {
            continue;
        };
        for i in p + 1..n {
            if vals[i] == 0 {
                continue;
            }
            let (a, b) = (vals[p], vals[i]);
            let (g, x, y) = ext_gcd(a, b);
            let new_p = combine(x, &basis[p], y, &basis[i])?;
            let new_i = combine(b / g, &basis[p], -(a / g), &basis[i])?;
            basis[p] = new_p;
            basis[i] = new_i;
            vals[p] = g;
            vals[i] = 0;
        }
        let (g, _, _) = ext_gcd(vals[p], t);
        let scale = t / g;
        basis[p] = basis[p]
            .iter()
            .map(|&c| mul(c, scale))
            .collect::<Result<_>>()?;
        basis = hnf_with_modulus(n, &basis, exponent)?;
    }
    let hnf = hnf_with_modulus(n, &basis, exponent)?;
    hnf.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| i64::try_from(c).map_err(|_| Error::Overflow("kernel basis entry")))
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(rows: &[Vec<i64>]) -> Result<i128> {
    let n = rows.len();
    if n == 0 {
        return Ok(1);
    }
    let mut m: Vec<Row> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "determinant of a non-square matrix");
            r.iter().map(|&c| c as i128).collect()
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = mul(m[i][j], m[k][k])?
                    .checked_sub(mul(m[i][k], m[k][j])?)
                    .ok_or(Error::Overflow("determinant"))?;
                m[i][j] = v / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// `|det|` of a square matrix. Rows that have a single nonzero entry among
/// the not yet eliminated columns are peeled off one at a time (Laplace
/// expansion along that row); matrices that are triangular up to row and
/// column permutations are finished in time linear in their nonzeros.
/// Anything left over falls back to [`determinant`].
pub fn abs_determinant(rows: &[Vec<i64>]) -> Result<u128> {
    let n = rows.len();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.len(), n, "determinant of a non-square matrix");
        for (c, &v) in r.iter().enumerate() {
            if v != 0 {
                col_rows[c].push(i);
                counts[i] += 1;
            }
        }
    }
    if counts.contains(&0) {
        return Ok(0);
    }
    let mut row_done = vec![false; n];
    let mut col_done = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&i| counts[i] == 1).collect();
    let mut det: u128 = 1;
    let mut peeled = 0;
    while let Some(i) = queue.pop() {
        if row_done[i] || counts[i] != 1 {
            continue;
        }
        let c = (0..n)
            .find(|&c| !col_done[c] && rows[i][c] != 0)
            .expect("row count tracks live nonzeros");
        det = det
            .checked_mul(rows[i][c].unsigned_abs() as u128)
            .ok_or(Error::Overflow("determinant"))?;
        row_done[i] = true;
        col_done[c] = true;
        peeled += 1;
        for &r in &col_rows[c] {
            if !row_done[r] {
                counts[r] -= 1;
                match counts[r] {
                    0 => return Ok(0),
                    1 => queue.push(r),
                    _ => {}
                }
            }
        }
    }
    if peeled == n {
        return Ok(det);
    }
    let rest_rows: Vec<usize> = (0..n).filter(|&i| !row_done[i]).collect();
    let rest_cols: Vec<usize> = (0..n).filter(|&c| !col_done[c]).collect();
    let minor: Vec<Vec<i64>> = rest_rows
        .iter()
        .map(|&i| rest_cols.iter().map(|&c| rows[i][c]).collect())
        .collect();
    det.checked_mul(determinant(&minor)?.unsigned_abs())
        .ok_or(Error::Overflow("determinant"))
}
