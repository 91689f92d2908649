//! Dense exact linear algebra over `Q(theta)`.

use crate::error::{Error, Result};
use crate::exactfield::{ExactScalar, Field};

pub type Matrix = Vec<Vec<ExactScalar>>;

/// Solves `a x = b` by fraction-free (Bareiss) elimination followed by back substitution.
pub fn bareiss_solve(a: &[Vec<ExactScalar>], b: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Singular(format!("system is not square ({n} rows)")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let field = b[0].field().clone();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut prev = ExactScalar::one(&field);
    for k in 0..n {
        let p = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| Error::Singular(format!("no pivot in column {}", k + 1)))?;
        m.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.checked_div(&prev)?;
            }
            m[i][k] = ExactScalar::zero(&field);
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![ExactScalar::zero(&field); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                acc -= &(&m[i][j] * &x[j]);
            }
        }
        x[i] = acc.checked_div(&m[i][i])?;
    }
    Ok(x)
}

/// Inverse by Gauss-Jordan elimination.
pub fn inverse(a: &[Vec<ExactScalar>], field: &Field) -> Result<Matrix> {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut inv: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ExactScalar::one(field) } else { ExactScalar::zero(field) })
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| Error::Singular(format!("no pivot in column {}", k + 1)))?;
        m.swap(k, p);
        inv.swap(k, p);
        let piv = m[k][k].inverse()?;
        if !piv.is_one() {
            for x in m[k].iter_mut().chain(inv[k].iter_mut()) {
                if !x.is_zero() {
                    *x = &*x * &piv;
                }
            }
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..n {
                if !m[k][j].is_zero() {
                    let d = &f * &m[k][j];
                    m[i][j] -= &d;
                }
                if !inv[k][j].is_zero() {
                    let d = &f * &inv[k][j];
                    inv[i][j] -= &d;
                }
            }
        }
    }
    Ok(inv)
}

/// Rank of a list of row vectors.
pub fn rank(rows: &[Vec<ExactScalar>]) -> usize {
    let mut m: Matrix = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..cols {
                let d = &f * &m[r][j];
                m[i][j] -= &d;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Basis of `{x : a x = 0}` from the reduced row echelon form, one vector per free column
/// with that column set to 1.
pub fn nullspace(a: &[Vec<ExactScalar>], field: &Field) -> Vec<Vec<ExactScalar>> {
    let mut m: Matrix = a.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![ExactScalar::zero(field); cols];
            v[free] = ExactScalar::one(field);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[row][free];
            }
            v
        })
        .collect()
}

pub fn dot(a: &[ExactScalar], b: &[ExactScalar], field: &Field) -> ExactScalar {
    let mut acc = ExactScalar::zero(field);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}
