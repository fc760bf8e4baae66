//! Small dense complex matrix helpers for the desk-scale sizes used here
//! (n <= 6). Matrices are row-major `Vec<Vec<C>>`.

use crate::exterior::C;

pub type Mat = Vec<Vec<C>>;

pub fn zeros(n: usize) -> Mat {
    vec![vec![C::new(0.0, 0.0); n]; n]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik.re == 0.0 && aik.im == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn adjoint(a: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Inverse by Gauss-Jordan with partial pivoting. Panics on (numerically)
/// singular input; callers only invert matrices they have already factored
/// or validated.
pub fn inverse(a: &Mat) -> Mat {
    let n = a.len();
    let mut m: Vec<Vec<C>> = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let mut piv = col;
        let mut best = m[col][col].norm_sqr();
        for r in (col + 1)..n {
            let v = m[r][col].norm_sqr();
            if v > best {
                best = v;
                piv = r;
            }
        }
        assert!(best > 0.0, "singular matrix");
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col];
        for j in 0..n {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r][col];
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for j in 0..n {
                let mc = m[col][j];
                let ic = inv[col][j];
                m[r][j] -= f * mc;
                inv[r][j] -= f * ic;
            }
        }
    }
    inv
}

pub fn frobenius_norm(a: &Mat) -> f64 {
    a.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest |a_ij - b_ij|.
pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    let mut m = 0.0f64;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            m = m.max((x - y).norm());
        }
    }
    m
}
