//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson-style shifts,
//! after the EISPACK `tql2` routine).

use nalgebra::{DMatrix, DVector};

/// Eigen-decomposition `T = V diag(λ) Vᵀ` of a real symmetric tridiagonal
/// matrix. Eigenvalues are ascending; eigenvectors are the columns of `V`.
#[derive(Clone, Debug)]
pub struct TridiagEigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl TridiagEigen {
    /// `diag` has length n, `offdiag` length n - 1 (ignored entries beyond that).
    pub fn new(diag: &[f64], offdiag: &[f64]) -> Self {
        let n = diag.len();
        assert!(offdiag.len() + 1 >= n, "offdiag too short");
        let mut d = diag.to_vec();
        let mut e = vec![0.0; n];
        e[..n.saturating_sub(1)].copy_from_slice(&offdiag[..n.saturating_sub(1)]);
        let mut v = DMatrix::identity(n, n);
        tql2(&mut d, &mut e, &mut v);

        // ascending order
        for i in 0..n {
            let k = (i..n).min_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap_or(i);
            if k != i {
                d.swap(i, k);
                v.swap_columns(i, k);
            }
        }
        Self {
            eigenvalues: DVector::from_vec(d),
            eigenvectors: v,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn tql2(d: &mut [f64], e: &mut [f64], v: &mut DMatrix<f64>) {
    let n = d.len();
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}
