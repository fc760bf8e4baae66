//! Hermitian metric handling: unitary-coframe reduction, the Kaehler form,
//! and torsion norms.
//!
//! Every downstream computation assumes a unitary coframe (metric = identity).
//! Non-unitary inputs are reduced once at ingestion via the triangular
//! congruence below; the reduction is deterministic, so golden values are
//! reproducible.

use crate::exterior::{AlgebraError, Form, FrameAlgebra, C};
use crate::linalg::{self, Mat};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("metric matrix must be {expected}x{expected}, got {got} rows")]
    WrongSize { expected: usize, got: usize },
    #[error("metric is not Hermitian: |g - g*| = {0:.3e}")]
    NotHermitian(f64),
    #[error("metric is not positive definite (pivot {pivot} = {value:.3e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
}

/// A constant Hermitian metric `g_{i jbar} = <e_i, ebar_j>` on the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMetric {
    n: usize,
    g: Mat,
}

impl HermitianMetric {
    pub fn identity(n: usize) -> HermitianMetric {
        HermitianMetric { n, g: linalg::identity(n) }
    }

    /// Validates Hermitian symmetry and positive definiteness (via the
    /// Cholesky factorization) before accepting the matrix.
    pub fn new(g: Mat, tol: f64) -> Result<HermitianMetric, MetricError> {
        let n = g.len();
        if g.iter().any(|r| r.len() != n) {
            return Err(MetricError::WrongSize { expected: n, got: n });
        }
        let herm_defect = linalg::max_abs_diff(&g, &linalg::adjoint(&g));
        let scale = linalg::frobenius_norm(&g);
        if herm_defect > tol * (1.0 + scale) {
            return Err(MetricError::NotHermitian(herm_defect));
        }
        // symmetrize exactly so the factorization sees a Hermitian matrix
        let mut h = g.clone();
        for i in 0..n {
            for j in 0..n {
                let avg = (g[i][j] + g[j][i].conj()) * C::new(0.5, 0.0);
                h[i][j] = avg;
            }
            h[i][i] = C::new(h[i][i].re, 0.0);
        }
        let m = HermitianMetric { n, g: h };
        m.cholesky()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Mat {
        &self.g
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        linalg::max_abs_diff(&self.g, &linalg::identity(self.n)) <= tol
    }

    /// Cholesky factor `L` (lower triangular, strictly positive real
    /// diagonal) with `g = L L*`. Unique, hence a deterministic reduction.
    pub fn cholesky(&self) -> Result<Mat, MetricError> {
        let n = self.n;
        let mut l = linalg::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.g[i][j];
                for k in 0..j {
                    s -= l[i][k] * l[j][k].conj();
                }
                if i == j {
                    let v = s.re;
                    if v <= 0.0 || !v.is_finite() {
                        return Err(MetricError::NotPositiveDefinite { pivot: i, value: v });
                    }
                    l[i][i] = C::new(v.sqrt(), 0.0);
                } else {
                    l[i][j] = s / l[j][j];
                }
            }
        }
        Ok(l)
    }
}

/// Rewrites the algebra in a new coframe `psi = M phi` (M invertible).
/// The differential commutes with the change by construction; the result is
/// re-validated at `tol`.
pub fn coframe_change(a: &FrameAlgebra, m: &Mat, tol: f64) -> Result<FrameAlgebra, AlgebraError> {
    let n = a.dim();
    assert_eq!(m.len(), n, "coframe matrix size mismatch");
    let minv = linalg::inverse(m);
    // 1-form substitutions phi_a -> sum_b (M^-1)_{ab} psi_b and conjugates
    let mut subst: Vec<Form> = Vec::with_capacity(2 * n);
    for a_idx in 0..n {
        let mut f = Form::zero(n);
        for b in 0..n {
            f = f.add(&Form::hol(n, b).scale(minv[a_idx][b]));
        }
        subst.push(f);
    }
    for a_idx in 0..n {
        let mut f = Form::zero(n);
        for b in 0..n {
            f = f.add(&Form::anti(n, b).scale(minv[a_idx][b].conj()));
        }
        subst.push(f);
    }
    let substitute = |u: &Form| -> Form {
        let mut out = Form::zero(n);
        for (mask, c) in u.terms() {
            let mut term = Form::scalar(n, c);
            let mut mm = mask;
            while mm != 0 {
                let g = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                term = term.wedge(&subst[g]);
            }
            out = out.add(&term);
        }
        out
    };
    let mut dpsi: Vec<Form> = Vec::with_capacity(n);
    for k in 0..n {
        // d psi_k = sum_j M_{kj} d phi_j, re-expressed in the psi coframe
        let mut f = Form::zero(n);
        for j in 0..n {
            f = f.add(&substitute(a.dphi(j)).scale(m[k][j]));
        }
        dpsi.push(f);
    }
    FrameAlgebra::from_forms(n, dpsi, tol)
}

/// Reduces `(a, g)` to a unitary coframe: with `g = L L*` (Cholesky), the
/// coframe `psi = L^T phi` has metric identity. Idempotent on unitary input.
pub fn unitary_reduce(
    a: &FrameAlgebra,
    g: &HermitianMetric,
    tol: f64,
) -> Result<FrameAlgebra, UnitaryReduceError> {
    assert_eq!(a.dim(), g.dim(), "algebra/metric dimension mismatch");
    let l = g.cholesky()?;
    let m = linalg::transpose(&l);
    Ok(coframe_change(a, &m, tol)?)
}

#[derive(Debug, Error)]
pub enum UnitaryReduceError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Rotates a unitary coframe by a constant unitary matrix: `psi = U phi`.
/// The metric stays the identity; every predicate and scalar downstream is
/// invariant under this.
pub fn rotate_unitary(a: &FrameAlgebra, u: &Mat, tol: f64) -> Result<FrameAlgebra, AlgebraError> {
    coframe_change(a, u, tol)
}

/// `(|T|^2, |eta|^2)` of a torsion tensor in a unitary frame: the squared
/// component norms, both invariant under constant unitary coframe rotation.
pub fn tensor_norms(t: &crate::connections::TorsionTensor) -> (f64, f64) {
    t.norms()
}

/// The Kaehler form `omega = sqrt(-1) sum_i phi_i wedge phibar_i` of a
/// unitary coframe. Real ((conj omega) = omega) and of type (1,1).
pub fn kahler_form(a: &FrameAlgebra) -> Form {
    let n = a.dim();
    let i = C::new(0.0, 1.0);
    let mut w = Form::zero(n);
    for k in 0..n {
        w = w.add(&Form::hol(n, k).wedge(&Form::anti(n, k)).scale(i));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::DphiTerm;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn kodaira() -> FrameAlgebra {
        FrameAlgebra::from_terms(
            2,
            &[DphiTerm::HolAnti { k: 1, i: 0, j: 0, coeff: c(1.0, 0.0) }],
            1e-10,
        )
        .unwrap()
    }

    #[test]
    fn metric_rejects_non_hermitian() {
        let g = vec![vec![c(1.0, 0.0), c(0.5, 0.0)], vec![c(0.4, 0.0), c(1.0, 0.0)]];
        assert!(matches!(HermitianMetric::new(g, 1e-12), Err(MetricError::NotHermitian(_))));
    }

    #[test]
    fn metric_rejects_indefinite() {
        let g = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(
            HermitianMetric::new(g, 1e-12),
            Err(MetricError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn cholesky_reconstructs() {
        let g = vec![
            vec![c(2.0, 0.0), c(0.3, 0.4), c(0.0, 0.0)],
            vec![c(0.3, -0.4), c(1.5, 0.0), c(-0.2, 0.1)],
            vec![c(0.0, 0.0), c(-0.2, -0.1), c(1.1, 0.0)],
        ];
        let m = HermitianMetric::new(g.clone(), 1e-12).unwrap();
        let l = m.cholesky().unwrap();
        let rec = linalg::mat_mul(&l, &linalg::adjoint(&l));
        assert!(linalg::max_abs_diff(&rec, m.matrix()) < 1e-14);
        for i in 0..3 {
            assert!(l[i][i].im == 0.0 && l[i][i].re > 0.0);
            for j in (i + 1)..3 {
                assert_eq!(l[i][j], c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn identity_metric_leaves_algebra_unchanged() {
        let a = kodaira();
        let g = HermitianMetric::identity(2);
        let r = unitary_reduce(&a, &g, 1e-10).unwrap();
        assert_eq!(&a, &r);
    }

    #[test]
    fn diagonal_metric_scales_torus_coframe() {
        // diag(4,1): psi = (2 phi_1, phi_2), still abelian
        let a = FrameAlgebra::abelian(2);
        let g = HermitianMetric::new(
            vec![vec![c(4.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
            1e-12,
        )
        .unwrap();
        let r = unitary_reduce(&a, &g, 1e-10).unwrap();
        for k in 0..2 {
            assert!(r.dphi(k).is_zero());
        }
    }

    #[test]
    fn random_spd_reduction_still_validates() {
        let g = HermitianMetric::new(
            vec![vec![c(1.3, 0.0), c(0.2, -0.5)], vec![c(0.2, 0.5), c(2.1, 0.0)]],
            1e-12,
        )
        .unwrap();
        let r = unitary_reduce(&kodaira(), &g, 1e-10).unwrap();
        assert!(r.validate(1e-10).is_empty());
    }

    #[test]
    fn reduction_commutes_with_d() {
        // transform(d phi_k) equals d'(transform(phi_k)) by construction;
        // spot-check via a full coframe change with a non-trivial matrix.
        let a = kodaira();
        let m = vec![vec![c(1.0, 0.2), c(0.3, 0.0)], vec![c(0.0, 0.0), c(0.8, -0.1)]];
        let b = coframe_change(&a, &m, 1e-10).unwrap();
        let minv = linalg::inverse(&m);
        // d'(psi_k) pulled back along phi = M^-1 psi should equal M . dphi
        // checked indirectly: validation passes and dims agree
        assert!(b.validate(1e-9).is_empty());
        assert_eq!(minv.len(), 2);
    }

    #[test]
    fn kahler_form_is_real_type_one_one() {
        let a = kodaira();
        let w = kahler_form(&a);
        assert_eq!(w.bidegree(), Some((1, 1)));
        assert_eq!(w.conj(), w);
        // omega^n / n! has positive top coefficient
        let top = w.wedge(&w).scale_re(0.5);
        let mask = 0b1111u32;
        let coef = top.coeff(mask);
        assert!(coef.im == 0.0);
        assert!(coef.re > 0.0, "volume coefficient {coef}");
    }

    #[test]
    fn tensor_norms_on_catalog() {
        use crate::connections::{chern_connection, torsion_components};
        let cases: [(FrameAlgebra, f64, f64); 2] =
            [(FrameAlgebra::abelian(2), 0.0, 0.0), (kodaira(), 0.5, 0.25)];
        for (a, want_t2, want_e2) in cases {
            let (_, tau) = chern_connection(&a);
            let (t2, e2) = tensor_norms(&torsion_components(&tau));
            assert!((t2 - want_t2).abs() < 1e-15);
            assert!((e2 - want_e2).abs() < 1e-15);
        }
    }

    #[test]
    fn unitary_rotation_keeps_validity() {
        let a = kodaira();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(-s, 0.0), c(s, 0.0)]];
        let b = rotate_unitary(&a, &u, 1e-9).unwrap();
        assert!(b.validate(1e-9).is_empty());
    }
}
