//! Curvature 2-form matrices for all connections, component extraction over
//! frame directions, and the structure-equation / Bianchi residual checks.

use crate::connections::{ConnectionForm, ConnectionKind, FormMatrix};
use crate::exterior::{Form, FrameAlgebra, FrameVector, C};

/// An n x n matrix of curvature 2-forms, tagged like its connection.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureForm {
    pub kind: ConnectionKind,
    pub entries: FormMatrix,
}

/// `Theta = d theta - theta ^ theta` for a connection on the Gauduchon line
/// (Chern, Gauduchon(t), or Strominger).
pub fn curvature(a: &FrameAlgebra, theta: &ConnectionForm) -> CurvatureForm {
    assert!(
        matches!(
            theta.kind,
            ConnectionKind::Chern | ConnectionKind::Gauduchon(_) | ConnectionKind::Strominger
        ),
        "curvature() expects a Gauduchon-line connection; use riemannian_curvature for the blocks"
    );
    let d = theta.entries.d(a);
    let sq = theta.entries.mat_wedge(&theta.entries);
    CurvatureForm { kind: theta.kind, entries: d.sub(&sq) }
}

/// The Riemannian curvature blocks:
/// `Theta_1 = d theta_1 - theta_1 ^ theta_1 - conj(theta_2) ^ theta_2` and
/// `Theta_2 = d theta_2 - theta_2 ^ theta_1 - conj(theta_1) ^ theta_2`.
pub fn riemannian_curvature(
    a: &FrameAlgebra,
    theta1: &ConnectionForm,
    theta2: &ConnectionForm,
) -> (CurvatureForm, CurvatureForm) {
    assert!(matches!(theta1.kind, ConnectionKind::RiemannianBlock1));
    assert!(matches!(theta2.kind, ConnectionKind::RiemannianBlock2));
    let t1 = &theta1.entries;
    let t2 = &theta2.entries;
    let big1 = t1.d(a).sub(&t1.mat_wedge(t1)).sub(&t2.conj().mat_wedge(t2));
    let big2 = t2.d(a).sub(&t2.mat_wedge(t1)).sub(&t1.conj().mat_wedge(t2));
    (
        CurvatureForm { kind: ConnectionKind::RiemannianBlock1, entries: big1 },
        CurvatureForm { kind: ConnectionKind::RiemannianBlock2, entries: big2 },
    )
}

/// Residual of the second Bianchi identity
/// `d Theta - theta ^ Theta + Theta ^ theta = 0`.
pub fn second_bianchi_residual(
    a: &FrameAlgebra,
    theta: &ConnectionForm,
    big: &CurvatureForm,
) -> f64 {
    let d = big.entries.d(a);
    let lhs = d
        .sub(&theta.entries.mat_wedge(&big.entries))
        .add(&big.entries.mat_wedge(&theta.entries));
    lhs.norm()
}

/// Residual of the first Bianchi identity (Chern data):
/// `d tau + t^theta ^ tau - t^Theta ^ phi = 0`.
pub fn first_bianchi_residual(
    a: &FrameAlgebra,
    theta: &ConnectionForm,
    tau: &[Form],
    big: &CurvatureForm,
) -> f64 {
    let n = a.dim();
    let theta_phi = big.entries.t_wedge_phi();
    let mut r: f64 = 0.0;
    for k in 0..n {
        let mut lhs = a.d(&tau[k]);
        for j in 0..n {
            lhs = lhs.add(&theta.entries.get(j, k).wedge(&tau[j]));
        }
        lhs = lhs.sub(&theta_phi[k]);
        r += lhs.norm_sq();
    }
    r.sqrt()
}

/// Residual of the identity
/// `sqrt(-1) del delbar omega = t^tau ^ conj(tau) + t^phi ^ Theta ^ phibar`
/// (holds for every Hermitian input).
pub fn ddbar_omega_residual(a: &FrameAlgebra, tau: &[Form], big: &CurvatureForm) -> f64 {
    ddbar_omega_defect(a, tau, big).norm()
}

/// The difference form behind [`ddbar_omega_residual`], exposed for tests.
pub fn ddbar_omega_defect(a: &FrameAlgebra, tau: &[Form], big: &CurvatureForm) -> Form {
    let n = a.dim();
    let omega = crate::hermitian::kahler_form(a);
    let lhs = a.del(&a.delbar(&omega)).scale(C::new(0.0, 1.0));
    let mut rhs = Form::zero(n);
    for t in tau.iter() {
        rhs = rhs.add(&t.wedge(&t.conj()));
    }
    for k in 0..n {
        for l in 0..n {
            rhs = rhs.add(&Form::hol(n, k).wedge(big.entries.get(k, l)).wedge(&Form::anti(n, l)));
        }
    }
    lhs.sub(&rhs)
}

/// Chern curvature components `R^c_{i jbar k lbar} = Theta_{kl}(e_i, ebar_j)`
/// in a unitary frame; indexed `[i][j][k][l]`.
pub fn chern_components(big: &CurvatureForm) -> Vec<Vec<Vec<Vec<C>>>> {
    let n = big.entries.dim();
    let zero = C::new(0.0, 0.0);
    let mut r = vec![vec![vec![vec![zero; n]; n]; n]; n];
    for k in 0..n {
        for l in 0..n {
            let f = big.entries.get(k, l);
            for i in 0..n {
                for j in 0..n {
                    r[i][j][k][l] = f.evaluate(&[FrameVector::E(i), FrameVector::EBar(j)]);
                }
            }
        }
    }
    r
}

/// Strominger curvature components `R^s_{a b k lbar} = Theta^s_{kl}(v_a, v_b)`
/// over all real direction pairs; directions indexed `0..2n` with
/// holomorphic first. Indexed `[a][b][k][l]`.
pub fn strominger_components(big: &CurvatureForm) -> Vec<Vec<Vec<Vec<C>>>> {
    let n = big.entries.dim();
    let dirs = FrameVector::all(n);
    let zero = C::new(0.0, 0.0);
    let mut r = vec![vec![vec![vec![zero; n]; n]; 2 * n]; 2 * n];
    for k in 0..n {
        for l in 0..n {
            let f = big.entries.get(k, l);
            for (ai, &va) in dirs.iter().enumerate() {
                for (bi, &vb) in dirs.iter().enumerate() {
                    if bi <= ai {
                        continue;
                    }
                    let v = f.evaluate(&[va, vb]);
                    r[ai][bi][k][l] = v;
                    r[bi][ai][k][l] = -v;
                }
            }
        }
    }
    r
}

/// Full Riemannian curvature `R_{abcd}` over the 2n real directions, built
/// from the block matrix `hat Theta = [[Theta_1, conj(Theta_2)],
/// [Theta_2, conj(Theta_1)]]` and the extended metric; `R_{abcd} =
/// hat Theta_{c, conj(d)}(v_a, v_b)` in a unitary frame.
pub fn riemannian_components(
    big1: &CurvatureForm,
    big2: &CurvatureForm,
) -> Vec<Vec<Vec<Vec<C>>>> {
    let n = big1.entries.dim();
    let m = 2 * n;
    let dirs = FrameVector::all(n);
    let hat = |c: usize, e: usize| -> Form {
        match (c < n, e < n) {
            (true, true) => big1.entries.get(c, e).clone(),
            (true, false) => big2.entries.get(c, e - n).conj(),
            (false, true) => big2.entries.get(c - n, e).clone(),
            (false, false) => big1.entries.get(c - n, e - n).conj(),
        }
    };
    let zero = C::new(0.0, 0.0);
    let mut r = vec![vec![vec![vec![zero; m]; m]; m]; m];
    for c in 0..m {
        for d in 0..m {
            let e = (d + n) % m; // conjugate index: the only nonzero g_{ed}
            let f = hat(c, e);
            for a in 0..m {
                for b in (a + 1)..m {
                    let v = f.evaluate(&[dirs[a], dirs[b]]);
                    r[a][b][c][d] = v;
                    r[b][a][c][d] = -v;
                }
            }
        }
    }
    r
}

/// Norm of the non-(1,1) part of a curvature matrix (the Chern curvature
/// must be pure (1,1)).
pub fn non_one_one_norm(big: &CurvatureForm) -> f64 {
    let n = big.entries.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let f = big.entries.get(i, j);
            s += f.sub(&f.type_project(1, 1)).norm_sq();
        }
    }
    s.sqrt()
}

/// Norm of the (p,q) part of a curvature matrix.
pub fn type_part_norm(big: &CurvatureForm, p: usize, q: usize) -> f64 {
    let n = big.entries.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += big.entries.get(i, j).type_project(p, q).norm_sq();
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::{
        chern_connection, gamma, gauduchon_connection, riemannian_blocks, theta2,
        torsion_components,
    };
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

    fn iwasawa() -> FrameAlgebra {
        FrameAlgebra::from_terms(
            3,
            &[DphiTerm::HolHol { k: 2, i: 0, j: 1, coeff: c(-1.0, 0.0) }],
            1e-10,
        )
        .unwrap()
    }

    fn hopf() -> FrameAlgebra {
        // su(2) + u(1): dphi_1 = i phi_1 phi_2 + i phi_1 phibar_2,
        //               dphi_2 = -i phi_1 phibar_1
        FrameAlgebra::from_terms(
            2,
            &[
                DphiTerm::HolHol { k: 0, i: 0, j: 1, coeff: c(0.0, 1.0) },
                DphiTerm::HolAnti { k: 0, i: 0, j: 1, coeff: c(0.0, 1.0) },
                DphiTerm::HolAnti { k: 1, i: 0, j: 0, coeff: c(0.0, -1.0) },
            ],
            1e-10,
        )
        .unwrap()
    }

    #[test]
    fn torus_curvature_vanishes() {
        let a = FrameAlgebra::abelian(2);
        let (theta, _) = chern_connection(&a);
        let big = curvature(&a, &theta);
        assert_eq!(big.entries.norm(), 0.0);
    }

    #[test]
    fn iwasawa_is_chern_flat() {
        let a = iwasawa();
        let (theta, _) = chern_connection(&a);
        let big = curvature(&a, &theta);
        assert!(big.entries.norm() < 1e-15);
    }

    #[test]
    fn kodaira_chern_curvature_entries() {
        let a = kodaira();
        let (theta, _) = chern_connection(&a);
        let big = curvature(&a, &theta);
        let p1q1 = Form::hol(2, 0).wedge(&Form::anti(2, 0));
        assert_eq!(big.entries.get(0, 0), &p1q1.scale(c(-1.0, 0.0)));
        assert_eq!(big.entries.get(1, 1), &p1q1);
        assert!(big.entries.get(0, 1).is_zero());
        assert!(non_one_one_norm(&big) < 1e-15);
        // components
        let r = chern_components(&big);
        assert_eq!(r[0][0][0][0], c(-1.0, 0.0));
        assert_eq!(r[0][0][1][1], c(1.0, 0.0));
    }

    #[test]
    fn hopf_is_strominger_flat() {
        let a = hopf();
        let (theta, tau) = chern_connection(&a);
        let t = torsion_components(&tau);
        let g = gamma(&t);
        let ts = gauduchon_connection(&theta, &g, 2.0);
        assert!(ts.entries.norm() < 1e-15, "theta^s should vanish for hopf");
        let big = curvature(&a, &ts);
        assert!(big.entries.norm() < 1e-15);
    }

    #[test]
    fn kodaira_strominger_curvature() {
        let a = kodaira();
        let (theta, tau) = chern_connection(&a);
        let t = torsion_components(&tau);
        let g = gamma(&t);
        let ts = gauduchon_connection(&theta, &g, 2.0);
        let big = curvature(&a, &ts);
        let p1q1 = Form::hol(2, 0).wedge(&Form::anti(2, 0));
        assert_eq!(big.entries.get(0, 0), &p1q1.scale(c(-2.0, 0.0)));
        // not Strominger flat, but Kaehler-like: t^phi ^ Theta^s = 0
        assert!(big.entries.norm() > 1e-3);
        let row = big.entries.phi_row_wedge();
        for f in row {
            assert!(f.norm() < 1e-15);
        }
    }

    #[test]
    fn curvature_matrices_match_connection_symmetry() {
        for a in [kodaira(), iwasawa(), hopf()] {
            let (theta, tau) = chern_connection(&a);
            let t = torsion_components(&tau);
            let g = gamma(&t);
            let th2 = theta2(&t);
            let ts = gauduchon_connection(&theta, &g, 2.0);
            let (t1, t2) = riemannian_blocks(&theta, &g, &th2);
            assert!(t1.entries.skew_hermitian_defect() < 1e-14);
            let big = curvature(&a, &theta);
            let big_s = curvature(&a, &ts);
            let (big1, big2) = riemannian_curvature(&a, &t1, &t2);
            assert!(big.entries.skew_hermitian_defect() < 1e-13);
            assert!(big_s.entries.skew_hermitian_defect() < 1e-13);
            assert!(big1.entries.skew_hermitian_defect() < 1e-13);
            assert!(big2.entries.skew_symmetric_defect() < 1e-13);
        }
    }

    #[test]
    fn bianchi_identities_hold() {
        for a in [FrameAlgebra::abelian(2), kodaira(), iwasawa(), hopf()] {
            let (theta, tau) = chern_connection(&a);
            let big = curvature(&a, &theta);
            assert!(second_bianchi_residual(&a, &theta, &big) < 1e-12);
            assert!(first_bianchi_residual(&a, &theta, &tau, &big) < 1e-12);
        }
    }

    #[test]
    fn gray_and_unbarred_block_vanish() {
        for a in [kodaira(), iwasawa(), hopf()] {
            let (theta, tau) = chern_connection(&a);
            let t = torsion_components(&tau);
            let g = gamma(&t);
            let th2 = theta2(&t);
            let (t1, t2) = riemannian_blocks(&theta, &g, &th2);
            let (big1, big2) = riemannian_curvature(&a, &t1, &t2);
            assert!(type_part_norm(&big2, 0, 2) < 1e-12, "Gray (0,2) part");
            let n = a.dim();
            let r = riemannian_components(&big1, &big2);
            let mut unbarred = 0.0f64;
            let mut barred = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            unbarred += r[i][j][k][l].norm_sqr();
                            barred += r[n + i][n + j][n + k][n + l].norm_sqr();
                        }
                    }
                }
            }
            assert!(unbarred.sqrt() < 1e-12, "R_unbarred");
            assert!(barred.sqrt() < 1e-12, "R_barred");
        }
    }

    #[test]
    fn riemannian_pair_swap_symmetry() {
        // R_{i jbar kbar lbar} computed from Theta_2^{1,1} equals the
        // pair-swapped component from Theta_1^{0,2}
        let a = kodaira();
        let (theta, tau) = chern_connection(&a);
        let t = torsion_components(&tau);
        let (t1, t2) = riemannian_blocks(&theta, &gamma(&t), &theta2(&t));
        let (big1, big2) = riemannian_curvature(&a, &t1, &t2);
        let n = a.dim();
        let r = riemannian_components(&big1, &big2);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs = r[i][n + j][n + k][n + l];
                        let rhs = r[n + k][n + l][i][n + j];
                        assert!((lhs - rhs).norm() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn lemma1_identity_on_catalog() {
        for a in [FrameAlgebra::abelian(2), kodaira(), iwasawa(), hopf()] {
            let (theta, tau) = chern_connection(&a);
            let big = curvature(&a, &theta);
            assert!(ddbar_omega_residual(&a, &tau, &big) < 1e-12);
        }
    }

    #[test]
    fn iwasawa_lemma1_both_sides_nonzero() {
        // Theta = 0, so sqrt(-1) del delbar omega = tau_3 ^ conj(tau_3) != 0
        let a = iwasawa();
        let omega = crate::hermitian::kahler_form(&a);
        let lhs = a.del(&a.delbar(&omega)).scale(c(0.0, 1.0));
        let expect = Form::monomial(3, &[0, 1, 3, 4], c(1.0, 0.0));
        assert!(lhs.sub(&expect).norm() < 1e-13);
    }

    #[test]
    fn kodaira_pluriclosed_iwasawa_not() {
        let a = kodaira();
        let omega = crate::hermitian::kahler_form(&a);
        assert!(a.del(&a.delbar(&omega)).norm() < 1e-14);
        let b = iwasawa();
        let omega_b = crate::hermitian::kahler_form(&b);
        assert!(b.del(&b.delbar(&omega_b)).norm() > 0.5);
    }
}
