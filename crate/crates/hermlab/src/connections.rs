//! The Chern connection and torsion, the tensor gamma, the Gauduchon line
//! (Strominger at t = 2), the Riemannian blocks theta_1/theta_2, and
//! Gauduchon's torsion 1-form eta.
//!
//! Everything here assumes a unitary coframe. The Chern solver is the single
//! convention point: theta_1, theta_2, theta^t and theta^s are all derived
//! algebraically from (theta, T), never solved independently, and the
//! structure equations are kept as residual checks.

use crate::exterior::{Form, FrameAlgebra, FrameVector, C};
use crate::linalg::Mat;

/// Which connection a matrix of 1-forms (or its curvature) represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConnectionKind {
    Chern,
    Gauduchon(f64),
    Strominger,
    RiemannianBlock1,
    RiemannianBlock2,
}

/// An n x n matrix of forms tied to one coframe.
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrix {
    n: usize,
    entries: Vec<Vec<Form>>,
}

impl FormMatrix {
    pub fn zero(n: usize) -> FormMatrix {
        FormMatrix { n, entries: vec![vec![Form::zero(n); n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        self.entries[i][j] = f;
    }

    pub fn add(&self, other: &FormMatrix) -> FormMatrix {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &FormMatrix) -> FormMatrix {
        self.zip(other, |a, b| a.sub(b))
    }

    fn zip(&self, other: &FormMatrix, f: impl Fn(&Form, &Form) -> Form) -> FormMatrix {
        assert_eq!(self.n, other.n);
        let mut out = FormMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i][j] = f(&self.entries[i][j], &other.entries[i][j]);
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> FormMatrix {
        let mut out = FormMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i][j] = f(&self.entries[i][j]);
            }
        }
        out
    }

    pub fn scale_re(&self, x: f64) -> FormMatrix {
        self.map(|f| f.scale_re(x))
    }

    pub fn conj(&self) -> FormMatrix {
        self.map(|f| f.conj())
    }

    pub fn transpose(&self) -> FormMatrix {
        let mut out = FormMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i][j] = self.entries[j][i].clone();
            }
        }
        out
    }

    /// Entrywise exterior derivative.
    pub fn d(&self, a: &FrameAlgebra) -> FormMatrix {
        self.map(|f| a.d(f))
    }

    /// Matrix wedge product: `(A ^ B)_{ij} = sum_k A_{ik} ^ B_{kj}`.
    pub fn mat_wedge(&self, other: &FormMatrix) -> FormMatrix {
        assert_eq!(self.n, other.n);
        let mut out = FormMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Form::zero(self.n);
                for k in 0..self.n {
                    acc = acc.add(&self.entries[i][k].wedge(&other.entries[k][j]));
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    /// Row vector `t^phi ^ M`: entry j is `sum_k phi_k ^ M_{kj}`.
    pub fn phi_row_wedge(&self) -> Vec<Form> {
        let n = self.n;
        (0..n)
            .map(|j| {
                let mut acc = Form::zero(n);
                for k in 0..n {
                    acc = acc.add(&Form::hol(n, k).wedge(&self.entries[k][j]));
                }
                acc
            })
            .collect()
    }

    /// Column vector `t^M ^ phi`: entry k is `sum_j M_{jk} ^ phi_j`.
    pub fn t_wedge_phi(&self) -> Vec<Form> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = Form::zero(n);
                for j in 0..n {
                    acc = acc.add(&self.entries[j][k].wedge(&Form::hol(n, j)));
                }
                acc
            })
            .collect()
    }

    /// Column vector `t^M ^ phibar`: entry k is `sum_j M_{jk} ^ phibar_j`.
    pub fn t_wedge_phibar(&self) -> Vec<Form> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = Form::zero(n);
                for j in 0..n {
                    acc = acc.add(&self.entries[j][k].wedge(&Form::anti(n, j)));
                }
                acc
            })
            .collect()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().flatten().map(|f| f.norm_sq()).sum::<f64>() + 0.0
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Entrywise evaluation against one frame direction.
    pub fn eval_dir(&self, dir: FrameVector) -> Mat {
        let n = self.n;
        let mut out = crate::linalg::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[i][j] = self.entries[i][j].evaluate(&[dir]);
            }
        }
        out
    }

    /// `M_{ij} + conj(M_{ji})`, the skew-Hermitian defect.
    pub fn skew_hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = self.entries[i][j].add(&self.entries[j][i].conj());
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// `M_{ij} + M_{ji}`, the skew-symmetric defect.
    pub fn skew_symmetric_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = self.entries[i][j].add(&self.entries[j][i]);
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

/// A connection matrix of 1-forms, tagged by which connection it is.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionForm {
    pub kind: ConnectionKind,
    pub entries: FormMatrix,
}

/// Chern torsion components `T^k_{ij}` (skew in i,j) and the trace
/// `eta_j = sum_i T^i_{ij}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionTensor {
    n: usize,
    /// t[k][i][j] = T^k_{ij}
    t: Vec<Vec<Vec<C>>>,
    eta: Vec<C>,
}

impl TorsionTensor {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `T^k_{ij}` (0-based indices).
    pub fn t(&self, k: usize, i: usize, j: usize) -> C {
        self.t[k][i][j]
    }

    pub fn eta(&self, j: usize) -> C {
        self.eta[j]
    }

    /// eta as a (1,0)-form.
    pub fn eta_form(&self) -> Form {
        let mut f = Form::zero(self.n);
        for (j, &e) in self.eta.iter().enumerate() {
            f = f.add(&Form::hol(self.n, j).scale(e));
        }
        f
    }

    /// `(|T|^2, |eta|^2)` in the unitary frame.
    pub fn norms(&self) -> (f64, f64) {
        let mut t2 = 0.0;
        for k in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    t2 += self.t[k][i][j].norm_sqr();
                }
            }
        }
        let e2 = self.eta.iter().map(|c| c.norm_sqr()).sum::<f64>() + 0.0;
        (t2 + 0.0, e2)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norms().0.sqrt() <= tol
    }
}

/// Solves the structure equation `d phi = - t^theta ^ phi + tau` for the
/// unique skew-Hermitian theta with tau of pure type (2,0).
///
/// Writing `d phi_k = (2,0)-part + sum_{j,l} D^k_{j lbar} phi_j ^ phibar_l`,
/// the (0,1) block is `theta^{0,1}_{jk} = sum_l D^k_{j lbar} phibar_l`, the
/// (1,0) block its skew-Hermitian closure, and
/// `tau_k = (2,0)(d phi_k) + sum_j theta^{1,0}_{jk} ^ phi_j`.
pub fn chern_connection(a: &FrameAlgebra) -> (ConnectionForm, Vec<Form>) {
    let n = a.dim();
    // D coefficients: d phi_k = ... + D^k_{jl} phi_j ^ phibar_l
    let mut d_coef = vec![vec![vec![C::new(0.0, 0.0); n]; n]; n]; // [k][j][l]
    for k in 0..n {
        let mixed = a.dphi(k).type_project(1, 1);
        for (mask, c) in mixed.terms() {
            let j = (mask & ((1u32 << n) - 1)).trailing_zeros() as usize;
            let l = (mask >> n).trailing_zeros() as usize;
            // canonical monomial phi_j ^ phibar_l has evaluation +1
            d_coef[k][j][l] = c;
        }
    }
    let mut theta = FormMatrix::zero(n);
    for j in 0..n {
        for k in 0..n {
            let mut f = Form::zero(n);
            // (0,1) part
            for l in 0..n {
                f = f.add(&Form::anti(n, l).scale(d_coef[k][j][l]));
            }
            // (1,0) part: -conj over the transpose
            for l in 0..n {
                f = f.add(&Form::hol(n, l).scale(-d_coef[j][k][l].conj()));
            }
            theta.set(j, k, f);
        }
    }
    let mut tau = Vec::with_capacity(n);
    for k in 0..n {
        let mut t = a.dphi(k).type_project(2, 0);
        for j in 0..n {
            t = t.add(&theta.get(j, k).type_project(1, 0).wedge(&Form::hol(n, j)));
        }
        tau.push(t);
    }
    (ConnectionForm { kind: ConnectionKind::Chern, entries: theta }, tau)
}

/// Residual of the structure equation `d phi + t^theta ^ phi - tau = 0`.
pub fn structure_residual(a: &FrameAlgebra, theta: &ConnectionForm, tau: &[Form]) -> f64 {
    let n = a.dim();
    let tp = theta.entries.t_wedge_phi();
    let mut r: f64 = 0.0;
    for k in 0..n {
        let lhs = a.dphi(k).add(&tp[k]).sub(&tau[k]);
        r += lhs.norm_sq();
    }
    r.sqrt()
}

/// Extracts `T^k_{ij} = 1/2 tau_k(e_i, e_j)` and `eta`.
pub fn torsion_components(tau: &[Form]) -> TorsionTensor {
    let n = tau.len();
    let mut t = vec![vec![vec![C::new(0.0, 0.0); n]; n]; n];
    for k in 0..n {
        debug_assert!(tau[k].is_zero() || tau[k].bidegree() == Some((2, 0)), "tau must be (2,0)");
        for i in 0..n {
            for j in (i + 1)..n {
                let v = tau[k].evaluate(&[FrameVector::E(i), FrameVector::E(j)]) * 0.5;
                t[k][i][j] = v;
                t[k][j][i] = -v;
            }
        }
    }
    let mut eta = vec![C::new(0.0, 0.0); n];
    for j in 0..n {
        let mut s = C::new(0.0, 0.0);
        for i in 0..n {
            s += t[i][i][j];
        }
        eta[j] = s;
    }
    TorsionTensor { n, t, eta }
}

/// `gamma_{ij} = sum_k (T^j_{ik} phi_k - conj(T^i_{jk}) phibar_k)`.
pub fn gamma(t: &TorsionTensor) -> FormMatrix {
    let n = t.dim();
    let mut g = FormMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut f = Form::zero(n);
            for k in 0..n {
                f = f.add(&Form::hol(n, k).scale(t.t(j, i, k)));
                f = f.add(&Form::anti(n, k).scale(-t.t(i, j, k).conj()));
            }
            g.set(i, j, f);
        }
    }
    g
}

/// `(theta_2)_{ij} = sum_k conj(T^k_{ij}) phi_k` (skew-symmetric).
pub fn theta2(t: &TorsionTensor) -> ConnectionForm {
    let n = t.dim();
    let mut m = FormMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let mut f = Form::zero(n);
            for k in 0..n {
                f = f.add(&Form::hol(n, k).scale(t.t(k, i, j).conj()));
            }
            m.set(i, j, f);
        }
    }
    ConnectionForm { kind: ConnectionKind::RiemannianBlock2, entries: m }
}

/// The Gauduchon connection `theta^t = theta + t gamma`; t = 0 is Chern,
/// t = 2 is Strominger.
pub fn gauduchon_connection(theta: &ConnectionForm, gamma: &FormMatrix, t: f64) -> ConnectionForm {
    assert!(matches!(theta.kind, ConnectionKind::Chern));
    let kind = if t == 0.0 {
        ConnectionKind::Chern
    } else if t == 2.0 {
        ConnectionKind::Strominger
    } else {
        ConnectionKind::Gauduchon(t)
    };
    ConnectionForm { kind, entries: theta.entries.add(&gamma.scale_re(t)) }
}

/// The Riemannian blocks: `theta_1 = theta + gamma` with `theta_2` from the
/// torsion. Satisfies `d phi = - t^theta_1 ^ phi - t^theta_2 ^ phibar`.
pub fn riemannian_blocks(
    theta: &ConnectionForm,
    gamma: &FormMatrix,
    theta2: &ConnectionForm,
) -> (ConnectionForm, ConnectionForm) {
    assert!(matches!(theta.kind, ConnectionKind::Chern));
    let t1 = ConnectionForm {
        kind: ConnectionKind::RiemannianBlock1,
        entries: theta.entries.add(gamma),
    };
    (t1, theta2.clone())
}

/// Residual of the Riemannian structure equation
/// `d phi + t^theta_1 ^ phi + t^theta_2 ^ phibar = 0`.
pub fn riemannian_structure_residual(
    a: &FrameAlgebra,
    theta1: &ConnectionForm,
    theta2: &ConnectionForm,
) -> f64 {
    let n = a.dim();
    let p1 = theta1.entries.t_wedge_phi();
    let p2 = theta2.entries.t_wedge_phibar();
    let mut r: f64 = 0.0;
    for k in 0..n {
        let lhs = a.dphi(k).add(&p1[k]).add(&p2[k]);
        r += lhs.norm_sq();
    }
    r.sqrt()
}

/// Torsion of the Gauduchon t-connection, in frame components:
/// `T^t(e_i, e_j) = (2-2t) sum_k T^k_{ij} e_k` and
/// `T^t(e_i, ebar_j) = t sum_k (conj(T^i_{kj}) e_k - T^j_{ki} ebar_k)`.
#[derive(Debug, Clone)]
pub struct GauduchonTorsion {
    n: usize,
    pub t_param: f64,
    /// coefficient of e_k in `T^t(e_i, e_j)`, indexed `[k][i][j]`
    pub ee: Vec<Vec<Vec<C>>>,
    /// coefficient of e_k in `T^t(e_i, ebar_j)`, indexed `[k][i][j]`
    pub mixed_e: Vec<Vec<Vec<C>>>,
    /// coefficient of ebar_k in `T^t(e_i, ebar_j)`, indexed `[k][i][j]`
    pub mixed_ebar: Vec<Vec<Vec<C>>>,
}

pub fn gauduchon_torsion(t: &TorsionTensor, t_param: f64) -> GauduchonTorsion {
    let n = t.dim();
    let zero = C::new(0.0, 0.0);
    let mut ee = vec![vec![vec![zero; n]; n]; n];
    let mut mixed_e = vec![vec![vec![zero; n]; n]; n];
    let mut mixed_ebar = vec![vec![vec![zero; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                ee[k][i][j] = t.t(k, i, j) * (2.0 - 2.0 * t_param);
                mixed_e[k][i][j] = t.t(i, k, j).conj() * t_param;
                mixed_ebar[k][i][j] = -t.t(j, k, i) * t_param;
            }
        }
    }
    GauduchonTorsion { n, t_param, ee, mixed_e, mixed_ebar }
}

impl GauduchonTorsion {
    /// `T^t(X, Y)` expanded over the 2n frame vectors: returns the
    /// coefficient vector, e-components first.
    pub fn apply(&self, x: FrameVector, y: FrameVector) -> Vec<C> {
        let n = self.n;
        let zero = C::new(0.0, 0.0);
        let mut out = vec![zero; 2 * n];
        use FrameVector::*;
        match (x, y) {
            (E(i), E(j)) => {
                for k in 0..n {
                    out[k] = self.ee[k][i][j];
                }
            }
            (EBar(i), EBar(j)) => {
                // conjugate of the ee case
                for k in 0..n {
                    out[n + k] = self.ee[k][i][j].conj();
                }
            }
            (E(i), EBar(j)) => {
                for k in 0..n {
                    out[k] = self.mixed_e[k][i][j];
                    out[n + k] = self.mixed_ebar[k][i][j];
                }
            }
            (EBar(j), E(i)) => {
                for k in 0..n {
                    out[k] = -self.mixed_e[k][i][j];
                    out[n + k] = -self.mixed_ebar[k][i][j];
                }
            }
        }
        out
    }

    /// Max defect of total skew-symmetry `<T(X,Y),Z> + <T(X,Z),Y>` over all
    /// frame triples (meaningful at t = 2, the Strominger connection).
    pub fn total_skew_defect(&self) -> f64 {
        let n = self.n;
        let dirs = FrameVector::all(n);
        let inner = |v: &[C], z: FrameVector| -> C {
            // <e_k, ebar_l> = delta_kl; <e,e> = <ebar,ebar> = 0
            match z {
                FrameVector::E(l) => v[n + l],
                FrameVector::EBar(l) => v[l],
            }
        };
        let mut worst = 0.0f64;
        for &x in &dirs {
            for &y in &dirs {
                for &z in &dirs {
                    let a = inner(&self.apply(x, y), z);
                    let b = inner(&self.apply(x, z), y);
                    worst = worst.max((a + b).norm());
                }
            }
        }
        worst
    }
}

/// Residual of the balanced identity `del(omega^{n-1}) + 2 eta ^ omega^{n-1}`
/// (an identity for every Hermitian input, not a condition).
pub fn balanced_identity_residual(a: &FrameAlgebra, t: &TorsionTensor) -> f64 {
    let n = a.dim();
    let omega = crate::hermitian::kahler_form(a);
    let wk = omega.wedge_pow(n - 1);
    let lhs = a.del(&wk);
    let rhs = t.eta_form().wedge(&wk).scale_re(2.0);
    lhs.add(&rhs).norm()
}
