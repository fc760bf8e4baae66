//! Built-in reference structures and seeded random generators.
//!
//! Each entry carries the expected predicate map reproduced by the pipeline
//! in golden tests, plus a note on where the expectation comes from, so a
//! failing golden test points at either a code bug or an expectation bug.

use crate::exterior::{AlgebraError, DphiTerm, FrameAlgebra, C};
use crate::hermitian::HermitianMetric;
use crate::linalg::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry '{0}'")]
    UnknownName(String),
}

/// A reference structure: algebra, default metric, and the predicate values
/// the pipeline must reproduce.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub algebra: FrameAlgebra,
    pub metric: HermitianMetric,
    pub expected: BTreeMap<&'static str, bool>,
    pub provenance: &'static str,
}

const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn expected(pairs: &[(&'static str, bool)]) -> BTreeMap<&'static str, bool> {
    pairs.iter().copied().collect()
}

fn torus(n: usize, name: &'static str) -> CatalogEntry {
    let mut pairs = vec![
        ("kahler", true),
        ("balanced", true),
        ("gauduchon", true),
        ("pluriclosed", true),
        ("skl", true),
        ("chern_flat", true),
        ("strominger_flat", true),
        ("torsion_parallel", true),
    ];
    if n == 2 {
        pairs.push(("vaisman", true));
    }
    CatalogEntry {
        name,
        algebra: FrameAlgebra::abelian(n),
        metric: HermitianMetric::identity(n),
        expected: expected(&pairs),
        provenance: "abelian coframe: every tensor vanishes identically",
    }
}

fn kodaira() -> CatalogEntry {
    CatalogEntry {
        name: "kodaira",
        algebra: FrameAlgebra::from_terms(
            2,
            &[DphiTerm::HolAnti { k: 1, i: 0, j: 0, coeff: c(1.0, 0.0) }],
            TOL,
        )
        .expect("kodaira structure constants"),
        metric: HermitianMetric::identity(2),
        expected: expected(&[
            ("kahler", false),
            ("balanced", false),
            ("gauduchon", true),
            ("pluriclosed", true),
            ("skl", true),
            ("chern_flat", false),
            ("strominger_flat", false),
            ("torsion_parallel", true),
            ("vaisman", true),
        ]),
        provenance: "primary Kodaira surface (nilpotent, dphi_2 = phi_1 ^ phibar_1); \
                     component values cross-checked by hand against the solver",
    }
}

fn iwasawa() -> CatalogEntry {
    CatalogEntry {
        name: "iwasawa",
        algebra: FrameAlgebra::from_terms(
            3,
            &[DphiTerm::HolHol { k: 2, i: 0, j: 1, coeff: c(-1.0, 0.0) }],
            TOL,
        )
        .expect("iwasawa structure constants"),
        metric: HermitianMetric::identity(3),
        expected: expected(&[
            ("kahler", false),
            ("balanced", true),
            ("gauduchon", true),
            ("pluriclosed", false),
            ("skl", false),
            ("chern_flat", true),
            ("strominger_flat", false),
            ("torsion_parallel", false),
        ]),
        provenance: "Iwasawa threefold (complex Heisenberg, dphi_3 = -phi_1 ^ phi_2): \
                     complex parallelizable, so theta = 0 and Theta = 0",
    }
}

fn hopf() -> CatalogEntry {
    // Maurer-Cartan relations of su(2) + u(1) with the standard invariant
    // complex structure: [e1,e2] = 2 e3 cyclic, phi_1 = e^1 + i e^2,
    // phi_2 = e^3 + i e^0 gives dphi_1 = i phi_1 ^ (phi_2 + phibar_2),
    // dphi_2 = -i phi_1 ^ phibar_1. Strominger flatness is asserted
    // numerically by the golden test rather than taken on faith.
    CatalogEntry {
        name: "hopf",
        algebra: FrameAlgebra::from_terms(
            2,
            &[
                DphiTerm::HolHol { k: 0, i: 0, j: 1, coeff: c(0.0, 1.0) },
                DphiTerm::HolAnti { k: 0, i: 0, j: 1, coeff: c(0.0, 1.0) },
                DphiTerm::HolAnti { k: 1, i: 0, j: 0, coeff: c(0.0, -1.0) },
            ],
            TOL,
        )
        .expect("hopf structure constants"),
        metric: HermitianMetric::identity(2),
        expected: expected(&[
            ("kahler", false),
            ("balanced", false),
            ("gauduchon", true),
            ("pluriclosed", true),
            ("skl", true),
            ("chern_flat", false),
            ("strominger_flat", true),
            ("torsion_parallel", true),
            ("vaisman", true),
        ]),
        provenance: "compact quotient model of su(2) + u(1) (Hopf surface) with its \
                     standard invariant Hermitian structure",
    }
}

fn kt3() -> CatalogEntry {
    // Three-dimensional witness with Kaehler-like Strominger curvature that
    // is not Strominger flat: the Kodaira structure extended by a flat
    // direction. The metric was produced by the residual-minimization
    // search and rounded to the identity it converged to; the golden test
    // re-verifies every expectation numerically.
    CatalogEntry {
        name: "kt3",
        algebra: FrameAlgebra::from_terms(
            3,
            &[DphiTerm::HolAnti { k: 1, i: 0, j: 0, coeff: c(1.0, 0.0) }],
            TOL,
        )
        .expect("kt3 structure constants"),
        metric: HermitianMetric::identity(3),
        expected: expected(&[
            ("kahler", false),
            ("balanced", false),
            ("gauduchon", true),
            ("pluriclosed", true),
            ("skl", true),
            ("chern_flat", false),
            ("strominger_flat", false),
            ("torsion_parallel", true),
        ]),
        provenance: "n = 3 Kaehler-like witness found by metric search on the extended \
                     Kodaira coframe and frozen after verification",
    }
}

fn solvable2() -> CatalogEntry {
    // Non-nilpotent surface used as the negative witness: dphi_2 picks up a
    // (2,0) part, the Strominger torsion is not parallel, and the Lee form
    // is not Riemannian-parallel.
    CatalogEntry {
        name: "solvable2",
        algebra: FrameAlgebra::from_terms(
            2,
            &[
                DphiTerm::HolHol { k: 1, i: 0, j: 1, coeff: c(1.0, 0.0) },
                DphiTerm::HolAnti { k: 1, i: 0, j: 0, coeff: c(1.0, 0.0) },
            ],
            TOL,
        )
        .expect("solvable2 structure constants"),
        metric: HermitianMetric::identity(2),
        expected: expected(&[
            ("kahler", false),
            ("balanced", false),
            ("gauduchon", false),
            ("pluriclosed", false),
            ("skl", false),
            ("chern_flat", false),
            ("strominger_flat", false),
            ("torsion_parallel", false),
            ("vaisman", false),
        ]),
        provenance: "solvable surface witness: nabla^s T != 0 checked by hand from the \
                     structure constants",
    }
}

/// All catalog entries in a stable order.
pub fn entries() -> Vec<CatalogEntry> {
    vec![torus(2, "torus2"), torus(3, "torus3"), kodaira(), iwasawa(), hopf(), kt3(), solvable2()]
}

/// Entry names in catalog order.
pub fn list() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Result<CatalogEntry, CatalogError> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::UnknownName(name.to_string()))
}

/// Random two-step algebra: generators `1..=m` closed, the rest built from
/// random combinations of `phi_a ^ phi_b` and `phi_a ^ phibar_b` with
/// `a, b <= m`. Such structure constants satisfy `d^2 = 0` automatically and
/// are integrable by construction. Deterministic per seed.
pub fn random_two_step(n: usize, m: usize, seed: u64) -> FrameAlgebra {
    assert!(m >= 1 && m < n && n <= crate::exterior::MAX_DIM);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ ((m as u64) << 40));
    let mut terms = Vec::new();
    for k in m..n {
        for a in 0..m {
            for b in (a + 1)..m {
                terms.push(DphiTerm::HolHol {
                    k,
                    i: a,
                    j: b,
                    coeff: c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                });
            }
        }
        for a in 0..m {
            for b in 0..m {
                terms.push(DphiTerm::HolAnti {
                    k,
                    i: a,
                    j: b,
                    coeff: c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                });
            }
        }
    }
    FrameAlgebra::from_terms(n, &terms, TOL).expect("two-step construction is always valid")
}

/// Random positive-definite Hermitian metric `g = L L*` with `L = I + r B`
/// (B strictly lower, random) and log-uniform diagonal. Deterministic per
/// seed.
pub fn random_metric(n: usize, seed: u64) -> HermitianMetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0xda7a);
    let mut l = crate::linalg::zeros(n);
    for i in 0..n {
        l[i][i] = c((0.35 * rng.gen_range(-1.0..1.0f64)).exp(), 0.0);
        for j in 0..i {
            l[i][j] = c(0.3 * rng.gen_range(-1.0..1.0), 0.3 * rng.gen_range(-1.0..1.0));
        }
    }
    let g = crate::linalg::mat_mul(&l, &crate::linalg::adjoint(&l));
    HermitianMetric::new(g, 1e-12).expect("L L* is positive definite")
}

/// Random constant unitary matrix (Gram-Schmidt of a random complex
/// matrix). Deterministic per seed.
pub fn random_unitary(n: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_f491_4f6c_dd1d));
    let mut u = crate::linalg::zeros(n);
    for row in u.iter_mut() {
        for z in row.iter_mut() {
            *z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    // modified Gram-Schmidt on rows
    for i in 0..n {
        for k in 0..i {
            let mut dot = c(0.0, 0.0);
            for j in 0..n {
                dot += u[i][j] * u[k][j].conj();
            }
            for j in 0..n {
                let v = u[k][j];
                u[i][j] -= dot * v;
            }
        }
        let norm = u[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "degenerate random draw");
        for z in u[i].iter_mut() {
            *z /= norm;
        }
    }
    u
}

/// coframe-change error passthrough for rotated golden tests
pub fn rotate_entry(entry: &CatalogEntry, seed: u64, tol: f64) -> Result<FrameAlgebra, AlgebraError> {
    let u = random_unitary(entry.algebra.dim(), seed);
    crate::hermitian::rotate_unitary(&entry.algebra, &u, tol)
}
