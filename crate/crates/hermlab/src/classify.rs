//! Classification predicates and the theorem-verification harness.
//!
//! Every boolean is accompanied by the residual and scale that justified it:
//! a predicate passes iff `residual <= tol * (1 + scale)`. Implications are
//! reported three-valued (pass / fail / vacuous) so the harness is honest
//! about hypothesis coverage.

use crate::analysis::Analysis;
use crate::calculus::{
    commutativity_residual, eta_identities, eta_indexed, lemma15_check, lemma2_residuals,
    lemma7_residuals, lee_form_parallel_residual, nabla_stacked, skl_torsion_identities,
};
use crate::connections::{
    balanced_identity_residual, gauduchon_torsion, riemannian_structure_residual,
    structure_residual,
};
use crate::curvature::{
    chern_components, ddbar_omega_residual, first_bianchi_residual, non_one_one_norm,
    riemannian_components, second_bianchi_residual, strominger_components, type_part_norm,
};
use crate::exterior::{Form, C};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A predicate boolean plus the residual/scale pair that justified it.
/// `value` is absent for predicates the engine deliberately does not decide
/// (strongly Gauduchon needs an exactness certificate; Vaisman is defined
/// for n = 2 only).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredicateRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PredicateRecord {
    fn decided(residual: f64, scale: f64, tol: f64) -> PredicateRecord {
        PredicateRecord {
            value: Some(residual <= tol * (1.0 + scale)),
            residual: Some(residual),
            scale: Some(scale),
            note: None,
        }
    }

    pub fn is_true(&self) -> bool {
        self.value == Some(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Vacuous,
}

/// One lemma/theorem check: its residual, the scale used for the relative
/// comparison, and the three-valued outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub status: CheckStatus,
    pub residual: f64,
    pub scale: f64,
}

impl IdentityRecord {
    fn checked(residual: f64, scale: f64, tol: f64) -> IdentityRecord {
        let status =
            if residual <= tol * (1.0 + scale) { CheckStatus::Pass } else { CheckStatus::Fail };
        IdentityRecord { status, residual, scale }
    }

    fn gated(applies: bool, residual: f64, scale: f64, tol: f64) -> IdentityRecord {
        if applies {
            IdentityRecord::checked(residual, scale, tol)
        } else {
            IdentityRecord { status: CheckStatus::Vacuous, residual, scale }
        }
    }

    fn implication(hypothesis: bool, conclusion: bool, residual: f64, scale: f64) -> IdentityRecord {
        let status = if !hypothesis {
            CheckStatus::Vacuous
        } else if conclusion {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        IdentityRecord { status, residual, scale }
    }
}

/// Structured verification output: predicate booleans with witnessing
/// residuals, per-identity pass/fail records, headline scalars, and
/// provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub input: String,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub predicates: BTreeMap<String, PredicateRecord>,
    pub identities: BTreeMap<String, IdentityRecord>,
    pub scalars: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<serde_json::Value>,
}

impl Report {
    pub fn predicate(&self, name: &str) -> Option<&PredicateRecord> {
        self.predicates.get(name)
    }

    pub fn predicate_value(&self, name: &str) -> Option<bool> {
        self.predicates.get(name).and_then(|p| p.value)
    }

    pub fn identity(&self, name: &str) -> Option<&IdentityRecord> {
        self.identities.get(name)
    }

    pub fn failed_identities(&self) -> Vec<&str> {
        self.identities
            .iter()
            .filter(|(_, r)| r.status == CheckStatus::Fail)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// True iff no identity failed (vacuous counts as pass).
    pub fn all_pass(&self) -> bool {
        self.identities.values().all(|r| r.status != CheckStatus::Fail)
    }
}

/// Intermediate predicate evaluation shared by the individual `is_*`
/// operations and the full suite.
pub struct Predicates {
    pub kahler: PredicateRecord,
    pub balanced: PredicateRecord,
    pub gauduchon: PredicateRecord,
    pub pluriclosed: PredicateRecord,
    pub skl: PredicateRecord,
    pub chern_flat: PredicateRecord,
    pub strominger_flat: PredicateRecord,
    pub torsion_parallel: PredicateRecord,
    pub vaisman: PredicateRecord,
    /// Agreement defect between the Lemma-4 route and the component route.
    pub skl_route_gap: f64,
    pub skl_residual_lemma4: f64,
    pub skl_residual_components: f64,
    pub balanced_residual_domega: f64,
    pub vaisman_residual: f64,
}

/// `|| d omega ||` against tolerance: the Kaehler predicate.
pub fn is_kahler(an: &Analysis, tol: f64) -> PredicateRecord {
    let r = an.algebra.d(&an.omega).norm();
    let scale = an.omega.norm() * (1.0 + an.algebra.structure_norm());
    PredicateRecord::decided(r, scale, tol)
}

/// `|| eta ||` against tolerance: balanced iff the torsion trace vanishes.
pub fn is_balanced(an: &Analysis, tol: f64) -> PredicateRecord {
    let (t2, e2) = an.torsion.norms();
    PredicateRecord::decided(e2.sqrt(), 1.0 + t2.sqrt(), tol)
}

/// `|| del delbar omega^{n-1} ||` against tolerance.
pub fn is_gauduchon(an: &Analysis, tol: f64) -> PredicateRecord {
    let n = an.dim();
    let wk = an.omega.wedge_pow(n - 1);
    let r = an.algebra.del(&an.algebra.delbar(&wk)).norm();
    let (t2, _) = an.torsion.norms();
    let scale = (1.0 + t2 + an.big_theta.entries.norm()) * (1.0 + wk.norm());
    PredicateRecord::decided(r, scale, tol)
}

/// `|| del delbar omega ||` against tolerance: the pluriclosed predicate.
pub fn is_pluriclosed(an: &Analysis, tol: f64) -> PredicateRecord {
    let r = an.algebra.del(&an.algebra.delbar(&an.omega)).norm();
    let (t2, _) = an.torsion.norms();
    let scale = 1.0 + t2 + an.big_theta.entries.norm();
    PredicateRecord::decided(r, scale, tol)
}

/// Strominger Kaehler-like, via both routes: (i) the form residual
/// `|| t^phi ^ Theta^s ||` and (ii) the component route (first-Bianchi
/// cyclic sums on the (2,0) block, the symmetric-pair defect on (1,1), and
/// the (0,2) norm). The two agree up to rounding; the boolean uses their max.
pub fn is_skl(an: &Analysis, tol: f64) -> (PredicateRecord, f64, f64, f64) {
    let n = an.dim();
    let row = an.big_theta_s.entries.phi_row_wedge();
    let r_lemma4 = (row.iter().map(|f| f.norm_sq()).sum::<f64>() + 0.0).sqrt();

    let rs = strominger_components(&an.big_theta_s);
    let mut comp_sq = 0.0f64;
    // (2,0) block: cyclic first-Bianchi sums
    for l in 0..n {
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let cyc = rs[a][b][c][l] + rs[b][c][a][l] + rs[c][a][b][l];
                    comp_sq += cyc.norm_sqr();
                }
            }
        }
    }
    // (1,1) block: symmetry in the first and third slots
    for l in 0..n {
        for j in 0..n {
            for k in 0..n {
                for i in (k + 1)..n {
                    let d = rs[i][n + j][k][l] - rs[k][n + j][i][l];
                    comp_sq += d.norm_sqr();
                }
            }
        }
    }
    // (0,2) block
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in (i + 1)..n {
                    comp_sq += rs[n + i][n + j][k][l].norm_sqr();
                }
            }
        }
    }
    let r_comp = comp_sq.sqrt();
    let (t2, _) = an.torsion.norms();
    let scale = 1.0 + t2 + an.big_theta_s.entries.norm();
    let rec = PredicateRecord::decided(r_lemma4.max(r_comp), scale, tol);
    (rec, r_lemma4, r_comp, (r_lemma4 - r_comp).abs())
}

pub fn is_chern_flat(an: &Analysis, tol: f64) -> PredicateRecord {
    let r = an.big_theta.entries.norm();
    let s = an.algebra.structure_norm();
    PredicateRecord::decided(r, 1.0 + s + s * s, tol)
}

pub fn is_strominger_flat(an: &Analysis, tol: f64) -> PredicateRecord {
    let r = an.big_theta_s.entries.norm();
    let s = an.algebra.structure_norm();
    PredicateRecord::decided(r, 1.0 + s + s * s, tol)
}

/// Max component of `nabla^s T` over all directions.
pub fn is_torsion_parallel(an: &Analysis, tol: f64) -> PredicateRecord {
    let r = (an.strom_derivs.hol.norm_sq() + an.strom_derivs.anti.norm_sq()).sqrt();
    let (t2, _) = an.torsion.norms();
    PredicateRecord::decided(r, 1.0 + t2, tol)
}

/// Vaisman predicate (n = 2 only): the Lee form `eta + conj(eta)` is
/// parallel under the Riemannian connection. For `eta = 0` inputs the
/// predicate is defined as the Kaehler predicate (balanced surfaces are
/// Kaehler). Returns the raw residual alongside.
pub fn is_vaisman(an: &Analysis, tol: f64) -> (PredicateRecord, f64) {
    let residual = lee_form_parallel_residual(&an.torsion, &an.theta1, &an.theta2);
    if an.dim() != 2 {
        return (
            PredicateRecord {
                value: None,
                residual: Some(residual),
                scale: None,
                note: Some(
                    "defined for n = 2 only; Lemma 7 residuals exposed as scalars".to_string(),
                ),
            },
            residual,
        );
    }
    let (t2, e2) = an.torsion.norms();
    if e2.sqrt() <= tol * (1.0 + t2.sqrt()) {
        // degenerate eta = 0 case: defined as the Kaehler predicate
        let mut rec = is_kahler(an, tol);
        rec.note = Some("eta = 0: defined as the Kaehler predicate".to_string());
        return (rec, residual);
    }
    (PredicateRecord::decided(residual, 1.0 + t2, tol), residual)
}

/// Evaluates all predicates at once.
pub fn predicates(an: &Analysis, tol: f64) -> Predicates {
    let (skl, r4, rc, gap) = is_skl(an, tol);
    let (vaisman, vres) = is_vaisman(an, tol);
    // balanced cross-check residual: || d omega^{n-1} ||
    let wk = an.omega.wedge_pow(an.dim() - 1);
    let balanced_residual_domega = an.algebra.d(&wk).norm();
    Predicates {
        kahler: is_kahler(an, tol),
        balanced: is_balanced(an, tol),
        gauduchon: is_gauduchon(an, tol),
        pluriclosed: is_pluriclosed(an, tol),
        skl,
        chern_flat: is_chern_flat(an, tol),
        strominger_flat: is_strominger_flat(an, tol),
        torsion_parallel: is_torsion_parallel(an, tol),
        vaisman,
        skl_route_gap: gap,
        skl_residual_lemma4: r4,
        skl_residual_components: rc,
        balanced_residual_domega,
        vaisman_residual: vres,
    }
}

/// Runs every structural identity, classification predicate, and theorem
/// implication on the computed pipeline and assembles the report.
pub fn theorem_suite(an: &Analysis, input: &str, tol: f64, seed: Option<u64>) -> Report {
    let n = an.dim();
    let (t2, e2) = an.torsion.norms();
    let s0 = an.algebra.structure_norm();
    let p = predicates(an, tol);

    let mut identities: BTreeMap<String, IdentityRecord> = BTreeMap::new();
    let mut scalars: BTreeMap<String, f64> = BTreeMap::new();

    // ---- universal structural identities ----
    let scale_1 = 1.0 + s0;
    identities.insert(
        "eq1_structure".into(),
        IdentityRecord::checked(structure_residual(&an.algebra, &an.theta, &an.tau), scale_1, tol),
    );
    let scale_cubic = (1.0 + s0).powi(3);
    identities.insert(
        "eq3_first_bianchi".into(),
        IdentityRecord::checked(
            first_bianchi_residual(&an.algebra, &an.theta, &an.tau, &an.big_theta),
            scale_cubic,
            tol,
        ),
    );
    identities.insert(
        "eq4_second_bianchi_chern".into(),
        IdentityRecord::checked(
            second_bianchi_residual(&an.algebra, &an.theta, &an.big_theta),
            scale_cubic,
            tol,
        ),
    );
    identities.insert(
        "eq4_second_bianchi_strominger".into(),
        IdentityRecord::checked(
            second_bianchi_residual(&an.algebra, &an.theta_s, &an.big_theta_s),
            scale_cubic,
            tol,
        ),
    );
    identities.insert(
        "riemannian_structure_eq".into(),
        IdentityRecord::checked(
            riemannian_structure_residual(&an.algebra, &an.theta1, &an.theta2),
            scale_1,
            tol,
        ),
    );
    identities.insert(
        "eq12_balanced_identity".into(),
        IdentityRecord::checked(
            balanced_identity_residual(&an.algebra, &an.torsion),
            (1.0 + t2.sqrt()) * (1.0 + an.omega.wedge_pow(n - 1).norm()),
            tol,
        ),
    );
    identities.insert(
        "lemma1_ddbar_omega".into(),
        IdentityRecord::checked(
            ddbar_omega_residual(&an.algebra, &an.tau, &an.big_theta),
            (1.0 + s0).powi(2),
            tol,
        ),
    );
    identities.insert(
        "chern_curvature_type_11".into(),
        IdentityRecord::checked(non_one_one_norm(&an.big_theta), (1.0 + s0).powi(2), tol),
    );
    identities.insert(
        "gray_theta2_02".into(),
        IdentityRecord::checked(type_part_norm(&an.big_theta2, 0, 2), (1.0 + s0).powi(2), tol),
    );
    // Eq. (19): R_{ijkl} = R_{ibar jbar kbar lbar} = 0 from the component route
    let rr = riemannian_components(&an.big_theta1, &an.big_theta2);
    let mut unbarred = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    unbarred += rr[i][j][k][l].norm_sqr() + rr[n + i][n + j][n + k][n + l].norm_sqr();
                }
            }
        }
    }
    identities.insert(
        "eq19_unbarred_blocks".into(),
        IdentityRecord::checked(unbarred.sqrt(), (1.0 + s0).powi(2), tol),
    );
    // Lemma 2 anchors (Chern covariant derivatives)
    let rc = chern_components(&an.big_theta);
    let chern_derivs = crate::calculus::torsion_derivatives(&an.torsion, &an.chern_eval);
    let l2 = lemma2_residuals(&an.torsion, &chern_derivs, &rc, &rr);
    let scale_l2 = (1.0 + t2) * (1.0 + s0);
    for (idx, r) in l2.iter().enumerate() {
        identities.insert(
            format!("lemma2_eq{}", 21 + idx),
            IdentityRecord::checked(*r, scale_l2, tol),
        );
    }
    // total skew-symmetry of the Strominger torsion (t = 2 of Eq. (10))
    let ts = gauduchon_torsion(&an.torsion, 2.0);
    identities.insert(
        "strominger_torsion_totally_skew".into(),
        IdentityRecord::checked(ts.total_skew_defect(), 1.0 + t2.sqrt(), tol),
    );
    // balanced cross-check: the eta route and the d(omega^{n-1}) route agree
    let balanced_via_domega =
        p.balanced_residual_domega <= tol * (1.0 + (1.0 + t2.sqrt()) * an.omega.wedge_pow(n - 1).norm());
    identities.insert(
        "balanced_cross_check".into(),
        IdentityRecord {
            status: if p.balanced.is_true() == balanced_via_domega {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            residual: p.balanced_residual_domega,
            scale: 1.0 + t2.sqrt(),
        },
    );
    // the two SKL routes must agree
    identities.insert(
        "skl_route_agreement".into(),
        IdentityRecord::checked(p.skl_route_gap, 1.0 + p.skl_residual_lemma4, 1e-10_f64.max(tol)),
    );

    // ---- theorem implications ----
    let skl = p.skl.is_true();
    let scale_impl = 1.0 + t2;
    identities.insert(
        "theorem1_skl_implies_pluriclosed".into(),
        IdentityRecord::implication(
            skl,
            p.pluriclosed.is_true(),
            p.pluriclosed.residual.unwrap_or(0.0),
            scale_impl,
        ),
    );
    identities.insert(
        "theorem2_skl_implies_parallel_torsion".into(),
        IdentityRecord::implication(
            skl,
            p.torsion_parallel.is_true(),
            p.torsion_parallel.residual.unwrap_or(0.0),
            scale_impl,
        ),
    );
    identities.insert(
        "theorem3_pluriclosed_iff_parallel_given_skl".into(),
        IdentityRecord::implication(
            skl,
            p.pluriclosed.is_true() == p.torsion_parallel.is_true(),
            p.pluriclosed.residual.unwrap_or(0.0).max(p.torsion_parallel.residual.unwrap_or(0.0)),
            scale_impl,
        ),
    );
    identities.insert(
        "corollary4_skl_implies_pluriclosed_and_parallel".into(),
        IdentityRecord::implication(
            skl,
            p.pluriclosed.is_true() && p.torsion_parallel.is_true(),
            p.pluriclosed.residual.unwrap_or(0.0).max(p.torsion_parallel.residual.unwrap_or(0.0)),
            scale_impl,
        ),
    );
    identities.insert(
        "corollary4_pluriclosed_and_parallel_implies_skl".into(),
        IdentityRecord::implication(
            p.pluriclosed.is_true() && p.torsion_parallel.is_true(),
            skl,
            p.skl.residual.unwrap_or(0.0),
            scale_impl,
        ),
    );
    if n == 2 {
        identities.insert(
            "theorem5_skl_iff_parallel_surface".into(),
            IdentityRecord::implication(
                true,
                skl == p.torsion_parallel.is_true(),
                p.skl.residual.unwrap_or(0.0).max(p.torsion_parallel.residual.unwrap_or(0.0)),
                scale_impl,
            ),
        );
        identities.insert(
            "theorem5_parallel_iff_vaisman_surface".into(),
            IdentityRecord::implication(
                true,
                p.torsion_parallel.is_true() == p.vaisman.is_true(),
                p.vaisman_residual.max(p.torsion_parallel.residual.unwrap_or(0.0)),
                scale_impl,
            ),
        );
        identities.insert(
            "surface_t_norm_identity".into(),
            IdentityRecord::checked((t2 - 2.0 * e2).abs(), 1.0 + t2, tol),
        );
    }
    identities.insert(
        "theorem8_skl_implies_gauduchon".into(),
        IdentityRecord::implication(
            skl,
            p.gauduchon.is_true(),
            p.gauduchon.residual.unwrap_or(0.0),
            scale_impl,
        ),
    );
    identities.insert(
        "lemma9_skl_balanced_implies_kahler".into(),
        IdentityRecord::implication(
            skl && p.balanced.is_true(),
            p.kahler.is_true(),
            p.kahler.residual.unwrap_or(0.0),
            scale_impl,
        ),
    );

    // ---- SKL-conditional identity suites ----
    let scale_skl = (1.0 + t2).powi(2);
    for r in skl_torsion_identities(&an.torsion, &an.strom_derivs, &an.derived) {
        identities.insert(r.name.into(), IdentityRecord::gated(skl, r.residual, scale_skl, tol));
    }
    for r in eta_identities(&an.torsion, &an.strom_eval, &an.derived) {
        identities.insert(r.name.into(), IdentityRecord::gated(skl, r.residual, scale_skl, tol));
    }
    identities.insert(
        "commutativity_eta".into(),
        IdentityRecord::gated(
            skl,
            commutativity_residual(&an.torsion, &an.strom_eval),
            scale_skl,
            tol,
        ),
    );
    for r in lemma15_check(&an.algebra, &an.torsion, &an.derived) {
        identities.insert(r.name.into(), IdentityRecord::gated(skl, r.residual, scale_skl, tol));
    }
    // Lemma 9, both expressions, as form equalities
    let wk = an.omega.wedge_pow(n - 1);
    let wn = an.omega.wedge_pow(n);
    let lhs9 = an
        .algebra
        .del(&an.algebra.delbar(&wk))
        .scale(C::new(0.0, -1.0));
    let eta_anti = nabla_stacked(&eta_indexed(&an.torsion), &an.strom_eval, true);
    let mut eta_trace = C::new(0.0, 0.0);
    for r in 0..n {
        eta_trace += eta_anti.get(&[r, r]);
    }
    // universal pin of the omega^n / n normalization and the eta trace:
    // sqrt(-1) delbar eta ^ omega^{n-1} = -(sum_i eta_{i,ibar} + 2|eta|^2) omega^n / n
    {
        let lhs = an
            .algebra
            .delbar(&an.torsion.eta_form())
            .wedge(&wk)
            .scale(C::new(0.0, 1.0));
        let rhs = wn.scale((eta_trace + 2.0 * e2) * (-1.0 / n as f64));
        identities.insert(
            "eta_trace_form_identity".into(),
            IdentityRecord::checked(
                lhs.sub(&rhs).norm(),
                (1.0 + t2) * (1.0 + wn.norm()),
                tol,
            ),
        );
    }
    let rhs9a = wn.scale(eta_trace * (2.0 / n as f64));
    let rhs9b = wn.scale_re((4.0 / (3.0 * n as f64)) * (t2 - 2.0 * e2));
    let scale9 = (1.0 + t2) * (1.0 + wn.norm());
    identities.insert(
        "lemma9_identity_trace_form".into(),
        IdentityRecord::gated(skl, lhs9.sub(&rhs9a).norm(), scale9, tol),
    );
    identities.insert(
        "lemma9_identity_torsion_form".into(),
        IdentityRecord::gated(skl, lhs9.sub(&rhs9b).norm(), scale9, tol),
    );
    // sqrt(-1) del delbar omega = -(1/3) sum P^{jl}_{ik} phi_i phi_k phibar_j phibar_l
    let lhs_p = an.algebra.del(&an.algebra.delbar(&an.omega)).scale(C::new(0.0, 1.0));
    let mut rhs_p = Form::zero(n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let coef = an.derived.p[i][k][j][l] * (-1.0 / 3.0);
                    let mono = Form::hol(n, i)
                        .wedge(&Form::hol(n, k))
                        .wedge(&Form::anti(n, j))
                        .wedge(&Form::anti(n, l));
                    rhs_p = rhs_p.add(&mono.scale(coef));
                }
            }
        }
    }
    identities.insert(
        "theorem3_ddbar_p_identity".into(),
        IdentityRecord::gated(skl, lhs_p.sub(&rhs_p).norm(), scale_skl, tol),
    );
    // remark: del omega ^ delbar omega ^ omega^{n-3} = 0 for n >= 3
    if n >= 3 {
        let r = an
            .algebra
            .del(&an.omega)
            .wedge(&an.algebra.delbar(&an.omega))
            .wedge(&an.omega.wedge_pow(n - 3))
            .norm();
        identities.insert(
            "remark_del_omega_wedge".into(),
            IdentityRecord::gated(skl, r, scale_skl * (1.0 + wn.norm()), tol),
        );
    }

    // ---- scalars ----
    scalars.insert("norm_t_sq".into(), t2);
    scalars.insert("norm_eta_sq".into(), e2);
    scalars.insert("structure_norm".into(), s0);
    scalars.insert("skl_residual_lemma4".into(), p.skl_residual_lemma4);
    scalars.insert("skl_residual_components".into(), p.skl_residual_components);
    scalars.insert("kahler_residual".into(), p.kahler.residual.unwrap_or(0.0));
    scalars.insert("balanced_residual_eta".into(), p.balanced.residual.unwrap_or(0.0));
    scalars.insert("balanced_residual_domega".into(), p.balanced_residual_domega);
    scalars.insert("pluriclosed_residual".into(), p.pluriclosed.residual.unwrap_or(0.0));
    scalars.insert("gauduchon_residual".into(), p.gauduchon.residual.unwrap_or(0.0));
    scalars.insert("chern_flat_residual".into(), p.chern_flat.residual.unwrap_or(0.0));
    scalars
        .insert("strominger_flat_residual".into(), p.strominger_flat.residual.unwrap_or(0.0));
    scalars
        .insert("torsion_parallel_residual".into(), p.torsion_parallel.residual.unwrap_or(0.0));
    scalars.insert("vaisman_residual".into(), p.vaisman_residual);
    let (l7a, l7b) = lemma7_residuals(&an.torsion, &an.strom_eval);
    scalars.insert("lemma7_eq1_residual".into(), l7a);
    scalars.insert("lemma7_eq2_residual".into(), l7b);

    // ---- predicate map ----
    let mut predicates: BTreeMap<String, PredicateRecord> = BTreeMap::new();
    predicates.insert("kahler".into(), p.kahler);
    predicates.insert("balanced".into(), p.balanced);
    predicates.insert("gauduchon".into(), p.gauduchon);
    predicates.insert("pluriclosed".into(), p.pluriclosed);
    predicates.insert("skl".into(), p.skl);
    predicates.insert("chern_flat".into(), p.chern_flat);
    predicates.insert("strominger_flat".into(), p.strominger_flat);
    predicates.insert("torsion_parallel".into(), p.torsion_parallel);
    predicates.insert("vaisman".into(), p.vaisman);
    predicates.insert(
        "strongly_gauduchon".into(),
        PredicateRecord {
            value: None,
            residual: None,
            scale: None,
            note: Some("not implemented: existence predicate".to_string()),
        },
    );

    Report {
        input: input.to_string(),
        tolerance: tol,
        seed,
        predicates,
        identities,
        scalars,
        trace: None,
    }
}
