//! Derivative-free minimization of the Strominger Kaehler-like residual
//! over Hermitian metric parameters on a fixed coframe.
//!
//! The metric is parameterized by its triangular factor (diagonal entries
//! exponentially reparameterized), so every parameter vector is a valid
//! positive-definite metric and the optimizer is unconstrained. The first
//! diagonal entry is pinned to 1: the residual is scale-invariant, and the
//! gauge removes the flat direction.

use crate::connections::{chern_connection, gamma, gauduchon_connection, torsion_components};
use crate::curvature::curvature;
use crate::exterior::{FrameAlgebra, C};
use crate::hermitian::{unitary_reduce, HermitianMetric, MetricError};
use crate::linalg::{adjoint, mat_mul, zeros, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Metric parameterization by a lower-triangular factor `L` with strictly
/// positive real diagonal: `g = L L*`. Layout: `n` log-diagonal entries,
/// then (re, im) pairs for the strictly lower triangle, row by row —
/// `n^2` real parameters, smoothly and surjectively covering the
/// positive-definite Hermitian matrices.
#[derive(Debug, Clone, Copy)]
pub struct MetricParameterization {
    n: usize,
}

impl MetricParameterization {
    pub fn new(n: usize) -> MetricParameterization {
        MetricParameterization { n }
    }

    pub fn param_count(&self) -> usize {
        self.n * self.n
    }

    pub fn lower_factor(&self, params: &[f64]) -> Mat {
        let n = self.n;
        assert_eq!(params.len(), self.param_count());
        let mut l = zeros(n);
        for i in 0..n {
            l[i][i] = C::new(params[i].exp(), 0.0);
        }
        let mut off = n;
        for i in 1..n {
            for j in 0..i {
                l[i][j] = C::new(params[off], params[off + 1]);
                off += 2;
            }
        }
        l
    }

    pub fn metric(&self, params: &[f64]) -> HermitianMetric {
        let l = self.lower_factor(params);
        let g = mat_mul(&l, &adjoint(&l));
        HermitianMetric::new(g, 1e-9).expect("L L* is positive definite by construction")
    }

    /// Parameters for a given metric, normalized to the `L_{11} = 1` gauge
    /// (the metric is rescaled; the residual is scale-invariant).
    pub fn params_from_metric(&self, g: &HermitianMetric) -> Result<Vec<f64>, MetricError> {
        let l = g.cholesky()?;
        let s = l[0][0].re;
        let mut params = vec![0.0; self.param_count()];
        for i in 0..self.n {
            params[i] = (l[i][i].re / s).ln();
        }
        let mut off = self.n;
        for i in 1..self.n {
            for j in 0..i {
                params[off] = l[i][j].re / s;
                params[off + 1] = l[i][j].im / s;
                off += 2;
            }
        }
        Ok(params)
    }
}

/// The three scale-relative residuals tracked along a search trajectory.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResidualTriple {
    pub skl: f64,
    pub pluriclosed: f64,
    pub torsion_parallel: f64,
}

/// Scale-relative Strominger Kaehler-like residual of `(algebra, metric)`:
/// `|| t^phi ^ Theta^s || / max(|T|^2, eps)`. Zero iff the metric is
/// Kaehler-like for the Strominger connection (within floating point);
/// invariant under metric rescaling, so degenerating the metric cannot fake
/// convergence.
pub fn skl_residual(a: &FrameAlgebra, params: &[f64]) -> f64 {
    residual_triple(a, params).map(|t| t.skl).unwrap_or(f64::INFINITY)
}

/// All three residuals; `Err` means the parameter vector produced a metric
/// the reduction rejected (numerically degenerate).
pub fn residual_triple(a: &FrameAlgebra, params: &[f64]) -> Result<ResidualTriple, String> {
    let par = MetricParameterization::new(a.dim());
    if params.iter().any(|p| !p.is_finite()) {
        return Err("non-finite parameters".to_string());
    }
    let metric = par.metric(params);
    let reduced = unitary_reduce(a, &metric, 1e-6).map_err(|e| e.to_string())?;
    Ok(residual_triple_unitary(&reduced))
}

/// Residuals computed directly in a unitary coframe.
pub fn residual_triple_unitary(a: &FrameAlgebra) -> ResidualTriple {
    let (theta, tau) = chern_connection(a);
    let t = torsion_components(&tau);
    let g = gamma(&t);
    let theta_s = gauduchon_connection(&theta, &g, 2.0);
    let big_s = curvature(a, &theta_s);
    let row = big_s.entries.phi_row_wedge();
    let num_skl = (row.iter().map(|f| f.norm_sq()).sum::<f64>() + 0.0).sqrt();
    let (t2, _) = t.norms();
    let denom = t2.max(1e-30);

    let omega = crate::hermitian::kahler_form(a);
    let num_pc = a.del(&a.delbar(&omega)).norm();

    let strom_eval = crate::calculus::ConnectionEval::new(&theta_s);
    let derivs = crate::calculus::torsion_derivatives(&t, &strom_eval);
    let num_par = (derivs.hol.norm_sq() + derivs.anti.norm_sq()).sqrt();

    ResidualTriple {
        skl: num_skl / denom,
        pluriclosed: num_pc / denom,
        torsion_parallel: num_par / denom,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// Residual reached `residual_tol`.
    Converged,
    /// Simplex collapsed below `step_tol` before converging.
    Stalled,
    MaxIterReached,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOptions {
    pub max_iter: usize,
    pub step_tol: f64,
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions { max_iter: 5000, step_tol: 1e-12, residual_tol: 1e-10, seed: 0 }
    }
}

/// One accepted improvement along the search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub params: Vec<f64>,
    pub skl_residual: f64,
    pub pluriclosed_residual: f64,
    pub torsion_parallel_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchTrace {
    /// Which derivative-free method produced the trace.
    pub method: String,
    pub status: SearchStatus,
    pub iterations_run: usize,
    pub evaluations: usize,
    pub final_residual: f64,
    pub records: Vec<IterationRecord>,
}

struct Objective<'a> {
    algebra: &'a FrameAlgebra,
    evaluations: usize,
}

impl Objective<'_> {
    fn eval(&mut self, free: &[f64]) -> f64 {
        self.evaluations += 1;
        let params = assemble(free);
        match residual_triple(self.algebra, &params) {
            Ok(t) => {
                if t.skl.is_finite() {
                    t.skl
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        }
    }
}

/// Free parameters exclude the gauged first log-diagonal entry.
fn assemble(free: &[f64]) -> Vec<f64> {
    let mut params = Vec::with_capacity(free.len() + 1);
    params.push(0.0);
    params.extend_from_slice(free);
    params
}

fn strip(params: &[f64]) -> Vec<f64> {
    params[1..].to_vec()
}

/// Nelder-Mead simplex search for a Strominger Kaehler-like metric,
/// deterministic per seed. Terminates when the residual reaches
/// `residual_tol`, the simplex diameter drops below `step_tol`, or
/// `max_iter` is reached; non-convergence is a status, not an error.
pub fn minimize(
    a: &FrameAlgebra,
    init: &[f64],
    opts: &SearchOptions,
) -> (Vec<f64>, SearchTrace) {
    let par = MetricParameterization::new(a.dim());
    assert_eq!(init.len(), par.param_count(), "parameter count mismatch");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dim = par.param_count() - 1;
    let mut obj = Objective { algebra: a, evaluations: 0 };

    // initial simplex: the start plus one jittered step per free direction
    let x0 = {
        let mut x = strip(init);
        debug_assert_eq!(x.len(), dim);
        // the gauge normalization may have rescaled; keep as-is
        x.shrink_to_fit();
        x
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let f0 = obj.eval(&x0);
    simplex.push((x0.clone(), f0));
    for i in 0..dim {
        let mut x = x0.clone();
        let h = 0.1 * (1.0 + x[i].abs()) * (1.0 + 0.1 * rng.gen_range(-1.0..1.0f64));
        x[i] += h;
        let f = obj.eval(&x);
        simplex.push((x, f));
    }

    let mut records: Vec<IterationRecord> = Vec::new();
    let mut best_so_far = f64::INFINITY;
    let record_best = |iter: usize, x: &[f64], f: f64, best: &mut f64, recs: &mut Vec<IterationRecord>, obj: &mut Objective| {
        if f < *best {
            *best = f;
            let params = assemble(x);
            let triple = residual_triple(obj.algebra, &params).unwrap_or(ResidualTriple {
                skl: f64::INFINITY,
                pluriclosed: f64::INFINITY,
                torsion_parallel: f64::INFINITY,
            });
            recs.push(IterationRecord {
                iter,
                params,
                skl_residual: triple.skl,
                pluriclosed_residual: triple.pluriclosed,
                torsion_parallel_residual: triple.torsion_parallel,
            });
        }
    };

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    record_best(0, &simplex[0].0, simplex[0].1, &mut best_so_far, &mut records, &mut obj);

    let (alpha, gamma_e, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut iter = 0usize;
    let status = loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best_f = simplex[0].1;
        if best_f <= opts.residual_tol {
            break SearchStatus::Converged;
        }
        if iter >= opts.max_iter {
            break SearchStatus::MaxIterReached;
        }
        // simplex diameter in parameter space
        let mut diam = 0.0f64;
        for i in 1..simplex.len() {
            let d: f64 = simplex[0]
                .0
                .iter()
                .zip(&simplex[i].0)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            diam = diam.max(d);
        }
        if diam < opts.step_tol {
            break SearchStatus::Stalled;
        }
        iter += 1;

        let worst = simplex[dim].clone();
        let second_worst_f = simplex[dim - 1].1;
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(&v.0) {
                *c += x / dim as f64;
            }
        }
        let reflect: Vec<f64> =
            centroid.iter().zip(&worst.0).map(|(c, w)| c + alpha * (c - w)).collect();
        let f_r = obj.eval(&reflect);
        if f_r < simplex[0].1 {
            let expand: Vec<f64> =
                centroid.iter().zip(&worst.0).map(|(c, w)| c + gamma_e * (c - w)).collect();
            let f_e = obj.eval(&expand);
            if f_e < f_r {
                simplex[dim] = (expand, f_e);
            } else {
                simplex[dim] = (reflect, f_r);
            }
        } else if f_r < second_worst_f {
            simplex[dim] = (reflect, f_r);
        } else {
            let toward = if f_r < worst.1 { &reflect } else { &worst.0 };
            let f_toward = if f_r < worst.1 { f_r } else { worst.1 };
            let contract: Vec<f64> =
                centroid.iter().zip(toward).map(|(c, t)| c + rho * (t - c)).collect();
            let f_c = obj.eval(&contract);
            if f_c < f_toward {
                simplex[dim] = (contract, f_c);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> =
                        best.iter().zip(&v.0).map(|(b, y)| b + sigma * (y - b)).collect();
                    let f = obj.eval(&x);
                    *v = (x, f);
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        record_best(iter, &simplex[0].0, simplex[0].1, &mut best_so_far, &mut records, &mut obj);
    };

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let best = simplex[0].clone();
    let trace = SearchTrace {
        method: "nelder-mead".to_string(),
        status,
        iterations_run: iter,
        evaluations: obj.evaluations,
        final_residual: best.1,
        records,
    };
    (assemble(&best.0), trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn parameterization_round_trip() {
        let par = MetricParameterization::new(3);
        let g = catalog::random_metric(3, 11);
        let p = par.params_from_metric(&g).unwrap();
        let g2 = par.metric(&p);
        // the gauge rescales by 1/L11^2; undo it for comparison
        let l = g.cholesky().unwrap();
        let s = l[0][0].re * l[0][0].re;
        let mut scaled = g.matrix().clone();
        for row in scaled.iter_mut() {
            for z in row.iter_mut() {
                *z /= s;
            }
        }
        assert!(crate::linalg::max_abs_diff(&scaled, g2.matrix()) < 1e-12);
    }

    #[test]
    fn torus_residual_zero_any_params() {
        let a = FrameAlgebra::abelian(2);
        let par = MetricParameterization::new(2);
        let mut params = vec![0.0; par.param_count()];
        params[1] = 0.4;
        params[2] = -0.3;
        params[3] = 0.2;
        assert_eq!(skl_residual(&a, &params), 0.0);
    }

    #[test]
    fn kodaira_identity_residual_tiny() {
        let e = catalog::get("kodaira").unwrap();
        let par = MetricParameterization::new(2);
        let p = par.params_from_metric(&e.metric).unwrap();
        assert!(skl_residual(&e.algebra, &p) < 1e-12);
    }

    #[test]
    fn iwasawa_identity_residual_bounded_away() {
        let e = catalog::get("iwasawa").unwrap();
        let par = MetricParameterization::new(3);
        let p = par.params_from_metric(&e.metric).unwrap();
        let r = skl_residual(&e.algebra, &p);
        assert!(r >= 1e-2, "iwasawa scale-relative residual {r}");
    }

    #[test]
    fn iwasawa_residual_scale_invariant() {
        // rescaling the metric must not change the relative residual
        let e = catalog::get("iwasawa").unwrap();
        let par = MetricParameterization::new(3);
        let p0 = par.params_from_metric(&e.metric).unwrap();
        let r0 = skl_residual(&e.algebra, &p0);
        let mut p = p0.clone();
        p[1] += 0.7; // log-scale second diagonal
        p[2] += 0.7;
        let r1 = skl_residual(&e.algebra, &p);
        assert!(r1 > 1e-3, "degenerate direction must not fake convergence: {r1}");
        assert!(r0 > 1e-3);
    }

    #[test]
    fn minimize_on_torus_converges_immediately() {
        let a = FrameAlgebra::abelian(2);
        let par = MetricParameterization::new(2);
        let init = vec![0.0; par.param_count()];
        let (p, trace) = minimize(&a, &init, &SearchOptions::default());
        assert_eq!(trace.status, SearchStatus::Converged);
        assert_eq!(trace.iterations_run, 0);
        assert_eq!(p.len(), par.param_count());
    }

    #[test]
    fn minimize_deterministic_per_seed() {
        let e = catalog::get("iwasawa").unwrap();
        let par = MetricParameterization::new(3);
        let init = par.params_from_metric(&e.metric).unwrap();
        let opts = SearchOptions { max_iter: 60, ..Default::default() };
        let (p1, t1) = minimize(&e.algebra, &init, &opts);
        let (p2, t2) = minimize(&e.algebra, &init, &opts);
        assert_eq!(p1, p2);
        assert_eq!(t1.evaluations, t2.evaluations);
        assert_eq!(t1.records.len(), t2.records.len());
        for (a, b) in t1.records.iter().zip(&t2.records) {
            assert_eq!(a.params, b.params);
            assert_eq!(a.skl_residual, b.skl_residual);
        }
    }

    #[test]
    fn trace_residuals_non_increasing() {
        let e = catalog::get("iwasawa").unwrap();
        let par = MetricParameterization::new(3);
        let mut init = par.params_from_metric(&e.metric).unwrap();
        init[3] += 0.35;
        let opts = SearchOptions { max_iter: 150, ..Default::default() };
        let (_, trace) = minimize(&e.algebra, &init, &opts);
        for w in trace.records.windows(2) {
            assert!(w[1].skl_residual <= w[0].skl_residual + 1e-15);
        }
    }

    #[test]
    fn converged_trajectory_points_are_pluriclosed_and_parallel() {
        // wherever the trace dips below the residual tolerance, the
        // pluriclosed and parallel-torsion residuals follow within 10x
        let e = catalog::get("kodaira").unwrap();
        let par = MetricParameterization::new(2);
        let mut init = par.params_from_metric(&e.metric).unwrap();
        init[1] -= 0.09;
        init[2] += 0.06;
        let opts = SearchOptions::default();
        let (_, trace) = minimize(&e.algebra, &init, &opts);
        assert_eq!(trace.status, SearchStatus::Converged);
        let mut seen = 0;
        for rec in &trace.records {
            if rec.skl_residual <= opts.residual_tol {
                seen += 1;
                assert!(rec.pluriclosed_residual <= 10.0 * opts.residual_tol);
                assert!(rec.torsion_parallel_residual <= 10.0 * opts.residual_tol);
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn kodaira_perturbed_converges() {
        let e = catalog::get("kodaira").unwrap();
        let par = MetricParameterization::new(2);
        let mut init = par.params_from_metric(&e.metric).unwrap();
        // 10% perturbation
        init[1] += 0.1;
        init[2] -= 0.07;
        init[3] += 0.05;
        let (p, trace) = minimize(&e.algebra, &init, &SearchOptions::default());
        assert_eq!(trace.status, SearchStatus::Converged);
        assert!(trace.final_residual <= 1e-8);
        assert!(skl_residual(&e.algebra, &p) <= 1e-8);
    }

    #[test]
    fn iwasawa_never_converges() {
        let e = catalog::get("iwasawa").unwrap();
        let par = MetricParameterization::new(3);
        let init = par.params_from_metric(&e.metric).unwrap();
        let opts = SearchOptions { max_iter: 800, seed: 3, ..Default::default() };
        let (_, trace) = minimize(&e.algebra, &init, &opts);
        assert_ne!(trace.status, SearchStatus::Converged);
        assert!(trace.final_residual > 1e-3, "residual {}", trace.final_residual);
    }
}
