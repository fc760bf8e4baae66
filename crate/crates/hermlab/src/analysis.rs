//! One-shot pipeline: reduce the metric to a unitary coframe, solve for the
//! Chern connection, and derive every connection, torsion, and curvature
//! object the classification and verification layers consume.

use crate::calculus::{
    derived_tensors, torsion_derivatives, ConnectionEval, DerivedTensors, TorsionDerivatives,
};
use crate::connections::{
    chern_connection, gamma, gauduchon_connection, riemannian_blocks, theta2, torsion_components,
    ConnectionForm, FormMatrix, TorsionTensor,
};
use crate::curvature::{curvature, riemannian_curvature, CurvatureForm};
use crate::exterior::{Form, FrameAlgebra};
use crate::hermitian::{kahler_form, unitary_reduce, HermitianMetric, UnitaryReduceError};

/// Everything computed from one (algebra, metric) input, in the unitary
/// coframe. All fields are immutable after construction; the pipeline is a
/// pure function of its input.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub algebra: FrameAlgebra,
    pub tol: f64,
    pub theta: ConnectionForm,
    pub tau: Vec<Form>,
    pub torsion: TorsionTensor,
    pub gamma: FormMatrix,
    pub theta_s: ConnectionForm,
    pub theta1: ConnectionForm,
    pub theta2: ConnectionForm,
    /// Chern curvature.
    pub big_theta: CurvatureForm,
    /// Strominger curvature.
    pub big_theta_s: CurvatureForm,
    /// Riemannian curvature blocks.
    pub big_theta1: CurvatureForm,
    pub big_theta2: CurvatureForm,
    pub omega: Form,
    pub derived: DerivedTensors,
    pub chern_eval: ConnectionEval,
    pub strom_eval: ConnectionEval,
    /// nabla^s of the Chern torsion, both direction families.
    pub strom_derivs: TorsionDerivatives,
}

impl Analysis {
    /// Reduces the metric and runs the full pipeline. The reduction
    /// revalidates the transformed algebra with the tolerance floored at
    /// rounding level, so check tolerances below machine precision do not
    /// reject valid inputs.
    pub fn new(
        algebra: &FrameAlgebra,
        metric: &HermitianMetric,
        tol: f64,
    ) -> Result<Analysis, UnitaryReduceError> {
        let reduced = unitary_reduce(algebra, metric, tol.max(1e-12))?;
        Ok(Analysis::from_unitary(reduced, tol))
    }

    /// Runs the pipeline on an algebra already in a unitary coframe.
    pub fn from_unitary(algebra: FrameAlgebra, tol: f64) -> Analysis {
        let (theta, tau) = chern_connection(&algebra);
        let torsion = torsion_components(&tau);
        let g = gamma(&torsion);
        let th2 = theta2(&torsion);
        let theta_s = gauduchon_connection(&theta, &g, 2.0);
        let (theta1, theta2_block) = riemannian_blocks(&theta, &g, &th2);
        let big_theta = curvature(&algebra, &theta);
        let big_theta_s = curvature(&algebra, &theta_s);
        let (big_theta1, big_theta2) = riemannian_curvature(&algebra, &theta1, &theta2_block);
        let omega = kahler_form(&algebra);
        let derived = derived_tensors(&torsion);
        let chern_eval = ConnectionEval::new(&theta);
        let strom_eval = ConnectionEval::new(&theta_s);
        let strom_derivs = torsion_derivatives(&torsion, &strom_eval);
        Analysis {
            algebra,
            tol,
            theta,
            tau,
            torsion,
            gamma: g,
            theta_s,
            theta1,
            theta2: theta2_block,
            big_theta,
            big_theta_s,
            big_theta1,
            big_theta2,
            omega,
            derived,
            chern_eval,
            strom_eval,
            strom_derivs,
        }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `(|T|^2, |eta|^2)`.
    pub fn torsion_norms(&self) -> (f64, f64) {
        self.torsion.norms()
    }
}
