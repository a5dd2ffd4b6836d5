//! Mirror-prox saddle-point solver for the semidefinite relaxation
//! `max_{M in M1} tr(S M) - lambda |M|_1`, rewritten as the bilinear game
//! `max_{M in M1} min_{|U|_inf <= lambda} tr((S + U) M)`.
//!
//! Per iteration, with step `1/sqrt(2)` and starting from `M = I/p, U = 0`:
//! extragradient steps project onto the clip set (for `U`) and the
//! spectahedron (for `M`), and the output is the running average of the
//! intermediate primal iterates. Stopping is by the primal-dual gap
//! `lambda_1(U_avg + S) - { tr(M_avg S) - lambda |M_avg|_1 }` evaluated on
//! the running averages every `gap_check_period` iterations, or after
//! `min(N, max_iterations)` iterations with `N` the theoretical bound.

use super::{iteration_bound, SdpConfig};
use crate::analysis::empirical_covariance;
use crate::error::{Error, Result};
use crate::matcore::{
    leading_eigenvector, project_spectahedron_with, EigWorkspace, MatrixNorm, SymMatrix,
};
use crate::models::DataMatrix;
use std::f64::consts::FRAC_1_SQRT_2;

/// Output of the saddle-point solve.
#[derive(Debug, Clone)]
pub struct SdpResult {
    /// Averaged primal iterate: an epsilon-maximiser when the solve ran to
    /// its bound or the gap certified one.
    pub m_hat: SymMatrix,
    /// Leading eigenvector of `m_hat` (not necessarily sparse).
    pub v_hat: Vec<f64>,
    pub iterations_run: usize,
    /// Last primal-dual gap evaluated on the running averages; `None` only
    /// if no gap evaluation ever ran.
    pub final_gap: Option<f64>,
    /// `tr(S m_hat) - lambda |m_hat|_1`.
    pub objective: f64,
}

fn ensure_finite(m: &SymMatrix, iteration: usize, what: &str) -> Result<()> {
    if m.as_slice().iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NumericalFailure {
            iteration,
            message: format!("{what} produced a non-finite entry"),
        })
    }
}

/// Runs the saddle-point iteration on a sample covariance matrix.
pub fn mirror_prox_sdp(sample_cov: &SymMatrix, cfg: &SdpConfig) -> Result<SdpResult> {
    let p = sample_cov.dim();
    let lambda = cfg.lambda;
    let bound = iteration_bound(lambda, p, cfg.epsilon);
    let total = bound.min(cfg.max_iterations);
    let c = FRAC_1_SQRT_2;

    let mut ws = EigWorkspace::new(p);
    let mut m = SymMatrix::scaled_identity(p, 1.0 / p as f64);
    let mut u = SymMatrix::zeros(p);
    let mut m_prime = SymMatrix::zeros(p);
    let mut u_prime = SymMatrix::zeros(p);
    let mut m_sum = SymMatrix::zeros(p);
    let mut u_sum = SymMatrix::zeros(p);
    let mut m_avg = SymMatrix::zeros(p);
    let mut u_avg = SymMatrix::zeros(p);
    let mut ascent = SymMatrix::zeros(p);

    let mut final_gap = None;
    let mut iterations_run = 0usize;

    for t in 1..=total {
        // intermediate (prime) pair from the previous iterates
        u_prime.entries_mut().copy_from_slice(u.as_slice());
        u_prime.add_scaled(&m, -c)?;
        u_prime.clip_entrywise_in_place(lambda);

        ascent.entries_mut().copy_from_slice(m.as_slice());
        ascent.add_scaled(sample_cov, c)?;
        ascent.add_scaled(&u, c)?;
        ensure_finite(&ascent, t, "primal ascent step")?;
        project_spectahedron_with(&mut ws, &ascent, &mut m_prime)?;

        // full step evaluated at the prime pair
        let (new_u, new_m) = {
            let mut nu = u.clone();
            nu.add_scaled(&m_prime, -c)?;
            nu.clip_entrywise_in_place(lambda);

            ascent.entries_mut().copy_from_slice(m.as_slice());
            ascent.add_scaled(sample_cov, c)?;
            ascent.add_scaled(&u_prime, c)?;
            ensure_finite(&ascent, t, "primal ascent step")?;
            let mut nm = SymMatrix::zeros(p);
            project_spectahedron_with(&mut ws, &ascent, &mut nm)?;
            (nu, nm)
        };
        u = new_u;
        m = new_m;

        m_sum.add_scaled(&m_prime, 1.0)?;
        u_sum.add_scaled(&u_prime, 1.0)?;
        iterations_run = t;

        if t % cfg.gap_check_period == 0 || t == total {
            let inv_t = 1.0 / t as f64;
            m_avg.entries_mut().copy_from_slice(m_sum.as_slice());
            m_avg.scale(inv_t);
            u_avg.entries_mut().copy_from_slice(u_sum.as_slice());
            u_avg.scale(inv_t);
            let gap = gap_of(sample_cov, &m_avg, &u_avg, lambda, &mut ws, &mut ascent)?;
            if !gap.is_finite() {
                return Err(Error::NumericalFailure {
                    iteration: t,
                    message: "primal-dual gap is not finite".into(),
                });
            }
            final_gap = Some(gap);
            if gap <= cfg.epsilon {
                break;
            }
        }
    }

    let inv_t = 1.0 / iterations_run as f64;
    m_avg.entries_mut().copy_from_slice(m_sum.as_slice());
    m_avg.scale(inv_t);
    let objective = m_avg.inner(sample_cov)? - lambda * m_avg.entrywise_norm(MatrixNorm::L1);
    let v_hat = leading_eigenvector(&m_avg)?;
    debug_assert!((m_avg.trace() - 1.0).abs() <= 1e-8);
    Ok(SdpResult {
        m_hat: m_avg,
        v_hat,
        iterations_run,
        final_gap,
        objective,
    })
}

fn gap_of(
    sample_cov: &SymMatrix,
    m_avg: &SymMatrix,
    u_avg: &SymMatrix,
    lambda: f64,
    ws: &mut EigWorkspace,
    scratch: &mut SymMatrix,
) -> Result<f64> {
    scratch.entries_mut().copy_from_slice(u_avg.as_slice());
    scratch.add_scaled(sample_cov, 1.0)?;
    let top = ws.max_eigenvalue(scratch)?;
    let objective = m_avg.inner(sample_cov)? - lambda * m_avg.entrywise_norm(MatrixNorm::L1);
    Ok(top - objective)
}

/// Primal-dual gap `lambda_1(U + S) - { tr(M S) - lambda |M|_1 }` for a
/// feasible pair: `M` must lie in the spectahedron and `U` in the entrywise
/// clip set, both up to a `1e-8` tolerance.
pub fn primal_dual_gap(
    sample_cov: &SymMatrix,
    m_bar: &SymMatrix,
    u_bar: &SymMatrix,
    lambda: f64,
) -> Result<f64> {
    let p = sample_cov.dim();
    if m_bar.dim() != p || u_bar.dim() != p {
        return Err(Error::DimensionMismatch(
            "gap arguments must share the covariance dimension".into(),
        ));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "penalty level must be non-negative, got {lambda}"
        )));
    }
    let tol = 1e-8;
    if (m_bar.trace() - 1.0).abs() > tol {
        return Err(Error::InvalidParameter(format!(
            "primal argument has trace {}, not 1",
            m_bar.trace()
        )));
    }
    let spectrum = crate::matcore::eig_sym(m_bar)?;
    let min_eig = *spectrum.eigenvalues().last().expect("non-empty spectrum");
    if min_eig < -tol {
        return Err(Error::InvalidParameter(format!(
            "primal argument has eigenvalue {min_eig} below the feasibility tolerance"
        )));
    }
    if u_bar.entrywise_norm(MatrixNorm::LInf) > lambda + tol {
        return Err(Error::InvalidParameter(
            "dual argument exceeds the entrywise clip level".into(),
        ));
    }
    let mut ws = EigWorkspace::new(p);
    let mut scratch = SymMatrix::zeros(p);
    gap_of(sample_cov, m_bar, u_bar, lambda, &mut ws, &mut scratch)
}

/// Full estimation pipeline: sample covariance, saddle-point solve, leading
/// eigenvector of the averaged iterate. The returned vector is dense and
/// not necessarily sparse.
pub fn sdp_estimate(x: &DataMatrix, cfg: &SdpConfig) -> Result<(Vec<f64>, SdpResult)> {
    if x.p() < 2 {
        return Err(Error::InvalidParameter("need at least two columns".into()));
    }
    let sample_cov = empirical_covariance(x);
    let result = mirror_prox_sdp(&sample_cov, cfg)?;
    Ok((result.v_hat.clone(), result))
}
