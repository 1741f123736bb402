//! Search directions: the projected memoryless quasi-Newton direction on
//! `span{g_k, s_{k-1}}`, its truncation and restart tests, the adaptive
//! scaling factor, baseline HZ/DK betas, and eigenvalue diagnostics.
//!
//! With `gg = ||g||^2`, `ss = ||s||^2`, `gs = g^T s`, `gy = g^T y`,
//! `sy = s^T y`, `yy = ||y||^2`, the scaled Perry–Shanno direction is
//!
//! ```text
//! d_ps = -g + [ gy/sy - (tau + yy/sy) * gs/sy ] * s + (gs/sy) * y,
//! ```
//!
//! which satisfies the Dai–Liao conjugacy `d_ps^T y = -tau * gs`. Its
//! least-squares projection onto `span{g, s}` is `u*g + v*s` with
//!
//! ```text
//! u = -1 + gy*gs/(sy*gg) - (gg*gs^2 - gy*gs^3/sy) / (gg * Delta),
//! v = gy/sy + (gg*gs - gy*gs^2/sy) / Delta - (tau + yy/sy) * gs/sy,
//! Delta = gg*ss - gs^2.
//! ```
//!
//! `v` is floored at `eta = -l*|gs|/ss` to rule out the Powell cycling
//! example, and the whole direction degrades to `-g` when the subspace is
//! near-parallel, the gradients lose orthogonality, or curvature fails.

use serde::Serialize;

use crate::model::{IterateState, SolverOptions, TauStrategy};
use crate::{dot, norm_sq, Error};

/// Why a step fell back to the steepest descent direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RestartReason {
    FirstIter,
    NearParallel,
    OrthogonalityFail,
    CurvatureFail,
    CounterRestart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionKind {
    /// d = -g.
    SteepestRestart,
    /// d = u*g + v*s.
    Subspace,
}

/// A computed search direction plus its provenance and diagnostics.
///
/// Scalar diagnostics that do not apply to a given kind are NaN.
#[derive(Debug, Clone)]
pub struct DirectionOutcome {
    pub d: Vec<f64>,
    pub kind: DirectionKind,
    /// Coefficient of g.
    pub u: f64,
    /// Coefficient of s before truncation.
    pub v_raw: f64,
    /// Coefficient of s after truncation.
    pub v: f64,
    /// Truncation floor.
    pub eta: f64,
    /// Floor factor l.
    pub l: f64,
    pub omega_bar: f64,
    pub tau: f64,
    /// g^T d.
    pub gtd: f64,
    /// Dai–Liao parameter of the untruncated direction.
    pub t_dl: f64,
    pub restart_reason: Option<RestartReason>,
}

impl DirectionOutcome {
    /// d = -g, optionally tagged with the restart cause.
    pub fn steepest(g: &[f64], reason: Option<RestartReason>) -> Self {
        let d: Vec<f64> = g.iter().map(|&gi| -gi).collect();
        let gtd = -norm_sq(g);
        DirectionOutcome {
            d,
            kind: DirectionKind::SteepestRestart,
            u: -1.0,
            v_raw: 0.0,
            v: 0.0,
            eta: f64::NAN,
            l: f64::NAN,
            omega_bar: f64::NAN,
            tau: f64::NAN,
            gtd,
            t_dl: f64::NAN,
            restart_reason: reason,
        }
    }
}

/// Smallest-eigenvalue diagnostics of the symmetrized direction operator.
#[derive(Debug, Clone, Copy)]
pub struct EigenDiagnostics {
    /// p = ||y||^2 ||s||^2 / (s^T y)^2, >= 1 by Cauchy–Schwarz.
    pub p: f64,
    /// gamma = tau ||s||^2 / s^T y.
    pub gamma: f64,
    /// lambda_min = (p + gamma - sqrt((p + gamma)^2 - 4 gamma)) / 2.
    pub lambda_min: f64,
}

/// Squared cosine of the angle between g and s, clamped into [0,1].
pub fn omega_bar(g: &[f64], s: &[f64]) -> Result<f64, Error> {
    let gg = norm_sq(g);
    let ss = norm_sq(s);
    if gg == 0.0 {
        return Err(Error::DegenerateVector("g"));
    }
    if ss == 0.0 {
        return Err(Error::DegenerateVector("s"));
    }
    let gs = dot(g, s);
    Ok((gs * gs / (gg * ss)).clamp(0.0, 1.0))
}

/// The scaled Perry–Shanno memoryless quasi-Newton direction.
pub fn perry_shanno(g: &[f64], s: &[f64], y: &[f64], tau: f64) -> Result<Vec<f64>, Error> {
    let sy = dot(s, y);
    if sy <= 0.0 {
        return Err(Error::CurvatureViolated { sty: sy });
    }
    let gy = dot(g, y);
    let gs = dot(g, s);
    let yy = norm_sq(y);
    let cs = gy / sy - (tau + yy / sy) * (gs / sy);
    let cy = gs / sy;
    Ok(g.iter()
        .zip(s.iter().zip(y))
        .map(|(&gi, (&si, &yi))| -gi + cs * si + cy * yi)
        .collect())
}

/// Relative underflow guard on the projection denominator gg*ss - gs^2.
const PARALLEL_GUARD: f64 = 1e2 * f64::EPSILON;

/// Minimum accepted value of -g^T d / ||g||^2 for an assembled direction.
const SUFFICIENT_DESCENT: f64 = 1e-12;

/// Least-squares coefficients (u, v) of the Perry–Shanno direction on
/// span{g, s}. The caller guarantees omega_bar(g, s) <= xi1 < 1.
pub fn project_uv(g: &[f64], s: &[f64], y: &[f64], tau: f64) -> Result<(f64, f64), Error> {
    let sy = dot(s, y);
    if sy <= 0.0 {
        return Err(Error::CurvatureViolated { sty: sy });
    }
    let gg = norm_sq(g);
    let ss = norm_sq(s);
    if gg == 0.0 {
        return Err(Error::DegenerateVector("g"));
    }
    if ss == 0.0 {
        return Err(Error::DegenerateVector("s"));
    }
    let gs = dot(g, s);
    let gy = dot(g, y);
    let yy = norm_sq(y);
    let delta = gg * ss - gs * gs;
    if delta < PARALLEL_GUARD * gg * ss {
        return Err(Error::NearParallel {
            omega: (gs * gs / (gg * ss)).clamp(0.0, 1.0),
        });
    }
    let u = -1.0 + gy * gs / (sy * gg) - (gg * gs * gs - gy * gs * gs * gs / sy) / (gg * delta);
    let v = gy / sy + (gg * gs - gy * gs * gs / sy) / delta - (tau + yy / sy) * (gs / sy);
    Ok((u, v))
}

/// The algebraically equivalent rewritten form of [`project_uv`], expressed
/// through omega_bar. Kept separate so the equivalence is testable.
pub fn project_uv_rewritten(
    g: &[f64],
    s: &[f64],
    y: &[f64],
    tau: f64,
) -> Result<(f64, f64), Error> {
    let sy = dot(s, y);
    if sy <= 0.0 {
        return Err(Error::CurvatureViolated { sty: sy });
    }
    let gg = norm_sq(g);
    let ss = norm_sq(s);
    if gg == 0.0 {
        return Err(Error::DegenerateVector("g"));
    }
    if ss == 0.0 {
        return Err(Error::DegenerateVector("s"));
    }
    let gs = dot(g, s);
    let gy = dot(g, y);
    let yy = norm_sq(y);
    let w = (gs * gs / (gg * ss)).clamp(0.0, 1.0);
    if 1.0 - w < PARALLEL_GUARD {
        return Err(Error::NearParallel { omega: w });
    }
    let u = (-1.0 + gy * gs / (sy * gg)) / (1.0 - w);
    let v = (1.0 - 2.0 * w) / (1.0 - w) * (gy / sy)
        - (tau + yy / sy - sy / ((1.0 - w) * ss)) * (gs / sy);
    Ok((u, v))
}

/// Truncation floor: l and eta = -l * |g^T s| / ||s||^2.
pub fn eta_floor(
    g: &[f64],
    s: &[f64],
    u: f64,
    omega_bar: f64,
    opts: &SolverOptions,
) -> Result<(f64, f64), Error> {
    let ss = norm_sq(s);
    if ss == 0.0 {
        return Err(Error::DegenerateVector("s"));
    }
    let gs = dot(g, s);
    let l = if gs <= 0.0 {
        opts.xi2
    } else {
        (opts.xi2_bbar.max(-1.0 + (1.0 + u) / omega_bar)).min(opts.xi2_bar)
    };
    Ok((l, -l * gs.abs() / ss))
}

/// max{v, eta}; ties resolve to v (the operands are then identical).
#[inline]
pub fn truncate_v(v: f64, eta: f64) -> f64 {
    if v >= eta {
        v
    } else {
        eta
    }
}

/// Powell-style orthogonality restart: true when g^T g_prev leaves the band
/// [-eta1 ||g||^2, eta2 ||g||^2].
pub fn orthogonality_restart(g: &[f64], g_prev: &[f64], opts: &SolverOptions) -> bool {
    let gg = norm_sq(g);
    let ggp = dot(g, g_prev);
    ggp > opts.eta2 * gg || ggp < -opts.eta1 * gg
}

/// |2 (f_prev - f + g^T s) / (s^T y) - 1|: zero exactly when f restricted to
/// the last segment is an exact quadratic. Degenerate s^T y yields +inf
/// ("not quadratic-like").
pub fn mu_measure(f_prev: f64, f: f64, g: &[f64], s: &[f64], y: &[f64]) -> f64 {
    let sy = dot(s, y);
    if sy == 0.0 {
        return f64::INFINITY;
    }
    (2.0 * (f_prev - f + dot(g, s)) / sy - 1.0).abs()
}

/// Picks the scaling factor tau_k according to the configured strategy.
///
/// Adaptive: 1 when the segment looks quadratic (mu_k <= xi3 or
/// max(mu_k, mu_{k-1}) <= xi4) and the iterate is close to stationarity or
/// to the previous point (||g||^2 <= xi6, or ||s||^2 <= xi5 otherwise);
/// tau_B = s^T y / ||s||^2 in all other cases.
pub fn tau_select(state: &IterateState, opts: &SolverOptions) -> Result<f64, Error> {
    let s = &state.s_prev;
    let y = &state.y_prev;
    let sy = dot(s, y);
    if sy <= 0.0 {
        return Err(Error::CurvatureViolated { sty: sy });
    }
    let tau_b = sy / norm_sq(s);
    match opts.tau_strategy {
        TauStrategy::B => Ok(tau_b),
        TauStrategy::H => Ok(norm_sq(y) / sy),
        TauStrategy::One => Ok(1.0),
        TauStrategy::Adaptive => {
            let mu = mu_measure(state.f_prev, state.f_k, &state.g_k, s, y);
            let quadratic_like = mu <= opts.xi3 || mu.max(state.mu_prev) <= opts.xi4;
            let gg = norm_sq(&state.g_k);
            let close = gg <= opts.xi6 || norm_sq(s) <= opts.xi5;
            if quadratic_like && close {
                Ok(1.0)
            } else {
                Ok(tau_b)
            }
        }
    }
}

/// Assembles the full search direction with restarts and truncation.
///
/// Returns -g_k (with the cause) when k = 0, the subspace is near-parallel
/// (omega_bar > xi1 or the projection denominator underflows), the
/// orthogonality restart fires, or s^T y <= 0; otherwise the truncated
/// subspace direction u*g + v_bar*s. Always a strict descent direction.
pub fn smcg_direction(state: &IterateState, opts: &SolverOptions) -> DirectionOutcome {
    let g = &state.g_k;
    if state.k == 0 {
        return DirectionOutcome::steepest(g, Some(RestartReason::FirstIter));
    }
    let s = &state.s_prev;
    let y = &state.y_prev;
    let gg = norm_sq(g);
    let ss = norm_sq(s);
    if gg == 0.0 || ss == 0.0 {
        return DirectionOutcome::steepest(g, Some(RestartReason::CurvatureFail));
    }
    let gs = dot(g, s);
    let w = (gs * gs / (gg * ss)).clamp(0.0, 1.0);
    if w > opts.xi1 || gg * ss - gs * gs < PARALLEL_GUARD * gg * ss {
        let mut out = DirectionOutcome::steepest(g, Some(RestartReason::NearParallel));
        out.omega_bar = w;
        return out;
    }
    if orthogonality_restart(g, &state.g_prev, opts) {
        let mut out = DirectionOutcome::steepest(g, Some(RestartReason::OrthogonalityFail));
        out.omega_bar = w;
        return out;
    }
    let sy = dot(s, y);
    if sy <= 0.0 {
        let mut out = DirectionOutcome::steepest(g, Some(RestartReason::CurvatureFail));
        out.omega_bar = w;
        return out;
    }
    let tau = tau_select(state, opts).expect("s^T y > 0 was just checked");
    let (u, v_raw) = match project_uv(g, s, y, tau) {
        Ok(uv) => uv,
        Err(_) => {
            let mut out = DirectionOutcome::steepest(g, Some(RestartReason::NearParallel));
            out.omega_bar = w;
            return out;
        }
    };
    let (l, eta) = eta_floor(g, s, u, w, opts).expect("s has positive norm");
    let v = truncate_v(v_raw, eta);
    let d: Vec<f64> = g.iter().zip(s).map(|(&gi, &si)| u * gi + v * si).collect();
    let gtd = dot(g, &d);
    // the xi2_bar clamp on l can defeat the truncation's descent argument
    // when u > 0; fall back to -g the moment sufficient descent is lost
    if !(gtd <= -SUFFICIENT_DESCENT * gg) {
        let mut out = DirectionOutcome::steepest(g, Some(RestartReason::CurvatureFail));
        out.omega_bar = w;
        return out;
    }
    let t_dl = dai_liao_t(g, s, y, tau).unwrap_or(f64::NAN);
    DirectionOutcome {
        d,
        kind: DirectionKind::Subspace,
        u,
        v_raw,
        v,
        eta,
        l,
        omega_bar: w,
        tau,
        gtd,
        t_dl,
        restart_reason: None,
    }
}

/// The Dai–Liao parameter t with d^T y = t * (g^T s) for the untruncated
/// subspace direction.
pub fn dai_liao_t(g: &[f64], s: &[f64], y: &[f64], tau: f64) -> Result<f64, Error> {
    let sy = dot(s, y);
    if sy <= 0.0 {
        return Err(Error::CurvatureViolated { sty: sy });
    }
    let gg = norm_sq(g);
    let ss = norm_sq(s);
    if gg == 0.0 {
        return Err(Error::DegenerateVector("g"));
    }
    if ss == 0.0 {
        return Err(Error::DegenerateVector("s"));
    }
    let gs = dot(g, s);
    let gy = dot(g, y);
    let yy = norm_sq(y);
    let delta = gg * ss - gs * gs;
    if delta < PARALLEL_GUARD * gg * ss {
        return Err(Error::NearParallel {
            omega: (gs * gs / (gg * ss)).clamp(0.0, 1.0),
        });
    }
    Ok((gy * gy * ss / sy - 2.0 * gy * gs + gg * sy) / delta - (tau + yy / sy))
}

/// Closed form of g^T d for the untruncated subspace direction.
pub fn gtd_closed_form(g: &[f64], s: &[f64], y: &[f64], tau: f64) -> Result<f64, Error> {
    let sy = dot(s, y);
    if sy <= 0.0 {
        return Err(Error::CurvatureViolated { sty: sy });
    }
    let gs = dot(g, s);
    let gy = dot(g, y);
    let yy = norm_sq(y);
    Ok(-norm_sq(g) + 2.0 * gs * gy / sy - (tau + yy / sy) * gs * gs / sy)
}

/// p, gamma, and the smallest eigenvalue of the symmetrized direction
/// operator; lambda_min > 0 whenever s^T y > 0 and tau > 0, which is what
/// makes the untruncated direction descent.
pub fn eigen_diagnostics(
    g: &[f64],
    s: &[f64],
    y: &[f64],
    tau: f64,
) -> Result<EigenDiagnostics, Error> {
    debug_assert_eq!(g.len(), s.len());
    let sy = dot(s, y);
    if sy <= 0.0 {
        return Err(Error::CurvatureViolated { sty: sy });
    }
    let ss = norm_sq(s);
    let yy = norm_sq(y);
    let p = yy * ss / (sy * sy);
    let gamma = tau * ss / sy;
    let disc = ((p + gamma) * (p + gamma) - 4.0 * gamma).max(0.0);
    let lambda_min = (p + gamma - disc.sqrt()) / 2.0;
    Ok(EigenDiagnostics {
        p,
        gamma,
        lambda_min,
    })
}

/// Hager–Zhang conjugate parameter.
pub fn beta_hz(g_next: &[f64], d: &[f64], y: &[f64]) -> Result<f64, Error> {
    let dy = dot(d, y);
    if dy == 0.0 {
        return Err(Error::DegenerateCurvature);
    }
    let gy = dot(g_next, y);
    let gd = dot(g_next, d);
    Ok(gy / dy - 2.0 * (norm_sq(y) / dy) * (gd / dy))
}

/// Dai–Kou conjugate parameter.
pub fn beta_dk(g_next: &[f64], d: &[f64], y: &[f64]) -> Result<f64, Error> {
    let dy = dot(d, y);
    if dy == 0.0 {
        return Err(Error::DegenerateCurvature);
    }
    let gy = dot(g_next, y);
    let gd = dot(g_next, d);
    Ok(gy / dy - (norm_sq(y) / dy) * (gd / dy))
}
