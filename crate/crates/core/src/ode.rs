//! Continuous model of the transformation: the vertex-to-centroid distances
//! follow a linear system of coupled damped oscillations.
//!
//! The system `R' = M R` has eigenvalues `0` and `-1/2 ± i sqrt(3)/2`, so
//! every trajectory spirals into the equilibrium `(R̄, R̄, R̄)` where `R̄` is the
//! mean initial distance.

use std::io::Write;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::geometry::{iterate_triangle, AdaptiveParams, Triangle};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Distances `(R0, R1, R2)` from the vertices to the centroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusState {
    pub r: [f64; 3],
}

impl RadiusState {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        if r.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidParams(format!(
                "radii must be positive and finite, got {r:?}"
            )));
        }
        Ok(Self { r })
    }

    pub fn mean(&self) -> f64 {
        (self.r[0] + self.r[1] + self.r[2]) / 3.0
    }
}

/// `M R` with `M = [[-1/3, -1/3, 2/3], [2/3, -1/3, -1/3], [-1/3, 2/3, -1/3]]`.
///
/// Row `i` reads `R_{i-1} - R̄`.
pub fn ode_rhs(state: &RadiusState) -> [f64; 3] {
    let mean = state.mean();
    let r = &state.r;
    [r[2] - mean, r[0] - mean, r[1] - mean]
}

/// Value, first and second derivative of
/// `(1/3) e^{-t/2} (c cos(wt) + s sin(wt))` with `w = sqrt(3)/2`.
fn damped_mode(c: f64, s: f64, t: f64) -> [f64; 3] {
    let w = SQRT_3 / 2.0;
    // d/dt of e^{-t/2}(c cos + s sin) keeps the form with (c, s) -> (c', s')
    let diff = |c: f64, s: f64| (-0.5 * c + w * s, -0.5 * s - w * c);
    let (c1, s1) = diff(c, s);
    let (c2, s2) = diff(c1, s1);
    let decay = (-0.5 * t).exp() / 3.0;
    let (sin, cos) = (w * t).sin_cos();
    [
        decay * (c * cos + s * sin),
        decay * (c1 * cos + s1 * sin),
        decay * (c2 * cos + s2 * sin),
    ]
}

/// Coefficients `c_i = 2R_i - R_{i+1} - R_{i+2}` and
/// `s_i = sqrt(3)(R_{i+2} - R_{i+1})`.
fn mode_coefficients(r: &[f64; 3]) -> [(f64, f64); 3] {
    std::array::from_fn(|i| {
        let a = r[(i + 1) % 3];
        let b = r[(i + 2) % 3];
        (2.0 * r[i] - a - b, SQRT_3 * (b - a))
    })
}

/// Closed-form solution at time `t >= 0`.
pub fn solve_ode(initial: &RadiusState, t: f64) -> RadiusState {
    let mean = initial.mean();
    let coeffs = mode_coefficients(&initial.r);
    RadiusState {
        r: coeffs.map(|(c, s)| mean + damped_mode(c, s, t)[0]),
    }
}

/// Upper bound `(1/3)(|c_i| + |s_i|) e^{-t/2}` on `|R_i(t) - R̄|`.
pub fn decay_envelope(initial: &RadiusState, t: f64) -> [f64; 3] {
    mode_coefficients(&initial.r).map(|(c, s)| (c.abs() + s.abs()) * (-0.5 * t).exp() / 3.0)
}

/// `R_i'' + R_i' + R_i - R̄` along the analytic solution. Vanishes up to
/// roundoff: each component is a damped oscillator driven towards `R̄`.
pub fn second_order_residual(initial: &RadiusState, t: f64) -> [f64; 3] {
    mode_coefficients(&initial.r).map(|(c, s)| {
        let [f, df, ddf] = damped_mode(c, s, t);
        ddf + df + f
    })
}

/// Eigenvalues of the adaptive system; `lambda12_imag` holds the `+` branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumResult {
    pub lambda0: f64,
    pub lambda12_real: f64,
    pub lambda12_imag: f64,
    /// `5 a0^2 - 4 a1^2 + 8 a0 a1`. Negative means the pair is real,
    /// `lambda12_real ± sqrt(3) sqrt(-d) / 6`, rather than complex.
    pub discriminant: f64,
}

impl SpectrumResult {
    pub fn is_oscillatory(&self) -> bool {
        self.discriminant > 0.0
    }
}

fn check_gains(alpha0: f64, alpha1: f64) -> Result<()> {
    if !(alpha0.is_finite() && alpha1.is_finite()) || alpha0 <= 0.0 || alpha1 <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "gains must be positive and finite, got ({alpha0}, {alpha1})"
        )));
    }
    Ok(())
}

/// Closed-form eigenvalues for gains `(alpha0, alpha1)`.
///
/// Accepts any positive pair, including ones outside the range usable by the
/// transformation, so the stability boundary can be probed.
pub fn spectrum(alpha0: f64, alpha1: f64) -> Result<SpectrumResult> {
    check_gains(alpha0, alpha1)?;
    let discriminant = 5.0 * alpha0 * alpha0 - 4.0 * alpha1 * alpha1 + 8.0 * alpha0 * alpha1;
    Ok(SpectrumResult {
        lambda0: 0.0,
        lambda12_real: real_part(alpha0, alpha1),
        lambda12_imag: SQRT_3 * discriminant.max(0.0).sqrt() / 6.0,
        discriminant,
    })
}

/// `-(1/6)(2 a0 a1 - a1^2 + 2 a0^2)`.
pub fn real_part(alpha0: f64, alpha1: f64) -> f64 {
    -(2.0 * alpha0 * alpha1 - alpha1 * alpha1 + 2.0 * alpha0 * alpha0) / 6.0
}

/// Symmetric matrix `Q` with `real_part(a) = aᵀ Q a`.
pub fn real_part_form() -> Matrix2<f64> {
    Matrix2::new(-1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 1.0 / 6.0)
}

/// Negative real part, i.e. `alpha1 < (1 + sqrt(3)) alpha0` for positive gains.
pub fn is_convergent(alpha0: f64, alpha1: f64) -> bool {
    check_gains(alpha0, alpha1).is_ok() && real_part(alpha0, alpha1) < 0.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub step: usize,
    pub t: f64,
    /// Ratios `r_i = R_{i-1}/R_i` of the `step`-th discrete iterate.
    pub ratios_discrete: [f64; 3],
    /// Radii of the `step`-th discrete iterate (area-preserving).
    pub radii_discrete: [f64; 3],
    /// Analytic radii at time `t`.
    pub radii_continuous: [f64; 3],
}

/// Discrete iterates of the standard transformation next to the analytic
/// solution started from the same radii. Step `n` maps to `t = n * time_scale`.
pub fn compare_discrete_continuous(
    t: &Triangle,
    n_steps: usize,
    time_scale: f64,
) -> Result<Vec<ComparisonRow>> {
    if !(time_scale.is_finite() && time_scale > 0.0) {
        return Err(Error::InvalidParams(format!(
            "time scale must be positive, got {time_scale}"
        )));
    }
    let initial = RadiusState::new(t.frame()?.radii)?;
    let mut rows = Vec::with_capacity(n_steps + 1);
    let mut cur = *t;
    for step in 0..=n_steps {
        if step > 0 {
            cur = iterate_triangle(&cur, &AdaptiveParams::STANDARD, 1)?;
        }
        let frame = cur.frame()?;
        let time = step as f64 * time_scale;
        rows.push(ComparisonRow {
            step,
            t: time,
            ratios_discrete: frame.ratios,
            radii_discrete: frame.radii,
            radii_continuous: solve_ode(&initial, time).r,
        });
    }
    Ok(rows)
}

pub const COMPARISON_CSV_HEADER: &str = "step,t,r0_disc,r1_disc,r2_disc,R0_cont,R1_cont,R2_cont";

pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{COMPARISON_CSV_HEADER}")?;
    for row in rows {
        let [a, b, c] = row.ratios_discrete;
        let [x, y, z] = row.radii_continuous;
        writeln!(
            out,
            "{},{},{a:e},{b:e},{c:e},{x:e},{y:e},{z:e}",
            row.step, row.t
        )?;
    }
    Ok(())
}
