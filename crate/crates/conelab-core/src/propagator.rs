//! Invariant two-point functions of the free massive scalar field.
//!
//! The primitive is the vacuum Wightman function
//!
//! ```text
//!   W(T, r) = (2 pi)^-3 Int d^3k / (2 omega) e^{i(k.x - omega T)},
//! ```
//!
//! reduced to the radial momentum integral with weight 1/(2 omega).
//! Everything else is algebra on W: the positive-frequency function
//! Delta_+ = -i W, its conjugate Delta_-, the commutator function
//! Delta = 2 Im W, and the retarded function Theta(T) Delta. The sign
//! conventions are fixed so that the equal-time canonical commutator
//! comes out with d/dT Delta(T, x)|_{T=0} = -delta^3(x).
//!
//! Off the light cone all of these are ordinary functions; on the cone the
//! commutator carries a delta-shell term c(r) delta(T - r) whose coefficient
//! is derived in [`shell_coefficient`]. Evaluations report the shell
//! coefficient and the pointwise smooth part separately.

use crate::bessel::bessel_k1;
use crate::error::{Error, Result};
use crate::quad::{
    radial_momentum_integral, radial_momentum_integral_mollified, ComplexSample, QuadratureSpec,
    R_MIN,
};
use crate::Complex64;
use core::f64::consts::PI;

/// Physical parameters of the field-plus-source system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldParams {
    /// Field mass, natural units.
    pub m: f64,
    /// Field-source coupling constant.
    pub g: f64,
    /// Momentum cutoff for the deliberately regularized vacuum quantities.
    /// Propagator evaluations never truncate at lambda.
    pub lambda: f64,
}

impl FieldParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.m >= 0.0) || !self.m.is_finite() {
            return Err(Error::InvalidInput("mass must be finite and >= 0"));
        }
        if !self.g.is_finite() {
            return Err(Error::InvalidInput("coupling must be finite"));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidInput("cutoff must be positive and finite"));
        }
        Ok(())
    }
}

/// Relative spacetime separation (T, r) between a field point and the
/// source event, with the invariant s^2 = T^2 - r^2 computed once at
/// construction so the three values can never drift apart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimeInterval {
    t: f64,
    r: f64,
    s2: f64,
}

impl SpacetimeInterval {
    /// Build an interval from time separation `t` and radius `r >= 0`.
    pub fn new(t: f64, r: f64) -> Self {
        debug_assert!(r >= 0.0, "radius must be nonnegative");
        SpacetimeInterval {
            t,
            r,
            s2: t * t - r * r,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Invariant T^2 - r^2: positive inside the cone, negative outside.
    pub fn s2(&self) -> f64 {
        self.s2
    }

    /// Distance to the nearer light-cone branch, min(|T - r|, |T + r|).
    pub fn cone_distance(&self) -> f64 {
        (self.t - self.r).abs().min((self.t + self.r).abs())
    }
}

/// Classification of an interval against a light-cone band of half-width eps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LightconeClass {
    Timelike,
    Spacelike,
    Lightlike,
}

impl LightconeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            LightconeClass::Timelike => "timelike",
            LightconeClass::Spacelike => "spacelike",
            LightconeClass::Lightlike => "lightlike",
        }
    }
}

impl core::fmt::Display for LightconeClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classify an interval, treating everything within `eps` of either cone
/// branch as Lightlike. Timelike and Spacelike are claimed only strictly
/// outside the band, so the three cases are exhaustive and exclusive.
pub fn classify(iv: SpacetimeInterval, eps: f64) -> LightconeClass {
    let off_band = (iv.t() - iv.r()).abs() >= eps && (iv.t() + iv.r()).abs() >= eps;
    if iv.s2() > 0.0 && off_band {
        LightconeClass::Timelike
    } else if iv.s2() < 0.0 && off_band {
        LightconeClass::Spacelike
    } else {
        LightconeClass::Lightlike
    }
}

/// A propagator evaluation split into its cone-shell and pointwise parts.
///
/// `shell` is the coefficient c of c·delta(T - r) on the forward branch;
/// the backward-branch coefficient follows from the function's T-parity
/// (the commutator function is odd in T, so its backward coefficient is -c).
/// Off-cone evaluations always report shell = 0; band evaluations report
/// the shell with smooth = 0 and err_est = 0, meaning "not evaluated".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorValue {
    pub shell: f64,
    pub smooth: Complex64,
    pub err_est: f64,
}

/// Forward-branch delta-shell coefficient of the commutator function,
/// c(r) = -1/(4 pi r).
///
/// Derivation: regularize the massless Wightman function with exp(-k^2/L^2).
/// The imaginary part then evaluates in closed form,
///
/// ```text
///   Im W_L(T=r) = -(sqrt(pi) L / (16 pi^2 r)) (1 - e^{-L^2 r^2}),
/// ```
///
/// which is the forward coefficient times the peak height L/(2 sqrt(pi)) of
/// the smeared delta. Dividing out the peak and doubling for the commutator
/// (Delta = 2 Im W) gives c(r) = -1/(4 pi r) as L -> inf. The mass term only
/// adds a regular function on the cone, so the coefficient is mass
/// independent. The matching is re-derived numerically in this module's
/// tests; the constant here is frozen.
///
/// Undefined at the cone apex: returns NaN for r below the radial floor of
/// the quadrature module.
pub fn shell_coefficient(r: f64) -> f64 {
    if r < R_MIN {
        return f64::NAN;
    }
    -1.0 / (4.0 * PI * r)
}

/// Scale-aware guard: points this close to a cone branch are rejected by the
/// Wightman evaluators because the momentum integral stops being a function
/// there. This is a numerical floor, deliberately far smaller than any
/// sensible classification band, so callers' band choices stay authoritative.
pub(crate) fn on_numerical_cone(iv: SpacetimeInterval) -> bool {
    iv.cone_distance() <= 1e-6 * iv.t().abs().max(iv.r()).max(1.0)
}

/// Vacuum Wightman function by quadrature alone, bypassing the closed-form
/// routing of [`wightman`]. Public so the closed forms can be validated
/// against it.
pub fn wightman_quadrature(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<ComplexSample> {
    p.validate()?;
    if on_numerical_cone(iv) {
        return Err(Error::LightconeBand { t: iv.t(), r: iv.r() });
    }
    let m = p.m;
    radial_momentum_integral(
        |k| 0.5 / libm::sqrt(k * k + m * m),
        m,
        iv.t(),
        iv.r(),
        spec,
    )
}

fn wightman_spacelike_closed(iv: SpacetimeInterval, m: f64) -> ComplexSample {
    let s = libm::sqrt(-iv.s2());
    // bessel_k1 only fails for nonpositive argument; m > 0 and s > 0 here.
    let k1 = bessel_k1(m * s).expect("positive argument");
    let v = m * k1 / (4.0 * PI * PI * s);
    ComplexSample {
        value: Complex64::new(v, 0.0),
        // Dominated by the K1 evaluation, comfortably under 1e-13 relative.
        err_est: 1e-13 * v.abs(),
    }
}

fn wightman_massless_closed(iv: SpacetimeInterval) -> ComplexSample {
    let denom = iv.r() * iv.r() - iv.t() * iv.t();
    let v = 1.0 / (4.0 * PI * PI * denom);
    ComplexSample {
        value: Complex64::new(v, 0.0),
        err_est: 1e-14 * v.abs(),
    }
}

/// Vacuum Wightman function W(T, r).
///
/// Routing: massive spacelike points take the closed form
/// m K1(m s)/(4 pi^2 s) with s = sqrt(r^2 - T^2); massless off-cone points
/// take 1/(4 pi^2 (r^2 - T^2)), which is exact on both sides of the cone.
/// Massive timelike points have no closed form here and go through the
/// oscillatory quadrature. The closed forms are validated against the
/// quadrature path by this crate's tests before being trusted.
pub fn wightman(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<ComplexSample> {
    p.validate()?;
    if on_numerical_cone(iv) {
        return Err(Error::LightconeBand { t: iv.t(), r: iv.r() });
    }
    if p.m == 0.0 {
        return Ok(wightman_massless_closed(iv));
    }
    if iv.s2() < 0.0 {
        return Ok(wightman_spacelike_closed(iv, p.m));
    }
    wightman_quadrature(iv, p, spec)
}

/// Positive-frequency propagator function Delta_+ = -i W.
pub fn delta_plus(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<ComplexSample> {
    let w = wightman(iv, p, spec)?;
    Ok(ComplexSample {
        value: w.value * Complex64::new(0.0, -1.0),
        err_est: w.err_est,
    })
}

/// Negative-frequency propagator function Delta_- = conj(Delta_+).
pub fn delta_minus(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<ComplexSample> {
    let d = delta_plus(iv, p, spec)?;
    Ok(ComplexSample {
        value: d.value.conj(),
        err_est: d.err_est,
    })
}

/// Commutator function Delta, defined by [Phi(x), Phi(y)] = i Delta(x - y).
///
/// The smooth part is 2 Im W computed by quadrature in every region,
/// including spacelike points where it is analytically zero: the returned
/// magnitude there is the honest numerical noise of the integral, which is
/// exactly what the causality scans need to measure. Band points report the
/// shell coefficient with the smooth part unevaluated.
pub fn delta(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<PropagatorValue> {
    p.validate()?;
    if classify(iv, eps) == LightconeClass::Lightlike {
        return Ok(PropagatorValue {
            shell: shell_coefficient(iv.r()),
            smooth: Complex64::new(0.0, 0.0),
            err_est: 0.0,
        });
    }
    let w = wightman_quadrature(iv, p, spec)?;
    Ok(PropagatorValue {
        shell: 0.0,
        smooth: Complex64::new(2.0 * w.value.im, 0.0),
        err_est: 2.0 * w.err_est,
    })
}

/// Retarded propagator function Theta(T) Delta: identically zero for T <= 0,
/// the commutator function otherwise. Support on and inside the forward cone.
pub fn delta_ret(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<PropagatorValue> {
    if iv.t() <= 0.0 {
        p.validate()?;
        return Ok(PropagatorValue {
            shell: 0.0,
            smooth: Complex64::new(0.0, 0.0),
            err_est: 0.0,
        });
    }
    delta(iv, p, spec, eps)
}

/// Advanced propagator function Theta(-T) Delta, the time reverse of
/// [`delta_ret`]: support on and inside the backward cone.
pub fn delta_adv(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<PropagatorValue> {
    if iv.t() >= 0.0 {
        p.validate()?;
        return Ok(PropagatorValue {
            shell: 0.0,
            smooth: Complex64::new(0.0, 0.0),
            err_est: 0.0,
        });
    }
    delta(iv, p, spec, eps)
}

/// Which invariant function a derivative refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagatorFn {
    Wightman,
    DeltaPlus,
    DeltaMinus,
    Delta,
    DeltaRet,
}

fn eval_smooth(
    f: PropagatorFn,
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<ComplexSample> {
    match f {
        PropagatorFn::Wightman => wightman(iv, p, spec),
        PropagatorFn::DeltaPlus => delta_plus(iv, p, spec),
        PropagatorFn::DeltaMinus => delta_minus(iv, p, spec),
        PropagatorFn::Delta => {
            let d = delta(iv, p, spec, eps)?;
            Ok(ComplexSample {
                value: d.smooth,
                err_est: d.err_est,
            })
        }
        PropagatorFn::DeltaRet => {
            let d = delta_ret(iv, p, spec, eps)?;
            Ok(ComplexSample {
                value: d.smooth,
                err_est: d.err_est,
            })
        }
    }
}

fn finite_difference(
    sample: &dyn Fn(f64) -> Result<ComplexSample>,
    h: f64,
) -> Result<ComplexSample> {
    let coarse_p = sample(h)?;
    let coarse_m = sample(-h)?;
    let fine_p = sample(0.5 * h)?;
    let fine_m = sample(-0.5 * h)?;
    let coarse = (coarse_p.value - coarse_m.value) / (2.0 * h);
    let fine = (fine_p.value - fine_m.value) / h;
    // Central differences halve their O(h^2) truncation error four times
    // over when the step halves, so the step-halving difference overstates
    // the fine result's truncation by a factor of three.
    let truncation = (fine - coarse).norm() / 3.0;
    let propagated = (fine_p.err_est + fine_m.err_est) / h;
    Ok(ComplexSample {
        value: fine,
        err_est: truncation + propagated,
    })
}

fn difference_step(iv: SpacetimeInterval) -> f64 {
    1e-4 * iv.r().max(iv.t().abs()).max(1.0)
}

fn guard_cone_distance(iv: SpacetimeInterval, eps: f64, h: f64) -> Result<()> {
    if iv.cone_distance() <= eps + 2.0 * h {
        return Err(Error::TooCloseToCone {
            t: iv.t(),
            r: iv.r(),
            h,
        });
    }
    Ok(())
}

/// Central-difference time derivative of the smooth part of `f`, with step
/// h = 1e-4 max(1, r, |T|). The stencil must stay clear of the light-cone
/// band, hence the distance precondition checked against eps + 2h.
pub fn d_dt(
    f: PropagatorFn,
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<ComplexSample> {
    let h = difference_step(iv);
    guard_cone_distance(iv, eps, h)?;
    finite_difference(
        &|dt: f64| eval_smooth(f, SpacetimeInterval::new(iv.t() + dt, iv.r()), p, spec, eps),
        h,
    )
}

/// Central-difference radial derivative of the smooth part of `f`; step and
/// band guard as in [`d_dt`]. The radial coordinate is reflected at the
/// origin (the functions are even in r), so small radii stay evaluable.
pub fn d_dr(
    f: PropagatorFn,
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<ComplexSample> {
    let h = difference_step(iv);
    guard_cone_distance(iv, eps, h)?;
    finite_difference(
        &|dr: f64| {
            eval_smooth(
                f,
                SpacetimeInterval::new(iv.t(), (iv.r() + dr).abs()),
                p,
                spec,
                eps,
            )
        },
        h,
    )
}

/// Commutator smooth part cross-checked through the independent mollified
/// route; used by tests and diagnostics, never by the scans.
pub fn delta_smooth_mollified(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<ComplexSample> {
    p.validate()?;
    let m = p.m;
    let w = radial_momentum_integral_mollified(
        |k| 0.5 / libm::sqrt(k * k + m * m),
        m,
        iv.t(),
        iv.r(),
        spec,
    )?;
    Ok(ComplexSample {
        value: Complex64::new(2.0 * w.value.im, 0.0),
        err_est: 2.0 * w.err_est,
    })
}
