//! Expectation values of field observables on the sourced state.
//!
//! Every quantity here splits into a source-independent vacuum part and a
//! g-dependent source part. The vacuum parts of the one-point quantities
//! are spacetime constants carrying the momentum cutoff lambda; the source
//! parts are built from the retarded propagator and inherit (or fail to
//! inherit) its causal support. The deliberately truncated intensity, which
//! drops the vacuum term by normal ordering against the sourced state,
//! loses that support; quantifying the loss is the point of the scans in
//! the lab module.
//!
//! Coupling convention: the field-source coupling is read from the
//! [`SourceSpec`]; the copy in [`FieldParams`] is carried for the CLI's
//! convenience and never consulted here.

use crate::error::{Error, Result};
use crate::propagator::{
    classify, d_dr, d_dt, delta_ret, wightman, FieldParams, LightconeClass, PropagatorFn,
    SpacetimeInterval,
};
use crate::quad::QuadratureSpec;
use crate::source::{one_particle_norm, SourceSpec};
use crate::Complex64;
use core::f64::consts::PI;

/// A real expectation value split into its vacuum and source parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitExpectation {
    pub vacuum: f64,
    pub source: f64,
    pub total: f64,
}

impl SplitExpectation {
    fn new(vacuum: f64, source: f64) -> Self {
        SplitExpectation {
            vacuum,
            source,
            total: vacuum + source,
        }
    }
}

/// A two-point expectation split; the vacuum part is a complex correlation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPointSplit {
    pub vacuum: Complex64,
    pub source: f64,
    pub total: Complex64,
}

fn reject_band(iv: SpacetimeInterval, eps: f64) -> Result<()> {
    if classify(iv, eps) == LightconeClass::Lightlike {
        return Err(Error::LightconeBand { t: iv.t(), r: iv.r() });
    }
    Ok(())
}

/// Mean field <Phi(x)> = g Delta_ret(T, r), smooth part.
///
/// Exactly zero before the source acts; the cone-shell contribution is not
/// folded in here (it is a distribution, not a pointwise value) and can be
/// read from the retarded propagator directly.
pub fn field_expectation(
    iv: SpacetimeInterval,
    src: &SourceSpec,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<f64> {
    src.validate()?;
    if iv.t() <= 0.0 {
        p.validate()?;
        return Ok(0.0);
    }
    reject_band(iv, eps)?;
    let d = delta_ret(iv, p, spec, eps)?;
    Ok(src.g * d.smooth.re)
}

/// Cutoff-regularized vacuum intensity <0|Phi^2|0>,
/// (4 pi^2)^-1 Int_0^lambda k^2 / omega dk in closed form.
pub fn vacuum_intensity(p: &FieldParams) -> f64 {
    let (m, l) = (p.m, p.lambda);
    if m == 0.0 {
        return l * l / (8.0 * PI * PI);
    }
    (l * libm::sqrt(l * l + m * m) - m * m * libm::asinh(l / m)) / (8.0 * PI * PI)
}

/// Cutoff-regularized vacuum energy density: the mode sum of omega/2 over
/// d^3k/(2 pi)^3 up to lambda, i.e. (4 pi^2)^-1 Int_0^lambda k^2 omega dk.
///
/// Closed form from the antiderivative of k^2 sqrt(k^2 + m^2); the audit
/// that pins the normalization is d(vacuum)/d(lambda) =
/// lambda^2 omega(lambda) / (4 pi^2), checked in tests against both this
/// expression and direct quadrature.
pub fn vacuum_energy_density(p: &FieldParams) -> f64 {
    let (m, l) = (p.m, p.lambda);
    if m == 0.0 {
        return l * l * l * l / (16.0 * PI * PI);
    }
    let root = libm::sqrt(l * l + m * m);
    (l * (2.0 * l * l + m * m) * root - m * m * m * m * libm::asinh(l / m))
        / (32.0 * PI * PI)
}

/// Intensity <Psi|Phi^2(x)|Psi> = vacuum + g^2 Delta_ret^2.
pub fn intensity_expectation(
    iv: SpacetimeInterval,
    src: &SourceSpec,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<SplitExpectation> {
    src.validate()?;
    let vacuum = vacuum_intensity(p);
    if iv.t() <= 0.0 {
        p.validate()?;
        return Ok(SplitExpectation::new(vacuum, 0.0));
    }
    reject_band(iv, eps)?;
    let d = delta_ret(iv, p, spec, eps)?;
    let source = src.g * src.g * d.smooth.re * d.smooth.re;
    Ok(SplitExpectation::new(vacuum, source))
}

/// Energy density expectation: the constant vacuum mode sum plus the
/// classical energy density of the retarded wave,
/// (g^2/2) [ (d/dr Delta_ret)^2 + (d/dT Delta_ret)^2 + m^2 Delta_ret^2 ].
///
/// Needs finite differences of the retarded function, so points must stay
/// clear of the light-cone band by more than twice the difference step.
pub fn energy_density_expectation(
    iv: SpacetimeInterval,
    src: &SourceSpec,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<SplitExpectation> {
    src.validate()?;
    let vacuum = vacuum_energy_density(p);
    if iv.t() <= 0.0 {
        p.validate()?;
        return Ok(SplitExpectation::new(vacuum, 0.0));
    }
    reject_band(iv, eps)?;
    let dr = d_dr(PropagatorFn::DeltaRet, iv, p, spec, eps)?;
    let dt = d_dt(PropagatorFn::DeltaRet, iv, p, spec, eps)?;
    let d = delta_ret(iv, p, spec, eps)?;
    let g2 = src.g * src.g;
    let source = 0.5
        * g2
        * (dr.value.re * dr.value.re
            + dt.value.re * dt.value.re
            + p.m * p.m * d.smooth.re * d.smooth.re);
    Ok(SplitExpectation::new(vacuum, source))
}

/// Two-point correlation <Psi|Phi(x)Phi(x')|Psi> for field points at
/// intervals `iv1`, `iv2` from the source and mutual separation
/// `separation`: the vacuum Wightman correlation of the separation plus
/// g^2 Delta_ret(iv1) Delta_ret(iv2).
///
/// Consistency of the three intervals is the caller's duty; the CLI keeps
/// both points on one spatial ray through the source so the separation is
/// determined by construction.
pub fn two_point_correlation(
    iv1: SpacetimeInterval,
    iv2: SpacetimeInterval,
    separation: SpacetimeInterval,
    src: &SourceSpec,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<TwoPointSplit> {
    src.validate()?;
    reject_band(separation, eps)?;
    let vacuum = wightman(separation, p, spec)?.value;
    let source = if iv1.t() <= 0.0 || iv2.t() <= 0.0 {
        p.validate()?;
        0.0
    } else {
        reject_band(iv1, eps)?;
        reject_band(iv2, eps)?;
        let d1 = delta_ret(iv1, p, spec, eps)?;
        let d2 = delta_ret(iv2, p, spec, eps)?;
        src.g * src.g * d1.smooth.re * d2.smooth.re
    };
    Ok(TwoPointSplit {
        vacuum,
        source,
        total: vacuum + Complex64::new(source, 0.0),
    })
}

/// Intensity of the sourced state with its vacuum part removed by normal
/// ordering against that state: g^2 Theta(T)^2 |Delta_+|^2, which is NOT
/// supported inside the cone. `normalized` divides by the one-particle norm
/// g^2 lambda^3/(6 pi^2) and doubles (the two Wick pairings of Phi^2 against
/// a normalized one-particle state); raw mode returns the bare product.
pub fn truncated_intensity(
    iv: SpacetimeInterval,
    src: &SourceSpec,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
    normalized: bool,
) -> Result<f64> {
    src.validate()?;
    p.validate()?;
    if iv.t() == 0.0 {
        return Err(Error::DegenerateTime);
    }
    if iv.t() < 0.0 || src.g == 0.0 {
        return Ok(0.0);
    }
    reject_band(iv, eps)?;
    let w = wightman(iv, p, spec)?;
    let raw = src.g * src.g * w.value.norm_sqr();
    if normalized {
        Ok(2.0 * raw / one_particle_norm(src.g, p.lambda))
    } else {
        Ok(raw)
    }
}
