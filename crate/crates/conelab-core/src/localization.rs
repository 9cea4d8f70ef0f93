//! Newton-Wigner and Glauber localization densities on the sourced state,
//! their large-separation asymptotics, and the c-number coefficient
//! functions of the detector-model commutators.
//!
//! The Newton-Wigner wavefunction drops half a power of omega relative to
//! the covariant amplitude, which is exactly what breaks the light-cone
//! support: its radial integrand grows like sqrt(k) and the integral exists
//! only as a distributional (Abel-regularized) limit. Numerically it is
//! evaluated by the oscillatory acceleration path, with the damped-cutoff
//! extrapolation as an independent cross-check; both define the same limit.

use crate::error::{Error, Result};
use crate::propagator::{
    classify, d_dt, delta, delta_minus, delta_plus, wightman, FieldParams, LightconeClass,
    PropagatorFn, SpacetimeInterval,
};
use crate::quad::{
    radial_momentum_integral, radial_momentum_integral_mollified, ComplexSample, QuadratureSpec,
};
use crate::source::SourceSpec;
use alloc::vec;
use alloc::vec::Vec;

/// Two-branch stationary-phase form of the Newton-Wigner wavefunction at
/// large |T^2 - r^2|: a common modulus envelope times a pure phase
/// (timelike) or a pure decay (spacelike). The overall proportionality
/// constant is deliberately absent; consumers fit it and report the fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticValue {
    /// Modulus factor m sqrt(T) / |T^2 - r^2|.
    pub envelope: f64,
    /// exp(-i m sqrt(T^2 - r^2)) timelike; exp(-m sqrt(r^2 - T^2)) spacelike.
    pub phase_or_decay: crate::Complex64,
    pub regime: LightconeClass,
}

fn nw_weight(m: f64) -> impl Fn(f64) -> f64 {
    move |k: f64| 1.0 / libm::sqrt(2.0 * libm::sqrt(k * k + m * m))
}

fn nw_guard(iv: SpacetimeInterval) -> Result<()> {
    if iv.t() <= 0.0 {
        return Err(Error::DegenerateTime);
    }
    if crate::propagator::on_numerical_cone(iv) {
        return Err(Error::LightconeBand { t: iv.t(), r: iv.r() });
    }
    Ok(())
}

/// First-quantized Newton-Wigner wavefunction of the sourced one-particle
/// component: (2 pi)^-3 Int d^3k (2 omega)^-1/2 e^{i(k.x - omega T)},
/// radially reduced. The coupling and theta step live in [`nw_density`];
/// this is the bare configuration-space amplitude.
pub fn nw_wavefunction(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<ComplexSample> {
    p.validate()?;
    nw_guard(iv)?;
    radial_momentum_integral(nw_weight(p.m), p.m, iv.t(), iv.r(), spec)
}

/// The same amplitude through the damped-cutoff extrapolation only,
/// bypassing the acceleration path. Cross-check for tests and diagnostics.
pub fn nw_wavefunction_mollified(
    iv: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<ComplexSample> {
    p.validate()?;
    nw_guard(iv)?;
    radial_momentum_integral_mollified(nw_weight(p.m), p.m, iv.t(), iv.r(), spec)
}

/// Newton-Wigner position density of the sourced state:
/// g^2 Theta^2(T) |psi_NW|^2. Generically nonzero at spacelike points.
pub fn nw_density(
    iv: SpacetimeInterval,
    src: &SourceSpec,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    src.validate()?;
    p.validate()?;
    if iv.t() == 0.0 {
        return Err(Error::DegenerateTime);
    }
    if iv.t() < 0.0 || src.g == 0.0 {
        return Ok(0.0);
    }
    let psi = nw_wavefunction(iv, p, spec)?;
    Ok(src.g * src.g * psi.value.norm_sqr())
}

/// Stationary-phase asymptotics of the Newton-Wigner wavefunction, valid
/// for |T^2 - r^2| >= 1: envelope m sqrt(T)/|T^2 - r^2| with a unit-modulus
/// phase inside the cone and a real exponential decay outside.
pub fn nw_asymptotic(iv: SpacetimeInterval, p: &FieldParams) -> Result<AsymptoticValue> {
    p.validate()?;
    if iv.t() <= 0.0 {
        return Err(Error::DegenerateTime);
    }
    let s2 = iv.s2();
    if s2.abs() < 1.0 {
        return Err(Error::OutsideAsymptoticRegime { s2 });
    }
    let envelope = p.m * libm::sqrt(iv.t()) / s2.abs();
    if s2 > 0.0 {
        let phase = -p.m * libm::sqrt(s2);
        let (sin, cos) = libm::sincos(phase);
        Ok(AsymptoticValue {
            envelope,
            phase_or_decay: crate::Complex64::new(cos, sin),
            regime: LightconeClass::Timelike,
        })
    } else {
        let decay = libm::exp(-p.m * libm::sqrt(-s2));
        Ok(AsymptoticValue {
            envelope,
            phase_or_decay: crate::Complex64::new(decay, 0.0),
            regime: LightconeClass::Spacelike,
        })
    }
}

/// Glauber detection density of the sourced state:
/// g^2 Theta^2(T) Delta_+ Delta_- = g^2 Theta^2 |Delta_+|^2.
pub fn glauber_density(
    iv: SpacetimeInterval,
    src: &SourceSpec,
    p: &FieldParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    src.validate()?;
    p.validate()?;
    if iv.t() == 0.0 {
        return Err(Error::DegenerateTime);
    }
    if iv.t() < 0.0 || src.g == 0.0 {
        return Ok(0.0);
    }
    let w = wightman(iv, p, spec)?;
    Ok(src.g * src.g * w.value.norm_sqr())
}

/// Which detector-model commutator's coefficient functions to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutatorKind {
    /// Local field commutator [Phi(x), Phi(y)] = i Delta(x - y).
    Field,
    /// Newton-Wigner operator commutator; coefficients d/dT Delta_+-.
    Nw,
    /// Glauber detection operator commutator; coefficients Delta_+-.
    Glauber,
}

impl CommutatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommutatorKind::Field => "field",
            CommutatorKind::Nw => "nw",
            CommutatorKind::Glauber => "glauber",
        }
    }
}

/// Magnitudes of the c-number coefficient functions multiplying the
/// operator content of each commutator at the given separation. The
/// operator factors are never evaluated: a nonzero coefficient at spacelike
/// separation already witnesses the microcausality violation, since no
/// operator can cancel it identically.
pub fn microcausality_coefficients(
    kind: CommutatorKind,
    separation: SpacetimeInterval,
    p: &FieldParams,
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<Vec<f64>> {
    p.validate()?;
    if classify(separation, eps) == LightconeClass::Lightlike {
        return Err(Error::LightconeBand {
            t: separation.t(),
            r: separation.r(),
        });
    }
    match kind {
        CommutatorKind::Field => {
            let d = delta(separation, p, spec, eps)?;
            Ok(vec![d.smooth.re.abs()])
        }
        CommutatorKind::Nw => {
            let dp = d_dt(PropagatorFn::DeltaPlus, separation, p, spec, eps)?;
            let dm = d_dt(PropagatorFn::DeltaMinus, separation, p, spec, eps)?;
            Ok(vec![dp.value.norm(), dm.value.norm()])
        }
        CommutatorKind::Glauber => {
            let dp = delta_plus(separation, p, spec)?;
            let dm = delta_minus(separation, p, spec)?;
            Ok(vec![dp.value.norm(), dm.value.norm()])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn setup() -> (SourceSpec, FieldParams, QuadratureSpec) {
        (
            SourceSpec { y0: 0.0, g: 0.1 },
            FieldParams {
                m: 1.0,
                g: 0.1,
                lambda: 20.0,
            },
            QuadratureSpec::default(),
        )
    }

    #[test]
    fn wavefunction_matches_its_conjugate_reflection() {
        let (_, p, spec) = setup();
        let psi = nw_wavefunction(SpacetimeInterval::new(2.0, 0.5), &p, &spec).unwrap();
        let reflected =
            radial_momentum_integral(nw_weight(1.0), 1.0, -2.0, 0.5, &spec).unwrap();
        let diff = (psi.value - reflected.value.conj()).norm();
        assert!(diff <= 1e-13 * psi.value.norm(), "diff {diff}");
    }

    #[test]
    fn acceleration_and_mollifier_paths_agree_inside_the_cone() {
        let (_, p, spec) = setup();
        let iv = SpacetimeInterval::new(2.0, 0.5);
        let a = nw_wavefunction(iv, &p, &spec).unwrap();
        let b = nw_wavefunction_mollified(iv, &p, &spec).unwrap();
        let rel = (a.value - b.value).norm() / a.value.norm();
        assert!(rel <= 1e-3, "paths disagree: rel {rel}");
    }

    #[test]
    fn spacelike_wavefunction_follows_the_asymptotic_form() {
        let (_, p, spec) = setup();
        // The asymptotic form carries an unknown overall constant, so the
        // check is that the measured constant is the same at two widely
        // separated spacelike points. Its stationary-phase value for this
        // normalization is 1/(4 pi^(3/2)), asserted loosely as a sanity
        // bound on the absolute scale.
        let ratio = |r: f64| {
            let iv = SpacetimeInterval::new(1.0, r);
            let psi = nw_wavefunction(iv, &p, &spec).unwrap();
            let asy = nw_asymptotic(iv, &p).unwrap();
            assert_eq!(asy.regime, LightconeClass::Spacelike);
            psi.value.norm() / (asy.envelope * asy.phase_or_decay.re)
        };
        let c4 = ratio(4.0);
        let c5 = ratio(5.0);
        assert!(
            (c4 - c5).abs() <= 0.15 * c4.abs(),
            "constant drifts: {c4} vs {c5}"
        );
        let stationary = 1.0 / (4.0 * PI * libm::sqrt(PI));
        assert!(
            (c5 - stationary).abs() <= 0.3 * stationary,
            "scale off: measured {c5}, stationary-phase {stationary}"
        );
    }

    #[test]
    fn density_is_a_nonnegative_step_with_spacelike_support() {
        let (src, p, spec) = setup();
        assert_eq!(
            nw_density(SpacetimeInterval::new(-1.0, 2.0), &src, &p, &spec).unwrap(),
            0.0
        );
        assert!(matches!(
            nw_density(SpacetimeInterval::new(0.0, 2.0), &src, &p, &spec),
            Err(Error::DegenerateTime)
        ));
        let outside = nw_density(SpacetimeInterval::new(1.0, 2.0), &src, &p, &spec).unwrap();
        assert!(outside > 1e-12, "spacelike density should not vanish: {outside}");
        let free = SourceSpec { y0: 0.0, g: 0.0 };
        assert_eq!(
            nw_density(SpacetimeInterval::new(1.0, 2.0), &free, &p, &spec).unwrap(),
            0.0
        );
    }

    #[test]
    fn asymptotic_branches_have_the_advertised_moduli() {
        let p = FieldParams {
            m: 1.0,
            g: 0.1,
            lambda: 20.0,
        };
        let inside = nw_asymptotic(SpacetimeInterval::new(3.0, 1.0), &p).unwrap();
        assert_eq!(inside.regime, LightconeClass::Timelike);
        assert!((inside.phase_or_decay.norm() - 1.0).abs() < 1e-14);
        let outside = nw_asymptotic(SpacetimeInterval::new(1.0, 3.0), &p).unwrap();
        assert_eq!(outside.regime, LightconeClass::Spacelike);
        assert!(outside.phase_or_decay.im == 0.0);
        let want = libm::exp(-libm::sqrt(8.0));
        assert!(
            (outside.phase_or_decay.re - want).abs() < 1e-12,
            "decay {} vs e^-sqrt(8) = {want}",
            outside.phase_or_decay.re
        );
        assert!((want - 0.0591).abs() < 1e-4);
        // envelope(2T, 2r) / envelope(T, r) = sqrt(2)/4 at fixed m.
        let e1 = nw_asymptotic(SpacetimeInterval::new(3.0, 1.0), &p).unwrap().envelope;
        let e2 = nw_asymptotic(SpacetimeInterval::new(6.0, 2.0), &p).unwrap().envelope;
        assert!((e2 / e1 - libm::sqrt(2.0) / 4.0).abs() < 1e-12);
        assert!(matches!(
            nw_asymptotic(SpacetimeInterval::new(1.2, 1.0), &p),
            Err(Error::OutsideAsymptoticRegime { .. })
        ));
    }

    #[test]
    fn glauber_density_is_the_projected_modulus_squared() {
        let (src, p, spec) = setup();
        let iv = SpacetimeInterval::new(0.5, 2.0);
        let dens = glauber_density(iv, &src, &p, &spec).unwrap();
        assert!(dens > 0.0, "spacelike Glauber density must be positive");
        let psi = crate::source::one_particle_wavefunction(iv, &src, &p, &spec).unwrap();
        let rel = (dens - psi.value.norm_sqr()).abs() / dens;
        assert!(rel <= 1e-5, "density {dens} vs |projection|^2, rel {rel}");
        let free = SourceSpec { y0: 0.0, g: 0.0 };
        assert_eq!(glauber_density(iv, &free, &p, &spec).unwrap(), 0.0);
        assert_eq!(
            glauber_density(SpacetimeInterval::new(-0.5, 2.0), &src, &p, &spec).unwrap(),
            0.0
        );
    }

    #[test]
    fn commutator_coefficients_separate_the_local_from_the_nonlocal() {
        let (_, p, spec) = setup();
        let sep = SpacetimeInterval::new(1.0, 2.0);
        let field = microcausality_coefficients(CommutatorKind::Field, sep, &p, &spec, 0.05)
            .unwrap();
        assert_eq!(field.len(), 1);
        assert!(field[0] <= 1e-6, "field coefficient leaks: {}", field[0]);
        let nw = microcausality_coefficients(CommutatorKind::Nw, sep, &p, &spec, 0.05).unwrap();
        assert_eq!(nw.len(), 2);
        assert!(
            (nw[0] - nw[1]).abs() <= 1e-12 * nw[0],
            "conjugate pair should have equal magnitudes"
        );
        assert!(nw[0] > 1e3 * field[0].max(1e-12));
        let glauber =
            microcausality_coefficients(CommutatorKind::Glauber, SpacetimeInterval::new(0.0, 2.0), &p, &spec, 0.05)
                .unwrap();
        let anchor = 1.7714e-3;
        assert!(
            (glauber[0] - anchor).abs() < 1e-6,
            "Glauber coefficient {} vs equal-time anchor {anchor}",
            glauber[0]
        );
        assert!((glauber[0] - glauber[1]).abs() <= 1e-15);
        assert!(matches!(
            microcausality_coefficients(CommutatorKind::Field, SpacetimeInterval::new(2.0, 2.01), &p, &spec, 0.05),
            Err(Error::LightconeBand { .. })
        ));
    }
}
