//! Turns pointwise evaluations into verdicts: spacelike-leakage scans over
//! a (T, r) grid, decay-exponent fits, and the summary classification table
//! separating causal observables from the localization densities that leak.
//!
//! The central metric is the leakage ratio, max spacelike magnitude over
//! max timelike magnitude of one observable. It is scale-free, so verdicts
//! survive coupling rescales and grid refinement; the threshold converting
//! an exact-zero claim into a falsifiable number is [`CAUSAL_THRESHOLD`].
//!
//! Scans here are sequential and deterministic. Callers that want
//! parallelism evaluate [`eval_observable`] over [`grid_points`] themselves
//! and reduce with [`leakage_from_values`]; the reduction is a maximum, so
//! evaluation order cannot change any reported number.

use crate::error::{Error, Result};
use crate::localization::{
    glauber_density, microcausality_coefficients, nw_asymptotic, nw_density, nw_wavefunction,
    CommutatorKind,
};
use crate::observables::truncated_intensity;
use crate::propagator::{
    classify, d_dr, d_dt, delta, delta_ret, FieldParams, LightconeClass, PropagatorFn,
    SpacetimeInterval,
};
use crate::quad::QuadratureSpec;
use crate::source::SourceSpec;
use alloc::vec::Vec;

/// A spacelike-to-timelike leakage ratio above this marks an observable as
/// non-causal. The underlying claims are exact-zero statements; the
/// threshold leaves four orders of magnitude of headroom above quadrature
/// noise while sitting far below any genuine leakage.
pub const CAUSAL_THRESHOLD: f64 = 1e-4;

/// Floor for the timelike maximum in the leakage ratio, guarding the
/// division when an observable vanishes everywhere (e.g. zero coupling).
pub const FLOOR: f64 = 1e-12;

/// Rectangular evaluation grid and the physical parameters of a scan.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    /// (min, max, count) over the time offset from the source.
    pub t_range: (f64, f64, usize),
    /// (min, max, count) over the radius from the source.
    pub r_range: (f64, f64, usize),
    /// Half-width of the light-cone band excluded from classification.
    pub band_eps: f64,
    pub m: f64,
    pub g: f64,
    pub lambda: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for (min, max, count) in [self.t_range, self.r_range] {
            if !(min < max) || !min.is_finite() || !max.is_finite() {
                return Err(Error::InvalidInput("grid range must satisfy min < max"));
            }
            if count < 2 {
                return Err(Error::InvalidInput("grid needs at least 2 points per axis"));
            }
        }
        if !(self.band_eps >= 0.0) {
            return Err(Error::InvalidInput("band_eps must be nonnegative"));
        }
        self.params().validate()?;
        if self.r_range.0 < 0.0 {
            return Err(Error::InvalidInput("radius range must be nonnegative"));
        }
        Ok(())
    }

    pub fn params(&self) -> FieldParams {
        FieldParams {
            m: self.m,
            g: self.g,
            lambda: self.lambda,
        }
    }

    pub fn source(&self) -> SourceSpec {
        SourceSpec { y0: 0.0, g: self.g }
    }
}

/// The nine scannable observables. Source-state expectations carry only
/// their source part (the vacuum parts are spacetime constants and would
/// drown any support statement); commutator entries are the maximal
/// c-number coefficient magnitudes of the respective commutator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    Field,
    IntensitySource,
    EnergySource,
    NwDensity,
    GlauberDensity,
    TruncatedIntensity,
    CommutatorField,
    CommutatorNw,
    CommutatorGlauber,
}

/// All observables in the fixed order used by the classification table.
pub const OBSERVABLES: [Observable; 9] = [
    Observable::Field,
    Observable::IntensitySource,
    Observable::EnergySource,
    Observable::NwDensity,
    Observable::GlauberDensity,
    Observable::TruncatedIntensity,
    Observable::CommutatorField,
    Observable::CommutatorNw,
    Observable::CommutatorGlauber,
];

impl Observable {
    pub fn parse(id: &str) -> Result<Self> {
        OBSERVABLES
            .iter()
            .copied()
            .find(|o| o.as_str() == id)
            .ok_or(Error::UnknownObservable)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Observable::Field => "field",
            Observable::IntensitySource => "intensity_source",
            Observable::EnergySource => "energy_source",
            Observable::NwDensity => "nw_density",
            Observable::GlauberDensity => "glauber_density",
            Observable::TruncatedIntensity => "truncated_intensity",
            Observable::CommutatorField => "commutator_field",
            Observable::CommutatorNw => "commutator_nw",
            Observable::CommutatorGlauber => "commutator_glauber",
        }
    }

    /// Whether the full observable has a source-independent vacuum part
    /// that the scan deliberately excludes.
    pub fn has_vacuum_part(&self) -> bool {
        matches!(self, Observable::IntensitySource | Observable::EnergySource)
    }
}

/// Causality verdict for one observable on one grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Causal,
    NonCausal,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Causal => "causal",
            Verdict::NonCausal => "non-causal",
        }
    }
}

/// The classification each observable is expected to earn: retarded-wave
/// quantities and the local field commutator stay on the cone, while the
/// localization densities and their detector commutators leak.
pub fn expected_verdict(obs: Observable) -> Verdict {
    match obs {
        Observable::Field
        | Observable::IntensitySource
        | Observable::EnergySource
        | Observable::CommutatorField => Verdict::Causal,
        Observable::NwDensity
        | Observable::GlauberDensity
        | Observable::TruncatedIntensity
        | Observable::CommutatorNw
        | Observable::CommutatorGlauber => Verdict::NonCausal,
    }
}

/// Outcome of one leakage scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeakageReport {
    pub observable_id: &'static str,
    pub spacelike_max: f64,
    pub timelike_max: f64,
    /// spacelike_max / max(timelike_max, floor).
    pub leakage_ratio: f64,
    pub verdict: Verdict,
    /// Points actually evaluated (band points are excluded).
    pub n_points: usize,
    pub floor: f64,
}

/// One evaluated observable value with its propagated error estimate.
/// The field expectation keeps its sign; densities and commutator
/// coefficient magnitudes are nonnegative by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointSample {
    pub value: f64,
    pub err_est: f64,
}

/// Grid nodes in deterministic T-major order (T varies slowest).
pub fn grid_points(grid: &GridSpec) -> Vec<(f64, f64)> {
    let (t0, t1, nt) = grid.t_range;
    let (r0, r1, nr) = grid.r_range;
    let mut pts = Vec::with_capacity(nt * nr);
    for i in 0..nt {
        let t = t0 + (t1 - t0) * i as f64 / (nt - 1) as f64;
        for j in 0..nr {
            let r = r0 + (r1 - r0) * j as f64 / (nr - 1) as f64;
            pts.push((t, r));
        }
    }
    pts
}

/// Evaluate one observable at one grid node. Band points return
/// `Ok(None)`; everything else returns the observable's value with a
/// first-order error estimate. Leakage maxima are taken over |value|.
pub fn eval_observable(
    obs: Observable,
    t: f64,
    r: f64,
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<Option<PointSample>> {
    let iv = SpacetimeInterval::new(t, r);
    if classify(iv, grid.band_eps) == LightconeClass::Lightlike {
        return Ok(None);
    }
    let p = grid.params();
    let g = grid.g;
    let eps = grid.band_eps;
    let sample = match obs {
        Observable::Field => {
            if t <= 0.0 {
                PointSample { value: 0.0, err_est: 0.0 }
            } else {
                let d = delta_ret(iv, &p, spec, eps)?;
                PointSample {
                    value: g * d.smooth.re,
                    err_est: g.abs() * d.err_est,
                }
            }
        }
        Observable::IntensitySource => {
            if t <= 0.0 {
                PointSample { value: 0.0, err_est: 0.0 }
            } else {
                let d = delta_ret(iv, &p, spec, eps)?;
                PointSample {
                    value: g * g * d.smooth.re * d.smooth.re,
                    err_est: 2.0 * g * g * d.smooth.re.abs() * d.err_est,
                }
            }
        }
        Observable::EnergySource => {
            if t <= 0.0 {
                PointSample { value: 0.0, err_est: 0.0 }
            } else {
                let dr = d_dr(PropagatorFn::DeltaRet, iv, &p, spec, eps)?;
                let dt = d_dt(PropagatorFn::DeltaRet, iv, &p, spec, eps)?;
                let d = delta_ret(iv, &p, spec, eps)?;
                let g2 = g * g;
                let value = 0.5
                    * g2
                    * (dr.value.re * dr.value.re
                        + dt.value.re * dt.value.re
                        + p.m * p.m * d.smooth.re * d.smooth.re);
                let err_est = g2
                    * (dr.value.re.abs() * dr.err_est
                        + dt.value.re.abs() * dt.err_est
                        + p.m * p.m * d.smooth.re.abs() * d.err_est);
                PointSample { value, err_est }
            }
        }
        Observable::NwDensity => {
            if t <= 0.0 || g == 0.0 {
                PointSample { value: 0.0, err_est: 0.0 }
            } else {
                let psi = nw_wavefunction(iv, &p, spec)?;
                PointSample {
                    value: g * g * psi.value.norm_sqr(),
                    err_est: 2.0 * g * g * psi.value.norm() * psi.err_est,
                }
            }
        }
        Observable::GlauberDensity | Observable::TruncatedIntensity => {
            if t <= 0.0 || g == 0.0 {
                PointSample { value: 0.0, err_est: 0.0 }
            } else {
                let w = crate::propagator::wightman(iv, &p, spec)?;
                let raw = g * g * w.value.norm_sqr();
                let raw_err = 2.0 * g * g * w.value.norm() * w.err_est;
                // The truncated intensity is the same modulus squared
                // rescaled against the one-particle norm.
                let scale = if obs == Observable::TruncatedIntensity {
                    2.0 / crate::source::one_particle_norm(g, p.lambda)
                } else {
                    1.0
                };
                PointSample {
                    value: raw * scale,
                    err_est: raw_err * scale,
                }
            }
        }
        Observable::CommutatorField => {
            let d = delta(iv, &p, spec, eps)?;
            PointSample {
                value: d.smooth.re.abs(),
                err_est: d.err_est,
            }
        }
        Observable::CommutatorNw => {
            let c = microcausality_coefficients(CommutatorKind::Nw, iv, &p, spec, eps)?;
            let dp = d_dt(PropagatorFn::DeltaPlus, iv, &p, spec, eps)?;
            PointSample {
                value: c[0].max(c[1]),
                err_est: dp.err_est,
            }
        }
        Observable::CommutatorGlauber => {
            let w = crate::propagator::wightman(iv, &p, spec)?;
            PointSample {
                value: w.value.norm(),
                err_est: w.err_est,
            }
        }
    };
    Ok(Some(sample))
}

/// Reduce pre-evaluated grid magnitudes to a report. `values` must be
/// aligned with [`grid_points`] of the same grid; `None` marks band points.
pub fn leakage_from_values(
    obs: Observable,
    grid: &GridSpec,
    values: &[Option<PointSample>],
    threshold: f64,
) -> LeakageReport {
    let pts = grid_points(grid);
    debug_assert_eq!(pts.len(), values.len());
    let mut spacelike_max: f64 = 0.0;
    let mut timelike_max: f64 = 0.0;
    let mut n_points = 0;
    for ((t, r), v) in pts.iter().zip(values) {
        let Some(sample) = v else { continue };
        n_points += 1;
        match classify(SpacetimeInterval::new(*t, *r), grid.band_eps) {
            LightconeClass::Spacelike => spacelike_max = spacelike_max.max(sample.value.abs()),
            LightconeClass::Timelike => timelike_max = timelike_max.max(sample.value.abs()),
            LightconeClass::Lightlike => {}
        }
    }
    let leakage_ratio = spacelike_max / timelike_max.max(FLOOR);
    LeakageReport {
        observable_id: obs.as_str(),
        spacelike_max,
        timelike_max,
        leakage_ratio,
        verdict: if leakage_ratio <= threshold {
            Verdict::Causal
        } else {
            Verdict::NonCausal
        },
        n_points,
        floor: FLOOR,
    }
}

/// Sequential leakage scan with an explicit verdict threshold.
pub fn leakage_scan_with_threshold(
    obs: Observable,
    grid: &GridSpec,
    spec: &QuadratureSpec,
    threshold: f64,
) -> Result<LeakageReport> {
    grid.validate()?;
    spec.validate()?;
    let mut values = Vec::new();
    for (t, r) in grid_points(grid) {
        values.push(eval_observable(obs, t, r, grid, spec)?);
    }
    Ok(leakage_from_values(obs, grid, &values, threshold))
}

/// Sequential leakage scan at the default causal threshold.
pub fn leakage_scan(
    obs: Observable,
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<LeakageReport> {
    leakage_scan_with_threshold(obs, grid, spec, CAUSAL_THRESHOLD)
}

/// Decay model fitted in log space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitModel {
    /// value ~ C exp(-exponent * abscissa); callers pass the already
    /// linearized abscissa (for cone scans, sqrt(r^2 - T^2)).
    ExpSqrt,
    /// value ~ C * abscissa^(-exponent).
    PowerLaw,
}

/// Least-squares decay fit in log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub model: FitModel,
    /// Positive for decaying data.
    pub exponent: f64,
    /// Standard error of the exponent.
    pub stderr: f64,
    /// Coefficient of determination, clamped to [0, 1].
    pub r2: f64,
    /// (min, max) of the raw abscissa actually fitted.
    pub window: (f64, f64),
}

/// Fit log(value) = intercept - exponent * x by ordinary least squares,
/// where x is the abscissa (ExpSqrt) or its logarithm (PowerLaw).
pub fn decay_fit(samples: &[(f64, f64)], model: FitModel) -> Result<DecayFit> {
    if samples.len() < 5 {
        return Err(Error::InsufficientSamples {
            needed: 5,
            got: samples.len(),
        });
    }
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    let mut window = (f64::INFINITY, f64::NEG_INFINITY);
    for (index, &(a, v)) in samples.iter().enumerate() {
        if !(v > 0.0) || !a.is_finite() {
            return Err(Error::NonPositiveSample { index });
        }
        let x = match model {
            FitModel::ExpSqrt => a,
            FitModel::PowerLaw => {
                if !(a > 0.0) {
                    return Err(Error::NonPositiveSample { index });
                }
                libm::log(a)
            }
        };
        xs.push(x);
        ys.push(libm::log(v));
        window = (window.0.min(a), window.1.max(a));
    }
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
        syy += (y - y_mean) * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidInput("fit abscissae are all identical"));
    }
    let slope = sxy / sxx;
    let sse = (syy - slope * sxy).max(0.0);
    let dof = n - 2.0;
    let stderr = libm::sqrt(sse / dof / sxx);
    let r2 = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(DecayFit {
        model,
        exponent: -slope,
        stderr,
        r2,
        window,
    })
}

/// Continuous phase track from principal-value phases: each successive
/// difference is pulled into (-pi, pi], so a sequence sampled finely
/// enough comes out free of 2 pi jumps.
pub fn unwrap_phases(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut offset = 0.0;
    for (i, &theta) in raw.iter().enumerate() {
        if i > 0 {
            let mut step = theta - raw[i - 1];
            while step > core::f64::consts::PI {
                step -= 2.0 * core::f64::consts::PI;
                offset -= 2.0 * core::f64::consts::PI;
            }
            while step <= -core::f64::consts::PI {
                step += 2.0 * core::f64::consts::PI;
                offset += 2.0 * core::f64::consts::PI;
            }
        }
        out.push(theta + offset);
    }
    out
}

/// One row of the classification table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub observable: Observable,
    pub report: LeakageReport,
    pub has_vacuum_part: bool,
    pub expected: Verdict,
    /// Spacelike decay exponent of the density, where one is defined:
    /// envelope-corrected fit along the T = 1 ray for the three leaking
    /// densities at m > 0. The retarded-wave observables have nothing to
    /// fit outside the cone.
    pub fit: Option<DecayFit>,
}

impl TableRow {
    pub fn matches_expectation(&self) -> bool {
        self.report.verdict == self.expected
    }
}

/// Radii of the fixed spacelike sampling ray used for table fits. T = 1
/// keeps |T^2 - r^2| >= 1 throughout, inside the stationary-phase domain.
pub const FIT_RAY_T: f64 = 1.0;
pub const FIT_RAY_R: [f64; 9] = [3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0];

/// Envelope-corrected spacelike decay samples for one leaking density
/// along the fixed ray: (sqrt(r^2 - T^2), corrected value). The algebraic
/// prefactor is divided out so the exponential fit sees only the decay,
/// which comes out at 2m for all three densities (they are moduli squared).
pub fn density_decay_samples(
    obs: Observable,
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>> {
    let p = grid.params();
    let src = grid.source();
    let mut out = Vec::with_capacity(FIT_RAY_R.len());
    for r in FIT_RAY_R {
        let iv = SpacetimeInterval::new(FIT_RAY_T, r);
        let s = libm::sqrt(-iv.s2());
        let value = match obs {
            Observable::NwDensity => {
                let env = nw_asymptotic(iv, &p)?.envelope;
                nw_density(iv, &src, &p, spec)? / (env * env)
            }
            Observable::GlauberDensity => {
                glauber_density(iv, &src, &p, spec)? * s * s * s
            }
            Observable::TruncatedIntensity => {
                truncated_intensity(iv, &src, &p, spec, grid.band_eps, true)? * s * s * s
            }
            _ => return Err(Error::UnknownObservable),
        };
        out.push((s, value));
    }
    Ok(out)
}

/// Envelope-corrected spacelike decay fit for the table, defined only for
/// the three leaking densities at m > 0 and g != 0; `Ok(None)` otherwise.
pub fn density_decay_fit(
    obs: Observable,
    grid: &GridSpec,
    spec: &QuadratureSpec,
) -> Result<Option<DecayFit>> {
    let fittable = matches!(
        obs,
        Observable::NwDensity | Observable::GlauberDensity | Observable::TruncatedIntensity
    );
    if !fittable || grid.m == 0.0 || grid.g == 0.0 {
        return Ok(None);
    }
    let samples = density_decay_samples(obs, grid, spec)?;
    decay_fit(&samples, FitModel::ExpSqrt).map(Some)
}

/// The full classification table at an explicit threshold: a sequential
/// leakage scan per observable plus decay fits for the leaking densities.
pub fn classification_table_with_threshold(
    grid: &GridSpec,
    spec: &QuadratureSpec,
    threshold: f64,
) -> Result<Vec<TableRow>> {
    OBSERVABLES
        .iter()
        .map(|&obs| {
            let report = leakage_scan_with_threshold(obs, grid, spec, threshold)?;
            Ok(TableRow {
                observable: obs,
                report,
                has_vacuum_part: obs.has_vacuum_part(),
                expected: expected_verdict(obs),
                fit: density_decay_fit(obs, grid, spec)?,
            })
        })
        .collect()
}

/// The classification table at the default threshold.
pub fn classification_table(grid: &GridSpec, spec: &QuadratureSpec) -> Result<Vec<TableRow>> {
    classification_table_with_threshold(grid, spec, CAUSAL_THRESHOLD)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    // The r grid is offset from the t grid so that some spacelike points
    // sit just outside the cone band (t - r = -0.1), where the leaking
    // densities are still large; a grid whose spacelike points are all deep
    // outside would let the exponential decay mask the leakage.
    fn small_grid() -> GridSpec {
        GridSpec {
            t_range: (0.3, 4.5, 6),
            r_range: (0.4, 4.6, 6),
            band_eps: 0.05,
            m: 1.0,
            g: 0.1,
            lambda: 20.0,
        }
    }

    #[test]
    fn grid_points_are_t_major_and_complete() {
        let grid = small_grid();
        let pts = grid_points(&grid);
        assert_eq!(pts.len(), 36);
        assert_eq!(pts[0], (0.3, 0.4));
        assert_eq!(pts[1].0, 0.3);
        assert!((pts[1].1 - (0.4 + 4.2 / 5.0)).abs() < 1e-15);
        assert_eq!(pts[35], (4.5, 4.6));
    }

    #[test]
    fn grid_validation_rejects_nonsense() {
        let mut g = small_grid();
        g.t_range = (2.0, 2.0, 6);
        assert!(g.validate().is_err());
        let mut g = small_grid();
        g.r_range = (0.1, 5.0, 1);
        assert!(g.validate().is_err());
        let mut g = small_grid();
        g.band_eps = -0.1;
        assert!(g.validate().is_err());
        assert!(small_grid().validate().is_ok());
    }

    #[test]
    fn observable_ids_round_trip() {
        for obs in OBSERVABLES {
            assert_eq!(Observable::parse(obs.as_str()).unwrap(), obs);
        }
        assert!(matches!(
            Observable::parse("wigner_density"),
            Err(Error::UnknownObservable)
        ));
    }

    #[test]
    fn field_scan_is_causal_and_nw_scan_is_not() {
        let grid = small_grid();
        let spec = QuadratureSpec::default();
        let field = leakage_scan(Observable::Field, &grid, &spec).unwrap();
        assert_eq!(field.verdict, Verdict::Causal);
        assert!(field.timelike_max > 1e-4, "retarded wave should register");
        assert!(field.n_points > 20);
        let nw = leakage_scan(Observable::NwDensity, &grid, &spec).unwrap();
        assert_eq!(nw.verdict, Verdict::NonCausal);
        assert!(nw.spacelike_max > 1e3 * FLOOR);
    }

    #[test]
    fn eval_observable_agrees_with_the_expectation_functions() {
        let grid = small_grid();
        let spec = QuadratureSpec::default();
        let (p, src, eps) = (grid.params(), grid.source(), grid.band_eps);
        let (t, r) = (2.0, 0.5);
        let iv = SpacetimeInterval::new(t, r);
        let field = eval_observable(Observable::Field, t, r, &grid, &spec)
            .unwrap()
            .unwrap();
        let want =
            crate::observables::field_expectation(iv, &src, &p, &spec, eps).unwrap();
        assert_eq!(field.value, want);
        let intensity = eval_observable(Observable::IntensitySource, t, r, &grid, &spec)
            .unwrap()
            .unwrap();
        let split =
            crate::observables::intensity_expectation(iv, &src, &p, &spec, eps).unwrap();
        assert_eq!(intensity.value, split.source);
        let energy = eval_observable(Observable::EnergySource, t, r, &grid, &spec)
            .unwrap()
            .unwrap();
        let split =
            crate::observables::energy_density_expectation(iv, &src, &p, &spec, eps).unwrap();
        assert_eq!(energy.value, split.source);
        let trunc = eval_observable(Observable::TruncatedIntensity, t, r, &grid, &spec)
            .unwrap()
            .unwrap();
        let want = truncated_intensity(iv, &src, &p, &spec, eps, true).unwrap();
        assert_eq!(trunc.value, want);
        let glauber = eval_observable(Observable::GlauberDensity, t, r, &grid, &spec)
            .unwrap()
            .unwrap();
        let want = crate::localization::glauber_density(iv, &src, &p, &spec).unwrap();
        assert_eq!(glauber.value, want);
    }

    #[test]
    fn leakage_ratio_is_invariant_under_coupling_rescale() {
        let spec = QuadratureSpec::default();
        let grid = small_grid();
        let mut doubled = small_grid();
        doubled.g *= 2.0;
        for obs in [Observable::GlauberDensity, Observable::Field] {
            let a = leakage_scan(obs, &grid, &spec).unwrap();
            let b = leakage_scan(obs, &doubled, &spec).unwrap();
            let rel = (a.leakage_ratio - b.leakage_ratio).abs()
                / a.leakage_ratio.max(1e-300);
            assert!(rel <= 1e-6, "{}: ratio moved by {rel}", obs.as_str());
            assert_eq!(a.verdict, b.verdict);
        }
    }

    #[test]
    fn verdicts_survive_grid_refinement() {
        let spec = QuadratureSpec::default();
        let grid = small_grid();
        let mut refined = small_grid();
        refined.t_range.2 *= 2;
        refined.r_range.2 *= 2;
        for obs in [Observable::Field, Observable::NwDensity] {
            let a = leakage_scan(obs, &grid, &spec).unwrap();
            let b = leakage_scan(obs, &refined, &spec).unwrap();
            assert_eq!(a.verdict, b.verdict, "{} flipped", obs.as_str());
        }
    }

    #[test]
    fn synthetic_exponential_is_fit_exactly() {
        let samples: Vec<(f64, f64)> =
            (1..=10).map(|i| (i as f64, libm::exp(-(i as f64)))).collect();
        let fit = decay_fit(&samples, FitModel::ExpSqrt).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-10, "exponent {}", fit.exponent);
        assert!(fit.stderr < 1e-10);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert_eq!(fit.window, (1.0, 10.0));
    }

    #[test]
    fn synthetic_power_law_is_fit_exactly() {
        let samples: Vec<(f64, f64)> = (1..=8)
            .map(|i| {
                let rho = 0.5 * i as f64;
                (rho, 3.0 / (rho * rho))
            })
            .collect();
        let fit = decay_fit(&samples, FitModel::PowerLaw).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-10);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_samples() {
        let short = vec![(1.0, 1.0); 4];
        assert!(matches!(
            decay_fit(&short, FitModel::ExpSqrt),
            Err(Error::InsufficientSamples { needed: 5, got: 4 })
        ));
        let mut bad = vec![(1.0, 1.0), (2.0, 0.5), (3.0, 0.2), (4.0, 0.1), (5.0, 0.05)];
        bad[2].1 = -0.2;
        assert!(matches!(
            decay_fit(&bad, FitModel::ExpSqrt),
            Err(Error::NonPositiveSample { index: 2 })
        ));
    }

    #[test]
    fn noisy_exponential_reports_honest_uncertainty() {
        // Deterministic +-2% multiplicative perturbation.
        let samples: Vec<(f64, f64)> = (1..=10)
            .map(|i| {
                let x = i as f64;
                let wiggle = 1.0 + 0.02 * if i % 2 == 0 { 1.0 } else { -1.0 };
                (x, libm::exp(-2.0 * x) * wiggle)
            })
            .collect();
        let fit = decay_fit(&samples, FitModel::ExpSqrt).unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.01);
        assert!(fit.stderr > 1e-4, "stderr should register the noise");
        assert!(fit.r2 > 0.999);
    }
}
