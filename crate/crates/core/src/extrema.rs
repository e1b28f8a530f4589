//! Counting and locating curvature extrema of a special cubic on `(0, 1)`.
//!
//! An extremum is an odd-multiplicity root of the extremum-condition
//! polynomial that is not also a root of `x′y″ − x″y′` (those are
//! inflections). Degenerate triangles are classified first: coincident
//! endpoints give a kink at `t = 1/2`, collinear control points give either a
//! zero-curvature segment or a segment with one kink.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::curvature::{CurvatureError, CurvatureModel, KappaEvaluator};
use crate::geom::{CanonicalConfig, SimilarityMap};
use crate::poly::{Parity, PolyError};
use crate::scalar::{dyadic_width, fmt_rational, int, rat, to_f64};
use crate::{Rational, RationalCubic, RationalPoly, RationalWindow};

/// Refined windows are at most `2^-40` wide.
pub const REFINE_BITS: u32 = 40;
/// Sampling oracle keeps this far from the interval ends.
pub const ORACLE_EPSILON: f64 = 1e-4;
pub const ORACLE_MIN_SAMPLES: usize = 1000;
/// Consecutive samples closer than this many ulps of their magnitude are
/// merged into a plateau by the oracle.
pub const ORACLE_PLATEAU_ULPS: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtremaError {
    #[error("{count} curvature extrema found inside the theorem regime at b = {b}, h^2 = {h2}, a = {a}")]
    TheoremViolation {
        b: String,
        h2: String,
        a: String,
        count: usize,
    },
    #[error("configuration is outside the theorem regime (need h > 0 and 2/3 < a <= 1)")]
    OutsideRegime,
    #[error("sampling oracle needs a regular curve, got {0:?}")]
    NotRegular(ExtremaKind),
    #[error("sampling oracle needs at least {ORACLE_MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExtremaKind {
    /// Non-degenerate triangle (`h > 0` in canonical form).
    Regular,
    /// `Q0 = Q2 ≠ Q1`: the curve runs out and back with a kink at `t = 1/2`.
    KinkAtHalf,
    /// Collinear with `|b| < 1`: curvature vanishes identically.
    ZeroCurvatureSegment,
    /// Collinear with `|b| ≥ 1`: one kink where the speed vanishes.
    KinkedSegment,
    /// All three defining points coincide.
    DegeneratePoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremumLocation {
    /// Root window in the canonical parameter.
    pub window: RationalWindow,
    /// The same window on the input curve's parameter, `lo <= hi`.
    pub input_window: [Rational; 2],
    /// Parameter on the input curve (after undoing an endpoint swap).
    pub t: f64,
    /// Exact parameter when the window collapsed onto the root.
    pub t_exact: Option<Rational>,
    /// Signed curvature there; `None` at a kink.
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaReport {
    pub kind: ExtremaKind,
    pub count: usize,
    pub locations: Vec<ExtremumLocation>,
    /// Even-multiplicity roots of the extremum condition: `κ′` touches zero
    /// without changing sign, so these are not extrema.
    pub degenerate_critical_points: Vec<ExtremumLocation>,
    pub theorem_regime: bool,
}

impl ExtremaReport {
    fn new(
        kind: ExtremaKind,
        locations: Vec<ExtremumLocation>,
        degenerate_critical_points: Vec<ExtremumLocation>,
        theorem_regime: bool,
        config: Option<&CanonicalConfig<Rational>>,
    ) -> Result<Self, ExtremaError> {
        let count = locations.len();
        if theorem_regime && count > 1 {
            let cfg = config.expect("theorem regime implies a canonical config");
            return Err(ExtremaError::TheoremViolation {
                b: fmt_rational(&cfg.b),
                h2: fmt_rational(&cfg.h2),
                a: fmt_rational(&cfg.a),
                count,
            });
        }
        debug_assert!(kind != ExtremaKind::ZeroCurvatureSegment || count == 0);
        debug_assert!(kind != ExtremaKind::KinkAtHalf || count == 1);
        Ok(ExtremaReport {
            kind,
            count,
            locations,
            degenerate_critical_points,
            theorem_regime,
        })
    }

    pub fn is_monotone(&self) -> bool {
        self.count == 0
    }
}

pub fn classify(c: &RationalCubic) -> ExtremaKind {
    let [q0, q1, q2] = c.q();
    if q0 == q2 {
        return if q1 == q0 {
            ExtremaKind::DegeneratePoint
        } else {
            ExtremaKind::KinkAtHalf
        };
    }
    let (cfg, _) = c.canonical_config().expect("endpoints are distinct");
    if cfg.h2.is_positive() {
        ExtremaKind::Regular
    } else if cfg.b.abs() < int(1) {
        ExtremaKind::ZeroCurvatureSegment
    } else {
        ExtremaKind::KinkedSegment
    }
}

fn location(
    window: RationalWindow,
    map: Option<&SimilarityMap<Rational>>,
    kappa_at: impl Fn(f64) -> Option<f64>,
) -> ExtremumLocation {
    let pull = |t: &Rational| map.map_or_else(|| t.clone(), |m| m.pull_back_t(t));
    let t_exact = window.exact_root().map(pull);
    let mid = (window.lo.clone() + &window.hi) / int(2);
    let t = to_f64(&pull(&mid));
    let (lo, hi) = (pull(&window.lo), pull(&window.hi));
    let input_window = if lo <= hi { [lo, hi] } else { [hi, lo] };
    ExtremumLocation {
        window,
        input_window,
        t,
        t_exact,
        kappa: kappa_at(t),
    }
}

/// Root windows of the extremum condition in open `(0, 1)` that are not
/// inflections.
fn critical_windows(model: &CurvatureModel<Rational>) -> Result<Vec<RationalWindow>, ExtremaError> {
    let n = &model.n_poly;
    if n.is_zero() {
        return Ok(Vec::new());
    }
    // Only roots shared with `cross` can be inflections; skip the gcd when
    // `cross` has no root in the closed unit interval.
    let cross_roots = match model.cross.is_zero() {
        true => 1,
        false => model.cross.count_roots(&int(-1), &int(1))?,
    };
    let shared = if cross_roots > 0 {
        n.gcd(&model.cross)
    } else {
        RationalPoly::constant(int(1))
    };
    let mut out = Vec::new();
    for w in n.isolate_roots(&int(0), &int(1), true)? {
        let inflection = shared.degree().unwrap_or(0) > 0
            && match w.exact_root() {
                Some(x) => shared.eval(x).is_zero(),
                None => shared.count_roots(&w.lo, &w.hi)? > 0,
            };
        if !inflection {
            out.push(w);
        }
    }
    Ok(out)
}

/// Extremum count of the canonical curve with `h > 0`, given through `h²`.
pub fn count_canonical(cfg: &CanonicalConfig<Rational>) -> Result<usize, ExtremaError> {
    if !cfg.h2.is_positive() {
        return Err(ExtremaError::OutsideRegime);
    }
    let model = CurvatureModel::canonical_reduced(cfg);
    Ok(critical_windows(&model)?
        .iter()
        .filter(|w| w.parity == Parity::Odd)
        .count())
}

pub fn count_extrema(c: &RationalCubic) -> Result<ExtremaReport, ExtremaError> {
    let kind = classify(c);
    match kind {
        ExtremaKind::DegeneratePoint | ExtremaKind::ZeroCurvatureSegment => {
            ExtremaReport::new(kind, Vec::new(), Vec::new(), false, None)
        }
        ExtremaKind::KinkAtHalf => {
            let w = RationalWindow::exact(rat(1, 2), 1);
            ExtremaReport::new(kind, vec![location(w, None, |_| None)], Vec::new(), false, None)
        }
        ExtremaKind::KinkedSegment => {
            // Kinks are where the hodograph vanishes, i.e. roots of x′² + y′².
            let speed2 = CurvatureModel::of_curve(c.bezier()).speed2;
            let width = dyadic_width(REFINE_BITS);
            let mut windows = speed2.isolate_roots(&int(0), &int(1), true)?;
            if windows.is_empty() {
                // |b| = 1: the speed only vanishes at an endpoint.
                windows = speed2.isolate_roots(&int(0), &int(1), false)?;
            }
            let locations = windows
                .iter()
                .map(|w| Ok(location(speed2.refine(w, &width)?, None, |_| None)))
                .collect::<Result<Vec<_>, ExtremaError>>()?;
            ExtremaReport::new(kind, locations, Vec::new(), false, None)
        }
        ExtremaKind::Regular => {
            let (cfg, map) = c.canonical_config().expect("endpoints are distinct");
            let model = CurvatureModel::canonical_reduced(&cfg);
            let ev = KappaEvaluator::new(c.bezier());
            let kappa_at = |t: f64| ev.kappa(t).ok();
            let regime = cfg.theorem_regime();
            let width = dyadic_width(REFINE_BITS);
            let mut locations = Vec::new();
            let mut degenerate = Vec::new();
            for w in critical_windows(&model)? {
                let loc = location(model.n_poly.refine(&w, &width)?, Some(&map), kappa_at);
                match w.parity {
                    Parity::Odd => locations.push(loc),
                    Parity::Even => degenerate.push(loc),
                }
            }
            locations.sort_by(|a, b| a.t.total_cmp(&b.t));
            degenerate.sort_by(|a, b| a.t.total_cmp(&b.t));
            ExtremaReport::new(kind, locations, degenerate, regime, Some(&cfg))
        }
    }
}

/// Approximate parameters of the strict local extrema of sampled `κ` on a
/// uniform grid over `(ε, 1-ε)`.
pub fn oracle_extrema(c: &RationalCubic, samples: usize) -> Result<Vec<f64>, ExtremaError> {
    if samples < ORACLE_MIN_SAMPLES {
        return Err(ExtremaError::TooFewSamples(samples));
    }
    let kind = classify(c);
    if kind != ExtremaKind::Regular {
        return Err(ExtremaError::NotRegular(kind));
    }
    let ev = KappaEvaluator::new(c.bezier());
    let span = 1.0 - 2.0 * ORACLE_EPSILON;
    let step = span / (samples - 1) as f64;
    let mut found = Vec::new();
    let mut prev_kappa = ev.kappa(ORACLE_EPSILON)?;
    // Sign of the last non-plateau difference and where it ended.
    let mut last_dir = 0i8;
    let mut last_turn_t = ORACLE_EPSILON;
    for i in 1..samples {
        let t = ORACLE_EPSILON + step * i as f64;
        let kappa = ev.kappa(t)?;
        let diff = kappa - prev_kappa;
        let tol = ORACLE_PLATEAU_ULPS * f64::EPSILON * kappa.abs().max(prev_kappa.abs());
        let dir = if diff > tol {
            1
        } else if diff < -tol {
            -1
        } else {
            0
        };
        if dir != 0 {
            if last_dir != 0 && dir != last_dir {
                found.push(0.5 * (last_turn_t + t - step));
            }
            last_dir = dir;
            last_turn_t = t;
        }
        prev_kappa = kappa;
    }
    Ok(found)
}

/// Number of local extrema seen by the sampling oracle.
pub fn oracle_count(c: &RationalCubic, samples: usize) -> Result<usize, ExtremaError> {
    Ok(oracle_extrema(c, samples)?.len())
}

/// The unique extremum parameter inside the theorem regime, `None` when the
/// curvature is monotone.
pub fn extremum_location(c: &RationalCubic) -> Result<Option<f64>, ExtremaError> {
    match c.canonical_config() {
        Some((cfg, _)) if cfg.theorem_regime() => {}
        _ => return Err(ExtremaError::OutsideRegime),
    }
    let report = count_extrema(c)?;
    Ok(report.locations.first().map(|l| l.t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point2, SpecialCubic};
    use crate::scalar::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn canon(b: &str, h: &str, a: &str) -> RationalCubic {
        SpecialCubic::canonical(q(b), q(h), q(a)).unwrap()
    }

    fn ipt(x: i64, y: i64) -> Point2<Rational> {
        Point2::new(int(x), int(y))
    }

    #[test]
    fn classify_special_cases() {
        let kink = SpecialCubic::new(ipt(0, 0), ipt(1, 1), ipt(0, 0), q("0.8")).unwrap();
        assert_eq!(classify(&kink), ExtremaKind::KinkAtHalf);
        assert_eq!(classify(&canon("0", "0", "0.8")), ExtremaKind::ZeroCurvatureSegment);
        assert_eq!(classify(&canon("2", "0", "0.8")), ExtremaKind::KinkedSegment);
        assert_eq!(classify(&canon("0.5", "1", "0.8")), ExtremaKind::Regular);
        let point = SpecialCubic::new(ipt(2, 2), ipt(2, 2), ipt(2, 2), q("0.8")).unwrap();
        assert_eq!(classify(&point), ExtremaKind::DegeneratePoint);
    }

    #[test]
    fn kink_at_half_report() {
        let kink = SpecialCubic::new(ipt(0, 0), ipt(1, 1), ipt(0, 0), q("0.8")).unwrap();
        let r = count_extrema(&kink).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.locations[0].t_exact, Some(rat(1, 2)));
        assert_eq!(r.locations[0].kappa, None);
    }

    #[test]
    fn kinked_segment_locates_zero_speed() {
        let c = canon("2", "0", "0.75");
        let r = count_extrema(&c).unwrap();
        assert_eq!(r.count, 1);
        let t = r.locations[0].t;
        assert!(t > 0.0 && t < 1.0);
        let ev = KappaEvaluator::new(c.bezier());
        let d = crate::curvature::derivatives(c.bezier()).x1.to_f64_poly();
        assert!(d.eval_f64(t).abs() < 1e-9);
        assert!(ev.kappa(0.3).is_ok());
    }

    #[test]
    fn symmetric_regular_cases() {
        for a in ["0.9", "1", "0.75", "0.8"] {
            let r = count_extrema(&canon("0", "1", a)).unwrap();
            assert_eq!(r.count, 1, "a = {a}");
            assert_eq!(r.locations[0].t_exact, Some(rat(1, 2)));
            assert!(r.theorem_regime);
        }
        let r = count_extrema(&canon("0", "1", "1")).unwrap();
        assert!((r.locations[0].kappa.unwrap() + 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn case_one_single_crossing() {
        // b = 0.5 <= 3 - 2/0.9: N decreases on (0, 1) and crosses zero once
        let c = canon("0.5", "1", "0.9");
        assert_eq!(count_extrema(&c).unwrap().count, 1);
        let t = extremum_location(&c).unwrap().unwrap();
        assert!(t > 0.5 && t < 0.7);
        assert_eq!(oracle_count(&c, 100_000).unwrap(), 1);
    }

    #[test]
    fn monotone_when_n_stays_positive() {
        // (b, h) inside the circle where N(1, a) keeps the sign of N(0, a);
        // at a = 0.9 its center is 111/117 and its radius 6/117
        let c = canon("0.95", "0.02", "0.9");
        let r = count_extrema(&c).unwrap();
        assert_eq!(r.count, 0);
        assert_eq!(extremum_location(&c).unwrap(), None);
        assert_eq!(oracle_count(&c, 100_000).unwrap(), 0);
    }

    #[test]
    fn case_two_with_positive_f_at_one() {
        let c = canon("4", "0.1", "0.95");
        let t = extremum_location(&c).unwrap().expect("one extremum");
        assert!(t > 0.0 && t < 1.0);
        assert_eq!(oracle_count(&c, 100_000).unwrap(), 1);
    }

    #[test]
    fn location_requires_regime() {
        assert_eq!(
            extremum_location(&canon("0", "1", "0.5")),
            Err(ExtremaError::OutsideRegime)
        );
        assert_eq!(
            extremum_location(&canon("0", "0", "0.9")),
            Err(ExtremaError::OutsideRegime)
        );
    }

    #[test]
    fn oracle_preconditions() {
        assert_eq!(
            oracle_count(&canon("0", "1", "1"), 999),
            Err(ExtremaError::TooFewSamples(999))
        );
        assert_eq!(
            oracle_count(&canon("0", "0", "1"), 1000),
            Err(ExtremaError::NotRegular(ExtremaKind::ZeroCurvatureSegment))
        );
        assert_eq!(oracle_count(&canon("0", "1", "1"), 100_000).unwrap(), 1);
    }

    #[test]
    fn swap_reverses_locations() {
        let c = canon("1.5", "0.5", "0.97");
        let r = count_extrema(&c).unwrap();
        let rr = count_extrema(&c.reversed()).unwrap();
        assert_eq!(r.count, rr.count);
        for (l, m) in r.locations.iter().zip(rr.locations.iter().rev()) {
            assert!((l.t - (1.0 - m.t)).abs() < 1e-11);
            assert_eq!(l.input_window[0], int(1) - &m.input_window[1]);
            assert!(l.input_window[0] <= rat_of(l.t) && rat_of(l.t) <= l.input_window[1]);
        }
    }

    fn rat_of(t: f64) -> Rational {
        Rational::from_float(t).unwrap()
    }

    #[test]
    fn out_of_regime_may_have_several() {
        // small a is outside the guarantee; just make sure nothing is rejected
        let r = count_extrema(&canon("3", "0.2", "0.3")).unwrap();
        assert!(!r.theorem_regime);
    }

    #[test]
    fn violation_is_rejected() {
        let cfg = CanonicalConfig::new(int(0), int(1), int(1));
        let loc = location(RationalWindow::exact(rat(1, 2), 1), None, |_| None);
        let err = ExtremaReport::new(
            ExtremaKind::Regular,
            vec![loc.clone(), loc],
            Vec::new(),
            true,
            Some(&cfg),
        );
        assert!(matches!(err, Err(ExtremaError::TheoremViolation { count: 2, .. })));
    }
}
