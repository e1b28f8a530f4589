//! Hodograph polynomials, signed curvature and the extremum-condition
//! polynomial
//!
//! ```text
//! N(t) = (x′y‴ − x‴y′)(x′² + y′²) − 3(x′y″ − x″y′)(x′x″ + y′y″)
//! ```
//!
//! which satisfies `κ′ = N / (x′² + y′²)^{5/2}`, so the sign of `N` is the
//! sign of `dκ/dt`.

use crate::geom::{CanonicalConfig, CubicBezier, SpecialCubic};
use crate::poly::{Poly, PolyError, RootWindow};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurvatureError {
    #[error("curve has zero speed at t = {0} (kink or cusp)")]
    ZeroSpeed(f64),
    #[error("curvature is identically zero (straight-line curve)")]
    IdenticallyZero,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// First three derivatives of both coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeBundle<T> {
    pub x1: Poly<T>,
    pub x2: Poly<T>,
    pub x3: Poly<T>,
    pub y1: Poly<T>,
    pub y2: Poly<T>,
    pub y3: Poly<T>,
}

pub fn derivatives<T: Scalar>(c: &CubicBezier<T>) -> DerivativeBundle<T> {
    let (x, y) = c.coordinate_polys();
    let x1 = x.derivative();
    let x2 = x1.derivative();
    let x3 = x2.derivative();
    let y1 = y.derivative();
    let y2 = y1.derivative();
    let y3 = y2.derivative();
    DerivativeBundle { x1, x2, x3, y1, y2, y3 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureModel<T> {
    /// `x′y″ − x″y′`
    pub cross: Poly<T>,
    /// `x′² + y′²`
    pub speed2: Poly<T>,
    /// `x′y‴ − x‴y′`, the derivative of `cross`
    pub jerk_cross: Poly<T>,
    /// `x′x″ + y′y″`
    pub accel_dot: Poly<T>,
    pub n_poly: Poly<T>,
}

impl<T: Scalar> CurvatureModel<T> {
    pub fn new(d: &DerivativeBundle<T>) -> Self {
        Self::with_y_scale_sq(d, &T::one())
    }

    /// Model of the curve `(x, s·y)` knowing only `s²`, with the odd factor
    /// `s` divided out of `cross`, `jerk_cross` and `n_poly`.
    pub fn with_y_scale_sq(d: &DerivativeBundle<T>, s2: &T) -> Self {
        let cross = &(&d.x1 * &d.y2) - &(&d.x2 * &d.y1);
        let speed2 = &(&d.x1 * &d.x1) + &(&d.y1 * &d.y1).scale(s2);
        let jerk_cross = &(&d.x1 * &d.y3) - &(&d.x3 * &d.y1);
        let accel_dot = &(&d.x1 * &d.x2) + &(&d.y1 * &d.y2).scale(s2);
        let three = T::from_i64(3).expect("small integer");
        let n_poly = &(&jerk_cross * &speed2) - &(&cross * &accel_dot).scale(&three);
        CurvatureModel {
            cross,
            speed2,
            jerk_cross,
            accel_dot,
            n_poly,
        }
    }

    pub fn of_curve(c: &CubicBezier<T>) -> Self {
        Self::new(&derivatives(c))
    }

    /// `h`-reduced model of the canonical cubic: `cross` and `n_poly` are the
    /// true ones divided by `h`, so only `h²` enters.
    pub fn canonical_reduced(cfg: &CanonicalConfig<T>) -> Self {
        let unit = SpecialCubic::canonical(cfg.b.clone(), T::one(), cfg.a.clone())
            .expect("canonical config carries a valid blend");
        Self::with_y_scale_sq(&derivatives(unit.bezier()), &cfg.h2)
    }
}

/// Left-hand side of the extremum condition for a concrete curve.
pub fn extremum_condition_poly<T: Scalar>(c: &CubicBezier<T>) -> Poly<T> {
    CurvatureModel::of_curve(c).n_poly
}

/// Parameters in `(0, 1)` where the curvature vanishes.
pub fn inflection_params<T: Scalar>(c: &CubicBezier<T>) -> Result<Vec<RootWindow<T>>, CurvatureError> {
    let cross = CurvatureModel::of_curve(c).cross;
    if cross.is_zero() {
        return Err(CurvatureError::IdenticallyZero);
    }
    Ok(cross.isolate_roots(&T::zero(), &T::one(), true)?)
}

/// Float curvature evaluator for dense sampling. Zero speed is decided
/// exactly: every `f64` parameter is a dyadic rational.
#[derive(Debug, Clone)]
pub struct KappaEvaluator<T> {
    // hodograph and its derivative of a cubic: fixed small degree, so keep
    // the float coefficients inline for the sampling loops
    x1: [f64; 3],
    x2: [f64; 2],
    y1: [f64; 3],
    y2: [f64; 2],
    speed2_exact: Poly<T>,
    speed2_scale: f64,
}

impl<T: Scalar> KappaEvaluator<T> {
    pub fn new(c: &CubicBezier<T>) -> Self {
        let d = derivatives(c);
        let speed2_exact = &(&d.x1 * &d.x1) + &(&d.y1 * &d.y1);
        let speed2_scale = speed2_exact
            .coeffs()
            .iter()
            .map(|c| c.to_f64_lossy().abs())
            .fold(0.0, f64::max);
        KappaEvaluator {
            x1: fixed(&d.x1),
            x2: fixed(&d.x2),
            y1: fixed(&d.y1),
            y2: fixed(&d.y2),
            speed2_exact,
            speed2_scale,
        }
    }

    pub fn kappa(&self, t: f64) -> Result<f64, CurvatureError> {
        let [a0, a1, a2] = self.x1;
        let [b0, b1, b2] = self.y1;
        let (xp, yp) = ((a2 * t + a1) * t + a0, (b2 * t + b1) * t + b0);
        let speed2 = xp * xp + yp * yp;
        if speed2 <= 1e-12 * self.speed2_scale {
            let exact_zero = T::from_f64(t).is_none_or(|te| self.speed2_exact.eval(&te).is_zero());
            if exact_zero || speed2 == 0.0 {
                return Err(CurvatureError::ZeroSpeed(t));
            }
        }
        let (xpp, ypp) = (self.x2[1] * t + self.x2[0], self.y2[1] * t + self.y2[0]);
        let cross = xp * ypp - xpp * yp;
        Ok(cross / (speed2 * speed2.sqrt()))
    }

    /// Central difference `(κ(t+h) − κ(t−h)) / 2h`.
    pub fn kappa_derivative_fd(&self, t: f64, step: f64) -> Result<f64, CurvatureError> {
        Ok((self.kappa(t + step)? - self.kappa(t - step)?) / (2.0 * step))
    }
}

fn fixed<T: Scalar, const N: usize>(p: &Poly<T>) -> [f64; N] {
    debug_assert!(p.coeffs().len() <= N);
    let mut out = [0.0; N];
    for (o, c) in out.iter_mut().zip(p.coeffs()) {
        *o = c.to_f64_lossy();
    }
    out
}

/// `κ(t) = (x′y″ − x″y′) / (x′² + y′²)^{3/2}`, positive for counter-clockwise
/// turning.
pub fn signed_curvature<T: Scalar>(c: &CubicBezier<T>, t: f64) -> Result<f64, CurvatureError> {
    KappaEvaluator::new(c).kappa(t)
}
