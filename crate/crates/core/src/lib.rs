//! Curvature extrema of special cubic Bézier curves.
//!
//! A cubic with control points `P0 = Q0`, `P1 = (1-a)Q0 + aQ1`,
//! `P2 = aQ1 + (1-a)Q2`, `P3 = Q2` has at most one local curvature extremum
//! on `t ∈ (0, 1)` whenever `a ∈ (2/3, 1]`. This crate builds those curves,
//! counts and locates their curvature extrema exactly (Sturm sequences over
//! rationals), cross-checks the count with a dense sampling oracle, and
//! audits every algebraic step of the bound.
//!
//! Geometry and polynomial code is generic over [`Scalar`]; the aliases below
//! fix the exact rational instantiation used for decisions and the `f64` one
//! used for sampling.

pub mod audit;
pub mod curvature;
pub mod extrema;
pub mod geom;
pub mod poly;
pub mod scalar;
pub mod sweep;

pub use geom::{canonicalize, Canonical, CanonicalConfig, CubicBezier, Point2, SimilarityMap, SpecialCubic};
pub use poly::{Parity, Poly, RootWindow};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
pub type RationalPoly = Poly<Rational>;
pub type RationalPoint = Point2<Rational>;
pub type RationalCubic = SpecialCubic<Rational>;
pub type RationalConfig = CanonicalConfig<Rational>;
pub type RationalWindow = RootWindow<Rational>;

pub type PolyF64 = Poly<f64>;
pub type PointF64 = Point2<f64>;
pub type CubicF64 = SpecialCubic<f64>;
