//! Points, Bézier control polygons, the special control-point construction and
//! similarity normalization to the canonical triangle `(-1,0), (b,h), (1,0)`.

use std::ops::{Add, Sub};

use crate::poly::Poly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("blend parameter a = {0} is outside (0, 1]")]
    ParameterOutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(T::zero(), T::zero())
    }

    pub fn scale(&self, s: &T) -> Self {
        Point2::new(self.x.clone() * s, self.y.clone() * s)
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x.clone() * &o.x + self.y.clone() * &o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(&self, o: &Self) -> T {
        self.x.clone() * &o.y - self.y.clone() * &o.x
    }

    pub fn norm2(&self) -> T {
        self.dot(self)
    }

    /// `(1-s)·self + s·o`
    pub fn lerp(&self, o: &Self, s: &T) -> Self {
        let r = T::one() - s;
        Point2::new(
            self.x.clone() * &r + o.x.clone() * s,
            self.y.clone() * &r + o.y.clone() * s,
        )
    }

    pub fn to_f64(&self) -> Point2<f64> {
        Point2::new(self.x.to_f64_lossy(), self.y.to_f64_lossy())
    }
}

impl<T: Scalar> Add for &Point2<T> {
    type Output = Point2<T>;
    fn add(self, o: Self) -> Point2<T> {
        Point2::new(self.x.clone() + &o.x, self.y.clone() + &o.y)
    }
}

impl<T: Scalar> Sub for &Point2<T> {
    type Output = Point2<T>;
    fn sub(self, o: Self) -> Point2<T> {
        Point2::new(self.x.clone() - &o.x, self.y.clone() - &o.y)
    }
}

/// Plain cubic Bézier curve given by its four control points.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicBezier<T> {
    pub p: [Point2<T>; 4],
}

impl<T: Scalar> CubicBezier<T> {
    pub fn new(p0: Point2<T>, p1: Point2<T>, p2: Point2<T>, p3: Point2<T>) -> Self {
        CubicBezier { p: [p0, p1, p2, p3] }
    }

    /// De Casteljau evaluation.
    pub fn point_at(&self, t: &T) -> Point2<T> {
        let mut pts = self.p.to_vec();
        for level in (1..4).rev() {
            for i in 0..level {
                pts[i] = pts[i].lerp(&pts[i + 1], t);
            }
        }
        pts.swap_remove(0)
    }

    /// Power-basis coordinate polynomials `(x(t), y(t))`.
    pub fn coordinate_polys(&self) -> (Poly<T>, Poly<T>) {
        let [p0, p1, p2, p3] = &self.p;
        let three = T::from_i64(3).expect("small integer");
        let c1 = (p1 - p0).scale(&three);
        let c2 = (&(p0 + p2) - &p1.scale(&T::two())).scale(&three);
        let c3 = &(p3 - p0) + &(p1 - p2).scale(&three);
        (
            Poly::new(vec![p0.x.clone(), c1.x.clone(), c2.x.clone(), c3.x.clone()]),
            Poly::new(vec![p0.y.clone(), c1.y, c2.y, c3.y]),
        )
    }

    pub fn reversed(&self) -> Self {
        let [p0, p1, p2, p3] = self.p.clone();
        CubicBezier::new(p3, p2, p1, p0)
    }

    pub fn to_f64(&self) -> CubicBezier<f64> {
        CubicBezier {
            p: self.p.clone().map(|q| q.to_f64()),
        }
    }
}

/// Cubic built from a triangle `Q0, Q1, Q2` and a blend `a ∈ (0, 1]`:
/// `P0 = Q0, P1 = (1-a)Q0 + aQ1, P2 = aQ1 + (1-a)Q2, P3 = Q2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialCubic<T> {
    q: [Point2<T>; 3],
    a: T,
    bezier: CubicBezier<T>,
}

impl<T: Scalar> SpecialCubic<T> {
    pub fn new(q0: Point2<T>, q1: Point2<T>, q2: Point2<T>, a: T) -> Result<Self, GeomError> {
        if !(a > T::zero() && a <= T::one()) {
            return Err(GeomError::ParameterOutOfRange(format!("{a:?}")));
        }
        let p1 = q0.lerp(&q1, &a);
        let p2 = q2.lerp(&q1, &a);
        let bezier = CubicBezier::new(q0.clone(), p1, p2, q2.clone());
        Ok(SpecialCubic {
            q: [q0, q1, q2],
            a,
            bezier,
        })
    }

    /// The cubic on the canonical triangle `(-1,0), (b,h), (1,0)`.
    pub fn canonical(b: T, h: T, a: T) -> Result<Self, GeomError> {
        let one = T::one();
        Self::new(
            Point2::new(-one.clone(), T::zero()),
            Point2::new(b, h),
            Point2::new(one, T::zero()),
            a,
        )
    }

    pub fn q(&self) -> &[Point2<T>; 3] {
        &self.q
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn control_points(&self) -> &[Point2<T>; 4] {
        &self.bezier.p
    }

    pub fn bezier(&self) -> &CubicBezier<T> {
        &self.bezier
    }

    /// Same curve traversed backwards: `Q0` and `Q2` exchanged.
    pub fn reversed(&self) -> Self {
        let [q0, q1, q2] = self.q.clone();
        Self::new(q2, q1, q0, self.a.clone()).expect("blend already validated")
    }

    /// Normal form of the defining triangle plus the map that produced it.
    pub fn canonicalize(&self) -> Canonical<T> {
        canonicalize(&self.q[0], &self.q[1], &self.q[2])
    }

    /// Canonical parameters `(b, h², a)`; `None` when `Q0 = Q2`.
    pub fn canonical_config(&self) -> Option<(CanonicalConfig<T>, SimilarityMap<T>)> {
        match self.canonicalize() {
            Canonical::Coincident => None,
            Canonical::Triangle { b, h, map } => {
                let h2 = h.clone() * &h;
                Some((
                    CanonicalConfig {
                        b,
                        h2,
                        a: self.a.clone(),
                    },
                    map,
                ))
            }
        }
    }

    pub fn to_f64(&self) -> SpecialCubic<f64> {
        SpecialCubic {
            q: self.q.clone().map(|p| p.to_f64()),
            a: self.a.to_f64_lossy(),
            bezier: self.bezier.to_f64(),
        }
    }
}

/// Canonical parameters of a special cubic. Only `h²` is kept: every quantity
/// that decides the extremum count depends on `h` through `h²` up to a global
/// positive factor.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalConfig<T> {
    pub b: T,
    pub h2: T,
    pub a: T,
}

impl<T: Scalar> CanonicalConfig<T> {
    pub fn new(b: T, h2: T, a: T) -> Self {
        debug_assert!(h2 >= T::zero());
        CanonicalConfig { b, h2, a }
    }

    pub fn from_bha(b: T, h: &T, a: T) -> Self {
        Self::new(b, h.clone() * h, a)
    }

    /// `2/3 < a ≤ 1` and `h > 0`.
    pub fn theorem_regime(&self) -> bool {
        self.a > T::from_ratio(2, 3) && self.a <= T::one() && self.h2 > T::zero()
    }

    pub fn h_f64(&self) -> f64 {
        self.h2.to_f64_lossy().sqrt()
    }
}

/// `p ↦ L·p + offset` with `L` a rotation-scale, possibly composed with a
/// reflection.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMap<T> {
    pub linear: [[T; 2]; 2],
    pub offset: Point2<T>,
    /// A reflection was applied so that `h ≥ 0`.
    pub mirror: bool,
    /// `Q0` and `Q2` were exchanged so that `b ≥ 0`; curve parameters
    /// correspond by `t ↦ 1 - t`.
    pub swap: bool,
}

impl<T: Scalar> SimilarityMap<T> {
    pub fn identity() -> Self {
        SimilarityMap {
            linear: [[T::one(), T::zero()], [T::zero(), T::one()]],
            offset: Point2::origin(),
            mirror: false,
            swap: false,
        }
    }

    pub fn apply(&self, p: &Point2<T>) -> Point2<T> {
        let [[m00, m01], [m10, m11]] = &self.linear;
        Point2::new(
            m00.clone() * &p.x + m01.clone() * &p.y + &self.offset.x,
            m10.clone() * &p.x + m11.clone() * &p.y + &self.offset.y,
        )
    }

    pub fn determinant(&self) -> T {
        let [[m00, m01], [m10, m11]] = &self.linear;
        m00.clone() * m11 - m01.clone() * m10
    }

    pub fn inverse(&self) -> Self {
        let det = self.determinant();
        let [[m00, m01], [m10, m11]] = &self.linear;
        let linear = [
            [m11.clone() / det.clone(), -m01.clone() / det.clone()],
            [-m10.clone() / det.clone(), m00.clone() / det],
        ];
        let mut inv = SimilarityMap {
            linear,
            offset: Point2::origin(),
            mirror: self.mirror,
            swap: self.swap,
        };
        let o = inv.apply(&self.offset);
        inv.offset = Point2::new(-o.x, -o.y);
        inv
    }

    /// Maps a canonical-curve parameter back to the original curve.
    pub fn pull_back_t(&self, t: &T) -> T {
        if self.swap {
            T::one() - t
        } else {
            t.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Canonical<T> {
    /// `Q0 = Q2`: no similarity can separate the endpoints.
    Coincident,
    Triangle {
        b: T,
        h: T,
        map: SimilarityMap<T>,
    },
}

/// Finds the similarity sending the (possibly reordered) endpoints to
/// `(-1,0)` and `(1,0)` with `Q1 ↦ (b, h)`, `b ≥ 0`, `h ≥ 0`.
///
/// The rotation-scale part is multiplication by the complex number
/// `2 / (Q2 - Q0)`, which is rational for rational input.
pub fn canonicalize<T: Scalar>(q0: &Point2<T>, q1: &Point2<T>, q2: &Point2<T>) -> Canonical<T> {
    if q0 == q2 {
        return Canonical::Coincident;
    }
    let d = q2 - q0;
    let n2 = d.norm2();
    let mut re = T::two() * &d.x / n2.clone();
    let mut im = -(T::two() * &d.y) / n2;
    let mid = (q0 + q2).scale(&(T::one() / T::two()));
    let rel = q1 - &mid;
    let mut w = Point2::new(
        re.clone() * &rel.x - im.clone() * &rel.y,
        im.clone() * &rel.x + re.clone() * &rel.y,
    );

    let swap = w.x.is_negative();
    if swap {
        re = -re;
        im = -im;
        w = Point2::new(-w.x, -w.y);
    }
    let mirror = w.y.is_negative();
    let mut linear = [[re.clone(), -im.clone()], [im, re]];
    if mirror {
        linear[1] = [-linear[1][0].clone(), -linear[1][1].clone()];
        w.y = -w.y;
    }
    let mut map = SimilarityMap {
        linear,
        offset: Point2::origin(),
        mirror,
        swap,
    };
    let m = map.apply(&mid);
    map.offset = Point2::new(-m.x, -m.y);
    Canonical::Triangle { b: w.x, h: w.y, map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::Rational;

    fn pt(x: Rational, y: Rational) -> Point2<Rational> {
        Point2::new(x, y)
    }

    fn ipt(x: i64, y: i64) -> Point2<Rational> {
        pt(int(x), int(y))
    }

    #[test]
    fn special_cubic_a_one() {
        let c = SpecialCubic::new(ipt(-1, 0), ipt(0, 1), ipt(1, 0), int(1)).unwrap();
        assert_eq!(c.control_points(), &[ipt(-1, 0), ipt(0, 1), ipt(0, 1), ipt(1, 0)]);
    }

    #[test]
    fn special_cubic_three_quarters() {
        let c = SpecialCubic::new(ipt(-1, 0), ipt(0, 1), ipt(1, 0), rat(3, 4)).unwrap();
        let expected = [
            ipt(-1, 0),
            pt(rat(-1, 4), rat(3, 4)),
            pt(rat(1, 4), rat(3, 4)),
            ipt(1, 0),
        ];
        assert_eq!(c.control_points(), &expected);
    }

    #[test]
    fn special_cubic_degenerate_point() {
        let c = SpecialCubic::new(ipt(0, 0), ipt(0, 0), ipt(0, 0), rat(2, 3)).unwrap();
        assert!(c.control_points().iter().all(|p| *p == ipt(0, 0)));
    }

    #[test]
    fn blend_out_of_range_rejected() {
        for a in [int(0), rat(3, 2), int(-1)] {
            let r = SpecialCubic::new(ipt(-1, 0), ipt(0, 1), ipt(1, 0), a);
            assert!(matches!(r, Err(GeomError::ParameterOutOfRange(_))));
        }
    }

    #[test]
    fn canonicalize_already_canonical() {
        let Canonical::Triangle { b, h, map } = canonicalize(&ipt(-1, 0), &ipt(0, 1), &ipt(1, 0)) else {
            panic!("expected a triangle");
        };
        assert_eq!((b, h), (int(0), int(1)));
        assert_eq!(map, SimilarityMap::identity());
    }

    #[test]
    fn canonicalize_needs_reflection() {
        let Canonical::Triangle { b, h, map } = canonicalize(&ipt(0, 0), &ipt(1, -1), &ipt(2, 0)) else {
            panic!("expected a triangle");
        };
        // translate by (-1, 0), unit scale, reflect across the x axis
        assert_eq!((b.clone(), h.clone()), (int(0), int(1)));
        assert!(map.mirror && !map.swap);
        assert_eq!(map.apply(&ipt(1, -1)), pt(b, h));
        assert_eq!(map.apply(&ipt(0, 0)), ipt(-1, 0));
        assert_eq!(map.apply(&ipt(2, 0)), ipt(1, 0));
    }

    #[test]
    fn canonicalize_coincident() {
        assert_eq!(canonicalize(&ipt(3, 3), &ipt(3, 3), &ipt(3, 3)), Canonical::Coincident);
    }

    #[test]
    fn canonicalize_swaps_for_negative_b() {
        let Canonical::Triangle { b, h, map } = canonicalize(&ipt(-1, 0), &ipt(-3, 2), &ipt(1, 0)) else {
            panic!("expected a triangle");
        };
        // the half-turn that swaps the endpoints also flips h
        assert!(map.swap && map.mirror);
        assert_eq!((b, h), (int(3), int(2)));
        assert_eq!(map.apply(&ipt(1, 0)), ipt(-1, 0));
        assert_eq!(map.pull_back_t(&rat(1, 4)), rat(3, 4));
    }

    #[test]
    fn apply_map_examples() {
        let id = SimilarityMap::<Rational>::identity();
        assert_eq!(id.apply(&ipt(5, 7)), ipt(5, 7));
        // translate by (1, 0) then scale by 1/2: (1,0) is fixed
        let half = rat(1, 2);
        let m = SimilarityMap {
            linear: [[half.clone(), int(0)], [int(0), half.clone()]],
            offset: pt(half, int(0)),
            mirror: false,
            swap: false,
        };
        assert_eq!(m.apply(&ipt(1, 0)), ipt(1, 0));
    }

    #[test]
    fn inverse_round_trip() {
        let Canonical::Triangle { map, .. } =
            canonicalize(&pt(rat(1, 3), int(2)), &ipt(5, -7), &pt(int(-2), rat(9, 4)))
        else {
            panic!("expected a triangle");
        };
        let inv = map.inverse();
        for p in [ipt(0, 0), pt(rat(-5, 7), rat(11, 3)), ipt(100, -3)] {
            assert_eq!(inv.apply(&map.apply(&p)), p);
            assert_eq!(map.apply(&inv.apply(&p)), p);
        }
    }

    #[test]
    fn de_casteljau_matches_power_basis() {
        let c = SpecialCubic::new(ipt(-1, 0), ipt(0, 1), ipt(1, 0), int(1)).unwrap();
        let (x, y) = c.bezier().coordinate_polys();
        for t in [int(0), rat(1, 2), rat(1, 3), int(1)] {
            let p = c.bezier().point_at(&t);
            assert_eq!((x.eval(&t), y.eval(&t)), (p.x, p.y));
        }
        assert_eq!(c.bezier().point_at(&rat(1, 2)), pt(int(0), rat(3, 4)));
    }

    #[test]
    fn theorem_regime_flag() {
        assert!(CanonicalConfig::new(int(0), int(1), int(1)).theorem_regime());
        assert!(!CanonicalConfig::new(int(0), int(0), int(1)).theorem_regime());
        assert!(!CanonicalConfig::new(int(0), int(1), rat(2, 3)).theorem_regime());
        assert!(CanonicalConfig::new(int(0), int(1), rat(2, 3) + rat(1, 1000)).theorem_regime());
    }
}
