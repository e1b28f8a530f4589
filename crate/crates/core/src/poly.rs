//! Dense univariate polynomials with Sturm-sequence root isolation.
//!
//! The arithmetic is generic over [`Scalar`]; root isolation is only
//! meaningful (and only tested) over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("empty interval: lower bound is not below upper bound")]
    EmptyInterval,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Coefficients in ascending degree; no trailing zeros, so the zero
/// polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn identity() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `c·t^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(
            cs.iter()
                .map(|&c| T::from_i64(c).expect("integer fits scalar"))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * &T::from_usize(k).expect("degree fits scalar"))
                .collect(),
        )
    }

    /// Horner evaluation in the scalar type (exact for rationals).
    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation on the `f64` view of the coefficients.
    ///
    /// Near a root the result is dominated by rounding and its sign cannot be
    /// trusted; use [`Poly::eval`] for decisions.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64_lossy())
    }

    pub fn sign_at(&self, x: &T) -> i8 {
        T::poly_sign_at(&self.coeffs, x)
    }

    /// Converts coefficients to `f64` for fast sampling.
    pub fn to_f64_poly(&self) -> Poly<f64> {
        Poly::new(self.coeffs.iter().map(Scalar::to_f64_lossy).collect())
    }

    /// Polynomial long division, `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        let dl = d.leading().ok_or(PolyError::DivisionByZero)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / dl.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Rescales by a positive constant (primitive integer form for rationals),
    /// which keeps the sign pattern intact.
    fn normalize_positive(&self) -> Self {
        Self::new(T::normalize_coeffs(self.coeffs.clone()))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        // primitive remainder sequence: no fractions pile up
        let (mut a, mut b) = (self.normalize_positive(), other.normalize_positive());
        while !b.is_zero() {
            let r = a.pseudo_rem_positive(&b).expect("divisor is nonzero");
            a = b;
            b = r.normalize_positive();
        }
        a.monic()
    }

    /// Exact quotient; panics in debug builds if the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.div_rem(d)?;
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    /// `p / gcd(p, p′)`: same distinct roots, all simple.
    pub fn squarefree(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        Ok(self.exact_div(&g)?.normalize_positive())
    }

    /// Yun's square-free decomposition: `(k, g_k)` pairs where `g_k` collects
    /// the roots of multiplicity exactly `k`. Constant factors are omitted.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(usize, Self)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.exact_div(&a0)?;
        let mut c = d.exact_div(&a0)?;
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let dk = &c - &b.derivative();
            let a = b.gcd(&dk);
            if a.degree().unwrap_or(0) > 0 {
                out.push((k, a.clone()));
            }
            b = b.exact_div(&a)?;
            c = dk.exact_div(&a)?;
            k += 1;
        }
        Ok(out)
    }

    /// Division-free remainder: a positive multiple of `rem(self, d)`.
    /// Keeps integer coefficients integral.
    pub fn pseudo_rem_positive(&self, d: &Self) -> Result<Self, PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::new(T::pseudo_rem_positive(&self.coeffs, &d.coeffs)))
    }

    /// Canonical Sturm chain `p, p′, -rem(p, p′), …`, each element rescaled by
    /// a positive constant.
    pub fn sturm_sequence(&self) -> Result<Vec<Self>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut chain = vec![self.clone()];
        let mut next = self.derivative().normalize_positive();
        while !next.is_zero() {
            let prev = chain.last().expect("chain is nonempty");
            let r = prev.pseudo_rem_positive(&next)?;
            chain.push(next);
            next = (-r).normalize_positive();
        }
        Ok(chain)
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &T, hi: &T) -> Result<usize, PolyError> {
        Ok(SturmChain::new(&self.squarefree()?)?.count(lo, hi))
    }

    /// Isolates the distinct real roots in `[lo, hi]`, or `(lo, hi)` when
    /// `open_ends` is set. Windows come back sorted and disjoint.
    pub fn isolate_roots(&self, lo: &T, hi: &T, open_ends: bool) -> Result<Vec<RootWindow<T>>, PolyError> {
        if lo >= hi {
            return Err(PolyError::EmptyInterval);
        }
        // The chain of p ends in gcd(p, p′); a constant tail means p is
        // already square-free and every root is simple.
        let own = SturmChain::new(&self.normalize_positive())?;
        let repeated = own.chain.last().and_then(Poly::degree).unwrap_or(0) > 0;
        let (sf, chain, factors) = if repeated {
            let sf = self.squarefree()?;
            let factors = self
                .squarefree_decomposition()?
                .into_iter()
                .map(|(k, g)| Ok((k, SturmChain::new(&g.normalize_positive())?)))
                .collect::<Result<Vec<_>, PolyError>>()?;
            let chain = SturmChain::new(&sf)?;
            (sf, chain, factors)
        } else {
            (own.poly().clone(), own.clone(), vec![(1, own)])
        };

        let mut brackets: Vec<(T, T)> = Vec::new();
        if !open_ends && sf.sign_at(lo) == 0 {
            brackets.push((lo.clone(), lo.clone()));
        }
        // Depth-first, left half first, so output is sorted.
        let mut stack = vec![(lo.clone(), hi.clone(), chain.count(lo, hi))];
        while let Some((l, r, n)) = stack.pop() {
            if n == 0 {
                continue;
            }
            let r_is_root = sf.sign_at(&r) == 0;
            if n == 1 && (r_is_root || sf.sign_at(&l) != 0) {
                if r_is_root {
                    if !(open_ends && &r == hi) {
                        brackets.push((r.clone(), r));
                    }
                } else {
                    brackets.push((l, r));
                }
                continue;
            }
            let m = (l.clone() + &r) / T::two();
            let left = chain.count(&l, &m);
            stack.push((m.clone(), r, n - left));
            stack.push((l, m, left));
        }

        Ok(brackets
            .into_iter()
            .map(|(l, r)| {
                let multiplicity = factors
                    .iter()
                    .find(|(_, g)| {
                        if l == r {
                            g.poly().sign_at(&l) == 0
                        } else {
                            g.count(&l, &r) > 0
                        }
                    })
                    .map(|(k, _)| *k)
                    .expect("every root belongs to one square-free factor");
                RootWindow::new(l, r, multiplicity)
            })
            .collect())
    }

    /// Bisects `w` until it is no wider than `width`. A midpoint that hits the
    /// root exactly collapses the window onto it.
    pub fn refine(&self, w: &RootWindow<T>, width: &T) -> Result<RootWindow<T>, PolyError> {
        // p itself changes sign across an odd-multiplicity root.
        let sf = match w.parity {
            Parity::Odd => self.normalize_positive(),
            Parity::Even => self.squarefree()?,
        };
        let (mut lo, mut hi) = (w.lo.clone(), w.hi.clone());
        let s_lo = sf.sign_at(&lo);
        while hi.clone() - &lo > *width {
            let m = (lo.clone() + &hi) / T::two();
            let s = sf.sign_at(&m);
            if s == 0 {
                lo = m.clone();
                hi = m;
                break;
            }
            if s == s_lo {
                lo = m;
            } else {
                hi = m;
            }
        }
        Ok(RootWindow::new(lo, hi, w.multiplicity))
    }
}

/// Sturm chain of a polynomial, for repeated root counting.
#[derive(Debug, Clone)]
pub struct SturmChain<T> {
    chain: Vec<Poly<T>>,
}

impl<T: Scalar> SturmChain<T> {
    pub fn new(p: &Poly<T>) -> Result<Self, PolyError> {
        Ok(SturmChain {
            chain: p.sturm_sequence()?,
        })
    }

    pub fn poly(&self) -> &Poly<T> {
        &self.chain[0]
    }

    pub fn chain(&self) -> &[Poly<T>] {
        &self.chain
    }

    /// Sign variations of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &T) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Distinct roots in `(lo, hi]`, assuming the chain polynomial is
    /// square-free (or neither bound is a root).
    pub fn count(&self, lo: &T, hi: &T) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// Interval holding exactly one distinct real root. `lo == hi` marks a root
/// located exactly; otherwise the square-free part has opposite nonzero signs
/// at the two ends.
#[derive(Debug, Clone, PartialEq)]
pub struct RootWindow<T> {
    pub lo: T,
    pub hi: T,
    pub multiplicity: usize,
    pub parity: Parity,
    pub midpoint: f64,
}

impl<T: Scalar> RootWindow<T> {
    /// Window collapsed onto a known root.
    pub fn exact(x: T, multiplicity: usize) -> Self {
        Self::new(x.clone(), x, multiplicity)
    }

    fn new(lo: T, hi: T, multiplicity: usize) -> Self {
        let midpoint = ((lo.clone() + &hi) / T::two()).to_f64_lossy();
        let parity = if multiplicity % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        };
        RootWindow {
            lo,
            hi,
            multiplicity,
            parity,
            midpoint,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> T {
        self.hi.clone() - &self.lo
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// The exact root, when the window has collapsed onto it.
    pub fn exact_root(&self) -> Option<&T> {
        self.is_exact().then_some(&self.lo)
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        Poly::new(T::poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<T: Scalar> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: &Poly<T>) -> Poly<T> {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Scalar> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar> One for Poly<T> {
    fn one() -> Self {
        Poly::constant(T::one())
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}
