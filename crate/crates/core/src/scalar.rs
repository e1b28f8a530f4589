//! Scalar abstraction shared by the geometry and polynomial code.
//!
//! Everything that has to make a sign decision runs on [`Rational`]; the same
//! generic code also instantiates on `f64` for sampling and plotting.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumRef, One, Signed, ToPrimitive, Zero};

use crate::Rational;

/// Field-like scalar the geometry and polynomial code is generic over.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + NumRef + FromPrimitive + ToPrimitive + Send + Sync {
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer fits scalar") / Self::from_i64(den).expect("integer fits scalar")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Rescales polynomial coefficients (ascending, nonzero leading) by a
    /// positive constant into a convenient normal form.
    fn normalize_coeffs(coeffs: Vec<Self>) -> Vec<Self> {
        match coeffs.last() {
            Some(l) => {
                let inv = Self::one() / l.abs();
                coeffs.into_iter().map(|c| c * &inv).collect()
            }
            None => coeffs,
        }
    }

    /// Product of two coefficient vectors (ascending, both nonempty).
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        let mut out = vec![Self::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y;
            }
        }
        out
    }

    /// Positive multiple of the remainder of `r` by `d` (ascending, `d`
    /// with nonzero leading coefficient), computed without division.
    fn pseudo_rem_positive(r: &[Self], d: &[Self]) -> Vec<Self> {
        let dl = d.last().expect("divisor is nonzero");
        let dd = d.len() - 1;
        let (scale, flip) = (dl.abs(), dl.is_negative());
        let mut r = r.to_vec();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let mut lead = r[r.len() - 1].clone();
            if flip {
                lead = -lead;
            }
            for c in r.iter_mut() {
                *c = c.clone() * &scale;
            }
            for (j, dc) in d.iter().enumerate() {
                r[k + j] = r[k + j].clone() - lead.clone() * dc;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        r
    }

    /// Sign of the polynomial with ascending `coeffs` at `x`.
    fn poly_sign_at(coeffs: &[Self], x: &Self) -> i8 {
        let v = coeffs.iter().rev().fold(Self::zero(), |acc, c| acc * x + c);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl Scalar for f64 {}

impl Scalar for f32 {}

/// Rationals normalize polynomials to primitive integer form and evaluate
/// signs without intermediate reductions.
impl Scalar for BigRational {
    fn normalize_coeffs(coeffs: Vec<Self>) -> Vec<Self> {
        if coeffs.is_empty() {
            return coeffs;
        }
        let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            g = BigInt::one();
        }
        ints.into_iter().map(|c| BigRational::from_integer(c / &g)).collect()
    }

    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        let (ai, la) = integer_form(a);
        let (bi, lb) = integer_form(b);
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in ai.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bi.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let den = la * lb;
        if den.is_one() {
            out.into_iter().map(BigRational::from_integer).collect()
        } else {
            out.into_iter().map(|c| BigRational::new(c, den.clone())).collect()
        }
    }

    fn pseudo_rem_positive(r: &[Self], d: &[Self]) -> Vec<Self> {
        let (mut r, _) = integer_form(r);
        let (d, _) = integer_form(d);
        let dl = d.last().expect("divisor is nonzero");
        let dd = d.len() - 1;
        let (scale, flip) = (dl.abs(), dl.is_negative());
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let mut lead = r[r.len() - 1].clone();
            if flip {
                lead = -lead;
            }
            for c in r.iter_mut() {
                *c *= &scale;
            }
            for (j, dc) in d.iter().enumerate() {
                r[k + j] -= &lead * dc;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        r.into_iter().map(BigRational::from_integer).collect()
    }

    fn poly_sign_at(coeffs: &[Self], x: &Self) -> i8 {
        if !coeffs.iter().all(|c| c.is_integer()) {
            let v = coeffs.iter().rev().fold(Self::zero(), |acc, c| acc * x + c);
            return sign_of_int(v.numer());
        }
        // q^n · p(x/q) = Σ c_k x^k q^(n-k), all in integers
        let (num, den) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for (i, c) in coeffs.iter().rev().enumerate() {
            if i == 0 {
                acc = c.numer().clone();
            } else {
                qpow *= den;
                acc = acc * num + c.numer() * &qpow;
            }
        }
        sign_of_int(&acc)
    }
}

/// Integer numerators over the common denominator.
fn integer_form(coeffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    if coeffs.iter().all(|c| c.is_integer()) {
        return (coeffs.iter().map(|c| c.numer().clone()).collect(), BigInt::one());
    }
    let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    (coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect(), lcm)
}

fn sign_of_int(v: &BigInt) -> i8 {
    match v.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseScalarError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p/q`, an integer, or a finite decimal (`-0.125`, `1e-3`) into an
/// exact rational. Decimals are read base-10, never through `f64`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseScalarError::Empty);
    }
    let invalid = || ParseScalarError::Invalid(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| invalid())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| invalid())?;
        if d.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| invalid())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).map_err(|_| invalid())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `2^-bits` as an exact rational.
pub fn dyadic_width(bits: u32) -> Rational {
    BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
