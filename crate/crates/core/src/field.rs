//! Exact arithmetic in the real cubic field Q(η), η the real root of
//! X³ + X² + X − 2.
//!
//! Elements are stored as rational coefficient triples reduced modulo the
//! minimal polynomial. Equality is structural. Ordering is the ordering of
//! the real embedding, decided by a fast floating-point enclosure when it is
//! conclusive and by exact evaluation over a bisected rational isolating
//! interval of η otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::approx::ApproxReal;
use crate::error::{Error, Result};

/// Nearest double to η.
const ETA_F64: f64 = 0.810_535_713_766_136_8;

/// Relative slack of the floating-point enclosure. Coefficient conversion and
/// the three-term evaluation each lose at most a few ulps; this bound leaves
/// two orders of magnitude of headroom.
const ENCLOSURE_SLACK: f64 = 1e-13;

/// Bisection steps between successive cached isolating intervals.
const STEPS_PER_LEVEL: usize = 16;

/// First cached level consulted by the exact sign test (64 bisections).
const EXACT_START_LEVEL: usize = 4;

#[derive(Clone, Debug)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn min_poly(x: &BigRational) -> BigRational {
    let x2 = x * x;
    let x3 = &x2 * x;
    x3 + x2 + x - BigRational::from_integer(BigInt::from(2))
}

fn bisect(mut iv: Interval, steps: usize) -> Interval {
    let two = BigRational::from_integer(BigInt::from(2));
    for _ in 0..steps {
        let mid = (&iv.lo + &iv.hi) / &two;
        // η is irrational, so the midpoint is never a root.
        if min_poly(&mid).is_negative() {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }
    iv
}

/// Nested isolating intervals for η; level 0 is (4/5, 5/6).
static ETA_LEVELS: LazyLock<RwLock<Vec<Interval>>> = LazyLock::new(|| {
    let lo = BigRational::new(BigInt::from(4), BigInt::from(5));
    let hi = BigRational::new(BigInt::from(5), BigInt::from(6));
    debug_assert!(min_poly(&lo).is_negative() && min_poly(&hi).is_positive());
    RwLock::new(vec![Interval { lo, hi }])
});

fn eta_level(level: usize) -> Interval {
    {
        let levels = ETA_LEVELS.read().expect("eta cache poisoned");
        if let Some(iv) = levels.get(level) {
            return iv.clone();
        }
    }
    let mut levels = ETA_LEVELS.write().expect("eta cache poisoned");
    while levels.len() <= level {
        let next = bisect(levels.last().unwrap().clone(), STEPS_PER_LEVEL);
        levels.push(next);
    }
    levels[level].clone()
}

/// Returns a rational interval (lo, hi) containing η after
/// `STEPS_PER_LEVEL * level` bisections of (4/5, 5/6).
pub fn eta_isolating_interval(level: usize) -> (BigRational, BigRational) {
    let iv = eta_level(level);
    (iv.lo, iv.hi)
}

/// An exact element c0 + c1·η + c2·η² of Q(η).
#[derive(Clone)]
pub struct FieldElement {
    coeffs: [BigRational; 3],
    /// Floating-point midpoint and error bound; `err` is infinite when the
    /// coefficients do not convert cleanly.
    mid: f64,
    err: f64,
}

impl FieldElement {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational) -> Self {
        let coeffs = [c0, c1, c2];
        let (mid, err) = enclosure(&coeffs);
        FieldElement { coeffs, mid, err }
    }

    pub fn from_integers(c0: i64, c1: i64, c2: i64) -> Self {
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        Self::new(r(c0), r(c1), r(c2))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::new(q, BigRational::zero(), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_integers(0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_integers(1, 0, 0)
    }

    pub fn eta() -> Self {
        Self::from_integers(0, 1, 0)
    }

    pub fn coefficients(&self) -> &[BigRational; 3] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.coeffs[1].is_zero() && self.coeffs[2].is_zero()).then_some(&self.coeffs[0])
    }

    /// Multiplication by η: c2·η³ is folded back with η³ = 2 − η − η².
    pub fn mul_eta(&self) -> Self {
        let [c0, c1, c2] = &self.coeffs;
        Self::new(c2 * BigInt::from(2), c0 - c2, c1 - c2)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let [c0, c1, c2] = &self.coeffs;
        Self::new(c0 * q, c1 * q, c2 * q)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, by solving the 3×3 linear system of
    /// multiplication-by-self against the unit vector.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Column j of the matrix is self·η^j.
        let col0 = self.clone();
        let col1 = col0.mul_eta();
        let col2 = col1.mul_eta();
        let cols = [&col0, &col1, &col2];
        let mut m: Vec<Vec<BigRational>> = (0..3)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..3 {
            let pivot = (col..3)
                .find(|&r| !m[r][col].is_zero())
                .expect("multiplication matrix of a nonzero element is invertible");
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = &*v / &p;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v = &*v - &f * pv;
                    }
                }
            }
        }
        Ok(Self::new(m[0][3].clone(), m[1][3].clone(), m[2][3].clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// Sign of the real value at η.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if self.mid - self.err > 0.0 {
            return Ordering::Greater;
        }
        if self.mid + self.err < 0.0 {
            return Ordering::Less;
        }
        let mut level = EXACT_START_LEVEL;
        loop {
            let (lo, hi) = self.eval_interval(&eta_level(level));
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            level += 1;
        }
    }

    /// Exact comparison of real values.
    pub fn compare(&self, other: &Self) -> Ordering {
        if self.coeffs == other.coeffs {
            return Ordering::Equal;
        }
        if self.mid + self.err < other.mid - other.err {
            return Ordering::Less;
        }
        if self.mid - self.err > other.mid + other.err {
            return Ordering::Greater;
        }
        (self - other).signum()
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Range of c0 + c1·x + c2·x² for x in the given positive interval.
    fn eval_interval(&self, iv: &Interval) -> (BigRational, BigRational) {
        let [c0, c1, c2] = &self.coeffs;
        let scaled = |c: &BigRational, lo: &BigRational, hi: &BigRational| {
            let (a, b) = (c * lo, c * hi);
            if c.is_negative() {
                (b, a)
            } else {
                (a, b)
            }
        };
        let (l1, h1) = scaled(c1, &iv.lo, &iv.hi);
        let (l2, h2) = scaled(c2, &(&iv.lo * &iv.lo), &(&iv.hi * &iv.hi));
        (c0 + l1 + l2, c0 + h1 + h2)
    }

    /// An enclosure of the real value with radius at most
    /// 2^(−bits)·max(1, |value|).
    pub fn to_approx(&self, bits: u32) -> ApproxReal {
        if let Some(q) = self.as_rational() {
            return ApproxReal::exact(q.clone());
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let tol = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let mut level = 0;
        loop {
            let (lo, hi) = self.eval_interval(&eta_level(level));
            let value = (&lo + &hi) / &two;
            let radius = (&hi - &lo) / &two;
            let scale = if value.abs() > BigRational::one() { value.abs() } else { BigRational::one() };
            if radius <= &tol * scale {
                return ApproxReal::new(value, radius);
            }
            level += 1;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid
    }
}

fn enclosure(coeffs: &[BigRational; 3]) -> (f64, f64) {
    let c: Vec<f64> = coeffs.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|v| !v.is_finite() || v.abs() > 1e300) {
        return (0.0, f64::INFINITY);
    }
    let mid = c[0] + c[1] * ETA_F64 + c[2] * (ETA_F64 * ETA_F64);
    let size = c[0].abs() + c[1].abs() + c[2].abs();
    (mid, size * ENCLOSURE_SLACK + 1e-300)
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        let [a0, a1, a2] = &self.coeffs;
        let [b0, b1, b2] = &rhs.coeffs;
        FieldElement::new(a0 + b0, a1 + b1, a2 + b2)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        let [a0, a1, a2] = &self.coeffs;
        let [b0, b1, b2] = &rhs.coeffs;
        FieldElement::new(a0 - b0, a1 - b1, a2 - b2)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        let a = &self.coeffs;
        let b = &rhs.coeffs;
        let mut p: [BigRational; 5] = Default::default();
        for i in 0..3 {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                p[i + j] += &a[i] * &b[j];
            }
        }
        // η³ = 2 − η − η², η⁴ = −2 + 3η.
        let [p0, p1, p2, p3, p4] = p;
        let two = BigInt::from(2);
        let three = BigInt::from(3);
        FieldElement::new(p0 + &p3 * &two - &p4 * &two, p1 - &p3 + &p4 * three, p2 - p3)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let [c0, c1, c2] = &self.coeffs;
        FieldElement::new(-c0, -c1, -c2)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2] = &self.coeffs;
        write!(f, "{c0} + {c1}*x + {c2}*x^2")
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self} ≈ {:.12})", self.mid)
    }
}

/// Parses an exact rational "p" or "p/q". Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!("{s:?}: decimals are not accepted, write p/q")));
    }
    let bad = || Error::Parse(format!("{s:?} is not a rational p/q"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("{s:?} has zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for FieldElement {
    type Err = Error;

    /// Accepts the rendering "c0 + c1*x + c2*x^2" or a bare rational.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(" + ").collect();
        match parts.as_slice() {
            [single] => Ok(Self::from_rational(parse_rational(single)?)),
            [c0, c1, c2] => {
                let c1 = c1.strip_suffix("*x").ok_or_else(|| Error::Parse(format!("{s:?}: expected c1*x")))?;
                let c2 = c2.strip_suffix("*x^2").ok_or_else(|| Error::Parse(format!("{s:?}: expected c2*x^2")))?;
                Ok(Self::new(parse_rational(c0)?, parse_rational(c1)?, parse_rational(c2)?))
            }
            _ => Err(Error::Parse(format!("{s:?} is not a field element"))),
        }
    }
}
