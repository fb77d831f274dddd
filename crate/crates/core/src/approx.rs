//! Midpoint-radius enclosures of real numbers with exact rational endpoints.
//!
//! Operations round midpoints to a dyadic grid of a requested absolute
//! precision and fold the rounding error into the radius, so every result
//! encloses the exact value of the operation applied to any points of the
//! input enclosures.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct ApproxReal {
    value: BigRational,
    radius: BigRational,
}

fn pow2(bits: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << bits as usize)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest multiple of 2^(−bits).
fn round_to(q: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    (q * &s).round() / s
}

/// Smallest multiple of 2^(−bits) not below q.
fn round_up(q: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    (q * &s).ceil() / s
}

impl ApproxReal {
    pub fn new(value: BigRational, radius: BigRational) -> Self {
        assert!(!radius.is_negative(), "negative radius");
        ApproxReal { value, radius }
    }

    pub fn exact(value: BigRational) -> Self {
        ApproxReal { value, radius: BigRational::zero() }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn lower(&self) -> BigRational {
        &self.value - &self.radius
    }

    pub fn upper(&self) -> BigRational {
        &self.value + &self.radius
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        (q - &self.value).abs() <= self.radius
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Rounds the midpoint to `bits` fractional bits, widening the radius.
    pub fn rounded(&self, bits: u32) -> Self {
        let value = round_to(&self.value, bits);
        let radius = round_up(&(&self.radius + (&value - &self.value).abs()), bits);
        ApproxReal { value, radius }
    }

    pub fn add(&self, other: &Self) -> Self {
        ApproxReal { value: &self.value + &other.value, radius: &self.radius + &other.radius }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ApproxReal { value: &self.value - &other.value, radius: &self.radius + &other.radius }
    }

    pub fn neg(&self) -> Self {
        ApproxReal { value: -&self.value, radius: self.radius.clone() }
    }

    pub fn mul(&self, other: &Self, bits: u32) -> Self {
        let value = &self.value * &other.value;
        let radius = self.value.abs() * &other.radius + other.value.abs() * &self.radius + &self.radius * &other.radius;
        ApproxReal { value, radius }.rounded(bits)
    }

    pub fn scale(&self, q: &BigRational, bits: u32) -> Self {
        ApproxReal { value: &self.value * q, radius: &self.radius * q.abs() }.rounded(bits)
    }

    /// None when the divisor enclosure contains zero.
    pub fn div(&self, other: &Self, bits: u32) -> Option<Self> {
        let b = other.value.abs();
        if b <= other.radius {
            return None;
        }
        let value = &self.value / &other.value;
        let radius = (self.value.abs() * &other.radius + &b * &self.radius) / (&b * (&b - &other.radius));
        Some(ApproxReal { value, radius }.rounded(bits))
    }

    /// Natural logarithm; None unless the enclosure is strictly positive.
    pub fn ln(&self, bits: u32) -> Option<Self> {
        let lo = self.lower();
        if !lo.is_positive() {
            return None;
        }
        let mut out = ln_exact(&self.value, bits + 8);
        // |ln x − ln m| ≤ |x − m| / min(x, m).
        out.radius += &self.radius / lo;
        Some(out.rounded(bits))
    }

    pub fn exp(&self, bits: u32) -> Self {
        let mut out = exp_exact(&self.value, bits + 8);
        if !self.radius.is_zero() {
            // |e^x − e^m| ≤ e^m·(e^r − 1) ≤ e^m·r·e^r, with e^r ≤ 3^⌈r⌉.
            let r = &self.radius;
            let growth =
                BigRational::from_integer(BigInt::from(3)).pow(r.ceil().to_integer().to_i32().unwrap_or(i32::MAX));
            out.radius += out.upper() * r * growth;
        }
        out.rounded(bits)
    }

    /// x^y = exp(y·ln x) for x > 0.
    pub fn powf(&self, exponent: &Self, bits: u32) -> Option<Self> {
        let guard = bits + 16;
        let l = self.ln(guard)?;
        Some(l.mul(exponent, guard).exp(guard).rounded(bits))
    }

    /// Integer part if the enclosure lies strictly between two consecutive
    /// integers, i.e. ⌈x⌉ is determined.
    pub fn ceil_if_separated(&self) -> Option<BigInt> {
        let lo = self.lower();
        let hi = self.upper();
        let c = lo.ceil();
        if c == lo || c <= hi {
            return None;
        }
        Some(c.to_integer())
    }
}

/// 2·atanh(t) = ln((1 + t)/(1 − t)) for |t| ≤ 1/2.
fn two_atanh(t: &BigRational, bits: u32) -> ApproxReal {
    let tol = BigRational::one() / pow2(bits + 2);
    let t_abs = t.abs();
    let t2_ball = ApproxReal::exact(t * t).rounded(bits + 4);
    let one_minus_t2 = BigRational::one() - &t_abs * &t_abs;
    let mut power = ApproxReal::exact(t.clone()).rounded(bits + 4);
    let mut sum = ApproxReal::exact(BigRational::zero());
    let mut power_abs = t_abs.clone();
    let mut k: i64 = 1;
    loop {
        let term = power.scale(&ratio(1, k), bits + 4);
        sum = sum.add(&term);
        k += 2;
        power_abs = &power_abs * &t_abs * &t_abs;
        // Σ_{j≥k, odd} |t|^j / j ≤ |t|^k / (k·(1 − t²)).
        let tail = &power_abs / (BigRational::from_integer(BigInt::from(k)) * &one_minus_t2);
        if tail <= tol || power_abs.is_zero() {
            sum.radius += tail;
            break;
        }
        power_abs = round_up(&power_abs, bits + 8);
        power = power.mul(&t2_ball, bits + 4);
    }
    sum.scale(&BigRational::from_integer(BigInt::from(2)), bits + 2)
}

static LN2_CACHE: LazyLock<Mutex<HashMap<u32, ApproxReal>>> = LazyLock::new(Default::default);

/// ln 2 to `bits` bits.
pub fn ln2(bits: u32) -> ApproxReal {
    if let Some(v) = LN2_CACHE.lock().expect("ln2 cache").get(&bits) {
        return v.clone();
    }
    let v = two_atanh(&ratio(1, 3), bits + 2).rounded(bits);
    LN2_CACHE.lock().expect("ln2 cache").insert(bits, v.clone());
    v
}

fn ln_exact(m: &BigRational, bits: u32) -> ApproxReal {
    assert!(m.is_positive());
    let guard = bits + 8;
    let mut k = m.numer().bits() as i64 - m.denom().bits() as i64;
    let two = BigRational::from_integer(BigInt::from(2));
    let scale = |k: i64| if k >= 0 { two.pow(k as i32) } else { BigRational::one() / two.pow((-k) as i32) };
    let mut y = m / scale(k);
    while y > ratio(4, 3) {
        y /= &two;
        k += 1;
    }
    while y < ratio(2, 3) {
        y *= &two;
        k -= 1;
    }
    let t = (&y - BigRational::one()) / (&y + BigRational::one());
    let mut out = two_atanh(&t, guard);
    if k != 0 {
        out = out.add(&ln2(guard + 8).scale(&BigRational::from_integer(BigInt::from(k)), guard));
    }
    out.rounded(bits)
}

fn exp_exact(m: &BigRational, bits: u32) -> ApproxReal {
    // Halve until |y| ≤ 1/2, sum the Taylor series, then square back.
    let half = ratio(1, 2);
    let mut y = m.clone();
    let mut squarings: u32 = 0;
    while y.abs() > half {
        y /= BigRational::from_integer(BigInt::from(2));
        squarings += 1;
    }
    let inner_bits = bits + 8 + 2 * squarings + magnitude_bits(m);
    let tol = BigRational::one() / pow2(inner_bits + 2);
    let y_ball = ApproxReal::exact(y.clone());
    let mut term = ApproxReal::exact(BigRational::one());
    let mut sum = term.clone();
    let mut term_abs = BigRational::one();
    let y_abs = y.abs();
    let mut n: i64 = 1;
    loop {
        term = term.mul(&y_ball, inner_bits + 4).scale(&ratio(1, n), inner_bits + 4);
        sum = sum.add(&term);
        term_abs = &term_abs * &y_abs / BigInt::from(n);
        term_abs = round_up(&term_abs, inner_bits + 8);
        n += 1;
        // Σ_{j≥n} |y|^j/j! ≤ 2·|y|^n/n! for |y| ≤ 1/2.
        let tail = &term_abs * &y_abs * BigRational::from_integer(BigInt::from(2)) / BigInt::from(n);
        if tail <= tol || y_abs.is_zero() {
            sum.radius += tail;
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum, inner_bits);
    }
    sum.rounded(bits)
}

/// Rough count of integer bits of |q|, for guard-bit sizing.
fn magnitude_bits(q: &BigRational) -> u32 {
    let n = q.numer().bits() as i64 - q.denom().bits() as i64;
    n.clamp(0, 64) as u32 * 2
}

/// Ball with the same bounds as the closed interval [lo, hi].
pub fn from_bounds(lo: &BigRational, hi: &BigRational) -> ApproxReal {
    let two = BigRational::from_integer(BigInt::from(2));
    ApproxReal { value: (lo + hi) / &two, radius: (hi - lo).abs() / two }
}

impl fmt::Debug for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ApproxReal({:.15} ± {:.3e})", self.to_f64(), self.radius_f64())
    }
}

impl fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12} ± {:.1e}", self.to_f64(), self.radius_f64())
    }
}

/// Exponent k if n = 2^k.
pub(crate) fn is_power_of_two(n: &BigInt) -> Option<u32> {
    if !n.is_positive() {
        return None;
    }
    let bits = n.bits();
    (n == &(BigInt::one() << (bits - 1) as usize)).then_some((bits - 1) as u32)
}
