//! Exact rational thresholds.
//!
//! Every frequency test in the crate has the form `count >= τ · m`. Evaluating
//! that with floating point goes wrong at exact multiples (0.4 · 5 is not 2 in
//! binary), so τ is carried as a reduced fraction and every comparison is done
//! in integer arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A frequency threshold `τ = num / den` with `0 < τ <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Threshold {
    num: u64,
    den: u64,
}

impl Threshold {
    /// Largest denominator produced when converting from a float.
    pub const MAX_FLOAT_DENOMINATOR: u64 = 1 << 20;

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidThreshold(format!("{num}/{den} is not in (0, 1]")));
        }
        let g = gcd(num, den);
        Ok(Threshold {
            num: num / g,
            den: den / g,
        })
    }

    /// `τ = 1 / 2^t`.
    pub fn inverse_power_of_two(t: u32) -> Self {
        assert!(t < 64, "threshold exponent {t} too large");
        Threshold { num: 1, den: 1 << t }
    }

    /// Converts a float to the closest fraction with a denominator of at most
    /// [`Self::MAX_FLOAT_DENOMINATOR`], so that `0.4` becomes exactly `2/5`.
    pub fn from_f64(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidThreshold(format!("{tau} is not in (0, 1]")));
        }
        let (num, den) = best_rational(tau, Self::MAX_FLOAT_DENOMINATOR);
        Threshold::new(num.max(1), den)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Minimum occurrence count of a τ-majority in a range of `len` cells:
    /// `⌈τ · len⌉`.
    pub fn required(&self, len: usize) -> usize {
        let p = self.num as u128 * len as u128;
        p.div_ceil(self.den as u128) as usize
    }

    /// `count >= τ · 2^b`.
    pub fn reached_at_scale(&self, count: usize, b: u32) -> bool {
        (count as u128) * (self.den as u128) >= (self.num as u128) << b
    }

    /// `⌈log2(1/τ)⌉`, the smallest `t` with `2^t · τ >= 1`.
    pub fn log2_inverse_ceil(&self) -> u32 {
        let mut t = 0;
        while (self.num as u128) << t < self.den as u128 {
            t += 1;
        }
        t
    }

    /// `⌊1/τ⌋`.
    pub fn inverse_floor(&self) -> usize {
        (self.den / self.num) as usize
    }

    /// `1/τ >= x`.
    pub fn inverse_at_least(&self, x: usize) -> bool {
        self.den as u128 >= self.num as u128 * x as u128
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Threshold {
    type Err = Error;

    /// Accepts `p/q` or a decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let parse = |x: &str| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidThreshold(format!("cannot parse {s:?}")))
            };
            return Threshold::new(parse(p)?, parse(q)?);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::InvalidThreshold(format!("cannot parse {s:?}")))?;
        Threshold::from_f64(v)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Best rational approximation by continued fractions.
fn best_rational(x: f64, max_den: u64) -> (u64, u64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > u32::MAX as f64 {
            break;
        }
        let a = a as u64;
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            break;
        }
        let p2 = a * p1 + p0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if (p1 as f64 / q1 as f64 - x).abs() <= 1e-12 || frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (p1, q1)
}
