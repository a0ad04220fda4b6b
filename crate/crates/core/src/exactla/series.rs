//! Hilbert series `p(q) / (1 - q)^e` with an integer Laurent numerator.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use super::GradedDims;

/// Rational function `q^low * (c_0 + c_1 q + ...) / (1 - q)^exponent`.
///
/// Canonical form: no leading or trailing zero coefficients (the zero series
/// has empty `coeffs`, `low = 0`, `exponent = 0`), and the numerator is not
/// divisible by `1 - q` while `exponent > 0`. Equality is therefore equality
/// of rational functions.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertSeries {
    low: i32,
    coeffs: Vec<i64>,
    exponent: u32,
}

impl HilbertSeries {
    pub fn new(low: i32, coeffs: Vec<i64>, exponent: u32) -> Self {
        let mut h = HilbertSeries {
            low,
            coeffs,
            exponent,
        };
        h.canonicalize();
        h
    }

    pub fn zero() -> Self {
        HilbertSeries::new(0, Vec::new(), 0)
    }

    pub fn one() -> Self {
        HilbertSeries::new(0, vec![1], 0)
    }

    /// `q^deg`.
    pub fn monomial(deg: i32) -> Self {
        HilbertSeries::new(deg, vec![1], 0)
    }

    /// Series of a polynomial ring in `n` variables of q-degree 1.
    pub fn polynomial_ring(n: u32) -> Self {
        HilbertSeries::new(0, vec![1], n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn numerator(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    fn canonicalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| **c == 0).count();
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        if self.coeffs.is_empty() {
            self.low = 0;
            self.exponent = 0;
            return;
        }
        // p(1) = 0 iff (1 - q) | p; the quotient's coefficients are prefix sums of p
        while self.exponent > 0 && self.coeffs.iter().sum::<i64>() == 0 {
            let mut acc = 0;
            let mut q = Vec::with_capacity(self.coeffs.len() - 1);
            for &c in &self.coeffs[..self.coeffs.len() - 1] {
                acc += c;
                q.push(acc);
            }
            self.coeffs = q;
            self.exponent -= 1;
            while self.coeffs.last() == Some(&0) {
                self.coeffs.pop();
            }
        }
    }

    /// Numerator rewritten over `(1 - q)^exponent`, `exponent >= self.exponent`.
    fn numerator_over(&self, exponent: u32) -> Vec<i64> {
        let mut c = self.coeffs.clone();
        for _ in self.exponent..exponent {
            let mut next = vec![0; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a;
            }
            c = next;
        }
        c
    }

    /// Multiplication by `q^by`.
    pub fn shift(&self, by: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        HilbertSeries {
            low: self.low + by,
            ..self.clone()
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        HilbertSeries::new(
            self.low,
            self.coeffs.iter().map(|c| c * k).collect(),
            self.exponent,
        )
    }

    /// Coefficients of the power-series expansion for degrees `lo..=hi`.
    pub fn coefficients(&self, lo: i32, hi: i32) -> Vec<i64> {
        (lo..=hi).map(|d| self.coefficient(d)).collect()
    }

    pub fn coefficient(&self, deg: i32) -> i64 {
        let e = self.exponent as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let m = deg as i64 - self.low as i64 - k as i64;
                if m < 0 {
                    0
                } else if e == 0 {
                    if m == 0 {
                        a
                    } else {
                        0
                    }
                } else {
                    a * binomial(m + e - 1, e - 1)
                }
            })
            .sum()
    }

    /// Expansion coefficients up to `max_degree`, starting at the lowest
    /// degree present (degree 0 for power series).
    ///
    /// Panics if a coefficient in range is negative: such a series is not the
    /// Hilbert series of a graded vector space.
    pub fn window(&self, max_degree: i32) -> GradedDims {
        let lo = self.low.min(0);
        GradedDims::from_pairs((lo..=max_degree).map(|d| {
            let c = self.coefficient(d);
            assert!(c >= 0, "negative coefficient {c} in degree {d}");
            (d, c as usize)
        }))
    }
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

impl Add for &HilbertSeries {
    type Output = HilbertSeries;
    fn add(self, rhs: &HilbertSeries) -> HilbertSeries {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.max(rhs.exponent);
        let low = self.low.min(rhs.low);
        let (a, b) = (self.numerator_over(e), rhs.numerator_over(e));
        let (oa, ob) = ((self.low - low) as usize, (rhs.low - low) as usize);
        let mut c = vec![0; (oa + a.len()).max(ob + b.len())];
        for (i, x) in a.iter().enumerate() {
            c[oa + i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            c[ob + i] += x;
        }
        HilbertSeries::new(low, c, e)
    }
}

impl Add for HilbertSeries {
    type Output = HilbertSeries;
    fn add(self, rhs: HilbertSeries) -> HilbertSeries {
        &self + &rhs
    }
}

impl Mul for &HilbertSeries {
    type Output = HilbertSeries;
    fn mul(self, rhs: &HilbertSeries) -> HilbertSeries {
        if self.is_zero() || rhs.is_zero() {
            return HilbertSeries::zero();
        }
        let mut c = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        HilbertSeries::new(self.low + rhs.low, c, self.exponent + rhs.exponent)
    }
}

impl Mul for HilbertSeries {
    type Output = HilbertSeries;
    fn mul(self, rhs: HilbertSeries) -> HilbertSeries {
        &self * &rhs
    }
}

impl std::iter::Sum for HilbertSeries {
    fn sum<I: Iterator<Item = HilbertSeries>>(iter: I) -> Self {
        iter.fold(HilbertSeries::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = String::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let d = self.low + k as i32;
            let sign = if c < 0 {
                "-"
            } else if terms.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            let body = match (d, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "q".to_string(),
                (1, m) => format!("{m}q"),
                (d, 1) => format!("q^{d}"),
                (d, m) => format!("{m}q^{d}"),
            };
            if terms.is_empty() {
                terms = format!("{sign}{body}");
            } else {
                terms = format!("{terms} {sign} {body}");
            }
        }
        if terms.is_empty() {
            terms = "0".into();
        }
        match self.exponent {
            0 => write!(f, "{terms}"),
            1 => write!(f, "({terms})/(1-q)"),
            e => write!(f, "({terms})/(1-q)^{e}"),
        }
    }
}

impl fmt::Debug for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HilbertSeries({self})")
    }
}
