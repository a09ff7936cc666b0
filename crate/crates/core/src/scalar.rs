//! Overflow-safe complex scalars.
//!
//! Permanents grow factorially, so a long product of matrix entries can leave
//! the range of an `f64` long before the answer is interesting. A
//! [`ScaledComplex`] keeps a phase-carrying mantissa with magnitude in
//! `[1, 10)` next to a base-10 exponent, so magnitudes up to `10^(i64::MAX)`
//! survive multiplication without ever producing an infinity.

use num_complex::Complex64;
use std::fmt;

/// A complex value `mantissa × 10^exponent10` with `|mantissa| ∈ [1, 10)`,
/// or exactly zero (represented as mantissa 0, exponent 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub exponent10: i64,
}

/// Multiply by 10^k without overflowing intermediates, in chunks small enough
/// that each partial power of ten is itself a normal double.
fn scale_pow10(c: Complex64, k: i64) -> Complex64 {
    const CHUNK: i64 = 280;
    let mut out = c;
    let mut rem = k;
    while rem > CHUNK {
        out *= 10f64.powi(CHUNK as i32);
        rem -= CHUNK;
    }
    while rem < -CHUNK {
        out *= 10f64.powi(-CHUNK as i32);
        rem += CHUNK;
    }
    out * 10f64.powi(rem as i32)
}

impl ScaledComplex {
    pub fn zero() -> Self {
        ScaledComplex { mantissa: Complex64::new(0.0, 0.0), exponent10: 0 }
    }

    pub fn one() -> Self {
        ScaledComplex { mantissa: Complex64::new(1.0, 0.0), exponent10: 0 }
    }

    /// Normalize an arbitrary (mantissa, exponent) pair into canonical form.
    pub fn new(mantissa: Complex64, exponent10: i64) -> Self {
        let mag = mantissa.norm();
        if mag == 0.0 {
            return Self::zero();
        }
        // log10 gets within one unit of the right exponent; fix up after scaling.
        let mut shift = mag.log10().floor() as i64;
        let mut m = scale_pow10(mantissa, -shift);
        while m.norm() >= 10.0 {
            m /= 10.0;
            shift += 1;
        }
        while m.norm() < 1.0 {
            m *= 10.0;
            shift -= 1;
        }
        ScaledComplex { mantissa: m, exponent10: exponent10 + shift }
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c, 0)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    /// Collapse to a plain complex number. Overflows to ±inf for exponents
    /// beyond the double range; callers that expect huge results should stay
    /// in scaled form.
    pub fn value(&self) -> Complex64 {
        scale_pow10(self.mantissa, self.exponent10)
    }

    pub fn mul(&self, other: &ScaledComplex) -> ScaledComplex {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.mantissa * other.mantissa, self.exponent10 + other.exponent10)
    }

    pub fn mul_complex(&self, c: Complex64) -> ScaledComplex {
        Self::new(self.mantissa * c, self.exponent10)
    }

    pub fn mul_f64(&self, x: f64) -> ScaledComplex {
        Self::new(self.mantissa * x, self.exponent10)
    }

    /// |self − other| / max(1, |other|), evaluated in plain doubles; only
    /// meaningful when both values fit the double range.
    pub fn relative_error_to(&self, other: Complex64) -> f64 {
        (self.value() - other).norm() / other.norm().max(1.0)
    }
}

impl fmt::Display for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "({} {:+}i)e{}", self.mantissa.re, self.mantissa.im, self.exponent10)
        }
    }
}
