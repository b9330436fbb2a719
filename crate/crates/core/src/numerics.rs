//! Phase arithmetic.
//!
//! Every phase factor produced by the transforms in this crate has the form
//! `e^{2πi·f}` with `f` a binary fraction. [`DyadicPhase`] keeps `f` exact as
//! `num / 2^logden` with an arbitrary-precision numerator; floating point only
//! appears when a phase is turned into a [`Complex`] amplitude.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Complex amplitude.
pub type Complex = num_complex::Complex64;

/// Accepted deviation of `|z|` from 1 for [`principal_sqrt_unit`].
pub const UNIT_MODULUS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("expected a unit-modulus complex number, got |z| = {0}")]
    NotUnitModulus(f64),
}

/// The angle `2π·num/2^logden`, reduced to one turn.
///
/// Canonical form: `num` is odd and `num < 2^logden`, or the phase is zero
/// with `logden == 0`. All constructors canonicalise, so structural equality
/// is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicPhase {
    num: BigUint,
    logden: u64,
}

impl DyadicPhase {
    pub fn zero() -> Self {
        DyadicPhase {
            num: BigUint::zero(),
            logden: 0,
        }
    }

    /// Builds `num / 2^logden` mod 1.
    pub fn new(num: BigUint, logden: u64) -> Self {
        let mut num = num;
        if num.bits() > logden {
            // Reduce mod 2^logden by truncating to the low `logden` bits.
            let mask = (BigUint::one() << logden) - 1u32;
            num &= mask;
        }
        let mut p = DyadicPhase { num, logden };
        p.canonicalise();
        p
    }

    /// The binary fraction `0.b_1 b_2 b_3 …` where `b_i` carries weight `2^-i`.
    pub fn from_binary_fraction<I>(bits: I) -> Self
    where
        I: IntoIterator<Item = bool>,
    {
        let bits: Vec<bool> = bits.into_iter().collect();
        let logden = bits.iter().rposition(|&b| b).map_or(0, |i| i as u64 + 1);
        let mut num = BigUint::zero();
        for (i, &b) in bits.iter().enumerate().take(logden as usize) {
            if b {
                num.set_bit(logden - 1 - i as u64, true);
            }
        }
        DyadicPhase { num, logden }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn logden(&self) -> u64 {
        self.logden
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Fraction of a turn as a float (lossy for large `logden`).
    pub fn to_f64(&self) -> f64 {
        window_to_f64(self.window(0))
    }

    /// Returns the phase for `0.bit f_1 f_2 …` where `0.f_1 f_2 …` is `self`.
    pub fn prepend_bit(&self, bit: bool) -> Self {
        let mut p = self.clone();
        p.prepend_bit_in_place(bit);
        p
    }

    /// In-place [`prepend_bit`](Self::prepend_bit). Amortised O(1): an odd
    /// numerator stays odd, so no renormalising shift is ever needed.
    pub fn prepend_bit_in_place(&mut self, bit: bool) {
        if self.num.is_zero() {
            if bit {
                self.num = BigUint::one();
                self.logden = 1;
            }
            return;
        }
        if bit {
            self.num.set_bit(self.logden, true);
        }
        self.logden += 1;
    }

    /// Half the angle, i.e. `prepend_bit(false)`.
    pub fn halved(&self) -> Self {
        self.prepend_bit(false)
    }

    /// Doubles the angle mod one turn (squares the phase factor) in place.
    pub fn double_in_place(&mut self) {
        if self.num.is_zero() {
            return;
        }
        self.logden -= 1;
        if self.logden == 0 {
            self.num = BigUint::zero();
        } else {
            self.num.set_bit(self.logden, false);
        }
    }

    pub fn doubled(&self) -> Self {
        let mut p = self.clone();
        p.double_in_place();
        p
    }

    /// `e^{2πi·self}`.
    pub fn to_complex(&self) -> Complex {
        window_to_complex(self.window(0))
    }

    /// `e^{πi·self}`, the principal square root of [`to_complex`](Self::to_complex),
    /// without materialising the halved phase.
    pub fn to_complex_halved(&self) -> Complex {
        window_to_complex(self.window(1))
    }

    fn canonicalise(&mut self) {
        if self.num.is_zero() {
            self.logden = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.num >>= tz;
            self.logden -= tz;
        }
    }

    /// The top 64 bits of the fraction `num / 2^(logden + extra)` as a
    /// fixed-point value in units of `2^-64` turns (truncated).
    fn window(&self, extra: u64) -> u64 {
        if self.num.is_zero() {
            return 0;
        }
        let scale = self.logden + extra;
        if scale <= 64 {
            // num < 2^logden <= 2^scale so the value fits.
            let low = self.num.iter_u64_digits().next().unwrap_or(0);
            return low << (64 - scale);
        }
        // Bits [scale - 64, scale) of num.
        let lo_bit = scale - 64;
        let word = (lo_bit / 64) as usize;
        let shift = lo_bit % 64;
        let digits = self.num.iter_u64_digits();
        let len = digits.len();
        let digit = |i: usize| -> u64 {
            if i >= len {
                0
            } else {
                // At most two steps from the back: num < 2^logden bounds len.
                self.num
                    .iter_u64_digits()
                    .rev()
                    .nth(len - 1 - i)
                    .unwrap_or(0)
            }
        };
        let lo = digit(word) >> shift;
        let hi = if shift == 0 {
            0
        } else {
            digit(word + 1) << (64 - shift)
        };
        lo | hi
    }
}

impl Default for DyadicPhase {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyadicPhase({}/2^{})", self.num, self.logden)
    }
}

impl fmt::Display for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.logden)
    }
}

fn window_to_f64(w: u64) -> f64 {
    w as f64 / 18_446_744_073_709_551_616.0
}

/// Evaluates `e^{2πi·w/2^64}`, exact on quarter turns.
fn window_to_complex(w: u64) -> Complex {
    let quadrant = w >> 62;
    let rem = w & ((1u64 << 62) - 1);
    let angle = TAU * (rem as f64 / 18_446_744_073_709_551_616.0);
    let (s, c) = if rem == 0 {
        (0.0, 1.0)
    } else {
        angle.sin_cos()
    };
    match quadrant {
        0 => Complex::new(c, s),
        1 => Complex::new(-s, c),
        2 => Complex::new(-c, -s),
        _ => Complex::new(s, -c),
    }
}

/// `e^{2πi·m/2^bits}` for `bits ≤ 64`.
pub(crate) fn turn_to_complex(m: u64, bits: u32) -> Complex {
    debug_assert!(bits <= 64);
    if bits == 0 {
        return Complex::new(1.0, 0.0);
    }
    let m = if bits == 64 {
        m
    } else {
        m & ((1u64 << bits) - 1)
    };
    window_to_complex(m << (64 - bits))
}

/// `e^{2πi·p}`.
pub fn phase_to_complex(p: &DyadicPhase) -> Complex {
    p.to_complex()
}

pub fn prepend_bit(p: &DyadicPhase, bit: bool) -> DyadicPhase {
    p.prepend_bit(bit)
}

/// Square root of a unit-modulus complex number on the branch whose angle
/// lies in `[0, π)`.
///
/// For `z = b + di` this is `s + ti` with `t = √((1−b)/2)` and
/// `s = sgn(d)·√((1+b)/2)`, taking `sgn(0) = +1`. Halving a turn fraction in
/// `[0, 1)` lands on this branch, which is what the phase recurrence of the
/// basis-state transform needs.
pub fn principal_sqrt_unit(z: Complex) -> Result<Complex, NumericsError> {
    let modulus = z.norm();
    if !modulus.is_finite() || (modulus - 1.0).abs() > UNIT_MODULUS_TOL {
        return Err(NumericsError::NotUnitModulus(modulus));
    }
    let (b, d) = (z.re.clamp(-1.0, 1.0), z.im);
    // Take the larger component from the half-angle formula and the smaller
    // from d = 2st; the half-angle form loses digits near b = ±1.
    if b >= 0.0 {
        let sign = if d < 0.0 { -1.0 } else { 1.0 };
        let s = sign * ((1.0 + b) * 0.5).sqrt();
        Ok(Complex::new(s, d / (2.0 * s)))
    } else {
        let t = ((1.0 - b) * 0.5).sqrt();
        Ok(Complex::new(d / (2.0 * t), t))
    }
}

/// `1/√2`, the single-qubit Hadamard normalisation.
pub(crate) const INV_SQRT2: f64 = FRAC_1_SQRT_2;
