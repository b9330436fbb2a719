//! State data model: single qubits, product states, dense amplitude vectors
//! and bit strings.
//!
//! Bit order is fixed throughout the crate: qubit 1 (index 0 in the slices
//! below) is the most significant bit of a dense index.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::numerics::Complex;
use crate::oracle;

/// Accepted deviation of `|α|² + |β|²` (or a dense state's norm²) from 1.
pub const NORM_TOL: f64 = 1e-9;

/// Largest qubit count expanded to a dense vector unless overridden.
pub const DEFAULT_DENSE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("amplitude is not finite")]
    NonFinite,
    #[error("qubit is not normalised: |α|² + |β|² = {0}")]
    NotNormalised(f64),
    #[error("state is not normalised: Σ|c|² = {0}")]
    DenseNotNormalised(f64),
    #[error("a product state needs at least one qubit")]
    EmptyProduct,
    #[error("a bit string needs at least one bit")]
    EmptyBits,
    #[error("invalid bit character {0:?}")]
    BadBit(char),
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
    #[error("{n} qubits exceeds the dense expansion cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("state is entangled and has no product factorisation")]
    Entangled,
    #[error("dimension mismatch: {0} vs {1} amplitudes")]
    DimensionMismatch(usize, usize),
}

/// One two-level system `α|0⟩ + β|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    amp0: Complex,
    amp1: Complex,
}

impl Qubit {
    pub fn new(amp0: Complex, amp1: Complex) -> Result<Self, StateError> {
        if !(amp0.re.is_finite()
            && amp0.im.is_finite()
            && amp1.re.is_finite()
            && amp1.im.is_finite())
        {
            return Err(StateError::NonFinite);
        }
        let norm = amp0.norm_sqr() + amp1.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalised(norm));
        }
        Ok(Qubit { amp0, amp1 })
    }

    /// For amplitudes that are normalised by construction.
    pub(crate) fn from_parts(amp0: Complex, amp1: Complex) -> Self {
        debug_assert!(
            (amp0.norm_sqr() + amp1.norm_sqr() - 1.0).abs() <= NORM_TOL,
            "{amp0} {amp1}"
        );
        Qubit { amp0, amp1 }
    }

    pub fn zero() -> Self {
        Qubit::from_parts(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Qubit::from_parts(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0))
    }

    pub fn basis(bit: bool) -> Self {
        if bit {
            Qubit::one()
        } else {
            Qubit::zero()
        }
    }

    /// α, the amplitude of `|0⟩`.
    pub fn amp0(&self) -> Complex {
        self.amp0
    }

    /// β, the amplitude of `|1⟩`.
    pub fn amp1(&self) -> Complex {
        self.amp1
    }

    pub fn amp(&self, bit: bool) -> Complex {
        if bit {
            self.amp1
        } else {
            self.amp0
        }
    }

    /// Multiplies both amplitudes by `phase`, which must have unit modulus.
    pub fn rotated(&self, phase: Complex) -> Result<Self, StateError> {
        Qubit::new(self.amp0 * phase, self.amp1 * phase)
    }
}

/// Tensor product of `n ≥ 1` qubits, qubit 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    qubits: Vec<Qubit>,
}

impl ProductState {
    pub fn new(qubits: Vec<Qubit>) -> Result<Self, StateError> {
        if qubits.is_empty() {
            return Err(StateError::EmptyProduct);
        }
        Ok(ProductState { qubits })
    }

    pub fn n(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    /// Qubit `j`, 1-based.
    pub fn qubit(&self, j: usize) -> &Qubit {
        &self.qubits[j - 1]
    }

    pub fn into_qubits(self) -> Vec<Qubit> {
        self.qubits
    }

    /// Replaces qubit `j` (1-based).
    pub fn with_qubit(&self, j: usize, q: Qubit) -> Self {
        let mut qubits = self.qubits.clone();
        qubits[j - 1] = q;
        ProductState { qubits }
    }

    pub fn tensor_expand(&self) -> Result<DenseState, StateError> {
        tensor_expand(self)
    }
}

/// A `2^n`-entry amplitude vector indexed by `c = 0 … 2^n − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    amps: Vec<Complex>,
    n: usize,
}

impl DenseState {
    /// Wraps an amplitude vector whose length is a power of two (`n = 0` is
    /// allowed for the one-entry vectors produced by zero deletion).
    pub fn new(amps: Vec<Complex>) -> Result<Self, StateError> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(StateError::BadLength(len));
        }
        if amps.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(StateError::NonFinite);
        }
        Ok(DenseState {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub(crate) fn from_vec_unchecked(amps: Vec<Complex>) -> Self {
        debug_assert!(amps.len().is_power_of_two());
        DenseState {
            n: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    /// Computational basis state `|index⟩` on `n` qubits.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex::new(0.0, 0.0); 1 << n];
        amps[index] = Complex::new(1.0, 0.0);
        DenseState { amps, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amps(&self) -> &[Complex] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalised(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub(crate) fn check_normalised(&self) -> Result<(), StateError> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(StateError::DenseNotNormalised(norm));
        }
        Ok(())
    }
}

/// A nonempty string of bits; for register indices bit 1 is the MSB.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Result<Self, StateError> {
        if bits.is_empty() {
            return Err(StateError::EmptyBits);
        }
        Ok(BitString { bits })
    }

    /// The `width`-bit big-endian representation of `value`.
    pub fn from_index(value: u64, width: usize) -> Result<Self, StateError> {
        let bits = (0..width)
            .map(|i| {
                let shift = width - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        BitString::new(bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Bit `j`, 1-based.
    pub fn bit(&self, j: usize) -> bool {
        self.bits[j - 1]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl FromStr for BitString {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(StateError::BadBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        BitString::new(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Expands a product state into its `2^n` amplitudes, refusing more than
/// [`DEFAULT_DENSE_CAP`] qubits.
pub fn tensor_expand(s: &ProductState) -> Result<DenseState, StateError> {
    tensor_expand_capped(s, DEFAULT_DENSE_CAP)
}

pub fn tensor_expand_capped(s: &ProductState, cap: usize) -> Result<DenseState, StateError> {
    let n = s.n();
    if n > cap {
        return Err(StateError::TooLarge { n, cap });
    }
    let mut amps = Vec::with_capacity(1 << n);
    amps.push(Complex::new(1.0, 0.0));
    // Each qubit becomes the new least significant bit of the index.
    for q in s.qubits() {
        let prev = std::mem::take(&mut amps);
        amps.reserve(prev.len() * 2);
        for c in prev {
            amps.push(c * q.amp0);
            amps.push(c * q.amp1);
        }
    }
    Ok(DenseState::from_vec_unchecked(amps))
}

pub fn basis_product(a: &BitString) -> ProductState {
    ProductState {
        qubits: a.bits().iter().map(|&b| Qubit::basis(b)).collect(),
    }
}

/// Factors a separable dense state back into qubits.
///
/// Qubits 2…n are returned with their leading non-negligible amplitude real
/// and positive; qubit 1 carries the global phase.
pub fn factor_product(d: &DenseState, eps: f64) -> Result<ProductState, StateError> {
    d.check_normalised()?;
    let n = d.n();
    if n == 0 {
        return Err(StateError::BadLength(1));
    }
    if !oracle::is_separable(d, eps, oracle::DEFAULT_TOL) {
        return Err(StateError::Entangled);
    }
    let amps = d.amps();
    // The largest amplitude sits at an index where every factor is non-zero.
    let pivot = (0..amps.len())
        .max_by(|&a, &b| amps[a].norm_sqr().total_cmp(&amps[b].norm_sqr()))
        .unwrap_or(0);

    let mut qubits = Vec::with_capacity(n);
    for j in 0..n {
        let mask = 1usize << (n - 1 - j);
        let c0 = amps[pivot & !mask];
        let c1 = amps[pivot | mask];
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        let (mut a0, mut a1) = (c0 / norm, c1 / norm);
        let lead = if a0.norm() > eps { a0 } else { a1 };
        let unphase = lead.conj() / lead.norm();
        a0 *= unphase;
        a1 *= unphase;
        qubits.push(Qubit::from_parts(a0, a1));
    }

    let mut product = ProductState { qubits };
    let expanded = tensor_expand_capped(&product, usize::MAX)?;
    let global = amps[pivot] / expanded.amps()[pivot];
    let global = global / global.norm();
    let q1 = product.qubits[0];
    product.qubits[0] = Qubit::from_parts(q1.amp0 * global, q1.amp1 * global);

    let expanded = tensor_expand_capped(&product, usize::MAX)?;
    if max_amp_distance(&expanded, d)? > 1e-9 {
        return Err(StateError::Entangled);
    }
    Ok(product)
}

/// `max_c |x_c − y_c|`.
pub fn max_amp_distance(x: &DenseState, y: &DenseState) -> Result<f64, StateError> {
    if x.len() != y.len() {
        return Err(StateError::DimensionMismatch(x.len(), y.len()));
    }
    Ok(x.amps()
        .iter()
        .zip(y.amps())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}
