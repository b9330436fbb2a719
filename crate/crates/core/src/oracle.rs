//! Exponential-cost ground truth: the DFT by direct summation or FFT, a
//! gate-level QFT circuit simulator, and the general separability test built
//! from amplitude abstraction, well-formed bit strings, zero deletion and pair
//! product invariance.

use rustfft::FftPlanner;
use thiserror::Error;

use crate::numerics::{turn_to_complex, Complex, INV_SQRT2};
use crate::states::{BitString, DenseState};

/// Default magnitude below which an amplitude counts as zero.
pub const DEFAULT_EPS: f64 = 1e-9;
/// Default absolute tolerance for pair-product comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest `n` transformed by direct `O(4^n)` summation in [`dft`].
pub const DIRECT_DFT_MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("bit string length {0} is not a power of two >= 2")]
    BadLength(usize),
    #[error("{0} non-zero amplitudes is not a power of two")]
    BadSurvivorCount(usize),
    #[error("amplitude {0} is zero")]
    ZeroAmplitude(usize),
}

/// Gate counts reported by [`qft_circuit`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateTally {
    pub hadamards: u64,
    pub controlled_phases: u64,
    pub swaps: u64,
}

impl GateTally {
    /// `(n, n(n−1)/2, ⌊n/2⌋)`, the textbook circuit's cost.
    pub fn expected(n: usize) -> Self {
        let n = n as u64;
        GateTally {
            hadamards: n,
            controlled_phases: n * n.saturating_sub(1) / 2,
            swaps: n / 2,
        }
    }
}

/// `f̂(c) = (1/√N) Σ_a e^{2πi·ac/N} f(a)`.
///
/// Direct summation up to [`DIRECT_DFT_MAX_QUBITS`], FFT above.
pub fn dft(d: &DenseState) -> DenseState {
    if d.n() <= DIRECT_DFT_MAX_QUBITS {
        dft_direct(d)
    } else {
        dft_fft(d)
    }
}

pub fn dft_direct(d: &DenseState) -> DenseState {
    let n = d.n() as u32;
    let len = d.len();
    let mask = len - 1;
    let roots: Vec<Complex> = (0..len as u64).map(|m| turn_to_complex(m, n)).collect();
    let scale = 1.0 / (len as f64).sqrt();
    let amps = d.amps();
    let out = (0..len)
        .map(|c| {
            let mut acc = Complex::new(0.0, 0.0);
            for (a, &f) in amps.iter().enumerate() {
                acc += roots[(a * c) & mask] * f;
            }
            acc * scale
        })
        .collect();
    DenseState::from_vec_unchecked(out)
}

pub fn dft_fft(d: &DenseState) -> DenseState {
    let len = d.len();
    let mut buf = d.amps().to_vec();
    // The inverse FFT carries the e^{+2πi·ac/N} sign we need.
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / (len as f64).sqrt();
    for x in &mut buf {
        *x *= scale;
    }
    DenseState::from_vec_unchecked(buf)
}

fn bit_mask(n: usize, qubit: usize) -> usize {
    1usize << (n - qubit)
}

fn apply_hadamard(amps: &mut [Complex], n: usize, qubit: usize) {
    let mask = bit_mask(n, qubit);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let (x, y) = (amps[i], amps[i | mask]);
            amps[i] = (x + y) * INV_SQRT2;
            amps[i | mask] = (x - y) * INV_SQRT2;
        }
    }
}

/// Controlled `R_k`: phase `e^{2πi/2^k}` on the `|11⟩` component.
fn apply_controlled_phase(amps: &mut [Complex], n: usize, control: usize, target: usize, k: u32) {
    let both = bit_mask(n, control) | bit_mask(n, target);
    let phase = if k <= 64 {
        turn_to_complex(1, k)
    } else {
        Complex::from_polar(1.0, std::f64::consts::TAU / 2f64.powi(k as i32))
    };
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & both == both {
            *amp *= phase;
        }
    }
}

fn apply_swap(amps: &mut [Complex], n: usize, q1: usize, q2: usize) {
    let (m1, m2) = (bit_mask(n, q1), bit_mask(n, q2));
    for i in 0..amps.len() {
        if i & m1 != 0 && i & m2 == 0 {
            amps.swap(i, (i & !m1) | m2);
        }
    }
}

/// Simulates the standard QFT circuit gate by gate.
///
/// Qubit `j` gets a Hadamard followed by `R_k` (k = 2 … n−j+1) controlled by
/// qubit `j+k−1`; the qubit order is then reversed with swaps.
pub fn qft_circuit(d: &DenseState) -> (DenseState, GateTally) {
    let n = d.n();
    let mut amps = d.amps().to_vec();
    let mut tally = GateTally::default();
    for j in 1..=n {
        apply_hadamard(&mut amps, n, j);
        tally.hadamards += 1;
        for k in 2..=(n - j + 1) {
            apply_controlled_phase(&mut amps, n, j + k - 1, j, k as u32);
            tally.controlled_phases += 1;
        }
    }
    for q in 1..=n / 2 {
        apply_swap(&mut amps, n, q, n + 1 - q);
        tally.swaps += 1;
    }
    (DenseState::from_vec_unchecked(amps), tally)
}

/// Bit `c` is 1 iff `|amps[c]| > eps`.
pub fn amplitude_abstraction(d: &DenseState, eps: f64) -> BitString {
    let bits = d.amps().iter().map(|a| a.norm() > eps).collect();
    BitString::new(bits).expect("dense states are nonempty")
}

/// Membership in the well-formed set `B_N`, where `B_2 = {01, 10, 11}` and
/// `B_2N = {0^N x, x 0^N, x x | x ∈ B_N}`.
pub fn is_well_formed(x: &BitString) -> Result<bool, OracleError> {
    let len = x.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(OracleError::BadLength(len));
    }
    Ok(well_formed(x.bits()))
}

fn well_formed(x: &[bool]) -> bool {
    if x.len() == 2 {
        return x[0] || x[1];
    }
    let (left, right) = x.split_at(x.len() / 2);
    let left_zero = !left.contains(&true);
    let right_zero = !right.contains(&true);
    match (left_zero, right_zero) {
        (true, true) => false,
        (true, false) => well_formed(right),
        (false, true) => well_formed(left),
        (false, false) => left == right && well_formed(left),
    }
}

/// Keeps the amplitudes above `eps` in index order and renormalises them.
pub fn zero_delete(d: &DenseState, eps: f64) -> Result<DenseState, OracleError> {
    let kept: Vec<Complex> = d
        .amps()
        .iter()
        .copied()
        .filter(|a| a.norm() > eps)
        .collect();
    if kept.is_empty() || !kept.len().is_power_of_two() {
        return Err(OracleError::BadSurvivorCount(kept.len()));
    }
    let norm = kept.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(DenseState::from_vec_unchecked(
        kept.into_iter().map(|a| a / norm).collect(),
    ))
}

/// Pair product invariance, checked on every aligned block.
///
/// For each block size `J = 2^j` (j ≥ 2) and each aligned block starting at
/// `b`, all products `c[b+i]·c[b+J−1−i]` must equal `c[b]·c[b+J−1]` within
/// `tol`.
pub fn is_ppi(d: &DenseState, tol: f64) -> Result<bool, OracleError> {
    let amps = d.amps();
    if let Some(i) = amps.iter().position(|a| a.norm_sqr() == 0.0) {
        return Err(OracleError::ZeroAmplitude(i));
    }
    for j in 2..=d.n() {
        let block = 1usize << j;
        for base in (0..amps.len()).step_by(block) {
            let chunk = &amps[base..base + block];
            let target = chunk[0] * chunk[block - 1];
            for i in 1..block / 2 {
                if (chunk[i] * chunk[block - 1 - i] - target).norm() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// True iff the state is a product of single-qubit states: its abstraction is
/// well-formed and its zero-deleted form is pair product invariant.
pub fn is_separable(d: &DenseState, eps: f64, tol: f64) -> bool {
    if d.n() <= 1 {
        return true;
    }
    let abstraction = amplitude_abstraction(d, eps);
    if !is_well_formed(&abstraction).unwrap_or(false) {
        return false;
    }
    match zero_delete(d, eps) {
        Ok(survivors) => is_ppi(&survivors, tol).unwrap_or(false),
        Err(_) => false,
    }
}
