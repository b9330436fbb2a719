//! Generators and independent checks shared by the integration tests.
//!
//! Nothing here calls into the code paths it is used to check: phases are
//! computed in plain `f64` and separability is decided by rank-1 tests on
//! every single-qubit bipartition.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use dequant::{Complex, DenseState, ProductState, Qubit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut impl Rng) -> Complex {
    Complex::from_polar(1.0, rng.gen_range(-PI..PI))
}

/// A qubit with both amplitudes bounded away from zero.
pub fn superposed_qubit(rng: &mut impl Rng) -> Qubit {
    let t = rng.gen_range(0.15..FRAC_PI_2 - 0.15);
    Qubit::new(unit(rng) * t.cos(), unit(rng) * t.sin()).unwrap()
}

/// `|0⟩` or `|1⟩` times a random phase.
pub fn definite_qubit(rng: &mut impl Rng) -> Qubit {
    let z = unit(rng);
    if rng.gen_bool(0.5) {
        Qubit::new(z, Complex::new(0.0, 0.0)).unwrap()
    } else {
        Qubit::new(Complex::new(0.0, 0.0), z).unwrap()
    }
}

pub fn random_qubit(rng: &mut impl Rng) -> Qubit {
    if rng.gen_bool(0.3) {
        definite_qubit(rng)
    } else {
        superposed_qubit(rng)
    }
}

pub fn random_product(n: usize, rng: &mut impl Rng) -> ProductState {
    ProductState::new((0..n).map(|_| random_qubit(rng)).collect()).unwrap()
}

/// Complex Gaussian-ish vector, normalised.
pub fn random_dense(n: usize, rng: &mut impl Rng) -> DenseState {
    let amps: Vec<Complex> = (0..1usize << n)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalised(amps)
}

/// Random dense vector with a random subset of amplitudes forced to zero.
pub fn random_sparse_dense(n: usize, rng: &mut impl Rng) -> DenseState {
    loop {
        let amps: Vec<Complex> = (0..1usize << n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Complex::new(0.0, 0.0)
                } else {
                    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }
            })
            .collect();
        if amps.iter().any(|a| a.norm() > 0.1) {
            return normalised(amps);
        }
    }
}

pub fn normalised(amps: Vec<Complex>) -> DenseState {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    DenseState::new(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// `θ_j = Σ_{l<j} a_l 2^{l−1} / 2^{j−1}` in half turns, 1-based `j`.
pub fn chain_angle(prefix: &[bool], j: usize) -> f64 {
    prefix[..j - 1]
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(l, _)| 2f64.powi(l as i32) / 2f64.powi(j as i32 - 1))
        .sum()
}

/// An input whose QFT stays separable, with chain length `k`.
///
/// Qubits `1…k` satisfy `α_j = e^{iπ(θ_j + a_j)} β_j` up to a common random
/// phase, qubit `k+1` is random but matches neither sign, qubits past it are
/// definite with random phases.
pub fn satisfying_state_with_k(
    n: usize,
    k: usize,
    rng: &mut impl Rng,
) -> (ProductState, Vec<bool>) {
    let prefix: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
    let mut qubits = Vec::with_capacity(n);
    for j in 1..=k {
        let theta = chain_angle(&prefix, j) + if prefix[j - 1] { 1.0 } else { 0.0 };
        let beta = unit(rng) * std::f64::consts::FRAC_1_SQRT_2;
        let alpha = Complex::from_polar(1.0, PI * theta) * beta;
        qubits.push(Qubit::new(alpha, beta).unwrap());
    }
    if k < n {
        let z = Complex::from_polar(1.0, PI * chain_angle(&prefix, k + 1));
        let free = loop {
            let q = if rng.gen_bool(0.2) {
                definite_qubit(rng)
            } else {
                superposed_qubit(rng)
            };
            let plus = (q.amp0() - z * q.amp1()).norm();
            let minus = (q.amp0() + z * q.amp1()).norm();
            if plus > 1e-3 && minus > 1e-3 {
                break q;
            }
        };
        qubits.push(free);
    }
    for _ in (k + 2)..=n {
        qubits.push(definite_qubit(rng));
    }
    (ProductState::new(qubits).unwrap(), prefix)
}

pub fn satisfying_state(n: usize, rng: &mut impl Rng) -> ProductState {
    let k = rng.gen_range(0..=n);
    satisfying_state_with_k(n, k, rng).0
}

/// An input that breaks the definite-tail clause: a satisfying state with
/// one qubit past the free qubit replaced by a superposition. Needs `n ≥ 2`.
pub fn violating_state(n: usize, rng: &mut impl Rng) -> ProductState {
    assert!(n >= 2);
    let k = rng.gen_range(0..=n - 2);
    let (s, _) = satisfying_state_with_k(n, k, rng);
    let j = rng.gen_range(k + 2..=n);
    s.with_qubit(j, superposed_qubit(rng))
}

/// Multiplies qubit `j` of `s` by `phase`.
pub fn rotate_qubit(s: &ProductState, j: usize, phase: Complex) -> ProductState {
    s.with_qubit(j, s.qubit(j).rotated(phase).unwrap())
}

/// Full separability by brute force: every single-qubit bipartition must be
/// rank one, i.e. all 2×2 minors of the `2 × 2^{n−1}` reshaping vanish.
pub fn brute_force_separable(d: &DenseState, tol: f64) -> bool {
    let n = d.n();
    let amps = d.amps();
    (0..n).all(|q| {
        let mask = 1usize << (n - 1 - q);
        let cols: Vec<(Complex, Complex)> = (0..amps.len())
            .filter(|i| i & mask == 0)
            .map(|i| (amps[i], amps[i | mask]))
            .collect();
        cols.iter().all(|&(a0, a1)| {
            cols.iter()
                .all(|&(b0, b1)| (a0 * b1 - a1 * b0).norm() <= tol)
        })
    })
}

/// Pair product invariance read literally: prefix blocks `c_0 … c_{2^j−1}` only.
pub fn prefix_ppi(amps: &[Complex], tol: f64) -> bool {
    let k = amps.len().trailing_zeros();
    (2..=k).all(|j| {
        let block = 1usize << j;
        let target = amps[0] * amps[block - 1];
        (0..block / 2).all(|i| (amps[i] * amps[block - 1 - i] - target).norm() <= tol)
    })
}

/// Direct `O(4^n)` DFT with angles computed in floating point.
pub fn naive_dft(d: &DenseState) -> Vec<Complex> {
    let len = d.len();
    let scale = 1.0 / (len as f64).sqrt();
    (0..len)
        .map(|c| {
            d.amps()
                .iter()
                .enumerate()
                .map(|(a, &f)| {
                    Complex::from_polar(1.0, TAU * ((a * c) % len) as f64 / len as f64) * f
                })
                .sum::<Complex>()
                * scale
        })
        .collect()
}

pub fn max_dist(x: &[Complex], y: &[Complex]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}
