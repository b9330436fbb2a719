//! Linear-time classical QFT.
//!
//! [`qft_basis`] transforms a computational basis state and [`qft_separable`]
//! transforms any product state whose image under the QFT is again a product
//! state. [`analyze_qft_separability`] decides which product states those are
//! and returns the witnesses the transform needs.
//!
//! Output ordering: output qubit 1 is the most significant bit of the
//! transformed index. For a basis input `a_1…a_n`, output qubit `j` carries
//! the phase `e^{2πi·0.a_{n−j+1}…a_n}`.
//!
//! All phase factors are kept as exact [`DyadicPhase`] values; floating point
//! appears only when a factor is multiplied into an amplitude.

use std::fmt;

use thiserror::Error;

use crate::numerics::{Complex, DyadicPhase, INV_SQRT2};
use crate::states::{BitString, ProductState, Qubit};

/// Default tolerance for the phase-match and definite-qubit tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A clause of the separability condition that the input violates.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    /// 1-based index of the offending qubit.
    pub qubit: usize,
    /// `|α·β|` of that qubit, which must vanish past the free qubit.
    pub amp_product: f64,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "qubit {} lies past the free qubit but is superposed (|αβ| = {:e})",
            self.qubit, self.amp_product
        )
    }
}

/// Verdict on whether the QFT keeps a product state unentangled.
///
/// `k` and `prefix_bits` describe the longest prefix of qubits satisfying the
/// phase-matching chain `α_j = e^{iπ(θ_j + a_j)} β_j`. Qubit `k+1` is the
/// free qubit; qubits past it must be definite up to phase. `r` sums `2^-j`
/// over the definite tail qubits that sit in `|1⟩`, and `omega = e^{2πi·r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub k: usize,
    pub prefix_bits: Vec<bool>,
    pub r: DyadicPhase,
    pub omega: Complex,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DequantError {
    #[error("the QFT entangles this input: {}", .0.failure.as_ref().map(ToString::to_string).unwrap_or_default())]
    WouldEntangle(Box<SeparabilityReport>),
}

fn hadamard_pair(x: Complex, y: Complex) -> Qubit {
    Qubit::from_parts(x * INV_SQRT2, y * INV_SQRT2)
}

/// QFT of the basis state `|a_1…a_n⟩` in O(n).
///
/// Output qubit `j` is `(|0⟩ + e^{2πi·0.a_{n−j+1}…a_n}|1⟩)/√2`; each phase is
/// the previous one with one more leading bit.
pub fn qft_basis(a: &BitString) -> ProductState {
    let mut qubits = Vec::with_capacity(a.len());
    qft_basis_into(a, &mut qubits);
    ProductState::new(qubits).expect("bit strings are nonempty")
}

/// [`qft_basis`] writing into a reusable buffer: `out` is cleared and ends
/// up holding output qubits `1…n` in order.
pub fn qft_basis_into(a: &BitString, out: &mut Vec<Qubit>) {
    let one = Complex::new(1.0, 0.0);
    let mut phase = DyadicPhase::zero();
    out.clear();
    out.extend(a.bits().iter().rev().map(|&bit| {
        phase.prepend_bit_in_place(bit);
        hadamard_pair(one, phase.to_complex())
    }));
}

/// Outcome of the phase-matching test for one qubit.
fn chain_bit(q: &Qubit, z: Complex, tol: f64) -> Option<bool> {
    let plus = (q.amp0() - z * q.amp1()).norm() <= tol;
    let minus = (q.amp0() + z * q.amp1()).norm() <= tol;
    assert!(
        !(plus && minus),
        "both signs match a normalised qubit: {q:?}"
    );
    if plus {
        Some(false)
    } else if minus {
        Some(true)
    } else {
        None
    }
}

/// Decides whether the QFT of `s` is a product state, in O(n).
pub fn analyze_qft_separability(s: &ProductState, tol: f64) -> SeparabilityReport {
    let n = s.n();
    let qubits = s.qubits();

    // `acc` holds 0.a_{j-1}…a_1; its half is θ_j in turns.
    let mut acc = DyadicPhase::zero();
    let mut prefix_bits = Vec::new();
    for q in qubits {
        match chain_bit(q, acc.to_complex_halved(), tol) {
            Some(bit) => {
                prefix_bits.push(bit);
                acc.prepend_bit_in_place(bit);
            }
            None => break,
        }
    }
    let k = prefix_bits.len();

    let mut failure = None;
    let mut r_bits = vec![false; n];
    for (idx, q) in qubits.iter().enumerate().skip(k + 1) {
        let j = idx + 1;
        let amp_product = (q.amp0() * q.amp1()).norm();
        if amp_product > tol && failure.is_none() {
            failure = Some(Failure {
                qubit: j,
                amp_product,
            });
        }
        r_bits[j - 1] = q.amp0().norm() <= tol;
    }
    let r = DyadicPhase::from_binary_fraction(r_bits);
    let omega = r.to_complex();

    SeparabilityReport {
        separable: failure.is_none(),
        k,
        prefix_bits,
        r,
        omega,
        failure,
    }
}

/// QFT of a product state whose transform stays separable, in O(n).
///
/// Returns [`DequantError::WouldEntangle`] with the analysis when the output
/// would be entangled; there is no dense fallback.
pub fn qft_separable(s: &ProductState, tol: f64) -> Result<ProductState, DequantError> {
    let report = analyze_qft_separability(s, tol);
    if !report.separable {
        return Err(DequantError::WouldEntangle(Box::new(report)));
    }
    Ok(separable_output(s, &report, PhaseWeights::Exact))
}

/// How the tail phase `ω^{2^{j−1}}` is produced.
#[derive(Clone, Copy)]
enum PhaseWeights {
    /// Doubling the exact exponent `r`.
    Exact,
    /// Repeated floating-point squaring of `ω`.
    Squaring,
}

fn separable_output(
    s: &ProductState,
    report: &SeparabilityReport,
    weights: PhaseWeights,
) -> ProductState {
    let n = s.n();
    let k = report.k;
    let qubits = s.qubits();
    let mut out = vec![Qubit::zero(); n];

    // Chain qubits and the free qubit land on the least significant outputs.
    let mut acc = DyadicPhase::zero();
    for j in 1..=(k + 1).min(n) {
        let q = &qubits[j - 1];
        let z = acc.to_complex_halved() * q.amp1();
        out[n - j] = hadamard_pair(q.amp0() + z, q.amp0() - z);
        if j <= k {
            acc.prepend_bit_in_place(report.prefix_bits[j - 1]);
        }
    }
    // Definite tail qubits contribute a constant on the remaining outputs.
    for j in 1..n.saturating_sub(k + 1) + 1 {
        let q = &qubits[n - j];
        let dominant = if q.amp0().norm() >= q.amp1().norm() {
            q.amp0()
        } else {
            q.amp1()
        };
        let phase = dominant / dominant.norm();
        out[j - 1] = hadamard_pair(phase, phase);
    }

    match weights {
        PhaseWeights::Exact => {
            let mut r = report.r.clone();
            for j in 1..=n {
                let target = &mut out[n - j];
                *target = Qubit::from_parts(target.amp0(), target.amp1() * r.to_complex());
                r.double_in_place();
            }
        }
        PhaseWeights::Squaring => {
            let mut omega = report.omega;
            for j in 1..=n {
                let target = &mut out[n - j];
                *target = Qubit::from_parts(target.amp0(), target.amp1() * omega);
                omega = omega * omega;
            }
        }
    }
    ProductState::new(out).expect("n >= 1")
}

/// Floating-point formulations of the two transforms, kept to measure how far
/// they drift from the exact phase arithmetic.
pub mod reference {
    use super::*;
    use crate::numerics::principal_sqrt_unit;

    /// [`qft_basis`] through the recurrence `ω_j = (−1)^{a_{n−j+1}} √ω_{j−1}`.
    pub fn qft_basis_sqrt_recurrence(a: &BitString) -> ProductState {
        let one = Complex::new(1.0, 0.0);
        let mut omega = one;
        let qubits = a
            .bits()
            .iter()
            .rev()
            .map(|&bit| {
                let root = principal_sqrt_unit(omega).expect("ω stays on the unit circle");
                omega = if bit { -root } else { root };
                hadamard_pair(one, omega)
            })
            .collect();
        ProductState::new(qubits).expect("bit strings are nonempty")
    }

    /// [`qft_separable`] with `ω ← ω²` squaring for the tail phases.
    pub fn qft_separable_squaring(
        s: &ProductState,
        tol: f64,
    ) -> Result<ProductState, DequantError> {
        let report = analyze_qft_separability(s, tol);
        if !report.separable {
            return Err(DequantError::WouldEntangle(Box::new(report)));
        }
        Ok(separable_output(s, &report, PhaseWeights::Squaring))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dft;
    use crate::states::{basis_product, max_amp_distance, tensor_expand};
    use std::f64::consts::{FRAC_1_SQRT_2 as H, PI};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn q(a: Complex, b: Complex) -> Qubit {
        Qubit::new(a, b).unwrap()
    }

    fn product(qs: Vec<Qubit>) -> ProductState {
        ProductState::new(qs).unwrap()
    }

    fn assert_qubit(got: &Qubit, a: Complex, b: Complex) {
        assert!(
            (got.amp0() - a).norm() < 1e-12 && (got.amp1() - b).norm() < 1e-12,
            "{got:?} vs ({a}, {b})"
        );
    }

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn qft_basis_examples() {
        let out = qft_basis(&bits("0"));
        assert_qubit(out.qubit(1), c(H, 0.0), c(H, 0.0));
        let out = qft_basis(&bits("1"));
        assert_qubit(out.qubit(1), c(H, 0.0), c(-H, 0.0));

        let out = qft_basis(&bits("101"));
        assert_qubit(out.qubit(1), c(H, 0.0), c(-H, 0.0));
        assert_qubit(out.qubit(2), c(H, 0.0), c(0.0, H));
        assert_qubit(
            out.qubit(3),
            c(H, 0.0),
            Complex::from_polar(H, 5.0 * PI / 4.0),
        );
        let e5 = tensor_expand(&basis_product(&bits("101"))).unwrap();
        let dist = max_amp_distance(&tensor_expand(&out).unwrap(), &dft(&e5)).unwrap();
        assert!(dist <= 1e-10);
    }

    #[test]
    fn analyze_entangling_example() {
        let s = product(vec![q(c(1.0, 0.0), c(0.0, 0.0)), q(c(H, 0.0), c(H, 0.0))]);
        let rep = analyze_qft_separability(&s, DEFAULT_TOL);
        assert!(!rep.separable);
        assert_eq!(rep.k, 0);
        let failure = rep.failure.unwrap();
        assert_eq!(failure.qubit, 2);
        assert!((failure.amp_product - 0.5).abs() < 1e-12);
    }

    #[test]
    fn analyze_free_first_qubit() {
        let s = product(vec![q(c(H, 0.0), c(H, 0.0)), Qubit::zero()]);
        let rep = analyze_qft_separability(&s, DEFAULT_TOL);
        assert!(rep.separable);
        assert_eq!(rep.k, 1);
        assert_eq!(rep.prefix_bits, vec![false]);
        assert_eq!(rep.r, DyadicPhase::zero());
        assert_eq!(rep.omega, c(1.0, 0.0));
        assert!(rep.failure.is_none());
    }

    #[test]
    fn analyze_basis_001() {
        let s = basis_product(&bits("001"));
        let rep = analyze_qft_separability(&s, DEFAULT_TOL);
        assert!(rep.separable);
        assert_eq!(rep.k, 0);
        assert_eq!(
            rep.r,
            DyadicPhase::from_binary_fraction([false, false, true])
        );
        assert!((rep.omega - Complex::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        let a = tensor_expand(&qft_separable(&s, DEFAULT_TOL).unwrap()).unwrap();
        let b = tensor_expand(&qft_basis(&bits("001"))).unwrap();
        assert!(max_amp_distance(&a, &b).unwrap() <= 1e-15);
    }

    #[test]
    fn qft_separable_basis_01() {
        let out = qft_separable(&basis_product(&bits("01")), DEFAULT_TOL).unwrap();
        assert_qubit(out.qubit(1), c(H, 0.0), c(-H, 0.0));
        assert_qubit(out.qubit(2), c(H, 0.0), c(0.0, H));
        let d = tensor_expand(&out).unwrap();
        let want = [c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)];
        for (g, w) in d.amps().iter().zip(want) {
            assert!((g - w).norm() < 1e-15);
        }
    }

    #[test]
    fn qft_separable_rejects_entangling_input() {
        let s = product(vec![q(c(1.0, 0.0), c(0.0, 0.0)), q(c(H, 0.0), c(H, 0.0))]);
        match qft_separable(&s, DEFAULT_TOL) {
            Err(DequantError::WouldEntangle(rep)) => {
                assert!(!rep.separable);
                assert_eq!(rep.failure.as_ref().unwrap().qubit, 2);
            }
            other => panic!("expected WouldEntangle, got {other:?}"),
        }
    }

    #[test]
    fn qft_separable_all_zero_is_uniform() {
        for n in 1..=16 {
            let s = basis_product(&BitString::new(vec![false; n]).unwrap());
            let rep = analyze_qft_separability(&s, DEFAULT_TOL);
            assert_eq!((rep.k, rep.r.is_zero()), (0, true));
            let out = qft_separable(&s, DEFAULT_TOL).unwrap();
            for qb in out.qubits() {
                assert_qubit(qb, c(H, 0.0), c(H, 0.0));
            }
        }
    }

    #[test]
    fn full_chain_reaches_k_equals_n() {
        // α_1 = β_1, α_2 = e^{iπ/2}... pick a_1 = 1, a_2 = 0: α_1 = −β_1, α_2 = e^{iπ/2}β_2.
        let s = product(vec![q(c(H, 0.0), c(-H, 0.0)), q(c(0.0, H), c(H, 0.0))]);
        let rep = analyze_qft_separability(&s, DEFAULT_TOL);
        assert!(rep.separable);
        assert_eq!(rep.k, 2);
        assert_eq!(rep.prefix_bits, vec![true, false]);
        let out = tensor_expand(&qft_separable(&s, DEFAULT_TOL).unwrap()).unwrap();
        let want = dft(&tensor_expand(&s).unwrap());
        assert!(max_amp_distance(&out, &want).unwrap() <= 1e-12);
    }

    #[test]
    fn reference_variants_match() {
        for v in 0..64u64 {
            let a = BitString::from_index(v, 6).unwrap();
            let exact = tensor_expand(&qft_basis(&a)).unwrap();
            let rec = tensor_expand(&reference::qft_basis_sqrt_recurrence(&a)).unwrap();
            assert!(max_amp_distance(&exact, &rec).unwrap() <= 1e-12, "{a}");
            let sq = reference::qft_separable_squaring(&basis_product(&a), DEFAULT_TOL).unwrap();
            let sq = tensor_expand(&sq).unwrap();
            assert!(max_amp_distance(&exact, &sq).unwrap() <= 1e-12, "{a}");
        }
    }
}
