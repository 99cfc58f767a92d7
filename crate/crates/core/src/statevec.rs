//! Dense state-vector engine.
//!
//! Qubit 0 is the least-significant bit of a basis-state label. Gates are
//! applied in place: for each assignment of the non-target bits the 2^k
//! amplitudes of the target subspace are gathered, multiplied by the gate,
//! and scattered back. The first listed target is the most-significant bit
//! of the gate's own basis label.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{hadamard, Gate};
use crate::rng::SimRng;
use crate::scalar::{is_finite, Amp, Scalar};

/// Largest register the engine will allocate.
pub const MAX_QUBITS: usize = 24;

/// Measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Z,
    X,
}

/// Measurement outcome; `Zero`/`One` in the Z basis, `Plus`/`Minus` in the X basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Outcome {
    fn from_bit(basis: Basis, bit: usize) -> Self {
        match (basis, bit) {
            (Basis::Z, 0) => Outcome::Zero,
            (Basis::Z, _) => Outcome::One,
            (Basis::X, 0) => Outcome::Plus,
            (Basis::X, _) => Outcome::Minus,
        }
    }

    /// Eigenvalue index: 0 for `Zero`/`Plus`, 1 for `One`/`Minus`.
    pub fn bit(self) -> usize {
        match self {
            Outcome::Zero | Outcome::Plus => 0,
            Outcome::One | Outcome::Minus => 1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Outcome::Zero => "0",
            Outcome::One => "1",
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement<T: Scalar> {
    pub outcome: Outcome,
    pub probability: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar> {
    num_qubits: usize,
    amps: Vec<Amp<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// `|basis_index>` on `num_qubits` qubits.
    pub fn new(num_qubits: usize, basis_index: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let len = 1usize << num_qubits;
        if basis_index >= len {
            return Err(Error::BasisIndexOutOfRange {
                index: basis_index,
                num_qubits,
            });
        }
        let mut amps = vec![Complex::zero(); len];
        amps[basis_index] = Complex::one();
        Ok(Self { num_qubits, amps })
    }

    /// Wraps explicit amplitudes; they must be normalized.
    pub fn from_amplitudes(amps: Vec<Amp<T>>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadAmplitudeLength(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let state = Self { num_qubits, amps };
        let n2 = state.norm_sqr();
        if !state.amps.iter().all(|&z| is_finite(z)) || (n2 - T::one()).abs() > T::unitary_tol() {
            return Err(Error::Unnormalized(n2.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Amp<T>] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Amp<T> {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Applies `gate` to `targets` (first target = most-significant gate bit).
    pub fn apply_gate(&mut self, gate: &Gate<T>, targets: &[usize]) -> Result<()> {
        let k = targets.len();
        if !(1..=3).contains(&k) || gate.dim() != 1 << k {
            return Err(Error::DimensionMismatch {
                dim: gate.dim(),
                targets: k,
            });
        }
        for (i, &t) in targets.iter().enumerate() {
            self.check_qubit(t)?;
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        // Gate values are unitary by construction (see `Gate::new`).
        self.apply_unchecked(gate, targets);
        Ok(())
    }

    fn apply_unchecked(&mut self, gate: &Gate<T>, targets: &[usize]) {
        let k = targets.len();
        let sub = 1usize << k;
        // offsets[m]: register bits set by gate basis label m.
        let mut offsets = [0usize; 8];
        let mut mask = 0usize;
        for (m, off) in offsets.iter_mut().enumerate().take(sub) {
            for (j, &t) in targets.iter().enumerate() {
                if m >> (k - 1 - j) & 1 == 1 {
                    *off |= 1 << t;
                }
            }
        }
        for &t in targets {
            mask |= 1 << t;
        }
        let mat = gate.matrix();
        let mut buf = [Complex::zero(); 8];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for m in 0..sub {
                buf[m] = self.amps[base | offsets[m]];
            }
            for r in 0..sub {
                let row = mat.row(r);
                let mut acc = Complex::zero();
                for m in 0..sub {
                    acc += row[m] * buf[m];
                }
                self.amps[base | offsets[r]] = acc;
            }
        }
    }

    /// Probability of reading `bit` on `target` in the Z basis.
    pub fn probability(&self, target: usize, bit: usize) -> Result<T> {
        self.check_qubit(target)?;
        let want = bit & 1;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> target) & 1 == want)
            .fold(T::zero(), |acc, (_, z)| acc + z.norm_sqr()))
    }

    /// Projects onto `outcome` and renormalizes, returning the outcome probability.
    pub fn project(&mut self, target: usize, basis: Basis, outcome: Outcome) -> Result<T> {
        self.check_qubit(target)?;
        if basis == Basis::X {
            self.apply_unchecked(&hadamard(), &[target]);
        }
        let bit = outcome.bit();
        let p = self.probability(target, bit)?;
        if p <= T::epsilon() {
            if basis == Basis::X {
                self.apply_unchecked(&hadamard(), &[target]);
            }
            return Err(Error::ZeroProbability);
        }
        let scale = Complex::new(T::one() / p.sqrt(), T::zero());
        for (i, z) in self.amps.iter_mut().enumerate() {
            if (i >> target) & 1 == bit {
                *z *= scale;
            } else {
                *z = Complex::zero();
            }
        }
        if basis == Basis::X {
            self.apply_unchecked(&hadamard(), &[target]);
        }
        Ok(p)
    }

    /// Born-rule measurement; the state collapses in place.
    pub fn measure(&mut self, target: usize, basis: Basis, rng: &mut SimRng) -> Result<Measurement<T>> {
        self.check_qubit(target)?;
        let p0 = {
            let mut probe = self.clone();
            if basis == Basis::X {
                probe.apply_unchecked(&hadamard(), &[target]);
            }
            probe.probability(target, 0)?
        };
        let p0f = p0.to_f64().unwrap_or(0.0);
        let eps = T::unitary_tol().to_f64().unwrap_or(1e-10) * 1e-4;
        let bit = if p0f >= 1.0 - eps {
            0
        } else if p0f <= eps {
            1
        } else if rng.uniform() < p0f {
            0
        } else {
            1
        };
        let outcome = Outcome::from_bit(basis, bit);
        let probability = self.project(target, basis, outcome)?.min(T::one());
        Ok(Measurement {
            outcome,
            probability,
        })
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Amp<T>> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch(self.num_qubits, other.num_qubits));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|<self|other>|²`, clamped to `[0, 1]`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr().min(T::one()).max(T::zero()))
    }

    /// 2×2 reduced density matrix of one qubit, row-major.
    pub fn reduced_density(&self, target: usize) -> Result<[Amp<T>; 4]> {
        self.check_qubit(target)?;
        let bit = 1usize << target;
        let mut rho = [Complex::zero(); 4];
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[i | bit]);
            rho[0] += a0 * a0.conj();
            rho[1] += a0 * a1.conj();
            rho[2] += a1 * a0.conj();
            rho[3] += a1 * a1.conj();
        }
        Ok(rho)
    }

    /// `Tr ρ²` of one qubit's marginal.
    pub fn purity(&self, target: usize) -> Result<T> {
        let rho = self.reduced_density(target)?;
        Ok(rho[0].norm_sqr() + rho[3].norm_sqr() + T::lit(2.0) * rho[1].norm_sqr())
    }

    /// Replaces the state of an unentangled qubit by `local` (normalized here).
    ///
    /// Fails with [`Error::Entangled`] when the qubit's marginal is mixed.
    pub fn reset_qubit(&mut self, target: usize, local: [Amp<T>; 2]) -> Result<()> {
        let purity = self.purity(target)?;
        if (T::one() - purity).abs() > T::unitary_tol() {
            return Err(Error::Entangled(format!("q{target}")));
        }
        let n = (local[0].norm_sqr() + local[1].norm_sqr()).sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Unnormalized(n.to_f64().unwrap_or(f64::NAN)));
        }
        let local = [local[0] / n, local[1] / n];
        let bit = 1usize << target;
        // Factor |rest> from the larger branch; its phase is global.
        let (p0, p1) = (self.probability(target, 0)?, self.probability(target, 1)?);
        let (branch, p) = if p0 >= p1 { (0, p0) } else { (bit, p1) };
        let scale = T::one() / p.sqrt();
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                continue;
            }
            let rest = self.amps[i | branch] * scale;
            self.amps[i] = rest * local[0];
            self.amps[i | bit] = rest * local[1];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{pauli, swap2, u0, Axis};
    use crate::scalar::c;

    #[test]
    fn basis_construction() {
        let s = StateVector::<f64>::new(1, 0).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = StateVector::<f64>::new(2, 3).unwrap();
        assert_eq!(s.amplitude(3), c(1.0, 0.0));
        let s = StateVector::<f64>::new(3, 5).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(s.amplitude(5), c(1.0, 0.0));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            StateVector::<f64>::new(2, 4),
            Err(Error::BasisIndexOutOfRange { .. })
        ));
        assert!(matches!(
            StateVector::<f64>::new(25, 0),
            Err(Error::TooManyQubits { .. })
        ));
        assert!(StateVector::<f64>::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
        assert!(StateVector::<f64>::from_amplitudes(vec![c(1.0, 0.0); 2]).is_err());
    }

    #[test]
    fn x_and_h_actions() {
        let mut s = StateVector::<f64>::new(1, 0).unwrap();
        s.apply_gate(&pauli(Axis::X), &[0]).unwrap();
        assert_eq!(s.amplitude(1), c(1.0, 0.0));
        let mut s = StateVector::<f64>::new(1, 0).unwrap();
        s.apply_gate(&hadamard(), &[0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0) - c(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(1) - c(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn u0_on_01_gives_minus_10() {
        // |01> on (d_i, d_{i+1}) = (qubit 1, qubit 0): qubit 0 set → index 1.
        let mut s = StateVector::<f64>::new(2, 1).unwrap();
        s.apply_gate(&u0(), &[1, 0]).unwrap();
        assert!((s.amplitude(2) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn apply_gate_errors() {
        let mut s = StateVector::<f64>::new(3, 0).unwrap();
        assert!(matches!(
            s.apply_gate(&u0(), &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            s.apply_gate(&u0(), &[1, 1]),
            Err(Error::DuplicateTarget(1))
        ));
        assert!(matches!(
            s.apply_gate(&hadamard(), &[3]),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn swap_relabels_bits() {
        let mut s = StateVector::<f64>::new(3, 0b001).unwrap();
        s.apply_gate(&swap2(), &[0, 2]).unwrap();
        assert_eq!(s.amplitude(0b100), c(1.0, 0.0));
    }

    #[test]
    fn measure_eigenstate_and_superposition() {
        let mut rng = SimRng::new(3);
        let mut plus = StateVector::<f64>::new(1, 0).unwrap();
        plus.apply_gate(&hadamard(), &[0]).unwrap();
        let m = plus.clone().measure(0, Basis::X, &mut rng).unwrap();
        assert_eq!(m.outcome, Outcome::Plus);
        assert!((m.probability - 1.0).abs() < 1e-12);

        let mut ones = 0;
        for seed in 0..2000 {
            let mut r = SimRng::new(seed);
            let mut s = plus.clone();
            let m = s.measure(0, Basis::Z, &mut r).unwrap();
            assert!((m.probability - 0.5).abs() < 1e-12);
            if m.outcome == Outcome::One {
                ones += 1;
                assert!((s.amplitude(1).norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!((ones as f64 / 2000.0 - 0.5).abs() < 0.05, "{ones}");
    }

    #[test]
    fn project_zero_probability_is_error() {
        let mut s = StateVector::<f64>::new(1, 0).unwrap();
        assert_eq!(s.project(0, Basis::Z, Outcome::One), Err(Error::ZeroProbability));
        // state untouched by the failed projection
        assert_eq!(s.amplitude(0), c(1.0, 0.0));
    }

    #[test]
    fn fidelity_values() {
        let z0 = StateVector::<f64>::new(1, 0).unwrap();
        let z1 = StateVector::<f64>::new(1, 1).unwrap();
        let mut plus = z0.clone();
        plus.apply_gate(&hadamard(), &[0]).unwrap();
        assert!((z0.fidelity(&z0).unwrap() - 1.0).abs() < 1e-15);
        assert!(z0.fidelity(&z1).unwrap().abs() < 1e-15);
        assert!((plus.fidelity(&z0).unwrap() - 0.5).abs() < 1e-15);
        let big = StateVector::<f64>::new(2, 0).unwrap();
        assert!(matches!(z0.fidelity(&big), Err(Error::SizeMismatch(1, 2))));
    }

    #[test]
    fn reset_requires_unentangled_qubit() {
        let mut s = StateVector::<f64>::new(2, 0).unwrap();
        s.apply_gate(&hadamard(), &[0]).unwrap();
        s.apply_gate(&crate::gates::cnot(), &[0, 1]).unwrap();
        assert!(matches!(
            s.reset_qubit(1, [c(1.0, 0.0), c(0.0, 0.0)]),
            Err(Error::Entangled(_))
        ));

        let mut s = StateVector::<f64>::new(2, 0b10).unwrap();
        s.apply_gate(&hadamard(), &[0]).unwrap();
        s.reset_qubit(0, [c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((s.amplitude(0b11).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_precision_engine() {
        let mut s = StateVector::<f32>::new(2, 0).unwrap();
        s.apply_gate(&hadamard(), &[1]).unwrap();
        s.apply_gate(&crate::gates::cnot(), &[1, 0]).unwrap();
        assert!((s.probability(0, 1).unwrap() - 0.5).abs() < 1e-6);
    }
}
