//! ZYZ Euler decomposition and the A/B/C factors of a controlled rotation.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{compose, phase, rotation, Axis, Gate};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

use super::program::SingleQubitOp;

/// `V = e^{iδ} Rz(α) Ry(θ) Rz(β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles<T: Scalar> {
    pub delta: T,
    pub alpha: T,
    pub theta: T,
    pub beta: T,
}

impl<T: Scalar> EulerAngles<T> {
    pub fn new(delta: T, alpha: T, theta: T, beta: T) -> Self {
        Self {
            delta,
            alpha,
            theta,
            beta,
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    /// Rebuilds `e^{iδ} Rz(α) Ry(θ) Rz(β)`.
    pub fn to_matrix(&self) -> Matrix<T> {
        let m = rotation(Axis::Z, self.alpha)
            .matrix()
            .mul(rotation(Axis::Y, self.theta).matrix())
            .and_then(|m| m.mul(rotation(Axis::Z, self.beta).matrix()))
            .expect("2x2");
        m.scale(Complex::from_polar(T::one(), self.delta))
    }

    /// The unitary itself as a gate.
    pub fn to_gate(&self) -> Gate<T> {
        Gate::new("V", self.to_matrix()).expect("Euler reconstruction is unitary")
    }
}

// Wraps into (−π, π]; returns the number of 2π turns removed.
fn wrap<T: Scalar>(x: T) -> (T, i64) {
    let two_pi = T::PI() + T::PI();
    let turns = ((x - T::PI()) / two_pi).ceil();
    let wrapped = x - turns * two_pi;
    (wrapped, turns.to_i64().unwrap_or(0))
}

/// Decomposes a 2×2 unitary into ZYZ Euler angles.
///
/// `θ ∈ [0, π]`. For `θ ∈ {0, π}` only one of `α ± β` is defined and the
/// result is canonicalized to `β = 0`. `α`, `β`, `δ` are returned in
/// `(−π, π]`.
pub fn zyz_decompose<T: Scalar>(v: &Matrix<T>) -> Result<EulerAngles<T>> {
    if v.dim() != 2 {
        return Err(Error::DimensionMismatch {
            dim: v.dim(),
            targets: 1,
        });
    }
    if !v.is_unitary(T::unitary_tol()) {
        return Err(Error::NonUnitary("V".into()));
    }
    let det = v[(0, 0)] * v[(1, 1)] - v[(0, 1)] * v[(1, 0)];
    let mut delta = det.arg() / T::lit(2.0);
    // W = e^{-iδ} V is in SU(2): W00 = e^{-i(α+β)/2} cos, W10 = e^{i(α−β)/2} sin.
    let w = v.scale(Complex::from_polar(T::one(), -delta));
    let (w00, w10, w11) = (w[(0, 0)], w[(1, 0)], w[(1, 1)]);
    let theta = T::lit(2.0) * w10.norm().atan2(w00.norm());
    let tiny = T::epsilon() * T::lit(64.0);
    let (theta, mut alpha, mut beta) = if w10.norm() <= tiny {
        (T::zero(), T::lit(2.0) * w11.arg(), T::zero())
    } else if w00.norm() <= tiny {
        (T::PI(), T::lit(2.0) * w10.arg(), T::zero())
    } else {
        (theta, w11.arg() + w10.arg(), w11.arg() - w10.arg())
    };
    // Rz(φ + 2π) = −Rz(φ): every turn removed from α or β flips the phase.
    let (a, ta) = wrap(alpha);
    let (b, tb) = wrap(beta);
    alpha = a;
    beta = b;
    if (ta + tb).rem_euclid(2) == 1 {
        delta += T::PI();
    }
    let (d, _) = wrap(delta);
    Ok(EulerAngles::new(d, alpha, theta, beta))
}

/// `A = Rz(α)Ry(θ/2)`, `B = Ry(−θ/2)Rz(−(α+β)/2)`, `C = Rz((β−α)/2)`.
pub fn abc_factors<T: Scalar>(angles: &EulerAngles<T>) -> (Gate<T>, Gate<T>, Gate<T>) {
    let two = T::lit(2.0);
    let EulerAngles {
        alpha, theta, beta, ..
    } = *angles;
    let a = compose(&rotation(Axis::Z, alpha), &rotation(Axis::Y, theta / two)).expect("2x2");
    let b = compose(
        &rotation(Axis::Y, -theta / two),
        &rotation(Axis::Z, -(alpha + beta) / two),
    )
    .expect("2x2");
    let c = rotation(Axis::Z, (beta - alpha) / two);
    (a, b, c)
}

/// The same factors as time-ordered single-qubit op words, plus the δ phase word.
pub fn abc_words(angles: &EulerAngles<f64>) -> AbcWords {
    let EulerAngles {
        delta,
        alpha,
        theta,
        beta,
    } = *angles;
    AbcWords {
        a: vec![SingleQubitOp::Ry(theta / 2.0), SingleQubitOp::Rz(alpha)],
        b: vec![
            SingleQubitOp::Rz(-(alpha + beta) / 2.0),
            SingleQubitOp::Ry(-theta / 2.0),
        ],
        c: vec![SingleQubitOp::Rz((beta - alpha) / 2.0)],
        phase: vec![SingleQubitOp::Phase(delta)],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbcWords {
    pub a: Vec<SingleQubitOp>,
    pub b: Vec<SingleQubitOp>,
    pub c: Vec<SingleQubitOp>,
    pub phase: Vec<SingleQubitOp>,
}

/// `diag(1, e^{iδ})` on the control wire completes the construction.
pub fn delta_gate<T: Scalar>(angles: &EulerAngles<T>) -> Gate<T> {
    phase(angles.delta)
}
