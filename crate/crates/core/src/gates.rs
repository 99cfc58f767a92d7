//! Named unitaries of the chain model and their algebra.
//!
//! Basis ordering: for a multi-qubit gate the first wire is the most
//! significant bit of the basis label, so a two-qubit gate is written in the
//! order |00>, |01>, |10>, |11> read as |first, second>.

use std::fmt;

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{c, Amp, Scalar};

/// Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// A unitary on one, two or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate<T: Scalar> {
    matrix: Matrix<T>,
    label: String,
}

impl<T: Scalar> Gate<T> {
    /// Wraps a matrix after checking its size and unitarity.
    pub fn new(label: impl Into<String>, matrix: Matrix<T>) -> Result<Self> {
        let label = label.into();
        if !matches!(matrix.dim(), 2 | 4 | 8) {
            return Err(Error::UnsupportedDimension(matrix.dim()));
        }
        if !matrix.is_unitary(T::unitary_tol()) {
            return Err(Error::NonUnitary(label));
        }
        Ok(Self { matrix, label })
    }

    // Callers guarantee unitarity by construction.
    fn known(label: &str, matrix: Matrix<T>) -> Self {
        debug_assert!(matrix.is_unitary(T::unitary_tol()), "{label} must be unitary");
        Self {
            matrix,
            label: label.to_string(),
        }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }
}

/// The non-unitary switch-conditioned projections U⁺ and U⁻.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalOperator<T: Scalar> {
    matrix: Matrix<T>,
    label: &'static str,
}

impl<T: Scalar> ConditionalOperator<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn label(&self) -> &'static str {
        self.label
    }
}

pub fn identity<T: Scalar>(dim: usize) -> Gate<T> {
    Gate::known("I", Matrix::identity(dim))
}

pub fn pauli<T: Scalar>(axis: Axis) -> Gate<T> {
    let (o, l, i) = (c::<T>(0.0, 0.0), c::<T>(1.0, 0.0), c::<T>(0.0, 1.0));
    let (label, m) = match axis {
        Axis::X => ("X", vec![o, l, l, o]),
        Axis::Y => ("Y", vec![o, -i, i, o]),
        Axis::Z => ("Z", vec![l, o, o, -l]),
    };
    Gate::known(label, Matrix::from_rows(m).expect("2x2"))
}

pub fn hadamard<T: Scalar>() -> Gate<T> {
    let h = T::FRAC_1_SQRT_2();
    let (p, m) = (Complex::new(h, T::zero()), Complex::new(-h, T::zero()));
    Gate::known("H", Matrix::from_rows(vec![p, p, p, m]).expect("2x2"))
}

/// `exp(−iθσ/2) = I·cos(θ/2) − i·σ·sin(θ/2)`.
pub fn rotation<T: Scalar>(axis: Axis, theta: T) -> Gate<T> {
    let half = theta / T::lit(2.0);
    let (cos, sin) = (half.cos(), half.sin());
    let minus_i_sin = Complex::new(T::zero(), -sin);
    let sigma = pauli::<T>(axis).into_matrix();
    let m = Matrix::identity(2)
        .scale(Complex::new(cos, T::zero()))
        .add(&sigma.scale(minus_i_sin))
        .expect("2x2");
    let label = match axis {
        Axis::X => "RX",
        Axis::Y => "RY",
        Axis::Z => "RZ",
    };
    Gate::known(label, m)
}

/// `diag(1, e^{iδ})`.
pub fn phase<T: Scalar>(delta: T) -> Gate<T> {
    Gate::known(
        "PHASE",
        Matrix::diagonal(&[Complex::one(), Complex::from_polar(T::one(), delta)]),
    )
}

/// JPS gate: the data-pair evolution when the fluxon crosses a switch in |0>.
pub fn u0<T: Scalar>() -> Gate<T> {
    Gate::known(
        "U0",
        Matrix::from_real(
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, -1.0, 0.0, //
                0.0, -1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, -1.0,
            ],
        ),
    )
}

/// Data-pair evolution when the fluxon crosses a switch in |1>.
pub fn u1<T: Scalar>() -> Gate<T> {
    Gate::known(
        "U1",
        Matrix::from_real(
            4,
            &[
                -1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, -1.0, 0.0, //
                0.0, -1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        ),
    )
}

/// Joint phase: flips the sign of |00> only.
pub fn jp<T: Scalar>() -> Gate<T> {
    Gate::known(
        "JP",
        Matrix::diagonal(&[c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]),
    )
}

pub fn swap2<T: Scalar>() -> Gate<T> {
    Gate::known(
        "SWAP",
        Matrix::from_real(
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        ),
    )
}

/// Controlled-NOT, control on the first wire.
pub fn cnot<T: Scalar>() -> Gate<T> {
    Gate::known(
        "CNOT",
        Matrix::from_real(
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        ),
    )
}

pub fn cz<T: Scalar>() -> Gate<T> {
    Gate::known(
        "CZ",
        Matrix::diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]),
    )
}

/// CNOT followed by SWAP: |c, t> → |t ⊕ c, c>.
pub fn cns<T: Scalar>() -> Gate<T> {
    let m = swap2::<T>()
        .matrix
        .mul(&cnot::<T>().matrix)
        .expect("4x4");
    Gate::known("CNS", m)
}

/// Switch-conditioned block evolution on (s; d_i, d_{i+1}):
/// `|0><0|_s ⊗ U0 + |1><1|_s ⊗ U1`.
pub fn block_unitary<T: Scalar>() -> Gate<T> {
    let mut m = Matrix::zeros(8);
    let (a, b) = (u0::<T>(), u1::<T>());
    for r in 0..4 {
        for col in 0..4 {
            m[(r, col)] = a.matrix[(r, col)];
            m[(r + 4, col + 4)] = b.matrix[(r, col)];
        }
    }
    Gate::known("BLOCK", m)
}

/// `U⁺ = (U0 + U1)/2 = −|01><10| − |10><01|`.
pub fn u_plus<T: Scalar>() -> ConditionalOperator<T> {
    let sum = u0::<T>().matrix.add(&u1::<T>().matrix).expect("4x4");
    ConditionalOperator {
        matrix: sum.scale(c(0.5, 0.0)),
        label: "U+",
    }
}

/// `U⁻ = (U0 − U1)/2 = |00><00| − |11><11|`.
///
/// The |11><11| coefficient is −1 under this normalization; the commonly
/// quoted closed form lists +1. Only the relative sign on the even-parity
/// subspace differs, and recovery repairs it.
pub fn u_minus<T: Scalar>() -> ConditionalOperator<T> {
    let diff = u0::<T>().matrix.sub(&u1::<T>().matrix).expect("4x4");
    ConditionalOperator {
        matrix: diff.scale(c(0.5, 0.0)),
        label: "U-",
    }
}

/// `a · b` (b acts first).
pub fn compose<T: Scalar>(a: &Gate<T>, b: &Gate<T>) -> Result<Gate<T>> {
    let m = a.matrix.mul(&b.matrix)?;
    Ok(Gate {
        matrix: m,
        label: format!("{}*{}", a.label, b.label),
    })
}

/// `a ⊗ b`, with `a` on the first (most significant) wire.
pub fn tensor<T: Scalar>(a: &Gate<T>, b: &Gate<T>) -> Result<Gate<T>> {
    let m = a.matrix.kron(&b.matrix);
    if m.dim() > 8 {
        return Err(Error::UnsupportedDimension(m.dim()));
    }
    Ok(Gate {
        matrix: m,
        label: format!("{}(x){}", a.label, b.label),
    })
}

pub fn dagger<T: Scalar>(a: &Gate<T>) -> Gate<T> {
    Gate {
        matrix: a.matrix.dagger(),
        label: format!("{}^", a.label),
    }
}

pub fn equal_up_to_global_phase<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, tol: T) -> Result<bool> {
    Ok(a.phase_distance(b)?.0 <= tol)
}

/// Applies a gate to a small vector of amplitudes (used for basis-state checks).
pub fn act<T: Scalar>(g: &Gate<T>, v: &[Amp<T>]) -> Vec<Amp<T>> {
    g.matrix.apply(v)
}

#[cfg(test)]
pub(crate) fn basis_vec<T: Scalar>(dim: usize, index: usize) -> Vec<Amp<T>> {
    let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
    v[index] = Complex::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type M = Matrix<f64>;

    fn basis(dim: usize, i: usize) -> Vec<Amp<f64>> {
        basis_vec(dim, i)
    }

    fn scaled(dim: usize, i: usize, s: f64) -> Vec<Amp<f64>> {
        let mut v = basis(dim, i);
        v[i] = c(s, 0.0);
        v
    }

    fn close(a: &[Amp<f64>], b: &[Amp<f64>]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    // Independent oracle: exp(−iθσ/2) by truncated Taylor series.
    fn expm_taylor(g: &M) -> M {
        let mut term = M::identity(g.dim());
        let mut sum = M::identity(g.dim());
        for k in 1..40 {
            term = term.mul(g).unwrap().scale(c(1.0 / k as f64, 0.0));
            sum = sum.add(&term).unwrap();
        }
        sum
    }

    #[test]
    fn pauli_z_flips_one() {
        let z = pauli::<f64>(Axis::Z);
        assert!(close(&act(&z, &basis(2, 1)), &scaled(2, 1, -1.0)));
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let h = hadamard::<f64>();
        let h2 = compose(&h, &h).unwrap();
        assert!(h2.matrix().max_abs_diff(&M::identity(2)) < 1e-12);
    }

    #[test]
    fn xy_is_iz() {
        let xy = compose(&pauli::<f64>(Axis::X), &pauli(Axis::Y)).unwrap();
        let iz = pauli::<f64>(Axis::Z).matrix().scale(c(0.0, 1.0));
        assert!(xy.matrix().max_abs_diff(&iz) < 1e-15);
    }

    #[test]
    fn rotation_values() {
        assert!(rotation(Axis::Z, 0.0f64).matrix().max_abs_diff(&M::identity(2)) < 1e-15);
        let ry = rotation(Axis::Y, PI);
        let expect = M::from_real(2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(ry.matrix().max_abs_diff(&expect) < 1e-15);
        let gen = pauli::<f64>(Axis::X).matrix().scale(c(0.0, -0.7 / 2.0));
        assert!(rotation(Axis::X, 0.7).matrix().max_abs_diff(&expm_taylor(&gen)) < 1e-14);
    }

    #[test]
    fn u0_basis_action() {
        let g = u0::<f64>();
        assert!(close(&act(&g, &basis(4, 0)), &basis(4, 0)));
        assert!(close(&act(&g, &basis(4, 2)), &scaled(4, 1, -1.0)));
        assert!(close(&act(&g, &basis(4, 1)), &scaled(4, 2, -1.0)));
    }

    #[test]
    fn u0_is_minus_jp_swap() {
        let prod = jp::<f64>().matrix().mul(swap2::<f64>().matrix()).unwrap();
        assert_eq!(*u0::<f64>().matrix(), prod.scale(c(-1.0, 0.0)));
    }

    #[test]
    fn cns_and_jp_actions() {
        let g = cns::<f64>();
        assert!(close(&act(&g, &basis(4, 2)), &basis(4, 3)));
        assert!(close(&act(&g, &basis(4, 1)), &basis(4, 2)));
        assert!(close(&act(&jp::<f64>(), &basis(4, 0)), &scaled(4, 0, -1.0)));
    }

    #[test]
    fn u1_basis_action() {
        let g = u1::<f64>();
        assert!(close(&act(&g, &basis(4, 0)), &scaled(4, 0, -1.0)));
        assert!(close(&act(&g, &basis(4, 3)), &basis(4, 3)));
        assert!(close(&act(&g, &basis(4, 1)), &scaled(4, 2, -1.0)));
    }

    #[test]
    fn block_unitary_conditions_on_switch() {
        let b = block_unitary::<f64>();
        assert!(b.matrix().is_unitary(1e-12));
        for d in 0..4 {
            let out0 = act(&b, &basis(8, d));
            let want0 = act(&u0(), &basis(4, d));
            assert!(close(&out0[..4], &want0));
            assert!(out0[4..].iter().all(|z| z.norm() == 0.0));
            let out1 = act(&b, &basis(8, 4 + d));
            let want1 = act(&u1(), &basis(4, d));
            assert!(close(&out1[4..], &want1));
        }
    }

    #[test]
    fn conditional_operators() {
        let up = u_plus::<f64>();
        let um = u_minus::<f64>();
        assert!(close(&up.matrix().apply(&basis(4, 2)), &scaled(4, 1, -1.0)));
        assert!(close(&um.matrix().apply(&basis(4, 0)), &basis(4, 0)));
        assert!(close(&um.matrix().apply(&basis(4, 3)), &scaled(4, 3, -1.0)));
        assert_eq!(up.matrix().add(um.matrix()).unwrap(), *u0::<f64>().matrix());
        assert_eq!(up.matrix().sub(um.matrix()).unwrap(), *u1::<f64>().matrix());
        assert!(!up.matrix().is_unitary(1e-3));
    }

    #[test]
    fn algebra_helpers() {
        let minus_i = M::identity(2).scale(c(-1.0, 0.0));
        assert!(equal_up_to_global_phase(&minus_i, &M::identity(2), 1e-12).unwrap());
        let ss = compose(&swap2::<f64>(), &swap2()).unwrap();
        assert!(ss.matrix().max_abs_diff(&M::identity(4)) < 1e-15);
        let g = u0::<f64>();
        let p = compose(&dagger(&g), &g).unwrap();
        assert!(p.matrix().max_abs_diff(&M::identity(4)) < 1e-15);
        assert!(compose(&g, &hadamard()).is_err());
        let t = tensor(&hadamard::<f64>(), &pauli(Axis::X)).unwrap();
        assert_eq!(t.dim(), 4);
        assert!(tensor(&u0::<f64>(), &u0()).is_err());
    }

    #[test]
    fn gate_new_validates() {
        assert!(Gate::new("bad", M::from_real(2, &[1.0, 1.0, 0.0, 1.0])).is_err());
        assert!(Gate::new("three", M::identity(3)).is_err());
        assert!(Gate::new("ok", M::identity(8)).is_ok());
    }

    #[test]
    fn named_gates_unitary_in_single_precision() {
        for g in [u0::<f32>(), u1(), jp(), swap2(), cns(), cz(), hadamard()] {
            assert!(g.matrix().is_unitary(1e-6), "{}", g.label());
        }
    }
}
