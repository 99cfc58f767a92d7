//! Reference constructions for integration tests, written without the
//! library's kernels: gates are literal matrices and every register update
//! enumerates basis states directly.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(rows: &[&[f64]]) -> Dense {
    rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect()
}

pub fn u0_literal() -> Dense {
    real(&[
        &[1., 0., 0., 0.],
        &[0., 0., -1., 0.],
        &[0., -1., 0., 0.],
        &[0., 0., 0., -1.],
    ])
}

pub fn u1_literal() -> Dense {
    real(&[
        &[-1., 0., 0., 0.],
        &[0., 0., -1., 0.],
        &[0., -1., 0., 0.],
        &[0., 0., 0., 1.],
    ])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_dense(m: &fluxknit::Matrix) -> Dense {
    (0..m.dim()).map(|r| m.row(r).to_vec()).collect()
}

pub fn from_dense(d: &Dense) -> fluxknit::Matrix {
    fluxknit::Matrix::from_rows(d.iter().flatten().copied().collect()).unwrap()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// `min_λ ‖a − λ b‖_F` over unit λ.
pub fn phase_distance(a: &Dense, b: &Dense) -> f64 {
    let mut overlap = c(0.0, 0.0);
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            overlap += y.conj() * x;
        }
    }
    let lambda = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    let mut s = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            s += (x - lambda * y).norm_sqr();
        }
    }
    s.sqrt()
}

pub fn frobenius(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Haar 2×2 unitary by Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary(r: &mut ChaCha8Rng) -> Dense {
    let mut gauss = || {
        let (u1, u2): (f64, f64) = (r.gen::<f64>().max(1e-300), r.gen());
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let mut col0 = [c(gauss(), gauss()), c(gauss(), gauss())];
    let n0 = (col0[0].norm_sqr() + col0[1].norm_sqr()).sqrt();
    col0.iter_mut().for_each(|z| *z /= n0);
    let mut col1 = [c(gauss(), gauss()), c(gauss(), gauss())];
    let proj = col0[0].conj() * col1[0] + col0[1].conj() * col1[1];
    col1[0] -= proj * col0[0];
    col1[1] -= proj * col0[1];
    let n1 = (col1[0].norm_sqr() + col1[1].norm_sqr()).sqrt();
    col1.iter_mut().for_each(|z| *z /= n1);
    vec![vec![col0[0], col1[0]], vec![col0[1], col1[1]]]
}

pub fn random_logical(r: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let u = random_unitary(r);
    (u[0][0], u[1][0])
}

/// Controlled-`v` on `n` qubits with `d1` as the most significant bit.
pub fn controlled(n: usize, control: usize, target: usize, v: &Dense) -> Dense {
    let dim = 1 << n;
    let cb = 1 << (n - control);
    let tb = 1 << (n - target);
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        if col & cb == 0 {
            m[col][col] = c(1.0, 0.0);
        } else {
            let tin = usize::from(col & tb != 0);
            for tout in 0..2 {
                let row = if tout == 1 { col | tb } else { col & !tb };
                m[row][col] = v[tout][tin];
            }
        }
    }
    m
}

/// `CNS(1,2) … CNS(N−1,N)` as a basis permutation, `d1` most significant.
pub fn cns_cascade(n: usize) -> Dense {
    let dim = 1 << n;
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut bits: Vec<usize> = (1..=n).map(|k| (col >> (n - k)) & 1).collect();
        for k in 0..n - 1 {
            let (ctl, tgt) = (bits[k], bits[k + 1]);
            bits[k] = tgt ^ ctl;
            bits[k + 1] = ctl;
        }
        let row = bits.iter().fold(0, |acc, b| (acc << 1) | b);
        m[row][col] = c(1.0, 0.0);
    }
    m
}

/// One fluxon pass over the interleaved register by basis enumeration.
pub fn sweep(amps: &[Complex64], n: usize, enabled: &[bool], ltr: bool) -> Vec<Complex64> {
    let mut state = amps.to_vec();
    let blocks: Vec<usize> = if ltr {
        (1..n).collect()
    } else {
        (1..n).rev().collect()
    };
    let (u0, u1) = (u0_literal(), u1_literal());
    for i in blocks.into_iter().filter(|i| enabled[i - 1]) {
        let (a, s, b) = (2 * (i - 1), 2 * i - 1, 2 * i);
        let mut next = vec![c(0.0, 0.0); state.len()];
        for (x, amp) in state.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let u = if (x >> s) & 1 == 0 { &u0 } else { &u1 };
            let local = ((x >> a) & 1) * 2 + ((x >> b) & 1);
            for out in 0..4 {
                let y = (x & !(1 << a) & !(1 << b)) | ((out >> 1) << a) | ((out & 1) << b);
                next[y] += u[out][local] * amp;
            }
        }
        state = next;
    }
    state
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

/// `amp0|+++⟩ + amp1|−−−⟩` on `d_i..d_{i+2}` of an `n`-data chain, rest |0⟩.
pub fn encoded(n: usize, i: usize, amp0: Complex64, amp1: Complex64) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); 1 << (2 * n - 1)];
    let s = 8f64.sqrt();
    for x in 0..8usize {
        let idx: usize = (0..3).map(|o| ((x >> o) & 1) << (2 * (i + o - 1))).sum();
        let parity = if x.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        v[idx] = (amp0 + amp1 * parity) / s;
    }
    v
}

/// Applies a 2×2 matrix to register position `pos` by enumeration.
pub fn apply_1q(amps: &mut [Complex64], pos: usize, m: &Dense) {
    let bit = 1 << pos;
    for x in 0..amps.len() {
        if x & bit == 0 {
            let (a0, a1) = (amps[x], amps[x | bit]);
            amps[x] = m[0][0] * a0 + m[0][1] * a1;
            amps[x | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

pub fn hadamard() -> Dense {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    real(&[&[h, h], &[h, -h]])
}

pub fn pauli_x() -> Dense {
    real(&[&[0., 1.], &[1., 0.]])
}

pub fn pauli_z() -> Dense {
    real(&[&[1., 0.], &[0., -1.]])
}

/// Probability that register position `pos` reads 0.
pub fn prob_zero(amps: &[Complex64], pos: usize) -> f64 {
    amps.iter()
        .enumerate()
        .filter(|(x, _)| x & (1 << pos) == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}
