//! Single-qubit dressings that turn one JPS pass into a CNS gate.
//!
//! The search enumerates words of length one or two over {I, X, Z, H} on
//! each of the four slots (two wires before, two wires after the pass) and
//! keeps every combination with
//! `‖(P₁⊗P₂)·U0·(Q₁⊗Q₂) − λ·CNS‖_F < 1e−12` for some unit phase λ.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{cns, u0};
use crate::matrix::Matrix;

use super::program::SingleQubitOp;

pub const DRESSING_TOL: f64 = 1e-12;

/// `(post[0] ⊗ post[1]) · U0 · (pre[0] ⊗ pre[1]) = phase · CNS`.
/// Words are time-ordered (first op acts first).
#[derive(Debug, Clone, PartialEq)]
pub struct CnsDressing {
    pub pre: [Vec<SingleQubitOp>; 2],
    pub post: [Vec<SingleQubitOp>; 2],
    pub phase: Complex64,
    pub residual: f64,
}

impl CnsDressing {
    /// Can consecutive blocks share a data qubit without an intervening layer?
    /// Requires the first-wire pre-dressing to undo the second-wire post-dressing.
    pub fn chains(&self) -> bool {
        let junction = SingleQubitOp::word_matrix(&self.pre[0])
            .mul(&SingleQubitOp::word_matrix(&self.post[1]))
            .expect("2x2");
        junction
            .phase_distance(&Matrix::identity(2))
            .map(|(d, _)| d < DRESSING_TOL)
            .unwrap_or(false)
    }

    fn op_count(&self) -> usize {
        self.pre.iter().chain(&self.post).map(Vec::len).sum()
    }
}

#[derive(Debug, Clone)]
pub struct DressingSearch {
    pub combinations_checked: usize,
    pub solutions: Vec<CnsDressing>,
}

fn alphabet() -> Vec<Vec<SingleQubitOp>> {
    // `I` is the empty word; a length-two word `a·b` applies b first.
    let letters: [Option<SingleQubitOp>; 4] =
        [None, Some(SingleQubitOp::X), Some(SingleQubitOp::Z), Some(SingleQubitOp::H)];
    let word = |ls: &[Option<SingleQubitOp>]| ls.iter().flatten().copied().collect::<Vec<_>>();
    let mut words: Vec<Vec<SingleQubitOp>> = letters.iter().map(|l| word(&[*l])).collect();
    for first in &letters {
        for second in &letters {
            words.push(word(&[*first, *second]));
        }
    }
    words
}

/// Exhaustive search over all `20⁴` dressings.
pub fn search_cns_dressings() -> DressingSearch {
    let words = alphabet();
    let mats: Vec<Matrix<f64>> = words.iter().map(|w| SingleQubitOp::word_matrix(w)).collect();
    let pairs: Vec<(usize, usize, Matrix<f64>)> = (0..words.len())
        .flat_map(|a| (0..words.len()).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, mats[a].kron(&mats[b])))
        .collect();
    let jps = u0::<f64>().into_matrix();
    let target = cns::<f64>().into_matrix();
    let post_jps: Vec<Matrix<f64>> = pairs
        .iter()
        .map(|(_, _, p)| p.mul(&jps).expect("4x4"))
        .collect();
    let mut solutions = Vec::new();
    let mut checked = 0;
    for (pi, pj) in post_jps.iter().enumerate() {
        for (qa, qb, q) in &pairs {
            checked += 1;
            let m = pj.mul(q).expect("4x4");
            let (residual, lambda) = m.phase_distance(&target).expect("4x4");
            if residual < DRESSING_TOL {
                let (pa, pb, _) = &pairs[pi];
                solutions.push(CnsDressing {
                    pre: [words[*qa].clone(), words[*qb].clone()],
                    post: [words[*pa].clone(), words[*pb].clone()],
                    phase: lambda,
                    residual,
                });
            }
        }
    }
    DressingSearch {
        combinations_checked: checked,
        solutions,
    }
}

/// The hand-derived dressing `−(H·X ⊗ X) · U0 · (X ⊗ X·H) = CNS`.
pub fn candidate_dressing() -> ([Vec<SingleQubitOp>; 2], [Vec<SingleQubitOp>; 2]) {
    use SingleQubitOp::{H, X};
    ([vec![X], vec![H, X]], [vec![X, H], vec![X]])
}

/// Picks the dressing used by the compiler: the candidate when the search
/// confirms it, otherwise the shortest chainable solution.
pub fn select_dressing(search: &DressingSearch) -> Result<CnsDressing> {
    let (pre, post) = candidate_dressing();
    let chainable = || search.solutions.iter().filter(|d| d.chains());
    if let Some(d) = chainable().find(|d| d.pre == pre && d.post == post) {
        return Ok(d.clone());
    }
    chainable()
        .min_by_key(|d| d.op_count())
        .cloned()
        .ok_or(Error::DressingNotFound)
}

static DRESSING: OnceLock<std::result::Result<CnsDressing, Error>> = OnceLock::new();

/// Cached compiler dressing.
pub fn cns_dressing() -> Result<&'static CnsDressing> {
    DRESSING
        .get_or_init(|| select_dressing(&search_cns_dressings()))
        .as_ref()
        .map_err(Clone::clone)
}
