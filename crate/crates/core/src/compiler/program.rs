//! Pass programs: what the chain controller executes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainConfig, ChainState, LocalState, QubitRef, SweepDirection};
use crate::error::{Error, Result};
use crate::gates::{hadamard, pauli, phase, rotation, Axis, Gate};
use crate::matrix::Matrix;
use crate::rng::SimRng;
use crate::statevec::{Basis, Outcome};

/// A named single-qubit operation. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SingleQubitOp {
    X,
    Y,
    Z,
    H,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// `diag(1, e^{iδ})`
    Phase(f64),
}

impl SingleQubitOp {
    pub fn gate(&self) -> Gate<f64> {
        match *self {
            SingleQubitOp::X => pauli(Axis::X),
            SingleQubitOp::Y => pauli(Axis::Y),
            SingleQubitOp::Z => pauli(Axis::Z),
            SingleQubitOp::H => hadamard(),
            SingleQubitOp::Rx(t) => rotation(Axis::X, t),
            SingleQubitOp::Ry(t) => rotation(Axis::Y, t),
            SingleQubitOp::Rz(t) => rotation(Axis::Z, t),
            SingleQubitOp::Phase(d) => phase(d),
        }
    }

    /// Matrix of a time-ordered word (first op acts first).
    pub fn word_matrix(word: &[SingleQubitOp]) -> Matrix<f64> {
        word.iter().fold(Matrix::identity(2), |acc, op| {
            op.gate().matrix().mul(&acc).expect("2x2")
        })
    }
}

impl fmt::Display for SingleQubitOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingleQubitOp::X => f.write_str("X"),
            SingleQubitOp::Y => f.write_str("Y"),
            SingleQubitOp::Z => f.write_str("Z"),
            SingleQubitOp::H => f.write_str("H"),
            SingleQubitOp::Rx(t) => write!(f, "RX {t}"),
            SingleQubitOp::Ry(t) => write!(f, "RY {t}"),
            SingleQubitOp::Rz(t) => write!(f, "RZ {t}"),
            SingleQubitOp::Phase(d) => write!(f, "PHASE {d}"),
        }
    }
}

/// One tensor-product layer: per qubit, a time-ordered word of ops.
pub type Layer = BTreeMap<QubitRef, Vec<SingleQubitOp>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Instruction {
    SingleLayer(Layer),
    Sweep(SweepDirection),
    SetSwitch { switch: usize, enabled: bool },
    PrepareSwitch { switch: usize, state: PrepState },
    MeasureSwitch(usize),
}

/// Serializable mirror of [`LocalState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrepState {
    Zero,
    One,
    Plus,
}

impl From<PrepState> for LocalState {
    fn from(s: PrepState) -> Self {
        match s {
            PrepState::Zero => LocalState::Zero,
            PrepState::One => LocalState::One,
            PrepState::Plus => LocalState::Plus,
        }
    }
}

/// Outcome of a `MeasureSwitch` instruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwitchReadout {
    pub switch: usize,
    pub outcome: Outcome,
    pub probability: f64,
}

/// Ordered instruction list. Adjacent single-qubit layers are always merged,
/// so two programs with the same instruction stream compare equal.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PassProgram {
    instructions: Vec<Instruction>,
}

impl PassProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn push(&mut self, instruction: Instruction) {
        match instruction {
            Instruction::SingleLayer(layer) => self.push_layer(layer),
            other => self.instructions.push(other),
        }
    }

    /// Appends a layer, merging it into a directly preceding one.
    pub fn push_layer(&mut self, layer: Layer) {
        if layer.values().all(Vec::is_empty) {
            return;
        }
        if let Some(Instruction::SingleLayer(prev)) = self.instructions.last_mut() {
            for (q, ops) in layer.into_iter().filter(|(_, ops)| !ops.is_empty()) {
                prev.entry(q).or_default().extend(ops);
            }
        } else {
            let layer = layer.into_iter().filter(|(_, ops)| !ops.is_empty()).collect();
            self.instructions.push(Instruction::SingleLayer(layer));
        }
    }

    /// Appends ops on one qubit to the trailing layer.
    pub fn push_ops(&mut self, q: QubitRef, ops: &[SingleQubitOp]) {
        let mut layer = Layer::new();
        layer.insert(q, ops.to_vec());
        self.push_layer(layer);
    }

    pub fn prepend(&mut self, head: Vec<Instruction>) {
        let mut out = PassProgram::new();
        for i in head.into_iter().chain(std::mem::take(&mut self.instructions)) {
            out.push(i);
        }
        *self = out;
    }

    pub fn contains_measurement(&self) -> bool {
        self.instructions
            .iter()
            .any(|i| matches!(i, Instruction::MeasureSwitch(_)))
    }

    /// Every referenced qubit and switch must exist on a chain of `num_data`.
    pub fn validate(&self, num_data: usize) -> Result<()> {
        let cfg = ChainConfig::new(num_data)?;
        for ins in &self.instructions {
            match ins {
                Instruction::SingleLayer(layer) => {
                    for q in layer.keys() {
                        cfg.position(*q)?;
                    }
                }
                Instruction::Sweep(_) => {}
                Instruction::SetSwitch { switch, .. }
                | Instruction::PrepareSwitch { switch, .. }
                | Instruction::MeasureSwitch(switch) => cfg.check_switch(*switch)?,
            }
        }
        Ok(())
    }

    /// Runs the program on a chain; measurements draw from `rng`.
    pub fn execute(&self, chain: &mut ChainState<f64>, rng: &mut SimRng) -> Result<Vec<SwitchReadout>> {
        let mut readouts = Vec::new();
        for ins in &self.instructions {
            match ins {
                Instruction::SingleLayer(layer) => {
                    let gates: Vec<(QubitRef, Gate<f64>)> = layer
                        .iter()
                        .map(|(q, word)| {
                            let m = SingleQubitOp::word_matrix(word);
                            Gate::new("layer", m).map(|g| (*q, g))
                        })
                        .collect::<Result<_>>()?;
                    chain.apply_single_layer(gates.iter().map(|(q, g)| (*q, g)))?;
                }
                Instruction::Sweep(dir) => chain.fluxon_sweep(*dir)?,
                Instruction::SetSwitch { switch, enabled } => chain.set_switch(*switch, *enabled)?,
                Instruction::PrepareSwitch { switch, state } => {
                    chain.prepare_switch(*switch, (*state).into())?
                }
                Instruction::MeasureSwitch(switch) => {
                    let m = chain.measure(QubitRef::Switch(*switch), Basis::X, rng)?;
                    readouts.push(SwitchReadout {
                        switch: *switch,
                        outcome: m.outcome,
                        probability: m.probability,
                    });
                }
            }
        }
        Ok(readouts)
    }

    /// Where each logical data qubit sits after the program, starting from
    /// the identity placement and the given switch enablement. Every enabled
    /// block crossed by a sweep exchanges its two data wires.
    pub fn wire_permutation(&self, config: &ChainConfig) -> WirePermutation {
        let mut enabled = config.switch_enabled().to_vec();
        let mut perm = WirePermutation::identity(config.num_data());
        for ins in &self.instructions {
            match ins {
                Instruction::SetSwitch { switch, enabled: on } => {
                    if let Some(slot) = enabled.get_mut(switch.wrapping_sub(1)) {
                        *slot = *on;
                    }
                }
                Instruction::Sweep(dir) => perm.apply_sweep(*dir, &enabled),
                _ => {}
            }
        }
        perm
    }
}

/// Bijection between logical data labels and physical data positions (both 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WirePermutation {
    // position_of[logical - 1] = physical position
    position_of: Vec<usize>,
}

impl WirePermutation {
    pub fn identity(num_data: usize) -> Self {
        Self {
            position_of: (1..=num_data).collect(),
        }
    }

    pub fn position_of(&self, logical: usize) -> usize {
        self.position_of[logical - 1]
    }

    pub fn logical_at(&self, position: usize) -> usize {
        self.position_of
            .iter()
            .position(|&p| p == position)
            .map(|i| i + 1)
            .expect("permutation is a bijection")
    }

    /// Exchanges whatever sits at physical positions `a` and `b`.
    pub fn swap_positions(&mut self, a: usize, b: usize) {
        for p in self.position_of.iter_mut() {
            if *p == a {
                *p = b;
            } else if *p == b {
                *p = a;
            }
        }
    }

    pub fn apply_sweep(&mut self, dir: SweepDirection, enabled: &[bool]) {
        for i in dir.blocks(enabled.len()) {
            if enabled[i - 1] {
                self.swap_positions(i, i + 1);
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.position_of.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.position_of
    }

    /// Bijection check.
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.position_of.len()];
        self.position_of.iter().all(|&p| {
            (1..=seen.len()).contains(&p) && !std::mem::replace(&mut seen[p - 1], true)
        })
    }
}

/// Simulates a program's data-register semantics; switches start in |0>
/// and must end in |0> on every input column.
pub fn program_semantics(program: &PassProgram, num_data: usize) -> Result<Matrix<f64>> {
    use rayon::prelude::*;

    if program.contains_measurement() {
        return Err(Error::MeasurementInProgram);
    }
    program.validate(num_data)?;
    let cfg = ChainConfig::new(num_data)?;
    let dim = 1usize << num_data;
    let reg_index = |label: usize| -> usize {
        (1..=num_data)
            .filter(|k| (label >> (num_data - k)) & 1 == 1)
            .map(|k| 1usize << (2 * (k - 1)))
            .sum()
    };
    let columns: Vec<Vec<num_complex::Complex64>> = (0..dim)
        .into_par_iter()
        .map(|col| {
            let mut chain = ChainState::<f64>::new(cfg.clone())?;
            chain.set_register(crate::statevec::StateVector::new(cfg.num_qubits(), reg_index(col))?)?;
            let mut rng = SimRng::new(0);
            program.execute(&mut chain, &mut rng)?;
            for s in 1..=cfg.num_switches() {
                let p0 = chain.switch_zero_probability(s)?;
                if p0 < 1.0 - 1e-10 {
                    return Err(Error::SwitchNotDecoupled { switch: s, p0 });
                }
            }
            Ok((0..dim).map(|r| chain.register().amplitude(reg_index(r))).collect())
        })
        .collect::<Result<_>>()?;
    let mut m = Matrix::zeros(dim);
    for (col, values) in columns.iter().enumerate() {
        for (r, v) in values.iter().enumerate() {
            m[(r, col)] = *v;
        }
    }
    if !m.is_unitary(1e-10) {
        return Err(Error::NonUnitary("program semantics".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::u0;

    #[test]
    fn adjacent_layers_merge() {
        let mut p = PassProgram::new();
        p.push_ops(QubitRef::Data(1), &[SingleQubitOp::H]);
        p.push_ops(QubitRef::Data(1), &[SingleQubitOp::X]);
        p.push_ops(QubitRef::Data(2), &[SingleQubitOp::Z]);
        assert_eq!(p.len(), 1);
        p.push(Instruction::Sweep(SweepDirection::Ltr));
        p.push_ops(QubitRef::Data(2), &[]);
        assert_eq!(p.len(), 2);
        match &p.instructions()[0] {
            Instruction::SingleLayer(l) => {
                assert_eq!(l[&QubitRef::Data(1)], vec![SingleQubitOp::H, SingleQubitOp::X])
            }
            _ => panic!("expected layer"),
        }
    }

    #[test]
    fn empty_program_is_identity() {
        let m = program_semantics(&PassProgram::new(), 3).unwrap();
        assert!(m.max_abs_diff(&Matrix::identity(8)) < 1e-15);
    }

    #[test]
    fn single_sweep_is_u0() {
        let mut p = PassProgram::new();
        p.push(Instruction::Sweep(SweepDirection::Ltr));
        let m = program_semantics(&p, 2).unwrap();
        assert!(m.max_abs_diff(u0::<f64>().matrix()) < 1e-15);
    }

    #[test]
    fn semantics_rejects_measurement_and_leaky_switch() {
        let mut p = PassProgram::new();
        p.push(Instruction::MeasureSwitch(1));
        assert_eq!(program_semantics(&p, 2), Err(Error::MeasurementInProgram));

        let mut leak = PassProgram::new();
        leak.push(Instruction::PrepareSwitch {
            switch: 1,
            state: PrepState::One,
        });
        assert!(matches!(
            program_semantics(&leak, 2),
            Err(Error::SwitchNotDecoupled { switch: 1, .. })
        ));
    }

    #[test]
    fn validate_catches_unknown_qubits() {
        let mut p = PassProgram::new();
        p.push_ops(QubitRef::Data(4), &[SingleQubitOp::X]);
        assert!(p.validate(3).is_err());
        assert!(p.validate(4).is_ok());
        let mut s = PassProgram::new();
        s.push(Instruction::SetSwitch {
            switch: 3,
            enabled: false,
        });
        assert!(s.validate(3).is_err());
    }

    #[test]
    fn permutation_tracking() {
        let cfg = ChainConfig::new(3).unwrap();
        let mut p = PassProgram::new();
        p.push(Instruction::Sweep(SweepDirection::Ltr));
        let perm = p.wire_permutation(&cfg);
        // d1 rides the fluxon to the far end.
        assert_eq!(perm.as_slice(), &[3, 1, 2]);
        assert!(perm.is_valid());
        p.push(Instruction::Sweep(SweepDirection::Rtl));
        assert!(p.wire_permutation(&cfg).is_identity());

        let mut q = PassProgram::new();
        q.push(Instruction::SetSwitch {
            switch: 1,
            enabled: false,
        });
        q.push(Instruction::Sweep(SweepDirection::Ltr));
        assert_eq!(q.wire_permutation(&cfg).as_slice(), &[1, 3, 2]);
    }
}
