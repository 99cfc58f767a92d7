//! The physical layer: zigzag chain topology, switch biasing and fluxon sweeps.
//!
//! Register layout interleaves data and switch qubits: `d1, s1, d2, s2, …, dN`
//! occupy flat positions `0, 1, 2, 3, …, 2N − 2`. Block `i` is
//! `(s_i; d_i, d_{i+1})`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{block_unitary, Gate};
use crate::rng::SimRng;
use crate::scalar::{Amp, Scalar};
use crate::statevec::{Basis, Measurement, StateVector, MAX_QUBITS};

/// A data (`dK`) or switch (`sK`) qubit, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitRef {
    Data(usize),
    Switch(usize),
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitRef::Data(k) => write!(f, "d{k}"),
            QubitRef::Switch(k) => write!(f, "s{k}"),
        }
    }
}

impl FromStr for QubitRef {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, rest) = s.split_at(s.len().min(1));
        let index: usize = rest
            .parse()
            .map_err(|_| format!("malformed qubit name `{s}`"))?;
        match kind {
            "d" | "D" => Ok(QubitRef::Data(index)),
            "s" | "S" => Ok(QubitRef::Switch(index)),
            _ => Err(format!("malformed qubit name `{s}`")),
        }
    }
}

impl Serialize for QubitRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QubitRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fluxon travel direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepDirection {
    /// Blocks `1, 2, …, N − 1`.
    #[default]
    Ltr,
    /// Blocks `N − 1, …, 1`.
    Rtl,
}

impl SweepDirection {
    pub fn reversed(self) -> Self {
        match self {
            SweepDirection::Ltr => SweepDirection::Rtl,
            SweepDirection::Rtl => SweepDirection::Ltr,
        }
    }

    /// Block indices in visiting order.
    pub fn blocks(self, num_blocks: usize) -> Box<dyn Iterator<Item = usize>> {
        match self {
            SweepDirection::Ltr => Box::new(1..=num_blocks),
            SweepDirection::Rtl => Box::new((1..=num_blocks).rev()),
        }
    }
}

/// Single-qubit preparation states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalState {
    Zero,
    One,
    Plus,
}

impl LocalState {
    pub fn amplitudes<T: Scalar>(self) -> [Amp<T>; 2] {
        let h = T::FRAC_1_SQRT_2();
        match self {
            LocalState::Zero => [Complex::one(), Complex::zero()],
            LocalState::One => [Complex::zero(), Complex::one()],
            LocalState::Plus => [Complex::new(h, T::zero()), Complex::new(h, T::zero())],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    num_data: usize,
    switch_enabled: Vec<bool>,
    /// Data–switch coupling constant (arbitrary energy units); metadata only.
    pub coupling_g: f64,
    /// Reduced Planck constant in the same unit system; metadata only.
    pub hbar: f64,
}

impl ChainConfig {
    /// `num_data` data qubits, all switches resonant, `g = ħ = 1`.
    pub fn new(num_data: usize) -> Result<Self> {
        if num_data < 2 {
            return Err(Error::InvalidConfig(format!(
                "a chain needs at least 2 data qubits, got {num_data}"
            )));
        }
        if 2 * num_data - 1 > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: 2 * num_data - 1,
                cap: MAX_QUBITS,
            });
        }
        Ok(Self {
            num_data,
            switch_enabled: vec![true; num_data - 1],
            coupling_g: 1.0,
            hbar: 1.0,
        })
    }

    pub fn with_coupling(mut self, g: f64) -> Self {
        self.coupling_g = g;
        self
    }

    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn num_switches(&self) -> usize {
        self.num_data - 1
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.num_data - 1
    }

    pub fn switch_enabled(&self) -> &[bool] {
        &self.switch_enabled
    }

    pub fn is_enabled(&self, switch: usize) -> Result<bool> {
        self.check_switch(switch)?;
        Ok(self.switch_enabled[switch - 1])
    }

    pub fn check_switch(&self, switch: usize) -> Result<()> {
        if switch == 0 || switch > self.num_switches() {
            return Err(Error::SwitchOutOfRange {
                index: switch,
                count: self.num_switches(),
            });
        }
        Ok(())
    }

    pub fn check_data(&self, data: usize) -> Result<()> {
        if data == 0 || data > self.num_data {
            return Err(Error::DataOutOfRange {
                index: data,
                count: self.num_data,
            });
        }
        Ok(())
    }

    /// Flat register position of a qubit.
    pub fn position(&self, q: QubitRef) -> Result<usize> {
        match q {
            QubitRef::Data(k) => {
                self.check_data(k)?;
                Ok(2 * (k - 1))
            }
            QubitRef::Switch(k) => {
                self.check_switch(k)?;
                Ok(2 * k - 1)
            }
        }
    }

    /// Role of a flat register position.
    pub fn qubit_at(&self, position: usize) -> Option<QubitRef> {
        if position >= self.num_qubits() {
            None
        } else if position.is_multiple_of(2) {
            Some(QubitRef::Data(position / 2 + 1))
        } else {
            Some(QubitRef::Switch(position / 2 + 1))
        }
    }

    /// Interaction time `ħπ / (g√2)`.
    pub fn t_pi(&self) -> Result<f64> {
        t_pi(self.hbar, self.coupling_g)
    }
}

/// `ħπ / (g√2)`; `g` must be positive.
pub fn t_pi(hbar: f64, g: f64) -> Result<f64> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::InvalidCoupling(g));
    }
    Ok(hbar * std::f64::consts::PI / (g * std::f64::consts::SQRT_2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState<T: Scalar> {
    config: ChainConfig,
    register: StateVector<T>,
    block: Gate<T>,
}

impl<T: Scalar> ChainState<T> {
    /// Fresh chain with every qubit in |0>.
    pub fn new(config: ChainConfig) -> Result<Self> {
        let register = StateVector::new(config.num_qubits(), 0)?;
        Ok(Self {
            config,
            register,
            block: block_unitary(),
        })
    }

    /// Product state with the given local states (missing entries default to |0>).
    pub fn from_product(config: ChainConfig, data: &[LocalState], switches: &[LocalState]) -> Result<Self> {
        if data.len() > config.num_data() || switches.len() > config.num_switches() {
            return Err(Error::InvalidConfig(format!(
                "{} data / {} switch states for a chain of {} data qubits",
                data.len(),
                switches.len(),
                config.num_data()
            )));
        }
        let mut chain = Self::new(config)?;
        for (k, s) in data.iter().enumerate() {
            chain.prepare_qubit(QubitRef::Data(k + 1), s.amplitudes())?;
        }
        for (k, s) in switches.iter().enumerate() {
            chain.prepare_qubit(QubitRef::Switch(k + 1), s.amplitudes())?;
        }
        Ok(chain)
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn register(&self) -> &StateVector<T> {
        &self.register
    }

    pub fn into_register(self) -> StateVector<T> {
        self.register
    }

    /// Replaces the register; sizes must match.
    pub fn set_register(&mut self, register: StateVector<T>) -> Result<()> {
        if register.num_qubits() != self.config.num_qubits() {
            return Err(Error::SizeMismatch(register.num_qubits(), self.config.num_qubits()));
        }
        self.register = register;
        Ok(())
    }

    pub fn set_switch(&mut self, switch: usize, enabled: bool) -> Result<()> {
        self.config.check_switch(switch)?;
        self.config.switch_enabled[switch - 1] = enabled;
        Ok(())
    }

    pub fn set_all_switches(&mut self, enabled: bool) {
        self.config.switch_enabled.iter_mut().for_each(|s| *s = enabled);
    }

    /// Sets an unentangled switch to a fixed local state.
    pub fn prepare_switch(&mut self, switch: usize, state: LocalState) -> Result<()> {
        self.prepare_qubit(QubitRef::Switch(switch), state.amplitudes())
    }

    /// Sets an unentangled qubit to `amps` (normalized here).
    pub fn prepare_qubit(&mut self, q: QubitRef, amps: [Amp<T>; 2]) -> Result<()> {
        let pos = self.config.position(q)?;
        self.register.reset_qubit(pos, amps).map_err(|e| match e {
            Error::Entangled(_) => Error::Entangled(q.to_string()),
            other => other,
        })
    }

    pub fn apply(&mut self, q: QubitRef, gate: &Gate<T>) -> Result<()> {
        let pos = self.config.position(q)?;
        self.register.apply_gate(gate, &[pos])
    }

    /// Tensor-product layer of single-qubit gates, at most one per qubit.
    pub fn apply_single_layer<'a, I>(&mut self, layer: I) -> Result<()>
    where
        I: IntoIterator<Item = (QubitRef, &'a Gate<T>)>,
    {
        let mut seen = Vec::new();
        for (q, gate) in layer {
            let pos = self.config.position(q)?;
            if seen.contains(&pos) {
                return Err(Error::DuplicateTarget(pos));
            }
            seen.push(pos);
            self.register.apply_gate(gate, &[pos])?;
        }
        Ok(())
    }

    /// Applies the block unitary to every enabled block in visiting order.
    pub fn fluxon_sweep(&mut self, direction: SweepDirection) -> Result<()> {
        for i in direction.blocks(self.config.num_switches()) {
            if !self.config.switch_enabled[i - 1] {
                continue;
            }
            let s = 2 * i - 1;
            self.register.apply_gate(&self.block, &[s, s - 1, s + 1])?;
        }
        Ok(())
    }

    pub fn measure(&mut self, q: QubitRef, basis: Basis, rng: &mut SimRng) -> Result<Measurement<T>> {
        let pos = self.config.position(q)?;
        self.register.measure(pos, basis, rng)
    }

    /// X-basis switch readout.
    pub fn measure_switch(&mut self, switch: usize, rng: &mut SimRng) -> Result<Measurement<T>> {
        self.measure(QubitRef::Switch(switch), Basis::X, rng)
    }

    /// Probability that switch `switch` reads |0>.
    pub fn switch_zero_probability(&self, switch: usize) -> Result<T> {
        let pos = self.config.position(QubitRef::Switch(switch))?;
        self.register.probability(pos, 0)
    }

    pub fn reduced_density(&self, q: QubitRef) -> Result<[Amp<T>; 4]> {
        self.register.reduced_density(self.config.position(q)?)
    }

    pub fn t_pi(&self) -> Result<f64> {
        self.config.t_pi()
    }
}
