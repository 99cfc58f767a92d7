//! Three-qubit phase-flip code on a logical block of two adjacent basic blocks.
//!
//! Logical states are `amp0·|+++⟩ + amp1·|−−−⟩` on `d_i, d_{i+1}, d_{i+2}`.
//! The syndrome is read by interference: the data are rotated back to the
//! computational basis, both switches of the block are put in |+⟩ and one
//! fluxon pass entangles each switch with the parity of its data pair. The
//! odd-parity branch of the block unitary exchanges the two data wires, so
//! the correction for each syndrome is a Pauli word found by simulation
//! rather than a bare flip of the decoded qubit.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::chain::{ChainConfig, ChainState, QubitRef, SweepDirection};
use crate::compiler::{compile_fanout_range, Instruction, Layer, PassProgram, PrepState, SingleQubitOp};
use crate::error::{Error, Result};
use crate::gates::{pauli, Axis};
use crate::rng::SimRng;
use crate::statevec::{Outcome, StateVector};

/// Syndrome readouts must be this certain.
pub const DETERMINISM_TOL: f64 = 1e-10;
/// A cycle with logical fidelity below `1 − FAILURE_TOL` is a logical failure.
pub const FAILURE_TOL: f64 = 1e-6;
const RECOVERY_TOL: f64 = 1e-9;
const Z_95: f64 = 1.959_963_984_540_054;

/// Logical qubit `i`: data `d_i, d_{i+1}, d_{i+2}` and switches `s_i, s_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LogicalBlock {
    index: usize,
    num_data: usize,
}

impl LogicalBlock {
    pub fn new(num_data: usize, index: usize) -> Result<Self> {
        ChainConfig::new(num_data)?;
        if index == 0 || index + 2 > num_data {
            return Err(Error::BlockOutOfRange { index, num_data });
        }
        Ok(Self { index, num_data })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn data(&self) -> [usize; 3] {
        [self.index, self.index + 1, self.index + 2]
    }

    pub fn switches(&self) -> [usize; 2] {
        [self.index, self.index + 1]
    }

    pub fn config(&self) -> ChainConfig {
        ChainConfig::new(self.num_data).expect("checked in LogicalBlock::new")
    }

    /// Offset of data qubit `d_k` within the block.
    pub fn offset_of(&self, data: usize) -> Result<usize> {
        if (self.index..=self.index + 2).contains(&data) {
            Ok(data - self.index)
        } else {
            Err(Error::OutsideBlock(QubitRef::Data(data).to_string()))
        }
    }

    fn check_state(&self, state: &ChainState<f64>) -> Result<()> {
        if state.config().num_data() != self.num_data {
            return Err(Error::SizeMismatch(
                state.config().num_qubits(),
                self.config().num_qubits(),
            ));
        }
        Ok(())
    }

    fn data_layer(&self, op: SingleQubitOp) -> Layer {
        self.data().iter().map(|&k| (QubitRef::Data(k), vec![op])).collect()
    }
}

/// `(s_i, s_{i+1})` X-basis readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    first: bool,
    second: bool,
}

impl Syndrome {
    pub const ALL: [Syndrome; 4] = [
        Syndrome::from_signs(false, false),
        Syndrome::from_signs(true, true),
        Syndrome::from_signs(true, false),
        Syndrome::from_signs(false, true),
    ];

    /// `true` stands for `+`.
    pub const fn from_signs(first_plus: bool, second_plus: bool) -> Self {
        Self {
            first: first_plus,
            second: second_plus,
        }
    }

    pub fn new(first: Outcome, second: Outcome) -> Result<Self> {
        let sign = |o: Outcome| match o {
            Outcome::Plus => Ok(true),
            Outcome::Minus => Ok(false),
            other => Err(Error::InvalidSyndrome(other.symbol().to_string())),
        };
        Ok(Self::from_signs(sign(first)?, sign(second)?))
    }

    pub fn outcomes(&self) -> [Outcome; 2] {
        let o = |plus| if plus { Outcome::Plus } else { Outcome::Minus };
        [o(self.first), o(self.second)]
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.outcomes();
        write!(f, "({},{})", a.symbol(), b.symbol())
    }
}

impl Serialize for Syndrome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Error hypothesis relative to a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorCase {
    NoError,
    /// Flip of `d_{i+offset}`.
    Flip(usize),
}

impl ErrorCase {
    pub const ALL: [ErrorCase; 4] = [
        ErrorCase::NoError,
        ErrorCase::Flip(0),
        ErrorCase::Flip(1),
        ErrorCase::Flip(2),
    ];

    /// The flipped qubit on a concrete block.
    pub fn location(&self, block: &LogicalBlock) -> Option<QubitRef> {
        match *self {
            ErrorCase::NoError => None,
            ErrorCase::Flip(o) => Some(QubitRef::Data(block.index + o)),
        }
    }
}

impl fmt::Display for ErrorCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorCase::NoError => f.write_str("none"),
            ErrorCase::Flip(0) => f.write_str("d_i"),
            ErrorCase::Flip(o) => write!(f, "d_i+{o}"),
        }
    }
}

impl Serialize for ErrorCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Independent σ_z flips with probability `p` per data qubit per cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorModel {
    p: f64,
}

impl ErrorModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Program: data `d_i` fanned out over the block, then an H layer.
pub fn encoding_program(block: &LogicalBlock) -> Result<PassProgram> {
    let i = block.index;
    let mut program = compile_fanout_range(block.num_data, i, i + 2)?;
    program.push_layer(block.data_layer(SingleQubitOp::H));
    Ok(program)
}

fn check_normalized(amp0: Complex64, amp1: Complex64) -> Result<()> {
    let n = amp0.norm_sqr() + amp1.norm_sqr();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(n));
    }
    Ok(())
}

/// Encodes `amp0·|+++⟩ + amp1·|−−−⟩` by one fluxon pass on a fresh chain.
pub fn encode(block: &LogicalBlock, amp0: Complex64, amp1: Complex64) -> Result<ChainState<f64>> {
    check_normalized(amp0, amp1)?;
    let mut chain = ChainState::new(block.config())?;
    chain.prepare_qubit(QubitRef::Data(block.index), [amp0, amp1])?;
    encoding_program(block)?.execute(&mut chain, &mut SimRng::new(0))?;
    Ok(chain)
}

/// Register holding `amp0·|a⟩ + amp1·|b⟩` on the block, all else |0⟩, where
/// the block amplitude of data pattern `x` is `f(x)`.
fn block_state(block: &LogicalBlock, f: impl Fn(usize) -> Complex64) -> StateVector<f64> {
    let cfg = block.config();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << cfg.num_qubits()];
    for x in 0..8usize {
        let index: usize = (0..3)
            .filter(|o| (x >> (2 - o)) & 1 == 1)
            .map(|o| 1usize << (2 * (block.index + o - 1)))
            .sum();
        amps[index] = f(x);
    }
    StateVector::from_amplitudes(amps).expect("normalized by construction")
}

/// Dense `amp0·|+++⟩ + amp1·|−−−⟩` reference.
pub fn encoded_reference(block: &LogicalBlock, amp0: Complex64, amp1: Complex64) -> Result<StateVector<f64>> {
    check_normalized(amp0, amp1)?;
    let s = 1.0 / 8f64.sqrt();
    Ok(block_state(block, |x| {
        let sign = if x.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        (amp0 + amp1 * sign) * s
    }))
}

/// Dense `amp0·|000⟩ + amp1·|111⟩` reference.
pub fn ghz_reference(block: &LogicalBlock, amp0: Complex64, amp1: Complex64) -> Result<StateVector<f64>> {
    check_normalized(amp0, amp1)?;
    Ok(block_state(block, |x| match x {
        0 => amp0,
        7 => amp1,
        _ => Complex64::new(0.0, 0.0),
    }))
}

/// Fidelity of the chain register against the encoded reference.
pub fn logical_fidelity(state: &ChainState<f64>, block: &LogicalBlock, amp0: Complex64, amp1: Complex64) -> Result<f64> {
    block.check_state(state)?;
    state.register().fidelity(&encoded_reference(block, amp0, amp1)?)
}

/// Applies σ_z to each listed data qubit; returns the sorted, deduplicated set.
pub fn inject(state: &mut ChainState<f64>, block: &LogicalBlock, locations: &[usize]) -> Result<Vec<usize>> {
    block.check_state(state)?;
    for &k in locations {
        block.offset_of(k)?;
    }
    let mut flips = locations.to_vec();
    flips.sort_unstable();
    flips.dedup();
    let z = pauli(Axis::Z);
    for &k in &flips {
        state.apply(QubitRef::Data(k), &z)?;
    }
    Ok(flips)
}

/// Draws an independent flip per block data qubit, in order `d_i, d_{i+1}, d_{i+2}`.
pub fn inject_model(
    state: &mut ChainState<f64>,
    block: &LogicalBlock,
    model: &ErrorModel,
    rng: &mut SimRng,
) -> Result<Vec<usize>> {
    let flips: Vec<usize> = block
        .data()
        .into_iter()
        .filter(|_| rng.bernoulli(model.p))
        .collect();
    inject(state, block, &flips)
}

/// H on the block data, both block switches to |+⟩ and only they enabled,
/// one pass, X-basis readout of both, switches back to |0⟩ and every
/// switch re-enabled.
pub fn extraction_program(block: &LogicalBlock, direction: SweepDirection) -> PassProgram {
    let [sa, sb] = block.switches();
    let mut p = PassProgram::new();
    p.push_layer(block.data_layer(SingleQubitOp::H));
    for s in [sa, sb] {
        p.push(Instruction::PrepareSwitch {
            switch: s,
            state: PrepState::Plus,
        });
    }
    for s in 1..block.num_data {
        p.push(Instruction::SetSwitch {
            switch: s,
            enabled: s == sa || s == sb,
        });
    }
    p.push(Instruction::Sweep(direction));
    for s in [sa, sb] {
        p.push(Instruction::MeasureSwitch(s));
    }
    for s in [sa, sb] {
        p.push(Instruction::PrepareSwitch {
            switch: s,
            state: PrepState::Zero,
        });
    }
    for s in 1..block.num_data {
        p.push(Instruction::SetSwitch {
            switch: s,
            enabled: true,
        });
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyndromeReadout {
    pub syndrome: Syndrome,
    /// Born probability of each observed outcome.
    pub probabilities: [f64; 2],
}

impl SyndromeReadout {
    pub fn is_deterministic(&self) -> bool {
        self.probabilities.iter().all(|&p| p >= 1.0 - DETERMINISM_TOL)
    }
}

pub fn extract_syndrome(
    state: &mut ChainState<f64>,
    block: &LogicalBlock,
    direction: SweepDirection,
    rng: &mut SimRng,
) -> Result<SyndromeReadout> {
    block.check_state(state)?;
    let readouts = extraction_program(block, direction).execute(state, rng)?;
    let [a, b] = [&readouts[0], &readouts[1]];
    Ok(SyndromeReadout {
        syndrome: Syndrome::new(a.outcome, b.outcome)?,
        probabilities: [a.probability, b.probability],
    })
}

/// A Pauli correction on the three block data qubits; `Y` is written `X` then `Z`.
pub type RecoveryWord = [Vec<SingleQubitOp>; 3];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodingEntry {
    pub syndrome: Syndrome,
    pub case: ErrorCase,
    pub recovery: RecoveryWord,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub syndrome: Syndrome,
    pub derived: ErrorCase,
    pub reference: ErrorCase,
    pub agrees: bool,
}

/// The hand-written lookup table this code is usually quoted with:
/// `(+,+) → d_i+2`, `(+,−) → d_i+1`, `(−,+) → d_i`, `(−,−) → none`.
pub fn reference_table() -> [(Syndrome, ErrorCase); 4] {
    [
        (Syndrome::from_signs(false, false), ErrorCase::NoError),
        (Syndrome::from_signs(true, true), ErrorCase::Flip(2)),
        (Syndrome::from_signs(true, false), ErrorCase::Flip(1)),
        (Syndrome::from_signs(false, true), ErrorCase::Flip(0)),
    ]
}

/// Syndrome → error case → recovery, derived by simulating each case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodingTable {
    pub direction: SweepDirection,
    pub entries: [DecodingEntry; 4],
}

fn probes() -> [(Complex64, Complex64); 2] {
    [
        (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)),
        failure_probe(),
    ]
}

/// Generic logical input: neither X_L nor Z_L leaves it invariant up to phase.
pub fn failure_probe() -> (Complex64, Complex64) {
    (
        Complex64::new(0.5f64.cos(), 0.0),
        Complex64::from_polar(0.5f64.sin(), 0.7),
    )
}

fn pauli_words() -> Vec<RecoveryWord> {
    use SingleQubitOp::{X, Z};
    let letters: [Vec<SingleQubitOp>; 4] = [vec![], vec![X], vec![Z], vec![X, Z]];
    let mut words: Vec<RecoveryWord> = Vec::with_capacity(64);
    for a in &letters {
        for b in &letters {
            for c in &letters {
                words.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    words.sort_by_key(|w| w.iter().map(Vec::len).sum::<usize>());
    words
}

fn apply_word(state: &mut ChainState<f64>, block: &LogicalBlock, word: &RecoveryWord) -> Result<()> {
    for (k, ops) in block.data().iter().zip(word) {
        for op in ops {
            state.apply(QubitRef::Data(*k), &op.gate())?;
        }
    }
    Ok(())
}

impl DecodingTable {
    /// Simulates no error and each single flip on a 3-data chain, from two
    /// generic logical inputs, and solves for the correction of each outcome.
    pub fn derive(direction: SweepDirection) -> Result<Self> {
        let block = LogicalBlock::new(3, 1)?;
        let words = pauli_words();
        let mut entries = Vec::with_capacity(4);
        for case in ErrorCase::ALL {
            let mut syndrome = None;
            let mut post = Vec::new();
            for (amp0, amp1) in probes() {
                let mut state = encode(&block, amp0, amp1)?;
                if let Some(loc) = case.location(&block) {
                    let QubitRef::Data(k) = loc else { unreachable!() };
                    inject(&mut state, &block, &[k])?;
                }
                let r = extract_syndrome(&mut state, &block, direction, &mut SimRng::new(0))?;
                if !r.is_deterministic() {
                    return Err(Error::NondeterministicSyndrome(format!(
                        "case {case}: outcome probabilities {:?}",
                        r.probabilities
                    )));
                }
                if syndrome.is_some_and(|s| s != r.syndrome) {
                    return Err(Error::NondeterministicSyndrome(format!(
                        "case {case}: syndrome depends on the logical input"
                    )));
                }
                syndrome = Some(r.syndrome);
                post.push((state, ghz_reference(&block, amp0, amp1)?));
            }
            let recovery = words
                .iter()
                .find(|w| {
                    post.iter().all(|(state, target)| {
                        let mut s = state.clone();
                        apply_word(&mut s, &block, w).is_ok()
                            && s.register().fidelity(target).unwrap_or(0.0) >= 1.0 - RECOVERY_TOL
                    })
                })
                .cloned()
                .ok_or_else(|| {
                    let dump: Vec<String> = post[0]
                        .0
                        .register()
                        .amplitudes()
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| a.norm() > 1e-12)
                        .map(|(i, a)| format!("{i:05b}: {a}"))
                        .collect();
                    Error::NoRecoveryWord(format!("case {case}, state [{}]", dump.join(", ")))
                })?;
            let syndrome = syndrome.expect("at least one probe");
            if let Some(prev) = entries.iter().find(|e: &&DecodingEntry| e.syndrome == syndrome) {
                return Err(Error::SyndromeCollision(prev.case.to_string(), case.to_string()));
            }
            entries.push(DecodingEntry {
                syndrome,
                case,
                recovery,
            });
        }
        Ok(Self {
            direction,
            entries: entries.try_into().expect("four cases"),
        })
    }

    /// Cached [`DecodingTable::derive`].
    pub fn derived(direction: SweepDirection) -> Result<&'static Self> {
        static LTR: OnceLock<Result<DecodingTable>> = OnceLock::new();
        static RTL: OnceLock<Result<DecodingTable>> = OnceLock::new();
        let cell = match direction {
            SweepDirection::Ltr => &LTR,
            SweepDirection::Rtl => &RTL,
        };
        cell.get_or_init(|| Self::derive(direction))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Four distinct syndromes over four values: every syndrome has an entry.
    pub fn entry(&self, syndrome: Syndrome) -> &DecodingEntry {
        self.entries
            .iter()
            .find(|e| e.syndrome == syndrome)
            .expect("derived table covers every syndrome")
    }

    pub fn decode(&self, syndrome: Syndrome) -> ErrorCase {
        self.entry(syndrome).case
    }

    /// Derived and reference cases, one row per syndrome.
    pub fn compare_reference(&self) -> Vec<TableRow> {
        reference_table()
            .into_iter()
            .map(|(syndrome, reference)| {
                let derived = self.decode(syndrome);
                TableRow {
                    syndrome,
                    derived,
                    reference,
                    agrees: derived == reference,
                }
            })
            .collect()
    }
}

/// Applies the syndrome's correction word, then the H layer that returns the
/// block to the ± encoding.
pub fn recover<'t>(
    state: &mut ChainState<f64>,
    syndrome: Syndrome,
    block: &LogicalBlock,
    table: &'t DecodingTable,
) -> Result<&'t DecodingEntry> {
    block.check_state(state)?;
    let entry = table.entry(syndrome);
    apply_word(state, block, &entry.recovery)?;
    let h = SingleQubitOp::H.gate();
    for k in block.data() {
        state.apply(QubitRef::Data(k), &h)?;
    }
    Ok(entry)
}

/// Where a cycle's errors come from.
#[derive(Debug, Clone, PartialEq)]
pub enum ErrorSource {
    Locations(Vec<usize>),
    Model(ErrorModel),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QecReport {
    pub block: usize,
    pub direction: SweepDirection,
    pub injected: Vec<QubitRef>,
    pub syndrome: Syndrome,
    pub syndrome_probabilities: [f64; 2],
    pub decoded: ErrorCase,
    pub decoded_location: Option<QubitRef>,
    /// `"<qubit> <op>"` in application order.
    pub recovery: Vec<String>,
    pub fidelity_before: f64,
    pub fidelity_after: f64,
    pub seed: u64,
    pub stream: u64,
}

impl QecReport {
    pub fn logical_failure(&self) -> bool {
        self.fidelity_after < 1.0 - FAILURE_TOL
    }
}

/// One encode → inject → extract → decode → recover cycle.
pub fn qec_cycle(
    block: &LogicalBlock,
    amp0: Complex64,
    amp1: Complex64,
    errors: &ErrorSource,
    direction: SweepDirection,
    rng: &mut SimRng,
) -> Result<QecReport> {
    let encoded = encode(block, amp0, amp1)?;
    let reference = encoded_reference(block, amp0, amp1)?;
    run_cycle(encoded, &reference, block, errors, direction, rng)
}

fn run_cycle(
    mut state: ChainState<f64>,
    reference: &StateVector<f64>,
    block: &LogicalBlock,
    errors: &ErrorSource,
    direction: SweepDirection,
    rng: &mut SimRng,
) -> Result<QecReport> {
    let table = DecodingTable::derived(direction)?;
    let (seed, stream) = (rng.seed(), rng.stream());
    let flips = match errors {
        ErrorSource::Locations(locs) => inject(&mut state, block, locs)?,
        ErrorSource::Model(model) => inject_model(&mut state, block, model, rng)?,
    };
    let fidelity_before = state.register().fidelity(reference)?;
    let readout = extract_syndrome(&mut state, block, direction, rng)?;
    let entry = recover(&mut state, readout.syndrome, block, table)?;
    let mut recovery = Vec::new();
    for (k, ops) in block.data().iter().zip(&entry.recovery) {
        recovery.extend(ops.iter().map(|op| format!("d{k} {op}")));
    }
    recovery.extend(block.data().iter().map(|k| format!("d{k} H")));
    Ok(QecReport {
        block: block.index,
        direction,
        injected: flips.into_iter().map(QubitRef::Data).collect(),
        syndrome: readout.syndrome,
        syndrome_probabilities: readout.probabilities,
        decoded: entry.case,
        decoded_location: entry.case.location(block),
        recovery,
        fidelity_before,
        fidelity_after: state.register().fidelity(reference)?,
        seed,
        stream,
    })
}

/// `3p² − 2p³`: probability of two or more flips among three.
pub fn analytic_failure_rate(p: f64) -> f64 {
    3.0 * p * p - 2.0 * p * p * p
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z_95 / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if failures == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if failures == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogicalErrorEstimate {
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Monte Carlo logical failure rate of the code on a 3-data chain with LTR
/// extraction. Trial `t` draws from stream `t` of `seed`, so the result does
/// not depend on how trials are scheduled.
pub fn logical_error_rate(p: f64, trials: u64, seed: u64) -> Result<LogicalErrorEstimate> {
    let model = ErrorModel::new(p)?;
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let block = LogicalBlock::new(3, 1)?;
    let direction = SweepDirection::Ltr;
    DecodingTable::derived(direction)?;
    let (amp0, amp1) = failure_probe();
    let encoded = encode(&block, amp0, amp1)?;
    let reference = encoded_reference(&block, amp0, amp1)?;
    let errors = ErrorSource::Model(model);
    let failures = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = SimRng::with_stream(seed, t);
            run_cycle(encoded.clone(), &reference, &block, &errors, direction, &mut rng)
                .map(|r| u64::from(r.logical_failure()))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let (ci_low, ci_high) = wilson_interval(failures, trials);
    Ok(LogicalErrorEstimate {
        p,
        trials,
        failures,
        estimate: failures as f64 / trials as f64,
        ci_low,
        ci_high,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::hadamard;

    fn block3() -> LogicalBlock {
        LogicalBlock::new(3, 1).unwrap()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    #[test]
    fn block_bounds() {
        assert!(LogicalBlock::new(3, 1).is_ok());
        assert!(matches!(LogicalBlock::new(3, 2), Err(Error::BlockOutOfRange { .. })));
        assert!(LogicalBlock::new(5, 0).is_err());
        let b = LogicalBlock::new(5, 3).unwrap();
        assert_eq!(b.data(), [3, 4, 5]);
        assert_eq!(b.switches(), [3, 4]);
        assert!(b.offset_of(2).is_err());
    }

    #[test]
    fn logical_basis_states() {
        let b = block3();
        let plus = encode(&b, one(), zero()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut want = ChainState::<f64>::new(b.config()).unwrap();
        for k in 1..=3 {
            want.prepare_qubit(QubitRef::Data(k), [Complex64::new(h, 0.0), Complex64::new(h, 0.0)])
                .unwrap();
        }
        assert!(plus.register().fidelity(want.register()).unwrap() > 1.0 - 1e-12);
        let minus = encode(&b, zero(), one()).unwrap();
        for k in 1..=3 {
            want.prepare_qubit(QubitRef::Data(k), [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)])
                .unwrap();
        }
        assert!(minus.register().fidelity(want.register()).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn encode_rejects_unnormalized() {
        assert!(matches!(encode(&block3(), one(), one()), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn flip_turns_plus_into_minus() {
        let b = block3();
        let mut s = encode(&b, one(), zero()).unwrap();
        inject(&mut s, &b, &[1]).unwrap();
        let rho = s.reduced_density(QubitRef::Data(1)).unwrap();
        // |−⟩⟨−| has off-diagonal −½.
        assert!((rho[1] - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
        assert!(matches!(inject(&mut s, &b, &[4]), Err(Error::OutsideBlock(_))));
    }

    #[test]
    fn model_extremes() {
        let b = block3();
        let mut rng = SimRng::new(3);
        let mut s = encode(&b, one(), zero()).unwrap();
        for _ in 0..20 {
            assert!(inject_model(&mut s, &b, &ErrorModel::new(0.0).unwrap(), &mut rng)
                .unwrap()
                .is_empty());
            assert_eq!(
                inject_model(&mut s, &b, &ErrorModel::new(1.0).unwrap(), &mut rng).unwrap(),
                vec![1, 2, 3]
            );
        }
        assert!(ErrorModel::new(1.5).is_err());
    }

    #[test]
    fn no_error_syndrome_is_minus_minus() {
        let table = DecodingTable::derived(SweepDirection::Ltr).unwrap();
        assert_eq!(table.decode(Syndrome::from_signs(false, false)), ErrorCase::NoError);
        let rows = table.compare_reference();
        assert!(rows.iter().any(|r| r.reference == ErrorCase::NoError && r.agrees));
    }

    #[test]
    fn derived_ltr_table() {
        let t = DecodingTable::derived(SweepDirection::Ltr).unwrap();
        assert_eq!(t.decode(Syndrome::from_signs(true, true)), ErrorCase::Flip(0));
        assert_eq!(t.decode(Syndrome::from_signs(true, false)), ErrorCase::Flip(1));
        assert_eq!(t.decode(Syndrome::from_signs(false, true)), ErrorCase::Flip(2));
    }

    #[test]
    fn rtl_table_is_derivable() {
        let t = DecodingTable::derived(SweepDirection::Rtl).unwrap();
        let mut seen: Vec<_> = t.entries.iter().map(|e| e.syndrome).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn single_flip_cycles_restore_on_a_longer_chain() {
        let b = LogicalBlock::new(5, 2).unwrap();
        let (a0, a1) = (Complex64::new(0.0, 0.6), Complex64::new(-0.8, 0.0));
        for errs in [vec![], vec![2], vec![3], vec![4]] {
            let r = qec_cycle(
                &b,
                a0,
                a1,
                &ErrorSource::Locations(errs.clone()),
                SweepDirection::Ltr,
                &mut SimRng::new(1),
            )
            .unwrap();
            assert!(r.fidelity_after > 1.0 - 1e-9, "{errs:?}: {r:?}");
        }
    }

    #[test]
    fn two_flips_are_logical_errors() {
        let b = block3();
        let (a0, a1) = failure_probe();
        for errs in [vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]] {
            let r = qec_cycle(&b, a0, a1, &ErrorSource::Locations(errs), SweepDirection::Ltr, &mut SimRng::new(0))
                .unwrap();
            assert!(r.logical_failure());
        }
    }

    #[test]
    fn phase_flip_is_bit_flip_in_hadamard_frame() {
        let h = hadamard::<f64>().into_matrix();
        let z = pauli::<f64>(Axis::Z).into_matrix();
        let x = pauli::<f64>(Axis::X).into_matrix();
        assert!(h.mul(&z).unwrap().mul(&h).unwrap().distance(&x) < 1e-15);
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
    }

    #[test]
    fn error_rate_edges() {
        assert_eq!(logical_error_rate(0.0, 200, 1).unwrap().estimate, 0.0);
        assert_eq!(logical_error_rate(1.0, 200, 1).unwrap().estimate, 1.0);
        assert!(matches!(logical_error_rate(0.1, 0, 1), Err(Error::NoTrials)));
        assert_eq!(logical_error_rate(0.2, 500, 9).unwrap(), logical_error_rate(0.2, 500, 9).unwrap());
    }
}
