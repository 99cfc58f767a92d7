//! Executes `.fknit` scripts on the chain simulator.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::chain::{ChainState, QubitRef};
use crate::compiler::compile_controlled_v;
use crate::error::Error;
use crate::rng::SimRng;
use crate::script::{Directive, Script, SwitchAction};
use crate::statevec::{Basis, Outcome};

pub const FORMAT_VERSION: u32 = 1;

const DECOUPLED_TOL: f64 = 1e-10;

/// A runtime failure and the script line that triggered it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {source}")]
pub struct RunError {
    pub line: usize,
    #[source]
    pub source: Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Include the final register amplitudes.
    pub final_amplitudes: bool,
    /// Include wall-clock time; output is then no longer reproducible.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub line: usize,
    pub qubit: QubitRef,
    pub basis: Basis,
    pub outcome: Outcome,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DumpRecord {
    pub line: usize,
    pub norm: f64,
    /// `[re, im]` per basis state; register position 0 is the low bit.
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub format: u32,
    pub seed: u64,
    pub num_data: usize,
    pub coupling_g: f64,
    pub hbar: f64,
    pub t_pi: f64,
    pub measurements: Vec<MeasurementRecord>,
    pub dumps: Vec<DumpRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn amplitudes(chain: &ChainState<f64>) -> Vec<[f64; 2]> {
    chain.register().amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

fn step(chain: &mut ChainState<f64>, script: &Script, d: &Directive, rng: &mut SimRng) -> Result<Option<MeasurementRecord>, Error> {
    match d {
        Directive::Chain { .. } | Directive::Dump => {}
        Directive::Prep { data, amps } => chain.prepare_qubit(QubitRef::Data(*data), *amps)?,
        Directive::Sq { target, op } => {
            let g = op.gate();
            for q in script.expand(*target) {
                chain.apply(q, &g)?;
            }
        }
        Directive::Switch { switch, action } => match action {
            SwitchAction::Enable(on) => chain.set_switch(*switch, *on)?,
            SwitchAction::Prepare(state) => chain.prepare_switch(*switch, (*state).into())?,
        },
        Directive::Sweep(dir) => chain.fluxon_sweep(*dir)?,
        Directive::Cv {
            control,
            target,
            angles,
        } => {
            let n = script.num_data();
            for s in 1..n {
                let p0 = chain.switch_zero_probability(s)?;
                if p0 < 1.0 - DECOUPLED_TOL {
                    return Err(Error::SwitchNotDecoupled { switch: s, p0 });
                }
            }
            let program = compile_controlled_v(n, *control, *target, &angles.to_matrix())?;
            let saved = chain.config().switch_enabled().to_vec();
            chain.set_all_switches(true);
            program.execute(chain, rng)?;
            for (i, on) in saved.into_iter().enumerate() {
                chain.set_switch(i + 1, on)?;
            }
        }
        Directive::Measure { qubit, basis } => {
            let m = chain.measure(*qubit, *basis, rng)?;
            return Ok(Some(MeasurementRecord {
                line: 0,
                qubit: *qubit,
                basis: *basis,
                outcome: m.outcome,
                probability: m.probability.clamp(0.0, 1.0),
            }));
        }
    }
    Ok(None)
}

/// Runs `script` with a fresh chain in |0…0⟩; deterministic for a fixed seed.
pub fn run(script: &Script, options: RunOptions) -> Result<RunResult, RunError> {
    let start = Instant::now();
    let config = script.config();
    let first_line = script.lines()[0].line;
    let at = |line| move |source| RunError { line, source };
    let t_pi = config.t_pi().map_err(at(first_line))?;
    let (coupling_g, hbar) = (config.coupling_g, config.hbar);
    let mut chain = ChainState::new(config).map_err(at(first_line))?;
    let mut rng = SimRng::new(options.seed);
    let mut measurements = Vec::new();
    let mut dumps = Vec::new();
    for l in script.lines() {
        if let Some(mut m) = step(&mut chain, script, &l.directive, &mut rng).map_err(at(l.line))? {
            m.line = l.line;
            measurements.push(m);
        }
        if l.directive == Directive::Dump {
            dumps.push(DumpRecord {
                line: l.line,
                norm: chain.register().norm_sqr().sqrt(),
                amplitudes: amplitudes(&chain),
            });
        }
    }
    Ok(RunResult {
        format: FORMAT_VERSION,
        seed: options.seed,
        num_data: script.num_data(),
        coupling_g,
        hbar,
        t_pi,
        measurements,
        dumps,
        final_amplitudes: options.final_amplitudes.then(|| amplitudes(&chain)),
        wall_time_s: options.timing.then(|| start.elapsed().as_secs_f64()),
    })
}
