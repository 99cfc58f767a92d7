//! Synthesis of fan-out, assigned-control and controlled-V sweep programs.
//!
//! Every JPS pass moves the fluxon's "carried" data wire one block along
//! the chain, so a dressed sweep over blocks `lo..hi` is a cascade of CNS
//! gates that walks the control qubit from one end of the range to the
//! other while XOR-ing it into every qubit it passes. Conditional layers are
//! addressed through a [`WirePermutation`] to wherever the logical target
//! currently sits.

use crate::chain::{ChainConfig, QubitRef, SweepDirection};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

use super::dressing::{cns_dressing, CnsDressing};
use super::euler::{abc_words, zyz_decompose};
use super::program::{Instruction, Layer, PassProgram, WirePermutation};

struct Builder<'a> {
    program: PassProgram,
    enabled: Vec<bool>,
    perm: WirePermutation,
    dressing: &'a CnsDressing,
}

impl<'a> Builder<'a> {
    fn new(num_data: usize, dressing: &'a CnsDressing) -> Self {
        Self {
            program: PassProgram::new(),
            enabled: vec![true; num_data - 1],
            perm: WirePermutation::identity(num_data),
            dressing,
        }
    }

    fn set_switches(&mut self, want: impl Fn(usize) -> bool) {
        for s in 1..=self.enabled.len() {
            let on = want(s);
            if self.enabled[s - 1] != on {
                self.enabled[s - 1] = on;
                self.program.push(Instruction::SetSwitch {
                    switch: s,
                    enabled: on,
                });
            }
        }
    }

    /// Walks the control from data position `start` to `end`.
    fn cascade(&mut self, start: usize, end: usize, restrict: bool) {
        let (lo, hi) = (start.min(end), start.max(end));
        if restrict {
            self.set_switches(|s| (lo..hi).contains(&s));
        }
        let dir = if start < end {
            SweepDirection::Ltr
        } else {
            SweepDirection::Rtl
        };
        let [q_first, q_second] = &self.dressing.pre;
        let [p_first, p_second] = &self.dressing.post;
        let mut pre = Layer::new();
        let mut post = Layer::new();
        for k in lo..=hi {
            let q = QubitRef::Data(k);
            pre.insert(q, if k == start { q_first } else { q_second }.clone());
            post.insert(q, if k == end { p_second } else { p_first }.clone());
        }
        self.program.push_layer(pre);
        self.program.push(Instruction::Sweep(dir));
        self.perm.apply_sweep(dir, &self.enabled);
        self.program.push_layer(post);
    }

    fn finish(mut self) -> (PassProgram, WirePermutation) {
        self.set_switches(|_| true);
        (self.program, self.perm)
    }
}

/// One LTR fan-out sweep over the whole chain: `CNS(1,2); CNS(2,3); …`.
pub fn compile_fanout(num_data: usize) -> Result<PassProgram> {
    ChainConfig::new(num_data)?;
    let mut b = Builder::new(num_data, cns_dressing()?);
    b.cascade(1, num_data, false);
    Ok(b.program)
}

/// Fan-out restricted to data qubits `first..=last`; switches outside the
/// range are biased off for the pass and re-enabled afterwards.
pub fn compile_fanout_range(num_data: usize, first: usize, last: usize) -> Result<PassProgram> {
    let cfg = ChainConfig::new(num_data)?;
    cfg.check_data(first)?;
    cfg.check_data(last)?;
    if first >= last {
        return Err(Error::InvalidConfig(format!("empty fan-out range d{first}..d{last}")));
    }
    let mut b = Builder::new(num_data, cns_dressing()?);
    b.cascade(first, last, true);
    Ok(b.finish().0)
}

/// Final placement of logical data qubits after [`compile_fanout`].
pub fn fanout_permutation(num_data: usize) -> Result<WirePermutation> {
    Ok(compile_fanout(num_data)?.wire_permutation(&ChainConfig::new(num_data)?))
}

/// Round-trip program applying `v` to `target` iff `control` is |1>.
///
/// `C` on the target, a dressed pass carrying the control to the target's
/// end of the range, `B` on the displaced target, the return pass, then `A`
/// on the target and `diag(1, e^{iδ})` on the control.
pub fn compile_controlled_v(
    num_data: usize,
    control: usize,
    target: usize,
    v: &Matrix<f64>,
) -> Result<PassProgram> {
    let cfg = ChainConfig::new(num_data)?;
    cfg.check_data(control)?;
    cfg.check_data(target)?;
    if control == target {
        return Err(Error::ControlIsTarget(control));
    }
    let words = abc_words(&zyz_decompose(v)?);
    let mut b = Builder::new(num_data, cns_dressing()?);

    b.program.push_ops(QubitRef::Data(target), &words.c);
    b.cascade(control, target, true);
    let displaced = b.perm.position_of(target);
    b.program.push_ops(QubitRef::Data(displaced), &words.b);
    let carried = b.perm.position_of(control);
    b.cascade(carried, control, true);
    b.program.push_ops(QubitRef::Data(b.perm.position_of(target)), &words.a);
    b.program
        .push_ops(QubitRef::Data(b.perm.position_of(control)), &words.phase);

    let (program, perm) = b.finish();
    debug_assert!(perm.is_identity());
    Ok(program)
}

/// Makes `d_k` the starting qubit: switches `s_1 … s_{k−1}` are biased off
/// for the whole program, and ops on qubits left of `d_k` are dropped, so the
/// program acts on `d_k … d_N` only.
pub fn assign_control(program: &PassProgram, start: usize, num_data: usize) -> Result<PassProgram> {
    let cfg = ChainConfig::new(num_data)?;
    cfg.check_data(start)?;
    let left = |q: &QubitRef| match *q {
        QubitRef::Data(k) | QubitRef::Switch(k) => k < start,
    };
    let mut out = PassProgram::new();
    for s in 1..start {
        out.push(Instruction::SetSwitch {
            switch: s,
            enabled: false,
        });
    }
    for ins in program.instructions() {
        match ins {
            Instruction::SingleLayer(layer) => {
                out.push_layer(layer.iter().filter(|(q, _)| !left(q)).map(|(q, w)| (*q, w.clone())).collect())
            }
            Instruction::SetSwitch { switch, .. }
            | Instruction::PrepareSwitch { switch, .. }
            | Instruction::MeasureSwitch(switch)
                if *switch < start => {}
            other => out.push(other.clone()),
        }
    }
    Ok(out)
}
