//! Compilation of high-level operations into fluxon sweep programs.

pub mod dressing;
pub mod euler;
pub mod program;
pub mod synth;

pub use dressing::{cns_dressing, search_cns_dressings, CnsDressing, DressingSearch};
pub use euler::{abc_factors, abc_words, zyz_decompose, EulerAngles};
pub use program::{
    program_semantics, Instruction, Layer, PassProgram, PrepState, SingleQubitOp, SwitchReadout,
    WirePermutation,
};
pub use synth::{assign_control, compile_controlled_v, compile_fanout, compile_fanout_range, fanout_permutation};
