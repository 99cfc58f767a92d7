//! The `.fknit` text format.
//!
//! One directive per line, `#` starts a comment:
//!
//! ```text
//! chain N [g]
//! prep dK (re,im) (re,im)
//! sq <qubit|all-data|all-switch> <X|Y|Z|H|RX θ|RY θ|RZ θ|PHASE δ>
//! switch sK <on|off|zero|one|plus>
//! sweep <ltr|rtl>
//! cv dC dT δ α θ β
//! measure <qubit> <z|x>
//! dump
//! ```
//!
//! `chain` must come first and appear once. Printing a parsed script yields
//! canonical text that parses back to an equal script.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::chain::{ChainConfig, QubitRef, SweepDirection};
use crate::compiler::{EulerAngles, Instruction, PassProgram, PrepState, SingleQubitOp};
use crate::statevec::Basis;

/// A parse failure, 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqTarget {
    Qubit(QubitRef),
    AllData,
    AllSwitch,
}

impl fmt::Display for SqTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SqTarget::Qubit(q) => q.fmt(f),
            SqTarget::AllData => f.write_str("all-data"),
            SqTarget::AllSwitch => f.write_str("all-switch"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchAction {
    /// Bias into resonance (`on`) or out of it (`off`).
    Enable(bool),
    Prepare(PrepState),
}

impl fmt::Display for SwitchAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwitchAction::Enable(true) => "on",
            SwitchAction::Enable(false) => "off",
            SwitchAction::Prepare(PrepState::Zero) => "zero",
            SwitchAction::Prepare(PrepState::One) => "one",
            SwitchAction::Prepare(PrepState::Plus) => "plus",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Chain { num_data: usize, coupling: Option<f64> },
    Prep { data: usize, amps: [Complex64; 2] },
    Sq { target: SqTarget, op: SingleQubitOp },
    Switch { switch: usize, action: SwitchAction },
    Sweep(SweepDirection),
    Cv { control: usize, target: usize, angles: EulerAngles<f64> },
    Measure { qubit: QubitRef, basis: Basis },
    Dump,
}

fn fmt_complex(z: &Complex64) -> String {
    format!("({},{})", z.re, z.im)
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Directive::Chain { num_data, coupling } => {
                write!(f, "chain {num_data}")?;
                if let Some(g) = coupling {
                    write!(f, " {g}")?;
                }
                Ok(())
            }
            Directive::Prep { data, amps } => {
                write!(f, "prep d{data} {} {}", fmt_complex(&amps[0]), fmt_complex(&amps[1]))
            }
            Directive::Sq { target, op } => write!(f, "sq {target} {op}"),
            Directive::Switch { switch, action } => write!(f, "switch s{switch} {action}"),
            Directive::Sweep(SweepDirection::Ltr) => f.write_str("sweep ltr"),
            Directive::Sweep(SweepDirection::Rtl) => f.write_str("sweep rtl"),
            Directive::Cv {
                control,
                target,
                angles,
            } => write!(
                f,
                "cv d{control} d{target} {} {} {} {}",
                angles.delta, angles.alpha, angles.theta, angles.beta
            ),
            Directive::Measure { qubit, basis } => {
                let b = match basis {
                    Basis::Z => "z",
                    Basis::X => "x",
                };
                write!(f, "measure {qubit} {b}")
            }
            Directive::Dump => f.write_str("dump"),
        }
    }
}

/// A directive with the source line it came from.
#[derive(Debug, Clone)]
pub struct Line {
    pub line: usize,
    pub directive: Directive,
}

/// A parsed program. Equality ignores source line numbers.
#[derive(Debug, Clone)]
pub struct Script {
    num_data: usize,
    coupling: Option<f64>,
    lines: Vec<Line>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.lines.len() == other.lines.len()
            && self
                .lines
                .iter()
                .zip(&other.lines)
                .all(|(a, b)| a.directive == b.directive)
    }
}

impl Script {
    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn coupling(&self) -> Option<f64> {
        self.coupling
    }

    /// Chain configuration declared by the `chain` line.
    pub fn config(&self) -> ChainConfig {
        let cfg = ChainConfig::new(self.num_data).expect("validated at parse time");
        match self.coupling {
            Some(g) => cfg.with_coupling(g),
            None => cfg,
        }
    }

    /// All directives including `chain`.
    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// A script declaring `num_data` data qubits followed by `program`.
    pub fn from_program(num_data: usize, coupling: Option<f64>, program: &PassProgram) -> Result<Self, Diagnostic> {
        let mut text = Directive::Chain { num_data, coupling }.to_string();
        text.push('\n');
        for d in program_directives(program) {
            text.push_str(&d.to_string());
            text.push('\n');
        }
        parse_program(&text)
    }

    /// The script as a [`PassProgram`], when every directive after `chain`
    /// has a program counterpart (`sq`, `switch`, `sweep`, `measure sK x`).
    pub fn to_program(&self) -> Option<PassProgram> {
        let mut p = PassProgram::new();
        for l in &self.lines[1..] {
            match &l.directive {
                Directive::Sq { target, op } => {
                    for q in self.expand(*target) {
                        p.push_ops(q, &[*op]);
                    }
                }
                Directive::Switch { switch, action } => p.push(match action {
                    SwitchAction::Enable(on) => Instruction::SetSwitch {
                        switch: *switch,
                        enabled: *on,
                    },
                    SwitchAction::Prepare(state) => Instruction::PrepareSwitch {
                        switch: *switch,
                        state: *state,
                    },
                }),
                Directive::Sweep(dir) => p.push(Instruction::Sweep(*dir)),
                Directive::Measure {
                    qubit: QubitRef::Switch(s),
                    basis: Basis::X,
                } => p.push(Instruction::MeasureSwitch(*s)),
                _ => return None,
            }
        }
        Some(p)
    }

    /// Qubits addressed by an `sq` target.
    pub fn expand(&self, target: SqTarget) -> Vec<QubitRef> {
        match target {
            SqTarget::Qubit(q) => vec![q],
            SqTarget::AllData => (1..=self.num_data).map(QubitRef::Data).collect(),
            SqTarget::AllSwitch => (1..self.num_data).map(QubitRef::Switch).collect(),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{}", l.directive)?;
        }
        Ok(())
    }
}

/// Directives equivalent to `program`, one `sq` per op.
pub fn program_directives(program: &PassProgram) -> Vec<Directive> {
    let mut out = Vec::new();
    for ins in program.instructions() {
        match ins {
            Instruction::SingleLayer(layer) => {
                for (q, word) in layer {
                    for op in word {
                        out.push(Directive::Sq {
                            target: SqTarget::Qubit(*q),
                            op: *op,
                        });
                    }
                }
            }
            Instruction::Sweep(dir) => out.push(Directive::Sweep(*dir)),
            Instruction::SetSwitch { switch, enabled } => out.push(Directive::Switch {
                switch: *switch,
                action: SwitchAction::Enable(*enabled),
            }),
            Instruction::PrepareSwitch { switch, state } => out.push(Directive::Switch {
                switch: *switch,
                action: SwitchAction::Prepare(*state),
            }),
            Instruction::MeasureSwitch(s) => out.push(Directive::Measure {
                qubit: QubitRef::Switch(*s),
                basis: Basis::X,
            }),
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits on whitespace; a parenthesized group is one token.
fn tokenize(line: &str) -> Result<Vec<Token<'_>>, (usize, String)> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    let column_of = |byte: usize| line[..byte].chars().count() + 1;
    while let Some(&(start, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        let mut end = line.len();
        if ch == '(' {
            let close = line[start..]
                .find(')')
                .ok_or_else(|| (column_of(start), "unclosed `(`".to_string()))?;
            end = start + close + 1;
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
        } else {
            while let Some(&(i, c)) = chars.peek() {
                if c.is_whitespace() || c == '(' {
                    end = i;
                    break;
                }
                chars.next();
            }
        }
        tokens.push(Token {
            text: &line[start..end],
            column: column_of(start),
        });
    }
    Ok(tokens)
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    num_data: Option<usize>,
}

impl<'a> LineParser<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn arity(&self, expected: &[usize], usage: &str) -> Result<(), Diagnostic> {
        let found = self.tokens.len() - 1;
        if expected.contains(&found) {
            return Ok(());
        }
        let column = self
            .tokens
            .get(expected.iter().copied().max().unwrap_or(0) + 1)
            .unwrap_or(&self.tokens[0])
            .column;
        Err(self.err(
            column,
            format!("`{}` takes {usage}, found {found} argument(s)", self.tokens[0].text),
        ))
    }

    fn number(&self, i: usize) -> Result<f64, Diagnostic> {
        let t = self.tokens[i];
        t.text
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| self.err(t.column, format!("expected a number, found `{}`", t.text)))
    }

    fn complex(&self, i: usize) -> Result<Complex64, Diagnostic> {
        let t = self.tokens[i];
        let bad = || self.err(t.column, format!("expected `(re,im)`, found `{}`", t.text));
        let inner = t
            .text
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (re, im) = inner.split_once(',').ok_or_else(bad)?;
        let parse = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite());
        match (parse(re), parse(im)) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(bad()),
        }
    }

    fn qubit(&self, i: usize) -> Result<QubitRef, Diagnostic> {
        let t = self.tokens[i];
        let q: QubitRef = t
            .text
            .parse()
            .map_err(|_| self.err(t.column, format!("expected a qubit like d1 or s1, found `{}`", t.text)))?;
        let n = self.num_data.expect("chain declared");
        let declared = match q {
            QubitRef::Data(k) => (1..=n).contains(&k),
            QubitRef::Switch(k) => (1..n).contains(&k),
        };
        if declared {
            Ok(q)
        } else {
            Err(self.err(t.column, format!("undeclared qubit {q}")))
        }
    }

    fn data(&self, i: usize) -> Result<usize, Diagnostic> {
        match self.qubit(i)? {
            QubitRef::Data(k) => Ok(k),
            q => Err(self.err(self.tokens[i].column, format!("expected a data qubit, found {q}"))),
        }
    }

    fn switch(&self, i: usize) -> Result<usize, Diagnostic> {
        match self.qubit(i)? {
            QubitRef::Switch(k) => Ok(k),
            q => Err(self.err(self.tokens[i].column, format!("expected a switch qubit, found {q}"))),
        }
    }

    fn keyword(&self, i: usize, options: &[&'static str]) -> Result<&'static str, Diagnostic> {
        let t = self.tokens[i];
        options
            .iter()
            .find(|o| o.eq_ignore_ascii_case(t.text))
            .copied()
            .ok_or_else(|| {
                self.err(
                    t.column,
                    format!("expected one of {}, found `{}`", options.join("|"), t.text),
                )
            })
    }

    fn op(&self) -> Result<SingleQubitOp, Diagnostic> {
        let name = self.keyword(2, &["X", "Y", "Z", "H", "RX", "RY", "RZ", "PHASE"])?;
        let fixed = match name {
            "X" => Some(SingleQubitOp::X),
            "Y" => Some(SingleQubitOp::Y),
            "Z" => Some(SingleQubitOp::Z),
            "H" => Some(SingleQubitOp::H),
            _ => None,
        };
        if let Some(op) = fixed {
            self.arity(&[2], "a target and a gate")?;
            return Ok(op);
        }
        self.arity(&[3], "a target, a gate and an angle")?;
        let a = self.number(3)?;
        Ok(match name {
            "RX" => SingleQubitOp::Rx(a),
            "RY" => SingleQubitOp::Ry(a),
            "RZ" => SingleQubitOp::Rz(a),
            _ => SingleQubitOp::Phase(a),
        })
    }

    fn directive(&mut self) -> Result<Directive, Diagnostic> {
        let head = self.tokens[0];
        let name = head.text.to_ascii_lowercase();
        if name != "chain" && self.num_data.is_none() {
            return Err(self.err(head.column, "the first directive must be `chain N`"));
        }
        Ok(match name.as_str() {
            "chain" => {
                if self.num_data.is_some() {
                    return Err(self.err(head.column, "chain declared twice"));
                }
                self.arity(&[1, 2], "a size and an optional coupling")?;
                let t = self.tokens[1];
                let n: usize = t
                    .text
                    .parse()
                    .map_err(|_| self.err(t.column, format!("expected a chain size, found `{}`", t.text)))?;
                ChainConfig::new(n).map_err(|e| self.err(t.column, e.to_string()))?;
                let coupling = if self.tokens.len() == 3 {
                    let g = self.number(2)?;
                    if g <= 0.0 {
                        return Err(self.err(self.tokens[2].column, "coupling must be positive"));
                    }
                    Some(g)
                } else {
                    None
                };
                self.num_data = Some(n);
                Directive::Chain { num_data: n, coupling }
            }
            "prep" => {
                self.arity(&[3], "a data qubit and two amplitudes")?;
                let data = self.data(1)?;
                let amps = [self.complex(2)?, self.complex(3)?];
                if amps[0].norm_sqr() + amps[1].norm_sqr() == 0.0 {
                    return Err(self.err(self.tokens[2].column, "amplitudes are both zero"));
                }
                Directive::Prep { data, amps }
            }
            "sq" => {
                if self.tokens.len() < 3 {
                    self.arity(&[2, 3], "a target and a gate")?;
                }
                let t = self.tokens[1];
                let target = match t.text {
                    "all-data" => SqTarget::AllData,
                    "all-switch" => SqTarget::AllSwitch,
                    _ => SqTarget::Qubit(self.qubit(1)?),
                };
                Directive::Sq {
                    target,
                    op: self.op()?,
                }
            }
            "switch" => {
                self.arity(&[2], "a switch and a setting")?;
                let switch = self.switch(1)?;
                let action = match self.keyword(2, &["on", "off", "zero", "one", "plus"])? {
                    "on" => SwitchAction::Enable(true),
                    "off" => SwitchAction::Enable(false),
                    "zero" => SwitchAction::Prepare(PrepState::Zero),
                    "one" => SwitchAction::Prepare(PrepState::One),
                    _ => SwitchAction::Prepare(PrepState::Plus),
                };
                Directive::Switch { switch, action }
            }
            "sweep" => {
                self.arity(&[1], "a direction")?;
                match self.keyword(1, &["ltr", "rtl"])? {
                    "ltr" => Directive::Sweep(SweepDirection::Ltr),
                    _ => Directive::Sweep(SweepDirection::Rtl),
                }
            }
            "cv" => {
                self.arity(&[6], "a control, a target and four angles δ α θ β")?;
                let control = self.data(1)?;
                let target = self.data(2)?;
                if control == target {
                    return Err(self.err(self.tokens[2].column, "control and target must differ"));
                }
                let angles = EulerAngles::new(self.number(3)?, self.number(4)?, self.number(5)?, self.number(6)?);
                Directive::Cv {
                    control,
                    target,
                    angles,
                }
            }
            "measure" => {
                self.arity(&[2], "a qubit and a basis")?;
                let qubit = self.qubit(1)?;
                let basis = match self.keyword(2, &["z", "x"])? {
                    "z" => Basis::Z,
                    _ => Basis::X,
                };
                Directive::Measure { qubit, basis }
            }
            "dump" => {
                self.arity(&[0], "no arguments")?;
                Directive::Dump
            }
            _ => return Err(self.err(head.column, format!("unknown directive `{}`", head.text))),
        })
    }
}

pub fn parse_program(text: &str) -> Result<Script, Diagnostic> {
    let mut num_data = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let code = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(code).map_err(|(column, message)| Diagnostic {
            line,
            column,
            message,
        })?;
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            line,
            tokens,
            num_data,
        };
        let directive = p.directive()?;
        num_data = p.num_data;
        lines.push(Line { line, directive });
    }
    let Some(Line {
        directive: Directive::Chain { num_data, coupling },
        ..
    }) = lines.first().cloned()
    else {
        return Err(Diagnostic {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing `chain N` declaration".into(),
        });
    };
    Ok(Script {
        num_data,
        coupling,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile_fanout;

    #[test]
    fn minimal_script() {
        let s = parse_program("chain 2\nsweep ltr").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.num_data(), 2);
    }

    #[test]
    fn undeclared_qubit_reports_line() {
        let e = parse_program("chain 2\nsq d9 H").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.column, 4);
        assert_eq!(e.message, "undeclared qubit d9");
        assert!(parse_program("chain 3\nswitch s3 on").is_err());
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("sweep ltr", 1, "first directive"),
            ("chain 2\nfoo", 2, "unknown directive"),
            ("chain 2\nsweep", 2, "takes a direction"),
            ("chain 2\nsq d1 RX", 2, "angle"),
            ("chain 2\nsq d1 H 0.3", 2, "found 3"),
            ("chain 2\nprep d1 (1,0) (0", 2, "unclosed"),
            ("chain 2\nprep d1 (1;0) (0,0)", 2, "(re,im)"),
            ("chain 2\nchain 3", 2, "twice"),
            ("chain 1", 1, "chain"),
            ("chain 2\nmeasure d1 y", 2, "z|x"),
            ("chain 2\ncv d1 d1 0 0 0 0", 2, "differ"),
            ("", 1, "missing"),
        ];
        for (text, line, needle) in cases {
            let e = parse_program(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn comments_and_case() {
        let s = parse_program("# header\nCHAIN 3 2.5  # g\n\nsq all-data h\nsq d2 rz -0.5\n").unwrap();
        assert_eq!(s.coupling(), Some(2.5));
        assert_eq!(s.lines()[1].line, 4);
        assert_eq!(s.to_string(), "chain 3 2.5\nsq all-data H\nsq d2 RZ -0.5\n");
    }

    #[test]
    fn prep_with_spaces_inside_parentheses() {
        let s = parse_program("chain 2\nprep d1 ( 0.6 , 0 ) (0,0.8)").unwrap();
        assert_eq!(
            s.lines()[1].directive,
            Directive::Prep {
                data: 1,
                amps: [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]
            }
        );
    }

    #[test]
    fn print_parse_fixpoint() {
        let text = "chain 4\nprep d2 (0.1,-0.3) (1e-3,2)\nsq s1 PHASE 0.1\nswitch s2 plus\nswitch s3 off\n\
                    cv d4 d1 0.25 -1 3 0.5\nmeasure s2 x\nmeasure d1 z\nsweep rtl\ndump\n";
        let a = parse_program(text).unwrap();
        let b = parse_program(&a.to_string()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn program_round_trip() {
        let p = compile_fanout(3).unwrap();
        let s = Script::from_program(3, None, &p).unwrap();
        assert_eq!(s.to_program().unwrap(), p);
        let with_cv = parse_program("chain 2\ncv d1 d2 0 0 0 0").unwrap();
        assert!(with_cv.to_program().is_none());
    }
}
