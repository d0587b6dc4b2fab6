//! Pulse-program ("command") data model, text format, and interpreter.
//!
//! A command is an ordered sequence of *letters*. On the two-qubit device a
//! letter is a switch triple plus a hold time, `{e1, e2, l, t}`; on the
//! one-qubit device it is `{e, t}`. The first letter in a command is the
//! first step in time, i.e. the rightmost factor of the evolution operator:
//!
//! `U = exp(-i t_n H_n) ... exp(-i t_2 H_2) exp(-i t_1 H_1)`
//!
//! # File format
//!
//! One command per `.qml` file, whitespace-separated, `#` starts a comment:
//!
//! ```text
//! gate cnot
//! dim 4
//! energies 2.5 0.1 0.1
//! letter 1 1 0 102.7757
//! letter 0 0 1 158.8193
//! ```
//!
//! Header keys are `gate` (optional), `dim` (required, 2 or 4) and
//! `energies` (optional, defaults to the reference operating point). Letter
//! rows are `letter e1 e2 l t` for `dim 4` and `letter e t` for `dim 2`.
//! The serializer emits times with four decimal places when that is exact
//! and full round-trip precision otherwise, so `parse(serialize(c)) == c`.

use crate::device::{hamiltonian1, hamiltonian2, DeviceError, EnergyConfig, SwitchState};
use crate::linalg::{eigh, recombine_spectral, CMatrix};
use std::fmt::Write as _;
use thiserror::Error;

/// One timed switch setting on the two-qubit device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Letter {
    pub switches: SwitchState,
    pub t: f64,
}

/// One timed switch setting on the one-qubit device (`on = false` is the
/// degeneracy point, `on = true` the idle point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Letter1 {
    pub on: bool,
    pub t: f64,
}

/// Letter payload of a command; the variant fixes the device dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum Letters {
    Dim2(Vec<Letter1>),
    Dim4(Vec<Letter>),
}

impl Letters {
    pub fn len(&self) -> usize {
        match self {
            Letters::Dim2(v) => v.len(),
            Letters::Dim4(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn times(&self) -> Vec<f64> {
        match self {
            Letters::Dim2(v) => v.iter().map(|l| l.t).collect(),
            Letters::Dim4(v) => v.iter().map(|l| l.t).collect(),
        }
    }
}

/// An ordered letter sequence realizing a gate on one energy configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Command {
    pub gate_name: String,
    pub energies: EnergyConfig,
    pub letters: Letters,
}

impl Command {
    pub fn new(gate_name: impl Into<String>, energies: EnergyConfig, letters: Letters) -> Self {
        Self {
            gate_name: gate_name.into(),
            energies,
            letters,
        }
    }

    /// Hilbert-space dimension of the device this command runs on.
    pub fn dim(&self) -> usize {
        match self.letters {
            Letters::Dim2(_) => 2,
            Letters::Dim4(_) => 4,
        }
    }

    /// Empty commands execute to the identity; interfaces warn on them.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of all letter durations.
    pub fn total_time(&self) -> f64 {
        self.letters.times().iter().sum()
    }
}

#[derive(Debug, Error)]
pub enum QmlError {
    #[error("letter {index}: time {t} is negative")]
    NegativeTime { index: usize, t: f64 },
    #[error("letter {index}: time {t} is not finite")]
    NonFiniteTime { index: usize, t: f64 },
    #[error(transparent)]
    Device(#[from] DeviceError),
}

/// Execute a command: the product of the letter evolutions in reverse list
/// order (first letter = rightmost factor). The empty command yields the
/// identity.
///
/// The result is unitary to 1e-11 and, since every device generator is
/// traceless, has determinant 1 to 1e-9.
pub fn execute(cmd: &Command) -> Result<CMatrix, QmlError> {
    cmd.energies.validate()?;
    for (index, t) in cmd.letters.times().iter().enumerate() {
        if !t.is_finite() {
            return Err(QmlError::NonFiniteTime { index, t: *t });
        }
        if *t < 0.0 {
            return Err(QmlError::NegativeTime { index, t: *t });
        }
    }

    // Spectral decompositions are cached per distinct switch setting; a
    // 15-letter command only ever uses four.
    let mut cache: Vec<(u8, Vec<f64>, CMatrix)> = Vec::new();
    let mut u = CMatrix::identity(cmd.dim());
    let steps: Vec<(u8, f64)> = match &cmd.letters {
        Letters::Dim2(v) => v.iter().map(|l| (l.on as u8, l.t)).collect(),
        Letters::Dim4(v) => v
            .iter()
            .map(|l| {
                let (e1, e2, el) = l.switches.bits();
                (e1 << 2 | e2 << 1 | el, l.t)
            })
            .collect(),
    };
    for (key, t) in steps {
        if !cache.iter().any(|(k, _, _)| *k == key) {
            let h = match &cmd.letters {
                Letters::Dim2(_) => hamiltonian1(&cmd.energies, key != 0),
                Letters::Dim4(_) => hamiltonian2(
                    &cmd.energies,
                    SwitchState::new(key & 4 != 0, key & 2 != 0, key & 1 != 0),
                ),
            };
            let (values, vectors) = eigh(&h);
            cache.push((key, values, vectors));
        }
        let (_, values, vectors) = cache.iter().find(|(k, _, _)| *k == key).unwrap();
        let step = recombine_spectral(values, vectors, t);
        u = &step * &u;
    }
    Ok(u)
}

/// Parse error with the 1-based line number it occurred on.
#[derive(Debug, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum ParseErrorKind {
    #[error("unknown header key `{0}`")]
    UnknownHeader(String),
    #[error("duplicate header key `{0}`")]
    DuplicateHeader(String),
    #[error("header `{key}` expects {expected} field(s), got {got}")]
    HeaderArity {
        key: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid number `{0}`")]
    BadNumber(String),
    #[error("dim must be 2 or 4, got `{0}`")]
    BadDim(String),
    #[error("letter before `dim` header")]
    LetterBeforeDim,
    #[error("letter expects {expected} fields for dim {dim}, got {got}")]
    LetterArity {
        expected: usize,
        dim: usize,
        got: usize,
    },
    #[error("switch value must be 0 or 1, got `{0}`")]
    BadSwitch(String),
    #[error("letter time must be finite and non-negative, got {0}")]
    BadTime(f64),
    #[error("missing `dim` header")]
    MissingDim,
    #[error(transparent)]
    Device(#[from] DeviceError),
}

fn fail(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parse one command from its text form.
pub fn parse(text: &str) -> Result<Command, ParseError> {
    let mut gate_name: Option<String> = None;
    let mut energies: Option<EnergyConfig> = None;
    let mut dim: Option<usize> = None;
    let mut letters2: Vec<Letter1> = Vec::new();
    let mut letters4: Vec<Letter> = Vec::new();
    let mut last_line = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let (key, args) = (fields[0], &fields[1..]);
        match key {
            "gate" => {
                if gate_name.is_some() {
                    return Err(fail(line, ParseErrorKind::DuplicateHeader(key.into())));
                }
                if args.len() != 1 {
                    return Err(fail(
                        line,
                        ParseErrorKind::HeaderArity {
                            key: key.into(),
                            expected: 1,
                            got: args.len(),
                        },
                    ));
                }
                gate_name = Some(args[0].to_string());
            }
            "dim" => {
                if dim.is_some() {
                    return Err(fail(line, ParseErrorKind::DuplicateHeader(key.into())));
                }
                if args.len() != 1 {
                    return Err(fail(
                        line,
                        ParseErrorKind::HeaderArity {
                            key: key.into(),
                            expected: 1,
                            got: args.len(),
                        },
                    ));
                }
                dim = match args[0] {
                    "2" => Some(2),
                    "4" => Some(4),
                    other => return Err(fail(line, ParseErrorKind::BadDim(other.into()))),
                };
            }
            "energies" => {
                if energies.is_some() {
                    return Err(fail(line, ParseErrorKind::DuplicateHeader(key.into())));
                }
                if args.len() != 3 {
                    return Err(fail(
                        line,
                        ParseErrorKind::HeaderArity {
                            key: key.into(),
                            expected: 3,
                            got: args.len(),
                        },
                    ));
                }
                let mut vals = [0.0; 3];
                for (slot, raw) in vals.iter_mut().zip(args) {
                    *slot = raw
                        .parse::<f64>()
                        .map_err(|_| fail(line, ParseErrorKind::BadNumber((*raw).into())))?;
                }
                let cfg = EnergyConfig::new(vals[0], vals[1], vals[2])
                    .map_err(|e| fail(line, e.into()))?;
                energies = Some(cfg);
            }
            "letter" => {
                let dim = dim.ok_or_else(|| fail(line, ParseErrorKind::LetterBeforeDim))?;
                let expected = if dim == 4 { 4 } else { 2 };
                if args.len() != expected {
                    return Err(fail(
                        line,
                        ParseErrorKind::LetterArity {
                            expected,
                            dim,
                            got: args.len(),
                        },
                    ));
                }
                let bit = |raw: &str| -> Result<bool, ParseError> {
                    match raw {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        other => Err(fail(line, ParseErrorKind::BadSwitch(other.into()))),
                    }
                };
                let t = args[expected - 1].parse::<f64>().map_err(|_| {
                    fail(line, ParseErrorKind::BadNumber(args[expected - 1].into()))
                })?;
                if !t.is_finite() || t < 0.0 {
                    return Err(fail(line, ParseErrorKind::BadTime(t)));
                }
                if dim == 4 {
                    let switches = SwitchState::new(bit(args[0])?, bit(args[1])?, bit(args[2])?);
                    letters4.push(Letter { switches, t });
                } else {
                    letters2.push(Letter1 {
                        on: bit(args[0])?,
                        t,
                    });
                }
            }
            other => return Err(fail(line, ParseErrorKind::UnknownHeader(other.into()))),
        }
    }

    let dim = dim.ok_or_else(|| fail(last_line.max(1), ParseErrorKind::MissingDim))?;
    let letters = if dim == 4 {
        Letters::Dim4(letters4)
    } else {
        Letters::Dim2(letters2)
    };
    Ok(Command {
        gate_name: gate_name.unwrap_or_default(),
        energies: energies.unwrap_or_default(),
        letters,
    })
}

/// Format a time losslessly: four decimal places when exact, full round-trip
/// precision otherwise.
fn format_time(t: f64) -> String {
    let fixed = format!("{t:.4}");
    if fixed.parse::<f64>() == Ok(t) {
        fixed
    } else {
        format!("{t}")
    }
}

/// Serialize a command to its text form; inverse of [`parse`].
pub fn serialize(cmd: &Command) -> String {
    let mut out = String::new();
    if !cmd.gate_name.is_empty() {
        writeln!(out, "gate {}", cmd.gate_name).unwrap();
    }
    writeln!(out, "dim {}", cmd.dim()).unwrap();
    writeln!(
        out,
        "energies {} {} {}",
        cmd.energies.ec, cmd.energies.ej, cmd.energies.el
    )
    .unwrap();
    match &cmd.letters {
        Letters::Dim2(v) => {
            for l in v {
                writeln!(out, "letter {} {}", l.on as u8, format_time(l.t)).unwrap();
            }
        }
        Letters::Dim4(v) => {
            for l in v {
                let (e1, e2, el) = l.switches.bits();
                writeln!(out, "letter {e1} {e2} {el} {}", format_time(l.t)).unwrap();
            }
        }
    }
    out
}
