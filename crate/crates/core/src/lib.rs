//! Gate synthesis for a pair of inductively coupled Josephson charge qubits.
//!
//! The device exposes three binary switches (two gate-voltage biases and one
//! coupling inductor). Each switch setting selects one of a small family of
//! Hamiltonians, and holding a setting for a time `t` applies the unitary
//! `exp(-i t H)`. A *letter* is one timed switch setting; a *command* is an
//! ordered letter sequence realizing a quantum gate. This crate provides:
//!
//! * [`linalg`] — dense complex matrix kernel (Kronecker products, Hermitian
//!   exponentials by spectral decomposition, operator Schmidt factorization),
//! * [`device`] — the switched one- and two-qubit Hamiltonians,
//! * [`gates`] — target gate library with fixed special-unitary phases,
//! * [`qml`] — the command data model, its text format, and the interpreter,
//! * [`compiler`] — gate-to-command synthesis by multi-start descent on the
//!   squared Frobenius distance, plus closed-form one-qubit schedules,
//! * [`liealg`] — numerical Lie-closure ranks certifying controllability.
//!
//! ```
//! use jjqml::compiler::{compile1_device, OptimizerConfig};
//! use jjqml::device::EnergyConfig;
//! use jjqml::gates::library;
//! use jjqml::qml::{execute, parse, serialize};
//!
//! let cfg = EnergyConfig::default();
//! let had = library("had", None)?;
//! let opt = OptimizerConfig { restarts: 20, target_f: 1e-10, seed: 1, ..Default::default() };
//! let result = compile1_device(&had, &cfg, &opt)?;
//! assert!(result.converged);
//!
//! // schedules round-trip through the text format and execute to the target
//! let command = jjqml::Template::one_qubit_device().to_command("had", &result.times, &cfg)?;
//! let unitary = execute(&parse(&serialize(&command))?)?;
//! assert!(unitary.max_abs_diff(&had.matrix) <= 1e-4);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod compiler;
pub mod corpus;
pub mod device;
pub mod gates;
pub mod liealg;
pub mod linalg;
pub mod qml;

pub use compiler::{CompileResult, EmbeddedSide, OptimizerConfig, Template};
pub use device::{EnergyConfig, QubitBasisInfo, SwitchState};
pub use gates::GateTarget;
pub use linalg::CMatrix;
pub use qml::{Command, Letter, Letter1, Letters};
