//! Command-line front end: compile gates to switch schedules, run and verify
//! schedule files, check controllability, and validate the shipped corpus.
//!
//! Exit codes are a stable contract for scripting: 0 success, 1 input or
//! verification error, 2 optimizer non-convergence (outputs still written).

use clap::{Args, Parser, Subcommand};
use jjqml::compiler::{
    closed_form_command, compile1_device, compile1_embedded, compile1_embedded_scan, compile2,
    ClosedFormGate, CompileResult, EmbeddedSide, OptimizerConfig, Template,
};
use jjqml::corpus;
use jjqml::device::EnergyConfig;
use jjqml::gates::{library, phase_fidelity, su_project, GateTarget};
use jjqml::liealg::{
    device_generators, lie_closure_dim, standard_generators, verify_constructions,
    verify_device_reconstruction, GeneratorSet, IdentityStatus, DEFAULT_CLOSURE_TOL,
};
use jjqml::linalg::{c64, pauli, CMatrix, Pauli};
use jjqml::qml::{execute, parse, serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "jjqml",
    about = "Pulse-schedule compiler and interpreter for switched coupled Josephson charge qubits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Clone, Copy)]
struct EnergyArgs {
    /// Idle-point bias energy E_c (Kelvin units)
    #[arg(long, default_value_t = 2.5)]
    ec: f64,
    /// Tunneling amplitude E_J (Kelvin units)
    #[arg(long, default_value_t = 0.1)]
    ej: f64,
    /// Inductor coupling energy E_L (Kelvin units)
    #[arg(long, default_value_t = 0.1)]
    el: f64,
}

impl EnergyArgs {
    fn config(&self) -> Result<EnergyConfig, String> {
        EnergyConfig::new(self.ec, self.ej, self.el).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a schedule for a named gate or a raw unitary matrix
    Compile {
        /// Gate name: not, sqrt-not, had, phs, cnot, swap, qft4, phshift,
        /// i-kron-W, W-kron-i
        #[arg(long, conflicts_with = "matrix")]
        gate: Option<String>,
        /// Raw unitary file: `dim N` header then N*N `re im` pairs, row-major
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Phase parameter for the phs / phshift families [default: pi/2]
        #[arg(long)]
        phi: Option<f64>,
        /// Use the closed-form one-qubit schedule instead of optimizing
        #[arg(long, default_value_t = false)]
        closed_form: bool,
        /// Output schedule file [default: GATE.qml]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the report to this file
        #[arg(long)]
        report: Option<PathBuf>,
        /// Embedded-template harmonic k; scans 1..=100 when omitted
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        energies: EnergyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        restarts: u32,
        #[arg(long, default_value_t = 500)]
        max_iters: u32,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long, default_value_t = 1000.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-8)]
        target_f: f64,
    },
    /// Execute a schedule file and print the resulting unitary
    Run { path: PathBuf },
    /// Execute a schedule file and compare it against a library gate
    Verify {
        path: PathBuf,
        #[arg(long)]
        gate: String,
        /// Phase parameter for the phs / phshift families [default: pi/2]
        #[arg(long)]
        phi: Option<f64>,
        /// Largest objective value accepted as a pass
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
    },
    /// Controllability report: Lie-closure ranks and commutator identities
    Closure {
        /// Residual threshold for accepting a new algebra direction
        #[arg(long, default_value_t = DEFAULT_CLOSURE_TOL)]
        tol: f64,
        #[command(flatten)]
        energies: EnergyArgs,
    },
    /// Re-execute the shipped schedule corpus and check published values
    Tables {
        /// Corpus directory
        #[arg(long, default_value = "tables")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap would exit 2; keep 2 reserved for non-convergence
            let is_help = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return ExitCode::from(if is_help { EXIT_OK } else { EXIT_INPUT });
        }
    };
    let code = match cli.command {
        Cmd::Compile {
            gate,
            matrix,
            phi,
            closed_form,
            out,
            report,
            k,
            energies,
            seed,
            restarts,
            max_iters,
            t_min,
            t_max,
            target_f,
        } => cmd_compile(
            gate.as_deref(),
            matrix.as_deref(),
            phi,
            closed_form,
            out,
            report,
            k,
            &energies,
            OptimizerConfig {
                restarts,
                max_iters,
                t_min,
                t_max,
                target_f,
                seed,
            },
        ),
        Cmd::Run { path } => cmd_run(&path),
        Cmd::Verify {
            path,
            gate,
            phi,
            threshold,
        } => cmd_verify(&path, &gate, phi, threshold),
        Cmd::Closure { tol, energies } => cmd_closure(tol, &energies),
        Cmd::Tables { dir } => cmd_tables(&dir),
    };
    ExitCode::from(code)
}

fn fail(msg: impl AsRef<str>) -> u8 {
    eprintln!("error: {}", msg.as_ref());
    EXIT_INPUT
}

fn needs_phase(gate: &str) -> bool {
    matches!(gate, "phs" | "phshift" | "i-kron-phs" | "phs-kron-i")
}

/// Scheme selected from the gate name.
enum Scheme {
    TwoQubit,
    Device,
    Embedded(EmbeddedSide, String),
}

fn scheme_for(gate: &str) -> Scheme {
    if let Some(inner) = gate.strip_prefix("i-kron-") {
        Scheme::Embedded(EmbeddedSide::Second, inner.to_string())
    } else if let Some(inner) = gate.strip_suffix("-kron-i") {
        Scheme::Embedded(EmbeddedSide::First, inner.to_string())
    } else if matches!(gate, "cnot" | "swap" | "qft4" | "phshift") {
        Scheme::TwoQubit
    } else {
        Scheme::Device
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_compile(
    gate: Option<&str>,
    matrix: Option<&Path>,
    phi: Option<f64>,
    closed_form: bool,
    out: Option<PathBuf>,
    report_path: Option<PathBuf>,
    k: Option<u32>,
    energies: &EnergyArgs,
    opt: OptimizerConfig,
) -> u8 {
    let cfg = match energies.config() {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };

    let started = Instant::now();
    let (target, scheme, default_out) = match (gate, matrix) {
        (Some(name), None) => {
            let phi_value = phi.unwrap_or(PI / 2.0);
            let params = needs_phase(name).then_some(vec![phi_value]);
            let target = match library(name, params.as_deref()) {
                Ok(t) => t,
                Err(e) => return fail(e.to_string()),
            };
            (target, scheme_for(name), format!("{name}.qml"))
        }
        (None, Some(path)) => {
            let raw = match read_matrix_file(path) {
                Ok(m) => m,
                Err(e) => return fail(e),
            };
            let projected = match su_project(&raw) {
                Ok(m) => m,
                Err(e) => return fail(format!("{}: {e}", path.display())),
            };
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("raw")
                .to_string();
            let target = match GateTarget::new(name.clone(), projected, None) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", path.display())),
            };
            let scheme = if target.dim == 4 {
                Scheme::TwoQubit
            } else {
                Scheme::Device
            };
            (target, scheme, format!("{name}.qml"))
        }
        _ => return fail("exactly one of --gate or --matrix is required"),
    };

    if closed_form {
        return compile_closed_form(&target, phi, &cfg, out, report_path);
    }

    let compiled: Result<(CompileResult, Template, String), String> = match &scheme {
        Scheme::TwoQubit => compile2(&target, &cfg, &opt)
            .map(|r| (r, Template::two_qubit_15(), "two-qubit-15".to_string()))
            .map_err(|e| e.to_string()),
        Scheme::Device => compile1_device(&target, &cfg, &opt)
            .map(|r| {
                (
                    r,
                    Template::one_qubit_device(),
                    "one-qubit-device".to_string(),
                )
            })
            .map_err(|e| e.to_string()),
        Scheme::Embedded(side, inner) => {
            let params = needs_phase(inner).then_some(vec![phi.unwrap_or(PI / 2.0)]);
            match library(inner, params.as_deref()) {
                Err(e) => Err(e.to_string()),
                Ok(w) => {
                    let picked = match k {
                        Some(k) => compile1_embedded(&w, *side, k, &cfg, &opt).map(|r| (r, k)),
                        None => compile1_embedded_scan(&w, *side, 100, &cfg, &opt),
                    };
                    picked
                        .and_then(|(r, k)| {
                            let tpl = match side {
                                EmbeddedSide::Second => Template::embedded_second(k, &cfg)?,
                                EmbeddedSide::First => Template::embedded_first(k, &cfg)?,
                            };
                            Ok((r, tpl, format!("embedded-k{k}")))
                        })
                        .map_err(|e| e.to_string())
                }
            }
        }
    };
    let (result, template, scheme_name) = match compiled {
        Ok(v) => v,
        Err(e) => return fail(e),
    };

    let out_path = out.unwrap_or_else(|| PathBuf::from(default_out));
    let command = match template.to_command(&target.name, &result.times, &cfg) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    if let Err(e) = std::fs::write(&out_path, serialize(&command)) {
        return fail(format!("{}: {e}", out_path.display()));
    }

    let executed = execute(&command).expect("compiled command is well-formed");
    let fidelity = phase_fidelity(&target.matrix, &executed).expect("matched dims");
    let mut report = String::new();
    report.push_str(&format!("gate {}\n", target.name));
    report.push_str(&format!("scheme {scheme_name}\n"));
    report.push_str(&format!("seed {}\n", result.seed));
    report.push_str(&format!("energies {} {} {}\n", cfg.ec, cfg.ej, cfg.el));
    report.push_str(&format!("letters {}\n", result.times.len()));
    report.push_str(&format!("restarts_used {}\n", result.restarts_used));
    report.push_str(&format!("converged {}\n", result.converged));
    report.push_str(&format!("f_test {:.1e}\n", result.f_test));
    report.push_str(&format!("f_test_full {:e}\n", result.f_test));
    report.push_str(&format!("phase_fidelity {fidelity:.12}\n"));
    report.push_str(&format!("total_time {:.4}\n", command.total_time()));
    report.push_str(&format!(
        "wall_time_s {:.3}\n",
        started.elapsed().as_secs_f64()
    ));
    report.push_str(&format!("out {}\n", out_path.display()));
    print!("{report}");
    if let Some(path) = report_path {
        if let Err(e) = std::fs::write(&path, &report) {
            return fail(format!("{}: {e}", path.display()));
        }
    }

    if result.converged {
        EXIT_OK
    } else {
        if matches!(scheme, Scheme::Embedded(..)) {
            eprintln!(
                "warning: optimizer did not reach target_f; the harmonic may be too small, retry with a larger --k"
            );
        } else {
            eprintln!("warning: optimizer did not reach target_f; best schedule written anyway");
        }
        EXIT_NOT_CONVERGED
    }
}

fn compile_closed_form(
    target: &GateTarget,
    phi: Option<f64>,
    cfg: &EnergyConfig,
    out: Option<PathBuf>,
    report_path: Option<PathBuf>,
) -> u8 {
    let gate = match target.name.as_str() {
        "not" => ClosedFormGate::Not,
        "sqrt-not" => ClosedFormGate::SqrtNot,
        "had" => ClosedFormGate::Had,
        "phs" => ClosedFormGate::PhS(phi.unwrap_or(PI / 2.0)),
        other => {
            return fail(format!(
                "--closed-form supports not, sqrt-not, had, phs; got `{other}`"
            ))
        }
    };
    let command = match closed_form_command(gate, cfg) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let executed = execute(&command).expect("closed-form command is well-formed");
    let mut f = 0.0;
    for i in 0..executed.rows() {
        for j in 0..executed.cols() {
            f += (target.matrix[(i, j)] - executed[(i, j)]).norm_sqr();
        }
    }
    let out_path = out.unwrap_or_else(|| PathBuf::from(format!("{}.qml", target.name)));
    if let Err(e) = std::fs::write(&out_path, serialize(&command)) {
        return fail(format!("{}: {e}", out_path.display()));
    }
    let mut report = String::new();
    report.push_str(&format!("gate {}\n", target.name));
    report.push_str("scheme closed-form\n");
    report.push_str(&format!("energies {} {} {}\n", cfg.ec, cfg.ej, cfg.el));
    report.push_str(&format!("letters {}\n", command.letters.len()));
    report.push_str(&format!("f_test {f:.1e}\nf_test_full {f:e}\n"));
    report.push_str(&format!("out {}\n", out_path.display()));
    print!("{report}");
    if let Some(path) = report_path {
        if let Err(e) = std::fs::write(&path, &report) {
            return fail(format!("{}: {e}", path.display()));
        }
    }
    EXIT_OK
}

/// `dim N` header, then N*N whitespace-separated `re im` pairs, row-major;
/// `#` comments allowed.
fn read_matrix_file(path: &Path) -> Result<CMatrix, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut tokens = Vec::new();
    for line in text.lines() {
        let content = line.split('#').next().unwrap_or("");
        tokens.extend(content.split_whitespace().map(str::to_string));
    }
    if tokens.len() < 2 || tokens[0] != "dim" {
        return Err(format!("{}: expected `dim <2|4>` header", path.display()));
    }
    let dim: usize = match tokens[1].as_str() {
        "2" => 2,
        "4" => 4,
        other => {
            return Err(format!(
                "{}: dim must be 2 or 4, got `{other}`",
                path.display()
            ))
        }
    };
    let values: Result<Vec<f64>, _> = tokens[2..].iter().map(|t| t.parse::<f64>()).collect();
    let values = values.map_err(|e| format!("{}: bad number: {e}", path.display()))?;
    if values.len() != 2 * dim * dim {
        return Err(format!(
            "{}: expected {} numbers for a {dim}x{dim} complex matrix, got {}",
            path.display(),
            2 * dim * dim,
            values.len()
        ));
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        let base = 2 * (i * dim + j);
        c64(values[base], values[base + 1])
    }))
}

fn cmd_run(path: &Path) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let command = match parse(&text) {
        Ok(c) => c,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    if command.is_empty() {
        eprintln!("warning: schedule has no letters; the unitary is the identity");
    }
    let u = match execute(&command) {
        Ok(u) => u,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    for i in 0..u.rows() {
        let row: Vec<String> = (0..u.cols())
            .map(|j| format!("({:+.9e},{:+.9e})", u[(i, j)].re, u[(i, j)].im))
            .collect();
        println!("{}", row.join(" "));
    }
    EXIT_OK
}

fn cmd_verify(path: &Path, gate: &str, phi: Option<f64>, threshold: f64) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let command = match parse(&text) {
        Ok(c) => c,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let params = needs_phase(gate).then_some(vec![phi.unwrap_or(PI / 2.0)]);
    let target = match library(gate, params.as_deref()) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string()),
    };
    if target.dim != command.dim() {
        return fail(format!(
            "schedule is dim {} but gate `{gate}` is dim {}",
            command.dim(),
            target.dim
        ));
    }
    let u = match execute(&command) {
        Ok(u) => u,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    let mut f = 0.0;
    for i in 0..u.rows() {
        for j in 0..u.cols() {
            f += (target.matrix[(i, j)] - u[(i, j)]).norm_sqr();
        }
    }
    let fidelity = phase_fidelity(&target.matrix, &u).expect("matched dims");
    println!("file {}", path.display());
    println!("gate {gate}");
    println!("f_test {f:.1e}");
    println!("f_test_full {f:e}");
    println!("phase_fidelity {fidelity:.12}");
    println!("threshold {threshold:e}");
    let pass = f <= threshold;
    println!("status {}", if pass { "pass" } else { "fail" });
    if pass {
        EXIT_OK
    } else {
        EXIT_INPUT
    }
}

fn cmd_closure(tol: f64, energies: &EnergyArgs) -> u8 {
    let cfg = match energies.config() {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };

    let pauli_pair =
        GeneratorSet::new(vec![pauli(Pauli::Z), pauli(Pauli::X)]).expect("pauli pair is valid");
    let sets: Vec<(&str, GeneratorSet, usize)> = vec![
        ("pauli-z-x", pauli_pair, 3),
        ("minimal-su4", standard_generators(2).expect("n=2"), 15),
        ("device-su4", device_generators(&cfg), 15),
        ("minimal-su8", standard_generators(3).expect("n=3"), 63),
    ];

    let mut ok = true;
    for (name, set, expected) in sets {
        match lie_closure_dim(&set, tol) {
            Ok(closure) => {
                let hit = closure.dimension == expected;
                ok &= hit;
                println!(
                    "set {name:12} generators {:2} closure {:3} expected {:3} rounds {} [{}]",
                    set.elements.len(),
                    closure.dimension,
                    expected,
                    closure.rounds,
                    if hit { "ok" } else { "MISMATCH" }
                );
            }
            Err(e) => return fail(e.to_string()),
        }
    }

    let reconstruction = verify_device_reconstruction(&cfg);
    print!("{reconstruction}");
    ok &= reconstruction
        .checks
        .iter()
        .all(|c| c.status == IdentityStatus::Exact);

    let constructions = verify_constructions();
    print!("{constructions}");
    ok &= constructions.all_verified();

    if ok {
        EXIT_OK
    } else {
        EXIT_INPUT
    }
}

fn cmd_tables(dir: &Path) -> u8 {
    if !dir.is_dir() {
        return fail(format!("corpus directory {} not found", dir.display()));
    }
    let mut all = true;
    let mut passed = 0;
    for entry in &corpus::TABLE {
        match corpus::check_entry(dir, entry) {
            Ok(r) => {
                let expected = match entry.published_f {
                    Some(f) => format!("published {f:9.1e}"),
                    None => format!("entry tol {:9.1e}", entry.max_entry_error.unwrap()),
                };
                let harmonic = match r.harmonic {
                    Some((k, rel)) => format!(" k {k} rel {rel:.1e}"),
                    None => String::new(),
                };
                println!(
                    "table {:22} gate {:16} f_test {:9.3e} {expected}{harmonic} {}",
                    entry.file,
                    entry.gate,
                    r.f_test,
                    if r.passed { "PASS" } else { "FAIL" }
                );
                all &= r.passed;
                passed += u32::from(r.passed);
            }
            Err(e) => return fail(e.to_string()),
        }
    }
    for (a, b) in corpus::MIRROR_PAIRS {
        match corpus::check_mirror_pair(dir, a, b) {
            Ok(same) => {
                println!(
                    "mirror {a:22} vs {b:22} {}",
                    if same { "PASS" } else { "FAIL" }
                );
                all &= same;
            }
            Err(e) => return fail(e.to_string()),
        }
    }
    println!("summary {passed}/{} schedules PASS", corpus::TABLE.len());
    if all {
        EXIT_OK
    } else {
        eprintln!("error: corpus verification failed");
        EXIT_INPUT
    }
}
