//! Switched Hamiltonians of the one- and two-qubit Josephson charge devices.
//!
//! Units: `hbar = k_B = 1`. Energies are dimensionless numbers equal to their
//! Kelvin values and time is dimensionless, so one time unit corresponds to
//! `hbar / (k_B * 1 K) ~ 7.64e-12 s`. All schedule tables in this crate use
//! that convention.
//!
//! Each junction has a gate-voltage switch selecting between two operating
//! points: the *idle* point (bias energy `E_c` on) and the *degeneracy* point
//! (bias off). The two-qubit device adds an inductor switch that couples the
//! junctions through a `sigma_y (x) sigma_y` term of strength `E_L`.

use crate::linalg::{pauli, tensor, CMatrix, Pauli};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeviceError {
    #[error("bias energy E_c must be non-negative, got {0}")]
    NegativeBias(f64),
    #[error("tunneling amplitude E_J must be positive, got {0}")]
    NonPositiveTunneling(f64),
    #[error("inductor energy E_L must be non-negative, got {0}")]
    NegativeInductor(f64),
}

/// The three device energies in Kelvin-equivalent units.
///
/// `E_c` is the bias energy at the idle point (gate-voltage controlled),
/// `E_J` the fixed tunneling amplitude of the junctions, and `E_L` the
/// inductor coupling energy. Both junctions share the same `E_J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyConfig {
    pub ec: f64,
    pub ej: f64,
    pub el: f64,
}

impl Default for EnergyConfig {
    /// The reference operating point: `E_c = 2.5 K`, `E_J = 0.1 K`,
    /// `E_L = 0.1 K`.
    fn default() -> Self {
        Self {
            ec: 2.5,
            ej: 0.1,
            el: 0.1,
        }
    }
}

impl EnergyConfig {
    /// Validated constructor: `E_c >= 0`, `E_J > 0`, `E_L >= 0`.
    ///
    /// `E_c = 0` is admitted so the degenerate-bias limit of the one-qubit
    /// formulas (`eta = pi/2`) stays expressible.
    pub fn new(ec: f64, ej: f64, el: f64) -> Result<Self, DeviceError> {
        let cfg = Self { ec, ej, el };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        // the comparisons are arranged to also reject NaN and infinities
        let ec_ok = self.ec.is_finite() && self.ec >= 0.0;
        if !ec_ok {
            return Err(DeviceError::NegativeBias(self.ec));
        }
        let ej_ok = self.ej.is_finite() && self.ej > 0.0;
        if !ej_ok {
            return Err(DeviceError::NonPositiveTunneling(self.ej));
        }
        let el_ok = self.el.is_finite() && self.el >= 0.0;
        if !el_ok {
            return Err(DeviceError::NegativeInductor(self.el));
        }
        Ok(())
    }
}

/// Binary switch triple `(e1, e2, l)` selecting a two-qubit Hamiltonian:
/// `e1`, `e2` put each junction at its idle (`true`) or degeneracy (`false`)
/// point, `l` turns the inductor coupling on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwitchState {
    pub e1: bool,
    pub e2: bool,
    pub l: bool,
}

impl SwitchState {
    /// Both junctions idle, uncoupled: switch choice `(1,1,0)`.
    pub const H1: SwitchState = SwitchState {
        e1: true,
        e2: true,
        l: false,
    };
    /// Both junctions degenerate, coupled: `(0,0,1)`.
    pub const H2: SwitchState = SwitchState {
        e1: false,
        e2: false,
        l: true,
    };
    /// First junction degenerate, second idle, uncoupled: `(0,1,0)`.
    pub const H3: SwitchState = SwitchState {
        e1: false,
        e2: true,
        l: false,
    };
    /// First junction idle, second degenerate, uncoupled: `(1,0,0)`.
    pub const H4: SwitchState = SwitchState {
        e1: true,
        e2: false,
        l: false,
    };

    pub fn new(e1: bool, e2: bool, l: bool) -> Self {
        Self { e1, e2, l }
    }

    /// All eight switch settings, in binary order.
    pub fn all() -> impl Iterator<Item = SwitchState> {
        (0..8u8).map(|b| SwitchState {
            e1: b & 4 != 0,
            e2: b & 2 != 0,
            l: b & 1 != 0,
        })
    }

    pub fn bits(&self) -> (u8, u8, u8) {
        (self.e1 as u8, self.e2 as u8, self.l as u8)
    }
}

impl std::fmt::Display for SwitchState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b, c) = self.bits();
        write!(f, "({a},{b},{c})")
    }
}

/// One-qubit device Hamiltonian.
///
/// Switch on (idle point): `H = (E_c/2) sigma_z - (E_J/2) sigma_x`.
/// Switch off (degeneracy point): `H = -(E_J/2) sigma_x`.
/// Exactly Hermitian and traceless by construction.
pub fn hamiltonian1(cfg: &EnergyConfig, on: bool) -> CMatrix {
    let mut h = CMatrix::zeros(2, 2);
    if on {
        h[(0, 0)] = Complex64::new(cfg.ec / 2.0, 0.0);
        h[(1, 1)] = Complex64::new(-cfg.ec / 2.0, 0.0);
    }
    h[(0, 1)] = Complex64::new(-cfg.ej / 2.0, 0.0);
    h[(1, 0)] = Complex64::new(-cfg.ej / 2.0, 0.0);
    h
}

/// Two-qubit device Hamiltonian for an arbitrary switch setting:
///
/// `H = (e1 E_c/2) sigma_z^(1) + (e2 E_c/2) sigma_z^(2)
///    - (E_J/2)(sigma_x^(1) + sigma_x^(2)) - (l E_L/2) sigma_y^(1) sigma_y^(2)`
///
/// All eight switch settings are legal; the compiler only emits the four
/// canonical ones ([`SwitchState::H1`]..[`SwitchState::H4`]). The result is
/// real symmetric: the only `sigma_y` occurrence is the pair
/// `sigma_y (x) sigma_y`, whose entries are real.
pub fn hamiltonian2(cfg: &EnergyConfig, s: SwitchState) -> CMatrix {
    let i2 = CMatrix::identity(2);
    let sz = pauli(Pauli::Z);
    let sx = pauli(Pauli::X);
    let sy = pauli(Pauli::Y);

    let mut h = CMatrix::zeros(4, 4);
    if s.e1 {
        h = &h + &tensor(&sz, &i2).scale(Complex64::new(cfg.ec / 2.0, 0.0));
    }
    if s.e2 {
        h = &h + &tensor(&i2, &sz).scale(Complex64::new(cfg.ec / 2.0, 0.0));
    }
    let sum_x = &tensor(&sx, &i2) + &tensor(&i2, &sx);
    h = &h + &sum_x.scale(Complex64::new(-cfg.ej / 2.0, 0.0));
    if s.l {
        h = &h + &tensor(&sy, &sy).scale(Complex64::new(-cfg.el / 2.0, 0.0));
    }
    h
}

/// Mixing angle `eta = arctan(E_J / E_c)`, in `(0, pi/2]`. The degenerate
/// bias `E_c = 0` gives `pi/2`.
pub fn mixing_angle(cfg: &EnergyConfig) -> f64 {
    cfg.ej.atan2(cfg.ec)
}

/// Level splitting at the idle point, `sqrt(E_J^2 + E_c^2)`; reduces to
/// `E_J` at the degeneracy point `E_c = 0`.
pub fn splitting(cfg: &EnergyConfig) -> f64 {
    cfg.ej.hypot(cfg.ec)
}

/// Energy eigenbasis of the idle one-qubit Hamiltonian.
///
/// `plus_state` and `minus_state` are the `+dE/2` and `-dE/2` eigenvectors of
/// [`hamiltonian1`] with the switch on; both are real unit vectors, mutually
/// orthogonal. In the charge basis `(|0 pairs>, |1 pair>)` they read
/// `plus = (cos(eta/2), -sin(eta/2))` and `minus = (sin(eta/2), cos(eta/2))`.
#[derive(Debug, Clone)]
pub struct QubitBasisInfo {
    /// Mixing angle in radians.
    pub eta: f64,
    /// Level splitting `dE`.
    pub delta_e: f64,
    /// Eigenvector with eigenvalue `+dE/2`.
    pub plus_state: [Complex64; 2],
    /// Eigenvector with eigenvalue `-dE/2`.
    pub minus_state: [Complex64; 2],
}

/// Compute the idle-point eigenbasis and verify the eigenvalue equations
/// `H |pm> = (pm dE/2) |pm>` to 1e-10.
pub fn idle_basis(cfg: &EnergyConfig) -> QubitBasisInfo {
    let eta = mixing_angle(cfg);
    let delta_e = splitting(cfg);
    let (c, s) = ((eta / 2.0).cos(), (eta / 2.0).sin());
    let plus = [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)];
    let minus = [Complex64::new(s, 0.0), Complex64::new(c, 0.0)];

    let h = hamiltonian1(cfg, true);
    for (state, sign) in [(&plus, 1.0), (&minus, -1.0)] {
        let hv = h.mul_vec(state);
        let defect = hv
            .iter()
            .zip(state.iter())
            .map(|(a, b)| (a - sign * (delta_e / 2.0) * b).norm())
            .fold(0.0, f64::max);
        assert!(
            defect <= 1e-10,
            "idle basis eigenvalue equation violated by {defect:.3e}"
        );
    }

    QubitBasisInfo {
        eta,
        delta_e,
        plus_state: plus,
        minus_state: minus,
    }
}
