//! `samspin` — numerical toolkit for a pair of dipolar-coupled electron-spin
//! qubits hosted in a molecular monolayer.
//!
//! The crate covers the full desk-scale workflow:
//!
//! - [`spin_system`]: energy levels and the four addressable transition
//!   frequencies of two spins in a field gradient, plus g-shift ingestion;
//! - [`dipole`]: the dipole-dipole coupling tensor by the classical
//!   point-dipole formula and by quadrature over a discrete spin density,
//!   with distance sweeps and the spin-density file format;
//! - [`dynamics`]: frequency-selective ideal pulses on the two-qubit pure
//!   state and the two-pulse entangled-state preparation;
//! - [`oscar`]: cantilever-readout measurement with three outcomes, the
//!   entanglement-verification branching protocol, seeded Monte Carlo
//!   statistics, and the adiabatic-reversal condition.
//!
//! All inputs are SI; energies and frequencies are handled as angular
//! frequency (rad/s) with display helpers in [`constants`].

pub mod constants;
pub mod dipole;
pub mod dynamics;
pub mod error;
pub mod oscar;
pub mod spin_system;

pub use constants::PhysicalConstants;
pub use dipole::{
    classical_tensor, coupling_frequency, parse_spin_density, spin_density_tensor, sweep_distance,
    write_spin_density, DipoleTensor, SpinDensity, SpinPoint, SweepMethod, SweepRow, TensorMethod,
    Vec3,
};
pub use dynamics::{apply_pulse, concurrence, prepare_bell, Pulse, PulseApplication, TwoQubitState};
pub use error::{Error, Result};
pub use oscar::{
    adiabaticity, measure, monte_carlo, verification_protocol, AdiabaticParams, AdiabaticityCheck,
    MeasurementRecord, OutcomeHistogram, ProtocolOutcome, ShiftOutcome,
};
pub use spin_system::{
    energy_levels, g_from_shift, transition_frequencies, BasisState, EnergyLevels, SystemParams,
    Transition, TransitionFrequencies,
};
