//! Pure-state dynamics under frequency-selective ideal pulses.
//!
//! A pulse addresses whichever transitions of the level diagram lie within a
//! relative tolerance of its carrier frequency and rotates each matched
//! two-level subspace by its nominal angle; pulse shape and duration are
//! abstracted away. The two-pulse sequence π/2 @ ω₁⁰ followed by π @ ω₂¹
//! takes |00⟩ to a maximally entangled superposition of |00⟩ and |11⟩.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin_system::{transition_frequencies, BasisState, SystemParams, Transition};

/// Absolute tolerance on |Σ|a|² − 1| for a normalized state.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Default relative tolerance for matching a pulse or rf frequency to a
/// transition.
pub const DEFAULT_MATCH_TOLERANCE: f64 = 1e-9;

/// Pure state of the two qubits: four complex amplitudes ordered by
/// [`BasisState`] (S00, S01, S10, S11).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    amps: [Complex64; 4],
}

impl TwoQubitState {
    /// Wraps amplitudes after checking normalization.
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParams(format!(
                "state is not normalized: sum of squared amplitudes is {norm_sqr}"
            )));
        }
        Ok(Self { amps })
    }

    /// The ground state |00⟩.
    pub fn ground() -> Self {
        Self::basis(BasisState::S00)
    }

    /// The product basis state |σ₁σ₂⟩.
    pub fn basis(state: BasisState) -> Self {
        let mut amps = [Complex64::ZERO; 4];
        amps[state.index()] = Complex64::ONE;
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn amplitude(&self, state: BasisState) -> Complex64 {
        self.amps[state.index()]
    }

    /// Populations |a|², ordered by [`BasisState`].
    pub fn populations(&self) -> [f64; 4] {
        self.amps.map(|a| a.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Overlap magnitude |⟨self|other⟩|, 1 for states equal up to a global
    /// phase.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    pub(crate) fn from_amps_unchecked(amps: [Complex64; 4]) -> Self {
        Self { amps }
    }
}

/// An ideal rf pulse: carrier frequency, nominal rotation angle, and phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    frequency: f64,
    nominal_angle: f64,
    phase: f64,
}

impl Pulse {
    pub fn new(frequency: f64, nominal_angle: f64, phase: f64) -> Result<Self> {
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "pulse frequency must be positive (got {frequency})"
            )));
        }
        if !(nominal_angle > 0.0 && nominal_angle <= std::f64::consts::TAU) {
            return Err(Error::InvalidParams(format!(
                "pulse angle must lie in (0, 2π] (got {nominal_angle})"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParams("pulse phase must be finite".into()));
        }
        Ok(Self {
            frequency,
            nominal_angle,
            phase,
        })
    }

    /// π pulse at `frequency` with phase 0.
    pub fn pi(frequency: f64) -> Result<Self> {
        Self::new(frequency, std::f64::consts::PI, 0.0)
    }

    /// π/2 pulse at `frequency` with phase 0.
    pub fn half_pi(frequency: f64) -> Result<Self> {
        Self::new(frequency, std::f64::consts::FRAC_PI_2, 0.0)
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn nominal_angle(&self) -> f64 {
        self.nominal_angle
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }
}

/// Result of applying a pulse: the new state plus which transitions matched
/// the carrier frequency. An empty match set means the pulse was
/// off-resonant and the state is unchanged.
#[derive(Debug, Clone)]
pub struct PulseApplication {
    pub state: TwoQubitState,
    pub matched: Vec<Transition>,
}

impl PulseApplication {
    pub fn is_off_resonant(&self) -> bool {
        self.matched.is_empty()
    }
}

/// Applies the rotation
///
/// ```text
/// R(θ,φ) = [[cos θ/2,            −i·e^{−iφ}·sin θ/2],
///           [−i·e^{iφ}·sin θ/2,   cos θ/2          ]]
/// ```
///
/// to the (lower, upper) amplitude pair of every transition whose frequency
/// matches the pulse within `match_tolerance` (relative). Simultaneously
/// matched transitions are applied as a direct sum, which requires the
/// matched pairs to be disjoint; a pulse resonant with two transitions that
/// share a basis state is rejected.
pub fn apply_pulse(
    state: &TwoQubitState,
    pulse: &Pulse,
    params: &SystemParams,
    match_tolerance: f64,
) -> Result<PulseApplication> {
    if !(match_tolerance > 0.0 && match_tolerance <= 1e-3) {
        return Err(Error::InvalidParams(format!(
            "match tolerance must lie in (0, 1e-3] (got {match_tolerance})"
        )));
    }
    let freqs = transition_frequencies(params);
    let matched: Vec<Transition> = Transition::ALL
        .into_iter()
        .filter(|&t| {
            let f = freqs.get(t);
            (pulse.frequency - f).abs() <= match_tolerance * f
        })
        .collect();
    for (i, &a) in matched.iter().enumerate() {
        for &b in &matched[i + 1..] {
            if a.shares_state(b) {
                return Err(Error::OverlappingResonances {
                    first: a.label(),
                    second: b.label(),
                });
            }
        }
    }

    let half = 0.5 * pulse.nominal_angle;
    let cos = Complex64::new(half.cos(), 0.0);
    let sin = half.sin();
    let minus_i = Complex64::new(0.0, -1.0);
    let to_lower = minus_i * Complex64::from_polar(sin, -pulse.phase);
    let to_upper = minus_i * Complex64::from_polar(sin, pulse.phase);

    let mut amps = *state.amplitudes();
    for &t in &matched {
        let (lo, hi) = t.states();
        let (a, b) = (amps[lo.index()], amps[hi.index()]);
        amps[lo.index()] = cos * a + to_lower * b;
        amps[hi.index()] = to_upper * a + cos * b;
    }
    Ok(PulseApplication {
        state: TwoQubitState::from_amps_unchecked(amps),
        matched,
    })
}

/// Prepares the entangled state (|00⟩ + e^{iφ}|11⟩)/√2 from |00⟩ by a π/2
/// pulse at ω₁⁰ followed by a conditional π pulse at ω₂¹. All four
/// transition frequencies must be pairwise resolvable at `match_tolerance`.
pub fn prepare_bell(params: &SystemParams, match_tolerance: f64) -> Result<TwoQubitState> {
    let freqs = transition_frequencies(params);
    freqs.ensure_resolvable(match_tolerance)?;
    let half = apply_pulse(
        &TwoQubitState::ground(),
        &Pulse::half_pi(freqs.spin1_neighbor_ground())?,
        params,
        match_tolerance,
    )?;
    let full = apply_pulse(
        &half.state,
        &Pulse::pi(freqs.spin2_neighbor_excited())?,
        params,
        match_tolerance,
    )?;
    Ok(full.state)
}

/// Pure-state concurrence 2·|a₀₀·a₁₁ − a₀₁·a₁₀|: 0 for product states, 1 for
/// maximally entangled states.
pub fn concurrence(state: &TwoQubitState) -> f64 {
    let a = state.amplitudes();
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}
