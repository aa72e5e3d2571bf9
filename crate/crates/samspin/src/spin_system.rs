//! Level structure of the two-spin system.
//!
//! Two spin-1/2 electron qubits sit a distance `a` apart along y in a static
//! field B₀‖z with gradient G = |∂Bz/∂y|, coupled through the zz component of
//! the dipole-dipole tensor. With both magnitudes G and D = |D_zz| taken
//! non-negative, the field on spin 2 is B₀ and on spin 1 is B₀ + G·a, giving
//! four product levels and four addressable single-spin transitions.

use crate::constants::{PhysicalConstants, BOHR_MAGNETON, REDUCED_PLANCK};
use crate::error::{Error, Result};

/// Product basis |σ₁σ₂⟩ with σ = 0 ground, 1 excited; the first index is
/// spin 1. The declaration order S00 < S01 < S10 < S11 fixes the amplitude
/// layout used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisState {
    S00,
    S01,
    S10,
    S11,
}

impl BasisState {
    pub const ALL: [Self; 4] = [Self::S00, Self::S01, Self::S10, Self::S11];

    /// Position in the amplitude vector.
    pub fn index(self) -> usize {
        match self {
            Self::S00 => 0,
            Self::S01 => 1,
            Self::S10 => 2,
            Self::S11 => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::S00 => "S00",
            Self::S01 => "S01",
            Self::S10 => "S10",
            Self::S11 => "S11",
        }
    }

    /// Spin-1 component (0 or 1).
    pub fn spin1(self) -> u8 {
        match self {
            Self::S00 | Self::S01 => 0,
            Self::S10 | Self::S11 => 1,
        }
    }

    /// Spin-2 component (0 or 1).
    pub fn spin2(self) -> u8 {
        match self {
            Self::S00 | Self::S10 => 0,
            Self::S01 | Self::S11 => 1,
        }
    }
}

impl std::fmt::Display for BasisState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{}{}>", self.spin1(), self.spin2())
    }
}

/// The four single-spin transitions of the level diagram, tagged by which
/// spin flips and the state of its neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    /// Spin 2 flips while spin 1 is in the ground state (S00 ↔ S01).
    Spin2NeighborGround,
    /// Spin 1 flips while spin 2 is in the ground state (S00 ↔ S10).
    Spin1NeighborGround,
    /// Spin 2 flips while spin 1 is excited (S10 ↔ S11).
    Spin2NeighborExcited,
    /// Spin 1 flips while spin 2 is excited (S01 ↔ S11).
    Spin1NeighborExcited,
}

impl Transition {
    pub const ALL: [Self; 4] = [
        Self::Spin2NeighborGround,
        Self::Spin1NeighborGround,
        Self::Spin2NeighborExcited,
        Self::Spin1NeighborExcited,
    ];

    /// The (lower, upper) basis states connected by this transition.
    pub fn states(self) -> (BasisState, BasisState) {
        match self {
            Self::Spin2NeighborGround => (BasisState::S00, BasisState::S01),
            Self::Spin1NeighborGround => (BasisState::S00, BasisState::S10),
            Self::Spin2NeighborExcited => (BasisState::S10, BasisState::S11),
            Self::Spin1NeighborExcited => (BasisState::S01, BasisState::S11),
        }
    }

    /// Short label used in tables: `w<spin>_<neighbor>`.
    pub fn label(self) -> &'static str {
        match self {
            Self::Spin2NeighborGround => "w2_0",
            Self::Spin1NeighborGround => "w1_0",
            Self::Spin2NeighborExcited => "w2_1",
            Self::Spin1NeighborExcited => "w1_1",
        }
    }

    /// True when the two transitions touch a common basis state.
    pub fn shares_state(self, other: Self) -> bool {
        let (a, b) = self.states();
        let (c, d) = other.states();
        a == c || a == d || b == c || b == d
    }
}

impl std::fmt::Display for Transition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Physical parameters of the two-spin system, stored in SI units.
///
/// `gradient` and `coupling` are non-negative magnitudes (G and D); the sign
/// convention is folded into the level expressions. Validation at
/// construction guarantees that all four transition frequencies are positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    b0: f64,
    gradient: f64,
    separation: f64,
    g_zz: f64,
    coupling: f64,
}

impl SystemParams {
    /// Validates and stores parameters.
    ///
    /// * `b0` — field at the second spin, T (> 0)
    /// * `gradient` — G = |∂Bz/∂y|, T/m (≥ 0)
    /// * `separation` — spin-spin distance a, m (> 0)
    /// * `g_zz` — g-tensor zz component (> 0)
    /// * `coupling` — D = |D_zz|/ħ as angular frequency, rad/s (≥ 0)
    pub fn new(b0: f64, gradient: f64, separation: f64, g_zz: f64, coupling: f64) -> Result<Self> {
        if !(b0 > 0.0 && b0.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "b0 must be positive and finite (got {b0})"
            )));
        }
        if !(gradient >= 0.0 && gradient.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "gradient must be non-negative and finite (got {gradient})"
            )));
        }
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "separation must be positive and finite (got {separation})"
            )));
        }
        if !(g_zz > 0.0 && g_zz.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "g_zz must be positive and finite (got {g_zz})"
            )));
        }
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "coupling must be non-negative and finite (got {coupling})"
            )));
        }
        let params = Self {
            b0,
            gradient,
            separation,
            g_zz,
            coupling,
        };
        // The lowest transition frequency is the spin-2 line at ω₂ − D/2;
        // a non-positive value signals an unphysical regime for this level
        // scheme.
        let freqs = transition_frequencies(&params);
        for t in Transition::ALL {
            let f = freqs.get(t);
            if !f.is_finite() || f <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "transition {t} has non-positive frequency {f} rad/s \
                     (coupling too large for the Zeeman splitting)"
                )));
            }
        }
        Ok(params)
    }

    /// Field at the second spin, T.
    pub fn b0(&self) -> f64 {
        self.b0
    }

    /// Gradient magnitude G, T/m.
    pub fn gradient(&self) -> f64 {
        self.gradient
    }

    /// Spin-spin separation a, m.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// g-tensor zz component.
    pub fn g_zz(&self) -> f64 {
        self.g_zz
    }

    /// Dipolar coupling magnitude D, rad/s.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Larmor angular frequency of spin 2: g·μB·B₀/ħ.
    pub fn larmor_spin2(&self) -> f64 {
        self.g_zz * BOHR_MAGNETON * self.b0 / REDUCED_PLANCK
    }

    /// Larmor angular frequency of spin 1: g·μB·(B₀ + G·a)/ħ.
    pub fn larmor_spin1(&self) -> f64 {
        self.g_zz * BOHR_MAGNETON * (self.b0 + self.gradient * self.separation) / REDUCED_PLANCK
    }
}

/// Energies of the four product states as angular frequencies (E/ħ, rad/s),
/// ordered by [`BasisState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevels {
    levels: [f64; 4],
}

impl EnergyLevels {
    pub fn level(&self, state: BasisState) -> f64 {
        self.levels[state.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisState, f64)> + '_ {
        BasisState::ALL.iter().map(|&s| (s, self.levels[s.index()]))
    }

    /// Sum over the four levels; zero up to rounding because the Zeeman and
    /// coupling terms cancel pairwise.
    pub fn total(&self) -> f64 {
        self.levels.iter().sum()
    }
}

/// Energy levels of the four product states.
///
/// With ω₁ = g·μB·(B₀+G·a)/ħ, ω₂ = g·μB·B₀/ħ and D the coupling:
///
/// ```text
/// E(00)/ħ = −ω₂/2 − ω₁/2 + D/4      E(01)/ħ = +ω₂/2 − ω₁/2 − D/4
/// E(10)/ħ = −ω₂/2 + ω₁/2 − D/4      E(11)/ħ = +ω₂/2 + ω₁/2 + D/4
/// ```
pub fn energy_levels(params: &SystemParams) -> EnergyLevels {
    let half_w2 = 0.5 * params.larmor_spin2();
    let half_w1 = 0.5 * params.larmor_spin1();
    let quarter_d = 0.25 * params.coupling;
    EnergyLevels {
        levels: [
            -half_w2 - half_w1 + quarter_d,
            half_w2 - half_w1 - quarter_d,
            -half_w2 + half_w1 - quarter_d,
            half_w2 + half_w1 + quarter_d,
        ],
    }
}

/// The four transition frequencies, kept in factored form (two Larmor
/// frequencies plus the coupling) so that the level-diagram identities hold
/// exactly:
///
/// ```text
/// ω₂⁰ = ω₂ − D/2    ω₁⁰ = ω₁ − D/2    ω₂¹ = ω₂ + D/2    ω₁¹ = ω₁ + D/2
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionFrequencies {
    larmor_spin1: f64,
    larmor_spin2: f64,
    coupling: f64,
    gradient_split: f64,
}

impl TransitionFrequencies {
    /// Angular frequency of one transition, rad/s.
    pub fn get(&self, transition: Transition) -> f64 {
        let half_d = 0.5 * self.coupling;
        match transition {
            Transition::Spin2NeighborGround => self.larmor_spin2 - half_d,
            Transition::Spin1NeighborGround => self.larmor_spin1 - half_d,
            Transition::Spin2NeighborExcited => self.larmor_spin2 + half_d,
            Transition::Spin1NeighborExcited => self.larmor_spin1 + half_d,
        }
    }

    /// ω₂⁰, rad/s.
    pub fn spin2_neighbor_ground(&self) -> f64 {
        self.get(Transition::Spin2NeighborGround)
    }

    /// ω₁⁰, rad/s.
    pub fn spin1_neighbor_ground(&self) -> f64 {
        self.get(Transition::Spin1NeighborGround)
    }

    /// ω₂¹, rad/s.
    pub fn spin2_neighbor_excited(&self) -> f64 {
        self.get(Transition::Spin2NeighborExcited)
    }

    /// ω₁¹, rad/s.
    pub fn spin1_neighbor_excited(&self) -> f64 {
        self.get(Transition::Spin1NeighborExcited)
    }

    /// All four transitions with their frequencies, in [`Transition::ALL`]
    /// order.
    pub fn all(&self) -> [(Transition, f64); 4] {
        Transition::ALL.map(|t| (t, self.get(t)))
    }

    /// The splitting ω_i¹ − ω_i⁰ for either spin. Both differences reduce to
    /// the stored coupling, so this is exact by construction; forming the
    /// difference of the two rounded sums instead would pick up ~1e-14
    /// relative noise.
    pub fn coupling_splitting(&self) -> f64 {
        self.coupling
    }

    /// The splitting ω₁ᵏ − ω₂ᵏ = g·μB·G·a/ħ, independent of the neighbor
    /// state k. Evaluated from the product form; the difference of the two
    /// Larmor frequencies agrees only up to their cancellation noise.
    pub fn gradient_splitting(&self) -> f64 {
        self.gradient_split
    }

    /// Checks that all four frequencies are pairwise separated by more than
    /// `rel_tol` relative to the larger of each pair, so every transition can
    /// be addressed individually.
    pub fn ensure_resolvable(&self, rel_tol: f64) -> Result<()> {
        for (i, &a) in Transition::ALL.iter().enumerate() {
            for &b in &Transition::ALL[i + 1..] {
                let (fa, fb) = (self.get(a), self.get(b));
                if (fa - fb).abs() <= rel_tol * fa.max(fb) {
                    return Err(Error::UnresolvableTransitions {
                        first: a.label(),
                        second: b.label(),
                        first_freq: fa,
                        second_freq: fb,
                        tolerance: rel_tol,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Transition frequencies of the four allowed lines. Parameters validated by
/// [`SystemParams::new`] always produce positive frequencies.
pub fn transition_frequencies(params: &SystemParams) -> TransitionFrequencies {
    TransitionFrequencies {
        larmor_spin1: params.larmor_spin1(),
        larmor_spin2: params.larmor_spin2(),
        coupling: params.coupling,
        gradient_split: params.g_zz * BOHR_MAGNETON * (params.gradient * params.separation)
            / REDUCED_PLANCK,
    }
}

/// Absolute g value from a shift quoted in ppm: g_e + shift·1e-6.
pub fn g_from_shift(shift_ppm: f64, constants: &PhysicalConstants) -> f64 {
    debug_assert!(shift_ppm.is_finite());
    constants.free_electron_g + shift_ppm * 1e-6
}
