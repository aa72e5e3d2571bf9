//! Cantilever-readout simulation: three-outcome projective measurement,
//! the two-step entanglement-verification protocol, a seeded Monte Carlo
//! harness, and the adiabatic-reversal condition.
//!
//! Driving one transition of the level diagram makes exactly one spin
//! resonant, conditional on its neighbor's state. The sign of the cantilever
//! frequency shift then reports the resonant spin's orientation, while a
//! vanishing shift projects the pair into the off-resonant subspace.

use std::io::{BufRead, Write};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::PhysicalConstants;
use crate::dynamics::{TwoQubitState, DEFAULT_MATCH_TOLERANCE};
use crate::error::{Error, Result};
use crate::spin_system::{transition_frequencies, BasisState, SystemParams, Transition};

/// Sign of the cantilever frequency shift observed in one measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftOutcome {
    /// Resonant spin projected to its ground state.
    NegativeShift,
    /// Resonant spin projected to its excited state.
    PositiveShift,
    /// State projected into the off-resonant two-dimensional subspace.
    ZeroShift,
}

impl ShiftOutcome {
    pub fn label(self) -> &'static str {
        match self {
            Self::NegativeShift => "negative",
            Self::PositiveShift => "positive",
            Self::ZeroShift => "zero",
        }
    }
}

impl std::fmt::Display for ShiftOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome of the two-step verification protocol.
///
/// The first measurement runs at ω₂⁰. A negative shift (O1) collapses to
/// |00⟩ and a positive shift (O3) to |01⟩. A zero shift is followed by a
/// second measurement at ω₁⁰: a positive shift there (O2a) identifies |10⟩,
/// a zero shift (O2b) identifies |11⟩. Repeated O1/O2b at equal rates is the
/// signature of the entangled |00⟩+|11⟩ superposition; any O2a or O3 rules
/// it out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolOutcome {
    O1,
    O2a,
    O2b,
    O3,
}

impl ProtocolOutcome {
    pub const ALL: [Self; 4] = [Self::O1, Self::O2a, Self::O2b, Self::O3];

    pub fn index(self) -> usize {
        match self {
            Self::O1 => 0,
            Self::O2a => 1,
            Self::O2b => 2,
            Self::O3 => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::O1 => "O1",
            Self::O2a => "O2a",
            Self::O2b => "O2b",
            Self::O3 => "O3",
        }
    }
}

impl std::fmt::Display for ProtocolOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One projective measurement: the rf frequency used, the observed shift,
/// and the collapsed (renormalized) state.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub rf_frequency: f64,
    pub shift: ShiftOutcome,
    pub collapsed: TwoQubitState,
    pub protocol: Option<ProtocolOutcome>,
}

/// Projective measurement at `rf_frequency`, which must match exactly one
/// transition within relative 1e-9.
///
/// The three outcomes have Born probabilities |a_ground|², |a_excited|² and
/// the remaining population; `random_draw` ∈ [0,1) selects among them by
/// cumulative subdivision in the fixed order [negative, positive, zero].
pub fn measure(
    state: &TwoQubitState,
    rf_frequency: f64,
    params: &SystemParams,
    random_draw: f64,
) -> Result<MeasurementRecord> {
    assert!(
        (0.0..1.0).contains(&random_draw),
        "random draw must lie in [0,1), got {random_draw}"
    );
    let freqs = transition_frequencies(params);
    let matched: Vec<Transition> = Transition::ALL
        .into_iter()
        .filter(|&t| {
            let f = freqs.get(t);
            (rf_frequency - f).abs() <= DEFAULT_MATCH_TOLERANCE * f
        })
        .collect();
    if matched.len() != 1 {
        return Err(Error::AmbiguousResonance {
            frequency: rf_frequency,
            matches: matched.len(),
        });
    }
    let transition = matched[0];
    let (ground, excited) = transition.states();
    let zero_subspace: Vec<BasisState> = BasisState::ALL
        .into_iter()
        .filter(|&s| s != ground && s != excited)
        .collect();

    let pops = state.populations();
    let p_negative = pops[ground.index()];
    let p_positive = pops[excited.index()];
    let p_zero: f64 = zero_subspace.iter().map(|s| pops[s.index()]).sum();

    let mut shift = if random_draw < p_negative {
        ShiftOutcome::NegativeShift
    } else if random_draw < p_negative + p_positive {
        ShiftOutcome::PositiveShift
    } else {
        ShiftOutcome::ZeroShift
    };
    // rounding can leave a sliver above p_neg + p_pos even when the zero
    // subspace is strictly empty; fall back to the populated outcome
    if shift == ShiftOutcome::ZeroShift && p_zero == 0.0 {
        shift = if p_positive > 0.0 {
            ShiftOutcome::PositiveShift
        } else {
            ShiftOutcome::NegativeShift
        };
    }

    let amps = state.amplitudes();
    let mut collapsed = [num_complex::Complex64::ZERO; 4];
    match shift {
        ShiftOutcome::NegativeShift => {
            collapsed[ground.index()] = amps[ground.index()] / p_negative.sqrt();
        }
        ShiftOutcome::PositiveShift => {
            collapsed[excited.index()] = amps[excited.index()] / p_positive.sqrt();
        }
        ShiftOutcome::ZeroShift => {
            let norm = p_zero.sqrt();
            for s in &zero_subspace {
                collapsed[s.index()] = amps[s.index()] / norm;
            }
        }
    }
    Ok(MeasurementRecord {
        rf_frequency,
        shift,
        collapsed: TwoQubitState::new(collapsed)?,
        protocol: None,
    })
}

/// Two-step verification: measure at ω₂⁰, and on a zero shift re-measure the
/// collapsed state at ω₁⁰. Returns the protocol outcome and the final state.
pub fn verification_protocol<R: Rng + ?Sized>(
    state: &TwoQubitState,
    params: &SystemParams,
    rng: &mut R,
) -> Result<(ProtocolOutcome, TwoQubitState)> {
    let freqs = transition_frequencies(params);
    freqs.ensure_resolvable(DEFAULT_MATCH_TOLERANCE)?;

    let first = measure(state, freqs.spin2_neighbor_ground(), params, rng.random())?;
    match first.shift {
        ShiftOutcome::NegativeShift => Ok((ProtocolOutcome::O1, first.collapsed)),
        ShiftOutcome::PositiveShift => Ok((ProtocolOutcome::O3, first.collapsed)),
        ShiftOutcome::ZeroShift => {
            // the zero shift left spin 1 excited, so |00⟩ and |01⟩ are empty
            let pops = first.collapsed.populations();
            assert!(
                pops[BasisState::S00.index()] <= 1e-12 && pops[BasisState::S01.index()] <= 1e-12,
                "zero shift must empty the resonant subspace"
            );
            let second = measure(
                &first.collapsed,
                freqs.spin1_neighbor_ground(),
                params,
                rng.random(),
            )?;
            match second.shift {
                ShiftOutcome::PositiveShift => Ok((ProtocolOutcome::O2a, second.collapsed)),
                ShiftOutcome::ZeroShift => Ok((ProtocolOutcome::O2b, second.collapsed)),
                ShiftOutcome::NegativeShift => unreachable!(
                    "negative second shift is impossible: spin 1 ground states are unpopulated"
                ),
            }
        }
    }
}

/// Histogram over the four protocol outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeHistogram {
    counts: [u64; 4],
}

/// CSV header for histogram output.
pub const HISTOGRAM_CSV_HEADER: &str = "outcome,count,fraction";

impl OutcomeHistogram {
    pub fn count(&self, outcome: ProtocolOutcome) -> u64 {
        self.counts[outcome.index()]
    }

    pub fn n_trials(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn fraction(&self, outcome: ProtocolOutcome) -> f64 {
        self.count(outcome) as f64 / self.n_trials() as f64
    }

    pub fn counts(&self) -> [(ProtocolOutcome, u64); 4] {
        ProtocolOutcome::ALL.map(|o| (o, self.count(o)))
    }

    /// Writes `outcome,count,fraction` rows in the fixed outcome order.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{HISTOGRAM_CSV_HEADER}")?;
        for outcome in ProtocolOutcome::ALL {
            writeln!(
                w,
                "{},{},{}",
                outcome.label(),
                self.count(outcome),
                self.fraction(outcome)
            )?;
        }
        Ok(())
    }

    /// Reads a histogram written by [`write_csv`](Self::write_csv); '#'
    /// comment lines are skipped.
    pub fn parse_csv(reader: impl BufRead) -> Result<Self> {
        let mut counts = [0u64; 4];
        let mut saw_header = false;
        let mut row = 0usize;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !saw_header {
                if trimmed != HISTOGRAM_CSV_HEADER {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected header '{HISTOGRAM_CSV_HEADER}'"),
                    });
                }
                saw_header = true;
                continue;
            }
            if row >= 4 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "too many histogram rows".into(),
                });
            }
            let expected = ProtocolOutcome::ALL[row];
            let fields: Vec<&str> = trimmed.split(',').collect();
            if fields.len() != 3 || fields[0] != expected.label() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected row for outcome {expected}"),
                });
            }
            counts[row] = fields[1].parse().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("invalid count: {e}"),
            })?;
            row += 1;
        }
        if row != 4 {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected 4 histogram rows, got {row}"),
            });
        }
        Ok(Self { counts })
    }
}

/// Runs `n_trials` independent prepare-and-verify cycles and tallies the
/// outcomes.
///
/// Each trial draws from its own ChaCha stream (`seed` fixed, stream =
/// trial index), so the aggregate counts are deterministic for a given seed
/// and independent of scheduling or trial order.
pub fn monte_carlo<F>(
    prepare: F,
    params: &SystemParams,
    n_trials: u64,
    seed: u64,
) -> Result<OutcomeHistogram>
where
    F: Fn() -> TwoQubitState,
{
    if n_trials == 0 {
        return Err(Error::InvalidParams("n_trials must be at least 1".into()));
    }
    let mut counts = [0u64; 4];
    for trial in 0..n_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let state = prepare();
        let (outcome, _) = verification_protocol(&state, params, &mut rng)?;
        counts[outcome.index()] += 1;
    }
    Ok(OutcomeHistogram { counts })
}

/// Parameters of the adiabatic-reversal check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticParams {
    b1: f64,
    delta_b: f64,
    omega_c: f64,
    eta_max: f64,
}

impl AdiabaticParams {
    /// * `b1` — rotating rf amplitude, T (> 0)
    /// * `delta_b` — peak effective-field sweep amplitude, T (≥ 0)
    /// * `omega_c` — cantilever angular frequency, rad/s (> 0)
    /// * `eta_max` — dimensionless threshold for "slow enough", in (0, 1)
    pub fn new(b1: f64, delta_b: f64, omega_c: f64, eta_max: f64) -> Result<Self> {
        if !(b1 > 0.0 && b1.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "b1 must be positive (got {b1})"
            )));
        }
        if !(delta_b >= 0.0 && delta_b.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "delta_b must be non-negative (got {delta_b})"
            )));
        }
        if !(omega_c > 0.0 && omega_c.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "omega_c must be positive (got {omega_c})"
            )));
        }
        if !(eta_max > 0.0 && eta_max < 1.0) {
            return Err(Error::InvalidParams(format!(
                "eta_max must lie in (0, 1) (got {eta_max})"
            )));
        }
        Ok(Self {
            b1,
            delta_b,
            omega_c,
            eta_max,
        })
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn delta_b(&self) -> f64 {
        self.delta_b
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn eta_max(&self) -> f64 {
        self.eta_max
    }
}

/// Result of the adiabaticity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticityCheck {
    /// Ratio of peak sweep rate to γ_e·B₁²; reversals are adiabatic when
    /// this is small.
    pub eta: f64,
    pub eta_max: f64,
    pub adiabatic: bool,
}

/// Evaluates the adiabatic-reversal condition |dB_ef/dt| ≪ γ_e·B₁².
///
/// For sinusoidal cantilever motion the peak sweep rate is ΔB·ω_c, giving
/// η = ΔB·ω_c / (γ_e·B₁²) with γ_e = g_e·μB/ħ. Both sides of the bound are
/// rates of change in tesla per second.
pub fn adiabaticity(params: &AdiabaticParams, constants: &PhysicalConstants) -> AdiabaticityCheck {
    let gamma = constants.gyromagnetic_ratio();
    let eta = params.delta_b * params.omega_c / (gamma * params.b1 * params.b1);
    AdiabaticityCheck {
        eta,
        eta_max: params.eta_max,
        adiabatic: eta < params.eta_max,
    }
}

/// Test-only RNG yielding a fixed sequence of uniform draws.
#[doc(hidden)]
pub struct DrawSequence {
    words: Vec<u64>,
    next: usize,
}

impl DrawSequence {
    /// Encodes each draw so that sampling f64 from the standard uniform
    /// distribution reproduces it (exactly for dyadic values).
    pub fn new(draws: &[f64]) -> Self {
        let words = draws
            .iter()
            .map(|d| {
                assert!((0.0..1.0).contains(d));
                ((d * (1u64 << 53) as f64) as u64) << 11
            })
            .collect();
        Self { words, next: 0 }
    }
}

impl RngCore for DrawSequence {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let word = self.words[self.next % self.words.len()];
        self.next += 1;
        word
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::prepare_bell;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    const DRAW_SWEEP: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 0.999];

    fn test_params() -> SystemParams {
        SystemParams::new(0.35, 1e5, 1e-9, 2.0060, TAU * 52.04e6).unwrap()
    }

    fn bell(params: &SystemParams) -> TwoQubitState {
        prepare_bell(params, 1e-9).unwrap()
    }

    #[test]
    fn ground_state_gives_negative_shift() {
        let params = test_params();
        let freqs = transition_frequencies(&params);
        for draw in DRAW_SWEEP {
            let rec = measure(
                &TwoQubitState::ground(),
                freqs.spin2_neighbor_ground(),
                &params,
                draw,
            )
            .unwrap();
            assert_eq!(rec.shift, ShiftOutcome::NegativeShift);
            assert_abs_diff_eq!(rec.collapsed.populations()[0], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn excited_spin2_gives_positive_shift() {
        let params = test_params();
        let freqs = transition_frequencies(&params);
        for draw in DRAW_SWEEP {
            let rec = measure(
                &TwoQubitState::basis(BasisState::S01),
                freqs.spin2_neighbor_ground(),
                &params,
                draw,
            )
            .unwrap();
            assert_eq!(rec.shift, ShiftOutcome::PositiveShift);
        }
    }

    #[test]
    fn bell_state_splits_between_negative_and_zero() {
        // Born oracle: p(neg) = |a00|² = 0.5, p(pos) = |a01|² = 0,
        // p(zero) = |a10|² + |a11|² = 0.5. The prepared |a00|² sits within
        // one ulp of 0.5, so the cumulative boundary is taken from the
        // state itself.
        let params = test_params();
        let freqs = transition_frequencies(&params);
        let state = bell(&params);
        assert_eq!(state.populations()[1], 0.0);
        for draw in DRAW_SWEEP {
            let rec = measure(&state, freqs.spin2_neighbor_ground(), &params, draw).unwrap();
            let expected = if draw < state.populations()[0] {
                ShiftOutcome::NegativeShift
            } else {
                ShiftOutcome::ZeroShift
            };
            assert_eq!(rec.shift, expected);
            assert_ne!(rec.shift, ShiftOutcome::PositiveShift);
            if rec.shift == ShiftOutcome::ZeroShift {
                let pops = rec.collapsed.populations();
                assert!(pops[0] <= 1e-12 && pops[1] <= 1e-12);
                assert_abs_diff_eq!(pops[3], 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn born_probabilities_sum_to_one() {
        let params = test_params();
        let freqs = transition_frequencies(&params);
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        for _ in 0..1000 {
            let raw: [Complex64; 4] = std::array::from_fn(|_| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let state = TwoQubitState::new(raw.map(|a| a / norm)).unwrap();
            let pops = state.populations();
            for t in Transition::ALL {
                let (g, e) = t.states();
                let p_zero: f64 = BasisState::ALL
                    .iter()
                    .filter(|s| **s != g && **s != e)
                    .map(|s| pops[s.index()])
                    .sum();
                let total = pops[g.index()] + pops[e.index()] + p_zero;
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
                // frequencies match exactly one transition each
                let rec = measure(&state, freqs.get(t), &params, 0.5).unwrap();
                assert!(rec.collapsed.norm_sqr() - 1.0 <= 1e-12);
            }
        }
    }

    #[test]
    fn collapse_is_idempotent() {
        let params = test_params();
        let freqs = transition_frequencies(&params);
        let state = bell(&params);
        for first_draw in DRAW_SWEEP {
            let rec = measure(&state, freqs.spin2_neighbor_ground(), &params, first_draw).unwrap();
            for second_draw in DRAW_SWEEP {
                let again = measure(
                    &rec.collapsed,
                    freqs.spin2_neighbor_ground(),
                    &params,
                    second_draw,
                )
                .unwrap();
                assert_eq!(again.shift, rec.shift);
                assert_abs_diff_eq!(again.collapsed.fidelity(&rec.collapsed), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rf_matching_zero_or_many_lines_fails() {
        let params = test_params();
        let err = measure(&TwoQubitState::ground(), 1e9, &params, 0.5).unwrap_err();
        assert!(matches!(
            err,
            Error::AmbiguousResonance { matches: 0, .. }
        ));
        // D = 0 collapses ω₂⁰ and ω₂¹ onto each other: two matches
        let degenerate = SystemParams::new(0.35, 1e5, 1e-9, 2.0060, 0.0).unwrap();
        let freqs = transition_frequencies(&degenerate);
        let err = measure(
            &TwoQubitState::ground(),
            freqs.spin2_neighbor_ground(),
            &degenerate,
            0.5,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::AmbiguousResonance { matches: 2, .. }
        ));
    }

    #[test]
    fn protocol_identifies_each_basis_state() {
        let params = test_params();
        let cases = [
            (BasisState::S00, ProtocolOutcome::O1),
            (BasisState::S01, ProtocolOutcome::O3),
            (BasisState::S10, ProtocolOutcome::O2a),
            (BasisState::S11, ProtocolOutcome::O2b),
        ];
        for (state, expected) in cases {
            for d1 in DRAW_SWEEP {
                for d2 in DRAW_SWEEP {
                    let mut rng = DrawSequence::new(&[d1, d2]);
                    let (outcome, _) =
                        verification_protocol(&TwoQubitState::basis(state), &params, &mut rng)
                            .unwrap();
                    assert_eq!(outcome, expected, "state {state} draws ({d1},{d2})");
                }
            }
        }
    }

    #[test]
    fn protocol_on_bell_state_yields_only_o1_and_o2b() {
        // The prepared state carries an O(1e-17) amplitude crumb on |10⟩
        // from cos(π/2), so the O2a interval is [0, ~4e-33): any second
        // draw above that sliver can only produce O1 or O2b.
        let params = test_params();
        let state = bell(&params);
        for d1 in DRAW_SWEEP {
            for d2 in [2.0f64.powi(-30), 0.25, 0.5, 0.75, 0.999] {
                let mut rng = DrawSequence::new(&[d1, d2]);
                let (outcome, final_state) =
                    verification_protocol(&state, &params, &mut rng).unwrap();
                match outcome {
                    ProtocolOutcome::O1 => {
                        assert_abs_diff_eq!(
                            final_state.populations()[0],
                            1.0,
                            epsilon = 1e-12
                        );
                    }
                    ProtocolOutcome::O2b => {
                        assert_abs_diff_eq!(
                            final_state.populations()[3],
                            1.0,
                            epsilon = 1e-12
                        );
                    }
                    other => panic!("Bell state produced {other}"),
                }
            }
        }
    }

    #[test]
    fn protocol_requires_resolvable_lines() {
        let degenerate = SystemParams::new(0.35, 1e5, 1e-9, 2.0060, 0.0).unwrap();
        let mut rng = DrawSequence::new(&[0.5]);
        assert!(matches!(
            verification_protocol(&TwoQubitState::ground(), &degenerate, &mut rng),
            Err(Error::UnresolvableTransitions { .. })
        ));
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let params = test_params();
        let state = bell(&params);
        let h1 = monte_carlo(|| state.clone(), &params, 2000, 42).unwrap();
        let h2 = monte_carlo(|| state.clone(), &params, 2000, 42).unwrap();
        assert_eq!(h1, h2);
        let h3 = monte_carlo(|| state.clone(), &params, 2000, 43).unwrap();
        assert_eq!(h3.n_trials(), 2000);
        assert_ne!(h1.counts, h3.counts);
    }

    #[test]
    fn monte_carlo_bell_statistics() {
        let params = test_params();
        let state = bell(&params);
        let hist = monte_carlo(|| state.clone(), &params, 10_000, 42).unwrap();
        assert_eq!(hist.count(ProtocolOutcome::O2a), 0);
        assert_eq!(hist.count(ProtocolOutcome::O3), 0);
        assert_eq!(hist.n_trials(), 10_000);
        let f1 = hist.fraction(ProtocolOutcome::O1);
        assert!((0.48..=0.52).contains(&f1), "O1 fraction {f1}");
    }

    #[test]
    fn monte_carlo_constant_ground_state() {
        let params = test_params();
        let hist = monte_carlo(TwoQubitState::ground, &params, 100, 1).unwrap();
        assert_eq!(hist.count(ProtocolOutcome::O1), 100);
        assert!(monte_carlo(TwoQubitState::ground, &params, 0, 1).is_err());
    }

    #[test]
    fn empirical_frequencies_match_born_probabilities() {
        // Asymmetric superposition: amplitudes (0.8, 0, 0, 0.6) give
        // p(O1) = 0.64, p(O2b) = 0.36.
        let params = test_params();
        let state = TwoQubitState::new([
            Complex64::new(0.8, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(0.6, 0.0),
        ])
        .unwrap();
        let n = 100_000u64;
        let hist = monte_carlo(|| state.clone(), &params, n, 7).unwrap();
        for (outcome, p) in [
            (ProtocolOutcome::O1, 0.64),
            (ProtocolOutcome::O2a, 0.0),
            (ProtocolOutcome::O2b, 0.36),
            (ProtocolOutcome::O3, 0.0),
        ] {
            let bound = 4.0 * (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (hist.fraction(outcome) - p).abs() <= bound,
                "{outcome}: {} vs {p}",
                hist.fraction(outcome)
            );
        }
    }

    #[test]
    fn histogram_csv_round_trips() {
        let params = test_params();
        let state = bell(&params);
        let hist = monte_carlo(|| state.clone(), &params, 5000, 9).unwrap();
        let mut csv = Vec::new();
        hist.write_csv(&mut csv).unwrap();
        let parsed = OutcomeHistogram::parse_csv(csv.as_slice()).unwrap();
        assert_eq!(hist, parsed);
        let mut csv2 = Vec::new();
        parsed.write_csv(&mut csv2).unwrap();
        assert_eq!(csv, csv2);
    }

    #[test]
    fn adiabaticity_matches_hand_oracle() {
        // Hand oracle: 0.01 · (2π·5000) / (1.7609e11 · 1e-6) ≈ 1.784e-3.
        let p = AdiabaticParams::new(1e-3, 0.01, TAU * 5000.0, 0.1).unwrap();
        let check = adiabaticity(&p, &PhysicalConstants::CODATA_2018);
        let oracle = 0.01 * (TAU * 5000.0) / (1.7609e11 * 1e-6);
        assert_relative_eq!(check.eta, oracle, max_relative = 1e-3);
        assert_relative_eq!(check.eta, 1.784124412686515e-3, max_relative = 1e-12);
        assert!(check.adiabatic);
    }

    #[test]
    fn static_field_is_trivially_adiabatic() {
        let p = AdiabaticParams::new(1e-3, 0.0, TAU * 5000.0, 0.1).unwrap();
        let check = adiabaticity(&p, &PhysicalConstants::CODATA_2018);
        assert_eq!(check.eta, 0.0);
        assert!(check.adiabatic);
    }

    #[test]
    fn eta_scales_inverse_square_in_b1() {
        let c = PhysicalConstants::CODATA_2018;
        let base = adiabaticity(&AdiabaticParams::new(1e-3, 0.01, TAU * 5000.0, 0.1).unwrap(), &c);
        let weak = adiabaticity(&AdiabaticParams::new(1e-4, 0.01, TAU * 5000.0, 0.1).unwrap(), &c);
        assert_relative_eq!(weak.eta, 100.0 * base.eta, max_relative = 1e-12);
        // tiny drive violates the condition
        let tiny = adiabaticity(&AdiabaticParams::new(1e-6, 0.01, TAU * 5000.0, 0.1).unwrap(), &c);
        assert!(!tiny.adiabatic);
        assert_relative_eq!(tiny.eta, 1.784124412686515e3, max_relative = 1e-12);
    }

    #[test]
    fn eta_invariant_under_compensated_rescaling() {
        // ΔB → λ·ΔB with B₁ → √λ·B₁ leaves η unchanged.
        let c = PhysicalConstants::CODATA_2018;
        for lambda in [4.0f64, 0.25, 2.7] {
            let base = adiabaticity(&AdiabaticParams::new(2e-3, 0.02, TAU * 8000.0, 0.1).unwrap(), &c);
            let scaled = adiabaticity(
                &AdiabaticParams::new(lambda.sqrt() * 2e-3, lambda * 0.02, TAU * 8000.0, 0.1)
                    .unwrap(),
                &c,
            );
            assert_relative_eq!(scaled.eta, base.eta, max_relative = 1e-12);
        }
    }

    #[test]
    fn adiabatic_params_validation() {
        assert!(AdiabaticParams::new(0.0, 0.01, 1.0, 0.1).is_err());
        assert!(AdiabaticParams::new(1e-3, -0.01, 1.0, 0.1).is_err());
        assert!(AdiabaticParams::new(1e-3, 0.01, 0.0, 0.1).is_err());
        assert!(AdiabaticParams::new(1e-3, 0.01, 1.0, 1.0).is_err());
        assert!(AdiabaticParams::new(1e-3, 0.01, 1.0, 0.0).is_err());
        // delta_b = 0 is allowed: a static effective field never sweeps
        assert!(AdiabaticParams::new(1e-3, 0.0, 1.0, 0.1).is_ok());
    }
}
