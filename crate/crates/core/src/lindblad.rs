//! Time evolution under the multi-dissipator Lindblad equation
//!
//! ```text
//! dρ/dt = −i[H(t), ρ] + Σ_i λ_i (L_i ρ L_i† − ½{L_i†L_i, ρ})
//! ```
//!
//! `H(t)` is piecewise constant. Segment boundaries are integration
//! breakpoints, so no step ever straddles a discontinuity of the drive.
//! Trace is never renormalized; drift is reported on the result.

use crate::error::{Error, Result};
use crate::quantum::{
    dissipator_unchecked, expectation, hermiticity_defect, CMatrix, DensityMatrix, NoiseModel,
    Observable, C64,
};

const HERMITIAN_TOL: f64 = 1e-12;

/// Fixed-step count used when no explicit RK4 step is configured.
pub const DEFAULT_DIVISIONS: usize = 2000;

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub generator: CMatrix,
}

/// Piecewise-constant Hamiltonian drive.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSchedule {
    segments: Vec<Segment>,
}

impl HamiltonianSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let Some(first) = segments.first() else {
            return Err(Error::Config("Hamiltonian schedule has no segments".into()));
        };
        let dim = first.generator.nrows();
        for (k, seg) in segments.iter().enumerate() {
            if !(seg.duration > 0.0) || !seg.duration.is_finite() {
                return Err(Error::Config(format!(
                    "segment {k}: duration {} must be positive and finite",
                    seg.duration
                )));
            }
            let g = &seg.generator;
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.nrows().max(g.ncols()),
                });
            }
            let defect = hermiticity_defect(g);
            if defect > HERMITIAN_TOL {
                return Err(Error::InvalidMatrix(format!(
                    "segment {k}: generator is not Hermitian (defect {defect:e})"
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn constant(generator: CMatrix, duration: f64) -> Result<Self> {
        Self::new(vec![Segment {
            duration,
            generator,
        }])
    }

    /// `H = 0` for the whole horizon.
    pub fn idle(dim: usize, duration: f64) -> Result<Self> {
        Self::constant(CMatrix::zeros(dim, dim), duration)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn dim(&self) -> usize {
        self.segments[0].generator.nrows()
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Generator active at time `t`; segments are half-open `[start, end)`
    /// except the last, which also owns `t = T`.
    pub fn generator_at(&self, t: f64) -> &CMatrix {
        let mut start = 0.0;
        for seg in &self.segments {
            let end = start + seg.duration;
            if t < end {
                return &seg.generator;
            }
            start = end;
        }
        &self.segments[self.segments.len() - 1].generator
    }

    pub(crate) fn from_segments_unchecked(segments: Vec<Segment>) -> Self {
        Self { segments }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvolutionConfig {
    /// Classical RK4. `step: None` uses `T / DEFAULT_DIVISIONS`.
    Rk4Fixed { step: Option<f64> },
    /// Dormand–Prince 5(4) with local error control.
    Rk45Adaptive { tolerance: f64 },
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig::Rk4Fixed { step: None }
    }
}

impl EvolutionConfig {
    pub fn rk4(step: f64) -> Self {
        EvolutionConfig::Rk4Fixed { step: Some(step) }
    }

    pub fn rk45(tolerance: f64) -> Self {
        EvolutionConfig::Rk45Adaptive { tolerance }
    }

    fn validate(&self, horizon: f64) -> Result<()> {
        match *self {
            EvolutionConfig::Rk4Fixed { step: Some(h) } => {
                if !(h > 0.0) || !h.is_finite() {
                    return Err(Error::Config(format!("step {h} must be positive")));
                }
                if h > horizon {
                    return Err(Error::Config(format!(
                        "step {h} exceeds the evolution horizon {horizon}"
                    )));
                }
            }
            EvolutionConfig::Rk4Fixed { step: None } => {}
            EvolutionConfig::Rk45Adaptive { tolerance } => {
                if !(tolerance > 0.0) || !tolerance.is_finite() {
                    return Err(Error::Config(format!(
                        "tolerance {tolerance} must be positive"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub final_state: DensityMatrix,
    /// `|Tr ρ(T) − Tr ρ(0)|`
    pub trace_drift: f64,
    /// `max |ρ(T) − ρ(T)†|`
    pub hermiticity_drift: f64,
    pub steps_taken: usize,
}

/// Right-hand side for one constant drive segment, in the form
/// `−i(H_eff ρ − ρ H_eff†) + Σ λ L ρ L†` with `H_eff = H − (i/2) Σ λ L†L`.
struct Generator<'a> {
    heff: CMatrix,
    heff_adj: CMatrix,
    jumps: Vec<(f64, &'a CMatrix, CMatrix)>,
}

impl<'a> Generator<'a> {
    fn new(hamiltonian: &CMatrix, noise: &'a NoiseModel) -> Self {
        let mut heff = hamiltonian.clone();
        let mut jumps = Vec::new();
        for term in noise.terms() {
            if term.rate == 0.0 {
                continue;
            }
            heff -= term.jump.gram() * C64::new(0.0, 0.5 * term.rate);
            let l = term.jump.matrix();
            jumps.push((term.rate, l, l.adjoint()));
        }
        let heff_adj = heff.adjoint();
        Self {
            heff,
            heff_adj,
            jumps,
        }
    }

    fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = (&self.heff * rho - rho * &self.heff_adj) * C64::new(0.0, -1.0);
        for (rate, l, l_adj) in &self.jumps {
            out += (*l * rho * l_adj) * C64::from(*rate);
        }
        out
    }
}

fn check_dims(rho: usize, h: &HamiltonianSchedule, noise: &NoiseModel) -> Result<()> {
    if h.dim() != rho {
        return Err(Error::DimensionMismatch {
            expected: rho,
            found: h.dim(),
        });
    }
    if let Some(d) = noise.dim() {
        if d != rho {
            return Err(Error::DimensionMismatch {
                expected: rho,
                found: d,
            });
        }
    }
    Ok(())
}

/// `−i[H(t), ρ] + Σ_i λ_i 𝓛_i(ρ)`, evaluated term by term.
pub fn rhs(
    t: f64,
    rho: &CMatrix,
    hamiltonian: &HamiltonianSchedule,
    noise: &NoiseModel,
) -> Result<CMatrix> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::InvalidMatrix("state is not square".into()));
    }
    check_dims(rho.nrows(), hamiltonian, noise)?;
    let h = hamiltonian.generator_at(t);
    let mut out = (h * rho - rho * h) * C64::new(0.0, -1.0);
    for term in noise.terms() {
        out += dissipator_unchecked(&term.jump, rho) * C64::from(term.rate);
    }
    Ok(out)
}

fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn rk4_segment(
    gen: &Generator,
    rho: &mut CMatrix,
    duration: f64,
    step: f64,
    t0: f64,
) -> Result<usize> {
    let n = ((duration / step) - 1e-9).ceil().max(1.0) as usize;
    let h = duration / n as f64;
    let half = C64::from(0.5 * h);
    let full = C64::from(h);
    let sixth = C64::from(h / 6.0);
    let two = C64::from(2.0);
    for k in 0..n {
        let k1 = gen.apply(rho);
        let k2 = gen.apply(&(&*rho + &k1 * half));
        let k3 = gen.apply(&(&*rho + &k2 * half));
        let k4 = gen.apply(&(&*rho + &k3 * full));
        *rho += (k1 + (k2 + k3) * two + k4) * sixth;
        if !all_finite(rho) {
            return Err(Error::IntegrationDiverged {
                time: t0 + (k + 1) as f64 * h,
            });
        }
    }
    Ok(n)
}

// Dormand–Prince 5(4) tableau. The generator is autonomous within a
// segment, so the node row is not needed.
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn rk45_segment(
    gen: &Generator,
    rho: &mut CMatrix,
    duration: f64,
    tolerance: f64,
    t0: f64,
    h_init: &mut f64,
) -> Result<usize> {
    let min_step = 1e-14 * duration.max(1.0);
    let mut t = 0.0;
    let mut h = h_init.min(duration);
    let mut accepted = 0usize;
    let dim = rho.nrows();
    let mut k: Vec<CMatrix> = Vec::with_capacity(7);
    while t < duration {
        let last = t + h >= duration * (1.0 - 1e-14);
        if last {
            h = duration - t;
        }
        k.clear();
        for row in &DP_A {
            let mut y = rho.clone();
            for (kj, &a) in k.iter().zip(row) {
                if a != 0.0 {
                    y += kj * C64::from(a * h);
                }
            }
            k.push(gen.apply(&y));
        }
        let mut y5 = rho.clone();
        let mut err = CMatrix::zeros(dim, dim);
        for (stage, ks) in k.iter().enumerate() {
            if DP_B5[stage] != 0.0 {
                y5 += ks * C64::from(DP_B5[stage] * h);
            }
            let e = DP_B5[stage] - DP_B4[stage];
            if e != 0.0 {
                err += ks * C64::from(e * h);
            }
        }
        if !all_finite(&y5) {
            return Err(Error::IntegrationDiverged { time: t0 + t + h });
        }
        let scale = rho
            .iter()
            .chain(y5.iter())
            .map(|z| z.norm())
            .fold(1.0f64, f64::max);
        let err_norm = err.iter().map(|z| z.norm()).fold(0.0, f64::max) / (tolerance * scale);
        if err_norm <= 1.0 {
            *rho = y5;
            t = if last { duration } else { t + h };
            accepted += 1;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        let next = h * factor;
        if err_norm > 1.0 && next < min_step {
            return Err(Error::StepUnderflow { time: t0 + t });
        }
        if err_norm <= 1.0 && !last {
            *h_init = next;
        }
        h = next;
    }
    Ok(accepted)
}

/// Integrates the state over the whole schedule.
pub fn evolve(
    rho0: &DensityMatrix,
    hamiltonian: &HamiltonianSchedule,
    noise: &NoiseModel,
    config: &EvolutionConfig,
) -> Result<EvolutionResult> {
    check_dims(rho0.dim(), hamiltonian, noise)?;
    let horizon = hamiltonian.total_time();
    config.validate(horizon)?;

    let mut rho = rho0.matrix().clone();
    let mut steps = 0usize;
    let mut t0 = 0.0;
    let mut h_adaptive = match *config {
        EvolutionConfig::Rk45Adaptive { tolerance } => {
            (horizon * 1e-2).min(tolerance.powf(0.2) * horizon.max(1e-12))
        }
        _ => 0.0,
    };
    for seg in hamiltonian.segments() {
        let gen = Generator::new(&seg.generator, noise);
        steps += match *config {
            EvolutionConfig::Rk4Fixed { step } => {
                let step = step.unwrap_or(horizon / DEFAULT_DIVISIONS as f64);
                rk4_segment(&gen, &mut rho, seg.duration, step, t0)?
            }
            EvolutionConfig::Rk45Adaptive { tolerance } => {
                rk45_segment(&gen, &mut rho, seg.duration, tolerance, t0, &mut h_adaptive)?
            }
        };
        t0 += seg.duration;
    }

    let trace_drift = (rho.trace() - rho0.trace()).norm();
    let hermiticity_drift = hermiticity_defect(&rho);
    Ok(EvolutionResult {
        final_state: DensityMatrix::from_matrix_unchecked(rho)?,
        trace_drift,
        hermiticity_drift,
        steps_taken: steps,
    })
}

/// Initial state, drive, noise and observable: everything needed to produce
/// one noisy expectation value.
#[derive(Clone, Debug)]
pub struct OpenSystem {
    pub initial: DensityMatrix,
    pub hamiltonian: HamiltonianSchedule,
    pub noise: NoiseModel,
    pub observable: Observable,
}

impl OpenSystem {
    pub fn with_noise(&self, noise: NoiseModel) -> Self {
        Self {
            noise,
            ..self.clone()
        }
    }

    pub fn horizon(&self) -> f64 {
        self.hamiltonian.total_time()
    }
}

/// `Tr(𝓞 ρ(T))` for the system's own noise rates.
pub fn expectation_at_rates(system: &OpenSystem, config: &EvolutionConfig) -> Result<f64> {
    if system.observable.dim() != system.initial.dim() {
        return Err(Error::DimensionMismatch {
            expected: system.initial.dim(),
            found: system.observable.dim(),
        });
    }
    let result = evolve(
        &system.initial,
        &system.hamiltonian,
        &system.noise,
        config,
    )?;
    expectation(&system.observable, &result.final_state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{
        dephasing_jump, max_abs_diff, pauli_x, pauli_z, relaxation_jump, NoiseTerm,
    };

    fn single(jump: crate::quantum::JumpOperator, rate: f64) -> NoiseModel {
        NoiseModel::new(vec![NoiseTerm { jump, rate }]).unwrap()
    }

    #[test]
    fn rhs_without_dynamics_is_zero() {
        let rho = DensityMatrix::product("+").unwrap();
        let h = HamiltonianSchedule::idle(2, 1.0).unwrap();
        let out = rhs(0.3, rho.matrix(), &h, &NoiseModel::empty()).unwrap();
        assert_eq!(out, CMatrix::zeros(2, 2));
    }

    #[test]
    fn rhs_dephasing_damps_coherences() {
        let lambda = 0.07;
        let rho = DensityMatrix::product("+").unwrap();
        let h = HamiltonianSchedule::idle(2, 1.0).unwrap();
        let noise = single(dephasing_jump(0, 1).unwrap(), lambda);
        let out = rhs(0.0, rho.matrix(), &h, &noise).unwrap();
        assert!(out[(0, 0)].norm() < 1e-15 && out[(1, 1)].norm() < 1e-15);
        let want = -2.0 * lambda * rho.matrix()[(0, 1)].re;
        assert!((out[(0, 1)].re - want).abs() < 1e-15);
        assert!((out[(1, 0)].re - want).abs() < 1e-15);
    }

    #[test]
    fn rhs_commutator_is_off_diagonal() {
        let omega = 1.3;
        let rho = DensityMatrix::product("+").unwrap();
        let h = HamiltonianSchedule::constant(pauli_z() * C64::from(omega / 2.0), 1.0).unwrap();
        let out = rhs(0.0, rho.matrix(), &h, &NoiseModel::empty()).unwrap();
        // −i[ωZ/2, |+⟩⟨+|] = (ω/2)·[[0, −i], [i, 0]]
        assert!(out[(0, 0)].norm() < 1e-15 && out[(1, 1)].norm() < 1e-15);
        assert!((out[(0, 1)] - C64::new(0.0, -omega / 2.0)).norm() < 1e-15);
        assert!((out[(1, 0)] - C64::new(0.0, omega / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn generator_matches_literal_rhs() {
        let noise = NoiseModel::t1_t2(&[(0.1, 0.05), (0.2, 0.03)]).unwrap();
        let h = crate::quantum::pauli_string("XY").unwrap() * C64::from(0.4)
            + crate::quantum::pauli_string("ZI").unwrap() * C64::from(0.9);
        let sched = HamiltonianSchedule::constant(h.clone(), 1.0).unwrap();
        let rho = DensityMatrix::product("+r").unwrap();
        let literal = rhs(0.5, rho.matrix(), &sched, &noise).unwrap();
        let fast = Generator::new(&h, &noise).apply(rho.matrix());
        assert!(max_abs_diff(&literal, &fast) < 1e-14);
        assert!(literal.trace().norm() < 1e-12);
    }

    #[test]
    fn relaxation_and_dephasing_match_closed_form() {
        let (lambda, t) = (0.3, 2.0);
        let h = HamiltonianSchedule::idle(2, t).unwrap();
        let z = Observable::pauli("Z").unwrap();
        let x = Observable::pauli("X").unwrap();
        for config in [EvolutionConfig::default(), EvolutionConfig::rk45(1e-10)] {
            let relax = single(relaxation_jump(0, 1).unwrap(), lambda);
            let out = evolve(&DensityMatrix::basis("1").unwrap(), &h, &relax, &config).unwrap();
            let got = expectation(&z, &out.final_state).unwrap();
            assert!((got - (1.0 - 2.0 * (-lambda * t).exp())).abs() < 1e-6);
            assert!(out.trace_drift < 1e-8 && out.hermiticity_drift < 1e-8);

            let deph = single(dephasing_jump(0, 1).unwrap(), lambda);
            let out = evolve(&DensityMatrix::product("+").unwrap(), &h, &deph, &config).unwrap();
            let got = expectation(&x, &out.final_state).unwrap();
            assert!((got - (-2.0 * lambda * t).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn no_dynamics_is_identity() {
        let rho = DensityMatrix::product("+1").unwrap();
        let h = HamiltonianSchedule::idle(4, 3.0).unwrap();
        let out = evolve(&rho, &h, &NoiseModel::empty(), &EvolutionConfig::default()).unwrap();
        assert!(max_abs_diff(out.final_state.matrix(), rho.matrix()) < 1e-10);
        assert_eq!(out.steps_taken, DEFAULT_DIVISIONS);
    }

    #[test]
    fn steps_never_straddle_segments() {
        let h = HamiltonianSchedule::new(vec![
            Segment {
                duration: 0.35,
                generator: pauli_x(),
            },
            Segment {
                duration: 0.65,
                generator: pauli_z(),
            },
        ])
        .unwrap();
        let rho = DensityMatrix::basis("0").unwrap();
        let out = evolve(&rho, &h, &NoiseModel::empty(), &EvolutionConfig::rk4(0.1)).unwrap();
        assert_eq!(out.steps_taken, 4 + 7);
        assert_eq!(h.generator_at(0.35), &pauli_z());
        assert_eq!(h.generator_at(1.0), &pauli_z());
        assert_eq!(h.generator_at(0.2), &pauli_x());
    }

    #[test]
    fn config_errors() {
        let h = HamiltonianSchedule::idle(2, 1.0).unwrap();
        let rho = DensityMatrix::basis("0").unwrap();
        let noise = NoiseModel::empty();
        assert!(matches!(
            evolve(&rho, &h, &noise, &EvolutionConfig::rk4(2.0)),
            Err(Error::Config(_))
        ));
        assert!(evolve(&rho, &h, &noise, &EvolutionConfig::rk45(0.0)).is_err());
        assert!(HamiltonianSchedule::constant(pauli_x(), 0.0).is_err());
        assert!(HamiltonianSchedule::constant(crate::quantum::lowering(), 1.0).is_err());
        let h4 = HamiltonianSchedule::idle(4, 1.0).unwrap();
        assert!(matches!(
            evolve(&rho, &h4, &noise, &EvolutionConfig::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn divergence_is_reported() {
        let big = NoiseModel::new(vec![NoiseTerm {
            jump: crate::quantum::JumpOperator::custom("huge", pauli_z() * C64::from(1e160))
                .unwrap(),
            rate: 1.0,
        }])
        .unwrap();
        let h = HamiltonianSchedule::idle(2, 1.0).unwrap();
        let rho = DensityMatrix::product("+").unwrap();
        let err = evolve(&rho, &h, &big, &EvolutionConfig::rk4(0.5)).unwrap_err();
        assert!(matches!(err, Error::IntegrationDiverged { .. }));
        assert_eq!(err.exit_code(), 3);
    }
}
