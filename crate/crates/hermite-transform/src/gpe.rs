//! Split-step Hermite-spectral solver for the 1-D Gross-Pitaevskii
//! equation  i·∂ₜu = −½∂ₓₓu + ½x²u + β|u|²u.
//!
//! In the Hermite basis the linear part is diagonal: each coefficient
//! evolves as cₙ(t+τ) = e^{−iτ(n+½)}·cₙ(t) exactly.  The nonlinear part
//! is diagonal in value space: uₖ(t+τ) = e^{−iβτ|uₖ|²}·uₖ(t) pointwise,
//! since |u| is a pointwise invariant of that flow.  A step therefore
//! costs one synthesis and one analysis transform, and the quality of
//! the transform pair is what decides whether the discrete mass Σ|cₙ|²
//! survives thousands of steps.
//!
//! The state keeps both representations and tracks which one is current,
//! so each representation switch applies exactly one transform.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transform::{
    build_dense_pair, build_golub_welsch, Backend, DenseTransform, TransformFactors,
};

/// Operator-splitting scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    /// First-order: full nonlinear step, then full linear step.
    Lie,
    /// Second-order symmetric: half linear, full nonlinear, half linear,
    /// with interior half-steps merged pairwise.
    Strang,
}

impl Default for Splitting {
    fn default() -> Self {
        Splitting::Strang
    }
}

impl std::str::FromStr for Splitting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lie" => Ok(Splitting::Lie),
            "strang" => Ok(Splitting::Strang),
            other => Err(Error::Domain(format!(
                "unknown splitting '{other}' (expected lie|strang)"
            ))),
        }
    }
}

impl std::fmt::Display for Splitting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Splitting::Lie => "lie",
            Splitting::Strang => "strang",
        })
    }
}

/// Solver parameters.
#[derive(Clone, Debug)]
pub struct GpeConfig {
    pub n_modes: usize,
    pub tau: f64,
    pub beta: f64,
    pub t_end: f64,
    pub backend: Backend,
    pub splitting: Splitting,
    /// Times at which value snapshots are recorded (snapped to the
    /// nearest step boundary).
    pub snapshot_times: Vec<f64>,
}

impl GpeConfig {
    /// Defaults: τ = 10⁻³, β = 1, t_end = 5, Strang splitting.
    pub fn new(n_modes: usize, backend: Backend) -> Self {
        GpeConfig {
            n_modes,
            tau: 1e-3,
            beta: 1.0,
            t_end: 5.0,
            backend,
            splitting: Splitting::Strang,
            snapshot_times: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::Domain("n_modes must be at least 1".into()));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Domain(format!(
                "time step must be positive and finite, got {}",
                self.tau
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Domain(format!(
                "t_end must be nonnegative and finite, got {}",
                self.t_end
            )));
        }
        if !self.beta.is_finite() {
            return Err(Error::Domain("beta must be finite".into()));
        }
        for &t in &self.snapshot_times {
            if !t.is_finite() || t < 0.0 || t > self.t_end + 0.5 * self.tau {
                return Err(Error::Domain(format!(
                    "snapshot time {t} outside [0, t_end]"
                )));
            }
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_end / self.tau).round() as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Repr {
    Both,
    ValuesOnly,
    CoeffsOnly,
}

/// Solver state: u at the quadrature nodes and its Hermite coefficients,
/// lazily synchronized.
#[derive(Clone, Debug)]
pub struct GpeState {
    values: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    time: f64,
    repr: Repr,
}

impl GpeState {
    /// Value representation as of the last synchronization; stale after
    /// a linear step until the next synchronization.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Coefficient representation as of the last synchronization; stale
    /// after a nonlinear step until the next synchronization.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn values_current(&self) -> bool {
        matches!(self.repr, Repr::Both | Repr::ValuesOnly)
    }

    pub fn coeffs_current(&self) -> bool {
        matches!(self.repr, Repr::Both | Repr::CoeffsOnly)
    }
}

/// Σ|cₙ|², the discrete mass carried by a coefficient vector.
pub fn discrete_mass(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm_sqr()).sum()
}

/// L² distance between two coefficient vectors, zero-padding the shorter
/// one.  Because the basis functions are shared across sizes, this is
/// the exact L²(ℝ) distance between the functions they represent.
pub fn coeff_l2_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let common = a.len().min(b.len());
    let mut acc = 0.0;
    for (x, y) in a[..common].iter().zip(&b[..common]) {
        acc += (x - y).norm_sqr();
    }
    for x in &a[common..] {
        acc += x.norm_sqr();
    }
    for y in &b[common..] {
        acc += y.norm_sqr();
    }
    acc.sqrt()
}

/// u₀(x) = √8·e^{−(x+25)²/8}·e^{ix/2}: a moving Gaussian far off-center,
/// so resolving it demands a large number of modes.
fn initial_profile(x: f64) -> Complex64 {
    let amp = 8f64.sqrt() * (-(x + 25.0).powi(2) / 8.0).exp();
    Complex64::from_polar(amp, 0.5 * x)
}

/// Transform access used by the stepping engine: either the factored
/// form (orthogonal Q plus diagonal) or an explicit matrix pair.
enum OpsRef<'a> {
    Factored(&'a TransformFactors),
    Dense {
        t: &'a DenseTransform,
        tinv: &'a DenseTransform,
    },
}

impl OpsRef<'_> {
    fn nodes(&self) -> &[f64] {
        match self {
            OpsRef::Factored(f) => f.nodes(),
            OpsRef::Dense { t, .. } => t.nodes(),
        }
    }

    fn to_values(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            OpsRef::Factored(f) => f.forward_complex(coeffs),
            OpsRef::Dense { t, .. } => t.apply_complex(coeffs),
        }
    }

    fn to_coeffs(&self, values: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            OpsRef::Factored(f) => f.inverse_complex(values),
            OpsRef::Dense { tinv, .. } => tinv.apply_complex(values),
        }
    }
}

fn init_state(ops: &OpsRef<'_>) -> Result<GpeState> {
    let values: Vec<Complex64> = ops.nodes().iter().map(|&x| initial_profile(x)).collect();
    let coeffs = ops.to_coeffs(&values)?;
    Ok(GpeState {
        values,
        coeffs,
        time: 0.0,
        repr: Repr::Both,
    })
}

fn ensure_values(state: &mut GpeState, ops: &OpsRef<'_>) -> Result<()> {
    if !state.values_current() {
        state.values = ops.to_values(&state.coeffs)?;
        state.repr = Repr::Both;
    }
    Ok(())
}

fn ensure_coeffs(state: &mut GpeState, ops: &OpsRef<'_>) -> Result<()> {
    if !state.coeffs_current() {
        state.coeffs = ops.to_coeffs(&state.values)?;
        state.repr = Repr::Both;
    }
    Ok(())
}

/// Unit-modulus multipliers e^{−iτ(n+½)} for the linear flow.
fn linear_phases(n: usize, tau: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, -tau * (k as f64 + 0.5)))
        .collect()
}

fn apply_linear_phases(coeffs: &mut [Complex64], phases: &[Complex64]) {
    for (c, p) in coeffs.iter_mut().zip(phases) {
        *c *= p;
    }
}

fn apply_nonlinear_phases(values: &mut [Complex64], tau: f64, beta: f64) {
    for u in values.iter_mut() {
        *u *= Complex64::from_polar(1.0, -beta * tau * u.norm_sqr());
    }
}

/// Exact linear substep: cₙ ← e^{−iτ(n+½)}·cₙ; invalidates values.
pub fn linear_step(state: &mut GpeState, tau: f64, f: &TransformFactors) -> Result<()> {
    let ops = OpsRef::Factored(f);
    ensure_coeffs(state, &ops)?;
    apply_linear_phases(&mut state.coeffs, &linear_phases(f.n(), tau));
    state.repr = Repr::CoeffsOnly;
    Ok(())
}

/// Exact nonlinear substep: uₖ ← e^{−iβτ|uₖ|²}·uₖ; invalidates coeffs.
pub fn nonlinear_step(state: &mut GpeState, tau: f64, beta: f64, f: &TransformFactors) -> Result<()> {
    let ops = OpsRef::Factored(f);
    ensure_values(state, &ops)?;
    apply_nonlinear_phases(&mut state.values, tau, beta);
    state.repr = Repr::ValuesOnly;
    Ok(())
}

/// State at t = 0: u₀ sampled at the nodes, coefficients by one analysis
/// transform.
pub fn initial_condition(f: &TransformFactors) -> Result<GpeState> {
    init_state(&OpsRef::Factored(f))
}

/// One mass-log record: (step index, time, Σ|cₙ|²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassRecord {
    pub step: usize,
    pub time: f64,
    pub mass: f64,
}

/// Value snapshot at a step boundary.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub time: f64,
    pub values: Vec<Complex64>,
}

/// Full run output: per-step mass, requested snapshots, final state with
/// both representations synchronized.
#[derive(Clone, Debug)]
pub struct GpeTrajectory {
    pub nodes: Vec<f64>,
    pub mass_log: Vec<MassRecord>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: GpeState,
    pub steps: usize,
}

/// Run the solver, building the transform for the configured backend.
pub fn run(cfg: &GpeConfig) -> Result<GpeTrajectory> {
    cfg.validate()?;
    match cfg.backend {
        Backend::GolubWelsch => {
            let f = build_golub_welsch(cfg.n_modes)?;
            run_on_ops(cfg, &OpsRef::Factored(&f))
        }
        Backend::Direct | Backend::Bunck => {
            let (t, tinv) = build_dense_pair(cfg.n_modes, cfg.backend)?;
            run_on_ops(cfg, &OpsRef::Dense { t: &t, tinv: &tinv })
        }
    }
}

/// Run the solver on already-built factors (the backend field of the
/// config is ignored; the factors define the transform).
pub fn run_with_factors(cfg: &GpeConfig, f: &TransformFactors) -> Result<GpeTrajectory> {
    cfg.validate()?;
    if f.n() != cfg.n_modes {
        return Err(Error::SizeMismatch {
            expected: cfg.n_modes,
            got: f.n(),
        });
    }
    run_on_ops(cfg, &OpsRef::Factored(f))
}

fn run_on_ops(cfg: &GpeConfig, ops: &OpsRef<'_>) -> Result<GpeTrajectory> {
    let steps = cfg.steps();
    let tau = cfg.tau;
    let mut state = init_state(ops)?;

    // Requested snapshot times, snapped to step boundaries.
    let mut snap_steps = std::collections::BTreeMap::new();
    for &t in &cfg.snapshot_times {
        let idx = ((t / tau).round() as usize).min(steps);
        snap_steps.insert(idx, idx as f64 * tau);
    }

    let mut mass_log = Vec::with_capacity(steps + 1);
    let mut snapshots = Vec::new();

    let initial_mass = discrete_mass(&state.coeffs);
    if !initial_mass.is_finite() {
        return Err(Error::NonFinite { step: 0 });
    }
    mass_log.push(MassRecord {
        step: 0,
        time: 0.0,
        mass: initial_mass,
    });
    if let Some(&t) = snap_steps.get(&0) {
        snapshots.push(Snapshot {
            time: t,
            values: state.values.clone(),
        });
    }

    if steps > 0 {
        let phases_full = linear_phases(cfg.n_modes, tau);
        let phases_half = linear_phases(cfg.n_modes, 0.5 * tau);

        match cfg.splitting {
            Splitting::Strang => {
                // L(τ/2) · [N(τ) · L(τ)]^{steps−1} · N(τ) · L(τ/2), the
                // merged form of steps× [L(τ/2) N(τ) L(τ/2)].
                apply_linear_phases(&mut state.coeffs, &phases_half);
                state.repr = Repr::CoeffsOnly;
                for i in 0..steps {
                    ensure_values(&mut state, ops)?;
                    apply_nonlinear_phases(&mut state.values, tau, cfg.beta);
                    state.repr = Repr::ValuesOnly;
                    ensure_coeffs(&mut state, ops)?;
                    let step = i + 1;
                    state.time = step as f64 * tau;
                    log_mass(&mut mass_log, step, state.time, &state.coeffs)?;
                    if step == steps {
                        apply_linear_phases(&mut state.coeffs, &phases_half);
                        state.repr = Repr::CoeffsOnly;
                    } else {
                        if let Some(&t) = snap_steps.get(&step) {
                            // Un-merge: the true boundary state carries
                            // only the leading half of the next L step.
                            let mut boundary = state.coeffs.clone();
                            apply_linear_phases(&mut boundary, &phases_half);
                            snapshots.push(Snapshot {
                                time: t,
                                values: ops.to_values(&boundary)?,
                            });
                        }
                        apply_linear_phases(&mut state.coeffs, &phases_full);
                        state.repr = Repr::CoeffsOnly;
                    }
                }
            }
            Splitting::Lie => {
                for i in 0..steps {
                    ensure_values(&mut state, ops)?;
                    apply_nonlinear_phases(&mut state.values, tau, cfg.beta);
                    state.repr = Repr::ValuesOnly;
                    ensure_coeffs(&mut state, ops)?;
                    apply_linear_phases(&mut state.coeffs, &phases_full);
                    state.repr = Repr::CoeffsOnly;
                    let step = i + 1;
                    state.time = step as f64 * tau;
                    log_mass(&mut mass_log, step, state.time, &state.coeffs)?;
                    if step < steps {
                        if let Some(&t) = snap_steps.get(&step) {
                            snapshots.push(Snapshot {
                                time: t,
                                values: ops.to_values(&state.coeffs)?,
                            });
                        }
                    }
                }
            }
        }
    }

    ensure_values(&mut state, ops)?;
    if steps > 0 {
        if let Some(&t) = snap_steps.get(&steps) {
            snapshots.push(Snapshot {
                time: t,
                values: state.values.clone(),
            });
        }
    }

    Ok(GpeTrajectory {
        nodes: ops.nodes().to_vec(),
        mass_log,
        snapshots,
        final_state: state,
        steps,
    })
}

fn log_mass(
    log: &mut Vec<MassRecord>,
    step: usize,
    time: f64,
    coeffs: &[Complex64],
) -> Result<()> {
    let mass = discrete_mass(coeffs);
    if !mass.is_finite() {
        return Err(Error::NonFinite { step });
    }
    log.push(MassRecord { step, time, mass });
    Ok(())
}
