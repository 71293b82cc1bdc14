//! Ehrlich–Aberth simultaneous iteration.
//!
//! Each coordinate is treated as a unit charge in the field of the roots
//! (attracting) and of all other coordinates (repelling):
//!
//! ```text
//! z_k ← z_k − 1 / ( p'(z_k)/p(z_k) − Σ_{i≠k} 1/(z_k − z_i) )
//! ```

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::matching::{a_posteriori_ok, match_roots};
use crate::newton::starting_points;
use crate::numeric::{Complex, OpCount, OpCounter};
use crate::poly::{log_derivative, newton_ratio, residual, EvalError, LogDerivative, PolyRepr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStyle {
    /// Every correction uses the vector from before the sweep.
    Jacobi,
    /// Corrections are applied in ascending index order and used at once.
    GaussSeidel,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StopMode {
    /// Stop when every coordinate moved by less than `ε·max(1, |z|)`.
    StepSize(f64),
    /// Stop when the vector matches the reference roots within `δ`.
    /// Matching is bookkeeping and is not counted.
    Reference { delta: f64, roots: Vec<Complex> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AberthConfig {
    pub style: SweepStyle,
    /// Starting circle radius in units of `root_scale`.
    pub start_radius: f64,
    pub root_scale: f64,
    pub max_sweeps: usize,
    pub stop: StopMode,
    /// `None` picks `1e-12` times the starting radius.
    pub collision_eps: Option<f64>,
    pub phase: Option<f64>,
    /// Separation used by the a-posteriori check in step-size mode.
    pub sep_delta: f64,
    pub max_residual: f64,
    /// Number of recent states remembered for exact-cycle detection; 0
    /// disables it.
    pub cycle_window: usize,
}

impl Default for AberthConfig {
    fn default() -> Self {
        AberthConfig {
            style: SweepStyle::GaussSeidel,
            start_radius: 1.05,
            root_scale: 1.0,
            max_sweeps: 1000,
            stop: StopMode::StepSize(1e-13),
            collision_eps: None,
            phase: None,
            sep_delta: 1e-8,
            max_residual: 1e-6,
            cycle_window: 16,
        }
    }
}

impl AberthConfig {
    pub fn radius(&self) -> f64 {
        self.start_radius * self.root_scale
    }

    pub fn collision_eps(&self) -> f64 {
        self.collision_eps.unwrap_or(1e-12 * self.radius())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_sweeps < 1 {
            return Err("max_sweeps must be at least 1".into());
        }
        if !(self.radius() > 0.0 && self.radius().is_finite()) {
            return Err("start radius must be positive".into());
        }
        match &self.stop {
            StopMode::StepSize(eps) if !(*eps > 0.0) => Err("eps must be positive".into()),
            StopMode::Reference { delta, .. } if !(*delta > 0.0) => Err("delta must be positive".into()),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum CorrectionError {
    #[error("coordinate {k} coincides with coordinate {other}")]
    CoordinateCollision { k: usize, other: usize },
    #[error("net charge at coordinate {0} vanishes")]
    ZeroDenominator(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AberthState {
    pub z: Vec<Complex>,
    pub sweep: usize,
    /// Coordinates whose last step was below the step-size tolerance.
    pub converged_mask: Vec<bool>,
}

impl AberthState {
    pub fn new(z: Vec<Complex>) -> Self {
        let n = z.len();
        AberthState { z, sweep: 0, converged_mask: vec![false; n] }
    }
}

/// The updated coordinate `z'_k`, in the form
/// `z_k − 1/(p'/p(z_k) − Σ_{i≠k} 1/(z_k − z_i))`. A coordinate sitting
/// exactly on a root is returned unchanged.
pub fn aberth_correction(
    ctx: &mut OpCounter,
    poly: &PolyRepr,
    z: &[Complex],
    k: usize,
    collision_eps: f64,
) -> Result<Complex, CorrectionError> {
    let zk = z[k];
    let charge = match log_derivative(ctx, poly, zk)? {
        LogDerivative::AtRoot => return Ok(zk),
        LogDerivative::Value(v) => v,
    };
    let repulsion = repulsion(ctx, z, k, collision_eps)?;
    let net = ctx.sub(charge, repulsion);
    let step = ctx.recip(net).map_err(|_| CorrectionError::ZeroDenominator(k))?;
    if !step.is_finite() {
        return Err(CorrectionError::ZeroDenominator(k));
    }
    Ok(ctx.sub(zk, step))
}

/// The same update written as a damped Newton step:
/// `z_k − (p/p') / (1 − (p/p')·Σ_{i≠k} 1/(z_k − z_i))`.
pub fn aberth_correction_direct(
    ctx: &mut OpCounter,
    poly: &PolyRepr,
    z: &[Complex],
    k: usize,
    collision_eps: f64,
) -> Result<Complex, CorrectionError> {
    let zk = z[k];
    let ratio = newton_ratio(ctx, poly, zk)?;
    if ratio.is_zero() {
        return Ok(zk);
    }
    let sum = repulsion(ctx, z, k, collision_eps)?;
    let w = ctx.mul(ratio, sum);
    let den = ctx.sub(Complex::ONE, w);
    let step = ctx.div(ratio, den).map_err(|_| CorrectionError::ZeroDenominator(k))?;
    Ok(ctx.sub(zk, step))
}

fn repulsion(ctx: &mut OpCounter, z: &[Complex], k: usize, collision_eps: f64) -> Result<Complex, CorrectionError> {
    let zk = z[k];
    let mut sum = Complex::ZERO;
    for (i, &zi) in z.iter().enumerate() {
        if i == k {
            continue;
        }
        let diff = ctx.sub(zk, zi);
        if diff.max_abs_component() < collision_eps {
            return Err(CorrectionError::CoordinateCollision { k, other: i });
        }
        let r = ctx.recip(diff).map_err(|_| CorrectionError::CoordinateCollision { k, other: i })?;
        sum = ctx.add(sum, r);
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AberthError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("starting vector has {got} entries, expected {expected}")]
    StartLength { expected: usize, got: usize },
}

/// What happened during one sweep.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepOutcome {
    /// `max_k |z'_k − z_k| / max(1, |z'_k|)`.
    pub max_step: f64,
    /// Coordinates held because the net charge vanished or evaluation failed.
    pub held: Vec<usize>,
    /// Coordinates moved off a collision.
    pub perturbed: Vec<usize>,
}

/// One sweep over all coordinates in ascending order.
///
/// With `step_tol = Some(ε)` the step sizes are computed with counted
/// operations, since they drive the stopping rule, and a coordinate is
/// marked converged when its step is below `ε`. With `None` they are
/// measured off the books and only exact fixed points are marked.
pub fn aberth_sweep(
    ctx: &mut OpCounter,
    poly: &PolyRepr,
    state: &mut AberthState,
    style: SweepStyle,
    collision_eps: f64,
    step_tol: Option<f64>,
) -> SweepOutcome {
    let mut out = SweepOutcome::default();
    let old = state.z.clone();
    let mut frozen = old.clone();
    for k in 0..old.len() {
        let src = match style {
            SweepStyle::Jacobi => &mut frozen,
            SweepStyle::GaussSeidel => &mut state.z,
        };
        let mut result = aberth_correction(ctx, poly, src, k, collision_eps);
        if let Err(CorrectionError::CoordinateCollision { .. }) = result {
            let kick = Complex::from_polar(collision_eps, k as f64);
            src[k] = ctx.add(src[k], kick);
            out.perturbed.push(k);
            result = aberth_correction(ctx, poly, src, k, collision_eps);
        }
        let next = match result {
            Ok(w) if w.is_finite() => w,
            _ => {
                out.held.push(k);
                src[k]
            }
        };
        let step = match step_tol {
            Some(_) => {
                let d = ctx.sub(next, old[k]);
                let s = ctx.abs(d);
                let size = ctx.abs(next);
                ctx.real_mul(s, 1.0 / size.max(1.0))
            }
            None => next.dist(old[k]) / next.norm().max(1.0),
        };
        out.max_step = out.max_step.max(step);
        state.converged_mask[k] = step < step_tol.unwrap_or(0.0) || step == 0.0;
        if style == SweepStyle::Jacobi {
            frozen[k] = old[k];
        }
        state.z[k] = next;
    }
    state.sweep += 1;
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AberthReport {
    pub degree: usize,
    /// Final approximation vector.
    pub roots: Vec<Complex>,
    pub sweeps: usize,
    pub ops: OpCount,
    pub per_sweep_ops: Vec<OpCount>,
    pub max_steps: Vec<f64>,
    /// The stopping rule fired.
    pub converged: bool,
    pub max_sweeps_exceeded: bool,
    /// Period of an exactly repeating state, when one was seen.
    pub cycle: Option<usize>,
    pub held_events: usize,
    pub perturbations: usize,
    /// `|p(z_k)|`, computed off the books.
    pub residuals: Vec<f64>,
    /// Reference match in reference mode, a-posteriori check otherwise.
    pub verified: bool,
}

impl AberthReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Ehrlich–Aberth advanced one sweep at a time.
#[derive(Clone, Debug)]
pub struct AberthRun<'a> {
    poly: &'a PolyRepr,
    cfg: AberthConfig,
    state: AberthState,
    ops: OpCount,
    per_sweep_ops: Vec<OpCount>,
    max_steps: Vec<f64>,
    converged: bool,
    cycle: Option<usize>,
    held_events: usize,
    perturbations: usize,
    recent: VecDeque<(u64, usize, Vec<Complex>)>,
    done: bool,
}

impl<'a> AberthRun<'a> {
    /// Starts from `d` points on the configured circle.
    pub fn new(poly: &'a PolyRepr, cfg: &AberthConfig) -> Result<Self, AberthError> {
        let start = starting_points(cfg.radius(), poly.degree(), cfg.phase);
        Self::from_start(poly, cfg, start)
    }

    pub fn from_start(poly: &'a PolyRepr, cfg: &AberthConfig, start: Vec<Complex>) -> Result<Self, AberthError> {
        cfg.validate().map_err(AberthError::Config)?;
        if start.len() != poly.degree() {
            return Err(AberthError::StartLength { expected: poly.degree(), got: start.len() });
        }
        let mut run = AberthRun {
            poly,
            cfg: cfg.clone(),
            state: AberthState::new(start),
            ops: OpCount::default(),
            per_sweep_ops: Vec::new(),
            max_steps: Vec::new(),
            converged: false,
            cycle: None,
            held_events: 0,
            perturbations: 0,
            recent: VecDeque::new(),
            done: false,
        };
        if let StopMode::Reference { delta, roots } = &run.cfg.stop {
            if match_roots(&run.state.z, roots, *delta).success() {
                run.converged = true;
                run.done = true;
            }
        }
        Ok(run)
    }

    pub fn state(&self) -> &AberthState {
        &self.state
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn ops(&self) -> OpCount {
        self.ops
    }

    /// One sweep plus the stopping checks. Returns false once finished.
    pub fn step(&mut self, ctx: &mut OpCounter) -> bool {
        if self.done {
            return false;
        }
        let before = ctx.snapshot();
        let tol = match self.cfg.stop {
            StopMode::StepSize(eps) => Some(eps),
            StopMode::Reference { .. } => None,
        };
        let out = aberth_sweep(ctx, self.poly, &mut self.state, self.cfg.style, self.cfg.collision_eps(), tol);
        let spent = ctx.snapshot() - before;
        self.ops += spent;
        self.per_sweep_ops.push(spent);
        self.max_steps.push(out.max_step);
        self.held_events += out.held.len();
        self.perturbations += out.perturbed.len();

        self.converged = match &self.cfg.stop {
            StopMode::StepSize(eps) => out.max_step < *eps,
            StopMode::Reference { delta, roots } => match_roots(&self.state.z, roots, *delta).success(),
        };
        if self.converged || self.state.sweep >= self.cfg.max_sweeps {
            self.done = true;
        } else if self.cfg.cycle_window > 0 {
            self.detect_cycle();
        }
        !self.done
    }

    fn detect_cycle(&mut self) {
        let mut h = DefaultHasher::new();
        for z in &self.state.z {
            z.re.to_bits().hash(&mut h);
            z.im.to_bits().hash(&mut h);
        }
        let hash = h.finish();
        let sweep = self.state.sweep;
        if let Some((_, at, _)) = self
            .recent
            .iter()
            .find(|(hh, _, v)| *hh == hash && *v == self.state.z)
        {
            self.cycle = Some(sweep - at);
            self.done = true;
            return;
        }
        if self.recent.len() == self.cfg.cycle_window {
            self.recent.pop_front();
        }
        self.recent.push_back((hash, sweep, self.state.z.clone()));
    }

    pub fn run(mut self, ctx: &mut OpCounter) -> AberthReport {
        while self.step(ctx) {}
        self.finish()
    }

    pub fn finish(self) -> AberthReport {
        let mut scratch = OpCounter::new();
        let residuals: Vec<f64> = self.state.z.iter().map(|&z| residual(&mut scratch, self.poly, z)).collect();
        let degree = self.poly.degree();
        let verified = match &self.cfg.stop {
            StopMode::Reference { .. } => self.converged,
            StopMode::StepSize(_) => {
                self.converged
                    && a_posteriori_ok(&self.state.z, &residuals, degree, self.cfg.sep_delta, self.cfg.max_residual)
            }
        };
        AberthReport {
            degree,
            sweeps: self.state.sweep,
            max_sweeps_exceeded: !self.converged && self.cycle.is_none() && self.state.sweep >= self.cfg.max_sweeps,
            roots: self.state.z,
            ops: self.ops,
            per_sweep_ops: self.per_sweep_ops,
            max_steps: self.max_steps,
            converged: self.converged,
            cycle: self.cycle,
            held_events: self.held_events,
            perturbations: self.perturbations,
            residuals,
            verified,
        }
    }
}

/// Runs from `d` points on the configured circle.
pub fn run_aberth(ctx: &mut OpCounter, poly: &PolyRepr, cfg: &AberthConfig) -> Result<AberthReport, AberthError> {
    Ok(AberthRun::new(poly, cfg)?.run(ctx))
}

/// Runs from an explicit starting vector.
pub fn run_aberth_from(
    ctx: &mut OpCounter,
    poly: &PolyRepr,
    cfg: &AberthConfig,
    start: Vec<Complex>,
) -> Result<AberthReport, AberthError> {
    Ok(AberthRun::from_start(poly, cfg, start)?.run(ctx))
}

/// The starting vector for post-processing: the `found` roots plus fresh
/// circle points for the missing ones, ordered by angle.
pub fn postprocess_start(found: &[Complex], degree: usize, cfg: &AberthConfig) -> Result<Vec<Complex>, AberthError> {
    if found.len() > degree {
        return Err(AberthError::StartLength { expected: degree, got: found.len() });
    }
    let fresh = starting_points(cfg.radius(), degree - found.len(), cfg.phase);
    let mut all: Vec<Complex> = found.iter().copied().chain(fresh).collect();
    all.sort_by(|a, b| a.arg().rem_euclid(2.0 * PI).total_cmp(&b.arg().rem_euclid(2.0 * PI)));
    Ok(all)
}

/// Ehrlich–Aberth started from roots found by another method.
pub fn ea_postprocess(
    ctx: &mut OpCounter,
    poly: &PolyRepr,
    found: &[Complex],
    cfg: &AberthConfig,
) -> Result<AberthReport, AberthError> {
    let start = postprocess_start(found, poly.degree(), cfg)?;
    run_aberth_from(ctx, poly, cfg, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::newton_step;
    use crate::poly::{chebyshev_roots, grid_roots};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn quad_minus_one() -> PolyRepr {
        PolyRepr::Coefficients(vec![c(-1.0, 0.0), Complex::ZERO, Complex::ONE])
    }

    /// Independent evaluation of the damped-Newton form for p = z² − 1.
    fn oracle_z2_minus_1(z: &[Complex64], k: usize) -> Complex64 {
        let zk = z[k];
        let ratio = (zk * zk - 1.0) / (2.0 * zk);
        let sum: Complex64 = z.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &zi)| 1.0 / (zk - zi)).sum();
        zk - ratio / (1.0 - ratio * sum)
    }

    #[test]
    fn correction_example() {
        let mut ctx = OpCounter::new();
        let p = quad_minus_one();
        let got = aberth_correction(&mut ctx, &p, &[c(2.0, 0.0), c(-2.0, 0.0)], 0, 1e-12).unwrap();
        let want = oracle_z2_minus_1(&[Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0)], 0);
        assert!((want.re - 14.0 / 13.0).abs() < 1e-15 && want.im == 0.0);
        assert!((got.re - 14.0 / 13.0).abs() < 1e-15 && got.im.abs() < 1e-15);
    }

    #[test]
    fn degree_one_is_newton() {
        let mut ctx = OpCounter::new();
        let p = PolyRepr::Coefficients(vec![c(-5.0, 1.0), c(2.0, 0.5)]);
        for z in [c(3.0, 1.0), c(-1.0, 2.0)] {
            let ea = aberth_correction(&mut ctx, &p, &[z], 0, 1e-12).unwrap();
            let nt = newton_step(&mut ctx, &p, z).unwrap();
            assert!(ea.dist(nt) < 1e-14);
        }
    }

    #[test]
    fn coordinate_on_root_is_fixed() {
        let mut ctx = OpCounter::new();
        let p = PolyRepr::Roots(vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)]);
        let z = [c(-1.0, 0.0), c(3.0, 3.0), c(0.5, -2.0)];
        assert_eq!(aberth_correction(&mut ctx, &p, &z, 0, 1e-12).unwrap(), z[0]);
    }

    #[test]
    fn collision_is_reported() {
        let mut ctx = OpCounter::new();
        let p = quad_minus_one();
        let z = [c(2.0, 0.0), c(2.0, 0.0)];
        assert_eq!(
            aberth_correction(&mut ctx, &p, &z, 0, 1e-12),
            Err(CorrectionError::CoordinateCollision { k: 0, other: 1 })
        );
        let mut state = AberthState::new(z.to_vec());
        let out = aberth_sweep(&mut ctx, &p, &mut state, SweepStyle::GaussSeidel, 1e-12, None);
        assert_eq!(out.perturbed, vec![0]);
        assert!(state.z.iter().all(|z| z.is_finite()));
        assert_ne!(state.z[0], state.z[1]);
    }

    #[test]
    fn jacobi_and_gauss_seidel_on_z2_minus_1() {
        let mut ctx = OpCounter::new();
        let p = quad_minus_one();
        let mut jac = AberthState::new(vec![c(2.0, 0.0), c(-2.0, 0.0)]);
        aberth_sweep(&mut ctx, &p, &mut jac, SweepStyle::Jacobi, 1e-12, None);
        assert!(jac.z[0].dist(c(14.0 / 13.0, 0.0)) < 1e-15);
        assert!(jac.z[1].dist(c(-14.0 / 13.0, 0.0)) < 1e-15);

        let mut gs = AberthState::new(vec![c(2.0, 0.0), c(-2.0, 0.0)]);
        aberth_sweep(&mut ctx, &p, &mut gs, SweepStyle::GaussSeidel, 1e-12, None);
        let z0 = Complex64::new(14.0 / 13.0, 0.0);
        let want = oracle_z2_minus_1(&[z0, Complex64::new(-2.0, 0.0)], 1);
        assert!(gs.z[1].dist(c(want.re, want.im)) < 1e-15);
        assert!(gs.z[1].dist(c(-1.0, 0.0)) < 1.0 / 13.0);
    }

    #[test]
    fn exact_roots_are_a_fixed_vector() {
        let roots = vec![c(0.5, 0.5), c(-0.5, 0.25), c(0.0, -0.75), c(0.9, 0.0)];
        let p = PolyRepr::Roots(roots.clone());
        for style in [SweepStyle::Jacobi, SweepStyle::GaussSeidel] {
            let mut ctx = OpCounter::new();
            let mut st = AberthState::new(roots.clone());
            let out = aberth_sweep(&mut ctx, &p, &mut st, style, 1e-12, Some(1e-13));
            assert_eq!(st.z, roots);
            assert_eq!(out.max_step, 0.0);
            assert!(st.converged_mask.iter().all(|&m| m));
        }
    }

    #[test]
    fn chebyshev_degree_8_reference_mode() {
        let mut ctx = OpCounter::new();
        let roots = chebyshev_roots(8);
        let cfg = AberthConfig {
            stop: StopMode::Reference { delta: 1e-10, roots },
            ..AberthConfig::default()
        };
        let rep = run_aberth(&mut ctx, &PolyRepr::ChebyshevFast { k: 3 }, &cfg).unwrap();
        assert!(rep.verified);
        assert!(rep.sweeps <= 20, "sweeps = {}", rep.sweeps);
        assert_eq!(rep.ops, ctx.snapshot());
        assert_eq!(rep.per_sweep_ops.len(), rep.sweeps);
    }

    #[test]
    fn real_start_on_z2_plus_1_stays_real() {
        let mut ctx = OpCounter::new();
        let p = PolyRepr::Coefficients(vec![Complex::ONE, Complex::ZERO, Complex::ONE]);
        let cfg = AberthConfig { max_sweeps: 200, cycle_window: 0, ..AberthConfig::default() };
        let mut run = AberthRun::from_start(&p, &cfg, vec![c(1.5, 0.0), c(-0.7, 0.0)]).unwrap();
        while run.step(&mut ctx) {
            assert!(run.state().z.iter().all(|z| z.im == 0.0));
        }
        let rep = run.finish();
        assert!(!rep.converged && !rep.verified);
        assert!(rep.max_sweeps_exceeded);
    }

    #[test]
    fn degree_one() {
        let mut ctx = OpCounter::new();
        let p = PolyRepr::Roots(vec![c(5.0, 0.0)]);
        let cfg = AberthConfig {
            stop: StopMode::Reference { delta: 1e-12, roots: vec![c(5.0, 0.0)] },
            ..AberthConfig::default()
        };
        let rep = run_aberth(&mut ctx, &p, &cfg).unwrap();
        assert_eq!(rep.sweeps, 1);
        assert!(rep.roots[0].dist(c(5.0, 0.0)) < 1e-15);
        let rep = run_aberth(&mut ctx, &p, &AberthConfig::default()).unwrap();
        assert!(rep.verified);
        assert!(rep.roots[0].dist(c(5.0, 0.0)) < 1e-15);
    }

    #[test]
    fn step_size_mode_verifies_a_posteriori() {
        let mut ctx = OpCounter::new();
        let p = PolyRepr::LegendreRec { degree: 12 };
        let rep = run_aberth(&mut ctx, &p, &AberthConfig::default()).unwrap();
        assert!(rep.converged && rep.verified, "{rep:?}");
        assert!(rep.max_residual() < 1e-12);
    }

    #[test]
    fn postprocess_cases() {
        let roots = grid_roots(2);
        let p = PolyRepr::Roots(roots.clone());
        let reference = StopMode::Reference { delta: 1e-8, roots: roots.clone() };
        let cfg = AberthConfig { stop: reference, ..AberthConfig::default() };
        let mut ctx = OpCounter::new();

        let all = ea_postprocess(&mut ctx, &p, &roots, &cfg).unwrap();
        assert_eq!(all.sweeps, 0);
        assert!(all.verified);

        let rep = ea_postprocess(&mut ctx, &p, &roots[1..], &cfg).unwrap();
        assert!(rep.verified);

        let mut a = OpCounter::new();
        let mut b = OpCounter::new();
        let empty = ea_postprocess(&mut a, &p, &[], &cfg).unwrap();
        let fresh = run_aberth(&mut b, &p, &cfg).unwrap();
        assert_eq!(empty, fresh);
        assert!(ea_postprocess(&mut ctx, &p, &[Complex::ZERO; 5], &cfg).is_err());
    }
}
