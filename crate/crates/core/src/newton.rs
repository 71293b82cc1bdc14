//! Newton's method from points on a circle, with iterated refinement of the
//! starting set.
//!
//! All orbits advance in lockstep. Orbits are kept on a cycle in the order
//! of their starting angles; for every orbit the cross ratio
//! `(left − right) / (self − right)` of its triple is tracked across global
//! steps. While neighboring orbits move "in parallel" this quantity barely
//! changes. When two adjacent orbits both see a drift above the threshold,
//! a new orbit is started at the midpoint of their current positions.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::numeric::{Complex, OpCount, OpCounter};
use crate::poly::{newton_ratio, residual, EvalError, PolyRepr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitStatus {
    Active,
    Converged,
    Escaped,
    Stalled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitState {
    pub id: usize,
    pub z: Complex,
    pub steps: usize,
    pub status: OrbitStatus,
    pub left: usize,
    pub right: usize,
    pub last_cross_ratio: Option<Complex>,
    /// Angle on the starting circle this orbit stands for; inserted orbits
    /// take the angular midpoint of their neighbors.
    pub angle: f64,
    /// Set once the orbit converges.
    pub residual: Option<f64>,
    /// Index into the run's root list once converged.
    target: Option<usize>,
    /// Last position outside `ANCHOR_FACTOR · root_scale`.
    anchor: Complex,
    small_steps: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonConfig {
    /// Starting circle radius in units of `root_scale`; must exceed 1.
    pub start_radius: f64,
    /// Every root is assumed to satisfy `|root| <= root_scale`.
    pub root_scale: f64,
    pub initial_orbits: usize,
    /// A triple counts as deviating when its cross ratio moves by more than
    /// `refine_threshold / d` in one step.
    pub refine_threshold: f64,
    /// Global step limit; `None` picks `10·d + 100`.
    pub max_steps: Option<usize>,
    /// Relative step size below which a step counts as small.
    pub conv_eps: f64,
    pub sep_delta: f64,
    /// Orbit limit for refinement; `None` picks `32·d + initial_orbits`.
    pub max_orbits: Option<usize>,
    /// Phase of the first starting point; `None` uses `π / (2·count)`.
    pub phase: Option<f64>,
    /// Residual bound for accepting a complete root set.
    pub max_residual: f64,
    /// Gaps narrower than `min_gap · 2π/d` in starting angle are never
    /// split, so refinement creates at most about `d / min_gap` orbits.
    pub min_gap: f64,
    /// Rounds of re-seeding from the circle when every orbit has stopped
    /// but roots are missing. Iterated refinement only.
    pub replay_rounds: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            start_radius: 3.0,
            root_scale: 1.0,
            initial_orbits: 64,
            refine_threshold: 0.5,
            max_steps: None,
            conv_eps: 1e-13,
            sep_delta: 1e-8,
            max_orbits: None,
            phase: None,
            max_residual: 1e-6,
            min_gap: 0.25,
            replay_rounds: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if !(self.start_radius > 1.0) {
            return bad("start radius must exceed 1");
        }
        if !(self.root_scale > 0.0 && self.root_scale.is_finite()) {
            return bad("root scale must be positive");
        }
        if self.initial_orbits < 4 {
            return bad("need at least 4 initial orbits");
        }
        if !(self.conv_eps > 0.0 && self.conv_eps < self.sep_delta) {
            return bad("need 0 < eps < delta");
        }
        if !(self.refine_threshold > 0.0) {
            return bad("refine threshold must be positive");
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.start_radius * self.root_scale
    }

    fn max_steps_for(&self, d: usize) -> usize {
        self.max_steps.unwrap_or(10 * d + 100)
    }

    fn max_orbits_for(&self, d: usize) -> usize {
        self.max_orbits.unwrap_or(32 * d + self.initial_orbits)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoundRoot {
    pub z: Complex,
    pub residual: f64,
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonReport {
    pub degree: usize,
    pub roots: Vec<FoundRoot>,
    pub missed: usize,
    pub orbits: Vec<OrbitState>,
    pub converged: usize,
    pub escaped: usize,
    pub stalled: usize,
    /// Global lockstep steps taken.
    pub steps: usize,
    /// `histogram[k]` counts converged orbits that needed `[2^k, 2^{k+1})` steps.
    pub step_histogram: Vec<usize>,
    pub ops: OpCount,
    pub orbit_budget_exceeded: bool,
    /// All `degree` roots found, separated and with small residual.
    pub complete: bool,
}

impl NewtonReport {
    pub fn root_values(&self) -> Vec<Complex> {
        self.roots.iter().map(|r| r.z).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// `z − p(z)/p'(z)`; `z` itself when `p(z) = 0`.
pub fn newton_step(ctx: &mut OpCounter, poly: &PolyRepr, z: Complex) -> Result<Complex, EvalError> {
    let r = newton_ratio(ctx, poly, z)?;
    if r.is_zero() {
        return Ok(z);
    }
    Ok(ctx.sub(z, r))
}

/// `count` points `r·e^{i(2πj/count + θ₀)}`.
pub fn starting_points(r: f64, count: usize, phase: Option<f64>) -> Vec<Complex> {
    let theta0 = phase.unwrap_or(PI / (2 * count) as f64);
    (0..count)
        .map(|j| Complex::from_polar(r, 2.0 * PI * j as f64 / count as f64 + theta0))
        .collect()
}

/// The cross ratio `(a − c)/(b − c)` of `(a, b; c, ∞)` and its drift from
/// `prev`. A degenerate triple (`b = c`) has infinite drift.
pub fn cross_ratio_deviation(
    ctx: &mut OpCounter,
    a: Complex,
    b: Complex,
    c: Complex,
    prev: Option<Complex>,
) -> (f64, Option<Complex>) {
    let den = ctx.sub(b, c);
    if den.max_abs_component() < 1e-300 {
        return (f64::INFINITY, None);
    }
    let num = ctx.sub(a, c);
    let cr = match ctx.div(num, den) {
        Ok(cr) if cr.is_finite() => cr,
        _ => return (f64::INFINITY, None),
    };
    let measure = match prev {
        Some(p) => {
            let diff = ctx.sub(cr, p);
            ctx.abs(diff)
        }
        None => 0.0,
    };
    (measure, Some(cr))
}

/// Replays restart from an orbit's last position outside this multiple of
/// the root bound.
const ANCHOR_FACTOR: f64 = 1.25;

/// Newton orbits advanced in lockstep, one global step at a time.
#[derive(Clone, Debug)]
pub struct NewtonRun<'a> {
    poly: &'a PolyRepr,
    cfg: NewtonConfig,
    refine: bool,
    degree: usize,
    orbits: Vec<OrbitState>,
    steps: usize,
    max_steps: usize,
    max_orbits: usize,
    budget_exceeded: bool,
    replays: usize,
    /// Grid cell of size `4δ` to indices into `roots`.
    root_cells: HashMap<(i64, i64), Vec<usize>>,
    roots: Vec<FoundRoot>,
    ops: OpCount,
    done: bool,
}

impl<'a> NewtonRun<'a> {
    /// Iterated refinement from `cfg.initial_orbits` points on the circle.
    pub fn refining(poly: &'a PolyRepr, cfg: &NewtonConfig) -> Self {
        let starts = starting_points(cfg.radius(), cfg.initial_orbits, cfg.phase);
        Self::new(poly, cfg, starts, true)
    }

    /// Plain Newton from the given points, no refinement.
    pub fn plain(poly: &'a PolyRepr, cfg: &NewtonConfig, starts: Vec<Complex>) -> Self {
        Self::new(poly, cfg, starts, false)
    }

    fn new(poly: &'a PolyRepr, cfg: &NewtonConfig, starts: Vec<Complex>, refine: bool) -> Self {
        let n = starts.len();
        let orbits = starts
            .into_iter()
            .enumerate()
            .map(|(id, z)| OrbitState {
                id,
                z,
                steps: 0,
                status: OrbitStatus::Active,
                left: (id + n - 1) % n.max(1),
                right: (id + 1) % n.max(1),
                last_cross_ratio: None,
                angle: z.arg().rem_euclid(2.0 * PI),
                residual: None,
                small_steps: 0,
                target: None,
                anchor: z,
            })
            .collect();
        let degree = poly.degree();
        NewtonRun {
            poly,
            cfg: cfg.clone(),
            refine,
            degree,
            orbits,
            steps: 0,
            max_steps: cfg.max_steps_for(degree),
            max_orbits: cfg.max_orbits_for(degree).max(n),
            budget_exceeded: false,
            replays: 0,
            root_cells: HashMap::new(),
            roots: Vec::new(),
            ops: OpCount::default(),
            done: n == 0,
        }
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn ops(&self) -> OpCount {
        self.ops
    }

    pub fn orbits(&self) -> &[OrbitState] {
        &self.orbits
    }

    /// Global steps taken so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn roots_found(&self) -> usize {
        self.roots.len()
    }

    /// One global step: advance every active orbit, then refine.
    /// Returns false once the run has finished.
    pub fn step(&mut self, ctx: &mut OpCounter) -> bool {
        if self.done {
            return false;
        }
        let before = ctx.snapshot();
        let escape = 4.0 * self.cfg.radius();
        for i in 0..self.orbits.len() {
            if self.orbits[i].status != OrbitStatus::Active {
                continue;
            }
            self.advance(ctx, i, escape);
        }
        if self.refine {
            self.refine_step(ctx);
        }
        self.steps += 1;
        let mut any_active = self.orbits.iter().any(|o| o.status == OrbitStatus::Active);
        if !any_active && self.refine && self.replays < self.cfg.replay_rounds && self.roots.len() < self.degree {
            self.replays += 1;
            any_active = self.replay(ctx);
        }
        self.ops += ctx.snapshot() - before;
        if !any_active || self.steps >= self.max_steps || self.roots.len() >= self.degree {
            self.done = true;
        }
        !self.done
    }

    fn advance(&mut self, ctx: &mut OpCounter, i: usize, escape: f64) {
        let eps = self.cfg.conv_eps;
        let o = &mut self.orbits[i];
        o.steps += 1;
        let z = o.z;
        let next = match newton_step(ctx, self.poly, z) {
            Ok(w) => w,
            Err(EvalError::DerivativeZero) => {
                let kick = Complex::from_polar(eps * z.norm().max(1.0), o.id as f64);
                ctx.add(z, kick)
            }
            Err(_) => {
                o.status = OrbitStatus::Escaped;
                return;
            }
        };
        let dz = ctx.sub(next, z);
        let step = ctx.abs(dz);
        let size = ctx.abs(next);
        o.z = next;
        if size >= ANCHOR_FACTOR * self.cfg.root_scale {
            o.anchor = next;
        }
        if size > escape {
            o.status = OrbitStatus::Escaped;
            return;
        }
        if step < eps * size.max(1.0) {
            o.small_steps += 1;
        } else {
            o.small_steps = 0;
        }
        if step == 0.0 || o.small_steps >= 3 {
            o.status = OrbitStatus::Converged;
            let r = residual(ctx, self.poly, next);
            o.residual = Some(r);
            let k = self.record_root(next, r);
            self.orbits[i].target = Some(k);
        }
    }

    fn cell(&self, z: Complex) -> (i64, i64) {
        let s = 4.0 * self.cfg.sep_delta;
        ((z.re / s).floor() as i64, (z.im / s).floor() as i64)
    }

    fn record_root(&mut self, z: Complex, residual: f64) -> usize {
        let radius = 2.0 * self.cfg.sep_delta;
        let (cx, cy) = self.cell(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.root_cells.get(&(cx + dx, cy + dy)) {
                    for &k in ids {
                        if self.roots[k].z.dist(z) <= radius {
                            self.roots[k].hits += 1;
                            return k;
                        }
                    }
                }
            }
        }
        self.root_cells.entry((cx, cy)).or_default().push(self.roots.len());
        self.roots.push(FoundRoot { z, residual, hits: 1 });
        self.roots.len() - 1
    }

    /// Once every orbit has stopped with roots still missing: starts a new
    /// orbit between each pair of neighbors that ended on different roots
    /// (or did not converge), at the midpoint of their anchors. Returns
    /// whether any orbit was added.
    fn replay(&mut self, ctx: &mut OpCounter) -> bool {
        let min_gap = 2.0 * PI * f64::EPSILON.sqrt();
        let n = self.orbits.len();
        let mut added = false;
        let mut a = 0;
        for _ in 0..n {
            let b = self.orbits[a].right;
            let next = b;
            let (ta, tb) = (self.orbits[a].target, self.orbits[b].target);
            let gap = (self.orbits[b].angle - self.orbits[a].angle).rem_euclid(2.0 * PI);
            if b != a && (ta.is_none() || ta != tb) && gap >= min_gap {
                if self.orbits.len() >= self.max_orbits {
                    self.budget_exceeded = true;
                    break;
                }
                let angle = (self.orbits[a].angle + gap / 2.0).rem_euclid(2.0 * PI);
                let sum = ctx.add(self.orbits[a].anchor, self.orbits[b].anchor);
                let z = ctx.scale(0.5, sum);
                let id = self.orbits.len();
                self.orbits.push(OrbitState {
                    id,
                    z,
                    steps: 0,
                    status: OrbitStatus::Active,
                    left: a,
                    right: b,
                    last_cross_ratio: None,
                    angle,
                    residual: None,
                    small_steps: 0,
                    target: None,
                    anchor: z,
                });
                self.orbits[a].right = id;
                self.orbits[b].left = id;
                added = true;
            }
            a = next;
        }
        added
    }

    fn refine_step(&mut self, ctx: &mut OpCounter) {
        let n = self.orbits.len();
        let mut deviation = vec![0.0; n];
        for b in 0..n {
            let (l, r) = (self.orbits[b].left, self.orbits[b].right);
            let any_active = [l, b, r]
                .iter()
                .any(|&k| self.orbits[k].status == OrbitStatus::Active);
            if !any_active || l == b || r == b {
                continue;
            }
            let (za, zb, zc) = (self.orbits[l].z, self.orbits[b].z, self.orbits[r].z);
            let (m, cr) = cross_ratio_deviation(ctx, za, zb, zc, self.orbits[b].last_cross_ratio);
            deviation[b] = m;
            self.orbits[b].last_cross_ratio = cr;
        }
        let tau = self.cfg.refine_threshold / self.degree as f64;
        for a in 0..n {
            let b = self.orbits[a].right;
            if b == a || deviation[a] <= tau || deviation[b] <= tau {
                continue;
            }
            let active = |k: usize| self.orbits[k].status == OrbitStatus::Active;
            if !active(a) || !active(b) {
                continue;
            }
            let angle_a = self.orbits[a].angle;
            let gap = (self.orbits[b].angle - angle_a).rem_euclid(2.0 * PI);
            if gap < self.cfg.min_gap * 2.0 * PI / self.degree as f64 {
                continue;
            }
            if self.orbits.len() >= self.max_orbits {
                self.budget_exceeded = true;
                break;
            }
            let sum = ctx.add(self.orbits[a].z, self.orbits[b].z);
            let mid = ctx.scale(0.5, sum);
            let id = self.orbits.len();
            self.orbits.push(OrbitState {
                id,
                z: mid,
                steps: 0,
                status: OrbitStatus::Active,
                left: a,
                right: b,
                last_cross_ratio: None,
                angle: (angle_a + gap / 2.0).rem_euclid(2.0 * PI),
                residual: None,
                small_steps: 0,
                target: None,
                anchor: mid,
            });
            self.orbits[a].right = id;
            self.orbits[b].left = id;
            self.orbits[a].last_cross_ratio = None;
            self.orbits[b].last_cross_ratio = None;
        }
    }

    /// Runs until done.
    pub fn run(mut self, ctx: &mut OpCounter) -> NewtonReport {
        while self.step(ctx) {}
        self.finish()
    }

    pub fn finish(mut self) -> NewtonReport {
        for o in self.orbits.iter_mut() {
            if o.status == OrbitStatus::Active {
                o.status = OrbitStatus::Stalled;
            }
        }
        let count = |s: OrbitStatus| self.orbits.iter().filter(|o| o.status == s).count();
        let mut step_histogram = Vec::new();
        for o in self.orbits.iter().filter(|o| o.status == OrbitStatus::Converged) {
            let bucket = usize::BITS as usize - 1 - o.steps.max(1).leading_zeros() as usize;
            if step_histogram.len() <= bucket {
                step_histogram.resize(bucket + 1, 0);
            }
            step_histogram[bucket] += 1;
        }
        let values: Vec<Complex> = self.roots.iter().map(|r| r.z).collect();
        let residuals: Vec<f64> = self.roots.iter().map(|r| r.residual).collect();
        let complete = crate::matching::a_posteriori_ok(
            &values,
            &residuals,
            self.degree,
            self.cfg.sep_delta,
            self.cfg.max_residual,
        );
        NewtonReport {
            degree: self.degree,
            missed: self.degree.saturating_sub(self.roots.len()),
            converged: count(OrbitStatus::Converged),
            escaped: count(OrbitStatus::Escaped),
            stalled: count(OrbitStatus::Stalled),
            roots: self.roots,
            orbits: self.orbits,
            steps: self.steps,
            step_histogram,
            ops: self.ops,
            orbit_budget_exceeded: self.budget_exceeded,
            complete,
        }
    }
}

/// Iterated refinement from a circle of `cfg.initial_orbits` points.
pub fn run_iterated_refinement(ctx: &mut OpCounter, poly: &PolyRepr, cfg: &NewtonConfig) -> NewtonReport {
    NewtonRun::refining(poly, cfg).run(ctx)
}

/// Newton from fixed starting points, without refinement.
pub fn run_plain_newton(
    ctx: &mut OpCounter,
    poly: &PolyRepr,
    starts: &[Complex],
    cfg: &NewtonConfig,
) -> NewtonReport {
    NewtonRun::plain(poly, cfg, starts.to_vec()).run(ctx)
}

/// Clusters converged endpoints with radius `2δ`. Returns one root per
/// cluster, carrying the largest residual in the cluster.
pub fn collect_roots(orbits: &[OrbitState], delta: f64) -> Vec<FoundRoot> {
    let conv: Vec<&OrbitState> = orbits.iter().filter(|o| o.status == OrbitStatus::Converged).collect();
    let pts: Vec<Complex> = conv.iter().map(|o| o.z).collect();
    crate::matching::cluster(&pts, 2.0 * delta)
        .into_iter()
        .map(|(rep, members)| FoundRoot {
            z: pts[rep],
            residual: members
                .iter()
                .map(|&m| conv[m].residual.unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max),
            hits: members.len(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn coeffs(c: &[f64]) -> PolyRepr {
        PolyRepr::Coefficients(c.iter().map(|&x| Complex::real(x)).collect())
    }

    #[test]
    fn step_examples() {
        let mut ctx = OpCounter::new();
        // N(z) = (z² + 1) / 2z for z² − 1.
        let p = coeffs(&[-1.0, 0.0, 1.0]);
        assert_eq!(newton_step(&mut ctx, &p, c(2.0, 0.0)).unwrap(), c(1.25, 0.0));
        assert_eq!(newton_step(&mut ctx, &p, c(-1.0, 0.0)).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn cubic_two_cycle() {
        let mut ctx = OpCounter::new();
        // N(z) = (2z³ − 2)/(3z² − 2) for z³ − 2z + 2.
        let p = coeffs(&[2.0, -2.0, 0.0, 1.0]);
        assert_eq!(newton_step(&mut ctx, &p, Complex::ZERO).unwrap(), Complex::ONE);
        assert_eq!(newton_step(&mut ctx, &p, Complex::ONE).unwrap(), Complex::ZERO);
        // Its mirror image z³ − 2z − 2 cycles through −1.
        let q = coeffs(&[-2.0, -2.0, 0.0, 1.0]);
        assert_eq!(newton_step(&mut ctx, &q, Complex::ZERO).unwrap(), c(-1.0, 0.0));
        assert_eq!(newton_step(&mut ctx, &q, c(-1.0, 0.0)).unwrap(), Complex::ZERO);
    }

    #[test]
    fn circle_points() {
        let pts = starting_points(2.0, 4, Some(0.0));
        let want = [c(2.0, 0.0), c(0.0, 2.0), c(-2.0, 0.0), c(0.0, -2.0)];
        for (p, w) in pts.iter().zip(want) {
            assert!(p.dist(w) < 1e-15);
        }
        let pts = starting_points(3.0, 64, None);
        assert!(pts.iter().all(|z| (z.norm() - 3.0).abs() < 1e-14));
        assert!((pts[0].arg() - PI / 128.0).abs() < 1e-15);
        for w in pts.windows(2) {
            let gap = (w[1].arg() - w[0].arg()).rem_euclid(2.0 * PI);
            assert!((gap - 2.0 * PI / 64.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cross_ratio_examples() {
        let mut ctx = OpCounter::new();
        let (m, cr) = cross_ratio_deviation(&mut ctx, c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), None);
        assert_eq!((m, cr), (0.0, Some(c(2.0, 0.0))));
        let (m, _) = cross_ratio_deviation(&mut ctx, c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), Some(c(2.0, 0.5)));
        assert_eq!(m, 0.5);
        let (m, cr) = cross_ratio_deviation(&mut ctx, c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), None);
        assert!(m.is_infinite() && cr.is_none());
    }

    #[test]
    fn finds_both_roots_of_z2_minus_1() {
        let mut ctx = OpCounter::new();
        let p = coeffs(&[-1.0, 0.0, 1.0]);
        let rep = run_iterated_refinement(&mut ctx, &p, &NewtonConfig::default());
        assert!(rep.complete);
        assert_eq!(rep.missed, 0);
        assert_eq!(rep.ops, ctx.snapshot());
    }

    #[test]
    fn plain_newton_cases() {
        let cfg = NewtonConfig::default();
        let mut ctx = OpCounter::new();
        let p = coeffs(&[-1.0, 0.0, 1.0]);
        let starts = [c(2.0, 0.0), c(0.0, 2.0), c(-2.0, 0.0), c(0.0, -2.0)];
        let rep = run_plain_newton(&mut ctx, &p, &starts, &cfg);
        assert!(rep.complete);
        // The imaginary axis is the basin boundary: ±2i never converge.
        assert_eq!(rep.converged, 2);

        let at_roots = run_plain_newton(&mut ctx, &p, &[c(1.0, 0.0), c(-1.0, 0.0)], &cfg);
        assert_eq!(at_roots.steps, 1);
        assert!(at_roots.orbits.iter().all(|o| o.steps == 1 && o.residual == Some(0.0)));

        let q = coeffs(&[1.0, 0.0, 1.0]);
        let real = run_plain_newton(&mut ctx, &q, &[c(2.0, 0.0), c(-2.0, 0.0)], &cfg);
        assert_eq!(real.converged, 0);
        assert!(real.orbits.iter().all(|o| o.z.im == 0.0));
    }

    #[test]
    fn collect_examples() {
        let mk = |z: Complex| OrbitState {
            id: 0,
            z,
            steps: 5,
            status: OrbitStatus::Converged,
            left: 0,
            right: 0,
            last_cross_ratio: None,
            angle: 0.0,
            residual: Some(0.0),
            small_steps: 3,
            target: None,
            anchor: z,
        };
        let two = [mk(c(1.0, 0.0)), mk(c(1.0 + 1e-9, 0.0))];
        let r = collect_roots(&two, 1e-8);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].hits, 2);
        assert_eq!(collect_roots(&[mk(c(1.0, 0.0)), mk(c(-1.0, 0.0))], 1e-8).len(), 2);
        assert!(collect_roots(&[], 1e-8).is_empty());
    }

    #[test]
    fn config_validation() {
        assert!(NewtonConfig::default().validate().is_ok());
        let bad = NewtonConfig { start_radius: 1.0, ..NewtonConfig::default() };
        assert!(bad.validate().is_err());
        let bad = NewtonConfig { conv_eps: 1e-6, sep_delta: 1e-8, ..NewtonConfig::default() };
        assert!(bad.validate().is_err());
        let bad = NewtonConfig { initial_orbits: 3, ..NewtonConfig::default() };
        assert!(bad.validate().is_err());
    }
}
