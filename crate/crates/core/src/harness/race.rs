use std::time::Instant;

use super::{finish_report, verify, HarnessError, Method, Outcome, SolveOptions, SolveReport};
use crate::aberth::AberthRun;
use crate::newton::NewtonRun;
use crate::numeric::{Complex, OpCount, OpCounter};
use crate::poly::{FamilySpec, PolyRepr};

/// A solver that can be advanced one step at a time.
trait Stepper {
    fn advance(&mut self, ctx: &mut OpCounter) -> bool;
    fn done(&self) -> bool;
    fn iters(&self) -> usize;
}

impl Stepper for NewtonRun<'_> {
    fn advance(&mut self, ctx: &mut OpCounter) -> bool {
        self.step(ctx)
    }
    fn done(&self) -> bool {
        self.is_done()
    }
    fn iters(&self) -> usize {
        self.steps()
    }
}

impl Stepper for AberthRun<'_> {
    fn advance(&mut self, ctx: &mut OpCounter) -> bool {
        self.step(ctx)
    }
    fn done(&self) -> bool {
        self.is_done()
    }
    fn iters(&self) -> usize {
        self.state().sweep
    }
}

/// Spends one slice of credit. Overspending is paid back in the next
/// round, so both solvers receive the same ops over time.
fn run_slice<S: Stepper>(run: &mut S, ctx: &mut OpCounter, credit: &mut i128, slice: u64) {
    *credit += slice as i128;
    while *credit > 0 && !run.done() {
        let before = ctx.snapshot().total();
        run.advance(ctx);
        let spent = ctx.snapshot().total() - before;
        *credit -= spent as i128;
        if spent == 0 && !run.done() {
            break;
        }
    }
}

/// Newton (iterated refinement) and Ehrlich–Aberth alternate op-budget
/// slices of `opts.race_slice`, Newton first. The first solver to finish
/// with a verified root set wins; the reported ops are both solvers'
/// spending up to that point.
pub fn race(
    spec: &FamilySpec,
    poly: &PolyRepr,
    reference: Option<&[Complex]>,
    opts: &SolveOptions,
) -> Result<SolveReport, HarnessError> {
    let start = opts.timing.then(Instant::now);
    let degree = poly.degree();
    let ncfg = opts.newton_for(spec);
    let acfg = opts.aberth_for(spec);
    let slice = opts.race_slice.max(1);

    let (mut nctx, mut actx) = (OpCounter::new(), OpCounter::new());
    let mut newton = Some(NewtonRun::refining(poly, &ncfg));
    let mut aberth = AberthRun::new(poly, &acfg).ok();
    let (mut ncredit, mut acredit) = (0i128, 0i128);
    let (mut niters, mut aiters) = (0usize, 0usize);
    let mut last_failure: Option<(Vec<Complex>, Vec<f64>)> = None;

    let report = |winner: Option<Method>, roots: Vec<Complex>, residuals: Vec<f64>, ops: OpCount, iters: usize| {
        let out = Outcome { roots, residuals, ops, iters, winner };
        let wall = start.map_or(0.0, |t| t.elapsed().as_secs_f64() * 1e3);
        finish_report(spec, Method::Race, reference, opts.delta, out, wall)
    };

    loop {
        if let Some(run) = newton.as_mut() {
            run_slice(run, &mut nctx, &mut ncredit, slice);
            niters = run.iters();
            if run.done() {
                let r = newton.take().expect("present").finish();
                let roots = r.root_values();
                let residuals: Vec<f64> = r.roots.iter().map(|x| x.residual).collect();
                if verify(&roots, &residuals, reference, degree, opts.delta).matched {
                    let ops = nctx.snapshot() + actx.snapshot();
                    return Ok(report(Some(Method::Newton), roots, residuals, ops, niters + aiters));
                }
                last_failure = Some((roots, residuals));
            }
        }
        if let Some(run) = aberth.as_mut() {
            run_slice(run, &mut actx, &mut acredit, slice);
            aiters = run.iters();
            if run.done() {
                let r = aberth.take().expect("present").finish();
                if verify(&r.roots, &r.residuals, reference, degree, opts.delta).matched {
                    let ops = nctx.snapshot() + actx.snapshot();
                    return Ok(report(Some(Method::Aberth), r.roots, r.residuals, ops, niters + aiters));
                }
                last_failure = Some((r.roots, r.residuals));
            }
        }
        if newton.is_none() && aberth.is_none() {
            let (roots, residuals) = last_failure.unwrap_or_default();
            let ops = nctx.snapshot() + actx.snapshot();
            return Err(HarnessError::BothFailed(Box::new(report(None, roots, residuals, ops, niters + aiters))));
        }
    }
}
