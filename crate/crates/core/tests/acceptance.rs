//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line
//! with the measured numbers, then asserts.

use std::process::Command;
use std::time::Instant;

use polyrace::aberth::{ea_postprocess, AberthConfig, AberthRun, StopMode, SweepStyle};
use polyrace::harness::{fit_loglog, run_experiment, solve, ExperimentSpec, Method, SolveOptions};
use polyrace::matching::match_roots;
use polyrace::newton::{newton_step, run_iterated_refinement, NewtonConfig};
use polyrace::numeric::{Complex, OpCounter};
use polyrace::poly::{evaluate, expand_to_coefficients, EvalMode, Family, FamilySpec, PolyRepr};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn verdict(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn aberth_cfg(spec: &FamilySpec) -> AberthConfig {
    SolveOptions::default().aberth_for(spec)
}

#[test]
fn criterion_01_oracle_equivalence() {
    let mut specs = Vec::new();
    for k in 1..=6 {
        specs.push(FamilySpec::new(Family::Chebyshev { d: 1 << k }));
    }
    for d in [3, 10, 37, 64] {
        specs.push(FamilySpec::new(Family::Chebyshev { d }).with_eval(EvalMode::Slow));
    }
    for d in [1, 8, 16, 32, 64] {
        for seed in [1, 2] {
            specs.push(FamilySpec::new(Family::RandomCircle { d }).with_seed(seed));
            specs.push(FamilySpec::new(Family::RandomDisk { d }).with_seed(seed));
        }
    }
    for n in 1..=8 {
        specs.push(FamilySpec::new(Family::Grid { n }));
    }
    let opts = SolveOptions::default();
    let start = Instant::now();
    let mut failures = Vec::new();
    for spec in &specs {
        let (poly, reference) = spec.make().unwrap();
        let reference = reference.roots.unwrap();
        let mut ctx = OpCounter::new();
        let newton = run_iterated_refinement(&mut ctx, &poly, &opts.newton_for(spec));
        if !match_roots(&newton.root_values(), &reference, 1e-8).success() {
            failures.push(format!("newton {spec}"));
        }
        let ea = AberthRun::new(&poly, &aberth_cfg(spec)).unwrap().run(&mut ctx);
        if !match_roots(&ea.roots, &reference, 1e-8).success() {
            failures.push(format!("aberth {spec}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        failures.is_empty() && secs < 10.0,
        format!("{} instances, {:.2} s, failures {:?}", specs.len(), secs, failures),
    );
}

#[test]
fn criterion_02_sweep_count() {
    let mut worst = (0usize, String::new());
    let mut lines = Vec::new();
    let mut specs: Vec<FamilySpec> = (1..=8).map(|k| FamilySpec::new(Family::Chebyshev { d: 1 << k })).collect();
    specs.extend([16, 32, 64, 128, 256].map(|d| FamilySpec::new(Family::RandomCircle { d }).with_seed(1)));
    for spec in &specs {
        let cfg = AberthConfig { style: SweepStyle::GaussSeidel, ..aberth_cfg(spec) };
        let (poly, _) = spec.make().unwrap();
        let r = AberthRun::new(&poly, &cfg).unwrap().run(&mut OpCounter::new());
        let sweeps = if r.converged { r.sweeps } else { usize::MAX };
        lines.push(format!("{}={}", spec, r.sweeps));
        if sweeps > worst.0 {
            worst = (sweeps, spec.to_string());
        }
    }
    verdict(2, worst.0 <= 30, format!("max sweeps {} at {}; all: {}", worst.0, worst.1, lines.join(" ")));
}

/// Order estimates `ln(e₊/e) / ln(e/e₋)` over consecutive error triples
/// that stay above the rounding floor.
fn orders(errors: &[f64], floor: f64) -> Vec<f64> {
    errors
        .windows(3)
        .filter(|w| w[2] > floor && w[0] < 0.5 && w[1] < w[0] && w[2] < w[1])
        .map(|w| (w[2] / w[1]).ln() / (w[1] / w[0]).ln())
        .collect()
}

fn newton_errors(poly: &PolyRepr, root: Complex, mut z: Complex) -> Vec<f64> {
    let mut ctx = OpCounter::new();
    let mut errs = vec![z.dist(root)];
    for _ in 0..60 {
        z = newton_step(&mut ctx, poly, z).unwrap();
        let e = z.dist(root);
        if e == 0.0 {
            break;
        }
        errs.push(e);
    }
    errs
}

fn aberth_errors(poly: &PolyRepr, roots: &[Complex], start: Vec<Complex>) -> Vec<f64> {
    let cfg = AberthConfig { style: SweepStyle::Jacobi, max_sweeps: 1, cycle_window: 0, ..AberthConfig::default() };
    let mut ctx = OpCounter::new();
    let mut z = start;
    let err = |z: &[Complex]| z.iter().zip(roots).map(|(a, b)| a.dist(*b)).fold(0.0, f64::max);
    let mut errs = vec![err(&z)];
    for _ in 0..20 {
        let mut run = AberthRun::from_start(poly, &cfg, z.clone()).unwrap();
        run.step(&mut ctx);
        z = run.state().z.clone();
        let e = err(&z);
        if e == 0.0 {
            break;
        }
        errs.push(e);
    }
    errs
}

#[test]
fn criterion_03_convergence_orders() {
    // Newton at simple roots.
    let cubic = PolyRepr::roots(vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, -0.5)]).unwrap();
    let cubic_coeffs = expand_to_coefficients(&cubic).unwrap();
    let cheb = PolyRepr::ChebyshevFast { k: 4 };
    let cheb_root = c((std::f64::consts::PI / 32.0).cos(), 0.0);
    // The last estimate of each run is the one closest to the asymptotic regime.
    let newton_q: Vec<f64> = [
        newton_errors(&cubic, c(1.0, 0.0), c(1.3, 0.2)),
        newton_errors(&cubic_coeffs, c(0.0, -0.5), c(0.2, -0.3)),
        newton_errors(&cheb, cheb_root, c(0.99, 0.01)),
    ]
    .iter()
    .filter_map(|errs| orders(errs, 1e-13).last().copied())
    .collect();
    let newton_ok = newton_q.len() == 3 && newton_q.iter().all(|q| (q - 2.0).abs() <= 0.3);

    // Newton on z^k contracts by exactly (k-1)/k.
    let mut ratio_dev: f64 = 0.0;
    for k in 2..=4usize {
        let mut coeffs = vec![Complex::ZERO; k + 1];
        coeffs[k] = Complex::ONE;
        let p = PolyRepr::coefficients(coeffs).unwrap();
        let mut ctx = OpCounter::new();
        let mut z = c(0.7, 0.4);
        for _ in 0..10 {
            let next = newton_step(&mut ctx, &p, z).unwrap();
            ratio_dev = ratio_dev.max((next.norm() / z.norm() - (k as f64 - 1.0) / k as f64).abs());
            z = next;
        }
    }
    let ratio_ok = ratio_dev <= 1e-3;

    // Ehrlich–Aberth (simultaneous form) on simple roots, degree ≤ 8.
    let mut ea_q = Vec::new();
    for (d, seed) in [(4, 1u64), (6, 2), (8, 3)] {
        let spec = FamilySpec::new(Family::RandomCircle { d }).with_seed(seed);
        let (poly, reference) = spec.make().unwrap();
        let roots = reference.roots.unwrap();
        let start: Vec<Complex> = roots
            .iter()
            .enumerate()
            .map(|(j, r)| c(r.re + 0.04 * (j as f64 + 1.0).cos(), r.im + 0.04 * (j as f64 + 1.0).sin()))
            .collect();
        let q = orders(&aberth_errors(&poly, &roots, start), 1e-13);
        ea_q.extend(q.last().copied());
    }
    let ea_ok = ea_q.len() == 3 && ea_q.iter().all(|q| (2.5..=3.5).contains(q));

    verdict(
        3,
        newton_ok && ratio_ok && ea_ok,
        format!(
            "newton orders {:?}; z^k ratio max deviation {:.1e}; EA orders {:?}",
            newton_q.iter().map(|q| (q * 100.0).round() / 100.0).collect::<Vec<_>>(),
            ratio_dev,
            ea_q.iter().map(|q| (q * 100.0).round() / 100.0).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_04_superattracting_cycle() {
    let p = PolyRepr::coefficients(vec![c(2.0, 0.0), c(-2.0, 0.0), Complex::ZERO, Complex::ONE]).unwrap();
    let mut ctx = OpCounter::new();
    let z1 = newton_step(&mut ctx, &p, Complex::ZERO).unwrap();
    let z2 = newton_step(&mut ctx, &p, z1).unwrap();
    let cycle_ok = z1 == c(-1.0, 0.0) && z2 == Complex::ZERO;
    let cfg = NewtonConfig { root_scale: 2.0, ..NewtonConfig::default() };
    let report = run_iterated_refinement(&mut ctx, &p, &cfg);
    let all_roots = report.complete && report.roots.len() == 3;
    verdict(
        4,
        cycle_ok && all_roots,
        format!(
            "observed 0 -> {z1} -> {z2} (required 0 -> -1 -> 0); refinement found {} of 3 roots",
            report.roots.len()
        ),
    );
}

#[test]
fn criterion_05_fast_slow_asymmetry() {
    // The coefficients of the c = i twin overflow from n = 11 on; c = 0
    // expands at n = 12, and Horner cost does not depend on the values.
    let point = c(0.3, 0.7);
    let mut ratios = Vec::new();
    for (cc, n) in [(Complex::ZERO, 12u32), (Complex::I, 10)] {
        let fast = PolyRepr::iter_quad(cc, n).unwrap();
        let slow = expand_to_coefficients(&fast).unwrap();
        let mut f = OpCounter::new();
        evaluate(&mut f, &fast, point).unwrap();
        let mut s = OpCounter::new();
        evaluate(&mut s, &slow, point).unwrap();
        ratios.push((n, s.snapshot().total() as f64 / f.snapshot().total() as f64));
    }
    let at_4096 = ratios[0].1;
    verdict(5, at_4096 >= 50.0, format!("slow/fast cost ratio {ratios:?}"));
}

#[test]
fn criterion_06_recursion_side() {
    let family = FamilySpec::new(Family::IterQuad { c: Complex::I, n: 5 });
    let mut exp = ExperimentSpec::new(family, vec![Method::Newton, Method::Aberth]);
    exp.degrees = (5..=10).map(|n| 1usize << n).collect();
    let rows = run_experiment(&exp).unwrap();
    let all_matched = rows.iter().all(|r| r.matched);
    let ops = |m: Method, d: usize| rows.iter().find(|r| r.method == m && r.degree == d).unwrap().total_ops();
    let newton_cheaper = (8..=10).all(|n| ops(Method::Newton, 1 << n) < ops(Method::Aberth, 1 << n));
    let by = |m: Method| rows.iter().filter(|r| r.method == m).cloned().collect::<Vec<_>>();
    let sn = fit_loglog(&by(Method::Newton)).unwrap().slope;
    let sa = fit_loglog(&by(Method::Aberth)).unwrap().slope;
    let table: Vec<String> =
        (5..=10).map(|n| format!("n={n}: {:.2e} vs {:.2e}", ops(Method::Newton, 1 << n) as f64, ops(Method::Aberth, 1 << n) as f64)).collect();
    verdict(
        6,
        all_matched && newton_cheaper && sn <= sa - 0.3,
        format!("slopes newton {sn:.3} aberth {sa:.3}; ops {}", table.join(", ")),
    );
}

#[test]
fn criterion_07_interior_roots_side() {
    let mut wins = 0;
    let mut runs = Vec::new();
    for seed in 1..=3u64 {
        for d in [64, 128, 256] {
            let spec = FamilySpec::new(Family::RandomDisk { d }).with_seed(seed);
            let opts = SolveOptions::default();
            let n = solve(&spec, Method::Newton, &opts);
            let a = solve(&spec, Method::Aberth, &opts);
            if a.matched && a.total_ops() < n.total_ops() {
                wins += 1;
            }
            runs.push(format!("d={d} s={seed}: {:.2e}/{:.2e}", n.total_ops() as f64, a.total_ops() as f64));
        }
    }
    verdict(7, wins >= 8, format!("EA cheaper in {wins}/9 (newton/aberth ops: {})", runs.join(", ")));
}

#[test]
fn criterion_08_per_sweep_quadratic() {
    let per_sweep = |d: usize| {
        let spec = FamilySpec::new(Family::RandomCircle { d }).with_seed(1);
        let (poly, _) = spec.make().unwrap();
        let r = AberthRun::new(&poly, &aberth_cfg(&spec)).unwrap().run(&mut OpCounter::new());
        r.per_sweep_ops.iter().map(|o| o.total() as f64).sum::<f64>() / r.per_sweep_ops.len() as f64
    };
    let (small, large) = (per_sweep(128), per_sweep(256));
    let ratio = large / small;
    verdict(8, (3.5..=4.5).contains(&ratio), format!("mean ops per sweep {small:.0} -> {large:.0}, ratio {ratio:.3}"));
}

#[test]
fn criterion_09_symmetry_trap() {
    let p = PolyRepr::coefficients(vec![Complex::ONE, Complex::ZERO, Complex::ONE]).unwrap();
    let cfg = AberthConfig { max_sweeps: 500, cycle_window: 0, ..AberthConfig::default() };
    let mut run = AberthRun::from_start(&p, &cfg, vec![c(0.5, 0.0), c(-1.5, 0.0)]).unwrap();
    let mut ctx = OpCounter::new();
    let mut always_real = true;
    while run.step(&mut ctx) {
        always_real &= run.state().z.iter().all(|z| z.im == 0.0);
    }
    always_real &= run.state().z.iter().all(|z| z.im == 0.0);
    let report = run.finish();
    verdict(
        9,
        !report.converged && report.sweeps == 500 && always_real,
        format!("converged={} after {} sweeps, iterates always real: {always_real}", report.converged, report.sweeps),
    );
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, family: &str, degrees: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_polyrace"))
            .args(["bench", "--family", family, "--degrees", degrees, "--methods", "newton,aberth,hybrid,race"])
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.code().is_some_and(|c| c == 0 || c == 2));
        std::fs::read(out).unwrap()
    };
    let mut identical = true;
    for (i, (family, degrees)) in [("randdisk:d=8,seed=42", "8..64"), ("iterquad:c=1,n=3", "2^3..2^6"), ("grid:n=3", "9,25")]
        .iter()
        .enumerate()
    {
        let a = run(&format!("a{i}.csv"), family, degrees);
        let b = run(&format!("b{i}.csv"), family, degrees);
        identical &= !a.is_empty() && a == b;
    }
    verdict(10, identical, format!("three bench invocations run twice, byte-identical: {identical}"));
}

#[test]
fn criterion_11_hybrid_postprocessing() {
    let spec = FamilySpec::new(Family::Grid { n: 4 });
    let (poly, reference) = spec.make().unwrap();
    let reference = reference.roots.unwrap();
    let solved = solve(&spec, Method::Aberth, &SolveOptions::default());
    assert!(solved.matched);
    let mut worst = 0;
    let mut all_ok = true;
    // Exact found roots, then found roots carrying a 1e-4 error.
    let noisy: Vec<Complex> =
        solved.roots.iter().enumerate().map(|(j, z)| c(z.re + 1e-4 * (j as f64).cos(), z.im + 1e-4 * (j as f64).sin())).collect();
    for (drop, base) in (0..reference.len()).flat_map(|k| [(k, &solved.roots), (k, &noisy)]) {
        let mut found = base.clone();
        found.remove(drop);
        let cfg = AberthConfig {
            stop: StopMode::Reference { delta: 1e-8, roots: reference.clone() },
            ..aberth_cfg(&spec)
        };
        let r = ea_postprocess(&mut OpCounter::new(), &poly, &found, &cfg).unwrap();
        all_ok &= r.converged && match_roots(&r.roots, &reference, 1e-8).success() && r.sweeps <= 10;
        worst = worst.max(r.sweeps);
    }
    verdict(11, all_ok, format!("each of 16 roots dropped in turn, exact and noisy seeds: all recovered: {all_ok}, worst case {worst} sweeps"));
}
