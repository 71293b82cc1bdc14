//! Browser bindings: Newton basins, root clouds and Ehrlich-Aberth
//! trajectories. The plain functions are what the wrappers call and what the
//! native tests exercise.

use polyrace::aberth::AberthRun;
use polyrace::harness::{solve as solve_spec, Method, SolveOptions};
use polyrace::newton::newton_step;
use polyrace::numeric::{Complex, OpCounter};
use polyrace::poly::{FamilySpec, PolyRepr};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn parse(family: &str) -> Result<FamilySpec, String> {
    let spec: FamilySpec = family.parse().map_err(|e| format!("{e}"))?;
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

/// Reference roots when the family has them, Ehrlich-Aberth roots otherwise.
fn roots_of(spec: &FamilySpec) -> Result<(PolyRepr, Vec<Complex>), String> {
    let (poly, reference) = spec.make().map_err(|e| e.to_string())?;
    if let Some(r) = reference.roots {
        return Ok((poly, r));
    }
    let report = solve_spec(spec, Method::Aberth, &SolveOptions::default());
    if !report.matched {
        return Err(format!("could not solve {spec}"));
    }
    Ok((poly, report.roots))
}

fn hue_rgb(h: f64, v: f64) -> [u8; 3] {
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let x = 1.0 - (h6 % 2.0 - 1.0).abs();
    let (r, g, b) = match h6 as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    [(r * v * 255.0) as u8, (g * v * 255.0) as u8, (b * v * 255.0) as u8]
}

/// RGBA pixels of the Newton basins over the square `[-half, half]²`
/// (row 0 at the top). Each root gets a hue; darker means slower. Points
/// that reach no root within `max_iter` steps stay black.
pub fn basin_pixels(family: &str, width: usize, height: usize, half: f64, max_iter: usize) -> Result<Vec<u8>, String> {
    if width == 0 || height == 0 || !(half > 0.0) {
        return Err("empty viewport".into());
    }
    let spec = parse(family)?;
    let (poly, roots) = roots_of(&spec)?;
    let d = roots.len().max(1);
    let sep = roots
        .iter()
        .enumerate()
        .flat_map(|(i, a)| roots[i + 1..].iter().map(move |b| a.dist(*b)))
        .fold(f64::INFINITY, f64::min);
    let catch = (0.25 * sep).min(1e-3);
    let mut ctx = OpCounter::new();
    let mut px = Vec::with_capacity(width * height * 4);
    for row in 0..height {
        let im = half - 2.0 * half * (row as f64 + 0.5) / height as f64;
        for col in 0..width {
            let re = -half + 2.0 * half * (col as f64 + 0.5) / width as f64;
            let mut z = Complex::new(re, im);
            let mut hit = None;
            for it in 0..max_iter {
                if let Some(k) = roots.iter().position(|r| r.dist(z) < catch) {
                    hit = Some((k, it));
                    break;
                }
                match newton_step(&mut ctx, &poly, z) {
                    Ok(next) if next.is_finite() => z = next,
                    _ => break,
                }
            }
            let rgb = match hit {
                Some((k, it)) => hue_rgb(k as f64 / d as f64, 1.0 - 0.75 * (it as f64 / max_iter as f64)),
                None => [0, 0, 0],
            };
            px.extend_from_slice(&[rgb[0], rgb[1], rgb[2], 255]);
        }
    }
    Ok(px)
}

/// The full solve report as JSON.
pub fn solve_json(family: &str, method: &str) -> Result<String, String> {
    let spec = parse(family)?;
    let method: Method = method.parse().map_err(|e| format!("{e}"))?;
    let report = solve_spec(&spec, method, &SolveOptions::default());
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[derive(Serialize)]
pub struct Trajectories {
    pub degree: usize,
    /// One frame per sweep, starting with the initial circle.
    pub frames: Vec<Vec<Complex>>,
    pub converged: bool,
}

/// Ehrlich-Aberth positions after each sweep, capped at `max_sweeps`.
pub fn trajectories(family: &str, max_sweeps: usize) -> Result<Trajectories, String> {
    let spec = parse(family)?;
    let (poly, _) = spec.make().map_err(|e| e.to_string())?;
    let cfg = SolveOptions::default().aberth_for(&spec);
    let mut run = AberthRun::new(&poly, &cfg).map_err(|e| e.to_string())?;
    let mut ctx = OpCounter::new();
    let mut frames = vec![run.state().z.clone()];
    while frames.len() <= max_sweeps && !run.is_done() {
        run.step(&mut ctx);
        frames.push(run.state().z.clone());
    }
    Ok(Trajectories { degree: poly.degree(), frames, converged: run.converged() })
}

#[wasm_bindgen(js_name = basins)]
pub fn basins_js(family: &str, width: usize, height: usize, half: f64, max_iter: usize) -> Result<Vec<u8>, JsError> {
    basin_pixels(family, width, height, half, max_iter).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = solve)]
pub fn solve_js(family: &str, method: &str) -> Result<String, JsError> {
    solve_json(family, method).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = trajectories)]
pub fn trajectories_js(family: &str, max_sweeps: usize) -> Result<String, JsError> {
    let t = trajectories(family, max_sweeps).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&t).map_err(|e| JsError::new(&e.to_string()))
}
