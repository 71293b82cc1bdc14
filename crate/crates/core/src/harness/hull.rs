use serde::Serialize;

use super::{HarnessError, SolveOptions};
use crate::matching::match_roots;
use crate::newton::{run_plain_newton, starting_points, NewtonConfig};
use crate::numeric::{Complex, OpCounter};
use crate::poly::{FamilySpec, PolyRepr};

/// Point-count factors `c` tried by default; each run uses `⌈c·d⌉` points.
pub const DEFAULT_HULL_FACTORS: [f64; 5] = [1.0, 1.5, 2.0, 2.6, 3.0];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullRow {
    pub factor: f64,
    pub points: usize,
    /// Parallel to [`HullReport::hull`].
    pub covered: Vec<bool>,
    pub fraction: f64,
    pub ops: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullReport {
    pub family: String,
    pub degree: usize,
    /// Indices of the reference roots on the hull boundary.
    pub hull: Vec<usize>,
    pub rows: Vec<HullRow>,
    /// Smallest factor for which every hull root was found.
    pub minimal_factor: Option<f64>,
}

fn cross(o: Complex, a: Complex, b: Complex) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Vertices of the convex hull (Andrew's monotone chain), counterclockwise,
/// as indices into `pts`. Collinear points are dropped.
pub fn convex_hull(pts: &[Complex]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].re.total_cmp(&pts[b].re).then(pts[a].im.total_cmp(&pts[b].im)));
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let order: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &i in order {
            while hull.len() >= start + 2 && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= 0.0 {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Every point lying on the hull boundary, edges included, within `tol`.
pub fn hull_members(pts: &[Complex], tol: f64) -> Vec<usize> {
    let hull = convex_hull(pts);
    if hull.len() < 3 {
        // Degenerate: all points are on a segment, hence on the boundary.
        return (0..pts.len()).collect();
    }
    (0..pts.len())
        .filter(|&i| {
            let p = pts[i];
            (0..hull.len()).any(|k| {
                let (a, b) = (pts[hull[k]], pts[hull[(k + 1) % hull.len()]]);
                let len = a.dist(b);
                len > 0.0 && cross(a, b, p).abs() / len <= tol && {
                    let t = ((p.re - a.re) * (b.re - a.re) + (p.im - a.im) * (b.im - a.im)) / (len * len);
                    (-tol..=1.0 + tol).contains(&t)
                }
            })
        })
        .collect()
}

/// Runs plain Newton from `⌈c·d⌉` equidistributed circle points for each
/// factor `c` and records which hull-boundary roots some orbit reached.
pub fn convex_hull_experiment(
    spec: &FamilySpec,
    factors: &[f64],
    opts: &SolveOptions,
) -> Result<HullReport, HarnessError> {
    let (poly, reference) = spec.make()?;
    let roots = reference
        .roots
        .ok_or_else(|| HarnessError::Spec(format!("{spec} has no reference roots")))?;
    let cfg = opts.newton_for(spec);
    Ok(hull_coverage(spec.to_string(), &poly, &roots, factors, &cfg, opts.delta))
}

/// [`convex_hull_experiment`] for an arbitrary polynomial with known roots.
pub fn hull_coverage(
    label: String,
    poly: &PolyRepr,
    roots: &[Complex],
    factors: &[f64],
    cfg: &NewtonConfig,
    delta: f64,
) -> HullReport {
    let d = poly.degree();
    let hull = hull_members(roots, 1e-12);
    let hull_pts: Vec<Complex> = hull.iter().map(|&i| roots[i]).collect();
    let rows: Vec<HullRow> = factors
        .iter()
        .map(|&factor| {
            let count = (factor * d as f64).ceil().max(1.0) as usize;
            let starts = starting_points(cfg.radius(), count, cfg.phase);
            let mut ctx = OpCounter::new();
            let report = run_plain_newton(&mut ctx, poly, &starts, cfg);
            let m = match_roots(&report.root_values(), &hull_pts, delta);
            let mut covered = vec![false; hull.len()];
            for &(_, j, _) in &m.pairs {
                covered[j] = true;
            }
            let hit = covered.iter().filter(|&&c| c).count();
            HullRow {
                factor,
                points: count,
                fraction: if hull.is_empty() { 1.0 } else { hit as f64 / hull.len() as f64 },
                covered,
                ops: report.ops.total(),
            }
        })
        .collect();
    let minimal_factor = rows
        .iter()
        .filter(|r| r.covered.iter().all(|&c| c))
        .map(|r| r.factor)
        .min_by(f64::total_cmp);
    HullReport { family: label, degree: d, hull, rows, minimal_factor }
}
