//! Root-set comparison: injective matching against known roots and the
//! a-posteriori separation check used when no reference exists.

use serde::Serialize;

use crate::numeric::Complex;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchResult {
    /// `(approx index, reference index, distance)`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_approx: Vec<usize>,
    pub unmatched_reference: Vec<usize>,
}

impl MatchResult {
    /// Every reference root has a partner.
    pub fn success(&self) -> bool {
        self.unmatched_reference.is_empty()
    }

    pub fn missed(&self) -> usize {
        self.unmatched_reference.len()
    }

    pub fn max_distance(&self) -> f64 {
        self.pairs.iter().map(|p| p.2).fold(0.0, f64::max)
    }
}

/// Greedy matching: repeatedly pairs the globally closest remaining
/// (approx, reference) couple with distance `< delta`.
///
/// Only candidate edges shorter than `delta` are generated, found by a
/// sort-and-sweep on the real part, so the cost is near linear when the
/// roots are well separated.
pub fn match_roots(approx: &[Complex], reference: &[Complex], delta: f64) -> MatchResult {
    let mut by_re: Vec<usize> = (0..reference.len()).collect();
    by_re.sort_by(|&a, &b| reference[a].re.total_cmp(&reference[b].re));
    let sorted_re: Vec<f64> = by_re.iter().map(|&j| reference[j].re).collect();

    let mut edges = Vec::new();
    for (i, a) in approx.iter().enumerate() {
        if !a.is_finite() {
            continue;
        }
        let start = sorted_re.partition_point(|&re| re <= a.re - delta);
        for &j in &by_re[start..] {
            let r = reference[j];
            if r.re >= a.re + delta {
                break;
            }
            let dist = a.dist(r);
            if dist < delta {
                edges.push((dist, i, j));
            }
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut used_a = vec![false; approx.len()];
    let mut used_r = vec![false; reference.len()];
    let mut pairs = Vec::new();
    for (dist, i, j) in edges {
        if !used_a[i] && !used_r[j] {
            used_a[i] = true;
            used_r[j] = true;
            pairs.push((i, j, dist));
        }
    }
    pairs.sort_by_key(|p| p.0);
    MatchResult {
        pairs,
        unmatched_approx: (0..approx.len()).filter(|&i| !used_a[i]).collect(),
        unmatched_reference: (0..reference.len()).filter(|&j| !used_r[j]).collect(),
    }
}

/// Groups points into clusters: a point joins the first cluster whose
/// representative lies within `radius`, otherwise it starts a new one.
/// Returns `(representative index, member indices)` in order of first
/// appearance.
pub fn cluster(points: &[Complex], radius: f64) -> Vec<(usize, Vec<usize>)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].re.total_cmp(&points[b].re).then(a.cmp(&b)));
    // Representatives in increasing order of real part.
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut clusters: Vec<(usize, Vec<usize>)> = Vec::new();
    for &i in &order {
        let p = points[i];
        let mut found = None;
        for &(rep, slot) in reps.iter().rev() {
            if points[rep].re < p.re - radius {
                break;
            }
            if points[rep].dist(p) <= radius {
                found = Some(slot);
                break;
            }
        }
        match found {
            Some(slot) => clusters[slot].1.push(i),
            None => {
                reps.push((i, clusters.len()));
                clusters.push((i, vec![i]));
            }
        }
    }
    for c in clusters.iter_mut() {
        c.1.sort_unstable();
    }
    clusters.sort_by_key(|c| c.1[0]);
    clusters
}

/// Smallest pairwise distance, by sort and sweep; `+inf` for fewer than
/// two points.
pub fn min_separation(points: &[Complex]) -> f64 {
    let mut pts: Vec<Complex> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j].re - pts[i].re >= best {
                break;
            }
            best = best.min(pts[i].dist(pts[j]));
        }
    }
    best
}

/// Accepts `roots` as a complete root set of a degree-`degree` polynomial:
/// exactly `degree` points, pairwise farther apart than `2δ`, each with
/// residual below `max_residual`.
pub fn a_posteriori_ok(roots: &[Complex], residuals: &[f64], degree: usize, delta: f64, max_residual: f64) -> bool {
    roots.len() == degree
        && residuals.iter().all(|&r| r < max_residual)
        && min_separation(roots) > 2.0 * delta
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn identical_sets_in_any_order() {
        let r = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let mut a = r.clone();
        a.reverse();
        let m = match_roots(&a, &r, 1e-8);
        assert!(m.success());
        assert_eq!(m.pairs.len(), 4);
        assert!(m.pairs.iter().all(|p| p.2 == 0.0));
    }

    #[test]
    fn missing_root() {
        let r = vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let m = match_roots(&r[..2], &r, 1e-8);
        assert_eq!(m.missed(), 1);
        assert_eq!(m.unmatched_reference, vec![2]);
        assert!(!m.success());
    }

    #[test]
    fn noisy_match() {
        let r: Vec<Complex> = (0..50).map(|k| Complex::from_polar(1.0, k as f64 * 0.1)).collect();
        let a: Vec<Complex> = r.iter().map(|z| c(z.re + 1e-12, z.im - 1e-12)).collect();
        let m = match_roots(&a, &r, 1e-8);
        assert!(m.success());
        assert!(m.max_distance() < 2e-12);
    }

    #[test]
    fn greedy_prefers_shortest_edge() {
        let r = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let a = vec![c(0.6, 0.0), c(0.95, 0.0)];
        let m = match_roots(&a, &r, 0.7);
        assert_eq!(m.pairs.iter().map(|p| (p.0, p.1)).collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn clusters_merge_close_points() {
        let pts = vec![c(1.0, 0.0), c(1.0 + 1e-9, 0.0), c(-1.0, 0.0)];
        let cl = cluster(&pts, 2e-8);
        assert_eq!(cl, vec![(0, vec![0, 1]), (2, vec![2])]);
        assert!(cluster(&[], 1.0).is_empty());
    }

    #[test]
    fn separation() {
        let pts = vec![c(0.0, 0.0), c(3.0, 4.0), c(0.0, 1.0)];
        assert_eq!(min_separation(&pts), 1.0);
        assert!(a_posteriori_ok(&pts, &[0.0; 3], 3, 0.25, 1e-6));
        assert!(!a_posteriori_ok(&pts, &[0.0; 3], 3, 0.5, 1e-6));
        assert!(!a_posteriori_ok(&pts, &[0.0, 1.0, 0.0], 3, 0.25, 1e-6));
        assert!(!a_posteriori_ok(&pts, &[0.0; 3], 4, 0.25, 1e-6));
    }
}
