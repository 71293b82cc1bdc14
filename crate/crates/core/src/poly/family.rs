//! The experiment families and their string grammar.
//!
//! ```text
//! iterquad:c=0+1i,n=12[,eval=fast|slow]
//! mandel:n=10[,eval=fast|slow]
//! chebyshev:d=256[,eval=fast|slow]
//! legendre:d=100
//! randcircle:d=256[,seed=7]
//! randdisk:d=256[,seed=7]
//! grid:n=8
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rng::SplitMix64;
use super::{expand_to_coefficients, PolyError, PolyRepr, MAX_EXPAND_DEGREE};
use crate::numeric::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    Fast,
    Slow,
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalMode::Fast => "fast",
            EvalMode::Slow => "slow",
        })
    }
}

impl FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fast" => Ok(EvalMode::Fast),
            "slow" => Ok(EvalMode::Slow),
            _ => Err(format!("unknown eval mode `{s}` (expected fast or slow)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// Periodic points of `z² + c` of period dividing `n`.
    IterQuad { c: Complex, n: u32 },
    /// Centers of hyperbolic components of period dividing `n`.
    MandelCenter { n: u32 },
    Chebyshev { d: usize },
    Legendre { d: usize },
    RandomCircle { d: usize },
    RandomDisk { d: usize },
    /// `{1..n} + i{1..n}`, rescaled into the unit disk.
    Grid { n: usize },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::IterQuad { .. } => "iterquad",
            Family::MandelCenter { .. } => "mandel",
            Family::Chebyshev { .. } => "chebyshev",
            Family::Legendre { .. } => "legendre",
            Family::RandomCircle { .. } => "randcircle",
            Family::RandomDisk { .. } => "randdisk",
            Family::Grid { .. } => "grid",
        }
    }

    pub fn degree(&self) -> usize {
        match *self {
            Family::IterQuad { n, .. } => 1 << n,
            Family::MandelCenter { n } => 1 << (n - 1),
            Family::Chebyshev { d }
            | Family::Legendre { d }
            | Family::RandomCircle { d }
            | Family::RandomDisk { d } => d,
            Family::Grid { n } => n * n,
        }
    }

    /// True when a recursive `O(log d)` evaluation exists.
    pub fn supports_fast(&self) -> bool {
        match *self {
            Family::IterQuad { .. } | Family::MandelCenter { .. } => true,
            Family::Chebyshev { d } => d.is_power_of_two(),
            _ => false,
        }
    }

    pub fn default_eval(&self) -> EvalMode {
        match self {
            Family::IterQuad { .. } | Family::MandelCenter { .. } | Family::Chebyshev { .. }
                if self.supports_fast() =>
            {
                EvalMode::Fast
            }
            _ => EvalMode::Slow,
        }
    }

    /// The same family at another degree. Iterated quadratics, Mandelbrot
    /// centers and fast Chebyshev need powers of two; the grid needs a
    /// perfect square.
    pub fn with_degree(&self, degree: usize) -> Result<Family, PolyError> {
        let pow2 = |what: &str| -> Result<u32, PolyError> {
            if degree.is_power_of_two() {
                Ok(degree.trailing_zeros())
            } else {
                Err(PolyError::InvalidDegree(format!("{what} needs a power-of-two degree, got {degree}")))
            }
        };
        let fam = match *self {
            Family::IterQuad { c, .. } => {
                let n = pow2("iterquad")?;
                Family::IterQuad { c, n }
            }
            Family::MandelCenter { .. } => Family::MandelCenter { n: pow2("mandel")? + 1 },
            Family::Chebyshev { .. } => Family::Chebyshev { d: degree },
            Family::Legendre { .. } => Family::Legendre { d: degree },
            Family::RandomCircle { .. } => Family::RandomCircle { d: degree },
            Family::RandomDisk { .. } => Family::RandomDisk { d: degree },
            Family::Grid { .. } => {
                let n = (degree as f64).sqrt().round() as usize;
                if n * n != degree {
                    return Err(PolyError::InvalidDegree(format!(
                        "grid needs a perfect-square degree n^2, got {degree}"
                    )));
                }
                Family::Grid { n }
            }
        };
        fam.validate()?;
        Ok(fam)
    }

    /// An upper bound on the modulus of every root.
    pub fn root_radius(&self) -> f64 {
        match *self {
            // Outside this radius |z|² − |c| > |z|, so orbits of z² + c escape.
            Family::IterQuad { c, .. } => 0.5 + (0.25 + c.norm()).sqrt(),
            Family::MandelCenter { .. } => 2.0,
            _ => 1.0,
        }
    }

    fn validate(&self) -> Result<(), PolyError> {
        let bad = |msg: String| Err(PolyError::InvalidDegree(msg));
        match *self {
            Family::IterQuad { c, n } => {
                if !c.is_finite() {
                    return Err(PolyError::Invalid("c must be finite".into()));
                }
                if !(1..=40).contains(&n) {
                    return bad(format!("iterquad needs 1 <= n <= 40, got {n}"));
                }
            }
            Family::MandelCenter { n } if !(1..=41).contains(&n) => {
                return bad(format!("mandel needs 1 <= n <= 41, got {n}"));
            }
            Family::Chebyshev { d }
            | Family::Legendre { d }
            | Family::RandomCircle { d }
            | Family::RandomDisk { d }
                if d == 0 =>
            {
                return bad("degree must be at least 1".into());
            }
            Family::Grid { n } if n == 0 => return bad("grid needs n >= 1".into()),
            _ => {}
        }
        Ok(())
    }
}

/// A fully specified polynomial instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub eval: EvalMode,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    ExactFormula,
    Constructed,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceRoots {
    pub roots: Option<Vec<Complex>>,
    pub kind: RootKind,
}

impl ReferenceRoots {
    fn unknown() -> Self {
        ReferenceRoots { roots: None, kind: RootKind::Unknown }
    }
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec { family, eval: family.default_eval(), seed: 0 }
    }

    pub fn with_eval(mut self, eval: EvalMode) -> Self {
        self.eval = eval;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn degree(&self) -> usize {
        self.family.degree()
    }

    /// Short name for tables: the tag plus `c` for iterated quadratics.
    pub fn label(&self) -> String {
        match self.family {
            Family::IterQuad { c, .. } => format!("iterquad:c={c}"),
            f => f.tag().to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), PolyError> {
        self.family.validate()?;
        if self.eval == EvalMode::Fast && !self.family.supports_fast() {
            return Err(PolyError::UnsupportedEvalMode {
                family: self.to_string(),
                mode: self.eval.to_string(),
            });
        }
        Ok(())
    }

    /// Builds the polynomial and whatever reference roots are known.
    pub fn make(&self) -> Result<(PolyRepr, ReferenceRoots), PolyError> {
        self.validate()?;
        let fam = self.family;
        let d = fam.degree();
        let fast_or_expanded = |native: PolyRepr| -> Result<PolyRepr, PolyError> {
            match self.eval {
                EvalMode::Fast => Ok(native),
                EvalMode::Slow if d > MAX_EXPAND_DEGREE => Err(PolyError::DegreeTooLargeForSlowMode(d)),
                EvalMode::Slow => expand_to_coefficients(&native),
            }
        };
        Ok(match fam {
            Family::IterQuad { c, n } => {
                (fast_or_expanded(PolyRepr::IterQuad { c, n })?, ReferenceRoots::unknown())
            }
            Family::MandelCenter { n } => {
                (fast_or_expanded(PolyRepr::MandelCenter { n })?, ReferenceRoots::unknown())
            }
            Family::Chebyshev { d } => {
                let poly = match self.eval {
                    EvalMode::Fast => PolyRepr::ChebyshevFast { k: d.trailing_zeros() },
                    EvalMode::Slow => PolyRepr::ChebyshevRec { degree: d },
                };
                let roots = chebyshev_roots(d);
                (poly, ReferenceRoots { roots: Some(roots), kind: RootKind::ExactFormula })
            }
            Family::Legendre { d } => (PolyRepr::LegendreRec { degree: d }, ReferenceRoots::unknown()),
            Family::RandomCircle { d } => {
                let mut rng = SplitMix64::new(self.seed);
                let roots: Vec<Complex> = (0..d)
                    .map(|_| Complex::from_polar(1.0, 2.0 * PI * rng.next_f64()))
                    .collect();
                constructed(roots)
            }
            Family::RandomDisk { d } => {
                let mut rng = SplitMix64::new(self.seed);
                let roots: Vec<Complex> = (0..d)
                    .map(|_| {
                        let r = rng.next_f64();
                        let phi = 2.0 * PI * rng.next_f64();
                        Complex::from_polar(r, phi)
                    })
                    .collect();
                constructed(roots)
            }
            Family::Grid { n } => constructed(grid_roots(n)),
        })
    }
}

fn constructed(roots: Vec<Complex>) -> (PolyRepr, ReferenceRoots) {
    (
        PolyRepr::Roots(roots.clone()),
        ReferenceRoots { roots: Some(roots), kind: RootKind::Constructed },
    )
}

/// `cos((2j − 1)π / 2d)` for `j = 1..d`.
pub fn chebyshev_roots(d: usize) -> Vec<Complex> {
    (1..=d)
        .map(|j| Complex::real(((2 * j - 1) as f64 * PI / (2 * d) as f64).cos()))
        .collect()
}

/// The grid `{1..n} + i{1..n}`, before rescaling.
pub fn raw_grid(n: usize) -> Vec<Complex> {
    let mut out = Vec::with_capacity(n * n);
    for a in 1..=n {
        for b in 1..=n {
            out.push(Complex::new(a as f64, b as f64));
        }
    }
    out
}

/// The grid centered at the origin and scaled by `√2/(n+1)`, which puts
/// the corners at modulus `(n−1)/(n+1) < 1`.
pub fn grid_roots(n: usize) -> Vec<Complex> {
    let mid = (n + 1) as f64 / 2.0;
    let s = std::f64::consts::SQRT_2 / (n + 1) as f64;
    raw_grid(n)
        .into_iter()
        .map(|z| Complex::new((z.re - mid) * s, (z.im - mid) * s))
        .collect()
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::IterQuad { c, n } => write!(f, "iterquad:c={c},n={n},eval={}", self.eval),
            Family::MandelCenter { n } => write!(f, "mandel:n={n},eval={}", self.eval),
            Family::Chebyshev { d } => write!(f, "chebyshev:d={d},eval={}", self.eval),
            Family::Legendre { d } => write!(f, "legendre:d={d}"),
            Family::RandomCircle { d } => write!(f, "randcircle:d={d},seed={}", self.seed),
            Family::RandomDisk { d } => write!(f, "randdisk:d={d},seed={}", self.seed),
            Family::Grid { n } => write!(f, "grid:n={n}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| PolyError::Parse { spec: s.to_string(), reason };
        let (tag, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut c = None;
        let mut n = None;
        let mut d = None;
        let mut eval = None;
        let mut seed = 0u64;
        for kv in rest.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{kv}`")))?;
            let v = v.trim();
            let int = |v: &str| v.parse::<usize>().map_err(|e| err(format!("{k}: {e}")));
            match k.trim() {
                "c" => c = Some(v.parse::<Complex>().map_err(|e| err(format!("c: {}", e.0)))?),
                "n" => n = Some(int(v)?),
                "d" => d = Some(int(v)?),
                "eval" => eval = Some(v.parse::<EvalMode>().map_err(err)?),
                "seed" => seed = v.parse::<u64>().map_err(|e| err(format!("seed: {e}")))?,
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let need = |x: Option<usize>, key: &str| x.ok_or_else(|| err(format!("missing `{key}=`")));
        let exponent = |x: usize| u32::try_from(x).map_err(|_| err("n is too large".into()));
        let family = match tag.trim() {
            "iterquad" | "iter_quad" => Family::IterQuad {
                c: c.unwrap_or(Complex::I),
                n: exponent(need(n, "n")?)?,
            },
            "mandel" | "mandel_center" => Family::MandelCenter { n: exponent(need(n, "n")?)? },
            "chebyshev" => Family::Chebyshev { d: need(d, "d")? },
            "legendre" => Family::Legendre { d: need(d, "d")? },
            "randcircle" | "random_circle" => Family::RandomCircle { d: need(d, "d")? },
            "randdisk" | "random_disk" => Family::RandomDisk { d: need(d, "d")? },
            "grid" => Family::Grid { n: need(n, "n")? },
            other => return Err(err(format!("unknown family `{other}`"))),
        };
        if c.is_some() && !matches!(family, Family::IterQuad { .. }) {
            return Err(err("`c=` only applies to iterquad".into()));
        }
        family.validate().map_err(|e| err(e.to_string()))?;
        let spec = FamilySpec { family, eval: eval.unwrap_or_else(|| family.default_eval()), seed };
        spec.validate()?;
        Ok(spec)
    }
}

/// Grammar summary printed by `polyrace families`.
pub const FAMILY_GRAMMAR: &str = "\
iterquad:c=<complex>,n=<periods>[,eval=fast|slow]   z -> z^2+c iterated n times, minus z; degree 2^n
mandel:n=<periods>[,eval=fast|slow]                 centers q_n(c), q_0=0, q_{m+1}=q_m^2+c; degree 2^(n-1)
chebyshev:d=<degree>[,eval=fast|slow]               T_d; fast needs d = 2^k (doubling), slow uses the three-term recurrence
legendre:d=<degree>                                  P_d by the three-term recurrence
randcircle:d=<degree>[,seed=<u64>]                  d roots uniform on the unit circle
randdisk:d=<degree>[,seed=<u64>]                    d roots r*e^(i*phi), (r, phi) uniform on [0,1] x [0,2pi)
grid:n=<side>                                        {1..n} + i{1..n}, centered and scaled into the unit disk; degree n^2

Complex literals: 1, -0.5, 2i, 0+1i, 1.5-2e-3i.
In `bench --degrees`, a degree replaces the family's size: iterquad and mandel need powers of two, grid needs n^2.";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "iterquad:c=0+1i,n=12,eval=fast",
            "iterquad:c=1+0i,n=6,eval=slow",
            "mandel:n=10,eval=fast",
            "chebyshev:d=256,eval=fast",
            "chebyshev:d=100,eval=slow",
            "legendre:d=40",
            "randcircle:d=256,seed=7",
            "randdisk:d=256,seed=7",
            "grid:n=8",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn defaults_and_aliases() {
        let s: FamilySpec = "iterquad:n=4".parse().unwrap();
        assert_eq!(s.family, Family::IterQuad { c: Complex::I, n: 4 });
        assert_eq!(s.eval, EvalMode::Fast);
        let s: FamilySpec = "chebyshev:d=100".parse().unwrap();
        assert_eq!(s.eval, EvalMode::Slow);
        let s: FamilySpec = "random_disk:d=5".parse().unwrap();
        assert_eq!(s.family, Family::RandomDisk { d: 5 });
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "nope:d=4",
            "grid",
            "grid:n=0",
            "chebyshev:d=100,eval=fast",
            "legendre:d=8,eval=fast",
            "randdisk:d=8,seed=-1",
            "grid:n=3,c=1",
            "iterquad:n=4,c=zz",
            "grid:n=4,x=1",
        ] {
            assert!(bad.parse::<FamilySpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_before_rescaling() {
        let g = raw_grid(2);
        assert_eq!(
            g,
            vec![Complex::new(1.0, 1.0), Complex::new(1.0, 2.0), Complex::new(2.0, 1.0), Complex::new(2.0, 2.0)]
        );
    }

    #[test]
    fn grid_inside_unit_disk() {
        for n in 1..=40 {
            let g = grid_roots(n);
            assert_eq!(g.len(), n * n);
            assert!(g.iter().all(|z| z.norm() < 1.0), "n = {n}");
        }
    }

    #[test]
    fn chebyshev_reference() {
        let spec = FamilySpec::new(Family::Chebyshev { d: 2 });
        let (_, refs) = spec.make().unwrap();
        let r = refs.roots.unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r[0].re - h).abs() < 1e-15 && (r[1].re + h).abs() < 1e-15);
        assert_eq!(refs.kind, RootKind::ExactFormula);
    }

    #[test]
    fn random_families_are_deterministic() {
        let spec = FamilySpec::new(Family::RandomCircle { d: 100 }).with_seed(7);
        assert_eq!(spec.make().unwrap(), spec.make().unwrap());
        let other = spec.with_seed(8);
        assert_ne!(spec.make().unwrap().1, other.make().unwrap().1);
        let disk = FamilySpec::new(Family::RandomDisk { d: 1000 }).with_seed(1);
        let roots = disk.make().unwrap().1.roots.unwrap();
        assert!(roots.iter().all(|z| z.norm() <= 1.0));
    }

    #[test]
    fn with_degree_mapping() {
        let iq = Family::IterQuad { c: Complex::I, n: 3 };
        assert_eq!(iq.with_degree(1024).unwrap(), Family::IterQuad { c: Complex::I, n: 10 });
        assert!(iq.with_degree(1000).is_err());
        assert_eq!(Family::MandelCenter { n: 2 }.with_degree(8).unwrap(), Family::MandelCenter { n: 4 });
        assert_eq!(Family::Grid { n: 2 }.with_degree(49).unwrap(), Family::Grid { n: 7 });
        assert!(Family::Grid { n: 2 }.with_degree(50).is_err());
    }

    #[test]
    fn slow_mode_limits() {
        let spec = FamilySpec::new(Family::IterQuad { c: Complex::ZERO, n: 15 }).with_eval(EvalMode::Slow);
        assert_eq!(spec.make().unwrap_err(), PolyError::DegreeTooLargeForSlowMode(1 << 15));
        let spec = FamilySpec::new(Family::IterQuad { c: Complex::ZERO, n: 3 }).with_eval(EvalMode::Slow);
        assert!(matches!(spec.make().unwrap().0, PolyRepr::Coefficients(_)));
    }
}
