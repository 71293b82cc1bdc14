//! Polynomial representations and their native evaluation schemes.
//!
//! A polynomial never has to be given by coefficients: every solver only
//! needs `p`, `p'`, or the ratio `p/p'` at a point. Each representation
//! evaluates these with its own scheme, so recursive forms cost `O(log d)`
//! and coefficient or root forms cost `O(d)` counted operations.
//!
//! Evaluation runs in extended range ([`Scaled`]) so orbits far from the
//! roots never overflow, even for degrees in the millions.

mod family;
pub mod rng;

pub use family::{chebyshev_roots, grid_roots, raw_grid, EvalMode, Family, FamilySpec, ReferenceRoots, RootKind, FAMILY_GRAMMAR};

use thiserror::Error;

use crate::numeric::{Complex, OpCounter, Scaled};

/// Largest degree that may be materialized as a coefficient list.
pub const MAX_EXPAND_DEGREE: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("invalid polynomial: {0}")]
    Invalid(String),
    #[error("eval mode `{mode}` is not available for family `{family}`")]
    UnsupportedEvalMode { family: String, mode: String },
    #[error("degree {0} exceeds the slow-mode limit of 2^14")]
    DegreeTooLargeForSlowMode(usize),
    #[error("degree {0} is too large to expand into coefficients")]
    DegreeTooLarge(usize),
    #[error("coefficient magnitude exceeds the f64 range")]
    CoefficientOverflow,
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("invalid family spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("p'(z) = 0")]
    DerivativeZero,
    #[error("value not representable")]
    Overflow,
    #[error("non-finite evaluation point")]
    NonFiniteInput,
}

/// A univariate polynomial in one of its native forms.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyRepr {
    /// Coefficients, lowest degree first; the leading coefficient is nonzero
    /// (and is 1 for every polynomial built from roots or recursions except
    /// the classical Chebyshev and Legendre normalizations).
    Coefficients(Vec<Complex>),
    /// `∏ (z − ξ_i)`.
    Roots(Vec<Complex>),
    /// `p_c^{∘n}(z) − z` with `p_c(z) = z² + c`; degree `2^n`.
    IterQuad { c: Complex, n: u32 },
    /// `q_n(c)` with `q_0 = 0`, `q_{m+1} = q_m² + c`; degree `2^{n−1}`.
    MandelCenter { n: u32 },
    /// `T_{2^k}` by the doubling rule `T_{2m} = 2T_m² − 1`.
    ChebyshevFast { k: u32 },
    /// `T_d` by the three-term recurrence `T_{m+1} = 2zT_m − T_{m−1}`.
    ChebyshevRec { degree: usize },
    /// Legendre `P_d` by `(m+1)P_{m+1} = (2m+1)zP_m − mP_{m−1}`.
    LegendreRec { degree: usize },
}

/// `p(z)`, `p'(z)` and `p(z)/p'(z)` (absent when `p'(z) = 0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOut {
    pub value: Complex,
    pub deriv: Complex,
    pub newton_ratio: Option<Complex>,
}

/// Result of evaluating `p'/p`, the "net charge" seen at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogDerivative {
    /// `p(z) = 0` exactly.
    AtRoot,
    Value(Complex),
}

impl PolyRepr {
    pub fn coefficients(coeffs: Vec<Complex>) -> Result<Self, PolyError> {
        match coeffs.last() {
            Some(lead) if coeffs.len() >= 2 && !lead.is_zero() => Ok(PolyRepr::Coefficients(coeffs)),
            _ => Err(PolyError::Invalid(
                "need degree >= 1 and a nonzero leading coefficient".into(),
            )),
        }
    }

    pub fn roots(roots: Vec<Complex>) -> Result<Self, PolyError> {
        if roots.is_empty() {
            return Err(PolyError::Invalid("root list is empty".into()));
        }
        Ok(PolyRepr::Roots(roots))
    }

    pub fn iter_quad(c: Complex, n: u32) -> Result<Self, PolyError> {
        if !(1..=40).contains(&n) {
            return Err(PolyError::InvalidDegree(format!("iterquad needs 1 <= n <= 40, got {n}")));
        }
        Ok(PolyRepr::IterQuad { c, n })
    }

    pub fn mandel_center(n: u32) -> Result<Self, PolyError> {
        if !(1..=41).contains(&n) {
            return Err(PolyError::InvalidDegree(format!("mandel needs 1 <= n <= 41, got {n}")));
        }
        Ok(PolyRepr::MandelCenter { n })
    }

    pub fn degree(&self) -> usize {
        match self {
            PolyRepr::Coefficients(c) => c.len() - 1,
            PolyRepr::Roots(r) => r.len(),
            PolyRepr::IterQuad { n, .. } => 1 << n,
            PolyRepr::MandelCenter { n } => 1 << (n - 1),
            PolyRepr::ChebyshevFast { k } => 1 << k,
            PolyRepr::ChebyshevRec { degree } | PolyRepr::LegendreRec { degree } => *degree,
        }
    }

    /// True for the representations evaluated in `O(log d)`.
    pub fn is_fast(&self) -> bool {
        matches!(
            self,
            PolyRepr::IterQuad { .. } | PolyRepr::MandelCenter { .. } | PolyRepr::ChebyshevFast { .. }
        )
    }
}

/// Value-only Horner: exactly `d` complex multiplications and `d` complex
/// additions, i.e. `4d` real multiplications and `4d` real additions.
pub fn horner(ctx: &mut OpCounter, coeffs: &[Complex], z: Complex) -> Scaled {
    let zs = Scaled::from(z);
    let (lead, rest) = coeffs.split_last().expect("nonempty coefficient list");
    let mut b = Scaled::from(*lead);
    for &a in rest.iter().rev() {
        b = ctx.xmul(b, zs);
        b = ctx.xadd(b, Scaled::from(a));
    }
    b
}

fn horner_with_deriv(ctx: &mut OpCounter, coeffs: &[Complex], z: Complex) -> (Scaled, Scaled) {
    let zs = Scaled::from(z);
    let (lead, rest) = coeffs.split_last().expect("nonempty coefficient list");
    let mut b = Scaled::from(*lead);
    let mut db = Scaled::ZERO;
    for &a in rest.iter().rev() {
        db = ctx.xmul(db, zs);
        db = ctx.xadd(db, b);
        b = ctx.xmul(b, zs);
        b = ctx.xadd(b, Scaled::from(a));
    }
    (b, db)
}

/// `(p(z), p'(z))` for every form except root lists.
fn eval_recursive(ctx: &mut OpCounter, poly: &PolyRepr, z: Complex) -> (Scaled, Scaled) {
    let one = Scaled::from(Complex::ONE);
    let zs = Scaled::from(z);
    match poly {
        PolyRepr::Coefficients(c) => horner_with_deriv(ctx, c, z),
        PolyRepr::IterQuad { c, n } => {
            let cs = Scaled::from(*c);
            let (mut w, mut dw) = (zs, one);
            for _ in 0..*n {
                dw = ctx.xmul(w, dw);
                dw = ctx.xscale(2.0, dw);
                w = ctx.xsqr(w);
                w = ctx.xadd(w, cs);
            }
            (ctx.xsub(w, zs), ctx.xsub(dw, one))
        }
        PolyRepr::MandelCenter { n } => {
            let (mut q, mut dq) = (Scaled::ZERO, Scaled::ZERO);
            for _ in 0..*n {
                dq = ctx.xmul(q, dq);
                dq = ctx.xscale(2.0, dq);
                dq = ctx.xadd(dq, one);
                q = ctx.xsqr(q);
                q = ctx.xadd(q, zs);
            }
            (q, dq)
        }
        PolyRepr::ChebyshevFast { k } => {
            let (mut t, mut dt) = (zs, one);
            for _ in 0..*k {
                dt = ctx.xmul(t, dt);
                dt = ctx.xscale(4.0, dt);
                t = ctx.xsqr(t);
                t = ctx.xscale(2.0, t);
                t = ctx.xsub(t, one);
            }
            (t, dt)
        }
        PolyRepr::ChebyshevRec { degree } => {
            let z2 = Scaled::from(ctx.scale(2.0, z));
            let (mut t0, mut t1) = (one, zs);
            let (mut d0, mut d1) = (Scaled::ZERO, one);
            for _ in 1..*degree {
                // T'_{m+1} = 2T_m + 2zT'_m − T'_{m−1}
                let a = ctx.xscale(2.0, t1);
                let b = ctx.xmul(z2, d1);
                let s = ctx.xadd(a, b);
                let d2 = ctx.xsub(s, d0);
                let u = ctx.xmul(z2, t1);
                let t2 = ctx.xsub(u, t0);
                (t0, t1, d0, d1) = (t1, t2, d1, d2);
            }
            (t1, d1)
        }
        PolyRepr::LegendreRec { degree } => legendre(ctx, *degree, z),
        PolyRepr::Roots(_) => unreachable!("root lists are evaluated separately"),
    }
}

/// Legendre `P_d` and `P'_d`. The derivative uses
/// `(z²−1)P'_d = d(zP_d − P_{d−1})`, falling back to the derivative
/// recurrence `P'_{m+1} = P'_{m−1} + (2m+1)P_m` when `|z²−1| < 1e−12`.
fn legendre(ctx: &mut OpCounter, degree: usize, z: Complex) -> (Scaled, Scaled) {
    let one = Scaled::from(Complex::ONE);
    let zs = Scaled::from(z);
    let zz1 = {
        let zz = ctx.mul(z, z);
        ctx.sub(zz, Complex::ONE)
    };
    let near_endpoint = ctx.abs(zz1) < 1e-12;
    let (mut p0, mut p1) = (one, zs);
    let (mut d0, mut d1) = (Scaled::ZERO, one);
    for m in 1..degree {
        let mf = m as f64;
        let a = ctx.real_mul(2.0 * mf + 1.0, 1.0 / (mf + 1.0));
        let b = ctx.real_mul(mf, 1.0 / (mf + 1.0));
        let u = ctx.xmul(zs, p1);
        let u = ctx.xscale(a, u);
        let v = ctx.xscale(b, p0);
        let p2 = ctx.xsub(u, v);
        if near_endpoint {
            let w = ctx.xscale(2.0 * mf + 1.0, p1);
            let d2 = ctx.xadd(d0, w);
            (d0, d1) = (d1, d2);
        }
        (p0, p1) = (p1, p2);
    }
    if near_endpoint || degree == 0 {
        return (p1, d1);
    }
    let u = ctx.xmul(zs, p1);
    let u = ctx.xsub(u, p0);
    let u = ctx.xscale(degree as f64, u);
    let deriv = ctx
        .xdiv(u, Scaled::from(zz1))
        .expect("z^2 - 1 is bounded away from zero here");
    (p1, deriv)
}

enum RootSum {
    /// `z` coincides with root `i`.
    Hit(usize),
    Sum(Complex),
}

fn reciprocal_sum(ctx: &mut OpCounter, roots: &[Complex], z: Complex) -> RootSum {
    let mut sum = Complex::ZERO;
    for (i, &xi) in roots.iter().enumerate() {
        let w = ctx.sub(z, xi);
        match ctx.recip(w) {
            Ok(r) => sum = ctx.add(sum, r),
            Err(_) => return RootSum::Hit(i),
        }
    }
    RootSum::Sum(sum)
}

fn root_product(ctx: &mut OpCounter, roots: &[Complex], z: Complex, skip: Option<usize>) -> Scaled {
    let mut prod = Scaled::from(Complex::ONE);
    for (i, &xi) in roots.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        let w = ctx.sub(z, xi);
        prod = ctx.xmul(prod, Scaled::from(w));
    }
    prod
}

fn check_input(z: Complex) -> Result<(), EvalError> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(EvalError::NonFiniteInput)
    }
}

/// `p(z)` and `p'(z)` in extended range.
pub fn evaluate_scaled(
    ctx: &mut OpCounter,
    poly: &PolyRepr,
    z: Complex,
) -> Result<(Scaled, Scaled), EvalError> {
    check_input(z)?;
    let out = match poly {
        PolyRepr::Roots(roots) => match reciprocal_sum(ctx, roots, z) {
            RootSum::Hit(i) => (Scaled::ZERO, root_product(ctx, roots, z, Some(i))),
            RootSum::Sum(s) => {
                let value = root_product(ctx, roots, z, None);
                let deriv = ctx.xmul(value, Scaled::from(s));
                (value, deriv)
            }
        },
        _ => eval_recursive(ctx, poly, z),
    };
    if out.0.is_finite() && out.1.is_finite() {
        Ok(out)
    } else {
        Err(EvalError::Overflow)
    }
}

/// `p(z)`, `p'(z)` and `p(z)/p'(z)` by the representation's native scheme.
pub fn evaluate(ctx: &mut OpCounter, poly: &PolyRepr, z: Complex) -> Result<EvalOut, EvalError> {
    let (value, deriv) = evaluate_scaled(ctx, poly, z)?;
    let newton_ratio = match poly {
        PolyRepr::Roots(roots) => match reciprocal_sum(ctx, roots, z) {
            RootSum::Hit(_) => Some(Complex::ZERO),
            RootSum::Sum(s) => ctx.recip(s).ok(),
        },
        _ if value.is_zero() => Some(Complex::ZERO),
        _ => ctx.xdiv(value, deriv).ok().map(Scaled::to_complex),
    };
    Ok(EvalOut {
        value: value.try_to_complex().ok_or(EvalError::Overflow)?,
        deriv: deriv.try_to_complex().ok_or(EvalError::Overflow)?,
        newton_ratio,
    })
}

/// `p(z)/p'(z)`; zero when `p(z) = 0`. Root lists use only the reciprocal
/// sum `(Σ 1/(z − ξ_i))^{-1}`.
pub fn newton_ratio(ctx: &mut OpCounter, poly: &PolyRepr, z: Complex) -> Result<Complex, EvalError> {
    check_input(z)?;
    let ratio = match poly {
        PolyRepr::Roots(roots) => match reciprocal_sum(ctx, roots, z) {
            RootSum::Hit(_) => return Ok(Complex::ZERO),
            RootSum::Sum(s) => ctx.recip(s).map_err(|_| EvalError::DerivativeZero)?,
        },
        _ => {
            let (value, deriv) = evaluate_scaled(ctx, poly, z)?;
            if value.is_zero() {
                return Ok(Complex::ZERO);
            }
            ctx.xdiv(value, deriv)
                .map_err(|_| EvalError::DerivativeZero)?
                .to_complex()
        }
    };
    if ratio.is_finite() {
        Ok(ratio)
    } else {
        Err(EvalError::Overflow)
    }
}

/// `p'(z)/p(z)`.
pub fn log_derivative(
    ctx: &mut OpCounter,
    poly: &PolyRepr,
    z: Complex,
) -> Result<LogDerivative, EvalError> {
    check_input(z)?;
    let ld = match poly {
        PolyRepr::Roots(roots) => match reciprocal_sum(ctx, roots, z) {
            RootSum::Hit(_) => return Ok(LogDerivative::AtRoot),
            RootSum::Sum(s) => s,
        },
        _ => {
            let (value, deriv) = evaluate_scaled(ctx, poly, z)?;
            match ctx.xdiv(deriv, value) {
                Ok(q) => q.to_complex(),
                Err(_) => return Ok(LogDerivative::AtRoot),
            }
        }
    };
    if ld.is_finite() {
        Ok(LogDerivative::Value(ld))
    } else {
        Err(EvalError::Overflow)
    }
}

/// `|p(z)|`; `+inf` when not representable.
pub fn residual(ctx: &mut OpCounter, poly: &PolyRepr, z: Complex) -> f64 {
    match evaluate_scaled(ctx, poly, z) {
        Ok((value, _)) => ctx.abs(value.to_complex()),
        Err(_) => f64::INFINITY,
    }
}

/// Materializes the coefficient form (lowest degree first). Uncounted setup
/// work: recursive forms are expanded by their defining recurrences.
pub fn expand_to_coefficients(poly: &PolyRepr) -> Result<PolyRepr, PolyError> {
    let degree = poly.degree();
    if degree > MAX_EXPAND_DEGREE {
        return Err(PolyError::DegreeTooLarge(degree));
    }
    let mut ctx = OpCounter::new();
    let coeffs = match poly {
        PolyRepr::Coefficients(c) => c.clone(),
        PolyRepr::Roots(roots) => {
            let mut c = vec![Complex::ONE];
            for &xi in roots {
                c = mul_linear(&mut ctx, &c, xi);
            }
            c
        }
        PolyRepr::IterQuad { c, n } => {
            let mut w = vec![Complex::ZERO, Complex::ONE];
            for _ in 0..*n {
                w = square(&mut ctx, &w);
                w[0] = ctx.add(w[0], *c);
            }
            w[1] = ctx.sub(w[1], Complex::ONE);
            w
        }
        PolyRepr::MandelCenter { n } => {
            let mut q = vec![Complex::ZERO, Complex::ONE];
            for _ in 1..*n {
                q = square(&mut ctx, &q);
                q[1] = ctx.add(q[1], Complex::ONE);
            }
            q
        }
        PolyRepr::ChebyshevFast { .. } | PolyRepr::ChebyshevRec { .. } => chebyshev_coeffs(degree)
            .into_iter()
            .map(Complex::real)
            .collect(),
        PolyRepr::LegendreRec { .. } => legendre_coeffs(degree)
            .into_iter()
            .map(Complex::real)
            .collect(),
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(PolyError::CoefficientOverflow);
    }
    PolyRepr::coefficients(coeffs)
}

fn mul_linear(ctx: &mut OpCounter, c: &[Complex], root: Complex) -> Vec<Complex> {
    // (z − root) · Σ c_k z^k
    let mut out = vec![Complex::ZERO; c.len() + 1];
    for (k, &ck) in c.iter().enumerate() {
        out[k + 1] = ctx.add(out[k + 1], ck);
        let t = ctx.mul(ck, root);
        out[k] = ctx.sub(out[k], t);
    }
    out
}

fn square(ctx: &mut OpCounter, c: &[Complex]) -> Vec<Complex> {
    let mut out = vec![Complex::ZERO; 2 * c.len() - 1];
    for (i, &a) in c.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, &b) in c.iter().enumerate() {
            let t = ctx.mul(a, b);
            out[i + j] = ctx.add(out[i + j], t);
        }
    }
    out
}

fn chebyshev_coeffs(d: usize) -> Vec<f64> {
    let mut t0 = vec![1.0];
    let mut t1 = vec![0.0, 1.0];
    if d == 0 {
        return t0;
    }
    for _ in 1..d {
        let mut t2 = vec![0.0; t1.len() + 1];
        for (k, &a) in t1.iter().enumerate() {
            t2[k + 1] += 2.0 * a;
        }
        for (k, &a) in t0.iter().enumerate() {
            t2[k] -= a;
        }
        t0 = std::mem::replace(&mut t1, t2);
    }
    t1
}

fn legendre_coeffs(d: usize) -> Vec<f64> {
    let mut p0 = vec![1.0];
    let mut p1 = vec![0.0, 1.0];
    if d == 0 {
        return p0;
    }
    for m in 1..d {
        let mf = m as f64;
        let mut p2 = vec![0.0; p1.len() + 1];
        for (k, &a) in p1.iter().enumerate() {
            p2[k + 1] += (2.0 * mf + 1.0) * a / (mf + 1.0);
        }
        for (k, &a) in p0.iter().enumerate() {
            p2[k] -= mf * a / (mf + 1.0);
        }
        p0 = std::mem::replace(&mut p1, p2);
    }
    p1
}
