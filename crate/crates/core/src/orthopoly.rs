//! Generalized Jacobi polynomials `J_n^{α₁,α₂}` with `α ∈ {-1} ∪ (-1, ∞)`,
//! their norms and derivatives, and Gauss quadrature rules.
//!
//! Classic parameters are evaluated with the three-term recurrence. An
//! index equal to `-1` is always routed through the product forms
//!
//! ```text
//! J_n^{-1,b}(ζ)  = (n+b)/n · (ζ-1)/2 · J_{n-1}^{1,b}(ζ)          n ≥ 1
//! J_n^{-1,-1}(ζ) = (ζ-1)/2 · (ζ+1)/2 · J_{n-2}^{1,1}(ζ)          n ≥ 2
//! ```
//!
//! with `J_1^{-1,-1}(ζ) = ζ`, and `J_n^{a,-1}(ζ) = (-1)^n J_n^{-1,a}(-ζ)`.

use crate::eiglin::tridiagonal_eigen;
use crate::real::Real;
use crate::specfun::ln_gamma;
use thiserror::Error;

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrthoError {
    #[error("Jacobi parameter {0} outside {{-1}} ∪ (-1, ∞)")]
    InvalidParameter(f64),
    #[error("degree {n} exceeds the supported maximum {max}")]
    DegreeTooLarge { n: usize, max: usize },
    #[error("degree {n} below the admissible minimum {min} for these parameters")]
    BelowAdmissible { n: usize, min: usize },
    #[error("derivative rule excluded for degree {n} with parameters ({alpha1}, {alpha2})")]
    ExcludedDerivative { n: usize, alpha1: f64, alpha2: f64 },
    #[error("quadrature needs at least one point")]
    NoPoints,
    #[error("quadrature weight parameters ({0}, {1}) must exceed -1")]
    InvalidWeight(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParam {
    alpha1: f64,
    alpha2: f64,
}

impl JacobiParam {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self, OrthoError> {
        for a in [alpha1, alpha2] {
            if !(a >= -1.0) || !a.is_finite() {
                return Err(OrthoError::InvalidParameter(a));
            }
        }
        Ok(Self { alpha1, alpha2 })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// Lowest degree for which the weighted norm is finite.
    pub fn min_degree(&self) -> usize {
        (self.alpha1 == -1.0) as usize + (self.alpha2 == -1.0) as usize
    }
}

fn check_degree(n: usize) -> Result<(), OrthoError> {
    if n > MAX_DEGREE {
        Err(OrthoError::DegreeTooLarge { n, max: MAX_DEGREE })
    } else {
        Ok(())
    }
}

/// Values of the classic Jacobi polynomials `P_0..=P_nmax` at `z`, `a, b > -1`.
pub fn jacobi_table<T: Real>(a: T, b: T, nmax: usize, z: T) -> Vec<T> {
    let one = T::one();
    let two = T::ci(2);
    let mut p = Vec::with_capacity(nmax + 1);
    p.push(one);
    if nmax == 0 {
        return p;
    }
    p.push((a + one) + (a + b + two) * (z - one) / two);
    for n in 2..=nmax {
        let nn = T::ci(n);
        let s = two * nn + a + b;
        let c1 = two * nn * (nn + a + b) * (s - two);
        let c2 = (s - one) * (s * (s - two) * z + a * a - b * b);
        let c3 = two * (nn + a - one) * (nn + b - one) * s;
        let v = (c2 * p[n - 1] - c3 * p[n - 2]) / c1;
        p.push(v);
    }
    p
}

/// `J_k^{-1,b}(z)` for `k = 0..=nmax`, with `b = -1` allowed.
pub fn jacobi_m1_table<T: Real>(b: T, nmax: usize, z: T) -> Vec<T> {
    let one = T::one();
    let two = T::ci(2);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(one);
    if nmax == 0 {
        return out;
    }
    if b == -one {
        out.push(z);
        if nmax >= 2 {
            let q = jacobi_table(one, one, nmax - 2, z);
            let f = (z - one) / two * (z + one) / two;
            out.extend(q.into_iter().map(|v| f * v));
        }
    } else {
        let q = jacobi_table(one, b, nmax - 1, z);
        let h = (z - one) / two;
        for (k, v) in q.into_iter().enumerate() {
            let n = T::ci(k + 1);
            out.push((n + b) / n * h * v);
        }
    }
    out
}

/// Derivatives `∂_z J_k^{-1,b}(z)` for `k = 0..=nmax`, with `b = -1` allowed.
pub fn jacobi_m1_deriv_table<T: Real>(b: T, nmax: usize, z: T) -> Vec<T> {
    let one = T::one();
    let two = T::ci(2);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(T::zero());
    if nmax == 0 {
        return out;
    }
    if b == -one {
        out.push(one);
        if nmax >= 2 {
            let q = jacobi_table(T::zero(), T::zero(), nmax - 1, z);
            for n in 2..=nmax {
                out.push((T::ci(n) - one) / two * q[n - 1]);
            }
        }
    } else {
        let q = jacobi_table(T::zero(), b + one, nmax - 1, z);
        for n in 1..=nmax {
            out.push((T::ci(n) + b) / two * q[n - 1]);
        }
    }
    out
}

/// Unchecked evaluation of `J_n^{a,b}(z)` in any working precision.
pub fn jacobi_value<T: Real>(a: T, b: T, n: usize, z: T) -> T {
    let m1 = -T::one();
    if a == m1 {
        jacobi_m1_table(b, n, z)[n]
    } else if b == m1 {
        let v = jacobi_m1_table(a, n, -z)[n];
        if n % 2 == 1 {
            -v
        } else {
            v
        }
    } else {
        jacobi_table(a, b, n, z)[n]
    }
}

pub fn jacobi_eval(p: JacobiParam, n: usize, zeta: f64) -> Result<f64, OrthoError> {
    check_degree(n)?;
    Ok(jacobi_value(p.alpha1, p.alpha2, n, zeta))
}

/// `γ_n^{a,b} = ∫ (J_n^{a,b})² (1-ζ)^a (1+ζ)^b dζ`.
pub fn jacobi_norm(p: JacobiParam, n: usize) -> Result<f64, OrthoError> {
    check_degree(n)?;
    let min = p.min_degree();
    if n < min {
        return Err(OrthoError::BelowAdmissible { n, min });
    }
    let (a, b) = (p.alpha1, p.alpha2);
    let nf = n as f64;
    let s = a + b + 1.0;
    if n == 0 {
        return Ok((s * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(s + 1.0))
        .exp());
    }
    let l = s * std::f64::consts::LN_2 - (2.0 * nf + s).ln() + ln_gamma(nf + a + 1.0)
        + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + 1.0)
        - ln_gamma(nf + s);
    Ok(l.exp())
}

/// `∂_ζ J_n^{a,b} = (n+a+b+1)/2 · J_{n-1}^{a+1,b+1}`.
pub fn jacobi_derivative(p: JacobiParam, n: usize, zeta: f64) -> Result<f64, OrthoError> {
    check_degree(n)?;
    let (a, b) = (p.alpha1, p.alpha2);
    let m = -(n as f64) - a - b;
    if m >= 1.0 && m <= n as f64 && m.fract() == 0.0 {
        return Err(OrthoError::ExcludedDerivative { n, alpha1: a, alpha2: b });
    }
    if n == 0 {
        return Ok(0.0);
    }
    Ok((n as f64 + a + b + 1.0) / 2.0 * jacobi_value(a + 1.0, b + 1.0, n - 1, zeta))
}

/// Coefficients `(c0, c1, c2)` of
/// `(2n+β)/(n+β) J_n^{-1,β} = c0 J_n^{0,β+1} + c1 J_{n-1}^{0,β+1} + c2 J_{n-2}^{0,β+1}`.
pub fn connection_split(p: JacobiParam, n: usize) -> Result<[f64; 3], OrthoError> {
    check_degree(n)?;
    if p.alpha1 != -1.0 || p.alpha2 <= -1.0 {
        return Err(OrthoError::InvalidParameter(p.alpha1));
    }
    let b = p.alpha2;
    let nf = n as f64;
    let c0 = (nf + b + 1.0) / (2.0 * nf + b + 1.0);
    if n == 0 {
        return Ok([c0, 0.0, 0.0]);
    }
    let c1 = -(1.0 + b) * (2.0 * nf + b) / ((2.0 * nf + b - 1.0) * (2.0 * nf + b + 1.0));
    let c2 = if n >= 2 { -(nf - 1.0) / (2.0 * nf + b - 1.0) } else { 0.0 };
    Ok([c0, c1, c2])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadKind {
    Legendre,
    /// Weight `(1-ζ)^alpha (1+ζ)^beta`.
    Jacobi { alpha: f64, beta: f64 },
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Nodes and weights transplanted to `[lo, hi]` (Legendre kind only makes sense here).
    pub fn mapped(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let h = 0.5 * (hi - lo);
        let x = self.nodes.iter().map(|t| lo + h * (t + 1.0)).collect();
        let w = self.weights.iter().map(|w| h * w).collect();
        (x, w)
    }
}

/// Gauss rule of `m` points via the eigen-decomposition of the Jacobi matrix,
/// followed by Newton polishing of the nodes.
pub fn gauss_rule(kind: QuadKind, m: usize) -> Result<QuadratureRule, OrthoError> {
    if m == 0 {
        return Err(OrthoError::NoPoints);
    }
    let (a, b) = match kind {
        QuadKind::Legendre => (0.0, 0.0),
        QuadKind::Jacobi { alpha, beta } => {
            if !(alpha > -1.0 && beta > -1.0) {
                return Err(OrthoError::InvalidWeight(alpha, beta));
            }
            (alpha, beta)
        }
    };
    check_degree(m)?;
    let mut diag = Vec::with_capacity(m);
    let mut off = Vec::with_capacity(m.saturating_sub(1));
    for n in 0..m {
        let s = 2.0 * n as f64 + a + b;
        diag.push(if n == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        });
        if n >= 1 {
            let nf = n as f64;
            let v = if n == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                4.0 * nf * (nf + a) * (nf + b) * (nf + a + b) / (s * s * (s + 1.0) * (s - 1.0))
            };
            off.push(v.sqrt());
        }
    }
    let (mut nodes, _) = tridiagonal_eigen(&diag, &off, false);
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Newton polish and closed-form weights.
    let mf = m as f64;
    let lc = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(mf + a + 1.0) + ln_gamma(mf + b + 1.0)
        - ln_gamma(mf + a + b + 1.0)
        - ln_gamma(mf + 1.0);
    let cst = lc.exp();
    let mut weights = Vec::with_capacity(m);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let p = jacobi_table(a, b, m, *x)[m];
            let dp = (mf + a + b + 1.0) / 2.0 * jacobi_table(a + 1.0, b + 1.0, m - 1, *x)[m - 1];
            let dx = p / dp;
            if dx.is_finite() {
                *x -= dx;
            }
        }
        let dp = (mf + a + b + 1.0) / 2.0 * jacobi_table(a + 1.0, b + 1.0, m - 1, *x)[m - 1];
        weights.push(cst / ((1.0 - *x * *x) * dp * dp));
    }
    Ok(QuadratureRule { nodes, weights, kind })
}

/// Gauss–Legendre rule on `[-1, 1]` computed in the working precision `T`.
/// Nodes start from the Tricomi approximation and are polished by Newton's
/// method on the Legendre recurrence, so any `m ≥ 1` is accepted.
pub fn gauss_legendre<T: Real>(m: usize) -> (Vec<T>, Vec<T>) {
    let one = T::one();
    let two = T::ci(2);
    let mf = m as f64;
    // P_m and P_m' at x
    let eval = |x: T| {
        let (mut p0, mut p1) = (one, x);
        if m == 0 {
            return (one, T::zero());
        }
        for k in 2..=m {
            let kt = T::ci(k);
            let p2 = ((two * kt - one) * x * p1 - (kt - one) * p0) / kt;
            p0 = p1;
            p1 = p2;
        }
        let dp = T::ci(m) * (x * p1 - p0) / (x * x - one);
        (p1, dp)
    };
    let mut xs = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    for i in (1..=m).rev() {
        let th = std::f64::consts::PI * (i as f64 - 0.25) / (mf + 0.5);
        let x0 = (1.0 - (mf - 1.0) / (8.0 * mf * mf * mf)) * th.cos();
        let mut x = T::c(x0);
        for _ in 0..100 {
            let (p, dp) = eval(x);
            let dx = p / dp;
            x = x - dx;
            if dx.f64().abs() < 1e-13 {
                break;
            }
        }
        // two more steps carry the extended precision
        for _ in 0..2 {
            let (p, dp) = eval(x);
            x = x - p / dp;
        }
        let (_, dp) = eval(x);
        xs.push(x);
        ws.push(two / ((one - x * x) * dp * dp));
    }
    (xs, ws)
}
