//! Spectral Galerkin solvers on the unit ball `B^d`.
//!
//! Each harmonic degree `n` decouples into a radial generalized eigenproblem.
//! Methods I and II use Sobolev-orthogonal bases, so their stiffness is
//! diagonal and the mass is banded; both are assembled from closed forms.
//! The two baselines (classic Jacobi basis in `2r-1`, ball polynomials in
//! `2r²-1`) are assembled by Gauss quadrature in any working precision.

use crate::eiglin::{self, EigError, ModeTag, SymBandedMatrix, Spectrum};
use crate::orthopoly::{gauss_legendre, gauss_rule, jacobi_m1_deriv_table, jacobi_m1_table, OrthoError, QuadKind};
use crate::real::{Real, DD};
use crate::specfun::{bessel_zero, bessel_zero_refined, sphere_area, SpecfunError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Special(#[from] SpecfunError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    I,
    II,
    Classic,
    Poly,
}

impl Method {
    pub fn is_baseline(self) -> bool {
        matches!(self, Method::Classic | Method::Poly)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallProblem {
    pub d: usize,
    pub c: f64,
    pub k: usize,
    pub n_max: usize,
    pub method: Method,
}

/// One radial mode: `A x = λ B x` with `a` stiffness and `b` mass.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMode {
    pub n: usize,
    pub beta: f64,
    pub multiplicity: usize,
    pub a: SymBandedMatrix,
    pub b: SymBandedMatrix,
}

pub fn beta(n: usize, c: f64, d: usize) -> f64 {
    let s = n as f64 + d as f64 / 2.0 - 1.0;
    (c * c + s * s).sqrt()
}

fn binom(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Dimension of the degree-`n` spherical harmonics in `d` variables.
pub fn harmonic_dim(n: usize, d: usize) -> usize {
    let (n, d) = (n as i64, d as i64);
    (binom(n + d - 1, n) - binom(n + d - 3, n - 2)) as usize
}

fn check(d: usize, c: f64, k: usize) -> Result<(), SolverError> {
    if d < 2 {
        return Err(SolverError::InvalidArgument(format!("dimension {d} < 2")));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(SolverError::InvalidArgument(format!("potential strength {c}")));
    }
    if k < 1 {
        return Err(SolverError::InvalidArgument("K must be at least 1".into()));
    }
    Ok(())
}

/// Stiffness of the `k = 0` radial function `r^{β+1-d/2}`.
fn k0_stiffness(beta: f64, d: usize) -> f64 {
    beta - d as f64 / 2.0 + 1.0
}

/// Method I blocks for `k = kmin..=kmax` without the angular prefactor.
/// Returns the stiffness diagonal and the penta-diagonal mass.
pub fn method1_blocks(beta: f64, d: usize, kmin: usize, kmax: usize) -> (Vec<f64>, SymBandedMatrix) {
    let size = kmax + 1 - kmin;
    let b = beta;
    let stiff: Vec<f64> = (kmin..=kmax)
        .map(|k| if k == 0 { k0_stiffness(b, d) } else { 2.0 * k as f64 + 2.0 * b })
        .collect();
    let mut mass = SymBandedMatrix::zeros(size, 2);
    for k in kmin..=kmax {
        let i = k - kmin;
        let kb = k as f64 + b;
        let diag = if k == 0 {
            1.0 / (2.0 * (b + 1.0))
        } else {
            // (k+β)²-1+3β² split so that k=1, β→0 stays finite
            let corr = if k == 1 { 3.0 * b / (b + 2.0) } else { 3.0 * b * b / ((kb - 1.0) * (kb + 1.0)) };
            kb / ((2.0 * kb - 1.0) * (2.0 * kb + 1.0)) * (1.0 + corr)
        };
        mass.set(i, i, diag);
        if k + 1 <= kmax {
            let v = if k == 0 {
                -1.0 / (2.0 * b + 3.0)
            } else {
                -(2.0 * b - 1.0) * (2.0 * b + 1.0) / ((2.0 * kb - 1.0) * (2.0 * kb + 1.0) * (2.0 * kb + 3.0))
            };
            mass.set(i, i + 1, v);
        }
        if k + 2 <= kmax {
            let kf = k as f64;
            let v = -(kf + 1.0) * (kf + 2.0 * b + 1.0) / (2.0 * (kb + 1.0) * (2.0 * kb + 1.0) * (2.0 * kb + 3.0));
            mass.set(i, i + 2, v);
        }
    }
    (stiff, mass)
}

/// Method II blocks for `k = kmin..=kmax` without the angular prefactor.
/// Returns the stiffness diagonal and the tridiagonal mass.
pub fn method2_blocks(beta: f64, d: usize, kmin: usize, kmax: usize) -> (Vec<f64>, SymBandedMatrix) {
    let size = kmax + 1 - kmin;
    let b = beta;
    let stiff: Vec<f64> = (kmin..=kmax)
        .map(|k| if k == 0 { k0_stiffness(b, d) } else { 2.0 * (2.0 * k as f64 + b) })
        .collect();
    let mut mass = SymBandedMatrix::zeros(size, 1);
    for k in kmin..=kmax {
        let i = k - kmin;
        let s = 2.0 * k as f64 + b;
        let mut diag = 1.0 / (s + 1.0);
        if k > 0 {
            diag += 1.0 / (s - 1.0);
        }
        mass.set(i, i, 0.5 * diag);
        if k + 1 <= kmax {
            mass.set(i, i + 1, -0.5 / (s + 1.0));
        }
    }
    (stiff, mass)
}

fn scaled_mode(n: usize, beta: f64, multiplicity: usize, stiff: Vec<f64>, mut mass: SymBandedMatrix, s: f64) -> RadialMode {
    let mut a = SymBandedMatrix::diagonal(stiff);
    a.scale(s);
    mass.scale(s);
    RadialMode { n, beta, multiplicity, a, b: mass }
}

pub fn assemble_method1(n: usize, c: f64, d: usize, k: usize) -> Result<RadialMode, SolverError> {
    check(d, c, k)?;
    let b = beta(n, c, d);
    let (s, m) = method1_blocks(b, d, 1, k);
    Ok(scaled_mode(n, b, harmonic_dim(n, d), s, m, sphere_area(d)))
}

pub fn assemble_method2(n: usize, c: f64, d: usize, k: usize) -> Result<RadialMode, SolverError> {
    check(d, c, k)?;
    let b = beta(n, c, d);
    let (s, m) = method2_blocks(b, d, 1, k);
    Ok(scaled_mode(n, b, harmonic_dim(n, d), s, m, sphere_area(d)))
}

/// Normalization of the Method I radial function of index `k`.
pub fn method1_norm(k: usize, beta: f64) -> f64 {
    if k == 0 {
        1.0
    } else {
        (2.0 * k as f64 + 2.0 * beta) / (k as f64 + 2.0 * beta)
    }
}

/// Normalization of the Method II radial function of index `k`.
pub fn method2_norm(k: usize, beta: f64) -> f64 {
    if k == 0 {
        1.0
    } else {
        (2.0 * k as f64 + beta) / (k as f64 + beta)
    }
}

/// Methods I/II radial matrices for `k = kmin..=kmax` computed by Gauss–Jacobi
/// quadrature in the polynomial variable, with the `(1+ζ)` power of the
/// radial weight absorbed into the rule (exact up to roundoff). No angular
/// prefactor. Requires `beta > 0`.
pub fn radial_by_quadrature(
    method: Method,
    beta: f64,
    d: usize,
    kmin: usize,
    kmax: usize,
) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    if !(beta > 0.0) {
        return Err(SolverError::InvalidArgument(format!("quadrature needs beta > 0, got {beta}")));
    }
    let size = kmax + 1 - kmin;
    let bp = beta + 1.0 - d as f64 / 2.0;
    let half = d as f64 / 2.0 - 1.0;
    let q = beta * beta - half * half;
    let (jb, wexp, norm): (f64, f64, fn(usize, f64) -> f64) = match method {
        Method::I => (2.0 * beta, 2.0 * beta - 1.0, method1_norm),
        Method::II => (beta, beta - 1.0, method2_norm),
        _ => return Err(SolverError::InvalidArgument("closed forms exist for Methods I and II only".into())),
    };
    let rule = gauss_rule(QuadKind::Jacobi { alpha: 0.0, beta: wexp }, kmax + 12)?;
    let mut a = vec![0.0; size * size];
    let mut b = vec![0.0; size * size];
    for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
        let p = jacobi_m1_table(jb, kmax, z);
        let dp = jacobi_m1_deriv_table(jb, kmax, z);
        let idx = kmin..=kmax;
        let f: Vec<f64> = idx.clone().map(|k| norm(k, beta) * p[k]).collect();
        let g: Vec<f64> = idx.map(|k| norm(k, beta) * dp[k]).collect();
        // r d/dr acting on the polynomial factor, and the two measures
        let (rd, wa, wb) = match method {
            Method::I => (1.0 + z, 2f64.powf(-2.0 * beta), 2f64.powf(-2.0 * beta - 2.0) * (1.0 + z) * (1.0 + z)),
            _ => (2.0 * (1.0 + z), 2f64.powf(1.0 - beta) / 4.0, 2f64.powf(-beta) / 4.0 * (1.0 + z)),
        };
        for i in 0..size {
            let di = rd * g[i] + bp * f[i];
            for j in 0..size {
                let dj = rd * g[j] + bp * f[j];
                a[i * size + j] += w * wa * (di * dj + q * f[i] * f[j]);
                b[i * size + j] += w * wb * f[i] * f[j];
            }
        }
    }
    Ok((a, b))
}

/// Radial basis used by a baseline method for mode `n`.
#[derive(Debug, Clone, Copy)]
struct BaselineBasis {
    method: Method,
    n: usize,
    d: usize,
    kmax: usize,
    /// First Jacobi index; index 1 may be the hat `(1-ζ)/2` instead.
    first: usize,
    hat: bool,
}

impl BaselineBasis {
    fn new(method: Method, n: usize, c: f64, d: usize, kmax: usize) -> Result<Self, SolverError> {
        check(d, c, kmax)?;
        let q_zero = c == 0.0 && n == 0;
        // Only d = 2 with the b = -1 family needs special treatment at r = 0.
        let minus_one = match method {
            Method::Classic => d == 2,
            Method::Poly => d == 2 && n == 0,
            _ => return Err(SolverError::InvalidArgument("not a baseline method".into())),
        };
        let (first, hat) = match (minus_one, q_zero) {
            (true, true) => (1, true),
            (true, false) => (2, false),
            (false, _) => (1, false),
        };
        if first > kmax {
            return Err(SolverError::InvalidArgument(format!("K must be at least {first} here")));
        }
        Ok(Self { method, n, d, kmax, first, hat })
    }

    fn size(&self) -> usize {
        self.kmax + 1 - self.first
    }

    fn jacobi_b<T: Real>(&self) -> T {
        match self.method {
            Method::Classic => T::c(self.d as f64 - 3.0),
            _ => T::c(self.n as f64 + self.d as f64 / 2.0 - 2.0),
        }
    }

    /// Degree in `r` of the integrands.
    fn degree(&self) -> usize {
        match self.method {
            Method::Classic => 2 * self.kmax + self.d,
            _ => 2 * self.n + 4 * self.kmax + self.d,
        }
    }

    /// Values and `r`-derivatives of every basis function at `r`.
    fn eval<T: Real>(&self, r: T, f: &mut Vec<T>, g: &mut Vec<T>) {
        f.clear();
        g.clear();
        let one = T::one();
        let two = T::ci(2);
        let jb = self.jacobi_b::<T>();
        match self.method {
            Method::Classic => {
                let z = two * r - one;
                let p = jacobi_m1_table(jb, self.kmax, z);
                let dp = jacobi_m1_deriv_table(jb, self.kmax, z);
                for k in self.first..=self.kmax {
                    if self.hat && k == 1 {
                        f.push((one - z) / two);
                        g.push(-one);
                    } else {
                        f.push(p[k]);
                        g.push(two * dp[k]);
                    }
                }
            }
            _ => {
                let z = two * r * r - one;
                let p = jacobi_m1_table(jb, self.kmax, z);
                let dp = jacobi_m1_deriv_table(jb, self.kmax, z);
                let n = self.n as i32;
                let rn = r.powi(n);
                let rn1 = if n == 0 { T::zero() } else { T::ci(self.n) * r.powi(n - 1) };
                let four_r = T::ci(4) * r;
                for k in self.first..=self.kmax {
                    if self.hat && k == 1 {
                        f.push(one - r * r);
                        g.push(-two * r);
                    } else {
                        f.push(rn * p[k]);
                        g.push(rn1 * p[k] + rn * four_r * dp[k]);
                    }
                }
            }
        }
    }
}

/// Order of the radial system of mode `n` without assembling it.
pub fn mode_size(method: Method, n: usize, c: f64, d: usize, k: usize) -> Result<usize, SolverError> {
    match method {
        Method::I | Method::II => {
            check(d, c, k)?;
            Ok(k)
        }
        _ => Ok(BaselineBasis::new(method, n, c, d, k)?.size()),
    }
}

/// Band of the baseline matrices (stiffness and mass together).
pub fn baseline_bandwidth(method: Method) -> usize {
    match method {
        Method::Classic => 3,
        _ => 2,
    }
}

/// Baseline stiffness and mass for mode `n`, as full row-major arrays of
/// order `size`, in the working precision `T`. With `band = Some(b)` only
/// entries with `|i-j| ≤ b` are integrated.
pub fn baseline_matrices<T: Real>(
    method: Method,
    n: usize,
    c: f64,
    d: usize,
    kmax: usize,
    band: Option<usize>,
) -> Result<(usize, Vec<T>, Vec<T>), SolverError> {
    let basis = BaselineBasis::new(method, n, c, d, kmax)?;
    let size = basis.size();
    let bw = band.unwrap_or(size).min(size.saturating_sub(1));
    let ct = T::c(c);
    let q = ct * ct + T::ci(n * (n + d - 2));
    let m = basis.degree() / 2 + 4;
    let (xs, ws) = gauss_legendre::<T>(m);
    let half = T::c(0.5);
    let mut a = vec![T::zero(); size * size];
    let mut b = vec![T::zero(); size * size];
    let (mut f, mut g) = (Vec::new(), Vec::new());
    for (&x, &w) in xs.iter().zip(&ws) {
        let r = half * (x + T::one());
        let w = half * w;
        basis.eval(r, &mut f, &mut g);
        let rd1 = w * r.powi(d as i32 - 1);
        let rd3 = w * q * r.powi(d as i32 - 3);
        for i in 0..size {
            let hi = (i + bw + 1).min(size);
            for j in i..hi {
                a[i * size + j] = a[i * size + j] + g[i] * g[j] * rd1 + f[i] * f[j] * rd3;
                b[i * size + j] = b[i * size + j] + f[i] * f[j] * rd1;
            }
        }
    }
    for i in 0..size {
        for j in i + 1..size {
            a[j * size + i] = a[i * size + j];
            b[j * size + i] = b[i * size + j];
        }
    }
    Ok((size, a, b))
}

fn dense_to_band(size: usize, m: &[f64]) -> SymBandedMatrix {
    let dense = eiglin::DenseSymMatrix::from_row_major(size, m.to_vec());
    SymBandedMatrix::from_dense(&dense, size.saturating_sub(1))
}

/// Classic baseline: basis `J_k^{-1,d-3}(2r-1)`, full quadrature assembly.
pub fn assemble_classic(n: usize, c: f64, d: usize, k: usize) -> Result<RadialMode, SolverError> {
    assemble_baseline(Method::Classic, n, c, d, k)
}

/// Ball-polynomial baseline: basis `r^n J_k^{-1,n+d/2-2}(2r²-1)`.
pub fn assemble_poly(n: usize, c: f64, d: usize, k: usize) -> Result<RadialMode, SolverError> {
    assemble_baseline(Method::Poly, n, c, d, k)
}

fn assemble_baseline(method: Method, n: usize, c: f64, d: usize, k: usize) -> Result<RadialMode, SolverError> {
    let (size, a, b) = baseline_matrices::<f64>(method, n, c, d, k, None)?;
    Ok(RadialMode {
        n,
        beta: beta(n, c, d),
        multiplicity: harmonic_dim(n, d),
        a: dense_to_band(size, &a),
        b: dense_to_band(size, &b),
    })
}

pub fn assemble_mode(method: Method, n: usize, c: f64, d: usize, k: usize) -> Result<RadialMode, SolverError> {
    match method {
        Method::I => assemble_method1(n, c, d, k),
        Method::II => assemble_method2(n, c, d, k),
        Method::Classic => assemble_classic(n, c, d, k),
        Method::Poly => assemble_poly(n, c, d, k),
    }
}

/// Merges per-mode eigenvalues, repeating each `multiplicity` times.
pub(crate) fn merge_modes(per_mode: Vec<(usize, usize, Vec<f64>)>, want: usize) -> Spectrum {
    let mut values = Vec::new();
    let mut tags = Vec::new();
    for (n, mult, vals) in per_mode {
        for (k, v) in vals.into_iter().enumerate() {
            for _ in 0..mult {
                values.push(v);
                tags.push(Some(ModeTag { n, k: k + 1 }));
            }
        }
    }
    let mut s = Spectrum::with_tags(values, tags);
    s.truncate(want);
    s
}

pub fn solve_ball(p: &BallProblem, want: usize) -> Result<Spectrum, SolverError> {
    check(p.d, p.c, p.k)?;
    if want == 0 {
        return Err(SolverError::InvalidArgument("count must be at least 1".into()));
    }
    let modes: Vec<RadialMode> = (0..=p.n_max)
        .map(|n| assemble_mode(p.method, n, p.c, p.d, p.k))
        .collect::<Result<_, _>>()?;
    let total: usize = modes.iter().map(|m| m.a.order() * m.multiplicity).sum();
    if want > total {
        return Err(SolverError::InvalidArgument(format!("{want} eigenvalues requested, only {total} available")));
    }
    let mut per_mode = Vec::with_capacity(modes.len());
    for m in &modes {
        let order = m.a.order();
        let k = want.min(order);
        let s = eiglin::solve_gevp(&m.a, &m.b, k)?;
        per_mode.push((m.n, m.multiplicity, s.values));
    }
    Ok(merge_modes(per_mode, want))
}

/// Smallest baseline eigenvalue of mode `n` and its exact counterpart
/// `j²_{β_n,1}`, both in double-double arithmetic.
pub fn baseline_lowest_dd(method: Method, n: usize, c: f64, d: usize, k: usize) -> Result<(DD, DD), SolverError> {
    let bw = baseline_bandwidth(method);
    let (size, a, b) = baseline_matrices::<DD>(method, n, c, d, k, Some(bw))?;
    let af: Vec<f64> = a.iter().map(|v| v.f64()).collect();
    let bf: Vec<f64> = b.iter().map(|v| v.f64()).collect();
    let est = eiglin::solve_gevp(
        &eiglin::DenseSymMatrix::from_row_major(size, af),
        &eiglin::DenseSymMatrix::from_row_major(size, bf),
        1,
    )?
    .values[0];
    let lam = eiglin::refine_lowest(&a, &b, size, bw, est)?;
    let ct = DD::c(c);
    let s = DD::c(n as f64 + d as f64 / 2.0 - 1.0);
    let nu = (ct * ct + s * s).sqrt();
    let j = bessel_zero_refined(nu, bessel_zero(nu.f64(), 1)?);
    Ok((lam, j * j))
}

/// `|λ_K - λ|` for the lowest eigenvalue of mode `n` of a baseline method,
/// computed in double-double so that algebraic rates stay visible.
pub fn baseline_lowest_error(method: Method, n: usize, c: f64, d: usize, k: usize) -> Result<f64, SolverError> {
    let (lam, exact) = baseline_lowest_dd(method, n, c, d, k)?;
    Ok((lam - exact).abs().f64())
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn beta_values() {
        assert_eq!(beta(0, 0.5, 2), 0.5);
        assert_eq!(beta(1, 0.0, 3), 1.5);
        assert!((beta(2, 2.0 / 3.0, 2) - 40f64.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn harmonic_dimensions() {
        assert_eq!(harmonic_dim(0, 2), 1);
        assert_eq!(harmonic_dim(0, 5), 1);
        assert_eq!(harmonic_dim(3, 2), 2);
        assert_eq!(harmonic_dim(2, 3), 5);
        assert_eq!(harmonic_dim(1, 4), 4);
    }

    #[test]
    fn stiffness_entries() {
        let m = assemble_method1(0, 0.5, 2, 1).unwrap();
        assert!((m.a.get(0, 0) - 6.0 * PI).abs() < 1e-13);
        let m = assemble_method2(0, 0.5, 2, 1).unwrap();
        assert!((m.a.get(0, 0) - 10.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn method2_mass_entry_is_half_the_printed_sum() {
        let m = assemble_method2(1, 0.0, 3, 1).unwrap();
        let printed = 4.0 * PI * (1.0 / 4.5 + 1.0 / 2.5);
        assert!((m.b.get(0, 0) - 0.5 * printed).abs() < 1e-13);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for &method in &[Method::I, Method::II] {
            for &(bt, d) in &[(0.5, 2), (1.3, 3), (2.7, 2), (0.45, 3)] {
                let (s, m) = match method {
                    Method::I => method1_blocks(bt, d, 0, 12),
                    _ => method2_blocks(bt, d, 0, 12),
                };
                let (a, b) = radial_by_quadrature(method, bt, d, 0, 12).unwrap();
                for i in 0..13 {
                    for j in 0..13 {
                        let ea = if i == j { s[i] } else { 0.0 };
                        assert!((a[i * 13 + j] - ea).abs() < 1e-12 * s[12], "{method:?} A {i} {j}");
                        assert!((b[i * 13 + j] - m.get(i, j)).abs() < 1e-13, "{method:?} B {i} {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn baseline_sparsity() {
        for &(method, n, c, d) in &[
            (Method::Classic, 0, 0.5, 2),
            (Method::Classic, 2, 0.5, 3),
            (Method::Poly, 0, 0.5, 2),
            (Method::Poly, 1, 2.0 / 3.0, 3),
            (Method::Poly, 2, 0.5, 2),
        ] {
            let (size, a, b) = baseline_matrices::<f64>(method, n, c, d, 14, None).unwrap();
            let na = a.iter().fold(0f64, |m, v| m.max(v.abs()));
            let nb = b.iter().fold(0f64, |m, v| m.max(v.abs()));
            let bw = baseline_bandwidth(method);
            for i in 0..size {
                for j in 0..size {
                    let off = i.abs_diff(j);
                    if off > 1 {
                        assert!(a[i * size + j].abs() <= 1e-12 * na, "{method:?} A {i} {j}");
                    }
                    if off > bw {
                        assert!(b[i * size + j].abs() <= 1e-12 * nb, "{method:?} B {i} {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn solve_disk_method2() {
        let p = BallProblem { d: 2, c: 0.5, k: 16, n_max: 3, method: Method::II };
        let s = solve_ball(&p, 3).unwrap();
        assert!((s.values[0] - PI * PI).abs() < 1e-12 * PI * PI);
        assert_eq!(s.values[1], s.values[2]);
        assert_eq!(s.tags[1].unwrap().n, 1);
    }

    #[test]
    fn too_many_requested() {
        let p = BallProblem { d: 2, c: 0.5, k: 2, n_max: 0, method: Method::II };
        assert!(solve_ball(&p, 3).is_err());
    }
}
