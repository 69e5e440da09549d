//! Symmetric matrix containers and dense generalized eigensolvers.
//!
//! `A x = λ B x` is reduced to a standard symmetric problem by a Cholesky
//! congruence, tridiagonalized with Householder reflections and finished
//! with implicit QL. When the stiffness `A` is safely positive definite the
//! congruence uses `A` and the reciprocal problem `B x = μ A x` is solved;
//! the smallest `λ = 1/μ` then carry errors relative to `λ` itself rather
//! than to the largest discrete eigenvalue.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigError {
    #[error("matrix not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("requested {want} eigenvalues from a problem of order {order}")]
    TooMany { want: usize, order: usize },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("QL iteration did not converge")]
    NoConvergence,
}

/// Symmetric matrix stored by its upper bands: `bands[j][i] = M[i][i+j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBandedMatrix {
    order: usize,
    bands: Vec<Vec<f64>>,
}

impl SymBandedMatrix {
    pub fn zeros(order: usize, half_bandwidth: usize) -> Self {
        let b = half_bandwidth.min(order.saturating_sub(1));
        let bands = (0..=b).map(|j| vec![0.0; order - j]).collect();
        Self { order, bands }
    }

    pub fn diagonal(d: Vec<f64>) -> Self {
        Self { order: d.len(), bands: vec![d] }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn half_bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.bands.get(j - i).map_or(0.0, |b| b[i])
    }

    /// Sets `M[i][j] = M[j][i] = v`; panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.bands[j - i][i] = v;
    }

    pub fn band(&self, j: usize) -> &[f64] {
        &self.bands[j]
    }

    pub fn scale(&mut self, s: f64) {
        for b in &mut self.bands {
            for v in b.iter_mut() {
                *v *= s;
            }
        }
    }

    pub fn to_dense(&self) -> DenseSymMatrix {
        let n = self.order;
        let mut m = DenseSymMatrix::zeros(n);
        for (j, b) in self.bands.iter().enumerate() {
            for (i, &v) in b.iter().enumerate() {
                m.set(i, i + j, v);
            }
        }
        m
    }

    /// Band-limited copy of a dense symmetric matrix (entries outside dropped).
    pub fn from_dense(m: &DenseSymMatrix, half_bandwidth: usize) -> Self {
        let mut s = Self::zeros(m.order(), half_bandwidth);
        for j in 0..=s.half_bandwidth() {
            for i in 0..m.order() - j {
                s.bands[j][i] = m.get(i, i + j);
            }
        }
        s
    }
}

/// Dense symmetric matrix in full row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    order: usize,
    data: Vec<f64>,
}

impl DenseSymMatrix {
    pub fn zeros(order: usize) -> Self {
        Self { order, data: vec![0.0; order * order] }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.data[i * order + i] = 1.0;
        }
        m
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Takes a full row-major array and symmetrizes it as `(M + Mᵀ)/2`.
    pub fn from_row_major(order: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), order * order);
        let mut m = Self { order, data };
        m.symmetrize();
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.order + j] = v;
        self.data[j * self.order + i] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.order + j] += v;
        if i != j {
            self.data[j * self.order + i] += v;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.order;
        (0..n).all(|i| (0..n).all(|j| i == j || self.data[i * n + j] == 0.0))
    }

    fn symmetrize(&mut self) {
        let n = self.order;
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                self.data[i * n + j] = v;
                self.data[j * n + i] = v;
            }
        }
    }

    /// `SᵀMS` for diagonal `S = diag(s)`.
    pub fn scaled(&self, s: &[f64]) -> Self {
        let n = self.order;
        let mut m = self.clone();
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] *= s[i] * s[j];
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.order).map(|i| dot(self.row(i), x)).collect()
    }
}

/// Anything that can be viewed as a dense symmetric matrix.
pub trait SymOperator {
    fn order(&self) -> usize;
    fn dense(&self) -> DenseSymMatrix;
}

impl SymOperator for DenseSymMatrix {
    fn order(&self) -> usize {
        self.order
    }
    fn dense(&self) -> DenseSymMatrix {
        self.clone()
    }
}

impl SymOperator for SymBandedMatrix {
    fn order(&self) -> usize {
        self.order
    }
    fn dense(&self) -> DenseSymMatrix {
        self.to_dense()
    }
}

/// Dense rectangular matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0.0 {
                    axpy(orow, a, other.row(k));
                }
            }
        }
        out
    }
}

/// Provenance of one eigenvalue: harmonic/angular mode `n` and radial index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeTag {
    pub n: usize,
    pub k: usize,
}

/// Ascending eigenvalues, repeated according to multiplicity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub tags: Vec<Option<ModeTag>>,
}

/// A cluster of numerically equal eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenGroup {
    pub value: f64,
    pub multiplicity: usize,
    pub first: usize,
}

pub fn degeneracy_tol(lambda: f64) -> f64 {
    1e-9 * (1.0 + lambda.abs())
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let tags = vec![None; values.len()];
        Self { values, tags }
    }

    /// Sorts `(value, tag)` pairs; ties keep tag order.
    pub fn with_tags(values: Vec<f64>, tags: Vec<Option<ModeTag>>) -> Self {
        assert_eq!(values.len(), tags.len());
        let mut pairs: Vec<_> = values.into_iter().zip(tags).collect();
        pairs.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then_with(|| tag_key(&a.1).cmp(&tag_key(&b.1)))
        });
        let (values, tags) = pairs.into_iter().unzip();
        Self { values, tags }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn truncate(&mut self, m: usize) {
        self.values.truncate(m);
        self.tags.truncate(m);
    }

    pub fn groups(&self) -> Vec<EigenGroup> {
        let mut out: Vec<EigenGroup> = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            match out.last_mut() {
                Some(g) if (v - g.value).abs() <= degeneracy_tol(g.value) => g.multiplicity += 1,
                _ => out.push(EigenGroup { value: v, multiplicity: 1, first: i }),
            }
        }
        out
    }

    /// Multiplicity of the group containing each entry.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.len()];
        for g in self.groups() {
            for slot in &mut m[g.first..g.first + g.multiplicity] {
                *slot = g.multiplicity;
            }
        }
        m
    }
}

fn tag_key(t: &Option<ModeTag>) -> (usize, usize) {
    t.map_or((usize::MAX, usize::MAX), |t| (t.n, t.k))
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    let mut s3 = 0.0;
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let chunks = n / 4;
    for c in 0..chunks {
        let i = 4 * c;
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for i in 4 * chunks..n {
        s0 += a[i] * b[i];
    }
    (s0 + s1) + (s2 + s3)
}

#[inline]
pub(crate) fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// In-place lower Cholesky factor of a row-major matrix. Pivots below
/// `rel_floor · max diag` count as failure.
fn cholesky(a: &mut [f64], n: usize, rel_floor: f64) -> Result<(), EigError> {
    let dmax = (0..n).fold(0.0f64, |m, i| m.max(a[i * n + i].abs()));
    for i in 0..n {
        for j in 0..=i {
            let (ri, rj) = if i == j {
                (&a[i * n..i * n + j], &a[j * n..j * n + j])
            } else {
                let (lo, hi) = a.split_at(i * n);
                (&hi[..j], &lo[j * n..j * n + j])
            };
            let s = a[i * n + j] - dot(ri, rj);
            if i == j {
                if !(s > rel_floor * dmax) {
                    return Err(EigError::NotPositiveDefinite { index: i, pivot: s });
                }
                a[i * n + i] = s.sqrt();
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
        for j in i + 1..n {
            a[i * n + j] = 0.0;
        }
    }
    Ok(())
}

/// Solves `L X = M` in place (`m` overwritten by `X`), `L` lower triangular.
fn forward_solve_rows(l: &[f64], m: &mut [f64], n: usize) {
    for i in 0..n {
        let (done, rest) = m.split_at_mut(i * n);
        let row = &mut rest[..n];
        for k in 0..i {
            let lik = l[i * n + k];
            if lik != 0.0 {
                axpy(row, -lik, &done[k * n..(k + 1) * n]);
            }
        }
        let d = 1.0 / l[i * n + i];
        for v in row.iter_mut() {
            *v *= d;
        }
    }
}

fn transpose_in_place(m: &mut [f64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            m.swap(i * n + j, j * n + i);
        }
    }
}

/// `L⁻¹ M L⁻ᵀ` for symmetric `M`.
fn congruence(l: &[f64], m: &mut [f64], n: usize) {
    forward_solve_rows(l, m, n);
    transpose_in_place(m, n);
    forward_solve_rows(l, m, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
}

/// Householder reduction of a full symmetric row-major matrix to tridiagonal
/// form. Returns (diagonal, off-diagonal, reflectors) where each reflector is
/// `(k, v)` acting on indices `k+1..n` as `I - v vᵀ` (with `|v|² = 2`).
fn tridiagonalize(a: &mut [f64], n: usize, keep: bool) -> (Vec<f64>, Vec<f64>, Vec<(usize, Vec<f64>)>) {
    let mut refl = Vec::new();
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<f64> = a[k * n + k + 1..k * n + n].to_vec();
        let alpha = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if alpha == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
        let mut v = x;
        v[0] += sign * alpha;
        let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        let s = std::f64::consts::SQRT_2 / vn;
        for t in v.iter_mut() {
            *t *= s;
        }
        e[k] = -sign * alpha;
        // p = A22 v ; w = p - (vᵀp/2) v ; A22 -= v wᵀ + w vᵀ
        for i in 0..m {
            let r = (k + 1 + i) * n + k + 1;
            p[i] = dot(&a[r..r + m], &v);
        }
        let h = 0.5 * dot(&p[..m], &v);
        for i in 0..m {
            p[i] -= h * v[i];
        }
        for i in 0..m {
            let r = (k + 1 + i) * n + k + 1;
            let row = &mut a[r..r + m];
            let vi = v[i];
            let wi = p[i];
            for j in 0..m {
                row[j] -= vi * p[j] + wi * v[j];
            }
        }
        if keep {
            refl.push((k, v));
        }
    }
    if n >= 2 {
        e[n - 2] = a[(n - 2) * n + n - 1];
    }
    let d = (0..n).map(|i| a[i * n + i]).collect();
    (d, e, refl)
}

/// Eigenvalues (and optionally the full orthogonal factor `Z`, row-major
/// with eigenvectors as columns) of a symmetric tridiagonal matrix, by
/// implicit QL with Wilkinson shifts. Unsorted.
fn tql(d: &mut [f64], e_in: &[f64], mut z: Option<(&mut [f64], usize)>) -> Result<(), EigError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&e_in[..n - 1]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(EigError::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some((zz, rows)) = z.as_mut() {
                    for k in 0..*rows {
                        let f2 = zz[k * n + i + 1];
                        zz[k * n + i + 1] = s * zz[k * n + i] + c * f2;
                        zz[k * n + i] = c * zz[k * n + i] - s * f2;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigenvalues of the symmetric tridiagonal matrix `(diag, off)`, ascending,
/// with the first components of the normalized eigenvectors when requested
/// (the Golub–Welsch quadrature weights need only those).
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64], first_row: bool) -> (Vec<f64>, Option<Vec<f64>>) {
    let n = diag.len();
    let mut d = diag.to_vec();
    if !first_row {
        tql(&mut d, off, None).expect("tridiagonal QL converges");
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return (d, None);
    }
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }
    tql(&mut d, off, Some((&mut z, 1))).expect("tridiagonal QL converges");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    (idx.iter().map(|&i| d[i]).collect(), Some(idx.iter().map(|&i| z[i]).collect()))
}

/// Eigen-decomposition of a dense symmetric row-major matrix; eigenvalues
/// ascending and, if requested, eigenvectors as columns of a row-major array.
fn sym_eigen(mut a: Vec<f64>, n: usize, vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>), EigError> {
    let (mut d, e, refl) = tridiagonalize(&mut a, n, vectors);
    drop(a);
    if !vectors {
        tql(&mut d, &e, None)?;
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return Ok((d, None));
    }
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql(&mut d, &e, Some((&mut z, n)))?;
    // Back-transform: Z ← H_0 H_1 … H_{n-3} Z, applying the last reflector first.
    for (k, v) in refl.iter().rev() {
        let m = v.len();
        let mut w = vec![0.0; n];
        for (i, &vi) in v.iter().enumerate() {
            axpy(&mut w, vi, &z[(k + 1 + i) * n..(k + 2 + i) * n]);
        }
        for i in 0..m {
            let row = &mut z[(k + 1 + i) * n..(k + 2 + i) * n];
            axpy(row, -v[i], &w);
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let vals = idx.iter().map(|&i| d[i]).collect();
    let mut zs = vec![0.0; n * n];
    for r in 0..n {
        for (c, &i) in idx.iter().enumerate() {
            zs[r * n + c] = z[r * n + i];
        }
    }
    Ok((vals, Some(zs)))
}

/// Eigenpairs of `A x = λ B x` (eigenvectors as columns, row-major).
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Option<DenseMatrix>,
}

const STIFFNESS_PIVOT_FLOOR: f64 = 1e-13;

fn gevp_core(a: &DenseSymMatrix, b: &DenseSymMatrix, want: usize, vectors: bool) -> Result<EigenPairs, EigError> {
    let n = a.order();
    if b.order() != n {
        return Err(EigError::OrderMismatch(n, b.order()));
    }
    if want > n {
        return Err(EigError::TooMany { want, order: n });
    }
    if n == 0 {
        return Ok(EigenPairs { values: vec![], vectors: vectors.then(|| DenseMatrix::zeros(0, 0)) });
    }
    // Reciprocal formulation through the stiffness factor.
    let mut l = a.data.clone();
    if cholesky(&mut l, n, STIFFNESS_PIVOT_FLOOR).is_ok() {
        let mut m = b.data.clone();
        congruence(&l, &mut m, n);
        let (mu, y) = sym_eigen(m, n, vectors)?;
        if mu.iter().rev().take(want).all(|&v| v > 0.0) {
            let order: Vec<usize> = (0..want).map(|i| n - 1 - i).collect();
            let values = order.iter().map(|&i| 1.0 / mu[i]).collect();
            let vectors = y.map(|y| back_substitute(&l, &y, n, &order));
            return Ok(EigenPairs { values, vectors });
        }
    }
    let mut l = b.data.clone();
    cholesky(&mut l, n, 0.0)?;
    let mut m = a.data.clone();
    congruence(&l, &mut m, n);
    let (lam, y) = sym_eigen(m, n, vectors)?;
    let order: Vec<usize> = (0..want).collect();
    let vectors = y.map(|y| back_substitute(&l, &y, n, &order));
    Ok(EigenPairs { values: lam[..want].to_vec(), vectors })
}

/// `x = L⁻ᵀ y` for the selected columns of `y`.
fn back_substitute(l: &[f64], y: &[f64], n: usize, cols: &[usize]) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(n, cols.len());
    let mut x = vec![0.0; n];
    for (c, &j) in cols.iter().enumerate() {
        for i in 0..n {
            x[i] = y[i * n + j];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        for i in 0..n {
            out.set(i, c, x[i]);
        }
    }
    out
}

/// Smallest `want` eigenvalues of `A x = λ B x`.
pub fn solve_gevp(a: &impl SymOperator, b: &impl SymOperator, want: usize) -> Result<Spectrum, EigError> {
    let pairs = gevp_core(&a.dense(), &b.dense(), want, false)?;
    Ok(Spectrum::new(pairs.values))
}

/// Smallest `want` eigenpairs, vectors normalized so that `xᵀ B x = 1`.
pub fn solve_gevp_vectors(a: &impl SymOperator, b: &impl SymOperator, want: usize) -> Result<EigenPairs, EigError> {
    let bd = b.dense();
    let mut pairs = gevp_core(&a.dense(), &bd, want, true)?;
    if let Some(v) = pairs.vectors.as_mut() {
        for c in 0..v.cols {
            let x = v.column(c);
            let s = dot(&x, &bd.mul_vec(&x)).sqrt();
            for i in 0..v.rows {
                let t = v.get(i, c) / s;
                v.set(i, c, t);
            }
        }
    }
    Ok(pairs)
}

/// One-sided Jacobi SVD of the columns of `m` (n × r, row-major): returns
/// singular values and the left singular vectors as columns (n × r).
fn jacobi_svd_columns(m: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let (n, r) = (m.rows, m.cols);
    let mut cols: Vec<Vec<f64>> = (0..r).map(|j| m.column(j)).collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..r {
            for q in p + 1..r {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (a, b) = cols.split_at_mut(q);
                let (cp, cq) = (&mut a[p], &mut b[0]);
                for i in 0..n {
                    let x = cp[i];
                    let y = cq[i];
                    cp[i] = c * x - s * y;
                    cq[i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sig: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut u = DenseMatrix::zeros(n, r);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            u.set(i, j, if sig[j] > 0.0 { c[i] / sig[j] } else { 0.0 });
        }
    }
    (sig, u)
}

/// Householder reflectors `I - v vᵀ` (|v|² = 2, acting on indices `k..n`)
/// whose product `Q` has `range(Cᵀ)` as its leading columns; the trailing
/// columns of `Q` span the null space of `C`.
struct NullBasis {
    n: usize,
    rank: usize,
    reflectors: Vec<(usize, Vec<f64>)>,
}

fn null_basis(c: &DenseMatrix, tol: f64) -> Result<NullBasis, EigError> {
    if !(tol > 0.0) {
        return Err(EigError::InvalidTolerance(tol));
    }
    let n = c.cols;
    if c.rows == 0 {
        return Ok(NullBasis { n, rank: 0, reflectors: vec![] });
    }
    let mut ct = DenseMatrix::zeros(n, c.rows);
    for i in 0..c.rows {
        for j in 0..n {
            ct.set(j, i, c.get(i, j));
        }
    }
    let (sig, u) = jacobi_svd_columns(&ct);
    let smax = sig.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..sig.len()).filter(|&j| smax > 0.0 && sig[j] > tol * smax).collect();
    let mut basis: Vec<Vec<f64>> = keep.iter().map(|&j| u.column(j)).collect();
    let rank = basis.len();
    let mut reflectors = Vec::with_capacity(rank);
    for k in 0..rank {
        let x = &basis[k][k..];
        let alpha = dot(x, x).sqrt();
        let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
        let mut v = x.to_vec();
        v[0] += sign * alpha;
        let vn = dot(&v, &v).sqrt();
        if vn == 0.0 {
            continue;
        }
        for t in v.iter_mut() {
            *t *= std::f64::consts::SQRT_2 / vn;
        }
        for col in basis.iter_mut().skip(k) {
            let s = dot(&col[k..], &v);
            axpy(&mut col[k..], -s, &v);
        }
        reflectors.push((k, v));
    }
    Ok(NullBasis { n, rank, reflectors })
}

impl NullBasis {
    /// Explicit null-space columns (n × (n - rank)).
    fn columns(&self) -> DenseMatrix {
        let n = self.n;
        let m = n - self.rank;
        // Q e_j for j ≥ rank: apply reflectors last-to-first to unit vectors.
        let mut z = DenseMatrix::zeros(n, m);
        for j in 0..m {
            z.set(self.rank + j, j, 1.0);
        }
        for (k, v) in self.reflectors.iter().rev() {
            for j in 0..m {
                let s: f64 = (0..v.len()).map(|i| v[i] * z.get(k + i, j)).sum();
                if s != 0.0 {
                    for i in 0..v.len() {
                        let t = z.get(k + i, j) - s * v[i];
                        z.set(k + i, j, t);
                    }
                }
            }
        }
        z
    }

    /// `QᵀMQ` restricted to the trailing (null-space) block.
    fn project(&self, m: &DenseSymMatrix) -> DenseSymMatrix {
        let n = self.n;
        let mut a = m.data.clone();
        let mut w = vec![0.0; n];
        for (k, v) in &self.reflectors {
            let k = *k;
            let len = v.len();
            // A ← H A H with H = I - v vᵀ on indices k..n.
            // p = A v (full rows), then A -= v pᵀ + p vᵀ - (vᵀp) v vᵀ.
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = dot(&a[i * n + k..i * n + k + len], v);
            }
            let h = dot(&w[k..k + len], v);
            for i in 0..n {
                let row = &mut a[i * n..(i + 1) * n];
                let pi = w[i];
                let vi = if i >= k { v[i - k] } else { 0.0 };
                // row_i -= vi * p + pi * v - h * vi * v
                if vi != 0.0 {
                    axpy(row, -vi, &w);
                }
                let coef = -pi + h * vi;
                axpy(&mut row[k..k + len], coef, v);
            }
        }
        let r = self.rank;
        let m2 = n - r;
        let mut out = vec![0.0; m2 * m2];
        for i in 0..m2 {
            out[i * m2..(i + 1) * m2].copy_from_slice(&a[(r + i) * n + r..(r + i) * n + n]);
        }
        DenseSymMatrix::from_row_major(m2, out)
    }
}

pub const DEFAULT_NULL_TOL: f64 = 1e-11;

/// Orthonormal basis of `{x : C x = 0}` as columns; the rank of `C` is
/// decided by singular values above `tol · σ_max`.
pub fn nullspace(c: &DenseMatrix, tol: f64) -> Result<DenseMatrix, EigError> {
    Ok(null_basis(c, tol)?.columns())
}

/// Smallest `want` eigenvalues of `ZᵀAZ y = λ ZᵀBZ y`, `Z = nullspace(C)`.
pub fn reduce_constrained_gevp(
    a: &DenseSymMatrix,
    b: &DenseSymMatrix,
    c: &DenseMatrix,
    want: usize,
) -> Result<Spectrum, EigError> {
    if a.order() != b.order() {
        return Err(EigError::OrderMismatch(a.order(), b.order()));
    }
    if c.rows > 0 && c.cols != a.order() {
        return Err(EigError::OrderMismatch(a.order(), c.cols));
    }
    let nb = null_basis(c, DEFAULT_NULL_TOL)?;
    let ar = nb.project(a);
    let br = nb.project(b);
    solve_gevp(&ar, &br, want)
}

/// Rank of `C` under the same threshold as the null-space reduction.
pub fn constraint_rank(c: &DenseMatrix) -> Result<usize, EigError> {
    Ok(null_basis(c, DEFAULT_NULL_TOL)?.rank)
}

/// Refines the smallest eigenvalue of `A x = λ B x` in the working precision
/// `T`, given an f64 estimate. Matrices are full row-major arrays whose
/// entries vanish outside half-bandwidth `band`. With the shift placed just
/// below the estimate, `A - σB` is positive definite, so inverse iteration
/// runs on a pivot-free banded Cholesky factor; the Rayleigh quotient of the
/// converged vector is returned.
pub fn refine_lowest<T: crate::real::Real>(a: &[T], b: &[T], n: usize, band: usize, estimate: f64) -> Result<T, EigError> {
    let bw = band.min(n.saturating_sub(1));
    let mut sigma = T::c(estimate * (1.0 - 1e-9));
    let mut l = vec![T::zero(); n * n];
    let mut tries = 0;
    loop {
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let hi = (i + bw + 1).min(n);
            for j in lo..hi {
                l[i * n + j] = a[i * n + j] - sigma * b[i * n + j];
            }
        }
        match banded_cholesky(&mut l, n, bw) {
            Ok(()) => break,
            Err(e) => {
                tries += 1;
                if tries > 8 {
                    return Err(e);
                }
                sigma = sigma - T::c(estimate.abs() * 1e-8 * 10f64.powi(tries));
            }
        }
    }
    let mut x = vec![T::one(); n];
    let mut rq = T::c(estimate);
    for _ in 0..6 {
        let bx = band_mul(b, &x, n, bw);
        // Solve L Lᵀ y = B x.
        let mut y = bx;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = y[i];
            for k in lo..i {
                s = s - l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let hi = (i + bw + 1).min(n);
            let mut s = y[i];
            for k in i + 1..hi {
                s = s - l[k * n + i] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        let norm = y.iter().fold(T::zero(), |m, v| if v.abs() > m { v.abs() } else { m });
        for v in y.iter_mut() {
            *v = *v / norm;
        }
        x = y;
        let ax = band_mul(a, &x, n, bw);
        let bx = band_mul(b, &x, n, bw);
        let num = x.iter().zip(&ax).fold(T::zero(), |s, (u, v)| s + *u * *v);
        let den = x.iter().zip(&bx).fold(T::zero(), |s, (u, v)| s + *u * *v);
        let next = num / den;
        let done = (next - rq).abs() <= next.abs() * T::c(1e-31);
        rq = next;
        if done {
            break;
        }
    }
    Ok(rq)
}

fn band_mul<T: crate::real::Real>(m: &[T], x: &[T], n: usize, bw: usize) -> Vec<T> {
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(bw);
            let hi = (i + bw + 1).min(n);
            (lo..hi).fold(T::zero(), |s, j| s + m[i * n + j] * x[j])
        })
        .collect()
}

fn banded_cholesky<T: crate::real::Real>(l: &mut [T], n: usize, bw: usize) -> Result<(), EigError> {
    for i in 0..n {
        let lo = i.saturating_sub(bw);
        for j in lo..=i {
            let klo = lo.max(j.saturating_sub(bw));
            let mut s = l[i * n + j];
            for k in klo..j {
                s = s - l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > T::zero()) {
                    return Err(EigError::NotPositiveDefinite { index: i, pivot: s.f64() });
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(())
}
