//! Mortar spectral elements on the square `[-1,1]²` and the L-shape
//! `[-1,1]² \ ([0,1]×[-1,0])`.
//!
//! The origin is covered by a disk (square) or a 3π/2 sector (L-shape) of
//! radius `R` carrying the Method II radial basis, so the `r^β` singularity
//! is resolved exactly. The rest is split into four curvilinear quads
//! given by Gordon–Hall maps with the arc as their `ξ = -1` edge. Quads are
//! conforming among themselves; across the arc the traces are matched
//! weakly against trigonometric test functions, and the constraint is
//! eliminated by a null-space reduction.

use crate::ball_solver::{method2_blocks, SolverError};
use crate::eiglin::{self, dot, DenseMatrix, DenseSymMatrix, EigError, Spectrum};
use crate::orthopoly::{gauss_legendre, jacobi_m1_deriv_table, jacobi_m1_table};
use std::f64::consts::PI;
use thiserror::Error;

/// Opening parameter of the L-shape's reentrant sector (angle 3π/2).
pub const LSHAPE_GAMMA: f64 = 2.0 / 3.0;
/// Points per arc segment for the mortar integrals.
const MORTAR_POINTS: usize = 64;
/// Largest entry change tolerated when the element quadrature is doubled.
const QUAD_DRIFT_TOL: f64 = 1e-11;

#[derive(Debug, Error)]
pub enum MortarError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature on quad {kappa} not converged: entries moved by {drift:e} at q = {q}")]
    Quadrature { kappa: usize, q: usize, drift: f64 },
    #[error("mortar constraints have rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Square,
    LShape,
}

/// Map from `[-1,1]²` onto quad `kappa` (1..=4) of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GordonHallMap {
    pub kappa: usize,
    pub domain: Domain,
    pub r: f64,
}

impl GordonHallMap {
    pub fn new(domain: Domain, kappa: usize, r: f64) -> Result<Self, MortarError> {
        if !(1..=4).contains(&kappa) {
            return Err(MortarError::InvalidArgument(format!("quad index {kappa} outside 1..=4")));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(MortarError::InvalidArgument(format!("interface radius {r} outside (0,1)")));
        }
        Ok(Self { kappa, domain, r })
    }

    /// Whether this quad uses the rotated square construction.
    fn rotated(&self) -> bool {
        self.domain == Domain::Square || self.kappa == 2 || self.kappa == 3
    }

    /// Polar angle of the arc point `gh_map(-1, eta)` and `dθ/dη`.
    pub fn arc_angle(&self, eta: f64) -> (f64, f64) {
        if self.rotated() {
            (PI * (self.kappa as f64 - 1.0) / 2.0 + PI * eta / 4.0, PI / 4.0)
        } else if self.kappa == 1 {
            (PI * (eta + 1.0) / 8.0, PI / 8.0)
        } else {
            (1.5 * PI - PI * (eta + 1.0) / 8.0, -PI / 8.0)
        }
    }
}

/// Position and partials `(x, y, x_ξ, y_ξ, x_η, y_η)`.
fn map_with_partials(m: &GordonHallMap, xi: f64, eta: f64) -> [f64; 6] {
    let r = m.r;
    if m.rotated() {
        // z = i^{κ-1} [ (1+ξ)/2 (1+iη) + (1-ξ)/2 R e^{iπη/4} ]
        let (rc, rs) = match m.kappa {
            1 => (1.0, 0.0),
            2 => (0.0, 1.0),
            3 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        let rot = |a: f64, b: f64| (rc * a - rs * b, rs * a + rc * b);
        let t = PI * eta / 4.0;
        let (ct, st) = (t.cos(), t.sin());
        let p = (0.5 * (1.0 + xi) + 0.5 * (1.0 - xi) * r * ct, 0.5 * (1.0 + xi) * eta + 0.5 * (1.0 - xi) * r * st);
        let dxi = (0.5 - 0.5 * r * ct, 0.5 * eta - 0.5 * r * st);
        let deta = (-0.5 * (1.0 - xi) * r * st * PI / 4.0, 0.5 * (1.0 + xi) + 0.5 * (1.0 - xi) * r * ct * PI / 4.0);
        let (x, y) = rot(p.0, p.1);
        let (xx, yx) = rot(dxi.0, dxi.1);
        let (xe, ye) = rot(deta.0, deta.1);
        return [x, y, xx, yx, xe, ye];
    }
    let t = PI * (eta + 1.0) / 8.0;
    let (ct, st) = (t.cos(), t.sin());
    let x = 0.5 * (1.0 + xi) + 0.5 * (1.0 - xi) * r * ct;
    let y = 0.25 * (1.0 + xi) * (1.0 + eta) + 0.5 * (1.0 - xi) * r * st;
    let xx = 0.5 - 0.5 * r * ct;
    let yx = 0.25 * (1.0 + eta) - 0.5 * r * st;
    let xe = -0.5 * (1.0 - xi) * r * st * PI / 8.0;
    let ye = 0.25 * (1.0 + xi) + 0.5 * (1.0 - xi) * r * ct * PI / 8.0;
    if m.kappa == 1 {
        [x, y, xx, yx, xe, ye]
    } else {
        // F4 = reflection of F1 through y = -x
        [-y, -x, -yx, -xx, -ye, -xe]
    }
}

pub fn gh_map(m: &GordonHallMap, xi: f64, eta: f64) -> (f64, f64) {
    let v = map_with_partials(m, xi, eta);
    (v[0], v[1])
}

/// Jacobian `[[x_ξ, x_η], [y_ξ, y_η]]` and its determinant. The L-shape map
/// of quad 4 reverses orientation, so its determinant is negative.
pub fn gh_jacobian(m: &GordonHallMap, xi: f64, eta: f64) -> ([[f64; 2]; 2], f64) {
    let [_, _, xx, yx, xe, ye] = map_with_partials(m, xi, eta);
    ([[xx, xe], [yx, ye]], xx * ye - xe * yx)
}

/// Local basis `φ_0 = (1+ζ)/2`, `φ_1 = (1-ζ)/2`, `φ_k = J_k^{-1,-1}(ζ)`:
/// values and derivatives of indices `0..=kmax` at `z`.
fn modal_basis(kmax: usize, z: f64) -> (Vec<f64>, Vec<f64>) {
    let p = jacobi_m1_table(-1.0, kmax.max(1), z);
    let dp = jacobi_m1_deriv_table(-1.0, kmax.max(1), z);
    let mut f = p;
    let mut g = dp;
    f[0] = 0.5 * (1.0 + z);
    g[0] = 0.5;
    f[1] = 0.5 * (1.0 - z);
    g[1] = -0.5;
    f.truncate(kmax + 1);
    g.truncate(kmax + 1);
    (f, g)
}

/// Local matrices of one block with the local-to-global map.
#[derive(Debug, Clone)]
pub struct ElementMatrices {
    pub stiffness: DenseSymMatrix,
    pub mass: DenseSymMatrix,
    /// Global column of each local function, `None` when it is excluded.
    pub dofs: Vec<Option<usize>>,
}

/// One function of the disk or sector block: radial index `k`, angular
/// mode `n`, cosine or sine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiskMode {
    pub k: usize,
    pub n: usize,
    pub sine: bool,
}

fn disk_modes(domain: Domain, k0: usize, n0: usize) -> Vec<DiskMode> {
    let mut out = Vec::new();
    match domain {
        Domain::Square => {
            for n in 0..=n0 {
                for &sine in if n == 0 { &[false][..] } else { &[false, true][..] } {
                    for k in 0..=k0 {
                        out.push(DiskMode { k, n, sine });
                    }
                }
            }
        }
        Domain::LShape => {
            for n in 1..=n0 {
                for k in 0..=k0 {
                    out.push(DiskMode { k, n, sine: true });
                }
            }
        }
    }
    out
}

/// Exponent and angular weight `∫ (angular mode)² dθ` of a disk mode.
fn disk_mode_data(domain: Domain, c: f64, n: usize) -> (f64, f64) {
    match domain {
        Domain::Square => {
            let nf = n as f64;
            ((c * c + nf * nf).sqrt(), if n == 0 { 2.0 * PI } else { PI })
        }
        Domain::LShape => {
            let g = LSHAPE_GAMMA * n as f64;
            ((c * c + g * g).sqrt(), PI / (2.0 * LSHAPE_GAMMA))
        }
    }
}

/// Disk (square) or sector (L-shape) block of radius `R`, `k = 0..=K0`. In
/// two dimensions stiffness is unchanged by the scaling `x → Rx` and the
/// mass picks up `R²`.
pub fn assemble_interface_block(domain: Domain, r: f64, c: f64, k0: usize, n0: usize) -> Result<ElementMatrices, MortarError> {
    if !(r > 0.0 && r < 1.0) || !(c >= 0.0) || !c.is_finite() {
        return Err(MortarError::InvalidArgument(format!("R = {r}, c = {c}")));
    }
    if domain == Domain::LShape && n0 < 1 {
        return Err(MortarError::InvalidArgument("the sector block needs N0 ≥ 1".into()));
    }
    let modes = disk_modes(domain, k0, n0);
    let nd = modes.len();
    let mut a = DenseSymMatrix::zeros(nd);
    let mut b = DenseSymMatrix::zeros(nd);
    let mut i = 0;
    while i < nd {
        let (beta, ang) = disk_mode_data(domain, c, modes[i].n);
        let (s, m) = method2_blocks(beta, 2, 0, k0);
        for k in 0..=k0 {
            a.set(i + k, i + k, ang * s[k]);
            b.set(i + k, i + k, ang * r * r * m.get(k, k));
            if k < k0 {
                b.set(i + k, i + k + 1, ang * r * r * m.get(k, k + 1));
            }
        }
        i += k0 + 1;
    }
    Ok(ElementMatrices { stiffness: a, mass: b, dofs: (0..nd).map(Some).collect() })
}

/// Local index of `φ_a(ξ) φ_b(η)`, `a = 1..=K`, `b = 0..=N`.
fn local_index(a: usize, b: usize, n: usize) -> usize {
    (a - 1) * (n + 1) + b
}

/// Quad matrices `∫ ∇φ_i·∇φ_j + c²/r² φ_i φ_j` and `∫ φ_i φ_j` by a
/// `q × q` Gauss–Legendre rule. `φ_0(ξ)` (nonzero on the outer boundary
/// `ξ = 1`) is left out. `dofs` is filled by the mesh.
pub fn assemble_quad_element(m: &GordonHallMap, c: f64, k: usize, n: usize, q: usize) -> Result<ElementMatrices, MortarError> {
    if k < 1 || n < 1 || q < 2 {
        return Err(MortarError::InvalidArgument(format!("quad degrees ({k}, {n}) and order {q}")));
    }
    let (x, w) = gauss_legendre::<f64>(q);
    let tab: Vec<(Vec<f64>, Vec<f64>)> = x.iter().map(|&z| modal_basis(k.max(n), z)).collect();
    let nf = k * (n + 1);
    let np = q * q;
    let mut f = vec![0.0; nf * np];
    let mut gx = vec![0.0; nf * np];
    let mut gy = vec![0.0; nf * np];
    let mut wt = vec![0.0; np];
    let mut wr = vec![0.0; np];
    for (pi, &xi) in x.iter().enumerate() {
        for (pj, &eta) in x.iter().enumerate() {
            let p = pi * q + pj;
            let [xp, yp, xx, yx, xe, ye] = map_with_partials(m, xi, eta);
            let det = xx * ye - xe * yx;
            wt[p] = w[pi] * w[pj] * det.abs();
            wr[p] = c * c * wt[p] / (xp * xp + yp * yp);
            let (fa, ga) = (&tab[pi].0, &tab[pi].1);
            let (fb, gb) = (&tab[pj].0, &tab[pj].1);
            for a in 1..=k {
                for b in 0..=n {
                    let i = local_index(a, b, n) * np + p;
                    let dxi = ga[a] * fb[b];
                    let deta = fa[a] * gb[b];
                    f[i] = fa[a] * fb[b];
                    gx[i] = (ye * dxi - yx * deta) / det;
                    gy[i] = (-xe * dxi + xx * deta) / det;
                }
            }
        }
    }
    let mut stiff = DenseSymMatrix::zeros(nf);
    let mut mass = DenseSymMatrix::zeros(nf);
    let mut tmp = vec![0.0; np];
    let weighted = |src: &[f64], wts: &[f64], out: &mut [f64]| {
        for ((o, s), w) in out.iter_mut().zip(src).zip(wts) {
            *o = s * w;
        }
    };
    for i in 0..nf {
        let (fi, gxi, gyi) = (&f[i * np..(i + 1) * np], &gx[i * np..(i + 1) * np], &gy[i * np..(i + 1) * np]);
        weighted(fi, &wt, &mut tmp);
        for j in i..nf {
            mass.set(i, j, dot(&tmp, &f[j * np..(j + 1) * np]));
        }
        let mut row = vec![0.0; nf - i];
        weighted(gxi, &wt, &mut tmp);
        for j in i..nf {
            row[j - i] += dot(&tmp, &gx[j * np..(j + 1) * np]);
        }
        weighted(gyi, &wt, &mut tmp);
        for j in i..nf {
            row[j - i] += dot(&tmp, &gy[j * np..(j + 1) * np]);
        }
        if c != 0.0 {
            weighted(fi, &wr, &mut tmp);
            for j in i..nf {
                row[j - i] += dot(&tmp, &f[j * np..(j + 1) * np]);
            }
        }
        for j in i..nf {
            stiff.set(i, j, row[j - i]);
        }
    }
    Ok(ElementMatrices { stiffness: stiff, mass, dofs: vec![None; nf] })
}

/// Largest entry change of the quad matrices between orders `q` and `2q`,
/// relative to the largest entry.
pub fn quadrature_drift(m: &GordonHallMap, c: f64, k: usize, n: usize, q: usize) -> Result<f64, MortarError> {
    let e1 = assemble_quad_element(m, c, k, n, q)?;
    let e2 = assemble_quad_element(m, c, k, n, 2 * q)?;
    let mut drift: f64 = 0.0;
    for (x, y) in [(&e1.stiffness, &e2.stiffness), (&e1.mass, &e2.mass)] {
        let scale = y.max_abs().max(f64::MIN_POSITIVE);
        for (u, v) in x.data().iter().zip(y.data()) {
            drift = drift.max((u - v).abs() / scale);
        }
    }
    Ok(drift)
}

/// Disk/sector block, four quads, conforming numbering inside the quads.
#[derive(Debug, Clone)]
pub struct MortarMesh {
    pub domain: Domain,
    pub r: f64,
    pub c: f64,
    pub k0: usize,
    pub n0: usize,
    /// `(K, N)` per quad.
    pub quads: [(usize, usize); 4],
    /// Fixed quadrature order; `None` picks `max(K, N) + 16` and doubles
    /// until the entries settle.
    pub q: Option<usize>,
    disk: Vec<DiskMode>,
    local_to_global: Vec<Vec<Option<usize>>>,
    total: usize,
}

impl MortarMesh {
    pub fn new(
        domain: Domain,
        r: f64,
        c: f64,
        (k0, n0): (usize, usize),
        quads: [(usize, usize); 4],
        q: Option<usize>,
    ) -> Result<Self, MortarError> {
        if !(r > 0.0 && r < 1.0) {
            return Err(MortarError::InvalidArgument(format!("interface radius {r} outside (0,1)")));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(MortarError::InvalidArgument(format!("potential strength {c}")));
        }
        if domain == Domain::LShape && n0 < 1 {
            return Err(MortarError::InvalidArgument("the sector block needs N0 ≥ 1".into()));
        }
        if let Some(&(k, n)) = quads.iter().find(|&&(k, n)| k < 1 || n < 1) {
            return Err(MortarError::InvalidArgument(format!("quad degrees ({k}, {n}) must be ≥ 1")));
        }
        // shared edges need matching degrees along them
        let pairs: &[(usize, usize)] = match domain {
            Domain::Square => &[(0, 1), (1, 2), (2, 3), (3, 0)],
            Domain::LShape => &[(0, 1), (1, 2), (2, 3)],
        };
        for &(i, j) in pairs {
            if quads[i].0 != quads[j].0 {
                return Err(MortarError::InvalidArgument(format!(
                    "quads {} and {} share an edge but have K = {} and {}",
                    i + 1,
                    j + 1,
                    quads[i].0,
                    quads[j].0
                )));
            }
        }
        let disk = disk_modes(domain, k0, n0);
        let mut next = disk.len();
        let mut ids = std::collections::HashMap::new();
        let mut local_to_global = Vec::with_capacity(4);
        for kappa in 1..=4usize {
            let (k, n) = quads[kappa - 1];
            let mut loc = vec![None; k * (n + 1)];
            for a in 1..=k {
                for b in 0..=n {
                    // η = -1 edges of quads 1 and 4 lie on the L-shape's outer boundary
                    if domain == Domain::LShape && (kappa == 1 || kappa == 4) && b == 1 {
                        continue;
                    }
                    let key = match (domain, kappa, b) {
                        (Domain::Square, _, 1) => ((kappa + 2) % 4 + 1, a, 0),
                        (Domain::LShape, 2, 1) => (1, a, 0),
                        (Domain::LShape, 3, 1) => (2, a, 0),
                        (Domain::LShape, 4, 0) => (3, a, 0),
                        _ => (kappa, a, b),
                    };
                    let id = *ids.entry(key).or_insert_with(|| {
                        next += 1;
                        next - 1
                    });
                    loc[local_index(a, b, n)] = Some(id);
                }
            }
            local_to_global.push(loc);
        }
        Ok(Self { domain, r, c, k0, n0, quads, q, disk, local_to_global, total: next })
    }

    /// Number of global columns (disk/sector functions plus distinct quad
    /// functions).
    pub fn dof_count(&self) -> usize {
        self.total
    }

    pub fn disk_modes(&self) -> &[DiskMode] {
        &self.disk
    }

    pub fn local_to_global(&self, kappa: usize) -> &[Option<usize>] {
        &self.local_to_global[kappa - 1]
    }

    pub fn map(&self, kappa: usize) -> GordonHallMap {
        GordonHallMap { kappa, domain: self.domain, r: self.r }
    }

    fn quad_element(&self, kappa: usize) -> Result<ElementMatrices, MortarError> {
        let (k, n) = self.quads[kappa - 1];
        let m = self.map(kappa);
        let mut e = match self.q {
            Some(q) => assemble_quad_element(&m, self.c, k, n, q)?,
            None => {
                let mut q = k.max(n) + 16;
                let mut cur = assemble_quad_element(&m, self.c, k, n, q)?;
                loop {
                    let next = assemble_quad_element(&m, self.c, k, n, 2 * q)?;
                    let mut drift: f64 = 0.0;
                    for (x, y) in [(&cur.stiffness, &next.stiffness), (&cur.mass, &next.mass)] {
                        let scale = y.max_abs();
                        for (u, v) in x.data().iter().zip(y.data()) {
                            drift = drift.max((u - v).abs() / scale);
                        }
                    }
                    if drift <= QUAD_DRIFT_TOL {
                        break cur;
                    }
                    if q > 4 * (k.max(n) + 16) {
                        return Err(MortarError::Quadrature { kappa, q, drift });
                    }
                    q *= 2;
                    cur = next;
                }
            }
        };
        e.dofs = self.local_to_global[kappa - 1].clone();
        Ok(e)
    }

    /// Global stiffness and mass.
    pub fn assemble(&self) -> Result<(DenseSymMatrix, DenseSymMatrix), MortarError> {
        let n = self.total;
        let mut a = DenseSymMatrix::zeros(n);
        let mut b = DenseSymMatrix::zeros(n);
        let disk = assemble_interface_block(self.domain, self.r, self.c, self.k0, self.n0)?;
        let nd = self.disk.len();
        for i in 0..nd {
            for j in i..nd {
                a.set(i, j, disk.stiffness.get(i, j));
                b.set(i, j, disk.mass.get(i, j));
            }
        }
        for kappa in 1..=4 {
            let e = self.quad_element(kappa)?;
            let live: Vec<(usize, usize)> = e.dofs.iter().enumerate().filter_map(|(l, g)| g.map(|g| (l, g))).collect();
            for (x, &(li, gi)) in live.iter().enumerate() {
                for &(lj, gj) in &live[x..] {
                    a.add(gi, gj, e.stiffness.get(li, lj));
                    b.add(gi, gj, e.mass.get(li, lj));
                }
            }
        }
        Ok((a, b))
    }

    /// Trigonometric test functions on the arc: `(m, sine)`.
    fn tests(&self) -> Vec<(usize, bool)> {
        match self.domain {
            Domain::Square => {
                let mut t = vec![(0, false)];
                for m in 1..=self.n0 {
                    t.push((m, false));
                    t.push((m, true));
                }
                t
            }
            Domain::LShape => (1..=self.n0).map(|m| (m, true)).collect(),
        }
    }
}

/// Rows `∫_{Γ_R} (u_disk - u_quad) φ R dθ` for each arc test function `φ`.
pub fn assemble_mortar_constraints(mesh: &MortarMesh) -> DenseMatrix {
    let tests = mesh.tests();
    let mut c = DenseMatrix::zeros(tests.len(), mesh.total);
    let (xg, wg) = gauss_legendre::<f64>(MORTAR_POINTS);
    let r = mesh.r;
    let test_fn = |m: usize, sine: bool, th: f64| -> f64 {
        match mesh.domain {
            Domain::Square => {
                if sine {
                    (m as f64 * th).sin()
                } else {
                    (m as f64 * th).cos()
                }
            }
            Domain::LShape => (LSHAPE_GAMMA * m as f64 * th).sin(),
        }
    };
    for (row, &(m, sine)) in tests.iter().enumerate() {
        for (i, d) in mesh.disk.iter().enumerate() {
            if d.k == 0 && d.n == m && d.sine == sine {
                let (_, ang) = disk_mode_data(mesh.domain, mesh.c, m);
                c.set(row, i, r * ang);
            }
        }
        for kappa in 1..=4 {
            let gm = mesh.map(kappa);
            let (_, n) = mesh.quads[kappa - 1];
            let loc = &mesh.local_to_global[kappa - 1];
            for b in 0..=n {
                // only φ_1(ξ) is nonzero on the arc ξ = -1
                let Some(g) = loc[local_index(1, b, n)] else { continue };
                let mut s = 0.0;
                for (&eta, &w) in xg.iter().zip(&wg) {
                    let (th, dth) = gm.arc_angle(eta);
                    let (fb, _) = modal_basis(n, eta);
                    s += w * fb[b] * test_fn(m, sine, th) * dth.abs();
                }
                let v = c.get(row, g) - r * s;
                c.set(row, g, v);
            }
        }
    }
    c
}

/// Spectrum of the mortar discretization with its sizes.
#[derive(Debug, Clone)]
pub struct MsemResult {
    pub spectrum: Spectrum,
    /// Global columns before the constraints are eliminated.
    pub dof: usize,
    /// Dimension of the constrained space.
    pub reduced_dof: usize,
    pub constraint_rank: usize,
}

pub fn solve_msem(mesh: &MortarMesh, want: usize) -> Result<MsemResult, MortarError> {
    let (a, b) = mesh.assemble()?;
    let c = assemble_mortar_constraints(mesh);
    let rank = eiglin::constraint_rank(&c)?;
    if rank < c.rows {
        return Err(MortarError::RankDeficient { rank, rows: c.rows });
    }
    let reduced = mesh.total - rank;
    if want == 0 || want > reduced {
        return Err(MortarError::InvalidArgument(format!("count {want} outside 1..={reduced}")));
    }
    let spectrum = eiglin::reduce_constrained_gevp(&a, &b, &c, want)?;
    Ok(MsemResult { spectrum, dof: mesh.total, reduced_dof: reduced, constraint_rank: rank })
}
