use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sobolev_core::eiglin::*;

fn random_spd(n: usize, rng: &mut ChaCha8Rng, shift: f64) -> DenseSymMatrix {
    let g: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DenseSymMatrix::from_fn(n, |i, j| {
        let mut s = 0.0;
        for k in 0..n {
            s += g[k * n + i] * g[k * n + j];
        }
        s + if i == j { shift } else { 0.0 }
    })
}

/// Solves `M x = r` by Gaussian elimination with partial pivoting.
fn solve(m: &DenseSymMatrix, r: &[f64]) -> Vec<f64> {
    let n = m.order();
    let mut a: Vec<f64> = m.data().to_vec();
    let mut x = r.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs())).unwrap();
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let f = a[i * n + k] / a[k * n + k];
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= a[i * n + j] * x[j];
        }
        x[i] = s / a[i * n + i];
    }
    x
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest eigenvalue by unshifted inverse iteration with Rayleigh quotients.
fn inverse_iteration(a: &DenseSymMatrix, b: &DenseSymMatrix) -> f64 {
    let n = a.order();
    let mut x = vec![1.0; n];
    let mut lam = 0.0;
    for _ in 0..2000 {
        let y = solve(a, &b.mul_vec(&x));
        let s = dot(&y, &b.mul_vec(&y)).sqrt();
        x = y.iter().map(|v| v / s).collect();
        let next = dot(&x, &a.mul_vec(&x));
        if (next - lam).abs() <= 1e-15 * next {
            return next;
        }
        lam = next;
    }
    lam
}

#[test]
fn diagonal_examples() {
    let a = DenseSymMatrix::from_row_major(2, vec![2.0, 0.0, 0.0, 6.0]);
    let s = solve_gevp(&a, &DenseSymMatrix::identity(2), 2).unwrap();
    assert!((s.values[0] - 2.0).abs() < 1e-14 && (s.values[1] - 6.0).abs() < 1e-14);
    let a = DenseSymMatrix::from_row_major(1, vec![2.0]);
    let b = DenseSymMatrix::from_row_major(1, vec![4.0]);
    assert!((solve_gevp(&a, &b, 1).unwrap().values[0] - 0.5).abs() < 1e-15);
}

#[test]
fn random_pencil_against_inverse_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_spd(30, &mut rng, 0.5);
    let b = random_spd(30, &mut rng, 30.0);
    let s = solve_gevp(&a, &b, 5).unwrap();
    let oracle = inverse_iteration(&a, &b);
    assert!((s.values[0] - oracle).abs() <= 1e-12 * oracle, "{} vs {oracle}", s.values[0]);
    assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn eigenvector_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_spd(25, &mut rng, 1.0);
    let b = random_spd(25, &mut rng, 25.0);
    let p = solve_gevp_vectors(&a, &b, 6).unwrap();
    let v = p.vectors.unwrap();
    for c in 0..6 {
        let x = v.column(c);
        let ax = a.mul_vec(&x);
        let bx = b.mul_vec(&x);
        let r: f64 = ax.iter().zip(&bx).map(|(u, w)| (u - p.values[c] * w).powi(2)).sum::<f64>().sqrt();
        assert!(r <= 1e-10 * p.values[c].max(1.0));
        assert!((dot(&x, &bx) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn banded_and_dense_agree() {
    let mut a = SymBandedMatrix::zeros(40, 1);
    let mut b = SymBandedMatrix::zeros(40, 2);
    for i in 0..40 {
        a.set(i, i, 2.0 + i as f64);
        b.set(i, i, 1.0);
        if i + 1 < 40 {
            a.set(i, i + 1, -0.5);
            b.set(i, i + 1, 0.1);
        }
        if i + 2 < 40 {
            b.set(i, i + 2, -0.05);
        }
    }
    let s1 = solve_gevp(&a, &b, 10).unwrap();
    let s2 = solve_gevp(&a.to_dense(), &b.to_dense(), 10).unwrap();
    for (x, y) in s1.values.iter().zip(&s2.values) {
        assert!((x - y).abs() < 1e-13 * x);
    }
    assert_eq!(SymBandedMatrix::from_dense(&b.to_dense(), 2), b);
}

#[test]
fn solver_errors() {
    let i2 = DenseSymMatrix::identity(2);
    assert!(matches!(solve_gevp(&i2, &DenseSymMatrix::identity(3), 1), Err(EigError::OrderMismatch(..))));
    assert!(matches!(solve_gevp(&i2, &i2, 3), Err(EigError::TooMany { .. })));
    let singular = DenseSymMatrix::from_row_major(2, vec![1.0, 1.0, 1.0, 1.0]);
    let neg = DenseSymMatrix::from_row_major(2, vec![-1.0, 0.0, 0.0, 1.0]);
    assert!(matches!(solve_gevp(&neg, &singular, 1), Err(EigError::NotPositiveDefinite { .. })));
    assert!(matches!(nullspace(&DenseMatrix::zeros(1, 2), 0.0), Err(EigError::InvalidTolerance(_))));
}

#[test]
fn nullspace_examples() {
    let c = DenseMatrix::from_rows(&[vec![1.0, -1.0]]);
    let z = nullspace(&c, DEFAULT_NULL_TOL).unwrap();
    assert_eq!((z.rows, z.cols), (2, 1));
    let h = 0.5f64.sqrt();
    assert!((z.get(0, 0).abs() - h).abs() < 1e-15 && (z.get(0, 0) - z.get(1, 0)).abs() < 1e-15);

    let c = DenseMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]]);
    assert_eq!(constraint_rank(&c).unwrap(), 1);
    let z = nullspace(&c, DEFAULT_NULL_TOL).unwrap();
    assert_eq!(z.cols, 2);
    for j in 0..2 {
        assert!(z.get(0, j).abs() < 1e-15);
    }

    let empty = DenseMatrix::zeros(0, 4);
    let z = nullspace(&empty, DEFAULT_NULL_TOL).unwrap();
    assert_eq!((z.rows, z.cols), (4, 4));
    assert_eq!(constraint_rank(&empty).unwrap(), 0);
}

#[test]
fn constrained_examples() {
    let a = DenseSymMatrix::from_row_major(3, vec![1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
    let b = DenseSymMatrix::identity(3);
    let c = DenseMatrix::from_rows(&[vec![0.0, 0.0, 1.0]]);
    let s = reduce_constrained_gevp(&a, &b, &c, 2).unwrap();
    assert!((s.values[0] - 1.0).abs() < 1e-14 && (s.values[1] - 2.0).abs() < 1e-14);
    let s = reduce_constrained_gevp(&a, &b, &DenseMatrix::zeros(0, 3), 3).unwrap();
    let u = solve_gevp(&a, &b, 3).unwrap();
    assert_eq!(s.values.len(), 3);
    for (x, y) in s.values.iter().zip(&u.values) {
        assert!((x - y).abs() < 1e-14);
    }
}

/// Quadratic Lagrange element matrices on a unit interval, nodes 0, 1/2, 1.
fn p2_element() -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let k = [[7.0, -8.0, 1.0], [-8.0, 16.0, -8.0], [1.0, -8.0, 7.0]].map(|r| r.map(|v| v / 3.0));
    let m = [[4.0, 2.0, -1.0], [2.0, 16.0, 2.0], [-1.0, 2.0, 4.0]].map(|r| r.map(|v| v / 30.0));
    (k, m)
}

#[test]
fn two_element_mortar_matches_conforming_assembly() {
    // -u'' = λu on (0, 2), u(0) = u(2) = 0, two quadratic elements.
    let (ke, me) = p2_element();
    // Broken space: element 1 keeps nodes 1/2, 1; element 2 keeps 1, 3/2.
    let mut ab = DenseSymMatrix::zeros(4);
    let mut bb = DenseSymMatrix::zeros(4);
    let maps: [[Option<usize>; 3]; 2] = [[None, Some(0), Some(1)], [Some(2), Some(3), None]];
    // Conforming space: nodes 1/2, 1, 3/2. `add` fills both triangles.
    let mut ac = DenseSymMatrix::zeros(3);
    let mut bc = DenseSymMatrix::zeros(3);
    let shared: [[Option<usize>; 3]; 2] = [[None, Some(0), Some(1)], [Some(1), Some(2), None]];
    for e in 0..2 {
        for i in 0..3 {
            // local numbering is increasing, so j >= i visits the upper triangle
            for j in i..3 {
                if let (Some(p), Some(q)) = (maps[e][i], maps[e][j]) {
                    ab.add(p, q, ke[i][j]);
                    bb.add(p, q, me[i][j]);
                }
                if let (Some(p), Some(q)) = (shared[e][i], shared[e][j]) {
                    ac.add(p, q, ke[i][j]);
                    bc.add(p, q, me[i][j]);
                }
            }
        }
    }
    let c = DenseMatrix::from_rows(&[vec![0.0, 1.0, -1.0, 0.0]]);
    let s = reduce_constrained_gevp(&ab, &bb, &c, 3).unwrap();
    let r = solve_gevp(&ac, &bc, 3).unwrap();
    for (x, y) in s.values.iter().zip(&r.values) {
        assert!((x - y).abs() <= 1e-12 * y, "{x} vs {y}");
    }
    // The quadratic space is close to (π/2)² for the lowest mode.
    let exact = (std::f64::consts::PI / 2.0).powi(2);
    assert!((r.values[0] - exact).abs() < 0.01 * exact);
}

#[test]
fn spectrum_groups() {
    let s = Spectrum::new(vec![3.0, 1.0, 3.0 * (1.0 + 1e-12), 5.0]);
    assert_eq!(s.values[0], 1.0);
    assert_eq!(s.multiplicities(), vec![1, 2, 2, 1]);
    assert_eq!(s.groups().len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scaling_invariance(seed in 0u64..1000, sa in 0.1f64..10.0, sb in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_spd(12, &mut rng, 1.0);
        let b = random_spd(12, &mut rng, 12.0);
        let base = solve_gevp(&a, &b, 4).unwrap();
        let sa_m = DenseSymMatrix::from_fn(12, |i, j| sa * a.get(i, j));
        let sb_m = DenseSymMatrix::from_fn(12, |i, j| sb * b.get(i, j));
        let scaled = solve_gevp(&sa_m, &sb_m, 4).unwrap();
        for (x, y) in base.values.iter().zip(&scaled.values) {
            prop_assert!((x * sa / sb - y).abs() <= 1e-11 * y.abs());
        }
    }

    #[test]
    fn redundant_rows_do_not_change_the_answer(seed in 0u64..1000, w in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_spd(10, &mut rng, 1.0);
        let b = random_spd(10, &mut rng, 10.0);
        let r0: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r1: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let combo: Vec<f64> = r0.iter().zip(&r1).map(|(x, y)| x + w * y).collect();
        let c = DenseMatrix::from_rows(&[r0.clone(), r1.clone()]);
        let cc = DenseMatrix::from_rows(&[r0, r1, combo]);
        prop_assert_eq!(constraint_rank(&cc).unwrap(), 2);
        let s = reduce_constrained_gevp(&a, &b, &c, 3).unwrap();
        let t = reduce_constrained_gevp(&a, &b, &cc, 3).unwrap();
        for (x, y) in s.values.iter().zip(&t.values) {
            prop_assert!((x - y).abs() <= 1e-11 * x.abs());
        }
        let z = nullspace(&c, DEFAULT_NULL_TOL).unwrap();
        prop_assert!(c.mul(&z).max_abs() < 1e-13);
    }
}
