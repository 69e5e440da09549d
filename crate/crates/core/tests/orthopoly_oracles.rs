use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sobolev_core::orthopoly::*;

fn jp(a: f64, b: f64) -> JacobiParam {
    JacobiParam::new(a, b).unwrap()
}

/// Truncated hypergeometric form of the classic Jacobi polynomial.
fn hypergeometric(a: f64, b: f64, n: usize, z: f64) -> f64 {
    let mut lead = 1.0;
    for i in 1..=n {
        lead *= (a + i as f64) / i as f64;
    }
    let x = (1.0 - z) / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - n as f64) * (kf + n as f64 + a + b + 1.0) / ((kf + a + 1.0) * (kf + 1.0)) * x;
        sum += term;
    }
    lead * sum
}

/// Adaptive Gauss–Legendre: bisect until the 20-point rule agrees on halves.
fn adaptive(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, depth: usize) -> f64 {
    let rule = gauss_rule(QuadKind::Legendre, 20).unwrap();
    let on = |a: f64, b: f64| {
        let (x, w) = rule.mapped(a, b);
        x.iter().zip(&w).map(|(x, w)| w * f(*x)).sum::<f64>()
    };
    let whole = on(lo, hi);
    let mid = 0.5 * (lo + hi);
    let halves = on(lo, mid) + on(mid, hi);
    if (whole - halves).abs() <= tol || depth == 0 {
        halves
    } else {
        adaptive(f, lo, mid, tol / 2.0, depth - 1) + adaptive(f, mid, hi, tol / 2.0, depth - 1)
    }
}

#[test]
fn evaluation_examples() {
    assert!((jacobi_eval(jp(0.0, 0.0), 1, 0.3).unwrap() - 0.3).abs() < 1e-15);
    assert!((jacobi_eval(jp(-1.0, -1.0), 1, 0.7).unwrap() - 0.7).abs() < 1e-15);
    assert!(jacobi_eval(jp(-1.0, 1.0), 3, 1.0).unwrap().abs() < 1e-15);
    let v = jacobi_eval(jp(0.5, 1.25), 4, -0.2).unwrap();
    assert!((v - hypergeometric(0.5, 1.25, 4, -0.2)).abs() < 1e-12);
}

#[test]
fn recurrence_agrees_with_hypergeometric_sum() {
    for &(a, b) in &[(0.0, 0.0), (0.5, 1.25), (2.0, -0.5), (-0.7, 3.0)] {
        for n in 0..=6 {
            for &z in &[-0.9, -0.3, 0.0, 0.41, 0.95] {
                let v = jacobi_eval(jp(a, b), n, z).unwrap();
                assert!((v - hypergeometric(a, b, n, z)).abs() < 1e-12 * (1.0 + v.abs()));
            }
        }
    }
}

#[test]
fn minus_one_product_forms() {
    // J_2^{-1,-1} = (ζ²-1)/4
    for &z in &[-0.8, 0.1, 0.6] {
        let v = jacobi_eval(jp(-1.0, -1.0), 2, z).unwrap();
        assert!((v - (z * z - 1.0) / 4.0).abs() < 1e-15);
        // J_1^{-1,b} = (1+b)(ζ-1)/2
        let w = jacobi_eval(jp(-1.0, 1.5), 1, z).unwrap();
        assert!((w - 2.5 * (z - 1.0) / 2.0).abs() < 1e-15);
    }
}

#[test]
fn norm_examples() {
    assert!((jacobi_norm(jp(0.0, 0.0), 0).unwrap() - 2.0).abs() < 1e-14);
    for n in 1..20 {
        let g = jacobi_norm(jp(0.0, 0.0), n).unwrap();
        assert!((g - 2.0 / (2.0 * n as f64 + 1.0)).abs() < 1e-14);
    }
    let rule = gauss_rule(QuadKind::Legendre, 50).unwrap();
    let q = rule.integrate(|z| (1.0 - z * z) * jacobi_eval(jp(1.0, 1.0), 2, z).unwrap().powi(2));
    assert!((jacobi_norm(jp(1.0, 1.0), 2).unwrap() - q).abs() < 1e-13);
    assert!(matches!(jacobi_norm(jp(-1.0, -1.0), 1), Err(OrthoError::BelowAdmissible { .. })));
    assert!(jacobi_norm(jp(-1.0, -1.0), 2).is_ok());
}

#[test]
fn derivative_examples() {
    assert_eq!(jacobi_derivative(jp(0.0, 0.0), 1, 0.77).unwrap(), 1.0);
    let d = jacobi_derivative(jp(-1.0, 2.0), 3, 0.4).unwrap();
    assert!((d - 2.5 * jacobi_eval(jp(0.0, 3.0), 2, 0.4).unwrap()).abs() < 1e-14);
    let h = 1e-5;
    let p = jp(0.5, 0.5);
    let fd = (jacobi_eval(p, 5, 0.1 + h).unwrap() - jacobi_eval(p, 5, 0.1 - h).unwrap()) / (2.0 * h);
    assert!((jacobi_derivative(p, 5, 0.1).unwrap() - fd).abs() < 1e-7);
    assert!(matches!(jacobi_derivative(jp(-1.0, -1.0), 1, 0.2), Err(OrthoError::ExcludedDerivative { .. })));
}

#[test]
fn connection_examples() {
    assert_eq!(connection_split(jp(-1.0, 1.0), 0).unwrap(), [1.0, 0.0, 0.0]);
    let c = connection_split(jp(-1.0, 2.0), 3).unwrap();
    let want = [6.0 / 9.0, -3.0 * 8.0 / (7.0 * 9.0), -2.0 / 7.0];
    for i in 0..3 {
        assert!((c[i] - want[i]).abs() < 1e-15);
    }
    let b = 0.8;
    let n = 4;
    let c = connection_split(jp(-1.0, b), n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let lhs = (2.0 * n as f64 + b) / (n as f64 + b) * jacobi_eval(jp(-1.0, b), n, z).unwrap();
        let q = jp(0.0, b + 1.0);
        let rhs = c[0] * jacobi_eval(q, n, z).unwrap()
            + c[1] * jacobi_eval(q, n - 1, z).unwrap()
            + c[2] * jacobi_eval(q, n - 2, z).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}

#[test]
fn quadrature_examples() {
    let r = gauss_rule(QuadKind::Legendre, 1).unwrap();
    assert_eq!(r.nodes, vec![0.0]);
    assert!((r.weights[0] - 2.0).abs() < 1e-15);
    let r = gauss_rule(QuadKind::Legendre, 2).unwrap();
    let s = 1.0 / 3f64.sqrt();
    assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
    assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
    let r = gauss_rule(QuadKind::Jacobi { alpha: 0.0, beta: 2.5 }, 12).unwrap();
    let got = r.integrate(|z| z.powi(8));
    let want = adaptive(&|z: f64| (1.0 + z).powf(2.5) * z.powi(8), -1.0, 1.0, 1e-16, 30);
    assert!((got - want).abs() < 1e-13, "{got} vs {want}");
}

#[test]
fn legendre_nodes_are_symmetric() {
    for m in [3, 10, 33, 100] {
        let r = gauss_rule(QuadKind::Legendre, m).unwrap();
        for i in 0..m {
            assert!((r.nodes[i] + r.nodes[m - 1 - i]).abs() < 1e-14);
        }
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.weights.iter().all(|&w| w > 0.0));
    }
}

#[test]
fn extended_precision_legendre_rule() {
    use sobolev_core::real::{Real, DD};
    let (x, w) = gauss_legendre::<DD>(40);
    let s = x.iter().zip(&w).fold(DD::zero(), |s, (x, w)| s + *w * x.powi(60));
    let err = s - DD::c(2.0) / DD::c(61.0);
    assert!(err.f64().abs() < 1e-29);
    // beyond the Golub–Welsch degree cap
    let (x, _) = gauss_legendre::<f64>(600);
    assert_eq!(x.len(), 600);
}

#[test]
fn argument_errors() {
    assert!(matches!(JacobiParam::new(-1.5, 0.0), Err(OrthoError::InvalidParameter(_))));
    assert!(JacobiParam::new(0.0, f64::NAN).is_err());
    assert!(matches!(jacobi_eval(jp(0.0, 0.0), 513, 0.0), Err(OrthoError::DegreeTooLarge { .. })));
    assert!(matches!(gauss_rule(QuadKind::Legendre, 0), Err(OrthoError::NoPoints)));
    assert!(matches!(gauss_rule(QuadKind::Jacobi { alpha: -1.0, beta: 0.0 }, 4), Err(OrthoError::InvalidWeight(..))));
    assert!(connection_split(jp(0.0, 1.0), 2).is_err());
}

fn admissible() -> impl Strategy<Value = f64> {
    prop_oneof![Just(-1.0), -0.99f64..3.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orthogonality(a in -0.99f64..3.0, b in -0.99f64..3.0, m in 0usize..=12, n in 0usize..=12) {
        let rule = gauss_rule(QuadKind::Jacobi { alpha: a, beta: b }, 14).unwrap();
        let p = jp(a, b);
        let s = rule.integrate(|z| jacobi_eval(p, m, z).unwrap() * jacobi_eval(p, n, z).unwrap());
        if m == n {
            let g = jacobi_norm(p, n).unwrap();
            prop_assert!((s - g).abs() <= 1e-11 * g);
        } else {
            prop_assert!(s.abs() <= 1e-11);
        }
    }

    #[test]
    fn reflection_symmetry(a in admissible(), b in admissible(), n in 0usize..=15, z in -1.0f64..1.0) {
        let u = jacobi_eval(jp(a, b), n, z).unwrap();
        let v = jacobi_eval(jp(b, a), n, -z).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((u - sign * v).abs() <= 1e-13 * (1.0 + u.abs()));
    }

    #[test]
    fn endpoint_value(a in -0.99f64..3.0, b in admissible(), n in 0usize..=20) {
        let mut want = 1.0;
        for i in 1..=n {
            want *= (a + i as f64) / i as f64;
        }
        let v = jacobi_eval(jp(a, b), n, 1.0).unwrap();
        prop_assert!((v - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn derivative_vs_differences(a in admissible(), b in -0.99f64..3.0, n in 1usize..=10, z in -0.95f64..0.95) {
        let p = jp(a, b);
        let h = 1e-6;
        let fd = (jacobi_eval(p, n, z + h).unwrap() - jacobi_eval(p, n, z - h).unwrap()) / (2.0 * h);
        let d = jacobi_derivative(p, n, z).unwrap();
        let scale = d.abs().max(jacobi_eval(p, n, z).unwrap().abs()).max(1.0);
        prop_assert!((d - fd).abs() <= 1e-6 * scale, "d = {d}, fd = {fd}");
    }
}
