//! Multiplier identities on an interval, verified on polynomial data.
//!
//! In one dimension the multiplier field x·∇w collapses to x·w′ and the
//! boundary integrals become endpoint evaluations with outward normal
//! ν = -1 at the left end and ν = +1 at the right end. The three residuals
//! here are algebraic identities for any smooth w, so on polynomials —
//! integrated by Gauss rules of sufficient order — they measure only
//! roundoff. Failures indicate implementation bugs, not discretization.

use crate::error::{Error, Result};

/// Real polynomial, ascending coefficients, degree at most 12.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFunction {
    coeffs: Vec<f64>,
}

pub const MAX_DEGREE: usize = 12;

impl PolyFunction {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter(
                "polynomial coefficients must be finite".to_string(),
            ));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::Parameter(format!(
                "degree {} exceeds the supported maximum {}",
                coeffs.len() - 1,
                MAX_DEGREE
            )));
        }
        Ok(PolyFunction { coeffs })
    }

    pub fn zero() -> Self {
        PolyFunction { coeffs: vec![0.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval(&self.coeffs, x)
    }

    pub fn derivative(&self) -> PolyFunction {
        PolyFunction {
            coeffs: derivative(&self.coeffs),
        }
    }
}

fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

fn nth_derivative(c: &[f64], n: usize) -> Vec<f64> {
    let mut out = c.to_vec();
    for _ in 0..n {
        out = derivative(&out);
    }
    out
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn axpy(a: &mut Vec<f64>, alpha: f64, b: &[f64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0.0);
    }
    for (slot, &bk) in a.iter_mut().zip(b.iter()) {
        *slot += alpha * bk;
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence; exact for polynomials of degree ≤ 2n - 1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            if n == 1 {
                p1 = x;
            }
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn_prev = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn_prev) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrates a polynomial (coefficient slice) over [a, b] by a Gauss rule
/// of exactly sufficient order.
fn integrate(c: &[f64], a: f64, b: f64) -> f64 {
    let degree = c.len() - 1;
    let n = degree / 2 + 1;
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * eval(c, mid + half * x);
    }
    acc * half
}

/// Residual together with the natural scale (max |term|) of the identity.
#[derive(Clone, Copy, Debug)]
pub struct IdentityResidual {
    pub residual: f64,
    pub scale: f64,
}

impl IdentityResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual / self.scale
        } else {
            self.residual
        }
    }
}

fn check_interval(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && beta.is_finite()) || beta <= alpha {
        return Err(Error::DegenerateInterval(alpha, beta));
    }
    Ok(())
}

/// Rellich identity for the bilaplacian, n = 1:
///
///   2∫ x w′ w⁗ dx = 3‖w″‖² + [ν s w″(s)²]_∂
///                   + 2[ν (s w′ w‴ − w″ (w′ + s w″))(s)]_∂
///
/// Returns |LHS - RHS| and the max magnitude among the computed terms.
pub fn rellich_residual(w: &PolyFunction, interval: (f64, f64)) -> Result<IdentityResidual> {
    let (alpha, beta) = interval;
    check_interval(alpha, beta)?;
    let c = w.coeffs();
    let w1 = nth_derivative(c, 1);
    let w2 = nth_derivative(c, 2);
    let w3 = nth_derivative(c, 3);
    let w4 = nth_derivative(c, 4);

    // LHS: 2 ∫ x w' w''''
    let mut integrand = mul(&[0.0, 1.0], &mul(&w1, &w4));
    for v in integrand.iter_mut() {
        *v *= 2.0;
    }
    let lhs = integrate(&integrand, alpha, beta);

    // volume term: 3 ∫ (w'')^2
    let mut sq = mul(&w2, &w2);
    for v in sq.iter_mut() {
        *v *= 3.0;
    }
    let volume = integrate(&sq, alpha, beta);

    let mut terms = vec![lhs, volume];
    let mut rhs = volume;
    for (s, nu) in [(alpha, -1.0), (beta, 1.0)] {
        let w1s = eval(&w1, s);
        let w2s = eval(&w2, s);
        let w3s = eval(&w3, s);
        let curvature_flux = nu * s * w2s * w2s;
        let cross = 2.0 * nu * (s * w1s * w3s - w2s * (w1s + s * w2s));
        rhs += curvature_flux + cross;
        terms.push(curvature_flux);
        terms.push(cross);
    }
    let residual = (lhs - rhs).abs();
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    Ok(IdentityResidual { residual, scale })
}

/// Eigenvalue-shifted multiplier identity, n = 1. With z := -w⁗ + λ²w the
/// hypothesis -Δ²w + λ²w = z holds identically and the identity reads
///
///   λ²‖w‖² + 3‖w″‖² + [ν s w″(s)²]_∂
///     = -2∫ x w′ z dx + λ²[ν s w(s)²]_∂
///       - 2[ν (s w′ w‴ − w″ (w′ + s w″))(s)]_∂.
pub fn rellich_shifted_residual(
    w: &PolyFunction,
    lambda: f64,
    interval: (f64, f64),
) -> Result<IdentityResidual> {
    let (alpha, beta) = interval;
    check_interval(alpha, beta)?;
    if !lambda.is_finite() {
        return Err(Error::Parameter(format!(
            "lambda must be finite, got {lambda}"
        )));
    }
    let c = w.coeffs();
    let w1 = nth_derivative(c, 1);
    let w2 = nth_derivative(c, 2);
    let w3 = nth_derivative(c, 3);
    let w4 = nth_derivative(c, 4);
    let l2 = lambda * lambda;

    // z = -w'''' + lambda^2 w
    let mut z: Vec<f64> = w4.iter().map(|v| -v).collect();
    axpy(&mut z, l2, c);

    let mass = l2 * integrate(&mul(c, c), alpha, beta);
    let mut sq2 = mul(&w2, &w2);
    for v in sq2.iter_mut() {
        *v *= 3.0;
    }
    let bending = integrate(&sq2, alpha, beta);

    let mut volume_rhs = mul(&[0.0, 1.0], &mul(&w1, &z));
    for v in volume_rhs.iter_mut() {
        *v *= -2.0;
    }
    let source = integrate(&volume_rhs, alpha, beta);

    let mut lhs = mass + bending;
    let mut rhs = source;
    let mut terms = vec![mass, bending, source];
    for (s, nu) in [(alpha, -1.0), (beta, 1.0)] {
        let ws = eval(c, s);
        let w1s = eval(&w1, s);
        let w2s = eval(&w2, s);
        let w3s = eval(&w3, s);
        let curvature_flux = nu * s * w2s * w2s;
        let displacement_flux = l2 * nu * s * ws * ws;
        let cross = -2.0 * nu * (s * w1s * w3s - w2s * (w1s + s * w2s));
        lhs += curvature_flux;
        rhs += displacement_flux + cross;
        terms.push(curvature_flux);
        terms.push(displacement_flux);
        terms.push(cross);
    }
    let residual = (lhs - rhs).abs();
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    Ok(IdentityResidual { residual, scale })
}

/// Boundary identity at a clamped point: for w with w(s) = w′(s) = 0,
/// ∂ν(x·∇w)(s) = (x·ν)Δw(s), which in 1D reads
/// ν(w′ + s w″)(s) = ν s w″(s).
///
/// `outward` is the outward normal at s, +1.0 or -1.0.
pub fn boundary_identity_residual(
    w: &PolyFunction,
    s: f64,
    outward: f64,
) -> Result<IdentityResidual> {
    if outward != 1.0 && outward != -1.0 {
        return Err(Error::Parameter(format!(
            "outward normal must be +1 or -1, got {outward}"
        )));
    }
    if !s.is_finite() {
        return Err(Error::Parameter(format!(
            "endpoint must be finite, got {s}"
        )));
    }
    let c = w.coeffs();
    let w1 = nth_derivative(c, 1);
    let w2 = nth_derivative(c, 2);
    // evaluation-magnitude scale: sum of |coefficient| * |s|^k for w and w'
    let eval_scale = |coef: &[f64]| -> f64 {
        coef.iter()
            .enumerate()
            .map(|(k, &ck)| ck.abs() * s.abs().powi(k as i32))
            .sum::<f64>()
    };
    let pre_scale = eval_scale(c).max(eval_scale(&w1));
    let tol = 1e-13 * pre_scale;
    let ws = eval(c, s);
    let w1s = eval(&w1, s);
    if ws.abs() > tol || w1s.abs() > tol {
        return Err(Error::PreconditionViolated(format!(
            "w(s) = {ws:.3e}, w'(s) = {w1s:.3e} exceed tolerance {tol:.3e} at s = {s}"
        )));
    }
    let w2s = eval(&w2, s);
    let lhs = outward * (w1s + s * w2s);
    let rhs = outward * s * w2s;
    let residual = (lhs - rhs).abs();
    // both sides can vanish identically (e.g. a triple zero at s), so the
    // roundoff normalizer is the evaluation magnitude, not the term values
    let scale = eval_scale(&w1).max(s.abs() * eval_scale(&w2));
    Ok(IdentityResidual { residual, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SplitMix64;

    // Oracle route: integrate by evaluating the antiderivative at the
    // endpoints, independent of the Gauss rule the module uses.
    fn antiderivative(c: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            out[k + 1] = ck / (k + 1) as f64;
        }
        out
    }

    fn integral_oracle(c: &[f64], a: f64, b: f64) -> f64 {
        let anti = antiderivative(c);
        eval(&anti, b) - eval(&anti, a)
    }

    fn random_poly(rng: &mut SplitMix64, degree: usize) -> PolyFunction {
        PolyFunction::new((0..=degree).map(|_| rng.next_f64()).collect()).unwrap()
    }

    #[test]
    fn gauss_rule_is_exact_for_polynomials() {
        let mut rng = SplitMix64::new(404);
        for degree in [0usize, 3, 7, 12, 20] {
            let c: Vec<f64> = (0..=degree).map(|_| rng.next_f64()).collect();
            let got = integrate(&c, -0.7, 1.9);
            let want = integral_oracle(&c, -0.7, 1.9);
            assert!(
                (got - want).abs() <= 1e-13 * want.abs().max(1.0),
                "degree {degree}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn gauss_nodes_are_symmetric_and_weights_sum_to_two() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for i in 0..n {
                assert!((x[i] + x[n - 1 - i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        assert!(PolyFunction::new(vec![0.0; 14]).is_ok()); // trailing zeros trim
        let mut c = vec![0.0; 14];
        c[13] = 1.0;
        assert!(PolyFunction::new(c).is_err());
    }

    #[test]
    fn rellich_zero_polynomial() {
        let r = rellich_residual(&PolyFunction::zero(), (0.0, 1.0)).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn rellich_on_x_squared() {
        let w = PolyFunction::new(vec![0.0, 0.0, 1.0]).unwrap();
        let r = rellich_residual(&w, (0.0, 1.0)).unwrap();
        assert!(
            r.residual <= 1e-13 * r.scale.max(1.0),
            "residual {}",
            r.residual
        );
        // symbolic oracle: every term by antiderivative evaluation
        // LHS = 2 int x * 2x * 0 = 0; terms: 3*4 = 12, flux at 1: 4,
        // cross at 1: 2*(0 - 2*(2 + 2)) = -16; total RHS = 0
        assert!(r.scale >= 12.0);
    }

    #[test]
    fn rellich_random_polynomials() {
        let mut rng = SplitMix64::new(808);
        for trial in 0..100 {
            let w = random_poly(&mut rng, 8);
            let a = -2.0 + 1.5 * (rng.next_f64() + 1.0); // in (-2, 1)
            let b = a + 0.1 + (rng.next_f64() + 1.0); // above a, below ~3
            let r = rellich_residual(&w, (a, b)).unwrap();
            assert!(
                r.residual <= 1e-12 * r.scale,
                "trial {trial}: residual {:.3e} scale {:.3e}",
                r.residual,
                r.scale
            );
        }
    }

    #[test]
    fn rellich_interval_validation() {
        let w = PolyFunction::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            rellich_residual(&w, (1.0, 1.0)),
            Err(Error::DegenerateInterval(_, _))
        ));
        assert!(matches!(
            rellich_residual(&w, (2.0, 1.0)),
            Err(Error::DegenerateInterval(_, _))
        ));
    }

    #[test]
    fn shifted_zero_and_lambda_zero() {
        let r = rellich_shifted_residual(&PolyFunction::zero(), 3.0, (0.0, 1.0)).unwrap();
        assert_eq!(r.residual, 0.0);
        // lambda = 0 reduces to the plain identity (z = -w'''')
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let w = random_poly(&mut rng, 6);
            let plain = rellich_residual(&w, (0.25, 1.75)).unwrap();
            let shifted = rellich_shifted_residual(&w, 0.0, (0.25, 1.75)).unwrap();
            assert!((plain.residual - shifted.residual).abs() <= 1e-13 * plain.scale.max(1.0));
        }
    }

    #[test]
    fn shifted_random_polynomials() {
        let mut rng = SplitMix64::new(909);
        for lambda in [1.0, 10.0, 100.0] {
            for trial in 0..100 {
                let w = random_poly(&mut rng, 6);
                let r = rellich_shifted_residual(&w, lambda, (-1.3, 0.9)).unwrap();
                assert!(
                    r.residual <= 1e-11 * r.scale,
                    "lambda {lambda} trial {trial}: residual {:.3e} scale {:.3e}",
                    r.residual,
                    r.scale
                );
            }
        }
    }

    #[test]
    fn boundary_identity_clamped_cases() {
        // w = (x - s)^2: w'(s) = 0, both sides equal
        let s = 0.8;
        let w = PolyFunction::new(vec![s * s, -2.0 * s, 1.0]).unwrap();
        let r = boundary_identity_residual(&w, s, 1.0).unwrap();
        assert!(r.residual <= 1e-13 * r.scale.max(1.0));

        // w = (x - s)^3 q(x) for random q
        let mut rng = SplitMix64::new(3030);
        for _ in 0..50 {
            let q = random_poly(&mut rng, 4);
            let cube = mul(&mul(&[-s, 1.0], &[-s, 1.0]), &mul(&[-s, 1.0], q.coeffs()));
            let w = PolyFunction::new(cube).unwrap();
            let r = boundary_identity_residual(&w, s, -1.0).unwrap();
            assert!(
                r.residual <= 1e-13 * r.scale.max(1e-12),
                "residual {}",
                r.residual
            );
        }
    }

    #[test]
    fn boundary_identity_precondition() {
        let w = PolyFunction::new(vec![0.0, 1.0]).unwrap(); // w = x
        assert!(matches!(
            boundary_identity_residual(&w, 0.5, 1.0),
            Err(Error::PreconditionViolated(_))
        ));
        let ok = PolyFunction::new(vec![0.25, -1.0, 1.0]).unwrap(); // (x-1/2)^2
        assert!(matches!(
            boundary_identity_residual(&ok, 0.5, 2.0),
            Err(Error::Parameter(_))
        ));
    }

    // Every term of the identity is quadratic in w, so the natural scale
    // grows by c^2 and the relative residual stays bounded.
    #[test]
    fn scale_covariance() {
        let mut rng = SplitMix64::new(5150);
        let w = random_poly(&mut rng, 8);
        let base = rellich_residual(&w, (0.3, 1.6)).unwrap();
        for c in [10.0, 1000.0] {
            let scaled = PolyFunction::new(w.coeffs().iter().map(|x| c * x).collect()).unwrap();
            let r = rellich_residual(&scaled, (0.3, 1.6)).unwrap();
            assert!(
                (r.scale - c * c * base.scale).abs() <= 1e-12 * r.scale,
                "scale not quadratic: {} vs {}",
                r.scale,
                c * c * base.scale
            );
            assert!(r.relative() <= 1e-11);
        }
    }
}
