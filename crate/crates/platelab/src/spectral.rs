//! Spectrum and resolvent diagnostics for the discrete generator.
//!
//! The eigenvalues of the quadratic pencil λ²M + λρD₀ + K are computed by
//! linearizing to the companion matrix [[-ρM⁻¹D₀, -M⁻¹K], [I, 0]] and running
//! the dense QR solver. Resolvent norms ‖(iλ - 𝒜)⁻¹‖ are measured in the
//! physical energy norm G = blockdiag(K, M) as the reciprocal of the
//! smallest generalized singular value of iλ - 𝒜.

use num_complex::Complex64;

use crate::domain::{Mesh1D, Region};
use crate::error::{Error, Result};
use crate::fem::build_space;
use crate::linalg::{eig_general, smallest_gsv, ComplexMatrix, DenseMatrix, Matrix};
use crate::operator::{EnergyGram, FirstOrderSystem};

/// Scan points at or above this norm are treated as numerically singular.
pub const RESOLVENT_NORM_CAP: f64 = 1e12;

/// One eigenpair of the quadratic pencil.
#[derive(Clone, Debug)]
pub struct PencilMode {
    pub lambda: Complex64,
    /// Displacement part of the eigenvector (length n_dof), unit 2-norm.
    pub shape: Vec<Complex64>,
    /// ‖(λ²M + λρD₀ + K)u‖ / ((|λ|²‖M‖ + ρ|λ|‖D₀‖ + ‖K‖)‖u‖).
    pub residual: f64,
}

/// Spectrum of the discrete generator with location margins.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    /// Modes sorted by (Re λ, Im λ); 2·n_dof entries.
    pub modes: Vec<PencilMode>,
    /// max Re λ.
    pub spectral_abscissa: f64,
    /// min |Re λ|.
    pub imag_axis_margin: f64,
    /// min |λ|.
    pub zero_margin: f64,
    /// max normalized pencil residual over all modes.
    pub residual_bound: f64,
}

impl SpectrumResult {
    pub fn eigenvalues(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.modes.iter().map(|m| m.lambda)
    }

    /// Smallest positive imaginary part; for the undamped pencil this is the
    /// fundamental frequency ω₁.
    pub fn min_positive_imag(&self) -> Option<f64> {
        self.modes
            .iter()
            .filter(|m| m.lambda.im > 0.0)
            .map(|m| m.lambda.im)
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.min(x))))
    }
}

/// Eigenvalues of λ²M + λρD₀ + K via companion linearization.
pub fn spectrum(sys: &FirstOrderSystem) -> Result<SpectrumResult> {
    let n = sys.n_dof();
    if n == 0 {
        return Err(Error::DegenerateSpace);
    }
    let forms = sys.forms();
    let minv_k = sys.mass_cholesky().solve_matrix(&forms.k);
    let minv_d = sys.mass_cholesky().solve_matrix(&forms.d0);
    let rho = sys.rho();
    let companion = DenseMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i < n {
            if j < n {
                -rho * minv_d[(i, j)]
            } else {
                -minv_k[(i, j - n)]
            }
        } else if j == i - n {
            1.0
        } else {
            0.0
        }
    });
    let eig = eig_general(&companion)?;

    let m_scale = forms.m.norm_frobenius();
    let k_scale = forms.k.norm_frobenius();
    let d_scale = forms.d0.norm_frobenius();

    let mut modes: Vec<PencilMode> = Vec::with_capacity(2 * n);
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        // companion state is (λu, u); the lower block is the pencil vector
        let mut shape: Vec<Complex64> = (0..n).map(|i| eig.eigenvectors[(n + i, idx)]).collect();
        let nrm = shape.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 0.0 {
            for z in shape.iter_mut() {
                *z /= nrm;
            }
        }
        let residual = pencil_residual(forms, rho, lambda, &shape)
            / (lambda.norm_sqr() * m_scale + rho * lambda.norm() * d_scale + k_scale);
        modes.push(PencilMode {
            lambda,
            shape,
            residual,
        });
    }
    modes.sort_by(|a, b| {
        a.lambda
            .re
            .partial_cmp(&b.lambda.re)
            .unwrap()
            .then(a.lambda.im.partial_cmp(&b.lambda.im).unwrap())
    });

    let spectral_abscissa = modes.iter().map(|m| m.lambda.re).fold(f64::MIN, f64::max);
    let imag_axis_margin = modes
        .iter()
        .map(|m| m.lambda.re.abs())
        .fold(f64::MAX, f64::min);
    let zero_margin = modes
        .iter()
        .map(|m| m.lambda.norm())
        .fold(f64::MAX, f64::min);
    let residual_bound = modes.iter().map(|m| m.residual).fold(0.0, f64::max);

    Ok(SpectrumResult {
        modes,
        spectral_abscissa,
        imag_axis_margin,
        zero_margin,
        residual_bound,
    })
}

/// ‖(λ²M + λρD₀ + K)u‖₂ for a unit vector u.
fn pencil_residual(
    forms: &crate::fem::AssembledForms,
    rho: f64,
    lambda: Complex64,
    u: &[Complex64],
) -> f64 {
    let n = u.len();
    let mul = |mat: &DenseMatrix, x: &[Complex64]| -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let row = mat.row(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x.iter()) {
                acc += *b * *a;
            }
            y[i] = acc;
        }
        y
    };
    let mu = mul(&forms.m, u);
    let du = mul(&forms.d0, u);
    let ku = mul(&forms.k, u);
    let l2 = lambda * lambda;
    (0..n)
        .map(|i| (l2 * mu[i] + lambda * rho * du[i] + ku[i]).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Builds the complex matrix iλ - 𝒜 in (u, v) block coordinates.
fn shifted_generator(sys: &FirstOrderSystem, lambda: f64) -> ComplexMatrix {
    let a = sys.generator_matrix();
    let n2 = a.rows();
    Matrix::from_fn(n2, n2, |i, j| {
        let shift = if i == j {
            Complex64::new(0.0, lambda)
        } else {
            Complex64::new(0.0, 0.0)
        };
        shift - Complex64::new(a[(i, j)], 0.0)
    })
}

/// ‖(iλ - 𝒜)⁻¹‖ in the energy norm.
///
/// Fails with `SingularMatrix` when iλ is numerically an eigenvalue.
pub fn resolvent_norm(sys: &FirstOrderSystem, gram: &EnergyGram, lambda: f64) -> Result<f64> {
    let c = shifted_generator(sys, lambda);
    let g = gram.to_dense();
    let sigma = smallest_gsv(&c, &g)?;
    Ok(1.0 / sigma)
}

/// Equally spaced scan grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::Parameter(
                "grid needs at least one point".to_string(),
            ));
        }
        if !(self.lambda_min.is_finite() && self.lambda_max.is_finite())
            || self.lambda_min > self.lambda_max
        {
            return Err(Error::Parameter(format!(
                "bad grid range [{}, {}]",
                self.lambda_min, self.lambda_max
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.lambda_min]);
        }
        let step = (self.lambda_max - self.lambda_min) / (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|i| self.lambda_min + step * i as f64)
            .collect())
    }

    pub fn default_scan() -> Self {
        GridSpec {
            lambda_min: -200.0,
            lambda_max: 200.0,
            count: 401,
        }
    }
}

/// Resolvent norms along the imaginary axis.
#[derive(Clone, Debug)]
pub struct ResolventScan {
    pub lambdas: Vec<f64>,
    /// Norm per point; `f64::INFINITY` when the shifted matrix was singular.
    pub norms: Vec<f64>,
    /// Points at or above `RESOLVENT_NORM_CAP` (or singular).
    pub flagged: Vec<usize>,
    /// Supremum over the un-flagged points.
    pub sup_norm: f64,
}

impl ResolventScan {
    pub fn is_clean(&self) -> bool {
        self.flagged.is_empty() && self.sup_norm.is_finite()
    }
}

/// Evaluates the resolvent norm at every grid point, flagging numerically
/// singular points instead of failing.
pub fn scan_imaginary_axis(
    sys: &FirstOrderSystem,
    gram: &EnergyGram,
    points: &[f64],
) -> Result<ResolventScan> {
    if points.is_empty() {
        return Err(Error::Parameter("empty scan grid".to_string()));
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parameter("scan grid must be finite".to_string()));
    }
    let mut norms = Vec::with_capacity(points.len());
    let mut flagged = Vec::new();
    for (i, &lambda) in points.iter().enumerate() {
        match resolvent_norm(sys, gram, lambda) {
            Ok(norm) if norm < RESOLVENT_NORM_CAP => norms.push(norm),
            Ok(norm) => {
                norms.push(norm);
                flagged.push(i);
            }
            Err(Error::SingularMatrix(_)) => {
                norms.push(f64::INFINITY);
                flagged.push(i);
            }
            Err(e) => return Err(e),
        }
    }
    let sup_norm = norms
        .iter()
        .filter(|n| n.is_finite() && **n < RESOLVENT_NORM_CAP)
        .fold(0.0f64, |a, &b| a.max(b));
    Ok(ResolventScan {
        lambdas: points.to_vec(),
        norms,
        flagged,
        sup_norm,
    })
}

/// Fundamental frequency ω₁ of the undamped pencil K x = ω² M x by inverse
/// power iteration (independent of ρ); sets the characteristic period for
/// time-step defaults.
pub fn fundamental_frequency(sys: &FirstOrderSystem) -> Result<f64> {
    let forms = sys.forms();
    let k_chol = crate::linalg::cholesky(&forms.k)?;
    let n = sys.n_dof();
    let mut rng = crate::linalg::SplitMix64::new(0x00e6a1);
    let mut x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
    let mut omega2_prev = f64::INFINITY;
    for _ in 0..200 {
        let mx = forms.m.mul_vec(&x);
        let y = k_chol.solve(&mx);
        let nrm = crate::linalg::norm2_real(&y);
        x = y.iter().map(|v| v / nrm).collect();
        let kx = forms.k.mul_vec(&x);
        let mx = forms.m.mul_vec(&x);
        let omega2 = crate::linalg::dot_real(&x, &kx) / crate::linalg::dot_real(&x, &mx);
        if (omega2 - omega2_prev).abs() <= 1e-13 * omega2 {
            return Ok(omega2.sqrt());
        }
        omega2_prev = omega2;
    }
    Ok(omega2_prev.sqrt())
}

/// Sector and analyticity diagnostics of the whole-domain damped operator.
#[derive(Clone, Debug)]
pub struct SectorReport {
    pub spectrum: SpectrumResult,
    /// Largest φ such that every eigenvalue sits at angle ≥ φ from the
    /// imaginary axis.
    pub max_aperture: f64,
    /// Whether `max_aperture` meets the requested aperture.
    pub aperture_ok: bool,
    /// sup over the grid of ‖λ(iλ - A)⁻¹‖_G, the analyticity proxy.
    pub lambda_resolvent_sup: f64,
    pub flagged_points: usize,
}

/// Checks the structurally damped operator on all of Ω (no undamped region):
/// spectrum in a sector of the left half-plane and boundedness of
/// ‖λ(iλ - A)⁻¹‖ along the imaginary axis.
pub fn sector_check_whole_domain(
    length: f64,
    n_elements: usize,
    rho: f64,
    aperture: f64,
    grid: &GridSpec,
) -> Result<SectorReport> {
    let mesh = Mesh1D::uniform(length, n_elements, Region::Damped)?;
    let space = build_space(mesh)?;
    let sys = FirstOrderSystem::from_space(space, rho)?;
    let gram = sys.energy_gram();

    let spec = spectrum(&sys)?;
    let max_aperture = spec
        .modes
        .iter()
        .map(|m| m.lambda.re.abs().atan2(m.lambda.im.abs()))
        .fold(std::f64::consts::FRAC_PI_2, f64::min);
    let aperture_ok = max_aperture + 1e-9 >= aperture;

    let points = grid.points()?;
    let scan = scan_imaginary_axis(&sys, &gram, &points)?;
    let lambda_resolvent_sup = scan
        .lambdas
        .iter()
        .zip(&scan.norms)
        .filter(|(_, n)| n.is_finite() && **n < RESOLVENT_NORM_CAP)
        .map(|(l, n)| l.abs() * n)
        .fold(0.0f64, f64::max);

    Ok(SectorReport {
        spectrum: spec,
        max_aperture,
        aperture_ok,
        lambda_resolvent_sup,
        flagged_points: scan.flagged.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainConfig;
    use crate::linalg::smallest_gsv_seeded;
    use crate::linalg::SplitMix64;

    fn system(rho: f64, counts: [usize; 3]) -> FirstOrderSystem {
        FirstOrderSystem::from_config(&DomainConfig {
            rho,
            elements_per_region: counts,
            ..DomainConfig::default()
        })
        .unwrap()
    }

    fn undamped_beam(n_elements: usize) -> FirstOrderSystem {
        let mesh = Mesh1D::uniform(1.0, n_elements, Region::Undamped).unwrap();
        FirstOrderSystem::from_space(build_space(mesh).unwrap(), 0.0).unwrap()
    }

    // Bisection oracle for the clamped-beam frequency equation
    // cos(mu) cosh(mu) = 1 on [4, 5].
    pub(crate) fn clamped_beam_mu1() -> f64 {
        let f = |mu: f64| mu.cos() * mu.cosh() - 1.0;
        let (mut lo, mut hi) = (4.0f64, 5.0f64);
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn undamped_spectrum_is_imaginary_pairs_near_beam_frequencies() {
        let sys = undamped_beam(16);
        let spec = spectrum(&sys).unwrap();
        assert_eq!(spec.modes.len(), 2 * sys.n_dof());
        // all eigenvalues on the imaginary axis (up to roundoff)
        let scale = spec
            .modes
            .iter()
            .map(|m| m.lambda.norm())
            .fold(0.0, f64::max);
        for m in &spec.modes {
            assert!(m.lambda.re.abs() <= 1e-8 * scale, "Re = {}", m.lambda.re);
        }
        let omega1 = spec.min_positive_imag().unwrap();
        let mu1 = clamped_beam_mu1();
        let exact = mu1 * mu1;
        assert!(
            (omega1 - exact).abs() <= 1e-5 * exact,
            "omega1 = {omega1}, exact = {exact}"
        );
        assert!(spec.zero_margin > 1.0);
        assert!(spec.residual_bound <= 1e-8);
    }

    #[test]
    fn damped_spectrum_location() {
        let sys = system(1.0, [6, 6, 6]);
        let spec = spectrum(&sys).unwrap();
        assert!(spec.spectral_abscissa < 0.0);
        assert!(spec.imag_axis_margin > 0.0);
        assert!(spec.zero_margin > 0.0);
        assert!(spec.residual_bound <= 1e-8);
        // closed under conjugation
        for m in &spec.modes {
            if m.lambda.im != 0.0 {
                assert!(spec
                    .modes
                    .iter()
                    .any(|w| w.lambda.re == m.lambda.re && w.lambda.im == -m.lambda.im));
            }
        }
    }

    #[test]
    fn resolvent_far_from_normal_spectrum_matches_distance() {
        let sys = undamped_beam(10);
        let gram = sys.energy_gram();
        let spec = spectrum(&sys).unwrap();
        // the undamped generator is G-skew-adjoint, hence G-normal: the
        // resolvent norm equals 1/dist(i*lambda, spectrum)
        for lambda in [5.0, 40.0, 250.0] {
            let norm = resolvent_norm(&sys, &gram, lambda).unwrap();
            let dist = spec
                .modes
                .iter()
                .map(|m| (Complex64::new(0.0, lambda) - m.lambda).norm())
                .fold(f64::MAX, f64::min);
            let product = norm * dist;
            assert!(
                (0.99..=1.01).contains(&product),
                "lambda = {lambda}: norm*dist = {product}"
            );
        }
    }

    #[test]
    fn resolvent_at_zero_is_finite() {
        let sys = system(1.0, [4, 4, 4]);
        let gram = sys.energy_gram();
        let norm = resolvent_norm(&sys, &gram, 0.0).unwrap();
        assert!(norm.is_finite() && norm > 0.0);
    }

    // The scan value is invariant under a congruence change of state basis:
    // A' = S^-1 A S, G' = S^T G S.
    #[test]
    fn resolvent_norm_is_basis_invariant() {
        let sys = system(1.0, [2, 2, 2]);
        let gram = sys.energy_gram();
        let lambda = 17.0;
        let direct = resolvent_norm(&sys, &gram, lambda).unwrap();

        let a = sys.generator_matrix();
        let g = gram.to_dense();
        let n2 = a.rows();
        let mut rng = SplitMix64::new(31);
        // well-conditioned random transform: identity plus small perturbation
        let s = DenseMatrix::from_fn(n2, n2, |i, j| {
            if i == j {
                1.0 + 0.1 * rng.next_f64()
            } else {
                0.1 * rng.next_f64() / n2 as f64
            }
        });
        let s_lu = crate::linalg::lu_factor(&s).unwrap();
        // A' = S^-1 A S
        let as_ = a.mul_mat(&s);
        let mut a_prime = DenseMatrix::zeros(n2, n2);
        let mut col = vec![0.0; n2];
        for j in 0..n2 {
            for i in 0..n2 {
                col[i] = as_[(i, j)];
            }
            let x = s_lu.solve(&col);
            for i in 0..n2 {
                a_prime[(i, j)] = x[i];
            }
        }
        let g_prime = s.transpose().mul_mat(&g).mul_mat(&s);
        // symmetrize roundoff
        let g_prime =
            DenseMatrix::from_fn(n2, n2, |i, j| 0.5 * (g_prime[(i, j)] + g_prime[(j, i)]));
        let c_prime = Matrix::from_fn(n2, n2, |i, j| {
            let shift = if i == j {
                Complex64::new(0.0, lambda)
            } else {
                Complex64::new(0.0, 0.0)
            };
            shift - Complex64::new(a_prime[(i, j)], 0.0)
        });
        let sigma = smallest_gsv_seeded(&c_prime, &g_prime, 999).unwrap();
        let transformed = 1.0 / sigma;
        assert!(
            (direct - transformed).abs() <= 2e-5 * direct,
            "direct {direct:.8e} vs transformed {transformed:.8e}"
        );
    }

    #[test]
    fn scan_flags_eigenfrequencies_of_undamped_system() {
        let sys = undamped_beam(8);
        let gram = sys.energy_gram();
        let spec = spectrum(&sys).unwrap();
        let omega1 = spec.min_positive_imag().unwrap();
        let scan = scan_imaginary_axis(&sys, &gram, &[0.0, omega1, 2.0 * omega1]).unwrap();
        assert!(!scan.flagged.is_empty(), "eigenfrequency not flagged");
        assert!(scan.flagged.contains(&1));
        assert!(!scan.is_clean());
    }

    #[test]
    fn scan_clean_for_damped_system() {
        let sys = system(1.0, [3, 3, 3]);
        let gram = sys.energy_gram();
        let points = GridSpec {
            lambda_min: -50.0,
            lambda_max: 50.0,
            count: 21,
        }
        .points()
        .unwrap();
        let scan = scan_imaginary_axis(&sys, &gram, &points).unwrap();
        assert!(scan.is_clean());
        assert!(scan.sup_norm.is_finite() && scan.sup_norm > 0.0);
        assert_eq!(scan.norms.len(), 21);
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec {
            lambda_min: 0.0,
            lambda_max: 1.0,
            count: 0
        }
        .points()
        .is_err());
        let pts = GridSpec::default_scan().points().unwrap();
        assert_eq!(pts.len(), 401);
        assert_eq!(pts[0], -200.0);
        assert_eq!(pts[400], 200.0);
        assert_eq!(pts[200], 0.0);
    }

    #[test]
    fn sector_check_damped_vs_undamped() {
        let grid = GridSpec {
            lambda_min: -60.0,
            lambda_max: 60.0,
            count: 25,
        };
        let damped = sector_check_whole_domain(1.0, 12, 1.0, 0.05, &grid).unwrap();
        assert!(damped.spectrum.spectral_abscissa < 0.0);
        assert!(damped.max_aperture > 0.0);
        assert!(damped.aperture_ok);
        assert!(damped.lambda_resolvent_sup.is_finite());
        assert_eq!(damped.flagged_points, 0);

        // rho = 0: spectrum on the imaginary axis, aperture collapses
        let undamped = sector_check_whole_domain(1.0, 12, 0.0, 0.05, &grid).unwrap();
        assert!(undamped.max_aperture < 1e-6);
        assert!(!undamped.aperture_ok);
    }

    #[test]
    fn overdamped_whole_domain_has_wide_aperture() {
        let grid = GridSpec {
            lambda_min: -10.0,
            lambda_max: 10.0,
            count: 5,
        };
        let report = sector_check_whole_domain(1.0, 8, 10.0, 0.05, &grid).unwrap();
        // strong damping pushes modes toward the real axis; the sector
        // aperture approaches pi/2
        assert!(
            report.max_aperture > 1.0,
            "aperture = {}",
            report.max_aperture
        );
        assert!(report.spectrum.spectral_abscissa < 0.0);
    }

    #[test]
    fn fundamental_frequency_matches_spectrum() {
        let sys = undamped_beam(12);
        let omega1 = fundamental_frequency(&sys).unwrap();
        let spec = spectrum(&sys).unwrap();
        let from_spectrum = spec.min_positive_imag().unwrap();
        assert!(
            (omega1 - from_spectrum).abs() <= 1e-8 * from_spectrum,
            "{omega1} vs {from_spectrum}"
        );
        // frequency does not depend on rho
        let damped = system(5.0, [4, 4, 4]);
        let undamped = system(0.0, [4, 4, 4]);
        let f1 = fundamental_frequency(&damped).unwrap();
        let f2 = fundamental_frequency(&undamped).unwrap();
        assert_eq!(f1, f2);
    }

    #[test]
    fn ghost_check_no_purely_interior_neutral_modes() {
        let sys = system(1.0, [4, 4, 4]);
        let spec = spectrum(&sys).unwrap();
        let space = sys.space();
        let scale = spec
            .modes
            .iter()
            .map(|m| m.lambda.norm())
            .fold(0.0, f64::max);
        for m in &spec.modes {
            if m.lambda.re.abs() < 1e-8 * scale {
                // fraction of the mode living on damped-region DOFs
                let mut inside = 0.0f64;
                let mut total = 0.0f64;
                let mesh = space.mesh();
                for node in 0..mesh.n_nodes() {
                    let dofs = space.node_dofs(node);
                    let x = mesh.nodes()[node];
                    let in_omega2 = x > 0.3 && x < 0.7;
                    for d in [dofs.value, dofs.slope].into_iter().flatten() {
                        let w = m.shape[d].norm_sqr();
                        total += w;
                        if !in_omega2 {
                            inside += w;
                        }
                    }
                }
                assert!(
                    inside / total > 1e-6,
                    "near-neutral mode concentrated in the undamped region"
                );
            }
        }
    }
}
