//! The discrete first-order generator and its energy geometry.
//!
//! State (u, v) evolves by u̇ = v, M v̇ = -K u - ρ D₀ v. The energy inner
//! product is the block-diagonal Gram G = diag(K, M); in that geometry the
//! generator satisfies ⟨𝒜U, U⟩_G = -ρ vᵀD₀v, so it is dissipative for ρ ≥ 0
//! and exactly skew for ρ = 0. Two coercive solves witness that 1 - 𝒜 is
//! onto and that 𝒜 is invertible.

use crate::domain::{build_mesh, DomainConfig};
use crate::error::{Error, Result};
use crate::fem::{assemble, build_space, AssembledForms, HermiteSpace};
use crate::linalg::{cholesky, CholeskyFactor, DenseMatrix};

/// Discrete state (u, v) with u the displacement and v the velocity
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl StateVector {
    pub fn zeros(n: usize) -> Self {
        StateVector {
            u: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn axpy(&self, alpha: f64, other: &StateVector) -> StateVector {
        StateVector {
            u: self
                .u
                .iter()
                .zip(&other.u)
                .map(|(a, b)| a + alpha * b)
                .collect(),
            v: self
                .v
                .iter()
                .zip(&other.v)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn scale(&self, alpha: f64) -> StateVector {
        StateVector {
            u: self.u.iter().map(|a| a * alpha).collect(),
            v: self.v.iter().map(|a| a * alpha).collect(),
        }
    }
}

/// Energy Gram matrix G = blockdiag(K, M).
pub struct EnergyGram {
    k: DenseMatrix,
    m: DenseMatrix,
}

impl EnergyGram {
    pub fn inner(&self, a: &StateVector, b: &StateVector) -> f64 {
        let ku = self.k.mul_vec(&b.u);
        let mv = self.m.mul_vec(&b.v);
        let part_u: f64 = a.u.iter().zip(&ku).map(|(x, y)| x * y).sum();
        let part_v: f64 = a.v.iter().zip(&mv).map(|(x, y)| x * y).sum();
        part_u + part_v
    }

    pub fn norm(&self, a: &StateVector) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }

    /// E(U) = ½(uᵀKu + vᵀMv) = ½‖U‖²_G.
    pub fn energy(&self, a: &StateVector) -> f64 {
        0.5 * self.inner(a, a)
    }

    pub fn k(&self) -> &DenseMatrix {
        &self.k
    }

    pub fn m(&self) -> &DenseMatrix {
        &self.m
    }

    /// Dense 2n x 2n block-diagonal representation.
    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.k.rows();
        let mut g = DenseMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.k[(i, j)];
                g[(n + i, n + j)] = self.m[(i, j)];
            }
        }
        g
    }
}

/// The assembled first-order system with cached factorizations.
pub struct FirstOrderSystem {
    space: HermiteSpace,
    forms: AssembledForms,
    rho: f64,
    m_chol: CholeskyFactor,
}

impl FirstOrderSystem {
    /// Builds space, forms, and mass factorization for a validated config.
    pub fn from_config(config: &DomainConfig) -> Result<Self> {
        let space = build_space(build_mesh(config)?)?;
        Self::from_space(space, config.rho)
    }

    pub fn from_space(space: HermiteSpace, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::Parameter(format!(
                "damping factor must be non-negative, got {rho}"
            )));
        }
        let forms = assemble(&space)?;
        let m_chol = cholesky(&forms.m)?;
        Ok(FirstOrderSystem {
            space,
            forms,
            rho,
            m_chol,
        })
    }

    pub fn space(&self) -> &HermiteSpace {
        &self.space
    }

    pub fn forms(&self) -> &AssembledForms {
        &self.forms
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n_dof(&self) -> usize {
        self.space.n_dof()
    }

    pub fn mass_cholesky(&self) -> &CholeskyFactor {
        &self.m_chol
    }

    pub fn energy_gram(&self) -> EnergyGram {
        EnergyGram {
            k: self.forms.k.clone(),
            m: self.forms.m.clone(),
        }
    }

    /// 𝒜U = (v, M⁻¹(-K u - ρ D₀ v)).
    pub fn apply_generator(&self, state: &StateVector) -> StateVector {
        assert_eq!(state.dim(), self.n_dof(), "state dimension mismatch");
        let ku = self.forms.k.mul_vec(&state.u);
        let dv = self.forms.d0.mul_vec(&state.v);
        let rhs: Vec<f64> = ku
            .iter()
            .zip(&dv)
            .map(|(a, b)| -(a + self.rho * b))
            .collect();
        StateVector {
            u: state.v.clone(),
            v: self.m_chol.solve(&rhs),
        }
    }

    /// Dense 2n x 2n generator [[0, I], [-M⁻¹K, -ρM⁻¹D₀]].
    pub fn generator_matrix(&self) -> DenseMatrix {
        let n = self.n_dof();
        let minv_k = self.m_chol.solve_matrix(&self.forms.k);
        let minv_d = self.m_chol.solve_matrix(&self.forms.d0);
        let mut a = DenseMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            a[(i, n + i)] = 1.0;
            for j in 0..n {
                a[(n + i, j)] = -minv_k[(i, j)];
                a[(n + i, n + j)] = -self.rho * minv_d[(i, j)];
            }
        }
        a
    }
}

/// A solve together with its measured relative residual in the G-norm.
pub struct VerifiedSolve {
    pub state: StateVector,
    pub residual: f64,
}

/// Solves (1 - 𝒜)U = F via the coercive form (M + K + ρD₀)u = M(g+f) + ρD₀f,
/// v = u - f, and measures ‖(1-𝒜)U - F‖_G / ‖F‖_G.
pub fn lax_milgram_solve_shifted(sys: &FirstOrderSystem, f: &StateVector) -> Result<VerifiedSolve> {
    let n = sys.n_dof();
    if f.dim() != n {
        return Err(Error::Parameter("rhs dimension mismatch".to_string()));
    }
    let forms = sys.forms();
    let mut s = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = forms.m[(i, j)] + forms.k[(i, j)] + sys.rho() * forms.d0[(i, j)];
        }
    }
    let s_chol = cholesky(&s).map_err(|e| match e {
        Error::NotPositiveDefinite { pivot, .. } => Error::SingularMatrix(format!(
            "shifted Lax-Milgram matrix lost definiteness (pivot {pivot:.3e})"
        )),
        other => other,
    })?;
    let gf: Vec<f64> = f.u.iter().zip(&f.v).map(|(fu, gv)| fu + gv).collect();
    let mgf = forms.m.mul_vec(&gf);
    let df = forms.d0.mul_vec(&f.u);
    let rhs: Vec<f64> = mgf
        .iter()
        .zip(&df)
        .map(|(a, b)| a + sys.rho() * b)
        .collect();
    let u = s_chol.solve(&rhs);
    let v: Vec<f64> = u.iter().zip(&f.u).map(|(a, b)| a - b).collect();
    let state = StateVector { u, v };

    // verify (1 - A)U = F in the energy norm
    let gram = sys.energy_gram();
    let au = sys.apply_generator(&state);
    let one_minus_a = state.axpy(-1.0, &au);
    let diff = one_minus_a.axpy(-1.0, f);
    let fnorm = gram.norm(f);
    let residual = if fnorm > 0.0 {
        gram.norm(&diff) / fnorm
    } else {
        gram.norm(&diff)
    };
    Ok(VerifiedSolve { state, residual })
}

/// Solves -𝒜U = F via K u = M g + ρ D₀ f, v = -f, and measures
/// ‖-𝒜U - F‖_G / ‖F‖_G.
pub fn solve_inverse(sys: &FirstOrderSystem, f: &StateVector) -> Result<VerifiedSolve> {
    let n = sys.n_dof();
    if f.dim() != n {
        return Err(Error::Parameter("rhs dimension mismatch".to_string()));
    }
    let forms = sys.forms();
    let k_chol = cholesky(&forms.k).map_err(|e| match e {
        Error::NotPositiveDefinite { pivot, .. } => Error::SingularMatrix(format!(
            "bending form lost definiteness (pivot {pivot:.3e})"
        )),
        other => other,
    })?;
    let mg = forms.m.mul_vec(&f.v);
    let df = forms.d0.mul_vec(&f.u);
    let rhs: Vec<f64> = mg.iter().zip(&df).map(|(a, b)| a + sys.rho() * b).collect();
    let u = k_chol.solve(&rhs);
    let v: Vec<f64> = f.u.iter().map(|x| -x).collect();
    let state = StateVector { u, v };

    let gram = sys.energy_gram();
    let au = sys.apply_generator(&state);
    let minus_au = au.scale(-1.0);
    let diff = minus_au.axpy(-1.0, f);
    let fnorm = gram.norm(f);
    let residual = if fnorm > 0.0 {
        gram.norm(&diff) / fnorm
    } else {
        gram.norm(&diff)
    };
    Ok(VerifiedSolve { state, residual })
}
