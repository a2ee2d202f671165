//! Global C¹ cubic-Hermite finite-element space on the transmission mesh.
//!
//! Every node carries a value DOF and a slope DOF shared by the adjacent
//! elements, so the represented functions are C¹ across all nodes; the
//! order-0/1 interface conditions at a and b hold strongly by conformity.
//! The two boundary nodes are clamped by DOF elimination (value and slope
//! both removed), which realizes the discrete H²₀ space. The order-2/3
//! interface conditions are satisfied variationally through the assembled
//! forms and are never imposed.

use crate::domain::{Mesh1D, Region};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// DOF indices of one node; `None` means eliminated (clamped).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeDofs {
    pub value: Option<usize>,
    pub slope: Option<usize>,
}

/// The discrete H²₀ space: mesh plus the node-major DOF numbering.
#[derive(Clone, Debug)]
pub struct HermiteSpace {
    mesh: Mesh1D,
    n_dof: usize,
    dof_map: Vec<NodeDofs>,
}

/// Assembled mass, bending, and restricted-gradient forms.
///
/// `m` is ⟨u, φ⟩ over Ω, `k` is ⟨u″, φ″⟩ over Ω, `d0` is ⟨u′, φ′⟩ restricted
/// to the damped region; all are over the free DOFs only.
#[derive(Clone, Debug)]
pub struct AssembledForms {
    pub m: DenseMatrix,
    pub k: DenseMatrix,
    pub d0: DenseMatrix,
}

/// Lays out the free DOFs node-major (value before slope), clamping both
/// DOFs of the two boundary nodes.
pub fn build_space(mesh: Mesh1D) -> Result<HermiteSpace> {
    let n_nodes = mesh.n_nodes();
    let mut dof_map = Vec::with_capacity(n_nodes);
    let mut next = 0usize;
    for i in 0..n_nodes {
        if i == 0 || i == n_nodes - 1 {
            dof_map.push(NodeDofs {
                value: None,
                slope: None,
            });
        } else {
            dof_map.push(NodeDofs {
                value: Some(next),
                slope: Some(next + 1),
            });
            next += 2;
        }
    }
    if next == 0 {
        return Err(Error::DegenerateSpace);
    }
    Ok(HermiteSpace {
        mesh,
        n_dof: next,
        dof_map,
    })
}

impl HermiteSpace {
    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn node_dofs(&self, node: usize) -> NodeDofs {
        self.dof_map[node]
    }

    /// Global DOF indices of an element in local order
    /// (value_left, slope_left, value_right, slope_right).
    pub fn element_dofs(&self, e: usize) -> [Option<usize>; 4] {
        let l = self.dof_map[e];
        let r = self.dof_map[e + 1];
        [l.value, l.slope, r.value, r.slope]
    }

    /// Local coefficients of an element, zeros where clamped.
    pub fn element_coeffs(&self, coeffs: &[f64], e: usize) -> [f64; 4] {
        let dofs = self.element_dofs(e);
        let mut out = [0.0; 4];
        for (slot, dof) in out.iter_mut().zip(dofs) {
            if let Some(idx) = dof {
                *slot = coeffs[idx];
            }
        }
        out
    }

    /// Evaluates (u, u', u'') at `x` inside element `e`.
    pub fn evaluate_in_element(&self, coeffs: &[f64], e: usize, x: f64) -> (f64, f64, f64) {
        let (xl, xr) = self.mesh.element_bounds(e);
        let h = xr - xl;
        let xi = (x - xl) / h;
        let c = self.element_coeffs(coeffs, e);
        let shapes = hermite_shapes(xi, h);
        let mut out = (0.0, 0.0, 0.0);
        for (i, s) in shapes.iter().enumerate() {
            out.0 += c[i] * s.0;
            out.1 += c[i] * s.1;
            out.2 += c[i] * s.2;
        }
        out
    }

    /// Evaluates (u, u', u'') at x, using the element whose closed-left
    /// interval contains x.
    pub fn evaluate(&self, coeffs: &[f64], x: f64) -> (f64, f64, f64) {
        let nodes = self.mesh.nodes();
        let e = match nodes.binary_search_by(|n| n.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.mesh.n_elements() - 1),
            Err(i) => i.saturating_sub(1).min(self.mesh.n_elements() - 1),
        };
        self.evaluate_in_element(coeffs, e, x)
    }
}

/// Value, first, and second derivative of the four Hermite shape functions
/// at local coordinate ξ ∈ [0, 1] on an element of length h.
fn hermite_shapes(xi: f64, h: f64) -> [(f64, f64, f64); 4] {
    let xi2 = xi * xi;
    let xi3 = xi2 * xi;
    [
        (
            1.0 - 3.0 * xi2 + 2.0 * xi3,
            (-6.0 * xi + 6.0 * xi2) / h,
            (-6.0 + 12.0 * xi) / (h * h),
        ),
        (
            h * (xi - 2.0 * xi2 + xi3),
            1.0 - 4.0 * xi + 3.0 * xi2,
            (-4.0 + 6.0 * xi) / h,
        ),
        (
            3.0 * xi2 - 2.0 * xi3,
            (6.0 * xi - 6.0 * xi2) / h,
            (6.0 - 12.0 * xi) / (h * h),
        ),
        (
            h * (-xi2 + xi3),
            -2.0 * xi + 3.0 * xi2,
            (-2.0 + 6.0 * xi) / h,
        ),
    ]
}

/// Exact element matrices of the cubic Hermite element of length h:
/// mass ∫φᵢφⱼ, bending ∫φᵢ″φⱼ″, and gradient ∫φᵢ′φⱼ′ (zero when the element
/// is undamped). Closed forms, so quadrature error never enters the
/// assembled operators.
#[allow(clippy::type_complexity)]
pub fn local_matrices(
    h: f64,
    region: Region,
) -> Result<([[f64; 4]; 4], [[f64; 4]; 4], [[f64; 4]; 4])> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Parameter(format!(
            "element length must be positive, got {h}"
        )));
    }
    let h2 = h * h;
    let h3 = h2 * h;

    let m = [
        [
            156.0 * h / 420.0,
            22.0 * h2 / 420.0,
            54.0 * h / 420.0,
            -13.0 * h2 / 420.0,
        ],
        [
            22.0 * h2 / 420.0,
            4.0 * h3 / 420.0,
            13.0 * h2 / 420.0,
            -3.0 * h3 / 420.0,
        ],
        [
            54.0 * h / 420.0,
            13.0 * h2 / 420.0,
            156.0 * h / 420.0,
            -22.0 * h2 / 420.0,
        ],
        [
            -13.0 * h2 / 420.0,
            -3.0 * h3 / 420.0,
            -22.0 * h2 / 420.0,
            4.0 * h3 / 420.0,
        ],
    ];
    let k = [
        [12.0 / h3, 6.0 / h2, -12.0 / h3, 6.0 / h2],
        [6.0 / h2, 4.0 / h, -6.0 / h2, 2.0 / h],
        [-12.0 / h3, -6.0 / h2, 12.0 / h3, -6.0 / h2],
        [6.0 / h2, 2.0 / h, -6.0 / h2, 4.0 / h],
    ];
    let d = if region == Region::Damped {
        [
            [36.0 / (30.0 * h), 0.1, -36.0 / (30.0 * h), 0.1],
            [0.1, 4.0 * h / 30.0, -0.1, -h / 30.0],
            [-36.0 / (30.0 * h), -0.1, 36.0 / (30.0 * h), -0.1],
            [0.1, -h / 30.0, -0.1, 4.0 * h / 30.0],
        ]
    } else {
        [[0.0; 4]; 4]
    };
    Ok((m, k, d))
}

/// Assembles the global forms over the free DOFs, eliminating clamped DOFs
/// by row/column deletion.
pub fn assemble(space: &HermiteSpace) -> Result<AssembledForms> {
    let n = space.n_dof();
    if n == 0 {
        return Err(Error::DegenerateSpace);
    }
    let mut m = DenseMatrix::zeros(n, n);
    let mut k = DenseMatrix::zeros(n, n);
    let mut d0 = DenseMatrix::zeros(n, n);
    for e in 0..space.mesh().n_elements() {
        let h = space.mesh().element_length(e);
        let (m_loc, k_loc, d_loc) = local_matrices(h, space.mesh().element_region(e))?;
        let dofs = space.element_dofs(e);
        for (i, di) in dofs.iter().enumerate() {
            let Some(gi) = di else { continue };
            for (j, dj) in dofs.iter().enumerate() {
                let Some(gj) = dj else { continue };
                m[(*gi, *gj)] += m_loc[i][j];
                k[(*gi, *gj)] += k_loc[i][j];
                d0[(*gi, *gj)] += d_loc[i][j];
            }
        }
    }
    Ok(AssembledForms { m, k, d0 })
}

/// Nodal interpolation of a C¹ function given as x ↦ (f(x), f'(x)).
///
/// Fails with `BoundaryMismatch` when the clamped values at 0 and L exceed
/// `1e-12` times the largest sampled nodal magnitude.
pub fn interpolate(space: &HermiteSpace, f: impl Fn(f64) -> (f64, f64)) -> Result<Vec<f64>> {
    let nodes = space.mesh().nodes();
    let samples: Vec<(f64, f64)> = nodes.iter().map(|&x| f(x)).collect();
    let scale = samples
        .iter()
        .map(|&(v, s)| v.abs().max(s.abs()))
        .fold(0.0, f64::max);
    let tol = 1e-12 * scale;
    for &i in &[0, nodes.len() - 1] {
        let (v, s) = samples[i];
        if v.abs() > tol || s.abs() > tol {
            return Err(Error::BoundaryMismatch(format!(
                "clamped node x = {} has f = {v:.3e}, f' = {s:.3e} (tol {tol:.3e})",
                nodes[i]
            )));
        }
    }
    let mut coeffs = vec![0.0; space.n_dof()];
    for (i, &(v, s)) in samples.iter().enumerate() {
        let dofs = space.node_dofs(i);
        if let Some(idx) = dofs.value {
            coeffs[idx] = v;
        }
        if let Some(idx) = dofs.slope {
            coeffs[idx] = s;
        }
    }
    Ok(coeffs)
}
