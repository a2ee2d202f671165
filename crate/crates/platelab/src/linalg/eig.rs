//! Dense nonsymmetric eigendecomposition.
//!
//! Classical EISPACK path: diagonal balancing, Householder reduction to upper
//! Hessenberg form with accumulated transformations, Francis double-shift QR
//! to real Schur form, then back-substitution on the quasi-triangular factor
//! for the right eigenvectors. Complex conjugate pairs come out exactly
//! conjugate because 2x2 Schur blocks are resolved in real arithmetic.

use num_complex::Complex64;

use super::{ComplexMatrix, DenseMatrix};
use crate::error::{Error, Result};

/// Iterations allowed per eigenvalue before the QR sweep gives up.
const MAX_ITER_PER_EIGENVALUE: usize = 100;

/// Eigenvalues, right eigenvectors, and the measured residual bound
/// `max_i ||A v_i - lambda_i v_i||_2 / ||v_i||_2`.
pub struct EigenResult {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: ComplexMatrix,
    pub residual_bound: f64,
}

/// Computes all eigenvalues and right eigenvectors of a real square matrix.
pub fn eig_general(a: &DenseMatrix) -> Result<EigenResult> {
    if !a.is_square() {
        return Err(Error::Parameter(format!(
            "eigendecomposition requires a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n == 0 {
        return Err(Error::Parameter("empty matrix".to_string()));
    }
    if !a.data().iter().all(|x| x.is_finite()) {
        return Err(Error::Parameter(
            "matrix entries must be finite".to_string(),
        ));
    }

    let mut h = a.clone();
    let scale = balance(&mut h);
    let mut v = hessenberg(&mut h);
    let (d, e) = hqr2(&mut h, &mut v)?;

    // undo the balancing on the eigenvector rows
    for i in 0..n {
        for j in 0..n {
            v[(i, j)] *= scale[i];
        }
    }

    // assemble complex eigenpairs from the packed real storage
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    let mut j = 0;
    while j < n {
        if e[j] == 0.0 {
            eigenvalues.push(Complex64::new(d[j], 0.0));
            for i in 0..n {
                eigenvectors[(i, j)] = Complex64::new(v[(i, j)], 0.0);
            }
            j += 1;
        } else {
            eigenvalues.push(Complex64::new(d[j], e[j]));
            eigenvalues.push(Complex64::new(d[j + 1], e[j + 1]));
            for i in 0..n {
                eigenvectors[(i, j)] = Complex64::new(v[(i, j)], v[(i, j + 1)]);
                eigenvectors[(i, j + 1)] = Complex64::new(v[(i, j)], -v[(i, j + 1)]);
            }
            j += 2;
        }
    }

    // normalize columns and measure residuals against the original matrix
    let mut residual_bound: f64 = 0.0;
    for j in 0..n {
        let mut nrm = 0.0f64;
        for i in 0..n {
            nrm += eigenvectors[(i, j)].norm_sqr();
        }
        let nrm = nrm.sqrt();
        if nrm > 0.0 {
            for i in 0..n {
                eigenvectors[(i, j)] /= nrm;
            }
        }
        let lambda = eigenvalues[j];
        let mut rsq = 0.0f64;
        for i in 0..n {
            let mut acc = -lambda * eigenvectors[(i, j)];
            for k in 0..n {
                acc += a[(i, k)] * eigenvectors[(k, j)];
            }
            rsq += acc.norm_sqr();
        }
        residual_bound = residual_bound.max(rsq.sqrt());
    }

    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        residual_bound,
    })
}

/// Iterative diagonal scaling (radix-2) equalizing row and column norms.
/// Returns the diagonal so callers can map eigenvectors back.
fn balance(h: &mut DenseMatrix) -> Vec<f64> {
    let n = h.rows();
    let mut scale = vec![1.0f64; n];
    let radix = 2.0f64;
    let b2 = radix * radix;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[(j, i)].abs();
                    r += h[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= b2;
            }
            g = r * radix;
            while c >= g {
                f /= radix;
                c /= b2;
            }
            if (c + r) / f < 0.95 * s {
                let ginv = 1.0 / f;
                scale[i] *= f;
                for j in 0..n {
                    h[(i, j)] *= ginv;
                }
                for j in 0..n {
                    h[(j, i)] *= f;
                }
                converged = false;
            }
        }
        if converged {
            return scale;
        }
    }
}

/// Householder reduction to upper Hessenberg form; returns the accumulated
/// orthogonal transformation.
fn hessenberg(h: &mut DenseMatrix) -> DenseMatrix {
    let n = h.rows();
    let low = 0usize;
    let high = n - 1;
    let mut ort = vec![0.0f64; n];

    for m in (low + 1)..high {
        let mut sc = 0.0;
        for i in m..=high {
            sc += h[(i, m - 1)].abs();
        }
        if sc == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / sc;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        // apply Householder similarity transformation
        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        ort[m] *= sc;
        h[(m, m - 1)] = sc * g;
    }

    let mut v = DenseMatrix::identity(n);
    if n < 3 {
        return v;
    }
    for m in ((low + 1)..high).rev() {
        if h[(m, m - 1)] == 0.0 {
            continue;
        }
        for i in (m + 1)..=high {
            ort[i] = h[(i, m - 1)];
        }
        for j in m..=high {
            let mut g = 0.0;
            for i in m..=high {
                g += ort[i] * v[(i, j)];
            }
            // double division avoids possible underflow
            g = (g / ort[m]) / h[(m, m - 1)];
            for i in m..=high {
                v[(i, j)] += g * ort[i];
            }
        }
    }
    v
}

/// Smith's scaled complex division.
fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix with accumulation,
/// followed by back-substitution for the eigenvectors of the Schur factor.
///
/// Returns eigenvalues packed as (real parts, imaginary parts); on exit `v`
/// holds the right eigenvectors in packed real storage (a conjugate pair at
/// columns j, j+1 stores real and imaginary parts).
fn hqr2(hm: &mut DenseMatrix, v: &mut DenseMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let nn = hm.rows();
    let mut d = vec![0.0f64; nn];
    let mut e = vec![0.0f64; nn];

    let low: i64 = 0;
    let high: i64 = nn as i64 - 1;
    let eps = 2.0f64.powi(-52);
    let mut exshift = 0.0f64;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut t, mut w, mut x, mut y);

    macro_rules! h {
        ($i:expr, $j:expr) => {
            hm[($i as usize, $j as usize)]
        };
    }
    macro_rules! vv {
        ($i:expr, $j:expr) => {
            v[($i as usize, $j as usize)]
        };
    }

    // matrix 1-norm over the relevant band
    let mut norm = 0.0f64;
    for i in 0..nn as i64 {
        if i < low || i > high {
            d[i as usize] = h!(i, i);
            e[i as usize] = 0.0;
        }
        for j in (i - 1).max(0)..nn as i64 {
            norm += h!(i, j).abs();
        }
    }

    let mut n: i64 = high;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    while n >= low {
        // find a small subdiagonal element
        let mut l = n;
        while l > low {
            s = h!(l - 1, l - 1).abs() + h!(l, l).abs();
            if s == 0.0 {
                s = norm;
            }
            if h!(l, l - 1).abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one root found
            h!(n, n) += exshift;
            d[n as usize] = h!(n, n);
            e[n as usize] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // two roots found
            w = h!(n, n - 1) * h!(n - 1, n);
            p = (h!(n - 1, n - 1) - h!(n, n)) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h!(n, n) += exshift;
            h!(n - 1, n - 1) += exshift;
            x = h!(n, n);
            if q >= 0.0 {
                // real pair
                z = if p >= 0.0 { p + z } else { p - z };
                d[(n - 1) as usize] = x + z;
                d[n as usize] = d[(n - 1) as usize];
                if z != 0.0 {
                    d[n as usize] = x - w / z;
                }
                e[(n - 1) as usize] = 0.0;
                e[n as usize] = 0.0;
                x = h!(n, n - 1);
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in (n - 1)..nn as i64 {
                    z = h!(n - 1, j);
                    h!(n - 1, j) = q * z + p * h!(n, j);
                    h!(n, j) = q * h!(n, j) - p * z;
                }
                for i in 0..=n {
                    z = h!(i, n - 1);
                    h!(i, n - 1) = q * z + p * h!(i, n);
                    h!(i, n) = q * h!(i, n) - p * z;
                }
                for i in low..=high {
                    z = vv!(i, n - 1);
                    vv!(i, n - 1) = q * z + p * vv!(i, n);
                    vv!(i, n) = q * vv!(i, n) - p * z;
                }
            } else {
                // complex pair
                d[(n - 1) as usize] = x + p;
                d[n as usize] = x + p;
                e[(n - 1) as usize] = z;
                e[n as usize] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // no convergence yet; form shift
            x = h!(n, n);
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h!(n - 1, n - 1);
                w = h!(n, n - 1) * h!(n - 1, n);
            }
            if iter == 10 {
                // exceptional shift
                exshift += x;
                for i in low..=n {
                    h!(i, i) -= x;
                }
                s = h!(n, n - 1).abs() + h!(n - 1, n - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=n {
                        h!(i, i) -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = 0.964;
                    w = 0.964;
                }
            }
            iter += 1;
            total_iter += 1;
            if iter > MAX_ITER_PER_EIGENVALUE {
                return Err(Error::NoConvergence {
                    iterations: total_iter,
                    context: format!(
                        "QR sweep stalled with {} of {} eigenvalues remaining",
                        n + 1,
                        nn
                    ),
                });
            }

            // two consecutive small subdiagonal elements
            let mut m = n - 2;
            while m >= l {
                z = h!(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / h!(m + 1, m) + h!(m, m + 1);
                q = h!(m + 1, m + 1) - z - r - s;
                r = h!(m + 2, m + 1);
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h!(m, m - 1).abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h!(m - 1, m - 1).abs() + z.abs() + h!(m + 1, m + 1).abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=n {
                h!(i, i - 2) = 0.0;
                if i > m + 2 {
                    h!(i, i - 3) = 0.0;
                }
            }

            // double QR step on rows l..=n and columns m..=n
            for k in m..=(n - 1) {
                let notlast = k != n - 1;
                if k != m {
                    p = h!(k, k - 1);
                    q = h!(k + 1, k - 1);
                    r = if notlast { h!(k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h!(k, k - 1) = -s * x;
                    } else if l != m {
                        h!(k, k - 1) = -h!(k, k - 1);
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn as i64 {
                        p = h!(k, j) + q * h!(k + 1, j);
                        if notlast {
                            p += r * h!(k + 2, j);
                            h!(k + 2, j) -= p * z;
                        }
                        h!(k, j) -= p * x;
                        h!(k + 1, j) -= p * y;
                    }
                    for i in 0..=n.min(k + 3) {
                        p = x * h!(i, k) + y * h!(i, k + 1);
                        if notlast {
                            p += z * h!(i, k + 2);
                            h!(i, k + 2) -= p * r;
                        }
                        h!(i, k) -= p;
                        h!(i, k + 1) -= p * q;
                    }
                    for i in low..=high {
                        p = x * vv!(i, k) + y * vv!(i, k + 1);
                        if notlast {
                            p += z * vv!(i, k + 2);
                            vv!(i, k + 2) -= p * r;
                        }
                        vv!(i, k) -= p;
                        vv!(i, k + 1) -= p * q;
                    }
                }
            }
        }
    }

    // back-substitution on the quasi-triangular Schur factor
    if norm == 0.0 {
        return Ok((d, e));
    }
    for nb in (0..nn as i64).rev() {
        p = d[nb as usize];
        q = e[nb as usize];
        if q == 0.0 {
            // real eigenvector
            let mut l = nb;
            h!(nb, nb) = 1.0;
            for i in (0..nb).rev() {
                w = h!(i, i) - p;
                r = 0.0;
                for j in l..=nb {
                    r += h!(i, j) * h!(j, nb);
                }
                if e[i as usize] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i as usize] == 0.0 {
                        if w != 0.0 {
                            h!(i, nb) = -r / w;
                        } else {
                            h!(i, nb) = -r / (eps * norm);
                        }
                    } else {
                        // solve the 2x2 real block
                        x = h!(i, i + 1);
                        y = h!(i + 1, i);
                        q = (d[i as usize] - p) * (d[i as usize] - p)
                            + e[i as usize] * e[i as usize];
                        t = (x * s - z * r) / q;
                        h!(i, nb) = t;
                        if x.abs() > z.abs() {
                            h!(i + 1, nb) = (-r - w * t) / x;
                        } else {
                            h!(i + 1, nb) = (-s - y * t) / z;
                        }
                    }
                    // overflow control
                    t = h!(i, nb).abs();
                    if (eps * t) * t > 1.0 {
                        for j in i..=nb {
                            h!(j, nb) /= t;
                        }
                    }
                }
            }
        } else if q < 0.0 {
            // complex eigenvector for the pair at (nb-1, nb)
            let mut l = nb - 1;
            if h!(nb, nb - 1).abs() > h!(nb - 1, nb).abs() {
                h!(nb - 1, nb - 1) = q / h!(nb, nb - 1);
                h!(nb - 1, nb) = -(h!(nb, nb) - p) / h!(nb, nb - 1);
            } else {
                let (cr, ci) = cdiv(0.0, -h!(nb - 1, nb), h!(nb - 1, nb - 1) - p, q);
                h!(nb - 1, nb - 1) = cr;
                h!(nb - 1, nb) = ci;
            }
            h!(nb, nb - 1) = 0.0;
            h!(nb, nb) = 1.0;
            for i in (0..nb - 1).rev() {
                let mut ra = 0.0f64;
                let mut sa = 0.0f64;
                for j in l..=nb {
                    ra += h!(i, j) * h!(j, nb - 1);
                    sa += h!(i, j) * h!(j, nb);
                }
                w = h!(i, i) - p;
                if e[i as usize] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i as usize] == 0.0 {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        h!(i, nb - 1) = cr;
                        h!(i, nb) = ci;
                    } else {
                        // solve the complex 2x2 block
                        x = h!(i, i + 1);
                        y = h!(i + 1, i);
                        let mut vr = (d[i as usize] - p) * (d[i as usize] - p)
                            + e[i as usize] * e[i as usize]
                            - q * q;
                        let vi = (d[i as usize] - p) * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) =
                            cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h!(i, nb - 1) = cr;
                        h!(i, nb) = ci;
                        if x.abs() > z.abs() + q.abs() {
                            h!(i + 1, nb - 1) = (-ra - w * h!(i, nb - 1) + q * h!(i, nb)) / x;
                            h!(i + 1, nb) = (-sa - w * h!(i, nb) - q * h!(i, nb - 1)) / x;
                        } else {
                            let (cr, ci) = cdiv(-r - y * h!(i, nb - 1), -s - y * h!(i, nb), z, q);
                            h!(i + 1, nb - 1) = cr;
                            h!(i + 1, nb) = ci;
                        }
                    }
                    // overflow control
                    t = h!(i, nb - 1).abs().max(h!(i, nb).abs());
                    if (eps * t) * t > 1.0 {
                        for j in i..=nb {
                            h!(j, nb - 1) /= t;
                            h!(j, nb) /= t;
                        }
                    }
                }
            }
        }
    }

    // back-transform to eigenvectors of the balanced matrix
    for j in (low..nn as i64).rev() {
        for i in low..=high {
            z = 0.0;
            for k in low..=j.min(high) {
                z += vv!(i, k) * h!(k, j);
            }
            vv!(i, j) = z;
        }
    }

    Ok((d, e))
}

/// Jacobi eigenvalue iteration for real symmetric matrices.
///
/// Slow but bulletproof; used as the independent oracle route for the
/// generalized singular-value kernel and available for small SPD checks.
pub fn jacobi_symmetric_eigenvalues(a: &DenseMatrix, max_sweeps: usize) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Parameter("Jacobi needs a square matrix".to_string()));
    }
    let n = a.rows();
    let mut m = a.clone();
    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off.sqrt() <= 1e-14 * m.norm_frobenius().max(f64::MIN_POSITIVE) {
            let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
            ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(ev);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[(p, q)] == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * m[(p, q)]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: max_sweeps,
        context: "Jacobi sweeps exhausted".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SplitMix64;

    fn sorted_by_re_im(mut vals: Vec<Complex64>) -> Vec<Complex64> {
        vals.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        vals
    }

    #[test]
    fn diagonal_matrix() {
        let a =
            DenseMatrix::from_vec(3, 3, vec![1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        let r = eig_general(&a).unwrap();
        let vals = sorted_by_re_im(r.eigenvalues);
        for (v, expected) in vals.iter().zip([1.0, 2.0, 3.0]) {
            assert!((v.re - expected).abs() < 1e-14);
            assert_eq!(v.im, 0.0);
        }
        assert!(r.residual_bound < 1e-14);
    }

    #[test]
    fn rotation_generator_has_pure_imaginary_pair() {
        let a = DenseMatrix::from_vec(2, 2, vec![0.0, 1.0, -1.0, 0.0]).unwrap();
        let r = eig_general(&a).unwrap();
        let vals = sorted_by_re_im(r.eigenvalues);
        assert!((vals[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((vals[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn companion_of_cube_roots_of_unity() {
        // companion matrix of z^3 - 1
        let a =
            DenseMatrix::from_vec(3, 3, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        let r = eig_general(&a).unwrap();
        let mut expected = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.5, 3.0f64.sqrt() / 2.0),
            Complex64::new(-0.5, -3.0f64.sqrt() / 2.0),
        ];
        expected.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        let mut got = r.eigenvalues.clone();
        got.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        for (g, x) in got.iter().zip(expected) {
            assert!((g - x).norm() < 1e-10, "got {g}, expected {x}");
        }
    }

    #[test]
    fn random_matrix_residual_contract() {
        for (n, seed) in [(30usize, 1u64), (120, 2)] {
            let mut rng = SplitMix64::new(seed);
            let a = DenseMatrix::from_fn(n, n, |_, _| rng.next_f64());
            let r = eig_general(&a).unwrap();
            assert_eq!(r.eigenvalues.len(), n);
            assert!(
                r.residual_bound <= 1e-8 * a.norm_frobenius(),
                "n={n}: residual {:.3e} vs norm {:.3e}",
                r.residual_bound,
                a.norm_frobenius()
            );
        }
    }

    #[test]
    fn conjugate_closure() {
        let mut rng = SplitMix64::new(9);
        let a = DenseMatrix::from_fn(24, 24, |_, _| rng.next_f64());
        let r = eig_general(&a).unwrap();
        for v in &r.eigenvalues {
            if v.im != 0.0 {
                let found = r.eigenvalues.iter().any(|w| w.re == v.re && w.im == -v.im);
                assert!(found, "missing conjugate of {v}");
            }
        }
    }

    #[test]
    fn permutation_similarity_preserves_spectrum() {
        let n = 16;
        let mut rng = SplitMix64::new(21);
        let a = DenseMatrix::from_fn(n, n, |_, _| rng.next_f64());
        // random permutation via Fisher-Yates
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() as usize) % (i + 1);
            perm.swap(i, j);
        }
        let pap = DenseMatrix::from_fn(n, n, |i, j| a[(perm[i], perm[j])]);
        let va = sorted_by_re_im(eig_general(&a).unwrap().eigenvalues);
        let vb = sorted_by_re_im(eig_general(&pap).unwrap().eigenvalues);
        for (x, y) in va.iter().zip(vb.iter()) {
            assert!((x - y).norm() < 1e-9 * a.norm_frobenius().max(1.0));
        }
    }

    #[test]
    fn balancing_handles_badly_scaled_similarity() {
        // D M D^-1 with a wild diagonal must still give M's eigenvalues
        let m =
            DenseMatrix::from_vec(3, 3, vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]).unwrap();
        let dscale = [1e8, 1.0, 1e-8];
        let a = DenseMatrix::from_fn(3, 3, |i, j| dscale[i] * m[(i, j)] / dscale[j]);
        let va = sorted_by_re_im(eig_general(&a).unwrap().eigenvalues);
        let vm = sorted_by_re_im(eig_general(&m).unwrap().eigenvalues);
        for (x, y) in va.iter().zip(vm.iter()) {
            assert!((x - y).norm() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        let a = DenseMatrix::from_vec(2, 2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let ev = jacobi_symmetric_eigenvalues(&a, 50).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
    }
}
