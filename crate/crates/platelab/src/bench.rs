//! Micro-benchmarks for the dense kernels.
//!
//! Inputs are generated deterministically per (kernel, size) so checksums
//! are comparable across runs and against non-benchmarked executions of the
//! same kernel. One warm-up repetition is discarded; median and min wall
//! times are reported. Timings are sequential to keep them stable.

use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eig_general, lu_solve, smallest_gsv, ComplexMatrix, DenseMatrix, SplitMix64};

/// Timing record of one kernel at one size.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub kernel: String,
    pub n: usize,
    pub reps: usize,
    pub median_s: f64,
    pub min_s: f64,
    /// Fold of the numeric result; defeats dead-code elimination and must
    /// match the checksum of an un-timed run.
    pub checksum: f64,
}

pub const KERNELS: [&str; 3] = ["lu_solve", "eig_general", "smallest_gsv"];

fn lu_inputs(n: usize) -> (DenseMatrix, DenseMatrix) {
    let mut rng = SplitMix64::new(0x1_000 + n as u64);
    let mut a = DenseMatrix::from_fn(n, n, |_, _| rng.next_f64());
    for i in 0..n {
        a[(i, i)] += n as f64;
    }
    let b = DenseMatrix::from_fn(n, 1, |_, _| rng.next_f64());
    (a, b)
}

fn eig_input(n: usize) -> DenseMatrix {
    let mut rng = SplitMix64::new(0x2_000 + n as u64);
    DenseMatrix::from_fn(n, n, |_, _| rng.next_f64())
}

fn gsv_inputs(n: usize) -> (ComplexMatrix, DenseMatrix) {
    let mut rng = SplitMix64::new(0x3_000 + n as u64);
    let c = ComplexMatrix::from_fn(n, n, |i, j| {
        let z = Complex64::new(rng.next_f64(), rng.next_f64());
        if i == j {
            z + 4.0
        } else {
            z
        }
    });
    let mut g = DenseMatrix::from_fn(n, n, |_, _| 0.1 * rng.next_f64());
    let gt = g.transpose();
    let mut spd = gt.mul_mat(&g);
    for i in 0..n {
        spd[(i, i)] += 1.0 + n as f64 / 100.0;
    }
    g = spd;
    (c, g)
}

/// Executes one kernel at size n and folds its result into a checksum.
pub fn run_kernel(kernel: &str, n: usize) -> Result<f64> {
    match kernel {
        "lu_solve" => {
            let (a, b) = lu_inputs(n);
            let x = lu_solve(&a, &b)?;
            Ok(x.data().iter().sum())
        }
        "eig_general" => {
            let a = eig_input(n);
            let r = eig_general(&a)?;
            Ok(r.eigenvalues.iter().map(|z| z.norm()).sum())
        }
        "smallest_gsv" => {
            let (c, g) = gsv_inputs(n);
            smallest_gsv(&c, &g)
        }
        other => Err(Error::Parameter(format!("unknown kernel `{other}`"))),
    }
}

/// Benchmarks every kernel at every size.
///
/// Returns the records plus monotonicity warnings (median time decreasing
/// with size is suspicious but not fatal).
pub fn run_bench(sizes: &[usize], reps: usize) -> Result<(Vec<BenchRecord>, Vec<String>)> {
    if sizes.is_empty() {
        return Err(Error::Parameter("need at least one size".to_string()));
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter(
            "sizes must be strictly ascending".to_string(),
        ));
    }
    if reps < 3 {
        return Err(Error::Parameter(format!(
            "need at least 3 repetitions, got {reps}"
        )));
    }
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for kernel in KERNELS {
        let mut prev_median: Option<(usize, f64)> = None;
        for &n in sizes {
            run_kernel(kernel, n)?; // warm-up, discarded
            let mut times = Vec::with_capacity(reps);
            let mut checksum = 0.0;
            for _ in 0..reps {
                let start = Instant::now();
                checksum = run_kernel(kernel, n)?;
                times.push(start.elapsed().as_secs_f64());
            }
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median_s = times[times.len() / 2];
            let min_s = times[0];
            if let Some((pn, pm)) = prev_median {
                if median_s < pm {
                    warnings.push(format!(
                        "{kernel}: median at n={n} ({median_s:.3e}s) below n={pn} ({pm:.3e}s)"
                    ));
                }
            }
            prev_median = Some((n, median_s));
            records.push(BenchRecord {
                kernel: kernel.to_string(),
                n,
                reps,
                median_s,
                min_s,
                checksum,
            });
        }
    }
    Ok((records, warnings))
}
