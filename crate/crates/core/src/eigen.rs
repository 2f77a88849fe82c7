//! Dense eigen kernels for `S_W^{-1} A v = lambda v`.
//!
//! [`generalized_eig_all`] returns the full spectrum; [`largest_eigenpair`]
//! extracts only the pair with the largest real part, using block subspace
//! iteration with Rayleigh–Ritz extraction and a dense fallback.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::scatter::ScatterStats;
use crate::{Error, Result};

/// Eigenvalues with `|value| < ZERO_RTOL * max |value|` are numerically zero.
pub const ZERO_RTOL: f64 = 1e-9;
/// Largest tolerated `|imag| / |value|` for the returned dominant pair.
pub const COMPLEX_RTOL: f64 = 1e-6;

const SCHUR_EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// Real part of the eigenvalue.
    pub value: f64,
    /// Unit-norm eigenvector, sign fixed so its largest-magnitude entry is positive.
    pub vector: DVector<f64>,
    /// Magnitude of the discarded imaginary part of the eigenvalue.
    pub imag_residual: f64,
    /// Below [`ZERO_RTOL`] relative to the largest eigenvalue magnitude.
    pub numerically_zero: bool,
}

/// Tuning for [`largest_eigenpair_with`].
#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Subspace dimension. Should exceed the rank of `A` when that is known.
    pub block_size: usize,
    pub max_iter: usize,
    /// Problems this small are solved densely.
    pub dense_below: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            block_size: 16,
            max_iter: 500,
            dense_below: 12,
            seed: 0x60_1d_a5,
        }
    }
}

impl EigenOptions {
    pub fn with_block_size(mut self, block_size: usize) -> Self {
        self.block_size = block_size.max(1);
        self
    }
}

/// All eigenpairs of `S_W^{-1} A`, sorted by descending real part (stable in
/// the solver's output order on ties).
pub fn generalized_eig_all(a: &DMatrix<f64>, stats: &ScatterStats) -> Result<Vec<EigenPair>> {
    check_shape(a, stats)?;
    let mut pairs = if is_symmetric(a) {
        whitened_symmetric(a, stats)?
    } else {
        let schur = RealSchur::new(&stats.sw_inv * a)?;
        let values = schur.eigenvalues();
        let (vr, vi) = schur.eigenvectors();
        values
            .iter()
            .enumerate()
            .map(|(i, lambda)| EigenPair {
                value: lambda.re,
                vector: real_unit(vr.column(i).into_owned(), vi.column(i).into_owned()),
                imag_residual: lambda.im.abs(),
                numerically_zero: false,
            })
            .collect()
    };
    pairs.sort_by(|x, y| y.value.total_cmp(&x.value));
    let lead = pairs.iter().fold(0.0f64, |m, p| m.max(p.value.abs()));
    for p in &mut pairs {
        p.numerically_zero = p.value.abs() < ZERO_RTOL * lead || lead == 0.0;
    }
    Ok(pairs)
}

/// Eigenpair of `S_W^{-1} A` with the largest real part.
pub fn largest_eigenpair(a: &DMatrix<f64>, stats: &ScatterStats) -> Result<EigenPair> {
    largest_eigenpair_with(a, stats, &EigenOptions::default())
}

pub fn largest_eigenpair_with(
    a: &DMatrix<f64>,
    stats: &ScatterStats,
    opts: &EigenOptions,
) -> Result<EigenPair> {
    check_shape(a, stats)?;
    let m = a.nrows();
    let a_norm = a.norm();
    let scale = stats.sw_inv.norm() * a_norm;
    if a_norm == 0.0 {
        let mut v = DVector::zeros(m);
        v[0] = 1.0;
        return Ok(EigenPair {
            value: 0.0,
            vector: v,
            imag_residual: 0.0,
            numerically_zero: true,
        });
    }
    let p = opts.block_size.clamp(1, m);
    let found = if m < opts.dense_below || 2 * p >= m {
        None
    } else {
        subspace_iteration(a, stats, p, opts, scale)?
    };
    let (lambda, vector, lead) = match found {
        Some(hit) => hit,
        None => dense_largest(a, stats)?,
    };

    let floor = 1e-8 * scale;
    if lambda.im.abs() > COMPLEX_RTOL * lambda.re.abs().max(floor) {
        return Err(Error::ComplexDominant {
            value: lambda.re,
            imag: lambda.im,
        });
    }
    Ok(EigenPair {
        value: lambda.re,
        vector,
        imag_residual: lambda.im.abs(),
        numerically_zero: lambda.re.abs() < ZERO_RTOL * lead || lead == 0.0,
    })
}

/// Flips `v` so that its first largest-magnitude entry is positive.
pub fn canonical_sign(v: &mut DVector<f64>) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if !v.is_empty() && v[best] < 0.0 {
        v.neg_mut();
    }
}

fn check_shape(a: &DMatrix<f64>, stats: &ScatterStats) -> Result<()> {
    let m = stats.dim();
    if a.nrows() != m || a.ncols() != m {
        return Err(Error::Shape(format!(
            "operator is {}x{}, scatter is {m}x{m}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

fn is_symmetric(a: &DMatrix<f64>) -> bool {
    let tol = 1e-12 * a.amax();
    let n = a.nrows();
    (0..n).all(|i| (i + 1..n).all(|j| (a[(i, j)] - a[(j, i)]).abs() <= tol))
}

/// Symmetric `A`: eigenpairs of `L^{-1} A L^{-T}` mapped back through `L^{-T}`,
/// where `L L^T = S_W + delta I`.
fn whitened_symmetric(a: &DMatrix<f64>, stats: &ScatterStats) -> Result<Vec<EigenPair>> {
    let l = stats.sw_cholesky().l();
    let singular = || Error::SingularWithinScatter { delta: stats.delta };
    let half = l.solve_lower_triangular(a).ok_or_else(singular)?;
    let mut c = l
        .solve_lower_triangular(&half.transpose())
        .ok_or_else(singular)?;
    crate::scatter::symmetrize(&mut c);
    let eig = SymmetricEigen::try_new(c, SCHUR_EPS, 0)
        .ok_or_else(|| Error::ConvergenceFailure("symmetric eigensolver".into()))?;
    let vectors = l
        .tr_solve_lower_triangular(&eig.eigenvectors)
        .ok_or_else(singular)?;
    Ok(eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let mut v = vectors.column(i).normalize();
            canonical_sign(&mut v);
            EigenPair {
                value,
                vector: v,
                imag_residual: 0.0,
                numerically_zero: false,
            }
        })
        .collect())
}

/// Returns `(lambda, unit vector, max |eigenvalue|)` for the top pair of the full
/// dense spectrum.
fn dense_largest(
    a: &DMatrix<f64>,
    stats: &ScatterStats,
) -> Result<(Complex64, DVector<f64>, f64)> {
    let schur = RealSchur::new(&stats.sw_inv * a)?;
    let values = schur.eigenvalues();
    let top = argmax_re(&values);
    let lead = values.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let (yr, yi) = schur.eigenvector(top);
    Ok((values[top], real_unit(yr, yi), lead))
}

/// Block subspace iteration on `S_W^{-1} A`. Returns `None` when it fails to
/// settle, or when the pair with the largest real part is not also the
/// dominant one in magnitude; the caller then falls back to a dense solve.
fn subspace_iteration(
    a: &DMatrix<f64>,
    stats: &ScatterStats,
    p: usize,
    opts: &EigenOptions,
    scale: f64,
) -> Result<Option<(Complex64, DVector<f64>, f64)>> {
    let m = a.nrows();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let start = DMatrix::from_fn(m, p, |_, _| StandardNormal.sample(&mut rng));
    let mut q = start.qr().q();
    let contract_tol = |lambda: f64| 1e-7 * (1.0 + lambda.abs()) * a.norm();
    let mut prev = f64::INFINITY;

    for it in 0..opts.max_iter {
        let y = &stats.sw_inv * (a * &q);
        let h = q.tr_mul(&y);
        let ritz = RealSchur::new(h)?;
        let values = ritz.eigenvalues();
        let top = argmax_re(&values);
        let lambda = values[top];
        let lead = values.iter().fold(0.0f64, |mx, z| mx.max(z.norm()));
        let (zr, zi) = ritz.eigenvector(top);

        // r = Y z - lambda Q z, in complex arithmetic
        let xr = &q * &zr;
        let xi = &q * &zi;
        let yr = &y * &zr;
        let yi = &y * &zi;
        let rr = &yr - &xr * lambda.re + &xi * lambda.im;
        let ri = &yi - &xi * lambda.re - &xr * lambda.im;
        let xnorm = (xr.norm_squared() + xi.norm_squared()).sqrt();
        let res = (rr.norm_squared() + ri.norm_squared()).sqrt() / xnorm;

        let tight = res <= 1e-14 * scale;
        let settled = it >= 2 && res > 0.5 * prev && res <= (1e-10 * scale).min(contract_tol(lambda.re));
        if tight || settled {
            let dominant = lambda.norm() >= lead * (1.0 - 1e-10) - 1e-14 * scale;
            if !dominant {
                return Ok(None);
            }
            return Ok(Some((lambda, real_unit(xr, xi), lead)));
        }
        prev = res;
        q = y.qr().q();
    }
    log::debug!("subspace iteration did not settle in {} steps", opts.max_iter);
    Ok(None)
}

fn argmax_re(values: &[Complex64]) -> usize {
    let mut best = 0;
    for (i, z) in values.iter().enumerate() {
        if z.re > values[best].re {
            best = i;
        }
    }
    best
}

/// Real unit vector from a complex eigenvector: rotate so the largest entry is
/// real and positive, keep the real part, normalize, fix the sign.
fn real_unit(re: DVector<f64>, im: DVector<f64>) -> DVector<f64> {
    let n = re.len();
    let mut best = 0;
    let mut best_mag = -1.0;
    for i in 0..n {
        let mag = re[i].hypot(im[i]);
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    let phase = Complex64::new(re[best], im[best]);
    let rot = if phase.norm() > 0.0 {
        phase.conj() / phase.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut v = DVector::from_fn(n, |i, _| (Complex64::new(re[i], im[i]) * rot).re);
    let norm = v.norm();
    if norm > 0.0 {
        v /= norm;
    }
    canonical_sign(&mut v);
    v
}

/// Real Schur form `P = Q T Q^T` with eigenvector recovery by back-substitution
/// on the quasi-triangular factor.
struct RealSchur {
    q: DMatrix<f64>,
    t: DMatrix<f64>,
    /// `(start, size)` of each diagonal block, size 1 or 2.
    blocks: Vec<(usize, usize)>,
    /// For each eigenvalue: block index.
    owner: Vec<usize>,
    values: Vec<Complex64>,
}

impl RealSchur {
    fn new(p: DMatrix<f64>) -> Result<Self> {
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::ConvergenceFailure("non-finite operator".into()));
        }
        let n = p.nrows();
        let (q, t) = Schur::try_new(p, SCHUR_EPS, 0)
            .ok_or_else(|| Error::ConvergenceFailure("real Schur decomposition".into()))?
            .unpack();
        let mut blocks = Vec::new();
        let mut owner = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut i = 0;
        while i < n {
            if i + 1 < n && t[(i + 1, i)] != 0.0 {
                let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
                let mid = 0.5 * (a + d);
                let disc = 0.25 * (a - d) * (a - d) + b * c;
                if disc >= 0.0 {
                    let s = disc.sqrt();
                    values.push(Complex64::new(mid + s, 0.0));
                    values.push(Complex64::new(mid - s, 0.0));
                } else {
                    let s = (-disc).sqrt();
                    values.push(Complex64::new(mid, s));
                    values.push(Complex64::new(mid, -s));
                }
                owner.push(blocks.len());
                owner.push(blocks.len());
                blocks.push((i, 2));
                i += 2;
            } else {
                values.push(Complex64::new(t[(i, i)], 0.0));
                owner.push(blocks.len());
                blocks.push((i, 1));
                i += 1;
            }
        }
        Ok(Self {
            q,
            t,
            blocks,
            owner,
            values,
        })
    }

    fn eigenvalues(&self) -> Vec<Complex64> {
        self.values.clone()
    }

    /// Eigenvector of eigenvalue `idx` in Schur coordinates, `(re, im)`.
    fn schur_vector(&self, idx: usize) -> Vec<Complex64> {
        let t = &self.t;
        let n = t.nrows();
        let lambda = self.values[idx];
        let zero = Complex64::new(0.0, 0.0);
        let mut y = vec![zero; n];
        let own = self.owner[idx];
        let (s, size) = self.blocks[own];
        let end = s + size;
        let smin = (f64::EPSILON * t.amax()).max(f64::MIN_POSITIVE);

        if size == 1 {
            y[s] = Complex64::new(1.0, 0.0);
        } else {
            let r1 = (Complex64::new(t[(s, s)], 0.0) - lambda, Complex64::new(t[(s, s + 1)], 0.0));
            let r2 = (Complex64::new(t[(s + 1, s)], 0.0), Complex64::new(t[(s + 1, s + 1)], 0.0) - lambda);
            let n1 = r1.0.norm() + r1.1.norm();
            let n2 = r2.0.norm() + r2.1.norm();
            let r = if n1 >= n2 { r1 } else { r2 };
            if r.0.norm() + r.1.norm() == 0.0 {
                y[s] = Complex64::new(1.0, 0.0);
            } else {
                y[s] = r.1;
                y[s + 1] = -r.0;
            }
        }

        for b in (0..own).rev() {
            let (bs, bsize) = self.blocks[b];
            let rhs: Vec<Complex64> = (bs..bs + bsize)
                .map(|i| {
                    let mut acc = zero;
                    for l in (bs + bsize)..end {
                        acc += y[l] * t[(i, l)];
                    }
                    -acc
                })
                .collect();
            if bsize == 1 {
                let mut d = Complex64::new(t[(bs, bs)], 0.0) - lambda;
                if d.norm() < smin {
                    d = Complex64::new(smin, 0.0);
                }
                y[bs] = rhs[0] / d;
            } else {
                let a11 = Complex64::new(t[(bs, bs)], 0.0) - lambda;
                let a12 = Complex64::new(t[(bs, bs + 1)], 0.0);
                let a21 = Complex64::new(t[(bs + 1, bs)], 0.0);
                let a22 = Complex64::new(t[(bs + 1, bs + 1)], 0.0) - lambda;
                let mut det = a11 * a22 - a12 * a21;
                if det.norm() < smin * smin {
                    det = Complex64::new(smin * smin, 0.0);
                }
                y[bs] = (rhs[0] * a22 - a12 * rhs[1]) / det;
                y[bs + 1] = (a11 * rhs[1] - a21 * rhs[0]) / det;
            }
            // keep the recurrence away from overflow
            let big = y[bs..end].iter().fold(0.0f64, |m, z| m.max(z.norm()));
            if big > 1e100 {
                y[bs..end].iter_mut().for_each(|z| *z /= big);
            }
        }
        y
    }

    fn eigenvector(&self, idx: usize) -> (DVector<f64>, DVector<f64>) {
        let y = self.schur_vector(idx);
        let yr = DVector::from_iterator(y.len(), y.iter().map(|z| z.re));
        let yi = DVector::from_iterator(y.len(), y.iter().map(|z| z.im));
        (&self.q * yr, &self.q * yi)
    }

    /// All eigenvectors as columns, `(re, im)`.
    fn eigenvectors(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.t.nrows();
        let mut yr = DMatrix::zeros(n, n);
        let mut yi = DMatrix::zeros(n, n);
        for idx in 0..n {
            for (i, z) in self.schur_vector(idx).into_iter().enumerate() {
                yr[(i, idx)] = z.re;
                yi[(i, idx)] = z.im;
            }
        }
        (&self.q * yr, &self.q * yi)
    }
}
