//! Dense complex matrices for exact small-system checks.
//!
//! Exponentials go through Hermitian eigendecompositions. The spectral norm is
//! computed exactly (eigenvalues of the Hermitian part or of `M†M`) up to
//! [`EXACT_NORM_DIM`] and by power iteration on `M†M` above it.

use faer::{Mat, MatRef, Side};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::rng::XorShift64Star;

/// Default dense limit in qubits.
pub const DEFAULT_CAP_QUBITS: usize = 14;

/// Largest dimension for which the spectral norm uses a full eigensolve.
pub const EXACT_NORM_DIM: usize = 2048;

/// Dense qubit limit, overridable with `TROTTER_DENSE_CAP` (a qubit count).
pub fn cap_qubits() -> usize {
    std::env::var("TROTTER_DENSE_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP_QUBITS)
}

pub fn check_cap(n: usize) -> Result<()> {
    let cap = cap_qubits();
    if n > cap {
        return Err(Error::Cap(format!("{n} qubits exceeds the dense cap of {cap}")));
    }
    Ok(())
}

/// Square complex matrix.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    m: Mat<C64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator { m: Mat::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator { m: Mat::identity(dim, dim) }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        DenseOperator { m: Mat::from_fn(dim, dim, f) }
    }

    pub fn from_mat(m: Mat<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        DenseOperator { m }
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut d = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            d.m[(i, i)] = v;
        }
        d
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: C64) {
        self.m[(i, j)] += v;
    }

    pub fn mat(&self) -> MatRef<'_, C64> {
        self.m.as_ref()
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.m
    }

    pub fn matmul(&self, o: &DenseOperator) -> DenseOperator {
        DenseOperator { m: &self.m * &o.m }
    }

    pub fn add(&self, o: &DenseOperator) -> DenseOperator {
        DenseOperator { m: &self.m + &o.m }
    }

    pub fn sub(&self, o: &DenseOperator) -> DenseOperator {
        DenseOperator { m: &self.m - &o.m }
    }

    pub fn scale(&self, c: C64) -> DenseOperator {
        DenseOperator { m: Mat::from_fn(self.dim(), self.dim(), |i, j| self.m[(i, j)] * c) }
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator { m: self.m.adjoint().to_owned() }
    }

    pub fn commutator(&self, o: &DenseOperator) -> DenseOperator {
        DenseOperator { m: &self.m * &o.m - &o.m * &self.m }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.m[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        max_abs(self.m.as_ref())
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, k: u64) -> DenseOperator {
        DenseOperator { m: mat_pow(self.m.as_ref(), k) }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        hermitian_defect(self.m.as_ref()) <= tol
    }

    /// Eigendecomposition of a Hermitian matrix (eigenvalues nondecreasing).
    pub fn eigh(&self) -> Result<HermitianEigen> {
        self.require_hermitian()?;
        HermitianEigen::of(self.m.as_ref())
    }

    /// All eigenvalues of a Hermitian matrix, nonincreasing.
    pub fn eigvals_hermitian(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let mut v = hermitian_eigvals(self.m.as_ref())?;
        v.reverse();
        Ok(v)
    }

    /// `e^{-iθh}` for Hermitian `h`.
    pub fn expm_i_hermitian(&self, theta: f64) -> Result<DenseOperator> {
        Ok(self.eigh()?.exp_i(theta))
    }

    /// `e^{θh}` for Hermitian `h`.
    pub fn expm_real_hermitian(&self, theta: f64) -> Result<DenseOperator> {
        Ok(self.eigh()?.map(|l| C64::new((theta * l).exp(), 0.0)))
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(self.m.as_ref())
    }

    fn require_hermitian(&self) -> Result<()> {
        let scale = self.max_abs().max(1.0);
        let d = hermitian_defect(self.m.as_ref());
        if d > 1e-10 * scale {
            return Err(Error::Contract(format!("matrix is not Hermitian (defect {d:.3e})")));
        }
        Ok(())
    }
}

/// `H = V diag(λ) V†`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<C64>,
}

impl HermitianEigen {
    pub fn of(m: MatRef<'_, C64>) -> Result<Self> {
        let e = m.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))?;
        let values = e.S().column_vector().iter().map(|x| x.re).collect();
        Ok(HermitianEigen { values, vectors: e.U().to_owned() })
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> DenseOperator {
        let d: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        DenseOperator { m: conjugate_diag(self.vectors.as_ref(), &d) }
    }

    /// `e^{-iθH}`.
    pub fn exp_i(&self, theta: f64) -> DenseOperator {
        self.map(|l| C64::from_polar(1.0, -theta * l))
    }
}

/// `V diag(d) V†`.
pub fn conjugate_diag(v: MatRef<'_, C64>, d: &[C64]) -> Mat<C64> {
    let vd = Mat::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * d[j]);
    &vd * v.adjoint()
}

pub fn max_abs(m: MatRef<'_, C64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

pub fn hermitian_defect(m: MatRef<'_, C64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..=j.min(m.nrows().saturating_sub(1)) {
            best = best.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    best
}

/// Eigenvalues of a Hermitian matrix, nondecreasing. Real-valued inputs use
/// the real symmetric solver.
pub fn hermitian_eigvals(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    let real = (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].im == 0.0));
    if real {
        let r = Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re);
        r.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))
    } else {
        m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))
    }
}

/// Spectral norm of a matrix known to be Hermitian.
pub fn hermitian_norm(m: MatRef<'_, C64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    match hermitian_eigvals(m) {
        Ok(v) => v[0].abs().max(v[v.len() - 1].abs()),
        Err(_) => spectral_norm(m),
    }
}

/// Largest singular value of any square matrix.
pub fn spectral_norm(m: MatRef<'_, C64>) -> f64 {
    let dim = m.nrows();
    if dim == 0 {
        return 0.0;
    }
    let scale = max_abs(m);
    if scale == 0.0 {
        return 0.0;
    }
    if hermitian_defect(m) <= 1e-14 * scale {
        return hermitian_norm(m);
    }
    if dim <= EXACT_NORM_DIM {
        let g = m.adjoint() * m;
        if let Ok(v) = g.self_adjoint_eigenvalues(Side::Lower) {
            return v[dim - 1].max(0.0).sqrt();
        }
    }
    power_norm(m)
}

/// Power iteration on `M†M`: relative tolerance 1e-12, at most 10 000
/// iterations per start, restarting from a fresh random vector when an
/// attempt stagnates.
pub fn power_norm(m: MatRef<'_, C64>) -> f64 {
    let dim = m.nrows();
    let mut rng = XorShift64Star::new(0x9E37_79B9_7F4A_7C15);
    let mut best = 0.0f64;
    for _attempt in 0..3 {
        let mut v = Mat::<C64>::from_fn(dim, 1, |_, _| C64::new(rng.uniform_pm1(), rng.uniform_pm1()));
        normalize(&mut v);
        let mut last = 0.0f64;
        let mut converged = false;
        for _ in 0..10_000 {
            let mv = m * &v;
            let sigma2 = col_norm(&mv).powi(2);
            let mut w = m.adjoint() * &mv;
            if col_norm(&w) == 0.0 {
                break;
            }
            normalize(&mut w);
            v = w;
            if last > 0.0 && (sigma2 - last).abs() <= 1e-12 * sigma2 {
                last = sigma2;
                converged = true;
                break;
            }
            last = sigma2;
        }
        best = best.max(last.sqrt());
        if converged {
            break;
        }
    }
    best
}

fn col_norm(v: &Mat<C64>) -> f64 {
    (0..v.nrows()).map(|i| v[(i, 0)].norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut Mat<C64>) {
    let n = col_norm(v);
    for i in 0..v.nrows() {
        v[(i, 0)] /= n;
    }
}

pub fn mat_pow(m: MatRef<'_, C64>, mut k: u64) -> Mat<C64> {
    let dim = m.nrows();
    let mut result: Option<Mat<C64>> = None;
    let mut base = m.to_owned();
    while k > 0 {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => &r * &base,
            });
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result.unwrap_or_else(|| Mat::identity(dim, dim))
}
