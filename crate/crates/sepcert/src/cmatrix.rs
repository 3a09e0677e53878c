//! Dense complex linear algebra kernel.
//!
//! Row-major dense complex matrices with the handful of operations the
//! certification pipeline needs: Kronecker products, partial transposition
//! over chosen subsystems, a cyclic Jacobi eigensolver for Hermitian
//! matrices, PSD square roots and Frobenius distances.
//!
//! Index convention used across the crate: subsystem 1 is the most
//! significant digit, so the basis state |i_1 i_2 ... i_N> of an N-qudit
//! register maps to the flat index sum_r i_r * d^(N-r).

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Scalar;

/// Hard cap on any matrix dimension produced by this crate (d^N <= 1024).
pub const DIM_CAP: usize = 1024;

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("entry count {got} does not match {rows}x{cols}")]
    EntryCount {
        rows: usize,
        cols: usize,
        got: usize,
    },
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("result dimension {dim} exceeds the cap {cap}")]
    SizeLimit { dim: usize, cap: usize },
    #[error("matrix is not Hermitian: max |A_ij - conj(A_ji)| = {0:e}")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite: min eigenvalue {0:e}")]
    NotPsd(f64),
    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})"
    )]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("subsystem dimensions {dims:?} multiply to {product}, matrix has dimension {dim}")]
    DimsMismatch {
        dims: Vec<usize>,
        product: usize,
        dim: usize,
    },
    #[error("invalid subsystem subset: {0}")]
    InvalidSubset(String),
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> CMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex<T>>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Square matrix with the given real diagonal.
    pub fn from_diag(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            *m.at_mut(i, i) = Complex::new(x, T::zero());
        }
        m
    }

    /// Column vector.
    pub fn column(entries: Vec<Complex<T>>) -> Self {
        let rows = entries.len();
        Self {
            rows,
            cols: 1,
            entries,
        }
    }

    /// Projector |i><i| on a d-dimensional space.
    pub fn basis_projector(d: usize, i: usize) -> Self {
        let mut m = Self::zeros(d, d);
        *m.at_mut(i, i) = Complex::new(T::one(), T::zero());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex<T> {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Complex<T> {
        &mut self.entries[r * self.cols + c]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix addition shape"
        );
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix subtraction shape"
        );
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, factor: T) -> Self {
        let entries = self.entries.iter().map(|z| z.scale(factor)).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale_complex(&self, factor: Complex<T>) -> Self {
        let entries = self.entries.iter().map(|z| z * factor).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik.re == T::zero() && aik.im == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + aik * other.at(k, j);
                    *out.at_mut(i, j) = v;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transposition).
    pub fn conjugate(&self) -> Self {
        let entries = self.entries.iter().map(|z| z.conj()).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j);
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square(), "trace of a non-square matrix");
        let mut t = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            t += self.at(i, i);
        }
        t
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// (A + A†)/2. Used on results that are Hermitian analytically to
    /// suppress one-ulp asymmetry before eigensolving.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square(), "hermitize of a non-square matrix");
        let half = T::from_f64(0.5).unwrap();
        let mut out = Self::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                let v = (self.at(i, j) + self.at(j, i).conj()).scale(half);
                *out.at_mut(i, j) = v;
            }
        }
        out
    }

    /// max_{i,j} |A_ij - conj(A_ji)|.
    pub fn hermiticity_deviation(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..=i {
                let dev = (self.at(i, j) - self.at(j, i).conj()).norm();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }

    pub fn require_hermitian(&self) -> Result<(), MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let dev = self.hermiticity_deviation();
        if dev > T::herm_tol() {
            return Err(MatrixError::NotHermitian(dev.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(())
    }

    /// Outer product |v><v| of a column vector.
    pub fn outer(&self) -> Self {
        assert_eq!(self.cols, 1, "outer product of a non-column matrix");
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(i, j) = self.entries[i] * self.entries[j].conj();
            }
        }
        out
    }
}

impl<T: Scalar> std::ops::Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, other: &CMatrix<T>) -> CMatrix<T> {
        CMatrix::add(self, other)
    }
}

impl<T: Scalar> std::ops::Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, other: &CMatrix<T>) -> CMatrix<T> {
        CMatrix::sub(self, other)
    }
}

impl<T: Scalar> std::ops::Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, other: &CMatrix<T>) -> CMatrix<T> {
        self.matmul(other)
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// matching unit-norm eigenvector columns, A = V diag(w) V†.
#[derive(Debug, Clone)]
pub struct EigenResult<T: Scalar> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: CMatrix<T>,
}

/// Kronecker product a ⊗ b.
///
/// (kron)_{(i*br+k),(j*bc+l)} = a_{ij} * b_{kl}; refuses results whose
/// dimension would exceed [`DIM_CAP`].
pub fn kron<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>, MatrixError> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let dim = rows.max(cols);
    if dim > DIM_CAP {
        return Err(MatrixError::SizeLimit { dim, cap: DIM_CAP });
    }
    let mut out = CMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.at(i, j);
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    *out.at_mut(i * b.rows() + k, j * b.cols() + l) = aij * b.at(k, l);
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all<T: Scalar>(factors: &[CMatrix<T>]) -> Result<CMatrix<T>, MatrixError> {
    assert!(!factors.is_empty(), "kron_all of an empty factor list");
    let mut out = factors[0].clone();
    for f in &factors[1..] {
        out = kron(&out, f)?;
    }
    Ok(out)
}

fn off_diagonal_norm<T: Scalar>(a: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.at(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input must be Hermitian within [`Scalar::herm_tol`]. Sweeps run until
/// the off-diagonal Frobenius norm falls below
/// `jacobi_off_tol * max(1, ||A||_F)` or [`MAX_JACOBI_SWEEPS`] is exhausted.
pub fn hermitian_eigen<T: Scalar>(a: &CMatrix<T>) -> Result<EigenResult<T>, MatrixError> {
    a.require_hermitian()?;
    let n = a.rows();
    if n == 0 {
        return Ok(EigenResult {
            eigenvalues: vec![],
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    // Exact averaging kills one-ulp asymmetry so the working matrix starts
    // bitwise Hermitian.
    let mut m = a.hermitize();
    let mut v = CMatrix::<T>::identity(n);
    let scale = T::one().max(m.frobenius_norm());
    let target = T::jacobi_off_tol() * scale;

    let mut residual = off_diagonal_norm(&m);
    let mut converged = residual <= target;
    let mut sweeps = 0usize;
    while !converged && sweeps < MAX_JACOBI_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m.at(p, q);
                let ab = b.norm();
                if ab == T::zero() {
                    continue;
                }
                let phase = b.unscale(ab);
                let app = m.at(p, p).re;
                let aqq = m.at(q, q).re;
                let two = T::from_f64(2.0).unwrap();
                let tau = (aqq - app) / (two * ab);
                let t = if tau == T::zero() {
                    T::one()
                } else {
                    tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = phase.scale(t * c);
                let s_conj = s.conj();
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = m.at(i, p);
                    let aiq = m.at(i, q);
                    let new_p = aip.scale(c) - s_conj * aiq;
                    let new_q = s * aip + aiq.scale(c);
                    *m.at_mut(i, p) = new_p;
                    *m.at_mut(i, q) = new_q;
                    *m.at_mut(p, i) = new_p.conj();
                    *m.at_mut(q, i) = new_q.conj();
                }
                *m.at_mut(p, p) = Complex::new(app - t * ab, T::zero());
                *m.at_mut(q, q) = Complex::new(aqq + t * ab, T::zero());
                *m.at_mut(p, q) = Complex::new(T::zero(), T::zero());
                *m.at_mut(q, p) = Complex::new(T::zero(), T::zero());
                for i in 0..n {
                    let vip = v.at(i, p);
                    let viq = v.at(i, q);
                    *v.at_mut(i, p) = vip.scale(c) - s_conj * viq;
                    *v.at_mut(i, q) = s * vip + viq.scale(c);
                }
            }
        }
        sweeps += 1;
        residual = off_diagonal_norm(&m);
        converged = residual <= target;
    }
    if !converged {
        return Err(MatrixError::NoConvergence {
            sweeps,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m.at(i, i).re).collect();
    order.sort_by(|&i, &j| {
        diag[i]
            .partial_cmp(&diag[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            *vectors.at_mut(i, new_col) = v.at(i, old_col);
        }
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Scalar>(a: &CMatrix<T>) -> Result<T, MatrixError> {
    Ok(hermitian_eigen(a)?.eigenvalues[0])
}

/// PSD square root S of a Hermitian PSD matrix, S*S ≈ a.
///
/// Eigenvalues in `[-psd_floor, 0)` are clamped to zero; anything below the
/// floor is rejected with the offending eigenvalue.
pub fn psd_sqrt<T: Scalar>(a: &CMatrix<T>) -> Result<CMatrix<T>, MatrixError> {
    let eig = hermitian_eigen(a)?;
    let min = eig.eigenvalues[0];
    if min < -T::psd_floor() {
        return Err(MatrixError::NotPsd(min.to_f64().unwrap_or(f64::NAN)));
    }
    let n = a.rows();
    let v = eig.eigenvectors;
    // S = V sqrt(Λ) V†
    let mut scaled = v.clone();
    for (j, &w) in eig.eigenvalues.iter().enumerate() {
        let root = if w > T::zero() { w.sqrt() } else { T::zero() };
        for i in 0..n {
            let z = scaled.at(i, j).scale(root);
            *scaled.at_mut(i, j) = z;
        }
    }
    Ok(scaled.matmul(&v.adjoint()).hermitize())
}

fn decode_digits(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0usize; dims.len()];
    for (k, &d) in dims.iter().enumerate().rev() {
        digits[k] = flat % d;
        flat /= d;
    }
    digits
}

fn encode_digits(digits: &[usize], dims: &[usize]) -> usize {
    let mut flat = 0usize;
    for (k, &d) in dims.iter().enumerate() {
        flat = flat * d + digits[k];
    }
    flat
}

fn check_subset(subset: &[usize], n_subsystems: usize) -> Result<Vec<usize>, MatrixError> {
    if subset.is_empty() {
        return Err(MatrixError::InvalidSubset("empty subset".into()));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() {
        return Err(MatrixError::InvalidSubset(
            "duplicate subsystem index".into(),
        ));
    }
    if sorted[0] < 1 || *sorted.last().unwrap() > n_subsystems {
        return Err(MatrixError::InvalidSubset(format!(
            "indices must lie in 1..={n_subsystems}"
        )));
    }
    if sorted.len() == n_subsystems {
        return Err(MatrixError::InvalidSubset(
            "transposing every subsystem is the full transpose; choose a proper subset".into(),
        ));
    }
    Ok(sorted)
}

/// Partial transpose of `rho` over the (1-based) subsystems in `subset`.
///
/// Row and column digits of the selected subsystems are exchanged; the
/// operation is an exact entry permutation, hence an involution.
pub fn partial_transpose<T: Scalar>(
    rho: &CMatrix<T>,
    dims: &[usize],
    subset: &[usize],
) -> Result<CMatrix<T>, MatrixError> {
    if !rho.is_square() {
        return Err(MatrixError::NotSquare(rho.rows(), rho.cols()));
    }
    let product: usize = dims.iter().product();
    if dims.is_empty() || product != rho.rows() {
        return Err(MatrixError::DimsMismatch {
            dims: dims.to_vec(),
            product,
            dim: rho.rows(),
        });
    }
    let subset = check_subset(subset, dims.len())?;
    let dim = rho.rows();
    let digit_table: Vec<Vec<usize>> = (0..dim).map(|x| decode_digits(x, dims)).collect();
    let mut out = CMatrix::zeros(dim, dim);
    let mut rd = vec![0usize; dims.len()];
    let mut cd = vec![0usize; dims.len()];
    for r in 0..dim {
        for c in 0..dim {
            rd.copy_from_slice(&digit_table[r]);
            cd.copy_from_slice(&digit_table[c]);
            for &s in &subset {
                std::mem::swap(&mut rd[s - 1], &mut cd[s - 1]);
            }
            *out.at_mut(encode_digits(&rd, dims), encode_digits(&cd, dims)) = rho.at(r, c);
        }
    }
    Ok(out)
}

/// Frobenius distance ||a - b||_F.
pub fn frobenius_distance<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<T, MatrixError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(MatrixError::ShapeMismatch(
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
        ));
    }
    let mut s = T::zero();
    for (x, y) in a.entries().iter().zip(b.entries()) {
        s += (x - y).norm_sqr();
    }
    Ok(s.sqrt())
}
