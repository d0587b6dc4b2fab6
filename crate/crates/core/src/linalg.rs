//! Dense complex matrix kernel for small Hilbert spaces (2, 4, 8).
//!
//! Everything here is sized for qubit registers of at most three qubits, so
//! the implementations favor exactness over asymptotics: the matrix
//! exponential goes through a full Hermitian eigendecomposition (cyclic
//! Jacobi), and the operator Schmidt factorization goes through the
//! eigendecomposition of the realigned Gram matrix. All comparisons carry an
//! explicit tolerance; `CMatrix` deliberately does not implement `PartialEq`.

use num_complex::Complex64;
use thiserror::Error;

/// Errors from the matrix kernel.
#[derive(Debug, Error)]
pub enum LinalgError {
    /// Input to a Hermitian-only routine was not Hermitian.
    #[error("matrix is not Hermitian: max |H - H^dag| = {defect:.3e} exceeds {tol:.1e}")]
    NotHermitian { defect: f64, tol: f64 },
    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    /// A routine restricted to one shape was handed another.
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    WrongShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
}

/// Hermiticity tolerance used by [`expm_hermitian`]: all Hamiltonians in this
/// crate are constructed exactly Hermitian, so this only guards caller error.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Shorthand for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from nested rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from complex entries.
    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
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

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise equality within `tol` (max-abs metric).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    /// Squared Frobenius norm.
    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Max-abs of `H - H^dag`; zero for exactly Hermitian input.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut defect: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                defect = defect.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        defect
    }

    /// Max-abs of `U^dag U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = &self.dagger() * self;
        gram.max_abs_diff(&Self::identity(self.cols))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut lu = self.clone();
        let mut det = Complex64::ONE;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&a, &b| lu[(a, k)].norm().total_cmp(&lu[(b, k)].norm()))
                .unwrap();
            if lu[(pivot, k)].norm() == 0.0 {
                return Complex64::ZERO;
            }
            if pivot != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot, j)];
                    lu[(pivot, j)] = tmp;
                }
                det = -det;
            }
            det *= lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / lu[(k, k)];
                for j in k..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl std::fmt::Display for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(
                    f,
                    "{}({:+.6},{:+.6})",
                    if j == 0 { "" } else { " " },
                    z.re,
                    z.im
                )?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Pauli matrix selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    Identity,
    X,
    Y,
    Z,
}

/// Standard 2x2 Pauli matrix: `sigma_z = diag(1, -1)`,
/// `sigma_y = [[0, -i], [i, 0]]`, `sigma_x = [[0, 1], [1, 0]]`.
pub fn pauli(which: Pauli) -> CMatrix {
    let o = Complex64::ZERO;
    let l = Complex64::ONE;
    let i = Complex64::I;
    match which {
        Pauli::Identity => CMatrix::identity(2),
        Pauli::X => CMatrix::from_rows(&[vec![o, l], vec![l, o]]),
        Pauli::Y => CMatrix::from_rows(&[vec![o, -i], vec![i, o]]),
        Pauli::Z => CMatrix::from_rows(&[vec![l, o], vec![o, -l]]),
    }
}

/// Kronecker product; the left factor is the slow (first-qubit) index.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let aij = a[(ia, ja)];
            if aij == Complex64::ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = aij * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    &(a * b) - &(b * a)
}

/// Hilbert-Schmidt inner product `trace(A^dag B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64, LinalgError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(LinalgError::DimensionMismatch {
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    Ok(hs_dot(a, b))
}

#[inline]
fn hs_dot(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in ascending order and the unitary of
/// eigenvectors as columns. The caller is responsible for Hermiticity.
pub fn eigh(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert!(h.is_square());
    let n = h.rows();
    let mut a = h.clone();
    let mut v = CMatrix::identity(n);
    let tol = f64::EPSILON * a.max_abs().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut changed = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= tol {
                    continue;
                }
                changed = true;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Absorb the phase of a_pq so the 2x2 block becomes real
                // symmetric, then apply the classic Jacobi rotation.
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Column rotation G: g_pp = c, g_pq = s, g_qp = -s e^{-i phi},
                // g_qq = c e^{-i phi}, where a_pq = r e^{i phi}.
                let e_m = phase.conj();
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * e_m * akq;
                    a[(k, q)] = s * akp + c * e_m * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * phase * aqk;
                    a[(q, k)] = s * apk + c * phase * aqk;
                }
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * e_m * vkq;
                    v[(k, q)] = s * vkp + c * e_m * vkq;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Evolution operator `exp(-i t H)` of a Hermitian generator, computed by
/// spectral decomposition. Rejects non-Hermitian input (max-abs defect above
/// [`HERMITICITY_TOL`]) with a diagnostic of the defect.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix, LinalgError> {
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(LinalgError::NotHermitian {
            defect,
            tol: HERMITICITY_TOL,
        });
    }
    let (values, vectors) = eigh(h);
    Ok(recombine_spectral(&values, &vectors, t))
}

/// `V diag(e^{-i t lambda}) V^dag` for a precomputed eigensystem.
pub(crate) fn recombine_spectral(values: &[f64], vectors: &CMatrix, t: f64) -> CMatrix {
    let n = values.len();
    let phases: Vec<Complex64> = values
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -t * lambda))
        .collect();
    CMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| vectors[(i, k)] * phases[k] * vectors[(j, k)].conj())
            .sum()
    })
}

/// One term of an operator Schmidt decomposition `U = sum_k c_k A_k (x) B_k`.
#[derive(Debug, Clone)]
pub struct SchmidtTerm {
    /// Non-negative Schmidt coefficient.
    pub coeff: f64,
    /// 2x2 left (first-qubit) factor, Hilbert-Schmidt normalized.
    pub left: CMatrix,
    /// 2x2 right (second-qubit) factor, Hilbert-Schmidt normalized.
    pub right: CMatrix,
}

/// Operator Schmidt decomposition of a 4x4 operator across the 2(x)2 split.
///
/// Returns all four terms sorted by descending coefficient. The number of
/// coefficients above a tolerance is the operator Schmidt rank; rank 1 means
/// the operator factorizes as `A (x) B`. The terms reconstruct the input:
/// `sum_k c_k left_k (x) right_k = U` to near machine precision, and
/// `sum_k c_k^2 = trace(U^dag U)`.
pub fn operator_schmidt(u: &CMatrix) -> Result<Vec<SchmidtTerm>, LinalgError> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(LinalgError::WrongShape {
            expected: 4,
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    // Realignment: R[2i+j][2k+l] = U[2i+k][2j+l], so that U = A (x) B
    // corresponds to R = vec(A) vec(B)^T with row-major vec.
    let realigned = CMatrix::from_fn(4, 4, |r, c| {
        let (i, j) = (r / 2, r % 2);
        let (k, l) = (c / 2, c % 2);
        u[(2 * i + k, 2 * j + l)]
    });

    // Singular triples of R via the Hermitian eigensystem of R^dag R. The
    // left vectors are recovered as R w / ||R w||, which keeps the
    // reconstruction sum_k (R w_k) w_k^dag exact even for tiny coefficients.
    let gram = &realigned.dagger() * &realigned;
    let (_, w) = eigh(&gram);
    let mut terms: Vec<SchmidtTerm> = (0..4)
        .map(|k| {
            let wk: Vec<Complex64> = (0..4).map(|i| w[(i, k)]).collect();
            let rwk = realigned.mul_vec(&wk);
            let coeff = rwk.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let left = if coeff > 0.0 {
                CMatrix::from_fn(2, 2, |i, j| rwk[2 * i + j] / coeff)
            } else {
                CMatrix::zeros(2, 2)
            };
            let right = CMatrix::from_fn(2, 2, |i, j| wk[2 * i + j].conj());
            SchmidtTerm { coeff, left, right }
        })
        .collect();
    terms.sort_by(|a, b| b.coeff.total_cmp(&a.coeff));
    Ok(terms)
}

/// Number of Schmidt coefficients above `tol`.
pub fn schmidt_rank(terms: &[SchmidtTerm], tol: f64) -> usize {
    terms.iter().filter(|t| t.coeff > tol).count()
}
