use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Absolute tolerance on norms of O(1)-sized (unitary or near-unitary) matrices.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Eigenvalues of the commutator Gram matrix below this fraction of the largest one are
/// treated as zero.
const NULL_SPACE_THRESHOLD: f64 = 1e-8;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn scalar(z: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_element(1, 1, z)
}

pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    ComplexMatrix::from_fn(r, c, |i, j| c64(rows[i][j], 0.0))
}

pub fn frob(m: &ComplexMatrix) -> f64 {
    m.norm()
}

/// Frobenius inner product `tr(a* b)`.
pub fn frob_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).norm()
}

pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
    dist(&(m.adjoint() * m), &identity(m.ncols()))
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Block-diagonal matrix with the given square blocks.
pub fn block_diag(blocks: &[&ComplexMatrix]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        out.view_mut((off, off), (b.nrows(), b.ncols())).copy_from(b);
        off += b.nrows();
    }
    out
}

/// `n` copies of `m` down the diagonal, i.e. `1_n (x) m` with blocks ordered by copy.
pub fn repeat_diag(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    kron(&identity(n), m)
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        if let Ok(u) = polar_unitary(&random_matrix(d, d, rng), DEFAULT_TOL) {
            return u;
        }
    }
}

pub fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    let a = random_matrix(d, d, rng);
    (&a + a.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and a unitary
/// matrix whose columns are the matching eigenvectors.
pub fn eig_hermitian(a: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{}x{} matrix is not square", a.nrows(), a.ncols())));
    }
    let skew = dist(a, &a.adjoint());
    if skew > tol * frob(a).max(1.0) {
        return Err(Error::Shape(format!("matrix is not Hermitian (residual {skew:.3e})")));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let herm = (a + a.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Unitary polar factor `A (A* A)^{-1/2}`.
pub fn polar_unitary(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{}x{} matrix is not square", a.nrows(), a.ncols())));
    }
    let gram = a.adjoint() * a;
    let (values, p) = eig_hermitian(&gram, tol)?;
    let min_singular = values.first().map_or(0.0, |v| v.max(0.0).sqrt());
    if min_singular < tol {
        return Err(Error::Singular { min_singular });
    }
    let inv_sqrt = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|v| c64(1.0 / v.sqrt(), 0.0)),
    ));
    Ok(a * &p * inv_sqrt * p.adjoint())
}

/// Orthonormal (Frobenius) basis of `{T : TM = MT for all M in mats}`.
///
/// The null space of the stacked maps `T -> MT - TM` is read off the Gram matrix
/// `sum K_M* K_M`, where `K_M = 1 (x) M - M^T (x) 1` acts on column-major `vec(T)`.
pub fn joint_commutant(mats: &[ComplexMatrix], dim: usize, tol: f64) -> Vec<ComplexMatrix> {
    let d2 = dim * dim;
    let id = identity(dim);
    let mut gram = ComplexMatrix::zeros(d2, d2);
    for m in mats {
        assert_eq!(m.shape(), (dim, dim), "joint_commutant needs square matrices of one size");
        let mt = m.transpose();
        let mbar = m.map(|z| z.conj());
        gram += kron(&id, &(m.adjoint() * m));
        gram += kron(&(&mbar * &mt), &id);
        gram -= kron(&mt, &m.adjoint());
        gram -= kron(&mbar, m);
    }
    if mats.is_empty() {
        // everything commutes
        return (0..d2)
            .map(|k| {
                let mut t = ComplexMatrix::zeros(dim, dim);
                t[(k % dim, k / dim)] = c64(1.0, 0.0);
                t
            })
            .collect();
    }
    let (values, vectors) = eig_hermitian(&gram, tol.max(1e-12) * 1e3)
        .expect("commutator Gram matrix is Hermitian by construction");
    let top = values.last().copied().unwrap_or(0.0).max(1.0);
    values
        .iter()
        .enumerate()
        .take_while(|(_, &v)| v <= NULL_SPACE_THRESHOLD * top)
        .map(|(k, _)| ComplexMatrix::from_fn(dim, dim, |i, j| vectors[(i + dim * j, k)]))
        .collect()
}

/// Coefficients of `t` in an orthonormal basis, and the residual of the projection.
pub fn project_onto(basis: &[ComplexMatrix], t: &ComplexMatrix) -> (Vec<Complex64>, f64) {
    let coeffs: Vec<Complex64> = basis.iter().map(|b| frob_inner(b, t)).collect();
    let mut proj = ComplexMatrix::zeros(t.nrows(), t.ncols());
    for (c, b) in coeffs.iter().zip(basis) {
        proj += b * *c;
    }
    (coeffs, dist(&proj, t))
}

/// `exp(iH)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    let (values, p) = eig_hermitian(h, 1e-6).expect("generator must be Hermitian");
    let phases = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|v| Complex64::from_polar(1.0, *v)),
    ));
    &p * phases * p.adjoint()
}
