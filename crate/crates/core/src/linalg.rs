//! Small dense linear algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// Maximum absolute deviation of `m` from its conjugate transpose.
pub(crate) fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues (ascending) and
/// the matching unitary of column eigenvectors.
pub(crate) fn eigh(m: &DMatrix<Complex64>) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    let se = m
        .clone()
        .try_symmetric_eigen(1.0e-13, 10_000)
        .ok_or(Error::EigenFailure(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| se.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(k));
    }
    Ok((values, vectors))
}

/// exp(i·theta·H) for Hermitian `h`, via eigendecomposition.
pub(crate) fn unitary_from_generator(
    h: &DMatrix<Complex64>,
    theta: f64,
) -> Result<DMatrix<Complex64>> {
    let dev = hermitian_deviation(h);
    if dev > 1.0e-12 {
        return Err(Error::NotHermitian(dev));
    }
    let n = h.nrows();
    let (values, vectors) = eigh(h)?;
    let phases = DVector::from_iterator(
        n,
        values.iter().map(|&v| Complex64::from_polar(1.0, theta * v)),
    );
    let mut scaled = vectors.clone();
    for (col, &p) in phases.iter().enumerate() {
        let mut c = scaled.column_mut(col);
        c *= p;
    }
    Ok(&scaled * vectors.adjoint())
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Small negative eigenvalues (numerical noise) are clipped to zero.
pub(crate) fn sqrt_psd(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let (values, vectors) = eigh(m)?;
    let mut scaled = vectors.clone();
    for (col, &v) in values.iter().enumerate() {
        let r = Complex64::new(v.max(0.0).sqrt(), 0.0);
        let mut c = scaled.column_mut(col);
        c *= r;
    }
    Ok(&scaled * vectors.adjoint())
}
