//! Finite matrix realizations in the orthonormalized monomial basis
//! `e_n = z^n / ||z^n||`.
//!
//! For an analytic symbol `b`, multiplication sends `e_k` to
//! `sum_m b_{m-k} (||z^m|| / ||z^k||) e_m`, so the matrix is lower
//! triangular. A finite block of `T T^*` built from a working size
//! `n + buffer` then agrees exactly with the corresponding block of the
//! infinite operator (the defining sums are finite), which is why defect
//! blocks are computed large and restricted rather than truncated in place.

use crate::analytic::{DiskSymbol, PowerSeries};
use crate::bergman::BergmanSpaceModel;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

/// Eigenvalues of a defect matrix below this floor are a contract violation;
/// eigenvalues in `[floor, 0)` are rounding noise and get clamped to zero
/// before taking square roots.
pub const EIGENVALUE_CLAMP_FLOOR: f64 = -1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Toeplitz,
    ToeplitzAdjoint,
    Defect,
    DefectSqrt,
}

/// A dense operator block, tagged with the weight exponent of the space it
/// acts on and with what it was built as.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    alpha: f64,
    kind: OperatorKind,
}

impl OperatorMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Side length of the square block; rows and columns are indexed by
    /// basis degree `0 ..= dim - 1`.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.entries.clone().singular_values()[0]
    }

    /// Largest departure from Hermitian symmetry, `max |A - A^*|` entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Applies the block to a polynomial through the basis conversion.
    /// The input degree must fit inside the block.
    pub fn apply(&self, space: &BergmanSpaceModel, p: &PowerSeries) -> Result<PowerSeries> {
        let dim = self.dim();
        if space.truncation() + 1 < dim {
            return Err(Error::InvalidParameter(format!(
                "space truncation {} is smaller than the operator block {}",
                space.truncation(),
                dim - 1
            )));
        }
        if let Some(d) = p.degree() {
            if d >= dim {
                return Err(Error::IndexOutOfRange { index: d, max: dim - 1 });
            }
        }
        let coords = space.to_orthonormal(p)?;
        let head: DVector<Complex64> = coords.rows(0, dim).into_owned();
        space.from_orthonormal(&(&self.entries * head))
    }
}

/// Matrix of multiplication by the analytic symbol with the given Taylor
/// coefficients, on basis degrees `0 ..= n`.
pub fn toeplitz_matrix(
    space: &BergmanSpaceModel,
    symbol: &PowerSeries,
    n: usize,
) -> Result<OperatorMatrix> {
    if space.truncation() < n {
        return Err(Error::InvalidParameter(format!(
            "block size {n} exceeds the space truncation {}",
            space.truncation()
        )));
    }
    let mut entries = DMatrix::<Complex64>::zeros(n + 1, n + 1);
    for col in 0..=n {
        let col_norm = space.monomial_norm(col)?;
        for row in col..=n {
            let b = symbol.coeff(row - col);
            if b != Complex64::ZERO {
                entries[(row, col)] = b * (space.monomial_norm(row)? / col_norm);
            }
        }
    }
    Ok(OperatorMatrix { entries, alpha: space.alpha(), kind: OperatorKind::Toeplitz })
}

/// [`toeplitz_matrix`] with the symbol expanded to the block size first, so
/// the truncation cannot silently drop low-order coefficients.
pub fn toeplitz_matrix_for(
    space: &BergmanSpaceModel,
    symbol: &DiskSymbol,
    n: usize,
) -> Result<OperatorMatrix> {
    toeplitz_matrix(space, &symbol.series(n), n)
}

/// Conjugate transpose.
pub fn adjoint(m: &OperatorMatrix) -> OperatorMatrix {
    let kind = match m.kind {
        OperatorKind::Toeplitz => OperatorKind::ToeplitzAdjoint,
        OperatorKind::ToeplitzAdjoint => OperatorKind::Toeplitz,
        other => other,
    };
    OperatorMatrix { entries: m.entries.adjoint(), alpha: m.alpha, kind }
}

/// The defect block `I - T_phi T_phi^*` on degrees `0 ..= n`, computed at
/// working size `n + buffer` and then restricted, with an explicit Hermitian
/// symmetrization at the end.
pub fn defect_matrix(
    space: &BergmanSpaceModel,
    phi: &DiskSymbol,
    n: usize,
    buffer: usize,
) -> Result<OperatorMatrix> {
    let n_work = n + buffer;
    if space.truncation() < n_work {
        return Err(Error::InvalidParameter(format!(
            "space truncation {} is smaller than working size {n_work}",
            space.truncation()
        )));
    }
    let t = toeplitz_matrix_for(space, phi, n_work)?;
    let product = &t.entries * t.entries.adjoint();
    let mut block = DMatrix::<Complex64>::identity(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            block[(i, j)] -= product[(i, j)];
        }
    }
    let hermitized = (&block + block.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(OperatorMatrix { entries: hermitized, alpha: space.alpha(), kind: OperatorKind::Defect })
}

/// Hermitian square root of a positive semidefinite block via its spectral
/// decomposition. Eigenvalues in `[-1e-8, 0)` are clamped to zero; anything
/// below the floor raises [`Error::ContractionViolation`], because a defect
/// of an actual contraction cannot be that negative.
pub fn defect_sqrt(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    let herm = m.hermitian_defect();
    if herm > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "matrix is not Hermitian (defect {herm:e}); square root undefined"
        )));
    }
    let eigen = SymmetricEigen::new(m.entries.clone());
    let min_eig = eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig < EIGENVALUE_CLAMP_FLOOR {
        return Err(Error::ContractionViolation { min_eigenvalue: min_eig });
    }
    let dim = m.dim();
    let mut scaled = eigen.eigenvectors.clone();
    for (j, lambda) in eigen.eigenvalues.iter().enumerate() {
        let root = lambda.max(0.0).sqrt();
        for i in 0..dim {
            scaled[(i, j)] *= root;
        }
    }
    let sqrt = &scaled * eigen.eigenvectors.adjoint();
    let hermitized = (&sqrt + sqrt.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(OperatorMatrix { entries: hermitized, alpha: m.alpha, kind: OperatorKind::DefectSqrt })
}

/// Result of applying a defect operator (or its square root) to a
/// polynomial, with the truncation bookkeeping that says how far the output
/// coefficients are trustworthy.
#[derive(Debug, Clone, Serialize)]
pub struct DefectApplication {
    pub input: PowerSeries,
    pub output: PowerSeries,
    /// Size the matrices were built at.
    pub n_work: usize,
    /// Coefficients through this degree are exact up to rounding.
    pub n_trust: usize,
    /// Bound on the dropped tail evaluated on `|z| <= 0.7`:
    /// `sum_{k > n_trust} |c_k| 0.7^k`.
    pub tail_estimate: f64,
    pub used_sqrt: bool,
}

/// Applies `I - T_phi T_phi^*` (or its square root) to `input`, working at
/// size `n_trust + buffer`.
pub fn apply_defect(
    space: &BergmanSpaceModel,
    phi: &DiskSymbol,
    input: &PowerSeries,
    n_trust: usize,
    buffer: usize,
    use_sqrt: bool,
) -> Result<DefectApplication> {
    if let Some(d) = input.degree() {
        if d > n_trust {
            return Err(Error::IndexOutOfRange { index: d, max: n_trust });
        }
    }
    let n_work = n_trust + buffer;
    let mut operator = defect_matrix(space, phi, n_work, 0)?;
    if use_sqrt {
        operator = defect_sqrt(&operator)?;
    }
    let output = operator.apply(space, input)?;
    let tail_estimate = output
        .coeffs()
        .iter()
        .enumerate()
        .skip(n_trust + 1)
        .map(|(k, c)| c.norm() * 0.7f64.powi(k as i32))
        .sum();
    Ok(DefectApplication {
        input: input.clone(),
        output,
        n_work,
        n_trust,
        tail_estimate,
        used_sqrt: use_sqrt,
    })
}
