//! Covariance structure generation.
//!
//! Populations are described in standardized space (every feature has SD 1),
//! so covariance matrices are correlation matrices: unit diagonal, symmetric,
//! positive semi-definite. Off-diagonals are drawn independently per the
//! requested structure and may therefore violate PSD; draws are repaired by
//! eigenvalue clamping before use.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};

/// Default off-diagonal range for unstructured random correlations.
pub const RANDOM_OFF_DIAG_RANGE: (f64, f64) = (-0.3, 0.3);
/// Default magnitude range for within-factor correlations (sign randomized).
pub const FACTOR_WITHIN_MAGNITUDE_RANGE: (f64, f64) = (0.4, 0.9);
/// Default range for correlations between features of different factors.
pub const FACTOR_BETWEEN_RANGE: (f64, f64) = (-0.3, 0.3);

/// Eigenvalue floor applied during PSD repair.
const EIGENVALUE_FLOOR: f64 = 1e-8;

/// How a subgroup's correlation structure is generated.
#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceSpec {
    /// No correlation between features.
    Identity,
    /// Every off-diagonal drawn uniformly from `off_diag_range`.
    RandomUniform { off_diag_range: (f64, f64) },
    /// Features partitioned into `n_factors` contiguous blocks of near-equal
    /// size. Within-block correlations have magnitude drawn from
    /// `within_magnitude_range` with independently random sign; between-block
    /// correlations are drawn from `between_range`.
    Factor {
        n_factors: usize,
        within_magnitude_range: (f64, f64),
        between_range: (f64, f64),
    },
}

impl CovarianceSpec {
    /// Unstructured random correlations with the default [-0.3, 0.3] range.
    pub fn random_uniform() -> Self {
        CovarianceSpec::RandomUniform {
            off_diag_range: RANDOM_OFF_DIAG_RANGE,
        }
    }

    /// Factor structure with the default ranges.
    pub fn factor(n_factors: usize) -> Self {
        CovarianceSpec::Factor {
            n_factors,
            within_magnitude_range: FACTOR_WITHIN_MAGNITUDE_RANGE,
            between_range: FACTOR_BETWEEN_RANGE,
        }
    }

    fn check(&self, p: usize) -> Result<()> {
        if p == 0 {
            return Err(Error::InvalidSpec("p must be at least 1".into()));
        }
        let range_ok = |(lo, hi): (f64, f64)| lo <= hi && lo.is_finite() && hi.is_finite();
        match self {
            CovarianceSpec::Identity => Ok(()),
            CovarianceSpec::RandomUniform { off_diag_range } => {
                if !range_ok(*off_diag_range) {
                    return Err(Error::InvalidSpec("malformed off-diagonal range".into()));
                }
                Ok(())
            }
            CovarianceSpec::Factor {
                n_factors,
                within_magnitude_range,
                between_range,
            } => {
                if *n_factors == 0 || p < *n_factors {
                    return Err(Error::InvalidSpec(format!(
                        "{p} features cannot hold {n_factors} factors"
                    )));
                }
                if !range_ok(*within_magnitude_range) || !range_ok(*between_range) {
                    return Err(Error::InvalidSpec("malformed factor range".into()));
                }
                if within_magnitude_range.0 < 0.0 {
                    return Err(Error::InvalidSpec(
                        "within-factor magnitude range must be nonnegative".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Assigns each of `p` features to one of `n_factors` contiguous blocks whose
/// sizes differ by at most one (e.g. 15 features, 4 factors -> 4/4/4/3).
pub fn factor_blocks(p: usize, n_factors: usize) -> Vec<usize> {
    let base = p / n_factors;
    let extra = p % n_factors;
    let mut blocks = Vec::with_capacity(p);
    for factor in 0..n_factors {
        let size = base + usize::from(factor < extra);
        blocks.extend(std::iter::repeat(factor).take(size));
    }
    blocks
}

/// Draws a correlation matrix per `spec` without PSD repair.
///
/// Exposed so the raw draws can be inspected; `build_covariance` is the
/// sampling-ready version.
pub fn raw_covariance(spec: &CovarianceSpec, p: usize, rng: &mut impl Rng) -> Result<DMatrix<f64>> {
    spec.check(p)?;
    let mut m = DMatrix::identity(p, p);
    match spec {
        CovarianceSpec::Identity => {}
        CovarianceSpec::RandomUniform { off_diag_range } => {
            let (lo, hi) = *off_diag_range;
            for i in 0..p {
                for j in (i + 1)..p {
                    let r = rng.random_range(lo..=hi);
                    m[(i, j)] = r;
                    m[(j, i)] = r;
                }
            }
        }
        CovarianceSpec::Factor {
            n_factors,
            within_magnitude_range,
            between_range,
        } => {
            let blocks = factor_blocks(p, *n_factors);
            let (wlo, whi) = *within_magnitude_range;
            let (blo, bhi) = *between_range;
            for i in 0..p {
                for j in (i + 1)..p {
                    let r = if blocks[i] == blocks[j] {
                        let magnitude = rng.random_range(wlo..=whi);
                        if rng.random::<bool>() {
                            magnitude
                        } else {
                            -magnitude
                        }
                    } else {
                        rng.random_range(blo..=bhi)
                    };
                    m[(i, j)] = r;
                    m[(j, i)] = r;
                }
            }
        }
    }
    Ok(m)
}

/// Draws a correlation matrix and repairs it into a valid (PSD, unit-diagonal)
/// sampling covariance.
pub fn build_covariance(
    spec: &CovarianceSpec,
    p: usize,
    rng: &mut impl Rng,
) -> Result<DMatrix<f64>> {
    let raw = raw_covariance(spec, p, rng)?;
    if matches!(spec, CovarianceSpec::Identity) {
        return Ok(raw);
    }
    Ok(nearest_psd(&raw))
}

/// Repairs a symmetric matrix into a PSD matrix with unit diagonal.
///
/// Eigenvalues are clamped at a small positive floor, the matrix is
/// reconstructed, and the diagonal rescaled back to 1. Inputs that are already
/// PSD with unit diagonal are returned unchanged.
pub fn nearest_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let p = m.nrows();
    assert_eq!(p, m.ncols(), "nearest_psd expects a square matrix");

    let eigen = SymmetricEigen::new(m.clone());
    let min_eig = eigen.eigenvalues.min();
    let unit_diag = (0..p).all(|i| (m[(i, i)] - 1.0).abs() <= 1e-12);
    if min_eig >= 0.0 && unit_diag {
        return m.clone();
    }

    let clamped = eigen.eigenvalues.map(|v| v.max(EIGENVALUE_FLOOR));
    let mut repaired =
        &eigen.eigenvectors * DMatrix::from_diagonal(&clamped) * eigen.eigenvectors.transpose();

    // rescale to unit diagonal: D^{-1/2} M D^{-1/2}
    let scale: Vec<f64> = (0..p).map(|i| repaired[(i, i)].sqrt()).collect();
    for i in 0..p {
        for j in 0..p {
            repaired[(i, j)] /= scale[i] * scale[j];
        }
    }
    // kill floating-point asymmetry from the reconstruction
    for i in 0..p {
        repaired[(i, i)] = 1.0;
        for j in (i + 1)..p {
            let v = 0.5 * (repaired[(i, j)] + repaired[(j, i)]);
            repaired[(i, j)] = v;
            repaired[(j, i)] = v;
        }
    }
    repaired
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}
