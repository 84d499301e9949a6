//! Dense linear-algebra helpers shared by the coupling and response modules.

use nalgebra::linalg::LU;
use nalgebra::Dyn;

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, Complex64};

/// Largest 1-norm condition number accepted by [`Factorized::new`].
pub(crate) const MAX_CONDITION: f64 = 1e14;

pub(crate) fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Partial-pivot LU factorization with its 1-norm condition number.
pub(crate) struct Factorized {
    lu: LU<Complex64, Dyn, Dyn>,
    inverse: CMatrix,
    pub(crate) condition: f64,
}

impl Factorized {
    pub(crate) fn new(m: &CMatrix, context: &str) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Domain(format!(
                "{context}: matrix is {}×{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        let lu = m.clone().lu();
        let singular = |condition| Error::Singular {
            context: context.to_string(),
            condition,
        };
        let inverse = lu
            .solve(&CMatrix::identity(n, n))
            .ok_or_else(|| singular(f64::INFINITY))?;
        let condition = norm1(m) * norm1(&inverse);
        log::debug!("{context}: 1-norm condition number {condition:.3e}");
        if !condition.is_finite() || condition > MAX_CONDITION {
            return Err(singular(condition));
        }
        Ok(Self {
            lu,
            inverse,
            condition,
        })
    }

    pub(crate) fn inverse(&self) -> &CMatrix {
        &self.inverse
    }

    pub(crate) fn solve(&self, b: &CVector) -> CVector {
        self.lu
            .solve(b)
            .expect("factorization was checked to be non-singular")
    }
}

/// Maximum entrywise deviation from Hermitian symmetry.
pub(crate) fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Maximum entrywise deviation from (plain) symmetry.
pub(crate) fn symmetric_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            worst = worst.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    worst
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn inverse_and_condition() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(3.0, 0.0),
            ],
        );
        let f = Factorized::new(&m, "test").unwrap();
        let prod = &m * f.inverse();
        assert!((prod - CMatrix::identity(2, 2)).norm() < 1e-14);
        // ‖M‖₁ = 4, M⁻¹ = [[3, −i], [−i, 2]]/7 so ‖M⁻¹‖₁ = 4/7.
        assert_relative_eq!(f.condition, 16.0 / 7.0, max_relative = 1e-12);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = CMatrix::from_element(3, 3, Complex64::new(1.0, 0.0));
        assert!(matches!(
            Factorized::new(&m, "ones"),
            Err(Error::Singular { .. })
        ));
    }
}
