use crate::adiabatic::CMatrix;
use crate::error::{Error, Result};

/// 1 − |tr(U_target† U_actual)/d|², clamped to [0, 1].
pub fn gate_infidelity(actual: &CMatrix, target: &CMatrix) -> Result<f64> {
    if actual.shape() != target.shape() {
        return Err(Error::DimensionMismatch(actual.nrows(), target.nrows()));
    }
    if actual.nrows() != actual.ncols() {
        return Err(Error::DimensionMismatch(actual.nrows(), actual.ncols()));
    }
    let d = actual.nrows() as f64;
    let overlap = (target.adjoint() * actual).trace() / d;
    Ok((1.0 - overlap.norm_sqr()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn infidelity_examples() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let id = CMatrix::identity(2, 2);
        let x = CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]);
        assert_eq!(gate_infidelity(&id, &id).unwrap(), 0.0);
        assert!(gate_infidelity(&(&x * Complex64::from_polar(1.0, 0.7)), &x).unwrap() < 1e-15);
        assert!((gate_infidelity(&x, &id).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            gate_infidelity(&CMatrix::identity(4, 4), &id),
            Err(Error::DimensionMismatch(4, 2))
        ));
    }
}
