//! Complex polynomials in the monomial basis, used for edge coefficients.

use num_complex::Complex64;

/// A polynomial `Σ coeffs[j] s^j`; the empty coefficient list is the zero
/// polynomial.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// Convenience constructor from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// All stored coefficients exactly zero (the empty list counts).
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Horner evaluation at a real argument.
    pub fn eval(&self, s: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_by_horner() {
        // 1 + 2s + 3s²
        let p = Polynomial::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(p.eval(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(p.eval(1.0), Complex64::new(6.0, 0.0));
        assert_eq!(p.eval(-1.0), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn empty_list_is_zero() {
        let p = Polynomial::zero();
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
        assert_eq!(p.eval(0.3), Complex64::new(0.0, 0.0));
    }
}
