//! Univariate polynomials with exact rational coefficients.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i128>;

/// Coefficients in increasing degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_integers(c: &[i128]) -> Self {
        Poly::new(c.iter().map(|&x| Q::from_integer(x)).collect())
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).copied().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().copied().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, &c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Q {
        self.eval(Q::from_integer(x as i128))
    }

    /// Lagrange interpolation through integer samples with distinct abscissae.
    pub fn interpolate(samples: &[(i64, i64)]) -> Poly {
        let pts: Vec<(Q, Q)> = samples
            .iter()
            .map(|&(x, y)| (Q::from_integer(x as i128), Q::from_integer(y as i128)))
            .collect();
        Poly::interpolate_rational(&pts)
    }

    pub fn interpolate_rational(pts: &[(Q, Q)]) -> Poly {
        let m = pts.len();
        let mut acc = vec![Q::zero(); m];
        for (i, &(xi, yi)) in pts.iter().enumerate() {
            // basis polynomial prod_{j != i} (x - xj) / (xi - xj)
            let mut basis = vec![Q::one()];
            let mut denom = Q::one();
            for (j, &(xj, _)) in pts.iter().enumerate() {
                if j == i {
                    continue;
                }
                let mut next = vec![Q::zero(); basis.len() + 1];
                for (d, &c) in basis.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * xj;
                }
                basis = next;
                denom *= xi - xj;
            }
            let scale = yi / denom;
            for (d, c) in basis.into_iter().enumerate() {
                acc[d] += c * scale;
            }
        }
        Poly::new(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_cubic() {
        let f = |d: i64| d * d * d - 2 * d * d + 1;
        let samples: Vec<(i64, i64)> = (1..=5).map(|d| (d, f(d))).collect();
        let p = Poly::interpolate(&samples);
        assert_eq!(p, Poly::from_integers(&[1, 0, -2, 1]));
        assert_eq!(p.eval_int(-3), Q::from_integer(f(-3) as i128));
    }

    #[test]
    fn zero_polynomial() {
        let p = Poly::interpolate(&[(0, 0), (1, 0), (2, 0)]);
        assert_eq!(p.degree(), None);
    }
}
