//! Populations of the bare states.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::smallmat::{CMat, CVec};

/// Bare-state populations `Pⱼ`.
pub trait Populations {
    fn populations(&self) -> Vec<f64>;
}

impl Populations for CVec {
    /// `Pⱼ = |aⱼ|²`.
    fn populations(&self) -> Vec<f64> {
        self.iter().map(|a| a.norm_sqr()).collect()
    }
}

impl Populations for CMat {
    /// `Pⱼ = |⟨j|ρ|j⟩|`. The modulus keeps the definition usable when a
    /// non-Hermitian generator has moved the diagonal off the real axis by
    /// rounding.
    fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self[(j, j)].norm()).collect()
    }
}

/// Smallest `P₁ + P₂` for which relative populations are defined.
pub const MIN_TOTAL_POPULATION: f64 = 1e-12;

/// `P′ⱼ = Pⱼ/(P₁ + P₂)`.
pub fn relative_populations(p1: f64, p2: f64) -> Result<(f64, f64)> {
    let total = p1 + p2;
    if total.is_nan() || total <= MIN_TOTAL_POPULATION {
        return Err(Error::UndefinedRelativePopulation(total));
    }
    Ok((p1 / total, p2 / total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::C64;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn pure_and_mixed() {
        let ground = CVec::basis(2, 1).unwrap();
        let rho = ground.outer(&ground).unwrap();
        assert_eq!(rho.populations(), [1.0, 0.0]);
        let plus = CVec::from_slice(&[C64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let p = plus.populations();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn unnormalized_density_is_allowed() {
        let rho = CMat::diag(&[C64::new(0.7, 0.0), C64::new(0.6, 1e-17)]).unwrap();
        let p = rho.populations();
        assert!(p[0] + p[1] > 1.0);
    }

    #[test]
    fn relative() {
        let (a, b) = relative_populations(0.6, 0.2).unwrap();
        assert_abs_diff_eq!(a, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.25, epsilon = 1e-15);
        assert_eq!(relative_populations(0.5, 0.5).unwrap(), (0.5, 0.5));
        assert_eq!(relative_populations(0.0, 0.0), Err(Error::UndefinedRelativePopulation(0.0)));
    }
}
