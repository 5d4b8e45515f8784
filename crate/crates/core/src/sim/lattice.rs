//! The one-dimensional lattice `q Z` with Voronoi cell `[-q/2, q/2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarLattice {
    /// Cell width.
    pub q: f64,
    /// Second moment, `q^2 / 12`.
    pub theta: f64,
}

/// Lattice whose cell has second moment `theta`.
pub fn lattice_for_power(theta: f64) -> Result<ScalarLattice> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::Domain(format!("lattice power must be finite and >= 0, got {theta}")));
    }
    Ok(ScalarLattice {
        q: (12.0 * theta).sqrt(),
        theta,
    })
}

impl ScalarLattice {
    /// `x - q floor(x/q + 1/2)`, in `[-q/2, q/2)`. The zero lattice maps
    /// everything to `0`.
    #[inline]
    pub fn reduce(&self, x: f64) -> f64 {
        if self.q == 0.0 {
            return 0.0;
        }
        let r = x - self.q * (x / self.q + 0.5).floor();
        // Rounding can land exactly on the excluded upper edge.
        if r >= 0.5 * self.q {
            r - self.q
        } else if r < -0.5 * self.q {
            r + self.q
        } else {
            r
        }
    }

    /// Maps `u` in `[0, 1)` to the cell.
    #[inline]
    pub fn uniform_from_unit(&self, u: f64) -> f64 {
        self.q * (u - 0.5)
    }
}

/// Checked form of [`ScalarLattice::reduce`].
pub fn mod_lattice(x: f64, lat: &ScalarLattice) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("cannot reduce non-finite value {x}")));
    }
    Ok(lat.reduce(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lat(q: f64) -> ScalarLattice {
        ScalarLattice { q, theta: q * q / 12.0 }
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(mod_lattice(5.0, &lat(4.0)).unwrap(), 1.0);
        assert_eq!(mod_lattice(2.0, &lat(4.0)).unwrap(), -2.0);
        assert_eq!(mod_lattice(0.0, &lat(4.0)).unwrap(), 0.0);
        assert_eq!(mod_lattice(-2.0, &lat(4.0)).unwrap(), -2.0);
        assert!(mod_lattice(f64::NAN, &lat(4.0)).is_err());
        assert!(mod_lattice(f64::INFINITY, &lat(4.0)).is_err());
    }

    #[test]
    fn lattice_sizes() {
        assert!((lattice_for_power(1.0).unwrap().q - 12f64.sqrt()).abs() < 1e-15);
        assert_eq!(lattice_for_power(0.0).unwrap().q, 0.0);
        assert!((lattice_for_power(1.0 / 12.0).unwrap().q - 1.0).abs() < 1e-15);
        assert!(lattice_for_power(-1.0).is_err());
        assert_eq!(lat(0.0).reduce(3.7), 0.0);
    }

    proptest! {
        #[test]
        fn reduced_value_is_in_cell_and_congruent(x in -1e6f64..1e6, q in 1e-3f64..1e3) {
            let l = lat(q);
            let r = l.reduce(x);
            prop_assert!(r >= -q / 2.0 && r < q / 2.0);
            let k = (x - r) / q;
            prop_assert!((k - k.round()).abs() < 1e-6 * (1.0 + k.abs()));
        }
    }
}
