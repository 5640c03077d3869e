//! Guide geometry and the traveling reference wave.

use num_complex::Complex64;
use thiserror::Error;

use std::f64::consts::TAU;

/// Speed of light in m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("invalid geometry: {0}")]
    Invalid(&'static str),
    #[error("element index {index} out of range 0..{n}")]
    IndexOutOfRange { index: usize, n: usize },
}

/// Waveguide-fed line array: element count, pitch, effective guide index and
/// the feed amplitude. Element n sits at `x_n = n * spacing_d` measured from
/// the feed end.
#[derive(Debug, Clone, PartialEq)]
pub struct GuideGeometry {
    /// Number of elements along the guide.
    pub n_elements: usize,
    /// Spacing between adjacent elements, meters.
    pub spacing_d: f64,
    /// Effective relative permittivity governing beta = 2 pi sqrt(eps)/lambda0.
    pub eps_eff: f64,
    /// Complex feed amplitude H0.
    pub feed_h0: Complex64,
}

impl GuideGeometry {
    pub fn new(
        n_elements: usize,
        spacing_d: f64,
        eps_eff: f64,
        feed_h0: Complex64,
    ) -> Result<Self, GeometryError> {
        if n_elements < 1 {
            return Err(GeometryError::Invalid("n_elements must be >= 1"));
        }
        if !(spacing_d > 0.0) {
            return Err(GeometryError::Invalid("spacing_d must be positive"));
        }
        if !(eps_eff >= 1.0) {
            return Err(GeometryError::Invalid("eps_eff must be >= 1"));
        }
        if !(feed_h0.norm() > 0.0) {
            return Err(GeometryError::Invalid("feed_h0 must be nonzero"));
        }
        Ok(Self {
            n_elements,
            spacing_d,
            eps_eff,
            feed_h0,
        })
    }

    /// Fitted 16-element device parameters (see `em::calibrate`); the guide
    /// phase advance per cell is one full turn at 62 GHz, which puts the
    /// all-radiating beam at broadside.
    pub fn calibrated_default() -> Self {
        crate::em::calibrate::CALIBRATED_DEFAULT.geometry()
    }

    /// Position of element n in meters.
    pub fn element_x(&self, n: usize) -> f64 {
        n as f64 * self.spacing_d
    }

    /// Guide propagation constant at the given frequency, rad/m.
    pub fn beta(&self, frequency: f64) -> f64 {
        TAU * self.eps_eff.sqrt() / (C_LIGHT / frequency)
    }

    /// Guide phase advance per cell in turns, `beta d / 2 pi`.
    pub fn turns_per_cell(&self, frequency: f64) -> f64 {
        self.beta(frequency) * self.spacing_d / TAU
    }
}

/// Reference wave sample `H0 exp(-j beta x_n)` exciting element n. The guide
/// is lossless, so the magnitude equals `|H0|` at every element.
pub fn reference_wave(
    geom: &GuideGeometry,
    element_index: usize,
    frequency: f64,
) -> Result<Complex64, GeometryError> {
    if element_index >= geom.n_elements {
        return Err(GeometryError::IndexOutOfRange {
            index: element_index,
            n: geom.n_elements,
        });
    }
    let phase = -geom.beta(frequency) * geom.element_x(element_index);
    Ok(geom.feed_h0 * Complex64::from_polar(1.0, phase))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(d: f64, eps: f64) -> GuideGeometry {
        GuideGeometry::new(16, d, eps, Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn feed_element_sees_h0_exactly() {
        let h0 = Complex64::new(0.3, -1.2);
        let g = GuideGeometry::new(16, 2e-3, 4.0, h0).unwrap();
        assert_eq!(reference_wave(&g, 0, 62e9).unwrap(), h0);
    }

    #[test]
    fn full_turn_per_cell_keeps_elements_in_phase() {
        // spacing equal to the guided wavelength: every element sees the
        // same phase.
        let f = 62e9;
        let lambda0 = C_LIGHT / f;
        let eps: f64 = 4.0;
        let g = geom(lambda0 / eps.sqrt(), eps);
        assert!((g.turns_per_cell(f) - 1.0).abs() < 1e-12);
        let w0 = reference_wave(&g, 0, f).unwrap();
        for n in 1..16 {
            let wn = reference_wave(&g, n, f).unwrap();
            assert!((wn - w0).norm() < 1e-9);
        }
    }

    #[test]
    fn hand_evaluated_phase_for_element_one() {
        // eps = 4, d = lambda0/2 at 62 GHz: beta x1 = 2 pi, i.e. zero phase.
        let f = 62e9;
        let lambda0 = C_LIGHT / f;
        let g = geom(lambda0 / 2.0, 4.0);
        let w = reference_wave(&g, 1, f).unwrap();
        assert!((w - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn lossless_guide_preserves_magnitude() {
        let g = geom(2.3e-3, 5.1);
        for n in 0..16 {
            let w = reference_wave(&g, n, 61.5e9).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn index_out_of_range_rejected() {
        let g = geom(2e-3, 4.0);
        assert_eq!(
            reference_wave(&g, 16, 62e9),
            Err(GeometryError::IndexOutOfRange { index: 16, n: 16 })
        );
    }
}
