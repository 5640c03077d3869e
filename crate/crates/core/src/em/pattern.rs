//! Far-field azimuth cuts of the line array.
//!
//! The cut field at azimuth phi (degrees from the array normal, in the plane
//! containing the guide axis) is
//!
//! ```text
//! E(phi) = cos(phi) * m * H0 * sum_n w_n exp(-j x_n (beta + k sin phi))
//! ```
//!
//! with `w_n` the one-bit element weight, `beta` the guide constant and
//! `k = 2 pi / lambda0`. Out of the azimuth plane the radiation intensity is
//! modeled as `U(theta, phi) = cos^2(theta) |E(phi)|^2` (the elevation factor
//! of a magnetic line element over a ground plane), and directivity is
//! normalized so the integral of `4 pi U / P_rad` over the forward
//! hemisphere spanned by the cut grid equals `4 pi`.

use num_complex::Complex64;
use thiserror::Error;

use std::f64::consts::{PI, TAU};

use super::element::{effective_weight, ElementError, ElementModel};
use super::geometry::{GeometryError, GuideGeometry, C_LIGHT};
use crate::code::CodeWord;

#[derive(Debug, Error, PartialEq)]
pub enum PatternError {
    #[error("angle grid must be non-empty, strictly increasing and within [-90, 90] degrees")]
    BadGrid,
    #[error("code length {code} does not match geometry element count {geometry}")]
    CodeLengthMismatch { code: usize, geometry: usize },
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Sampled azimuth cut with per-angle complex field and normalized
/// directivity.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCut {
    /// Evaluation frequency, Hz.
    pub frequency: f64,
    /// Azimuth angles in degrees, strictly increasing.
    pub azimuth_grid: Vec<f64>,
    /// Complex far-field value per angle (arbitrary linear units).
    pub complex_field: Vec<Complex64>,
    /// Normalized directivity per angle, dBi. All `-inf` for a null pattern.
    pub directivity_dbi: Vec<f64>,
    /// True when nothing radiates (all-zero code with rho = 0); the cut then
    /// carries no usable normalization.
    pub null_pattern: bool,
}

impl PatternCut {
    /// Directivity in dBi linearly interpolated at `angle_deg`.
    ///
    /// Returns `None` when the angle falls outside the sampled grid.
    pub fn directivity_at(&self, angle_deg: f64) -> Option<f64> {
        let grid = &self.azimuth_grid;
        if angle_deg < grid[0] || angle_deg > *grid.last().unwrap() {
            return None;
        }
        let idx = match grid.binary_search_by(|a| a.partial_cmp(&angle_deg).unwrap()) {
            Ok(i) => return Some(self.directivity_dbi[i]),
            Err(i) => i,
        };
        let (a0, a1) = (grid[idx - 1], grid[idx]);
        let (d0, d1) = (self.directivity_dbi[idx - 1], self.directivity_dbi[idx]);
        let t = (angle_deg - a0) / (a1 - a0);
        Some(d0 + t * (d1 - d0))
    }

    /// CSV form with header `angle_deg,re,im,dbi` and six decimal places.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("angle_deg,re,im,dbi\n");
        for i in 0..self.azimuth_grid.len() {
            out.push_str(&format!(
                "{:.6},{:.6e},{:.6e},{:.6}\n",
                self.azimuth_grid[i],
                self.complex_field[i].re,
                self.complex_field[i].im,
                self.directivity_dbi[i],
            ));
        }
        out
    }
}

/// Evenly spaced degree grid, inclusive of both ends.
pub fn degree_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && stop > start);
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

fn validate_grid(grid: &[f64]) -> Result<(), PatternError> {
    if grid.is_empty() {
        return Err(PatternError::BadGrid);
    }
    const LIM: f64 = 90.0 + 1e-9;
    for (i, &a) in grid.iter().enumerate() {
        if !(-LIM..=LIM).contains(&a) {
            return Err(PatternError::BadGrid);
        }
        if i > 0 && a <= grid[i - 1] {
            return Err(PatternError::BadGrid);
        }
    }
    Ok(())
}

/// Trapezoidal integral over a possibly non-uniform grid.
fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    }
    acc
}

/// Elevation power integral of the cos^2(theta) factor over the forward
/// hemisphere: integral of cos^3 over [-pi/2, pi/2].
const ELEVATION_INTEGRAL: f64 = 4.0 / 3.0;

/// Evaluates the azimuth cut of one code over the given degree grid.
pub fn array_pattern(
    geom: &GuideGeometry,
    model: &ElementModel,
    code: &CodeWord,
    frequency: f64,
    grid_deg: &[f64],
) -> Result<PatternCut, PatternError> {
    validate_grid(grid_deg)?;
    if code.len() != geom.n_elements {
        return Err(PatternError::CodeLengthMismatch {
            code: code.len(),
            geometry: geom.n_elements,
        });
    }

    let lambda0 = C_LIGHT / frequency;
    let k = TAU / lambda0;
    let beta = geom.beta(frequency);
    let scale = geom.feed_h0 * model.dipole_scale_m;

    let weights: Vec<Complex64> = code
        .states()
        .map(|s| effective_weight(model, s, frequency))
        .collect::<Result<_, _>>()?;

    let mut field = Vec::with_capacity(grid_deg.len());
    for &angle in grid_deg {
        let phi = angle * PI / 180.0;
        let spatial = beta + k * phi.sin();
        let mut sum = Complex64::new(0.0, 0.0);
        for (n, w) in weights.iter().enumerate() {
            sum += w * Complex64::from_polar(1.0, -geom.element_x(n) * spatial);
        }
        field.push(scale * phi.cos() * sum);
    }

    let power: Vec<f64> = field.iter().map(|e| e.norm_sqr()).collect();
    let deg_to_rad = PI / 180.0;
    let p_rad = ELEVATION_INTEGRAL * trapezoid(grid_deg, &power) * deg_to_rad;

    let null_pattern = !(p_rad > 0.0);
    let directivity_dbi = if null_pattern {
        vec![f64::NEG_INFINITY; grid_deg.len()]
    } else {
        power
            .iter()
            .map(|&u| {
                let d = 4.0 * PI * u / p_rad;
                if d > 0.0 {
                    10.0 * d.log10()
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect()
    };

    Ok(PatternCut {
        frequency,
        azimuth_grid: grid_deg.to_vec(),
        complex_field: field,
        directivity_dbi,
        null_pattern,
    })
}

/// Total radiated power of a cut under the hemisphere model, for tests and
/// the calibration cost. Zero for a null pattern.
pub fn radiated_power(cut: &PatternCut) -> f64 {
    let power: Vec<f64> = cut.complex_field.iter().map(|e| e.norm_sqr()).collect();
    ELEVATION_INTEGRAL * trapezoid(&cut.azimuth_grid, &power) * PI / 180.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn device() -> (GuideGeometry, ElementModel) {
        (GuideGeometry::calibrated_default(), ElementModel::device_default())
    }

    #[test]
    fn all_zero_ideal_code_yields_null_pattern() {
        let (geom, model) = device();
        let model = model.with_rho(0.0);
        let grid = degree_grid(-90.0, 90.0, 1.0);
        let cut = array_pattern(&geom, &model, &CodeWord::all_zeros(16), 62e9, &grid).unwrap();
        assert!(cut.null_pattern);
        assert!(cut.complex_field.iter().all(|e| e.norm() == 0.0));
        assert!(cut.directivity_dbi.iter().all(|d| d == &f64::NEG_INFINITY));
    }

    #[test]
    fn all_ones_points_at_broadside_with_calibrated_defaults() {
        let (geom, model) = device();
        let grid = degree_grid(-90.0, 90.0, 0.05);
        let cut = array_pattern(&geom, &model, &CodeWord::all_ones(16), 62e9, &grid).unwrap();
        let (imax, _) = cut
            .directivity_dbi
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        let mld = cut.azimuth_grid[imax];
        assert!(mld.abs() <= 2.0, "all-ones main lobe at {mld} deg");
    }

    #[test]
    fn code_length_mismatch_rejected() {
        let (geom, model) = device();
        let grid = degree_grid(-90.0, 90.0, 1.0);
        let err = array_pattern(&geom, &model, &CodeWord::all_ones(8), 62e9, &grid);
        assert!(matches!(err, Err(PatternError::CodeLengthMismatch { .. })));
    }

    #[test]
    fn grid_validation() {
        let (geom, model) = device();
        let code = CodeWord::all_ones(16);
        for bad in [vec![], vec![-91.0], vec![0.0, 0.0], vec![10.0, 5.0]] {
            assert_eq!(
                array_pattern(&geom, &model, &code, 62e9, &bad).unwrap_err(),
                PatternError::BadGrid
            );
        }
    }

    #[test]
    fn linearity_of_single_element_patterns() {
        // With rho = 0 the pattern of a code equals the sum of its active
        // single-element patterns.
        let (geom, model) = device();
        let model = model.with_rho(0.0);
        let grid = degree_grid(-90.0, 90.0, 2.5);
        let code = CodeWord::from_value(0b1011_0010_0100_1101, 16).unwrap();
        let whole = array_pattern(&geom, &model, &code, 62e9, &grid).unwrap();
        let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
        for n in 0..16 {
            if code.bit(n) == 1 {
                let single = CodeWord::from_value(1 << (15 - n), 16).unwrap();
                let cut = array_pattern(&geom, &model, &single, 62e9, &grid).unwrap();
                for (a, e) in acc.iter_mut().zip(cut.complex_field) {
                    *a += e;
                }
            }
        }
        let scale: f64 = whole.complex_field.iter().map(|e| e.norm()).fold(0.0, f64::max);
        for (a, b) in acc.iter().zip(&whole.complex_field) {
            assert!((a - b).norm() <= 1e-9 * scale);
        }
    }

    #[test]
    fn normalized_power_integrates_to_four_pi() {
        let (geom, model) = device();
        let grid = degree_grid(-90.0, 90.0, 0.25);
        let cut = array_pattern(&geom, &model, &CodeWord::from_value(0x9249, 16).unwrap(), 62e9, &grid)
            .unwrap();
        // Integrate 4 pi U / P over the hemisphere using the returned dBi
        // samples and Simpson weights as an independent quadrature.
        let d_lin: Vec<f64> = cut.directivity_dbi.iter().map(|d| 10f64.powf(d / 10.0)).collect();
        let n = grid.len();
        assert!(n % 2 == 1);
        let h = (grid[1] - grid[0]) * PI / 180.0;
        let mut simpson = d_lin[0] + d_lin[n - 1];
        for (i, v) in d_lin.iter().enumerate().take(n - 1).skip(1) {
            simpson += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        simpson *= h / 3.0;
        let total = simpson * ELEVATION_INTEGRAL;
        assert!(
            (total - 4.0 * PI).abs() / (4.0 * PI) < 0.005,
            "hemisphere integral {total} vs {}",
            4.0 * PI
        );
    }

    #[test]
    fn directivity_interpolation_and_range() {
        let (geom, model) = device();
        let grid = degree_grid(-90.0, 90.0, 0.5);
        let cut = array_pattern(&geom, &model, &CodeWord::all_ones(16), 62e9, &grid).unwrap();
        assert!(cut.directivity_at(-90.25).is_none());
        assert!(cut.directivity_at(90.25).is_none());
        let mid = cut.directivity_at(0.25).unwrap();
        assert!(mid <= cut.directivity_at(0.0).unwrap().max(cut.directivity_at(0.5).unwrap()));
    }

    #[test]
    fn csv_round_trip_schema() {
        let (geom, model) = device();
        let grid = degree_grid(-1.0, 1.0, 1.0);
        let cut = array_pattern(&geom, &model, &CodeWord::all_ones(16), 62e9, &grid).unwrap();
        let csv = cut.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "angle_deg,re,im,dbi");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 4);
        assert_eq!(row[0], "-1.000000");
        for v in row {
            v.parse::<f64>().unwrap();
        }
    }
}
