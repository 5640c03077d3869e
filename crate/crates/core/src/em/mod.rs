//! Forward electromagnetic model of the waveguide-fed line array: element
//! response, reference wave, far-field cuts, lobe summaries and parameter
//! calibration.

pub mod calibrate;
pub mod element;
pub mod geometry;
pub mod pattern;
pub mod summary;

pub use calibrate::{
    calibrate, CalibratedParams, CalibrateError, CalibrationTarget, FitReport, RangeSpec,
    SearchRanges, TargetResidual, CALIBRATED_DEFAULT,
};
pub use element::{effective_weight, polarizability, ElementError, ElementModel};
pub use geometry::{reference_wave, GeometryError, GuideGeometry, C_LIGHT};
pub use pattern::{array_pattern, degree_grid, radiated_power, PatternCut, PatternError};
pub use summary::{beam_summary, BeamSummary, Lobe, SummaryError, DEFAULT_DETECT_THRESHOLD_DB};
