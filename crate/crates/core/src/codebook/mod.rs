//! Enumeration, scoring and synthesis of beamforming code words over the
//! forward model.

pub mod reference;

use thiserror::Error;

use crate::code::CodeWord;
use crate::em::{
    array_pattern, beam_summary, BeamSummary, ElementModel, GuideGeometry, PatternError,
    SummaryError, DEFAULT_DETECT_THRESHOLD_DB,
};

pub use reference::{verify_code, verify_reference_codes, CodeCheck, ReferenceExpectation};

/// Enumeration guard: full scans above this element count are rejected.
pub const MAX_ENUMERATION_BITS: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum CodebookError {
    #[error("enumeration over {0} bits exceeds the 2^{MAX_ENUMERATION_BITS} guard")]
    TooManyBits(usize),
    #[error("invalid beam spec: {0}")]
    BadSpec(&'static str),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Summary(#[from] SummaryError),
}

/// Requirements a synthesized code must meet.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSpec {
    /// Wanted lobe directions with per-lobe tolerance, degrees.
    pub targets: Vec<(f64, f64)>,
    /// Exact number of detected lobes a code must show.
    pub required_beams: usize,
    /// Ceiling on the sidelobe level, dB relative to peak (<= 0).
    pub max_sll_db: f64,
    /// Floor on the main-lobe peak directivity, dBi.
    pub min_peak_dbi: f64,
}

impl BeamSpec {
    pub fn validate(&self) -> Result<(), CodebookError> {
        if self.required_beams < 1 {
            return Err(CodebookError::BadSpec("required_beams must be >= 1"));
        }
        if self.targets.iter().any(|&(_, tol)| !(tol > 0.0)) {
            return Err(CodebookError::BadSpec("tolerances must be positive"));
        }
        if self.max_sll_db > 0.0 {
            return Err(CodebookError::BadSpec("max_sll_db must be <= 0"));
        }
        Ok(())
    }

    /// Whether a summary meets every requirement. Targets must each match a
    /// distinct lobe within tolerance.
    pub fn admits(&self, summary: &BeamSummary) -> bool {
        if summary.n_beams() != self.required_beams {
            return false;
        }
        if let Some(peak) = summary.peak_dbi() {
            if peak < self.min_peak_dbi {
                return false;
            }
        } else {
            return false;
        }
        if summary.sll_db.map_or(false, |s| s > self.max_sll_db) {
            return false;
        }
        let mut used = vec![false; summary.lobes.len()];
        self.targets.iter().all(|&(dir, tol)| {
            let mut best: Option<(usize, f64)> = None;
            for (i, lobe) in summary.lobes.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let err = (lobe.mld_deg - dir).abs();
                if best.map_or(true, |(_, e)| err < e) {
                    best = Some((i, err));
                }
            }
            match best {
                Some((i, err)) if err <= tol => {
                    used[i] = true;
                    true
                }
                _ => false,
            }
        })
    }

    /// Sum of absolute direction errors over matched lobes, the primary
    /// ranking key.
    pub fn direction_error(&self, summary: &BeamSummary) -> f64 {
        let mut used = vec![false; summary.lobes.len()];
        let mut total = 0.0;
        for &(dir, _) in &self.targets {
            let mut best: Option<(usize, f64)> = None;
            for (i, lobe) in summary.lobes.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let err = (lobe.mld_deg - dir).abs();
                if best.map_or(true, |(_, e)| err < e) {
                    best = Some((i, err));
                }
            }
            if let Some((i, err)) = best {
                used[i] = true;
                total += err;
            }
        }
        total
    }
}

/// One enumerated code with its beam figures.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeMetrics {
    pub code: CodeWord,
    pub summary: BeamSummary,
    /// Whether the code meets the beam spec the enumeration was scored
    /// against (`false` when no spec was supplied).
    pub feasible: bool,
}

impl CodeMetrics {
    /// CSV row matching [`metrics_csv_header`]. Lobe lists are
    /// `;`-separated.
    pub fn to_csv_row(&self) -> String {
        let mlds: Vec<String> =
            self.summary.lobes.iter().map(|l| format!("{:.3}", l.mld_deg)).collect();
        let hpbws: Vec<String> =
            self.summary.lobes.iter().map(|l| format!("{:.3}", l.hpbw_deg)).collect();
        format!(
            "{},{},{},{},{},{},{}",
            self.code.to_hex_string(),
            self.summary.n_beams(),
            mlds.join(";"),
            self.summary.peak_dbi().map_or(String::from("-inf"), |p| format!("{p:.3}")),
            hpbws.join(";"),
            self.summary.sll_db.map_or(String::from("-inf"), |s| format!("{s:.3}")),
            self.feasible,
        )
    }
}

/// Header of the metrics CSV schema.
pub fn metrics_csv_header() -> &'static str {
    "code_hex,n_beams,mld_list,peak_dbi,hpbw_list,sll_db,feasible"
}

/// Everything needed to evaluate codes.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub geometry: GuideGeometry,
    pub element: ElementModel,
    pub frequency: f64,
    pub grid_deg: Vec<f64>,
    pub detect_threshold_db: f64,
}

impl EvalContext {
    pub fn new(geometry: GuideGeometry, element: ElementModel, frequency: f64, grid_deg: Vec<f64>) -> Self {
        Self {
            geometry,
            element,
            frequency,
            grid_deg,
            detect_threshold_db: DEFAULT_DETECT_THRESHOLD_DB,
        }
    }

    /// Defaults: calibrated device at 62 GHz on the 0.25 degree grid.
    pub fn device_default() -> Self {
        let params = crate::em::CALIBRATED_DEFAULT;
        Self::new(
            params.geometry(),
            params.element(),
            62e9,
            crate::em::degree_grid(-90.0, 90.0, 0.25),
        )
    }

    /// Beam summary of one code.
    pub fn summarize(&self, code: &CodeWord) -> Result<BeamSummary, CodebookError> {
        let cut = array_pattern(&self.geometry, &self.element, code, self.frequency, &self.grid_deg)?;
        Ok(beam_summary(&cut, self.detect_threshold_db)?)
    }

    fn metrics(&self, code: CodeWord, spec: Option<&BeamSpec>) -> Result<CodeMetrics, CodebookError> {
        let summary = self.summarize(&code)?;
        let feasible = spec.map_or(false, |s| s.admits(&summary));
        Ok(CodeMetrics { code, summary, feasible })
    }
}

/// Streams metrics for every code of the context's word width in ascending
/// integer order. Memory stays O(1) beyond what the consumer keeps.
pub fn enumerate_metrics<'a>(
    ctx: &'a EvalContext,
    spec: Option<&'a BeamSpec>,
) -> Result<impl Iterator<Item = Result<CodeMetrics, CodebookError>> + 'a, CodebookError> {
    let bits = ctx.geometry.n_elements;
    if bits > MAX_ENUMERATION_BITS {
        return Err(CodebookError::TooManyBits(bits));
    }
    if let Some(s) = spec {
        s.validate()?;
    }
    let count: u64 = 1u64 << bits;
    Ok((0..count).map(move |v| {
        let code = CodeWord::from_value(v as u32, bits).expect("value below 2^bits");
        ctx.metrics(code, spec)
    }))
}

/// Feasible codes ranked by (direction error, -peak dBi, code value).
pub fn synthesize(ctx: &EvalContext, spec: &BeamSpec) -> Result<Vec<CodeMetrics>, CodebookError> {
    spec.validate()?;
    let mut feasible: Vec<(f64, f64, CodeMetrics)> = Vec::new();
    for m in enumerate_metrics(ctx, Some(spec))? {
        let m = m?;
        if m.feasible {
            let err = spec.direction_error(&m.summary);
            let peak = m.summary.peak_dbi().unwrap_or(f64::NEG_INFINITY);
            feasible.push((err, peak, m));
        }
    }
    feasible.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(b.1.partial_cmp(&a.1).unwrap())
            .then(a.2.code.value().cmp(&b.2.code.value()))
    });
    Ok(feasible.into_iter().map(|(_, _, m)| m).collect())
}
