//! Lobe extraction from a sampled cut: main-lobe direction, peak
//! directivity, half-power beamwidth and sidelobe level.

use thiserror::Error;

use super::pattern::PatternCut;

/// Default lobe detection threshold relative to the global peak.
pub const DEFAULT_DETECT_THRESHOLD_DB: f64 = -10.0;

#[derive(Debug, Error, PartialEq)]
pub enum SummaryError {
    #[error("detection threshold must be negative (dB relative to peak), got {0}")]
    BadThreshold(f64),
}

/// One detected lobe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lobe {
    /// Lobe direction in degrees.
    pub mld_deg: f64,
    /// Lobe peak directivity, dBi.
    pub peak_dbi: f64,
    /// Half-power beamwidth in degrees, from interpolated -3 dB crossings.
    /// Clamped at the grid edges when a crossing falls outside the cut.
    pub hpbw_deg: f64,
}

/// Beam figures of one cut. `lobes` is ordered by descending peak (ties by
/// ascending angle); `lobes[0]` is the main lobe when any lobe exists.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSummary {
    /// Lobes above the detection threshold.
    pub lobes: Vec<Lobe>,
    /// Largest local maximum not counted as a lobe, dB relative to the main
    /// peak (always <= 0). `None` when every local maximum was detected as a
    /// lobe or none exists.
    pub sll_db: Option<f64>,
}

impl BeamSummary {
    /// Number of detected lobes.
    pub fn n_beams(&self) -> usize {
        self.lobes.len()
    }

    /// Main-lobe direction, if any lobe exists.
    pub fn mld_deg(&self) -> Option<f64> {
        self.lobes.first().map(|l| l.mld_deg)
    }

    /// Main-lobe peak directivity in dBi.
    pub fn peak_dbi(&self) -> Option<f64> {
        self.lobes.first().map(|l| l.peak_dbi)
    }

    /// Main-lobe half-power beamwidth in degrees.
    pub fn hpbw_deg(&self) -> Option<f64> {
        self.lobes.first().map(|l| l.hpbw_deg)
    }
}

/// Index of every local maximum of `y`, counting plateau runs once and
/// including the grid ends.
fn local_maxima(y: &[f64]) -> Vec<usize> {
    let n = y.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && y[j + 1] == y[i] {
            j += 1;
        }
        let left_ok = i == 0 || y[i - 1] < y[i];
        let right_ok = j + 1 == n || y[j + 1] < y[i];
        if left_ok && right_ok && y[i].is_finite() {
            out.push(i);
        }
        i = j + 1;
    }
    out
}

/// Interpolated half-power width of the lobe peaking at `peak_idx`.
fn half_power_width(grid: &[f64], dbi: &[f64], peak_idx: usize) -> f64 {
    let target = dbi[peak_idx] - 3.0;
    let n = grid.len();

    let left = {
        let mut i = peak_idx;
        while i > 0 && dbi[i - 1] >= target && dbi[i - 1] <= dbi[i] {
            i -= 1;
        }
        if i == 0 || dbi[i - 1] > dbi[i] {
            grid[i]
        } else {
            let (x0, x1) = (grid[i - 1], grid[i]);
            let (y0, y1) = (dbi[i - 1], dbi[i]);
            x0 + (target - y0) / (y1 - y0) * (x1 - x0)
        }
    };
    let right = {
        let mut i = peak_idx;
        while i + 1 < n && dbi[i + 1] >= target && dbi[i + 1] <= dbi[i] {
            i += 1;
        }
        if i + 1 == n || dbi[i + 1] > dbi[i] {
            grid[i]
        } else {
            let (x0, x1) = (grid[i], grid[i + 1]);
            let (y0, y1) = (dbi[i], dbi[i + 1]);
            x0 + (target - y0) / (y1 - y0) * (x1 - x0)
        }
    };
    right - left
}

/// Extracts lobes from a normalized cut. Local maxima no lower than
/// `detect_threshold_db` below the global peak count as lobes; the largest
/// remaining maximum sets the sidelobe level.
pub fn beam_summary(cut: &PatternCut, detect_threshold_db: f64) -> Result<BeamSummary, SummaryError> {
    if !(detect_threshold_db < 0.0) {
        return Err(SummaryError::BadThreshold(detect_threshold_db));
    }
    if cut.null_pattern {
        return Ok(BeamSummary { lobes: Vec::new(), sll_db: None });
    }

    let dbi = &cut.directivity_dbi;
    let grid = &cut.azimuth_grid;
    let maxima = local_maxima(dbi);
    if maxima.is_empty() {
        return Ok(BeamSummary { lobes: Vec::new(), sll_db: None });
    }
    let peak = maxima
        .iter()
        .map(|&i| dbi[i])
        .fold(f64::NEG_INFINITY, f64::max);

    let mut lobes = Vec::new();
    let mut rejected_best: Option<f64> = None;
    for &i in &maxima {
        if dbi[i] >= peak + detect_threshold_db {
            lobes.push(Lobe {
                mld_deg: grid[i],
                peak_dbi: dbi[i],
                hpbw_deg: half_power_width(grid, dbi, i),
            });
        } else {
            let rel = dbi[i] - peak;
            rejected_best = Some(rejected_best.map_or(rel, |b: f64| b.max(rel)));
        }
    }
    lobes.sort_by(|a, b| {
        b.peak_dbi
            .partial_cmp(&a.peak_dbi)
            .unwrap()
            .then(a.mld_deg.partial_cmp(&b.mld_deg).unwrap())
    });
    Ok(BeamSummary { lobes, sll_db: rejected_best })
}
