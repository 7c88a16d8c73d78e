use serde::{Deserialize, Serialize};

/// Calibrated separator size constants `mean |S| / n^(1-1/d)` on uniform
/// data for d = 2 and d = 3, rounded up to a multiple of 0.5; see
/// `fixtures/calibration.json` for the run that produced them.
pub const DEFAULT_C_SEP_2D: f64 = 13.5;
pub const DEFAULT_C_SEP_3D: f64 = 59.0;

/// Tunable constants shared by all algorithms. Every field is recorded in
/// result metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Relative numeric tolerance.
    pub eps_num: f64,
    /// Override for the doubling constant of R^d. `None` uses the safe bound
    /// ceil(2 sqrt d)^d.
    pub c_dbl_override: Option<f64>,
    /// Override for the separator size constant. `None` uses the calibrated
    /// value for the dimension.
    pub c_sep: Option<f64>,
    /// k = c_ptas / eps^d in the approximation scheme.
    pub c_ptas: f64,
    pub max_retries: u32,
    /// Wall-clock cap for one exact search, in seconds. `None` disables it.
    pub exact_time_cap_secs: Option<f64>,
    /// Deterministic restart budget of the exact search per guard count.
    pub exact_restarts: usize,
    /// Wall-clock cap for each exact sub-solve inside the approximation scheme.
    pub ptas_sub_time_cap_secs: Option<f64>,
    /// Largest guard budget the approximation scheme hands to a sub-solve.
    pub ptas_sub_budget_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            eps_num: 1e-9,
            c_dbl_override: None,
            c_sep: None,
            c_ptas: 4.0,
            max_retries: 64,
            exact_time_cap_secs: Some(30.0),
            exact_restarts: 200,
            ptas_sub_time_cap_secs: Some(2.0),
            ptas_sub_budget_cap: 4,
        }
    }
}

impl Config {
    /// Doubling constant c_dbl^d used by the balance arguments.
    pub fn c_dbl(&self, d: usize) -> f64 {
        self.c_dbl_override
            .unwrap_or_else(|| safe_doubling_constant(d) as f64)
    }

    pub fn c_sep(&self, d: usize) -> f64 {
        self.c_sep.unwrap_or(if d <= 2 { DEFAULT_C_SEP_2D } else { DEFAULT_C_SEP_3D })
    }

    /// c_d = c_dbl^d + 1.
    pub fn c_d(&self, d: usize) -> f64 {
        self.c_dbl(d) + 1.0
    }
}

/// ceil(2 sqrt d)^d.
pub fn safe_doubling_constant(d: usize) -> u64 {
    let side = (2.0 * (d as f64).sqrt()).ceil() as u64;
    side.pow(d as u32)
}
