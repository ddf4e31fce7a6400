use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
}

/// Outcome of one criterion: passes iff every residual is at most `tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub pass: bool,
    pub residuals: Vec<Residual>,
    pub tol: f64,
}

impl Verdict {
    pub fn from_residuals<S: Into<String>>(criterion: &str, residuals: Vec<(S, f64)>, tol: f64) -> Self {
        let residuals: Vec<Residual> = residuals
            .into_iter()
            .map(|(name, value)| Residual { name: name.into(), value })
            .collect();
        // NaN residuals fail
        let pass = residuals.iter().all(|r| r.value <= tol);
        Self { criterion: criterion.to_string(), pass, residuals, tol }
    }

    /// Largest residual, or 0 when there are none.
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.value).fold(0.0, f64::max)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.value)
    }
}
