use crate::dense::Accumulation;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    /// Sketch, power iterations on `AAᵀ` with re-orthonormalization, then
    /// the SVD of `QᵀA`.
    Basic,
    /// Power iterations on `AᵀA − αI` with the shift raised as the
    /// iteration proceeds; fixed iteration count.
    Shifted,
    /// Shifted iterations stopped by the per-vector-error criterion.
    #[default]
    Dash,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "basic" => Ok(Algorithm::Basic),
            "shifted" => Ok(Algorithm::Shifted),
            "dash" => Ok(Algorithm::Dash),
            other => Err(Error::Config(format!(
                "unknown algorithm '{other}' (expected basic, shifted or dash)"
            ))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Basic => "basic",
            Algorithm::Shifted => "shifted",
            Algorithm::Dash => "dash",
        })
    }
}

/// How iterates are re-orthonormalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orthonormalizer {
    /// Householder QR (followed by a small SVD where singular values are
    /// needed).
    Qr,
    /// Eigendecomposition of the Gram matrix.
    #[default]
    EigSvd,
}

impl std::str::FromStr for Orthonormalizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qr" => Ok(Orthonormalizer::Qr),
            "eigsvd" => Ok(Orthonormalizer::EigSvd),
            other => Err(Error::Config(format!(
                "unknown orthonormalizer '{other}' (expected qr or eigsvd)"
            ))),
        }
    }
}

impl std::fmt::Display for Orthonormalizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Orthonormalizer::Qr => "qr",
            Orthonormalizer::EigSvd => "eigsvd",
        })
    }
}

/// Shift schedule for the shifted iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftPolicy {
    /// `α ← (Ŝ(l,l) + α)/2` whenever `Ŝ(l,l) > α`, after every iteration.
    #[default]
    Dynamic,
    /// `α = Ŝ(l,l)/2` from the first (unshifted) iteration, then frozen.
    /// Kept for comparisons against the dynamic rule.
    FixedAfterFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Target rank.
    pub k: usize,
    /// Oversampling; `None` means `k / 2`, raised to 1 for `Dash`.
    pub s: Option<usize>,
    /// Power iterations for `Basic` and `Shifted`.
    pub p: usize,
    /// Iteration cap for `Dash`.
    pub p_max: usize,
    /// Per-vector-error tolerance for `Dash`.
    pub tol: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub orthonormalizer: Orthonormalizer,
    pub shift_policy: ShiftPolicy,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Sum dense partial products in a fixed order so results are bitwise
    /// identical for every thread count.
    pub deterministic: bool,
    /// Keep every iteration's `Ŝ` in the trace.
    pub record_history: bool,
}

pub const DEFAULT_P: usize = 8;
pub const DEFAULT_P_MAX: usize = 1000;
pub const DEFAULT_TOL: f64 = 1e-2;

impl SolverConfig {
    pub fn new(k: usize, algorithm: Algorithm) -> Self {
        Self {
            k,
            s: None,
            p: DEFAULT_P,
            p_max: DEFAULT_P_MAX,
            tol: DEFAULT_TOL,
            seed: 0,
            algorithm,
            orthonormalizer: Orthonormalizer::default(),
            shift_policy: ShiftPolicy::default(),
            threads: None,
            deterministic: true,
            record_history: false,
        }
    }

    pub fn oversampling(&self) -> usize {
        match (self.s, self.algorithm) {
            (Some(s), _) => s,
            (None, Algorithm::Dash) => (self.k / 2).max(1),
            (None, _) => self.k / 2,
        }
    }

    /// Sketch width `l = k + s`.
    pub fn l(&self) -> usize {
        self.k + self.oversampling()
    }

    pub fn accumulation(&self) -> Accumulation {
        if self.deterministic {
            Accumulation::Ordered
        } else {
            Accumulation::Unordered
        }
    }

    /// Checks the configuration against a `rows x cols` input.
    pub fn validate(&self, rows: usize, cols: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tol must be positive and finite, got {}", self.tol)));
        }
        if self.p_max == 0 {
            return Err(Error::Config("p_max must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if self.algorithm == Algorithm::Dash && self.oversampling() == 0 {
            return Err(Error::Config(
                "dash needs s >= 1: the stopping rule reads the (k+1)-th value".into(),
            ));
        }
        let l = self.l();
        if l > rows.min(cols) {
            return Err(Error::Shape(format!(
                "k + s = {l} exceeds min({rows}, {cols})"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SolverConfig::new(10, Algorithm::Dash);
        assert_eq!(c.oversampling(), 5);
        assert_eq!(c.l(), 15);
        assert_eq!(c.p_max, 1000);
        assert_eq!(c.tol, 1e-2);
        assert!(c.deterministic);
        assert_eq!(c.accumulation(), Accumulation::Ordered);
        assert_eq!(SolverConfig::new(1, Algorithm::Dash).oversampling(), 1);
        assert_eq!(SolverConfig::new(1, Algorithm::Basic).oversampling(), 0);
    }

    #[test]
    fn validation() {
        let ok = SolverConfig::new(4, Algorithm::Dash);
        assert!(ok.validate(10, 6).is_ok());
        assert!(matches!(ok.validate(10, 5), Err(Error::Shape(_))));
        let zero_k = SolverConfig::new(0, Algorithm::Basic);
        assert!(matches!(zero_k.validate(10, 10), Err(Error::Config(_))));
        let dash_no_s = SolverConfig { s: Some(0), ..ok.clone() };
        assert!(matches!(dash_no_s.validate(10, 10), Err(Error::Config(_))));
        let shifted_no_s = SolverConfig { algorithm: Algorithm::Shifted, ..dash_no_s };
        assert!(shifted_no_s.validate(10, 10).is_ok());
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let c = SolverConfig { tol: bad, ..ok.clone() };
            assert!(matches!(c.validate(10, 10), Err(Error::Config(_))));
        }
        let c = SolverConfig { p_max: 0, ..ok.clone() };
        assert!(c.validate(10, 10).is_err());
        let c = SolverConfig { threads: Some(0), ..ok };
        assert!(c.validate(10, 10).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!("Dash".parse::<Algorithm>().unwrap(), Algorithm::Dash);
        assert_eq!("qr".parse::<Orthonormalizer>().unwrap(), Orthonormalizer::Qr);
        assert!("lanczos".parse::<Algorithm>().is_err());
        assert_eq!(Algorithm::Shifted.to_string(), "shifted");
    }
}
