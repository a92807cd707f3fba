use std::time::Instant;

use super::{econ_svd, orth, Orthonormalizer, PhaseTimes, ShiftPolicy, SolverConfig};
use crate::dense::{gaussian_matrix, Accumulation, DenseMatrix};
use crate::error::{Error, Result};
use crate::factors::{normalize_signs, TruncatedSvd};
use crate::operator::LinearOperator;

/// New shift after an iteration whose smallest surrogate value is `s_ll`.
pub fn update_shift(alpha: f64, s_ll: f64) -> f64 {
    if s_ll > alpha {
        (s_ll + alpha) / 2.0
    } else {
        alpha
    }
}

/// Per-vector-error stopping test: true iff for every `i < k`
/// `|s_prev[i] + alpha_prev − s[i] − alpha| / (s[k] + alpha) <= tol`.
pub fn pve_stop_check(
    s_prev: &[f64],
    alpha_prev: f64,
    s: &[f64],
    alpha: f64,
    k: usize,
    tol: f64,
) -> Result<bool> {
    if s_prev.len() <= k || s.len() <= k {
        return Err(Error::Shape(format!(
            "stop check needs k + 1 = {} values, got {} and {}",
            k + 1,
            s_prev.len(),
            s.len()
        )));
    }
    let denom = s[k] + alpha;
    Ok((0..k).all(|i| ((s_prev[i] + alpha_prev) - (s[i] + alpha)).abs() / denom <= tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    TolMet,
    PMaxReached,
    FixedP,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::TolMet => "tol_met",
            StopReason::PMaxReached => "p_max_reached",
            StopReason::FixedP => "fixed_p",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftTrace {
    /// Shift used by each executed iteration; the first is always 0.
    pub alphas: Vec<f64>,
    /// `Ŝ` after each iteration, when requested.
    pub s_hat_history: Option<Vec<Vec<f64>>>,
    /// Executed iterations.
    pub stopped_at: usize,
    pub stop_reason: StopReason,
}

/// Iterate of the shifted power iteration.
#[derive(Debug, Clone)]
pub struct IterationState {
    /// Orthonormal basis, `n x l`.
    pub q: DenseMatrix,
    pub alpha: f64,
    /// Singular values from the last step, descending.
    pub s_hat: Vec<f64>,
    pub iteration: usize,
}

/// Step-by-step shifted power iteration on `AᵀA`. `Q` lives in the row
/// space of `A` (`n x l`); running it on `Aᵀ` gives the `AAᵀ` form.
pub struct ShiftedIteration<'a, O: ?Sized> {
    a: &'a O,
    state: IterationState,
    alphas: Vec<f64>,
    history: Option<Vec<Vec<f64>>>,
    k: usize,
    policy: ShiftPolicy,
    mode: Orthonormalizer,
    acc: Accumulation,
}

impl<'a, O: LinearOperator + ?Sized> ShiftedIteration<'a, O> {
    /// Draws `Ω` (`m x l`) and sets `Q = orth(AᵀΩ)`, `α = 0`.
    pub fn new(a: &'a O, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate(a.rows(), a.cols())?;
        let acc = cfg.accumulation();
        let l = cfg.l();
        let omega = gaussian_matrix(a.rows(), l, cfg.seed);
        let q = orth(&a.apply_t(&omega, acc)?, cfg.orthonormalizer, acc)?;
        Ok(Self {
            a,
            state: IterationState {
                q,
                alpha: 0.0,
                s_hat: vec![0.0; l],
                iteration: 0,
            },
            alphas: Vec::new(),
            history: cfg.record_history.then(Vec::new),
            k: cfg.k,
            policy: cfg.shift_policy,
            mode: cfg.orthonormalizer,
            acc,
        })
    }

    /// `[Q, Ŝ] = svd(Aᵀ(AQ) − αQ)` with the current `α`. Does not touch
    /// the shift.
    pub fn step(&mut self) -> Result<()> {
        let st = &mut self.state;
        let mut c = self.a.apply_t(&self.a.apply(&st.q, self.acc)?, self.acc)?;
        if st.alpha != 0.0 {
            c.axpy(-st.alpha, &st.q)?;
        }
        let f = econ_svd(&c, self.mode, self.acc)?;
        st.q = f.u;
        st.s_hat = f.s;
        st.iteration += 1;
        self.alphas.push(st.alpha);
        if let Some(h) = &mut self.history {
            h.push(st.s_hat.clone());
        }
        Ok(())
    }

    /// Applies the shift rule using the latest `Ŝ(l,l)`.
    pub fn advance_shift(&mut self) {
        let st = &mut self.state;
        let s_ll = *st.s_hat.last().expect("l >= 1");
        st.alpha = match self.policy {
            ShiftPolicy::Dynamic => update_shift(st.alpha, s_ll),
            ShiftPolicy::FixedAfterFirst if st.iteration == 1 => update_shift(st.alpha, s_ll),
            ShiftPolicy::FixedAfterFirst => st.alpha,
        };
    }

    pub fn state(&self) -> &IterationState {
        &self.state
    }

    /// `B = AQ`, `[U, S, V] = svd(B)`, then `U(:, 1:k)`, `S(1:k)`,
    /// `Q·V(:, 1:k)`.
    pub fn finalize(&self) -> Result<TruncatedSvd> {
        let b = self.a.apply(&self.state.q, self.acc)?;
        let f = econ_svd(&b, self.mode, self.acc)?;
        let mut u = f.u.leading_cols(self.k);
        let mut v = self.state.q.matmul(&f.v.leading_cols(self.k))?;
        normalize_signs(&mut u, &mut v);
        TruncatedSvd::new(u, f.s[..self.k].to_vec(), v)
    }

    pub fn trace(&self, stop_reason: StopReason) -> ShiftTrace {
        ShiftTrace {
            alphas: self.alphas.clone(),
            s_hat_history: self.history.clone(),
            stopped_at: self.state.iteration,
            stop_reason,
        }
    }
}

/// Exactly `cfg.p` shifted iterations on `A` as given.
pub fn shifted_rsvd<O: LinearOperator + ?Sized>(
    a: &O,
    cfg: &SolverConfig,
) -> Result<(TruncatedSvd, ShiftTrace)> {
    shifted_timed(a, cfg, &mut PhaseTimes::default())
}

pub(crate) fn shifted_timed<O: LinearOperator + ?Sized>(
    a: &O,
    cfg: &SolverConfig,
    times: &mut PhaseTimes,
) -> Result<(TruncatedSvd, ShiftTrace)> {
    let t = Instant::now();
    let mut it = ShiftedIteration::new(a, cfg)?;
    for _ in 0..cfg.p {
        it.step()?;
        it.advance_shift();
    }
    times.iterate = t.elapsed();
    let t = Instant::now();
    let f = it.finalize()?;
    times.finalize = t.elapsed();
    Ok((f, it.trace(StopReason::FixedP)))
}

/// Shifted iterations until the per-vector-error test passes or `p_max`
/// iterations have run. The test runs before the shift update.
pub fn dash_svd<O: LinearOperator + ?Sized>(
    a: &O,
    cfg: &SolverConfig,
) -> Result<(TruncatedSvd, ShiftTrace)> {
    dash_timed(a, cfg, &mut PhaseTimes::default())
}

pub(crate) fn dash_timed<O: LinearOperator + ?Sized>(
    a: &O,
    cfg: &SolverConfig,
    times: &mut PhaseTimes,
) -> Result<(TruncatedSvd, ShiftTrace)> {
    let t = Instant::now();
    let mut it = ShiftedIteration::new(a, cfg)?;
    let mut s_prev = vec![0.0; cfg.l()];
    let mut alpha_prev = 0.0;
    let mut reason = StopReason::PMaxReached;
    for _ in 0..cfg.p_max {
        it.step()?;
        let st = it.state();
        if pve_stop_check(&s_prev, alpha_prev, &st.s_hat, st.alpha, cfg.k, cfg.tol)? {
            reason = StopReason::TolMet;
            break;
        }
        it.advance_shift();
        let st = it.state();
        s_prev.clone_from(&st.s_hat);
        alpha_prev = st.alpha;
    }
    times.iterate = t.elapsed();
    let t = Instant::now();
    let f = it.finalize()?;
    times.finalize = t.elapsed();
    Ok((f, it.trace(reason)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::oracle_svd;
    use crate::rsvd::{basic_rsvd, Algorithm};
    use crate::sparse::SparseMatrix;
    use crate::synth::{dense2, random_sparse};

    #[test]
    fn update_shift_examples() {
        assert_eq!(update_shift(0.0, 0.5), 0.25);
        assert_eq!(update_shift(0.3, 0.2), 0.3);
        assert!((update_shift(0.25, 0.35) - 0.30).abs() < 1e-15);
    }

    #[test]
    fn stop_check_examples() {
        assert!(!pve_stop_check(&[3.90, 1.00], 0.0, &[4.00, 1.00], 0.05, 1, 0.01).unwrap());
        assert!(pve_stop_check(&[4.0, 1.0], 0.05, &[4.0, 1.0], 0.05, 1, 1e-300).unwrap());
        assert!(pve_stop_check(&[4.00, 1.00], 0.05, &[4.005, 1.00], 0.05, 1, 0.01).unwrap());
        assert!(matches!(
            pve_stop_check(&[1.0], 0.0, &[1.0], 0.0, 1, 0.1),
            Err(Error::Shape(_))
        ));
    }

    fn diag_padded() -> SparseMatrix {
        let t: Vec<_> = [4.0, 3.0, 2.0, 1.0].iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        SparseMatrix::from_triplets(8, 8, &t).unwrap()
    }

    #[test]
    fn first_shift_zero_then_positive() {
        let cfg = SolverConfig {
            s: Some(2),
            p: 3,
            seed: 3,
            ..SolverConfig::new(2, Algorithm::Shifted)
        };
        let (f, trace) = shifted_rsvd(&diag_padded(), &cfg).unwrap();
        assert_eq!(trace.alphas.len(), 3);
        assert_eq!(trace.alphas[0], 0.0);
        assert!(trace.alphas[1] > 0.0);
        assert!(trace.alphas.windows(2).all(|w| w[0] <= w[1]));
        assert!((f.s[0] - 4.0).abs() < 1e-8 && (f.s[1] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn shifted_beats_basic_on_slow_decay() {
        let a = dense2(300, 11);
        let sigma = crate::synth::dense2_spectrum(300);
        let pve = |u: &DenseMatrix| {
            let atu = a.t_matmul(u).unwrap();
            (0..30)
                .map(|i| {
                    let n2: f64 = atu.col(i).iter().map(|x| x * x).sum();
                    (sigma[i] * sigma[i] - n2).abs()
                })
                .fold(0.0, f64::max)
                / (sigma[30] * sigma[30])
        };
        for p in [4, 8, 12] {
            let base = SolverConfig {
                s: Some(15),
                p,
                seed: 5,
                ..SolverConfig::new(30, Algorithm::Basic)
            };
            let b = basic_rsvd(&a, &base).unwrap();
            let (s, _) = shifted_rsvd(&a, &SolverConfig { algorithm: Algorithm::Shifted, ..base }).unwrap();
            assert!(pve(&s.u) <= pve(&b.u), "p={p}: {} vs {}", pve(&s.u), pve(&b.u));
        }
    }

    #[test]
    fn shift_stays_below_half_sigma_l_squared() {
        let a = random_sparse(120, 80, 0.1, 2);
        let sigma = oracle_svd(&a.to_dense()).unwrap().s;
        let cfg = SolverConfig {
            p: 10,
            seed: 9,
            ..SolverConfig::new(10, Algorithm::Shifted)
        };
        let (_, trace) = shifted_rsvd(&a, &cfg).unwrap();
        let cap = sigma[cfg.l() - 1].powi(2) / 2.0 + 1e-9;
        assert!(trace.alphas.iter().all(|&x| x <= cap));
    }

    #[test]
    fn dash_huge_tol_stops_at_once() {
        let a = random_sparse(60, 40, 0.2, 1);
        let cfg = SolverConfig {
            tol: 1e9,
            ..SolverConfig::new(5, Algorithm::Dash)
        };
        let (_, trace) = dash_svd(&a, &cfg).unwrap();
        assert_eq!(trace.stopped_at, 1);
        assert_eq!(trace.stop_reason, StopReason::TolMet);
    }

    #[test]
    fn dash_cap_binds() {
        let a = dense2(100, 2);
        let cfg = SolverConfig {
            tol: 1e-15,
            p_max: 3,
            ..SolverConfig::new(10, Algorithm::Dash)
        };
        let (_, trace) = dash_svd(&a, &cfg).unwrap();
        assert_eq!(trace.stopped_at, 3);
        assert_eq!(trace.stop_reason, StopReason::PMaxReached);
    }

    #[test]
    fn dash_equals_shifted_at_stop() {
        let a = random_sparse(150, 90, 0.1, 4);
        let cfg = SolverConfig {
            seed: 12,
            ..SolverConfig::new(8, Algorithm::Dash)
        };
        let (d, trace) = dash_svd(&a, &cfg).unwrap();
        assert_eq!(trace.stop_reason, StopReason::TolMet);
        let (s, _) = shifted_rsvd(&a, &SolverConfig { p: trace.stopped_at, ..cfg }).unwrap();
        assert_eq!(d, s);
    }

    #[test]
    fn fixed_policy_freezes_after_first() {
        let a = dense2(80, 3);
        let cfg = SolverConfig {
            p: 5,
            shift_policy: ShiftPolicy::FixedAfterFirst,
            record_history: true,
            ..SolverConfig::new(8, Algorithm::Shifted)
        };
        let (_, trace) = shifted_rsvd(&a, &cfg).unwrap();
        let first = trace.s_hat_history.as_ref().unwrap()[0].clone();
        assert_eq!(trace.alphas[0], 0.0);
        assert_eq!(trace.alphas[1], first[cfg.l() - 1] / 2.0);
        assert!(trace.alphas[1..].iter().all(|&x| x == trace.alphas[1]));
    }
}
