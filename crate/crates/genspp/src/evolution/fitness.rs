//! Feasibility-gated fitness.
//!
//! An individual is feasible when its task loss stays under the tolerance
//! tau = l + eps. For feasible individuals the goodness is the geometric
//! mean sqrt((1 - omega) * (1 - min(l_t, 1))); infeasible individuals get
//! goodness 0. The raw pair (h_tilde, h) with h_tilde = 1 - goodness and
//! h = 1 / (h_tilde + eps_hat) is always computed for logging: taken
//! literally, h assigns its maximum 1/eps_hat to infeasible individuals,
//! so selection uses goodness by default and the literal form only behind
//! an explicit mode.
//!
//! ```
//! use genspp::evolution::FitnessReport;
//!
//! let r = FitnessReport::from_losses(0.05, 0.2, 0.1, 1e-8);
//! assert!(r.feasible);
//! assert!((r.goodness - 0.8718).abs() < 1e-4);
//!
//! let r = FitnessReport::from_losses(0.5, 0.2, 0.1, 1e-8);
//! assert!(!r.feasible);
//! assert_eq!(r.goodness, 0.0);
//! ```

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FitnessMode {
    #[default]
    Goodness,
    LiteralEq8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub l_t: f64,
    pub omega: f64,
    pub goodness: f64,
    pub feasible: bool,
    pub h_tilde: f64,
    pub h: f64,
}

impl FitnessReport {
    /// Builds the full report from the measured losses. A non-finite task
    /// loss marks the individual infeasible.
    pub fn from_losses(l_t: f64, omega: f64, tau: f64, eps_hat: f64) -> Self {
        let feasible = l_t.is_finite() && l_t < tau;
        let goodness = if feasible {
            ((1.0 - omega) * (1.0 - l_t.min(1.0))).max(0.0).sqrt()
        } else {
            0.0
        };
        let h_tilde = if feasible { 1.0 - goodness } else { 0.0 };
        FitnessReport {
            l_t,
            omega,
            goodness,
            feasible,
            h_tilde,
            h: 1.0 / (h_tilde + eps_hat),
        }
    }

    /// Scalar driving selection and survival under the chosen mode.
    pub fn fitness(&self, mode: FitnessMode) -> f64 {
        match mode {
            FitnessMode::Goodness => self.goodness,
            FitnessMode::LiteralEq8 => self.h,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_hand_point() {
        let r = FitnessReport::from_losses(0.05, 0.2, 0.1, 1e-8);
        assert!(r.feasible);
        assert!((r.goodness - (0.8f64 * 0.95).sqrt()).abs() < 1e-12);
        assert!((r.goodness - 0.8718).abs() < 1e-4);
        assert!((r.h_tilde - (1.0 - r.goodness)).abs() < 1e-12);
    }

    #[test]
    fn infeasible_gets_zero_goodness_and_max_literal_h() {
        let r = FitnessReport::from_losses(0.5, 0.2, 0.1, 1e-8);
        assert!(!r.feasible);
        assert_eq!(r.goodness, 0.0);
        assert_eq!(r.h_tilde, 0.0);
        assert!((r.h - 1e8).abs() / 1e8 < 1e-9);
    }

    #[test]
    fn loss_clamp_boundary() {
        let r = FitnessReport::from_losses(1.3, 0.2, 2.0, 1e-8);
        assert!(r.feasible);
        assert_eq!(r.goodness, 0.0);
    }

    #[test]
    fn non_finite_loss_is_infeasible() {
        let r = FitnessReport::from_losses(f64::NAN, 0.2, 0.1, 1e-8);
        assert!(!r.feasible);
        assert_eq!(r.goodness, 0.0);
    }
}
