//! Closed-form continuity constants and concentration bounds.
//!
//! Ergotropy constants scale with `‖H‖_∞`; entropy constants depend only on the
//! dimension. The Levy widths use the sphere `S^{2d²−1}` that carries
//! purifications of `d`-dimensional states.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::HermitianOperator;

/// Levy-lemma constant `α = 1/(25π)`.
pub const LEVY_ALPHA: f64 = 1.0 / (25.0 * PI);

/// Smallest dimension for which the Bures-Lipschitz entropy constant holds.
pub const ENTROPY_BURES_MIN_DIM: usize = 5;

/// Lipschitz constants of ergotropy and entropy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzBounds {
    pub erg_bures: f64,
    pub erg_trace: f64,
    pub erg_hs: f64,
    /// With respect to the Euclidean distance between purifications.
    pub erg_euclid: f64,
    /// `None` below [`ENTROPY_BURES_MIN_DIM`].
    pub ent_bures: Option<f64>,
    pub ent_euclid: f64,
}

pub fn ergotropy_lipschitz_bounds(h: &HermitianOperator) -> Result<LipschitzBounds> {
    let norm = h.operator_norm()?;
    if !(norm > 0.0) {
        return Err(Error::domain("Lipschitz bounds need a nonzero Hamiltonian"));
    }
    let d = h.dim();
    let ln_d = (d as f64).ln();
    Ok(LipschitzBounds {
        erg_bures: 2.0 * norm,
        erg_trace: 2.0 * norm,
        erg_hs: (d as f64).sqrt() * norm,
        erg_euclid: 2.0 * norm,
        ent_bures: (d >= ENTROPY_BURES_MIN_DIM).then(|| PI * ln_d / LN_2),
        ent_euclid: 8f64.sqrt() * ln_d / LN_2,
    })
}

/// `h(x) = −x ln x − (1−x) ln(1−x)` in nats.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("binary entropy needs x in [0, 1], got {x}")));
    }
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// `t ln d + h(t)`, the entropy continuity bound at trace distance `t`.
pub fn entropy_fannes_bound(t: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain("entropy continuity bound needs d >= 2"));
    }
    Ok(t * (d as f64).ln() + binary_entropy(t)?)
}

/// Entropy Lipschitz constant with respect to the Bures angle.
///
/// `1.609 √(d−1) / ln 2` for `d <= 4`, `2 ln d / ln 2` from `d = 5` on.
pub fn entropy_bures_angle_coefficient(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain("entropy bounds need d >= 2"));
    }
    let df = d as f64;
    Ok(if d <= 4 {
        1.609 * (df - 1.0).sqrt() / LN_2
    } else {
        2.0 * df.ln() / LN_2
    })
}

/// Entropy constants that hold for `d >= 5`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyBuresBounds {
    /// `π ln d / ln 2`, Lipschitz constant with respect to the Bures distance.
    pub bures_lipschitz: f64,
    pub bures_angle_coeff: f64,
    /// `3.35 ln d`, a dimension-uniform cap on the angle coefficient.
    pub angle_fallback: f64,
    /// `√2 · bures_lipschitz`, Hölder-½ constant for the trace distance.
    pub holder_trace: f64,
    /// `d^{1/4} · bures_lipschitz`, Hölder-½ constant for the HS distance.
    pub holder_hs: f64,
}

pub fn entropy_bures_bounds(d: usize) -> Result<EntropyBuresBounds> {
    if d < ENTROPY_BURES_MIN_DIM {
        return Err(Error::domain(format!(
            "the Bures-Lipschitz entropy constant needs d >= {ENTROPY_BURES_MIN_DIM}, got {d}"
        )));
    }
    let df = d as f64;
    let bures_lipschitz = PI * df.ln() / LN_2;
    Ok(EntropyBuresBounds {
        bures_lipschitz,
        bures_angle_coeff: entropy_bures_angle_coefficient(d)?,
        angle_fallback: 3.35 * df.ln(),
        holder_trace: 2f64.sqrt() * bures_lipschitz,
        holder_hs: df.powf(0.25) * bures_lipschitz,
    })
}

/// Levy-lemma widths for ergotropy and entropy of Hilbert–Schmidt states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevyParameters {
    pub alpha: f64,
    /// Dimension `2d²` of the real space containing the purification sphere.
    pub n: f64,
    pub upsilon_erg: f64,
    pub upsilon_ent: f64,
}

impl LevyParameters {
    /// Width for the normalized entropy `S / ln d`.
    pub fn upsilon_ent_normalized(&self) -> f64 {
        let d = (self.n / 2.0).sqrt();
        self.upsilon_ent / d.ln()
    }
}

/// Widths at the default `α = 1/(25π)`:
/// `Υ_ℰ = √(50π)‖H‖/d`, `Υ_S = √(100π) ln d / d`.
pub fn levy_parameters(d: usize, h_norm: f64) -> Result<LevyParameters> {
    levy_parameters_with_alpha(d, h_norm, LEVY_ALPHA)
}

/// Widths `Υ = L / √(α n)` for an arbitrary Levy constant `α`, with
/// `L_ℰ = 2‖H‖` and `L_S = √8 ln d`.
pub fn levy_parameters_with_alpha(d: usize, h_norm: f64, alpha: f64) -> Result<LevyParameters> {
    if d < 2 {
        return Err(Error::domain("Levy parameters need d >= 2"));
    }
    if !(h_norm.is_finite() && h_norm > 0.0) {
        return Err(Error::domain("Levy parameters need a positive Hamiltonian norm"));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain("Levy constant alpha must be positive"));
    }
    let df = d as f64;
    let n = 2.0 * df * df;
    let scale = (alpha * n).sqrt();
    Ok(LevyParameters {
        alpha,
        n,
        upsilon_erg: 2.0 * h_norm / scale,
        upsilon_ent: 8f64.sqrt() * df.ln() / scale,
    })
}

/// `min(1, 3 exp(−ℓ²/Υ²))`.
pub fn levy_tail_bound(ell: f64, upsilon: f64) -> Result<f64> {
    if !(ell >= 0.0) {
        return Err(Error::domain(format!("tail threshold must be >= 0, got {ell}")));
    }
    if !(upsilon > 0.0) {
        return Err(Error::domain(format!("Levy width must be > 0, got {upsilon}")));
    }
    Ok((3.0 * (-(ell * ell) / (upsilon * upsilon)).exp()).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ergotropy_constants() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 0.2, 0.7, 1.0]).unwrap();
        let b = ergotropy_lipschitz_bounds(&h).unwrap();
        assert_eq!(b.erg_bures, 2.0);
        assert_eq!(b.erg_hs, 2.0);
        assert!(b.ent_bures.is_none());
        let h = HermitianOperator::from_real_diagonal(&[0.0, 3.0]).unwrap();
        assert_eq!(ergotropy_lipschitz_bounds(&h).unwrap().erg_trace, 6.0);
        let h = HermitianOperator::from_real_diagonal(&[0.0, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let b = ergotropy_lipschitz_bounds(&h).unwrap();
        assert!((b.ent_bures.unwrap() - 3.0 * PI).abs() < 1e-12);
        assert!((b.ent_euclid - 3.0 * 8f64.sqrt()).abs() < 1e-12);
        assert!(ergotropy_lipschitz_bounds(&HermitianOperator::zeros(3).unwrap()).is_err());
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - LN_2).abs() < 1e-15);
        for x in [0.01, 0.2, 0.37, 0.9] {
            assert!((binary_entropy(x).unwrap() - binary_entropy(1.0 - x).unwrap()).abs() < 1e-15);
        }
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn fannes_values() {
        assert_eq!(entropy_fannes_bound(0.0, 4).unwrap(), 0.0);
        assert!((entropy_fannes_bound(1.0, 2).unwrap() - LN_2).abs() < 1e-15);
        assert!(entropy_fannes_bound(0.5, 1).is_err());
        assert!(entropy_fannes_bound(1.1, 3).is_err());
    }

    #[test]
    fn entropy_bures_constants() {
        let b = entropy_bures_bounds(8).unwrap();
        assert!((b.bures_lipschitz - 9.424_777_960_769_38).abs() < 1e-12);
        assert!((b.holder_trace - 2f64.sqrt() * 3.0 * PI).abs() < 1e-12);
        assert!((b.holder_hs - 8f64.powf(0.25) * 3.0 * PI).abs() < 1e-12);
        assert!((b.bures_angle_coeff - 6.0).abs() < 1e-12);
        assert!((entropy_bures_angle_coefficient(4).unwrap() - 1.609 * 3f64.sqrt() / LN_2).abs() < 1e-12);
        assert!(matches!(entropy_bures_bounds(4), Err(Error::Domain(_))));
    }

    #[test]
    fn angle_coefficient_below_fallback() {
        for d in 2..200 {
            let c = entropy_bures_angle_coefficient(d).unwrap();
            assert!(c < 3.35 * (d as f64).ln(), "d={d}");
        }
    }

    #[test]
    fn levy_widths() {
        let p = levy_parameters(100, 1.0).unwrap();
        assert!((p.upsilon_erg - 0.125_331_413_731_550_02).abs() < 1e-12);
        assert_eq!(p.n, 20_000.0);
        assert_eq!(p.alpha, LEVY_ALPHA);
        let p = levy_parameters(2, 2.0).unwrap();
        assert!((p.upsilon_erg - (50.0 * PI).sqrt()).abs() < 1e-12);
        for d in [2usize, 3, 10, 77, 1000] {
            let p = levy_parameters(d, 1.0).unwrap();
            let df = d as f64;
            assert!((p.upsilon_ent * df / df.ln() - (100.0 * PI).sqrt()).abs() < 1e-9);
            assert!(p.upsilon_erg <= (50.0 * PI).sqrt() / df + 1e-12);
            assert!((p.upsilon_ent_normalized() - (100.0 * PI).sqrt() / df).abs() < 1e-12);
        }
        let halved = levy_parameters_with_alpha(10, 1.0, 4.0 * LEVY_ALPHA).unwrap();
        assert!((halved.upsilon_erg - levy_parameters(10, 1.0).unwrap().upsilon_erg / 2.0).abs() < 1e-15);
        assert!(levy_parameters(1, 1.0).is_err());
        assert!(levy_parameters(4, 0.0).is_err());
    }

    #[test]
    fn tail_bound_values() {
        assert_eq!(levy_tail_bound(0.0, 0.3).unwrap(), 1.0);
        assert_eq!(levy_tail_bound(0.3, 0.3).unwrap(), 1.0);
        assert!((levy_tail_bound(0.6, 0.3).unwrap() - 0.054_946_916_666_202_54).abs() < 1e-12);
        assert!(levy_tail_bound(-1.0, 0.3).is_err());
        assert!(levy_tail_bound(1.0, 0.0).is_err());
    }
}
