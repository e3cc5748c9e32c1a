//! Schmidt decomposition across a contiguous cut.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    /// Von Neumann entropy in nats.
    pub entropy: f64,
    /// Schmidt weights, descending.
    pub spectrum: Vec<f64>,
    /// Multiplicities of the nonnegligible weights, in descending order.
    pub degeneracy_pattern: Vec<usize>,
}

const WEIGHT_FLOOR: f64 = 1e-12;
const RELATIVE_TOL: f64 = 1e-8;

/// Bipartition sites `[0, cut)` against `[cut, nsites)`; site 0 is the most
/// significant digit of the basis index.
pub fn entanglement(state: &CVec, nsites: usize, site_dim: usize, cut: usize) -> Result<EntanglementReport> {
    if cut == 0 || cut >= nsites {
        return Err(Error::InvalidCut { cut, nsites });
    }
    let left = site_dim.pow(cut as u32);
    let right = site_dim.pow((nsites - cut) as u32);
    if state.len() != left * right {
        return Err(Error::DimensionMismatch { left: state.len(), right: left * right });
    }
    let norm = state.norm();
    let psi = CMat::from_fn(left, right, |a, b| state[a * right + b] / norm);
    let sv = psi.singular_values();
    let mut spectrum: Vec<f64> = sv.iter().map(|s| s * s).collect();
    spectrum.sort_by(|a, b| b.total_cmp(a));
    let entropy = -spectrum.iter().filter(|&&w| w > 0.0).map(|w| w * w.ln()).sum::<f64>();
    let mut degeneracy_pattern: Vec<usize> = Vec::new();
    let mut last: Option<f64> = None;
    for &w in spectrum.iter().filter(|&&w| w > WEIGHT_FLOOR) {
        match last {
            Some(prev) if (prev - w).abs() <= RELATIVE_TOL * prev => *degeneracy_pattern.last_mut().unwrap() += 1,
            _ => {
                degeneracy_pattern.push(1);
                last = Some(w);
            }
        }
    }
    Ok(EntanglementReport { entropy, spectrum, degeneracy_pattern })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ZERO};

    #[test]
    fn product_state_has_zero_entropy() {
        let mut v = CVec::from_element(9, ZERO);
        v[4] = c(1.0, 0.0);
        let r = entanglement(&v, 2, 3, 1).unwrap();
        assert!(r.entropy.abs() < 1e-14);
        assert_eq!(r.degeneracy_pattern, vec![1]);
    }

    #[test]
    fn bell_pair_is_ln2() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = CVec::from_vec(vec![c(s, 0.0), ZERO, ZERO, c(0.0, s)]);
        let r = entanglement(&v, 2, 2, 1).unwrap();
        assert!((r.entropy - 2f64.ln()).abs() < 1e-14);
        assert_eq!(r.degeneracy_pattern, vec![2]);
        assert!((r.spectrum.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_cut() {
        let v = CVec::from_element(4, c(0.5, 0.0));
        assert!(matches!(entanglement(&v, 2, 2, 0), Err(Error::InvalidCut { .. })));
        assert!(matches!(entanglement(&v, 2, 2, 2), Err(Error::InvalidCut { .. })));
    }
}
