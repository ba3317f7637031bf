//! Gauss norms ‖Σ b_i t^i‖_α = max |b_i α^i|_∞ for α ∈ {1, θ}.
//!
//! Norms are powers of q, so they are reported by their base-q logarithm.

use crate::laurent::LaurentNumber;
use crate::poly::BiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    One,
    Theta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GaussNorm {
    Zero,
    /// The norm q^k.
    Pow(i64),
}

impl GaussNorm {
    pub fn mul(self, o: GaussNorm) -> GaussNorm {
        match (self, o) {
            (GaussNorm::Pow(a), GaussNorm::Pow(b)) => GaussNorm::Pow(a + b),
            _ => GaussNorm::Zero,
        }
    }
    pub fn log_q(self) -> Option<i64> {
        match self {
            GaussNorm::Zero => None,
            GaussNorm::Pow(k) => Some(k),
        }
    }
}

/// A polynomial in t with truncated Laurent coefficients.
#[derive(Clone, Debug)]
pub struct GaussPoly {
    pub coeffs: Vec<LaurentNumber>,
}

impl GaussPoly {
    pub fn from_bipoly(b: &BiPoly) -> GaussPoly {
        GaussPoly { coeffs: b.coeffs().iter().map(LaurentNumber::from_poly).collect() }
    }
    /// Coefficients known to be zero at working precision are treated as zero.
    pub fn gauss_norm(&self, at: Scale) -> GaussNorm {
        let mut best = GaussNorm::Zero;
        for (i, b) in self.coeffs.iter().enumerate() {
            if let Some(o) = b.ord() {
                let k = -o + if at == Scale::Theta { i as i64 } else { 0 };
                best = best.max(GaussNorm::Pow(k));
            }
        }
        best
    }
}

pub fn gauss_norm(b: &BiPoly, at: Scale) -> GaussNorm {
    let mut best = GaussNorm::Zero;
    for (i, c) in b.coeffs().iter().enumerate() {
        if let Some(d) = c.degree() {
            let k = d as i64 + if at == Scale::Theta { i as i64 } else { 0 };
            best = best.max(GaussNorm::Pow(k));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::poly::{UniPoly, Var};

    #[test]
    fn examples() {
        let f = Fq::from_q(2).unwrap();
        let t = BiPoly::t_pow(&f, 1);
        assert_eq!(gauss_norm(&t, Scale::Theta), GaussNorm::Pow(1));
        let h2 = t.add(&BiPoly::from_theta(&UniPoly::monomial(&f, Var::Theta, 1, 2)));
        assert_eq!(gauss_norm(&h2, Scale::One), GaussNorm::Pow(2));
        assert_eq!(gauss_norm(&BiPoly::zero(&f), Scale::One), GaussNorm::Zero);
        let gp = GaussPoly::from_bipoly(&h2);
        assert_eq!(gp.gauss_norm(Scale::Theta), GaussNorm::Pow(2));
    }
}
