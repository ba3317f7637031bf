//! Carlitz multiple (star) polylogarithms and their t-deformations as (t−θ)-jets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::index::{Index, PointTuple};
use crate::jet::{jet_of_geometric, Jet};
use crate::laurent::LaurentNumber;
use crate::poly::{UniPoly, Var};
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;
use crate::special::theta_qm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Interior,
    Boundary,
}

#[derive(Clone, Debug, Serialize)]
pub struct DomainReport {
    pub ok: bool,
    pub violations: Vec<String>,
    /// Some point has a nontrivial denominator, so the truncation bound is our own.
    pub rational_point: bool,
}

/// (q−1)·(s q/(q−1) − deg u) = s q − (q−1) deg u: the scaled gap to the convergence radius.
/// None for u = 0.
fn scaled_gap(q: i128, s: u32, u: &RatFunc) -> Option<i128> {
    u.abs_log().map(|a| s as i128 * q - (q - 1) * a as i128)
}

/// |u_i| against q^{s_i q/(q−1)}. Interior: strict for i = 1, non-strict after.
/// Boundary: non-strict for i < r, strict for i = r.
pub fn domain_check(f: &Fq, s: &Index, u: &[RatFunc], regime: Regime) -> DomainReport {
    let q = f.q() as i128;
    let r = s.depth();
    let mut violations = vec![];
    if u.len() != r {
        violations.push(format!("depth mismatch: {} points for depth {}", u.len(), r));
    }
    for (i, ui) in u.iter().enumerate().take(r) {
        let strict = match regime {
            Regime::Interior => i == 0,
            Regime::Boundary => i == r - 1,
        };
        if let Some(g) = scaled_gap(q, s.s(i), ui) {
            if g < 0 || (strict && g == 0) {
                violations.push(format!(
                    "coordinate {}: |u| = q^{} {} q^({}·{}/{})",
                    i + 1,
                    ui.abs_log().unwrap(),
                    if strict { "is not <" } else { "is not ≤" },
                    s.s(i),
                    q,
                    q - 1
                ));
            }
        }
    }
    DomainReport {
        ok: violations.is_empty(),
        violations,
        rational_point: u.iter().any(|x| !x.is_poly()),
    }
}

/// Norm data of one factor of a chain term: log_q ‖factor at index i‖_θ·(q−1) is at most
/// max over entries (extra·(q−1) + s q − gap·q^i).
#[derive(Clone, Debug)]
pub struct FactorNorm {
    pub s: u32,
    /// (extra, scaled gap) pairs; empty means the factor vanishes.
    pub parts: Vec<(i128, i128)>,
}

fn pow_sat(q: i128, n: u32) -> i128 {
    let mut r: i128 = 1;
    for _ in 0..n {
        r = r.saturating_mul(q);
        if r > 1 << 80 {
            return 1 << 80;
        }
    }
    r
}

impl FactorNorm {
    /// Scaled log-norm bound at summation index i, or None for a vanishing factor.
    fn scaled_log_norm(&self, q: i128, i: u32) -> Option<i128> {
        let qi = pow_sat(q, i);
        self.parts
            .iter()
            .map(|&(extra, gap)| extra * (q - 1) + self.s as i128 * q - gap.saturating_mul(qi))
            .max()
    }
}

/// Lower bound on ord of every omitted jet coefficient after truncating at i_1 ≤ n.
/// Factors k ≥ 2 are bounded at their smallest index 0; factor 1 at n + 1.
pub fn chain_tail_bound(q: u32, factors: &[FactorNorm], n: u32) -> i64 {
    let q = q as i128;
    let mut total: i128 = 0;
    for (k, fac) in factors.iter().enumerate() {
        let i = if k == 0 { n + 1 } else { 0 };
        match fac.scaled_log_norm(q, i) {
            None => return i64::MAX,
            Some(x) => total += x,
        }
    }
    // ord ≥ −total/(q−1), rounded up
    let ord = (-total).div_euclid(q - 1) + if (-total).rem_euclid(q - 1) == 0 { 0 } else { 1 };
    ord.clamp(i64::MIN as i128 / 2, i64::MAX as i128 / 2) as i64
}

pub fn polylog_factor_norms(f: &Fq, s: &Index, u: &[RatFunc]) -> Vec<FactorNorm> {
    let q = f.q() as i128;
    (0..s.depth())
        .map(|k| FactorNorm {
            s: s.s(k),
            parts: scaled_gap(q, s.s(k), &u[k]).map(|g| vec![(0, g)]).unwrap_or_default(),
        })
        .collect()
}

/// Sound lower bound on ord of the omitted part when the star or non-star sum is cut at
/// i_1 ≤ n.
pub fn tail_bound(f: &Fq, s: &Index, u: &[RatFunc], n: u32) -> i64 {
    chain_tail_bound(f.q(), &polylog_factor_norms(f, s, u), n)
}

/// Least cutoff whose tail bound reaches `target`.
pub fn cutoff_for(q: u32, factors: &[FactorNorm], target: i64) -> Result<u32> {
    if factors.first().is_some_and(|f| f.parts.iter().any(|&(_, g)| g <= 0)) {
        return Err(Error::Domain("first coordinate on or outside the radius".into()));
    }
    for n in 0..64 {
        if chain_tail_bound(q, factors, n) >= target {
            return Ok(n);
        }
    }
    Err(Error::Domain("no cutoff below 64 reaches the target".into()))
}

/// Σ over chains i_1 ≥ ⋯ ≥ i_r (star) or i_1 > ⋯ > i_r (strict), i_1 ≤ n, of
/// Π_k factor(k, i_k), by nested prefix sums.
pub fn chain_sum<S: Scalar>(
    r: usize,
    n: u32,
    star: bool,
    zero: &Jet<S>,
    factor: &dyn Fn(usize, u32) -> Result<Jet<S>>,
) -> Result<Jet<S>> {
    let len = n as usize + 1;
    let mut cur: Vec<Jet<S>> = (0..len).map(|i| factor(r - 1, i as u32)).collect::<Result<_>>()?;
    for k in (0..r - 1).rev() {
        let mut next = Vec::with_capacity(len);
        let mut prefix = zero.clone();
        for i in 0..len {
            if star {
                prefix = prefix.add(&cur[i]);
            }
            let fk = factor(k, i as u32)?;
            next.push(if prefix.exact_zero() { zero.clone() } else { fk.mul(&prefix) });
            if !star {
                prefix = prefix.add(&cur[i]);
            }
        }
        cur = next;
    }
    Ok(cur.iter().fold(zero.clone(), |a, b| a.add(b)))
}

/// Jets of 1/𝕃_i for i = 0..=n, built incrementally.
pub fn inv_ll_jets<S: Scalar>(like: &S, n: u32, order: usize, rel: i64) -> Result<Vec<Jet<S>>> {
    let f = like.field().clone();
    let mut out = vec![Jet::constant(like.one_like(), order)];
    for m in 1..=n {
        let c = like.embed_poly(&theta_qm(&f, m));
        let g = jet_of_geometric(&c, 1, order, rel)?;
        let next = out[m as usize - 1].mul(&g);
        out.push(next);
    }
    Ok(out)
}

/// Embed u^{q^i}.
fn twisted_point<S: Scalar>(like: &S, u: &RatFunc, i: u32, prec: i64) -> S {
    if u.is_poly() {
        like.embed_poly(&u.num().twist(i))
    } else {
        like.embed_ratfunc(&u.twist(i), prec)
    }
}

#[derive(Clone, Debug)]
pub struct PolylogJet {
    pub index: Index,
    pub point: PointTuple,
    pub order: usize,
    pub cutoff: u32,
    pub star: bool,
    pub value: Jet<LaurentNumber>,
    /// Certified lower bound on ord of the omitted tail.
    pub tail_ord: i64,
    pub flags: Vec<String>,
}

/// Partial sum of the star (or strict) deformed polylogarithm as a jet, in any scalar mode.
pub fn polylog_partial<S: Scalar>(
    like: &S,
    s: &Index,
    u: &[RatFunc],
    order: usize,
    n: u32,
    star: bool,
    abs_prec: i64,
) -> Result<Jet<S>> {
    let f = like.field().clone();
    let q = f.q() as i64;
    let r = s.depth();
    if u.len() != r {
        return Err(Error::Invalid("depth mismatch".into()));
    }
    let wtq = (s.weight() as i64 * q).div_euclid(q - 1) + 1;
    let rel = abs_prec + wtq + r as i64 + 4;
    let inv = inv_ll_jets(like, n, order, rel)?;
    let zero = Jet::zero(like, order);
    let mut powered: Vec<Vec<Jet<S>>> = vec![];
    for k in 0..r {
        powered.push(inv.iter().map(|j| j.pow(s.s(k))).collect());
    }
    let factor = |k: usize, i: u32| -> Result<Jet<S>> {
        if u[k].is_zero() {
            return Ok(zero.clone());
        }
        let ui = twisted_point(like, &u[k], i, abs_prec + wtq + 4);
        Ok(powered[k][i as usize].scale(&ui).cap(abs_prec + wtq + 4))
    };
    chain_sum(r, n, star, &zero, &factor)
}

fn polylog_jet(f: &Fq, s: &Index, u: &[RatFunc], order: usize, prec: i64, star: bool) -> Result<PolylogJet> {
    let dom = domain_check(f, s, u, Regime::Interior);
    if !dom.ok {
        return Err(Error::Domain(dom.violations.join("; ")));
    }
    let mut flags = vec![];
    if dom.rational_point {
        flags.push("truncation bound for non-integral points is implementation-derived".into());
    }
    let norms = polylog_factor_norms(f, s, u);
    let n = if u.iter().any(|x| x.is_zero()) { 0 } else { cutoff_for(f.q(), &norms, prec + 10)? };
    let like = LaurentNumber::zero(f);
    let value = polylog_partial(&like, s, u, order, n, star, prec + 10)?.cap(prec);
    Ok(PolylogJet {
        index: s.clone(),
        point: u.to_vec(),
        order,
        cutoff: n,
        star,
        value,
        tail_ord: chain_tail_bound(f.q(), &norms, n),
        flags,
    })
}

/// Jet of 𝔏i*_{𝔰,u} at t = θ to order J, certified to precision P.
pub fn cmspl_jet(f: &Fq, s: &Index, u: &[RatFunc], order: usize, prec: i64) -> Result<PolylogJet> {
    polylog_jet(f, s, u, order, prec, true)
}

/// Jet of 𝔏i_{𝔰,u} (strict index region).
pub fn cmpl_jet(f: &Fq, s: &Index, u: &[RatFunc], order: usize, prec: i64) -> Result<PolylogJet> {
    polylog_jet(f, s, u, order, prec, false)
}

/// θ as an element of K.
pub fn theta_point(f: &Fq) -> RatFunc {
    UniPoly::x(f, Var::Theta).into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::carlitz_l;

    fn th(f: &Fq, c: &[u32]) -> RatFunc {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec()).into()
    }

    #[test]
    fn domain_examples() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("3,1").unwrap();
        let u = vec![th(&f, &[0, 0, 1]), th(&f, &[1])];
        assert!(domain_check(&f, &s, &u, Regime::Boundary).ok);
        let z = vec![RatFunc::zero(&f, Var::Theta), RatFunc::zero(&f, Var::Theta)];
        assert!(domain_check(&f, &s, &z, Regime::Boundary).ok);
        // s_r q/(q−1) = 2 at q = 2, s_r = 1: u_r = θ^2 is on the radius
        let bad = vec![th(&f, &[1]), th(&f, &[0, 0, 1])];
        let rep = domain_check(&f, &s, &bad, Regime::Boundary);
        assert!(!rep.ok);
        assert!(rep.violations[0].starts_with("coordinate 2"));
    }

    #[test]
    fn carlitz_log_at_theta() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("1").unwrap();
        let u = vec![theta_point(&f)];
        let pj = cmspl_jet(&f, &s, &u, 2, 60).unwrap();
        // truncation oracle Σ θ^{2^i}/L_i
        let mut acc = RatFunc::zero(&f, Var::Theta);
        for i in 0..=pj.cutoff + 2 {
            let l: RatFunc = carlitz_l(&f, i).into();
            acc = acc.add(&th(&f, &[0, 1]).twist(i).div(&l).unwrap());
        }
        let oracle = LaurentNumber::from_ratfunc(&acc, 60);
        assert!(pj.value.coeff(0).agreement(&oracle) >= 60);
    }

    #[test]
    fn tail_bound_q2_depth1() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("1").unwrap();
        let u = vec![RatFunc::one(&f, Var::Theta)];
        let mut last = i64::MIN;
        for n in 0..8 {
            let b = tail_bound(&f, &s, &u, n);
            assert!(b > last);
            last = b;
            // omitted term i = n+1 has ord 2^{i+1} − 2
            let i = n + 1;
            assert!((1i64 << (i + 1)) - 2 >= b);
        }
    }

    #[test]
    fn double_sum_oracle() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("1,3").unwrap();
        let u = vec![th(&f, &[1]), th(&f, &[0, 0, 1])];
        let pj = cmspl_jet(&f, &s, &u, 1, 50).unwrap();
        let mut acc = RatFunc::zero(&f, Var::Theta);
        for i1 in 0..=pj.cutoff {
            for i2 in 0..=i1 {
                let l1: RatFunc = carlitz_l(&f, i1).into();
                let l2: RatFunc = carlitz_l(&f, i2).into();
                let t = u[0].twist(i1).div(&l1).unwrap().mul(&u[1].twist(i2).div(&l2.pow(3)).unwrap());
                acc = acc.add(&t);
            }
        }
        let oracle = LaurentNumber::from_ratfunc(&acc, 50);
        assert!(pj.value.coeff(0).agreement(&oracle) >= 50);
    }
}
