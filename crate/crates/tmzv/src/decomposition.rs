//! Anderson–Thakur series as jets, their expansion into strict polylogarithms, the star
//! conversion that turns these into triples (𝔰_ℓ, u_ℓ, b_ℓ), and Chen's product formula.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{binom_mod, Fq};
use crate::index::{render_point, Index, PointTuple};
use crate::jet::{jet_agreement, Jet};
use crate::laurent::{LaurentJson, LaurentNumber};
use crate::poly::{BiPoly, UniPoly, Var};
use crate::polylog::{chain_sum, chain_tail_bound, cmpl_jet, cmspl_jet, cutoff_for, inv_ll_jets, FactorNorm};
use crate::ratfunc::RatFunc;
use crate::special::{at_polynomial, dmax_for, gamma_index, zeta_bruteforce};

/// Budget for brute-force power sums used by the identity checks, in bits of enumeration.
pub const CHECK_BUDGET_BITS: f64 = 22.0;

#[derive(Clone, Debug)]
pub struct ATSeriesJet {
    pub index: Index,
    pub order: usize,
    pub cutoff: u32,
    pub value: Jet<LaurentNumber>,
    pub tail_ord: i64,
}

fn h_polys(f: &Fq, s: &Index) -> Result<Vec<BiPoly>> {
    s.entries().iter().map(|&k| at_polynomial(f, k as u64 - 1)).collect()
}

fn h_norms(f: &Fq, s: &Index, hs: &[BiPoly]) -> Vec<FactorNorm> {
    let q = f.q() as i128;
    hs.iter()
        .enumerate()
        .map(|(k, h)| FactorNorm {
            s: s.s(k),
            parts: h
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as i128, s.s(k) as i128 * q - (q - 1) * c.deg_i64() as i128))
                .collect(),
        })
        .collect()
}

fn jet_precision(j: &Jet<LaurentNumber>) -> i64 {
    j.coeffs().iter().map(|x| x.precision()).min().unwrap()
}

/// Jet at θ of ζ^AT(𝔰) to order J, certified to precision P.
pub fn at_series_jet(f: &Fq, s: &Index, order: usize, prec: i64) -> Result<ATSeriesJet> {
    let hs = h_polys(f, s)?;
    let norms = h_norms(f, s, &hs);
    let n = cutoff_for(f.q(), &norms, prec + 10)?;
    let q = f.q() as i64;
    let tdeg: i64 = hs.iter().map(|h| h.t_degree().unwrap_or(0) as i64).sum();
    let margin = (s.weight() as i64 * q).div_euclid(q - 1) + tdeg + s.depth() as i64 + 12;
    let like = LaurentNumber::zero(f);
    let inv = inv_ll_jets(&like, n, order, prec + margin)?;
    let zero = Jet::zero(&like, order);
    let factor = |k: usize, i: u32| -> Result<Jet<LaurentNumber>> {
        let hj = Jet::of_bipoly(&like, &hs[k].twist(i), order);
        Ok(hj.mul(&inv[i as usize].pow(s.s(k))).cap(prec + margin))
    };
    let value = chain_sum(s.depth(), n, false, &zero, &factor)?.cap(prec);
    let got = jet_precision(&value);
    if got < prec {
        return Err(Error::Precision { wanted: prec, got });
    }
    Ok(ATSeriesJet { index: s.clone(), order, cutoff: n, value, tail_ord: chain_tail_bound(f.q(), &norms, n) })
}

#[derive(Clone, Debug)]
pub struct JTerm {
    pub j: Vec<usize>,
    pub point: PointTuple,
    /// a_𝐣 = t^{j_1+⋯+j_r}
    pub a: BiPoly,
}

/// Expand each H_{s_i−1} in t and form the product set. Multi-indices whose point has a
/// zero coordinate are dropped, since the corresponding polylogarithm vanishes.
pub fn expand_j(f: &Fq, s: &Index) -> Result<Vec<JTerm>> {
    let hs = h_polys(f, s)?;
    let mut out = vec![JTerm { j: vec![], point: vec![], a: BiPoly::one(f) }];
    for h in &hs {
        let mut next = vec![];
        for term in &out {
            for (j, c) in h.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut jj = term.j.clone();
                jj.push(j);
                let mut pt = term.point.clone();
                pt.push(RatFunc::from(c.clone()));
                next.push(JTerm { j: jj, point: pt, a: term.a.mul(&BiPoly::t_pow(f, j)) });
            }
        }
        out = next;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct StarTerm {
    pub index: Index,
    pub point: PointTuple,
    pub negative: bool,
}

/// 𝔏i_{𝔰,u} as a signed sum of 𝔏i* over merges of consecutive entries.
pub fn star_convert(s: &Index, u: &[RatFunc]) -> Vec<StarTerm> {
    let r = s.depth();
    let mut out = vec![];
    // bit k of mask set: a block boundary after entry k
    for mask in (0u32..1 << (r - 1)).rev() {
        let mut idx = vec![];
        let mut pt: Vec<RatFunc> = vec![];
        let mut start = true;
        for k in 0..r {
            if start {
                idx.push(s.s(k));
                pt.push(u[k].clone());
            } else {
                *idx.last_mut().unwrap() += s.s(k);
                let last = pt.pop().unwrap();
                pt.push(last.mul(&u[k]));
            }
            start = k + 1 < r && mask >> k & 1 == 1;
        }
        let blocks = idx.len();
        out.push(StarTerm { index: Index::new(idx).unwrap(), point: pt, negative: (r - blocks) % 2 == 1 });
    }
    out
}

#[derive(Clone, Debug)]
pub struct Triple {
    pub b: BiPoly,
    pub index: Index,
    pub point: PointTuple,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub source: Index,
    pub triples: Vec<Triple>,
    /// Number of depth-1 triples, which come first.
    pub split: usize,
}

impl Decomposition {
    pub fn count(&self) -> usize {
        self.triples.len()
    }
}

/// Collect the star-converted expansion into triples. The stored b_ℓ carries the global
/// sign (−1)^{r−1}, so that ζ^AT(𝔰) = Σ_ℓ b_ℓ (−1)^{dep(𝔰_ℓ)−1} 𝔏i*_{𝔰_ℓ,u_ℓ}.
pub fn triples(f: &Fq, s: &Index) -> Result<Decomposition> {
    let r = s.depth();
    let mut acc: Vec<Triple> = vec![];
    for jt in expand_j(f, s)? {
        for st in star_convert(s, &jt.point) {
            // (−1)^{r−k} from the conversion times the displayed (−1)^{k−1}
            let c = if (r - 1) % 2 == 1 { jt.a.neg() } else { jt.a.clone() };
            match acc.iter_mut().find(|t| t.index == st.index && t.point == st.point) {
                Some(t) => t.b = t.b.add(&c),
                None => acc.push(Triple { b: c, index: st.index, point: st.point }),
            }
        }
    }
    acc.retain(|t| !t.b.is_zero());
    let (mut out, rest): (Vec<_>, Vec<_>) = acc.into_iter().partition(|t| t.index.depth() == 1);
    let split = out.len();
    out.extend(rest);
    for t in &out {
        if t.point.iter().any(|x| x.is_zero()) {
            return Err(Error::Invalid(format!("zero coordinate in the point of {}", t.index)));
        }
    }
    Ok(Decomposition { source: s.clone(), triples: out, split })
}

/// Σ_ℓ b_ℓ (−1)^{dep(𝔰_ℓ)−1} 𝔏i*_{𝔰_ℓ,u_ℓ} as a jet.
pub fn triple_sum(f: &Fq, d: &Decomposition, order: usize, prec: i64) -> Result<Jet<LaurentNumber>> {
    let like = LaurentNumber::zero(f);
    let mut acc = Jet::zero(&like, order);
    for t in &d.triples {
        let guard = t.b.t_degree().unwrap_or(0) as i64 + 4;
        let li = cmspl_jet(f, &t.index, &t.point, order, prec + guard)?;
        let mut term = Jet::of_bipoly(&like, &t.b, order).mul(&li.value);
        if t.index.depth() % 2 == 0 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    Ok(acc.cap(prec))
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleJson {
    pub b: String,
    pub index: Vec<u32>,
    pub point: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub index: Vec<u32>,
    pub triples: Vec<TripleJson>,
    pub split: usize,
    pub count: usize,
    /// ζ^AT against the strict expansion Σ a_𝐣 𝔏i_{𝔰,u_𝐣}.
    pub expansion_agreement: i64,
    /// ζ^AT against the triple sum, coefficientwise.
    pub identity_agreement: i64,
    /// Coefficient 0 against Γ_𝔰 ζ_A(𝔰) by brute force.
    pub specialization_agreement: i64,
    pub at_value: LaurentJson,
    pub passed: bool,
}

impl Triple {
    pub fn to_json(&self) -> TripleJson {
        TripleJson { b: self.b.render(), index: self.index.entries().to_vec(), point: render_point(&self.point) }
    }
}

/// Build the triples and check them: as a jet identity, against the strict expansion, and
/// at t = θ against the brute-force value. A failed identity is an error.
pub fn decompose_checked(f: &Fq, s: &Index, order: usize, prec: i64) -> Result<(Decomposition, DecompositionReport)> {
    let d = triples(f, s)?;
    let at = at_series_jet(f, s, order, prec)?;
    let like = LaurentNumber::zero(f);
    let mut expansion = Jet::zero(&like, order);
    for jt in expand_j(f, s)? {
        let guard = jt.a.t_degree().unwrap_or(0) as i64 + 4;
        let li = cmpl_jet(f, s, &jt.point, order, prec + guard)?;
        expansion = expansion.add(&Jet::of_bipoly(&like, &jt.a, order).mul(&li.value));
    }
    let expansion_agreement = jet_agreement(&at.value, &expansion.cap(prec)).min(prec);
    let identity_agreement = jet_agreement(&at.value, &triple_sum(f, &d, order, prec)?).min(prec);
    let gamma = gamma_index(f, s);
    let zp = prec + gamma.deg_i64();
    let z = zeta_bruteforce(f, s, dmax_for(s, zp), zp, CHECK_BUDGET_BITS)?;
    let gz = LaurentNumber::from_poly(&gamma).mul(&z.value);
    let specialization_agreement = gz.agreement(at.value.coeff(0)).min(prec);
    let passed = expansion_agreement >= prec && identity_agreement >= prec && specialization_agreement >= prec;
    let report = DecompositionReport {
        index: s.entries().to_vec(),
        triples: d.triples.iter().map(Triple::to_json).collect(),
        split: d.split,
        count: d.count(),
        expansion_agreement,
        identity_agreement,
        specialization_agreement,
        at_value: at.value.coeff(0).to_json(),
        passed,
    };
    if !passed {
        return Err(Error::Check(format!(
            "decomposition of {s}: expansion {expansion_agreement}, identity {identity_agreement}, specialization {specialization_agreement} (wanted {prec})"
        )));
    }
    Ok((d, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChenTerm {
    pub coef: u32,
    pub index: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChenProduct {
    pub s1: u32,
    pub s2: u32,
    pub terms: Vec<ChenTerm>,
    pub flags: Vec<String>,
}

fn chen_coef(p: u32, s1: u32, s2: u32, j: u32) -> u32 {
    let part = |s: u32| {
        let b = binom_mod(j as u64 - 1, s as u64 - 1, p);
        if (s - 1) % 2 == 1 {
            (p - b) % p
        } else {
            b
        }
    };
    (part(s1) + part(s2)) % p
}

/// Right-hand side of ζ_A(s_1)ζ_A(s_2) as F_p-combination of ζ_A at indices.
/// Terms with i = 0 are excluded; a nonzero excluded coefficient is flagged.
pub fn chen_product(f: &Fq, s1: u32, s2: u32) -> ChenProduct {
    let p = f.p();
    let q = f.q();
    let n = s1 + s2;
    let mut terms: Vec<ChenTerm> = vec![];
    let mut push = |c: u32, idx: Vec<u32>| {
        if c % p == 0 {
            return;
        }
        match terms.iter_mut().find(|t| t.index == idx) {
            Some(t) => t.coef = (t.coef + c) % p,
            None => terms.push(ChenTerm { coef: c % p, index: idx }),
        }
    };
    push(1, vec![s1, s2]);
    push(1, vec![s2, s1]);
    push(1, vec![n]);
    let mut flags = vec![];
    for j in (q - 1..=n).step_by(q as usize - 1) {
        let c = chen_coef(p, s1, s2, j);
        if j == n {
            if c != 0 {
                flags.push(format!("excluded boundary term i = 0, j = {n} has coefficient {c}"));
            }
            continue;
        }
        push(c, vec![n - j, j]);
    }
    terms.retain(|t| t.coef != 0);
    ChenProduct { s1, s2, terms, flags }
}

/// Agreement of ζ_A(s_1)ζ_A(s_2) with the Chen right-hand side, by brute force.
pub fn chen_check(f: &Fq, cp: &ChenProduct, prec: i64) -> Result<i64> {
    let z = |idx: &Index| -> Result<LaurentNumber> {
        Ok(zeta_bruteforce(f, idx, dmax_for(idx, prec), prec, CHECK_BUDGET_BITS)?.value)
    };
    let lhs = z(&Index::new(vec![cp.s1])?)?.mul(&z(&Index::new(vec![cp.s2])?)?);
    let mut rhs = LaurentNumber::zero(f);
    for t in &cp.terms {
        rhs = rhs.add(&z(&Index::new(t.index.clone())?)?.scale(f.from_int(t.coef as i64)));
    }
    Ok(lhs.agreement(&rhs).min(prec))
}

/// θ-polynomial helper for tests and callers that build points by hand.
pub fn theta_poly(f: &Fq, c: &[u32]) -> RatFunc {
    UniPoly::from_coeffs(f, Var::Theta, c.to_vec()).into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_example() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("1,3").unwrap();
        let e = expand_j(&f, &s).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].j, vec![0, 0]);
        assert_eq!(render_point(&e[0].point), vec!["1", "θ^2"]);
        assert_eq!(render_point(&e[1].point), vec!["1", "1"]);
        assert_eq!(e[1].a.render(), "t");
        let ones = expand_j(&f, &Index::parse("1,1,1").unwrap()).unwrap();
        assert_eq!(ones.len(), 1);
        assert!(ones[0].point.iter().all(|x| x.is_one()));
    }

    #[test]
    fn star_convert_depth2() {
        let f = Fq::from_q(3).unwrap();
        let s = Index::parse("2,1").unwrap();
        let u = vec![theta_poly(&f, &[0, 1]), theta_poly(&f, &[1, 1])];
        let st = star_convert(&s, &u);
        assert_eq!(st.len(), 2);
        assert_eq!(st[0].index, s);
        assert!(!st[0].negative);
        assert_eq!(st[1].index, Index::parse("3").unwrap());
        assert_eq!(st[1].point[0], u[0].mul(&u[1]));
        assert!(st[1].negative);
        // diagonal split as jets
        let strict = cmpl_jet(&f, &s, &u, 2, 40).unwrap().value;
        let mut sum = Jet::zero(&LaurentNumber::zero(&f), 2);
        for t in &st {
            let v = cmspl_jet(&f, &t.index, &t.point, 2, 40).unwrap().value;
            sum = if t.negative { sum.sub(&v) } else { sum.add(&v) };
        }
        assert!(jet_agreement(&strict, &sum) >= 40);
    }

    #[test]
    fn star_convert_depth3_counts() {
        let f = Fq::from_q(3).unwrap();
        let s = Index::parse("1,2,1").unwrap();
        let u = vec![RatFunc::one(&f, Var::Theta); 3];
        let st = star_convert(&s, &u);
        assert_eq!(st.len(), 4);
        assert!(st.iter().all(|t| t.index.weight() == 4));
        assert_eq!(st.iter().filter(|t| t.negative).count(), 2);
    }

    #[test]
    fn triples_example() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("1,3").unwrap();
        let d = triples(&f, &s).unwrap();
        let got: Vec<(String, Vec<u32>, Vec<String>)> = d
            .triples
            .iter()
            .map(|t| (t.b.render(), t.index.entries().to_vec(), render_point(&t.point)))
            .collect();
        let want = vec![
            ("1".to_string(), vec![4], vec!["θ^2".to_string()]),
            ("t".to_string(), vec![4], vec!["1".to_string()]),
            ("1".to_string(), vec![1, 3], vec!["1".to_string(), "θ^2".to_string()]),
            ("t".to_string(), vec![1, 3], vec!["1".to_string(), "1".to_string()]),
        ];
        assert_eq!(got, want);
        assert_eq!(d.split, 2);
    }

    #[test]
    fn at_series_depth1() {
        let f = Fq::from_q(3).unwrap();
        let s = Index::parse("1").unwrap();
        let at = at_series_jet(&f, &s, 1, 30).unwrap();
        let z = zeta_bruteforce(&f, &s, dmax_for(&s, 30), 30, 20.0).unwrap();
        assert!(at.value.coeff(0).agreement(&z.value) >= 30);
    }

    #[test]
    fn decomposition_checks() {
        for (q, idx) in [(2, "1,3"), (3, "2,1"), (3, "1,2"), (2, "2,1,1"), (3, "4")] {
            let f = Fq::from_q(q).unwrap();
            let s = Index::parse(idx).unwrap();
            let (d, rep) = decompose_checked(&f, &s, 3, 30).unwrap();
            assert!(rep.passed, "{q} {idx}");
            for t in &d.triples {
                assert_eq!(t.index.weight(), s.weight());
            }
            assert!(d.triples[d.split..].iter().all(|t| t.index.depth() >= 2));
        }
    }

    #[test]
    fn chen_examples() {
        let f3 = Fq::from_q(3).unwrap();
        let c = chen_product(&f3, 1, 2);
        let idx: Vec<_> = c.terms.iter().map(|t| (t.coef, t.index.clone())).collect();
        assert_eq!(idx, vec![(1, vec![1, 2]), (1, vec![2, 1]), (1, vec![3])]);
        assert!(chen_check(&f3, &c, 25).unwrap() >= 25);
        let f2 = Fq::from_q(2).unwrap();
        let c = chen_product(&f2, 1, 1);
        assert!(c.flags.is_empty());
        assert!(chen_check(&f2, &c, 25).unwrap() >= 25);
    }
}
