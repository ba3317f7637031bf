//! D_i, L_i, 𝕃_i, Carlitz factorials, G_n, Anderson–Thakur polynomials H_n, power sums
//! S_d(s) and multiple zeta values by direct summation.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::index::Index;
use crate::laurent::LaurentNumber;
use crate::poly::{BiPoly, UniPoly, Var};
use crate::ratfunc::RatFunc;

fn theta(f: &Fq) -> UniPoly {
    UniPoly::x(f, Var::Theta)
}

/// θ^{q^m}
pub fn theta_qm(f: &Fq, m: u32) -> UniPoly {
    theta(f).twist(m)
}

/// D_i = Π_{j<i} (θ^{q^i} − θ^{q^j}).
pub fn carlitz_d(f: &Fq, i: u32) -> UniPoly {
    let mut d = UniPoly::one(f, Var::Theta);
    for k in 1..=i {
        d = theta_qm(f, k).sub(&theta(f)).mul(&d.twist(1));
    }
    d
}

/// L_i = (θ − θ^q)⋯(θ − θ^{q^i}).
pub fn carlitz_l(f: &Fq, i: u32) -> UniPoly {
    let mut l = UniPoly::one(f, Var::Theta);
    for k in 1..=i {
        l = l.mul(&theta(f).sub(&theta_qm(f, k)));
    }
    l
}

/// The roots θ^{q^m}, m = 1..i, of 𝕃_i = Π (t − θ^{q^m}).
pub fn ll_roots(f: &Fq, i: u32) -> Vec<UniPoly> {
    (1..=i).map(|m| theta_qm(f, m)).collect()
}

/// 𝕃_i as an element of A[t].
pub fn ll_poly(f: &Fq, i: u32) -> BiPoly {
    ll_roots(f, i).iter().fold(BiPoly::one(f), |acc, r| acc.mul(&BiPoly::t_minus(r)))
}

/// Base-q digits of n, least significant first.
pub fn base_q_digits(mut n: u64, q: u64) -> Vec<u64> {
    let mut v = vec![];
    while n > 0 {
        v.push(n % q);
        n /= q;
    }
    v
}

/// Γ_n = Π D_i^{n_i} where n − 1 = Σ n_i q^i.
pub fn carlitz_gamma(f: &Fq, n: u64) -> Result<UniPoly> {
    if n == 0 {
        return Err(Error::Invalid("Γ_n needs n ≥ 1".into()));
    }
    let mut g = UniPoly::one(f, Var::Theta);
    for (i, &ni) in base_q_digits(n - 1, f.q() as u64).iter().enumerate() {
        if ni > 0 {
            g = g.mul(&carlitz_d(f, i as u32).pow(ni));
        }
    }
    Ok(g)
}

/// Γ_𝔰 = Π Γ_{s_i}.
pub fn gamma_index(f: &Fq, s: &Index) -> UniPoly {
    s.entries()
        .iter()
        .fold(UniPoly::one(f, Var::Theta), |acc, &k| acc.mul(&carlitz_gamma(f, k as u64).unwrap()))
}

/// G_n(θ) = Π_{i=1}^n (t^{q^n} − θ^{q^i}) ∈ A[t].
pub fn g_poly(f: &Fq, n: u32) -> BiPoly {
    let tq = BiPoly::t_pow(f, (f.q() as usize).pow(n));
    (1..=n).fold(BiPoly::one(f), |acc, i| acc.mul(&tq.sub(&BiPoly::from_theta(&theta_qm(f, i)))))
}

/// Rewrite Σ_i b_i(θ) t^i as Σ_k c_k(t) θ^k.
fn transpose(b: &BiPoly) -> Vec<UniPoly> {
    let f = b.field();
    let n = b.theta_degree().map_or(0, |d| d + 1);
    (0..n)
        .map(|k| UniPoly::from_coeffs(f, Var::T, b.coeffs().iter().map(|x| x.coeff(k)).collect()))
        .collect()
}

fn untranspose(f: &Fq, c: &[UniPoly]) -> BiPoly {
    let n = c.iter().filter_map(|x| x.degree()).max().map_or(0, |d| d + 1);
    let coeffs = (0..n)
        .map(|i| UniPoly::from_coeffs(f, Var::Theta, c.iter().map(|x| x.coeff(i)).collect()))
        .collect();
    BiPoly::from_coeffs(f, coeffs)
}

/// Multiply by an element of F_q[t].
fn mul_t(b: &BiPoly, a: &UniPoly) -> BiPoly {
    b.mul(&BiPoly::from_t(a))
}

fn div_t_exact(b: &BiPoly, a: &UniPoly) -> Result<BiPoly> {
    let cols = transpose(b).iter().map(|c| c.div_exact(a)).collect::<Result<Vec<_>>>()?;
    Ok(untranspose(b.field(), &cols))
}

type HKey = (u32, Vec<u32>, u64);

fn h_cache() -> &'static Mutex<HashMap<HKey, BiPoly>> {
    static C: OnceLock<Mutex<HashMap<HKey, BiPoly>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Anderson–Thakur polynomial H_n ∈ A[t], from
/// (1 − Σ_i G_i(θ)/D_i|_{θ=t} x^{q^i})^{-1} = Σ_n H_n/Γ_{n+1}|_{θ=t} x^n.
///
/// The series coefficients h_n are kept as N_n/Δ_n with N_n ∈ A[t] and Δ_n ∈ F_q[t]; the
/// final division by Δ_n must be exact.
pub fn at_polynomial(f: &Fq, n: u64) -> Result<BiPoly> {
    let key = (f.p(), f.modulus().to_vec(), n);
    if let Some(h) = h_cache().lock().unwrap().get(&key) {
        return Ok(h.clone());
    }
    let q = f.q() as u64;
    let one_t = UniPoly::one(f, Var::T);
    let mut nums: Vec<BiPoly> = vec![BiPoly::one(f)];
    let mut dens: Vec<UniPoly> = vec![one_t.clone()];
    let mut terms = vec![];
    let mut qi = 1u64;
    let mut i = 0u32;
    while qi <= n {
        terms.push((qi as usize, g_poly(f, i), carlitz_d(f, i).with_var(Var::T)));
        qi *= q;
        i += 1;
    }
    for m in 1..=n as usize {
        let mut den = one_t.clone();
        for (qi, _, d) in terms.iter().filter(|x| x.0 <= m) {
            let c = d.mul(&dens[m - qi]);
            let g = den.gcd(&c);
            den = den.mul(&c.div_exact(&g)?);
        }
        let mut num = BiPoly::zero(f);
        for (qi, g, d) in terms.iter().filter(|x| x.0 <= m) {
            let scale = den.div_exact(&d.mul(&dens[m - qi]))?;
            num = num.add(&mul_t(&g.mul(&nums[m - qi]), &scale));
        }
        nums.push(num);
        dens.push(den);
    }
    let gamma_t = carlitz_gamma(f, n + 1)?.with_var(Var::T);
    let top = mul_t(&nums[n as usize], &gamma_t);
    let h = div_t_exact(&top, &dens[n as usize])
        .map_err(|_| Error::Check(format!("H_{n} is not a polynomial")))?;
    h_cache().lock().unwrap().insert(key, h.clone());
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerSumMode {
    Brute,
    Interp,
}

/// Monic polynomials of degree d, lexicographic with the constant coefficient fastest.
fn monic_block(f: &Fq, d: usize, block: u64, block_len: u64) -> Vec<UniPoly> {
    let q = f.q() as u64;
    (0..block_len)
        .map(|k| {
            let mut code = block * block_len + k;
            let mut c = vec![0u32; d + 1];
            for x in c.iter_mut().take(d) {
                *x = (code % q) as u32;
                code /= q;
            }
            c[d] = 1;
            UniPoly::from_coeffs(f, Var::Theta, c)
        })
        .collect()
}

fn tree_sum(mut v: Vec<RatFunc>, f: &Fq) -> RatFunc {
    if v.is_empty() {
        return RatFunc::zero(f, Var::Theta);
    }
    while v.len() > 1 {
        v = v.chunks(2).map(|c| if c.len() == 2 { c[0].add(&c[1]) } else { c[0].clone() }).collect();
    }
    v.pop().unwrap()
}

/// S_d(s) = Σ_{a ∈ A_{d,+}} 1/a^s. Brute mode enumerates q^d polynomials and refuses when
/// d·log2(q) exceeds `budget_bits`.
pub fn power_sum(f: &Fq, d: u32, s: u32, mode: PowerSumMode, budget_bits: f64) -> Result<RatFunc> {
    match mode {
        PowerSumMode::Brute => {
            let bits = d as f64 * (f.q() as f64).log2();
            if bits > budget_bits {
                return Err(Error::Budget(format!(
                    "enumerating q^{d} monic polynomials needs {bits:.1} bits > {budget_bits}"
                )));
            }
            let q = f.q() as u64;
            let total = q.pow(d);
            // blocks of q^{min(d,3)} consecutive polynomials, summed in parallel
            let block_len = q.pow(d.min(3));
            let blocks = total / block_len;
            let partial: Vec<RatFunc> = (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let terms = monic_block(f, d as usize, b, block_len)
                        .into_iter()
                        .map(|a| RatFunc::new(UniPoly::one(f, Var::Theta), a.pow(s as u64)).unwrap())
                        .collect();
                    tree_sum(terms, f)
                })
                .collect();
            Ok(tree_sum(partial, f))
        }
        PowerSumMode::Interp => {
            let h = at_polynomial(f, s as u64 - 1)?;
            let num = h.twist(d).at_theta();
            let den = carlitz_gamma(f, s as u64)?.mul(&carlitz_l(f, d).pow(s as u64));
            RatFunc::new(num, den)
        }
    }
}

/// Lower bound for ord_∞ S_d(s) read off the interpolation formula: the numerator
/// H_{s−1}^{(d)}(θ) has degree ≤ max_j (deg u_j·q^d + j). Saturates for huge d.
pub fn power_sum_ord_lower(f: &Fq, d: u32, s: u32) -> Result<i128> {
    let h = at_polynomial(f, s as u64 - 1)?;
    let q = f.q() as i128;
    if d > 60 {
        return Ok(i128::MAX / 4);
    }
    let qd = q.pow(d);
    let numdeg = h
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, u)| u.degree().map(|g| g as i128 * qd + j as i128))
        .max()
        .unwrap_or(0);
    let ldeg = (q * qd - q) / (q - 1);
    let gdeg = carlitz_gamma(f, s as u64)?.degree().unwrap() as i128;
    Ok(s as i128 * ldeg + gdeg - numdeg)
}

/// Tail certificate: every term with d_1 > Dmax has ord ≥ s_1(Dmax+1) + Σ_{i≥2} s_i(r−i).
pub fn zeta_tail_certificate(s: &Index, dmax: u32) -> i64 {
    let r = s.depth();
    let mut c = s.s(0) as i64 * (dmax as i64 + 1);
    for i in 2..=r {
        c += s.s(i - 1) as i64 * (r - i) as i64;
    }
    c
}

/// Least Dmax ≥ r − 1 whose tail certificate reaches P.
pub fn dmax_for(s: &Index, prec: i64) -> u32 {
    let mut d = s.depth() as u32 - 1;
    while zeta_tail_certificate(s, d) < prec {
        d += 1;
    }
    d
}

#[derive(Clone, Debug)]
pub struct ZetaReport {
    pub value: LaurentNumber,
    pub dmax: u32,
    pub certificate: i64,
    /// (d, s) pairs evaluated by the interpolation formula because enumeration was over budget.
    pub interp_terms: Vec<(u32, u32)>,
    /// (d, s) pairs skipped because their valuation is at least P.
    pub negligible_terms: usize,
}

/// ζ_A(𝔰) = Σ_{Dmax ≥ d_1 > ⋯ > d_r ≥ 0} Π S_{d_i}(s_i), precision min(P, certificate).
pub fn zeta_bruteforce(f: &Fq, s: &Index, dmax: u32, prec: i64, budget_bits: f64) -> Result<ZetaReport> {
    let r = s.depth();
    if (dmax as usize) + 1 < r {
        return Err(Error::Invalid(format!("Dmax {dmax} < dep − 1")));
    }
    let mut interp_terms = vec![];
    let mut negligible = 0;
    let mut table: HashMap<u32, Vec<LaurentNumber>> = HashMap::new();
    for &k in s.entries() {
        if table.contains_key(&k) {
            continue;
        }
        let mut col = vec![];
        for d in 0..=dmax {
            if power_sum_ord_lower(f, d, k)? >= prec as i128 {
                negligible += 1;
                col.push(LaurentNumber::zero_to(f, prec));
                continue;
            }
            let x = match power_sum(f, d, k, PowerSumMode::Brute, budget_bits) {
                Ok(x) => x,
                Err(Error::Budget(_)) => {
                    interp_terms.push((d, k));
                    power_sum(f, d, k, PowerSumMode::Interp, budget_bits)?
                }
                Err(e) => return Err(e),
            };
            col.push(LaurentNumber::from_ratfunc(&x, prec));
        }
        table.insert(k, col);
    }
    // F_r(d) = S_d(s_r); F_k(d) = S_d(s_k) Σ_{d' < d} F_{k+1}(d')
    let n = dmax as usize + 1;
    let mut cur: Vec<LaurentNumber> = table[&s.s(r - 1)].clone();
    for k in (0..r - 1).rev() {
        let col = &table[&s.s(k)];
        let mut next = vec![LaurentNumber::zero(f); n];
        let mut prefix = LaurentNumber::zero(f);
        for d in 0..n {
            if d > 0 {
                next[d] = col[d].mul(&prefix);
            }
            prefix = prefix.add(&cur[d]);
        }
        cur = next;
    }
    let total = cur.iter().fold(LaurentNumber::zero(f), |a, b| a.add(b));
    let cert = zeta_tail_certificate(s, dmax);
    Ok(ZetaReport {
        value: total.truncate(prec.min(cert)),
        dmax,
        certificate: cert,
        interp_terms,
        negligible_terms: negligible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(f: &Fq, c: &[u32]) -> UniPoly {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec())
    }

    #[test]
    fn recurrences() {
        for q in [2, 3] {
            let f = Fq::from_q(q).unwrap();
            for i in 1..=6 {
                let d = carlitz_d(&f, i);
                // D_i as the defining product
                let mut prod = UniPoly::one(&f, Var::Theta);
                for j in 0..i {
                    prod = prod.mul(&theta_qm(&f, i).sub(&theta_qm(&f, j)));
                }
                assert_eq!(d, prod);
                assert_eq!(carlitz_l(&f, i), carlitz_l(&f, i - 1).mul(&theta(&f).sub(&theta_qm(&f, i))));
                assert_eq!(ll_poly(&f, i).at_theta(), carlitz_l(&f, i));
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let f = Fq::from_q(2).unwrap();
        assert!(carlitz_gamma(&f, 1).unwrap().is_one());
        assert_eq!(carlitz_gamma(&f, 3).unwrap(), th(&f, &[0, 1, 1]));
        assert_eq!(carlitz_gamma(&f, 4).unwrap(), th(&f, &[0, 1, 1]));
    }

    #[test]
    fn at_polynomial_examples() {
        let f2 = Fq::from_q(2).unwrap();
        assert_eq!(at_polynomial(&f2, 0).unwrap(), BiPoly::one(&f2));
        assert_eq!(at_polynomial(&f2, 2).unwrap().render(), "t + θ^2");
        let f3 = Fq::from_q(3).unwrap();
        assert_eq!(at_polynomial(&f3, 1).unwrap(), BiPoly::one(&f3));
    }

    #[test]
    fn power_sum_examples() {
        let f = Fq::from_q(2).unwrap();
        for s in 1..4 {
            assert!(power_sum(&f, 0, s, PowerSumMode::Brute, 20.0).unwrap().is_one());
        }
        let s11 = power_sum(&f, 1, 1, PowerSumMode::Brute, 20.0).unwrap();
        assert_eq!(s11, RatFunc::new(th(&f, &[1]), th(&f, &[0, 1, 1])).unwrap());
        assert!(power_sum(&f, 30, 1, PowerSumMode::Brute, 20.0).is_err());
    }

    #[test]
    fn zeta_leading_term() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("1,3").unwrap();
        let z = zeta_bruteforce(&f, &s, dmax_for(&s, 40), 40, 20.0).unwrap();
        assert_eq!(z.value.ord(), Some(2));
        assert_eq!(z.value.precision(), 40);
    }
}

#[cfg(test)]
mod interp_tests {
    use super::*;

    #[test]
    fn interpolation_small() {
        for q in [2, 3] {
            let f = Fq::from_q(q).unwrap();
            for s in 1..=4 {
                for d in 0..=3 {
                    let b = power_sum(&f, d, s, PowerSumMode::Brute, 20.0).unwrap();
                    let i = power_sum(&f, d, s, PowerSumMode::Interp, 20.0).unwrap();
                    assert_eq!(b, i, "q={q} s={s} d={d}");
                }
            }
        }
    }
}
