//! Closed forms for Log_{G_{𝔰,u}}(v_{𝔰,u}): the polylogarithm-jet vector Y, the series
//! Σ_n D((Π Θ^{(m)}) X^{(n)})|_{t=θ} v^{(n)}, the g-series with the Anderson relation, and the
//! maps δ₀∘ι, δ₁∘ι.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::explog::{exp_eval, log_eval, EvalReport, STOP_GUARD, STOP_RUN};
use crate::field::Fq;
use crate::index::Index;
use crate::jet::{jet_of_geometric, Jet};
use crate::laurent::{LaurentNumber, EXACT};
use crate::matrix::Mat;
use crate::poly::{BiPoly, UniPoly, Var};
use crate::polylog::{cmspl_jet, domain_check, Regime};
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;
use crate::special::theta_qm;
use crate::tmodule::{build_module, embed};

type L = LaurentNumber;

fn offsets(ds: &[usize]) -> Vec<usize> {
    let mut o = vec![0];
    for d in ds {
        o.push(o.last().unwrap() + d);
    }
    o
}

fn dsizes(s: &Index) -> Vec<usize> {
    s.ds().into_iter().map(|x| x as usize).collect()
}

/// δ₀∘ι: per block i, (∂_t^{d_i−1}a_i, …, ∂_t a_i, a_i)|_{t=θ}.
pub fn delta0_iota<S: Scalar>(blocks: &[usize], a: &[Jet<S>]) -> Result<Vec<S>> {
    if a.len() != blocks.len() {
        return Err(Error::Invalid(format!("row of length {} for {} blocks", a.len(), blocks.len())));
    }
    let mut out = vec![];
    for (&d, aj) in blocks.iter().zip(a) {
        if aj.order() < d {
            return Err(Error::InsufficientOrder { order: aj.order(), need: d });
        }
        for k in (0..d).rev() {
            out.push(aj.coeff(k).clone());
        }
    }
    Ok(out)
}

/// δ₁∘ι of w with w_i = Σ_l c_{i,l}(t−θ)^{d_i−l}: returns (c_{1,1}, …, c_{r,d_r}). Entries of
/// (t−θ)-degree ≥ d_i are outside the canonical form and rejected.
pub fn delta1_iota(blocks: &[usize], w: &[BiPoly]) -> Result<Vec<RatFunc>> {
    if w.len() != blocks.len() {
        return Err(Error::Invalid(format!("row of length {} for {} blocks", w.len(), blocks.len())));
    }
    let mut out = vec![];
    for (&d, wi) in blocks.iter().zip(w) {
        let deg = wi.t_degree().unwrap_or(0);
        for k in d..=deg.max(d) {
            if !wi.hyperderivative(k).at_theta().is_zero() {
                return Err(Error::Invalid(format!("w has (t−θ)-degree ≥ {d}")));
            }
        }
        for k in (0..d).rev() {
            out.push(wi.hyperderivative(k).at_theta().into());
        }
    }
    Ok(out)
}

/// w_i = Σ_l c_{i,l}(t−θ)^{d_i−l} for polynomial coordinates c.
pub fn w_from_coords(f: &Fq, blocks: &[usize], c: &[RatFunc]) -> Result<Vec<BiPoly>> {
    let off = offsets(blocks);
    let tm = BiPoly::t_minus(&UniPoly::x(f, Var::Theta));
    let mut w = vec![];
    for (i, &d) in blocks.iter().enumerate() {
        let mut acc = BiPoly::zero(f);
        for l in 1..=d {
            let x = &c[off[i] + l - 1];
            if !x.is_poly() {
                return Err(Error::Invalid("exact w requires polynomial coordinates".into()));
            }
            acc = acc.add(&tm.pow((d - l) as u64).scale_theta(x.num()));
        }
        w.push(acc);
    }
    Ok(w)
}

/// Y_{𝔰,u}: block i is (−1)^{r−i}(α_{d_i−1}, …, α_0) where α_j is the j-th jet coefficient of
/// 𝔏i*_{(s_r,…,s_i),(u_r,…,u_i)} at θ.
pub fn y_from_polylogs(f: &Fq, s: &Index, u: &[RatFunc], prec: i64) -> Result<Vec<L>> {
    y_times_b(f, s, u, &BiPoly::one(f), prec)
}

/// ∂ρ(b)Y blockwise: block i holds the jets of (−1)^{r−1−i} b(t)·𝔏i* at the reversed
/// sub-tuples, highest derivative first.
pub fn y_times_b(f: &Fq, s: &Index, u: &[RatFunc], b: &BiPoly, prec: i64) -> Result<Vec<L>> {
    let r = s.depth();
    let mut out = vec![];
    let m1 = f.from_int(-1);
    let like = L::zero(f);
    let guard = b.t_degree().unwrap_or(0) as i64 + 4;
    for i in 0..r {
        let sub = Index::new(s.entries()[i..].iter().rev().copied().collect())?;
        let pt: Vec<RatFunc> = u[i..].iter().rev().cloned().collect();
        let d = sub.weight() as usize;
        let mut jet = cmspl_jet(f, &sub, &pt, d, prec + guard)?.value;
        if *b != BiPoly::one(f) {
            jet = Jet::of_bipoly(&like, b, d).mul(&jet);
        }
        for k in (0..d).rev() {
            let x = jet.coeff(k).truncate(prec);
            out.push(if (r - 1 - i) % 2 == 1 { x.scale(m1) } else { x });
        }
    }
    Ok(out)
}

/// Per-entry relative trimming, as in the Exp/Log streams.
fn trim_jet(j: &Jet<L>, rel: i64) -> Jet<L> {
    Jet::new(
        j.coeffs()
            .iter()
            .map(|x| {
                let o = x.ord_lower();
                if o == EXACT {
                    x.clone()
                } else {
                    x.truncate(o.saturating_add(rel))
                }
            })
            .collect(),
    )
}

fn twisted(like: &L, x: &RatFunc, n: u32, rel: i64) -> L {
    embed(like, &x.twist(n), rel)
}

/// Run `body` with increasing working precision while it reports precision shortfalls.
fn with_retry<T>(prec: i64, mut body: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut rel = prec + 64;
    let mut last = None;
    for _ in 0..4 {
        match body(rel) {
            Err(Error::Precision { wanted, got }) => {
                last = Some(Error::Precision { wanted, got });
                rel *= 2;
            }
            other => return other,
        }
    }
    Err(last.unwrap())
}

struct StopRule {
    target: i64,
    run: usize,
    n: usize,
    limit: usize,
    ords: Vec<i64>,
}

impl StopRule {
    fn new(q: u32, prec: i64) -> StopRule {
        StopRule { target: prec + STOP_GUARD, run: 0, n: 0, limit: (40.0 / (q as f64).log2()) as usize, ords: vec![] }
    }
    /// Feed the ord of term n; true once the series may be cut.
    fn feed(&mut self, o: i64) -> Result<bool> {
        self.n += 1;
        self.ords.push(o.min(i64::MAX / 2));
        if o >= self.target {
            self.run += 1;
        } else {
            self.run = 0;
        }
        if self.run >= STOP_RUN {
            return Ok(true);
        }
        if self.n > self.limit {
            return Err(Error::Divergence { index: self.n, detail: format!("recent term ords {:?}", &self.ords[self.ords.len().saturating_sub(6)..]) });
        }
        Ok(false)
    }
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub value: Vec<L>,
    pub terms: usize,
}

fn check_precision(v: &[L], prec: i64) -> Result<Vec<L>> {
    let got = v.iter().map(|x| x.precision()).min().unwrap_or(EXACT);
    if got < prec {
        return Err(Error::Precision { wanted: prec, got });
    }
    Ok(v.iter().map(|x| x.truncate(prec)).collect())
}

/// Θ^{(m)} as an r×r matrix of jets at θ of order J.
fn theta_twisted(f: &Fq, ds: &[usize], q_data: &[RatFunc], m: u32, order: usize, rel: i64) -> Result<Mat<Jet<L>>> {
    let like = L::zero(f);
    let r = ds.len();
    let zj = Jet::zero(&like, order);
    let mut out = Mat::zeros(&zj, r, r);
    let c = like.embed_poly(&theta_qm(f, m));
    let m1 = f.from_int(-1);
    for j in 0..r {
        let g = jet_of_geometric(&c, ds[j] as u32, order, rel)?;
        let mut prod = RatFunc::one(f, Var::Theta);
        for i in (0..=j).rev() {
            if i < j {
                prod = prod.mul(&q_data[i]);
            }
            let mut x = twisted(&like, &prod, m - 1, rel);
            if (j - i) % 2 == 1 {
                x = x.scale(m1);
            }
            out.set(i, j, trim_jet(&g.scale(&x), rel));
        }
    }
    Ok(out)
}

fn norm_hypotheses(f: &Fq, s: &Index, q_data: &[RatFunc], c: &[RatFunc]) -> Vec<String> {
    let q = f.q() as i64;
    let ds = dsizes(s);
    let off = offsets(&ds);
    let mut bad = vec![];
    for (i, qi) in q_data.iter().enumerate().take(s.depth() - 1) {
        if let Some(a) = qi.abs_log() {
            if (q - 1) * a > s.s(i) as i64 * q {
                bad.push(format!("‖Q_{}‖₁ = q^{a} exceeds q^({}·{q}/{})", i + 1, s.s(i), q - 1));
            }
        }
    }
    for (i, &d) in ds.iter().enumerate() {
        for j in 1..=d {
            if let Some(a) = c[off[i] + j - 1].abs_log() {
                if (q - 1) * a >= (q - 1) * j as i64 + d as i64 {
                    bad.push(format!("|c_{{{},{j}}}| = q^{a} is not < q^({j}+{d}/{})", i + 1, q - 1));
                }
            }
        }
    }
    bad
}

/// Σ_{n≥0} D((Π_{1≤m≤n} Θ^{(m)}) X^{(n)})|_{t=θ} c^{(n)}, with Θ built from Q = u.
pub fn logformula_series(f: &Fq, s: &Index, u: &[RatFunc], c: &[RatFunc], prec: i64) -> Result<SeriesReport> {
    let dom = domain_check(f, s, u, Regime::Boundary);
    if !dom.ok {
        return Err(Error::Domain(dom.violations.join("; ")));
    }
    let bad = norm_hypotheses(f, s, u, c);
    if !bad.is_empty() {
        return Err(Error::Domain(bad.join("; ")));
    }
    with_retry(prec, |rel| logformula_once(f, s, u, c, prec, rel))
}

fn logformula_once(f: &Fq, s: &Index, u: &[RatFunc], c: &[RatFunc], prec: i64, rel: i64) -> Result<SeriesReport> {
    let ds = dsizes(s);
    let off = offsets(&ds);
    let r = ds.len();
    let d = off[r];
    let order = ds[0];
    let like = L::zero(f);
    let mut prod: Mat<Jet<L>> = Mat::identity(&Jet::zero(&like, order), r);
    let mut acc = vec![L::zero(f); d];
    let mut stop = StopRule::new(f.q(), prec);
    for n in 0u32.. {
        if n > 0 {
            prod = prod.mul(&theta_twisted(f, &ds, u, n, order, rel)?);
            prod = prod.map(|j| trim_jet(j, rel));
        }
        let tmn = Jet::t_minus(&like.embed_poly(&theta_qm(f, n)), order);
        let mut tpow = vec![Jet::constant(like.one_like(), order)];
        for k in 1..order {
            tpow.push(tpow[k - 1].mul(&tmn));
        }
        let pmin = prod.entries().iter().map(|j| j.min_ord()).min().unwrap_or(EXACT);
        let need = stop.target.saturating_sub(pmin.min(0));
        let cn: Vec<L> = c.iter().map(|x| embed(&like, x, rel).twist_to(n, need)).collect();
        // rows of D((ΠΘ)X^{(n)}) applied to c^{(n)}
        let mut term = vec![L::zero(f); d];
        for i in 0..r {
            for j in i..r {
                let pij = prod.get(i, j);
                if pij.coeffs().iter().all(|x| x.is_exact_zero()) {
                    continue;
                }
                for l in 1..=ds[j] {
                    let cjl = &cn[off[j] + l - 1];
                    if cjl.is_exact_zero() {
                        continue;
                    }
                    let y = pij.mul(&tpow[ds[j] - l]);
                    for k in 0..ds[i] {
                        let e = ds[i] - 1 - k;
                        let slot = &mut term[off[i] + k];
                        *slot = slot.add(&y.coeff(e).mul(cjl));
                    }
                }
            }
        }
        let o = term.iter().map(|x| x.ord_lower()).min().unwrap_or(EXACT);
        for (a, t) in acc.iter_mut().zip(&term) {
            *a = a.add(t);
        }
        if stop.feed(o)? {
            break;
        }
    }
    Ok(SeriesReport { value: check_precision(&acc, prec)?, terms: stop.n })
}

#[derive(Clone, Debug)]
pub struct GSeries {
    /// g as a row of jets at θ of order d_1.
    pub g: Vec<Jet<L>>,
    pub terms: usize,
}

/// g = Σ_{n≥1} w^{(n)} (Φ′^{−1})^{(n)} ⋯ (Φ′^{−1})^{(1)}, with w built from the coordinates c.
pub fn g_series(f: &Fq, s: &Index, q_data: &[RatFunc], c: &[RatFunc], prec: i64) -> Result<GSeries> {
    let bad = norm_hypotheses(f, s, q_data, c);
    if !bad.is_empty() {
        return Err(Error::Domain(bad.join("; ")));
    }
    with_retry(prec, |rel| g_series_once(f, s, q_data, c, prec, rel))
}

fn g_series_once(f: &Fq, s: &Index, q_data: &[RatFunc], c: &[RatFunc], prec: i64, rel: i64) -> Result<GSeries> {
    let ds = dsizes(s);
    let off = offsets(&ds);
    let r = ds.len();
    let order = ds[0];
    let like = L::zero(f);
    let zj = Jet::zero(&like, order);
    let mut m = Mat::identity(&zj, r);
    let mut g = vec![zj.clone(); r];
    let mut stop = StopRule::new(f.q(), prec);
    for n in 1u32.. {
        // (Φ′^{−1})^{(n)} is the transpose of Θ^{(n)}
        let phi_inv = theta_twisted(f, &ds, q_data, n, order, rel)?.transpose();
        m = phi_inv.mul(&m).map(|j| trim_jet(j, rel));
        let tmn = Jet::t_minus(&like.embed_poly(&theta_qm(f, n)), order);
        let mmin = m.entries().iter().map(|j| j.min_ord()).min().unwrap_or(EXACT);
        let need = stop.target.saturating_sub(mmin.min(0));
        let mut w = vec![];
        for i in 0..r {
            let mut acc = zj.clone();
            for l in 1..=ds[i] {
                let x = embed(&like, &c[off[i] + l - 1], rel).twist_to(n, need);
                if !x.is_exact_zero() {
                    acc = acc.add(&tmn.pow((ds[i] - l) as u32).scale(&x));
                }
            }
            w.push(acc);
        }
        let mut o = EXACT;
        for (j, gj) in g.iter_mut().enumerate() {
            let mut t = zj.clone();
            for (i, wi) in w.iter().enumerate() {
                t = t.add(&wi.mul(m.get(i, j)));
            }
            o = o.min(t.min_ord());
            *gj = gj.add(&t);
        }
        if stop.feed(o)? {
            break;
        }
    }
    for gj in &g {
        check_precision(gj.coeffs(), prec)?;
    }
    Ok(GSeries { g, terms: stop.n })
}

#[derive(Clone, Debug, Serialize)]
pub struct AndersonReport {
    /// Exp_G(δ₀∘ι(g + w)).
    pub lhs: Vec<crate::laurent::LaurentJson>,
    /// δ₁∘ι(w).
    pub rhs: Vec<String>,
    pub agreement: i64,
    pub g_terms: usize,
}

/// Exp_G(δ₀∘ι(g + w)) = δ₁∘ι(w) for the module with defining data (𝔰, Q).
pub fn anderson_check(f: &Fq, s: &Index, q_data: &[RatFunc], c: &[RatFunc], prec: i64) -> Result<AndersonReport> {
    let ds = dsizes(s);
    let off = offsets(&ds);
    let r = ds.len();
    let mut u: Vec<RatFunc> = q_data.iter().take(r - 1).cloned().collect();
    u.push(RatFunc::one(f, Var::Theta));
    let (g_mod, _) = build_module(f, s, &u)?;
    let gs = g_series(f, s, q_data, c, prec + 10)?;
    let like = L::zero(f);
    let order = ds[0];
    let mut a = vec![];
    for i in 0..r {
        let mut wj = Jet::zero(&like, order);
        for l in 1..=ds[i] {
            wj = wj.add(&Jet::monomial(&like, ds[i] - l, order).scale(&embed(&like, &c[off[i] + l - 1], prec + 40)));
        }
        a.push(gs.g[i].add(&wj));
    }
    let z = delta0_iota(&ds, &a)?;
    let e: EvalReport = exp_eval(&g_mod, &z, prec)?;
    let agreement = e
        .value
        .iter()
        .zip(c)
        .map(|(x, y)| x.agreement(&LaurentNumber::from_ratfunc(y, prec)))
        .min()
        .unwrap_or(EXACT);
    Ok(AndersonReport {
        lhs: e.value.iter().map(|x| x.to_json()).collect(),
        rhs: c.iter().map(|x| x.render()).collect(),
        agreement,
        g_terms: gs.terms,
    })
}

/// Elements of K[t] localized at the t − θ^{q^m}, m ≥ 1: num / Π_m (t − θ^{q^m})^{den[m−1]}.
#[derive(Clone, Debug)]
struct TLocal {
    num: BiPoly,
    den: Vec<u32>,
}

fn t_minus_qm(f: &Fq, m: u32) -> BiPoly {
    BiPoly::t_minus(&theta_qm(f, m))
}

impl TLocal {
    fn poly(b: BiPoly) -> TLocal {
        TLocal { num: b, den: vec![] }
    }
    fn lift(&self, den: &[u32]) -> BiPoly {
        let f = self.num.field().clone();
        let mut n = self.num.clone();
        for (m, &e) in den.iter().enumerate() {
            let have = self.den.get(m).copied().unwrap_or(0);
            if e > have {
                n = n.mul(&t_minus_qm(&f, m as u32 + 1).pow((e - have) as u64));
            }
        }
        n
    }
    fn add(&self, o: &TLocal) -> TLocal {
        let len = self.den.len().max(o.den.len());
        let den: Vec<u32> = (0..len)
            .map(|m| self.den.get(m).copied().unwrap_or(0).max(o.den.get(m).copied().unwrap_or(0)))
            .collect();
        TLocal { num: self.lift(&den).add(&o.lift(&den)), den }
    }
    fn neg(&self) -> TLocal {
        TLocal { num: self.num.neg(), den: self.den.clone() }
    }
    fn mul(&self, o: &TLocal) -> TLocal {
        let len = self.den.len().max(o.den.len());
        let den = (0..len).map(|m| self.den.get(m).copied().unwrap_or(0) + o.den.get(m).copied().unwrap_or(0)).collect();
        TLocal { num: self.num.mul(&o.num), den }
    }
    fn twist1(&self) -> TLocal {
        let mut den = vec![0];
        den.extend(&self.den);
        TLocal { num: self.num.twist(1), den }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

fn row_mul(x: &[TLocal], m: &[Vec<TLocal>]) -> Vec<TLocal> {
    let r = x.len();
    (0..r)
        .map(|j| {
            let mut acc = TLocal::poly(BiPoly::zero(x[0].num.field()));
            for i in 0..r {
                if !m[i][j].is_zero() && !x[i].is_zero() {
                    acc = acc.add(&x[i].mul(&m[i][j]));
                }
            }
            acc
        })
        .collect()
}

/// Exact check of the truncated difference equation behind g^{(−1)}Φ′ − g = w, after one
/// twist so that no negative twist appears: g_N Φ′^{(1)} − g_N^{(1)} = w^{(1)} − T_N^{(1)},
/// where T_n = w^{(n)}(Φ′^{−1})^{(n)}⋯(Φ′^{−1})^{(1)} and g_N = T_1 + ⋯ + T_N.
pub fn telescoping_check(f: &Fq, s: &Index, q_data: &[RatFunc], c: &[RatFunc], n: u32) -> Result<bool> {
    let ds = dsizes(s);
    let r = ds.len();
    let mut qp = vec![];
    for x in q_data.iter().take(r - 1) {
        if !x.is_poly() {
            return Err(Error::Invalid("exact check requires polynomial Q".into()));
        }
        qp.push(BiPoly::from_theta(x.num()));
    }
    let w: Vec<TLocal> = w_from_coords(f, &ds, c)?.into_iter().map(TLocal::poly).collect();
    let zero = TLocal::poly(BiPoly::zero(f));
    // (Φ′^{−1})^{(1)}: (i, j) = (−1)^{i−j} Q_j⋯Q_{i−1} / (t − θ^q)^{d_i} for i ≥ j
    let mut phi_inv1 = vec![vec![zero.clone(); r]; r];
    for i in 0..r {
        let mut prod = BiPoly::one(f);
        for j in (0..=i).rev() {
            if j < i {
                prod = prod.mul(&qp[j]).neg();
            }
            phi_inv1[i][j] = TLocal { num: prod.clone(), den: vec![ds[i] as u32] };
        }
    }
    // Φ′^{(1)}: (i, i) = (t − θ^q)^{d_i}, (i + 1, i) = Q_i (t − θ^q)^{d_i}
    let tq = t_minus_qm(f, 1);
    let mut phi1 = vec![vec![zero.clone(); r]; r];
    for i in 0..r {
        let p = tq.pow(ds[i] as u64);
        if i + 1 < r {
            phi1[i + 1][i] = TLocal::poly(p.mul(&qp[i]));
        }
        phi1[i][i] = TLocal::poly(p);
    }
    let mut t = w.clone();
    let mut g = vec![zero.clone(); r];
    for _ in 0..n {
        t = row_mul(&t.iter().map(|x| x.twist1()).collect::<Vec<_>>(), &phi_inv1);
        g = g.iter().zip(&t).map(|(a, b)| a.add(b)).collect();
    }
    let lhs: Vec<TLocal> = row_mul(&g, &phi1).iter().zip(&g).map(|(a, b)| a.add(&b.twist1().neg())).collect();
    let rhs: Vec<TLocal> = w.iter().zip(&t).map(|(a, b)| a.twist1().add(&b.twist1().neg())).collect();
    Ok(lhs.iter().zip(&rhs).all(|(a, b)| a.add(&b.neg()).is_zero()))
}

#[derive(Clone, Debug)]
pub struct LogPaths {
    pub recursion: EvalReport,
    pub theorem: Vec<L>,
    pub series: SeriesReport,
    /// Pairwise agreement: recursion/theorem, recursion/series, theorem/series.
    pub agreement: [i64; 3],
    /// Agreement of Exp(Y) with v.
    pub exp_back: i64,
}

fn vec_agreement(a: &[L], b: &[L]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x.agreement(y)).min().unwrap_or(EXACT)
}

/// Log_{G_{𝔰,u}}(v_{𝔰,u}) three ways, and Exp of the result.
pub fn log_paths(f: &Fq, s: &Index, u: &[RatFunc], prec: i64) -> Result<LogPaths> {
    let (g, v) = build_module(f, s, u)?;
    let recursion = log_eval(&g, &v, prec)?;
    let theorem = y_from_polylogs(f, s, u, prec)?;
    let series = logformula_series(f, s, u, &v, prec)?;
    let agreement = [
        vec_agreement(&recursion.value, &theorem),
        vec_agreement(&recursion.value, &series.value),
        vec_agreement(&theorem, &series.value),
    ];
    let back = exp_eval(&g, &theorem, prec)?;
    let vl: Vec<L> = v.iter().map(|x| LaurentNumber::from_ratfunc(x, prec)).collect();
    let exp_back = vec_agreement(&back.value, &vl);
    Ok(LogPaths { recursion, theorem, series, agreement, exp_back })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(f: &Fq, c: &[u32]) -> RatFunc {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec()).into()
    }

    #[test]
    fn delta_maps() {
        let f = Fq::from_q(3).unwrap();
        let like = L::zero(&f);
        let a = vec![Jet::monomial(&like, 2, 3), Jet::zero(&like, 3)];
        let z = delta0_iota(&[3, 2], &a).unwrap();
        assert!(z[0].coeff(0) == Some(1) && z[1..].iter().all(|x| x.is_exact_zero()));
        let c: Vec<RatFunc> = vec![th(&f, &[1]), th(&f, &[0, 1]), th(&f, &[2]), th(&f, &[0, 0, 1]), th(&f, &[1, 1])];
        let w = w_from_coords(&f, &[3, 2], &c).unwrap();
        assert_eq!(delta1_iota(&[3, 2], &w).unwrap(), c);
        let bad = vec![BiPoly::t_pow(&f, 3), BiPoly::zero(&f)];
        assert!(delta1_iota(&[3, 2], &bad).is_err());
    }

    #[test]
    fn example_three_paths() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("3,1").unwrap();
        let u = vec![th(&f, &[0, 0, 1]), th(&f, &[1])];
        let p = log_paths(&f, &s, &u, 60).unwrap();
        assert!(p.agreement.iter().all(|&a| a >= 60), "{:?}", p.agreement);
        assert!(p.exp_back >= 60);
    }

    #[test]
    fn anderson_and_telescoping() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("3,1").unwrap();
        let q = vec![th(&f, &[0, 0, 1])];
        let c = vec![th(&f, &[]), th(&f, &[]), th(&f, &[]), th(&f, &[0, 0, 1]), th(&f, &[1])];
        let rep = anderson_check(&f, &s, &q, &c, 50).unwrap();
        assert!(rep.agreement >= 50);
        assert!(telescoping_check(&f, &s, &q, &c, 3).unwrap());
        let f3 = Fq::from_q(3).unwrap();
        let s3 = Index::parse("1,2").unwrap();
        let c3: Vec<RatFunc> = vec![th(&f3, &[1]), th(&f3, &[0, 1]), th(&f3, &[2]), th(&f3, &[1, 1]), th(&f3, &[0, 2])];
        assert!(telescoping_check(&f3, &s3, &[th(&f3, &[2, 1])], &c3, 2).unwrap());
    }
}
