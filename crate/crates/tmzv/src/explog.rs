//! Exp_G and Log_G: coefficient streams from the functional equations
//! Exp∘∂ρ(t) = ρ(t)∘Exp and Log∘ρ(t) = ∂ρ(t)∘Log, and truncated evaluation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::laurent::{LaurentNumber, EXACT};
use crate::matrix::Mat;
use crate::ratfunc::RatFunc;
use crate::scalar::{Scalar, Twist};
use crate::special::theta_qm;
use crate::tmodule::{embed, embed_mat, TModule};

/// Number of consecutive small terms required before a series is cut.
pub const STOP_RUN: usize = 5;
/// Terms must have ord ≥ P + STOP_GUARD to count as small.
pub const STOP_GUARD: i64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stream {
    Exp,
    Log,
}

/// Coefficients e_i of Exp_G and P_i of Log_G, extended on demand.
///
/// In truncated mode every entry keeps `rel` digits below its leading digit.
pub struct ExpLogStream<S> {
    like: S,
    rel: i64,
    rho: Vec<Mat<RatFunc>>,
    nil: usize,
    exp: Vec<Mat<S>>,
    log: Vec<Mat<S>>,
    twisted: HashMap<(usize, u32), Mat<S>>,
}

impl<S: Scalar + Twist> ExpLogStream<S> {
    pub fn new(g: &TModule, like: &S, rel: i64) -> ExpLogStream<S> {
        let d = g.dim();
        let id = Mat::identity(like, d);
        let mut rho: Vec<Mat<RatFunc>> = g.rho_t().terms().to_vec();
        rho[0] = g.nilpotent_part();
        ExpLogStream {
            like: like.clone(),
            rel,
            rho,
            nil: g.nilpotency_index().expect("checked at construction"),
            exp: vec![id.clone()],
            log: vec![id],
            twisted: HashMap::new(),
        }
    }
    pub fn rel(&self) -> i64 {
        self.rel
    }
    /// k-th coefficient of ρ(t) (with θI removed when k = 0), twisted n times.
    fn rho_tw(&mut self, k: usize, n: u32) -> Mat<S> {
        if let Some(m) = self.twisted.get(&(k, n)) {
            return m.clone();
        }
        let m = embed_mat(&self.like, &self.rho[k].twist(n), self.rel);
        self.twisted.insert((k, n), m.clone());
        m
    }
    /// Solve X·A₀^{(i)} − A₀·X = R by X = (R − X·N^{(i)} + N·X)/(θ^{q^i} − θ).
    fn sylvester(&mut self, r: &Mat<S>, i: u32) -> Result<Mat<S>> {
        let f = self.like.field().clone();
        let th = self.like.embed_poly(&theta_qm(&f, 0));
        let c = self.like.embed_poly(&theta_qm(&f, i)).minus(&th);
        if c.vanishes() {
            return Err(Error::DivisionByZero);
        }
        let cinv = c.inverse(self.rel.saturating_add(4))?;
        let n0 = self.rho_tw(0, 0);
        let ni = self.rho_tw(0, i);
        let mut x = r.scale(&cinv);
        if !n0.is_zero() || !ni.is_zero() {
            // the commutator map is nilpotent of index < 2·nil
            for _ in 0..2 * self.nil {
                x = r.sub(&x.mul(&ni)).add(&n0.mul(&x)).scale(&cinv);
            }
        }
        Ok(self.trim(x))
    }
    /// Keep `rel` digits below the leading digit of each entry.
    fn trim(&self, x: Mat<S>) -> Mat<S> {
        if self.rel == EXACT {
            return x;
        }
        x.map(|e| {
            let o = e.ord_lower();
            if o == EXACT {
                e.clone()
            } else {
                e.cap(o.saturating_add(self.rel))
            }
        })
    }
    fn extend(&mut self, which: Stream, upto: usize) -> Result<()> {
        loop {
            let i = match which {
                Stream::Exp => self.exp.len(),
                Stream::Log => self.log.len(),
            };
            if i > upto {
                return Ok(());
            }
            let d = self.exp[0].rows();
            let mut r = Mat::zeros(&self.like, d, d);
            for k in 1..self.rho.len().min(i + 1) {
                if self.rho[k].is_zero() {
                    continue;
                }
                let t = match which {
                    // E_k · e_{i−k}^{(k)}
                    Stream::Exp => self.rho_tw(k, 0).mul(&self.exp[i - k].twist(k as u32)),
                    // −P_{i−k} · E_k^{(i−k)}
                    Stream::Log => {
                        let ek = self.rho_tw(k, (i - k) as u32);
                        self.log[i - k].mul(&ek).neg()
                    }
                };
                r = r.add(&t);
            }
            let x = self.sylvester(&r, i as u32)?;
            match which {
                Stream::Exp => self.exp.push(x),
                Stream::Log => self.log.push(x),
            }
        }
    }
    pub fn coeff(&mut self, which: Stream, i: usize) -> Result<Mat<S>> {
        self.extend(which, i)?;
        Ok(match which {
            Stream::Exp => self.exp[i].clone(),
            Stream::Log => self.log[i].clone(),
        })
    }
    /// Coefficient i of Exp∘Log: Σ_j e_j P_{i−j}^{(j)}; δ_{i0}·I for a formal inverse pair.
    pub fn composition(&mut self, i: usize) -> Result<Mat<S>> {
        self.extend(Stream::Exp, i)?;
        self.extend(Stream::Log, i)?;
        let d = self.exp[0].rows();
        let mut acc = Mat::zeros(&self.like, d, d);
        for j in 0..=i {
            acc = acc.add(&self.exp[j].mul(&self.log[i - j].twist(j as u32)));
        }
        Ok(acc)
    }
    /// Coefficient i of Exp∘∂ρ(t) − ρ(t)∘Exp (resp. Log∘ρ(t) − ∂ρ(t)∘Log).
    pub fn functional_defect(&mut self, which: Stream, i: usize) -> Result<Mat<S>> {
        self.extend(which, i)?;
        let f = self.like.field().clone();
        let d = self.exp[0].rows();
        let thi = Mat::identity(&self.like, d).scale(&self.like.embed_poly(&theta_qm(&f, i as u32)));
        let th = Mat::identity(&self.like, d).scale(&self.like.embed_poly(&theta_qm(&f, 0)));
        let a0 = self.rho_tw(0, 0).add(&th);
        let a0i = self.rho_tw(0, i as u32).add(&thi);
        Ok(match which {
            Stream::Exp => {
                let mut acc = self.exp[i].mul(&a0i).sub(&a0.mul(&self.exp[i]));
                for k in 1..self.rho.len().min(i + 1) {
                    acc = acc.sub(&self.rho_tw(k, 0).mul(&self.exp[i - k].twist(k as u32)));
                }
                acc
            }
            Stream::Log => {
                let mut acc = self.log[i].mul(&a0i).sub(&a0.mul(&self.log[i]));
                for k in 1..self.rho.len().min(i + 1) {
                    let ek = self.rho_tw(k, (i - k) as u32);
                    acc = acc.add(&self.log[i - k].mul(&ek));
                }
                acc
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct EvalReport {
    pub value: Vec<LaurentNumber>,
    pub terms: usize,
    pub working_digits: i64,
    pub flags: Vec<String>,
}

fn max_terms(q: u32) -> usize {
    // keep q^i well inside i64 for twisted valuations
    (40.0 / (q as f64).log2()).floor() as usize
}

fn series_eval(g: &TModule, which: Stream, z: &[LaurentNumber], prec: i64, rel: i64) -> Result<EvalReport> {
    let f = g.field();
    let like = LaurentNumber::zero(f);
    let mut st = ExpLogStream::new(g, &like, rel);
    let d = g.dim();
    if z.len() != d {
        return Err(Error::Invalid(format!("point has {} coordinates, module has dimension {d}", z.len())));
    }
    let target = prec + STOP_GUARD;
    let mut acc = vec![LaurentNumber::zero(f); d];
    let mut run = 0;
    let mut ords: Vec<i64> = vec![];
    let limit = max_terms(f.q());
    for i in 0.. {
        if i > limit {
            return Err(Error::Divergence {
                index: i,
                detail: format!("no run of {STOP_RUN} terms with ord ≥ {target}; recent ords {:?}", &ords[ords.len().saturating_sub(6)..]),
            });
        }
        let c = st.coeff(which, i)?;
        let cm = c.min_ord();
        let term = if cm == EXACT || z.iter().all(|x| x.is_exact_zero()) {
            vec![LaurentNumber::zero(f); d]
        } else {
            let need = target.saturating_sub(cm);
            let zi: Vec<LaurentNumber> = z.iter().map(|x| x.twist_to(i as u32, need)).collect();
            c.mul_vec(&zi)
        };
        let o = term.iter().map(|x| x.ord_lower()).min().unwrap_or(EXACT);
        ords.push(o.min(i64::MAX / 2));
        for (a, t) in acc.iter_mut().zip(&term) {
            *a = a.add(t);
        }
        if o >= target {
            run += 1;
            if run >= STOP_RUN {
                break;
            }
        } else {
            run = 0;
            let n = ords.len();
            if n >= 8 && ords[n - 6..].windows(2).all(|w| w[1] < w[0]) {
                return Err(Error::Divergence { index: i, detail: format!("term ords decreasing: {:?}", &ords[n - 6..]) });
            }
        }
    }
    let got = acc.iter().map(|x| x.precision()).min().unwrap_or(EXACT);
    if got < prec {
        return Err(Error::Precision { wanted: prec, got });
    }
    Ok(EvalReport {
        value: acc.iter().map(|x| x.truncate(prec)).collect(),
        terms: ords.len(),
        working_digits: rel,
        flags: vec![],
    })
}

/// Retry with more working digits while the arithmetic reports insufficient precision.
fn adaptive(g: &TModule, which: Stream, z: &[LaurentNumber], prec: i64) -> Result<EvalReport> {
    let lowest = z.iter().map(|x| x.ord_lower()).filter(|&o| o != EXACT).min().unwrap_or(0);
    let mut rel = prec + 64 + (-lowest).max(0) * g.field().q() as i64;
    let mut last = None;
    for _ in 0..4 {
        match series_eval(g, which, z, prec, rel) {
            Err(Error::Precision { wanted, got }) => {
                last = Some(Error::Precision { wanted, got });
                rel *= 2;
            }
            other => return other,
        }
    }
    Err(last.unwrap())
}

/// Exp_G(z) to absolute precision P.
pub fn exp_eval(g: &TModule, z: &[LaurentNumber], prec: i64) -> Result<EvalReport> {
    adaptive(g, Stream::Exp, z, prec)
}

/// Log_G(v) to absolute precision P. Points outside the domain where convergence is known
/// are evaluated under the divergence guard and flagged.
pub fn log_eval(g: &TModule, v: &[RatFunc], prec: i64) -> Result<EvalReport> {
    let mut flags = vec![];
    match g.provenance() {
        Some((s, u)) => {
            let dom = crate::polylog::domain_check(g.field(), s, u, crate::polylog::Regime::Boundary);
            if !dom.ok {
                return Err(Error::Domain(dom.violations.join("; ")));
            }
        }
        None => flags.push("heuristic convergence".to_string()),
    }
    let like = LaurentNumber::zero(g.field());
    let prec_in = prec + 2 * STOP_GUARD;
    let z: Vec<LaurentNumber> = v.iter().map(|x| embed(&like, x, prec_in)).collect();
    let mut rep = adaptive(g, Stream::Log, &z, prec)?;
    rep.flags = flags;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::index::Index;
    use crate::poly::{UniPoly, Var};
    use crate::special::{carlitz_d, carlitz_l};
    use crate::tmodule::{build_module, carlitz_tensor};

    fn th(f: &Fq, c: &[u32]) -> RatFunc {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec()).into()
    }

    #[test]
    fn carlitz_coefficients() {
        for q in [2, 3] {
            let f = Fq::from_q(q).unwrap();
            let c = carlitz_tensor(&f, 1);
            let like = RatFunc::zero(&f, Var::Theta);
            let mut st = ExpLogStream::new(&c, &like, EXACT);
            for i in 0..4u32 {
                let e = st.coeff(Stream::Exp, i as usize).unwrap();
                let p = st.coeff(Stream::Log, i as usize).unwrap();
                assert_eq!(e.get(0, 0), &RatFunc::from(carlitz_d(&f, i)).inv().unwrap());
                assert_eq!(p.get(0, 0), &RatFunc::from(carlitz_l(&f, i)).inv().unwrap());
            }
        }
    }

    #[test]
    fn exact_identities() {
        let f = Fq::from_q(3).unwrap();
        let s = Index::parse("2,1").unwrap();
        let (g, _) = build_module(&f, &s, &[th(&f, &[0, 1]), th(&f, &[2])]).unwrap();
        let like = RatFunc::zero(&f, Var::Theta);
        let mut st = ExpLogStream::new(&g, &like, EXACT);
        let id = Mat::identity(&like, g.dim());
        assert_eq!(st.composition(0).unwrap(), id);
        for i in 1..=3 {
            assert!(st.composition(i).unwrap().is_zero(), "composition {i}");
            assert!(st.functional_defect(Stream::Exp, i).unwrap().is_zero());
            assert!(st.functional_defect(Stream::Log, i).unwrap().is_zero());
        }
    }

    #[test]
    fn truncated_matches_exact() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("3,1").unwrap();
        let (g, _) = build_module(&f, &s, &[th(&f, &[0, 0, 1]), th(&f, &[1])]).unwrap();
        let mut ex = ExpLogStream::new(&g, &RatFunc::zero(&f, Var::Theta), EXACT);
        let mut tr = ExpLogStream::new(&g, &LaurentNumber::zero(&f), 80);
        for i in 0..4 {
            for which in [Stream::Exp, Stream::Log] {
                let a = ex.coeff(which, i).unwrap();
                let b = tr.coeff(which, i).unwrap();
                for (x, y) in a.entries().iter().zip(b.entries()) {
                    let xl = LaurentNumber::from_ratfunc(x, y.precision().min(10_000));
                    assert!(xl.agreement(y) >= y.precision().min(10_000), "{which:?} {i}");
                }
            }
        }
    }

    #[test]
    fn log_then_exp_round_trip() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("3,1").unwrap();
        let (g, v) = build_module(&f, &s, &[th(&f, &[0, 0, 1]), th(&f, &[1])]).unwrap();
        let y = log_eval(&g, &v, 60).unwrap();
        let back = exp_eval(&g, &y.value, 60).unwrap();
        for (a, b) in back.value.iter().zip(&v) {
            assert!(a.agreement(&LaurentNumber::from_ratfunc(b, 60)) >= 60);
        }
        let zero = vec![LaurentNumber::zero(&f); 5];
        assert!(exp_eval(&g, &zero, 40).unwrap().value.iter().all(|x| x.is_zero()));
    }
}
