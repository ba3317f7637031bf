//! Truncated (t−θ)-expansions. Coefficient j of the jet of f is ∂_t^j f evaluated at t = θ.

use crate::error::{Error, Result};
use crate::field::{binom_mod, Fq};
use crate::laurent::EXACT;
use crate::matrix::Mat;
use crate::poly::{BiPoly, UniPoly, Var};
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S> {
    c: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    pub fn new(c: Vec<S>) -> Jet<S> {
        assert!(!c.is_empty(), "jet of order 0");
        Jet { c }
    }
    pub fn zero(like: &S, order: usize) -> Jet<S> {
        Jet::new(vec![like.zero_like(); order])
    }
    pub fn constant(x: S, order: usize) -> Jet<S> {
        let mut c = vec![x.zero_like(); order];
        c[0] = x;
        Jet::new(c)
    }
    /// Jet of (t−θ)^k.
    pub fn monomial(like: &S, k: usize, order: usize) -> Jet<S> {
        let mut c = vec![like.zero_like(); order];
        if k < order {
            c[k] = like.one_like();
        }
        Jet::new(c)
    }
    /// Jet of t.
    pub fn t(like: &S, order: usize) -> Jet<S> {
        let th = like.embed_poly(&UniPoly::x(like.field(), Var::Theta));
        let mut c = vec![like.zero_like(); order];
        c[0] = th;
        if order > 1 {
            c[1] = like.one_like();
        }
        Jet::new(c)
    }
    /// Jet of an element of A[t]: coefficient j is (∂_t^j b)|_{t=θ}.
    pub fn of_bipoly(like: &S, b: &BiPoly, order: usize) -> Jet<S> {
        let c = (0..order).map(|j| like.embed_poly(&b.hyperderivative(j).at_theta())).collect();
        Jet::new(c)
    }
    /// Jet of the linear polynomial t − a.
    pub fn t_minus(a: &S, order: usize) -> Jet<S> {
        let th = a.embed_poly(&UniPoly::x(a.field(), Var::Theta));
        let mut c = vec![a.zero_like(); order];
        c[0] = th.minus(a);
        if order > 1 {
            c[1] = a.one_like();
        }
        Jet::new(c)
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }
    pub fn coeffs(&self) -> &[S] {
        &self.c
    }
    pub fn coeff(&self, j: usize) -> &S {
        &self.c[j]
    }
    /// Value at t = θ.
    pub fn value(&self) -> &S {
        &self.c[0]
    }
    pub fn truncate_order(&self, order: usize) -> Jet<S> {
        Jet::new(self.c[..order.min(self.c.len())].to_vec())
    }

    pub fn add(&self, o: &Jet<S>) -> Jet<S> {
        let n = self.order().min(o.order());
        Jet::new((0..n).map(|j| self.c[j].plus(&o.c[j])).collect())
    }
    pub fn sub(&self, o: &Jet<S>) -> Jet<S> {
        let n = self.order().min(o.order());
        Jet::new((0..n).map(|j| self.c[j].minus(&o.c[j])).collect())
    }
    pub fn neg(&self) -> Jet<S> {
        Jet::new(self.c.iter().map(|x| x.negate()).collect())
    }
    pub fn scale(&self, s: &S) -> Jet<S> {
        Jet::new(self.c.iter().map(|x| if x.exact_zero() { x.clone() } else { s.times(x) }).collect())
    }
    pub fn scale_fq(&self, a: u32) -> Jet<S> {
        Jet::new(self.c.iter().map(|x| x.scale_fq(a)).collect())
    }
    pub fn mul(&self, o: &Jet<S>) -> Jet<S> {
        let n = self.order().min(o.order());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc: Option<S> = None;
            for i in 0..=k {
                let (a, b) = (&self.c[i], &o.c[k - i]);
                if a.exact_zero() || b.exact_zero() {
                    continue;
                }
                let t = a.times(b);
                acc = Some(match acc {
                    None => t,
                    Some(s) => s.plus(&t),
                });
            }
            out.push(acc.unwrap_or_else(|| self.c[0].zero_like()));
        }
        Jet::new(out)
    }
    pub fn pow(&self, k: u32) -> Jet<S> {
        let mut r = Jet::constant(self.c[0].one_like(), self.order());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }
    pub fn inv(&self, rel: i64) -> Result<Jet<S>> {
        let n = self.order();
        let b0 = self.c[0].inverse(rel)?;
        let nb0 = b0.negate();
        let mut b = vec![b0];
        for k in 1..n {
            let mut acc: Option<S> = None;
            for i in 1..=k {
                if self.c[i].exact_zero() {
                    continue;
                }
                let t = self.c[i].times(&b[k - i]);
                acc = Some(match acc {
                    None => t,
                    Some(s) => s.plus(&t),
                });
            }
            b.push(match acc {
                None => b[0].zero_like(),
                Some(s) => nb0.times(&s),
            });
        }
        Ok(Jet::new(b))
    }

    /// ∂_t^n of the represented function, as a jet of order J − n.
    pub fn hyperderivative(&self, n: usize) -> Result<Jet<S>> {
        let order = self.order();
        if n >= order {
            return Err(Error::InsufficientOrder { order, need: n + 1 });
        }
        let p = self.c[0].field().p();
        let c = (0..order - n)
            .map(|j| self.c[j + n].scale_fq(binom_mod((j + n) as u64, n as u64, p)))
            .collect();
        Ok(Jet::new(c))
    }

    /// Upper-triangular Toeplitz matrix with (i, j) entry ∂^{j−i} h.
    pub fn d_matrix(&self, m: usize) -> Result<Mat<S>> {
        if m > self.order() {
            return Err(Error::InsufficientOrder { order: self.order(), need: m });
        }
        let z = self.c[0].zero_like();
        let mut out = Mat::zeros(&z, m, m);
        for i in 0..m {
            for j in i..m {
                out.set(i, j, self.c[j - i].clone());
            }
        }
        Ok(out)
    }

    pub fn cap(&self, prec: i64) -> Jet<S> {
        Jet::new(self.c.iter().map(|x| x.cap(prec)).collect())
    }
    pub fn min_ord(&self) -> i64 {
        self.c.iter().map(|x| x.ord_lower()).min().unwrap()
    }
}

/// ∂_t^m[g_1, .., g_n]: row i (1-based) holds ∂^{m−i} of each g_k.
pub fn partial_matrix<S: Scalar>(g: &[Jet<S>], m: usize) -> Result<Mat<S>> {
    let like = g.first().ok_or_else(|| Error::Invalid("empty row".into()))?.coeff(0).zero_like();
    let mut out = Mat::zeros(&like, m, g.len());
    for (k, gk) in g.iter().enumerate() {
        if m > gk.order() {
            return Err(Error::InsufficientOrder { order: gk.order(), need: m });
        }
        for i in 0..m {
            out.set(i, k, gk.coeff(m - 1 - i).clone());
        }
    }
    Ok(out)
}

/// Jet of 1/(t−c)^k: the geometric series in (t−θ)/(θ−c), raised to the k-th power.
pub fn jet_of_geometric<S: Scalar>(c: &S, k: u32, order: usize, rel: i64) -> Result<Jet<S>> {
    let th = c.embed_poly(&UniPoly::x(c.field(), Var::Theta));
    let u = th.minus(c);
    if u.vanishes() {
        return Err(Error::PoleAtTheta);
    }
    let w = u.inverse(rel)?;
    let mut coeffs = Vec::with_capacity(order);
    let mut pw = w.clone();
    let m1 = c.field().from_int(-1);
    for j in 0..order {
        coeffs.push(if j % 2 == 0 { pw.clone() } else { pw.scale_fq(m1) });
        if j + 1 < order {
            pw = pw.times(&w);
        }
    }
    let g = Jet::new(coeffs);
    Ok(g.pow(k))
}

impl<S: Scalar> Scalar for Jet<S> {
    fn field(&self) -> &Fq {
        self.c[0].field()
    }
    fn zero_like(&self) -> Self {
        Jet::zero(&self.c[0], self.order())
    }
    fn one_like(&self) -> Self {
        Jet::constant(self.c[0].one_like(), self.order())
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn vanishes(&self) -> bool {
        self.c.iter().all(|x| x.vanishes())
    }
    fn exact_zero(&self) -> bool {
        self.c.iter().all(|x| x.exact_zero())
    }
    fn inverse(&self, rel: i64) -> Result<Self> {
        self.inv(rel)
    }
    fn scale_fq(&self, a: u32) -> Self {
        Jet::scale_fq(self, a)
    }
    fn embed_poly(&self, p: &UniPoly) -> Self {
        Jet::constant(self.c[0].embed_poly(p), self.order())
    }
    fn embed_ratfunc(&self, x: &RatFunc, prec: i64) -> Self {
        Jet::constant(self.c[0].embed_ratfunc(x, prec), self.order())
    }
    fn ord_lower(&self) -> i64 {
        self.min_ord()
    }
    fn cap(&self, prec: i64) -> Self {
        Jet::cap(self, prec)
    }
}

/// Exact jet template in θ (RatFunc mode).
pub fn exact_like(f: &Fq) -> RatFunc {
    RatFunc::zero(f, Var::Theta)
}

/// Coefficient-wise exact equality helper for RatFunc jets; returns the first differing index.
pub fn first_difference(a: &Jet<RatFunc>, b: &Jet<RatFunc>) -> Option<usize> {
    (0..a.order().min(b.order())).find(|&j| a.coeff(j) != b.coeff(j))
}

/// Certified agreement ord between Laurent jets (minimum over coefficients).
pub fn jet_agreement(a: &Jet<crate::laurent::LaurentNumber>, b: &Jet<crate::laurent::LaurentNumber>) -> i64 {
    let n = a.order().min(b.order());
    (0..n).map(|j| a.coeff(j).agreement(b.coeff(j))).min().unwrap_or(EXACT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentNumber;

    fn th(f: &Fq, c: &[u32]) -> UniPoly {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec())
    }

    #[test]
    fn geometric_q2() {
        let f = Fq::from_q(2).unwrap();
        let c: RatFunc = th(&f, &[0, 0, 1]).into();
        let j = jet_of_geometric(&c, 1, 2, 0).unwrap();
        let u = RatFunc::new(th(&f, &[1]), th(&f, &[0, 1, 1])).unwrap();
        assert_eq!(j.coeff(0), &u);
        assert_eq!(j.coeff(1), &u.mul(&u));
        let th1: RatFunc = th(&f, &[0, 1]).into();
        assert_eq!(jet_of_geometric(&th1, 1, 2, 0), Err(Error::PoleAtTheta));
    }

    #[test]
    fn geometric_square_q3() {
        let f = Fq::from_q(3).unwrap();
        let c: RatFunc = th(&f, &[0, 0, 0, 1]).into();
        let sq = jet_of_geometric(&c, 2, 3, 0).unwrap();
        // direct binomial expansion: 1/(u + x)^2 = Σ (j+1)(−1)^j x^j / u^{j+2}
        let u = RatFunc::theta(&f).sub(&c);
        for j in 0..3u64 {
            let sign = if j % 2 == 0 { 1 } else { 2 };
            let coef = f.mul(sign, f.from_int(j as i64 + 1));
            let expect = u.pow(j + 2).inv().unwrap().scale_fq(coef);
            assert_eq!(sq.coeff(j as usize), &expect);
        }
    }

    #[test]
    fn jet_matches_hyperderivative_of_poly() {
        let f = Fq::from_q(3).unwrap();
        let b = BiPoly::from_coeffs(&f, vec![th(&f, &[1, 2]), th(&f, &[0, 0, 1]), th(&f, &[2]), th(&f, &[1, 1])]);
        let like = exact_like(&f);
        let j = Jet::of_bipoly(&like, &b, 4);
        // jet of a product equals product of jets
        let b2 = b.mul(&b);
        assert_eq!(Jet::of_bipoly(&like, &b2, 4), j.mul(&j));
        // jet of t: (θ, 1, 0, ..)
        assert_eq!(Jet::of_bipoly(&like, &BiPoly::t_pow(&f, 1), 3), Jet::t(&like, 3));
        let d = j.hyperderivative(2).unwrap();
        assert_eq!(d, Jet::of_bipoly(&like, &b.hyperderivative(2), 2));
        assert!(j.hyperderivative(4).is_err());
    }

    #[test]
    fn d_matrix_identity_and_partial() {
        let f = Fq::from_q(2).unwrap();
        let like = exact_like(&f);
        let one = Jet::constant(like.one_like(), 3);
        assert_eq!(one.d_matrix(3).unwrap(), Mat::identity(&like, 3));
        let t = Jet::t(&like, 3);
        let g = Jet::of_bipoly(&like, &BiPoly::t_pow(&f, 2), 3);
        let lhs = t.d_matrix(3).unwrap().mul(&partial_matrix(&[g.clone()], 3).unwrap());
        let rhs = partial_matrix(&[t.mul(&g)], 3).unwrap();
        assert_eq!(lhs, rhs);
        assert!(t.d_matrix(4).is_err());
    }

    #[test]
    fn laurent_mode_matches_exact() {
        let f = Fq::from_q(3).unwrap();
        let c: RatFunc = th(&f, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1]).into();
        let ex = jet_of_geometric(&c, 2, 3, 0).unwrap();
        let lc = LaurentNumber::from_poly(c.num());
        let tr = jet_of_geometric(&lc, 2, 3, 60).unwrap();
        for j in 0..3 {
            let e = LaurentNumber::from_ratfunc(ex.coeff(j), 200);
            assert!(e.agreement(tr.coeff(j)) >= tr.coeff(j).precision());
            assert!(tr.coeff(j).precision() >= 18 + 60 - 1);
        }
    }
}
