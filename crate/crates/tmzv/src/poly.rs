//! Univariate polynomials over F_q (in θ or t) and bivariate polynomials A[t].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{binom_mod, Fq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Var {
    Theta,
    T,
}

impl Var {
    pub fn symbol(self) -> &'static str {
        match self {
            Var::Theta => "θ",
            Var::T => "t",
        }
    }
}

/// Dense univariate polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    f: Fq,
    var: Var,
    c: Vec<u32>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn trim(c: &mut Vec<u32>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

impl UniPoly {
    pub fn from_coeffs(f: &Fq, var: Var, mut c: Vec<u32>) -> UniPoly {
        trim(&mut c);
        UniPoly { f: f.clone(), var, c }
    }
    pub fn zero(f: &Fq, var: Var) -> UniPoly {
        UniPoly { f: f.clone(), var, c: vec![] }
    }
    pub fn one(f: &Fq, var: Var) -> UniPoly {
        UniPoly::constant(f, var, 1)
    }
    pub fn constant(f: &Fq, var: Var, a: u32) -> UniPoly {
        UniPoly::from_coeffs(f, var, vec![a])
    }
    /// a·x^k
    pub fn monomial(f: &Fq, var: Var, a: u32, k: usize) -> UniPoly {
        let mut c = vec![0; k + 1];
        c[k] = a;
        UniPoly::from_coeffs(f, var, c)
    }
    /// The variable itself.
    pub fn x(f: &Fq, var: Var) -> UniPoly {
        UniPoly::monomial(f, var, 1, 1)
    }

    pub fn field(&self) -> &Fq {
        &self.f
    }
    pub fn var(&self) -> Var {
        self.var
    }
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }
    pub fn coeff(&self, k: usize) -> u32 {
        self.c.get(k).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }
    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Degree with -inf encoded as i64::MIN.
    pub fn deg_i64(&self) -> i64 {
        self.degree().map_or(i64::MIN, |d| d as i64)
    }
    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }
    pub fn with_var(&self, var: Var) -> UniPoly {
        UniPoly { f: self.f.clone(), var, c: self.c.clone() }
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![0; n];
        for (i, x) in c.iter_mut().enumerate() {
            *x = self.f.add(self.coeff(i), o.coeff(i));
        }
        UniPoly::from_coeffs(&self.f, self.var, c)
    }
    pub fn neg(&self) -> UniPoly {
        let c = self.c.iter().map(|&x| self.f.neg(x)).collect();
        UniPoly { f: self.f.clone(), var: self.var, c }
    }
    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(&self.f, self.var);
        }
        let mut c = vec![0; self.c.len() + o.c.len() - 1];
        self.f.conv_into(&self.c, &o.c, &mut c);
        UniPoly::from_coeffs(&self.f, self.var, c)
    }
    pub fn scale(&self, a: u32) -> UniPoly {
        let c = self.c.iter().map(|&x| self.f.mul(a, x)).collect();
        UniPoly::from_coeffs(&self.f, self.var, c)
    }
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        UniPoly { f: self.f.clone(), var: self.var, c }
    }
    pub fn pow(&self, mut k: u64) -> UniPoly {
        let mut r = UniPoly::one(&self.f, self.var);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.f;
        let dd = d.c.len() - 1;
        let li = f.inv(d.lead())?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(f, self.var), self.clone()));
        }
        let mut qc = vec![0; r.len() - dd];
        for k in (0..qc.len()).rev() {
            let c = f.mul(r[k + dd], li);
            qc[k] = c;
            if c != 0 {
                let nc = f.neg(c);
                for (i, &di) in d.c.iter().enumerate() {
                    if di != 0 {
                        r[k + i] = f.add(r[k + i], f.mul(nc, di));
                    }
                }
            }
        }
        r.truncate(dd);
        Ok((UniPoly::from_coeffs(f, self.var, qc), UniPoly::from_coeffs(f, self.var, r)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Check(format!("{} does not divide {}", d, self)));
        }
        Ok(q)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.f.inv(self.lead()).unwrap())
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).unwrap().1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: u32) -> u32 {
        let mut r = 0;
        for &c in self.c.iter().rev() {
            r = self.f.add(self.f.mul(r, x), c);
        }
        r
    }

    /// Substitute a polynomial for the variable.
    pub fn compose(&self, x: &UniPoly) -> UniPoly {
        let mut r = UniPoly::zero(&self.f, x.var);
        for &c in self.c.iter().rev() {
            r = r.mul(x).add(&UniPoly::constant(&self.f, x.var, c));
        }
        r
    }

    /// f^{(n)}: x -> x^{q^n}. Coefficients lie in F_q and are fixed.
    pub fn twist(&self, n: u32) -> UniPoly {
        if self.c.len() <= 1 || n == 0 {
            return self.clone();
        }
        let step = (self.f.q() as usize).pow(n);
        let mut c = vec![0; (self.c.len() - 1) * step + 1];
        for (i, &x) in self.c.iter().enumerate() {
            c[i * step] = x;
        }
        UniPoly { f: self.f.clone(), var: self.var, c }
    }

    /// Twist with a signed count; negative twists are rejected.
    pub fn twist_signed(&self, n: i64) -> Result<UniPoly> {
        if n < 0 {
            return Err(Error::NegativeTwist(n));
        }
        Ok(self.twist(n as u32))
    }

    /// n-th hyperderivative with respect to the variable.
    pub fn hyperderivative(&self, n: usize) -> UniPoly {
        if n >= self.c.len() {
            return UniPoly::zero(&self.f, self.var);
        }
        let p = self.f.p();
        let c = (n..self.c.len())
            .map(|i| self.f.mul(binom_mod(i as u64, n as u64, p), self.c[i]))
            .collect();
        UniPoly::from_coeffs(&self.f, self.var, c)
    }

    /// Sparse term list, highest degree first, e.g. "θ^2 + θ".
    pub fn render(&self) -> String {
        render_terms(&self.f, self.var.symbol(), &self.c)
    }
}

pub(crate) fn render_coeff(f: &Fq, a: u32) -> String {
    if f.e() == 1 {
        a.to_string()
    } else {
        format!("[{}]", f.rep(a).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn render_terms(f: &Fq, sym: &str, c: &[u32]) -> String {
    let mut terms = vec![];
    for (k, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => sym.to_string(),
            _ => format!("{sym}^{k}"),
        };
        terms.push(match (a, k) {
            (_, 0) => render_coeff(f, a),
            (1, _) => mono,
            _ => format!("{}*{}", render_coeff(f, a), mono),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl std::ops::Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        UniPoly::add(self, o)
    }
}
impl std::ops::Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        UniPoly::sub(self, o)
    }
}
impl std::ops::Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        UniPoly::mul(self, o)
    }
}
impl std::ops::Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::neg(self)
    }
}

/// Polynomial in t with coefficients in A = F_q[θ]: Σ b_i(θ) t^i.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    f: Fq,
    c: Vec<UniPoly>,
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl BiPoly {
    pub fn from_coeffs(f: &Fq, mut c: Vec<UniPoly>) -> BiPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        debug_assert!(c.iter().all(|x| x.var() == Var::Theta));
        BiPoly { f: f.clone(), c }
    }
    pub fn zero(f: &Fq) -> BiPoly {
        BiPoly { f: f.clone(), c: vec![] }
    }
    pub fn one(f: &Fq) -> BiPoly {
        BiPoly::from_theta(&UniPoly::one(f, Var::Theta))
    }
    /// Constant in t.
    pub fn from_theta(a: &UniPoly) -> BiPoly {
        BiPoly::from_coeffs(a.field(), vec![a.with_var(Var::Theta)])
    }
    /// Element of F_q[t] (θ-degree 0).
    pub fn from_t(a: &UniPoly) -> BiPoly {
        let f = a.field();
        let c = a.coeffs().iter().map(|&x| UniPoly::constant(f, Var::Theta, x)).collect();
        BiPoly::from_coeffs(f, c)
    }
    /// t^k
    pub fn t_pow(f: &Fq, k: usize) -> BiPoly {
        let mut c = vec![UniPoly::zero(f, Var::Theta); k + 1];
        c[k] = UniPoly::one(f, Var::Theta);
        BiPoly::from_coeffs(f, c)
    }
    /// t - c(θ)
    pub fn t_minus(c: &UniPoly) -> BiPoly {
        let f = c.field();
        BiPoly::from_coeffs(f, vec![c.with_var(Var::Theta).neg(), UniPoly::one(f, Var::Theta)])
    }

    pub fn field(&self) -> &Fq {
        &self.f
    }
    pub fn coeffs(&self) -> &[UniPoly] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> UniPoly {
        self.c.get(i).cloned().unwrap_or_else(|| UniPoly::zero(&self.f, Var::Theta))
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn t_degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn theta_degree(&self) -> Option<usize> {
        self.c.iter().filter_map(|x| x.degree()).max()
    }
    /// True if every coefficient is a constant (the element lies in F_q[t]).
    pub fn is_fq_t(&self) -> bool {
        self.c.iter().all(|x| x.degree().unwrap_or(0) == 0)
    }
    /// View an F_q[t] element as a univariate polynomial in t.
    pub fn to_t_poly(&self) -> Result<UniPoly> {
        if !self.is_fq_t() {
            return Err(Error::Invalid(format!("{} has positive θ-degree", self)));
        }
        Ok(UniPoly::from_coeffs(&self.f, Var::T, self.c.iter().map(|x| x.coeff(0)).collect()))
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        BiPoly::from_coeffs(&self.f, c)
    }
    pub fn neg(&self) -> BiPoly {
        BiPoly { f: self.f.clone(), c: self.c.iter().map(|x| x.neg()).collect() }
    }
    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero(&self.f);
        }
        let mut c = vec![UniPoly::zero(&self.f, Var::Theta); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        BiPoly::from_coeffs(&self.f, c)
    }
    pub fn scale_theta(&self, a: &UniPoly) -> BiPoly {
        BiPoly::from_coeffs(&self.f, self.c.iter().map(|x| x.mul(a)).collect())
    }
    pub fn pow(&self, mut k: u64) -> BiPoly {
        let mut r = BiPoly::one(&self.f);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }
    /// Twist of the θ-coefficients; t is untouched.
    pub fn twist(&self, n: u32) -> BiPoly {
        BiPoly { f: self.f.clone(), c: self.c.iter().map(|x| x.twist(n)).collect() }
    }
    /// ∂_t^n
    pub fn hyperderivative(&self, n: usize) -> BiPoly {
        if n >= self.c.len() {
            return BiPoly::zero(&self.f);
        }
        let p = self.f.p();
        let c = (n..self.c.len())
            .map(|i| self.c[i].scale(binom_mod(i as u64, n as u64, p)))
            .collect();
        BiPoly::from_coeffs(&self.f, c)
    }
    /// Evaluate at t = θ, giving an element of A.
    pub fn at_theta(&self) -> UniPoly {
        let mut r = UniPoly::zero(&self.f, Var::Theta);
        for (i, b) in self.c.iter().enumerate() {
            r = r.add(&b.shift(i));
        }
        r
    }
    /// Evaluate at t = a for a ∈ A.
    pub fn eval_t(&self, a: &UniPoly) -> UniPoly {
        let a = a.with_var(Var::Theta);
        let mut r = UniPoly::zero(&self.f, Var::Theta);
        for b in self.c.iter().rev() {
            r = r.mul(&a).add(b);
        }
        r
    }
    /// Replace θ by t in an element of A, giving an element of F_q[t].
    pub fn theta_to_t(a: &UniPoly) -> BiPoly {
        BiPoly::from_t(&a.with_var(Var::T))
    }

    /// Sparse term rendering, e.g. "t + θ^2".
    pub fn render(&self) -> String {
        let mut terms = vec![];
        for (i, b) in self.c.iter().enumerate().rev() {
            for (k, &a) in b.coeffs().iter().enumerate().rev() {
                if a == 0 {
                    continue;
                }
                let mut parts = vec![];
                if a != 1 || (i == 0 && k == 0) {
                    parts.push(render_coeff(&self.f, a));
                }
                match i {
                    0 => {}
                    1 => parts.push("t".into()),
                    _ => parts.push(format!("t^{i}")),
                }
                match k {
                    0 => {}
                    1 => parts.push("θ".into()),
                    _ => parts.push(format!("θ^{k}")),
                }
                terms.push(parts.join("*"));
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(f: &Fq, c: &[u32]) -> UniPoly {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec())
    }

    #[test]
    fn twist_examples() {
        let f2 = Fq::from_q(2).unwrap();
        assert_eq!(th(&f2, &[1, 1]).twist(1), th(&f2, &[1, 0, 1]));
        let f3 = Fq::from_q(3).unwrap();
        let g = th(&f3, &[0, 1, 2]);
        // cubing oracle
        assert_eq!(g.twist(1), g.pow(3));
        assert_eq!(g.twist(1), th(&f3, &[0, 0, 0, 1, 0, 0, 2]));
        assert!(g.twist_signed(-1).is_err());
    }

    #[test]
    fn divrem_gcd() {
        let f3 = Fq::from_q(3).unwrap();
        let a = th(&f3, &[1, 2, 0, 1]);
        let b = th(&f3, &[2, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        let g = a.mul(&b).gcd(&b.mul(&th(&f3, &[1, 1])));
        assert_eq!(g, b.monic());
    }

    #[test]
    fn hyperderivative_examples() {
        let f2 = Fq::from_q(2).unwrap();
        let t2 = BiPoly::t_pow(&f2, 2);
        assert!(t2.hyperderivative(1).is_zero());
        assert_eq!(BiPoly::t_pow(&f2, 3).hyperderivative(2), BiPoly::t_pow(&f2, 1));
        for n in 0..6 {
            assert_eq!(BiPoly::t_pow(&f2, n).hyperderivative(n), BiPoly::one(&f2));
        }
    }

    #[test]
    fn render_forms() {
        let f2 = Fq::from_q(2).unwrap();
        let h = BiPoly::t_pow(&f2, 1).add(&BiPoly::from_theta(&th(&f2, &[0, 0, 1])));
        assert_eq!(h.render(), "t + θ^2");
        assert_eq!(th(&f2, &[0, 1, 1]).render(), "θ^2 + θ");
    }
}
