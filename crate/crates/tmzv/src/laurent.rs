//! Truncated Laurent series in 1/θ with certified precision.
//!
//! A value is Σ_{k ≥ val} c_k θ^{-k} where every coefficient with ord < `prec` is exact and
//! nothing is known beyond. `prec == EXACT` marks values with finitely many terms (elements
//! of A) that are known exactly.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::{render_coeff, UniPoly, Var};
use crate::ratfunc::RatFunc;

pub const EXACT: i64 = i64::MAX;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentNumber {
    f: Fq,
    val: i64,
    digits: Vec<u32>,
    prec: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LaurentJson {
    pub ord: Option<i64>,
    pub coeffs: Vec<u32>,
    pub precision: Option<i64>,
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a + b
    }
}

impl fmt::Debug for LaurentNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = vec![];
        for (k, &c) in self.digits.iter().enumerate().take(8) {
            if c != 0 {
                terms.push(format!("{}θ^{}", c, -(self.val + k as i64)));
            }
        }
        let tail = if self.prec == EXACT {
            String::new()
        } else {
            format!(" + O(θ^{})", -self.prec)
        };
        write!(f, "{}{}", terms.join(" + "), tail)
    }
}

impl LaurentNumber {
    fn normalize(mut self) -> LaurentNumber {
        let lead = self.digits.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.digits.clear();
                self.val = if self.prec == EXACT { 0 } else { self.prec };
            }
            Some(k) => {
                if k > 0 {
                    self.digits.drain(..k);
                    self.val += k as i64;
                }
                if self.prec == EXACT {
                    while self.digits.last() == Some(&0) {
                        self.digits.pop();
                    }
                } else {
                    let n = (self.prec - self.val).max(0) as usize;
                    self.digits.truncate(n);
                }
            }
        }
        self
    }

    /// Build from raw parts; digits[k] is the coefficient of θ^{-(val+k)}.
    pub fn from_parts(f: &Fq, val: i64, digits: Vec<u32>, prec: i64) -> LaurentNumber {
        let mut d = digits;
        if prec != EXACT {
            let n = (prec - val).max(0) as usize;
            d.resize(n, 0);
        }
        LaurentNumber { f: f.clone(), val, digits: d, prec }.normalize()
    }
    pub fn zero(f: &Fq) -> LaurentNumber {
        LaurentNumber { f: f.clone(), val: 0, digits: vec![], prec: EXACT }
    }
    /// Zero known to precision P.
    pub fn zero_to(f: &Fq, prec: i64) -> LaurentNumber {
        let val = if prec == EXACT { 0 } else { prec };
        LaurentNumber { f: f.clone(), val, digits: vec![], prec }
    }
    pub fn one(f: &Fq) -> LaurentNumber {
        LaurentNumber::constant(f, 1)
    }
    pub fn constant(f: &Fq, a: u32) -> LaurentNumber {
        LaurentNumber::from_parts(f, 0, vec![a], EXACT)
    }
    pub fn from_poly(p: &UniPoly) -> LaurentNumber {
        let f = p.field();
        match p.degree() {
            None => LaurentNumber::zero(f),
            Some(d) => {
                let digits: Vec<u32> = p.coeffs().iter().rev().copied().collect();
                LaurentNumber::from_parts(f, -(d as i64), digits, EXACT)
            }
        }
    }
    /// Expansion at the infinite place with all terms of ord < P exact.
    pub fn from_ratfunc(x: &RatFunc, prec: i64) -> LaurentNumber {
        let f = x.field();
        if x.is_zero() {
            return LaurentNumber::zero_to(f, prec);
        }
        let n = LaurentNumber::from_poly(x.num());
        if x.is_poly() {
            return n.truncate(prec);
        }
        let ord = x.ord_inf().unwrap();
        let rel = (prec - ord).max(1);
        let d = LaurentNumber::from_poly(x.den()).inv_rel(rel).unwrap();
        n.mul(&d).truncate(prec)
    }

    pub fn field(&self) -> &Fq {
        &self.f
    }
    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }
    pub fn precision(&self) -> i64 {
        self.prec
    }
    /// Known-zero test: true when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }
    pub fn is_exact_zero(&self) -> bool {
        self.digits.is_empty() && self.prec == EXACT
    }
    /// ord_∞ of the first nonzero term, or None if zero to known precision.
    pub fn ord(&self) -> Option<i64> {
        if self.digits.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }
    /// Certified lower bound for ord_∞ (EXACT for the exact zero).
    pub fn ord_lower(&self) -> i64 {
        if self.digits.is_empty() {
            self.prec
        } else {
            self.val
        }
    }
    /// Coefficient of θ^{-k}; None if unknown.
    pub fn coeff(&self, k: i64) -> Option<u32> {
        if k >= self.prec {
            return None;
        }
        if k < self.val {
            return Some(0);
        }
        Some(self.digits.get((k - self.val) as usize).copied().unwrap_or(0))
    }
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn truncate(&self, prec: i64) -> LaurentNumber {
        if prec >= self.prec {
            return self.clone();
        }
        LaurentNumber::from_parts(&self.f, self.val, self.digits.clone(), prec)
    }

    pub fn add(&self, o: &LaurentNumber) -> LaurentNumber {
        if self.is_exact_zero() {
            return o.clone();
        }
        if o.is_exact_zero() {
            return self.clone();
        }
        let prec = self.prec.min(o.prec);
        let v = self.ord_lower().min(o.ord_lower());
        let end = if prec == EXACT {
            (self.val + self.digits.len() as i64).max(o.val + o.digits.len() as i64)
        } else {
            prec
        };
        if end <= v {
            return LaurentNumber::zero_to(&self.f, prec);
        }
        let mut d = vec![0u32; (end - v) as usize];
        for x in [self, o] {
            let off = (x.val - v) as usize;
            for (k, &c) in x.digits.iter().enumerate() {
                if off + k < d.len() && c != 0 {
                    d[off + k] = self.f.add(d[off + k], c);
                }
            }
        }
        LaurentNumber { f: self.f.clone(), val: v, digits: d, prec }.normalize()
    }
    pub fn neg(&self) -> LaurentNumber {
        let d = self.digits.iter().map(|&c| self.f.neg(c)).collect();
        LaurentNumber { f: self.f.clone(), val: self.val, digits: d, prec: self.prec }
    }
    pub fn sub(&self, o: &LaurentNumber) -> LaurentNumber {
        self.add(&o.neg())
    }
    pub fn scale(&self, a: u32) -> LaurentNumber {
        if a == 0 {
            return LaurentNumber::zero(&self.f);
        }
        let d = self.digits.iter().map(|&c| self.f.mul(a, c)).collect();
        LaurentNumber { f: self.f.clone(), val: self.val, digits: d, prec: self.prec }
    }
    pub fn mul(&self, o: &LaurentNumber) -> LaurentNumber {
        if self.is_exact_zero() || o.is_exact_zero() {
            return LaurentNumber::zero(&self.f);
        }
        let (va, vb) = (self.ord_lower(), o.ord_lower());
        let prec = sat_add(va, o.prec).min(sat_add(vb, self.prec));
        let v = va + vb;
        if self.digits.is_empty() || o.digits.is_empty() {
            return LaurentNumber::zero_to(&self.f, prec);
        }
        let n = if prec == EXACT {
            self.digits.len() + o.digits.len() - 1
        } else {
            (prec - v).max(0) as usize
        };
        let mut d = vec![0u32; n];
        self.f.conv_into(&self.digits, &o.digits, &mut d);
        LaurentNumber { f: self.f.clone(), val: v, digits: d, prec }.normalize()
    }

    /// Inverse with at most `rel` digits of relative precision (fewer if the input carries
    /// fewer).
    pub fn inv_rel(&self, rel: i64) -> Result<LaurentNumber> {
        if self.digits.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let avail = if self.prec == EXACT { EXACT } else { self.prec - self.val };
        let r = rel.min(avail).max(1) as usize;
        let f = &self.f;
        let a = &self.digits;
        let a0i = f.inv(a[0])?;
        let na0i = f.neg(a0i);
        let mut b = vec![0u32; r];
        b[0] = a0i;
        for k in 1..r {
            let mut s = 0;
            for i in 1..=k.min(a.len() - 1) {
                if a[i] != 0 && b[k - i] != 0 {
                    s = f.add(s, f.mul(a[i], b[k - i]));
                }
            }
            b[k] = f.mul(na0i, s);
        }
        let v = -self.val;
        Ok(LaurentNumber { f: f.clone(), val: v, digits: b, prec: v + r as i64 }.normalize())
    }
    /// Division to relative precision `rel` for the inverse of the divisor.
    pub fn div_rel(&self, o: &LaurentNumber, rel: i64) -> Result<LaurentNumber> {
        Ok(self.mul(&o.inv_rel(rel)?))
    }

    pub fn pow(&self, mut k: u64) -> LaurentNumber {
        let mut r = LaurentNumber::one(&self.f);
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

    /// x^{(n)}: θ -> θ^{q^n}; ord and precision scale by q^n.
    pub fn twist(&self, n: u32) -> LaurentNumber {
        if n == 0 || self.digits.is_empty() && self.prec == EXACT {
            return self.clone();
        }
        let step = (self.f.q() as i64).checked_pow(n).expect("twist overflow");
        let prec = if self.prec == EXACT { EXACT } else { self.prec.checked_mul(step).expect("twist overflow") };
        if self.digits.is_empty() {
            return LaurentNumber::zero_to(&self.f, prec);
        }
        let len = if prec == EXACT {
            (self.digits.len() - 1) * step as usize + 1
        } else {
            (prec - self.val * step) as usize
        };
        let mut d = vec![0u32; len];
        for (k, &c) in self.digits.iter().enumerate() {
            d[k * step as usize] = c;
        }
        LaurentNumber { f: self.f.clone(), val: self.val * step, digits: d, prec }
    }
    /// Twist, first dropping the digits that cannot influence terms of ord < `prec_after`.
    pub fn twist_to(&self, n: u32, prec_after: i64) -> LaurentNumber {
        let step = (self.f.q() as i64).pow(n);
        let need = if prec_after == EXACT {
            EXACT
        } else {
            prec_after.div_euclid(step) + 1
        };
        self.truncate(need).twist(n)
    }

    /// Certified lower bound on ord(self - o).
    pub fn agreement(&self, o: &LaurentNumber) -> i64 {
        self.sub(o).ord_lower()
    }

    /// Convert to an element of A if the value is exactly a polynomial.
    pub fn to_poly(&self) -> Option<UniPoly> {
        if self.prec != EXACT || self.val > 0 && !self.digits.is_empty() {
            return None;
        }
        if self.digits.is_empty() {
            return Some(UniPoly::zero(&self.f, Var::Theta));
        }
        let top = -self.val;
        let mut c = vec![0u32; top as usize + 1];
        for (k, &x) in self.digits.iter().enumerate() {
            let deg = top - k as i64;
            if deg < 0 {
                if x != 0 {
                    return None;
                }
                continue;
            }
            c[deg as usize] = x;
        }
        Some(UniPoly::from_coeffs(&self.f, Var::Theta, c))
    }

    /// Leading `terms` nonzero terms in powers of θ, then the error term.
    pub fn render(&self, terms: usize) -> String {
        let mut out = vec![];
        for (k, &c) in self.digits.iter().enumerate() {
            if out.len() == terms {
                out.push("…".to_string());
                break;
            }
            if c != 0 {
                let e = -(self.val + k as i64);
                let mono = match e {
                    0 => String::new(),
                    1 => "θ".to_string(),
                    _ => format!("θ^{e}"),
                };
                out.push(match (c, e) {
                    (_, 0) => render_coeff(&self.f, c),
                    (1, _) => mono,
                    _ => format!("{}*{}", render_coeff(&self.f, c), mono),
                });
            }
        }
        if out.is_empty() {
            out.push("0".to_string());
        }
        if self.prec != EXACT {
            out.push(format!("O(θ^{})", -self.prec));
        }
        out.join(" + ")
    }

    pub fn to_json(&self) -> LaurentJson {
        LaurentJson {
            ord: self.ord(),
            coeffs: self.digits.clone(),
            precision: if self.prec == EXACT { None } else { Some(self.prec) },
        }
    }
}

impl std::ops::Add for &LaurentNumber {
    type Output = LaurentNumber;
    fn add(self, o: &LaurentNumber) -> LaurentNumber {
        LaurentNumber::add(self, o)
    }
}
impl std::ops::Sub for &LaurentNumber {
    type Output = LaurentNumber;
    fn sub(self, o: &LaurentNumber) -> LaurentNumber {
        LaurentNumber::sub(self, o)
    }
}
impl std::ops::Mul for &LaurentNumber {
    type Output = LaurentNumber;
    fn mul(self, o: &LaurentNumber) -> LaurentNumber {
        LaurentNumber::mul(self, o)
    }
}
impl std::ops::Neg for &LaurentNumber {
    type Output = LaurentNumber;
    fn neg(self) -> LaurentNumber {
        LaurentNumber::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(f: &Fq, c: &[u32]) -> UniPoly {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec())
    }

    #[test]
    fn expansion_of_inverse_theta2_plus_theta() {
        let f = Fq::from_q(2).unwrap();
        let x = RatFunc::new(th(&f, &[1]), th(&f, &[0, 1, 1])).unwrap();
        let l = LaurentNumber::from_ratfunc(&x, 20);
        // long division: 1/(θ²(1+1/θ)) = Σ_{k≥2} θ^{-k} in characteristic 2
        assert_eq!(l.ord(), Some(2));
        assert_eq!(l.precision(), 20);
        for k in 2..20 {
            assert_eq!(l.coeff(k), Some(1));
        }
        assert_eq!(l.coeff(20), None);
        let t = LaurentNumber::from_poly(&th(&f, &[0, 1]));
        assert_eq!(t.ord(), Some(-1));
        assert!(t.is_exact());
        let z = LaurentNumber::from_ratfunc(&RatFunc::zero(&f, Var::Theta), 7);
        assert!(z.is_zero());
        assert_eq!(z.precision(), 7);
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Fq::from_q(3).unwrap();
        let a = LaurentNumber::from_poly(&th(&f, &[1, 2, 0, 1]));
        let b = a.inv_rel(30).unwrap();
        let one = a.mul(&b);
        assert_eq!(one.ord(), Some(0));
        assert!(one.sub(&LaurentNumber::one(&f)).ord_lower() >= 30);
    }

    #[test]
    fn precision_tracking() {
        let f = Fq::from_q(2).unwrap();
        let x = LaurentNumber::from_ratfunc(&RatFunc::new(th(&f, &[1]), th(&f, &[1, 1])).unwrap(), 10);
        let y = LaurentNumber::from_poly(&th(&f, &[0, 0, 1]));
        // (1/θ + ...)·θ² known to 10 - 2
        assert_eq!(x.mul(&y).precision(), 8);
        assert_eq!(x.twist(1).precision(), 20);
        assert_eq!(x.twist(1).ord(), Some(2));
    }
}
