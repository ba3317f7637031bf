//! Rational functions in canonical form: monic denominator, coprime numerator.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::{UniPoly, Var};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl From<UniPoly> for RatFunc {
    fn from(p: UniPoly) -> RatFunc {
        let den = UniPoly::one(p.field(), p.var());
        RatFunc { num: p, den }
    }
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.field(), num.var()));
        }
        if den.degree() == Some(0) {
            let c = num.field().inv(den.lead())?;
            let one = UniPoly::one(num.field(), num.var());
            return Ok(RatFunc { num: num.scale(c), den: one });
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let l = d.lead();
        if l != 1 {
            let li = n.field().inv(l)?;
            n = n.scale(li);
            d = d.scale(li);
        }
        Ok(RatFunc { num: n, den: d })
    }
    pub fn zero(f: &Fq, var: Var) -> RatFunc {
        UniPoly::zero(f, var).into()
    }
    pub fn one(f: &Fq, var: Var) -> RatFunc {
        UniPoly::one(f, var).into()
    }
    pub fn constant(f: &Fq, var: Var, a: u32) -> RatFunc {
        UniPoly::constant(f, var, a).into()
    }
    pub fn theta(f: &Fq) -> RatFunc {
        UniPoly::x(f, Var::Theta).into()
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }
    pub fn den(&self) -> &UniPoly {
        &self.den
    }
    pub fn field(&self) -> &Fq {
        self.num.field()
    }
    pub fn var(&self) -> Var {
        self.num.var()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }
    /// Valuation at infinity: deg den - deg num. `None` for zero.
    pub fn ord_inf(&self) -> Option<i64> {
        Some(self.den.degree()? as i64 - self.num.degree()? as i64)
    }
    /// log_q |x|_∞ = deg num - deg den.
    pub fn abs_log(&self) -> Option<i64> {
        self.ord_inf().map(|o| -o)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            return RatFunc::new(n, self.den.clone()).unwrap();
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            // already coprime to the product of coprime denominators
            let d = self.den.mul(&o.den);
            return RatFunc::new_coprime(n, d);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let n = self.num.mul(&d1).add(&o.num.mul(&b1));
        RatFunc::new(n, b1.mul(&o.den)).unwrap()
    }
    fn new_coprime(num: UniPoly, den: UniPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero(num.field(), num.var());
        }
        RatFunc { num, den }
    }
    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.field(), self.var());
        }
        if self.is_poly() && o.is_poly() {
            return self.num.mul(&o.num).into();
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFunc::new(n1.mul(&n2), d1.mul(&d2)).unwrap()
    }
    pub fn mul_poly(&self, p: &UniPoly) -> RatFunc {
        self.mul(&RatFunc::from(p.clone()))
    }
    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }
    pub fn pow(&self, k: u64) -> RatFunc {
        RatFunc { num: self.num.pow(k), den: self.den.pow(k) }
    }
    /// x^{(n)}: every coefficient raised to q^n; θ -> θ^{q^n}.
    pub fn twist(&self, n: u32) -> RatFunc {
        RatFunc { num: self.num.twist(n), den: self.den.twist(n) }
    }
    pub fn twist_signed(&self, n: i64) -> Result<RatFunc> {
        if n < 0 {
            return Err(Error::NegativeTwist(n));
        }
        Ok(self.twist(n as u32))
    }

    pub fn render(&self) -> String {
        if self.den.is_one() {
            self.num.render()
        } else {
            format!("({})/({})", self.num.render(), self.den.render())
        }
    }
}

impl std::ops::Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        RatFunc::add(self, o)
    }
}
impl std::ops::Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        RatFunc::sub(self, o)
    }
}
impl std::ops::Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::mul(self, o)
    }
}
impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(f: &Fq, c: &[u32]) -> UniPoly {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec())
    }

    #[test]
    fn char2_cancellation() {
        let f = Fq::from_q(2).unwrap();
        let a = RatFunc::new(th(&f, &[1]), th(&f, &[0, 1])).unwrap();
        let b = RatFunc::new(th(&f, &[1]), th(&f, &[1, 1])).unwrap();
        // common-denominator oracle: (θ+1 + θ)/(θ(θ+1))
        let s = a.add(&b);
        assert_eq!(s, RatFunc::new(th(&f, &[1]), th(&f, &[0, 1, 1])).unwrap());
        assert_eq!(a.mul(&RatFunc::one(&f, Var::Theta)), a);
    }

    #[test]
    fn canonical_form() {
        let f = Fq::from_q(3).unwrap();
        let x = RatFunc::new(th(&f, &[0, 0, 1]), th(&f, &[0, 1])).unwrap();
        assert_eq!(x, RatFunc::theta(&f));
        let y = RatFunc::new(th(&f, &[2, 2]), th(&f, &[2, 0, 2])).unwrap();
        assert!(y.den().lead() == 1);
        let z = RatFunc::new(th(&f, &[1, 1]), th(&f, &[1, 0, 1])).unwrap();
        assert_eq!(y, z);
        assert!(x.div(&RatFunc::zero(&f, Var::Theta)).is_err());
    }

    #[test]
    fn twist_is_homomorphism() {
        let f = Fq::from_q(3).unwrap();
        let a = RatFunc::new(th(&f, &[1, 2, 1]), th(&f, &[2, 1])).unwrap();
        let b = RatFunc::new(th(&f, &[0, 1]), th(&f, &[1, 0, 1])).unwrap();
        assert_eq!(a.mul(&b).twist(1), a.twist(1).mul(&b.twist(1)));
        assert_eq!(a.add(&b).twist(2), a.twist(2).add(&b.twist(2)));
    }
}
