//! The coefficient interface shared by exact (`RatFunc`) and truncated (`LaurentNumber`)
//! arithmetic, plus twisting.

use std::fmt::Debug;

use crate::error::Result;
use crate::field::Fq;
use crate::laurent::{LaurentNumber, EXACT};
use crate::poly::{BiPoly, UniPoly, Var};
use crate::ratfunc::RatFunc;

pub trait Scalar: Clone + Debug + Send + Sync {
    fn field(&self) -> &Fq;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Known to be zero (exactly, or at working precision).
    fn vanishes(&self) -> bool;
    /// Exactly zero; unlike `vanishes` this carries no precision loss when skipped.
    fn exact_zero(&self) -> bool;
    /// Multiplicative inverse; `rel` bounds the digits produced in truncated mode.
    fn inverse(&self, rel: i64) -> Result<Self>;
    fn scale_fq(&self, a: u32) -> Self;
    /// Embed an element of A.
    fn embed_poly(&self, p: &UniPoly) -> Self;
    /// Embed an element of K, expanded to absolute precision `prec` in truncated mode.
    fn embed_ratfunc(&self, x: &RatFunc, prec: i64) -> Self;
    /// Lower bound for ord_∞ where meaningful (RatFunc: exact ord; zero: EXACT).
    fn ord_lower(&self) -> i64;
    /// Drop information beyond absolute precision `prec` (no-op for exact values).
    fn cap(&self, prec: i64) -> Self;
}

pub trait Twist: Sized {
    fn twist(&self, n: u32) -> Self;
}

impl Scalar for RatFunc {
    fn field(&self) -> &Fq {
        RatFunc::field(self)
    }
    fn zero_like(&self) -> Self {
        RatFunc::zero(RatFunc::field(self), self.var())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(RatFunc::field(self), self.var())
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
        self.is_zero()
    }
    fn exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn inverse(&self, _rel: i64) -> Result<Self> {
        self.inv()
    }
    fn scale_fq(&self, a: u32) -> Self {
        self.mul_poly(&UniPoly::constant(RatFunc::field(self), self.var(), a))
    }
    fn embed_poly(&self, p: &UniPoly) -> Self {
        p.with_var(self.var()).into()
    }
    fn embed_ratfunc(&self, x: &RatFunc, _prec: i64) -> Self {
        x.clone()
    }
    fn ord_lower(&self) -> i64 {
        self.ord_inf().unwrap_or(EXACT)
    }
    fn cap(&self, _prec: i64) -> Self {
        self.clone()
    }
}

impl Scalar for LaurentNumber {
    fn field(&self) -> &Fq {
        LaurentNumber::field(self)
    }
    fn zero_like(&self) -> Self {
        LaurentNumber::zero(LaurentNumber::field(self))
    }
    fn one_like(&self) -> Self {
        LaurentNumber::one(LaurentNumber::field(self))
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
        self.is_zero()
    }
    fn exact_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn inverse(&self, rel: i64) -> Result<Self> {
        self.inv_rel(rel)
    }
    fn scale_fq(&self, a: u32) -> Self {
        self.scale(a)
    }
    fn embed_poly(&self, p: &UniPoly) -> Self {
        LaurentNumber::from_poly(p)
    }
    fn embed_ratfunc(&self, x: &RatFunc, prec: i64) -> Self {
        LaurentNumber::from_ratfunc(x, prec)
    }
    fn ord_lower(&self) -> i64 {
        LaurentNumber::ord_lower(self)
    }
    fn cap(&self, prec: i64) -> Self {
        self.truncate(prec)
    }
}

impl Twist for UniPoly {
    fn twist(&self, n: u32) -> Self {
        UniPoly::twist(self, n)
    }
}
impl Twist for BiPoly {
    fn twist(&self, n: u32) -> Self {
        BiPoly::twist(self, n)
    }
}
impl Twist for RatFunc {
    fn twist(&self, n: u32) -> Self {
        RatFunc::twist(self, n)
    }
}
impl Twist for LaurentNumber {
    fn twist(&self, n: u32) -> Self {
        LaurentNumber::twist(self, n)
    }
}

/// θ as an exact rational function.
pub fn theta_rf(f: &Fq) -> RatFunc {
    UniPoly::x(f, Var::Theta).into()
}
