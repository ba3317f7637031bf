//! Finite fields F_q, q = p^e.
//!
//! Elements are stored as `u32` codes: the coordinate vector (c_0, .., c_{e-1})
//! relative to the modulus is encoded as sum c_k p^k. Multiplication goes through
//! discrete log tables, so q is capped at 2^16.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const MAX_Q: u64 = 1 << 16;

struct Ctx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp table has length 2(q-1) so log a + log b never needs reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    frob: Vec<u32>,
}

/// Handle to a finite field. Cheap to clone, compared by parameters.
#[derive(Clone)]
pub struct Fq(Arc<Ctx>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---- small dense polynomials over F_p (used only to build tables and test moduli) ----

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let li = fp_inv(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * li as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            r[k + i] = ((r[k + i] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let out: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
    fp_rem(&out, m, p)
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = fp_inv(l, p);
        for x in a.iter_mut() {
            *x = (*x as u64 * li as u64 % p as u64) as u32;
        }
    }
    a
}

fn fp_render(a: &[u32]) -> String {
    let mut terms = vec![];
    for (k, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        terms.push(match (c, k) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Rabin-style test: f of degree e is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= e/2.
/// Returns the first nontrivial gcd found.
fn reducibility_witness(m: &[u32], p: u32) -> Option<Vec<u32>> {
    let e = m.len() - 1;
    let mut xp = vec![0, 1];
    for _ in 1..=e / 2 {
        // xp <- xp^p mod m
        let mut acc = vec![1u32];
        for _ in 0..p {
            acc = fp_mulmod(&acc, &xp, m, p);
        }
        xp = acc;
        let mut h = xp.clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = fp_gcd(&h, m, p);
        if g.len() > 1 {
            return Some(g);
        }
        if h.iter().all(|&c| c == 0) {
            return Some(m.to_vec());
        }
    }
    None
}

fn builtin_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    // constant term first, monic
    Some(match (p, e) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (3, 2) => vec![1, 0, 1],
        _ => return None,
    })
}

impl Fq {
    /// Field with a built-in modulus; q in {2,3,4,5,8,9} or any prime.
    pub fn new(p: u32, e: u32) -> Result<Fq> {
        let m = builtin_modulus(p, e).ok_or_else(|| {
            Error::InvalidField(format!(
                "no built-in modulus for p={p}, e={e}; supply one explicitly"
            ))
        })?;
        Fq::with_modulus(p, &m)
    }

    /// Field of order q with a built-in modulus.
    pub fn from_q(q: u32) -> Result<Fq> {
        for p in 2..=q {
            if is_prime(p) && q % p == 0 {
                let mut e = 0;
                let mut r = q;
                while r % p == 0 {
                    r /= p;
                    e += 1;
                }
                if r != 1 {
                    return Err(Error::InvalidField(format!("{q} is not a prime power")));
                }
                return Fq::new(p, e);
            }
        }
        Err(Error::InvalidField(format!("{q} is not a prime power")))
    }

    /// Field F_p[x]/(m). `modulus` lists coefficients from the constant term up and must be
    /// monic of degree e >= 1.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut m: Vec<u32> = modulus.to_vec();
        fp_trim(&mut m);
        if m.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        if m.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if *m.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let e = (m.len() - 1) as u32;
        let q64 = (p as u64).pow(e);
        if q64 > MAX_Q {
            return Err(Error::InvalidField(format!("q = {q64} exceeds 2^16")));
        }
        if e > 1 {
            if let Some(w) = reducibility_witness(&m, p) {
                return Err(Error::Reducible { witness: fp_render(&w) });
            }
        }
        let q = q64 as u32;
        let enc = |v: &[u32]| -> u32 {
            let mut c = 0u32;
            for (k, &x) in v.iter().enumerate() {
                c += x * p.pow(k as u32);
            }
            c
        };
        let dec = |mut c: u32| -> Vec<u32> {
            let mut v = vec![];
            for _ in 0..e {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let mulc = |a: u32, b: u32| -> u32 {
            if e == 1 {
                return ((a as u64 * b as u64) % p as u64) as u32;
            }
            enc(&fp_mulmod(&dec(a), &dec(b), &m, p))
        };
        // find a primitive element
        let n = q - 1;
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; q as usize];
        let mut found = false;
        for g in 1..q {
            let mut x = 1u32;
            let mut ok = true;
            for k in 0..n {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp[k as usize] = x;
                x = mulc(x, g);
            }
            if ok && x == 1 {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::InvalidField("no primitive element found".into()));
        }
        for k in 0..n as usize {
            exp[k + n as usize] = exp[k];
            log[exp[k] as usize] = k as u32;
        }
        let addc = |a: u32, b: u32| -> u32 {
            let (x, y) = (dec(a), dec(b));
            enc(&x.iter().zip(&y).map(|(s, t)| (s + t) % p).collect::<Vec<_>>())
        };
        let add = if e > 1 && p > 2 && q <= 256 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = addc(a, b);
                }
            }
            Some(t)
        } else {
            None
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| enc(&dec(a).iter().map(|&x| (p - x) % p).collect::<Vec<_>>()))
            .collect();
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            let l = log[a as usize];
            inv[a as usize] = exp[((n - l) % n) as usize];
        }
        let frob: Vec<u32> = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    exp[((log[a as usize] as u64 * p as u64) % n as u64) as usize]
                }
            })
            .collect();
        Ok(Fq(Arc::new(Ctx { p, e, q, modulus: m, exp, log, add, neg, inv, frob })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn e(&self) -> u32 {
        self.0.e
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let c = &*self.0;
        if c.e == 1 {
            let s = a + b;
            if s >= c.p {
                s - c.p
            } else {
                s
            }
        } else if c.p == 2 {
            a ^ b
        } else if let Some(t) = &c.add {
            t[(a * c.q + b) as usize]
        } else {
            let mut r = 0;
            let mut pw = 1;
            let (mut x, mut y) = (a, b);
            for _ in 0..c.e {
                r += ((x % c.p + y % c.p) % c.p) * pw;
                pw *= c.p;
                x /= c.p;
                y /= c.p;
            }
            r
        }
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let c = &*self.0;
        if c.e == 1 {
            ((a as u64 * b as u64) % c.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            c.exp[(c.log[a as usize] + c.log[b as usize]) as usize]
        }
    }
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }
    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (k % n)) % n) as usize]
    }
    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.0.p as i64) as u32
    }
    /// Absolute Frobenius x -> x^{p^n}; n may be negative, the map has order e.
    pub fn frobenius(&self, a: u32, n: i64) -> u32 {
        let k = n.rem_euclid(self.0.e as i64);
        let mut x = a;
        for _ in 0..k {
            x = self.0.frob[x as usize];
        }
        x
    }
    /// Coordinates of a code relative to the modulus.
    pub fn rep(&self, a: u32) -> Vec<u32> {
        let mut v = vec![];
        let mut c = a;
        for _ in 0..self.0.e {
            v.push(c % self.0.p);
            c /= self.0.p;
        }
        v
    }
    /// A generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.0.exp[1 % self.0.exp.len().max(1)]
    }

    /// out[k] += sum_i a[i] b[k-i] for k < out.len(). Iterates over the sparser operand.
    pub fn conv_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let n = out.len();
        let nza = a.iter().take(n).filter(|&&x| x != 0).count();
        let nzb = b.iter().take(n).filter(|&&x| x != 0).count();
        let (a, b) = if nza <= nzb { (a, b) } else { (b, a) };
        let c = &*self.0;
        if c.e == 1 {
            let p = c.p as u64;
            let mut acc = vec![0u64; n];
            // p < 2^16 so each product is < 2^32; flush before the u64 could overflow
            let mut pending = 0u64;
            for (i, &x) in a.iter().enumerate().take(n) {
                if x == 0 {
                    continue;
                }
                let x = x as u64;
                let end = (n - i).min(b.len());
                for (j, &y) in b[..end].iter().enumerate() {
                    acc[i + j] += x * y as u64;
                }
                pending += 1;
                if pending == 1 << 30 {
                    for v in acc.iter_mut() {
                        *v %= p;
                    }
                    pending = 0;
                }
            }
            for (o, v) in out.iter_mut().zip(acc) {
                *o = ((*o as u64 + v) % p) as u32;
            }
        } else {
            for (i, &x) in a.iter().enumerate().take(n) {
                if x == 0 {
                    continue;
                }
                let lx = c.log[x as usize];
                let end = (n - i).min(b.len());
                for (j, &y) in b[..end].iter().enumerate() {
                    if y != 0 {
                        let pr = c.exp[(lx + c.log[y as usize]) as usize];
                        out[i + j] = self.add(out[i + j], pr);
                    }
                }
            }
        }
    }

    /// out[k] += c * x[k]
    pub fn axpy(&self, out: &mut [u32], c: u32, x: &[u32]) {
        if c == 0 {
            return;
        }
        for (o, &v) in out.iter_mut().zip(x) {
            if v != 0 {
                *o = self.add(*o, self.mul(c, v));
            }
        }
    }

    pub fn element(&self, code: u32) -> FieldElement {
        FieldElement { field: self.clone(), code: code % self.0.q }
    }
}

/// An element of F_q bundled with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Fq,
    code: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rep())
    }
}

impl FieldElement {
    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn code(&self) -> u32 {
        self.code
    }
    pub fn rep(&self) -> Vec<u32> {
        self.field.rep(self.code)
    }
    pub fn frobenius(&self, n: i64) -> FieldElement {
        self.field.element(self.field.frobenius(self.code, n))
    }
    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(self.code)?))
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.field.element(self.field.add(self.code, o.code))
    }
}
impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.field.element(self.field.mul(self.code, o.code))
    }
}

/// Binomial coefficient C(n, k) mod p by Lucas' theorem.
pub fn binom_mod(n: u64, k: u64, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let p64 = p as u64;
    let (mut n, mut k) = (n, k);
    let mut r = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p64, k % p64);
        if ki > ni {
            return 0;
        }
        // small binomial ni choose ki mod p
        let mut num = 1u64;
        let mut den = 1u64;
        for j in 0..ki {
            num = num * (ni - j) % p64;
            den = den * (j + 1) % p64;
        }
        r = r * num % p64 * fp_inv(den as u32, p) as u64 % p64;
        n /= p64;
        k /= p64;
    }
    r as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_fields_are_fields() {
        for q in [2u32, 3, 4, 5, 8, 9] {
            let f = Fq::from_q(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in 0..q {
                    for c in 0..q {
                        let l = f.mul(a, f.add(b, c));
                        let r = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_order_and_roundtrip() {
        let f4 = Fq::from_q(4).unwrap();
        let g = f4.generator();
        assert_eq!(f4.frobenius(g, 2), g);
        assert_ne!(f4.frobenius(g, 1), g);
        let f9 = Fq::from_q(9).unwrap();
        for x in 0..9 {
            assert_eq!(f9.frobenius(f9.frobenius(x, 1), -1), x);
            assert_eq!(f9.frobenius(x, 1), f9.pow(x, 3));
        }
        assert_eq!(f9.frobenius(1, 5), 1);
    }

    #[test]
    fn reducible_modulus_rejected_with_witness() {
        // x^2 + 1 = (x+1)^2 over F_2
        match Fq::with_modulus(2, &[1, 0, 1]) {
            Err(Error::Reducible { witness }) => assert_eq!(witness, "x + 1"),
            other => panic!("{other:?}"),
        }
        // x^4 + x + 1 is irreducible over F_2
        let f16 = Fq::with_modulus(2, &[1, 1, 0, 0, 1]).unwrap();
        assert_eq!(f16.q(), 16);
        // x^4 + x^2 + 1 = (x^2+x+1)^2
        assert!(Fq::with_modulus(2, &[1, 0, 1, 0, 1]).is_err());
    }

    #[test]
    fn lucas() {
        assert_eq!(binom_mod(2, 1, 2), 0);
        assert_eq!(binom_mod(3, 2, 2), 1);
        assert_eq!(binom_mod(10, 3, 3), (120 % 3) as u32);
        for n in 0..30u64 {
            for k in 0..=n {
                let mut c = 1u128;
                for j in 0..k {
                    c = c * (n - j) as u128 / (j + 1) as u128;
                }
                assert_eq!(binom_mod(n, k, 5) as u128, c % 5);
            }
        }
    }
}
