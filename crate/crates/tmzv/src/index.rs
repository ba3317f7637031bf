//! Indices 𝔰 = (s_1, .., s_r), point tuples, and the textual forms used on the command line.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::{BiPoly, UniPoly, Var};
use crate::ratfunc::RatFunc;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index(Vec<u32>);

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}
impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl Index {
    pub fn new(s: Vec<u32>) -> Result<Index> {
        if s.is_empty() || s.contains(&0) {
            return Err(Error::Invalid(format!("index entries must be positive: {s:?}")));
        }
        Ok(Index(s))
    }
    pub fn parse(text: &str) -> Result<Index> {
        let s = text
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Index::new(s)
    }
    pub fn entries(&self) -> &[u32] {
        &self.0
    }
    pub fn s(&self, i: usize) -> u32 {
        self.0[i]
    }
    pub fn depth(&self) -> usize {
        self.0.len()
    }
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
    /// d_i = s_i + .. + s_r (0-based i).
    pub fn d(&self, i: usize) -> u32 {
        self.0[i..].iter().sum()
    }
    pub fn ds(&self) -> Vec<u32> {
        (0..self.depth()).map(|i| self.d(i)).collect()
    }
    /// d = d_1 + .. + d_r, the dimension of G_{𝔰,u}.
    pub fn dim(&self) -> usize {
        self.ds().iter().sum::<u32>() as usize
    }
    pub fn reversed(&self) -> Index {
        Index(self.0.iter().rev().copied().collect())
    }
}

/// All indices of weight w (compositions of w), in lexicographic order.
pub fn compositions(w: u32) -> Vec<Index> {
    fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
        if rest == 0 {
            out.push(Index(cur.clone()));
            return;
        }
        for k in 1..=rest {
            cur.push(k);
            rec(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    if w > 0 {
        rec(w, &mut vec![], &mut out);
    }
    out
}

pub type PointTuple = Vec<RatFunc>;

pub fn render_point(u: &[RatFunc]) -> Vec<String> {
    u.iter().map(|x| x.render()).collect()
}

fn parse_coeff(f: &Fq, tok: &str) -> Result<u32> {
    let tok = tok.trim();
    if let Some(inner) = tok.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        let mut code = 0u32;
        let mut pw = 1u32;
        for part in inner.split(',') {
            let c: u32 = part.trim().parse().map_err(|_| Error::Parse(tok.into()))?;
            if c >= f.p() {
                return Err(Error::Parse(format!("coordinate {c} out of range")));
            }
            code += c * pw;
            pw *= f.p();
        }
        return Ok(code);
    }
    let k: i64 = tok.parse().map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))?;
    Ok(f.from_int(k))
}

fn parse_pow(tok: &str) -> Result<usize> {
    tok.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {tok:?}")))
}

/// Parse a polynomial in t and θ such as "t + θ^2", "2*t^0*θ^2 - θ", "th^3". `theta`,
/// `th` and `T` are accepted for θ.
pub fn parse_bipoly(f: &Fq, text: &str) -> Result<BiPoly> {
    let s = text.replace("theta", "θ").replace("th", "θ").replace('T', "θ").replace(' ', "");
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = BiPoly::zero(f);
    // split into signed terms
    let mut terms: Vec<(bool, String)> = vec![];
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        terms.push((neg, cur));
    }
    for (neg, term) in terms {
        let mut coef = 1u32;
        let mut ti = 0usize;
        let mut thk = 0usize;
        for factor in term.split('*') {
            if let Some(rest) = factor.strip_prefix('t') {
                ti += if rest.is_empty() { 1 } else { parse_pow(rest.trim_start_matches('^'))? };
            } else if let Some(rest) = factor.strip_prefix('θ') {
                thk += if rest.is_empty() { 1 } else { parse_pow(rest.trim_start_matches('^'))? };
            } else {
                coef = f.mul(coef, parse_coeff(f, factor)?);
            }
        }
        if neg {
            coef = f.neg(coef);
        }
        let mono = BiPoly::t_pow(f, ti).scale_theta(&UniPoly::monomial(f, Var::Theta, coef, thk));
        acc = acc.add(&mono);
    }
    Ok(acc)
}

/// Parse an element of K: a polynomial in θ, or "(num)/(den)".
pub fn parse_ratfunc(f: &Fq, text: &str) -> Result<RatFunc> {
    let t = text.trim();
    let mut depth = 0;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                let n = parse_theta_poly(f, t[..i].trim().trim_matches(|c| c == '(' || c == ')'))?;
                let d = parse_theta_poly(f, t[i + 1..].trim().trim_matches(|c| c == '(' || c == ')'))?;
                return RatFunc::new(n, d);
            }
            _ => {}
        }
    }
    Ok(parse_theta_poly(f, t.trim_matches(|c| c == '(' || c == ')'))?.into())
}

fn parse_theta_poly(f: &Fq, text: &str) -> Result<UniPoly> {
    let b = parse_bipoly(f, text)?;
    if b.t_degree().unwrap_or(0) > 0 {
        return Err(Error::Parse(format!("{text:?} depends on t")));
    }
    Ok(b.coeff(0))
}

/// Parse a comma-separated point tuple.
pub fn parse_point(f: &Fq, text: &str) -> Result<PointTuple> {
    let mut out = vec![];
    let mut depth = 0;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(parse_ratfunc(f, &std::mem::take(&mut cur))?),
            _ => cur.push(ch),
        }
    }
    out.push(parse_ratfunc(f, &cur)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_basics() {
        let s = Index::parse("1,3").unwrap();
        assert_eq!(s.ds(), vec![4, 3]);
        assert_eq!(s.dim(), 7);
        assert_eq!(s.reversed().reversed(), s);
        assert!(Index::parse("1,0").is_err());
        assert_eq!(compositions(3).len(), 4);
    }

    #[test]
    fn parse_points() {
        let f = Fq::from_q(2).unwrap();
        let u = parse_point(&f, "1,t^0*θ^2").unwrap();
        assert_eq!(u[0], RatFunc::one(&f, Var::Theta));
        assert_eq!(u[1].render(), "θ^2");
        let b = parse_bipoly(&f, "t + θ^2").unwrap();
        assert_eq!(b.render(), "t + θ^2");
        let f3 = Fq::from_q(3).unwrap();
        let x = parse_ratfunc(&f3, "(θ^2 - 1)/(θ + 1)").unwrap();
        assert_eq!(x.render(), "θ + 2");
    }
}
