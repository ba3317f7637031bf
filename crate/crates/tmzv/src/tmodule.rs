//! t-modules given by ρ(t) ∈ Mat_d(K)[τ]: twisted matrices, the modules G_{𝔰,u}, tensor
//! powers of the Carlitz module, ρ(b) and ∂ρ(b).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::index::{Index, PointTuple};
use crate::matrix::Mat;
use crate::poly::{UniPoly, Var};
use crate::ratfunc::RatFunc;
use crate::scalar::{theta_rf, Scalar, Twist};

/// Σ_k α_k τ^k with α_k ∈ Mat_{rows×cols}(K).
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedMatrix {
    rows: usize,
    cols: usize,
    terms: Vec<Mat<RatFunc>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EntryText {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

fn rzero(f: &Fq) -> RatFunc {
    RatFunc::zero(f, Var::Theta)
}

impl TwistedMatrix {
    pub fn zero(f: &Fq, rows: usize, cols: usize) -> TwistedMatrix {
        TwistedMatrix { rows, cols, terms: vec![Mat::zeros(&rzero(f), rows, cols)] }
    }
    pub fn identity(f: &Fq, n: usize) -> TwistedMatrix {
        TwistedMatrix { rows: n, cols: n, terms: vec![Mat::identity(&rzero(f), n)] }
    }
    pub fn from_terms(terms: Vec<Mat<RatFunc>>) -> TwistedMatrix {
        let (rows, cols) = (terms[0].rows(), terms[0].cols());
        assert!(terms.iter().all(|m| m.rows() == rows && m.cols() == cols));
        TwistedMatrix { rows, cols, terms }.trim()
    }
    fn trim(mut self) -> TwistedMatrix {
        while self.terms.len() > 1 && self.terms.last().unwrap().is_zero() {
            self.terms.pop();
        }
        self
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn terms(&self) -> &[Mat<RatFunc>] {
        &self.terms
    }
    /// Coefficient of τ^k (zero beyond the τ-degree).
    pub fn term(&self, k: usize) -> Mat<RatFunc> {
        self.terms.get(k).cloned().unwrap_or_else(|| Mat::zeros(self.terms[0].get(0, 0), self.rows, self.cols))
    }
    pub fn tau_degree(&self) -> usize {
        self.terms.len() - 1
    }
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|m| m.is_zero())
    }
    /// ∂ of a twisted matrix: its τ⁰ coefficient.
    pub fn d(&self) -> Mat<RatFunc> {
        self.terms[0].clone()
    }
    pub fn add(&self, o: &TwistedMatrix) -> TwistedMatrix {
        let n = self.terms.len().max(o.terms.len());
        TwistedMatrix::from_terms((0..n).map(|k| self.term(k).add(&o.term(k))).collect())
    }
    pub fn sub(&self, o: &TwistedMatrix) -> TwistedMatrix {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> TwistedMatrix {
        TwistedMatrix { rows: self.rows, cols: self.cols, terms: self.terms.iter().map(|m| m.neg()).collect() }
    }
    /// Left multiplication by a scalar matrix (no twist involved).
    pub fn left_mul(&self, a: &Mat<RatFunc>) -> TwistedMatrix {
        TwistedMatrix::from_terms(self.terms.iter().map(|m| a.mul(m)).collect())
    }
    /// ατ^i · βτ^j = α β^{(i)} τ^{i+j}.
    pub fn mul(&self, o: &TwistedMatrix) -> TwistedMatrix {
        assert_eq!(self.cols, o.rows);
        let f = self.terms[0].get(0, 0).field().clone();
        let mut out = vec![Mat::zeros(&rzero(&f), self.rows, o.cols); self.terms.len() + o.terms.len() - 1];
        for (i, a) in self.terms.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.terms.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(&b.twist(i as u32)));
            }
        }
        TwistedMatrix::from_terms(out)
    }
    /// Apply to a point: Σ α_k x^{(k)}.
    pub fn apply(&self, x: &[RatFunc]) -> Vec<RatFunc> {
        let f = self.terms[0].get(0, 0).field().clone();
        let mut acc = vec![rzero(&f); self.rows];
        for (k, a) in self.terms.iter().enumerate() {
            let xk: Vec<RatFunc> = x.iter().map(|c| c.twist(k as u32)).collect();
            for (s, v) in acc.iter_mut().zip(a.mul_vec(&xk)) {
                *s = s.add(&v);
            }
        }
        acc
    }
    pub fn put_block(&mut self, r0: usize, c0: usize, b: &TwistedMatrix) {
        let f = self.terms[0].get(0, 0).field().clone();
        while self.terms.len() < b.terms.len() {
            self.terms.push(Mat::zeros(&rzero(&f), self.rows, self.cols));
        }
        for (k, m) in b.terms.iter().enumerate() {
            self.terms[k].put_block(r0, c0, m);
        }
    }
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> TwistedMatrix {
        TwistedMatrix::from_terms(self.terms.iter().map(|m| m.block(r0, c0, rows, cols)).collect())
    }
    /// Sparse rendering, one string per nonzero entry (1-based positions).
    pub fn render_entries(&self) -> Vec<EntryText> {
        let mut out = vec![];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let mut parts = vec![];
                for (k, m) in self.terms.iter().enumerate() {
                    let c = m.get(i, j);
                    if !c.is_zero() {
                        parts.push(render_tau_term(c, k));
                    }
                }
                if !parts.is_empty() {
                    out.push(EntryText { row: i + 1, col: j + 1, value: parts.join(" + ") });
                }
            }
        }
        out
    }
}

fn render_tau_term(c: &RatFunc, k: usize) -> String {
    let tau = match k {
        0 => String::new(),
        1 => "τ".to_string(),
        _ => format!("τ^{k}"),
    };
    if k == 0 {
        return c.render();
    }
    if c.is_one() {
        return tau;
    }
    let s = c.render();
    if s.contains(' ') {
        format!("({s}){tau}")
    } else {
        format!("{s}{tau}")
    }
}

/// A t-module (G_a^d, ρ) over K, determined by ρ(t).
#[derive(Clone, Debug)]
pub struct TModule {
    f: Fq,
    blocks: Vec<usize>,
    rho_t: TwistedMatrix,
    provenance: Option<(Index, PointTuple)>,
}

impl TModule {
    /// Wrap a given ρ(t), checking that ∂ρ(t) − θI is nilpotent.
    pub fn new(f: &Fq, blocks: Vec<usize>, rho_t: TwistedMatrix) -> Result<TModule> {
        let d: usize = blocks.iter().sum();
        if rho_t.rows() != d || rho_t.cols() != d {
            return Err(Error::Invalid(format!("ρ(t) is {}x{}, blocks sum to {d}", rho_t.rows(), rho_t.cols())));
        }
        let g = TModule { f: f.clone(), blocks, rho_t, provenance: None };
        if g.nilpotency_index().is_none() {
            return Err(Error::Invalid("∂ρ(t) − θI is not nilpotent".into()));
        }
        Ok(g)
    }
    pub fn field(&self) -> &Fq {
        &self.f
    }
    pub fn dim(&self) -> usize {
        self.rho_t.rows()
    }
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }
    pub fn rho_t(&self) -> &TwistedMatrix {
        &self.rho_t
    }
    pub fn provenance(&self) -> Option<&(Index, PointTuple)> {
        self.provenance.as_ref()
    }
    /// A₀ = ∂ρ(t).
    pub fn a0(&self) -> Mat<RatFunc> {
        self.rho_t.d()
    }
    /// A₀ − θI.
    pub fn nilpotent_part(&self) -> Mat<RatFunc> {
        let th = Mat::identity(&rzero(&self.f), self.dim()).scale(&theta_rf(&self.f));
        self.a0().sub(&th)
    }
    /// Least k with (∂ρ(t) − θI)^k = 0, if any k ≤ d works.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let n = self.nilpotent_part();
        let mut p = Mat::identity(&rzero(&self.f), self.dim());
        for k in 0..=self.dim() {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(&n);
        }
        None
    }

    /// ρ(b) for b ∈ F_q[t], by Horner's rule.
    pub fn rho(&self, b: &UniPoly) -> TwistedMatrix {
        let d = self.dim();
        let mut acc = TwistedMatrix::zero(&self.f, d, d);
        let one = Mat::identity(&rzero(&self.f), d);
        for k in (0..b.coeffs().len()).rev() {
            acc = acc.mul(&self.rho_t);
            let c = b.coeff(k);
            if c != 0 {
                acc = acc.add(&TwistedMatrix::from_terms(vec![one.map(|x| x.scale_fq(c))]));
            }
        }
        acc
    }
    /// ∂ρ(b) = b(∂ρ(t)).
    pub fn d_rho(&self, b: &UniPoly) -> Mat<RatFunc> {
        let d = self.dim();
        let a0 = self.a0();
        let mut acc = Mat::zeros(&rzero(&self.f), d, d);
        let one = Mat::identity(&rzero(&self.f), d);
        for k in (0..b.coeffs().len()).rev() {
            acc = acc.mul(&a0).add(&one.map(|x| x.scale_fq(b.coeff(k))));
        }
        acc
    }
    /// Block boundaries: start offset of each block.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut o = vec![];
        let mut acc = 0;
        for &b in &self.blocks {
            o.push(acc);
            acc += b;
        }
        o
    }
}

/// C^{⊗n}: ρ(t) = θI + N + Eτ with a single 1 in the lower-left corner of E.
pub fn carlitz_tensor(f: &Fq, n: usize) -> TModule {
    let s = Index::new(vec![n as u32]).expect("n ≥ 1");
    let one = RatFunc::one(f, Var::Theta);
    build_module(f, &s, &[one]).expect("depth one").0
}

/// G_{𝔰,u} and its special point v_{𝔰,u}.
pub fn build_module(f: &Fq, s: &Index, u: &[RatFunc]) -> Result<(TModule, Vec<RatFunc>)> {
    let r = s.depth();
    if u.len() != r {
        return Err(Error::Invalid(format!("index has depth {r}, point has {} entries", u.len())));
    }
    let ds: Vec<usize> = s.ds().into_iter().map(|x| x as usize).collect();
    let d: usize = ds.iter().sum();
    let z = rzero(f);
    let mut a0 = Mat::identity(&z, d).scale(&theta_rf(f));
    let mut e = Mat::zeros(&z, d, d);
    let mut off = vec![0usize; r + 1];
    for i in 0..r {
        off[i + 1] = off[i] + ds[i];
    }
    let one = RatFunc::one(f, Var::Theta);
    for i in 0..r {
        for k in 0..ds[i] - 1 {
            a0.set(off[i] + k, off[i] + k + 1, one.clone());
        }
    }
    for l in 0..r {
        let mut prod = one.clone();
        for m in l..r {
            if m > l {
                prod = prod.mul(&u[m - 1]).neg();
            }
            e.set(off[l + 1] - 1, off[m], prod.clone());
        }
    }
    let mut v = vec![z.clone(); d];
    for i in 0..r {
        let mut c = one.clone();
        for x in &u[i..] {
            c = c.mul(x);
        }
        if (r - 1 - i) % 2 == 1 {
            c = c.neg();
        }
        v[off[i + 1] - 1] = c;
    }
    let rho_t = TwistedMatrix::from_terms(vec![a0, e]);
    let g = TModule { f: f.clone(), blocks: ds, rho_t, provenance: Some((s.clone(), u.to_vec())) };
    Ok((g, v))
}

/// Embed an element of K, keeping polynomials exact.
pub(crate) fn embed<S: Scalar>(like: &S, x: &RatFunc, rel: i64) -> S {
    if x.is_zero() {
        like.zero_like()
    } else if x.is_poly() {
        like.embed_poly(x.num())
    } else {
        like.embed_ratfunc(x, x.ord_inf().unwrap().saturating_add(rel))
    }
}

pub(crate) fn embed_mat<S: Scalar>(like: &S, m: &Mat<RatFunc>, rel: i64) -> Mat<S> {
    m.map(|x| embed(like, x, rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;
    use crate::poly::BiPoly;

    fn th(f: &Fq, c: &[u32]) -> RatFunc {
        UniPoly::from_coeffs(f, Var::Theta, c.to_vec()).into()
    }

    #[test]
    fn example_module() {
        let f = Fq::from_q(2).unwrap();
        let s = Index::parse("3,1").unwrap();
        let (g, v) = build_module(&f, &s, &[th(&f, &[0, 0, 1]), th(&f, &[1])]).unwrap();
        assert_eq!(g.dim(), 5);
        assert_eq!(g.blocks(), &[4, 1]);
        let ent = g.rho_t().render_entries();
        let row4: Vec<_> = ent.iter().filter(|e| e.row == 4).map(|e| (e.col, e.value.clone())).collect();
        assert_eq!(row4, vec![(1, "τ".to_string()), (4, "θ".to_string()), (5, "θ^2τ".to_string())]);
        let row5: Vec<_> = ent.iter().filter(|e| e.row == 5).map(|e| (e.col, e.value.clone())).collect();
        assert_eq!(row5, vec![(5, "θ + τ".to_string())]);
        let vs: Vec<String> = v.iter().map(|x| x.render()).collect();
        assert_eq!(vs, vec!["0", "0", "0", "θ^2", "1"]);
        assert_eq!(g.nilpotency_index(), Some(4));
    }

    #[test]
    fn signs_at_q3() {
        let f = Fq::from_q(3).unwrap();
        let s = Index::parse("1,1,1").unwrap();
        let u = vec![th(&f, &[0, 1]), th(&f, &[1]), th(&f, &[2])];
        let (g, v) = build_module(&f, &s, &u).unwrap();
        // blocks (3,2,1); E[1,3] lower-left entry = u1 u2, E[2,3] = −u2
        let e = g.rho_t().term(1);
        assert_eq!(e.get(2, 5).render(), "θ");
        assert_eq!(e.get(4, 5).render(), "2");
        assert_eq!(e.get(2, 3).render(), "2*θ");
        // v = (.., u1u2u3, .., −u2u3, −... ) with signs (−1)^{r−i}
        assert_eq!(v[2].render(), "2*θ");
        assert_eq!(v[4].render(), "1");
        assert_eq!(v[5].render(), "2");
    }

    #[test]
    fn rho_homomorphism_and_d_rho() {
        let f = Fq::from_q(3).unwrap();
        let s = Index::parse("2,1").unwrap();
        let (g, _) = build_module(&f, &s, &[th(&f, &[0, 1]), th(&f, &[1])]).unwrap();
        let a = UniPoly::from_coeffs(&f, Var::T, vec![1, 2, 1]);
        let b = UniPoly::from_coeffs(&f, Var::T, vec![0, 1, 0, 2]);
        assert_eq!(g.rho(&a.mul(&b)), g.rho(&a).mul(&g.rho(&b)));
        assert_eq!(g.d_rho(&a.mul(&b)), g.d_rho(&a).mul(&g.d_rho(&b)));
        assert_eq!(g.rho(&a).d(), g.d_rho(&a));
        // blocks of ∂ρ(b) are the d-matrices of b's jet at θ
        let like = rzero(&f);
        let bb = BiPoly::from_t(&b);
        let dr = g.d_rho(&b);
        for (o, &n) in g.block_offsets().iter().zip(g.blocks()) {
            let dm = Jet::of_bipoly(&like, &bb, n).d_matrix(n).unwrap();
            assert_eq!(dr.block(*o, *o, n, n), dm);
        }
    }

    #[test]
    fn carlitz_tensor_shape() {
        let f = Fq::from_q(2).unwrap();
        let c3 = carlitz_tensor(&f, 3);
        assert_eq!(c3.nilpotency_index(), Some(3));
        let e = c3.rho_t().term(1);
        assert!(e.get(2, 0).is_one());
        assert_eq!(e.entries().iter().filter(|x| !x.is_zero()).count(), 1);
    }
}
