//! Fiber coproducts over C^{⊗d}: the module G_𝔰 with its special point v_𝔰 and logarithmic
//! vector Z_𝔰, and the analogous construction for products of MZVs.

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{at_series_jet, chen_product, decompose_checked, Decomposition, CHECK_BUDGET_BITS};
use crate::error::{Error, Result};
use crate::explog::exp_eval;
use crate::field::Fq;
use crate::index::{render_point, Index};
use crate::jet::Jet;
use crate::laurent::{LaurentJson, LaurentNumber, EXACT};
use crate::logformula::{log_paths, y_times_b};
use crate::matrix::Mat;
use crate::poly::{BiPoly, UniPoly, Var};
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;
use crate::special::{dmax_for, gamma_index, zeta_bruteforce};
use crate::tmodule::{build_module, carlitz_tensor, embed, EntryText, TModule, TwistedMatrix};

type L = LaurentNumber;

/// Extra digits for constituent logarithms, absorbing the growth from ∂ρ(b).
pub const Z_GUARD: i64 = 30;

/// One summand of a fiber coproduct: a module containing C^{⊗d} as its top-left block,
/// a point on it, and the multiplier b(t) applied before projecting.
#[derive(Clone, Debug)]
pub struct Constituent {
    pub module: TModule,
    pub point: Vec<RatFunc>,
    pub mult: UniPoly,
}

#[derive(Clone, Debug)]
pub struct CoproductModule {
    pub top: usize,
    pub parts: Vec<Constituent>,
    pub module: TModule,
    /// Where each constituent's minus part starts in the assembled coordinates.
    pub minus_at: Vec<Option<usize>>,
    pub source: Option<Decomposition>,
}

fn rzero(f: &Fq) -> RatFunc {
    RatFunc::zero(f, Var::Theta)
}

/// b(t) ∈ F_q[t] as a polynomial in T.
pub fn t_poly(b: &BiPoly) -> Result<UniPoly> {
    b.to_t_poly()
}

impl CoproductModule {
    /// Block surgery: [t]_d on top, the F blocks to its right, the lower diagonal blocks below.
    pub fn assemble(f: &Fq, top: usize, parts: Vec<Constituent>, source: Option<Decomposition>) -> Result<CoproductModule> {
        let carlitz = carlitz_tensor(f, top);
        let mut dim = top;
        let mut blocks = vec![top];
        let mut minus_at = vec![];
        for (k, p) in parts.iter().enumerate() {
            let g = &p.module;
            if g.blocks().first() != Some(&top) {
                return Err(Error::Check(format!("constituent {}: leading block {:?} is not {top}", k + 1, g.blocks().first())));
            }
            if g.rho_t().block(0, 0, top, top) != *carlitz.rho_t() {
                return Err(Error::Check(format!("constituent {}: top-left block is not [t]_{top}", k + 1)));
            }
            let rest = g.dim() - top;
            if rest > 0 && !g.rho_t().block(top, 0, rest, top).is_zero() {
                return Err(Error::Check(format!("constituent {}: not block upper triangular", k + 1)));
            }
            if rest == 0 {
                minus_at.push(None);
            } else {
                minus_at.push(Some(dim));
                dim += rest;
                blocks.extend_from_slice(&g.blocks()[1..]);
            }
        }
        let mut rho = TwistedMatrix::zero(f, dim, dim);
        rho.put_block(0, 0, carlitz.rho_t());
        for (p, at) in parts.iter().zip(&minus_at) {
            if let Some(o) = *at {
                let g = &p.module;
                let rest = g.dim() - top;
                rho.put_block(0, o, &g.rho_t().block(0, top, top, rest));
                rho.put_block(o, o, &g.rho_t().block(top, top, rest, rest));
            }
        }
        let module = TModule::new(f, blocks, rho)?;
        Ok(CoproductModule { top, parts, module, minus_at, source })
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// π: sum of the top parts, then each minus part in order.
    pub fn pi<S: Scalar>(&self, zs: &[Vec<S>]) -> Vec<S> {
        let like = zs[0][0].zero_like();
        let mut out = vec![like; self.dim()];
        for (z, at) in zs.iter().zip(&self.minus_at) {
            for k in 0..self.top {
                out[k] = out[k].plus(&z[k]);
            }
            if let Some(o) = *at {
                for (k, x) in z[self.top..].iter().enumerate() {
                    out[o + k] = x.clone();
                }
            }
        }
        out
    }

    /// π as a matrix from ⊕G_ℓ.
    pub fn pi_matrix(&self) -> Mat<RatFunc> {
        let f = self.module.field();
        let total: usize = self.parts.iter().map(|p| p.module.dim()).sum();
        let one = RatFunc::one(f, Var::Theta);
        let mut m = Mat::zeros(&rzero(f), self.dim(), total);
        let mut col = 0;
        for (p, at) in self.parts.iter().zip(&self.minus_at) {
            for k in 0..self.top {
                m.set(k, col + k, one.clone());
            }
            if let Some(o) = *at {
                for k in 0..p.module.dim() - self.top {
                    m.set(o + k, col + self.top + k, one.clone());
                }
            }
            col += p.module.dim();
        }
        m
    }

    /// ρ(t)∘π = π∘(⊕ρ_ℓ(t)), exactly.
    pub fn pi_is_morphism(&self) -> bool {
        let f = self.module.field();
        let total: usize = self.parts.iter().map(|p| p.module.dim()).sum();
        let mut diag = TwistedMatrix::zero(f, total, total);
        let mut o = 0;
        for p in &self.parts {
            diag.put_block(o, o, p.module.rho_t());
            o += p.module.dim();
        }
        let pm = TwistedMatrix::from_terms(vec![self.pi_matrix()]);
        self.module.rho_t().mul(&pm) == pm.mul(&diag)
    }

    /// v = π(ρ_ℓ(b_ℓ)(v_ℓ)), exact over K.
    pub fn special_point(&self) -> Vec<RatFunc> {
        let pts: Vec<Vec<RatFunc>> = self.parts.iter().map(|p| p.module.rho(&p.mult).apply(&p.point)).collect();
        self.pi(&pts)
    }

    pub fn rho_entries(&self) -> Vec<EntryText> {
        self.module.rho_t().render_entries()
    }
}

/// G_𝔰 from the triples: G_ℓ is built on the reversed pair (𝔰̃_ℓ, ũ_ℓ).
pub fn build_coproduct(f: &Fq, dec: &Decomposition) -> Result<CoproductModule> {
    let top = dec.source.weight() as usize;
    let mut parts = vec![];
    for t in &dec.triples {
        let s = t.index.reversed();
        let u: Vec<RatFunc> = t.point.iter().rev().cloned().collect();
        let (module, point) = build_module(f, &s, &u)?;
        parts.push(Constituent { module, point, mult: t_poly(&t.b)? });
    }
    CoproductModule::assemble(f, top, parts, Some(dec.clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ZCoord {
    pub label: String,
    pub value: LaurentJson,
    pub closed_form: LaurentJson,
    pub agreement: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogVectorReport {
    pub dim: usize,
    pub z: Vec<ZCoord>,
    pub agreement_digits: Vec<i64>,
    /// Coordinate d against the brute-force Γ·ζ value.
    pub center_agreement: i64,
    /// Exp(Z) against the special point.
    pub exp_agreement: i64,
    /// Pairwise agreement of the three logarithm routes, per constituent.
    pub constituent_paths: Vec<[i64; 3]>,
    /// Exp of each constituent logarithm against its point.
    pub constituent_exp: Vec<i64>,
    pub precision: i64,
    pub passed: bool,
    #[serde(skip)]
    pub values: Vec<L>,
}

fn agreement_of(a: &L, b: &L, prec: i64) -> i64 {
    a.agreement(b).min(prec)
}

fn embed_mat(m: &Mat<RatFunc>, like: &L) -> Mat<L> {
    m.map(|x| embed(like, x, EXACT))
}

/// Top and minus blocks of ∂ρ(c)Z_𝔰 from jets alone: the jets of c·ζ^AT(𝔰), then for each
/// deeper constituent the jets of c·b_ℓ·𝔏i* (Corollary form).
pub fn closed_form(f: &Fq, cop: &CoproductModule, c: &BiPoly, prec: i64) -> Result<(Vec<L>, Vec<Vec<L>>)> {
    let dec = cop.source.as_ref().ok_or_else(|| Error::Invalid("closed form needs a decomposition".into()))?;
    let d = cop.top;
    let like = L::zero(f);
    let guard = c.t_degree().unwrap_or(0) as i64 + 4;
    let at = at_series_jet(f, &dec.source, d, prec + guard)?;
    let jet = Jet::of_bipoly(&like, c, d).mul(&at.value);
    let top: Vec<L> = (0..d).rev().map(|k| jet.coeff(k).truncate(prec)).collect();
    let minus: Vec<Vec<L>> = dec
        .triples
        .par_iter()
        .zip(&cop.minus_at)
        .filter(|(_, at)| at.is_some())
        .map(|(t, _)| {
            let s = t.index.reversed();
            let u: Vec<RatFunc> = t.point.iter().rev().cloned().collect();
            Ok(y_times_b(f, &s, &u, &c.mul(&t.b), prec)?[d..].to_vec())
        })
        .collect::<Result<_>>()?;
    Ok((top, minus))
}

fn labels(cop: &CoproductModule) -> Vec<String> {
    let d = cop.top;
    let mut out: Vec<String> = (0..d).map(|k| format!("atseries-jet {}", d - 1 - k)).collect();
    for (l, p) in cop.parts.iter().enumerate() {
        if cop.minus_at[l].is_some() {
            out.extend((d..p.module.dim()).map(|_| format!("minus-block {}", l + 1)));
        }
    }
    out
}

/// Γ_𝔰 ζ_A(𝔰) by brute force.
fn gamma_zeta(f: &Fq, s: &Index, prec: i64) -> Result<L> {
    let gamma = gamma_index(f, s);
    let zp = prec + gamma.deg_i64();
    let z = zeta_bruteforce(f, s, dmax_for(s, zp), zp, CHECK_BUDGET_BITS)?;
    Ok(L::from_poly(&gamma).mul(&z.value).truncate(prec))
}

/// Z_𝔰 = ∂π(∂ρ_ℓ(b_ℓ) Y_ℓ), checked against the closed form, the brute-force center value
/// and Exp(Z_𝔰) = v_𝔰.
pub fn z_vector(f: &Fq, cop: &CoproductModule, prec: i64) -> Result<LogVectorReport> {
    let dec = cop.source.as_ref().ok_or_else(|| Error::Invalid("z_vector needs a decomposition".into()))?;
    let wp = prec + Z_GUARD;
    let like = L::zero(f);
    let logs = cop
        .parts
        .par_iter()
        .map(|p| {
            let (s, u) = p.module.provenance().expect("constituents come from build_module");
            log_paths(f, s, u, wp)
        })
        .collect::<Result<Vec<_>>>()?;
    let scaled: Vec<Vec<L>> = cop
        .parts
        .iter()
        .zip(&logs)
        .map(|(p, lp)| embed_mat(&p.module.d_rho(&p.mult), &like).mul_vec(&lp.recursion.value))
        .collect();
    let z: Vec<L> = cop.pi(&scaled).iter().map(|x| x.truncate(prec)).collect();
    let (top, minus) = closed_form(f, cop, &BiPoly::one(f), prec)?;
    let closed: Vec<L> = top.into_iter().chain(minus.into_iter().flatten()).collect();
    let center = gamma_zeta(f, &dec.source, prec)?;
    let center_agreement = agreement_of(&z[cop.top - 1], &center, prec);
    let v = cop.special_point();
    let back = exp_eval(&cop.module, &z, prec)?;
    let exp_agreement =
        back.value.iter().zip(&v).map(|(a, b)| agreement_of(a, &L::from_ratfunc(b, prec), prec)).min().unwrap();
    let paths = logs.iter().map(|l| (l.agreement, l.exp_back)).collect();
    finish(cop, z, closed, center_agreement, exp_agreement, paths, wp, prec)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    cop: &CoproductModule,
    z: Vec<L>,
    closed: Vec<L>,
    center_agreement: i64,
    exp_agreement: i64,
    paths: Vec<([i64; 3], i64)>,
    path_target: i64,
    prec: i64,
) -> Result<LogVectorReport> {
    let (constituent_paths, constituent_exp): (Vec<[i64; 3]>, Vec<i64>) = paths.into_iter().unzip();
    if closed.len() != z.len() {
        return Err(Error::Check(format!("closed form has {} coordinates, Z has {}", closed.len(), z.len())));
    }
    let agreement_digits: Vec<i64> = z.iter().zip(&closed).map(|(a, b)| agreement_of(a, b, prec)).collect();
    let coords = labels(cop)
        .into_iter()
        .zip(z.iter().zip(&closed))
        .zip(&agreement_digits)
        .map(|((label, (a, b)), &g)| ZCoord { label, value: a.to_json(), closed_form: b.to_json(), agreement: g })
        .collect();
    let passed = agreement_digits.iter().all(|&g| g >= prec)
        && center_agreement >= prec
        && exp_agreement >= prec
        && constituent_paths.iter().flatten().all(|&g| g >= path_target)
        && constituent_exp.iter().all(|&g| g >= path_target);
    Ok(LogVectorReport {
        dim: cop.dim(),
        z: coords,
        agreement_digits,
        center_agreement,
        exp_agreement,
        constituent_paths,
        constituent_exp,
        precision: prec,
        passed,
        values: z,
    })
}

/// One index of a product relation with its F_p coefficient.
#[derive(Clone, Debug)]
pub struct RelationTerm {
    pub coef: u32,
    pub index: Index,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialReport {
    pub factors: Vec<Vec<u32>>,
    pub weight: usize,
    pub relation: Vec<(u32, Vec<u32>)>,
    pub multipliers: Vec<String>,
    pub dim: usize,
    pub rho: Vec<EntryText>,
    pub v: Vec<String>,
    pub log: LogVectorReport,
    /// Coordinate w against Γ_{𝔰_1}⋯Γ_{𝔰_n}·Π ζ_A(k_i).
    pub product_agreement: i64,
    pub passed: bool,
}

/// ζ_A(k_1)⋯ζ_A(k_m) as the w-th coordinate of a logarithmic vector. Without an explicit
/// relation only m ≤ 2 depth-1 factors are supported, using Chen's formula.
pub fn monomial_module(f: &Fq, factors: &[Index], relation: Option<Vec<RelationTerm>>, prec: i64) -> Result<MonomialReport> {
    if factors.is_empty() {
        return Err(Error::Invalid("no factors".into()));
    }
    let w: u32 = factors.iter().map(|k| k.weight()).sum();
    let relation = match relation {
        Some(r) => r,
        None => match factors {
            [k] => vec![RelationTerm { coef: 1, index: k.clone() }],
            [a, b] if a.depth() == 1 && b.depth() == 1 => chen_product(f, a.s(0), b.s(0))
                .terms
                .into_iter()
                .map(|t| Ok(RelationTerm { coef: t.coef, index: Index::new(t.index)? }))
                .collect::<Result<_>>()?,
            _ => {
                return Err(Error::Invalid(
                    "no explicit product formula for these factors; supply a decomposition".into(),
                ))
            }
        },
    };
    if relation.iter().any(|t| t.index.weight() != w) {
        return Err(Error::Invalid(format!("relation terms must have weight {w}")));
    }
    let p = f.p();
    let gammas: Vec<UniPoly> = relation.iter().map(|t| gamma_index(f, &t.index)).collect();
    let mut multipliers = vec![];
    for (i, t) in relation.iter().enumerate() {
        let mut c = UniPoly::constant(f, Var::Theta, f.from_int((t.coef % p) as i64));
        for (j, g) in gammas.iter().enumerate() {
            if j != i {
                c = c.mul(g);
            }
        }
        multipliers.push(BiPoly::theta_to_t(&c));
    }
    let wp = prec + Z_GUARD;
    let inner = relation
        .par_iter()
        .map(|t| {
            let (dec, _) = decompose_checked(f, &t.index, 1, wp)?;
            let cop = build_coproduct(f, &dec)?;
            let rep = z_vector(f, &cop, wp)?;
            Ok((cop, rep))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut parts = vec![];
    for ((cop, _), c) in inner.iter().zip(&multipliers) {
        parts.push(Constituent { module: cop.module.clone(), point: cop.special_point(), mult: t_poly(c)? });
    }
    let outer = CoproductModule::assemble(f, w as usize, parts, None)?;
    let like = L::zero(f);
    let scaled: Vec<Vec<L>> = outer
        .parts
        .iter()
        .zip(&inner)
        .map(|(p, (_, rep))| embed_mat(&p.module.d_rho(&p.mult), &like).mul_vec(&rep.values))
        .collect();
    let z: Vec<L> = outer.pi(&scaled).iter().map(|x| x.truncate(prec)).collect();
    // closed form: hat parts summed, minus parts in order
    let mut closed_top = vec![L::zero(f); w as usize];
    let mut closed_minus = vec![];
    for ((cop, _), c) in inner.iter().zip(&multipliers) {
        let (top, minus) = closed_form(f, cop, c, prec)?;
        for (a, b) in closed_top.iter_mut().zip(&top) {
            *a = a.add(b);
        }
        closed_minus.extend(minus.into_iter().flatten());
    }
    let closed: Vec<L> = closed_top.into_iter().chain(closed_minus).collect();
    let mut product = L::from_poly(&gammas.iter().fold(UniPoly::one(f, Var::Theta), |a, g| a.mul(g)));
    let gdeg = product.ord().map_or(0, |o| -o);
    for k in factors {
        let zp = prec + gdeg;
        product = product.mul(&zeta_bruteforce(f, k, dmax_for(k, zp), zp, CHECK_BUDGET_BITS)?.value);
    }
    let product_agreement = agreement_of(&z[w as usize - 1], &product, prec);
    let v = outer.special_point();
    let back = exp_eval(&outer.module, &z, prec)?;
    let exp_agreement =
        back.value.iter().zip(&v).map(|(a, b)| agreement_of(a, &L::from_ratfunc(b, prec), prec)).min().unwrap();
    let paths: Vec<([i64; 3], i64)> = inner
        .iter()
        .flat_map(|(_, r)| r.constituent_paths.iter().copied().zip(r.constituent_exp.iter().copied()))
        .collect();
    let log = finish(&outer, z, closed, product_agreement, exp_agreement, paths, wp + Z_GUARD, prec)?;
    let inner_ok = inner.iter().all(|(_, r)| r.passed);
    Ok(MonomialReport {
        factors: factors.iter().map(|k| k.entries().to_vec()).collect(),
        weight: w as usize,
        relation: relation.iter().map(|t| (t.coef, t.index.entries().to_vec())).collect(),
        multipliers: multipliers.iter().map(|c| c.render()).collect(),
        dim: outer.dim(),
        rho: outer.rho_entries(),
        v: render_point(&v),
        passed: log.passed && inner_ok,
        product_agreement,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::triples;

    fn example(f: &Fq) -> CoproductModule {
        let dec = triples(f, &Index::parse("1,3").unwrap()).unwrap();
        build_coproduct(f, &dec).unwrap()
    }

    #[test]
    fn example_rho_and_point() {
        let f = Fq::from_q(2).unwrap();
        let cop = example(&f);
        assert_eq!(cop.dim(), 6);
        let e = cop.rho_entries();
        let row = |r: usize| -> Vec<(usize, String)> {
            e.iter().filter(|x| x.row == r).map(|x| (x.col, x.value.clone())).collect()
        };
        assert_eq!(row(1), vec![(1, "θ".to_string()), (2, "1".to_string())]);
        assert_eq!(
            row(4),
            vec![(1, "τ".to_string()), (4, "θ".to_string()), (5, "θ^2τ".to_string()), (6, "τ".to_string())]
        );
        assert_eq!(row(5), vec![(5, "θ + τ".to_string())]);
        assert_eq!(row(6), vec![(6, "θ + τ".to_string())]);
        assert_eq!(render_point(&cop.special_point()), vec!["0", "0", "0", "1", "1", "θ + 1"]);
        let p4 = &cop.parts[3];
        assert_eq!(render_point(&p4.point), vec!["0", "0", "0", "1", "1"]);
        let t = UniPoly::x(&f, Var::T);
        assert_eq!(render_point(&p4.module.rho(&t).apply(&p4.point)), vec!["0", "0", "1", "θ + 1", "θ + 1"]);
        assert!(cop.pi_is_morphism());
    }

    #[test]
    fn example_z_vector() {
        let f = Fq::from_q(2).unwrap();
        let cop = example(&f);
        let rep = z_vector(&f, &cop, 40).unwrap();
        assert!(rep.passed, "{:?} {} {}", rep.agreement_digits, rep.center_agreement, rep.exp_agreement);
        assert_eq!(rep.z[4].label, "minus-block 3");
        // Li*_1(1) and θ·Li*_1(1)
        let li = crate::polylog::cmspl_jet(&f, &Index::parse("1").unwrap(), &[RatFunc::one(&f, Var::Theta)], 1, 40)
            .unwrap()
            .value;
        assert!(rep.values[4].agreement(li.coeff(0)) >= 40);
        let th = L::from_poly(&UniPoly::x(&f, Var::Theta));
        assert!(rep.values[5].agreement(&th.mul(li.coeff(0))) >= 39);
    }

    #[test]
    fn depth_one_is_carlitz_power() {
        let f = Fq::from_q(3).unwrap();
        let dec = triples(&f, &Index::parse("4").unwrap()).unwrap();
        let cop = build_coproduct(&f, &dec).unwrap();
        assert_eq!(cop.module.rho_t(), carlitz_tensor(&f, 4).rho_t());
        let rep = z_vector(&f, &cop, 30).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn q3_depth2_and_3() {
        let f = Fq::from_q(3).unwrap();
        for idx in ["2,1", "1,2", "1,1,2"] {
            let dec = triples(&f, &Index::parse(idx).unwrap()).unwrap();
            let cop = build_coproduct(&f, &dec).unwrap();
            assert!(cop.pi_is_morphism());
            let rep = z_vector(&f, &cop, 30).unwrap();
            assert!(rep.passed, "{idx}: {:?} {} {}", rep.agreement_digits, rep.center_agreement, rep.exp_agreement);
        }
    }

    #[test]
    fn monomial_q3() {
        let f = Fq::from_q(3).unwrap();
        let k = [Index::parse("1").unwrap(), Index::parse("2").unwrap()];
        let rep = monomial_module(&f, &k, None, 25).unwrap();
        assert_eq!(rep.relation.len(), 3);
        assert!(rep.passed, "{} {:?}", rep.product_agreement, rep.log.agreement_digits);
        let none = monomial_module(&f, &[k[0].clone(), k[1].clone(), k[0].clone()], None, 20);
        assert!(none.is_err());
    }
}
