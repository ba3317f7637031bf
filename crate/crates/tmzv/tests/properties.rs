use proptest::prelude::*;

use tmzv::explog::ExpLogStream;
use tmzv::gauss::{gauss_norm, GaussNorm, Scale};
use tmzv::index::compositions;
use tmzv::jet::exact_like;
use tmzv::laurent::EXACT;
use tmzv::matrix::Mat;
use tmzv::tmodule::build_module;
use tmzv::{BiPoly, Fq, Jet, LaurentNumber, RatFunc, UniPoly, Var};

fn field(q: u32) -> Fq {
    Fq::from_q(q).unwrap()
}

fn poly(f: &Fq, var: Var, c: &[u32]) -> UniPoly {
    UniPoly::from_coeffs(f, var, c.iter().map(|x| x % f.q()).collect())
}

fn bipoly(f: &Fq, rows: &[Vec<u32>]) -> BiPoly {
    BiPoly::from_coeffs(f, rows.iter().map(|r| poly(f, Var::Theta, r)).collect())
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..9, 0..=max_len)
}

fn bi(max_t: usize, max_th: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(coeffs(max_th), 0..=max_t)
}

fn nonzero(f: &Fq, var: Var, c: &[u32]) -> UniPoly {
    let p = poly(f, var, c);
    if p.is_zero() {
        UniPoly::one(f, var)
    } else {
        p
    }
}

fn le(a: GaussNorm, b: GaussNorm) -> bool {
    match (a, b) {
        (GaussNorm::Zero, _) => true,
        (_, GaussNorm::Zero) => false,
        (GaussNorm::Pow(x), GaussNorm::Pow(y)) => x <= y,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_matrix_is_multiplicative(q in prop::sample::select(vec![2u32, 3, 4]), a in bi(4, 3), b in bi(4, 3), m in 1usize..6) {
        let f = field(q);
        let like = exact_like(&f);
        let (a, b) = (bipoly(&f, &a), bipoly(&f, &b));
        let lhs = Jet::of_bipoly(&like, &a.mul(&b), m).d_matrix(m).unwrap();
        let rhs = Jet::of_bipoly(&like, &a, m).d_matrix(m).unwrap().mul(&Jet::of_bipoly(&like, &b, m).d_matrix(m).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hyperderivative_product_rule(q in prop::sample::select(vec![2u32, 3, 5]), a in coeffs(7), b in coeffs(7), n in 0usize..14) {
        let f = field(q);
        let (a, b) = (poly(&f, Var::T, &a), poly(&f, Var::T, &b));
        let mut rhs = UniPoly::zero(&f, Var::T);
        for k in 0..=n {
            rhs = rhs.add(&a.hyperderivative(k).mul(&b.hyperderivative(n - k)));
        }
        prop_assert_eq!(a.mul(&b).hyperderivative(n), rhs);
    }

    #[test]
    fn twist_is_a_ring_homomorphism(q in prop::sample::select(vec![2u32, 3, 4]), x in coeffs(4), y in coeffs(4), d in coeffs(3), n in 0u32..3) {
        let f = field(q);
        let d = nonzero(&f, Var::Theta, &d);
        let x = RatFunc::new(poly(&f, Var::Theta, &x), d.clone()).unwrap();
        let y = RatFunc::new(poly(&f, Var::Theta, &y), d.mul(&d)).unwrap();
        prop_assert_eq!(x.mul(&y).twist(n), x.twist(n).mul(&y.twist(n)));
        prop_assert_eq!(x.add(&y).twist(n), x.twist(n).add(&y.twist(n)));
        prop_assert_eq!(x.twist(n).twist(1), x.twist(n + 1));
        let (lx, ly) = (LaurentNumber::from_ratfunc(&x, 30), LaurentNumber::from_ratfunc(&y, 30));
        let twisted = lx.mul(&ly).twist(n);
        prop_assert!(twisted.agreement(&lx.twist(n).mul(&ly.twist(n))) >= twisted.precision());
    }

    #[test]
    fn gauss_norm_is_submultiplicative(q in prop::sample::select(vec![2u32, 3]), a in bi(3, 4), b in bi(3, 4)) {
        let f = field(q);
        let (a, b) = (bipoly(&f, &a), bipoly(&f, &b));
        for at in [Scale::One, Scale::Theta] {
            let (na, nb) = (gauss_norm(&a, at), gauss_norm(&b, at));
            prop_assert!(le(gauss_norm(&a.mul(&b), at), na.mul(nb)));
            let max = if le(na, nb) { nb } else { na };
            prop_assert!(le(gauss_norm(&a.add(&b), at), max));
        }
    }

    #[test]
    fn rho_laws_and_nilpotency(
        q in prop::sample::select(vec![2u32, 3]),
        w in 1u32..5,
        pick in 0usize..8,
        pts in prop::collection::vec(coeffs(3), 4),
        a in coeffs(3),
        b in coeffs(3),
    ) {
        let f = field(q);
        let all = compositions(w);
        let s = &all[pick % all.len()];
        let u: Vec<RatFunc> = pts.iter().take(s.depth()).map(|c| nonzero(&f, Var::Theta, c).into()).collect();
        let (g, _) = build_module(&f, s, &u).unwrap();
        let (a, b) = (poly(&f, Var::T, &a), poly(&f, Var::T, &b));
        prop_assert_eq!(g.rho(&a.mul(&b)), g.rho(&a).mul(&g.rho(&b)));
        prop_assert_eq!(g.rho(&a.add(&b)), g.rho(&a).add(&g.rho(&b)));
        prop_assert_eq!(g.d_rho(&a.mul(&b)), g.d_rho(&a).mul(&g.d_rho(&b)));
        prop_assert_eq!(g.rho(&a).d(), g.d_rho(&a));
        let th = RatFunc::theta(&f);
        let n = g.d_rho(&UniPoly::x(&f, Var::T)).sub(&Mat::identity(&th, g.dim()).scale(&th));
        prop_assert!(n.pow(g.dim() as u32).is_zero());
    }

    #[test]
    fn exp_after_log_is_identity(q in prop::sample::select(vec![2u32, 3]), w in 1u32..4, pick in 0usize..4, pts in prop::collection::vec(coeffs(2), 3)) {
        let f = field(q);
        let all = compositions(w);
        let s = &all[pick % all.len()];
        let u: Vec<RatFunc> = pts.iter().take(s.depth()).map(|c| nonzero(&f, Var::Theta, c).into()).collect();
        let (g, _) = build_module(&f, s, &u).unwrap();
        let mut st = ExpLogStream::new(&g, &exact_like(&f), EXACT);
        for i in 1..=3 {
            prop_assert!(st.composition(i).unwrap().is_zero(), "order {}", i);
        }
    }

    #[test]
    fn precision_claims_survive_doubling(
        q in prop::sample::select(vec![2u32, 3]),
        seeds in prop::collection::vec((coeffs(4), coeffs(4)), 3),
        ops in prop::collection::vec((0u8..5, 0usize..16, 0usize..16), 1..10),
        p in 8i64..50,
    ) {
        let f = field(q);
        let xs: Vec<RatFunc> = seeds
            .iter()
            .map(|(n, d)| RatFunc::new(nonzero(&f, Var::Theta, n), nonzero(&f, Var::Theta, d)).unwrap())
            .collect();
        let mut lo: Vec<LaurentNumber> = xs.iter().map(|x| LaurentNumber::from_ratfunc(x, p)).collect();
        let mut hi: Vec<LaurentNumber> = xs.iter().map(|x| LaurentNumber::from_ratfunc(x, 2 * p)).collect();
        for (op, i, j) in ops {
            let (i, j) = (i % lo.len(), j % lo.len());
            let pair = match op {
                0 => (lo[i].add(&lo[j]), hi[i].add(&hi[j])),
                1 => (lo[i].sub(&lo[j]), hi[i].sub(&hi[j])),
                2 => (lo[i].mul(&lo[j]), hi[i].mul(&hi[j])),
                3 => match (lo[i].div_rel(&lo[j], p), hi[i].div_rel(&hi[j], 2 * p)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue,
                },
                _ => (lo[i].twist(1), hi[i].twist(1)),
            };
            lo.push(pair.0);
            hi.push(pair.1);
        }
        for (a, b) in lo.iter().zip(&hi) {
            prop_assert!(b.precision() >= a.precision());
            prop_assert!(a.agreement(b) >= a.precision().min(b.precision()));
        }
    }
}
