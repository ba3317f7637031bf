//! Independent oracles with frozen outputs.

use tmzv::decomposition::{chen_check, chen_product, theta_poly};
use tmzv::jet::jet_agreement;
use tmzv::polylog::{domain_check, polylog_partial, tail_bound, Regime};
use tmzv::special::{dmax_for, power_sum, zeta_bruteforce, PowerSumMode};
use tmzv::{Fq, Index, LaurentNumber, RatFunc};

fn field(q: u32) -> Fq {
    Fq::from_q(q).unwrap()
}

// The difference between cutoffs n and 2n is part of the omitted tail at n, so its ord
// must respect the certified bound.
#[test]
fn tail_bound_survives_doubling() {
    let abs = 300;
    let cases: &[(u32, &str, &[&[u32]])] = &[
        (2, "1", &[&[1]]),
        (2, "2", &[&[0, 1]]),
        (2, "1,3", &[&[1], &[0, 0, 1]]),
        (2, "2,1", &[&[0, 1], &[1]]),
        (3, "1", &[&[1]]),
        (3, "1,2", &[&[1], &[0, 1]]),
        (3, "3", &[&[2, 1]]),
    ];
    for &(q, s, pts) in cases {
        let f = field(q);
        let s = Index::parse(s).unwrap();
        let u: Vec<RatFunc> = pts.iter().map(|c| theta_poly(&f, c)).collect();
        assert!(domain_check(&f, &s, &u, Regime::Interior).ok, "{s} not interior");
        let like = LaurentNumber::zero(&f);
        for star in [true, false] {
            for n in 1..=3 {
                let a = polylog_partial(&like, &s, &u, 2, n, star, abs).unwrap();
                let b = polylog_partial(&like, &s, &u, 2, 2 * n, star, abs).unwrap();
                let want = tail_bound(&f, &s, &u, n).min(abs);
                let got = jet_agreement(&a, &b);
                assert!(got >= want, "q={q} {s} star={star} n={n}: agreement {got} < bound {want}");
            }
        }
    }
}

// The (s, s) terms of ζ_A(s)ζ_A(s): the two shuffles give 2, and when (q − 1) | s the sum
// term j = s adds 2·(−1)^{s−1}. Everything is read mod p.
#[test]
fn chen_square_collects_diagonal() {
    for (q, s) in [(2, 1), (2, 3), (3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 4), (7, 2)] {
        let f = field(q);
        let p = f.p() as i64;
        let mut want = 2i64;
        if s % (q - 1) == 0 {
            want += if s % 2 == 1 { 2 } else { -2 };
        }
        let want = want.rem_euclid(p) as u32;
        let cp = chen_product(&f, s, s);
        let got = cp.terms.iter().find(|t| t.index == [s, s]).map_or(0, |t| t.coef);
        assert_eq!(got, want, "q={q} s={s}");
        if q <= 3 && s <= 2 {
            assert!(chen_check(&f, &cp, 40).unwrap() >= 40, "q={q} s={s}");
        }
    }
}

// Depth one: enumeration and the interpolation formula are separate routes to S_d(s).
#[test]
fn power_sums_two_routes() {
    for q in [2, 3, 4] {
        let f = field(q);
        for s in 1..=6u32 {
            for d in 0..=6u32 {
                if d as f64 * (q as f64).log2() > 12.0 {
                    continue;
                }
                let brute = power_sum(&f, d, s, PowerSumMode::Brute, 12.0).unwrap();
                let interp = power_sum(&f, d, s, PowerSumMode::Interp, 0.0).unwrap();
                assert_eq!(brute, interp, "q={q} d={d} s={s}");
            }
        }
    }
}

fn digits(x: &LaurentNumber, from: i64, to: i64) -> String {
    (from..to).map(|k| x.coeff(k).unwrap().to_string()).collect()
}

#[test]
fn frozen_zeta_values() {
    let f = field(2);
    let s = Index::parse("1,3").unwrap();
    let z = zeta_bruteforce(&f, &s, dmax_for(&s, 40), 40, 22.0).unwrap().value;
    assert_eq!(z.ord(), Some(2));
    assert_eq!(digits(&z, 2, 40), "11110001001110010011100111000111000100");

    let f = field(3);
    let s = Index::parse("2").unwrap();
    let z = zeta_bruteforce(&f, &s, dmax_for(&s, 30), 30, 22.0).unwrap().value;
    assert_eq!(digits(&z, 0, 30), "100000102000102000102000201000");
}
