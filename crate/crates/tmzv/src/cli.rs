//! Command-line front end. Every command produces a deterministic report; the process
//! exits with status 0 iff every check in scope passed.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coproduct::{build_coproduct, monomial_module, z_vector, RelationTerm};
use crate::decomposition::{at_series_jet, decompose_checked, triples};
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::index::{parse_point, render_point, Index};
use crate::laurent::LaurentNumber;
use crate::logformula::log_paths;
use crate::polylog::{cmpl_jet, cmspl_jet, domain_check, Regime};
use crate::special::{at_polynomial, dmax_for, power_sum, zeta_bruteforce, PowerSumMode};
use crate::suites::{self, Suite, SuiteConfig};
use crate::tmodule::build_module;

const ENCODING: &str = "F_q elements are integer codes c = Σ c_i p^i standing for Σ c_i x^i modulo the field \
modulus (for prime q the code is the residue). Laurent numbers are {ord, coeffs, precision}: coeffs[k] is the \
coefficient of θ^-(ord+k), and the value is known modulo θ^-precision (null precision means exact).";

#[derive(Parser, Debug)]
#[command(name = "tmzv", version, about = "Multiple zeta values in positive characteristic and their t-modules")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Field size q (a prime power with a built-in modulus)
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Characteristic p; combine with --e or --modulus
    #[arg(long, global = true)]
    pub p: Option<u32>,
    #[arg(long, global = true)]
    pub e: Option<u32>,
    /// Modulus coefficients over F_p, constant term first, e.g. 1,1,1
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Working precision in ord_∞ digits
    #[arg(long, global = true, env = "TMZV_PREC", default_value_t = 200)]
    pub prec: i64,
    /// Jet order (defaults to the weight of the index)
    #[arg(long, global = true)]
    pub jet: Option<usize>,
    /// Brute-force enumeration budget, log2 of the number of monic polynomials
    #[arg(long, global = true, default_value_t = 22.0)]
    pub budget: f64,
    /// Worker threads (0 = all cores); results do not depend on it
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Brute,
    Interp,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ζ_A(𝔰) by brute-force summation with a certified tail
    Mzv { index: String },
    /// Anderson–Thakur polynomial H_n
    Atpoly { n: u64 },
    /// Jet of the Anderson–Thakur series ζ^AT(𝔰) at t = θ
    Hseries { index: String },
    /// Carlitz multiple (star) polylogarithm and its t-deformation jet
    Polylog {
        #[arg(long)]
        index: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        star: bool,
    },
    /// Power sum S_d(s)
    Powersum {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// t-module G_{𝔰,u} (with --point) or the fiber coproduct G_𝔰
    Tmodule {
        #[arg(long)]
        index: String,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        show_rho: bool,
    },
    /// Logarithmic vector Y_{𝔰,u} (with --point) or Z_𝔰
    Logvec {
        #[arg(long)]
        index: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Triples (b_ℓ, 𝔰_ℓ, u_ℓ) with the jet identity checked
    Decompose {
        #[arg(long)]
        index: String,
    },
    /// Fiber coproduct, special point and Z_𝔰 against the closed form
    Coproduct {
        #[arg(long)]
        index: String,
        /// Also write the report to this file
        #[arg(long)]
        report: Option<std::path::PathBuf>,
    },
    /// Product of MZVs realized in a fiber coproduct
    Monomial {
        #[arg(long, num_args = 1.., required = true)]
        factors: Vec<String>,
        /// JSON list of {"coef": c, "index": [..]} giving the product as a combination of MZVs
        #[arg(long)]
        relation: Option<std::path::PathBuf>,
    },
    /// Run verification suites (all = the acceptance battery)
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        max_s: u32,
        #[arg(long, default_value_t = 3)]
        max_d: u32,
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long, default_value_t = 1000)]
        traces: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(serde::Deserialize)]
struct RelationJson {
    coef: u32,
    index: Vec<u32>,
}

pub struct Outcome {
    pub result: Value,
    pub text: String,
    pub passed: bool,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn laurent(x: &LaurentNumber) -> Value {
    to_value(&x.to_json())
}

/// The field from the q-spec; None when nothing was given.
pub fn field_from(g: &Global) -> Result<Option<Fq>> {
    match (g.q, g.p, g.e, &g.modulus) {
        (None, None, None, None) => Ok(None),
        (Some(q), None, None, None) => Fq::from_q(q).map(Some),
        (q, Some(p), e, Some(m)) => {
            let coeffs = m
                .split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| Error::Parse(format!("modulus coefficient {c:?}"))))
                .collect::<Result<Vec<u32>>>()?;
            let f = Fq::with_modulus(p, &coeffs)?;
            if q.is_some_and(|q| q != f.q()) || e.is_some_and(|e| e != f.e()) {
                return Err(Error::InvalidField(format!("modulus gives q = {}, inconsistent with --q/--e", f.q())));
            }
            Ok(Some(f))
        }
        (q, Some(p), e, None) => {
            let f = Fq::new(p, e.unwrap_or(1))?;
            if q.is_some_and(|q| q != f.q()) {
                return Err(Error::InvalidField(format!("p = {p}, e = {} gives q = {}", f.e(), f.q())));
            }
            Ok(Some(f))
        }
        _ => Err(Error::InvalidField("--e and --modulus need --p".into())),
    }
}

fn field_header(f: Option<&Fq>) -> Value {
    match f {
        Some(f) => json!({ "q": f.q(), "p": f.p(), "e": f.e(), "modulus": f.modulus(), "encoding": ENCODING }),
        None => json!({ "q": [2, 3], "encoding": ENCODING }),
    }
}

fn index_of(text: &str) -> Result<Index> {
    Index::parse(text)
}

fn run_command(cmd: &Command, g: &Global, field: Option<&Fq>) -> Result<Outcome> {
    let default_field;
    let f = match field {
        Some(f) => f,
        None => {
            default_field = Fq::from_q(2)?;
            &default_field
        }
    };
    let p = g.prec;
    Ok(match cmd {
        Command::Mzv { index } => {
            let s = index_of(index)?;
            let z = zeta_bruteforce(f, &s, dmax_for(&s, p), p, g.budget)?;
            Outcome {
                text: format!("ζ_A{s} = {}\nDmax {}, tail certificate {}", z.value.render(12), z.dmax, z.certificate),
                result: json!({
                    "index": s.entries(),
                    "value": laurent(&z.value),
                    "dmax": z.dmax,
                    "certificate": z.certificate,
                    "interp_terms": z.interp_terms,
                    "negligible_terms": z.negligible_terms,
                }),
                passed: true,
            }
        }
        Command::Atpoly { n } => {
            let h = at_polynomial(f, *n)?;
            let coeffs: Vec<String> = h.coeffs().iter().map(|c| c.render()).collect();
            Outcome {
                text: format!("H_{n} = {}", h.render()),
                result: json!({ "n": n, "value": h.render(), "t_coefficients": coeffs }),
                passed: true,
            }
        }
        Command::Hseries { index } => {
            let s = index_of(index)?;
            let order = g.jet.unwrap_or(s.weight() as usize);
            let at = at_series_jet(f, &s, order, p)?;
            let jets: Vec<Value> = at.value.coeffs().iter().map(laurent).collect();
            let text = at
                .value
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, x)| format!("∂^{j} ζ^AT{s}|θ = {}", x.render(8)))
                .collect::<Vec<_>>()
                .join("\n");
            Outcome {
                text,
                result: json!({ "index": s.entries(), "order": order, "cutoff": at.cutoff, "tail_ord": at.tail_ord, "jets": jets }),
                passed: true,
            }
        }
        Command::Polylog { index, point, star } => {
            let s = index_of(index)?;
            let u = parse_point(f, point)?;
            let order = g.jet.unwrap_or(1).max(1);
            let dom = domain_check(f, &s, &u, Regime::Interior);
            let li = if *star { cmspl_jet(f, &s, &u, order, p)? } else { cmpl_jet(f, &s, &u, order, p)? };
            let name = if *star { "Li*" } else { "Li" };
            Outcome {
                text: format!("{name}_{s}({}) = {}", render_point(&u).join(","), li.value.coeff(0).render(12)),
                result: json!({
                    "index": s.entries(),
                    "point": render_point(&u),
                    "star": star,
                    "domain": to_value(&dom),
                    "cutoff": li.cutoff,
                    "tail_ord": li.tail_ord,
                    "flags": li.flags,
                    "jets": li.value.coeffs().iter().map(laurent).collect::<Vec<_>>(),
                }),
                passed: true,
            }
        }
        Command::Powersum { d, s, mode } => {
            let run = |m| power_sum(f, *d, *s, m, g.budget);
            let (brute, interp) = match mode {
                Mode::Brute => (Some(run(PowerSumMode::Brute)?), None),
                Mode::Interp => (None, Some(run(PowerSumMode::Interp)?)),
                Mode::Both => (Some(run(PowerSumMode::Brute)?), Some(run(PowerSumMode::Interp)?)),
            };
            let agree = match (&brute, &interp) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            };
            let value = brute.as_ref().or(interp.as_ref()).unwrap();
            Outcome {
                text: format!(
                    "S_{d}({s}) = {}{}",
                    value.render(),
                    agree.map(|a| format!("\nbrute = interpolation: {a}")).unwrap_or_default()
                ),
                result: json!({
                    "d": d, "s": s,
                    "brute": brute.as_ref().map(|x| x.render()),
                    "interp": interp.as_ref().map(|x| x.render()),
                    "agree": agree,
                }),
                passed: agree != Some(false),
            }
        }
        Command::Tmodule { index, point, show_rho } => {
            let s = index_of(index)?;
            match point {
                Some(pt) => {
                    let u = parse_point(f, pt)?;
                    let (m, v) = build_module(f, &s, &u)?;
                    let rho = m.rho_t().render_entries();
                    let mut text = format!("G_{s},({}) of dimension {}, blocks {:?}\nv = ({})", render_point(&u).join(","), m.dim(), m.blocks(), render_point(&v).join(", "));
                    if *show_rho {
                        text.push_str(&rho_text(&rho));
                    }
                    Outcome {
                        text,
                        result: json!({
                            "index": s.entries(), "point": render_point(&u), "dim": m.dim(), "blocks": m.blocks(),
                            "nilpotency_index": m.nilpotency_index(), "rho": rho, "v": render_point(&v),
                        }),
                        passed: true,
                    }
                }
                None => {
                    let cop = build_coproduct(f, &triples(f, &s)?)?;
                    let rho = cop.rho_entries();
                    let v = cop.special_point();
                    let morph = cop.pi_is_morphism();
                    let mut text = format!("G_{s} of dimension {}, {} constituents\nv = ({})\nπ is a morphism: {morph}", cop.dim(), cop.parts.len(), render_point(&v).join(", "));
                    if *show_rho {
                        text.push_str(&rho_text(&rho));
                    }
                    Outcome {
                        text,
                        result: json!({ "index": s.entries(), "dim": cop.dim(), "rho": rho, "v": render_point(&v), "pi_morphism": morph }),
                        passed: morph,
                    }
                }
            }
        }
        Command::Logvec { index, point } => {
            let s = index_of(index)?;
            match point {
                Some(pt) => {
                    let u = parse_point(f, pt)?;
                    let lp = log_paths(f, &s, &u, p)?;
                    let passed = lp.agreement.iter().all(|&a| a >= p) && lp.exp_back >= p;
                    let text = lp.theorem.iter().enumerate().map(|(i, y)| format!("Y[{}] = {}", i + 1, y.render(8))).collect::<Vec<_>>().join("\n")
                        + &format!("\npairwise agreement {:?}, Exp(Y) vs v {}", lp.agreement, lp.exp_back);
                    Outcome {
                        text,
                        result: json!({
                            "index": s.entries(), "point": render_point(&u),
                            "y": lp.theorem.iter().map(laurent).collect::<Vec<_>>(),
                            "agreement": lp.agreement, "exp_agreement": lp.exp_back,
                            "recursion_flags": lp.recursion.flags,
                        }),
                        passed,
                    }
                }
                None => {
                    let cop = build_coproduct(f, &triples(f, &s)?)?;
                    let rep = z_vector(f, &cop, p)?;
                    Outcome { text: z_text(&rep), passed: rep.passed, result: to_value(&rep) }
                }
            }
        }
        Command::Decompose { index } => {
            let s = index_of(index)?;
            let order = g.jet.unwrap_or(s.weight() as usize);
            let (_, rep) = decompose_checked(f, &s, order, p)?;
            let text = rep.triples.iter().map(|t| format!("b = {}, index {:?}, point ({})", t.b, t.index, t.point.join(","))).collect::<Vec<_>>().join("\n")
                + &format!(
                    "\nexpansion {}, identity {}, specialization {}",
                    rep.expansion_agreement, rep.identity_agreement, rep.specialization_agreement
                );
            Outcome { text, passed: rep.passed, result: to_value(&rep) }
        }
        Command::Coproduct { index, report } => {
            let s = index_of(index)?;
            let dec = triples(f, &s)?;
            let cop = build_coproduct(f, &dec)?;
            let rep = z_vector(f, &cop, p)?;
            let morph = cop.pi_is_morphism();
            let result = json!({
                "index": s.entries(),
                "triples": dec.triples.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
                "rho": cop.rho_entries(),
                "v": render_point(&cop.special_point()),
                "Z": rep.z,
                "agreement_digits": rep.agreement_digits,
                "center_agreement": rep.center_agreement,
                "exp_agreement": rep.exp_agreement,
                "pi_morphism": morph,
            });
            if let Some(path) = report {
                std::fs::write(path, to_json_text(&envelope("coproduct", g, field, &result, rep.passed && morph)))
                    .map_err(|e| Error::Invalid(format!("writing {}: {e}", path.display())))?;
            }
            Outcome { text: z_text(&rep), passed: rep.passed && morph, result }
        }
        Command::Monomial { factors, relation } => {
            let ks = factors.iter().map(|x| index_of(x)).collect::<Result<Vec<_>>>()?;
            let rel = match relation {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("reading {}: {e}", path.display())))?;
                    let terms: Vec<RelationJson> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                    Some(
                        terms
                            .into_iter()
                            .map(|t| Ok(RelationTerm { coef: t.coef, index: Index::new(t.index)? }))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                None => None,
            };
            let rep = monomial_module(f, &ks, rel, p)?;
            Outcome {
                text: format!("weight {}, dim {}, product coordinate agreement {}", rep.weight, rep.dim, rep.product_agreement),
                passed: rep.passed,
                result: to_value(&rep),
            }
        }
        Command::Verify { suite, max_s, max_d, max_weight, max_depth, traces, seed } => {
            let chosen: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                suite
                    .split(',')
                    .map(|n| Suite::parse(n.trim()).ok_or_else(|| Error::Parse(format!("unknown suite {n:?}"))))
                    .collect::<Result<_>>()?
            };
            let mut cfg = SuiteConfig { prec: p, max_s: *max_s, max_d: *max_d, max_weight: *max_weight, max_depth: *max_depth, traces: *traces, seed: *seed, budget_bits: g.budget.max(24.0), ..SuiteConfig::default() };
            if let Some(f) = field {
                cfg.fields = vec![f.clone()];
            }
            let reports: Vec<_> = chosen.iter().map(|s| suites::run(*s, &cfg)).collect();
            let passed = reports.iter().all(|r| r.passed);
            let mut text = String::new();
            for r in &reports {
                text.push_str(&format!("criterion {} [{}] {}\n", r.criterion, r.suite, if r.passed { "PASS" } else { "FAIL" }));
                for c in &r.checks {
                    text.push_str(&format!("  {} {}: {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail));
                }
            }
            Outcome { text: text.trim_end().to_string(), passed, result: to_value(&reports) }
        }
    })
}

fn rho_text(rho: &[crate::tmodule::EntryText]) -> String {
    let mut s = String::from("\nρ(t) nonzero entries:");
    for e in rho {
        s.push_str(&format!("\n  ({},{}) {}", e.row, e.col, e.value));
    }
    s
}

fn z_text(rep: &crate::coproduct::LogVectorReport) -> String {
    let mut s = String::new();
    for (c, v) in rep.z.iter().zip(&rep.values) {
        s.push_str(&format!("{}: {}  [{} digits]\n", c.label, v.render(6), c.agreement));
    }
    s.push_str(&format!("centre row {}, Exp(Z) vs v {}", rep.center_agreement, rep.exp_agreement));
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Mzv { .. } => "mzv",
        Command::Atpoly { .. } => "atpoly",
        Command::Hseries { .. } => "hseries",
        Command::Polylog { .. } => "polylog",
        Command::Powersum { .. } => "powersum",
        Command::Tmodule { .. } => "tmodule",
        Command::Logvec { .. } => "logvec",
        Command::Decompose { .. } => "decompose",
        Command::Coproduct { .. } => "coproduct",
        Command::Monomial { .. } => "monomial",
        Command::Verify { .. } => "verify",
    }
}

fn envelope(cmd: &str, g: &Global, field: Option<&Fq>, result: &Value, passed: bool) -> Value {
    // without a q-spec, verify covers q = 2 and 3 and everything else runs over F_2
    let f2 = Fq::from_q(2).unwrap();
    let shown = if field.is_none() && cmd != "verify" { Some(&f2) } else { field };
    json!({
        "schema": 1,
        "command": cmd,
        "field": field_header(shown),
        "precision": g.prec,
        "passed": passed,
        "result": result,
    })
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Parse, run and print; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if cli.global.threads > 0 {
        // a second initialization only fails if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global();
    }
    let field = match field_from(&cli.global) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("tmzv: {e}");
            return 2;
        }
    };
    match run_command(&cli.command, &cli.global, field.as_ref()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let text = match cli.global.format {
                Format::Json => to_json_text(&envelope(command_name(&cli.command), &cli.global, field.as_ref(), &out.result, out.passed)),
                Format::Text => format!("{}\n{}\n", out.text, if out.passed { "PASS" } else { "FAIL" }),
            };
            let _ = stdout.write_all(text.as_bytes());
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("tmzv {}: {e}", command_name(&cli.command));
            1
        }
    }
}
