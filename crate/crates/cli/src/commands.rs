use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use clap::Subcommand;
use serde::Serialize;
use serde_json::{json, Value};

use unitaria::doublingff::DoublingModel;
use unitaria::eisenstein::{e2k_coefficients, eisenstein_numeric, g2k_coefficients, DirichletCharacter, EisensteinSpec};
use unitaria::error::{Error, Result};
use unitaria::exactarith::rational::{self, to_string};
use unitaria::exactarith::{bernoulli, zeta_even, zeta_neg, BigComplex, FieldElem, KMatrix, QuadField, Rational};
use unitaria::heckelfun::{
    algebraicity_ratio, degree_one_factors, doubling_dnv, euler_factor, hecke_tp, partial_l, petersson, rankin_selberg_d,
    satake_gl2, EulerCoeffs, EulerFactor, FormShape, Growth, QExp1, RatioInputs, SatakeData, SatakeJson,
};
use unitaria::hermspace::{congruence_diagonalize, signature, validate_pel, HermitianSpace, HermitianSpaceJson};
use unitaria::maass::verify_estar_relation;
use unitaria::qexp::{dual_lattice, enumerate_psd, matrix_json, HermLattice, LatticeJson};
use unitaria::symdomain::DomainPoint;

use crate::cache::{Cache, Lookup};
use crate::{Config, Outcome};

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bernoulli number B_n (B_1 = +1/2), or B_0..B_n with --upto.
    #[command(allow_negative_numbers = true)]
    Bernoulli {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        upto: bool,
    },
    /// zeta(1 - 2k) with --neg, or zeta(2k) as a rational multiple of pi^2k with --even.
    #[command(allow_negative_numbers = true)]
    Zeta {
        #[arg(long)]
        k: u32,
        #[arg(long, conflicts_with = "even")]
        neg: bool,
        #[arg(long)]
        even: bool,
    },
    /// q-expansion of G_2k (or E_2k with --normalized) up to q^bound.
    #[command(allow_negative_numbers = true)]
    G2k {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        normalized: bool,
    },
    /// Truncated lattice sum E(z, s) of weight lambda.
    #[command(allow_negative_numbers = true)]
    EisNum {
        #[arg(long)]
        weight: i64,
        #[arg(long, default_value_t = 1)]
        level: u64,
        /// Use the Legendre symbol mod the (prime) level as character.
        #[arg(long)]
        legendre: bool,
        #[arg(long, default_value = "0")]
        s_re: String,
        #[arg(long, default_value = "0")]
        s_im: String,
        #[arg(long)]
        z_re: String,
        #[arg(long)]
        z_im: String,
        #[arg(long, default_value_t = 200)]
        cutoff: u64,
    },
    /// T_p applied to a level-one form (delta, e<2k>, g<2k>).
    #[command(allow_negative_numbers = true)]
    Hecke {
        #[arg(long)]
        form: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 40)]
        bound: usize,
    },
    /// Satake parameters and Euler factor of a GL_2 eigenform at p.
    #[command(allow_negative_numbers = true)]
    Satake {
        #[arg(long)]
        ap: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: i64,
    },
    /// Partial Euler product prod_{p <= cutoff, p not in S} L_p(s).
    #[command(allow_negative_numbers = true)]
    Euler {
        /// JSON array of Satake records (one per prime).
        #[arg(long, conflicts_with = "trivial")]
        satake: Option<PathBuf>,
        /// All-ones degree-one data (the Riemann zeta function).
        #[arg(long)]
        trivial: bool,
        #[arg(long)]
        s: String,
        #[arg(long, default_value = "0")]
        s_im: String,
        #[arg(long)]
        cutoff: u64,
        /// Comma-separated excluded primes.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<u64>,
    },
    /// d_{n,v}(s) = prod_r L_v(2s + n - r, chi eta^r).
    #[command(allow_negative_numbers = true)]
    Dnv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: String,
        #[arg(long, default_value = "0")]
        s_im: String,
        /// Angle a of chi(w) = exp(2 pi i a).
        #[arg(long, default_value = "0")]
        chi: String,
        #[arg(long, default_value = "0")]
        eta: String,
        #[arg(long)]
        q: u64,
    },
    /// Rankin-Selberg sum D(s, f, g) with a tail bound.
    #[command(allow_negative_numbers = true)]
    Rankin {
        #[arg(long, default_value = "delta")]
        f: String,
        #[arg(long, default_value = "e4")]
        g: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        cutoff: usize,
    },
    /// Petersson product <f, g> over the standard fundamental domain.
    #[command(allow_negative_numbers = true)]
    Petersson {
        #[arg(long, default_value = "delta")]
        f: String,
        #[arg(long, default_value = "delta")]
        g: String,
        #[arg(long, default_value_t = 24)]
        nodes: usize,
    },
    /// D(m, f, g) / (pi^k <f, f>) with a rational reconstruction attempt.
    #[command(allow_negative_numbers = true)]
    Ratio {
        #[arg(long, default_value = "delta")]
        f: String,
        #[arg(long, default_value = "e4")]
        g: String,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 10_000)]
        cutoff: usize,
        #[arg(long, default_value_t = 24)]
        nodes: usize,
    },
    /// Compare E*_{lambda+2r}(z, -r) with the raised E*_lambda.
    #[command(allow_negative_numbers = true)]
    MsVerify {
        #[arg(long)]
        lambda: i64,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "0")]
        z_re: String,
        #[arg(long, default_value = "1")]
        z_im: String,
        #[arg(long, default_value_t = 400)]
        cutoff: u64,
    },
    /// Validate a unitary PEL datum and audit signatures of random spaces.
    #[command(allow_negative_numbers = true)]
    PelValidate {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 100)]
        triples: usize,
        #[arg(long, default_value_t = 50)]
        spaces: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Signature of a Hermitian space.
    #[command(allow_negative_numbers = true)]
    Signature {
        /// Hermitian-space JSON file.
        #[arg(long, conflicts_with = "diag")]
        space: Option<PathBuf>,
        /// Comma-separated rational diagonal.
        #[arg(long, value_delimiter = ',')]
        diag: Vec<String>,
        #[arg(long, default_value_t = 1)]
        d: u64,
    },
    /// Orbits of U x U on maximal isotropic subspaces of V + V over F_{q^2}.
    #[command(allow_negative_numbers = true)]
    DoublingOrbits {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u8,
    },
    /// Trace dual of a Hermitian lattice.
    #[command(allow_negative_numbers = true)]
    DualLattice {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Positive semidefinite points of a lattice with trace <= bound.
    #[command(allow_negative_numbers = true)]
    PsdEnum {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        bound: String,
    },
}

#[derive(Debug, clap::Args)]
pub struct LatticeArgs {
    /// Lattice JSON file.
    #[arg(long, conflicts_with = "preset")]
    lattice: Option<PathBuf>,
    /// `integral` (Hermitian matrices over the ring of integers) or `classical`.
    #[arg(long, default_value = "integral")]
    preset: String,
    #[arg(long, default_value_t = 1)]
    d: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bernoulli { .. } => "bernoulli",
            Command::Zeta { .. } => "zeta",
            Command::G2k { .. } => "g2k",
            Command::EisNum { .. } => "eis-num",
            Command::Hecke { .. } => "hecke",
            Command::Satake { .. } => "satake",
            Command::Euler { .. } => "euler",
            Command::Dnv { .. } => "dnv",
            Command::Rankin { .. } => "rankin",
            Command::Petersson { .. } => "petersson",
            Command::Ratio { .. } => "ratio",
            Command::MsVerify { .. } => "ms-verify",
            Command::PelValidate { .. } => "pel-validate",
            Command::Signature { .. } => "signature",
            Command::DoublingOrbits { .. } => "doubling-orbits",
            Command::DualLattice { .. } => "dual-lattice",
            Command::PsdEnum { .. } => "psd-enum",
        }
    }
}

/// Exact rational from `a/b`, an integer, or a finite decimal.
fn number(s: &str) -> Result<Rational> {
    let s = s.trim();
    match s.split_once('.') {
        Some((int_part, frac)) if !s.contains('/') => {
            let neg = int_part.starts_with('-');
            let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac);
            let den = format!("1{}", "0".repeat(frac.len()));
            let x = rational::parse(&format!("{digits}/{den}"))?;
            Ok(if neg { -x } else { x })
        }
        _ => rational::parse(s),
    }
}

fn complex(re: &str, im: &str, prec: u32) -> Result<BigComplex> {
    Ok(BigComplex::from_rationals(prec, &number(re)?, &number(im)?))
}

fn digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).floor() as usize
}

fn cpair(z: &BigComplex, prec: u32) -> Value {
    let d = Some(digits(prec));
    json!([z.re.to_string_radix(10, d), z.im.to_string_radix(10, d)])
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Runs `compute` through the cache when one is configured. The payload is
/// the command's result value.
fn cached(config: &Config, description: Value, warnings: &mut Vec<String>, compute: impl FnOnce() -> Result<Value>) -> Result<Value> {
    let Some(cache) = &config.cache else {
        return compute();
    };
    let key = Cache::key(&description);
    match cache.get(&key) {
        Lookup::Hit(payload) => {
            if let Ok(v) = serde_json::from_str(&payload) {
                return Ok(v);
            }
            warnings.push(format!("cache entry {key} does not parse; recomputed"));
        }
        Lookup::Corrupt(msg) => warnings.push(format!("{msg}; recomputed")),
        Lookup::Miss => {}
    }
    let v = compute()?;
    if let Err(e) = cache.put(&key, &v.to_string()) {
        warnings.push(format!("could not write cache entry {key}: {e}"));
    }
    Ok(v)
}

/// A named level-one form: `delta`, `e<2k>` (constant term 1) or `g<2k>`.
struct NamedForm {
    qexp: QExp1,
    shape: FormShape,
}

fn named_form(name: &str, bound: usize) -> Result<NamedForm> {
    let lower = name.to_ascii_lowercase();
    if lower == "delta" {
        return Ok(NamedForm {
            qexp: unitaria::heckelfun::delta_qexp(bound),
            shape: FormShape::CuspEigen { weight: 12 },
        });
    }
    let (kind, w) = lower.split_at(1);
    let weight: u32 = w.parse().map_err(|_| Error::Parse(format!("unknown form {name:?}")))?;
    if weight % 2 != 0 || weight < 4 {
        return Err(Error::Precondition(format!("weight {weight} must be even and at least 4")));
    }
    let (coeffs, scale) = match kind {
        "e" => {
            let c = e2k_coefficients(weight / 2, bound)?;
            let s = rational::to_f64(&c[1]);
            (c, s)
        }
        "g" => (g2k_coefficients(weight / 2, bound)?, 2.0),
        _ => return Err(Error::Parse(format!("unknown form {name:?}"))),
    };
    Ok(NamedForm { qexp: QExp1::new(weight as i64, 1, coeffs)?, shape: FormShape::Eisenstein { weight: weight as i64, scale } })
}

fn lattice(args: &LatticeArgs) -> Result<HermLattice> {
    if let Some(path) = &args.lattice {
        return read_json::<LatticeJson>(path)?.to_lattice();
    }
    match args.preset.as_str() {
        "integral" => Ok(HermLattice::integral_hermitian(QuadField::new(args.d)?, args.n)),
        "classical" => Ok(HermLattice::classical()),
        other => Err(Error::Parse(format!("unknown lattice preset {other:?}"))),
    }
}

fn euler_value(f: &EulerFactor, prec: u32) -> Value {
    match &f.coeffs {
        EulerCoeffs::Rational(c) => json!({"p": f.p, "q_v": f.q_v, "coefficients": c.iter().map(to_string).collect::<Vec<_>>()}),
        EulerCoeffs::Numeric(c) => json!({"p": f.p, "q_v": f.q_v, "coefficients": c.iter().map(|z| cpair(z, prec)).collect::<Vec<_>>()}),
    }
}

pub fn run(cmd: &Command, config: &Config) -> Result<Outcome> {
    let prec = config.precision;
    let mut warnings = Vec::new();
    let mut bounds = Value::Null;
    let (parameters, result) = match cmd {
        Command::Bernoulli { n, upto } => {
            let result = if *upto {
                json!((0..=*n).map(|i| to_string(&bernoulli(i))).collect::<Vec<_>>())
            } else {
                json!(to_string(&bernoulli(*n)))
            };
            (json!({"n": n, "upto": upto}), result)
        }
        Command::Zeta { k, neg, even } => {
            let result = if *even {
                let z = zeta_even(*k)?;
                json!({"coeff": to_string(&z.coeff), "pi_power": z.pi_power,
                       "numeric": z.to_float(prec).to_string_radix(10, Some(digits(prec)))})
            } else if *neg {
                json!(to_string(&zeta_neg(*k)?))
            } else {
                return Err(Error::Precondition("choose --neg or --even".into()));
            };
            (json!({"k": k, "neg": neg, "even": even}), result)
        }
        Command::G2k { k, bound, normalized } => {
            let params = json!({"k": k, "bound": bound, "normalized": normalized});
            let desc = json!({"command": "g2k", "schema": 1, "parameters": params});
            let result = cached(config, desc, &mut warnings, || {
                let c = if *normalized { e2k_coefficients(*k, *bound)? } else { g2k_coefficients(*k, *bound)? };
                Ok(json!({"weight": 2 * k, "coefficients": c.iter().map(to_string).collect::<Vec<_>>()}))
            })?;
            (params, result)
        }
        Command::EisNum { weight, level, legendre, s_re, s_im, z_re, z_im, cutoff } => {
            let character =
                if *legendre { DirichletCharacter::legendre(*level)? } else { DirichletCharacter::trivial(*level) };
            let s = complex(s_re, s_im, prec)?;
            let z = complex(z_re, z_im, prec)?;
            let spec = EisensteinSpec::new(*weight, *level, character, s)?;
            let r = eisenstein_numeric(&spec, &DomainPoint::upper_half_plane(z), *cutoff)?;
            bounds = json!({"tail_bound": r.tail_bound});
            (
                json!({"weight": weight, "level": level, "legendre": legendre, "s": [s_re, s_im], "z": [z_re, z_im], "cutoff": cutoff}),
                json!({"value": cpair(&r.value, prec), "extrapolated": cpair(&r.extrapolated, prec)}),
            )
        }
        Command::Hecke { form, p, bound } => {
            let f = named_form(form, bound * *p as usize)?.qexp;
            let t = hecke_tp(&f, *p)?;
            let coeffs: Vec<String> = t.coeffs.iter().map(to_string).collect();
            // Eigenvalue if T_p f is a multiple of f on the computed range.
            let lead = (0..=t.bound()).find(|&n| !num_traits_is_zero(f.coeff(n)));
            let eigenvalue = lead.and_then(|n| {
                let c = t.coeff(n) / f.coeff(n);
                (0..=t.bound()).all(|m| t.coeff(m) == &(f.coeff(m) * &c)).then(|| to_string(&c))
            });
            (json!({"form": form, "p": p, "bound": bound}), json!({"coefficients": coeffs, "eigenvalue": eigenvalue}))
        }
        Command::Satake { ap, p, k } => {
            let data = satake_gl2(&number(ap)?, *p, *k)?;
            let f = euler_factor(&data)?;
            let numeric: Vec<Value> = data.params.iter().map(|x| cpair(&x.to_complex(prec), prec)).collect();
            (
                json!({"ap": ap, "p": p, "k": k}),
                json!({"satake": to_value(&data.to_json()), "numeric": numeric, "euler_factor": euler_value(&f, prec)}),
            )
        }
        Command::Euler { satake, trivial, s, s_im, cutoff, exclude } => {
            let factors: BTreeMap<u64, EulerFactor> = match (satake, trivial) {
                (_, true) => degree_one_factors(*cutoff, &Rational::from_integer(1.into())),
                (Some(path), false) => {
                    let records: Vec<SatakeJson> = read_json(path)?;
                    records
                        .iter()
                        .map(|r| {
                            let d = SatakeData::from_json(r, prec)?;
                            Ok((d.p, euler_factor(&d)?))
                        })
                        .collect::<Result<_>>()?
                }
                (None, false) => return Err(Error::Precondition("give --satake FILE or --trivial".into())),
            };
            let excluded: BTreeSet<u64> = exclude.iter().copied().collect();
            let sv = complex(s, s_im, prec)?;
            let r = partial_l(&factors, &excluded, &sv, *cutoff)?;
            bounds = json!({"last_factor_deviation": r.last_factor_deviation});
            (
                json!({"s": [s, s_im], "cutoff": cutoff, "exclude": exclude, "trivial": trivial}),
                json!({"value": cpair(&r.value, prec), "primes_used": r.primes_used}),
            )
        }
        Command::Dnv { n, s, s_im, chi, eta, q } => {
            let sv = complex(s, s_im, prec)?;
            let d = doubling_dnv(*n, &sv, &number(chi)?, &number(eta)?, *q)?;
            (
                json!({"n": n, "s": [s, s_im], "chi": chi, "eta": eta, "q": q}),
                json!({"value": cpair(&d.value, prec), "terms": to_value(&d.terms)}),
            )
        }
        Command::Rankin { f, g, s, cutoff } => {
            let ff = named_form(f, *cutoff)?;
            let gg = named_form(g, *cutoff)?;
            let sv = complex(s, "0", prec)?;
            let growth = Growth::for_shapes(&ff.shape, &gg.shape);
            let r = rankin_selberg_d(&ff.qexp, &gg.qexp, &sv, *cutoff, Some(&growth))?;
            bounds = json!({"tail_bound": r.tail_bound, "growth": to_value(&growth)});
            (json!({"f": f, "g": g, "s": s, "cutoff": cutoff}), json!({"value": cpair(&r.value, prec)}))
        }
        Command::Petersson { f, g, nodes } => {
            let terms = unitaria::heckelfun::petersson_terms(prec);
            let ff = named_form(f, terms)?;
            let gg = named_form(g, terms)?;
            let p = petersson(&ff.qexp, &gg.qexp, *nodes, prec)?;
            bounds = json!({"quadrature_error": p.error_estimate});
            (
                json!({"f": f, "g": g, "nodes": nodes, "measure": "dx dy / y^2, not volume-normalized"}),
                json!({"value": cpair(&p.value, prec), "volume_normalized": cpair(&p.volume_normalized(), prec)}),
            )
        }
        Command::Ratio { f, g, m, cutoff, nodes } => {
            let ff = named_form(f, *cutoff)?;
            let gg = named_form(g, *cutoff)?;
            let growth = Growth::for_shapes(&ff.shape, &gg.shape);
            let r = algebraicity_ratio(&ff.qexp, &gg.qexp, *m, &RatioInputs { growth: &growth, cutoff: *cutoff, nodes: *nodes })?;
            bounds = json!({"relative_uncertainty": r.relative_uncertainty, "precision_agreement": r.precision_agreement});
            (json!({"f": f, "g": g, "m": m, "cutoff": cutoff, "nodes": nodes}), to_value(&r))
        }
        Command::MsVerify { lambda, r, z_re, z_im, cutoff } => {
            let z = complex(z_re, z_im, prec)?;
            let rep = verify_estar_relation(*lambda, *r, &z, prec, *cutoff)?;
            bounds = json!({"lhs_tail_bound": rep.lhs_tail_bound});
            (json!({"lambda": lambda, "r": r, "z": [z_re, z_im], "cutoff": cutoff}), to_value(&rep))
        }
        Command::PelValidate { d, triples, spaces, seed } => {
            let v = validate_pel(*d, *triples, *spaces, *seed)?;
            let mut result = to_value(&v);
            result["passed"] = json!(v.passed());
            (json!({"d": d, "triples": triples, "spaces": spaces, "seed": seed}), result)
        }
        Command::Signature { space, diag, d } => {
            let s = match space {
                Some(path) => read_json::<HermitianSpaceJson>(path)?.to_space()?,
                None => {
                    if diag.is_empty() {
                        return Err(Error::Precondition("give --space FILE or --diag".into()));
                    }
                    let k = QuadField::new(*d)?;
                    let entries = diag.iter().map(|x| Ok(k.from_rational(number(x)?))).collect::<Result<Vec<FieldElem>>>()?;
                    HermitianSpace::new(KMatrix::diagonal(k, &entries))?
                }
            };
            let sig = signature(&s)?;
            let diagonal: Vec<String> = congruence_diagonalize(&s)?.diagonal.iter().map(to_string).collect();
            (
                json!({"space": to_value(&HermitianSpaceJson::from_space(&s))}),
                json!({"a": sig.a, "b": sig.b, "n": sig.n(), "diagonalization": diagonal}),
            )
        }
        Command::DoublingOrbits { n, q } => {
            let model = DoublingModel::new(*n, *q, &config.budget)?;
            (json!({"n": n, "q": q, "budget": to_value(&config.budget)}), to_value(&model.report()))
        }
        Command::DualLattice { lattice: args } => {
            let l = lattice(args)?;
            let params = json!({"lattice": to_value(&LatticeJson::from_lattice(&l))});
            let desc = json!({"command": "dual-lattice", "schema": 1, "parameters": params});
            let result = cached(config, desc, &mut warnings, || {
                let dual = dual_lattice(&l)?;
                let double = dual_lattice(&dual)?;
                Ok(json!({"dual": to_value(&LatticeJson::from_lattice(&dual)), "double_dual_is_original": double.same_lattice(&l)}))
            })?;
            (params, result)
        }
        Command::PsdEnum { lattice: args, bound } => {
            let l = lattice(args)?;
            let t = number(bound)?;
            let params = json!({"lattice": to_value(&LatticeJson::from_lattice(&l)), "bound": to_string(&t)});
            let desc = json!({"command": "psd-enum", "schema": 1, "parameters": params});
            let cap = config.budget_points;
            let result = cached(config, desc, &mut warnings, || {
                let pts = enumerate_psd(&l, &t)?;
                if pts.len() > cap {
                    return Err(Error::Budget { needed: pts.len() as u128, cap: cap as u128 });
                }
                let points: Vec<Value> = pts
                    .iter()
                    .map(|h| json!({"matrix": matrix_json(h.matrix()), "trace": to_string(h.trace())}))
                    .collect();
                Ok(json!({"count": pts.len(), "points": points}))
            })?;
            (params, result)
        }
    };
    Ok(Outcome { parameters, result, bounds, warnings })
}

fn num_traits_is_zero(x: &Rational) -> bool {
    *x == Rational::from_integer(0.into())
}
