//! Command-line front end for the superline cohomology workbench.
//!
//! Subcommands: `classify`, `dim`, `table`, `basis`, `verify`, `bracket`.
//! Rationals cross the interface as `p/q` strings; output is deterministic
//! for a fixed invocation, independent of `--jobs`.
//!
//! Exit codes: 0 ok, 1 internal error, 2 inapplicable parameters,
//! 3 non-stabilized result under `--strict`.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use superline::cohomology::{dim_h1, AlgebraMode, H1Options, H1Record};
use superline::families::{
    classical_cocycle, classify, family_basis, gbinom, invariant_trilinear, ClassicalFamily,
    ClassicalSpec,
};
use superline::{contact_bracket, Error, Gen, Rat, SuperFn};

#[derive(Parser)]
#[command(
    name = "superline",
    version,
    about = "Exact osp(1|2) cohomology workbench on the superline"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Args, Clone)]
struct TripleArgs {
    /// First weight, as `p/q` or an integer string.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Second weight.
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
    /// Target weight.
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
}

#[derive(Args, Clone)]
struct EngineArgs {
    /// Truncation bound on derivative order.
    #[arg(long)]
    order: Option<usize>,
    /// Truncation bound on coefficient x-degree.
    #[arg(long)]
    xdeg: Option<usize>,
    /// Compute for sl(2) on the theta-free classical module.
    #[arg(long)]
    classical: bool,
    /// Compute the sl(2)-relative cohomology of osp(1|2).
    #[arg(long)]
    relative: bool,
    /// Run every grading block instead of only weight zero.
    #[arg(long)]
    full: bool,
    /// Fail (exit 3) when the truncation did not stabilize.
    #[arg(long)]
    strict: bool,
}

impl EngineArgs {
    fn options(&self, with_basis: bool) -> H1Options {
        H1Options {
            mode: if self.classical {
                AlgebraMode::Sl2
            } else {
                AlgebraMode::Osp
            },
            relative: self.relative,
            order: self.order,
            xdeg: self.xdeg,
            full_weight_sweep: self.full,
            with_basis,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Resonance classification of a weight triple.
    Classify {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Dimension of the first cohomology at a triple.
    Dim {
        #[command(flatten)]
        triple: TripleArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Dimension sweep over a grid of triples; one row per triple in
    /// lexicographic order.
    Table {
        /// Range `a..b` of values of 2(mu - lambda - nu), inclusive.
        #[arg(long, default_value = "0..4")]
        delta_range: String,
        /// lambda runs over -s/2 for s in 0..=s_max.
        #[arg(long, default_value_t = 2)]
        s_max: u32,
        /// nu runs over -t/2 for t in 0..=t_max.
        #[arg(long, default_value_t = 2)]
        t_max: u32,
        /// Worker threads; the output does not depend on this.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Dimension plus a serialized basis of verified cocycles.
    Basis {
        #[command(flatten)]
        triple: TripleArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Builds a cocycle family and verifies it.
    Verify {
        /// One of a1, a2, a4, b, c, d, c+d, trilinear, super.
        #[arg(long)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        t: Option<u32>,
    },
    /// Contact bracket of two superfunction expressions.
    Bracket { f: String, g: String },
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    s.parse().map_err(|e: String| Error::Parse(e))
}

fn parse_triple(t: &TripleArgs) -> Result<(Rat, Rat, Rat), Error> {
    Ok((
        parse_rat(&t.lambda)?,
        parse_rat(&t.nu)?,
        parse_rat(&t.mu)?,
    ))
}

fn classify_record(lambda: &Rat, nu: &Rat, mu: &Rat) -> Value {
    let c = classify(lambda, nu, mu);
    let mut obj = serde_json::Map::new();
    obj.insert("class".into(), json!(c.tag.as_str()));
    if let Some(k) = &c.k {
        obj.insert("k".into(), json!(k.to_string()));
    }
    if let Some(s) = c.s {
        obj.insert("s".into(), json!(s));
    }
    if let Some(t) = c.t {
        obj.insert("t".into(), json!(t));
    }
    Value::Object(obj)
}

fn dim_record_value(rec: &H1Record, with_basis: bool) -> Value {
    let mut v = serde_json::to_value(rec).expect("serializable record");
    if !with_basis {
        if let Some(o) = v.as_object_mut() {
            o.remove("basis");
        }
    }
    v
}

fn print_dim(rec: &H1Record, format: Format, with_basis: bool) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(&dim_record_value(rec, with_basis)).unwrap()
        ),
        Format::Tsv => println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            rec.lambda, rec.nu, rec.mu, rec.dim, rec.parity, rec.stabilized, rec.order, rec.xdeg
        ),
        Format::Pretty => {
            println!(
                "H^1 at (lambda, nu, mu) = ({}, {}, {})",
                rec.lambda, rec.nu, rec.mu
            );
            println!(
                "  dim = {}   parity = {}   stabilized = {}   truncation: order {}, xdeg {}",
                rec.dim, rec.parity, rec.stabilized, rec.order, rec.xdeg
            );
        }
    }
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Classify { triple, format } => {
            let (l, n, m) = parse_triple(&triple)?;
            match format {
                Format::Json => {
                    println!("{}", serde_json::to_string(&classify_record(&l, &n, &m)).unwrap())
                }
                Format::Tsv => {
                    let c = classify(&l, &n, &m);
                    println!(
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        l,
                        n,
                        m,
                        c.tag.as_str(),
                        c.s.map(|v| v.to_string()).unwrap_or_default(),
                        c.t.map(|v| v.to_string()).unwrap_or_default()
                    );
                }
                Format::Pretty => {
                    let c = classify(&l, &n, &m);
                    print!("({l}, {n}, {m}) is {}", c.tag.as_str());
                    if let Some(k) = &c.k {
                        print!(" with k = {k}");
                    }
                    if let (Some(s), Some(t)) = (c.s, c.t) {
                        print!(", s = {s}, t = {t}");
                    }
                    println!();
                }
            }
            Ok(0)
        }
        Cmd::Dim {
            triple,
            engine,
            format,
        } => {
            let (l, n, m) = parse_triple(&triple)?;
            let res = dim_h1(&l, &n, &m, &engine.options(false))?;
            print_dim(&res.to_record(), format, false);
            Ok(if engine.strict && !res.stabilized { 3 } else { 0 })
        }
        Cmd::Basis {
            triple,
            engine,
            format,
        } => {
            let (l, n, m) = parse_triple(&triple)?;
            let res = dim_h1(&l, &n, &m, &engine.options(true))?;
            print_dim(&res.to_record(), format, true);
            Ok(if engine.strict && !res.stabilized { 3 } else { 0 })
        }
        Cmd::Table {
            delta_range,
            s_max,
            t_max,
            jobs,
            engine,
            format,
        } => {
            let (a, b) = delta_range
                .split_once("..")
                .ok_or_else(|| Error::Parse(format!("bad range `{delta_range}`")))?;
            let a: i64 = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad range `{delta_range}`")))?;
            let b: i64 = b
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad range `{delta_range}`")))?;
            let mut triples = Vec::new();
            for s in 0..=s_max {
                for t in 0..=t_max {
                    for two_delta in a..=b {
                        let lambda = Rat::new(-(s as i64), 2);
                        let nu = Rat::new(-(t as i64), 2);
                        let mu = &(&lambda + &nu) + &Rat::new(two_delta, 2);
                        triples.push((lambda, nu, mu));
                    }
                }
            }
            triples.sort();
            triples.dedup();
            let opts = engine.options(false);
            let compute = |(l, n, m): &(Rat, Rat, Rat)| -> Result<H1Record, Error> {
                Ok(dim_h1(l, n, m, &opts)?.to_record())
            };
            let results: Vec<Result<H1Record, Error>> = if jobs > 1 {
                use rayon::prelude::*;
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| Error::Internal(e.to_string()))?;
                pool.install(|| triples.par_iter().map(compute).collect())
            } else {
                triples.iter().map(compute).collect()
            };
            let mut all_stable = true;
            let mut rows = Vec::new();
            for r in results {
                let rec = r?;
                all_stable &= rec.stabilized;
                rows.push(rec);
            }
            match format {
                Format::Json => {
                    let vals: Vec<Value> = rows
                        .iter()
                        .map(|rec| {
                            let mut v = dim_record_value(rec, false);
                            let c = classify(&rec.lambda, &rec.nu, &rec.mu);
                            if let Some(o) = v.as_object_mut() {
                                o.insert("class".into(), json!(c.tag.as_str()));
                            }
                            v
                        })
                        .collect();
                    println!("{}", serde_json::to_string(&vals).unwrap());
                }
                Format::Tsv | Format::Pretty => {
                    println!("lambda\tnu\tmu\tclass\tdim\tparity\tstabilized");
                    for rec in &rows {
                        let c = classify(&rec.lambda, &rec.nu, &rec.mu);
                        println!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            rec.lambda,
                            rec.nu,
                            rec.mu,
                            c.tag.as_str(),
                            rec.dim,
                            rec.parity,
                            rec.stabilized
                        );
                    }
                }
            }
            Ok(if engine.strict && !all_stable { 3 } else { 0 })
        }
        Cmd::Verify {
            family,
            lambda,
            nu,
            mu,
            k,
            s,
            t,
        } => verify_cmd(&family, lambda, nu, mu, k, s, t),
        Cmd::Bracket { f, g } => {
            let f: SuperFn = f.parse()?;
            let g: SuperFn = g.parse()?;
            println!("{}", contact_bracket(&f, &g));
            Ok(0)
        }
    }
}

fn verify_cmd(
    family: &str,
    lambda: Option<String>,
    nu: Option<String>,
    mu: Option<String>,
    k: Option<i64>,
    s: Option<u32>,
    t: Option<u32>,
) -> Result<u8, Error> {
    let need = |o: &Option<String>, name: &str| -> Result<Rat, Error> {
        o.as_deref()
            .ok_or_else(|| Error::Inapplicable(format!("--{name} is required")))
            .and_then(parse_rat)
    };
    match family {
        "a1" | "a2" | "a4" | "b" | "c" | "d" => {
            let fam = ClassicalFamily::parse(family).unwrap();
            let k = k.ok_or_else(|| Error::Inapplicable("--k is required".into()))?;
            // for b/c/d the weights are pinned by (s, t)
            let (l, n) = match fam {
                ClassicalFamily::A1 | ClassicalFamily::A2 => {
                    (need(&lambda, "lambda")?, need(&nu, "nu")?)
                }
                _ => {
                    let s = s.ok_or_else(|| Error::Inapplicable("--s is required".into()))?;
                    let t = t.ok_or_else(|| Error::Inapplicable("--t is required".into()))?;
                    (Rat::new(-(s as i64), 2), Rat::new(-(t as i64), 2))
                }
            };
            let spec = ClassicalSpec {
                family: fam,
                lambda: l,
                nu: n,
                k,
                s,
                t,
            };
            let c = classical_cocycle(&spec)?;
            println!("PASS: {family} at k={k} is a cocycle (delta1 = 0)");
            match superline::cohomology::is_trivial(&c)? {
                superline::cohomology::Triviality::NonTrivial => {
                    println!("PASS: {family} is not a coboundary");
                    Ok(0)
                }
                superline::cohomology::Triviality::Trivial { .. } => {
                    println!("FAIL: {family} is a coboundary");
                    Ok(1)
                }
            }
        }
        "c+d" => {
            let k = k.ok_or_else(|| Error::Inapplicable("--k is required".into()))?;
            let s = s.ok_or_else(|| Error::Inapplicable("--s is required".into()))?;
            let t = t.unwrap_or_else(|| (k - s as i64).max(0) as u32);
            if s as i64 + t as i64 != k {
                return Err(Error::Inapplicable(
                    "the c+d identity needs (lambda, nu) = (-s/2, -(k-s)/2)".into(),
                ));
            }
            let mk = |family| ClassicalSpec {
                family,
                lambda: Rat::new(-(s as i64), 2),
                nu: Rat::new(-(t as i64), 2),
                k,
                s: Some(s),
                t: Some(t),
            };
            let cc = classical_cocycle(&mk(ClassicalFamily::C))?;
            let dd = classical_cocycle(&mk(ClassicalFamily::D))?;
            let sum = cc.add(&dd)?;
            let ctx = sum.value(Gen::X).ctx.clone();
            let expect = superline::BilinOp::from_terms(
                ctx,
                (0..=(k + 1)).map(|i| {
                    (
                        superline::Key::classical(0, i as u32, (k + 1 - i) as u32),
                        gbinom(&Rat::from(k + 1), i),
                    )
                }),
            )?;
            if sum.value(Gen::X) == &expect {
                println!("PASS: (c+d)(X_h, f, g) = h' (f g)^({})", k + 1);
                Ok(0)
            } else {
                println!("FAIL: c+d does not match h' (f g)^({})", k + 1);
                Ok(1)
            }
        }
        "trilinear" => {
            let l = need(&lambda, "lambda")?;
            let n = need(&nu, "nu")?;
            let k = k.ok_or_else(|| Error::Inapplicable("--k is required".into()))? as usize;
            let sols = invariant_trilinear(&l, &n, k);
            println!(
                "solution space dimension {} at (lambda, nu, k) = ({l}, {n}, {k})",
                sols.len()
            );
            let mut ok = true;
            for (i, a) in sols.iter().enumerate() {
                let rec = a.satisfies_recurrence() && a.d_matches_c();
                println!(
                    "{}: basis element {i} {} the recurrence",
                    if rec { "PASS" } else { "FAIL" },
                    if rec { "satisfies" } else { "violates" }
                );
                ok &= rec;
            }
            Ok(if ok { 0 } else { 1 })
        }
        "super" => {
            let l = need(&lambda, "lambda")?;
            let n = need(&nu, "nu")?;
            let m = mu
                .as_deref()
                .ok_or_else(|| Error::Inapplicable("--mu is required".into()))
                .and_then(parse_rat)?;
            let fb = family_basis(&l, &n, &m)?;
            for note in &fb.notes {
                println!("NOTE: {note}");
            }
            let res = dim_h1(&l, &n, &m, &H1Options::default())?;
            for (label, c) in fb.labels.iter().zip(&fb.cocycles) {
                let cocycle = superline::cohomology::delta1(c)?.is_zero();
                println!(
                    "{}: {label} delta1 = 0",
                    if cocycle { "PASS" } else { "FAIL" }
                );
            }
            let count = if fb.cocycles.is_empty() {
                0
            } else {
                superline::cohomology::independent_mod_coboundaries(&fb.cocycles)?
            };
            let ok = count == res.dim;
            println!(
                "{}: {} independent classes match the engine dimension {} ({})",
                if ok { "PASS" } else { "FAIL" },
                count,
                res.dim,
                if fb.from_engine {
                    "engine basis"
                } else {
                    "printed families"
                }
            );
            Ok(if ok { 0 } else { 1 })
        }
        other => Err(Error::Inapplicable(format!("unknown family `{other}`"))),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(Error::Inapplicable(msg)) => {
            eprintln!("inapplicable parameters: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
