//! JSON-in/JSON-out command-line front end.
//!
//! Results go to standard output (or `--out`); failures print
//! `{"error": code, "message": ...}` on standard error and exit with
//! 2 (not a unit / not invertible), 3 (precision, undecidable, cap) or
//! 4 (bad input or unsupported request).

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::glue::{
    bundle_from_matrix, cech_h1, formal_from_matrix, global_sections, random_laurent_transition,
    splitting_type, transition_of_triple, TransitionDatum,
};
use crate::json::*;
use crate::laurent::{
    classify_series_unit, invert_in_b_certified, invert_truncated_unit, BFraction, LaurentPoly,
};
use crate::matfact::{
    cartan_type, coset_equal, factorize_gdelta, membership_gl_power_series, random_gl, RandomGl,
    RandomKind,
};
use crate::matrix::{MatLaurent, SeriesMatrix};
use crate::ring::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Invert a unit of B, or a truncated series to --prec
    Invert,
    /// Classify a ring element, or decide whether a series is a unit
    Classify,
    /// Factor γ = g·δ at --prec
    Factorize,
    /// Decide membership in GL_n(R[[z]])
    Membership,
    /// Cartan type of a polynomial matrix over a field
    Cartan,
    /// Compare left cosets of {"a": .., "b": ..}
    Coset,
    /// Bundle triple from a transition matrix
    Glue,
    /// Transition matrix of a triple
    Transition,
    /// Factor-then-glue a series matrix at --prec
    Formal,
    /// Global sections of E(--m)
    Sections,
    /// dim H¹ of E(--m)
    H1,
    /// Splitting type over a field
    Splitting,
    /// Seeded random fixture of --kind
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    PowerSeriesUnit,
    BMatrix,
    Product,
    LaurentTransition,
}

#[derive(Debug, Parser)]
#[command(
    name = "bundle-glue",
    version,
    about = "Laurent-series matrices and bundles on P¹"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Coefficient ring, e.g. '{"type":"Fp","p":5}'
    #[arg(long)]
    pub ring: String,
    /// Read the input document from this file
    #[arg(long, conflicts_with = "json")]
    pub input: Option<PathBuf>,
    /// Inline input document (standard input if neither is given)
    #[arg(long)]
    pub json: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub prec: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the result here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Twist for sections and h1
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i64,
    /// Rank for random
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Kind::Product)]
    pub kind: Kind,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema(format!("{what} is not valid JSON: {e}")))
}

fn read_input(args: &Args) -> Result<Value> {
    let text = match (&args.input, &args.json) {
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| schema(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| schema(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    parse_json(&text, "input")
}

fn need_prec(args: &Args) -> Result<i64> {
    args.prec
        .ok_or_else(|| schema(format!("{:?} needs --prec", args.command).to_lowercase()))
}

/// The matrix stored under `key` when `v` is an object, else `v` itself.
fn slot<'a>(v: &'a Value, key: &str) -> &'a Value {
    match v {
        Value::Object(o) => o.get(key).unwrap_or(v),
        _ => v,
    }
}

/// Series view that keeps stored precisions; exact data is expanded to `prec`.
fn series_input(m: &MatLaurent, prec: i64) -> SeriesMatrix {
    match m {
        MatLaurent::Series(s) => s.clone(),
        other => other.to_series(prec),
    }
}

fn read_transition(ring: &Ring, v: &Value) -> Result<TransitionDatum> {
    if v.get("g").is_some() {
        return Ok(transition_of_triple(&parse_triple(ring, v)?));
    }
    let g = parse_matrix(ring, v)?
        .to_fraction()
        .ok_or_else(|| schema("a transition matrix must be exact"))?;
    TransitionDatum::new(g)
}

fn invert(ring: &Ring, v: &Value, prec: Option<i64>) -> Result<Value> {
    let f = match v {
        Value::Object(o) if o.contains_key("num") => parse_fraction(ring, v)?,
        Value::Object(_) => {
            let s = parse_series(ring, v)?;
            if !s.is_exact() {
                let p = prec.ok_or_else(|| schema("a truncated series needs --prec"))?;
                return Ok(json!({"inverse": series_to_json(&invert_truncated_unit(&s, p)?)}));
            }
            BFraction::from_poly(s.to_poly())
        }
        _ => BFraction::from_poly(LaurentPoly::constant(ring, parse_elem(ring, v)?)),
    };
    let (inv, cert) = invert_in_b_certified(&f)?;
    Ok(json!({"inverse": fraction_to_json(&inv), "certificate": certificate_to_json(&cert)}))
}

fn random(ring: &Ring, args: &Args) -> Result<Value> {
    let seed = args.seed.ok_or_else(|| schema("random needs --seed"))?;
    let prec = args.prec.unwrap_or(16);
    if args.n == 0 {
        return Err(schema("--n must be positive"));
    }
    let kind = match args.kind {
        Kind::PowerSeriesUnit => RandomKind::PowerSeriesUnit,
        Kind::BMatrix => RandomKind::BMatrix,
        Kind::Product => RandomKind::Product,
        Kind::LaurentTransition => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            return Ok(fraction_matrix_to_json(&random_laurent_transition(
                ring, args.n, &mut rng,
            )));
        }
    };
    Ok(match random_gl(ring, args.n, kind, seed, prec)? {
        RandomGl::PowerSeriesUnit(m) => series_matrix_to_json(&m),
        RandomGl::BMatrix(m) => fraction_matrix_to_json(&m),
        RandomGl::Product { gamma, g0, delta0 } => json!({
            "gamma": series_matrix_to_json(&gamma),
            "g0": fraction_matrix_to_json(&g0),
            "delta0": series_matrix_to_json(&delta0),
        }),
    })
}

/// Runs one request and returns its result document.
pub fn execute(args: &Args) -> Result<Value> {
    let ring = parse_ring(&parse_json(&args.ring, "--ring")?)?;
    if args.command == Command::Random {
        return random(&ring, args);
    }
    let input = read_input(args)?;
    match args.command {
        Command::Invert => invert(&ring, &input, args.prec),
        Command::Classify => match &input {
            Value::Object(_) => Ok(unit_class_to_json(&classify_series_unit(&parse_series(
                &ring, &input,
            )?)?)),
            _ => Ok(classification_to_json(
                &ring.classify(&parse_elem(&ring, &input)?),
            )),
        },
        Command::Factorize => {
            let prec = need_prec(args)?;
            let gamma = series_input(&parse_matrix(&ring, &input)?, prec);
            Ok(factorization_to_json(&factorize_gdelta(&gamma, prec)?))
        }
        Command::Membership => {
            let m = parse_matrix(&ring, slot(&input, "delta"))?;
            let verdict = match m.to_fraction() {
                Some(f) => membership_gl_power_series(&f),
                None => membership_gl_power_series(&m.to_series(need_prec(args)?)),
            };
            Ok(membership_to_json(&verdict))
        }
        Command::Cartan => {
            let f = parse_matrix(&ring, &input)?
                .to_fraction()
                .ok_or_else(|| schema("cartan needs exact polynomial entries"))?;
            if f.entries().iter().any(|e| e.as_poly().is_none()) {
                return Err(schema("cartan needs polynomial entries, not fractions"));
            }
            let p = f.map(|e| e.as_poly().expect("checked").clone());
            Ok(json!(cartan_type(&p)?.0))
        }
        Command::Coset => {
            let read = |key: &str| -> Result<MatLaurent> {
                let v = input.get(key).ok_or_else(|| {
                    schema(format!(
                        "coset needs an object with \"a\" and \"b\", missing \"{key}\""
                    ))
                })?;
                parse_matrix(&ring, slot(v, "g"))
            };
            let (a, b) = (read("a")?, read("b")?);
            let prec = match args.prec {
                Some(p) => p,
                None if a.is_exact() && b.is_exact() => 0,
                None => return need_prec(args).map(|_| Value::Null),
            };
            Ok(coset_to_json(&coset_equal(&a, &b, prec)?))
        }
        Command::Glue => {
            let triple = if input.get("g").is_some() {
                parse_triple(&ring, &input)?
            } else {
                bundle_from_matrix(&read_transition(&ring, &input)?.matrix().clone())?
            };
            Ok(triple_to_json(&triple))
        }
        Command::Transition => Ok(transition_to_json(&read_transition(&ring, &input)?)),
        Command::Formal => {
            let prec = need_prec(args)?;
            let gamma = series_input(&parse_matrix(&ring, &input)?, prec);
            Ok(triple_to_json(&formal_from_matrix(&gamma, prec)?))
        }
        Command::Sections => Ok(sections_to_json(&global_sections(
            &read_transition(&ring, &input)?,
            args.m,
        )?)),
        Command::H1 => Ok(json!(cech_h1(&read_transition(&ring, &input)?, args.m)?)),
        Command::Splitting => Ok(json!(splitting_type(&read_transition(&ring, &input)?)?.0)),
        Command::Random => unreachable!("handled above"),
    }
}

fn emit(args: &Args, doc: &Value) -> Result<()> {
    let mut text = doc.to_string();
    text.push('\n');
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| schema(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| schema(format!("cannot write standard output: {e}"))),
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("{}", error_to_json(e));
    e.exit_code()
}

/// Parses arguments, runs the request and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => return fail(&schema(e.to_string().trim_end().to_string())),
    };
    match execute(&args).and_then(|doc| emit(&args, &doc)) {
        Ok(()) => 0,
        Err(e) => fail(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(argv: &[&str]) -> Result<Value> {
        let args = Args::try_parse_from(std::iter::once("bundle-glue").chain(argv.iter().copied()))
            .unwrap();
        execute(&args)
    }

    const F5: &str = r#"{"type":"Fp","p":5}"#;

    #[test]
    fn factorize_tail() {
        let gamma = json!([[{"val": -1, "coeffs": vec![1; 17], "prec": 16}]]).to_string();
        let out = exec(&["factorize", "--ring", F5, "--prec", "16", "--json", &gamma]).unwrap();
        assert_eq!(
            out["g"],
            json!([[{"val": -1, "coeffs": [1, 1], "prec": null}]])
        );
    }

    #[test]
    fn invert_nilpotent_fails() {
        let ring = r#"{"type":"dual","base":{"type":"Fp","p":2},"k":2}"#;
        let e = exec(&["invert", "--ring", ring, "--json", "[0,1]"]).unwrap_err();
        assert_eq!((e.code(), e.exit_code()), ("not_a_unit", 2));
    }

    #[test]
    fn splitting_of_o2() {
        let g = json!([[{"val": -2, "coeffs": [1]}]]).to_string();
        assert_eq!(
            exec(&["splitting", "--ring", F5, "--json", &g]).unwrap(),
            json!([2])
        );
    }

    #[test]
    fn missing_seed_and_prec() {
        assert_eq!(exec(&["random", "--ring", F5]).unwrap_err().exit_code(), 4);
        let gamma = json!([[{"val": 0, "coeffs": [1], "prec": 4}]]).to_string();
        assert_eq!(
            exec(&["factorize", "--ring", F5, "--json", &gamma])
                .unwrap_err()
                .exit_code(),
            4
        );
    }

    #[test]
    fn factorization_feeds_membership_and_glue() {
        let gamma = json!([[{"val": -1, "coeffs": vec![1; 11], "prec": 10}]]).to_string();
        let f = exec(&["factorize", "--ring", F5, "--prec", "10", "--json", &gamma])
            .unwrap()
            .to_string();
        let m = exec(&["membership", "--ring", F5, "--prec", "10", "--json", &f]).unwrap();
        assert_eq!(m["verdict"], json!("yes"));
        let t = exec(&["glue", "--ring", F5, "--json", &f]).unwrap();
        assert_eq!(t["n"], json!(1));
        assert!(t["delta"].is_array());
        let back = exec(&["transition", "--ring", F5, "--json", &t.to_string()]).unwrap();
        assert_eq!(back["g"], t["g"]);
    }
}
