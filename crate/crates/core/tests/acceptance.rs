//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use slp_core::cli::{IdealFile, Selector};
use slp_core::coxeter::{h4_coinvariant_ideal, monomial_ci_ideal, type_a_coinvariant_ideal};
use slp_core::field::FieldSpec;
use slp_core::groebner::{buchberger, monomials_of_degree};
use slp_core::lefschetz::{
    brute_force_verdict, check_candidate, check_slp_candidate, combinatorial_rank,
    CandidateElement, LefschetzError, Mode, Quotient, Strategy,
};
use slp_core::poly::{Polynomial, RingContext, TermOrder};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn slp(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_slp"))
        .args(args)
        .output()
        .expect("slp runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (
        out.status.code().unwrap_or(-1),
        json,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Coefficients of `prod_d (1 + t + ... + t^{d-1})`.
fn product_of_geometric_sums(degrees: &[usize]) -> Vec<u64> {
    let mut poly = vec![1u64];
    for &d in degrees {
        let mut next = vec![0u64; poly.len() + d - 1];
        for (i, &a) in poly.iter().enumerate() {
            for slot in &mut next[i..i + d] {
                *slot += a;
            }
        }
        poly = next;
    }
    poly
}

fn h4_main_run() -> Outcome {
    let start = Instant::now();
    let (code, report, stderr) = slp(&["check", "--type", "h4", "--prime", "13"]);
    let elapsed = start.elapsed();
    ensure(code == 0, format!("exit code {code}: {}", stderr.trim()))?;
    let hilbert: Vec<u64> = report["hilbert"]
        .as_array()
        .ok_or("no Hilbert function in report")?
        .iter()
        .map(|v| v.as_u64().unwrap_or(u64::MAX))
        .collect();
    ensure(
        hilbert.len() == 61,
        format!("Hilbert function has length {}", hilbert.len()),
    )?;
    ensure(
        hilbert[0] == 1 && hilbert[60] == 1,
        "h_0 or h_60 differs from 1",
    )?;
    ensure(
        hilbert.iter().eq(hilbert.iter().rev()),
        "Hilbert function not symmetric",
    )?;
    ensure(report["symmetric"] == true, "report does not flag symmetry")?;
    let total: u64 = hilbert.iter().sum();
    ensure(total == 14400, format!("sum of h_i is {total}"))?;
    ensure(report["socle"] == 60, "socle degree is not 60")?;
    let checks = report["checks"].as_array().ok_or("no checks")?;
    ensure(
        checks.len() == 30,
        format!("{} degree checks", checks.len()),
    )?;
    for (i, c) in checks.iter().enumerate() {
        ensure(
            c["i"] == i as u64 && c["s"] == 60 - 2 * i as u64,
            format!("check {i} is for (i, s) = ({}, {})", c["i"], c["s"]),
        )?;
        ensure(
            c["pass"] == true,
            format!("l^{} S_{i} != S_{}", 60 - 2 * i, 60 - i),
        )?;
    }
    ensure(
        elapsed < Duration::from_secs(600),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("30/30 set equalities, sum 14400, {elapsed:.2?}"))
}

fn h4_hilbert_oracle() -> Outcome {
    let expected = product_of_geometric_sums(&[2, 12, 20, 30]);
    let k = FieldSpec::golden(13).map_err(|e| e.to_string())?;
    let spec = h4_coinvariant_ideal(k).map_err(|e| e.to_string())?;
    let gb = buchberger(&spec.generators, &spec.ctx).map_err(|e| e.to_string())?;
    let basis = gb.standard_monomials(None).map_err(|e| e.to_string())?;
    let got = basis.hilbert_function().values;
    ensure(
        got == expected,
        format!("Hilbert function {got:?} differs from {expected:?}"),
    )?;
    Ok("61 coefficients match the product formula".into())
}

fn random_form(rng: &mut ChaCha8Rng, ctx: &Arc<RingContext>, d: u32) -> Polynomial {
    let k = ctx.field();
    let terms: Vec<_> = monomials_of_degree(ctx.nvars(), d, ctx.order())
        .into_iter()
        .map(|m| (k.from_int(rng.gen_range(0..13)), m))
        .collect();
    Polynomial::from_terms(ctx, terms).expect("valid terms")
}

fn dual_path_suite() -> Outcome {
    let start = Instant::now();
    let ctx = RingContext::new(
        FieldSpec::prime(13).expect("prime"),
        &["x", "y", "z"],
        TermOrder::Grevlex,
    )
    .expect("ring");
    let z = Polynomial::var(&ctx, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1e5c);
    let (mut ideals, mut pairs, mut discrepancies, mut skipped) = (0, 0, 0, 0);
    while ideals < 60 {
        let count = rng.gen_range(3..=4);
        let gens: Vec<Polynomial> = (0..count)
            .map(|_| {
                let d = rng.gen_range(2..=4);
                random_form(&mut rng, &ctx, d)
            })
            .filter(|g| !g.is_zero())
            .collect();
        let q = match Quotient::new(&gens, &ctx) {
            Ok(q) => q,
            Err(LefschetzError::NotArtinian(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        ideals += 1;
        let c = q.basis().socle_degree().unwrap_or(0);
        for i in 0..=c {
            for s in 1..=c - i {
                pairs += 1;
                let lin = q.power_rank(&z, i, s).map_err(|e| e.to_string())?;
                let comb = combinatorial_rank(q.basis(), 2, i, s).map_err(|e| e.to_string())?;
                if lin != comb {
                    discrepancies += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(discrepancies == 0, format!("{discrepancies} discrepancies"))?;
    ensure(
        elapsed < Duration::from_secs(60),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "{ideals} ideals ({skipped} non-Artinian draws skipped), {pairs} (i, s) pairs, 0 discrepancies, {elapsed:.2?}"
    ))
}

fn negative_element() -> Outcome {
    let spec = type_a_coinvariant_ideal(3, FieldSpec::prime(7).expect("prime"))
        .map_err(|e| e.to_string())?;
    let q = Quotient::new(&spec.generators, &spec.ctx).map_err(|e| e.to_string())?;
    let verdict = |form: &str| -> Result<(bool, bool), String> {
        let l = Polynomial::parse(&spec.ctx, form).map_err(|e| e.to_string())?;
        let cand = CandidateElement::new(l.clone()).map_err(|e| e.to_string())?;
        let fast = check_slp_candidate(&spec.generators, &cand).map_err(|e| e.to_string())?;
        let slow = brute_force_verdict(&q, &l, Mode::Strong).map_err(|e| e.to_string())?;
        Ok((fast.verdict, slow))
    };
    let bad = verdict("x3")?;
    ensure(
        bad == (false, false),
        format!("x3: criterion/oracle = {bad:?}"),
    )?;
    let good = verdict("x1 + 2*x2 + 3*x3")?;
    ensure(
        good == (true, true),
        format!("x1 + 2*x2 + 3*x3: criterion/oracle = {good:?}"),
    )?;
    Ok("x3 FALSE, x1 + 2*x2 + 3*x3 TRUE, both confirmed by the oracle".into())
}

fn monomial_complete_intersections() -> Outcome {
    let k = FieldSpec::prime(13).expect("prime");
    let cubes = monomial_ci_ideal(&[3, 3], k).map_err(|e| e.to_string())?;
    let l = Polynomial::parse(&cubes.ctx, "x1 + x2").map_err(|e| e.to_string())?;
    let cand = CandidateElement::new(l.clone()).map_err(|e| e.to_string())?;
    let r = check_slp_candidate(&cubes.generators, &cand).map_err(|e| e.to_string())?;
    let q = Quotient::new(&cubes.generators, &cubes.ctx).map_err(|e| e.to_string())?;
    let oracle = brute_force_verdict(&q, &l, Mode::Strong).map_err(|e| e.to_string())?;
    ensure(
        r.verdict && oracle,
        format!("<x^3, y^3>, x + y: {} / {oracle}", r.verdict),
    )?;

    let squares = monomial_ci_ideal(&[2, 2], k).map_err(|e| e.to_string())?;
    let y = Polynomial::var(&squares.ctx, 1);
    let cand = CandidateElement::new(y.clone()).map_err(|e| e.to_string())?;
    let strong = check_candidate(&squares.generators, &cand, Mode::Strong, Strategy::Auto)
        .map_err(|e| e.to_string())?;
    let weak = check_candidate(&squares.generators, &cand, Mode::Weak, Strategy::Auto)
        .map_err(|e| e.to_string())?;
    let q = Quotient::new(&squares.generators, &squares.ctx).map_err(|e| e.to_string())?;
    ensure(!strong.verdict, "<x^2, y^2>, y passes strong")?;
    ensure(
        strong.first_failure.map(|(i, _)| i) == Some(0),
        format!("first strong failure at {:?}", strong.first_failure),
    )?;
    ensure(weak.verdict, "<x^2, y^2>, y fails weak")?;
    ensure(
        q.power_rank(&y, 0, 2).map_err(|e| e.to_string())? == 0,
        "oracle: y^2 nonzero in the quotient",
    )?;
    ensure(
        !brute_force_verdict(&q, &y, Mode::Strong).map_err(|e| e.to_string())?
            && brute_force_verdict(&q, &y, Mode::Weak).map_err(|e| e.to_string())?,
        "oracle disagrees on <x^2, y^2>",
    )?;
    Ok(
        "<x^3, y^3> with x + y strong; <x^2, y^2> with y weak but not strong (fails at i = 0)"
            .into(),
    )
}

fn strip_timings(mut v: Value) -> Value {
    match &mut v {
        Value::Array(items) => {
            for item in items {
                *item = strip_timings(item.take());
            }
        }
        Value::Object(map) => {
            map.remove("timings");
        }
        _ => {}
    }
    v
}

fn determinism_and_round_trip() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["check", "--type", "h4", "--prime", "67"],
        &[
            "check",
            "--type",
            "a4",
            "--candidate",
            "x1 + 2*x2 + 3*x3 + 4*x4",
            "--prime",
            "11",
        ],
        &["check", "--type", "a3", "--candidate", "x3", "--prime", "7"],
        &[
            "check",
            "--type",
            "ci:2,3,4",
            "--candidate",
            "x1 + x2 + x3",
            "--prime",
            "13",
            "--prime",
            "17",
        ],
    ];
    for args in runs {
        let (c1, a, _) = slp(args);
        let (c2, b, _) = slp(args);
        ensure(a != Value::Null, format!("{args:?}: no JSON"))?;
        ensure(c1 == c2, format!("{args:?}: exit codes {c1} vs {c2}"))?;
        ensure(
            strip_timings(a) == strip_timings(b),
            format!("{args:?}: reports differ beyond timings"),
        )?;
    }
    let mut files = 0;
    for sel in ["h4", "h4-natural", "a4", "ci:2,3,5"] {
        let file = sel
            .parse::<Selector>()
            .map_err(|e| e.to_string())?
            .build(23)
            .map_err(|e| e.to_string())?;
        let text = file.to_string();
        let back = IdealFile::parse(&text).map_err(|e| e.to_string())?;
        ensure(
            back == file && back.to_string() == text,
            format!("{sel}: round trip changed the file"),
        )?;
        files += 1;
    }
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let canonical = IdealFile::parse(&text)
            .map_err(|e| e.to_string())?
            .to_string();
        let again = IdealFile::parse(&canonical)
            .map_err(|e| e.to_string())?
            .to_string();
        ensure(
            again == canonical,
            format!("{}: print-parse-print differs", path.display()),
        )?;
        files += 1;
    }
    Ok(format!(
        "{} runs reproduced, {files} ideal files round-trip",
        runs.len()
    ))
}

/// Same run as the main criterion at further primes; informational only.
fn multi_prime_note() -> String {
    [13u64, 23, 67, 97]
        .iter()
        .map(|p| {
            let p = p.to_string();
            let (code, r, _) = slp(&["check", "--type", "h4", "--prime", &p]);
            match code {
                2 => format!("p={p}: error {}", r["error"]["kind"]),
                _ => format!(
                    "p={p}: exit {code}, dim {}, {}/30",
                    r["dimension"],
                    r["checks"]
                        .as_array()
                        .map_or(0, |c| c.iter().filter(|c| c["pass"] == true).count())
                ),
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn main() {
    let criteria: [Criterion; 6] = [
        (
            "H4 over GF(13^2): check exits 0 with the full certificate",
            h4_main_run,
        ),
        (
            "H4 Hilbert function equals prod (1 + ... + t^(d-1))",
            h4_hilbert_oracle,
        ),
        (
            "last-variable ranks equal linear-algebra ranks on random ideals",
            dual_path_suite,
        ),
        (
            "type A: x3 rejected, x1 + 2x2 + 3x3 accepted",
            negative_element,
        ),
        (
            "monomial complete intersections",
            monomial_complete_intersections,
        ),
        (
            "determinism and ideal-file round trip",
            determinism_and_round_trip,
        ),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!("note: H4 at other primes: {}", multi_prime_note());
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
