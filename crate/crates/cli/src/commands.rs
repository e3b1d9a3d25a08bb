use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::json;

use supercurve::congruence::{classify, table2_rows, CaseTwo, TableCase};
use supercurve::cover::{verify_cover, CoverCase, CoverSpec, LinExp};
use supercurve::criterion::{
    coefficient, hasse_witt_matrix, superspecial_predicted, QuinticParams,
};
use supercurve::field::is_prime;
use supercurve::oracle::{expand_power, plane_count, singular_points, PlaneModel};
use supercurve::pointcount::{count_points_with_threads, FamilyParams};
use supercurve::{ErrorKind, FieldElement, GaloisField};

use crate::cache::{Cache, RecordKey, ResultRecord};
use crate::{Cli, Coefficients, Command, Family, FieldChoice, OracleCommand};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_DEGENERATE: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

const QUINTIC: (u64, u64, u64) = (5, 3, 1);

/// Bad command-line input that never reached the library.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<supercurve::Error>() {
        return match e.kind() {
            ErrorKind::Degenerate => EXIT_DEGENERATE,
            ErrorKind::Invariant => EXIT_INVALID,
        };
    }
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_INVALID;
    }
    1
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Superspecial { p, coeffs, field } => superspecial(cli, *p, coeffs, *field),
        Command::Count {
            p,
            family,
            coeffs,
            q,
        } => count(cli, *p, *family, coeffs, *q),
        Command::Scan {
            pmin,
            pmax,
            family,
            only_predicted,
        } => scan(cli, *pmin, *pmax, *family, *only_predicted),
        Command::Classify { p, family } => classify_cmd(cli, *p, *family),
        Command::Table2 => table2(cli),
        Command::VerifyCover {
            family,
            case,
            perturb_z,
        } => verify(cli, *family, *case, *perturb_z),
        Command::Oracle(cmd) => oracle(cli, cmd),
    }
}

fn field_for(p: u64, choice: FieldChoice) -> Result<GaloisField> {
    Ok(match choice {
        FieldChoice::P => GaloisField::prime(p)?,
        FieldChoice::P2 => GaloisField::quadratic(p)?,
    })
}

fn parse_coeffs(f: &GaloisField, coeffs: &Coefficients) -> Result<(FieldElement, FieldElement)> {
    Ok((f.parse(&coeffs.s)?, f.parse(&coeffs.t)?))
}

fn field_name(f: &GaloisField) -> String {
    if f.order() == f.characteristic() {
        format!("F_{}", f.characteristic())
    } else {
        format!("F_{{{}^2}}", f.characteristic())
    }
}

fn curve_name((a, b, c): (u64, u64, u64)) -> String {
    let cross = if c == 1 {
        "x y".to_string()
    } else {
        format!("x^{c} y^{c}")
    };
    format!("s x^{a} + t y^{a} + z^{b} {cross}")
}

fn cache_path(cli: &Cli) -> Option<PathBuf> {
    cli.cache.clone().or_else(|| {
        std::env::var_os("SUPERCURVE_CACHE")
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

fn open_cache(cli: &Cli) -> Result<Option<Cache>> {
    cache_path(cli).map(|p| Cache::open(&p)).transpose()
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn key_for(params: &FamilyParams) -> RecordKey {
    RecordKey {
        p: params.p(),
        q: params.q(),
        abc: params.abc(),
        s: params.s().to_string(),
        t: params.t().to_string(),
    }
}

/// Count, and for the quintic also the Hasse–Witt verdict.
fn evaluate(params: &FamilyParams, threads: usize) -> Result<ResultRecord> {
    let report = count_points_with_threads(params, threads)?;
    let (a, b, c) = params.abc();
    let (verdict, predicted) = if (a, b, c) == QUINTIC {
        let hw = hasse_witt_matrix(&QuinticParams::new(params.field(), params.s(), params.t())?)?;
        (
            Some(hw.superspecial),
            Some(superspecial_predicted(params.p())),
        )
    } else {
        (None, None)
    };
    Ok(ResultRecord {
        p: report.p,
        q: report.q,
        a,
        b,
        c,
        s: params.s().to_string(),
        t: params.t().to_string(),
        genus: report.genus,
        count: report.count,
        hw_lower: report.bounds.lower(),
        hw_upper: report.bounds.upper(),
        status: report.status.to_string(),
        superspecial_verdict: verdict,
        superspecial_predicted: predicted,
        timestamp: now(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn superspecial(cli: &Cli, p: u64, coeffs: &Coefficients, choice: FieldChoice) -> Result<u8> {
    let f = field_for(p, choice)?;
    let (s, t) = parse_coeffs(&f, coeffs)?;
    let report = hasse_witt_matrix(&QuinticParams::new(&f, s, t)?)?;
    let predicted = superspecial_predicted(p);
    if cli.json {
        let matrix: Vec<Vec<String>> = report
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| e.to_string()).collect())
            .collect();
        let monomials: Vec<Vec<String>> = report
            .monomials
            .rows()
            .iter()
            .map(|row| row.iter().map(|m| m.to_string()).collect())
            .collect();
        print_json(&json!({
            "p": p,
            "field": field_name(&f),
            "s": s.to_string(),
            "t": t.to_string(),
            "monomials": monomials,
            "matrix": matrix,
            "superspecial": report.superspecial,
            "predicted": predicted,
        }))?;
    } else {
        println!(
            "Hasse-Witt matrix of {} over {} (s = {s}, t = {t})",
            curve_name(QUINTIC),
            field_name(&f)
        );
        let cells: Vec<String> = report
            .matrix
            .iter()
            .flatten()
            .map(|e| e.to_string())
            .collect();
        let width = cells.iter().map(|c| c.len()).max().unwrap_or(1);
        for row in cells.chunks(5) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            println!("  [ {} ]", line.join("  "));
        }
        for (triple, value) in report.nonzero() {
            println!("  nonzero: {triple} -> {value}");
        }
        println!("superspecial: {}", report.superspecial);
        println!("predicted (p mod 15 in {{11, 14}}): {predicted}");
    }
    if report.superspecial != predicted {
        eprintln!(
            "mismatch: criterion says {}, congruence says {predicted}",
            report.superspecial
        );
        return Ok(EXIT_MISMATCH);
    }
    Ok(EXIT_OK)
}

fn count(cli: &Cli, p: u64, fam: Family, coeffs: &Coefficients, q: FieldChoice) -> Result<u8> {
    let f = field_for(p, q)?;
    let (s, t) = parse_coeffs(&f, coeffs)?;
    let params = FamilyParams::with_coefficients(&f, fam.a, fam.b, fam.c, s, t)?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let record = evaluate(&params, threads)?;
    let mut code = EXIT_OK;
    if let Some(mut cache) = open_cache(cli)? {
        match cache.get(&record.key()) {
            Some(old) if !old.same_numbers(&record) => {
                eprintln!("mismatch: cached record differs from recomputation: {old:?}");
                code = EXIT_MISMATCH;
            }
            Some(_) => {}
            None => {
                cache.insert(record.clone())?;
            }
        }
    }
    if cli.json {
        print_json(&record)?;
    } else {
        println!(
            "curve    {} over {} (s = {s}, t = {t})",
            curve_name(params.abc()),
            field_name(&f)
        );
        println!("genus    {}", record.genus);
        println!("count    {}", record.count);
        println!(
            "bounds   [{}, {}]",
            fmt_bound(&record, record.hw_lower),
            fmt_bound(&record, record.hw_upper)
        );
        println!("status   {}", record.status);
        if let (Some(v), Some(pred)) = (record.superspecial_verdict, record.superspecial_predicted)
        {
            println!("superspecial {v} (predicted {pred})");
        }
    }
    Ok(code)
}

/// Bounds are integers over `F_{p^2}` and irrational over `F_p`.
fn fmt_bound(r: &ResultRecord, v: f64) -> String {
    if r.q == r.p * r.p {
        format!("{}", v as i64)
    } else {
        format!("{v:.6}")
    }
}

fn fmt_opt(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

fn scan(cli: &Cli, pmin: u64, pmax: u64, fam: Family, only_predicted: bool) -> Result<u8> {
    if pmin > pmax {
        bail!(Usage(format!("empty range: pmin {pmin} > pmax {pmax}")));
    }
    let (a, b, c) = (fam.a, fam.b, fam.c);
    // surface relation errors even when no prime is in range
    supercurve::pointcount::genus(a, b, c)?;
    let mut primes = Vec::new();
    for p in (pmin.max(3)..=pmax).filter(|&p| is_prime(p)) {
        if (a * b) % p == 0 {
            eprintln!("skipping p = {p}: p divides a·b");
            continue;
        }
        if only_predicted && !classify(p, a, b, c)?.predicted_maximal {
            continue;
        }
        primes.push(p);
    }

    let cache = open_cache(cli)?.map(Mutex::new);
    let records: Vec<ResultRecord> = primes
        .par_iter()
        .map(|&p| -> Result<ResultRecord> {
            let f = GaloisField::quadratic(p)?;
            let params = FamilyParams::new(&f, a, b, c)?;
            if let Some(cache) = &cache {
                if let Some(hit) = cache.lock().unwrap().get(&key_for(&params)) {
                    return Ok(hit.clone());
                }
            }
            let record = evaluate(&params, 1)?;
            if let Some(cache) = &cache {
                cache.lock().unwrap().insert(record.clone())?;
            }
            Ok(record)
        })
        .collect::<Result<_>>()?;

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if cli.json {
        for r in &records {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        }
        return Ok(EXIT_OK);
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record([
        "p",
        "q",
        "a",
        "b",
        "c",
        "s",
        "t",
        "genus",
        "count",
        "hw_lower",
        "hw_upper",
        "status",
        "ss_verdict",
        "ss_predicted",
    ])?;
    for r in &records {
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            r.a.to_string(),
            r.b.to_string(),
            r.c.to_string(),
            r.s.clone(),
            r.t.clone(),
            r.genus.to_string(),
            r.count.to_string(),
            fmt_bound(r, r.hw_lower),
            fmt_bound(r, r.hw_upper),
            r.status.clone(),
            fmt_opt(r.superspecial_verdict),
            fmt_opt(r.superspecial_predicted),
        ])?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn classify_cmd(cli: &Cli, p: u64, fam: Family) -> Result<u8> {
    let r = classify(p, fam.a, fam.b, fam.c)?;
    let case2 = match r.case2 {
        CaseTwo::Holds => Some(true),
        CaseTwo::Fails => Some(false),
        CaseTwo::Inapplicable => None,
    };
    let matched = match r.matched {
        supercurve::congruence::MatchedCase::Case1 => Some(1),
        supercurve::congruence::MatchedCase::Case2 => Some(2),
        supercurve::congruence::MatchedCase::None => None,
    };
    if cli.json {
        return print_json(&json!({
            "p": r.p,
            "a": fam.a,
            "b": fam.b,
            "c": fam.c,
            "n": r.n,
            "d": r.d,
            "genus": r.genus,
            "case1": r.case1,
            "case2": case2,
            "matched": matched,
            "predicted_maximal": r.predicted_maximal,
            "predicted_superspecial": r.predicted_superspecial,
        }))
        .map(|_| EXIT_OK);
    }
    println!(
        "(a,b,c) = ({},{},{}), genus {}",
        fam.a, fam.b, fam.c, r.genus
    );
    println!("n = {}", r.n);
    match r.d {
        Some(d) => println!("d = {d}"),
        None => println!("d = none (gcd(a, b) > 1)"),
    }
    println!("case 1 (p ≡ -1 mod n): {}", r.case1);
    match case2 {
        Some(v) => println!("case 2 (p ≡ d - 1 mod n): {v}"),
        None => println!("case 2: not applicable"),
    }
    match matched {
        Some(k) => println!("p = {p}: maximal over F_{{p^2}} by case {k}"),
        None => println!("p = {p}: no congruence applies"),
    }
    if let Some(ss) = r.predicted_superspecial {
        println!("superspecial predicted: {ss}");
    }
    Ok(EXIT_OK)
}

fn table2(cli: &Cli) -> Result<u8> {
    let rows = table2_rows();
    if cli.json {
        let items: Vec<_> = rows
            .iter()
            .map(|r| {
                let (case, d) = match r.case {
                    TableCase::One { .. } => (1, None),
                    TableCase::Two { d, .. } => (2, Some(d)),
                };
                json!({
                    "genus": r.genus,
                    "residue": r.residue,
                    "n": r.n,
                    "a": r.abc.0,
                    "b": r.abc.1,
                    "c": r.abc.2,
                    "case": case,
                    "d": d,
                })
            })
            .collect();
        print_json(&items)?;
    } else {
        println!("g | congruence | (a,b,c) | case");
        for r in &rows {
            println!("{r}");
        }
    }
    Ok(EXIT_OK)
}

fn verify(cli: &Cli, fam: Family, case: u8, perturb: Option<i64>) -> Result<u8> {
    let case = if case == 1 {
        CoverCase::One
    } else {
        CoverCase::Two
    };
    let mut spec = CoverSpec::new(fam.a, fam.b, fam.c, case)?;
    if let Some(delta) = perturb {
        spec.z_map.1 = spec.z_map.1 + LinExp::constant(delta);
    }
    let transcript = verify_cover(&spec);
    if cli.json {
        print_json(&json!({
            "a": fam.a,
            "b": fam.b,
            "c": fam.c,
            "case": case.number(),
            "verdict": transcript.verdict,
            "mismatches": transcript.mismatches,
            "transcript": transcript.lines(),
        }))?;
    } else {
        println!("{}", transcript.render());
    }
    Ok(if transcript.verdict {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

fn oracle(cli: &Cli, cmd: &OracleCommand) -> Result<u8> {
    match cmd {
        OracleCommand::Expand { p, coeffs } => {
            let f = GaloisField::quadratic(*p)?;
            let (s, t) = parse_coeffs(&f, coeffs)?;
            let params = QuinticParams::new(&f, s, t)?;
            let dense = expand_power(&params)?;
            let report = hasse_witt_matrix(&params)?;
            let mut rows = Vec::new();
            let mut mismatches = 0;
            for (_, _, m) in report.monomials.iter() {
                let slow = dense.coefficient(m);
                let fast = coefficient(&params, m)?;
                mismatches += usize::from(slow != fast);
                rows.push((m, slow, fast));
            }
            if cli.json {
                let items: Vec<_> = rows
                    .iter()
                    .map(|(m, slow, fast)| {
                        json!({
                            "monomial": m.to_string(),
                            "expansion": slow.to_string(),
                            "criterion": fast.to_string(),
                        })
                    })
                    .collect();
                print_json(&json!({ "p": p, "terms": dense.len(), "coefficients": items }))?;
            } else {
                println!("F^(p-1) has {} nonzero terms", dense.len());
                for (m, slow, fast) in &rows {
                    let flag = if slow == fast { "" } else { "  MISMATCH" };
                    println!("{m:<22} expansion {slow:<10} criterion {fast}{flag}");
                }
            }
            Ok(if mismatches == 0 {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
        OracleCommand::Plane {
            p,
            family,
            coeffs,
            q,
        } => {
            let model = plane_model(*p, *family, coeffs, *q)?;
            let n = plane_count(&model)?;
            if cli.json {
                print_json(&json!({ "p": p, "q": model.field().order(), "points": n }))?;
            } else {
                println!("{n}");
            }
            Ok(EXIT_OK)
        }
        OracleCommand::Singular {
            p,
            family,
            coeffs,
            q,
        } => {
            let model = plane_model(*p, *family, coeffs, *q)?;
            let points: Vec<String> = singular_points(&model)?
                .iter()
                .map(|pt| pt.to_string())
                .collect();
            if cli.json {
                print_json(&points)?;
            } else {
                for pt in &points {
                    println!("{pt}");
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn plane_model(p: u64, fam: Family, coeffs: &Coefficients, q: FieldChoice) -> Result<PlaneModel> {
    let f = field_for(p, q)?;
    let (s, t) = parse_coeffs(&f, coeffs)?;
    if s.is_zero() || t.is_zero() {
        return Err(supercurve::Error::Degenerate("s and t must be nonzero".into()).into());
    }
    Ok(PlaneModel::new(&f, (fam.a, fam.b, fam.c), s, t)?)
}
