//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use ospq_core::fockrep::{FockRep, OpLabel};
use ospq_core::ospclassic::{span_dimension, verify_pre_limits};
use ospq_core::uqosp::catalog;
use ospq_core::walgebra::{Reduction, Rewriter, Strategy, WeylElement};
use ospq_core::{Letter, Sign};

const SET: [(usize, usize); 7] = [(1, 2), (1, 3), (1, 5), (2, 2), (2, 3), (3, 2), (2, 5)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ospq(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ospq")).args(args).output().expect("run ospq");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn ospq_json(args: &[&str]) -> Result<(i32, Value), String> {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out) = ospq(&full);
    serde_json::from_str(&out).map(|v| (code, v)).map_err(|e| format!("{args:?}: bad JSON ({e})"))
}

fn results(report: &Value) -> &Vec<Value> {
    report["results"].as_array().expect("results array")
}

fn residual(r: &Value) -> f64 {
    match &r["residual"] {
        Value::String(s) if s == "exact-zero" => 0.0,
        v => v.as_f64().unwrap_or(f64::INFINITY),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_s), || format!("took {elapsed:.2?}, limit {limit_s} s"))
}

/// Coefficients of (1 + x + ... + x^(k-1))^n by repeated multiplication.
fn poly_oracle(n: usize, k: usize) -> Vec<usize> {
    let mut p = vec![1usize];
    for _ in 0..n {
        let mut next = vec![0; p.len() + k - 1];
        for (i, c) in p.iter().enumerate() {
            for j in 0..k {
                next[i + j] += c;
            }
        }
        p = next;
    }
    p
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for n in 1..=3usize {
        let (code, rep) = ospq_json(&["verify", "--n", &n.to_string(), "--families", "classical"])?;
        ensure(code == 0, || format!("n={n}: exit {code}"))?;
        let rs = results(&rep);
        let not_exact: Vec<&str> = rs.iter().filter(|r| r["residual"] != "exact-zero").filter_map(|r| r["id"].as_str()).collect();
        ensure(not_exact.is_empty(), || format!("n={n}: non-exact residuals {not_exact:?}"))?;
        let count = |p: &str| rs.iter().filter(|r| r["id"].as_str().is_some_and(|id| id.starts_with(p))).count();
        ensure(count("PB[") == 8 * n * n * n, || format!("n={n}: {} triple instances, expected {}", count("PB["), 8 * n * n * n))?;
        for p in ["SP[", "CCK[", "SPAN["] {
            ensure(count(p) > 0, || format!("n={n}: no {p} entries"))?;
        }
        if n >= 2 {
            ensure(count("CSERRE_") > 0, || format!("n={n}: no classical Serre entries"))?;
        }
        let expect = 2 * n * n + 3 * n;
        ensure(span_dimension(n).map_err(|e| e.to_string())? == expect, || format!("n={n}: span dimension"))?;
        let span = rs.iter().find(|r| r["id"].as_str().is_some_and(|id| id.starts_with("SPAN["))).unwrap();
        ensure(span["detail"].as_str().unwrap_or("").contains(&format!("dimension {expect}")), || format!("n={n}: {span}"))?;
        total += rs.len();
    }
    within(start.elapsed(), 5)?;
    Ok(format!("{total} exact checks, span dims 5/14/27, {:.2?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let mut total = 0;
    let mut n3 = Duration::ZERO;
    for n in 1..=3usize {
        let start = Instant::now();
        let (code, rep) = ospq_json(&["verify", "--n", &n.to_string(), "--families", "CK,SERRE,PRE,T,G"])?;
        let elapsed = start.elapsed();
        ensure(code == 0, || format!("n={n}: exit {code}"))?;
        let rs = results(&rep);
        let expected = catalog(n).map_err(|e| e.to_string())?.len();
        ensure(rs.len() == expected, || format!("n={n}: {} entries, catalog has {expected}", rs.len()))?;
        let bad: Vec<&str> = rs.iter().filter(|r| r["residual"] != "exact-zero").filter_map(|r| r["id"].as_str()).collect();
        ensure(bad.is_empty(), || format!("n={n}: {bad:?}"))?;
        // families whose index ranges are non-empty at this n
        let mut families = vec!["CK[", "PRE1[", "PRE2[", "PRE3[", "T3[", "T4[", "G1["];
        if n >= 2 {
            families.extend(["PRE4[", "PRE5[", "T1[", "T2[", "G2[", "SERRE_E[", "SERRE_F["]);
        }
        if n >= 3 {
            families.push("G3[");
        }
        for f in &families {
            ensure(rs.iter().any(|r| r["id"].as_str().is_some_and(|id| id.starts_with(f))), || format!("n={n}: no {f} instances"))?;
        }
        if n >= 2 {
            let quartic = format!("SERRE_E[n={n},form=QUARTIC]");
            ensure(rs.iter().any(|r| r["id"] == quartic.as_str()), || format!("n={n}: quartic e_n relation missing"))?;
        }
        if n == 3 {
            n3 = elapsed;
        }
        total += rs.len();
    }
    within(n3, 60)?;
    Ok(format!("{total} instances exact-zero, n=3 in {n3:.2?}"))
}

fn criterion_3() -> Outcome {
    let mut count = 0;
    let mut matched = 0;
    for n in 1..=3 {
        let classical = ospq_json(&["verify", "--n", &n.to_string(), "--families", "classical"])?.1;
        let verified: Vec<String> = results(&classical)
            .iter()
            .filter(|r| r["status"] == "pass")
            .filter_map(|r| r["id"].as_str().map(str::to_string))
            .collect();
        for r in verify_pre_limits(n).map_err(|e| e.to_string())? {
            ensure(r.passed(), || format!("{}: {}", r.id, r.detail))?;
            for part in r.detail.split(' ').filter(|p| p.starts_with("PB[")) {
                let (pb, verdict) = part.rsplit_once(':').unwrap_or((part, ""));
                ensure(verdict == "match", || format!("{}: {part}", r.id))?;
                ensure(verified.iter().any(|v| v == pb), || format!("{pb} not among criterion-1 instances"))?;
                matched += 1;
            }
            count += 1;
        }
    }
    ensure(matched > 0, || "no limit was matched against a triple relation".into())?;
    Ok(format!("{count} PRE limits vanish at s=1, {matched} reproduce verified triple instances"))
}

fn rep_report(n: usize, k: usize) -> Result<Value, String> {
    let (code, rep) = ospq_json(&["rep", "--n", &n.to_string(), "--k", &k.to_string(), "--checks", "unitarity,relations"])?;
    ensure(code == 0, || format!("rep n={n} k={k}: exit {code}"))?;
    Ok(rep)
}

fn max_residual(rs: &[Value], prefix: &str) -> (usize, f64) {
    let sel: Vec<f64> = rs.iter().filter(|r| r["id"].as_str().is_some_and(|id| id.starts_with(prefix))).map(residual).collect();
    (sel.len(), sel.into_iter().fold(0.0, f64::max))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let (mut worst_u, mut worst_r, mut worst_s) = (0.0f64, 0.0f64, 0.0f64);
    for (n, k) in SET {
        let rep = rep_report(n, k)?;
        let rs = results(&rep);
        let dim = FockRep::new(n, k).map_err(|e| e.to_string())?.dim();
        ensure(dim == k.pow(n as u32), || format!("n={n} k={k}: dim {dim}"))?;
        ensure(rs.iter().any(|r| r["id"].as_str().is_some_and(|id| id.starts_with("DIM[")) && r["status"] == "pass"), || "DIM".into())?;
        let (nu, u) = max_residual(rs, "UNITARY[");
        let (nr, r) = max_residual(rs, "MAT:");
        let (ns, s) = max_residual(rs, "SYM:");
        let cat = catalog(n).map_err(|e| e.to_string())?.len();
        ensure(nu == 3 * n && nr == cat && ns == cat, || format!("n={n} k={k}: counts {nu}/{nr}/{ns}, catalog {cat}"))?;
        ensure(u < 1e-12, || format!("n={n} k={k}: unitarity deviation {u:e}"))?;
        ensure(r < 1e-9, || format!("n={n} k={k}: relation residual {r:e}"))?;
        ensure(s < 1e-9, || format!("n={n} k={k}: symbolic vs matrix {s:e}"))?;
        worst_u = worst_u.max(u);
        worst_r = worst_r.max(r);
        worst_s = worst_s.max(s);
    }
    within(start.elapsed(), 30)?;
    Ok(format!(
        "7 (n,k) pairs; unitarity {worst_u:.1e}, relations {worst_r:.1e}, symbolic/matrix {worst_s:.1e}, {:.2?}",
        start.elapsed()
    ))
}

fn criterion_5() -> Outcome {
    let mut transitions = 0;
    let mut worst = 0.0f64;
    for (n, k) in SET {
        let rep = rep_report(n, k)?;
        let (count, r) = max_residual(results(&rep), "NORM[");
        ensure(count == n && r < 1e-10, || format!("n={n} k={k}: {count} entries, max {r:e}"))?;
        // independent oracle: c [m+1]_q = sin((m+1) pi/k) / (sin(pi/k) cos(pi/2k))
        let fock = FockRep::new(n, k).map_err(|e| e.to_string())?;
        let kf = k as f64;
        for i in 1..=n {
            let a = fock.generator(OpLabel::Osc(i, Sign::Plus)).map_err(|e| e.to_string())?;
            for (_, c, v) in a.triplets() {
                let m = fock.basis.occupation(c)[i - 1] as f64;
                let want = (PI * (m + 1.0) / kf).sin() / ((PI / kf).sin() * (PI / (2.0 * kf)).cos());
                worst = worst.max((v.norm_sqr() - want).abs());
                transitions += 1;
            }
        }
    }
    ensure(worst < 1e-10, || format!("oracle deviation {worst:e}"))?;
    Ok(format!("{transitions} transitions, |amp|^2 = ratio of consecutive norms, oracle deviation {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    for (n, k) in SET {
        let (code, dec) = ospq_json(&["decompose", "--n", &n.to_string(), "--k", &k.to_string()])?;
        ensure(code == 0, || format!("decompose n={n} k={k}: exit {code}"))?;
        let dims: Vec<usize> = dec["blocks"].as_array().unwrap().iter().map(|b| b["dim"].as_u64().unwrap() as usize).collect();
        ensure(dims.len() == n * k - n + 1, || format!("n={n} k={k}: {} blocks", dims.len()))?;
        ensure(dims == poly_oracle(n, k), || format!("n={n} k={k}: dims {dims:?}"))?;
        for b in dec["blocks"].as_array().unwrap() {
            let m = b["m"].as_u64().unwrap() as usize;
            for idx in b["indices"].as_array().unwrap() {
                let occ = FockRep::new(n, k).unwrap().basis.occupation(idx.as_u64().unwrap() as usize);
                ensure(occ.iter().sum::<usize>() == m, || format!("index {idx} in block {m}"))?;
            }
        }
        let (_, text) = ospq(&["decompose", "--n", &n.to_string(), "--k", &k.to_string()]);
        let connected = text.lines().filter(|l| l.starts_with("PASS CONNECTED[")).count();
        ensure(connected == dims.len(), || format!("n={n} k={k}: {connected} connected blocks of {}", dims.len()))?;
        ensure(!text.lines().any(|l| l.starts_with("FAIL")), || format!("n={n} k={k}: {text}"))?;
        if (n, k) == (2, 3) {
            ensure(dims == [1, 2, 3, 2, 1], || format!("{dims:?}"))?;
        }
        if (n, k) == (3, 2) {
            ensure(dims == [1, 3, 3, 1], || format!("{dims:?}"))?;
        }
    }
    Ok("block counts nk-n+1, dims match polynomial oracle, all blocks strongly connected".into())
}

fn random_letter(rng: &mut ChaCha8Rng, n: usize) -> Letter {
    let i = rng.gen_range(0..n);
    match rng.gen_range(0..3) {
        0 => Letter::Plus(i),
        1 => Letter::Minus(i),
        _ => Letter::Kappa(i, if rng.gen_bool(0.5) { 1 } else { -1 }),
    }
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in 0..10_000 {
        let n = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=10);
        let w: Vec<Letter> = (0..len).map(|_| random_letter(&mut rng, n)).collect();
        let l = Rewriter::new(Strategy::Leftmost).normal_form(&w, n).map_err(|e| e.to_string())?;
        let r = Rewriter::new(Strategy::Rightmost).normal_form(&w, n).map_err(|e| e.to_string())?;
        ensure(l == r, || format!("word #{t} {w:?}: strategies disagree"))?;
    }
    for t in 0..1_000 {
        let n = rng.gen_range(1..=3);
        let mut elem = || -> Result<WeylElement, String> {
            let len = rng.gen_range(0..=4);
            let w: Vec<Letter> = (0..len).map(|_| random_letter(&mut rng, n)).collect();
            ospq_core::walgebra::normal_order(&w, n).map_err(|e| e.to_string())
        };
        let (x, y, z) = (elem()?, elem()?, elem()?);
        let prod = |a: &WeylElement, b: &WeylElement| a.product(b, Reduction::Ordered).map_err(|e| e.to_string());
        ensure(prod(&prod(&x, &y)?, &z)? == prod(&x, &prod(&y, &z)?)?, || format!("triple #{t}: not associative"))?;
    }
    within(start.elapsed(), 30)?;
    Ok(format!("10000 words confluent, 1000 triples associative, {:.2?}", start.elapsed()))
}

fn criterion_8() -> Outcome {
    let (code, d) = ospq_json(&["rep", "--n", "2", "--q", "1.1"])?;
    ensure(code == 1, || format!("q=1.1: exit {code}"))?;
    ensure(d.get("results").is_none() && d["positivity"]["conjugation_invariant"] == false, || format!("q=1.1: {d}"))?;
    let (code, d) = ospq_json(&["rep", "--n", "1", "--q-arg", "1.1"])?;
    ensure(code == 1, || format!("q=e^1.1i: exit {code}"))?;
    // oracle: [m]_q at q = e^{1.1 i} is sin(1.1 m)/sin(1.1); the first negative partial product is the answer
    let mut prod = 1.0;
    let first = (1..64).find(|&m| {
        prod *= (1.1 * m as f64).sin() / 1.1f64.sin();
        prod <= 0.0
    });
    ensure(d["positivity"]["first_nonpositive"].as_u64() == first.map(|m| m as u64), || format!("q=e^1.1i: {d}"))?;
    let (code, text) = ospq(&["rep", "--n", "1", "--q-arg", "1.1"]);
    ensure(code == 1 && text.contains("first non-positive norm"), || text.clone())?;
    let mut named = Vec::new();
    for n in 1..=3 {
        let (code, rep) = ospq_json(&["verify", "--n", &n.to_string(), "--families", "CK,SERRE,PRE,T,G", "--corrupt"])?;
        ensure(code == 1, || format!("corrupted n={n}: exit {code}"))?;
        let failed: Vec<String> =
            results(&rep).iter().filter(|r| r["status"] == "fail").filter_map(|r| r["id"].as_str().map(str::to_string)).collect();
        ensure(!failed.is_empty(), || format!("corrupted n={n}: no failures"))?;
        named.push(failed[0].clone());
    }
    Ok(format!("non-root q refused (first non-positive m = {}), corrupted runs fail: {}", first.unwrap(), named.join(", ")))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("classical suite", criterion_1),
        ("quantum symbolic suite", criterion_2),
        ("classical limit", criterion_3),
        ("root-of-unity matrices", criterion_4),
        ("norm consistency", criterion_5),
        ("decomposition counts", criterion_6),
        ("rewriting robustness", criterion_7),
        ("negative controls", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
