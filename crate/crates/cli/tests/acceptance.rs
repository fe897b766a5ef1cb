//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary (`harness = false`).

use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::Value;
use suprametric_cli::run;
use suprametric_core::axioms::{check_semimetric, verify_b_metric, verify_interpolative, Axiom, SemimetricAxiom};
use suprametric_core::comparison::{iterate_theta, ComparisonFn};
use suprametric_core::fit::{fit_b_index, interpolative_to_b_index, young_gap};
use suprametric_core::gallery::{load_gallery, random_space, RandomSpaceSpec};
use suprametric_core::oracle::{DistanceOracle, FiniteSpace};
use suprametric_core::picard::{run_orbit, uniqueness_probe, SelfMap, SolveConfig};
use suprametric_core::point::Point;
use suprametric_core::sampling::{rng, SampleConfig};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Runs a CLI command in machine mode; returns (exit code, raw stdout, JSON).
fn cli(args: &str) -> Result<(i32, String, Value), String> {
    let mut argv = vec!["suprametric".to_string()];
    argv.extend(args.split_whitespace().map(str::to_string));
    argv.push("--format".into());
    argv.push("machine".into());
    let out = run(argv);
    let json = serde_json::from_str(&out.stdout)
        .map_err(|e| format!("`{args}`: unparsable output ({e}); stderr: {}", out.stderr))?;
    Ok((out.code, out.stdout, json))
}

fn num(v: &Value, path: &str) -> Result<f64, String> {
    v.pointer(path)
        .and_then(Value::as_f64)
        .ok_or_else(|| format!("missing number at {path}"))
}

fn text<'a>(v: &'a Value, path: &str) -> Result<&'a str, String> {
    v.pointer(path)
        .and_then(Value::as_str)
        .ok_or_else(|| format!("missing string at {path}"))
}

fn interpolative_grid() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for a in 1..=9 {
        for c in [0.0, 0.5, 1.0, 2.0, 5.0] {
            out.push((a as f64 / 10.0, c));
        }
    }
    out
}

fn c1_lemma() -> Check {
    let grid = interpolative_grid();
    let mut worst = f64::INFINITY;
    for k in 0..200u64 {
        let (alpha, c) = grid[(k as usize * 7) % grid.len()];
        let n = 3 + (k as usize % 10);
        let space = random_space(&RandomSpaceSpec::new(n, Axiom::Interpolative { alpha, c }, k))
            .map_err(|e| e.to_string())?;
        let o = DistanceOracle::finite("r", space);
        let cfg = SampleConfig::with_seed(k);
        let interp = verify_interpolative(&o, alpha, c, &cfg).map_err(|e| e.to_string())?;
        ensure(interp.ok && interp.exhaustive, format!("space {k} is not interpolative"))?;
        let s = interpolative_to_b_index(alpha, c).map_err(|e| e.to_string())?;
        let b = verify_b_metric(&o, s, &cfg).map_err(|e| e.to_string())?;
        let slack = b.worst.map(|w| w.slack).unwrap_or(f64::INFINITY);
        ensure(b.ok && b.exhaustive && slack >= -1e-9, format!("space {k}: b-metric fails, slack {slack}"))?;
        worst = worst.min(slack);
    }
    Ok(format!("200 spaces, all n³ triples, min slack {worst:e}"))
}

fn c2_exp_abs() -> Check {
    let (code, _, v) = cli("classify exp_abs --samples 100000")?;
    ensure(code == 0, format!("classify exit {code}"))?;
    let triples = num(&v, "/result/report/triples")?;
    ensure(triples >= 1e5, "fewer than 1e5 triples")?;
    ensure(text(&v, "/result/report/supra/verdict")? == "holds", "supra does not hold")?;
    let s = num(&v, "/result/report/supra/fit/s")?;
    let c = num(&v, "/result/report/supra/fit/c")?;
    // (1, 1) is feasible iff the least c at s = 1 is at most 1
    ensure(s == 1.0 && c <= 1.0 + 1e-9, format!("fitted (s, c) = ({s}, {c})"))?;
    let (code, _, f) = cli("falsify exp_abs b_metric:1000")?;
    ensure(code == 0, format!("falsify exit {code}"))?;
    let ratio = num(&f, "/result/witness/triangle_ratio")?;
    ensure(ratio > 1000.0, format!("ratio {ratio}"))?;
    Ok(format!("{triples} triples, least c at s = 1 is {c}, b-witness ratio {ratio:e}"))
}

fn c3_exp_signed() -> Check {
    let o = load_gallery("exp_signed").map_err(|e| e.to_string())?.oracle;
    let r = check_semimetric(&o, &SampleConfig::default()).map_err(|e| e.to_string())?;
    let w = r
        .witnesses
        .iter()
        .find(|w| w.axiom == SemimetricAxiom::Symmetry)
        .ok_or("no symmetry witness")?;
    ensure(!r.ok, "report says ok")?;
    Ok(format!(
        "Δ({}, {}) = {} vs {}",
        w.x,
        w.y,
        w.forward,
        w.backward.unwrap_or(f64::NAN)
    ))
}

fn c4_picard() -> Check {
    let (code, _, v) = cli("solve halving_euclid --x0 1 --tol 1e-12")?;
    let z = num(&v, "/result/result/fixed_point/0")?;
    let it = num(&v, "/result/result/iterations")?;
    ensure(code == 0 && z.abs() <= 1e-12 && it <= 45.0, format!("halving: exit {code}, z {z}, {it} iterations"))?;
    let (code, _, v) = cli("solve supra_expm1 --x0 5 --tol 1e-10")?;
    let z2 = num(&v, "/result/result/fixed_point/0")?;
    ensure(code == 0 && z2.abs() <= 1e-10, format!("supra_expm1: exit {code}, z {z2}"))?;
    Ok(format!("halving z = {z:e} after {it} steps; supra_expm1 z = {z2:e}"))
}

fn c5_certificate() -> Check {
    let (code, _, v) = cli("certify supra_expm1 --samples 10000")?;
    let pairs = num(&v, "/result/certificate/pairs_checked")?;
    let slack = num(&v, "/result/certificate/min_slack")?;
    let verdict = text(&v, "/result/certificate/verdict")?;
    ensure(
        code == 0 && verdict == "no_violation" && pairs >= 1e4 && slack >= -1e-9,
        format!("exit {code}, {verdict}, {pairs} pairs, min slack {slack}"),
    )?;
    let (code, _, v) = cli("certify halving_euclid --theta linear:0.4")?;
    let verdict2 = text(&v, "/result/certificate/verdict")?;
    ensure(code == 1 && verdict2 == "violated", format!("negative control: exit {code}, {verdict2}"))?;
    Ok(format!("{pairs} pairs, min slack {slack:e}; linear:0.4 violated"))
}

fn c6_uniqueness() -> Check {
    let item = load_gallery("supra_expm1").map_err(|e| e.to_string())?;
    let starts: Vec<Point> = [-5.0, -1.0, 0.3, 5.0].map(Point::scalar).to_vec();
    let cfg = SolveConfig::default();
    let map = item.map.clone().ok_or("no map")?;
    let u = uniqueness_probe(&map, &item.oracle, &starts, &cfg, 1e-8).map_err(|e| e.to_string())?;
    ensure(u.ok && u.distinct.len() == 1, format!("{} distinct, spread {}", u.distinct.len(), u.max_separation))?;
    let two = [-1.0, 1.0].map(Point::scalar);
    let id = uniqueness_probe(&SelfMap::identity(), &item.oracle, &two, &cfg, 1e-8).map_err(|e| e.to_string())?;
    ensure(!id.ok && id.distinct.len() == 2, format!("identity: {} distinct", id.distinct.len()))?;
    Ok(format!("spread {:e}; identity gives 2 fixed points", u.max_separation))
}

fn c7_envelope() -> Check {
    let item = load_gallery("supra_expm1").map_err(|e| e.to_string())?;
    let theta = item.theta.clone().ok_or("no theta")?;
    let t = run_orbit(item.map.as_ref().ok_or("no map")?, &Point::scalar(5.0), &item.oracle, 51)
        .map_err(|e| e.to_string())?;
    let d0 = t.step_distances[0];
    let mut worst = f64::INFINITY;
    for n in 0..=50 {
        let bound = iterate_theta(&theta, d0, n).map_err(|e| e.to_string())?;
        let gap = bound + 1e-9 - t.step_distances[n];
        ensure(gap >= 0.0, format!("n = {n}: step {} > θⁿ = {bound}", t.step_distances[n]))?;
        worst = worst.min(bound - t.step_distances[n]);
    }
    Ok(format!("51 steps, min gap {worst:e}"))
}

fn c8_theta() -> Check {
    let (_, _, v) = cli("theta linear:0.5")?;
    ensure(text(&v, "/result/theta1/verdict/verdict")? == "holds", "linear: Θ₁")?;
    ensure(text(&v, "/result/theta2/verdict/verdict")? == "holds", "linear: Θ₂")?;
    let probes = v.pointer("/result/theta2/probes").and_then(Value::as_array).ok_or("no probes")?;
    let at1 = probes
        .iter()
        .find(|p| p["t"].as_f64() == Some(1.0))
        .and_then(|p| p["partial_sum"].as_f64())
        .ok_or("no probe at t = 1")?;
    ensure((at1 - 2.0).abs() <= 1e-9, format!("partial sum {at1}"))?;

    let (_, _, v) = cli("theta rational_decay")?;
    ensure(text(&v, "/result/theta1/verdict/verdict")? == "holds", "rational_decay: Θ₁")?;
    ensure(text(&v, "/result/theta2/verdict/verdict")? == "fails", "rational_decay: Θ₂")?;
    let theta = ComparisonFn::RationalDecay;
    let mut worst = 0.0f64;
    for t in [1e-3, 0.1, 1.0, 10.0, 100.0] {
        let mut x = t;
        for n in 1..=10_000usize {
            x = theta.eval(x);
            let exact = t / (1.0 + n as f64 * t);
            worst = worst.max((x - exact).abs() / exact);
        }
        let direct = iterate_theta(&theta, t, 10_000).map_err(|e| e.to_string())?;
        ensure(direct == x, "iterate_theta differs from stepwise iteration")?;
    }
    ensure(worst <= 1e-12, format!("closed form off by {worst:e}"))?;

    let (_, _, v) = cli("theta power:0.5")?;
    let t = num(&v, "/result/subdiagonal/t")?;
    ensure(t == 0.25, format!("subdiagonal witness at {t}"))?;
    Ok(format!("linear Σ = {at1}; closed form within {worst:e}; power:0.5 fails at t = {t}"))
}

fn brute_b_index(s: &FiniteSpace) -> f64 {
    let n = s.len();
    let mut best = 1.0f64;
    for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                let d = s.get(x, z) + s.get(z, y);
                if d > 0.0 {
                    best = best.max(s.get(x, y) / d);
                }
            }
        }
    }
    best
}

fn c9_exhaustive() -> Check {
    for k in 0..50u64 {
        let n = 2 + (k as usize % 11);
        let space = random_space(&RandomSpaceSpec::new(n, Axiom::BMetric { s: 4.0 }, 1000 + k)).map_err(|e| e.to_string())?;
        let fit = fit_b_index(&DistanceOracle::finite("r", space.clone()), &SampleConfig::with_seed(k))
            .map_err(|e| e.to_string())?;
        let brute = brute_b_index(&space);
        ensure(fit.exhaustive, format!("space {k} not enumerated"))?;
        ensure(fit.s == Some(brute), format!("space {k}: {:?} vs {brute}", fit.s))?;
    }
    Ok("50 spaces, fitted index equals enumeration".into())
}

fn c10_young() -> Check {
    let mut r = rng(10);
    let mut min = f64::INFINITY;
    for _ in 0..100_000 {
        let a = r.random_range(0.0..=1e3);
        let b = r.random_range(0.0..=1e3);
        let alpha = r.random_range(0.001..0.999);
        let g = young_gap(a, b, alpha);
        ensure(g >= 0.0, format!("young_gap({a}, {b}, {alpha}) = {g}"))?;
        min = min.min(g);
    }
    Ok(format!("1e5 samples, min gap {min:e}"))
}

fn c11_determinism() -> Check {
    let commands = [
        "classify exp_abs --seed 7",
        "classify exp_signed",
        "falsify exp_abs b_metric:1000 --seed 3",
        "falsify exp_signed symmetry",
        "solve halving_euclid --x0 1 --tol 1e-12",
        "solve supra_expm1 --x0 5 --tol 1e-10",
        "solve doubling_euclid --x0 1",
        "certify supra_expm1 --seed 11",
        "certify halving_euclid --theta linear:0.4",
        "theta rational_decay",
        "convert 0.25 4 --verify power_square",
    ];
    for c in commands {
        let (code_a, a, _) = cli(c)?;
        let (code_b, b, _) = cli(c)?;
        ensure(a == b && code_a == code_b, format!("`{c}` differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical", commands.len()))
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        ("interpolative spaces are b-metrics with the converted index", Duration::from_secs(5), c1_lemma),
        ("exp_abs is a suprametric (1, 1) and not a b-metric", Duration::from_secs(2), c2_exp_abs),
        ("exp_signed fails symmetry", Duration::from_secs(1), c3_exp_signed),
        ("Picard iteration converges", Duration::from_secs(1), c4_picard),
        ("contraction certificate and negative control", Duration::from_secs(2), c5_certificate),
        ("fixed point is unique", Duration::from_secs(1), c6_uniqueness),
        ("steps stay under the iterate envelope", Duration::from_secs(1), c7_envelope),
        ("comparison function classes", Duration::from_secs(2), c8_theta),
        ("exhaustive fit equals enumeration", Duration::from_secs(5), c9_exhaustive),
        ("Young's inequality gap is nonnegative", Duration::from_secs(1), c10_young),
        ("machine output is deterministic", Duration::from_secs(60), c11_determinism),
    ];
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let (status, detail) = match &result {
            Ok(d) if took <= *budget => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; over the {:?} budget", budget)),
            Err(e) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {status}  {name}  [{:.3}s]  {detail}",
            k + 1,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
