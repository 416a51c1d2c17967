//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use catbundle::algebra::{lookup, verify_crossed_module, verify_exchange_law, CATALOG};
use catbundle::base::SampledPath;
use catbundle::decorated::{constant_closed_form, convergence, parallel_transport, Connection};
use catbundle::scenario::Scenario;
use catbundle::suites::{run_suite, run_suite_with, selected_suites};
use catbundle::{Checker, Exec, LawReport, Mode};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn scenario(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.toml"));
    Scenario::load(&path).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn suite(sc: &Scenario, name: &str) -> LawReport {
    run_suite(sc, name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passes(r: &LawReport, what: &str) -> Result<(), String> {
    ensure(r.passed(), || format!("{what}: {} failed\n{}", r.suite, r.to_table()))
}

fn exhaustive(r: &LawReport, what: &str) -> Result<(), String> {
    match r.records.iter().find(|x| x.mode == Mode::Sampled) {
        Some(x) => Err(format!("{what}: {} was sampled", x.law)),
        None => Ok(()),
    }
}

fn has(r: &LawReport, law: &str) -> Result<(), String> {
    let rec = r.record(law).ok_or_else(|| format!("{} lacks {law}", r.suite))?;
    ensure(rec.passed(), || format!("{law} failed: {:?}", rec.witness))
}

fn crossed_module_axioms() -> Outcome {
    let checker = Checker::new(0, 100_000);
    let mut checked = Vec::new();
    for e in CATALOG {
        let cm = lookup(e.id).map_err(|x| x.to_string())?;
        let (Some(ng), Some(nh)) = (cm.g.order(), cm.h.order()) else {
            continue;
        };
        ensure(ng * nh * nh <= 100_000, || format!("{} is larger than expected", e.id))?;
        let (r, t) = timed(|| verify_crossed_module(&cm, &checker));
        let r = r.map_err(|x| format!("{}: {x}", e.id))?;
        if e.negative {
            let w = r.failed().find_map(|x| x.witness.clone());
            ensure(!r.passed() && w.is_some(), || {
                format!("{} was not refuted with a witness", e.id)
            })?;
        } else {
            passes(&r, e.id)?;
            exhaustive(&r, e.id)?;
        }
        ensure(t < Duration::from_secs(5), || format!("{} took {t:?}", e.id))?;
        checked.push(e.id);
    }
    Ok(format!("{} finite entries: {}", checked.len(), checked.join(", ")))
}

fn exchange_law() -> Outcome {
    let finite = Checker::new(0, 100_000);
    for id in ["z4-conj", "s3-conj"] {
        let r = verify_exchange_law(&lookup(id).map_err(|e| e.to_string())?, &finite);
        passes(&r, id)?;
        exhaustive(&r, id)?;
    }
    let mut counts = Vec::new();
    for id in ["so2-conj", "so3-conj"] {
        let sc = Scenario::catalog(id).map_err(|e| e.to_string())?;
        ensure(sc.tolerances.group <= 1e-9, || {
            format!("{id}: tolerance {}", sc.tolerances.group)
        })?;
        let r = verify_exchange_law(
            &sc.crossed_module().map_err(|e| e.to_string())?,
            &Checker::new(0, 10_000),
        );
        passes(&r, id)?;
        let n = r.records.iter().map(|x| x.checked).min().unwrap_or(0);
        ensure(n >= 10_000, || format!("{id}: only {n} quadruples"))?;
        counts.push(format!("{id} {n}"));
    }
    Ok(format!("Z4 and S3 exhaustive; sampled {}", counts.join(", ")))
}

fn prop31_roundtrip() -> Outcome {
    for name in ["s3-quiver", "z4-quiver"] {
        let sc = scenario(name);
        let q = sc.quiver().map_err(|e| e.to_string())?;
        ensure(q.object_count() == 3, || format!("{name} is not a 3-object quiver"))?;
        let r = suite(&sc, "prop31-roundtrip");
        passes(&r, name)?;
        exhaustive(&r, name)?;
        for law in ["prop31.multiplicativity", "prop31.boundary", "prop31.functoriality"] {
            has(&r, law)?;
        }
    }
    Ok("every functor on s3-quiver and z4-quiver".into())
}

fn prop34() -> Outcome {
    let sc = scenario("z4-parallel");
    let (r, t) = timed(|| suite(&sc, "prop34"));
    passes(&r, "z4-parallel")?;
    exhaustive(&r, "z4-parallel")?;
    for law in [
        "gu.object-closure",
        "gu.morphism-closure",
        "gu.source-target-hom",
        "gu.exchange-law",
    ] {
        has(&r, law)?;
    }
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "{} laws exhaustive in {:.2} s",
        r.records.len(),
        t.as_secs_f64()
    ))
}

fn prop41() -> Outcome {
    for name in ["s3-quiver", "z4-quiver"] {
        let sc = scenario(name);
        let r = suite(&sc, "prop41");
        passes(&r, name)?;
        for law in [
            "section.bijective",
            "section.equivariance-objects",
            "section.equivariance-morphisms",
            "section.fiber-preserving",
            "section.composition",
        ] {
            has(&r, law)?;
        }
        let r = suite(&sc, "prop42");
        passes(&r, name)?;
        has(&r, "automorphism.composition-correspondence")?;
    }
    Ok("s3-quiver and z4-quiver".into())
}

fn cocycle() -> Outcome {
    let sc = scenario("s3-cocycle");
    ensure(sc.quiver().map_err(|e| e.to_string())?.object_count() == 6, || {
        "base is not 6 objects".into()
    })?;
    let r = suite(&sc, "cocycle");
    passes(&r, "s3-cocycle")?;
    has(&r, "cocycle.condition")?;
    let r = suite(&sc, "prop51");
    passes(&r, "s3-cocycle")?;
    exhaustive(&r, "prop51")?;
    has(&r, "prop51.naturality")?;
    has(&r, "prop51.h-component")?;
    let broken = suite(&scenario("s3-cocycle-broken"), "cocycle");
    let rec = broken
        .record("cocycle.condition")
        .ok_or("no cocycle.condition record")?;
    ensure(!rec.passed(), || "perturbation went unnoticed".into())?;
    let w = rec.witness.clone().unwrap_or_default();
    ensure(w.contains("o2"), || format!("witness not at the perturbed object: {w}"))?;
    ensure(rec.failures * 10 <= rec.checked, || {
        format!("{} of {} failed", rec.failures, rec.checked)
    })?;
    Ok(format!(
        "perturbation caught at {} of {} checks: {w}",
        rec.failures, rec.checked
    ))
}

fn transition() -> Outcome {
    let r = suite(&scenario("s3-cocycle"), "transition-cocycle");
    passes(&r, "s3-cocycle")?;
    exhaustive(&r, "s3-cocycle")?;
    has(&r, "transition.cocycle")?;
    Ok(format!("{} laws", r.records.len()))
}

fn twisted() -> Outcome {
    let sc = scenario("z4-quiver");
    let r = suite(&sc, "prop61");
    passes(&r, "z4-quiver")?;
    exhaustive(&r, "z4-quiver")?;
    for law in [
        "eta.homomorphism",
        "twisted.E-identity-U",
        "twisted.E-composition-U",
        "twisted.composition-via-E",
        "twisted.degenerates-to-product",
    ] {
        has(&r, law)?;
    }
    let so2 = scenario("so2-constant");
    ensure(so2.tolerances.group <= 1e-9, || "SO(2) tolerance too loose".into())?;
    let r = suite(&so2, "prop61");
    passes(&r, "so2-constant")?;
    ensure(r.records.iter().any(|x| x.mode == Mode::Sampled), || {
        "SO(2) instance was not sampled".into()
    })?;
    let bad = suite(&scenario("eta-not-homomorphic"), "prop61");
    ensure(!bad.passed(), || "a non-homomorphic twist passed".into())?;
    Ok("Z4 quiver exhaustive, SO(2) paths sampled".into())
}

fn transport() -> Outcome {
    let t = Instant::now();
    let conn = Connection::so2_constant(std::f64::consts::FRAC_PI_2);
    let unit = SampledPath::new(1, &[vec![0.0], vec![1.0]]).map_err(|e| e.to_string())?;
    let exact = constant_closed_form(&conn, &unit).ok_or("no closed form")?;
    let eta = parallel_transport(&conn, &unit, 10_000).map_err(|e| e.to_string())?;
    let err = conn.group().distance(&eta, &exact);
    ensure(err <= 1e-9, || format!("error {err:e} at 1e4 substeps"))?;
    let so2 = convergence(&conn, &unit, &exact, 16, 3).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(so2.order_at_least(2.0), || format!("SO(2) orders {:?}", so2.orders))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;

    let sc = scenario("so3-linear");
    let lin = sc.connection().map_err(|e| e.to_string())?;
    let diag = sc.named_path("diagonal").map_err(|e| e.to_string())?;
    let reference = parallel_transport(&lin, &diag, 16 << 10).map_err(|e| e.to_string())?;
    let so3 = convergence(&lin, &diag, &reference, 16, 3).map_err(|e| e.to_string())?;
    ensure(so3.orders.len() == 3 && so3.orders.iter().all(|o| *o >= 2.0), || {
        format!("SO(3) orders {:?}", so3.orders)
    })?;
    let orders: Vec<String> = so3.orders.iter().map(|o| format!("{o:.4}")).collect();
    Ok(format!(
        "error {err:.1e}; SO(2) exact to rounding ({}); SO(3) linear orders {}; {:.2} ms",
        if so2.is_exact() {
            "all refinements"
        } else {
            "not all refinements"
        },
        orders.join(", "),
        elapsed.as_secs_f64() * 1e3
    ))
}

fn prop62() -> Outcome {
    let mut out = Vec::new();
    for name in ["so2-constant", "so3-linear"] {
        let sc = scenario(name);
        ensure(sc.decorated_pairs() >= 50, || {
            format!("{name}: only {} pairs", sc.decorated_pairs())
        })?;
        ensure(sc.tolerances.iso <= 1e-6, || {
            format!("{name}: iso tolerance {}", sc.tolerances.iso)
        })?;
        let (r, t) = timed(|| suite(&sc, "prop62"));
        passes(&r, name)?;
        for law in [
            "prop62.source",
            "prop62.target",
            "prop62.composition",
            "prop62.equivariance",
            "prop62.inverse-round-trip",
        ] {
            has(&r, law)?;
        }
        ensure(t < Duration::from_secs(30), || format!("{name} took {t:?}"))?;
        out.push(format!(
            "{name} {} pairs in {:.2} s",
            sc.decorated_pairs(),
            t.as_secs_f64()
        ));
    }
    Ok(out.join("; "))
}

const SCENARIOS: &[&str] = &[
    "s3-catalog",
    "broken-peiffer",
    "z4-quiver",
    "z4-parallel",
    "s3-quiver",
    "s3-cocycle",
    "s3-cocycle-broken",
    "eta-not-homomorphic",
    "so2-constant",
    "so3-linear",
    "zero-connection",
];

fn determinism() -> Outcome {
    let mut n = 0;
    for name in SCENARIOS {
        let sc = scenario(name);
        for s in selected_suites(&sc) {
            let run = |exec| {
                run_suite_with(&sc, &s, &sc.checker().with_exec(exec))
                    .map(|r| r.to_jsonl(false))
                    .map_err(|e| format!("{name}/{s}: {e}"))
            };
            let a = run(Exec::Parallel)?;
            let b = run(Exec::Parallel)?;
            let c = run(Exec::Sequential)?;
            ensure(a == b, || format!("{name}/{s} differs between runs"))?;
            ensure(a == c, || format!("{name}/{s} differs between parallel and sequential"))?;
            n += 1;
        }
    }
    Ok(format!("{n} suite runs byte-identical, parallel and sequential"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("crossed-module axioms on the catalog", crossed_module_axioms),
        ("exchange law", exchange_law),
        ("functor round-trip on 3-object quivers", prop31_roundtrip),
        ("categorical group of functors", prop34),
        ("section trivializations", prop41),
        ("cocycle and its natural transformation", cocycle),
        ("transition cocycle", transition),
        ("twisted product bundle", twisted),
        ("transport numerics", transport),
        ("decorated bundle isomorphism", prop62),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
