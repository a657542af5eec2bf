//! Acceptance suite. Runs as a plain program so the PASS/FAIL lines always
//! print; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use spinmcg::loopspace::LoopModel;
use spinmcg::maps::{self, PartialMap, TailPolicy};
use spinmcg::qhopf::afunctor::{a_functor_dims, exterior_dims};
use spinmcg::verify::{self, Report, Target};

const TOP: u32 = 12;
const BETTI_TOP: u32 = 10;

type Outcome = Result<(), String>;

fn suite(target: Target, max_degree: u32) -> Result<Report, String> {
    let r = verify::run(target, max_degree).map_err(|e| e.to_string())?;
    if r.passed {
        Ok(r)
    } else {
        let failed: Vec<String> = r
            .checks
            .iter()
            .filter(|c| !c.ok())
            .map(|c| format!("{} {}/{} {:?}", c.name, c.passed, c.total, c.failures))
            .collect();
        Err(format!("{target}: {}", failed.join("; ")))
    }
}

fn within(t: Duration, limit: Duration, what: &str) -> Outcome {
    if t <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    suite(Target::BaseLambda, TOP)?;
    within(start.elapsed(), Duration::from_secs(1), "base lambda suite")
}

fn c2() -> Outcome {
    let start = Instant::now();
    let r = suite(Target::LambdaCommutation, TOP)?;
    if r.checks.iter().any(|c| c.total == 0) {
        return Err("an equation had no instances".into());
    }
    within(start.elapsed(), Duration::from_secs(60), "commutation suite")
}

fn c3() -> Outcome {
    suite(Target::LambdaOnto, TOP)?;
    suite(Target::LambdaPrimeOnto, TOP).map(drop)
}

fn c4() -> Outcome {
    let r = suite(Target::LambdaDoubleGap, TOP)?;
    match r.fact("witness") {
        Some("p_(2,1) + p_3") => Ok(()),
        other => Err(format!("witness {other:?}")),
    }
}

fn c5() -> Outcome {
    suite(Target::PartialInjective, TOP).map(drop)
}

fn c6() -> Outcome {
    suite(Target::TransferComposite, TOP).map(drop)
}

fn c7() -> Outcome {
    suite(Target::FirstLoop, TOP)?;
    let r = suite(Target::SecondLoop, TOP)?;
    // Independent of the suite: rebuild both models and compare laws.
    let one = LoopModel::first(maps::rp_plus(), TOP + 1);
    let two = one.next().map_err(|e| e.to_string())?;
    for m in [&one, &two] {
        let p = m.presentation().map_err(|e| e.to_string())?;
        if a_functor_dims(&p, TOP) != exterior_dims(p.degrees(), TOP) {
            return Err(format!("dimension law fails at level {}", m.level()));
        }
    }
    if two.is_polynomial().map_err(|e| e.to_string())? {
        return Err("second loop space reported polynomial".into());
    }
    let (d, _) = two.square_zero_witness().map_err(|e| e.to_string())?.ok_or("no square-zero generator")?;
    if d + 1 != 2 {
        return Err(format!("square-zero generator in first-loop degree {}", d + 1));
    }
    r.fact("witness").map(drop).ok_or_else(|| "witness not reported".into())
}

fn c8() -> Outcome {
    suite(Target::BettiBound, BETTI_TOP).map(drop)
}

fn c9() -> Outcome {
    let [z, p] = TailPolicy::ALL;
    let e = |e: maps::MapError| e.to_string();
    let same = |what: &str, a: String, b: String| if a == b { Ok(()) } else { Err(format!("{what}: {a} vs {b}")) };
    let ranks = |pol| -> Result<String, String> {
        let rows = PartialMap::new(pol).injectivity(TOP).map_err(e)?;
        Ok(format!("{:?}", rows.iter().map(|r| (r.source_dim, r.rank, r.primitive_dim, r.primitive_rank)).collect::<Vec<_>>()))
    };
    same("injectivity ranks", ranks(z)?, ranks(p)?)?;
    let kernel = |pol| maps::loop_partial_kernel_dims(pol, TOP).map(|v| format!("{v:?}")).map_err(e);
    same("kernel dims", kernel(z)?, kernel(p)?)?;
    let coker = |pol| {
        maps::cokernel_generators(pol, BETTI_TOP)
            .map(|c| format!("{:?} {}", c.rows.iter().map(|r| (r.model_dim, r.image_dim, r.generators)).collect::<Vec<_>>(), c.closed_under_squaring))
            .map_err(e)
    };
    same("cokernel dims", coker(z)?, coker(p)?)?;
    let betti = |pol| maps::spin_betti(pol, BETTI_TOP).map(|t| format!("{:?}", t.dims())).map_err(e);
    same("betti", betti(z)?, betti(p)?)?;
    let bound = |pol| {
        maps::betti_bound_check(pol, BETTI_TOP).map(|r| format!("{:?}", r.iter().map(|b| b.bound).collect::<Vec<_>>())).map_err(e)
    };
    same("bound", bound(z)?, bound(p)?)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, t: Duration, r: Outcome| {
        match &r {
            Ok(()) => println!("PASS  {n:>2}  {name}  ({t:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {n:>2}  {name}  ({t:.2?}): {why}");
            }
        }
    };

    // Betti table first, on cold caches.
    let t = Instant::now();
    let betti = maps::spin_betti(TailPolicy::Primitive, BETTI_TOP).map_err(|e| e.to_string());
    let betti_time = t.elapsed();
    let betti_ok = betti.as_ref().map(|b| b.dims()[0] == 1).unwrap_or(false);

    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("lambda on base classes", c1),
        ("lambda commutation with Q", c2),
        ("lambda onto QH, lambda' onto PH", c3),
        ("lambda'' misses p_(2,1) + p_3", c4),
        ("partial injective, both tails", c5),
        ("transfer composite and kernel", c6),
        ("loop-space dimension laws", c7),
        ("betti bound", c8),
        ("cross-policy determinism", c9),
    ];
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        report(i as u32 + 1, name, t.elapsed(), r);
    }

    let total = start.elapsed();
    let perf = within(total, Duration::from_secs(300), "full suite")
        .and_then(|_| within(betti_time, Duration::from_secs(60), "betti table to degree 10"))
        .and_then(|_| if betti_ok { Ok(()) } else { Err(format!("betti table: {betti:?}")) });
    report(10, &format!("performance (betti {betti_time:.2?}, suite {total:.2?})"), total, perf);

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
