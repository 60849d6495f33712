//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chrono::DateTime;
use num_bigint::BigUint;
use rand::Rng;

use fixit::bench::{self, BenchRow, Mode};
use fixit::dsl::{eval_rule, ConcreteRule, FixExpr, PosExpr, SubLr};
use fixit::oracle::{brute_substrings, nonlazy_synth, OracleBounds};
use fixit::partition::{group_by_shape, learn_rules, LearnConfig, Shape};
use fixit::samples;
use fixit::store::{canonical_json, RuleStore};
use fixit::synthesis::{
    apply_symbolic, concretize, count_concrete, rank_select, synth_rules, synth_substrings,
    CandKey, Example, SymFix, SymbolicRule, SynthConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, format!("took {took:?}, limit {limit:?}"))
}

fn ipos0_sublr(right: PosExpr, suffix: &str, var: usize) -> FixExpr {
    FixExpr::SubLr(SubLr {
        left: PosExpr::Ipos(0),
        right,
        prefix: String::new(),
        suffix: suffix.into(),
        var,
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let es = samples::javac_missing_extension(&["Employee", "Pair"]);
    let rule = synth_rules(&es, &SynthConfig::default()).ok_or("synthesis failed")?;
    let top = rank_select(&rule);
    check(
        top.fix[0] == FixExpr::Str("javac".into())
            && top.fix[1] == ipos0_sublr(PosExpr::Ipos(0), ".java", 1),
        format!("selected fix {:?}", top.fix),
    )?;
    let held = samples::javac_missing_extension(&["Greeter"]).remove(0);
    let out = eval_rule(&top, &held.cmd, &held.err).map(|t| t.join());
    check(
        out.as_deref() == Some("javac Greeter.java"),
        format!("held-out output {out:?}"),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok("javac Greeter -> javac Greeter.java".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let cfg = SynthConfig::default();
    let es = samples::run_meta();
    let rule = synth_rules(&es, &cfg).ok_or("synthesis failed")?;
    let SymFix::Candidates(cs) = &rule.fix()[1] else {
        return Err("fix position 1 is constant".into());
    };
    let key = CandKey {
        var: 1,
        prefix: String::new(),
        suffix: String::new(),
    };
    let pairs = cs.get(&key).ok_or("no entry for variable 1")?;
    let dot = |k| PosExpr::Cpos {
        c: '.',
        k,
        delta: 0,
    };
    for pair in [
        (PosExpr::Ipos(0), PosExpr::Ipos(-5)),
        (PosExpr::Ipos(0), dot(1)),
        (PosExpr::Ipos(0), dot(-1)),
    ] {
        check(pairs.contains(&pair), format!("missing {pair:?}"))?;
    }
    let vars = rule.vars();
    let lazy: BTreeSet<SubLr> = cs.iter().collect();
    let oracle = brute_substrings(&es, &vars, 1, &OracleBounds::for_examples(&es, &cfg));
    check(
        lazy == oracle,
        format!("engine {} vs oracle {}", lazy.len(), oracle.len()),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "{} candidates over vars {vars:?}, equal to oracle",
        lazy.len()
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let rule =
        synth_rules(&samples::uniform_pair(), &SynthConfig::default()).ok_or("synthesis failed")?;
    let n = count_concrete(&rule);
    check(n == BigUint::from(48u32), format!("{n} candidates"))?;
    within(start, Duration::from_secs(1))?;
    Ok("48 candidates".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let es = samples::mixed_corpus();
    let groups = group_by_shape(&es);
    let s1: BTreeSet<&Example> = es[..4].iter().collect();
    let s2: BTreeSet<&Example> = es[4..].iter().collect();
    let got: Vec<BTreeSet<&Example>> = groups.values().map(|g| g.iter().collect()).collect();
    check(got == vec![s1, s2], "shape groups differ")?;

    let result = learn_rules(&es, &LearnConfig::default());
    check(
        result.rules.len() == 3,
        format!("{} rules", result.rules.len()),
    )?;
    let blocks: BTreeSet<BTreeSet<&Example>> = result
        .rules
        .iter()
        .map(|r| r.examples.iter().collect())
        .collect();
    let expected: BTreeSet<BTreeSet<&Example>> = [&es[0..2], &es[2..4], &es[4..6]]
        .into_iter()
        .map(|b| b.iter().collect())
        .collect();
    check(blocks == expected, "blocks differ")?;
    let composer = result
        .rules
        .iter()
        .find(|r| r.examples.contains(&es[2]))
        .ok_or("no composer rule")?;
    check(
        composer.shape
            == Shape {
                cmd: 2,
                err: 8,
                fix: 2,
            },
        format!("composer shape {}", composer.shape),
    )?;
    match &rank_select(&composer.rule).fix[1] {
        FixExpr::SubLr(s) if s.var == 8 => {}
        other => return Err(format!("composer fix copies {other:?}")),
    }
    within(start, Duration::from_secs(5))?;
    Ok("groups {e1..e4},{e5,e6}; blocks {e1,e2},{e3,e4},{e5,e6}; composer copies index 8".into())
}

/// Concrete rules to check: all of them up to 10^4, else the top one plus
/// random picks.
fn concrete_sample(
    rule: &SymbolicRule,
    rng: &mut common::TestRng,
    samples: usize,
) -> Vec<ConcreteRule> {
    if count_concrete(rule) <= BigUint::from(10_000u32) {
        return concretize(rule).collect();
    }
    let options: Vec<Vec<FixExpr>> = (0..rule.fix().len())
        .map(|i| rule.ranked_options(i))
        .collect();
    let (cmd, err) = rule.match_exprs();
    let mut out = vec![rank_select(rule)];
    while out.len() < samples {
        let fix = options
            .iter()
            .map(|o| o[rng.gen_range(0..o.len())].clone())
            .collect();
        out.push(ConcreteRule {
            cmd: cmd.clone(),
            err: err.clone(),
            fix,
        });
    }
    out
}

fn criterion_5() -> Outcome {
    let mut rng = common::rng(5);
    let cfg = SynthConfig::default();
    let (mut sets, mut tried, mut checked) = (0, 0, 0u64);
    while sets < 200 {
        tried += 1;
        if tried > 5000 {
            return Err(format!("only {sets} synthesizable sets in {tried} draws"));
        }
        let n = rng.gen_range(2..=4);
        let es = common::example_set(&mut rng, n);
        let Some(rule) = synth_rules(&es, &cfg) else {
            continue;
        };
        sets += 1;
        for r in concrete_sample(&rule, &mut rng, 100) {
            checked += 1;
            for e in &es {
                if eval_rule(&r, &e.cmd, &e.err).as_ref() != Some(&e.fix) {
                    return Err(format!("concrete rule {r:?} fails on {e:?}"));
                }
            }
        }
    }
    Ok(format!(
        "{sets} sets, {checked} concrete rules, all reproduce their examples"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = common::rng(6);
    let cfg = SynthConfig::default();
    let mut defined = 0;
    for _ in 0..50 {
        let es = common::example_set(&mut rng, 3);
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let outs: BTreeSet<Option<String>> = perms
            .iter()
            .map(|p| {
                let ordered: Vec<Example> = p.iter().map(|&i| es[i].clone()).collect();
                synth_rules(&ordered, &cfg).map(|r| canonical_json(&r))
            })
            .collect();
        check(
            outs.len() == 1,
            format!("{} distinct results for {es:?}", outs.len()),
        )?;
        if outs.iter().next().unwrap().is_some() {
            defined += 1;
        }
    }
    Ok(format!(
        "50 sets ({defined} synthesizable), identical across all 6 orders"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = common::rng(7);
    let cfg = SynthConfig::default();
    let (mut recovered, mut draws, mut examples) = (0, 0, 0);
    while recovered < 100 {
        draws += 1;
        if draws > 10_000 {
            return Err(format!("only {recovered} usable rules in {draws} draws"));
        }
        let Some((rule, es)) = common::recoverable_rule(&mut rng, 20) else {
            continue;
        };
        let sym = synth_rules(&es, &cfg)
            .ok_or_else(|| format!("synthesis failed for {rule:?} on {es:?}"))?;
        check(
            sym.contains(&rule),
            format!("{rule:?} not represented after {es:?}"),
        )?;
        recovered += 1;
        examples += es.len();
    }
    Ok(format!(
        "100 generator rules recovered ({examples} examples, {draws} draws)"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = common::rng(8);
    let cfg = SynthConfig::default();
    let mut total = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let es = common::example_set(&mut rng, n);
        let first = &es[0];
        let n_in = first.cmd.len() + first.err.len();
        let vars: BTreeSet<usize> = (0..n_in).filter(|_| rng.gen_bool(0.7)).collect();
        let i = rng.gen_range(0..first.fix.len());
        let engine: BTreeSet<SubLr> = synth_substrings(&es, &vars, i, &cfg).iter().collect();
        let oracle = brute_substrings(&es, &vars, i, &OracleBounds::for_examples(&es, &cfg));
        check(
            engine == oracle,
            format!(
                "engine {} vs oracle {} on {es:?}, vars {vars:?}, position {i}",
                engine.len(),
                oracle.len()
            ),
        )?;
        total += engine.len();
    }
    Ok(format!("100 instances equal ({total} candidates in total)"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let sizes = [8, 16, 32, 64];
    let lazy = bench::run(&sizes, Mode::Lazy, 3);
    let eager = bench::run(&sizes, Mode::NonLazy, 1);
    let fmt = |rows: &[BenchRow]| {
        rows.iter()
            .map(|r| format!("{}:{:.4}s", r.size, r.seconds))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let summary = format!("lazy [{}] non-lazy [{}]", fmt(&lazy), fmt(&eager));
    for w in lazy.windows(2) {
        let ratio = w[1].seconds / w[0].seconds;
        check(
            ratio <= 6.0,
            format!(
                "ratio {ratio:.2} from {} to {}; {summary}",
                w[0].size, w[1].size
            ),
        )?;
    }
    for (l, e) in lazy.iter().zip(&eager) {
        check(
            l.seconds <= e.seconds,
            format!("lazy slower at {}; {summary}", l.size),
        )?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(summary)
}

fn criterion_10() -> Outcome {
    let mut rng = common::rng(10);
    let cfg = SynthConfig::default();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("rules.json");
    let mut rules = 0;
    while rules < 100 {
        let n = rng.gen_range(1..=4);
        let es = common::example_set(&mut rng, n);
        let rule = if rng.gen_bool(0.2) {
            nonlazy_synth(&es, &cfg)
        } else {
            synth_rules(&es, &cfg)
        };
        let Some(rule) = rule else { continue };
        let mut store = RuleStore::new();
        let at = DateTime::from_timestamp(rng.gen_range(0..2_000_000_000), 0).unwrap();
        store.insert(rule.clone(), at);
        store.save(&path).map_err(|e| e.to_string())?;
        let loaded = RuleStore::load(&path).map_err(|e| e.to_string())?;
        check(
            loaded == store,
            format!("store differs after reload: {rule:?}"),
        )?;
        let back = &loaded.rules()[0].rule;
        check(
            canonical_json(back) == canonical_json(&rule),
            "canonical form differs",
        )?;
        for e in &es {
            check(
                apply_symbolic(back, &e.cmd, &e.err) == apply_symbolic(&rule, &e.cmd, &e.err),
                "reloaded rule behaves differently",
            )?;
        }
        rules += 1;
    }
    Ok("100 rules survive save/load".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("javac rule reproduced and generalizes", criterion_1),
        ("java source-file candidate set matches oracle", criterion_2),
        ("uniform pair yields 48 candidates", criterion_3),
        ("mixed corpus partitioned into three rules", criterion_4),
        ("soundness over 200 random example sets", criterion_5),
        (
            "order invariance over 50 random 3-example sets",
            criterion_6,
        ),
        ("recovery of 100 random generator rules", criterion_7),
        ("substring enumeration equals brute force", criterion_8),
        (
            "lazy synthesis scales quadratically and beats eager",
            criterion_9,
        ),
        ("store round-trip of 100 random rules", criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({took:.2?}): {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
