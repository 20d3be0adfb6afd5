//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p pinkey-cli --test acceptance`. Every instance is
//! drawn from a fixed seed, so the suite is reproducible.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use pinkey::audit::{audit, security_index_bruteforce, AuditFailure};
use pinkey::capacity::{check_objective_forms, solve_capacity};
use pinkey::model::pairs;
use pinkey::packing::{
    max_disjoint_paths, min_cut, spanning_packing, steiner_packing, SteinerMode, TreePacking,
    DEFAULT_EXACT_EDGE_CAP,
};
use pinkey::partition::{nash_williams_count, spanning_rate, upper_bound};
use pinkey::protocol::{draw_edge_keys, run_protocol};
use pinkey::{Multigraph, PairPmf, PinModel, Rational, TerminalSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest allowed the difference between the two objective forms on random vertices.
const OBJECTIVE_TOLERANCE: f64 = 1e-9;
/// Largest edge count at which the enumeration audit must agree with rank.
const BRUTEFORCE_AGREEMENT_EDGES: usize = 16;
/// Edge cap for the exact Steiner search in the sandwich criterion.
const SANDWICH_EXACT_CAP: u64 = DEFAULT_EXACT_EDGE_CAP;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn random_model(rng: &mut ChaCha8Rng, m: usize, max_p: i64, max_q: i64) -> PinModel {
    let w: Vec<_> = pairs(m)
        .map(|(i, j)| (i, j, q(rng.gen_range(0..=max_p), rng.gen_range(1..=max_q))))
        .collect();
    PinModel::exact(m, w).unwrap()
}

fn random_subset(rng: &mut ChaCha8Rng, m: usize, size: usize) -> TerminalSet {
    let mut all: Vec<usize> = (1..=m).collect();
    all.shuffle(rng);
    TerminalSet::new(m, all[..size].iter().copied()).unwrap()
}

fn exhaustive_min_cut(g: &Multigraph, s: usize, t: usize) -> u64 {
    (0u64..1 << g.m())
        .filter(|x| x >> (s - 1) & 1 == 1 && x >> (t - 1) & 1 == 0)
        .map(|x| g.cut_size(x))
        .min()
        .unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pair_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pairs_checked = 0;
    for _ in 0..200 {
        let m = rng.gen_range(2..=6);
        let model = random_model(&mut rng, m, 8, 4);
        let n0 = model.base_scale().unwrap();
        let g = model.realize_multigraph(n0).unwrap();
        for (s, t) in pairs(m) {
            let a = TerminalSet::new(m, [s, t]).unwrap();
            let c = solve_capacity(&model, &a).unwrap().value;
            let cut = min_cut(&g, s, t).unwrap().value;
            let paths = max_disjoint_paths(&g, s, t).unwrap().len() as u64;
            let rate = q(cut as i64, n0 as i64);
            let ub = upper_bound(&model, &a).unwrap().value;
            ensure(c == rate && c == ub && paths == cut, || {
                format!("m={m} A={a}: C={c} cut rate={rate} UB={ub} paths={paths}")
            })?;
            pairs_checked += 1;
        }
    }
    Ok(format!("200 models, {pairs_checked} pairs"))
}

fn spanning_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.gen_range(2..=6);
        let model = random_model(&mut rng, m, 8, 4);
        let full = TerminalSet::full(m).unwrap();
        let c = solve_capacity(&model, &full).unwrap().value;
        let sr = spanning_rate(&model).unwrap().value;
        let ub = upper_bound(&model, &full).unwrap().value;
        ensure(c == sr && c == ub, || {
            format!("m={m}: C={c} spanning={sr} UB={ub}")
        })?;
        let n0 = model.base_scale().unwrap();
        for k in 1..=8 {
            let n = k * n0;
            let nw = nash_williams_count(&model.realize_multigraph(n).unwrap())
                .unwrap()
                .count;
            let gap = sr.clone() - q(nw as i64, n as i64);
            let allowed = q(m as i64 - 1, n as i64);
            ensure(gap >= q(0, 1) && gap < allowed, || {
                format!("m={m} n={n}: spanning rate {sr}, NW/n = {nw}/{n}")
            })?;
            worst = worst.max(pinkey::model::rational_to_f64(&(gap / allowed)));
        }
    }
    Ok(format!(
        "200 models, k <= 8, largest gap/allowed = {worst:.3}"
    ))
}

fn packing_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let m = rng.gen_range(2..=7);
        let triples: Vec<_> = pairs(m)
            .map(|(i, j)| (i, j, rng.gen_range(0..=5u64)))
            .collect();
        let g = Multigraph::new(m, triples).unwrap();
        for (s, t) in pairs(m) {
            let paths = max_disjoint_paths(&g, s, t).unwrap();
            paths.validate(&g).map_err(|e| e.to_string())?;
            let oracle = exhaustive_min_cut(&g, s, t);
            ensure(paths.len() as u64 == oracle, || {
                format!("{g:?} ({s},{t}): {} paths, cut {oracle}", paths.len())
            })?;
        }
        let trees = spanning_packing(&g).unwrap();
        trees.validate(&g).map_err(|e| e.to_string())?;
        let nw = nash_williams_count(&g).unwrap().count;
        ensure(trees.len() as u64 == nw, || {
            format!("{g:?}: {} trees, NW {nw}", trees.len())
        })?;
    }
    Ok("500 multigraphs, every pair".into())
}

fn sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut instances = 0;
    let mut draws = 0;
    let mut strict = 0;
    while instances < 60 {
        draws += 1;
        ensure(draws < 10_000, || {
            "could not draw enough instances under the cap".into()
        })?;
        let m = rng.gen_range(4..=5);
        let model = random_model(&mut rng, m, 2, 2);
        let size = rng.gen_range(3..m);
        let a = random_subset(&mut rng, m, size);
        let n0 = model.base_scale().unwrap();
        let g2 = model.realize_multigraph(2 * n0).unwrap();
        if g2.edge_count() > SANDWICH_EXACT_CAP {
            continue;
        }
        let c = solve_capacity(&model, &a).unwrap().value;
        let mut rates = Vec::new();
        for n in [n0, 2 * n0] {
            let g = model.realize_multigraph(n).unwrap();
            let exact = steiner_packing(&g, &a, SteinerMode::Exact).map_err(|e| e.to_string())?;
            let greedy = steiner_packing(&g, &a, SteinerMode::Greedy).map_err(|e| e.to_string())?;
            exact.validate(&g).map_err(|e| e.to_string())?;
            greedy.validate(&g).map_err(|e| e.to_string())?;
            let nc = c.clone() * q(n as i64, 1);
            let (mu, gr) = (exact.len() as i64, greedy.len() as i64);
            ensure(nc >= q(mu, 1) && mu >= gr, || {
                format!("m={m} A={a} n={n}: nC={nc} exact={mu} greedy={gr}")
            })?;
            if gr < mu {
                strict += 1;
            }
            rates.push(q(mu, n as i64));
        }
        ensure(rates[1] >= rates[0], || {
            format!(
                "m={m} A={a}: rate {} at n0 then {} at 2n0",
                rates[0], rates[1]
            )
        })?;
        instances += 1;
    }
    Ok(format!(
        "{instances} instances (exact cap {SANDWICH_EXACT_CAP} edges, {draws} draws), greedy below exact {strict} times"
    ))
}

struct RunCase {
    graph: Multigraph,
    packing: TreePacking,
    seed: u64,
}

fn run_cases() -> Vec<RunCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    (0..1000u64)
        .map(|seed| {
            let m = rng.gen_range(2..=5);
            let model = random_model(&mut rng, m, 2, 2);
            let size = rng.gen_range(2..=m);
            let a = random_subset(&mut rng, m, size);
            let k = rng.gen_range(1..=2);
            let graph = model
                .realize_multigraph(k * model.base_scale().unwrap())
                .unwrap();
            let mode = if graph.edge_count() <= 12 {
                SteinerMode::Exact
            } else {
                SteinerMode::Greedy
            };
            let packing = steiner_packing(&graph, &a, mode).unwrap();
            RunCase {
                graph,
                packing,
                seed,
            }
        })
        .collect()
}

fn protocol_correctness(cases: &[RunCase]) -> Outcome {
    let mut keys_total = 0;
    for c in cases {
        let run = run_protocol(&c.graph, &c.packing, &draw_edge_keys(&c.graph, c.seed))
            .map_err(|e| e.to_string())?;
        ensure(run.accounting_holds(), || {
            format!("seed {}: accounting", c.seed)
        })?;
        for &i in c.packing.target().members() {
            let k = run.recover_key(i).map_err(|e| e.to_string())?;
            ensure(k == run.key(), || {
                format!("seed {}: terminal {i} recovered a different key", c.seed)
            })?;
        }
        keys_total += run.key().len();
    }
    Ok(format!("{} runs, {keys_total} key bits", cases.len()))
}

fn perfect_secrecy(cases: &[RunCase]) -> Outcome {
    let (mut brute, mut faults) = (0, 0);
    for c in cases {
        let run = run_protocol(&c.graph, &c.packing, &draw_edge_keys(&c.graph, c.seed))
            .map_err(|e| e.to_string())?;
        let report = audit(&run).map_err(|e| e.to_string())?;
        ensure(report.passed() && report.security.s == q(0, 1), || {
            format!("seed {}: {:?}", c.seed, report.failures)
        })?;
        if run.edge_count() <= BRUTEFORCE_AGREEMENT_EDGES {
            let b = security_index_bruteforce(&run).map_err(|e| e.to_string())?;
            ensure(b.agrees_with(&report.security), || {
                format!("seed {}: rank and enumeration differ", c.seed)
            })?;
            brute += 1;
        }
        // a broadcast received by a target terminal; every tree with two or
        // more edges has one
        let target = c.packing.target();
        let Some(k) = run
            .transcript()
            .iter()
            .position(|b| target.contains(b.edge.other(b.terminal)))
        else {
            ensure(run.transcript().is_empty(), || {
                format!("seed {}: no broadcast reaches the target", c.seed)
            })?;
            continue;
        };
        for bad in [
            run.with_flipped_broadcast(k),
            run.with_key_from_broadcast(0, k),
        ] {
            let r = audit(&bad).map_err(|e| e.to_string())?;
            let recovery = r
                .failures
                .iter()
                .any(|f| matches!(f, AuditFailure::RecoveryMismatch { .. }));
            ensure(r.security.s >= q(1, 1) || recovery, || {
                format!("seed {}: fault went unnoticed", c.seed)
            })?;
            faults += 1;
        }
    }
    ensure(brute >= 100, || {
        format!("only {brute} runs small enough for enumeration")
    })?;
    Ok(format!(
        "{} runs s = 0, {brute} by enumeration, {faults} faults caught",
        cases.len()
    ))
}

fn random_pmf(rng: &mut ChaCha8Rng) -> PairPmf {
    let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let raw: Vec<f64> = (0..r * c).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = raw.iter().sum();
    PairPmf::new(r, c, raw.iter().map(|x| x / total).collect()).unwrap()
}

fn objective_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let pmfs: Vec<_> = pairs(3)
            .map(|(i, j)| (i, j, random_pmf(&mut rng)))
            .collect();
        let model = PinModel::from_pmfs(3, pmfs).unwrap();
        let size = rng.gen_range(2..=3);
        let a = random_subset(&mut rng, 3, size);
        let report = check_objective_forms(&model, &a, 100, &mut rng).map_err(|e| e.to_string())?;
        worst = worst.max(report.max_discrepancy);
    }
    ensure(worst <= OBJECTIVE_TOLERANCE, || {
        format!("discrepancy {worst:e}")
    })?;
    Ok(format!(
        "100 models x 100 vertices, max discrepancy {worst:.1e} <= {OBJECTIVE_TOLERANCE:e}"
    ))
}

fn cli_goldens() -> Outcome {
    let tests = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    let cases = [
        ("triangle.json", None, "3/2"),
        ("path.json", Some("1,3"), "1"),
        ("path.json", None, "1"),
        ("star.json", None, "1"),
    ];
    for (file, set, expected) in cases {
        let mut args = vec![
            "capacity".to_string(),
            format!("models/{file}"),
            "--format".into(),
            "structured".into(),
        ];
        if let Some(s) = set {
            args.extend(["--set".into(), s.into()]);
        }
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_pinkey"))
                .current_dir(&tests)
                .args(&args)
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        ensure(a.status.success(), || {
            format!("{file}: {}", String::from_utf8_lossy(&a.stderr))
        })?;
        ensure(a.stdout == b.stdout, || {
            format!("{file}: output differs between runs")
        })?;
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
        ensure(v["version"] == 1 && v["capacity"] == expected, || {
            format!(
                "{file} {set:?}: capacity {} expected {expected}",
                v["capacity"]
            )
        })?;
        let golden = match (file, set) {
            ("triangle.json", None) => Some("triangle_capacity.json"),
            ("path.json", Some(_)) => Some("path_capacity_13.json"),
            ("path.json", None) => Some("path_capacity_all.json"),
            ("star.json", None) => Some("star_capacity.json"),
            _ => None,
        };
        if let Some(g) = golden {
            let want = std::fs::read(tests.join("golden").join(g)).map_err(|e| e.to_string())?;
            ensure(want == a.stdout, || {
                format!("{file}: differs from golden/{g}")
            })?;
        }
    }
    Ok("triangle 3/2, path {1,3} 1, path M 1, star 1; byte-stable".into())
}

fn main() {
    let cases = run_cases();
    let criteria: Vec<Criterion> = vec![
        (
            "pair capacity = min-cut rate = partition bound",
            Box::new(pair_equality),
        ),
        (
            "full-set capacity = spanning rate = partition bound",
            Box::new(spanning_equality),
        ),
        ("Menger and tree-count oracles", Box::new(packing_oracles)),
        (
            "capacity >= exact packing >= greedy packing",
            Box::new(sandwich),
        ),
        (
            "protocol recovery and accounting",
            Box::new(|| protocol_correctness(&cases)),
        ),
        (
            "zero leakage, method agreement, faults detected",
            Box::new(|| perfect_secrecy(&cases)),
        ),
        (
            "mutual-information and entropy objectives agree",
            Box::new(objective_forms),
        ),
        ("worked examples through the CLI", Box::new(cli_goldens)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
