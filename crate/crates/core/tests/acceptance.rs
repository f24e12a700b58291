//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use biserial_core::bisected::check_lemma_tl;
use biserial_core::criteria::{certify_obstruction, lem2_check, neighbor_sets, Lem2Direction, Lem2Result};
use biserial_core::linalg::{rref, solve};
use biserial_core::report::replay_report;
use biserial_core::{
    generate_corollary_instance, generate_random_presentation, idempotent_subalgebra, is_biserial_fuller,
    is_special_biserial, parse_instance, run_check, verify_corollary_form, Field, FiniteDimAlgebra, GenerateParams,
    Instance, Matrix, Report, Subspace, Witness,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDOM_COUNT: usize = 200;
const COROLLARY_COUNT: usize = 100;
const LINALG_CASES: usize = 1_000;
const FIXTURE_LIMIT: Duration = Duration::from_secs(1);
const EQUIVALENCE_LIMIT: Duration = Duration::from_secs(600);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Origin {
    Fixture,
    Random,
    Corollary,
}

struct Case {
    name: String,
    origin: Origin,
    inst: Instance,
    alg: FiniteDimAlgebra,
    report: Report,
    elapsed: Duration,
    corollary_ok: bool,
}

struct Suite {
    cases: Vec<Case>,
    random_elapsed: Duration,
}

fn fixture_text(name: &str) -> String {
    let path = format!("{}/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {}", path, e))
}

fn case(name: String, origin: Origin, inst: Instance) -> Case {
    let start = Instant::now();
    let report = run_check(&inst, false).expect("admissible");
    let elapsed = start.elapsed();
    let alg = FiniteDimAlgebra::build(&inst.presentation, inst.options.max_nilpotency).unwrap();
    Case {
        name,
        origin,
        inst,
        alg,
        report,
        elapsed,
        corollary_ok: true,
    }
}

const FIXTURES: &[&str] = &["a3.alg", "loops.alg", "d4-outward.alg", "crossed-pairs.alg", "five-vertex.alg"];

fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let mut cases = Vec::new();
        for f in FIXTURES {
            cases.push(case(f.to_string(), Origin::Fixture, parse_instance(&fixture_text(f)).unwrap()));
        }
        let params = GenerateParams::default();
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for k in 0..RANDOM_COUNT {
            let inst = generate_random_presentation(&mut rng, &params).unwrap();
            cases.push(case(format!("random-{}", k), Origin::Random, inst));
        }
        let random_elapsed = start.elapsed();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..COROLLARY_COUNT {
            let ci = generate_corollary_instance(&mut rng, &params).unwrap();
            let mut c = case(format!("corollary-{}", k), Origin::Corollary, ci.instance);
            c.corollary_ok =
                verify_corollary_form(&c.alg, &ci.bisection, &ci.dtable).is_empty() && check_lemma_tl(&c.alg, &ci.dtable);
            cases.push(c);
        }
        Suite {
            cases,
            random_elapsed,
        }
    })
}

fn report_line(name: &str, failures: &[String], summary: String) {
    if failures.is_empty() {
        println!("PASS {}: {}", name, summary);
    } else {
        println!("FAIL {}: {} ({} failures)", name, summary, failures.len());
        for f in failures.iter().take(20) {
            println!("  {}", f);
        }
    }
    assert!(failures.is_empty(), "{} failed: {:?}", name, &failures[..failures.len().min(5)]);
}

fn all_agree(r: &Report, expected: bool) -> bool {
    let v = &r.verdicts;
    [v.fuller, v.subalgebra_full, v.subalgebra_d4, v.decide]
        .iter()
        .all(|x| *x == Some(expected))
}

#[test]
fn criterion_1_fixture_verdicts() {
    let s = suite();
    let mut failures = Vec::new();
    let by_name = |n: &str| s.cases.iter().find(|c| c.name == n).unwrap();
    for c in s.cases.iter().filter(|c| c.origin == Origin::Fixture) {
        if c.elapsed > FIXTURE_LIMIT {
            failures.push(format!("{} took {:?}", c.name, c.elapsed));
        }
        if c.report.p != 3 {
            failures.push(format!("{} is not over GF(3)", c.name));
        }
    }
    let a3 = &by_name("a3.alg").report;
    if !all_agree(a3, true) || a3.verdicts.nakayama != Some(true) {
        failures.push(format!("a3: {:?}", a3.verdicts));
    }
    let loops = &by_name("loops.alg").report;
    if !all_agree(loops, true) || loops.verdicts.special_biserial != Some(true) || loops.verdicts.nakayama != Some(false)
    {
        failures.push(format!("loops: {:?}", loops.verdicts));
    }
    for (name, kinds) in [("d4-outward.alg", &[1u8][..]), ("crossed-pairs.alg", &[3u8, 4][..])] {
        let c = by_name(name);
        if !all_agree(&c.report, false) {
            failures.push(format!("{}: {:?}", name, c.report.verdicts));
        }
        match &c.report.witnesses.decide {
            Some(Witness::Obstruction(w)) if kinds.contains(&w.kind) => {
                if !certify_obstruction(&c.alg, &c.alg.opposite(), w).certified {
                    failures.push(format!("{}: witness not certified", name));
                }
            }
            other => failures.push(format!("{}: unexpected witness {:?}", name, other.is_some())),
        }
    }
    // recorded after the first validated run: the three methods agree on
    // "not biserial"
    let five = &by_name("five-vertex.alg").report;
    if !all_agree(five, false) {
        failures.push(format!("five-vertex: {:?}", five.verdicts));
    }
    report_line("criterion 1 (fixtures)", &failures, format!("{} fixtures", FIXTURES.len()));
}

#[test]
fn criterion_2_theorem_equivalence() {
    let s = suite();
    let mut failures = Vec::new();
    let random: Vec<&Case> = s.cases.iter().filter(|c| c.origin == Origin::Random).collect();
    let mut yes = 0;
    for c in &random {
        let v = &c.report.verdicts;
        match v.fuller {
            Some(b) if all_agree(&c.report, b) => yes += b as usize,
            _ => failures.push(format!("{}: {:?}\n{}", c.name, v, c.report.instance)),
        }
        if c.inst.presentation.quiver().num_vertices() > 4 || c.inst.presentation.quiver().num_arrows() > 6 {
            failures.push(format!("{}: outside the size bounds", c.name));
        }
        if c.report.dims.nilpotency_index > 4 {
            failures.push(format!("{}: nilpotency index above four", c.name));
        }
    }
    if random.len() < RANDOM_COUNT {
        failures.push(format!("only {} instances", random.len()));
    }
    if s.random_elapsed > EQUIVALENCE_LIMIT {
        failures.push(format!("took {:?}", s.random_elapsed));
    }
    report_line(
        "criterion 2 (theorem equivalence)",
        &failures,
        format!(
            "{} instances, {} biserial, {} not, {:.1?}",
            random.len(),
            yes,
            random.len() - yes,
            s.random_elapsed
        ),
    );
}

#[test]
fn criterion_3_corollary_soundness() {
    let s = suite();
    let mut failures = Vec::new();
    let cases: Vec<&Case> = s.cases.iter().filter(|c| c.origin == Origin::Corollary).collect();
    for c in &cases {
        if c.report.verdicts.fuller != Some(true) {
            failures.push(format!("{}: fuller {:?}\n{}", c.name, c.report.verdicts.fuller, c.report.instance));
        }
        if !all_agree(&c.report, true) {
            failures.push(format!("{}: {:?}", c.name, c.report.verdicts));
        }
        if !c.corollary_ok {
            failures.push(format!("{}: corollary form or lemma check failed", c.name));
        }
    }
    if cases.len() < COROLLARY_COUNT {
        failures.push(format!("only {} instances", cases.len()));
    }
    report_line(
        "criterion 3 (corollary soundness)",
        &failures,
        format!("{} generated instances", cases.len()),
    );
}

#[test]
fn criterion_4_witness_replay() {
    let s = suite();
    let mut failures = Vec::new();
    let mut checked = 0;
    for c in &s.cases {
        let json = serde_json::to_string(&c.report).unwrap();
        let back: Report = match serde_json::from_str(&json) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{}: {}", c.name, e));
                continue;
            }
        };
        // the report alone carries the instance text
        let inst = parse_instance(&back.instance).unwrap();
        if inst != c.inst {
            failures.push(format!("{}: embedded instance differs", c.name));
        }
        let out = replay_report(&back, &inst);
        checked += out.checked;
        failures.extend(out.failures.into_iter().map(|f| format!("{}: {}", c.name, f)));
        if back.witnesses.decide.is_none() {
            failures.push(format!("{}: no witness emitted", c.name));
        }
    }
    report_line(
        "criterion 4 (witness replay)",
        &failures,
        format!("{} witnesses re-verified", checked),
    );
}

#[test]
fn criterion_5_closure() {
    let s = suite();
    let mut failures = Vec::new();
    let (mut subsets, mut special) = (0, 0);
    for c in &s.cases {
        let n = c.alg.quiver().num_vertices();
        if c.report.verdicts.fuller == Some(true) && n <= 4 {
            for mask in 1u32..(1 << n) {
                let set: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                let sub = idempotent_subalgebra(&c.alg, &set);
                subsets += 1;
                if is_biserial_fuller(&sub.algebra, 14).map(|o| o.biserial) != Ok(true) {
                    failures.push(format!("{}: eAe for {:?} not biserial", c.name, set));
                }
            }
        }
        if c.report.verdicts.special_biserial == Some(true) {
            let mut sets = BTreeSet::new();
            for l in 0..n {
                let ns = neighbor_sets(c.alg.quiver(), l);
                for j in std::iter::once(ns.neighbors.clone()).chain(ns.j_sets.clone()) {
                    let mut s: Vec<usize> = j;
                    s.push(l);
                    s.sort_unstable();
                    sets.insert(s);
                }
            }
            for set in sets {
                special += 1;
                let sub = idempotent_subalgebra(&c.alg, &set);
                if is_special_biserial(&sub.algebra).is_none() {
                    failures.push(format!("{}: eAe for {:?} not special biserial", c.name, set));
                }
            }
        }
    }
    report_line(
        "criterion 5 (closure)",
        &failures,
        format!("{} biserial subalgebras, {} special biserial subalgebras", subsets, special),
    );
}

#[test]
fn criterion_6_local_colocal_modules() {
    let s = suite();
    let mut failures = Vec::new();
    let mut checked = 0;
    for c in &s.cases {
        let op = c.alg.opposite();
        for m in [2, 3] {
            let a: Lem2Result = lem2_check(&c.alg, &op, m, Lem2Direction::ByQuiver);
            let b = lem2_check(&c.alg, &op, m, Lem2Direction::ByModuleSearch);
            checked += 1;
            if a != b {
                failures.push(format!("{} m={}: {:?} vs {:?}", c.name, m, a, b));
            }
        }
    }
    report_line(
        "criterion 6 (arrow counts vs modules)",
        &failures,
        format!("{} comparisons", checked),
    );
}

#[test]
fn criterion_7_duality() {
    let s = suite();
    let mut failures = Vec::new();
    for c in &s.cases {
        let op = c.alg.opposite();
        let left = is_biserial_fuller(&c.alg, 14).map(|o| o.biserial);
        let right = is_biserial_fuller(&op, 14).map(|o| o.biserial);
        if left != right {
            failures.push(format!("{}: {:?} vs {:?}", c.name, left, right));
        }
        let pres = &c.inst.presentation;
        if &pres.opposite().opposite() != pres {
            failures.push(format!("{}: presentation involution", c.name));
        }
        let back = op.opposite();
        if back.basis() != c.alg.basis() || back.presentation() != c.alg.presentation() {
            failures.push(format!("{}: algebra involution", c.name));
        }
    }
    report_line("criterion 7 (duality)", &failures, format!("{} instances", s.cases.len()));
}

/// Rank by plain elimination, kept separate from the library.
fn oracle_rank(p: u32, rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
    let p = p as u64;
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else {
            continue;
        };
        m.swap(rank, r);
        let inv = (1..p).find(|&x| x * m[rank][c] % p == 1).unwrap();
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] + (p - f) * m[rank][k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_vectors(rng: &mut ChaCha8Rng, p: u32, count: usize, n: usize) -> Vec<Vec<u32>> {
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect())
        .collect()
}

#[test]
fn criterion_8_linear_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let primes = [2u32, 3, 5, 7];
    for case in 0..LINALG_CASES {
        let p = primes[case % primes.len()];
        let f = Field::new(p).unwrap();
        let n = rng.gen_range(1..=6);
        let (ku, kv) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        let gu = random_vectors(&mut rng, p, ku, n);
        let gv = random_vectors(&mut rng, p, kv, n);
        let u = Subspace::from_vectors(f, n, gu.clone());
        let v = Subspace::from_vectors(f, n, gv.clone());
        let sum = u.sum(&v).unwrap();
        let meet = u.intersect(&v).unwrap();
        let both: Vec<Vec<u32>> = gu.iter().chain(&gv).cloned().collect();
        let ok = sum.dim() + meet.dim() == u.dim() + v.dim()
            && u.dim() == oracle_rank(p, &gu)
            && sum.dim() == oracle_rank(p, &both)
            && meet.basis().iter().all(|w| u.contains(w) && v.contains(w));
        if !ok {
            failures.push(format!("grassmann case {}", case));
        }
    }
    for case in 0..LINALG_CASES {
        let p = primes[case % primes.len()];
        let f = Field::new(p).unwrap();
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=5);
        let gens = random_vectors(&mut rng, p, k, n);
        // random invertible recombination
        let mut mixed = gens.clone();
        for _ in 0..8 {
            let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
            let c = rng.gen_range(1..p);
            if i != j {
                let src = mixed[j].clone();
                f.axpy(&mut mixed[i], c, &src);
            } else {
                f.scale(&mut mixed[i], c);
            }
        }
        mixed.reverse();
        let a = Matrix::from_rows(f, n, &gens).unwrap();
        let b = Matrix::from_rows(f, n, &mixed).unwrap();
        let (ra, rank_a, piv_a) = rref(&a);
        let (rb, rank_b, piv_b) = rref(&b);
        let canonical = ra == rb
            && rank_a == rank_b
            && piv_a == piv_b
            && rank_a == oracle_rank(p, &gens)
            && piv_a.iter().enumerate().all(|(r, &c)| {
                ra.get(r, c) == 1 && (0..ra.rows()).all(|r2| r2 == r || ra.get(r2, c) == 0)
            })
            && Subspace::from_vectors(f, n, gens) == Subspace::from_vectors(f, n, mixed);
        if !canonical {
            failures.push(format!("rref case {}", case));
        }
    }
    for case in 0..LINALG_CASES {
        let p = primes[case % primes.len()];
        let f = Field::new(p).unwrap();
        let (m, n) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows = random_vectors(&mut rng, p, m, n);
        let a = Matrix::from_rows(f, n, &rows).unwrap();
        let b: Vec<u32> = if case % 2 == 0 {
            let x0: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            a.mul_vec(&x0)
        } else {
            (0..m).map(|_| rng.gen_range(0..p)).collect()
        };
        let augmented: Vec<Vec<u32>> = rows.iter().zip(&b).map(|(r, &bi)| [r.clone(), vec![bi]].concat()).collect();
        let consistent = oracle_rank(p, &augmented) == oracle_rank(p, &rows);
        let ok = match solve(&a, &b).unwrap() {
            Some(x) => consistent && a.mul_vec(&x) == b,
            None => !consistent,
        };
        if !ok {
            failures.push(format!("solve case {}", case));
        }
    }
    report_line(
        "criterion 8 (linear algebra)",
        &failures,
        format!("{} cases each for Grassmann, rref and solve", LINALG_CASES),
    );
}
