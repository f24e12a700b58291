//! Seeded random instances: standard-form bisected presentations that are biserial
//! by construction, and unconstrained admissible presentations.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::algebra::{FiniteDimAlgebra, Presentation, Relation};
use crate::bisected::{DEntry, DTable};
use crate::instance::{Instance, InstanceOptions};
use crate::linalg::Field;
use crate::quiver::{enumerate_paths, Arrow, Bisection, Path, PathClass, Quiver, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("gave up after {0} attempts")]
    RetriesExhausted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerateParams {
    pub field: Field,
    pub max_vertices: usize,
    pub max_arrows: usize,
    /// Every path of this length is a relation.
    pub max_len: usize,
    /// Probability that a bad path gets a nonzero `d` entry.
    pub d_probability: f64,
    /// Probability of an extra zero relation per good path of length two.
    pub monomial_probability: f64,
    pub max_radical_dim: usize,
    pub max_retries: usize,
}

impl Default for GenerateParams {
    fn default() -> Self {
        GenerateParams {
            field: Field::new(3).expect("prime"),
            max_vertices: 4,
            max_arrows: 6,
            max_len: 4,
            d_probability: 0.6,
            monomial_probability: 0.2,
            max_radical_dim: 11,
            max_retries: 1_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryInstance {
    pub instance: Instance,
    pub bisection: Bisection,
    pub dtable: DTable,
    /// Tables discarded because (C2) failed.
    pub rejected: usize,
}

fn arrow_name(k: usize) -> String {
    const NAMES: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if k < NAMES.len() {
        (NAMES[k] as char).to_string()
    } else {
        format!("z{}", k)
    }
}

/// A random quiver; with `biserial` set no vertex gets more than two
/// arrows in or out.
fn random_quiver<R: Rng>(rng: &mut R, params: &GenerateParams, biserial: bool) -> Quiver {
    let n = rng.gen_range(1..=params.max_vertices);
    let m = rng.gen_range(1..=params.max_arrows);
    let mut outs = vec![0; n];
    let mut ins = vec![0; n];
    let mut arrows = Vec::new();
    for _ in 0..4 * m {
        if arrows.len() == m {
            break;
        }
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if biserial && (outs[s] == 2 || ins[t] == 2) {
            continue;
        }
        outs[s] += 1;
        ins[t] += 1;
        arrows.push(Arrow {
            name: arrow_name(arrows.len()),
            source: s,
            target: t,
        });
    }
    let names = (1..=n).map(|v| v.to_string()).collect();
    Quiver::new(names, arrows).expect("well-formed")
}

fn random_bisection<R: Rng>(rng: &mut R, q: &Quiver) -> Bisection {
    let mut sigma = vec![1i8; q.num_arrows()];
    let mut tau = vec![1i8; q.num_arrows()];
    for v in 0..q.num_vertices() {
        for (arrows, labels) in [(q.out_arrows(v), &mut sigma), (q.in_arrows(v), &mut tau)] {
            let first: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            for (k, a) in arrows.into_iter().enumerate() {
                labels[a] = if k == 0 { first } else { -first };
            }
        }
    }
    Bisection { sigma, tau }
}

/// `d_ax = phi b` and `d_by = psi a` with `phi psi = 1` for some pair of
/// entries.
pub fn c2_conflict(d: &DTable, f: Field) -> bool {
    d.entries.iter().any(|e1| {
        d.entries.iter().any(|e2| {
            e1.path.len() == 1
                && e2.path.len() == 1
                && e1.path.arrows()[0] == e2.a
                && e2.path.arrows()[0] == e1.a
                && f.mul(e1.omega, e2.omega) == 1
        })
    })
}

/// Paths allowed as replacement for the bad path `ax` under (C1).
fn replacement_candidates(q: &Quiver, b: &Bisection, a: usize, x: usize, max_len: usize) -> Vec<Path> {
    let xp = Path::arrow(q, x);
    enumerate_paths(q, max_len)
        .into_iter()
        .filter(|p| {
            !p.is_trivial()
                && p.source() == q.source(a)
                && p.target() == q.target(a)
                && p.arrows()[0] != a
                && p.compose(&xp).is_some_and(|full| b.classify(&full) == PathClass::Good)
        })
        .collect()
}

/// Every left and right projective has radical dimension at most the bound.
fn fits(alg: &FiniteDimAlgebra, max_radical_dim: usize) -> bool {
    (0..alg.quiver().num_vertices()).all(|v| {
        let rad = |end: fn(&Path) -> VertexId| alg.basis().iter().filter(|p| end(p) == v && !p.is_trivial()).count();
        rad(Path::source) <= max_radical_dim && rad(Path::target) <= max_radical_dim
    })
}

/// Draws a presentation in the form `(a - d_ax) x` for a random biserial
/// quiver, bisection and table satisfying (C1) and (C2), completed by all
/// paths of length `max_len` and some extra zero relations.
pub fn generate_corollary_instance<R: Rng>(
    rng: &mut R,
    params: &GenerateParams,
) -> Result<CorollaryInstance, GenerateError> {
    let f = params.field;
    let mut rejected = 0;
    for _ in 0..params.max_retries {
        let q = random_quiver(rng, params, true);
        let b = random_bisection(rng, &q);
        let len = rng.gen_range(2..=params.max_len.max(2));
        let mut d = DTable::default();
        for (a, x) in b.bad_pairs(&q) {
            if !rng.gen_bool(params.d_probability) {
                continue;
            }
            let cands = replacement_candidates(&q, &b, a, x, len.saturating_sub(1).max(1));
            if let Some(path) = cands.choose(rng) {
                d.entries.push(DEntry {
                    a,
                    x,
                    omega: rng.gen_range(1..f.modulus()),
                    path: path.clone(),
                });
            }
        }
        if c2_conflict(&d, f) {
            rejected += 1;
            continue;
        }
        let mut rels = Vec::new();
        for (a, x) in b.bad_pairs(&q) {
            let ax = Path::from_written(&q, &[a, x]).expect("composable");
            let mut terms = vec![(1, ax)];
            if let Some(e) = d.get(a, x) {
                let px = e.path.compose(&Path::arrow(&q, x)).expect("composable");
                terms.push((f.neg(e.omega), px));
            }
            rels.push(Relation::new(f, terms));
        }
        for p in enumerate_paths(&q, 2) {
            if p.len() == 2 && b.classify(&p) == PathClass::Good && rng.gen_bool(params.monomial_probability) {
                rels.push(Relation::monomial(p));
            }
        }
        rels.extend(
            enumerate_paths(&q, len)
                .into_iter()
                .filter(|p| p.len() == len)
                .map(Relation::monomial),
        );
        let pres = Presentation::new(q, f, rels).expect("relations are well-formed");
        let options = InstanceOptions {
            max_nilpotency: len,
            ..InstanceOptions::default()
        };
        match FiniteDimAlgebra::build(&pres, len) {
            Ok(alg) if fits(&alg, params.max_radical_dim) => {
                return Ok(CorollaryInstance {
                    instance: Instance {
                        presentation: pres,
                        options,
                    },
                    bisection: b,
                    dtable: d,
                    rejected,
                })
            }
            _ => continue,
        }
    }
    Err(GenerateError::RetriesExhausted(params.max_retries))
}

/// A random admissible presentation: all paths of a random length
/// `2..=max_len` plus a few random combinations of shorter parallel paths.
/// Half of the draws use a quiver with at most two arrows in and out of
/// every vertex.
pub fn generate_random_presentation<R: Rng>(rng: &mut R, params: &GenerateParams) -> Result<Instance, GenerateError> {
    let f = params.field;
    for _ in 0..params.max_retries {
        let biserial = rng.gen_bool(0.5);
        let q = random_quiver(rng, params, biserial);
        let len = rng.gen_range(2..=params.max_len.max(2));
        let mut parallel: BTreeMap<(VertexId, VertexId), Vec<Path>> = BTreeMap::new();
        for p in enumerate_paths(&q, len - 1) {
            if p.len() >= 2 {
                parallel.entry((p.source(), p.target())).or_default().push(p);
            }
        }
        let classes: Vec<Vec<Path>> = parallel.into_values().collect();
        let mut rels = Vec::new();
        if !classes.is_empty() {
            for _ in 0..rng.gen_range(0..=3) {
                let class = classes.choose(rng).expect("nonempty");
                let k = rng.gen_range(1..=class.len().min(3));
                let terms: Vec<(u32, Path)> = class
                    .choose_multiple(rng, k)
                    .map(|p| (rng.gen_range(1..f.modulus()), p.clone()))
                    .collect();
                rels.push(Relation::new(f, terms));
            }
        }
        rels.extend(
            enumerate_paths(&q, len)
                .into_iter()
                .filter(|p| p.len() == len)
                .map(Relation::monomial),
        );
        let pres = Presentation::new(q, f, rels).expect("relations are well-formed");
        if let Ok(alg) = FiniteDimAlgebra::build(&pres, len) {
            if fits(&alg, params.max_radical_dim) {
                return Ok(Instance {
                    presentation: pres,
                    options: InstanceOptions {
                        max_nilpotency: len,
                        ..InstanceOptions::default()
                    },
                });
            }
        }
    }
    Err(GenerateError::RetriesExhausted(params.max_retries))
}
