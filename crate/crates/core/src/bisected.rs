//! Bisected presentations: verification, standard-form relation tables and
//! a vertex-local witness search.
//!
//! The conditions on a bisected presentation split over vertices: at a
//! vertex `l` only `sigma` and `q` on the arrows leaving `l` and `tau` and
//! `p` on the arrows entering `l` interact, and surjectivity reduces to
//! independence of arrow classes inside each block of parallel arrows. The
//! search enumerates the images on one side of `l` up to scalars and solves
//! the other side by linear algebra, so a negative answer at a vertex is
//! exhaustive over the ground field.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::FiniteDimAlgebra;
use crate::biserial::local_signs;
use crate::linalg::{is_zero, Field, Matrix, Subspace};
use crate::quiver::{ArrowId, Bisection, Path, PathClass, Quiver, VertexId};

pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisectedWitness {
    pub bisection: Bisection,
    /// `p(a)` per arrow, in the monomial basis.
    pub p: Vec<Vec<u32>>,
    /// `q(a)` per arrow, in the monomial basis.
    pub q: Vec<Vec<u32>>,
}

impl BisectedWitness {
    /// `p = q = identity on arrows`.
    pub fn identity(alg: &FiniteDimAlgebra, bisection: Bisection) -> Self {
        let images: Vec<Vec<u32>> = (0..alg.quiver().num_arrows()).map(|a| alg.arrow_element(a)).collect();
        BisectedWitness {
            bisection,
            p: images.clone(),
            q: images,
        }
    }

    /// Same witness with both sign functions negated.
    pub fn flipped(&self) -> Self {
        BisectedWitness {
            bisection: self.bisection.flipped(),
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessDefect {
    Shape,
    InvalidBisection,
    /// `p(a)` (or `q(a)`) is not in `e_t(a) rad A e_s(a)`.
    ImageOutsideCorner { map: char, arrow: String },
    NotSurjective { map: char },
    BadProductNonzero { a: String, x: String },
}

/// Classes of the arrows of a block, read off the arrow coordinates.
fn class_of(alg: &FiniteDimAlgebra, block: &[ArrowId], u: &[u32]) -> Vec<u32> {
    let q = alg.quiver();
    block
        .iter()
        .map(|&b| u[alg.basis_index(&Path::arrow(q, b)).expect("arrows are basis elements")])
        .collect()
}

/// Checks that the classes of `{e_i} ∪ {images}` span `A / rad^2 A`.
fn spans_top(alg: &FiniteDimAlgebra, images: &[Vec<u32>]) -> bool {
    let rad2 = alg.radical_power(2);
    let mut span = Subspace::zero(alg.field(), alg.dim());
    for v in 0..alg.quiver().num_vertices() {
        span.insert(&alg.idempotent(v));
    }
    for u in images {
        span.insert(u);
    }
    span.sum(rad2).expect("same ambient").dim() == alg.dim()
}

pub fn verify_bisected_witness(alg: &FiniteDimAlgebra, w: &BisectedWitness) -> Vec<WitnessDefect> {
    let q = alg.quiver();
    let n = q.num_arrows();
    let shaped = w.p.len() == n
        && w.q.len() == n
        && w.p.iter().chain(&w.q).all(|u| u.len() == alg.dim());
    if !shaped {
        return vec![WitnessDefect::Shape];
    }
    let mut out = Vec::new();
    if !w.bisection.is_valid(q) {
        out.push(WitnessDefect::InvalidBisection);
    }
    for (map, images) in [('p', &w.p), ('q', &w.q)] {
        for (a, u) in images.iter().enumerate() {
            if !alg.in_radical(u) || !alg.in_corner(u, q.target(a), q.source(a)) {
                out.push(WitnessDefect::ImageOutsideCorner {
                    map,
                    arrow: q.arrow(a).name.clone(),
                });
            }
        }
        if !spans_top(alg, images) {
            out.push(WitnessDefect::NotSurjective { map });
        }
    }
    if out.contains(&WitnessDefect::InvalidBisection) {
        return out;
    }
    for (a, x) in w.bisection.bad_pairs(q) {
        if !is_zero(&alg.mul(&w.q[a], &w.p[x])) {
            out.push(WitnessDefect::BadProductNonzero {
                a: q.arrow(a).name.clone(),
                x: q.arrow(x).name.clone(),
            });
        }
    }
    out
}

/// A nonzero entry `d_ax = omega * path` of a relation table; bad paths
/// without an entry have `d_ax = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DEntry {
    pub a: ArrowId,
    pub x: ArrowId,
    pub omega: u32,
    pub path: Path,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DTable {
    pub entries: Vec<DEntry>,
}

impl DTable {
    pub fn get(&self, a: ArrowId, x: ArrowId) -> Option<&DEntry> {
        self.entries.iter().find(|e| e.a == a && e.x == x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorollaryDefect {
    InvalidBisection,
    NotABadPath { a: ArrowId, x: ArrowId },
    /// Condition (C1) fails for the entry at `(a, x)`.
    C1 { a: ArrowId, x: ArrowId, reason: String },
    /// `d_ax = phi b` and `d_by = psi a` with `phi psi = 1`.
    C2 { a: ArrowId, x: ArrowId, b: ArrowId, y: ArrowId },
    /// `(a - d_ax) x` is not zero in the algebra.
    RelationMissing { a: ArrowId, x: ArrowId },
}

/// Checks (C1), (C2) and that every `(a - d_ax) x` lies in the ideal.
pub fn verify_corollary_form(alg: &FiniteDimAlgebra, b: &Bisection, d: &DTable) -> Vec<CorollaryDefect> {
    let q = alg.quiver();
    let f = alg.field();
    if !b.is_valid(q) {
        return vec![CorollaryDefect::InvalidBisection];
    }
    let mut out = Vec::new();
    for e in &d.entries {
        let composable = e.a < q.num_arrows() && e.x < q.num_arrows() && q.source(e.a) == q.target(e.x);
        if !composable || !b.is_bad_pair(e.a, e.x) {
            out.push(CorollaryDefect::NotABadPath { a: e.a, x: e.x });
            continue;
        }
        let c1 = |reason: &str| CorollaryDefect::C1 {
            a: e.a,
            x: e.x,
            reason: reason.to_string(),
        };
        if e.omega % f.modulus() == 0 {
            out.push(c1("omega is zero"));
        } else if e.path.is_trivial() {
            out.push(c1("replacement path is trivial"));
        } else if e.path.target() != q.target(e.a) {
            out.push(c1("replacement path ends away from t(a)"));
        } else if e.path.arrows()[0] == e.a {
            out.push(c1("replacement path ends with a"));
        } else {
            match e.path.compose(&Path::arrow(q, e.x)) {
                None => out.push(c1("replacement path does not continue x")),
                Some(full) if b.classify(&full) == PathClass::Bad => {
                    out.push(c1("replacement path composed with x is bad"))
                }
                Some(_) => {}
            }
        }
    }
    for e1 in &d.entries {
        for e2 in &d.entries {
            if e1.path.len() == 1
                && e2.path.len() == 1
                && e1.path.arrows()[0] == e2.a
                && e2.path.arrows()[0] == e1.a
                && f.mul(e1.omega, e2.omega) == 1
                && (e1.a, e1.x) < (e2.a, e2.x)
            {
                out.push(CorollaryDefect::C2 {
                    a: e1.a,
                    x: e1.x,
                    b: e2.a,
                    y: e2.x,
                });
            }
        }
    }
    for (a, x) in b.bad_pairs(q) {
        let ax = Path::from_written(q, &[a, x]).expect("composable");
        let mut v = alg.path_element(&ax);
        if let Some(e) = d.get(a, x) {
            if let Some(px) = e.path.compose(&Path::arrow(q, x)) {
                f.axpy(&mut v, f.neg(e.omega), &alg.path_element(&px));
            }
        }
        if !is_zero(&v) {
            out.push(CorollaryDefect::RelationMissing { a, x });
        }
    }
    out
}

/// For every entry `d_ax = omega b_t...b_1` and every arrow `d'` leaving
/// `t(a)`: `d' a x` and `d' b_t...b_1 x` are zero.
pub fn check_lemma_tl(alg: &FiniteDimAlgebra, d: &DTable) -> bool {
    let q = alg.quiver();
    d.entries.iter().all(|e| {
        q.out_arrows(q.target(e.a)).into_iter().all(|dd| {
            let dax = Path::from_written(q, &[dd, e.a, e.x]).expect("composable");
            let long = Path::arrow(q, dd)
                .compose(&e.path)
                .and_then(|p| p.compose(&Path::arrow(q, e.x)))
                .expect("composable");
            is_zero(&alg.path_element(&dax)) && is_zero(&alg.path_element(&long))
        })
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search budget of {budget} candidates exhausted at vertex {vertex}")]
    BudgetExhausted { vertex: VertexId, budget: u64 },
}

/// Choices at one vertex: signs and images for the arrows around it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSolution {
    pub vertex: VertexId,
    pub sigma: Vec<(ArrowId, i8)>,
    pub tau: Vec<(ArrowId, i8)>,
    pub p: Vec<(ArrowId, Vec<u32>)>,
    pub q: Vec<(ArrowId, Vec<u32>)>,
}

/// Which factor of the products `q(a) p(x)` is being chosen.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Factor {
    /// `p` on incoming arrows (right factor).
    P,
    /// `q` on outgoing arrows (left factor).
    Q,
}

fn blocks_of(q: &Quiver, arrows: &[ArrowId]) -> Vec<Vec<ArrowId>> {
    let mut out: Vec<Vec<ArrowId>> = Vec::new();
    for &a in arrows {
        match out
            .iter_mut()
            .find(|b| q.source(b[0]) == q.source(a) && q.target(b[0]) == q.target(a))
        {
            Some(b) => b.push(a),
            None => out.push(vec![a]),
        }
    }
    out
}

fn element_of(alg: &FiniteDimAlgebra, corner: &[usize], coeffs: &[u32]) -> Vec<u32> {
    let mut u = alg.zero();
    for (&k, &c) in corner.iter().zip(coeffs) {
        u[k] = c;
    }
    u
}

fn independent(f: Field, c: &[Vec<u32>]) -> bool {
    match c.len() {
        1 => !is_zero(&c[0]),
        2 => f.sub(f.mul(c[0][0], c[1][1]), f.mul(c[0][1], c[1][0])) != 0,
        _ => false,
    }
}

struct LocalProblem<'a> {
    alg: &'a FiniteDimAlgebra,
    bad: Vec<(ArrowId, ArrowId)>,
}

impl LocalProblem<'_> {
    /// Partners of `z` in bad pairs, as (partner, z is the left factor).
    fn partners(&self, z: ArrowId, side: Factor) -> Vec<ArrowId> {
        self.bad
            .iter()
            .filter_map(|&(a, x)| match side {
                Factor::Q if a == z => Some(x),
                Factor::P if x == z => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Candidate images for `z` up to scalars, with nonzero class; the
    /// arrow itself first.
    fn candidates(&self, z: ArrowId, block: &[ArrowId]) -> Vec<Vec<u32>> {
        let alg = self.alg;
        let q = alg.quiver();
        let corner = alg.corner_radical_indices(q.target(z), q.source(z));
        let ident = alg.arrow_element(z);
        let mut out = vec![ident.clone()];
        for coeffs in alg.field().projective_points(corner.len()) {
            let u = element_of(alg, &corner, &coeffs);
            if u != ident && !is_zero(&class_of(alg, block, &u)) {
                out.push(u);
            }
        }
        out
    }

    /// Basis of `{w in corner(z) : products with the fixed partners vanish}`.
    fn solution_space(&self, z: ArrowId, side: Factor, fixed: &dyn Fn(ArrowId) -> Vec<u32>) -> Vec<Vec<u32>> {
        let alg = self.alg;
        let q = alg.quiver();
        let corner = alg.corner_radical_indices(q.target(z), q.source(z));
        let partners = self.partners(z, side);
        let dim = alg.dim();
        let mut m = Matrix::zeros(alg.field(), dim * partners.len(), corner.len());
        for (c, &k) in corner.iter().enumerate() {
            let mut e = alg.zero();
            e[k] = 1;
            for (r, &w) in partners.iter().enumerate() {
                let prod = match side {
                    Factor::Q => alg.mul(&e, &fixed(w)),
                    Factor::P => alg.mul(&fixed(w), &e),
                };
                for (i, &v) in prod.iter().enumerate() {
                    if v != 0 {
                        m.set(r * dim + i, c, v);
                    }
                }
            }
        }
        m.kernel()
            .basis()
            .iter()
            .map(|coeffs| element_of(alg, &corner, coeffs))
            .collect()
    }

    /// Picks images with independent classes in one block.
    fn choose_block(&self, block: &[ArrowId], spaces: &[Vec<Vec<u32>>]) -> Option<Vec<Vec<u32>>> {
        let f = self.alg.field();
        match block.len() {
            1 => spaces[0]
                .iter()
                .find(|u| !is_zero(&class_of(self.alg, block, u)))
                .map(|u| vec![u.clone()]),
            2 => {
                for u in &spaces[0] {
                    for v in &spaces[1] {
                        let c = vec![class_of(self.alg, block, u), class_of(self.alg, block, v)];
                        if independent(f, &c) {
                            return Some(vec![u.clone(), v.clone()]);
                        }
                    }
                }
                None
            }
            _ => None,
        }
    }
}

/// Searches signs and images at `l` making every bad product at `l`
/// vanish. `Ok(None)` means no choice exists over the ground field.
pub fn search_at_vertex(alg: &FiniteDimAlgebra, l: VertexId, budget: u64) -> Result<Option<LocalSolution>, SearchError> {
    let q = alg.quiver();
    let f = alg.field();
    let outs = q.out_arrows(l);
    let ins = q.in_arrows(l);
    let mut combos = Vec::new();
    for s in local_signs(&outs) {
        for t in local_signs(&ins) {
            let bad: Vec<(ArrowId, ArrowId)> = outs
                .iter()
                .enumerate()
                .flat_map(|(ka, &a)| {
                    let s = s.clone();
                    let t = t.clone();
                    ins.iter()
                        .enumerate()
                        .filter(move |&(kx, _)| s[ka] != t[kx])
                        .map(move |(_, &x)| (a, x))
                })
                .collect();
            combos.push((s.clone(), t, bad));
        }
    }
    let finish = |s: &[i8], t: &[i8], p: Vec<(ArrowId, Vec<u32>)>, qq: Vec<(ArrowId, Vec<u32>)>| LocalSolution {
        vertex: l,
        sigma: outs.iter().copied().zip(s.iter().copied()).collect(),
        tau: ins.iter().copied().zip(t.iter().copied()).collect(),
        p,
        q: qq,
    };
    let identity = |arrows: &[ArrowId]| -> Vec<(ArrowId, Vec<u32>)> {
        arrows.iter().map(|&a| (a, alg.arrow_element(a))).collect()
    };

    // cheap pass: images equal to the arrows
    for (s, t, bad) in &combos {
        if bad
            .iter()
            .all(|&(a, x)| is_zero(&alg.mul(&alg.arrow_element(a), &alg.arrow_element(x))))
        {
            return Ok(Some(finish(s, t, identity(&ins), identity(&outs))));
        }
    }

    let mut spent: u64 = 0;
    for (s, t, bad) in &combos {
        let problem = LocalProblem { alg, bad: bad.clone() };
        let involved = |arrows: &[ArrowId]| -> Vec<Vec<ArrowId>> {
            blocks_of(q, arrows)
                .into_iter()
                .filter(|b| b.iter().any(|&z| bad.iter().any(|&(a, x)| a == z || x == z)))
                .collect()
        };
        let in_blocks = involved(&ins);
        let out_blocks = involved(&outs);
        let pr = &problem;
        let cands = |blocks: &[Vec<ArrowId>]| -> Vec<(ArrowId, Vec<Vec<u32>>)> {
            blocks
                .iter()
                .flat_map(|b| b.iter().map(move |&z| (z, pr.candidates(z, b))))
                .collect()
        };
        let count = |c: &[(ArrowId, Vec<Vec<u32>>)]| -> u64 {
            c.iter().fold(1u64, |acc, (_, v)| acc.saturating_mul(v.len() as u64))
        };
        let in_cands = cands(&in_blocks);
        let out_cands = cands(&out_blocks);
        // enumerate the cheaper side
        let (enum_side, enum_blocks, enum_cands, solve_side, solve_blocks) = if count(&in_cands) <= count(&out_cands) {
            (Factor::P, &in_blocks, in_cands, Factor::Q, &out_blocks)
        } else {
            (Factor::Q, &out_blocks, out_cands, Factor::P, &in_blocks)
        };
        let total = count(&enum_cands);
        if spent.saturating_add(total) > budget {
            return Err(SearchError::BudgetExhausted { vertex: l, budget });
        }
        spent += total;

        let mut idx = vec![0usize; enum_cands.len()];
        'odometer: loop {
            let chosen: Vec<(ArrowId, Vec<u32>)> = enum_cands
                .iter()
                .zip(&idx)
                .map(|((z, c), &i)| (*z, c[i].clone()))
                .collect();
            let lookup = |w: ArrowId| -> Vec<u32> {
                chosen.iter().find(|(z, _)| *z == w).map(|(_, u)| u.clone()).expect("enumerated")
            };
            let blocks_ok = enum_blocks.iter().all(|b| {
                let classes: Vec<Vec<u32>> = b.iter().map(|&z| class_of(alg, b, &lookup(z))).collect();
                independent(f, &classes)
            });
            if blocks_ok {
                let mut solved: Vec<(ArrowId, Vec<u32>)> = Vec::new();
                let mut ok = true;
                for b in solve_blocks.iter() {
                    let spaces: Vec<Vec<Vec<u32>>> = b
                        .iter()
                        .map(|&z| problem.solution_space(z, solve_side, &lookup))
                        .collect();
                    match problem.choose_block(b, &spaces) {
                        Some(images) => solved.extend(b.iter().copied().zip(images)),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let fill = |arrows: &[ArrowId], picked: &[(ArrowId, Vec<u32>)]| -> Vec<(ArrowId, Vec<u32>)> {
                        arrows
                            .iter()
                            .map(|&a| {
                                let img = picked
                                    .iter()
                                    .find(|(z, _)| *z == a)
                                    .map(|(_, u)| u.clone())
                                    .unwrap_or_else(|| alg.arrow_element(a));
                                (a, img)
                            })
                            .collect()
                    };
                    let (p_pick, q_pick) = match enum_side {
                        Factor::P => (chosen.clone(), solved),
                        Factor::Q => (solved, chosen.clone()),
                    };
                    return Ok(Some(finish(s, t, fill(&ins, &p_pick), fill(&outs, &q_pick))));
                }
            }
            // advance
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break 'odometer;
                }
                idx[k] += 1;
                if idx[k] < enum_cands[k].1.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
        let _ = solve_side;
    }
    Ok(None)
}

/// Outcome of the vertex-by-vertex search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<BisectedWitness>,
    /// Vertices where no local choice exists.
    pub failing: Vec<VertexId>,
}

pub fn search_bisected(alg: &FiniteDimAlgebra, budget: u64) -> Result<SearchOutcome, SearchError> {
    let q = alg.quiver();
    if !q.is_biserial() {
        return Ok(SearchOutcome {
            witness: None,
            failing: (0..q.num_vertices())
                .filter(|&v| q.out_arrows(v).len() > 2 || q.in_arrows(v).len() > 2)
                .collect(),
        });
    }
    let n = q.num_arrows();
    let mut sigma = vec![1i8; n];
    let mut tau = vec![1i8; n];
    let mut p = vec![Vec::new(); n];
    let mut qq = vec![Vec::new(); n];
    let mut failing = Vec::new();
    for l in 0..q.num_vertices() {
        match search_at_vertex(alg, l, budget)? {
            Some(sol) => {
                for (a, s) in sol.sigma {
                    sigma[a] = s;
                }
                for (x, t) in sol.tau {
                    tau[x] = t;
                }
                for (x, u) in sol.p {
                    p[x] = u;
                }
                for (a, u) in sol.q {
                    qq[a] = u;
                }
            }
            None => failing.push(l),
        }
    }
    let witness = failing.is_empty().then(|| BisectedWitness {
        bisection: Bisection { sigma, tau },
        p,
        q: qq,
    });
    Ok(SearchOutcome { witness, failing })
}

/// A bisected witness for `A`, `Ok(None)` when none exists over the
/// ground field.
pub fn search_bisected_witness(alg: &FiniteDimAlgebra, budget: u64) -> Result<Option<BisectedWitness>, SearchError> {
    Ok(search_bisected(alg, budget)?.witness)
}
