//! Decision procedures: the idempotent-subalgebra criterion, D4 obstruction
//! modules with their certifier, and the combined decision.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::FiniteDimAlgebra;
use crate::biserial::{is_biserial_fuller_with, BiserialError, FullerCertificate, DEFAULT_FULLER_BOUND};
use crate::bisected::{search_bisected, verify_bisected_witness, BisectedWitness, DEFAULT_SEARCH_BUDGET};
use crate::linalg::{is_zero, solve, Matrix, Subspace};
use crate::module::{Projective, Representation};
use crate::quiver::{Quiver, VertexId};
use crate::subalgebra::idempotent_subalgebra;

/// Cap on first-factor candidates tried per (vertex, source) pair when
/// building obstruction modules.
pub const DEFAULT_OBSTRUCTION_BUDGET: usize = 2_000;

/// The reading of the span in condition (alpha) used by the certifier.
pub const SPAN_READING: &str = "k-span of (a2, a3), both for left and right modules";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSets {
    pub vertex: VertexId,
    pub neighbors: Vec<VertexId>,
    pub j_sets: Vec<Vec<VertexId>>,
}

/// Vertices other than `l` joined to `l` by an arrow; the test sets are
/// `[N(l)]` when `|N(l)| < 4` and all 3-subsets otherwise.
pub fn neighbor_sets(q: &Quiver, l: VertexId) -> NeighborSets {
    let mut neighbors: Vec<VertexId> = q
        .arrows()
        .iter()
        .filter_map(|a| {
            if a.source == l && a.target != l {
                Some(a.target)
            } else if a.target == l && a.source != l {
                Some(a.source)
            } else {
                None
            }
        })
        .collect();
    neighbors.sort_unstable();
    neighbors.dedup();
    let j_sets = if neighbors.len() < 4 {
        vec![neighbors.clone()]
    } else {
        let n = neighbors.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    out.push(vec![neighbors[a], neighbors[b], neighbors[c]]);
                }
            }
        }
        out
    };
    NeighborSets {
        vertex: l,
        neighbors,
        j_sets,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborVariant {
    /// `S = {l} ∪ N(l)`.
    Full,
    /// `S = {l} ∪ J` for every test set `J`.
    D4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubalgebraCheck {
    pub vertex: VertexId,
    pub subset: Vec<VertexId>,
    pub dim: usize,
    pub biserial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubalgebraReport {
    pub biserial: bool,
    pub checks: Vec<SubalgebraCheck>,
}

/// Fuller biseriality of every `eAe` named by the variant.
pub fn subalgebra_criterion(
    alg: &FiniteDimAlgebra,
    variant: NeighborVariant,
    fuller_bound: usize,
) -> Result<SubalgebraReport, BiserialError> {
    let q = alg.quiver();
    let mut cache: HashMap<Vec<VertexId>, (usize, bool)> = HashMap::new();
    let mut checks = Vec::new();
    for l in 0..q.num_vertices() {
        let ns = neighbor_sets(q, l);
        let sets = match variant {
            NeighborVariant::Full => vec![ns.neighbors.clone()],
            NeighborVariant::D4 => ns.j_sets.clone(),
        };
        for j in sets {
            let mut subset = j.clone();
            subset.push(l);
            subset.sort_unstable();
            let (dim, biserial) = match cache.get(&subset) {
                Some(&r) => r,
                None => {
                    let sub = idempotent_subalgebra(alg, &subset);
                    let out = is_biserial_fuller_with(&sub.algebra, &sub.algebra.opposite(), fuller_bound)?;
                    let r = (sub.algebra.dim(), out.biserial);
                    cache.insert(subset.clone(), r);
                    r
                }
            };
            checks.push(SubalgebraCheck {
                vertex: l,
                subset,
                dim,
                biserial,
            });
        }
    }
    Ok(SubalgebraReport {
        biserial: checks.iter().all(|c| c.biserial),
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lem2Direction {
    ByQuiver,
    ByModuleSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lem2Result {
    /// Some vertex has `m` arrows starting (local module form).
    pub starts: bool,
    /// Some vertex has `m` arrows ending (colocal module form).
    pub ends: bool,
}

/// `A e_i / rad^2 A e_i` cut down to a local module of Loewy length two
/// with radical of length `m`, when `l(rad)` of the former is at least `m`.
pub fn local_module_with_radical_length(alg: &FiniteDimAlgebra, i: VertexId, m: usize) -> Option<Representation> {
    let proj = Projective::new(alg, i);
    let series = proj.rep.radical_series();
    let rad2 = series.get(2).cloned().unwrap_or_else(|| proj.rep.zero_submodule());
    let top = proj.rep.quotient(&rad2);
    let rad = top.radical_of(&top.whole());
    if m == 0 || rad.dim() < m {
        return None;
    }
    let extra = Subspace::from_vectors(top.field(), top.dim(), rad.basis()[m..].iter().cloned());
    Some(top.quotient(&extra))
}

fn is_local_ll2_with_radical(rep: &Representation, m: usize) -> bool {
    rep.is_local() && rep.loewy_length() == 2 && rep.radical_of(&rep.whole()).dim() == m
}

fn is_colocal_ll2_with_cosocle(rep: &Representation, m: usize) -> bool {
    rep.is_colocal() && rep.loewy_length() == 2 && rep.dim() - rep.socle().dim() == m
}

/// Existence of local (colocal) modules of Loewy length two whose radical
/// (top over the socle) has length `m`, decided from the quiver or by
/// constructing and checking the modules.
pub fn lem2_check(alg: &FiniteDimAlgebra, op: &FiniteDimAlgebra, m: usize, direction: Lem2Direction) -> Lem2Result {
    let q = alg.quiver();
    match direction {
        Lem2Direction::ByQuiver => Lem2Result {
            starts: m >= 1 && q.max_out_degree() >= m,
            ends: m >= 1 && q.max_in_degree() >= m,
        },
        Lem2Direction::ByModuleSearch => {
            let n = q.num_vertices();
            let starts = (0..n).any(|i| {
                local_module_with_radical_length(alg, i, m).is_some_and(|rep| is_local_ll2_with_radical(&rep, m))
            });
            let ends = (0..n).any(|i| {
                local_module_with_radical_length(op, i, m)
                    .is_some_and(|rep| is_colocal_ll2_with_cosocle(&rep.dual(), m))
            });
            Lem2Result { starts, ends }
        }
    }
}

/// One ordered pair `(â2, â3)` of the (c)-search, as coefficients on
/// `(ã2, ã3)`, with whether the linear system for `(â1, â1')` is solvable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub hat_a2: [u32; 2],
    pub hat_a3: [u32; 2],
    pub feasible: bool,
}

/// Data of an obstruction of the third or fourth kind; for the fourth kind
/// all elements live in the opposite algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleData {
    pub i: VertexId,
    pub j: VertexId,
    pub a1: Vec<u32>,
    pub a2: Vec<u32>,
    pub a3: Vec<u32>,
    pub b0: Vec<u32>,
    pub transcript: Vec<PairRecord>,
}

/// A module showing that one of the four D4 configurations occurs. The
/// module is over `A` for kinds 1 and 3 and over `A^op` for kinds 2 and 4
/// (for kind 2 the colocal module is its dual).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionWitness {
    pub kind: u8,
    pub module: Representation,
    pub triple: Option<TripleData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub certified: bool,
    pub diagnostics: Vec<String>,
    pub transcript: Vec<PairRecord>,
    pub span_reading: String,
}

/// Runs the (c)-search. Returns `true` when no `(â1, â1', â2, â3)` exist.
fn c_search(
    alg: &FiniteDimAlgebra,
    m: &Representation,
    t: &TripleData,
    transcript: &mut Vec<PairRecord>,
) -> Result<bool, String> {
    let f = alg.field();
    let target = m.act(alg, &t.a1, &t.b0);
    let w = Subspace::from_vectors(f, alg.dim(), [t.a2.clone(), t.a3.clone()]);
    let meet = w.intersect(alg.radical_power(2)).map_err(|e| e.to_string())?;
    if w.dim() - meet.dim() < 2 {
        // no independent pair of classes exists
        return Ok(true);
    }
    let corner = alg.corner_radical_indices(t.i, t.j);
    let vs: Vec<Vec<u32>> = corner
        .iter()
        .map(|&k| {
            let mut e = alg.zero();
            e[k] = 1;
            m.act(alg, &e, &t.b0)
        })
        .collect();
    let d = m.dim();
    let nb = corner.len();
    let points: Vec<Vec<u32>> = f.projective_points(2).collect();
    let mut none_feasible = true;
    for l2 in &points {
        for l3 in &points {
            if l2 == l3 {
                continue;
            }
            let combo = |c: &[u32]| {
                let mut u = alg.scale(c[0], &t.a2);
                f.axpy(&mut u, c[1], &t.a3);
                u
            };
            let h2 = combo(l2);
            let h3 = combo(l3);
            // unknowns: coefficients of â1 (first nb) and â1' (last nb)
            let mut sys = Matrix::zeros(f, 3 * d, 2 * nb);
            for (k, v) in vs.iter().enumerate() {
                let h2v = m.act(alg, &h2, v);
                let h3v = m.act(alg, &h3, v);
                for r in 0..d {
                    sys.set(r, k, v[r]);
                    sys.set(r, nb + k, v[r]);
                    sys.set(d + r, nb + k, h2v[r]);
                    sys.set(2 * d + r, k, h3v[r]);
                }
            }
            let mut rhs = vec![0; 3 * d];
            rhs[..d].copy_from_slice(&target);
            let feasible = solve(&sys, &rhs).map_err(|e| e.to_string())?.is_some();
            transcript.push(PairRecord {
                hat_a2: [l2[0], l2[1]],
                hat_a3: [l3[0], l3[1]],
                feasible,
            });
            none_feasible &= !feasible;
        }
    }
    Ok(none_feasible)
}

fn check_triple(alg: &FiniteDimAlgebra, m: &Representation, t: &TripleData, diags: &mut Vec<String>) -> Vec<PairRecord> {
    let q = alg.quiver();
    let n = q.num_vertices();
    let shaped = t.i < n
        && t.j < n
        && [&t.a1, &t.a2, &t.a3].iter().all(|u| u.len() == alg.dim())
        && t.b0.len() == m.dim();
    if !shaped {
        diags.push("malformed witness data".to_string());
        return Vec::new();
    }
    if !alg.in_radical(&t.a1) || !alg.in_corner(&t.a1, t.i, t.j) {
        diags.push("a1 is not in e_i rad A e_j".to_string());
    }
    if !alg.in_radical(&t.a2) || !alg.in_radical(&t.a3) {
        diags.push("a2 or a3 is not in rad A".to_string());
    }
    if !m.is_local() {
        diags.push("module is not local".to_string());
    }
    if !diags.is_empty() {
        return Vec::new();
    }
    let a1b0 = m.act(alg, &t.a1, &t.b0);
    let x2 = m.act(alg, &t.a2, &a1b0);
    let x3 = m.act(alg, &t.a3, &a1b0);
    if Subspace::from_vectors(alg.field(), m.dim(), [x2, x3]).dim() != 2 {
        diags.push("(a) fails: a2 a1 b0 and a3 a1 b0 are dependent".to_string());
    }
    let rad2 = alg.radical_power(2);
    if rad2.basis().iter().any(|r| !is_zero(&m.act(alg, r, &a1b0))) {
        diags.push("(b) fails: rad^2 A a1 b0 is nonzero".to_string());
    }
    let mut transcript = Vec::new();
    match c_search(alg, m, t, &mut transcript) {
        Ok(true) => {}
        Ok(false) => diags.push("(c) fails: some pair admits a solution".to_string()),
        Err(e) => diags.push(format!("(c) could not be evaluated: {}", e)),
    }
    transcript
}

/// Re-checks an obstruction witness using only module and linear algebra
/// operations. `op` must be the opposite algebra of `alg`.
pub fn certify_obstruction(alg: &FiniteDimAlgebra, op: &FiniteDimAlgebra, w: &ObstructionWitness) -> CertifyReport {
    let mut diags = Vec::new();
    let mut transcript = Vec::new();
    let over = match w.kind {
        1 | 3 => Some(alg),
        2 | 4 => Some(op),
        _ => None,
    };
    match over {
        None => diags.push(format!("unknown kind {}", w.kind)),
        Some(b) => {
            if w.module.quiver() != b.quiver() || w.module.field() != b.field() {
                diags.push("module is over a different quiver".to_string());
            } else if w.module.violated_relation(b.presentation()).is_some() {
                diags.push("module does not satisfy the relations".to_string());
            } else {
                match (w.kind, &w.triple) {
                    (1, _) => {
                        if !is_local_ll2_with_radical(&w.module, 3) {
                            diags.push("not local of Loewy length two with radical of length three".to_string());
                        }
                    }
                    (2, _) => {
                        if !is_colocal_ll2_with_cosocle(&w.module.dual(), 3) {
                            diags.push(
                                "dual is not colocal of Loewy length two with M/soc M of length three".to_string(),
                            );
                        }
                    }
                    (_, Some(t)) => transcript = check_triple(b, &w.module, t, &mut diags),
                    (_, None) => diags.push("missing element data".to_string()),
                }
            }
        }
    }
    CertifyReport {
        certified: diags.is_empty(),
        diagnostics: diags,
        transcript,
        span_reading: SPAN_READING.to_string(),
    }
}

/// Candidate obstructions of the third kind at vertex `l` of `alg`:
/// `M = A e_j / rad^2 A ã1` with `ã1 ∈ e_l rad A e_j` for the sources `j`
/// of the arrows ending at `l`, `b0` the class of `e_j`, and `ã2, ã3` the
/// two arrows leaving `l`.
fn triple_candidate_at(alg: &FiniteDimAlgebra, l: VertexId, budget: usize) -> Option<(Representation, TripleData)> {
    let q = alg.quiver();
    let outs = q.out_arrows(l);
    if outs.len() < 2 {
        return None;
    }
    let mut sources: Vec<VertexId> = q.in_arrows(l).into_iter().map(|x| q.source(x)).collect();
    sources.sort_unstable();
    sources.dedup();
    let rad2 = alg.radical_power(2);
    for j in sources {
        let corner = alg.corner_radical_indices(l, j);
        let proj = Projective::new(alg, j);
        for coeffs in alg.field().projective_points(corner.len()).take(budget) {
            let mut a1 = alg.zero();
            for (&k, &c) in corner.iter().zip(&coeffs) {
                a1[k] = c;
            }
            let gens: Vec<Vec<u32>> = rad2.basis().iter().map(|r| proj.element(&alg.mul(r, &a1))).collect();
            let sub = proj.rep.generated_submodule(&gens);
            let module = proj.rep.quotient(&sub);
            let b0 = proj.rep.quotient_coords(&sub, &proj.top(alg));
            for (ka, &a) in outs.iter().enumerate() {
                for &b in &outs[ka + 1..] {
                    let t = TripleData {
                        i: l,
                        j,
                        a1: a1.clone(),
                        a2: alg.arrow_element(a),
                        a3: alg.arrow_element(b),
                        b0: b0.clone(),
                        transcript: Vec::new(),
                    };
                    let mut diags = Vec::new();
                    let transcript = check_triple(alg, &module, &t, &mut diags);
                    if diags.is_empty() {
                        return Some((module, TripleData { transcript, ..t }));
                    }
                }
            }
        }
    }
    None
}

/// An obstruction witness found by the constructions above, certified
/// before it is returned.
pub fn find_obstruction(
    alg: &FiniteDimAlgebra,
    op: &FiniteDimAlgebra,
    preferred: &[VertexId],
    budget: usize,
) -> Option<ObstructionWitness> {
    let q = alg.quiver();
    let n = q.num_vertices();
    let certified = |w: ObstructionWitness| certify_obstruction(alg, op, &w).certified.then_some(w);
    for i in 0..n {
        if q.out_arrows(i).len() >= 3 {
            if let Some(module) = local_module_with_radical_length(alg, i, 3) {
                if let Some(w) = certified(ObstructionWitness {
                    kind: 1,
                    module,
                    triple: None,
                }) {
                    return Some(w);
                }
            }
        }
    }
    for i in 0..n {
        if q.in_arrows(i).len() >= 3 {
            if let Some(module) = local_module_with_radical_length(op, i, 3) {
                if let Some(w) = certified(ObstructionWitness {
                    kind: 2,
                    module,
                    triple: None,
                }) {
                    return Some(w);
                }
            }
        }
    }
    let rest = (0..n).filter(|v| !preferred.contains(v));
    for l in preferred.iter().copied().chain(rest) {
        for (kind, b) in [(3u8, alg), (4u8, op)] {
            if let Some((module, t)) = triple_candidate_at(b, l, budget) {
                if let Some(w) = certified(ObstructionWitness {
                    kind,
                    module,
                    triple: Some(t),
                }) {
                    return Some(w);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Bisected(BisectedWitness),
    Obstruction(ObstructionWitness),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub fuller_bound: usize,
    pub search_budget: u64,
    pub obstruction_budget: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            fuller_bound: DEFAULT_FULLER_BOUND,
            search_budget: DEFAULT_SEARCH_BUDGET,
            obstruction_budget: DEFAULT_OBSTRUCTION_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    /// Fuller's verdict.
    pub biserial: bool,
    pub fuller_certificate: Option<FullerCertificate>,
    pub witness: Option<Witness>,
    /// Verdict carried by the witness, when one was found.
    pub witness_verdict: Option<bool>,
    /// Why no witness is attached.
    pub witness_unavailable: Option<String>,
}

impl Decision {
    /// The witness contradicts Fuller's verdict.
    pub fn disagreement(&self) -> bool {
        self.witness_verdict.is_some_and(|v| v != self.biserial)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error(transparent)]
    Fuller(#[from] BiserialError),
}

/// Fuller's verdict plus a certificate: a bisected presentation when one
/// is found, otherwise an obstruction module.
pub fn decide_biserial(
    alg: &FiniteDimAlgebra,
    op: &FiniteDimAlgebra,
    opts: &DecideOptions,
) -> Result<Decision, CriteriaError> {
    let fuller = is_biserial_fuller_with(alg, op, opts.fuller_bound)?;
    let mut decision = Decision {
        biserial: fuller.biserial,
        fuller_certificate: fuller.certificate,
        witness: None,
        witness_verdict: None,
        witness_unavailable: None,
    };
    let failing = match search_bisected(alg, opts.search_budget) {
        Ok(out) => match out.witness {
            Some(w) => {
                if verify_bisected_witness(alg, &w).is_empty() {
                    decision.witness = Some(Witness::Bisected(w));
                    decision.witness_verdict = Some(true);
                    return Ok(decision);
                }
                decision.witness_unavailable = Some("the search produced an invalid witness".to_string());
                return Ok(decision);
            }
            None => out.failing,
        },
        Err(e) => {
            decision.witness_unavailable = Some(e.to_string());
            Vec::new()
        }
    };
    match find_obstruction(alg, op, &failing, opts.obstruction_budget) {
        Some(w) => {
            decision.witness = Some(Witness::Obstruction(w));
            decision.witness_verdict = Some(false);
            decision.witness_unavailable = None;
        }
        None => {
            if decision.witness_unavailable.is_none() {
                decision.witness_unavailable = Some(format!(
                    "no bisected presentation over GF({}) and no obstruction in the searched family",
                    alg.field().modulus()
                ));
            }
        }
    }
    Ok(decision)
}
