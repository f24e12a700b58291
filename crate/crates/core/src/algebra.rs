//! Finite-dimensional quotients `kQ/I` of path algebras.
//!
//! An algebra is built from a [`Presentation`] by computing the ideal
//! generated by the relations inside the span of all paths of length below
//! the nilpotency index `m`. Paths are ordered by length and then
//! lexicographically; inside every (source, target) block the greatest path
//! of each echelon row is eliminated, and the remaining paths form the
//! monomial basis. Every element is a dense coefficient vector over that
//! basis.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::linalg::{is_zero, Field, Matrix, Subspace};
use crate::quiver::{enumerate_paths, ArrowId, Path, Quiver, VertexId};

/// Above this many paths the truncated membership certificate for
/// inhomogeneous relations on cyclic quivers is computed at a lower length.
const CERTIFICATE_PATH_LIMIT: usize = 20_000;

pub const DEFAULT_MAX_NILPOTENCY: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("relation {index} is malformed: {reason}")]
    MalformedRelation { index: usize, reason: String },
    #[error(
        "could not find m <= {max_nilpotency} with every path of length m in the ideal \
         (the ideal may not be admissible, or the bound is too small)"
    )]
    AdmissibilityUndecided { max_nilpotency: usize },
}

/// A k-linear combination of parallel paths. Terms are kept sorted by path
/// with distinct paths and nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    terms: Vec<(u32, Path)>,
}

impl Relation {
    pub fn new(field: Field, terms: impl IntoIterator<Item = (u32, Path)>) -> Self {
        let mut acc: Vec<(u32, Path)> = Vec::new();
        let mut sorted: Vec<(u32, Path)> = terms.into_iter().collect();
        sorted.sort_by(|a, b| a.1.cmp(&b.1));
        for (c, p) in sorted {
            let c = c % field.modulus();
            match acc.last_mut() {
                Some((lc, lp)) if *lp == p => *lc = field.add(*lc, c),
                _ => acc.push((c, p)),
            }
        }
        acc.retain(|(c, _)| *c != 0);
        Relation { terms: acc }
    }

    pub fn monomial(path: Path) -> Self {
        Relation {
            terms: vec![(1, path)],
        }
    }

    pub fn terms(&self) -> &[(u32, Path)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All terms have the same length.
    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].1.len() == w[1].1.len())
    }

    pub fn reversed(&self, field: Field) -> Relation {
        Relation::new(field, self.terms.iter().map(|(c, p)| (*c, p.reversed())))
    }

    pub fn display(&self, q: &Quiver, field: Field) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let p = field.modulus();
        let mut s = String::new();
        for (k, (c, path)) in self.terms.iter().enumerate() {
            let name = path.display(q);
            let (neg, mag) = if *c == p - 1 && p > 2 { (true, 1) } else { (false, *c) };
            if k == 0 {
                if neg {
                    s.push_str("- ");
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mag != 1 {
                s.push_str(&format!("{}*", mag));
            }
            s.push_str(&name);
        }
        s
    }
}

/// A quiver with relations over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    quiver: Quiver,
    field: Field,
    relations: Vec<Relation>,
}

impl Presentation {
    /// Zero relations are dropped. Every remaining relation must consist of
    /// paths of length at least two sharing their source and target.
    pub fn new(quiver: Quiver, field: Field, relations: Vec<Relation>) -> Result<Self, AlgebraError> {
        let relations: Vec<Relation> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        for (index, r) in relations.iter().enumerate() {
            let bad = |reason: &str| AlgebraError::MalformedRelation {
                index,
                reason: reason.to_string(),
            };
            let (_, first) = &r.terms[0];
            for (_, p) in &r.terms {
                if p.len() < 2 {
                    return Err(bad("every path must have length at least two"));
                }
                if p.source() != first.source() || p.target() != first.target() {
                    return Err(bad("paths do not share source and target"));
                }
                let valid = p.arrows().iter().all(|&a| a < quiver.num_arrows())
                    && Path::from_written(&quiver, p.arrows()).as_ref() == Some(p);
                if !valid {
                    return Err(bad("path is not a path of the quiver"));
                }
            }
        }
        Ok(Presentation {
            quiver,
            field,
            relations,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_homogeneous(&self) -> bool {
        self.relations.iter().all(Relation::is_homogeneous)
    }

    /// Reversed quiver with every relation read backwards.
    pub fn opposite(&self) -> Presentation {
        Presentation {
            quiver: self.quiver.opposite(),
            field: self.field,
            relations: self.relations.iter().map(|r| r.reversed(self.field)).collect(),
        }
    }
}

type Sparse = Vec<(usize, u32)>;

/// The span of all paths of length `< n`, split into (source, target)
/// blocks, with an echelon subspace per block.
struct PathSpace {
    field: Field,
    n: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    /// (block, local column) per path
    slot: Vec<(usize, usize)>,
    /// global path ids per block, greatest path first
    members: Vec<Vec<usize>>,
    spaces: Vec<Subspace>,
}

impl PathSpace {
    fn new(q: &Quiver, field: Field, n: usize) -> Self {
        let paths = if n == 0 { Vec::new() } else { enumerate_paths(q, n - 1) };
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut block_ids: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (i, p) in paths.iter().enumerate().rev() {
            let b = *block_ids.entry((p.source(), p.target())).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            members[b].push(i);
        }
        let mut slot = vec![(0, 0); paths.len()];
        for (b, ms) in members.iter().enumerate() {
            for (c, &g) in ms.iter().enumerate() {
                slot[g] = (b, c);
            }
        }
        let spaces = members.iter().map(|m| Subspace::zero(field, m.len())).collect();
        PathSpace {
            field,
            n,
            paths,
            index,
            slot,
            members,
            spaces,
        }
    }

    fn len_of(&self, g: usize) -> usize {
        self.paths[g].len()
    }

    /// Inserts a homogeneous sparse vector; returns the new echelon
    /// increment (as a sparse vector) when the span grew.
    fn insert(&mut self, v: &Sparse) -> Option<Sparse> {
        let &(g0, _) = v.first()?;
        let b = self.slot[g0].0;
        let mut dense = vec![0u32; self.members[b].len()];
        for &(g, c) in v {
            debug_assert_eq!(self.slot[g].0, b, "inhomogeneous vector");
            let lc = self.slot[g].1;
            dense[lc] = self.field.add(dense[lc], c);
        }
        let reduced = self.spaces[b].reduce(&dense);
        if is_zero(&reduced) {
            return None;
        }
        self.spaces[b].insert(&reduced);
        Some(
            reduced
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(lc, &c)| (self.members[b][lc], c))
                .collect(),
        )
    }

    fn contains_path(&self, g: usize) -> bool {
        let (b, lc) = self.slot[g];
        let mut v = vec![0; self.members[b].len()];
        v[lc] = 1;
        self.spaces[b].contains(&v)
    }

    fn multiply(&self, q: &Quiver, v: &Sparse, a: ArrowId, left: bool) -> Sparse {
        let ap = Path::arrow(q, a);
        let mut out: Sparse = Vec::new();
        for &(g, c) in v {
            let p = &self.paths[g];
            let prod = if left { ap.compose(p) } else { p.compose(&ap) };
            if let Some(np) = prod {
                if let Some(&ng) = self.index.get(&np) {
                    out.push((ng, c));
                }
            }
        }
        out
    }

    /// Closes the span under left and right multiplication by arrows,
    /// dropping terms of length `>= n`. Produces the image of the ideal
    /// generated by `gens` in `kQ / (kQ^+)^n`.
    fn close_truncated(&mut self, q: &Quiver, gens: impl IntoIterator<Item = Sparse>) {
        let mut queue: VecDeque<Sparse> = VecDeque::new();
        for g in gens {
            if let Some(inc) = self.insert(&g) {
                queue.push_back(inc);
            }
        }
        while let Some(v) = queue.pop_front() {
            for a in 0..q.num_arrows() {
                for left in [true, false] {
                    let w = self.multiply(q, &v, a, left);
                    if let Some(inc) = self.insert(&w) {
                        queue.push_back(inc);
                    }
                }
            }
        }
    }

    /// Span of all `u*r*v` whose terms all have length `< n`. Only rows free
    /// of length `n-1` terms are multiplied further, so everything found is
    /// a genuine element of the ideal.
    fn close_certified(&mut self, q: &Quiver, gens: impl IntoIterator<Item = Sparse>) {
        for g in gens {
            self.insert(&g);
        }
        let top = self.n.saturating_sub(1);
        loop {
            let mut grew = false;
            for b in 0..self.members.len() {
                let rows: Vec<Sparse> = self.spaces[b]
                    .basis()
                    .iter()
                    .zip(self.spaces[b].pivots())
                    .filter(|(_, &pc)| self.len_of(self.members[b][pc]) < top)
                    .map(|(row, _)| {
                        row.iter()
                            .enumerate()
                            .filter(|(_, &c)| c != 0)
                            .map(|(lc, &c)| (self.members[b][lc], c))
                            .collect()
                    })
                    .collect();
                for v in rows {
                    for a in 0..q.num_arrows() {
                        for left in [true, false] {
                            let w = self.multiply(q, &v, a, left);
                            grew |= self.insert(&w).is_some();
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }

    fn all_paths_of_len_in(&self, len: usize) -> bool {
        (0..self.paths.len())
            .filter(|&g| self.len_of(g) == len)
            .all(|g| self.contains_path(g))
    }

    fn relation_vectors(&self, pres: &Presentation) -> Vec<Sparse> {
        pres.relations
            .iter()
            .filter_map(|r| {
                r.terms()
                    .iter()
                    .map(|(c, p)| self.index.get(p).map(|&g| (g, *c)))
                    .collect::<Option<Sparse>>()
            })
            .collect()
    }

    /// Relations with long terms projected away.
    fn truncated_relation_vectors(&self, pres: &Presentation) -> Vec<Sparse> {
        pres.relations
            .iter()
            .map(|r| {
                r.terms()
                    .iter()
                    .filter_map(|(c, p)| self.index.get(p).map(|&g| (g, *c)))
                    .collect::<Sparse>()
            })
            .filter(|v| !v.is_empty())
            .collect()
    }
}

/// Number of paths of length at most `len`, saturating at `cap + 1`.
fn path_count_upto(q: &Quiver, len: usize, cap: usize) -> usize {
    let n = q.num_vertices();
    let mut ending = vec![1usize; n];
    let mut total = n;
    for _ in 0..len {
        let mut next = vec![0usize; n];
        for a in q.arrows() {
            next[a.target] = next[a.target].saturating_add(ending[a.source]);
        }
        total = total.saturating_add(next.iter().fold(0usize, |s, &x| s.saturating_add(x)));
        if total > cap {
            return cap + 1;
        }
        ending = next;
    }
    total
}

/// `kQ/I` with a fixed monomial basis and normal-form multiplication.
#[derive(Debug, Clone)]
pub struct FiniteDimAlgebra {
    presentation: Presentation,
    max_nilpotency: usize,
    nilpotency: usize,
    basis: Vec<Path>,
    basis_index: HashMap<Path, usize>,
    normal_forms: HashMap<Path, Sparse>,
    table: Vec<Vec<(usize, Sparse)>>,
    radical_powers: Vec<Subspace>,
}

impl FiniteDimAlgebra {
    /// Builds `kQ/I`, finding the least `m <= max_nilpotency` with every
    /// path of length `m` in `I`.
    pub fn build(pres: &Presentation, max_nilpotency: usize) -> Result<Self, AlgebraError> {
        let q = &pres.quiver;
        let undecided = AlgebraError::AdmissibilityUndecided { max_nilpotency };
        if let Some(longest) = q.longest_path_len() {
            // every ideal is computed exactly: there are no paths beyond `longest`
            let mut space = PathSpace::new(q, pres.field, longest + 1);
            let gens = space.relation_vectors(pres);
            space.close_truncated(q, gens);
            let m = (1..=longest + 1)
                .find(|&len| space.all_paths_of_len_in(len))
                .expect("no path is longer than the longest path");
            if m > max_nilpotency {
                return Err(undecided);
            }
            return Ok(Self::from_ideal(pres.clone(), max_nilpotency, m));
        }
        for m in 2..=max_nilpotency {
            let mut space = PathSpace::new(q, pres.field, m + 1);
            let gens = space.truncated_relation_vectors(pres);
            space.close_truncated(q, gens);
            if !space.all_paths_of_len_in(m) {
                continue;
            }
            // For length-homogeneous relations the ideal is graded and the
            // degree-m check is exact. Otherwise a certificate is required.
            if pres.is_homogeneous() || Self::certify_paths_in_ideal(pres, m, max_nilpotency) {
                return Ok(Self::from_ideal(pres.clone(), max_nilpotency, m));
            }
        }
        Err(undecided)
    }

    /// Checks that every path of length `m` is a combination of products
    /// `u*r*v` whose terms all have length `<= bound` (lowered when the path
    /// count would be excessive).
    fn certify_paths_in_ideal(pres: &Presentation, m: usize, bound: usize) -> bool {
        let q = &pres.quiver;
        let mut len = bound.max(m);
        while len > m && path_count_upto(q, len, CERTIFICATE_PATH_LIMIT) > CERTIFICATE_PATH_LIMIT {
            len -= 1;
        }
        let mut space = PathSpace::new(q, pres.field, len + 1);
        let gens = space.relation_vectors(pres);
        space.close_certified(q, gens);
        space.all_paths_of_len_in(m)
    }

    /// Assumes `(kQ^+)^m ⊆ I`.
    fn from_ideal(pres: Presentation, max_nilpotency: usize, m: usize) -> Self {
        let q = &pres.quiver;
        let field = pres.field;
        let mut space = PathSpace::new(q, field, m);
        let gens = space.truncated_relation_vectors(&pres);
        space.close_truncated(q, gens);
        Self::from_space(pres, max_nilpotency, m, space)
    }

    fn from_space(pres: Presentation, max_nilpotency: usize, m: usize, space: PathSpace) -> Self {
        let q = &pres.quiver;
        let field = pres.field;
        let mut is_pivot = vec![false; space.paths.len()];
        for (b, sub) in space.spaces.iter().enumerate() {
            for &pc in sub.pivots() {
                is_pivot[space.members[b][pc]] = true;
            }
        }
        let basis: Vec<Path> = space
            .paths
            .iter()
            .enumerate()
            .filter(|(g, _)| !is_pivot[*g])
            .map(|(_, p)| p.clone())
            .collect();
        let basis_index: HashMap<Path, usize> =
            basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

        let mut normal_forms: HashMap<Path, Sparse> = HashMap::with_capacity(space.paths.len());
        for (b, sub) in space.spaces.iter().enumerate() {
            for (row, &pc) in sub.basis().iter().zip(sub.pivots()) {
                let nf: Sparse = row
                    .iter()
                    .enumerate()
                    .filter(|(lc, &c)| c != 0 && *lc != pc)
                    .map(|(lc, &c)| (basis_index[&space.paths[space.members[b][lc]]], field.neg(c)))
                    .collect();
                normal_forms.insert(space.paths[space.members[b][pc]].clone(), nf);
            }
        }
        for (i, p) in basis.iter().enumerate() {
            normal_forms.insert(p.clone(), vec![(i, 1)]);
        }

        let mut table = vec![Vec::new(); basis.len()];
        for (i, bi) in basis.iter().enumerate() {
            for (j, bj) in basis.iter().enumerate() {
                if let Some(p) = bi.compose(bj) {
                    if p.len() < m {
                        let nf = &normal_forms[&p];
                        if !nf.is_empty() {
                            table[i].push((j, nf.clone()));
                        }
                    }
                }
            }
        }

        let dim = basis.len();
        let mut radical_powers = vec![Subspace::zero(field, dim); m + 1];
        for i in (1..m).rev() {
            let mut s = radical_powers[i + 1].clone();
            for p in space.paths.iter().filter(|p| p.len() == i) {
                s.insert(&to_dense(dim, &normal_forms[p]));
            }
            radical_powers[i] = s;
        }
        radical_powers[0] = Subspace::full(field, dim);
        let _ = q;

        FiniteDimAlgebra {
            presentation: pres,
            max_nilpotency,
            nilpotency: m,
            basis,
            basis_index,
            normal_forms,
            table,
            radical_powers,
        }
    }

    /// Algebra `kQ / K` where `K` is given as vectors over the paths of
    /// length `< n` and `(kQ^+)^n` is known to lie in the ideal. The
    /// nilpotency index is recomputed.
    pub(crate) fn from_truncated_kernel(
        pres: Presentation,
        max_nilpotency: usize,
        n: usize,
        kernel: &[Vec<(Path, u32)>],
    ) -> Self {
        let q = pres.quiver.clone();
        let mut space = PathSpace::new(&q, pres.field, n);
        let gens: Vec<Sparse> = kernel
            .iter()
            .map(|v| v.iter().map(|(p, c)| (space.index[p], *c)).collect())
            .collect();
        space.close_truncated(&q, gens);
        let m = (1..=n).find(|&len| space.all_paths_of_len_in(len)).unwrap_or(n);
        if m < n {
            return Self::from_ideal(pres, max_nilpotency, m);
        }
        Self::from_space(pres, max_nilpotency, n, space)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    pub fn field(&self) -> Field {
        self.presentation.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Least `m` with all paths of length `m` in the ideal.
    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency
    }

    pub fn max_nilpotency(&self) -> usize {
        self.max_nilpotency
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.basis.iter().map(|p| p.display(self.quiver())).collect()
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.basis_index.get(p).copied()
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.dim()]
    }

    /// Image of a path; zero beyond the nilpotency index.
    pub fn path_element(&self, p: &Path) -> Vec<u32> {
        match self.normal_forms.get(p) {
            Some(nf) => to_dense(self.dim(), nf),
            None => {
                debug_assert!(p.len() >= self.nilpotency);
                self.zero()
            }
        }
    }

    pub fn arrow_element(&self, a: ArrowId) -> Vec<u32> {
        self.path_element(&Path::arrow(self.quiver(), a))
    }

    pub fn idempotent(&self, v: VertexId) -> Vec<u32> {
        self.path_element(&Path::trivial(v))
    }

    /// Image of a linear combination of paths.
    pub fn combination(&self, terms: &[(u32, Path)]) -> Vec<u32> {
        let f = self.field();
        let mut out = self.zero();
        for (c, p) in terms {
            f.axpy(&mut out, *c, &self.path_element(p));
        }
        out
    }

    pub fn mul(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out = self.zero();
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, nf) in &self.table[i] {
                let vj = v[*j];
                if vj == 0 {
                    continue;
                }
                let c = f.mul(ui, vj);
                for &(k, x) in nf {
                    out[k] = f.add(out[k], f.mul(c, x));
                }
            }
        }
        out
    }

    pub fn add(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let f = self.field();
        u.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect()
    }

    pub fn sub(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let f = self.field();
        u.iter().zip(v).map(|(&a, &b)| f.sub(a, b)).collect()
    }

    pub fn scale(&self, c: u32, u: &[u32]) -> Vec<u32> {
        let f = self.field();
        u.iter().map(|&a| f.mul(c, a)).collect()
    }

    /// `rad^i A`; zero from `i = m` on.
    pub fn radical_power(&self, i: usize) -> &Subspace {
        &self.radical_powers[i.min(self.nilpotency)]
    }

    pub fn radical_dims(&self) -> Vec<usize> {
        self.radical_powers.iter().map(Subspace::dim).collect()
    }

    /// Basis indices spanning `e_i A e_j` (paths from `j` to `i`).
    pub fn corner_indices(&self, i: VertexId, j: VertexId) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| self.basis[k].target() == i && self.basis[k].source() == j)
            .collect()
    }

    /// Basis indices spanning `e_i rad(A) e_j`.
    pub fn corner_radical_indices(&self, i: VertexId, j: VertexId) -> Vec<usize> {
        self.corner_indices(i, j)
            .into_iter()
            .filter(|&k| !self.basis[k].is_trivial())
            .collect()
    }

    pub fn in_corner(&self, u: &[u32], i: VertexId, j: VertexId) -> bool {
        u.iter()
            .enumerate()
            .all(|(k, &c)| c == 0 || (self.basis[k].target() == i && self.basis[k].source() == j))
    }

    pub fn in_radical(&self, u: &[u32]) -> bool {
        u.iter().enumerate().all(|(k, &c)| c == 0 || !self.basis[k].is_trivial())
    }

    /// `e_i u e_j`.
    pub fn corner_part(&self, u: &[u32], i: VertexId, j: VertexId) -> Vec<u32> {
        u.iter()
            .enumerate()
            .map(|(k, &c)| {
                if self.basis[k].target() == i && self.basis[k].source() == j {
                    c
                } else {
                    0
                }
            })
            .collect()
    }

    /// Class of a radical element in `rad A / rad^2 A`, as coefficients on
    /// the arrows.
    pub fn top_class(&self, u: &[u32]) -> Vec<u32> {
        (0..self.quiver().num_arrows())
            .map(|a| {
                let idx = self.basis_index[&Path::arrow(self.quiver(), a)];
                u[idx]
            })
            .collect()
    }

    /// The opposite algebra, built from the reversed presentation.
    pub fn opposite(&self) -> FiniteDimAlgebra {
        Self::from_ideal(self.presentation.opposite(), self.max_nilpotency, self.nilpotency)
    }

    /// Matrix of the anti-isomorphism `A -> A^op` sending a path to its
    /// reversal, in the two monomial bases.
    pub fn opposite_map(&self, op: &FiniteDimAlgebra) -> Matrix {
        let f = self.field();
        let mut m = Matrix::zeros(f, op.dim(), self.dim());
        for (j, p) in self.basis.iter().enumerate() {
            let img = op.path_element(&p.reversed());
            for (i, &c) in img.iter().enumerate() {
                if c != 0 {
                    m.set(i, j, c);
                }
            }
        }
        m
    }

    /// Images of the relations; all zero for a correctly built algebra.
    pub fn relation_images(&self) -> Vec<Vec<u32>> {
        self.presentation
            .relations
            .iter()
            .map(|r| self.combination(r.terms()))
            .collect()
    }
}

pub(crate) fn to_dense(dim: usize, v: &[(usize, u32)]) -> Vec<u32> {
    let mut out = vec![0; dim];
    for &(i, c) in v {
        out[i] = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf3() -> Field {
        Field::new(3).unwrap()
    }

    fn rel(q: &Quiver, f: Field, terms: &[(i64, &[&str])]) -> Relation {
        Relation::new(
            f,
            terms.iter().map(|(c, names)| {
                let ids: Vec<_> = names.iter().map(|n| q.arrow_index(n).unwrap()).collect();
                (f.from_i64(*c), Path::from_written(q, &ids).unwrap())
            }),
        )
    }

    fn crossed_pairs() -> FiniteDimAlgebra {
        let f = gf3();
        let q = Quiver::from_names(
            &["1", "2", "3"],
            &[("x", "1", "2"), ("y", "1", "2"), ("a", "2", "3"), ("b", "2", "3")],
        )
        .unwrap();
        let rels = vec![
            rel(&q, f, &[(1, &["a", "x"]), (-1, &["b", "x"])]),
            rel(&q, f, &[(1, &["b", "y"]), (-1, &["a", "y"])]),
        ];
        FiniteDimAlgebra::build(&Presentation::new(q, f, rels).unwrap(), 12).unwrap()
    }

    #[test]
    fn a3_path_algebra() {
        let f = gf3();
        let q = Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let alg = FiniteDimAlgebra::build(&Presentation::new(q, f, vec![]).unwrap(), 12).unwrap();
        assert_eq!(alg.dim(), 6);
        assert_eq!(alg.nilpotency_index(), 3);
        assert!(alg.radical_power(3).is_zero());
        assert_eq!(alg.radical_dims(), vec![6, 3, 1, 0]);
    }

    #[test]
    fn local_loop_algebra() {
        let f = gf3();
        let q = Quiver::from_names(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap();
        let rels = vec![
            rel(&q, f, &[(1, &["x", "x"])]),
            rel(&q, f, &[(1, &["y", "y"])]),
            rel(&q, f, &[(1, &["x", "y"])]),
            rel(&q, f, &[(1, &["y", "x"])]),
        ];
        let alg = FiniteDimAlgebra::build(&Presentation::new(q, f, rels).unwrap(), 12).unwrap();
        assert_eq!(alg.dim(), 3);
        assert_eq!(alg.nilpotency_index(), 2);
    }

    #[test]
    fn crossed_pairs_dimension_and_products() {
        let alg = crossed_pairs();
        assert_eq!(alg.dim(), 9);
        assert_eq!(alg.nilpotency_index(), 3);
        let q = alg.quiver().clone();
        let [x, y, a, b] = ["x", "y", "a", "b"].map(|n| alg.arrow_element(q.arrow_index(n).unwrap()));
        assert_eq!(alg.mul(&a, &x), alg.mul(&b, &x));
        assert_eq!(alg.mul(&a, &y), alg.mul(&b, &y));
        assert!(!is_zero(&alg.mul(&a, &x)));
        for img in alg.relation_images() {
            assert!(is_zero(&img));
        }
    }

    #[test]
    fn idempotents_are_orthogonal() {
        let alg = crossed_pairs();
        let n = alg.quiver().num_vertices();
        let mut one = alg.zero();
        for i in 0..n {
            let ei = alg.idempotent(i);
            one = alg.add(&one, &ei);
            for j in 0..n {
                let prod = alg.mul(&ei, &alg.idempotent(j));
                if i == j {
                    assert_eq!(prod, ei);
                } else {
                    assert!(is_zero(&prod));
                }
            }
        }
        let b = alg.arrow_element(2);
        assert_eq!(alg.mul(&one, &b), b);
        assert_eq!(alg.mul(&b, &one), b);
    }

    #[test]
    fn malformed_relations() {
        let f = gf3();
        let q = Quiver::from_names(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        let short = rel(&q, f, &[(1, &["a"])]);
        assert!(matches!(
            Presentation::new(q.clone(), f, vec![short]),
            Err(AlgebraError::MalformedRelation { .. })
        ));
        let q2 = Quiver::from_names(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap();
        // x*x and x*x*x share endpoints, fine; a relation mixing endpoints is not
        let q3 = Quiver::from_names(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "2", "2")],
        )
        .unwrap();
        let mixed = rel(&q3, f, &[(1, &["b", "a"]), (1, &["c", "a"])]);
        assert!(Presentation::new(q3, f, vec![mixed]).is_err());
        let ok = rel(&q2, f, &[(1, &["x", "x"]), (1, &["y", "x", "x"])]);
        assert!(Presentation::new(q2, f, vec![ok]).is_ok());
    }

    #[test]
    fn non_admissible_is_undecided() {
        let f = gf3();
        let q = Quiver::from_names(&["1"], &[("x", "1", "1")]).unwrap();
        let pres = Presentation::new(q, f, vec![]).unwrap();
        assert_eq!(
            FiniteDimAlgebra::build(&pres, 6).unwrap_err(),
            AlgebraError::AdmissibilityUndecided { max_nilpotency: 6 }
        );
    }

    #[test]
    fn inhomogeneous_cyclic_relation_needs_certificate() {
        let f = gf3();
        let q = Quiver::from_names(&["1"], &[("x", "1", "1")]).unwrap();
        // x^2 - x^3 alone: x^2 lies in I + (x)^N for every N but not in I
        let only = rel(&q, f, &[(1, &["x", "x"]), (-1, &["x", "x", "x"])]);
        let pres = Presentation::new(q.clone(), f, vec![only.clone()]).unwrap();
        assert!(FiniteDimAlgebra::build(&pres, 8).is_err());
        // adding x^4 makes x^2 a member of I
        let quartic = rel(&q, f, &[(1, &["x", "x", "x", "x"])]);
        let pres = Presentation::new(q, f, vec![only, quartic]).unwrap();
        let alg = FiniteDimAlgebra::build(&pres, 8).unwrap();
        assert_eq!(alg.nilpotency_index(), 2);
        assert_eq!(alg.dim(), 2);
    }

    #[test]
    fn opposite_is_an_involution() {
        let alg = crossed_pairs();
        let op = alg.opposite();
        assert_eq!(op.dim(), alg.dim());
        assert_eq!(op.radical_dims(), alg.radical_dims());
        assert_eq!(op.opposite().presentation(), alg.presentation());
        let map = alg.opposite_map(&op);
        assert_eq!(map.rank(), alg.dim());
        // anti-multiplicative: phi(uv) = phi(v) phi(u)
        let x = alg.arrow_element(0);
        let a = alg.arrow_element(2);
        let lhs = map.mul_vec(&alg.mul(&a, &x));
        let rhs = op.mul(&map.mul_vec(&x), &map.mul_vec(&a));
        assert_eq!(lhs, rhs);
    }
}
