//! Finite-dimensional left modules as quiver representations.
//!
//! A representation stores one vector space per vertex and one matrix per
//! arrow (rows indexed by the target space). Module elements are dense
//! vectors over the concatenation of the vertex spaces; submodules are
//! subspaces of that total space closed under the arrow actions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{FiniteDimAlgebra, Presentation};
use crate::linalg::{Field, Matrix, Subspace};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("vertex dimension list has length {found}, quiver has {expected} vertices")]
    VertexCount { expected: usize, found: usize },
    #[error("map of arrow `{arrow}` has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    MapShape {
        arrow: String,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("maps are over a different field")]
    FieldMismatch,
    #[error("the maps do not satisfy relation {0}")]
    RelationViolated(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RepresentationRaw")]
pub struct Representation {
    field: Field,
    quiver: Quiver,
    dims: Vec<usize>,
    #[serde(skip_serializing)]
    offsets: Vec<usize>,
    maps: Vec<Matrix>,
}

#[derive(Deserialize)]
struct RepresentationRaw {
    field: Field,
    quiver: Quiver,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl TryFrom<RepresentationRaw> for Representation {
    type Error = ModuleError;

    fn try_from(raw: RepresentationRaw) -> Result<Self, Self::Error> {
        if raw.maps.iter().any(|m| m.field() != raw.field) {
            return Err(ModuleError::FieldMismatch);
        }
        Representation::new(raw.field, raw.quiver, raw.dims, raw.maps)
    }
}

fn offsets_of(dims: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(dims.len() + 1);
    for &d in dims {
        out.push(acc);
        acc += d;
    }
    out.push(acc);
    out
}

impl Representation {
    pub fn new(field: Field, quiver: Quiver, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self, ModuleError> {
        if dims.len() != quiver.num_vertices() {
            return Err(ModuleError::VertexCount {
                expected: quiver.num_vertices(),
                found: dims.len(),
            });
        }
        if maps.len() != quiver.num_arrows() {
            return Err(ModuleError::VertexCount {
                expected: quiver.num_arrows(),
                found: maps.len(),
            });
        }
        for (a, m) in maps.iter().enumerate() {
            let (want_rows, want_cols) = (dims[quiver.target(a)], dims[quiver.source(a)]);
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(ModuleError::MapShape {
                    arrow: quiver.arrow(a).name.clone(),
                    rows: m.rows(),
                    cols: m.cols(),
                    want_rows,
                    want_cols,
                });
            }
        }
        let offsets = offsets_of(&dims);
        Ok(Representation {
            field,
            quiver,
            dims,
            offsets,
            maps,
        })
    }

    /// Validates shapes and that every relation acts as zero.
    pub fn for_presentation(pres: &Presentation, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self, ModuleError> {
        let rep = Self::new(pres.field(), pres.quiver().clone(), dims, maps)?;
        if let Some(k) = rep.violated_relation(pres) {
            return Err(ModuleError::RelationViolated(k));
        }
        Ok(rep)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.dims.len()]
    }

    pub fn offset(&self, v: VertexId) -> usize {
        self.offsets[v]
    }

    pub fn map(&self, a: ArrowId) -> &Matrix {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Vector of the total space supported at `v` with the given entries.
    pub fn embed(&self, v: VertexId, local: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.dim()];
        out[self.offsets[v]..self.offsets[v + 1]].copy_from_slice(local);
        out
    }

    /// `e_v x`.
    pub fn component(&self, x: &[u32], v: VertexId) -> Vec<u32> {
        let mut out = vec![0; self.dim()];
        out[self.offsets[v]..self.offsets[v + 1]].copy_from_slice(&x[self.offsets[v]..self.offsets[v + 1]]);
        out
    }

    fn local<'a>(&self, x: &'a [u32], v: VertexId) -> &'a [u32] {
        &x[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn act_arrow(&self, a: ArrowId, x: &[u32]) -> Vec<u32> {
        let s = self.quiver.source(a);
        let t = self.quiver.target(a);
        let y = self.maps[a].mul_vec(self.local(x, s));
        self.embed(t, &y)
    }

    pub fn act_path(&self, p: &Path, x: &[u32]) -> Vec<u32> {
        if p.is_trivial() {
            return self.component(x, p.source());
        }
        let mut y = self.component(x, p.source());
        for &a in p.arrows().iter().rev() {
            y = self.act_arrow(a, &y);
        }
        y
    }

    /// Action of an algebra element given in the monomial basis of `alg`.
    pub fn act(&self, alg: &FiniteDimAlgebra, u: &[u32], x: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0; self.dim()];
        for (k, &c) in u.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut out, c, &self.act_path(&alg.basis()[k], x));
            }
        }
        out
    }

    /// Index of the first relation not acting as zero.
    pub fn violated_relation(&self, pres: &Presentation) -> Option<usize> {
        let f = self.field;
        for (k, r) in pres.relations().iter().enumerate() {
            let (_, first) = &r.terms()[0];
            let (s, t) = (first.source(), first.target());
            let mut total = Matrix::zeros(f, self.dims[t], self.dims[s]);
            for (c, p) in r.terms() {
                let mut m = Matrix::identity(f, self.dims[s]);
                for &a in p.arrows().iter().rev() {
                    m = self.maps[a].mul(&m);
                }
                total = total.add(&m.scaled(*c));
            }
            if !total.is_zero() {
                return Some(k);
            }
        }
        None
    }

    /// Action of arrow `a` on the whole space as a square matrix.
    pub fn total_map(&self, a: ArrowId) -> Matrix {
        let n = self.dim();
        let s = self.quiver.source(a);
        let t = self.quiver.target(a);
        let mut m = Matrix::zeros(self.field, n, n);
        let map = &self.maps[a];
        for r in 0..map.rows() {
            for c in 0..map.cols() {
                let v = map.get(r, c);
                if v != 0 {
                    m.set(self.offsets[t] + r, self.offsets[s] + c, v);
                }
            }
        }
        m
    }

    pub fn zero_submodule(&self) -> Subspace {
        Subspace::zero(self.field, self.dim())
    }

    pub fn whole(&self) -> Subspace {
        Subspace::full(self.field, self.dim())
    }

    /// Smallest submodule containing `gens`.
    pub fn generated_submodule(&self, gens: &[Vec<u32>]) -> Subspace {
        let mut sub = self.zero_submodule();
        let mut queue: Vec<Vec<u32>> = Vec::new();
        for g in gens {
            for v in 0..self.dims.len() {
                let c = self.component(g, v);
                if sub.insert(&c) {
                    queue.push(c);
                }
            }
        }
        while let Some(x) = queue.pop() {
            for a in 0..self.quiver.num_arrows() {
                let y = self.act_arrow(a, &x);
                if sub.insert(&y) {
                    queue.push(y);
                }
            }
        }
        sub
    }

    pub fn cyclic_submodule(&self, x: &[u32]) -> Subspace {
        self.generated_submodule(&[x.to_vec()])
    }

    /// `rad A * N` for a submodule `N`.
    pub fn radical_of(&self, sub: &Subspace) -> Subspace {
        let mut out = self.zero_submodule();
        for x in sub.basis() {
            for a in 0..self.quiver.num_arrows() {
                out.insert(&self.act_arrow(a, x));
            }
        }
        out
    }

    /// `N, rad N, rad^2 N, ..., 0` (ending with the zero subspace).
    pub fn radical_series_of(&self, sub: &Subspace) -> Vec<Subspace> {
        let mut out = vec![sub.clone()];
        while !out.last().expect("nonempty").is_zero() {
            let next = self.radical_of(out.last().expect("nonempty"));
            out.push(next);
        }
        out
    }

    pub fn radical_series(&self) -> Vec<Subspace> {
        self.radical_series_of(&self.whole())
    }

    /// Vectors annihilated (modulo `lower`) by every arrow.
    fn socle_step(&self, lower: &Subspace) -> Subspace {
        let mut s = self.whole();
        for a in 0..self.quiver.num_arrows() {
            let pre = lower.preimage(&self.total_map(a));
            s = s.intersect(&pre).expect("same ambient");
        }
        s
    }

    /// `0, soc M, soc^2 M, ..., M`.
    pub fn socle_series(&self) -> Vec<Subspace> {
        let mut out = vec![self.zero_submodule()];
        while out.last().expect("nonempty").dim() < self.dim() {
            let next = self.socle_step(out.last().expect("nonempty"));
            if next.dim() == out.last().expect("nonempty").dim() {
                break;
            }
            out.push(next);
        }
        out
    }

    pub fn socle(&self) -> Subspace {
        self.socle_step(&self.zero_submodule())
    }

    pub fn loewy_length(&self) -> usize {
        self.radical_series().len() - 1
    }

    pub fn loewy_length_of(&self, sub: &Subspace) -> usize {
        self.radical_series_of(sub).len() - 1
    }

    /// Dimensions of the radical layers `rad^i N / rad^{i+1} N`.
    pub fn radical_layers_of(&self, sub: &Subspace) -> Vec<usize> {
        self.radical_series_of(sub)
            .windows(2)
            .map(|w| w[0].dim() - w[1].dim())
            .collect()
    }

    pub fn top_dim(&self) -> usize {
        self.dim() - self.radical_of(&self.whole()).dim()
    }

    pub fn is_local(&self) -> bool {
        self.top_dim() == 1
    }

    pub fn is_colocal(&self) -> bool {
        self.socle().dim() == 1
    }

    pub fn is_uniserial(&self) -> bool {
        self.is_uniserial_sub(&self.whole())
    }

    /// Uniseriality of a submodule: every radical layer has dimension at
    /// most one (simples are one-dimensional).
    pub fn is_uniserial_sub(&self, sub: &Subspace) -> bool {
        self.radical_layers_of(sub).iter().all(|&d| d <= 1)
    }

    /// The submodule as a representation in its own right.
    pub fn restrict(&self, sub: &Subspace) -> Representation {
        let per_vertex: Vec<Vec<Vec<u32>>> = (0..self.dims.len())
            .map(|v| {
                sub.basis()
                    .iter()
                    .filter(|row| {
                        row.iter()
                            .enumerate()
                            .all(|(k, &c)| c == 0 || (self.offsets[v] <= k && k < self.offsets[v + 1]))
                    })
                    .cloned()
                    .collect()
            })
            .collect();
        debug_assert_eq!(
            per_vertex.iter().map(Vec::len).sum::<usize>(),
            sub.dim(),
            "submodule must be graded"
        );
        let dims: Vec<usize> = per_vertex.iter().map(Vec::len).collect();
        let maps = (0..self.quiver.num_arrows())
            .map(|a| {
                let s = self.quiver.source(a);
                let t = self.quiver.target(a);
                let target_basis = Subspace::from_vectors(self.field, self.dim(), per_vertex[t].iter().cloned());
                let mut m = Matrix::zeros(self.field, dims[t], dims[s]);
                for (c, x) in per_vertex[s].iter().enumerate() {
                    let y = self.act_arrow(a, x);
                    // rows of a reduced echelon basis: coordinates are the pivot entries
                    for (r, &pc) in target_basis.pivots().iter().enumerate() {
                        m.set(r, c, y[pc]);
                    }
                }
                m
            })
            .collect();
        Representation::new(self.field, self.quiver.clone(), dims, maps).expect("shapes are consistent")
    }

    /// `M / N` in the non-pivot coordinates of `N`.
    pub fn quotient(&self, sub: &Subspace) -> Representation {
        let np = sub.non_pivots();
        let per_vertex: Vec<Vec<usize>> = (0..self.dims.len())
            .map(|v| {
                np.iter()
                    .copied()
                    .filter(|&k| self.offsets[v] <= k && k < self.offsets[v + 1])
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = per_vertex.iter().map(Vec::len).collect();
        let maps = (0..self.quiver.num_arrows())
            .map(|a| {
                let s = self.quiver.source(a);
                let t = self.quiver.target(a);
                let mut m = Matrix::zeros(self.field, dims[t], dims[s]);
                for (c, &k) in per_vertex[s].iter().enumerate() {
                    let mut x = vec![0; self.dim()];
                    x[k] = 1;
                    let y = sub.reduce(&self.act_arrow(a, &x));
                    for (r, &kk) in per_vertex[t].iter().enumerate() {
                        m.set(r, c, y[kk]);
                    }
                }
                m
            })
            .collect();
        Representation::new(self.field, self.quiver.clone(), dims, maps).expect("shapes are consistent")
    }

    /// Coordinates in [`Self::quotient`] of the class of `x`.
    pub fn quotient_coords(&self, sub: &Subspace, x: &[u32]) -> Vec<u32> {
        let y = sub.reduce(x);
        sub.non_pivots().into_iter().map(|k| y[k]).collect()
    }

    pub fn quotient_by_generated(&self, gens: &[Vec<u32>]) -> Representation {
        self.quotient(&self.generated_submodule(gens))
    }

    /// The k-dual, a representation of the opposite quiver.
    pub fn dual(&self) -> Representation {
        Representation::new(
            self.field,
            self.quiver.opposite(),
            self.dims.clone(),
            self.maps.iter().map(Matrix::transpose).collect(),
        )
        .expect("transposed shapes match the reversed arrows")
    }
}

/// The projective `A e_i` with its coordinates tied to basis paths of `A`.
#[derive(Debug, Clone)]
pub struct Projective {
    pub vertex: VertexId,
    pub rep: Representation,
    /// Algebra basis index of each module coordinate.
    pub basis_indices: Vec<usize>,
}

impl Projective {
    pub fn new(alg: &FiniteDimAlgebra, i: VertexId) -> Self {
        let q = alg.quiver();
        let n = q.num_vertices();
        let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, p) in alg.basis().iter().enumerate() {
            if p.source() == i {
                per_vertex[p.target()].push(k);
            }
        }
        let dims: Vec<usize> = per_vertex.iter().map(Vec::len).collect();
        let basis_indices: Vec<usize> = per_vertex.iter().flatten().copied().collect();
        let maps = (0..q.num_arrows())
            .map(|a| {
                let s = q.source(a);
                let t = q.target(a);
                let arrow = alg.arrow_element(a);
                let mut m = Matrix::zeros(alg.field(), dims[t], dims[s]);
                for (c, &k) in per_vertex[s].iter().enumerate() {
                    let prod = alg.mul(&arrow, &alg.path_element(&alg.basis()[k]));
                    for (r, &kk) in per_vertex[t].iter().enumerate() {
                        m.set(r, c, prod[kk]);
                    }
                }
                m
            })
            .collect();
        let rep = Representation::new(alg.field(), q.clone(), dims, maps).expect("shapes are consistent");
        Projective {
            vertex: i,
            rep,
            basis_indices,
        }
    }

    /// Module vector of an element of `A e_i`.
    pub fn element(&self, u: &[u32]) -> Vec<u32> {
        self.basis_indices.iter().map(|&k| u[k]).collect()
    }

    /// Algebra element of a module vector.
    pub fn to_algebra(&self, dim: usize, x: &[u32]) -> Vec<u32> {
        let mut out = vec![0; dim];
        for (c, &k) in self.basis_indices.iter().enumerate() {
            out[k] = x[c];
        }
        out
    }

    /// The generator `e_i`.
    pub fn top(&self, alg: &FiniteDimAlgebra) -> Vec<u32> {
        self.element(&alg.idempotent(self.vertex))
    }
}

/// Nonzero vectors of a subspace up to scalars, via its echelon basis.
pub fn projective_points_of(sub: &Subspace) -> impl Iterator<Item = Vec<u32>> + '_ {
    let f = sub.field();
    f.projective_points(sub.dim()).map(move |coeffs| {
        let mut v = vec![0; sub.ambient()];
        for (c, row) in coeffs.iter().zip(sub.basis()) {
            if *c != 0 {
                f.axpy(&mut v, *c, row);
            }
        }
        v
    })
}

/// Part of a subspace of a representation's total space lying at vertex `v`.
pub fn vertex_part(rep: &Representation, sub: &Subspace, v: VertexId) -> Subspace {
    let coords = Subspace::coordinate(rep.field(), rep.dim(), rep.offset(v)..rep.offset(v + 1));
    sub.intersect(&coords).expect("same ambient")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Relation;

    fn gf3() -> Field {
        Field::new(3).unwrap()
    }

    fn a3() -> FiniteDimAlgebra {
        let q = Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        FiniteDimAlgebra::build(&Presentation::new(q, gf3(), vec![]).unwrap(), 12).unwrap()
    }

    fn d4() -> FiniteDimAlgebra {
        let q = Quiver::from_names(
            &["0", "1", "2", "3"],
            &[("a", "0", "1"), ("b", "0", "2"), ("c", "0", "3")],
        )
        .unwrap();
        FiniteDimAlgebra::build(&Presentation::new(q, gf3(), vec![]).unwrap(), 12).unwrap()
    }

    #[test]
    fn projective_of_a3() {
        let alg = a3();
        let p = Projective::new(&alg, 0);
        assert_eq!(p.rep.dims(), &[1, 1, 1]);
        let dims: Vec<usize> = p.rep.radical_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 2, 1, 0]);
        assert_eq!(p.rep.loewy_length(), 3);
        assert!(p.rep.is_uniserial());
        let a = p.element(&alg.arrow_element(0));
        assert_eq!(p.rep.cyclic_submodule(&a).dim(), 2);
        assert_eq!(p.rep.cyclic_submodule(&p.top(&alg)).dim(), 3);
        assert!(p.rep.cyclic_submodule(&[0, 0, 0]).is_zero());
    }

    #[test]
    fn projective_of_d4_center() {
        let alg = d4();
        let p = Projective::new(&alg, 0);
        assert_eq!(p.rep.dim(), 4);
        assert!(p.rep.is_local());
        assert_eq!(p.rep.loewy_length(), 2);
        assert_eq!(p.rep.radical_layers_of(&p.rep.whole()), vec![1, 3]);
        assert!(!p.rep.is_uniserial());
        let rad = p.rep.radical_of(&p.rep.whole());
        let q = p.rep.quotient(&p.rep.radical_of(&rad));
        assert_eq!(q.dim(), 4);
        let a = p.element(&alg.arrow_element(0));
        assert_eq!(q.quotient_by_generated(&[q.quotient_coords(&p.rep.zero_submodule(), &a)]).dim(), 3);
    }

    #[test]
    fn local_loop_projective() {
        let f = gf3();
        let q = Quiver::from_names(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap();
        let rels = ["xx", "yy", "xy", "yx"]
            .iter()
            .map(|w| {
                let ids: Vec<_> = w.chars().map(|c| q.arrow_index(&c.to_string()).unwrap()).collect();
                Relation::monomial(Path::from_written(&q, &ids).unwrap())
            })
            .collect();
        let alg = FiniteDimAlgebra::build(&Presentation::new(q, f, rels).unwrap(), 12).unwrap();
        let p = Projective::new(&alg, 0);
        assert_eq!(p.rep.dims(), &[3]);
        assert!(p.rep.violated_relation(alg.presentation()).is_none());
        assert_eq!(p.rep.socle().dim(), 2);
        assert!(!p.rep.is_colocal());
    }

    #[test]
    fn simple_module_properties() {
        let alg = a3();
        let p = Projective::new(&alg, 2);
        assert_eq!(p.rep.dim(), 1);
        assert!(p.rep.is_local() && p.rep.is_colocal() && p.rep.is_uniserial());
        assert_eq!(p.rep.loewy_length(), 1);
    }

    #[test]
    fn socle_series_reaches_module() {
        let alg = a3();
        let p = Projective::new(&alg, 0);
        let soc: Vec<usize> = p.rep.socle_series().iter().map(Subspace::dim).collect();
        assert_eq!(soc, vec![0, 1, 2, 3]);
    }

    #[test]
    fn restrict_and_dual() {
        let alg = a3();
        let p = Projective::new(&alg, 0);
        let sub = p.rep.cyclic_submodule(&p.element(&alg.arrow_element(0)));
        let r = p.rep.restrict(&sub);
        assert_eq!(r.dims(), &[0, 1, 1]);
        assert!(r.is_uniserial());
        let d = p.rep.dual();
        assert_eq!(d.dims(), p.rep.dims());
        assert_eq!(d.dual(), p.rep);
        assert!(d.is_colocal() && d.is_local());
    }
}
