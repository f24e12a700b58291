//! Idempotent subalgebras `eAe` for `e` a sum of vertex idempotents,
//! presented by their own quiver and relations.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::algebra::{FiniteDimAlgebra, Presentation, Relation};
use crate::linalg::{Matrix, Subspace};
use crate::quiver::{enumerate_paths, Arrow, Path, Quiver, VertexId};

/// `eAe` together with the data tying it back to `A`.
#[derive(Debug, Clone)]
pub struct SubalgebraPresentation {
    /// Vertices of `A` kept, ascending; vertex `k` of the new quiver is
    /// `vertex_subset[k]`.
    pub vertex_subset: Vec<VertexId>,
    pub algebra: FiniteDimAlgebra,
    /// For each arrow of the new quiver, the irreducible path of `A` it
    /// stands for.
    pub arrow_origins: Vec<Path>,
    /// Columns are the images in `A` of the basis of `eAe`.
    pub embedding: Matrix,
}

/// Paths with both ends in `s` and every interior vertex outside `s`,
/// of length `1..max_len`, ascending.
fn irreducible_paths(q: &Quiver, s: &BTreeSet<VertexId>, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut frontier: Vec<Path> = s.iter().map(|&v| Path::trivial(v)).collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for a in q.out_arrows(p.target()) {
                let ext = Path::arrow(q, a).compose(p).expect("composable by construction");
                if s.contains(&ext.target()) {
                    out.push(ext);
                } else {
                    next.push(ext);
                }
            }
        }
        frontier = next;
    }
    out.sort();
    out
}

fn joined_name(q: &Quiver, p: &Path) -> String {
    p.arrows()
        .iter()
        .map(|&a| q.arrow(a).name.as_str())
        .collect::<Vec<_>>()
        .join("_")
}

/// Builds `eAe` for `e = sum of e_i, i in s`. Arrows of the new quiver are
/// chosen greedily among irreducible paths (in path order) whose images
/// are independent modulo `(e rad A e)^2`.
pub fn idempotent_subalgebra(alg: &FiniteDimAlgebra, s: &[VertexId]) -> SubalgebraPresentation {
    let q = alg.quiver();
    let f = alg.field();
    let dim = alg.dim();
    let set: BTreeSet<VertexId> = s.iter().copied().collect();
    assert!(!set.is_empty(), "vertex subset must be nonempty");
    let subset: Vec<VertexId> = set.iter().copied().collect();
    let new_index: HashMap<VertexId, usize> = subset.iter().enumerate().map(|(k, &v)| (v, k)).collect();

    // e rad A e and its square
    let corner_rad: Vec<usize> = (0..dim)
        .filter(|&k| {
            let b = &alg.basis()[k];
            !b.is_trivial() && set.contains(&b.source()) && set.contains(&b.target())
        })
        .collect();
    let mut square = Subspace::zero(f, dim);
    for &i in &corner_rad {
        for &j in &corner_rad {
            if alg.basis()[j].target() == alg.basis()[i].source() {
                let mut ui = vec![0; dim];
                ui[i] = 1;
                let mut uj = vec![0; dim];
                uj[j] = 1;
                square.insert(&alg.mul(&ui, &uj));
            }
        }
    }

    let m = alg.nilpotency_index();
    let mut chosen = square.clone();
    let mut origins: Vec<Path> = Vec::new();
    let mut images: Vec<Vec<u32>> = Vec::new();
    for p in irreducible_paths(q, &set, m) {
        let img = alg.path_element(&p);
        if chosen.insert(&img) {
            origins.push(p);
            images.push(img);
        }
    }

    let mut used: HashSet<String> = HashSet::new();
    let mut arrows = Vec::with_capacity(origins.len());
    for p in &origins {
        let base = joined_name(q, p);
        let mut name = base.clone();
        let mut k = 2;
        while !used.insert(name.clone()) {
            name = format!("{}_{}", base, k);
            k += 1;
        }
        arrows.push(Arrow {
            name,
            source: new_index[&p.source()],
            target: new_index[&p.target()],
        });
    }
    let vertex_names: Vec<String> = subset.iter().map(|&v| q.vertex_name(v).to_string()).collect();
    let sub_q = Quiver::new(vertex_names, arrows).expect("names are distinct");

    // evaluate the paths of the new quiver of length < m in A; longer ones
    // vanish because every arrow image lies in rad A
    let paths = if m == 0 { Vec::new() } else { enumerate_paths(&sub_q, m - 1) };
    let mut value: HashMap<Path, Vec<u32>> = HashMap::with_capacity(paths.len());
    for p in &paths {
        let v = if p.is_trivial() {
            alg.idempotent(subset[p.source()])
        } else {
            let (&first, rest) = p.arrows().split_first().expect("nontrivial");
            let tail = match Path::from_written(&sub_q, rest) {
                Some(t) => value[&t].clone(),
                None => alg.idempotent(subset[p.source()]),
            };
            alg.mul(&images[first], &tail)
        };
        value.insert(p.clone(), v);
    }
    let mut eval = Matrix::zeros(f, dim, paths.len());
    for (c, p) in paths.iter().enumerate() {
        for (r, &x) in value[p].iter().enumerate() {
            if x != 0 {
                eval.set(r, c, x);
            }
        }
    }
    let kernel = eval.kernel();
    let kernel_vectors: Vec<Vec<(Path, u32)>> = kernel
        .basis()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| (paths[k].clone(), c))
                .collect()
        })
        .collect();

    let mut relations: Vec<Relation> = kernel_vectors
        .iter()
        .map(|v| Relation::new(f, v.iter().map(|(p, c)| (*c, p.clone()))))
        .collect();
    if m >= 2 {
        relations.extend(
            enumerate_paths(&sub_q, m)
                .into_iter()
                .filter(|p| p.len() == m)
                .map(Relation::monomial),
        );
    }
    let pres = Presentation::new(sub_q, f, relations).expect("kernel lies in the square of the arrow ideal");
    let sub_alg = FiniteDimAlgebra::from_truncated_kernel(pres, alg.max_nilpotency(), m.max(1), &kernel_vectors);

    let mut embedding = Matrix::zeros(f, dim, sub_alg.dim());
    for (c, p) in sub_alg.basis().iter().enumerate() {
        for (r, &x) in value[p].iter().enumerate() {
            if x != 0 {
                embedding.set(r, c, x);
            }
        }
    }

    SubalgebraPresentation {
        vertex_subset: subset,
        algebra: sub_alg,
        arrow_origins: origins,
        embedding,
    }
}
