//! Quivers, paths, bisections and good/bad path classification.
//!
//! Paths are written right to left: `b*a` means "first `a`, then `b`". A
//! [`Path`] stores its arrows in that written order, so `arrows()[0]` is the
//! last arrow traversed and concatenating two written sequences is the
//! product in the path algebra.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` refers to unknown vertex index {vertex}")]
    UnknownEndpoint { arrow: String, vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuiverRaw")]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

#[derive(Deserialize)]
struct QuiverRaw {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl TryFrom<QuiverRaw> for Quiver {
    type Error = QuiverError;

    fn try_from(raw: QuiverRaw) -> Result<Self, Self::Error> {
        Quiver::new(raw.vertices, raw.arrows)
    }
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let mut seen = HashMap::new();
        for v in &vertices {
            if seen.insert(v.as_str(), ()).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut seen = HashMap::new();
        for a in &arrows {
            if seen.insert(a.name.as_str(), ()).is_some() {
                return Err(QuiverError::DuplicateArrow(a.name.clone()));
            }
            for v in [a.source, a.target] {
                if v >= vertices.len() {
                    return Err(QuiverError::UnknownEndpoint {
                        arrow: a.name.clone(),
                        vertex: v,
                    });
                }
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Convenience constructor from names, for fixtures and tests.
    pub fn from_names(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self, QuiverError> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let mut out = Vec::with_capacity(arrows.len());
        for &(name, s, t) in arrows {
            let find = |v: &str| {
                vs.iter().position(|x| x == v).ok_or(QuiverError::UnknownEndpoint {
                    arrow: name.to_string(),
                    vertex: usize::MAX,
                })
            };
            out.push(Arrow {
                name: name.to_string(),
                source: find(s)?,
                target: find(t)?,
            });
        }
        Quiver::new(vs, out)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrow_index(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn source(&self, a: ArrowId) -> VertexId {
        self.arrows[a].source
    }

    pub fn target(&self, a: ArrowId) -> VertexId {
        self.arrows[a].target
    }

    /// Arrows starting at `v`, in arrow order.
    pub fn out_arrows(&self, v: VertexId) -> Vec<ArrowId> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].source == v).collect()
    }

    /// Arrows ending at `v`, in arrow order.
    pub fn in_arrows(&self, v: VertexId) -> Vec<ArrowId> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].target == v).collect()
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.num_vertices()).map(|v| self.out_arrows(v).len()).max().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.num_vertices()).map(|v| self.in_arrows(v).len()).max().unwrap_or(0)
    }

    /// Every vertex has at most two outgoing and two incoming arrows.
    pub fn is_biserial(&self) -> bool {
        self.max_out_degree() <= 2 && self.max_in_degree() <= 2
    }

    pub fn is_acyclic(&self) -> bool {
        self.longest_path_len().is_some()
    }

    /// Length of the longest path, or `None` if there is an oriented cycle.
    pub fn longest_path_len(&self) -> Option<usize> {
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut depth = vec![0usize; n];
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in &self.arrows {
                if a.source == v {
                    depth[a.target] = depth[a.target].max(depth[v] + 1);
                    indeg[a.target] -= 1;
                    if indeg[a.target] == 0 {
                        stack.push(a.target);
                    }
                }
            }
        }
        (seen == n).then(|| depth.into_iter().max().unwrap_or(0))
    }

    /// The quiver with every arrow reversed; names are kept.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
        }
    }

    /// Graphviz rendering: vertex ids as node names, arrow ids as labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{}\";", v);
        }
        for a in &self.arrows {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertices[a.source], self.vertices[a.target], a.name
            );
        }
        s.push_str("}\n");
        s
    }
}

/// A path in a quiver; zero-length paths remember their vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    source: VertexId,
    target: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: ArrowId) -> Self {
        Path {
            source: q.source(a),
            target: q.target(a),
            arrows: vec![a],
        }
    }

    /// Builds a path from arrows in written order (`[b, a]` is `b*a`).
    /// `None` if the sequence is empty or not composable.
    pub fn from_written(q: &Quiver, written: &[ArrowId]) -> Option<Self> {
        let (&last, rest) = written.split_first()?;
        let mut p = Path::arrow(q, last);
        for &a in rest {
            p = p.compose(&Path::arrow(q, a))?;
        }
        Some(p)
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    /// Arrows in written order: `arrows()[0]` is traversed last.
    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self * other`, i.e. `other` first. `None` when not composable.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if other.target != self.source {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.len() + other.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: other.source,
            target: self.target,
            arrows,
        })
    }

    /// The same path read in the opposite quiver.
    pub fn reversed(&self) -> Path {
        Path {
            source: self.target,
            target: self.source,
            arrows: self.arrows.iter().rev().copied().collect(),
        }
    }

    /// Set of vertices strictly inside the path (excluding both ends).
    pub fn interior_vertices(&self, q: &Quiver) -> Vec<VertexId> {
        // written order: arrows[k] is traversed after arrows[k+1]
        self.arrows.iter().skip(1).map(|&a| q.target(a)).collect()
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertex_name(self.source))
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrow(a).name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

impl Ord for Path {
    /// Length first, then lexicographic in written order, then vertex.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All paths of length at most `max_len`, sorted by the path order.
pub fn enumerate_paths(q: &Quiver, max_len: usize) -> Vec<Path> {
    let mut out: Vec<Path> = (0..q.num_vertices()).map(Path::trivial).collect();
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for a in q.out_arrows(p.target()) {
                if let Some(np) = Path::arrow(q, a).compose(p) {
                    next.push(np);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathClass {
    Good,
    Bad,
}

/// A pair of sign functions on the arrows, injective on arrows sharing a
/// source (`sigma`) and on arrows sharing a target (`tau`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bisection {
    pub sigma: Vec<i8>,
    pub tau: Vec<i8>,
}

impl Bisection {
    pub fn is_valid(&self, q: &Quiver) -> bool {
        let n = q.num_arrows();
        if self.sigma.len() != n || self.tau.len() != n {
            return false;
        }
        let signs_ok = self
            .sigma
            .iter()
            .chain(&self.tau)
            .all(|&s| s == 1 || s == -1);
        if !signs_ok {
            return false;
        }
        for a in 0..n {
            for b in a + 1..n {
                if q.source(a) == q.source(b) && self.sigma[a] == self.sigma[b] {
                    return false;
                }
                if q.target(a) == q.target(b) && self.tau[a] == self.tau[b] {
                    return false;
                }
            }
        }
        true
    }

    /// Global sign flip of both functions.
    pub fn flipped(&self) -> Bisection {
        Bisection {
            sigma: self.sigma.iter().map(|s| -s).collect(),
            tau: self.tau.iter().map(|s| -s).collect(),
        }
    }

    /// Whether the length-two path `a*x` (x first) is bad.
    pub fn is_bad_pair(&self, a: ArrowId, x: ArrowId) -> bool {
        self.sigma[a] != self.tau[x]
    }

    pub fn classify(&self, path: &Path) -> PathClass {
        let bad = path
            .arrows()
            .windows(2)
            .any(|w| self.is_bad_pair(w[0], w[1]));
        if bad {
            PathClass::Bad
        } else {
            PathClass::Good
        }
    }

    /// All bad length-two paths `(a, x)` meaning `a*x`, for composable pairs.
    pub fn bad_pairs(&self, q: &Quiver) -> Vec<(ArrowId, ArrowId)> {
        let mut out = Vec::new();
        for a in 0..q.num_arrows() {
            for x in q.in_arrows(q.source(a)) {
                if self.is_bad_pair(a, x) {
                    out.push((a, x));
                }
            }
        }
        out
    }
}

/// Sign patterns on an arrow list that must be pairwise distinct.
fn local_sign_choices(n: usize) -> Vec<Vec<i8>> {
    match n {
        0 => vec![vec![]],
        1 => vec![vec![1], vec![-1]],
        2 => vec![vec![1, -1], vec![-1, 1]],
        _ => vec![],
    }
}

/// Every bisection of `q`, in a deterministic order. Empty iff the quiver
/// is not biserial.
pub fn enumerate_bisections(q: &Quiver) -> Vec<Bisection> {
    if !q.is_biserial() {
        return Vec::new();
    }
    // each vertex contributes independent choices for sigma on its
    // outgoing arrows and tau on its incoming arrows
    let mut groups: Vec<(bool, Vec<ArrowId>)> = Vec::new();
    for v in 0..q.num_vertices() {
        let out = q.out_arrows(v);
        if !out.is_empty() {
            groups.push((true, out));
        }
        let inn = q.in_arrows(v);
        if !inn.is_empty() {
            groups.push((false, inn));
        }
    }
    let n = q.num_arrows();
    let mut acc = vec![Bisection {
        sigma: vec![0; n],
        tau: vec![0; n],
    }];
    for (is_sigma, arrows) in &groups {
        let mut next = Vec::with_capacity(acc.len() * 2);
        for b in &acc {
            for choice in local_sign_choices(arrows.len()) {
                let mut nb = b.clone();
                for (&a, &s) in arrows.iter().zip(&choice) {
                    if *is_sigma {
                        nb.sigma[a] = s;
                    } else {
                        nb.tau[a] = s;
                    }
                }
                next.push(nb);
            }
        }
        acc = next;
    }
    // arrows never touched cannot exist: every arrow has a source and target
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Quiver {
        Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap()
    }

    #[test]
    fn rejects_duplicates() {
        assert!(Quiver::from_names(&["1", "1"], &[]).is_err());
        assert!(Quiver::from_names(&["1"], &[("a", "1", "1"), ("a", "1", "1")]).is_err());
    }

    #[test]
    fn paths_of_a3() {
        let q = a3();
        let ps = enumerate_paths(&q, 2);
        let names: Vec<_> = ps.iter().map(|p| p.display(&q)).collect();
        assert_eq!(names, ["e_1", "e_2", "e_3", "a", "b", "b*a"]);
        assert_eq!(enumerate_paths(&q, 0).len(), 3);
    }

    #[test]
    fn paths_of_two_loops() {
        let q = Quiver::from_names(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap();
        let names: Vec<_> = enumerate_paths(&q, 2).iter().map(|p| p.display(&q)).collect();
        assert_eq!(names, ["e_1", "x", "y", "x*x", "x*y", "y*x", "y*y"]);
    }

    #[test]
    fn compose_is_right_to_left() {
        let q = a3();
        let a = Path::arrow(&q, 0);
        let b = Path::arrow(&q, 1);
        let ba = b.compose(&a).unwrap();
        assert_eq!(ba.source(), 0);
        assert_eq!(ba.target(), 2);
        assert!(a.compose(&b).is_none());
        assert_eq!(Path::from_written(&q, &[1, 0]), Some(ba.clone()));
        assert_eq!(ba.interior_vertices(&q), vec![1]);
        assert_eq!(ba.reversed().reversed(), ba);
    }

    #[test]
    fn biserial_quivers() {
        assert!(a3().is_biserial());
        let d4 = Quiver::from_names(
            &["0", "1", "2", "3"],
            &[("a", "0", "1"), ("b", "0", "2"), ("c", "0", "3")],
        )
        .unwrap();
        assert!(!d4.is_biserial());
        assert!(enumerate_bisections(&d4).is_empty());
        let kron = Quiver::from_names(
            &["1", "2", "3"],
            &[("x", "1", "2"), ("y", "1", "2"), ("a", "2", "3"), ("b", "2", "3")],
        )
        .unwrap();
        assert!(kron.is_biserial());
    }

    #[test]
    fn bisection_counts() {
        let one = Quiver::from_names(&["1", "2"], &[("a", "1", "2")]).unwrap();
        assert_eq!(enumerate_bisections(&one).len(), 4);
        let fork = Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "1", "3")]).unwrap();
        let bs = enumerate_bisections(&fork);
        assert_eq!(bs.len(), 8);
        assert!(bs.iter().all(|b| b.is_valid(&fork)));
    }

    #[test]
    fn classification() {
        let q = a3();
        let e = Path::trivial(0);
        let ba = Path::from_written(&q, &[1, 0]).unwrap();
        let good = Bisection {
            sigma: vec![1, 1],
            tau: vec![1, 1],
        };
        let bad = Bisection {
            sigma: vec![1, -1],
            tau: vec![1, 1],
        };
        assert_eq!(good.classify(&e), PathClass::Good);
        assert_eq!(good.classify(&Path::arrow(&q, 0)), PathClass::Good);
        assert_eq!(good.classify(&ba), PathClass::Good);
        assert_eq!(bad.classify(&ba), PathClass::Bad);
        assert_eq!(bad.flipped().classify(&ba), PathClass::Bad);
    }

    #[test]
    fn dot_export() {
        let dot = a3().to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("\"1\" -> \"2\" [label=\"a\"]"));
    }
}
