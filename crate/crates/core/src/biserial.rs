//! Definitional checks: Fuller biseriality, Nakayama, special biserial.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::FiniteDimAlgebra;
use crate::linalg::{is_zero, ProjectivePoints, Subspace};
use crate::module::{projective_points_of, vertex_part, Projective};
use crate::quiver::{ArrowId, Bisection, Quiver, VertexId};

pub const DEFAULT_FULLER_BOUND: usize = 14;

/// Cap on candidate generators examined for one projective.
const CANDIDATE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiserialError {
    #[error("search budget exceeded at the {side:?} projective of vertex {vertex}: dim rad P = {radical_dim}, bound {bound}")]
    SearchBudgetExceeded {
        side: Side,
        vertex: VertexId,
        radical_dim: usize,
        bound: usize,
    },
}

/// Generators of uniserial `U = A u`, `V = A v` with `U + V = rad P` for
/// the projective at `vertex` (left: `A e_i`; right: `A^op e_i`). Elements
/// are given in the monomial basis of `A` or `A^op`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniserialPair {
    pub side: Side,
    pub vertex: VertexId,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullerCertificate {
    pub pairs: Vec<UniserialPair>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullerOutcome {
    pub biserial: bool,
    pub certificate: Option<FullerCertificate>,
    /// First projective without a uniserial pair, when not biserial.
    pub failure: Option<(Side, VertexId)>,
}

/// Searches a uniserial pair for `rad(A e_i)`. `Ok(None)` means none exists.
fn find_pair(
    alg: &FiniteDimAlgebra,
    i: VertexId,
    side: Side,
    bound: usize,
) -> Result<Option<(Vec<u32>, Vec<u32>)>, BiserialError> {
    let proj = Projective::new(alg, i);
    let rep = &proj.rep;
    let series = rep.radical_series();
    let rad = series.get(1).cloned().unwrap_or_else(|| rep.zero_submodule());
    let zero = vec![0; alg.dim()];
    if rad.is_zero() {
        return Ok(Some((zero.clone(), zero)));
    }
    let over = |radical_dim| BiserialError::SearchBudgetExceeded {
        side,
        vertex: i,
        radical_dim,
        bound,
    };
    if rad.dim() > bound {
        return Err(over(rad.dim()));
    }
    let rad2 = series.get(2).cloned().unwrap_or_else(|| rep.zero_submodule());
    if rad.dim() - rad2.dim() > 2 {
        return Ok(None);
    }
    let n = alg.quiver().num_vertices();
    let parts: Vec<Subspace> = (0..n).map(|j| vertex_part(rep, &rad, j)).collect();
    if rad.dim() - rad2.dim() == 1 {
        // rad P is local, so one of the two must be all of it
        if !rep.is_uniserial_sub(&rad) {
            return Ok(None);
        }
        let u = parts
            .iter()
            .flat_map(|s| s.basis().iter())
            .find(|b| !rad2.contains(b))
            .expect("top of rad P is nonzero");
        return Ok(Some((proj.to_algebra(alg.dim(), u), zero)));
    }
    let total: u64 = parts.iter().map(|s| ProjectivePoints::count(alg.field(), s.dim())).sum();
    if total > CANDIDATE_LIMIT {
        return Err(over(rad.dim()));
    }

    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut uniserials: Vec<(Subspace, Vec<u32>)> = vec![(rep.zero_submodule(), vec![0; rep.dim()])];
    for part in &parts {
        for u in projective_points_of(part) {
            let sub = rep.cyclic_submodule(&u);
            if seen.insert(sub.clone()) && rep.is_uniserial_sub(&sub) {
                uniserials.push((sub, u));
            }
        }
    }
    uniserials.sort_by(|a, b| b.0.dim().cmp(&a.0.dim()));
    for (k, (su, u)) in uniserials.iter().enumerate() {
        for (sv, v) in &uniserials[k..] {
            if su.dim() + sv.dim() < rad.dim() {
                break;
            }
            let sum = su.sum(sv).expect("same ambient");
            if sum.dim() != rad.dim() {
                continue;
            }
            if su.intersect(sv).expect("same ambient").dim() <= 1 {
                return Ok(Some((proj.to_algebra(alg.dim(), u), proj.to_algebra(alg.dim(), v))));
            }
        }
    }
    Ok(None)
}

/// Fuller biseriality of `A`, testing left projectives of `A` and of `op`
/// (which must be the opposite algebra of `alg`).
pub fn is_biserial_fuller_with(
    alg: &FiniteDimAlgebra,
    op: &FiniteDimAlgebra,
    bound: usize,
) -> Result<FullerOutcome, BiserialError> {
    let mut pairs = Vec::new();
    // a budget failure only counts when no projective gives a definite no
    let mut exceeded = None;
    for (side, a) in [(Side::Left, alg), (Side::Right, op)] {
        for i in 0..a.quiver().num_vertices() {
            match find_pair(a, i, side, bound) {
                Ok(Some((u, v))) => pairs.push(UniserialPair { side, vertex: i, u, v }),
                Ok(None) => {
                    return Ok(FullerOutcome {
                        biserial: false,
                        certificate: None,
                        failure: Some((side, i)),
                    })
                }
                Err(e) => {
                    exceeded.get_or_insert(e);
                }
            }
        }
    }
    if let Some(e) = exceeded {
        return Err(e);
    }
    Ok(FullerOutcome {
        biserial: true,
        certificate: Some(FullerCertificate { pairs }),
        failure: None,
    })
}

pub fn is_biserial_fuller(alg: &FiniteDimAlgebra, bound: usize) -> Result<FullerOutcome, BiserialError> {
    is_biserial_fuller_with(alg, &alg.opposite(), bound)
}

/// Re-checks a certificate from scratch. Returns a description of the
/// first defect found.
pub fn verify_fuller_certificate(
    alg: &FiniteDimAlgebra,
    op: &FiniteDimAlgebra,
    cert: &FullerCertificate,
) -> Result<(), String> {
    let n = alg.quiver().num_vertices();
    for side in [Side::Left, Side::Right] {
        for i in 0..n {
            if !cert.pairs.iter().any(|p| p.side == side && p.vertex == i) {
                return Err(format!("no pair for the {:?} projective at vertex {}", side, i));
            }
        }
    }
    for pair in &cert.pairs {
        let a = match pair.side {
            Side::Left => alg,
            Side::Right => op,
        };
        let ctx = format!("{:?} projective at vertex {}", pair.side, pair.vertex);
        if pair.vertex >= n || pair.u.len() != a.dim() || pair.v.len() != a.dim() {
            return Err(format!("{}: malformed pair", ctx));
        }
        for x in [&pair.u, &pair.v] {
            let in_rad_p = a.in_radical(x)
                && x.iter()
                    .enumerate()
                    .all(|(k, &c)| c == 0 || a.basis()[k].source() == pair.vertex);
            if !in_rad_p {
                return Err(format!("{}: generator outside rad P", ctx));
            }
        }
        let proj = Projective::new(a, pair.vertex);
        let rep = &proj.rep;
        let rad = rep.radical_of(&rep.whole());
        let su = rep.cyclic_submodule(&proj.element(&pair.u));
        let sv = rep.cyclic_submodule(&proj.element(&pair.v));
        if !rep.is_uniserial_sub(&su) || !rep.is_uniserial_sub(&sv) {
            return Err(format!("{}: a generated submodule is not uniserial", ctx));
        }
        if su.sum(&sv).map_err(|e| e.to_string())? != rad {
            return Err(format!("{}: U + V differs from rad P", ctx));
        }
        if su.intersect(&sv).map_err(|e| e.to_string())?.dim() > 1 {
            return Err(format!("{}: U and V meet in dimension above one", ctx));
        }
    }
    Ok(())
}

/// Every left and right indecomposable projective is uniserial.
pub fn is_nakayama_with(alg: &FiniteDimAlgebra, op: &FiniteDimAlgebra) -> bool {
    [alg, op].iter().all(|a| {
        (0..a.quiver().num_vertices()).all(|i| Projective::new(a, i).rep.is_uniserial())
    })
}

pub fn is_nakayama(alg: &FiniteDimAlgebra) -> bool {
    is_nakayama_with(alg, &alg.opposite())
}

/// Sign patterns that keep a set of arrows pairwise distinct.
pub(crate) fn local_signs(arrows: &[ArrowId]) -> Vec<Vec<i8>> {
    match arrows.len() {
        0 => vec![vec![]],
        1 => vec![vec![1], vec![-1]],
        2 => vec![vec![1, -1], vec![-1, 1]],
        _ => vec![],
    }
}

/// Searches the local choices at every vertex; `pick(l, outs, sigma, ins,
/// tau)` reports whether a choice works at `l`.
pub(crate) fn assemble_bisection(
    q: &Quiver,
    mut pick: impl FnMut(VertexId, &[ArrowId], &[i8], &[ArrowId], &[i8]) -> bool,
) -> Option<Bisection> {
    if !q.is_biserial() {
        return None;
    }
    let mut sigma = vec![1i8; q.num_arrows()];
    let mut tau = vec![1i8; q.num_arrows()];
    for l in 0..q.num_vertices() {
        let outs = q.out_arrows(l);
        let ins = q.in_arrows(l);
        let mut found = false;
        'choice: for s in local_signs(&outs) {
            for t in local_signs(&ins) {
                if pick(l, &outs, &s, &ins, &t) {
                    for (k, &a) in outs.iter().enumerate() {
                        sigma[a] = s[k];
                    }
                    for (k, &x) in ins.iter().enumerate() {
                        tau[x] = t[k];
                    }
                    found = true;
                    break 'choice;
                }
            }
        }
        if !found {
            return None;
        }
    }
    Some(Bisection { sigma, tau })
}

/// A bisection for which every bad length-two path is zero in `A`, if any.
pub fn is_special_biserial(alg: &FiniteDimAlgebra) -> Option<Bisection> {
    let q = alg.quiver();
    assemble_bisection(q, |_, outs, s, ins, t| {
        outs.iter().enumerate().all(|(ka, &a)| {
            ins.iter().enumerate().all(|(kx, &x)| {
                s[ka] == t[kx] || is_zero(&alg.mul(&alg.arrow_element(a), &alg.arrow_element(x)))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Presentation, Relation};
    use crate::linalg::Field;
    use crate::quiver::Path;

    fn gf3() -> Field {
        Field::new(3).unwrap()
    }

    fn build(q: Quiver, rels: &[&[(i64, &[&str])]]) -> FiniteDimAlgebra {
        let f = gf3();
        let rels = rels
            .iter()
            .map(|terms| {
                Relation::new(
                    f,
                    terms.iter().map(|(c, names)| {
                        let ids: Vec<_> = names.iter().map(|n| q.arrow_index(n).unwrap()).collect();
                        (f.from_i64(*c), Path::from_written(&q, &ids).unwrap())
                    }),
                )
            })
            .collect();
        FiniteDimAlgebra::build(&Presentation::new(q, f, rels).unwrap(), 12).unwrap()
    }

    fn a3() -> FiniteDimAlgebra {
        build(
            Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap(),
            &[],
        )
    }

    fn loops() -> FiniteDimAlgebra {
        build(
            Quiver::from_names(&["1"], &[("x", "1", "1"), ("y", "1", "1")]).unwrap(),
            &[
                &[(1, &["x", "x"])],
                &[(1, &["y", "y"])],
                &[(1, &["x", "y"])],
                &[(1, &["y", "x"])],
            ],
        )
    }

    fn crossed_pairs() -> FiniteDimAlgebra {
        build(
            Quiver::from_names(
                &["1", "2", "3"],
                &[("x", "1", "2"), ("y", "1", "2"), ("a", "2", "3"), ("b", "2", "3")],
            )
            .unwrap(),
            &[&[(1, &["a", "x"]), (-1, &["b", "x"])], &[(1, &["b", "y"]), (-1, &["a", "y"])]],
        )
    }

    #[test]
    fn fuller_on_fixtures() {
        for (alg, expected) in [(a3(), true), (loops(), true), (crossed_pairs(), false)] {
            let out = is_biserial_fuller(&alg, DEFAULT_FULLER_BOUND).unwrap();
            assert_eq!(out.biserial, expected);
            if let Some(cert) = &out.certificate {
                verify_fuller_certificate(&alg, &alg.opposite(), cert).unwrap();
            }
        }
    }

    #[test]
    fn nakayama_on_fixtures() {
        assert!(is_nakayama(&a3()));
        assert!(!is_nakayama(&loops()));
        assert!(!is_nakayama(&crossed_pairs()));
    }

    #[test]
    fn special_biserial_on_fixtures() {
        let b = is_special_biserial(&loops()).unwrap();
        assert_ne!(b.sigma[0], b.sigma[1]);
        assert!(is_special_biserial(&a3()).is_some());
        assert!(is_special_biserial(&crossed_pairs()).is_none());
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let alg = loops();
        let op = alg.opposite();
        let mut cert = is_biserial_fuller(&alg, DEFAULT_FULLER_BOUND).unwrap().certificate.unwrap();
        cert.pairs[0].v = vec![0; alg.dim()];
        assert!(verify_fuller_certificate(&alg, &op, &cert).is_err());
    }

    #[test]
    fn budget_guard() {
        let alg = a3();
        let err = is_biserial_fuller(&alg, 1).unwrap_err();
        assert!(matches!(err, BiserialError::SearchBudgetExceeded { radical_dim: 2, .. }));
    }
}
