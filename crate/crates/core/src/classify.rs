//! Representation-type classification of posets via the critical lists, and
//! the Dynkin trichotomy for unbound poset quivers.

use crate::arith::{FieldOps, Rationals};
use crate::matrix::Matrix;
use crate::poset::Poset;
use crate::quiver::{BoundQuiver, DimVector};
use crate::{Error, Result};
use num::{BigRational, Signed, Zero};

/// The critical posets: a poset is representation finite iff it contains no
/// finite-critical poset, and tame iff it contains no tame-critical one.
pub struct CriticalCatalog {
    pub finite_critical: Vec<(String, Poset)>,
    pub tame_critical: Vec<(String, Poset)>,
}

impl CriticalCatalog {
    pub fn new() -> Self {
        let prim = |l: &[usize]| Poset::primitive(l);
        CriticalCatalog {
            finite_critical: vec![
                ("(1,1,1,1)".into(), prim(&[1, 1, 1, 1])),
                ("(2,2,2)".into(), prim(&[2, 2, 2])),
                ("(1,3,3)".into(), prim(&[1, 3, 3])),
                ("(1,2,5)".into(), prim(&[1, 2, 5])),
                ("(N,4)".into(), Poset::n_poset(4)),
            ],
            tame_critical: vec![
                ("(1,1,1,1,1)".into(), prim(&[1, 1, 1, 1, 1])),
                ("(1,1,1,2)".into(), prim(&[1, 1, 1, 2])),
                ("(2,2,3)".into(), prim(&[2, 2, 3])),
                ("(1,3,4)".into(), prim(&[1, 3, 4])),
                ("(1,2,6)".into(), prim(&[1, 2, 6])),
                ("(N,5)".into(), Poset::n_poset(5)),
            ],
        }
    }
}

impl Default for CriticalCatalog {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RepType {
    Finite,
    Tame,
    Wild,
}

/// Classification outcome with the embedded critical poset as witness.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeVerdict {
    pub rep_type: RepType,
    /// (critical poset name, element mapping pattern index → host index).
    pub witness: Option<(String, Vec<usize>)>,
}

/// Search for an injective map pattern → host that is an order isomorphism
/// onto an induced subposet. Backtracking over order-preserving partial
/// maps, deterministic order.
pub fn contains_subposet(host: &Poset, pattern: &Poset) -> Option<Vec<usize>> {
    let np = pattern.len();
    let nh = host.len();
    if np > nh {
        return None;
    }
    // order pattern elements by decreasing comparability degree for pruning
    let mut order: Vec<usize> = (0..np).collect();
    let degree = |v: usize| {
        (0..np).filter(|&u| u != v && (pattern.leq(u, v) || pattern.leq(v, u))).count()
    };
    order.sort_by_key(|&v| std::cmp::Reverse(degree(v)));

    let mut assign = vec![usize::MAX; np];
    let mut used = vec![false; nh];

    fn consistent(
        host: &Poset,
        pattern: &Poset,
        assign: &[usize],
        placed: &[usize],
        v: usize,
        hv: usize,
    ) -> bool {
        for &u in placed {
            let hu = assign[u];
            if pattern.leq(u, v) != host.leq(hu, hv) || pattern.leq(v, u) != host.leq(hv, hu) {
                return false;
            }
        }
        true
    }

    fn rec(
        host: &Poset,
        pattern: &Poset,
        order: &[usize],
        idx: usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        let placed = &order[..idx];
        for hv in 0..host.len() {
            if used[hv] || !consistent(host, pattern, assign, placed, v, hv) {
                continue;
            }
            assign[v] = hv;
            used[hv] = true;
            if rec(host, pattern, order, idx + 1, assign, used) {
                return true;
            }
            assign[v] = usize::MAX;
            used[hv] = false;
        }
        false
    }

    if rec(host, pattern, &order, 0, &mut assign, &mut used) {
        Some(assign)
    } else {
        None
    }
}

/// Representation type of a poset: finite if no finite-critical subposet
/// embeds, else tame if no tame-critical one embeds, else wild. Containment
/// is induced-subposet containment including equality (the critical posets
/// themselves must classify as not finite resp. not tame).
pub fn rep_type(p: &Poset) -> TypeVerdict {
    let catalog = CriticalCatalog::new();
    let find = |list: &[(String, Poset)]| -> Option<(String, Vec<usize>)> {
        for (name, pattern) in list {
            if let Some(map) = contains_subposet(p, pattern) {
                return Some((name.clone(), map));
            }
        }
        None
    };
    match find(&catalog.finite_critical) {
        None => TypeVerdict { rep_type: RepType::Finite, witness: None },
        Some(first) => match find(&catalog.tame_critical) {
            None => TypeVerdict { rep_type: RepType::Tame, witness: Some(first) },
            Some(w) => TypeVerdict { rep_type: RepType::Wild, witness: Some(w) },
        },
    }
}

/// The trichotomy of unbound poset quivers by the symmetrized Tits form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdeClass {
    Dynkin,
    ExtendedDynkinOrSub,
    WildQuiver,
}

/// Exact definiteness test of the symmetrized Tits form: positive definite
/// (Dynkin), positive semidefinite with radical (extended Dynkin), or
/// indefinite. Works over the rationals, no floating point.
pub fn ade_class(bq: &BoundQuiver) -> Result<AdeClass> {
    let q = bq.require_unbound()?;
    if !q.is_connected() {
        return Err(Error::Domain("quiver must be connected".into()));
    }
    let n = q.len();
    let f = Rationals;
    // symmetrized form matrix: B[v][v] = 2, B[u][v] = −(arrows between u, v)
    let mut b: Matrix<BigRational> = Matrix::zeros(n, n);
    for v in 0..n {
        b.set(v, v, f.from_i64(2));
    }
    for &(t, h) in &q.arrows {
        let cur = b.at(t, h).clone() - f.from_i64(1);
        b.set(t, h, cur.clone());
        b.set(h, t, cur);
    }
    // symmetric elimination: pivots decide definiteness
    let mut m = b;
    let mut rank = 0usize;
    let mut rows: Vec<usize> = (0..n).collect();
    while !rows.is_empty() {
        // find a row (among remaining) with nonzero diagonal
        let pos = rows.iter().position(|&r| !Zero::is_zero(m.at(r, r)));
        match pos {
            Some(pi) => {
                let r = rows.remove(pi);
                let d = m.at(r, r).clone();
                if d.is_negative() {
                    return Ok(AdeClass::WildQuiver);
                }
                rank += 1;
                for &s in &rows {
                    if Zero::is_zero(m.at(s, r)) {
                        continue;
                    }
                    let factor = m.at(s, r) / &d;
                    for &t in &rows {
                        let v = m.at(s, t) - &factor * m.at(r, t);
                        m.set(s, t, v);
                    }
                }
            }
            None => {
                // zero diagonal everywhere: psd needs the whole remaining
                // block to vanish
                for &s in &rows {
                    for &t in &rows {
                        if !Zero::is_zero(m.at(s, t)) {
                            return Ok(AdeClass::WildQuiver);
                        }
                    }
                }
                break;
            }
        }
    }
    if rank == n {
        Ok(AdeClass::Dynkin)
    } else {
        Ok(AdeClass::ExtendedDynkinOrSub)
    }
}

/// The unitarization behaviour attached to each class.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarizationReport {
    pub class: AdeClass,
    pub statement: String,
    /// Recipe pointer for the wild case: doubling an isotropic Schur root of
    /// an embedded extended Dynkin subquiver produces non-unitarizable
    /// Schurian families.
    pub wild_recipe: Option<String>,
}

pub fn unitarization_behaviour(bq: &BoundQuiver) -> Result<UnitarizationReport> {
    let class = ade_class(bq)?;
    let (statement, wild_recipe) = match class {
        AdeClass::Dynkin => ("every indecomposable strict representation is unitarizable".into(), None),
        AdeClass::ExtendedDynkinOrSub => {
            ("every Schurian strict representation is unitarizable".into(), None)
        }
        AdeClass::WildQuiver => (
            "families of non-unitarizable Schurian representations exist".into(),
            Some(
                "double an isotropic Schur root of an embedded extended Dynkin subquiver; \
                 the middle terms of non-split self-extensions are Schurian, semistable, \
                 never stable"
                    .into(),
            ),
        ),
    };
    Ok(UnitarizationReport { class, statement, wild_recipe })
}

/// Exhaustive positivity check used as an oracle for `ade_class` in tests:
/// q(α) ≥ 1 for all nonzero α in a small box iff no vector of the box
/// violates definiteness.
pub fn min_tits_in_box(bq: &BoundQuiver, bound: i64) -> i64 {
    let n = bq.len();
    let mut min = i64::MAX;
    let mut cur = DimVector::zeros(n);
    loop {
        if !cur.is_zero() {
            min = min.min(bq.tits(&cur));
        }
        let mut i = 0;
        loop {
            if i == n {
                return min;
            }
            if cur.0[i] < bound {
                cur.0[i] += 1;
                break;
            }
            cur.0[i] = 0;
            i += 1;
        }
    }
}
