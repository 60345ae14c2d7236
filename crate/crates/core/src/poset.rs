//! Finite posets given by cover relations, plus the related-poset operation.

use crate::{Error, Result};
use std::collections::BTreeSet;

/// Name reserved for the adjoined maximal element.
pub const ROOT_NAME: &str = "q0";

/// A finite poset described by its elements and cover pairs `(a, b)` meaning
/// `a ≺ b` with nothing strictly between. An optional branch layout records
/// that the poset is primitive with the given chain lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct Poset {
    elements: Vec<String>,
    covers: Vec<(usize, usize)>,
    branches: Option<Vec<usize>>,
    /// Reflexive-transitive closure: `leq[a * n + b]` iff a ⪯ b.
    leq: Vec<bool>,
}

impl Poset {
    pub fn new(elements: Vec<String>, cover_names: &[(String, String)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in &elements {
            if e == ROOT_NAME {
                return Err(Error::MalformedPoset(format!("element name {ROOT_NAME:?} is reserved")));
            }
            if !seen.insert(e.clone()) {
                return Err(Error::MalformedPoset(format!("duplicate element {e:?}")));
            }
        }
        let index = |name: &str| -> Result<usize> {
            elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| Error::MalformedPoset(format!("unknown element {name:?} in covers")))
        };
        let mut covers = Vec::new();
        for (a, b) in cover_names {
            let (ia, ib) = (index(a)?, index(b)?);
            if ia == ib {
                return Err(Error::MalformedPoset(format!("self-cover on {a:?}")));
            }
            if !covers.contains(&(ia, ib)) {
                covers.push((ia, ib));
            }
        }
        Self::from_indexed(elements, covers, None)
    }

    fn from_indexed(
        elements: Vec<String>,
        covers: Vec<(usize, usize)>,
        branches: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = elements.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        // Closure by repeated relaxation; cycles make it non-antisymmetric.
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &covers {
                for c in 0..n {
                    if leq[b * n + c] && !leq[a * n + c] {
                        leq[a * n + c] = true;
                        changed = true;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::MalformedPoset(format!(
                        "cycle through {:?} and {:?}",
                        elements[a], elements[b]
                    )));
                }
            }
        }
        // Every declared cover must be a genuine cover of the closure.
        for &(a, b) in &covers {
            for c in 0..n {
                if c != a && c != b && leq[a * n + c] && leq[c * n + b] {
                    return Err(Error::MalformedPoset(format!(
                        "pair ({:?}, {:?}) is not a cover: {:?} lies between",
                        elements[a], elements[b], elements[c]
                    )));
                }
            }
        }
        let p = Poset { elements, covers, branches, leq };
        Ok(p)
    }

    /// The primitive poset (m_1, ..., m_s): a disjoint union of chains.
    /// Branch j gets elements "j.1" (minimal) through "j.m_j" (maximal).
    pub fn primitive(lengths: &[usize]) -> Self {
        let mut elements = Vec::new();
        let mut covers = Vec::new();
        for (j, &m) in lengths.iter().enumerate() {
            assert!(m > 0, "empty branch");
            for i in 1..=m {
                elements.push(format!("{}.{}", j + 1, i));
                if i > 1 {
                    let k = elements.len() - 1;
                    covers.push((k - 1, k));
                }
            }
        }
        let mut p = Self::from_indexed(elements, covers, Some(lengths.to_vec()))
            .expect("chains are acyclic");
        p.branches = Some(lengths.to_vec());
        p
    }

    /// The non-primitive critical poset (N, k): an N-shaped quadruple
    /// a ≺ b ≻ c ≺ d together with a k-chain.
    pub fn n_poset(k: usize) -> Self {
        let mut elements: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let mut covers = vec![(0, 1), (2, 1), (2, 3)];
        for i in 1..=k {
            elements.push(format!("e{i}"));
            if i > 1 {
                let m = elements.len() - 1;
                covers.push((m - 1, m));
            }
        }
        Self::from_indexed(elements, covers, None).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn branches(&self) -> Option<&[usize]> {
        self.branches.as_deref()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn incomparable(&self, a: usize, b: usize) -> bool {
        a != b && !self.leq(a, b) && !self.leq(b, a)
    }

    /// Elements covering `v` (upward cover neighbours).
    pub fn up_covers(&self, v: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(a, _)| a == v).map(|&(_, b)| b).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.up_covers(v).is_empty()).collect()
    }

    /// Minimal common upper bounds of `set` inside N⁰ = N ∪ {q0}. The root is
    /// represented as `None`; it is a common upper bound of everything.
    pub fn joins(&self, set: &[usize]) -> Vec<Option<usize>> {
        let uppers: Vec<usize> = (0..self.len())
            .filter(|&u| set.iter().all(|&s| self.leq(s, u)))
            .collect();
        if uppers.is_empty() {
            return vec![None];
        }
        uppers
            .iter()
            .filter(|&&u| uppers.iter().all(|&w| w == u || !self.lt(w, u)))
            .map(|&u| Some(u))
            .collect()
    }

    /// The unique join `t(M)` when `M` is appropriate: the join is unique and
    /// every pair from `M` has the same join. Errors otherwise.
    pub fn appropriate_join(&self, set: &[usize]) -> Result<Option<usize>> {
        if set.is_empty() {
            return Err(Error::NotAppropriate("empty subset".into()));
        }
        let js = self.joins(set);
        if js.len() != 1 {
            return Err(Error::NotAppropriate(format!(
                "subset {:?} has {} minimal upper bounds",
                set.iter().map(|&v| self.name(v)).collect::<Vec<_>>(),
                js.len()
            )));
        }
        let t = js[0];
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                let pj = self.joins(&[a, b]);
                if pj.len() != 1 || pj[0] != t {
                    return Err(Error::NotAppropriate(format!(
                        "pair ({}, {}) has a different join",
                        self.name(a),
                        self.name(b)
                    )));
                }
            }
        }
        Ok(t)
    }

    /// Elements lying below two incomparable elements; removing them yields
    /// the related poset whose Hasse quiver is unbound.
    pub fn related_poset(&self) -> (Poset, Vec<String>) {
        let n = self.len();
        let removed: Vec<usize> = (0..n)
            .filter(|&q| {
                (0..n).any(|a| {
                    self.lt(q, a) && (0..n).any(|b| self.lt(q, b) && self.incomparable(a, b))
                })
            })
            .collect();
        let keep: Vec<usize> = (0..n).filter(|v| !removed.contains(v)).collect();
        let sub = self.induced(&keep);
        (sub, removed.into_iter().map(|v| self.elements[v].clone()).collect())
    }

    /// Induced subposet on the given elements (order inherited, covers
    /// recomputed as the Hasse reduction of the restricted order).
    pub fn induced(&self, keep: &[usize]) -> Poset {
        let elements: Vec<String> = keep.iter().map(|&v| self.elements[v].clone()).collect();
        let k = keep.len();
        let mut covers = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j && self.lt(keep[i], keep[j]) {
                    let between = (0..k)
                        .any(|m| m != i && m != j && self.lt(keep[i], keep[m]) && self.lt(keep[m], keep[j]));
                    if !between {
                        covers.push((i, j));
                    }
                }
            }
        }
        Poset::from_indexed(elements, covers, None).expect("induced subposet is valid")
    }

    /// Add a new minimal element below the given covers. Used by the glue
    /// construction; errors when the element would not be minimal or the
    /// cover set is not an antichain.
    pub fn add_minimal_element(&self, name: &str, covers_of_new: &[usize]) -> Result<Poset> {
        if self.index_of(name).is_some() || name == ROOT_NAME {
            return Err(Error::MalformedPoset(format!("element {name:?} already exists")));
        }
        for (i, &a) in covers_of_new.iter().enumerate() {
            for &b in &covers_of_new[i + 1..] {
                if !self.incomparable(a, b) {
                    return Err(Error::MalformedPoset(format!(
                        "covers {:?} and {:?} of new element are comparable",
                        self.name(a),
                        self.name(b)
                    )));
                }
            }
        }
        let mut elements = self.elements.clone();
        elements.push(name.to_string());
        let v = elements.len() - 1;
        let mut covers = self.covers.clone();
        for &c in covers_of_new {
            covers.push((v, c));
        }
        Poset::from_indexed(elements, covers, None)
    }

    /// Chains of a primitive poset, each listed from the minimal element to
    /// the maximal one. `None` when the poset is not a disjoint union of
    /// chains.
    pub fn chain_decomposition(&self) -> Option<Vec<Vec<usize>>> {
        let n = self.len();
        for v in 0..n {
            if self.up_covers(v).len() > 1 {
                return None;
            }
            let down: Vec<usize> = self.covers.iter().filter(|&&(_, b)| b == v).map(|&(a, _)| a).collect();
            if down.len() > 1 {
                return None;
            }
        }
        let mut chains = Vec::new();
        for v in 0..n {
            let is_min = !self.covers.iter().any(|&(_, b)| b == v);
            if is_min {
                let mut chain = vec![v];
                loop {
                    let up = self.up_covers(*chain.last().unwrap());
                    match up.first() {
                        Some(&u) => chain.push(u),
                        None => break,
                    }
                }
                chains.push(chain);
            }
        }
        Some(chains)
    }

    pub fn is_primitive(&self) -> bool {
        self.chain_decomposition().is_some()
    }

    /// Branch layout (chain elements outer to inner), derived when absent.
    pub fn branch_elements(&self) -> Result<Vec<Vec<usize>>> {
        let chains = self
            .chain_decomposition()
            .ok_or_else(|| Error::Domain("poset is not primitive".into()))?;
        if let Some(b) = &self.branches {
            let got: Vec<usize> = chains.iter().map(|c| c.len()).collect();
            if *b != got {
                return Err(Error::MalformedPoset(format!(
                    "declared branches {b:?} do not match chain lengths {got:?}"
                )));
            }
        }
        Ok(chains)
    }
}
