//! Quivers, bound Hasse quivers of posets, dimension vectors, Euler forms.

use crate::poset::{Poset, ROOT_NAME};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A finite quiver. Parallel arrows are allowed (repeated pairs).
#[derive(Clone, Debug, PartialEq)]
pub struct Quiver {
    pub names: Vec<String>,
    pub arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn arrow_count(&self, tail: usize, head: usize) -> usize {
        self.arrows.iter().filter(|&&(t, h)| t == tail && h == head).count()
    }

    /// Sum over neighbours with arrow multiplicity, used by reflections.
    pub fn neighbor_sum(&self, v: usize, a: &DimVector) -> i64 {
        self.arrows
            .iter()
            .map(|&(t, h)| {
                if t == v {
                    a.0[h]
                } else if h == v {
                    a.0[t]
                } else {
                    0
                }
            })
            .sum()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for &(_, h) in &self.arrows {
            indeg[h] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(t, h) in &self.arrows {
                if t == v {
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        stack.push(h);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_connected(&self) -> bool {
        if self.len() == 0 {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(t, h) in &self.arrows {
                for w in [t, h] {
                    if (t == v || h == v) && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of directed paths between each ordered vertex pair (trivial
    /// paths included on the diagonal). Requires acyclicity.
    pub fn path_counts(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let order = self.topological_order().expect("acyclic quiver");
        let mut counts = vec![vec![0i64; n]; n];
        for v in 0..n {
            counts[v][v] = 1;
        }
        // process tails in reverse topological order so heads are done first
        for &v in order.iter().rev() {
            for &(t, h) in &self.arrows {
                if t == v {
                    for target in 0..n {
                        counts[v][target] += counts[h][target];
                    }
                }
            }
            counts[v][v] = 1;
        }
        counts
    }

    /// Euler form of the unbound quiver:
    /// `⟨a,b⟩ = Σ_v a_v b_v − Σ_{ρ: t→h} a_t b_h`.
    pub fn euler(&self, a: &DimVector, b: &DimVector) -> i64 {
        let diag: i64 = (0..self.len()).map(|v| a.0[v] * b.0[v]).sum();
        let arrows: i64 = self.arrows.iter().map(|&(t, h)| a.0[t] * b.0[h]).sum();
        diag - arrows
    }

    pub fn tits(&self, a: &DimVector) -> i64 {
        self.euler(a, a)
    }

    /// Symmetrized pairing `(a,b) = ⟨a,b⟩ + ⟨b,a⟩`.
    pub fn sym(&self, a: &DimVector, b: &DimVector) -> i64 {
        self.euler(a, b) + self.euler(b, a)
    }
}

/// Nonnegative integer vector indexed by the vertices of a quiver.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimVector(pub Vec<i64>);

impl DimVector {
    pub fn zeros(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = Self::zeros(n);
        d.0[v] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        DimVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        DimVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        DimVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn leq(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&v| v >= 0)
    }

    /// Support restricted to a sub-quiver given by a vertex predicate.
    pub fn supported_on(&self, keep: impl Fn(usize) -> bool) -> bool {
        self.0.iter().enumerate().all(|(v, &x)| x == 0 || keep(v))
    }
}

/// One generating commutativity relation: two parallel paths (arrow index
/// sequences, listed tail-first) with common source and target.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub source: usize,
    pub target: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// The Hasse quiver of N⁰ = N ∪ {q0}, bound by the commutativity ideal.
/// Only the relation counts r(q, q') are stored; generating relations are
/// recomputed on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundQuiver {
    quiver: Quiver,
    poset: Poset,
    root: usize,
    relation_counts: BTreeMap<(usize, usize), usize>,
}

impl BoundQuiver {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.quiver.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quiver.is_empty()
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.quiver.arrows
    }

    pub fn relation_counts(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.relation_counts
    }

    pub fn is_unbound(&self) -> bool {
        self.relation_counts.is_empty()
    }

    pub fn require_unbound(&self) -> Result<&Quiver> {
        if self.is_unbound() {
            Ok(&self.quiver)
        } else {
            Err(Error::BoundQuiver("operation requires an unbound quiver".into()))
        }
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.quiver.names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.quiver.names.iter().position(|n| n == name)
    }

    /// Relation-corrected Euler form
    /// `⟨a,b⟩ = Σ a_v b_v − Σ_ρ a_t b_h + Σ r(v,v') a_v b_{v'}`.
    pub fn euler(&self, a: &DimVector, b: &DimVector) -> i64 {
        let mut val = self.quiver.euler(a, b);
        for (&(s, t), &r) in &self.relation_counts {
            val += r as i64 * a.0[s] * b.0[t];
        }
        val
    }

    pub fn tits(&self, a: &DimVector) -> i64 {
        self.euler(a, a)
    }

    /// Cartan matrix entry (row q', column q) = number of linearly
    /// independent paths q → q' modulo the relation ideal. For unbound
    /// quivers this is the plain path count; in the bound case all parallel
    /// paths are identified by the commutativity relations, leaving the
    /// reachability indicator.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let counts = self.quiver.path_counts();
        let mut c = vec![vec![0i64; n]; n];
        for q in 0..n {
            for qp in 0..n {
                let paths = counts[q][qp];
                c[qp][q] = if self.is_unbound() { paths } else { i64::from(paths > 0) };
            }
        }
        c
    }

    /// Explicit generating relations: for every vertex whose upward covers
    /// branch, the paths through each cover to the unique join are identified
    /// pairwise against the first cover's path.
    pub fn generating_relations(&self) -> Result<Vec<Relation>> {
        let mut out = Vec::new();
        for v in 0..self.poset.len() {
            let ups = self.poset.up_covers(v);
            if ups.len() < 2 {
                continue;
            }
            let t = self.poset.appropriate_join(&ups)?;
            let target = match t {
                Some(e) => e,
                None => self.root,
            };
            let reference = self.path_via(v, ups[0], target)?;
            for &u in &ups[1..] {
                out.push(Relation {
                    source: v,
                    target,
                    left: reference.clone(),
                    right: self.path_via(v, u, target)?,
                });
            }
        }
        Ok(out)
    }

    /// Arrow index of `tail → head`.
    fn arrow_index(&self, tail: usize, head: usize) -> Option<usize> {
        self.quiver.arrows.iter().position(|&(t, h)| (t, h) == (tail, head))
    }

    /// A path v → cover → ... → target as arrow indices.
    fn path_via(&self, v: usize, cover: usize, target: usize) -> Result<Vec<usize>> {
        let first = self
            .arrow_index(v, cover)
            .ok_or_else(|| Error::BoundQuiver(format!("missing arrow {v} -> {cover}")))?;
        let mut path = vec![first];
        let mut cur = cover;
        while cur != target {
            let next = self
                .quiver
                .arrows
                .iter()
                .position(|&(t, h)| t == cur && self.reaches(h, target))
                .ok_or_else(|| Error::BoundQuiver(format!("no path from {cur} to {target}")))?;
            cur = self.quiver.arrows[next].1;
            path.push(next);
        }
        Ok(path)
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        if from == self.root {
            return false;
        }
        if to == self.root {
            return true; // every vertex reaches the root
        }
        self.poset.leq(from, to)
    }

    /// Directed reachability along arrows.
    pub fn reaches_vertex(&self, from: usize, to: usize) -> bool {
        self.reaches(from, to)
    }

    /// Format a dimension vector as `(root; branch1; branch2; ...)` when the
    /// poset is primitive, else as `name=value` pairs.
    pub fn format_dims(&self, a: &DimVector) -> String {
        if let Ok(branches) = self.poset.branch_elements() {
            let mut parts = vec![a.0[self.root].to_string()];
            for br in branches {
                parts.push(br.iter().map(|&v| a.0[v].to_string()).collect::<Vec<_>>().join(","));
            }
            format!("({})", parts.join(";"))
        } else {
            let mut parts: Vec<String> = (0..self.poset.len())
                .map(|v| format!("{}={}", self.vertex_name(v), a.0[v]))
                .collect();
            parts.push(format!("{}={}", ROOT_NAME, a.0[self.root]));
            format!("({})", parts.join(","))
        }
    }
}

/// Build the bound Hasse quiver Q(N) of a poset: vertices are the elements
/// plus the adjoined root, arrows are the covers of N⁰ oriented toward the
/// root, and the relation counts follow the branching structure. Posets with
/// a branching whose covers admit no unique join are rejected.
pub fn hasse_quiver(p: &Poset) -> Result<BoundQuiver> {
    let n = p.len();
    let mut names: Vec<String> = p.elements().to_vec();
    names.push(ROOT_NAME.to_string());
    let root = n;
    let mut arrows: Vec<(usize, usize)> = p.covers().to_vec();
    for m in p.maximal_elements() {
        arrows.push((m, root));
    }
    let quiver = Quiver { names, arrows };
    let mut relation_counts = BTreeMap::new();
    for v in 0..n {
        let ups = p.up_covers(v);
        if ups.len() >= 2 {
            let t = p.appropriate_join(&ups)?;
            let target = t.unwrap_or(root);
            *relation_counts.entry((v, target)).or_insert(0) += ups.len() - 1;
        }
    }
    Ok(BoundQuiver { quiver, poset: p.clone(), root, relation_counts })
}

/// Recover the poset of a rooted quiver: vertices minus the unique sink,
/// ordered by reachability. Errors when the quiver has several sinks, is
/// disconnected, has multiple arrows or an oriented cycle.
pub fn poset_from_quiver(q: &Quiver) -> Result<Poset> {
    if !q.is_acyclic() {
        return Err(Error::NotRooted("quiver has an oriented cycle".into()));
    }
    if !q.is_connected() {
        return Err(Error::NotRooted("quiver is not connected".into()));
    }
    for (i, &(t, h)) in q.arrows.iter().enumerate() {
        if q.arrows[i + 1..].contains(&(t, h)) {
            return Err(Error::NotRooted("multiple arrows".into()));
        }
    }
    let sinks: Vec<usize> =
        (0..q.len()).filter(|&v| q.arrows.iter().all(|&(t, _)| t != v)).collect();
    if sinks.len() != 1 {
        return Err(Error::NotRooted(format!("{} sinks", sinks.len())));
    }
    let root = sinks[0];
    let counts = q.path_counts();
    let keep: Vec<usize> = (0..q.len()).filter(|&v| v != root).collect();
    let elements: Vec<String> = keep.iter().map(|&v| q.names[v].clone()).collect();
    // order: a ≺ b iff a path a → b exists
    let mut covers = Vec::new();
    for (i, &a) in keep.iter().enumerate() {
        for (j, &b) in keep.iter().enumerate() {
            if i != j && counts[a][b] > 0 {
                let between = keep
                    .iter()
                    .any(|&m| m != a && m != b && counts[a][m] > 0 && counts[m][b] > 0);
                if !between {
                    covers.push((i, j));
                }
            }
        }
    }
    let cover_names: Vec<(String, String)> = covers
        .iter()
        .map(|&(i, j)| (elements[i].clone(), elements[j].clone()))
        .collect();
    Poset::new(elements, &cover_names)
}
