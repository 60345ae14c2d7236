//! Slope and King stability, the weight function χ(α), Θ ↔ χ conversions,
//! the explicit unitarizability test for strict representations (two-tier
//! subspace search), and weight extension for added subspaces.

use crate::arith::Scalar;
use crate::matrix::Matrix;
use crate::quiver::{BoundQuiver, DimVector, Quiver};
use crate::rep::{check_relations, end_dim, Representation};
use crate::roots::{generic_sub, GenericCfg, SubConeWalk};
use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};

/// Integer linear form on dimension vectors, indexed by quiver vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm(pub Vec<i64>);

impl LinearForm {
    pub fn eval(&self, a: &DimVector) -> i64 {
        self.0.iter().zip(&a.0).map(|(t, v)| t * v).sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        LinearForm(self.0.iter().map(|t| t * k).collect())
    }

    pub fn add_dim_multiple(&self, m: i64) -> Self {
        LinearForm(self.0.iter().map(|t| t + m).collect())
    }
}

/// How a linear form encodes stability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaConvention {
    /// Θ̃(α) = 0 and proper subrepresentations must satisfy Θ̃(β) > 0.
    King,
    /// μ(β) = Θ(β)/dim(β) must stay below μ(α).
    Slope,
}

/// The weight (χ₀; (χ_q)): one rational per poset element plus the root
/// value. The trace identity Σ χ_q α_q = χ₀ α₀ ties it to a dimension
/// vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub chi0: BigRational,
    pub chi: Vec<BigRational>,
}

impl Weight {
    pub fn from_integers(chi0: i64, chi: Vec<i64>) -> Self {
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        Weight { chi0: r(chi0), chi: chi.into_iter().map(r).collect() }
    }

    /// Σ χ_q α_q = χ₀ α₀, exactly.
    pub fn trace_identity_holds(&self, dims: &DimVector, root: usize) -> bool {
        let mut lhs: BigRational = Zero::zero();
        for (q, c) in self.chi.iter().enumerate() {
            lhs += c * BigRational::from_integer(BigInt::from(dims.0[q]));
        }
        lhs == &self.chi0 * BigRational::from_integer(BigInt::from(dims.0[root]))
    }

    /// χ-positive: every component nonnegative.
    pub fn chi_positive(&self) -> bool {
        !self.chi0.is_negative() && self.chi.iter().all(|c| !c.is_negative())
    }

    /// All components strictly positive.
    pub fn strictly_positive(&self) -> bool {
        self.chi0.is_positive() && self.chi.iter().all(|c| c.is_positive())
    }
}

/// Exact slope μ(α) = Θ(α)/dim(α).
pub fn slope(theta: &LinearForm, a: &DimVector) -> Result<BigRational> {
    let d = a.total();
    if d == 0 {
        return Err(Error::Domain("slope of the zero vector".into()));
    }
    Ok(BigRational::new(BigInt::from(theta.eval(a)), BigInt::from(d)))
}

/// The weight function χ(α) of an unbound poset quiver:
/// χ_v = Σ_{v→h} α_h − Σ_{t→v} α_t for v ≠ q0, and χ₀ = Σ_{t→q0} α_t.
pub fn weight_chi(bq: &BoundQuiver, a: &DimVector) -> Result<Weight> {
    bq.require_unbound()?;
    let root = bq.root();
    let n = bq.poset().len();
    let mut chi = vec![0i64; n];
    let mut chi0 = 0i64;
    for &(t, h) in bq.arrows() {
        if h == root {
            chi0 += a.0[t];
        } else {
            chi[h] -= a.0[t];
        }
        if t != root {
            chi[t] += a.0[h];
        }
    }
    let w = Weight::from_integers(chi0, chi);
    debug_assert!(w.trace_identity_holds(a, root));
    Ok(w)
}

/// The linear form Θ_α = ⟨·,α⟩ − ⟨α,·⟩ of the (possibly bound) quiver,
/// using the relation-corrected Euler form. Θ_α(α) = 0 always.
pub fn theta_alpha(bq: &BoundQuiver, a: &DimVector) -> LinearForm {
    let n = bq.len();
    let coeffs = (0..n)
        .map(|v| {
            let e = DimVector::unit(n, v);
            bq.euler(&e, a) - bq.euler(a, &e)
        })
        .collect();
    LinearForm(coeffs)
}

/// King form Θ̃ = (χ₀; (−χ_q)) of a weight, scaled by the least common
/// denominator so the coefficients are integers (a positive scaling, which
/// moves no stability verdict).
pub fn theta_from_weight(bq: &BoundQuiver, w: &Weight) -> Result<LinearForm> {
    if w.chi.len() != bq.poset().len() {
        return Err(Error::Shape("weight length does not match the poset".into()));
    }
    let mut denom = BigInt::one();
    for c in std::iter::once(&w.chi0).chain(&w.chi) {
        denom = num::Integer::lcm(&denom, c.denom());
    }
    let to_int = |c: &BigRational| -> Result<i64> {
        let v = (c * BigRational::from_integer(denom.clone())).to_integer();
        i64::try_from(&v).map_err(|_| Error::Domain("weight coefficients overflow i64".into()))
    };
    let mut coeffs = Vec::with_capacity(bq.len());
    for c in &w.chi {
        coeffs.push(-to_int(c)?);
    }
    coeffs.push(to_int(&w.chi0)?);
    Ok(LinearForm(coeffs))
}

/// Recover a weight from a linear form. A King form must already satisfy
/// Θ(α) = 0; a slope form is converted by Θ̃ = Θ(α)·dim − dim(α)·Θ. The
/// result is normalized by the gcd of its entries (admissible positive
/// scaling).
pub fn weight_from_theta(
    bq: &BoundQuiver,
    theta: &LinearForm,
    a: &DimVector,
    convention: ThetaConvention,
) -> Result<Weight> {
    if theta.0.len() != bq.len() {
        return Err(Error::Shape("linear form length does not match the quiver".into()));
    }
    let king = king_normalize(theta, a, convention)?;
    let g = king.0.iter().fold(0i64, |acc, &v| num::integer::gcd(acc, v.abs())).max(1);
    let root = bq.root();
    let chi0 = king.0[root] / g;
    let chi: Vec<i64> = (0..bq.poset().len()).map(|q| -king.0[q] / g).collect();
    Ok(Weight::from_integers(chi0, chi))
}

/// King-normalize a form for a fixed dimension vector.
fn king_normalize(
    theta: &LinearForm,
    a: &DimVector,
    convention: ThetaConvention,
) -> Result<LinearForm> {
    match convention {
        ThetaConvention::King => {
            if theta.eval(a) != 0 {
                return Err(Error::Domain(format!(
                    "form is not normalizable: Θ(α) = {} ≠ 0",
                    theta.eval(a)
                )));
            }
            Ok(theta.clone())
        }
        ThetaConvention::Slope => {
            let ta = theta.eval(a);
            let d = a.total();
            Ok(LinearForm(theta.0.iter().map(|&t| ta - d * t).collect()))
        }
    }
}

/// Stability verdicts. The method tag records which search produced the
/// certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    SemistableNotStable,
    Unstable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MethodTag {
    Generic,
    LatticeSearch,
    FieldEnumeration { prime: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Destabilizing (or slope-equal) generic subdimension vector.
    DimVector(DimVector),
    /// Explicit subspace of V₀, with the induced subrepresentation dimension
    /// vector (poset slots first, root slot last).
    Subspace { basis: Matrix<BigRational>, induced: DimVector },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub method: MethodTag,
    /// dim End when an explicit representation was tested; decomposables are
    /// reported through the King evaluation and flagged here instead of
    /// getting a verdict taxonomy of their own.
    pub end_dim: Option<usize>,
    pub candidates_checked: usize,
}

/// Verdict for a general representation of dimension α: enumerate generic
/// subdimension vectors β ↪ α and compare Θ̃(β) against 0.
pub fn is_stable_generic(
    bq: &BoundQuiver,
    a: &DimVector,
    theta: &LinearForm,
    convention: ThetaConvention,
    cfg: &GenericCfg,
) -> Result<StabilityVerdict> {
    let q = bq.require_unbound()?;
    let king = king_normalize(theta, a, convention)?;
    let mut checked = 0usize;
    // strict violations first, then marginal ones
    for strict in [true, false] {
        if let Some(beta) = find_destabilizer(q, a, &king, strict, cfg, &mut checked)? {
            let verdict = if strict { Verdict::Unstable } else { Verdict::SemistableNotStable };
            debug_assert!(king.eval(&beta) <= 0 && generic_sub(q, &beta, a, cfg));
            return Ok(StabilityVerdict {
                verdict,
                witness: Some(Witness::DimVector(beta)),
                method: MethodTag::Generic,
                end_dim: None,
                candidates_checked: checked,
            });
        }
    }
    Ok(StabilityVerdict {
        verdict: Verdict::Stable,
        witness: None,
        method: MethodTag::Generic,
        end_dim: None,
        candidates_checked: checked,
    })
}

fn find_destabilizer(
    q: &Quiver,
    a: &DimVector,
    king: &LinearForm,
    strict: bool,
    cfg: &GenericCfg,
    checked: &mut usize,
) -> Result<Option<DimVector>> {
    let mut found = None;
    let mut visit = |beta: &DimVector| -> Option<bool> {
        if beta.is_zero() || beta == a {
            return None;
        }
        let v = king.eval(beta);
        if (strict && v >= 0) || (!strict && v != 0) {
            return None;
        }
        *checked += 1;
        if generic_sub(q, beta, a, cfg) {
            found = Some(beta.clone());
            return Some(true);
        }
        None
    };
    let mut walk =
        SubConeWalk::new(q, a, Some(king.0.clone()), None, cfg.budget.saturating_mul(64));
    walk.run(&mut visit)?;
    Ok(found)
}

/// Configuration of the explicit two-tier subspace search.
#[derive(Clone, Copy, Debug)]
pub struct ExplicitCfg {
    /// Closure depth of the subspace lattice generated by the V_q.
    pub lattice_depth: usize,
    /// Preferred prime for the exhaustive enumeration tier.
    pub enum_prime: u64,
    /// Largest ambient dimension for which the enumeration tier runs.
    pub enum_dim_cap: usize,
    /// Cap on the number of enumerated subspaces.
    pub enum_budget: u64,
}

impl Default for ExplicitCfg {
    fn default() -> Self {
        ExplicitCfg { lattice_depth: 3, enum_prime: 2, enum_dim_cap: 8, enum_budget: 1 << 21 }
    }
}

/// A strict bound representation seen as explicit subspaces of the root
/// space.
#[derive(Clone, Debug)]
pub struct ExplicitSystem {
    pub d0: usize,
    pub names: Vec<String>,
    pub spaces: Vec<Matrix<BigRational>>,
}

impl ExplicitSystem {
    pub fn from_representation(x: &Representation<BigRational>) -> Result<Self> {
        if !x.is_strict() {
            return Err(Error::Domain("representation is not strict".into()));
        }
        if !check_relations(x)? {
            return Err(Error::Domain("representation violates the relations".into()));
        }
        let bq = &x.quiver;
        let d0 = x.dims.0[bq.root()] as usize;
        let n = bq.poset().len();
        let mut names = Vec::with_capacity(n);
        let mut spaces = Vec::with_capacity(n);
        for v in 0..n {
            names.push(bq.vertex_name(v).to_string());
            spaces.push(x.subspace_at_root(v)?);
        }
        Ok(ExplicitSystem { d0, names, spaces })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.cols()).collect()
    }

    /// King value of a candidate subspace U:
    /// χ₀·dim U − Σ_q χ_q·dim(V_q ∩ U).
    fn king_value(&self, w: &Weight, u: &Matrix<BigRational>) -> BigRational {
        let dim_u = BigRational::from_integer(BigInt::from(u.cols()));
        let mut acc = &w.chi0 * dim_u;
        for (vq, c) in self.spaces.iter().zip(&w.chi) {
            if Zero::is_zero(c) {
                continue;
            }
            let cap = Matrix::intersect_spans(vq, u).cols();
            acc -= c * BigRational::from_integer(BigInt::from(cap));
        }
        acc
    }

    fn induced_dims(&self, u: &Matrix<BigRational>) -> DimVector {
        let mut d: Vec<i64> = self
            .spaces
            .iter()
            .map(|vq| Matrix::intersect_spans(vq, u).cols() as i64)
            .collect();
        d.push(u.cols() as i64);
        DimVector(d)
    }

    /// Tier 1: close the generating subspaces under pairwise sum and
    /// intersection up to the configured depth.
    fn lattice_candidates(&self, depth: usize) -> Vec<Matrix<BigRational>> {
        let mut seen: Vec<Matrix<BigRational>> = Vec::new();
        let mut frontier: Vec<Matrix<BigRational>> = Vec::new();
        fn push(
            m: Matrix<BigRational>,
            seen: &mut Vec<Matrix<BigRational>>,
            frontier: &mut Vec<Matrix<BigRational>>,
        ) {
            let canon = m.span_canonical();
            if !seen.contains(&canon) {
                seen.push(canon.clone());
                frontier.push(canon);
            }
        }
        for s in &self.spaces {
            push(s.clone(), &mut seen, &mut frontier);
        }
        for _ in 0..depth {
            let snapshot = seen.clone();
            let mut next = Vec::new();
            for f in frontier.drain(..) {
                for s in &snapshot {
                    push(Matrix::sum_spans(&f, s), &mut seen, &mut next);
                    push(Matrix::intersect_spans(&f, s), &mut seen, &mut next);
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        seen.into_iter().filter(|m| m.cols() > 0 && m.cols() < self.d0).collect()
    }
}

/// Explicit unitarizability / King stability of a strict representation
/// with a weight. Tier 1 searches the subspace lattice generated by the
/// V_q; tier 2 enumerates all subspaces of a reduction to a small prime
/// field when the reduction certifies as faithful. A violation in either
/// tier is definitive for that model; the method tag records the achieved
/// certification level.
pub fn is_unitarizable_explicit(
    x: &Representation<BigRational>,
    w: &Weight,
    ecfg: &ExplicitCfg,
) -> Result<StabilityVerdict> {
    let sys = ExplicitSystem::from_representation(x)?;
    if w.chi.len() != sys.spaces.len() {
        return Err(Error::Shape("weight does not match the poset".into()));
    }
    if !w.trace_identity_holds(&x.dims, x.quiver.root()) {
        return Err(Error::Domain("trace identity fails for the given weight".into()));
    }
    let end = end_dim(x)?;
    verdict_for_system(&sys, w, ecfg, Some(end))
}

pub fn verdict_for_system(
    sys: &ExplicitSystem,
    w: &Weight,
    ecfg: &ExplicitCfg,
    end: Option<usize>,
) -> Result<StabilityVerdict> {
    let mut checked = 0usize;
    let mut min_val: Option<(BigRational, Matrix<BigRational>)> = None;
    for u in sys.lattice_candidates(ecfg.lattice_depth) {
        checked += 1;
        let v = sys.king_value(w, &u);
        if min_val.as_ref().map_or(true, |(best, _)| v < *best) {
            min_val = Some((v, u));
        }
    }
    let mut method = MethodTag::LatticeSearch;
    if sys.d0 <= ecfg.enum_dim_cap {
        if let Some((p, red)) = certify_reduction(sys, ecfg) {
            if let Some((best, cnt)) = enumerate_mod_p(&red, sys.d0, p, w, ecfg.enum_budget) {
                checked += cnt;
                method = MethodTag::FieldEnumeration { prime: p };
                if let Some((v, u)) = best {
                    let lifted = Matrix::from_fn(u.rows(), u.cols(), |r, c| {
                        BigRational::from_integer(BigInt::from(u.at(r, c).v))
                    });
                    if min_val.as_ref().map_or(true, |(b, _)| v < *b) {
                        min_val = Some((v, lifted));
                    }
                }
            }
        }
    }
    let (value, witness_basis) = match min_val {
        Some(x) => x,
        // no proper nonzero candidate at all (d0 ≤ 1): vacuously stable
        None => {
            return Ok(StabilityVerdict {
                verdict: Verdict::Stable,
                witness: None,
                method,
                end_dim: end,
                candidates_checked: checked,
            })
        }
    };
    let verdict = if value.is_negative() {
        Verdict::Unstable
    } else if Zero::is_zero(&value) {
        Verdict::SemistableNotStable
    } else {
        Verdict::Stable
    };
    let witness = if verdict == Verdict::Stable {
        None
    } else {
        let induced = sys.induced_dims(&witness_basis);
        Some(Witness::Subspace { basis: witness_basis, induced })
    };
    Ok(StabilityVerdict { verdict, witness, method, end_dim: end, candidates_checked: checked })
}

/// Reduce the system mod p and certify the reduction: denominators
/// invertible, subspace dimensions and pairwise intersection dimensions
/// preserved.
fn certify_reduction(
    sys: &ExplicitSystem,
    ecfg: &ExplicitCfg,
) -> Option<(u64, Vec<Matrix<crate::arith::Fp>>)> {
    let mut primes = vec![ecfg.enum_prime];
    for p in [2u64, 3, 5, 7, 11, 13] {
        if !primes.contains(&p) {
            primes.push(p);
        }
    }
    'primes: for &p in &primes {
        let mut red = Vec::with_capacity(sys.spaces.len());
        for s in &sys.spaces {
            match reduce_matrix(s, p) {
                Some(m) => red.push(m),
                None => continue 'primes,
            }
        }
        for (s, m) in sys.spaces.iter().zip(&red) {
            if m.rank() != s.cols() {
                continue 'primes;
            }
        }
        for i in 0..red.len() {
            for j in i + 1..red.len() {
                let exact = Matrix::intersect_spans(&sys.spaces[i], &sys.spaces[j]).cols();
                let modp = Matrix::intersect_spans(&red[i], &red[j]).cols();
                if exact != modp {
                    continue 'primes;
                }
            }
        }
        return Some((p, red));
    }
    None
}

fn reduce_matrix(m: &Matrix<BigRational>, p: u64) -> Option<Matrix<crate::arith::Fp>> {
    use crate::arith::Fp;
    let pb = BigInt::from(p);
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.at(r, c);
            if (v.denom() % &pb).is_zero() {
                return None;
            }
            let num_mod = ((v.numer() % &pb) + &pb) % &pb;
            let den_mod = ((v.denom() % &pb) + &pb) % &pb;
            let num = Fp::from_u64(u64::try_from(&num_mod).ok()?, p);
            let den = Fp::from_u64(u64::try_from(&den_mod).ok()?, p);
            out.set(r, c, num.mul(&den.inv()?));
        }
    }
    Some(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

/// Enumerate every proper nonzero subspace of F_p^{d0} by reduced echelon
/// bases; return the candidate of minimal King value and the number of
/// subspaces visited, or None when the budget would be exceeded.
fn enumerate_mod_p(
    spaces: &[Matrix<crate::arith::Fp>],
    d0: usize,
    p: u64,
    w: &Weight,
    budget: u64,
) -> Option<(Option<(BigRational, Matrix<crate::arith::Fp>)>, usize)> {
    use crate::arith::Fp;
    let mut count = 0usize;
    let mut best: Option<(BigRational, Matrix<Fp>)> = None;
    for k in 1..d0 {
        for pivots in combinations(d0, k) {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| {
                    let pivots = &pivots;
                    (pivots[i] + 1..d0)
                        .filter(move |j| !pivots.contains(j))
                        .map(move |j| (i, j))
                })
                .collect();
            let combos = (p as u128).checked_pow(free.len() as u32)?;
            if count as u128 + combos > budget as u128 {
                return None;
            }
            let mut assign = vec![0u64; free.len()];
            loop {
                let mut basis: Matrix<Fp> = Matrix::zeros(d0, k);
                for (i, &pc) in pivots.iter().enumerate() {
                    basis.set(pc, i, Fp::from_u64(1, p));
                }
                for (fi, &(i, j)) in free.iter().enumerate() {
                    basis.set(j, i, Fp::from_u64(assign[fi], p));
                }
                count += 1;
                let dim_u = BigRational::from_integer(BigInt::from(k));
                let mut val = &w.chi0 * dim_u;
                for (vq, c) in spaces.iter().zip(&w.chi) {
                    if Zero::is_zero(c) {
                        continue;
                    }
                    let cap = Matrix::intersect_spans(vq, &basis).cols();
                    val -= c * BigRational::from_integer(BigInt::from(cap));
                }
                if best.as_ref().map_or(true, |(b, _)| val < *b) {
                    best = Some((val, basis));
                }
                let mut idx = 0;
                loop {
                    if idx == assign.len() {
                        break;
                    }
                    assign[idx] += 1;
                    if assign[idx] < p {
                        break;
                    }
                    assign[idx] = 0;
                    idx += 1;
                }
                if assign.iter().all(|&v| v == 0) {
                    break;
                }
            }
        }
    }
    Some((best, count))
}

/// The stability margin of the extension lemma: the minimum over candidate
/// proper subspaces U of χ₀ − (1/dim U) Σ χ_q dim(V_q ∩ U).
pub fn stability_margin(
    sys: &ExplicitSystem,
    w: &Weight,
    ecfg: &ExplicitCfg,
) -> Result<(BigRational, MethodTag)> {
    let mut min: Option<BigRational> = None;
    for u in sys.lattice_candidates(ecfg.lattice_depth) {
        let val = sys.king_value(w, &u) / BigRational::from_integer(BigInt::from(u.cols()));
        if min.as_ref().map_or(true, |m| val < *m) {
            min = Some(val);
        }
    }
    let mut method = MethodTag::LatticeSearch;
    if sys.d0 <= ecfg.enum_dim_cap {
        if let Some((p, red)) = certify_reduction(sys, ecfg) {
            if let Some((bst, _)) = enumerate_mod_p(&red, sys.d0, p, w, ecfg.enum_budget) {
                method = MethodTag::FieldEnumeration { prime: p };
                if let Some((v, u)) = bst {
                    let val = v / BigRational::from_integer(BigInt::from(u.cols()));
                    if min.as_ref().map_or(true, |m| val < *m) {
                        min = Some(val);
                    }
                }
            }
        }
    }
    match min {
        Some(m) => Ok((m, method)),
        None => Err(Error::Domain("no proper subspaces to measure the margin".into())),
    }
}

/// Extend a unitarizing weight over freshly added subspaces: each new
/// subspace receives χ_new = R/2 where R is the current stability margin
/// (the midpoint of the admissible interval (0, R)), and χ₀ absorbs the
/// added trace mass to keep the trace identity intact.
pub fn extend_weight(
    sys: &ExplicitSystem,
    w: &Weight,
    new_spaces: &[(String, Matrix<BigRational>)],
    ecfg: &ExplicitCfg,
) -> Result<(ExplicitSystem, Weight)> {
    let mut sys = sys.clone();
    let mut w = w.clone();
    for (name, basis) in new_spaces {
        if basis.rows() != sys.d0 || basis.rank() != basis.cols() {
            return Err(Error::Shape(format!("subspace {name} is not a basis in V0")));
        }
        let (margin, _method) = stability_margin(&sys, &w, ecfg)?;
        if !margin.is_positive() {
            return Err(Error::Domain(format!(
                "stability margin {margin} is not positive; the system is not strictly stable"
            )));
        }
        let chi_new = margin / BigRational::from_integer(BigInt::from(2));
        let d0 = BigRational::from_integer(BigInt::from(sys.d0 as i64));
        w.chi0 += &chi_new * BigRational::from_integer(BigInt::from(basis.cols() as i64)) / d0;
        w.chi.push(chi_new);
        sys.names.push(name.clone());
        sys.spaces.push(basis.clone());
    }
    Ok((sys, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;
    use crate::poset::Poset;
    use crate::quiver::hasse_quiver;
    use crate::rep::{sample_general, SampleOptions};
    use std::sync::Arc;

    fn five_star() -> Arc<BoundQuiver> {
        Arc::new(hasse_quiver(&Poset::primitive(&[1, 1, 1, 1, 1])).unwrap())
    }

    fn branch_dims(bq: &BoundQuiver, root: i64, branches: &[&[i64]]) -> DimVector {
        let chains = bq.poset().branch_elements().unwrap();
        let mut d = DimVector::zeros(bq.len());
        d.0[bq.root()] = root;
        for (chain, vals) in chains.iter().zip(branches) {
            for (&v, &x) in chain.iter().zip(*vals) {
                d.0[v] = x;
            }
        }
        d
    }

    #[test]
    fn slope_examples() {
        let bq = five_star();
        let a = DimVector(vec![1, 1, 1, 1, 1, 2]);
        // Θ = dim gives slope 1 for every vector
        let theta = LinearForm(vec![1; 6]);
        assert_eq!(slope(&theta, &a).unwrap(), BigRational::from_integer(1.into()));
        // S(n) convention Θ = (−1 at the root, 0 elsewhere)
        let mut s = vec![0i64; 6];
        s[bq.root()] = -1;
        let theta = LinearForm(s);
        assert_eq!(slope(&theta, &a).unwrap(), BigRational::new((-2).into(), 7.into()));
        assert!(slope(&theta, &DimVector::zeros(6)).is_err());
    }

    #[test]
    fn weight_chi_five_star() {
        let bq = five_star();
        let a = DimVector(vec![1, 1, 1, 1, 1, 2]);
        let w = weight_chi(&bq, &a).unwrap();
        assert_eq!(w, Weight::from_integers(5, vec![2, 2, 2, 2, 2]));
        assert!(w.chi_positive());
    }

    #[test]
    fn weight_chi_paper_table() {
        // the five weights of the wild-vector table
        let cases: Vec<(&[usize], i64, Vec<&[i64]>, i64, Vec<i64>)> = vec![
            (&[1, 1, 1, 1, 1], 2, vec![&[1], &[1], &[1], &[1], &[1]], 5, vec![2, 2, 2, 2, 2]),
            (&[1, 1, 1, 2], 4, vec![&[2], &[2], &[2], &[1, 2]], 8, vec![4, 4, 4, 2, 3]),
            (&[2, 2, 3], 6, vec![&[2, 4], &[2, 4], &[1, 2, 4]], 12, vec![4, 4, 4, 4, 2, 3, 4]),
            (
                &[1, 3, 4],
                8,
                vec![&[4], &[2, 4, 6], &[1, 2, 4, 6]],
                16,
                vec![8, 4, 4, 4, 2, 3, 4, 4],
            ),
            (
                &[1, 2, 6],
                12,
                vec![&[6], &[4, 8], &[1, 2, 4, 6, 8, 10]],
                24,
                vec![12, 8, 8, 2, 3, 4, 4, 4, 4],
            ),
        ];
        for (lengths, root, branches, chi0, chis) in cases {
            let bq = hasse_quiver(&Poset::primitive(lengths)).unwrap();
            let a = branch_dims(&bq, root, &branches);
            let w = weight_chi(&bq, &a).unwrap();
            assert_eq!(w, Weight::from_integers(chi0, chis), "weight table row {lengths:?}");
        }
    }

    #[test]
    fn chi_positive_cases() {
        let bq = five_star();
        // zero vector is χ-positive
        let w = weight_chi(&bq, &DimVector::zeros(6)).unwrap();
        assert!(w.chi_positive());
        // a descent along an arm breaks positivity on a chain poset
        let bq2 = Arc::new(hasse_quiver(&Poset::primitive(&[2])).unwrap());
        let a = branch_dims(&bq2, 1, &[&[2, 1]]);
        let w = weight_chi(&bq2, &a).unwrap();
        assert!(!w.chi_positive());
    }

    #[test]
    fn theta_alpha_five_star() {
        let bq = five_star();
        let a = DimVector(vec![1, 1, 1, 1, 1, 2]);
        let t = theta_alpha(&bq, &a);
        assert_eq!(t.0, vec![-2, -2, -2, -2, -2, 5]);
        assert_eq!(t.eval(&a), 0);
        // weight reading matches weight_chi
        let w = weight_from_theta(&bq, &t, &a, ThetaConvention::King).unwrap();
        assert_eq!(w, weight_chi(&bq, &a).unwrap());
    }

    #[test]
    fn theta_alpha_glued_n5() {
        let p = Poset::n_poset(5);
        let bq = hasse_quiver(&p).unwrap();
        let mut a = DimVector::zeros(bq.len());
        let set = |a: &mut DimVector, name: &str, v: i64| {
            a.0[bq.vertex_index(name).unwrap()] = v;
        };
        set(&mut a, "a", 2);
        set(&mut a, "b", 4);
        set(&mut a, "c", 1);
        set(&mut a, "d", 3);
        for (i, v) in [1, 2, 3, 4, 5].iter().enumerate() {
            set(&mut a, &format!("e{}", i + 1), *v);
        }
        a.0[bq.root()] = 6;
        let t = theta_alpha(&bq, &a);
        assert_eq!(t.eval(&a), 0);
        assert_eq!(t.0[bq.root()], 11);
        assert_eq!(t.0[bq.vertex_index("c").unwrap()], -1);
        let w = weight_from_theta(&bq, &t, &a, ThetaConvention::King).unwrap();
        let mut expect = Weight::from_integers(11, vec![0; 9]);
        for (name, v) in [("a", 4), ("b", 3), ("c", 1), ("d", 5)] {
            expect.chi[bq.vertex_index(name).unwrap()] =
                BigRational::from_integer(v.into());
        }
        for i in 1..=5 {
            expect.chi[bq.vertex_index(&format!("e{i}")).unwrap()] =
                BigRational::from_integer(2.into());
        }
        assert_eq!(w, expect);
        assert!(w.trace_identity_holds(&a, bq.root()));
    }

    #[test]
    fn slope_convention_roundtrip() {
        // the S(5) slope form recovers the canonical weight
        let bq = five_star();
        let a = DimVector(vec![1, 1, 1, 1, 1, 2]);
        let mut s = vec![0i64; 6];
        s[bq.root()] = -1;
        let theta = LinearForm(s);
        let w = weight_from_theta(&bq, &theta, &a, ThetaConvention::Slope).unwrap();
        assert_eq!(w, weight_chi(&bq, &a).unwrap());
        // and theta_from_weight is inverse on King forms up to scaling
        let t2 = theta_from_weight(&bq, &w).unwrap();
        let w2 = weight_from_theta(&bq, &t2, &a, ThetaConvention::King).unwrap();
        assert_eq!(w, w2);
    }

    #[test]
    fn generic_stability_verdicts() {
        let bq = five_star();
        let cfg = GenericCfg::default();
        let a = DimVector(vec![1, 1, 1, 1, 1, 2]);
        let t = theta_alpha(&bq, &a);
        let v = is_stable_generic(&bq, &a, &t, ThetaConvention::King, &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::Stable);

        // doubled isotropic root is semistable, α itself the witness
        let bq215 = Arc::new(hasse_quiver(&Poset::primitive(&[2, 1, 5])).unwrap());
        let iso = branch_dims(&bq215, 6, &[&[2, 4], &[3], &[1, 2, 3, 4, 5]]);
        let doubled = iso.scale(2);
        let t = theta_alpha(&bq215, &doubled);
        let v = is_stable_generic(&bq215, &doubled, &t, ThetaConvention::King, &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::SemistableNotStable);
        assert_eq!(v.witness, Some(Witness::DimVector(iso)));

        // a simple has no proper nonzero subs
        let e = DimVector::unit(6, 0);
        let t = theta_alpha(&bq, &e);
        let v = is_stable_generic(&bq, &e, &t, ThetaConvention::King, &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::Stable);
    }

    #[test]
    fn verdict_invariant_under_admissible_changes() {
        let bq = five_star();
        let cfg = GenericCfg::default();
        let a = DimVector(vec![1, 1, 1, 1, 1, 2]);
        let t = theta_alpha(&bq, &a);
        let base = is_stable_generic(&bq, &a, &t, ThetaConvention::King, &cfg).unwrap().verdict;
        let scaled = t.scale(3);
        let v = is_stable_generic(&bq, &a, &scaled, ThetaConvention::King, &cfg).unwrap();
        assert_eq!(v.verdict, base);
        // the slope form μ(X)·dim − Θ̃ carries the same verdict, and slope
        // forms are invariant under scaling and adding dim-multiples
        let slope_form = LinearForm(t.0.iter().map(|&c| 2 - c).collect());
        for form in [slope_form.clone(), slope_form.scale(3), slope_form.add_dim_multiple(5)] {
            let v = is_stable_generic(&bq, &a, &form, ThetaConvention::Slope, &cfg).unwrap();
            assert_eq!(v.verdict, base);
        }
    }

    #[test]
    fn explicit_three_lines() {
        // three distinct lines in a 2-dim space with χ = (3;2,2,2) are stable
        let p = Poset::primitive(&[1, 1, 1]);
        let bq = Arc::new(hasse_quiver(&p).unwrap());
        let f = Rationals;
        let dims = DimVector(vec![1, 1, 1, 2]);
        let x = sample_general(
            &bq,
            &dims,
            7,
            &f,
            SampleOptions { strict: true, generic_checks: true, retries: 32 },
        )
        .unwrap();
        let w = Weight::from_integers(3, vec![2, 2, 2]);
        let v = is_unitarizable_explicit(&x, &w, &ExplicitCfg::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Stable);
        assert!(matches!(v.method, MethodTag::FieldEnumeration { .. }));
    }

    #[test]
    fn explicit_direct_sum_is_semistable() {
        // two non-isomorphic stable summands of equal slope: lines in C^2
        // with χ = (1;1,1): a summand line evaluates to exactly zero
        let p = Poset::primitive(&[1, 1]);
        let bq = Arc::new(hasse_quiver(&p).unwrap());
        let f = Rationals;
        let dims = DimVector(vec![1, 1, 2]);
        let x = sample_general(
            &bq,
            &dims,
            3,
            &f,
            SampleOptions { strict: true, generic_checks: true, retries: 32 },
        )
        .unwrap();
        let w = Weight::from_integers(1, vec![1, 1]);
        let v = is_unitarizable_explicit(&x, &w, &ExplicitCfg::default()).unwrap();
        assert_eq!(v.verdict, Verdict::SemistableNotStable);
        assert!(v.witness.is_some());
    }

    #[test]
    fn trace_identity_enforced() {
        let p = Poset::primitive(&[1, 1]);
        let bq = Arc::new(hasse_quiver(&p).unwrap());
        let f = Rationals;
        let dims = DimVector(vec![1, 1, 2]);
        let x = sample_general(
            &bq,
            &dims,
            3,
            &f,
            SampleOptions { strict: true, generic_checks: false, retries: 32 },
        )
        .unwrap();
        let w = Weight::from_integers(5, vec![1, 1]);
        assert!(is_unitarizable_explicit(&x, &w, &ExplicitCfg::default()).is_err());
    }

    #[test]
    fn extend_weight_keeps_stability() {
        // three generic lines, χ=(3;2,2,2); add a fourth line equal to V_1
        let p = Poset::primitive(&[1, 1, 1]);
        let bq = Arc::new(hasse_quiver(&p).unwrap());
        let f = Rationals;
        let dims = DimVector(vec![1, 1, 1, 2]);
        let x = sample_general(
            &bq,
            &dims,
            11,
            &f,
            SampleOptions { strict: true, generic_checks: true, retries: 32 },
        )
        .unwrap();
        let w = Weight::from_integers(3, vec![2, 2, 2]);
        let sys = ExplicitSystem::from_representation(&x).unwrap();
        let ecfg = ExplicitCfg::default();
        let new = vec![("extra".to_string(), sys.spaces[0].clone())];
        let (sys2, w2) = extend_weight(&sys, &w, &new, &ecfg).unwrap();
        assert!(w2.chi[3].is_positive());
        let v = verdict_for_system(&sys2, &w2, &ecfg, None).unwrap();
        assert_eq!(v.verdict, Verdict::Stable);

        // a quarter of the margin works as well as half
        let (margin, _) = stability_margin(&sys, &w, &ecfg).unwrap();
        let mut w3 = w.clone();
        w3.chi.push(&margin / BigRational::from_integer(4.into()));
        w3.chi0 += w3.chi.last().unwrap()
            / BigRational::from_integer(BigInt::from(sys.d0 as i64));
        let mut sys3 = sys.clone();
        sys3.names.push("extra".into());
        sys3.spaces.push(sys.spaces[0].clone());
        let v3 = verdict_for_system(&sys3, &w3, &ecfg, None).unwrap();
        assert_eq!(v3.verdict, Verdict::Stable);
    }

    #[test]
    fn seesaw_inequalities_hold() {
        // pure slope arithmetic on random decompositions a = b + c
        let mut state = 17u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(13);
            ((state >> 33) % 5) as i64
        };
        let mut tested = 0;
        while tested < 120 {
            let n = 6;
            let b = DimVector((0..n).map(|_| next()).collect());
            let c = DimVector((0..n).map(|_| next()).collect());
            if b.is_zero() || c.is_zero() {
                continue;
            }
            let a = b.add(&c);
            let theta = LinearForm((0..n).map(|_| next() - 2).collect());
            let (ma, mb, mc) = (
                slope(&theta, &a).unwrap(),
                slope(&theta, &b).unwrap(),
                slope(&theta, &c).unwrap(),
            );
            assert!(mb.clone().min(mc.clone()) <= ma && ma <= mb.clone().max(mc.clone()));
            assert_eq!(mb <= ma, ma <= mc);
            assert_eq!(mb <= ma, mb <= mc);
            assert_eq!(mb < ma, ma < mc);
            tested += 1;
        }
    }
}
