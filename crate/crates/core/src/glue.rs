//! The gluing construction: extend a polystable representation of an
//! unbound poset quiver by a direct sum of simples at a fresh minimal
//! element, producing a stable representation of the bound quiver together
//! with its unitarizing weight.

use crate::arith::Rationals;
use crate::matrix::Matrix;
use crate::poset::Poset;
use crate::quiver::{hasse_quiver, BoundQuiver, DimVector, Quiver};
use crate::rep::{
    check_relations, end_dim, gamma_matrix_raw, sample_general, Representation, SampleOptions,
};
use crate::roots::{canonical_decomposition, is_schur_root, GenericCfg};
use crate::stability::{
    extend_weight, theta_alpha, verdict_for_system, weight_from_theta, ExplicitCfg,
    ExplicitSystem, LinearForm, StabilityVerdict, ThetaConvention, Weight,
};
use crate::{Error, Result};
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// One isotypic block of the polystable base: a Schur-root summand,
/// its multiplicity, and n_i = dim Ext(S_q, X'_i) from the intersection
/// formula.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanSummand {
    pub dims: DimVector,
    pub copies: u32,
    pub n_i: i64,
}

/// A validated gluing plan for one new minimal element.
#[derive(Clone, Debug)]
pub struct GluePlan {
    pub base_poset: Poset,
    pub base_quiver: Arc<BoundQuiver>,
    pub target_poset: Poset,
    pub new_element: String,
    /// Upward covers of the new element, as base poset indices.
    pub covers: Vec<usize>,
    /// The unique join t(N_q); None encodes the root.
    pub join: Option<usize>,
    pub alpha_base: DimVector,
    pub t0: i64,
    pub summands: Vec<PlanSummand>,
}

impl GluePlan {
    /// Validate and assemble a plan: the base must be polystable for
    /// Θ_{α'} (canonical decomposition of equal slopes), the cover set
    /// appropriate, and the extension data strongly strict.
    pub fn build(
        base: &Poset,
        new_element: &str,
        cover_names: &[&str],
        alpha_base: &DimVector,
        t0: i64,
        cfg: &GenericCfg,
    ) -> Result<GluePlan> {
        let base_quiver = Arc::new(hasse_quiver(base)?);
        base_quiver.require_unbound()?;
        if t0 <= 0 {
            return Err(Error::Domain("the new element needs positive dimension".into()));
        }
        let covers: Vec<usize> = cover_names
            .iter()
            .map(|n| {
                base.index_of(n)
                    .ok_or_else(|| Error::MalformedPoset(format!("unknown cover {n:?}")))
            })
            .collect::<Result<_>>()?;
        let join = base.appropriate_join(&covers)?;
        let decomposition = polystable_decomposition(&base_quiver, alpha_base, cfg)?;
        let summands = summands_with_ext(&base_quiver, &decomposition, &covers, join);
        let target_poset = base.add_minimal_element(new_element, &covers)?;
        let plan = GluePlan {
            base_poset: base.clone(),
            base_quiver,
            target_poset,
            new_element: new_element.to_string(),
            covers,
            join,
            alpha_base: alpha_base.clone(),
            t0,
            summands,
        };
        if !plan.strongly_strict() {
            return Err(Error::Domain(
                "base dimension vector is not strongly strict: Ext(S_q, X') = 0".into(),
            ));
        }
        Ok(plan)
    }

    /// Σ t_i n_i > 0: a general representation of the base admits a nonzero
    /// extension by the new simple.
    pub fn strongly_strict(&self) -> bool {
        self.summands.iter().map(|s| s.copies as i64 * s.n_i).sum::<i64>() > 0
    }

    /// The extension dimension vector (t₀; t₁, ..., t_m) on the auxiliary
    /// quiver.
    pub fn extension_vector(&self) -> DimVector {
        let mut t = Vec::with_capacity(self.summands.len() + 1);
        t.push(self.t0);
        t.extend(self.summands.iter().map(|s| s.copies as i64));
        DimVector(t)
    }

    /// Glued dimension vector α = α' + t₀·e_q on the target quiver.
    pub fn glued_dims(&self, target: &BoundQuiver) -> DimVector {
        let mut dims = DimVector::zeros(target.len());
        for (v, name) in self.base_poset.elements().iter().enumerate() {
            let tv = target.vertex_index(name).expect("base element in target");
            dims.0[tv] = self.alpha_base.0[v];
        }
        dims.0[target.root()] = self.alpha_base.0[self.base_quiver.root()];
        dims.0[target.vertex_index(&self.new_element).unwrap()] = self.t0;
        dims
    }
}

/// Canonical decomposition plus the equal-slope test under Θ_{α'}; rejects
/// with "base not polystable" otherwise.
fn polystable_decomposition(
    bq: &BoundQuiver,
    alpha: &DimVector,
    cfg: &GenericCfg,
) -> Result<Vec<(DimVector, u32)>> {
    let q = bq.require_unbound()?;
    let cd = canonical_decomposition(q, alpha, cfg)?;
    let theta = theta_alpha(bq, alpha);
    for (b, _) in &cd.summands {
        if theta.eval(b) != 0 {
            return Err(Error::NotPolystable(format!(
                "summand {} has nonzero slope under the canonical form",
                bq.format_dims(b)
            )));
        }
    }
    Ok(cd.summands)
}

/// Expand the canonical decomposition into the polystable block structure:
/// real Schur roots keep their multiplicity in one isomorphism class, while
/// copies of an imaginary summand are generically pairwise non-isomorphic
/// and get one block each.
fn summands_with_ext(
    bq: &BoundQuiver,
    decomposition: &[(DimVector, u32)],
    covers: &[usize],
    join: Option<usize>,
) -> Vec<PlanSummand> {
    let mut out = Vec::new();
    for (b, mult) in decomposition {
        let n_i = ext_from_new_simple(bq, b, covers, join);
        if bq.quiver().tits(b) == 1 {
            out.push(PlanSummand { dims: b.clone(), copies: *mult, n_i });
        } else {
            for _ in 0..*mult {
                out.push(PlanSummand { dims: b.clone(), copies: 1, n_i });
            }
        }
    }
    out
}

/// n_i = dim Ext(S_q, X'_i) = max{0, Σ_{l∈N_q} β_l − (|N_q|−1) β_{t(N_q)}}.
fn ext_from_new_simple(
    bq: &BoundQuiver,
    beta: &DimVector,
    covers: &[usize],
    join: Option<usize>,
) -> i64 {
    let t_dim = match join {
        Some(v) => beta.0[v],
        None => beta.0[bq.root()],
    };
    let s: i64 = covers.iter().map(|&l| beta.0[l]).sum();
    (s - (covers.len() as i64 - 1) * t_dim).max(0)
}

/// The auxiliary quiver: vertices l₀, ..., l_m with n_i parallel arrows
/// l₀ → l_i.
pub fn build_tilde(plan: &GluePlan) -> Quiver {
    let m = plan.summands.len();
    let mut names = Vec::with_capacity(m + 1);
    names.push("l0".to_string());
    for i in 1..=m {
        names.push(format!("l{i}"));
    }
    let mut arrows = Vec::new();
    for (i, s) in plan.summands.iter().enumerate() {
        for _ in 0..s.n_i {
            arrows.push((0, i + 1));
        }
    }
    Quiver { names, arrows }
}

/// Stability of the extension: the vector t is a Schur root of the
/// auxiliary quiver.
pub fn extension_is_stable(plan: &GluePlan, t: &DimVector, cfg: &GenericCfg) -> Result<bool> {
    let tilde = build_tilde(plan);
    if t.len() != tilde.len() {
        return Err(Error::Shape("extension vector does not fit the auxiliary quiver".into()));
    }
    is_schur_root(&tilde, t, cfg)
}

/// Polystability of the extension: the canonical decomposition of t
/// consists of blocks l₀ + n_i·l_i.
pub fn extension_is_polystable(plan: &GluePlan, t: &DimVector, cfg: &GenericCfg) -> Result<bool> {
    let tilde = build_tilde(plan);
    let cd = canonical_decomposition(&tilde, t, cfg)?;
    'summand: for (b, _) in &cd.summands {
        if b.0[0] != 1 {
            return Ok(false);
        }
        for (i, s) in plan.summands.iter().enumerate() {
            let mut candidate = DimVector::unit(tilde.len(), 0);
            candidate.0[i + 1] = s.n_i;
            if *b == candidate {
                continue 'summand;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Everything the gluing produces: the explicit bound representation, its
/// dimension vector and weight, and the verification data.
#[derive(Clone, Debug)]
pub struct GlueOutput {
    pub representation: Representation<BigRational>,
    pub target_quiver: Arc<BoundQuiver>,
    pub dims: DimVector,
    pub weight: Weight,
    pub relations_hold: bool,
    pub strict: bool,
    pub end_dim: usize,
    pub verdict: Option<StabilityVerdict>,
}

/// The unitarizing weight of a glued dimension vector: the King form Θ_α of
/// the bound quiver (relation-corrected antisymmetrized Euler form) read as
/// a weight. This reproduces the componentwise recipe away from the root
/// and carries the trace identity by construction.
pub fn weight_glued(target: &BoundQuiver, dims: &DimVector) -> Result<Weight> {
    let theta = theta_alpha(target, dims);
    let w = weight_from_theta(target, &theta, dims, ThetaConvention::King)?;
    if !w.trace_identity_holds(dims, target.root()) {
        return Err(Error::Domain("glued weight violates the trace identity".into()));
    }
    Ok(w)
}

/// The componentwise recipe for the glued weight, valid when the join of
/// the new covers is not the root; used as a cross-check.
pub fn weight_glued_recipe(
    plan: &GluePlan,
    target: &BoundQuiver,
    base_weight: &Weight,
) -> Result<Weight> {
    let q_idx = plan
        .target_poset
        .index_of(&plan.new_element)
        .ok_or_else(|| Error::Domain("missing new element".into()))?;
    let alpha_q = BigRational::from_integer(BigInt::from(plan.t0));
    let mut chi = vec![BigRational::from_integer(0.into()); plan.target_poset.len()];
    for (v, name) in plan.base_poset.elements().iter().enumerate() {
        let tv = plan.target_poset.index_of(name).unwrap();
        chi[tv] = base_weight.chi[v].clone();
    }
    let covers_sum: i64 = plan.covers.iter().map(|&l| plan.alpha_base.0[l]).sum();
    let t_dim = match plan.join {
        Some(v) => plan.alpha_base.0[v],
        None => plan.alpha_base.0[plan.base_quiver.root()],
    };
    let k = plan.covers.len() as i64;
    chi[q_idx] = BigRational::from_integer(BigInt::from(covers_sum - (k - 1) * t_dim));
    for &l in &plan.covers {
        let name = plan.base_poset.name(l);
        let tv = plan.target_poset.index_of(name).unwrap();
        chi[tv] -= &alpha_q;
    }
    let mut chi0 = base_weight.chi0.clone();
    match plan.join {
        Some(v) => {
            let name = plan.base_poset.name(v);
            let tv = plan.target_poset.index_of(name).unwrap();
            chi[tv] += &alpha_q * BigRational::from_integer(BigInt::from(k - 1));
        }
        None => {
            // the recipe's sign at the root disagrees with the direct
            // Θ_α computation; the latter is authoritative and subtracts
            chi0 -= &alpha_q * BigRational::from_integer(BigInt::from(k - 1));
        }
    }
    let _ = target;
    Ok(Weight { chi0, chi })
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Sample one general strict summand whose cover-set intersection has the
/// generic dimension n_i.
fn sample_summand(
    plan: &GluePlan,
    s: &PlanSummand,
    seed: u64,
) -> Result<Representation<BigRational>> {
    let field = Rationals;
    let opts = SampleOptions { strict: true, generic_checks: true, retries: 32 };
    for attempt in 0..32u64 {
        let x = sample_general(
            &plan.base_quiver,
            &s.dims,
            splitmix(seed ^ splitmix(attempt)),
            &field,
            opts,
        )?;
        if intersection_basis(plan, &x)?.cols() as i64 == s.n_i {
            return Ok(x);
        }
    }
    Err(Error::GenericPosition("summand intersection never reached generic dimension".into()))
}

/// Basis of ∩_{l∈N_q} V_l inside the coordinates of the join vertex.
fn intersection_basis(
    plan: &GluePlan,
    x: &Representation<BigRational>,
) -> Result<Matrix<BigRational>> {
    let join = match plan.join {
        Some(v) => v,
        None => plan.base_quiver.root(),
    };
    let mut acc: Option<Matrix<BigRational>> = None;
    for &l in &plan.covers {
        let b = x.composite_to(l, join)?;
        acc = Some(match acc {
            None => b.column_space_basis(),
            Some(a) => Matrix::intersect_spans(&a, &b),
        });
    }
    Ok(acc.expect("nonempty cover set"))
}

/// Sample a Schurian representation of the auxiliary quiver with the
/// extension dimension vector; its arrow matrices are the cocycle blocks.
fn sample_tilde_rep(
    tilde: &Quiver,
    t: &DimVector,
    seed: u64,
) -> Result<Vec<Matrix<BigRational>>> {
    use crate::arith::FieldOps;
    let field = Rationals;
    for attempt in 0..64u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(attempt | 0x7110)));
        let maps: Vec<Matrix<BigRational>> = tilde
            .arrows
            .iter()
            .map(|&(tl, h)| {
                Matrix::from_fn(t.0[h] as usize, t.0[tl] as usize, |_, _| field.sample(&mut rng))
            })
            .collect();
        let g = gamma_matrix_raw(&tilde.arrows, t, t, &maps, &maps);
        if g.cols() - g.rank() == 1 {
            return Ok(maps);
        }
    }
    Err(Error::GenericPosition("no Schurian auxiliary representation found".into()))
}

/// Run the full gluing: sample general base summands, pick a Schurian
/// extension cocycle, assemble the bound-quiver representation, and verify
/// relations, strictness and Schur-ness. The optional verdict runs the
/// two-tier stability search against the glued weight.
pub fn glue_representation(
    plan: &GluePlan,
    seed: u64,
    cfg: &GenericCfg,
    run_verdict: Option<&ExplicitCfg>,
) -> Result<GlueOutput> {
    let t = plan.extension_vector();
    if !extension_is_stable(plan, &t, cfg)? {
        return Err(Error::Domain(format!(
            "extension multiplicities {:?} are not stable on the auxiliary quiver",
            t.0
        )));
    }
    let target = Arc::new(hasse_quiver(&plan.target_poset)?);
    let dims = plan.glued_dims(&target);
    let weight = weight_glued(&target, &dims)?;
    if !weight.chi_positive() {
        return Err(Error::Domain("glued dimension vector is not χ-positive".into()));
    }

    let summand_reps: Vec<Representation<BigRational>> = plan
        .summands
        .iter()
        .enumerate()
        .map(|(i, s)| sample_summand(plan, s, splitmix(seed ^ splitmix(i as u64 + 1))))
        .collect::<Result<_>>()?;

    let tilde = build_tilde(plan);
    let cocycle = sample_tilde_rep(&tilde, &t, seed ^ 0x7135)?;

    let rep = assemble(plan, &target, &dims, &summand_reps, &tilde, &cocycle)?;

    let relations_hold = check_relations(&rep)?;
    let strict = rep.is_strict();
    let end = end_dim(&rep)?;
    if !relations_hold || !strict {
        return Err(Error::Numeric("glued representation failed its own checks".into()));
    }
    let verdict = match run_verdict {
        Some(ecfg) => {
            let sys = ExplicitSystem::from_representation(&rep)?;
            Some(verdict_for_system(&sys, &weight, ecfg, Some(end))?)
        }
        None => None,
    };
    Ok(GlueOutput {
        representation: rep,
        target_quiver: target,
        dims,
        weight,
        relations_hold,
        strict,
        end_dim: end,
        verdict,
    })
}

/// Assemble the glued representation: block-diagonal base maps plus the
/// cocycle-driven maps out of the new source.
fn assemble(
    plan: &GluePlan,
    target: &Arc<BoundQuiver>,
    dims: &DimVector,
    summand_reps: &[Representation<BigRational>],
    tilde: &Quiver,
    cocycle: &[Matrix<BigRational>],
) -> Result<Representation<BigRational>> {
    let base_bq = &plan.base_quiver;
    let q_target = target.vertex_index(&plan.new_element).unwrap();
    // vertex map base index -> target index
    let to_target = |v: usize| -> usize {
        if v == base_bq.root() {
            target.root()
        } else {
            target.vertex_index(plan.base_poset.name(v)).unwrap()
        }
    };
    // block offsets per base vertex: one block per (summand, copy)
    let blocks: Vec<(usize, usize)> = plan
        .summands
        .iter()
        .enumerate()
        .flat_map(|(i, s)| (0..s.copies as usize).map(move |c| (i, c)))
        .collect();
    let block_offset = |v: usize, bi: usize| -> usize {
        blocks[..bi].iter().map(|&(i, _)| plan.summands[i].dims.0[v] as usize).sum()
    };

    let mut maps = Vec::with_capacity(target.arrows().len());
    for &(tt, hh) in target.arrows() {
        let rows = dims.0[hh] as usize;
        let cols = dims.0[tt] as usize;
        if tt == q_target {
            // new source: solve the cocycle through each cover
            let l_base = plan
                .base_poset
                .index_of(target.vertex_name(hh))
                .ok_or_else(|| Error::Domain("cover missing in base".into()))?;
            let join = plan.join.unwrap_or(base_bq.root());
            let mut m = Matrix::zeros(rows, cols);
            for (bi, &(i, copy)) in blocks.iter().enumerate() {
                let s = &plan.summands[i];
                if s.n_i == 0 {
                    continue;
                }
                let x = &summand_reps[i];
                let w_basis = intersection_basis(plan, x)?; // join coords, n_i columns
                // cocycle rows for this block: arrows l0 -> l_{i+1}, one per j
                let mut mtilde = Matrix::zeros(s.n_i as usize, plan.t0 as usize);
                let mut j = 0usize;
                for (ai, &(_, h)) in tilde.arrows.iter().enumerate() {
                    if h == i + 1 {
                        for r in 0..plan.t0 as usize {
                            mtilde.set(j, r, cocycle[ai].at(copy, r).clone());
                        }
                        j += 1;
                    }
                }
                let c = w_basis.mul(&mtilde); // join coords, t0 columns
                let b = x.composite_to(l_base, join)?;
                let z = b
                    .solve(&c)
                    .ok_or_else(|| Error::Numeric("cocycle does not factor through a cover".into()))?;
                let off = block_offset(l_base, bi);
                for r in 0..z.rows() {
                    for cc in 0..z.cols() {
                        m.set(off + r, cc, z.at(r, cc).clone());
                    }
                }
            }
            maps.push(m);
        } else {
            // base arrow: block diagonal over the copies
            let t_base = plan.base_poset.index_of(target.vertex_name(tt)).unwrap();
            let h_base = if hh == target.root() {
                base_bq.root()
            } else {
                plan.base_poset.index_of(target.vertex_name(hh)).unwrap()
            };
            let ai = base_bq
                .arrows()
                .iter()
                .position(|&(t2, h2)| t2 == t_base && h2 == h_base)
                .ok_or_else(|| Error::Domain("arrow missing in base".into()))?;
            let mut m = Matrix::zeros(rows, cols);
            for (bi, &(i, _)) in blocks.iter().enumerate() {
                let block = &summand_reps[i].maps[ai];
                let ro = block_offset(h_base, bi);
                let co = block_offset(t_base, bi);
                for r in 0..block.rows() {
                    for c in 0..block.cols() {
                        m.set(ro + r, co + c, block.at(r, c).clone());
                    }
                }
            }
            let _ = to_target;
            maps.push(m);
        }
    }
    Representation::new(target.clone(), dims.clone(), maps)
}

/// One new element of a multi-glue request.
#[derive(Clone, Debug)]
pub struct NewElement {
    pub name: String,
    pub covers: Vec<String>,
    pub t0: i64,
}

#[derive(Clone, Debug)]
pub struct MultiGlueOutput {
    pub representation: Representation<BigRational>,
    pub poset: Poset,
    pub dims: DimVector,
    pub weight: Weight,
    pub stable_element: String,
    pub end_dim: usize,
    pub verdict: StabilityVerdict,
    /// Hypothesis checks of the corollary that did not hold but were
    /// bypassed through the subspace-extension route.
    pub notes: Vec<String>,
}

/// Multi-element gluing: the element whose induced extension is stable is
/// glued by the full construction; every further element becomes a generic
/// subspace of the intersection of its covers, with the weight extended by
/// half the stability margin each time.
pub fn glue_multi(
    base: &Poset,
    elements: &[NewElement],
    alpha_base: &DimVector,
    seed: u64,
    cfg: &GenericCfg,
    ecfg: &ExplicitCfg,
) -> Result<MultiGlueOutput> {
    if elements.is_empty() {
        return Err(Error::Domain("no elements to glue".into()));
    }
    let mut notes = Vec::new();
    // build every plan against the shared base
    let mut plans = Vec::with_capacity(elements.len());
    for e in elements {
        let covers: Vec<&str> = e.covers.iter().map(|s| s.as_str()).collect();
        plans.push(GluePlan::build(base, &e.name, &covers, alpha_base, e.t0, cfg)?);
    }
    // find the stable extension
    let mut stable_idx = None;
    for (i, p) in plans.iter().enumerate() {
        let t = p.extension_vector();
        if extension_is_stable(p, &t, cfg)? {
            let target = hasse_quiver(&p.target_poset)?;
            let dims = p.glued_dims(&target);
            if weight_glued(&target, &dims)?.chi_positive() {
                stable_idx = Some(i);
                break;
            }
            notes.push(format!("{}: stable but not χ-positive", p.new_element));
        } else if !extension_is_polystable(p, &p.extension_vector(), cfg)? {
            notes.push(format!(
                "{}: induced extension is not polystable; glued as a plain subspace",
                p.new_element
            ));
        }
    }
    let stable_idx = stable_idx
        .ok_or_else(|| Error::Domain("no stable extension among the induced ones".into()))?;

    let first = glue_representation(&plans[stable_idx], seed, cfg, None)?;
    let mut rep = first.representation;
    let mut poset = plans[stable_idx].target_poset.clone();
    let mut weight = first.weight;
    let mut sys = ExplicitSystem::from_representation(&rep)?;

    for (i, e) in elements.iter().enumerate() {
        if i == stable_idx {
            continue;
        }
        // intersection of the covers inside the current root space
        let cover_idx: Vec<usize> = e
            .covers
            .iter()
            .map(|n| {
                poset
                    .index_of(n)
                    .ok_or_else(|| Error::MalformedPoset(format!("unknown cover {n:?}")))
            })
            .collect::<Result<_>>()?;
        let mut cap: Option<Matrix<BigRational>> = None;
        for &l in &cover_idx {
            let b = &sys.spaces[l];
            cap = Some(match cap {
                None => b.clone(),
                Some(a) => Matrix::intersect_spans(&a, b),
            });
        }
        let cap = cap.expect("nonempty covers");
        if (cap.cols() as i64) < e.t0 {
            return Err(Error::Domain(format!(
                "intersection for {} has dimension {} < {}",
                e.name,
                cap.cols(),
                e.t0
            )));
        }
        let sub = generic_subspace(&cap, e.t0 as usize, splitmix(seed ^ splitmix(i as u64)));
        let (nsys, nweight) =
            extend_weight(&sys, &weight, &[(e.name.clone(), sub.clone())], ecfg)?;
        sys = nsys;
        weight = nweight;
        poset = poset.add_minimal_element(&e.name, &cover_idx)?;
        rep = attach_subspace(&rep, &poset, &e.name, &cover_idx, &sub)?;
    }

    let end = end_dim(&rep)?;
    if !check_relations(&rep)? || !rep.is_strict() {
        return Err(Error::Numeric("multi-glued representation failed its checks".into()));
    }
    let verdict = verdict_for_system(&sys, &weight, ecfg, Some(end))?;
    let dims = rep.dims.clone();
    Ok(MultiGlueOutput {
        representation: rep,
        poset,
        dims,
        weight,
        stable_element: elements[stable_idx].name.clone(),
        end_dim: end,
        verdict,
        notes,
    })
}

/// A generic subspace of the given span with the prescribed dimension
/// (random integer combinations of the basis).
fn generic_subspace(cap: &Matrix<BigRational>, dim: usize, seed: u64) -> Matrix<BigRational> {
    use crate::arith::FieldOps;
    let field = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coeffs = Matrix::from_fn(cap.cols(), dim, |_, _| field.sample(&mut rng));
        let m = cap.mul(&coeffs);
        if m.rank() == dim {
            return m;
        }
    }
}

/// Rebuild the representation on the poset extended by a new minimal
/// element whose subspace is the given basis in root coordinates. The
/// cover indices refer to the NEW poset.
fn attach_subspace(
    rep: &Representation<BigRational>,
    new_poset: &Poset,
    name: &str,
    cover_idx: &[usize],
    sub: &Matrix<BigRational>,
) -> Result<Representation<BigRational>> {
    let target = Arc::new(hasse_quiver(new_poset)?);
    let old = &rep.quiver;
    let mut dims = DimVector::zeros(target.len());
    for v in 0..new_poset.len() {
        let nm = new_poset.name(v);
        dims.0[target.vertex_index(nm).unwrap()] = if nm == name {
            sub.cols() as i64
        } else {
            rep.dims.0[old.vertex_index(nm).unwrap()]
        };
    }
    dims.0[target.root()] = rep.dims.0[old.root()];
    let q_new = target.vertex_index(name).unwrap();
    let mut maps = Vec::with_capacity(target.arrows().len());
    for &(t, h) in target.arrows() {
        if t == q_new {
            // solve V_l z = sub in the cover's own coordinates
            let l = h;
            let l_old = old.vertex_index(target.vertex_name(l)).unwrap();
            let basis = rep.subspace_at_root(l_old)?;
            let z = basis
                .solve(sub)
                .ok_or_else(|| Error::Numeric("subspace does not sit inside its cover".into()))?;
            maps.push(z);
        } else {
            let t_old = old.vertex_index(target.vertex_name(t)).unwrap();
            let h_old = if h == target.root() {
                old.root()
            } else {
                old.vertex_index(target.vertex_name(h)).unwrap()
            };
            let ai = old
                .arrows()
                .iter()
                .position(|&(a, b)| (a, b) == (t_old, h_old))
                .ok_or_else(|| Error::Domain("arrow missing in old quiver".into()))?;
            maps.push(rep.maps[ai].clone());
        }
    }
    let _ = cover_idx;
    Representation::new(target, dims, maps)
}
