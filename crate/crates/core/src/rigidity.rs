//! Rigidity indices of Hermitian tuples attached to strict representations
//! of primitive posets, and the identity tying them to the Euler form.

use crate::poset::Poset;
use crate::quiver::{hasse_quiver, DimVector};
use crate::{Error, Result};
use num::{BigInt, BigRational};

/// dim Z(A) = Σ d_i² for a Hermitian matrix with eigenvalue multiplicities
/// d_1, ..., d_j.
pub fn commutant_dim(multiplicities: &[i64]) -> i64 {
    multiplicities.iter().map(|d| d * d).sum()
}

/// rig(A_1, ..., A_n) = m²(2−n) + Σ_i dim Z(A_i) for an n-tuple of m×m
/// Hermitian matrices with the given eigenvalue multiplicity vectors.
pub fn rigidity_index(m: i64, multiplicity_vectors: &[Vec<i64>]) -> Result<i64> {
    for d in multiplicity_vectors {
        if d.iter().sum::<i64>() != m {
            return Err(Error::Shape(format!(
                "multiplicities {d:?} do not sum to the matrix size {m}"
            )));
        }
    }
    let n = multiplicity_vectors.len() as i64;
    Ok(m * m * (2 - n) + multiplicity_vectors.iter().map(|d| commutant_dim(d)).sum::<i64>())
}

/// Eigenvalue multiplicities of the Hermitian tuple of a strict dimension
/// vector on a primitive poset: per branch, the successive differences of
/// the subspace dimensions plus the codimension of the outermost one.
pub fn tuple_multiplicities(p: &Poset, dims: &DimVector) -> Result<(i64, Vec<Vec<i64>>)> {
    let chains = p.branch_elements()?;
    let bq = hasse_quiver(p)?;
    let m = dims.0[bq.root()];
    let mut out = Vec::with_capacity(chains.len());
    for chain in chains {
        let mut d = Vec::with_capacity(chain.len() + 1);
        let mut prev = 0i64;
        for &v in &chain {
            let cur = dims.0[v];
            if cur < prev {
                return Err(Error::Domain(format!(
                    "dims not strict along a branch: {cur} < {prev}"
                )));
            }
            d.push(cur - prev);
            prev = cur;
        }
        if m < prev {
            return Err(Error::Domain("branch dimension exceeds the root".into()));
        }
        d.push(m - prev);
        out.push(d);
    }
    Ok((m, out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityReport {
    pub euler: i64,
    pub rig: i64,
    pub rig_half: BigRational,
    pub equal: bool,
}

/// The identity ⟨α,α⟩ = rig/2 for strict dimension vectors of primitive
/// posets (pure algebra, holds unconditionally). Non-primitive posets are
/// delegated to their related primitive poset with the removed coordinates
/// dropped.
pub fn rigidity_identity_check(p: &Poset, dims: &DimVector) -> Result<RigidityReport> {
    if p.is_primitive() {
        let bq = hasse_quiver(p)?;
        let euler = bq.tits(dims);
        let (m, mult) = tuple_multiplicities(p, dims)?;
        let rig = rigidity_index(m, &mult)?;
        let rig_half = BigRational::new(BigInt::from(rig), BigInt::from(2));
        Ok(RigidityReport { euler, rig, rig_half, equal: 2 * euler == rig })
    } else {
        let (related, removed) = p.related_poset();
        let bq = hasse_quiver(p)?;
        let rbq = hasse_quiver(&related)?;
        let mut rdims = DimVector::zeros(rbq.len());
        for (i, name) in related.elements().iter().enumerate() {
            let orig = bq.vertex_index(name).expect("shared element");
            rdims.0[i] = dims.0[orig];
        }
        rdims.0[rbq.root()] = dims.0[bq.root()];
        let _ = removed;
        rigidity_identity_check(&related, &rdims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutant_examples() {
        assert_eq!(commutant_dim(&[3]), 9);
        assert_eq!(commutant_dim(&[1, 1, 1]), 3);
        assert_eq!(commutant_dim(&[2, 2, 2]), 12);
    }

    #[test]
    fn rigidity_scalar_case() {
        // m = 1, n = 1, d = (1): 1·(2−1)·1 + 1 = 2
        assert_eq!(rigidity_index(1, &[vec![1]]).unwrap(), 2);
    }

    #[test]
    fn rigidity_five_star() {
        // (2;1,1,1,1,1): five branches with multiplicities (1,1)
        let d: Vec<Vec<i64>> = (0..5).map(|_| vec![1, 1]).collect();
        assert_eq!(rigidity_index(2, &d).unwrap(), -2);
    }

    #[test]
    fn rigidity_sum_mismatch() {
        assert!(rigidity_index(3, &[vec![1, 1]]).is_err());
    }

    #[test]
    fn identity_on_five_star() {
        let p = Poset::primitive(&[1, 1, 1, 1, 1]);
        let dims = DimVector(vec![1, 1, 1, 1, 1, 2]);
        let r = rigidity_identity_check(&p, &dims).unwrap();
        assert_eq!((r.euler, r.rig), (-1, -2));
        assert!(r.equal);
    }

    #[test]
    fn identity_on_isotropic_215() {
        let p = Poset::primitive(&[2, 1, 5]);
        let bq = hasse_quiver(&p).unwrap();
        let chains = p.branch_elements().unwrap();
        let mut dims = DimVector::zeros(bq.len());
        dims.0[bq.root()] = 6;
        for (chain, vals) in chains.iter().zip([vec![2, 4], vec![3], vec![1, 2, 3, 4, 5]]) {
            for (&v, x) in chain.iter().zip(vals) {
                dims.0[v] = x;
            }
        }
        let r = rigidity_identity_check(&p, &dims).unwrap();
        assert_eq!((r.euler, r.rig), (0, 0));
        assert!(r.equal);
    }

    #[test]
    fn identity_randomized() {
        // 100 random strict vectors on random primitive posets: always equal
        let mut state = 23u64;
        let mut next = |m: i64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(31);
            ((state >> 33) as i64).rem_euclid(m)
        };
        for trial in 0..100 {
            let arms = 1 + (trial % 4);
            let lengths: Vec<usize> = (0..arms).map(|_| 1 + next(3) as usize).collect();
            let p = Poset::primitive(&lengths);
            let bq = hasse_quiver(&p).unwrap();
            let chains = p.branch_elements().unwrap();
            let mut dims = DimVector::zeros(bq.len());
            let mut tallest = 0;
            for chain in &chains {
                let mut cur = next(3);
                for &v in chain {
                    cur += next(3);
                    dims.0[v] = cur;
                }
                tallest = tallest.max(cur);
            }
            dims.0[bq.root()] = tallest + 1 + next(4);
            let r = rigidity_identity_check(&p, &dims).unwrap();
            assert!(r.equal, "poset {lengths:?}, dims {:?}", dims.0);
            // the dimension-vector level statement of the same identity
            assert_eq!(2 * bq.tits(&dims), r.rig);
        }
    }

    #[test]
    fn non_primitive_delegates() {
        let p = Poset::n_poset(5);
        let bq = hasse_quiver(&p).unwrap();
        let mut dims = DimVector::zeros(bq.len());
        for (name, v) in
            [("a", 2), ("b", 4), ("c", 1), ("d", 3), ("e1", 1), ("e2", 2), ("e3", 3), ("e4", 4), ("e5", 5)]
        {
            dims.0[bq.vertex_index(name).unwrap()] = v;
        }
        dims.0[bq.root()] = 6;
        // related poset is (2,1,5) with the c-coordinate dropped
        let r = rigidity_identity_check(&p, &dims).unwrap();
        assert_eq!(r.euler, 0);
        assert!(r.equal);
    }
}
