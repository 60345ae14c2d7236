use orthoscalar::poset::Poset;
use orthoscalar::quiver::{hasse_quiver, DimVector};
use orthoscalar::roots::*;
use std::time::Instant;

fn branch_dims(lengths: &[usize], root: i64, branches: &[&[i64]]) -> (orthoscalar::quiver::Quiver, DimVector) {
    let bq = hasse_quiver(&Poset::primitive(lengths)).unwrap();
    let chains = bq.poset().branch_elements().unwrap();
    let mut d = DimVector::zeros(bq.len());
    d.0[bq.root()] = root;
    for (chain, vals) in chains.iter().zip(branches) {
        for (&v, &x) in chain.iter().zip(*vals) {
            d.0[v] = x;
        }
    }
    (bq.quiver().clone(), d)
}

#[test]
fn bench_key_cases() {
    let cfg = GenericCfg::default();

    let t = Instant::now();
    let (q, a) = branch_dims(&[1, 1, 1, 1], 4, &[&[3], &[3], &[3], &[2]]);
    let cd = canonical_decomposition(&q, &a, &cfg).unwrap();
    println!("4-star (4;3,3,3,2): {:?} in {:?}", cd.summands, t.elapsed());

    let t = Instant::now();
    let (q, a) = branch_dims(&[2, 2, 2], 7, &[&[3, 5], &[4, 6], &[3, 6]]);
    let cd = canonical_decomposition(&q, &a, &cfg).unwrap();
    println!("(2,2,2) (7;3,5;4,6;3,6): {:?} in {:?}", cd.summands, t.elapsed());

    let t = Instant::now();
    let (q, a) = branch_dims(&[2, 1, 5], 6, &[&[2, 4], &[3], &[1, 2, 3, 4, 5]]);
    let s = is_schur_root(&q, &a, &cfg).unwrap();
    println!("(2,1,5) iso schur={} in {:?}", s, t.elapsed());
    let t = Instant::now();
    let cd = canonical_decomposition(&q, &a, &cfg).unwrap();
    println!("(2,1,5) iso candecomp: {} summands in {:?}", cd.summand_count(), t.elapsed());

    let t = Instant::now();
    let (q, a) = branch_dims(&[1, 2, 6], 12, &[&[6], &[4, 8], &[1, 2, 4, 6, 8, 10]]);
    let s = is_schur_root(&q, &a, &cfg).unwrap();
    println!("(1,2,6) big schur={} in {:?}", s, t.elapsed());

    // E8-affine base of the 18-root example
    let t = Instant::now();
    let (q, a) = branch_dims(&[1, 2, 5], 18, &[&[9], &[8, 12], &[3, 6, 9, 12, 15]]);
    match canonical_decomposition(&q, &a, &cfg) {
        Ok(cd) => println!("(1,2,5) 18-example: {:?} in {:?}", cd.summands, t.elapsed()),
        Err(e) => println!("(1,2,5) 18-example: ERROR {} in {:?}", e, t.elapsed()),
    }

    // n=2 member of the (3n;...) family: (6; 2,4; 2,4; 2,4) on (2,2,2)
    let t = Instant::now();
    let (q, a) = branch_dims(&[2, 2, 2], 6, &[&[2, 4], &[2, 4], &[2, 4]]);
    let cd = canonical_decomposition(&q, &a, &cfg).unwrap();
    println!("(2,2,2) 2delta: {:?} in {:?}", cd.summands, t.elapsed());
}
