//! The pipeline on quivers beyond the A5 reference: a D4 star (Hom spaces of
//! dimension 2 appear), the 2-homogeneous A3 fishbone, mixed-type tensor
//! factors, and a three-fold iteration with l = 2.

use higher_ar::almostsplit::{build_base_sequence, extract_chain_map, tensor_almost_split};
use higher_ar::ctcat::{knit, tensor_category, CTCategory};
use higher_ar::oracle;
use higher_ar::quiver::QuiverSpec;
use std::sync::Arc;

fn cat_of(name: &str, vertices: usize, arrows: Vec<(usize, usize)>) -> Arc<CTCategory> {
    let q = Arc::new(QuiverSpec::new(name, vertices, arrows).unwrap());
    Arc::new(knit(&q).unwrap())
}

fn a5_cat() -> Arc<CTCategory> {
    cat_of("a5", 5, vec![(0, 1), (1, 2), (3, 2), (4, 3)])
}

// three subspaces flowing into a central sink
fn d4_cat() -> Arc<CTCategory> {
    cat_of("d4", 4, vec![(0, 3), (1, 3), (2, 3)])
}

fn a3_cat() -> Arc<CTCategory> {
    cat_of("a3", 3, vec![(0, 1), (2, 1)])
}

#[test]
fn d4_star_category_shape() {
    let cat = d4_cat();
    assert_eq!(cat.label_count(), 12);
    assert_eq!(cat.homogeneity(), Some(3));
    assert!(oracle::slice_vanishing_scan(&cat));
    // the double root (1,1,1,2) sits in the middle slice and its Hom space
    // from the central projective is two-dimensional
    let pc = cat.index_of("P4").unwrap();
    let double = (0..cat.label_count())
        .find(|&i| cat.base_dims(i) == Some(vec![1, 1, 1, 2]))
        .expect("double root present");
    assert_eq!(cat.slice(double), 1);
    assert_eq!(cat.hom_dim(pc, double), 2);
}

#[test]
fn d4_star_sequences_verify_for_all_noninjective_starts() {
    let cat = d4_cat();
    let mut count = 0;
    for i in 0..cat.label_count() {
        if cat.tau_next(i).is_none() {
            continue;
        }
        count += 1;
        let (seq, report) = build_base_sequence(&cat, i).unwrap();
        assert!(report.pass(), "start {}", cat.label(i).name);
        let pair = extract_chain_map(&seq).unwrap();
        assert!(pair.phi.is_radical());
    }
    assert_eq!(count, 8);
}

#[test]
fn d4_tensor_a5_mixed_factors() {
    let d4 = d4_cat();
    let a5 = a5_cat();
    let t = Arc::new(tensor_category(&d4, &a5).unwrap());
    assert_eq!(t.label_count(), 60);
    assert_eq!(t.n(), 2);
    assert!(oracle::slice_vanishing_scan(&t));
    // central projective of D4 against P2 of A5, both slice 0
    let pc = d4.index_of("P4").unwrap();
    let p2 = a5.index_of("P2").unwrap();
    let (s1, _) = build_base_sequence(&d4, pc).unwrap();
    let (s2, _) = build_base_sequence(&a5, p2).unwrap();
    let pa = extract_chain_map(&s1).unwrap();
    let pb = extract_chain_map(&s2).unwrap();
    let step = tensor_almost_split(&t, &pa, &pb).unwrap();
    assert!(step.report.pass());
    assert_eq!(step.report.checked_labels, 60);
    // the middle term of the D4 sequence has three summands, so degree 2
    // carries 3 + 1 tensor summands
    assert_eq!(step.seq.complex.term(2).len(), 4);
}

#[test]
fn a3_fishbone_is_two_homogeneous() {
    let cat = a3_cat();
    assert_eq!(cat.label_count(), 6);
    assert_eq!(cat.homogeneity(), Some(2));
    for s in 0..2 {
        assert_eq!(cat.slice_members(s).len(), 3);
    }
}

#[test]
fn a3_threefold_iteration() {
    let a3 = a3_cat();
    let t2 = Arc::new(tensor_category(&a3, &a3).unwrap());
    assert_eq!(t2.label_count(), 18);
    let t3 = Arc::new(tensor_category(&t2, &a3).unwrap());
    assert_eq!(t3.label_count(), 54);
    assert_eq!(t3.n(), 3);
    let starts = ["P1", "P2", "P3"];
    let mut pairs = Vec::new();
    for name in starts {
        let i = a3.index_of(name).unwrap();
        let (seq, report) = build_base_sequence(&a3, i).unwrap();
        assert!(report.pass());
        pairs.push(extract_chain_map(&seq).unwrap());
    }
    let step2 = tensor_almost_split(&t2, &pairs[0], &pairs[1]).unwrap();
    assert!(step2.report.pass());
    let step3 = tensor_almost_split(&t3, &step2.pair, &pairs[2]).unwrap();
    assert!(step3.report.pass());
    assert_eq!(step3.report.checked_labels, 54);
    // a 3-almost split sequence lives in degrees 0..=4 with single ends
    assert_eq!(step3.seq.complex.support(), vec![0, 1, 2, 3, 4]);
    assert_eq!(step3.seq.complex.term(4).len(), 1);
    assert_eq!(step3.seq.complex.term(0).len(), 1);
}

#[test]
fn d4_oracle_agreement() {
    let d4 = d4_cat();
    let t = Arc::new(tensor_category(&d4, &d4).unwrap());
    let (checked, mismatches) = oracle::hom_agreement_suite(&d4, &t, 25, 0x0D4);
    assert_eq!((checked, mismatches), (25, 0));
    let (checked, failures) = oracle::kunneth_suite(&d4, &t, 25, 0x0D5);
    assert_eq!((checked, failures), (25, 0));
    let (checked, failures) = oracle::rad_formula_suite(&d4, 6, 0x0D6);
    assert_eq!((checked, failures), (6, 0));
}
