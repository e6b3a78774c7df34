//! Property suites beyond the acceptance criteria: closure of the tensor
//! step over all slice-matched pairs, sign conventions of the extraction,
//! radicality preservation, and the cone laws on seeded samples.

use higher_ar::almostsplit::{
    apply_f, build_base_sequence, extension_cocycles, base_sequence_from_cocycle,
    chain_map_from_coords, chain_map_space, extract_chain_map, homotopy_square_equiv,
    tensor_almost_split,
};
use higher_ar::complexes::{cone, tensor_chain_map, ChainMapF, ComplexF};
use higher_ar::ctcat::{knit, tensor_category, CTCategory, FormalModule, MorphismMatrix};
use higher_ar::exactlin::{rat_i, Rat};
use higher_ar::oracle::{random_chain_map, random_slice_pure_complex};
use higher_ar::quiver::QuiverSpec;
use higher_ar::rng::SplitMix64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

fn a5_cat() -> Arc<CTCategory> {
    let q = Arc::new(QuiverSpec::new("a5", 5, vec![(0, 1), (1, 2), (3, 2), (4, 3)]).unwrap());
    Arc::new(knit(&q).unwrap())
}

#[test]
fn tensor_step_closure_over_all_slice_pairs() {
    let a = a5_cat();
    let t2 = Arc::new(tensor_category(&a, &a).unwrap());
    for s in 0..2 {
        for &la in a.slice_members(s) {
            let (seq_a, _) = build_base_sequence(&a, la).unwrap();
            let pa = extract_chain_map(&seq_a).unwrap();
            for &lb in a.slice_members(s) {
                let (seq_b, _) = build_base_sequence(&a, lb).unwrap();
                let pb = extract_chain_map(&seq_b).unwrap();
                let step = tensor_almost_split(&t2, &pa, &pb).unwrap();
                assert!(
                    step.report.pass(),
                    "tensor of {} and {} fails",
                    a.label(la).name,
                    a.label(lb).name
                );
                assert_eq!(step.seq.start_slice, s);
            }
        }
    }
}

#[test]
fn extraction_signs_match_the_cone_construction() {
    let cat = a5_cat();
    let p2 = cat.index_of("P2").unwrap();
    let (c_seq, _) = build_base_sequence(&cat, p2).unwrap();
    let d2 = c_seq.complex.diff(2);
    let d1 = c_seq.complex.diff(1);
    let pair = extract_chain_map(&c_seq).unwrap();
    // a0 carries -a, a1 carries d, phi carries -b and -c
    let neg = |v: &[Rat]| -> Vec<Rat> { v.iter().map(|x| -x.clone()).collect() };
    assert_eq!(pair.a0.diff(1).block(0, 0), &neg(d2.block(0, 0))[..]);
    assert_eq!(pair.a1.diff(1).block(0, 0), d1.block(0, 1));
    assert_eq!(pair.phi.component(1).block(0, 0), &neg(d2.block(1, 0))[..]);
    assert_eq!(pair.phi.component(0).block(0, 0), &neg(d1.block(0, 0))[..]);

    // D has a single gamma block: phi = -e concentrated in degree 1
    let p5 = cat.index_of("P5").unwrap();
    let (d_seq, _) = build_base_sequence(&cat, p5).unwrap();
    let pd = extract_chain_map(&d_seq).unwrap();
    assert_eq!(pd.a0.support(), vec![1]);
    assert_eq!(pd.phi.component(1).block(0, 0), &neg(d_seq.complex.diff(2).block(0, 0))[..]);
}

#[test]
fn cone_squares_to_zero_on_random_radical_chain_maps() {
    let cat = a5_cat();
    let mut rng = SplitMix64::new(0xC0DE);
    let mut built = 0;
    while built < 50 {
        let s = rng.below(2);
        // maps from a slice-s complex to a slice-(s+1) complex are radical
        let c = random_slice_pure_complex(&cat, &mut rng, s, 3);
        let d = random_slice_pure_complex(&cat, &mut rng, s + 1, 3);
        let f = random_chain_map(&cat, &mut rng, &c, &d);
        assert!(f.is_radical());
        let cn = cone(&f);
        assert!(cn.realize().d_squared_is_zero());
        built += 1;
    }
}

#[test]
fn tensor_chain_map_preserves_radicality() {
    let a = a5_cat();
    let t2 = Arc::new(tensor_category(&a, &a).unwrap());
    let mut rng = SplitMix64::new(0xFEED);
    let mut built = 0;
    while built < 20 {
        let s = rng.below(2);
        let c1 = random_slice_pure_complex(&a, &mut rng, s, 2);
        let d1 = random_slice_pure_complex(&a, &mut rng, s + 1, 2);
        let f = random_chain_map(&a, &mut rng, &c1, &d1);
        let c2 = random_slice_pure_complex(&a, &mut rng, s, 2);
        let d2 = random_slice_pure_complex(&a, &mut rng, s + 1, 2);
        let g = random_chain_map(&a, &mut rng, &c2, &d2);
        let fg = tensor_chain_map(&t2, &f, &g).unwrap();
        assert!(fg.is_radical());
        built += 1;
    }
}

#[test]
fn tensor_of_identities_and_exact_complexes() {
    let a = a5_cat();
    let t2 = Arc::new(tensor_category(&a, &a).unwrap());
    // 0 -> P2 -> P2 -> 0 is exact; its tensor square stays exact
    let p2 = a.index_of("P2").unwrap();
    let m = FormalModule::single(p2);
    let mut terms = BTreeMap::new();
    terms.insert(1, m.clone());
    terms.insert(0, m.clone());
    let mut diffs = BTreeMap::new();
    diffs.insert(1, MorphismMatrix::identity(&a, &m));
    let exact = ComplexF::new(a.clone(), terms, diffs).unwrap();
    assert!(exact.is_exact());
    let prod = higher_ar::complexes::total_tensor(&t2, &exact, &exact).unwrap();
    assert!(prod.is_exact());
    // identity ⊗ identity = identity
    let f = ChainMapF::identity(&exact);
    let ff = tensor_chain_map(&t2, &f, &f).unwrap();
    assert!(ff.is_quasi_iso());
}

#[test]
fn corner_functor_edge_cases() {
    let cat = a5_cat();
    let p2 = cat.index_of("P2").unwrap();
    let (seq, _) = build_base_sequence(&cat, p2).unwrap();
    // a label in a later slice than everything in the sequence sees zero
    let i1 = cat.index_of("I1").unwrap();
    let fc = apply_f(&cat, i1, &seq.complex).unwrap();
    assert!(fc.dims.is_empty());
    // at the end label, degree 0 carries rad(End) = dim End - 1 = 0
    let m5 = cat.index_of("M5").unwrap();
    let fm5 = apply_f(&cat, m5, &seq.complex).unwrap();
    assert_eq!(fm5.dim(0), cat.hom_dim(m5, m5) - 1);
    assert!(fm5.is_exact());
}

#[test]
fn homotopy_witness_for_conjugated_chain_map() {
    let cat = a5_cat();
    let p2 = cat.index_of("P2").unwrap();
    let (seq, _) = build_base_sequence(&cat, p2).unwrap();
    let pair = extract_chain_map(&seq).unwrap();
    // conjugate phi by invertible chain maps of its endpoints
    let mut rng = SplitMix64::new(0xABCD);
    let f = invertible_chain_endo(&cat, &pair.a0, &mut rng);
    let g = invertible_chain_endo(&cat, &pair.a1, &mut rng);
    let mut comps = BTreeMap::new();
    for i in pair.a0.support() {
        if pair.a1.term(i).is_zero() {
            continue;
        }
        let gf = MorphismMatrix::compose(&cat, &g.component(i), &pair.phi.component(i)).unwrap();
        comps.insert(i, MorphismMatrix::compose(&cat, &gf, &f.component(i)).unwrap());
    }
    let psi = ChainMapF::new(pair.a0.clone(), pair.a1.clone(), comps).unwrap();
    let witness = homotopy_square_equiv(&pair.phi, &psi).unwrap();
    assert!(witness.is_some(), "conjugated chain maps have isomorphic cones");
}

fn invertible_chain_endo(cat: &Arc<CTCategory>, c: &ComplexF, rng: &mut SplitMix64) -> ChainMapF {
    let space = chain_map_space(cat, c, c);
    loop {
        let coeffs: Vec<Rat> = (0..space.kernel.cols()).map(|_| rat_i(rng.int_in(4))).collect();
        if coeffs.iter().all(Rat::is_zero) {
            continue;
        }
        let f = chain_map_from_coords(cat, c, c, &space, &coeffs).unwrap();
        let invertible = c.support().iter().all(|&i| {
            let m = f.component(i).realize(cat);
            m.rows() == m.cols() && m.rank() == m.rows()
        });
        if invertible {
            return f;
        }
    }
}

#[test]
fn uniqueness_witness_for_every_nonprojective_end() {
    let cat = a5_cat();
    for start in 0..cat.label_count() {
        if cat.tau_next(start).is_none() {
            continue;
        }
        let cocycles = extension_cocycles(&cat, start).unwrap();
        let xi = &cocycles[0];
        let (s1, _) = base_sequence_from_cocycle(&cat, start, xi).unwrap();
        let (s2, _) = base_sequence_from_cocycle(&cat, start, &xi.scale(&rat_i(3))).unwrap();
        let p1 = extract_chain_map(&s1).unwrap();
        let p2 = extract_chain_map(&s2).unwrap();
        let w = homotopy_square_equiv(&p1.phi, &p2.phi).unwrap();
        assert!(w.is_some(), "no witness for sequences starting at {}", cat.label(start).name);
    }
}

#[test]
fn re_extraction_from_a_tensor_sequence() {
    // extracting the chain map back out of a two-fold sequence must agree
    // with the pair produced by the tensor step, up to cone isomorphism
    let a = a5_cat();
    let t2 = Arc::new(tensor_category(&a, &a).unwrap());
    let (c_seq, _) = build_base_sequence(&a, a.index_of("P2").unwrap()).unwrap();
    let (d_seq, _) = build_base_sequence(&a, a.index_of("P5").unwrap()).unwrap();
    let pa = extract_chain_map(&c_seq).unwrap();
    let pb = extract_chain_map(&d_seq).unwrap();
    let step = tensor_almost_split(&t2, &pa, &pb).unwrap();
    let re = extract_chain_map(&step.seq).unwrap();
    assert_eq!(re.start_slice, 0);
    assert!(re.phi.is_radical());
    // the stored iso certifies Cone(re.phi) ≅ E
    for m in re.iso.source.support() {
        let mat = re.iso.component(m).realize(&t2);
        assert_eq!(mat.rank(), mat.rows());
    }
    // and both chain maps have isomorphic cones (both are E)
    let w = homotopy_square_equiv(&re.phi, &step.pair.phi).unwrap();
    assert!(w.is_some());
}

#[test]
fn orbit_partition_covers_every_label_once() {
    let cat = a5_cat();
    let mut seen = vec![false; cat.label_count()];
    for s in 0..cat.label_count() {
        if cat.tau_prev(s).is_some() {
            continue;
        }
        // an orbit start must be projective (slice 0)
        assert_eq!(cat.slice(s), 0);
        let mut cur = s;
        loop {
            assert!(!seen[cur], "label visited twice");
            seen[cur] = true;
            match cat.tau_next(cur) {
                Some(next) => cur = next,
                None => break,
            }
        }
        // orbits end at the last slice
        assert_eq!(cat.slice(cur), cat.slice_count() - 1);
    }
    assert!(seen.iter().all(|&b| b));
}
