//! Acceptance suite: one test per criterion, each printing a pass line and
//! asserting its runtime budget. All comparisons are exact; there is no
//! numerical tolerance anywhere.

use higher_ar::almostsplit::{
    base_sequence_from_cocycle, build_base_sequence, extension_cocycles, extract_chain_map,
    homotopy_square_equiv, tensor_almost_split, verify_almost_split, verify_parts,
};
use higher_ar::complexes::{cone, ComplexF};
use higher_ar::ctcat::{knit, tensor_category, CTCategory, MorphismMatrix};
use higher_ar::exactlin::rat_i;
use higher_ar::oracle;
use higher_ar::quiver::QuiverSpec;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

fn a5() -> Arc<QuiverSpec> {
    Arc::new(QuiverSpec::new("a5", 5, vec![(0, 1), (1, 2), (3, 2), (4, 3)]).unwrap())
}

fn a5_cat() -> Arc<CTCategory> {
    Arc::new(knit(&a5()).unwrap())
}

fn budget(name: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assert!(elapsed < limit, "{name} took {elapsed:?}, budget {limit:?}");
    println!("{name}: PASS ({elapsed:?})");
}

#[test]
fn criterion_1_indecomposable_table() {
    let start = Instant::now();
    let path = std::env::temp_dir().join("har_acceptance_a5.q");
    std::fs::write(&path, a5().print()).unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_har"))
        .arg("indecs")
        .arg(&path)
        .output()
        .expect("run har indecs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let expected = [
        ("P1", "(11100)"),
        ("P2", "(01100)"),
        ("P3", "(00100)"),
        ("P4", "(00110)"),
        ("P5", "(00111)"),
        ("M1", "(01111)"),
        ("M2", "(01000)"),
        ("M3", "(01110)"),
        ("M4", "(00010)"),
        ("M5", "(11110)"),
        ("I1", "(10000)"),
        ("I2", "(11000)"),
        ("I3", "(11111)"),
        ("I4", "(00011)"),
        ("I5", "(00001)"),
    ];
    let rows: Vec<&str> = text.lines().filter(|l| l.contains("slice")).collect();
    assert_eq!(rows.len(), 15, "exactly 15 labels");
    for (name, dims) in expected {
        assert!(
            rows.iter().any(|r| r.starts_with(name) && r.ends_with(dims)),
            "missing row {name} {dims} in:\n{text}"
        );
    }
    budget("criterion 1 (indecomposables)", start, Duration::from_secs(1));
}

#[test]
fn criterion_2_homogeneity() {
    let start = Instant::now();
    let cat = a5_cat();
    assert_eq!(cat.homogeneity(), Some(3));
    assert_eq!(cat.slice_count(), 3);
    for s in 0..3 {
        assert_eq!(cat.slice_members(s).len(), 5, "slice {s} has five labels");
    }
    budget("criterion 2 (homogeneity l = 3)", start, Duration::from_secs(1));
}

#[test]
fn criterion_3_base_sequences() {
    let start = Instant::now();
    let cat = a5_cat();
    let p2 = cat.index_of("P2").unwrap();
    let (c_seq, c_report) = build_base_sequence(&cat, p2).unwrap();
    assert!(c_report.pass());
    assert_eq!(term_names(&cat, &c_seq.complex), vec!["P2", "P1 ⊕ M3", "M5"]);
    let p5 = cat.index_of("P5").unwrap();
    let (d_seq, d_report) = build_base_sequence(&cat, p5).unwrap();
    assert!(d_report.pass());
    assert_eq!(term_names(&cat, &d_seq.complex), vec!["P5", "M1", "M2"]);
    budget("criterion 3 (base sequences C and D)", start, Duration::from_secs(5));
}

fn term_names(cat: &CTCategory, c: &ComplexF) -> Vec<String> {
    c.support().into_iter().rev().map(|i| c.term(i).name(cat)).collect()
}

#[test]
fn criterion_4_twofold_tensor() {
    let start = Instant::now();
    let a = a5_cat();
    let t2 = Arc::new(tensor_category(&a, &a).unwrap());
    let (c_seq, _) = build_base_sequence(&a, a.index_of("P2").unwrap()).unwrap();
    let (d_seq, _) = build_base_sequence(&a, a.index_of("P5").unwrap()).unwrap();
    let pa = extract_chain_map(&c_seq).unwrap();
    let pb = extract_chain_map(&d_seq).unwrap();
    let step = tensor_almost_split(&t2, &pa, &pb).unwrap();
    assert!(step.report.pass());
    assert_eq!(step.report.checked_labels, 75);
    assert_eq!(
        term_names(&t2, &step.seq.complex),
        vec!["P2⊗P5", "P1⊗P5 ⊕ M3⊗M1", "M3⊗M2 ⊕ M5⊗M1", "M5⊗M2"]
    );
    // block support of the differentials: exactly one corner of d2 vanishes
    let d3 = step.seq.complex.diff(3);
    assert!(block_nonzero(&d3, 0, 0)); // P1⊗P5   <- P2⊗P5
    assert!(block_nonzero(&d3, 1, 0)); // M3⊗M1   <- P2⊗P5
    let d2 = step.seq.complex.diff(2);
    assert!(!block_nonzero(&d2, 0, 0)); // M3⊗M2 <- P1⊗P5 is the zero block
    assert!(block_nonzero(&d2, 0, 1)); // M3⊗M2   <- M3⊗M1
    assert!(block_nonzero(&d2, 1, 0)); // M5⊗M1   <- P1⊗P5
    assert!(block_nonzero(&d2, 1, 1)); // M5⊗M1   <- M3⊗M1
    let d1 = step.seq.complex.diff(1);
    assert!(block_nonzero(&d1, 0, 0)); // M5⊗M2   <- M3⊗M2
    assert!(block_nonzero(&d1, 0, 1)); // M5⊗M2   <- M5⊗M1
    budget("criterion 4 (two-fold tensor E)", start, Duration::from_secs(60));
}

fn block_nonzero(m: &MorphismMatrix, t: usize, s: usize) -> bool {
    m.block(t, s).iter().any(|v| !v.is_zero())
}

#[test]
fn criterion_5_threefold_tensor() {
    let start = Instant::now();
    let a = a5_cat();
    let t2 = Arc::new(tensor_category(&a, &a).unwrap());
    let t3 = Arc::new(tensor_category(&t2, &a).unwrap());
    assert_eq!(t3.label_count(), 375);
    let (c_seq, _) = build_base_sequence(&a, a.index_of("P2").unwrap()).unwrap();
    let (d_seq, _) = build_base_sequence(&a, a.index_of("P5").unwrap()).unwrap();
    let (e_seq, _) = build_base_sequence(&a, a.index_of("P4").unwrap()).unwrap();
    assert_eq!(term_names(&a, &e_seq.complex), vec!["P4", "P5 ⊕ M3", "M1"]);
    let pa = extract_chain_map(&c_seq).unwrap();
    let pb = extract_chain_map(&d_seq).unwrap();
    let pc = extract_chain_map(&e_seq).unwrap();
    let step2 = tensor_almost_split(&t2, &pa, &pb).unwrap();
    let step3 = tensor_almost_split(&t3, &step2.pair, &pc).unwrap();
    assert!(step3.report.pass());
    assert_eq!(step3.report.checked_labels, 375);
    // expected label multisets per degree
    let expect: Vec<(i64, Vec<&str>)> = vec![
        (4, vec!["P2⊗P5⊗P4"]),
        (3, vec!["P1⊗P5⊗P4", "P2⊗P5⊗P5", "M3⊗M1⊗M3"]),
        (2, vec!["P1⊗P5⊗P5", "M5⊗M1⊗M3", "M3⊗M1⊗M1", "M3⊗M2⊗M3"]),
        (1, vec!["M5⊗M1⊗M1", "M5⊗M2⊗M3", "M3⊗M2⊗M1"]),
        (0, vec!["M5⊗M2⊗M1"]),
    ];
    for (deg, mut names) in expect {
        let term = step3.seq.complex.term(deg);
        let mut got: Vec<String> =
            term.summands.iter().map(|&i| t3.label(i).name.clone()).collect();
        got.sort();
        names.sort();
        assert_eq!(got, names, "degree {deg} multiset");
    }
    budget("criterion 5 (three-fold tensor)", start, Duration::from_secs(600));
}

#[test]
fn criterion_6_criterion_equivalence_and_mutations() {
    let start = Instant::now();
    let cat = a5_cat();
    // every noninjective label: the cone of the extracted map re-verifies
    let mut count = 0;
    for i in 0..cat.label_count() {
        if cat.tau_next(i).is_none() {
            continue;
        }
        count += 1;
        let (seq, _) = build_base_sequence(&cat, i).unwrap();
        let pair = extract_chain_map(&seq).unwrap();
        let cn = cone(&pair.phi);
        let report = verify_almost_split(&cat, &cn);
        assert!(report.pass(), "cone verification fails for start {}", cat.label(i).name);
    }
    assert_eq!(count, 10, "ten noninjective labels");

    // twenty mutated sequences must all fail verification
    let a = a5_cat();
    let t2 = Arc::new(tensor_category(&a, &a).unwrap());
    let (c_seq, _) = build_base_sequence(&a, a.index_of("P2").unwrap()).unwrap();
    let (d_seq, _) = build_base_sequence(&a, a.index_of("P5").unwrap()).unwrap();
    let pa = extract_chain_map(&c_seq).unwrap();
    let pb = extract_chain_map(&d_seq).unwrap();
    let e_step = tensor_almost_split(&t2, &pa, &pb).unwrap();

    let mut mutations: Vec<(String, Arc<CTCategory>, ComplexF, i64, usize, usize, bool)> = Vec::new();
    let mut add = |tag: &str, cat: &Arc<CTCategory>, c: &ComplexF, zero: bool| {
        for i in c.support() {
            if c.term(i - 1).is_zero() {
                continue;
            }
            let d = c.diff(i);
            for t in 0..d.target.len() {
                for s in 0..d.source.len() {
                    if block_nonzero(&d, t, s) {
                        mutations.push((tag.to_string(), cat.clone(), c.clone(), i, t, s, zero));
                    }
                }
            }
        }
    };
    add("C zero", &a, &c_seq.complex, true); // 4 blocks
    add("C scale", &a, &c_seq.complex, false); // 4 blocks
    add("D zero", &a, &d_seq.complex, true); // 2 blocks
    add("E zero", &t2, &e_step.seq.complex, true); // 7 blocks
    add("E scale", &t2, &e_step.seq.complex, false); // first 3 used
    let selected: Vec<_> = mutations.into_iter().take(20).collect();
    assert_eq!(selected.len(), 20);
    for (tag, cat, c, deg, t, s, zero) in selected {
        let mut terms = BTreeMap::new();
        for i in c.support() {
            terms.insert(i, c.term(i));
        }
        let mut diffs = BTreeMap::new();
        for i in c.support() {
            if c.term(i - 1).is_zero() {
                continue;
            }
            let mut d = c.diff(i);
            if i == deg {
                let blk = d.block(t, s).to_vec();
                let new = if zero {
                    vec![rat_i(0); blk.len()]
                } else {
                    blk.iter().map(|v| v.clone() * rat_i(2)).collect()
                };
                d.set_block(t, s, new);
            }
            diffs.insert(i, d);
        }
        let report = verify_parts(&cat, terms, diffs);
        assert!(!report.pass(), "mutation `{tag}` at degree {deg} block ({t},{s}) must fail");
    }
    budget("criterion 6 (equivalence + 20 mutations)", start, Duration::from_secs(120));
}

#[test]
fn criterion_7_oracle_agreement() {
    let start = Instant::now();
    let base = a5_cat();
    let t2 = Arc::new(tensor_category(&base, &base).unwrap());
    let (checked, mismatches) = oracle::hom_agreement_suite(&base, &t2, 25, 0xA11CE);
    assert_eq!((checked, mismatches), (25, 0), "hom dimension agreement");
    let (checked, failures) = oracle::rad_formula_suite(&base, 10, 0xB0B);
    assert_eq!((checked, failures), (10, 0), "radical product formula");
    let (checked, failures) = oracle::kunneth_suite(&base, &t2, 100, 0xC0FFEE);
    assert_eq!((checked, failures), (100, 0), "Künneth convolution");
    budget("criterion 7 (oracle agreement)", start, Duration::from_secs(300));
}

#[test]
fn criterion_8_slice_vanishing_and_cone_laws() {
    let start = Instant::now();
    let base = a5_cat();
    let t2 = Arc::new(tensor_category(&base, &base).unwrap());
    assert!(oracle::slice_vanishing_scan(&base));
    assert!(oracle::slice_vanishing_scan(&t2));
    let (trues, falses, disagreements) = oracle::cone_law_suite(&base, 50, 0xD1CE);
    assert_eq!(disagreements, 0, "cone exactness must agree with the homology route");
    assert!(trues > 0 && falses > 0, "both truth values exercised ({trues} / {falses})");
    budget("criterion 8 (slice vanishing + cone laws)", start, Duration::from_secs(120));
}

#[test]
fn criterion_9_uniqueness_via_homotopy_witness() {
    let start = Instant::now();
    let cat = a5_cat();
    let p2 = cat.index_of("P2").unwrap();
    let m5 = cat.index_of("M5").unwrap();
    // two independently constructed sequences ending at M5, from different
    // extension-basis choices
    let cocycles = extension_cocycles(&cat, p2).unwrap();
    let xi = &cocycles[0];
    let (seq1, _) = base_sequence_from_cocycle(&cat, p2, xi).unwrap();
    let (seq2, _) = base_sequence_from_cocycle(&cat, p2, &xi.scale(&rat_i(2))).unwrap();
    assert_eq!(seq1.end_label, m5);
    assert_eq!(seq2.end_label, m5);
    let pa = extract_chain_map(&seq1).unwrap();
    let pb = extract_chain_map(&seq2).unwrap();
    let witness = homotopy_square_equiv(&pa.phi, &pb.phi).unwrap();
    let w = witness.expect("sequences with the same end term admit a witness");
    // the witness isomorphisms really are isomorphisms of complexes
    for m in pa.a0.support() {
        let mat = w.f.component(m).realize(&cat);
        assert_eq!(mat.rank(), mat.rows());
    }
    for m in pa.a1.support() {
        let mat = w.g.component(m).realize(&cat);
        assert_eq!(mat.rank(), mat.rows());
    }
    budget("criterion 9 (uniqueness witness)", start, Duration::from_secs(120));
}
