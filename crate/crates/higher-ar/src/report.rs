//! Deterministic sequence reports and the re-verifiable sequence file format.
//!
//! A sequence file is self-describing: it embeds the factor quivers, the
//! parameter `n`, the per-degree label lists and every nonzero differential
//! block as exact rationals. `verify_sequence_file` re-knits the categories
//! from the embedded quivers and re-runs the full verifier without any state
//! from the original construction.

use crate::almostsplit::{verify_parts, VerificationReport};
use crate::complexes::ComplexF;
use crate::ctcat::{knit, tensor_category, CTCategory, FormalModule, MorphismMatrix};
use crate::exactlin::{format_rat, parse_rat, Rat};
use crate::quiver::QuiverSpec;
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// One line per degree, highest first: `deg i: labels ; d = [blocks]`.
pub fn print_sequence(cat: &CTCategory, c: &ComplexF) -> String {
    let mut out = String::new();
    for &i in c.support().iter().rev() {
        let term = c.term(i);
        if c.term(i - 1).is_zero() {
            out.push_str(&format!("deg {i}: {}\n", term.name(cat)));
        } else {
            out.push_str(&format!("deg {i}: {} ; d = {}\n", term.name(cat), c.diff(i).render()));
        }
    }
    out
}

/// Split a (possibly tensor) label into its factor names; accepts the ASCII
/// fallback `(x)` for the tensor sign.
pub fn split_label(name: &str) -> Vec<String> {
    name.replace("(x)", "⊗").split('⊗').map(str::to_string).collect()
}

/// Knit the factor quivers and fold them left-associatively into one
/// cluster-tilting category.
pub fn fold_categories(quivers: &[Arc<QuiverSpec>]) -> Result<(Vec<Arc<CTCategory>>, Arc<CTCategory>)> {
    assert!(!quivers.is_empty());
    let factors: Vec<Arc<CTCategory>> = quivers
        .iter()
        .map(|q| knit(q).map(Arc::new))
        .collect::<Result<_>>()?;
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = Arc::new(tensor_category(&acc, f)?);
    }
    Ok((factors, acc))
}

/// Serialize a verified sequence with its provenance (factor quivers) so it
/// can be re-verified from the file alone.
pub fn write_sequence_file(
    quivers: &[Arc<QuiverSpec>],
    cat: &CTCategory,
    c: &ComplexF,
    report: &VerificationReport,
) -> String {
    let mut out = String::new();
    out.push_str("# almost split sequence file, format v1\n");
    out.push_str(&format!("factors = {}\n", quivers.len()));
    for (i, q) in quivers.iter().enumerate() {
        out.push_str(&format!("quiver {} {{\n", i + 1));
        out.push_str(&q.print());
        out.push_str("}\n");
    }
    out.push_str(&format!("n = {}\n", cat.n()));
    if let Some(top) = c.max_degree() {
        let start = c.term(top);
        if start.len() == 1 {
            out.push_str(&format!("start = {}\n", cat.label(start.summands[0]).name));
        }
    }
    for &i in c.support().iter().rev() {
        out.push_str(&format!("deg {i}: {}\n", c.term(i).name(cat)));
    }
    for &i in c.support().iter().rev() {
        if c.term(i - 1).is_zero() {
            continue;
        }
        let d = c.diff(i);
        for t in 0..d.target.len() {
            for s in 0..d.source.len() {
                let blk = d.block(t, s);
                if blk.is_empty() || blk.iter().all(Rat::is_zero) {
                    continue;
                }
                let coeffs: Vec<String> = blk.iter().map(format_rat).collect();
                out.push_str(&format!("d {i} [{t},{s}] = {}\n", coeffs.join(" ")));
            }
        }
    }
    out.push_str("# verification\n");
    for line in report.to_string().lines() {
        out.push_str(&format!("# {line}\n"));
    }
    out
}

/// A parsed sequence file, with the categories re-knitted from the embedded
/// quivers.
pub struct ParsedSequence {
    pub quivers: Vec<Arc<QuiverSpec>>,
    pub factors: Vec<Arc<CTCategory>>,
    pub cat: Arc<CTCategory>,
    pub terms: BTreeMap<i64, FormalModule>,
    pub diffs: BTreeMap<i64, MorphismMatrix>,
    pub declared_n: usize,
}

pub fn parse_sequence_file(text: &str) -> Result<ParsedSequence> {
    let mut lines = text.lines().enumerate().peekable();
    let mut factor_count: Option<usize> = None;
    let mut quivers: Vec<Arc<QuiverSpec>> = Vec::new();
    let mut declared_n: Option<usize> = None;
    let mut term_lines: Vec<(i64, Vec<String>)> = Vec::new();
    let mut block_lines: Vec<(i64, usize, usize, Vec<Rat>)> = Vec::new();
    while let Some((no, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("line {}: {msg}", no + 1));
        if let Some(rest) = line.strip_prefix("factors") {
            let n: usize = rest
                .trim_start()
                .strip_prefix('=')
                .ok_or_else(|| err("expected `factors = K`"))?
                .trim()
                .parse()
                .map_err(|_| err("bad factor count"))?;
            factor_count = Some(n);
        } else if let Some(rest) = line.strip_prefix("quiver") {
            if !rest.trim_end().ends_with('{') {
                return Err(err("expected `quiver <i> {`"));
            }
            let mut body = String::new();
            loop {
                let Some((_, raw2)) = lines.next() else {
                    return Err(Error::Parse(format!("line {}: unterminated quiver block", no + 1)));
                };
                if raw2.trim() == "}" {
                    break;
                }
                body.push_str(raw2);
                body.push('\n');
            }
            let idx = quivers.len() + 1;
            quivers.push(Arc::new(QuiverSpec::parse(&format!("factor{idx}"), &body)?));
        } else if let Some(rest) = line.strip_prefix("n =") {
            declared_n = Some(rest.trim().parse().map_err(|_| err("bad n"))?);
        } else if line.starts_with("start =") {
            // informational
        } else if let Some(rest) = line.strip_prefix("deg") {
            let (deg_s, labels_s) = rest.split_once(':').ok_or_else(|| err("expected `deg i: labels`"))?;
            let deg: i64 = deg_s.trim().parse().map_err(|_| err("bad degree"))?;
            let labels: Vec<String> = labels_s.split('⊕').map(|s| s.trim().to_string()).collect();
            term_lines.push((deg, labels));
        } else if let Some(rest) = line.strip_prefix("d ") {
            // d <i> [t,s] = coeffs
            let (head, coeffs_s) = rest.split_once('=').ok_or_else(|| err("expected `d i [t,s] = ...`"))?;
            let head = head.trim();
            let (deg_s, idx_s) = head.split_once('[').ok_or_else(|| err("missing block index"))?;
            let deg: i64 = deg_s.trim().parse().map_err(|_| err("bad degree"))?;
            let idx_s = idx_s.trim_end_matches(']');
            let (t_s, s_s) = idx_s.split_once(',').ok_or_else(|| err("bad block index"))?;
            let t: usize = t_s.trim().parse().map_err(|_| err("bad block row"))?;
            let s: usize = s_s.trim().parse().map_err(|_| err("bad block column"))?;
            let coeffs: Vec<Rat> = coeffs_s
                .split_whitespace()
                .map(|w| parse_rat(w).ok_or_else(|| err(&format!("bad rational `{w}`"))))
                .collect::<Result<_>>()?;
            block_lines.push((deg, t, s, coeffs));
        } else {
            return Err(err(&format!("unrecognized line `{line}`")));
        }
    }
    let Some(k) = factor_count else {
        return Err(Error::Parse("missing `factors = K` line".into()));
    };
    if quivers.len() != k || k == 0 {
        return Err(Error::Parse(format!("expected {k} quiver blocks, found {}", quivers.len())));
    }
    let declared_n = declared_n.ok_or_else(|| Error::Parse("missing `n = ...` line".into()))?;
    let (factors, cat) = fold_categories(&quivers)?;

    let mut terms: BTreeMap<i64, FormalModule> = BTreeMap::new();
    for (deg, labels) in term_lines {
        let mut summands = Vec::with_capacity(labels.len());
        for name in &labels {
            let idx = cat
                .index_of(name)
                .or_else(|| cat.index_of(&name.replace("(x)", "⊗")))
                .ok_or_else(|| Error::UnknownLabel(name.clone()))?;
            summands.push(idx);
        }
        terms.insert(deg, FormalModule { summands });
    }
    let mut diffs: BTreeMap<i64, MorphismMatrix> = BTreeMap::new();
    for (deg, t, s, coeffs) in block_lines {
        let (Some(src), Some(tgt)) = (terms.get(&deg), terms.get(&(deg - 1))) else {
            return Err(Error::Parse(format!("differential at degree {deg} without terms")));
        };
        let d = diffs
            .entry(deg)
            .or_insert_with(|| MorphismMatrix::zero(&cat, src.clone(), tgt.clone()));
        if t >= tgt.len() || s >= src.len() {
            return Err(Error::Parse(format!("block index [{t},{s}] out of range at degree {deg}")));
        }
        if coeffs.len() != cat.hom_dim(src.summands[s], tgt.summands[t]) {
            return Err(Error::Parse(format!(
                "block [{t},{s}] at degree {deg} has {} coefficients, Hom has dimension {}",
                coeffs.len(),
                cat.hom_dim(src.summands[s], tgt.summands[t])
            )));
        }
        d.set_block(t, s, coeffs);
    }
    Ok(ParsedSequence { quivers, factors, cat, terms, diffs, declared_n })
}

/// Re-verify a printed sequence file from scratch.
pub fn verify_sequence_file(text: &str) -> Result<(ParsedSequence, VerificationReport)> {
    let parsed = parse_sequence_file(text)?;
    if parsed.declared_n != parsed.cat.n() {
        return Err(Error::Parse(format!(
            "file declares n = {} but the folded category has n = {}",
            parsed.declared_n,
            parsed.cat.n()
        )));
    }
    let report = verify_parts(&parsed.cat, parsed.terms.clone(), parsed.diffs.clone());
    Ok((parsed, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::almostsplit::{build_base_sequence, extract_chain_map, tensor_almost_split};

    fn a5() -> Arc<QuiverSpec> {
        Arc::new(QuiverSpec::new("a5", 5, vec![(0, 1), (1, 2), (3, 2), (4, 3)]).unwrap())
    }

    #[test]
    fn base_sequence_roundtrip() {
        let q = a5();
        let (_, cat) = fold_categories(&[q.clone()]).unwrap();
        let p2 = cat.index_of("P2").unwrap();
        let (seq, report) = build_base_sequence(&cat, p2).unwrap();
        let text = write_sequence_file(&[q], &cat, &seq.complex, &report);
        let (parsed, report2) = verify_sequence_file(&text).unwrap();
        assert!(report2.pass());
        assert_eq!(parsed.declared_n, 1);
        // deterministic writer
        let text2 = write_sequence_file(&parsed.quivers, &parsed.cat, &{
            ComplexF::new(parsed.cat.clone(), parsed.terms.clone(), parsed.diffs.clone()).unwrap()
        }, &report2);
        assert_eq!(text, text2);
    }

    #[test]
    fn tensor_sequence_roundtrip_and_tamper_detection() {
        let q = a5();
        let (factors, cat) = fold_categories(&[q.clone(), q.clone()]).unwrap();
        let p2 = factors[0].index_of("P2").unwrap();
        let p5 = factors[1].index_of("P5").unwrap();
        let (c_seq, _) = build_base_sequence(&factors[0], p2).unwrap();
        let (d_seq, _) = build_base_sequence(&factors[1], p5).unwrap();
        let pa = extract_chain_map(&c_seq).unwrap();
        let pb = extract_chain_map(&d_seq).unwrap();
        let step = tensor_almost_split(&cat, &pa, &pb).unwrap();
        let text = write_sequence_file(&[q.clone(), q], &cat, &step.seq.complex, &step.report);
        let (_, report) = verify_sequence_file(&text).unwrap();
        assert!(report.pass());
        // tampering with a coefficient must be caught by re-verification
        let tampered = text.replace("d 3 [0,0] = 1", "d 3 [0,0] = 2");
        assert_ne!(tampered, text);
        let (_, bad) = verify_sequence_file(&tampered).unwrap();
        assert!(!bad.pass());
    }

    #[test]
    fn label_splitting() {
        assert_eq!(split_label("P2⊗P5⊗P4"), vec!["P2", "P5", "P4"]);
        assert_eq!(split_label("P2(x)P5"), vec!["P2", "P5"]);
        assert_eq!(split_label("M13"), vec!["M13"]);
    }

    #[test]
    fn print_sequence_shape() {
        let q = a5();
        let (_, cat) = fold_categories(&[q]).unwrap();
        let p2 = cat.index_of("P2").unwrap();
        let (seq, _) = build_base_sequence(&cat, p2).unwrap();
        let text = print_sequence(&cat, &seq.complex);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("deg 2: P2 ; d = "));
        assert!(lines[2].starts_with("deg 0: M5"));
    }
}
