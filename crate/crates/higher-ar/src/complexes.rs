//! Bounded chain complexes of formal modules and chain maps between them.
//!
//! Degree conventions: the differential `d_i` maps the degree-`i` term to the
//! degree-`i-1` term, and finite exact sequences are read with the rightmost
//! nonzero term in degree 0. The shift is `A[m]_i = A_{i+m}` with
//! `d[m]_i = (-1)^m d_{i+m}`; the mapping cone of `f: A -> B` has
//! `Cone(f)_i = A_{i-1} ⊕ B_i` (A-part listed first) and differential
//! `[[-d^A, 0], [f, d^B]]`. The total tensor product carries the Koszul sign
//! `(-1)^j` on the second factor's differential, with degree-`j` summands
//! listed in descending `j`.

use crate::ctcat::{CTCategory, FormalModule, MorphismMatrix};
use crate::exactlin::{Rat, RatMatrix};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Coefficient-vector Kronecker product, matching the flat index convention
/// of tensor-category Hom bases.
pub fn kron_coeff(u: &[Rat], v: &[Rat]) -> Vec<Rat> {
    let mut w = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            w.push(a * b);
        }
    }
    w
}

/// A bounded complex of formal modules. Terms are stored only where nonzero;
/// `d_i ∘ d_{i+1} = 0` is checked exactly at construction.
#[derive(Clone, Debug)]
pub struct ComplexF {
    pub cat: Arc<CTCategory>,
    terms: BTreeMap<i64, FormalModule>,
    diffs: BTreeMap<i64, MorphismMatrix>,
}

impl PartialEq for ComplexF {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat) && self.terms == other.terms && self.diffs == other.diffs
    }
}

impl ComplexF {
    /// Build and validate a complex. Zero terms and zero differentials are
    /// normalized away.
    pub fn new(
        cat: Arc<CTCategory>,
        terms: BTreeMap<i64, FormalModule>,
        diffs: BTreeMap<i64, MorphismMatrix>,
    ) -> Result<Self> {
        let terms: BTreeMap<i64, FormalModule> =
            terms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let mut kept = BTreeMap::new();
        for (i, d) in diffs {
            let src = terms.get(&i);
            let tgt = terms.get(&(i - 1));
            match (src, tgt) {
                (Some(s), Some(t)) => {
                    if &d.source != s || &d.target != t {
                        return Err(Error::ShapeMismatch(format!(
                            "differential at degree {i} does not match its terms"
                        )));
                    }
                    kept.insert(i, d);
                }
                _ => {
                    if !d.is_zero() {
                        return Err(Error::ShapeMismatch(format!(
                            "nonzero differential at degree {i} with a zero endpoint"
                        )));
                    }
                }
            }
        }
        let c = ComplexF { cat, terms, diffs: kept };
        c.check_d_squared()?;
        Ok(c)
    }

    fn check_d_squared(&self) -> Result<()> {
        for (&i, d) in &self.diffs {
            if let Some(prev) = self.diffs.get(&(i - 1)) {
                let dd = MorphismMatrix::compose(&self.cat, prev, d)?;
                if !dd.is_zero() {
                    return Err(Error::ShapeMismatch(format!("d∘d ≠ 0 at degree {i}")));
                }
            }
        }
        Ok(())
    }

    /// Complex concentrated in a single degree.
    pub fn single(cat: Arc<CTCategory>, degree: i64, module: FormalModule) -> Self {
        let mut terms = BTreeMap::new();
        if !module.is_zero() {
            terms.insert(degree, module);
        }
        ComplexF { cat, terms, diffs: BTreeMap::new() }
    }

    pub fn zero(cat: Arc<CTCategory>) -> Self {
        ComplexF { cat, terms: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, i: i64) -> FormalModule {
        self.terms.get(&i).cloned().unwrap_or_else(FormalModule::zero)
    }

    pub fn diff(&self, i: i64) -> MorphismMatrix {
        self.diffs.get(&i).cloned().unwrap_or_else(|| {
            MorphismMatrix::zero(&self.cat, self.term(i), self.term(i - 1))
        })
    }

    pub fn support(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().last().copied()
    }

    /// All differentials radical.
    pub fn is_radical(&self) -> bool {
        self.diffs.values().all(|d| d.is_radical(&self.cat))
    }

    /// The shift `A[m]` with `d[m]_i = (-1)^m d_{i+m}`.
    pub fn shift(&self, m: i64) -> ComplexF {
        let terms: BTreeMap<i64, FormalModule> =
            self.terms.iter().map(|(&i, t)| (i - m, t.clone())).collect();
        let sign = if m.rem_euclid(2) == 0 { Rat::one() } else { -Rat::one() };
        let diffs: BTreeMap<i64, MorphismMatrix> =
            self.diffs.iter().map(|(&i, d)| (i - m, d.scale(&sign))).collect();
        ComplexF { cat: self.cat.clone(), terms, diffs }
    }

    /// Exactness of the realized complex.
    pub fn is_exact(&self) -> bool {
        self.realize().is_exact()
    }

    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        self.realize().homology_dims()
    }

    /// Expand to explicit matrices on total spaces.
    pub fn realize(&self) -> RealizedComplex {
        let dims: BTreeMap<i64, usize> = self
            .terms
            .iter()
            .map(|(&i, t)| (i, t.summands.iter().map(|&s| self.cat.realize_dim(s)).sum()))
            .collect();
        let mats: BTreeMap<i64, RatMatrix> =
            self.diffs.iter().map(|(&i, d)| (i, d.realize(&self.cat))).collect();
        RealizedComplex { dims, mats }
    }
}

/// A degreewise chain map between two complexes over the same category.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMapF {
    pub source: ComplexF,
    pub target: ComplexF,
    comps: BTreeMap<i64, MorphismMatrix>,
}

impl ChainMapF {
    /// Build and validate: components must match the terms and commute with
    /// the differentials.
    pub fn new(source: ComplexF, target: ComplexF, comps: BTreeMap<i64, MorphismMatrix>) -> Result<Self> {
        if !Arc::ptr_eq(&source.cat, &target.cat) {
            return Err(Error::ShapeMismatch("chain map across different categories".into()));
        }
        let comps: BTreeMap<i64, MorphismMatrix> = comps
            .into_iter()
            .filter(|(i, _)| !(source.term(*i).is_zero() || target.term(*i).is_zero()))
            .collect();
        for (&i, c) in &comps {
            if c.source != source.term(i) || c.target != target.term(i) {
                return Err(Error::ShapeMismatch(format!("chain map component at degree {i}")));
            }
        }
        let f = ChainMapF { source, target, comps };
        f.check_commutes()?;
        Ok(f)
    }

    fn check_commutes(&self) -> Result<()> {
        let cat = &self.source.cat;
        let degrees: Vec<i64> = self.source.support();
        for &i in &degrees {
            // d^T_i ∘ f_i = f_{i-1} ∘ d^S_i
            let lhs = MorphismMatrix::compose(cat, &self.target.diff(i), &self.component(i))?;
            let rhs = MorphismMatrix::compose(cat, &self.component(i - 1), &self.source.diff(i))?;
            if lhs != rhs {
                return Err(Error::ShapeMismatch(format!("chain map does not commute at degree {i}")));
            }
        }
        Ok(())
    }

    pub fn component(&self, i: i64) -> MorphismMatrix {
        self.comps.get(&i).cloned().unwrap_or_else(|| {
            MorphismMatrix::zero(&self.source.cat, self.source.term(i), self.target.term(i))
        })
    }

    pub fn components(&self) -> &BTreeMap<i64, MorphismMatrix> {
        &self.comps
    }

    pub fn identity(c: &ComplexF) -> ChainMapF {
        let comps: BTreeMap<i64, MorphismMatrix> = c
            .support()
            .into_iter()
            .map(|i| (i, MorphismMatrix::identity(&c.cat, &c.term(i))))
            .collect();
        ChainMapF { source: c.clone(), target: c.clone(), comps }
    }

    pub fn zero(source: &ComplexF, target: &ComplexF) -> ChainMapF {
        ChainMapF { source: source.clone(), target: target.clone(), comps: BTreeMap::new() }
    }

    /// Every component radical.
    pub fn is_radical(&self) -> bool {
        self.comps.values().all(|c| c.is_radical(&self.source.cat))
    }

    /// Quasi-isomorphism test via exactness of the mapping cone.
    pub fn is_quasi_iso(&self) -> bool {
        cone(self).is_exact()
    }
}

/// Mapping cone: `Cone(f)_i = A_{i-1} ⊕ B_i` with differential
/// `[[-d^A_{i-1}, 0], [f_{i-1}, d^B_i]]`.
pub fn cone(f: &ChainMapF) -> ComplexF {
    let cat = f.source.cat.clone();
    let a = &f.source;
    let b = &f.target;
    let mut degrees: Vec<i64> = Vec::new();
    for &i in a.terms.keys() {
        degrees.push(i + 1);
    }
    for &i in b.terms.keys() {
        degrees.push(i);
    }
    degrees.sort_unstable();
    degrees.dedup();
    let mut terms = BTreeMap::new();
    for &i in &degrees {
        let t = a.term(i - 1).concat(&b.term(i));
        if !t.is_zero() {
            terms.insert(i, t);
        }
    }
    let mut diffs = BTreeMap::new();
    for &i in &degrees {
        let src = match terms.get(&i) {
            Some(t) => t.clone(),
            None => continue,
        };
        let tgt = match terms.get(&(i - 1)) {
            Some(t) => t.clone(),
            None => continue,
        };
        let a_src = a.term(i - 1);
        let b_src = b.term(i);
        let a_tgt = a.term(i - 2);
        let b_tgt = b.term(i - 1);
        let da = a.diff(i - 1);
        let db = b.diff(i);
        let fc = f.component(i - 1);
        let mut d = MorphismMatrix::zero(&cat, src, tgt);
        // top-left: -d^A_{i-1}
        for t in 0..a_tgt.len() {
            for s in 0..a_src.len() {
                let blk: Vec<Rat> = da.block(t, s).iter().map(|x| -x.clone()).collect();
                d.set_block(t, s, blk);
            }
        }
        // bottom-left: f_{i-1}
        for t in 0..b_tgt.len() {
            for s in 0..a_src.len() {
                d.set_block(a_tgt.len() + t, s, fc.block(t, s).to_vec());
            }
        }
        // bottom-right: d^B_i
        for t in 0..b_tgt.len() {
            for s in 0..b_src.len() {
                d.set_block(a_tgt.len() + t, a_src.len() + s, db.block(t, s).to_vec());
            }
        }
        diffs.insert(i, d);
    }
    ComplexF::new(cat, terms, diffs).expect("mapping cone is a complex")
}

// Layout of one degree of a total tensor product: (j, source positions and
// labels of both factors, tensor label), in descending j.
struct TensorLayout {
    entries: Vec<(i64, usize, usize, usize)>, // (j, xpos, ypos, tensor label)
}

fn tensor_layout(cat_ab: &CTCategory, a: &ComplexF, b: &ComplexF, m: i64) -> Result<TensorLayout> {
    let mut entries = Vec::new();
    let degrees: Vec<i64> = a.support().into_iter().rev().collect(); // descending j
    for j in degrees {
        let bm = b.term(m - j);
        if bm.is_zero() {
            continue;
        }
        let am = a.term(j);
        for (xp, &xl) in am.summands.iter().enumerate() {
            for (yp, &yl) in bm.summands.iter().enumerate() {
                let Some(lbl) = cat_ab.pair_index(xl, yl) else {
                    return Err(Error::SliceMismatch(format!(
                        "no tensor label for {} ⊗ {} (slices {} and {})",
                        a.cat.label(xl).name,
                        b.cat.label(yl).name,
                        a.cat.slice(xl),
                        b.cat.slice(yl)
                    )));
                };
                entries.push((j, xp, yp, lbl));
            }
        }
    }
    Ok(TensorLayout { entries })
}

fn layout_module(layout: &TensorLayout) -> FormalModule {
    FormalModule { summands: layout.entries.iter().map(|e| e.3).collect() }
}

/// Total tensor product of complexes: degree `m` is `⊕_j A_j ⊗ B_{m-j}`
/// (descending `j`), the differential acts by `d^A ⊗ 1 + (-1)^j 1 ⊗ d^B`.
pub fn total_tensor(cat_ab: &Arc<CTCategory>, a: &ComplexF, b: &ComplexF) -> Result<ComplexF> {
    let (fl, fr) = cat_ab.factors().ok_or_else(|| {
        Error::ShapeMismatch("total_tensor target must be a tensor category".into())
    })?;
    if !Arc::ptr_eq(fl, &a.cat) || !Arc::ptr_eq(fr, &b.cat) {
        return Err(Error::ShapeMismatch("factor categories do not match the complexes".into()));
    }
    let (Some(amin), Some(amax), Some(bmin), Some(bmax)) =
        (a.min_degree(), a.max_degree(), b.min_degree(), b.max_degree())
    else {
        return Ok(ComplexF::zero(cat_ab.clone()));
    };
    let mut terms = BTreeMap::new();
    let mut layouts: BTreeMap<i64, TensorLayout> = BTreeMap::new();
    for m in (amin + bmin)..=(amax + bmax) {
        let layout = tensor_layout(cat_ab, a, b, m)?;
        let module = layout_module(&layout);
        if !module.is_zero() {
            terms.insert(m, module);
            layouts.insert(m, layout);
        }
    }
    let mut diffs = BTreeMap::new();
    for (&m, src_layout) in &layouts {
        let Some(tgt_layout) = layouts.get(&(m - 1)) else {
            continue;
        };
        let src_mod = terms.get(&m).unwrap().clone();
        let tgt_mod = terms.get(&(m - 1)).unwrap().clone();
        let mut d = MorphismMatrix::zero(cat_ab, src_mod, tgt_mod);
        for (spos, &(j, xp, yp, _)) in src_layout.entries.iter().enumerate() {
            let am = a.term(j);
            let bm = b.term(m - j);
            let xl = am.summands[xp];
            let yl = bm.summands[yp];
            // d^A ⊗ 1 into (j-1, *, yp)
            let da = a.diff(j);
            for (tpos, &(j2, xp2, yp2, _)) in tgt_layout.entries.iter().enumerate() {
                if j2 == j - 1 && yp2 == yp {
                    let blk = da.block(xp2, xp);
                    if blk.iter().all(Rat::is_zero) {
                        continue;
                    }
                    let coeff = kron_coeff(blk, b.cat.id_coeff(yl));
                    d.set_block(tpos, spos, coeff);
                }
            }
            // (-1)^j 1 ⊗ d^B into (j, xp, *)
            let db = b.diff(m - j);
            let sign = if j.rem_euclid(2) == 0 { Rat::one() } else { -Rat::one() };
            for (tpos, &(j2, xp2, yp2, _)) in tgt_layout.entries.iter().enumerate() {
                if j2 == j && xp2 == xp {
                    let blk = db.block(yp2, yp);
                    if blk.iter().all(Rat::is_zero) {
                        continue;
                    }
                    let coeff: Vec<Rat> =
                        kron_coeff(a.cat.id_coeff(xl), blk).into_iter().map(|v| &sign * v).collect();
                    d.set_block(tpos, spos, coeff);
                }
            }
        }
        diffs.insert(m, d);
    }
    ComplexF::new(cat_ab.clone(), terms, diffs)
}

/// Total tensor product of chain maps: `(φ ⊗ ψ)_m = ⊕_j φ_j ⊗ ψ_{m-j}`, with
/// no extra signs.
pub fn tensor_chain_map(cat_ab: &Arc<CTCategory>, f: &ChainMapF, g: &ChainMapF) -> Result<ChainMapF> {
    let source = total_tensor(cat_ab, &f.source, &g.source)?;
    let target = total_tensor(cat_ab, &f.target, &g.target)?;
    let mut comps = BTreeMap::new();
    for &m in &source.support() {
        let src_layout = tensor_layout(cat_ab, &f.source, &g.source, m)?;
        let tgt_layout = tensor_layout(cat_ab, &f.target, &g.target, m)?;
        if layout_module(&tgt_layout).is_zero() {
            continue;
        }
        let mut c = MorphismMatrix::zero(cat_ab, source.term(m), target.term(m));
        for (spos, &(j, xp, yp, _)) in src_layout.entries.iter().enumerate() {
            let fc = f.component(j);
            let gc = g.component(m - j);
            for (tpos, &(j2, xp2, yp2, _)) in tgt_layout.entries.iter().enumerate() {
                if j2 != j {
                    continue;
                }
                let fb = fc.block(xp2, xp);
                let gb = gc.block(yp2, yp);
                if fb.iter().all(Rat::is_zero) || gb.iter().all(Rat::is_zero) {
                    continue;
                }
                c.set_block(tpos, spos, kron_coeff(fb, gb));
            }
        }
        comps.insert(m, c);
    }
    ChainMapF::new(source, target, comps)
}

// ---------------------------------------------------------------------------
// realized (explicit) complexes
// ---------------------------------------------------------------------------

/// A complex of explicit rational matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizedComplex {
    pub dims: BTreeMap<i64, usize>,
    pub mats: BTreeMap<i64, RatMatrix>,
}

impl RealizedComplex {
    pub fn dim(&self, i: i64) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    pub fn mat(&self, i: i64) -> RatMatrix {
        self.mats
            .get(&i)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.dim(i - 1), self.dim(i)))
    }

    /// `h_i = dim_i - rank d_i - rank d_{i+1}` per degree with support.
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&i, &dim) in &self.dims {
            if dim == 0 {
                continue;
            }
            let r_out = self.mats.get(&i).map_or(0, RatMatrix::rank);
            let r_in = self.mats.get(&(i + 1)).map_or(0, RatMatrix::rank);
            let h = dim - r_out - r_in;
            if h > 0 {
                out.insert(i, h);
            }
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.homology_dims().is_empty()
    }

    /// Validate `d ∘ d = 0` (used on hand-assembled complexes).
    pub fn d_squared_is_zero(&self) -> bool {
        for (&i, d) in &self.mats {
            if let Some(prev) = self.mats.get(&(i - 1)) {
                if !prev.matmul(d).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// A chain map of realized complexes.
#[derive(Clone, Debug)]
pub struct RealizedChainMap {
    pub source: RealizedComplex,
    pub target: RealizedComplex,
    pub comps: BTreeMap<i64, RatMatrix>,
}

impl RealizedChainMap {
    pub fn comp(&self, i: i64) -> RatMatrix {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.target.dim(i), self.source.dim(i)))
    }

    pub fn commutes(&self) -> bool {
        let degrees: Vec<i64> = self
            .source
            .dims
            .keys()
            .chain(self.target.dims.keys())
            .copied()
            .collect();
        for i in degrees {
            let lhs = self.target.mat(i).matmul(&self.comp(i));
            let rhs = self.comp(i - 1).matmul(&self.source.mat(i));
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Mapping cone at the matrix level, same sign conventions as [`cone`].
    pub fn cone(&self) -> RealizedComplex {
        let mut degrees: Vec<i64> = self.source.dims.keys().map(|&i| i + 1).collect();
        degrees.extend(self.target.dims.keys().copied());
        degrees.sort_unstable();
        degrees.dedup();
        let mut dims = BTreeMap::new();
        for &i in &degrees {
            let d = self.source.dim(i - 1) + self.target.dim(i);
            if d > 0 {
                dims.insert(i, d);
            }
        }
        let mut mats = BTreeMap::new();
        for &i in &degrees {
            let (sa, sb) = (self.source.dim(i - 1), self.target.dim(i));
            let (ta, tb) = (self.source.dim(i - 2), self.target.dim(i - 1));
            if sa + sb == 0 || ta + tb == 0 {
                continue;
            }
            let mut m = RatMatrix::zeros(ta + tb, sa + sb);
            m.paste(0, 0, &self.source.mat(i - 1).neg());
            m.paste(ta, 0, &self.comp(i - 1));
            m.paste(ta, sa, &self.target.mat(i));
            mats.insert(i, m);
        }
        RealizedComplex { dims, mats }
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_exact()
    }
}

/// Realize a formal chain map.
pub fn realize_chain_map(f: &ChainMapF) -> RealizedChainMap {
    let cat = &f.source.cat;
    let source = f.source.realize();
    let target = f.target.realize();
    let comps: BTreeMap<i64, RatMatrix> = f
        .source
        .support()
        .into_iter()
        .filter(|&i| !f.target.term(i).is_zero())
        .map(|i| (i, f.component(i).realize(cat)))
        .collect();
    RealizedChainMap { source, target, comps }
}
