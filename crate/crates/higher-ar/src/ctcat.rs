//! Cluster-tilting categories presented additively.
//!
//! A [`CTCategory`] is a finite list of labeled indecomposables with cached
//! Hom dimensions, radical subspaces, composition data, slices and the
//! τ-structure. Base categories are knitted from a representation-finite
//! quiver; tensor categories are built from two factors, with Hom bases given
//! by products of factor bases and composition evaluated factorwise.
//!
//! Formal direct sums ([`FormalModule`]) and block matrices over the cached
//! Hom bases ([`MorphismMatrix`]) are the ambient linear algebra for the
//! complex machinery upstream.

use crate::exactlin::{format_rat, Rat, RatMatrix};
use crate::quiver::{self, hom_basis, knit_catalogue, QuiverSpec, RepMorphism, Representation};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Symbolic name of an indecomposable object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndLabel {
    pub name: String,
    pub slice: usize,
    /// Base-label names of the tensor factors; empty for base labels.
    pub factors: Vec<String>,
}

enum CatKind {
    Base {
        quiver: Arc<QuiverSpec>,
        reps: Vec<Representation>,
        hom_bases: Vec<Vec<RepMorphism>>,
        comp: HashMap<(usize, usize, usize), Vec<Vec<Vec<Rat>>>>,
    },
    Tensor {
        left: Arc<CTCategory>,
        right: Arc<CTCategory>,
        factor_of: Vec<(usize, usize)>,
        pair_index: HashMap<(usize, usize), usize>,
    },
}

/// A cluster-tilting category: labels, slices, τ-structure and cached
/// Hom/rad/composition data. Immutable after construction.
pub struct CTCategory {
    n: usize,
    l: Option<usize>,
    labels: Vec<IndLabel>,
    name_index: HashMap<String, usize>,
    slice_members: Vec<Vec<usize>>,
    tau_next: Vec<Option<usize>>,
    tau_prev: Vec<Option<usize>>,
    hom_dims: Vec<usize>,
    /// Canonical echelon rows of `rad(a, a)` in the Hom basis of `(a, a)`.
    rad_rows: Vec<RatMatrix>,
    id_coeffs: Vec<Vec<Rat>>,
    kind: CatKind,
}

impl CTCategory {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Common τ-orbit length, when all orbits agree.
    pub fn homogeneity(&self) -> Option<usize> {
        self.l
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &IndLabel {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[IndLabel] {
        &self.labels
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    pub fn slice(&self, i: usize) -> usize {
        self.labels[i].slice
    }

    pub fn slice_count(&self) -> usize {
        self.slice_members.len()
    }

    pub fn slice_members(&self, s: usize) -> &[usize] {
        &self.slice_members[s]
    }

    pub fn tau_next(&self, i: usize) -> Option<usize> {
        self.tau_next[i]
    }

    pub fn tau_prev(&self, i: usize) -> Option<usize> {
        self.tau_prev[i]
    }

    pub fn hom_dim(&self, a: usize, b: usize) -> usize {
        self.hom_dims[a * self.labels.len() + b]
    }

    /// Radical dimension of the Hom space; full for distinct labels.
    pub fn rad_dim(&self, a: usize, b: usize) -> usize {
        if a == b {
            self.rad_rows[a].rows()
        } else {
            self.hom_dim(a, b)
        }
    }

    /// Basis vectors of `rad(a, b)` in Hom coordinates.
    pub fn rad_basis_coeffs(&self, a: usize, b: usize) -> Vec<Vec<Rat>> {
        if a != b {
            let d = self.hom_dim(a, b);
            (0..d)
                .map(|k| {
                    let mut v = vec![Rat::zero(); d];
                    v[k] = Rat::one();
                    v
                })
                .collect()
        } else {
            (0..self.rad_rows[a].rows()).map(|r| self.rad_rows[a].row(r).to_vec()).collect()
        }
    }

    /// Whether a coefficient vector in `Hom(a, b)` lies in the radical.
    pub fn is_rad_coeff(&self, a: usize, b: usize, coeff: &[Rat]) -> bool {
        if a != b {
            return true;
        }
        if coeff.iter().all(Rat::is_zero) {
            return true;
        }
        RatMatrix::reduce_row_against(&self.rad_rows[a], coeff).iter().all(Rat::is_zero)
    }

    /// Express a Hom-coordinate vector in radical coordinates, or `None` if
    /// it does not lie in the radical.
    pub fn to_rad_coords(&self, a: usize, b: usize, coeff: &[Rat]) -> Option<Vec<Rat>> {
        if a != b {
            return Some(coeff.to_vec());
        }
        let rows = &self.rad_rows[a];
        if rows.rows() == 0 {
            return coeff.iter().all(Rat::is_zero).then(Vec::new);
        }
        let mat = rows.transpose();
        let b_col = RatMatrix::from_fn(coeff.len(), 1, |r, _| coeff[r].clone());
        let x = mat.solve(&b_col)?;
        Some((0..rows.rows()).map(|r| x.at(r, 0).clone()).collect())
    }

    /// Coordinates of the identity in `Hom(a, a)`.
    pub fn id_coeff(&self, a: usize) -> &[Rat] {
        &self.id_coeffs[a]
    }

    /// Composite `g ∘ f` in Hom coordinates, for `f ∈ Hom(a, b)` and
    /// `g ∈ Hom(b, c)`.
    pub fn compose_coeff(&self, a: usize, b: usize, c: usize, f: &[Rat], g: &[Rat]) -> Vec<Rat> {
        debug_assert_eq!(f.len(), self.hom_dim(a, b));
        debug_assert_eq!(g.len(), self.hom_dim(b, c));
        let out_dim = self.hom_dim(a, c);
        let mut out = vec![Rat::zero(); out_dim];
        if out_dim == 0 || f.iter().all(Rat::is_zero) || g.iter().all(Rat::is_zero) {
            return out;
        }
        match &self.kind {
            CatKind::Base { comp, .. } => {
                let Some(table) = comp.get(&(a, b, c)) else {
                    return out;
                };
                for (j, grow) in table.iter().enumerate() {
                    if g[j].is_zero() {
                        continue;
                    }
                    for (i, entry) in grow.iter().enumerate() {
                        if f[i].is_zero() {
                            continue;
                        }
                        let w = &f[i] * &g[j];
                        for (k, coef) in entry.iter().enumerate() {
                            if !coef.is_zero() {
                                out[k] += &w * coef;
                            }
                        }
                    }
                }
                out
            }
            CatKind::Tensor { left, right, factor_of, .. } => {
                let (al, ar) = factor_of[a];
                let (bl, br) = factor_of[b];
                let (cl, cr) = factor_of[c];
                let dl_ab = left.hom_dim(al, bl);
                let dr_ab = right.hom_dim(ar, br);
                let dl_bc = left.hom_dim(bl, cl);
                let dr_bc = right.hom_dim(br, cr);
                let dr_ac = right.hom_dim(ar, cr);
                let unit = |dim: usize, k: usize| {
                    let mut v = vec![Rat::zero(); dim];
                    v[k] = Rat::one();
                    v
                };
                for jl in 0..dl_bc {
                    for jr in 0..dr_bc {
                        let gc = &g[jl * dr_bc + jr];
                        if gc.is_zero() {
                            continue;
                        }
                        for il in 0..dl_ab {
                            for ir in 0..dr_ab {
                                let fc = &f[il * dr_ab + ir];
                                if fc.is_zero() {
                                    continue;
                                }
                                let lc = left.compose_coeff(al, bl, cl, &unit(dl_ab, il), &unit(dl_bc, jl));
                                let rc = right.compose_coeff(ar, br, cr, &unit(dr_ab, ir), &unit(dr_bc, jr));
                                let w = fc * gc;
                                for (kl, lv) in lc.iter().enumerate() {
                                    if lv.is_zero() {
                                        continue;
                                    }
                                    for (kr, rv) in rc.iter().enumerate() {
                                        if !rv.is_zero() {
                                            out[kl * dr_ac + kr] += &w * lv * rv;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// Total dimension of the underlying module of a label.
    pub fn realize_dim(&self, a: usize) -> usize {
        match &self.kind {
            CatKind::Base { reps, .. } => reps[a].total_dim(),
            CatKind::Tensor { left, right, factor_of, .. } => {
                let (al, ar) = factor_of[a];
                left.realize_dim(al) * right.realize_dim(ar)
            }
        }
    }

    /// Explicit matrix of the `k`-th Hom basis element on total spaces.
    pub fn realize_hom(&self, a: usize, b: usize, k: usize) -> RatMatrix {
        match &self.kind {
            CatKind::Base { hom_bases, .. } => {
                let f = &hom_bases[a * self.labels.len() + b][k];
                let parts: Vec<&RatMatrix> = f.vertex_maps.iter().collect();
                RatMatrix::block_diag(&parts)
            }
            CatKind::Tensor { left, right, factor_of, .. } => {
                let (al, ar) = factor_of[a];
                let (bl, br) = factor_of[b];
                let dr = right.hom_dim(ar, br);
                let (kl, kr) = (k / dr, k % dr);
                RatMatrix::kron(&left.realize_hom(al, bl, kl), &right.realize_hom(ar, br, kr))
            }
        }
    }

    /// Base-category accessors (None for tensor categories).
    pub fn base_quiver(&self) -> Option<&Arc<QuiverSpec>> {
        match &self.kind {
            CatKind::Base { quiver, .. } => Some(quiver),
            _ => None,
        }
    }

    pub fn base_rep(&self, a: usize) -> Option<&Representation> {
        match &self.kind {
            CatKind::Base { reps, .. } => Some(&reps[a]),
            _ => None,
        }
    }

    pub fn base_reps(&self) -> Option<&[Representation]> {
        match &self.kind {
            CatKind::Base { reps, .. } => Some(reps),
            _ => None,
        }
    }

    pub fn base_hom_basis(&self, a: usize, b: usize) -> Option<&[RepMorphism]> {
        match &self.kind {
            CatKind::Base { hom_bases, .. } => Some(&hom_bases[a * self.labels.len() + b]),
            _ => None,
        }
    }

    /// Factor categories of a tensor category.
    pub fn factors(&self) -> Option<(&Arc<CTCategory>, &Arc<CTCategory>)> {
        match &self.kind {
            CatKind::Tensor { left, right, .. } => Some((left, right)),
            _ => None,
        }
    }

    pub fn factor_of(&self, a: usize) -> Option<(usize, usize)> {
        match &self.kind {
            CatKind::Tensor { factor_of, .. } => Some(factor_of[a]),
            _ => None,
        }
    }

    pub fn pair_index(&self, la: usize, lb: usize) -> Option<usize> {
        match &self.kind {
            CatKind::Tensor { pair_index, .. } => pair_index.get(&(la, lb)).copied(),
            _ => None,
        }
    }

    /// Per-vertex dimension vector for base labels.
    pub fn base_dims(&self, a: usize) -> Option<Vec<usize>> {
        self.base_rep(a).map(|r| r.dims.clone())
    }

    /// Hom coordinates of all composites through intermediate objects; the
    /// row space is `rad²(a, b)`.
    fn rad_square_rows(&self, a: usize, b: usize) -> RatMatrix {
        let dim_ab = self.hom_dim(a, b);
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for c in 0..self.label_count() {
            if self.hom_dim(a, c) == 0 || self.hom_dim(c, b) == 0 {
                continue;
            }
            for f in self.rad_basis_coeffs(a, c) {
                for g in self.rad_basis_coeffs(c, b) {
                    rows.push(self.compose_coeff(a, c, b, &f, &g));
                }
            }
        }
        RatMatrix::from_fn(rows.len(), dim_ab, |r, c| rows[r][c].clone()).row_space_echelon()
    }

    /// Irreducible-map multiplicity `dim rad(a,b)/rad²(a,b)`.
    pub fn irreducible_multiplicity(&self, a: usize, b: usize) -> usize {
        let rad = self.rad_dim(a, b);
        if rad == 0 {
            return 0;
        }
        rad - self.rad_square_rows(a, b).rows()
    }

    /// DOT graph of the AR quiver: solid edges for irreducible maps, dotted
    /// edges for τ⁻.
    pub fn dot(&self) -> String {
        let mut out = String::from("digraph ar_quiver {\n  rankdir=LR;\n");
        for lbl in &self.labels {
            out.push_str(&format!("  \"{}\" [shape=box];\n", lbl.name));
        }
        for a in 0..self.label_count() {
            for b in 0..self.label_count() {
                if a == b {
                    continue;
                }
                for _ in 0..self.irreducible_multiplicity(a, b) {
                    out.push_str(&format!("  \"{}\" -> \"{}\";\n", self.labels[a].name, self.labels[b].name));
                }
            }
        }
        for a in 0..self.label_count() {
            if let Some(b) = self.tau_next[a] {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [style=dotted, constraint=false];\n",
                    self.labels[a].name, self.labels[b].name
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Deterministic label table (base categories list dimension vectors).
    pub fn label_table(&self) -> String {
        let mut out = String::new();
        for (i, lbl) in self.labels.iter().enumerate() {
            match self.base_dims(i) {
                Some(dims) => {
                    let ds: Vec<String> = dims.iter().map(usize::to_string).collect();
                    out.push_str(&format!("{}\tslice {}\t({})\n", lbl.name, lbl.slice, ds.join("")));
                }
                None => {
                    out.push_str(&format!("{}\tslice {}\tdim {}\n", lbl.name, lbl.slice, self.realize_dim(i)));
                }
            }
        }
        out
    }
}

impl fmt::Debug for CTCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CTCategory(n = {}, {} labels, l = {:?})", self.n, self.labels.len(), self.l)
    }
}

/// Knit the cluster-tilting category of a representation-finite quiver
/// (n = 1): all indecomposables as τ⁻-orbits of the projectives, with Hom,
/// radical and composition caches.
pub fn knit(q: &Arc<QuiverSpec>) -> Result<CTCategory> {
    let cat = knit_catalogue(q)?;
    let count = cat.reps.len();
    let labels: Vec<IndLabel> = (0..count)
        .map(|i| IndLabel { name: cat.names[i].clone(), slice: cat.slices[i], factors: Vec::new() })
        .collect();
    let mut name_index = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        name_index.insert(l.name.clone(), i);
    }
    let slice_total = cat.slices.iter().max().map_or(0, |m| m + 1);
    let mut slice_members = vec![Vec::new(); slice_total];
    for (i, &s) in cat.slices.iter().enumerate() {
        slice_members[s].push(i);
    }

    let mut hom_bases: Vec<Vec<RepMorphism>> = Vec::with_capacity(count * count);
    for a in 0..count {
        for b in 0..count {
            hom_bases.push(hom_basis(&cat.reps[a], &cat.reps[b]));
        }
    }
    let hom_dims: Vec<usize> = hom_bases.iter().map(Vec::len).collect();
    // directedness of the knitted category
    for a in 0..count {
        for b in 0..count {
            if cat.slices[a] > cat.slices[b] {
                assert_eq!(hom_dims[a * count + b], 0, "Hom must vanish from later to earlier slices");
            }
        }
    }

    let mut rad_rows = Vec::with_capacity(count);
    for a in 0..count {
        let rs = quiver::rad_space(&cat.reps[a], &cat.reps[a]);
        assert_eq!(rs.hom.len(), hom_dims[a * count + a]);
        rad_rows.push(rs.rad_rows);
    }

    let mut id_coeffs = Vec::with_capacity(count);
    for a in 0..count {
        let idm = RepMorphism::identity(&cat.reps[a]);
        let c = quiver::coords_in_basis(&hom_bases[a * count + a], &idm).expect("identity lies in End");
        id_coeffs.push(c);
    }

    let mut comp: HashMap<(usize, usize, usize), Vec<Vec<Vec<Rat>>>> = HashMap::new();
    for a in 0..count {
        for b in 0..count {
            let d_ab = hom_dims[a * count + b];
            if d_ab == 0 {
                continue;
            }
            for c in 0..count {
                let d_bc = hom_dims[b * count + c];
                let d_ac = hom_dims[a * count + c];
                if d_bc == 0 || d_ac == 0 {
                    continue;
                }
                let mut table = vec![vec![Vec::new(); d_ab]; d_bc];
                for j in 0..d_bc {
                    for (i, slot) in table[j].iter_mut().enumerate() {
                        let composed = RepMorphism::compose(
                            &hom_bases[b * count + c][j],
                            &hom_bases[a * count + b][i],
                        );
                        *slot = quiver::coords_in_basis(&hom_bases[a * count + c], &composed)
                            .expect("composite lies in Hom");
                    }
                }
                comp.insert((a, b, c), table);
            }
        }
    }

    let l = cat
        .orbit_lengths
        .windows(2)
        .all(|w| w[0] == w[1])
        .then(|| cat.orbit_lengths[0]);

    let out = CTCategory {
        n: 1,
        l,
        labels,
        name_index,
        slice_members,
        tau_next: cat.tau_next.clone(),
        tau_prev: cat.tau_prev.clone(),
        hom_dims,
        rad_rows,
        id_coeffs,
        kind: CatKind::Base { quiver: q.clone(), reps: cat.reps, hom_bases, comp },
    };
    verify_base_category(&out);
    Ok(out)
}

// Exhaustive identity and associativity checks of the cached composition
// data; runs once at construction.
fn verify_base_category(cat: &CTCategory) {
    let n = cat.label_count();
    for a in 0..n {
        for b in 0..n {
            let d = cat.hom_dim(a, b);
            for k in 0..d {
                let mut f = vec![Rat::zero(); d];
                f[k] = Rat::one();
                assert_eq!(cat.compose_coeff(a, b, b, &f, cat.id_coeff(b)), f, "left identity");
                assert_eq!(cat.compose_coeff(a, a, b, cat.id_coeff(a), &f), f, "right identity");
            }
        }
    }
    let unit = |dim: usize, k: usize| {
        let mut v = vec![Rat::zero(); dim];
        v[k] = Rat::one();
        v
    };
    for a in 0..n {
        for b in 0..n {
            if cat.hom_dim(a, b) == 0 {
                continue;
            }
            for c in 0..n {
                if cat.hom_dim(b, c) == 0 {
                    continue;
                }
                for d in 0..n {
                    if cat.hom_dim(c, d) == 0 {
                        continue;
                    }
                    for i in 0..cat.hom_dim(a, b) {
                        for j in 0..cat.hom_dim(b, c) {
                            for k in 0..cat.hom_dim(c, d) {
                                let f = unit(cat.hom_dim(a, b), i);
                                let g = unit(cat.hom_dim(b, c), j);
                                let h = unit(cat.hom_dim(c, d), k);
                                let gf = cat.compose_coeff(a, b, c, &f, &g);
                                let lhs = cat.compose_coeff(a, c, d, &gf, &h);
                                let hg = cat.compose_coeff(b, c, d, &g, &h);
                                let rhs = cat.compose_coeff(a, b, d, &f, &hg);
                                assert_eq!(lhs, rhs, "associativity");
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Tensor product of two cluster-tilting categories: labels are the
/// slice-matched pairs, `n` adds, Hom spaces multiply, the radical follows
/// the product formula and τ⁻ acts factorwise.
pub fn tensor_category(a: &Arc<CTCategory>, b: &Arc<CTCategory>) -> Result<CTCategory> {
    let (Some(la), Some(lb)) = (a.homogeneity(), b.homogeneity()) else {
        return Err(Error::HeterogeneousFactors(format!(
            "orbit lengths {:?} vs {:?}",
            a.homogeneity(),
            b.homogeneity()
        )));
    };
    if la != lb {
        return Err(Error::HeterogeneousFactors(format!("l = {la} vs l = {lb}")));
    }
    let l = la;
    let mut labels = Vec::new();
    let mut factor_of = Vec::new();
    let mut pair_index = HashMap::new();
    let mut slice_members = vec![Vec::new(); l];
    for s in 0..l {
        for &ia in a.slice_members(s) {
            for &ib in b.slice_members(s) {
                let idx = labels.len();
                let name = format!("{}⊗{}", a.label(ia).name, b.label(ib).name);
                let mut factors = if a.label(ia).factors.is_empty() {
                    vec![a.label(ia).name.clone()]
                } else {
                    a.label(ia).factors.clone()
                };
                factors.extend(if b.label(ib).factors.is_empty() {
                    vec![b.label(ib).name.clone()]
                } else {
                    b.label(ib).factors.clone()
                });
                labels.push(IndLabel { name, slice: s, factors });
                factor_of.push((ia, ib));
                pair_index.insert((ia, ib), idx);
                slice_members[s].push(idx);
            }
        }
    }
    let count = labels.len();
    let mut name_index = HashMap::new();
    for (i, lbl) in labels.iter().enumerate() {
        name_index.insert(lbl.name.clone(), i);
    }
    let mut hom_dims = vec![0usize; count * count];
    for x in 0..count {
        for y in 0..count {
            let (xl, xr) = factor_of[x];
            let (yl, yr) = factor_of[y];
            hom_dims[x * count + y] = a.hom_dim(xl, yl) * b.hom_dim(xr, yr);
        }
    }
    let tau_next: Vec<Option<usize>> = (0..count)
        .map(|x| {
            let (xl, xr) = factor_of[x];
            match (a.tau_next(xl), b.tau_next(xr)) {
                (Some(nl), Some(nr)) => pair_index.get(&(nl, nr)).copied(),
                _ => None,
            }
        })
        .collect();
    let tau_prev: Vec<Option<usize>> = (0..count)
        .map(|x| {
            let (xl, xr) = factor_of[x];
            match (a.tau_prev(xl), b.tau_prev(xr)) {
                (Some(pl), Some(pr)) => pair_index.get(&(pl, pr)).copied(),
                _ => None,
            }
        })
        .collect();

    // rad(x ⊗ y) = rad(x) ⊗ End(y) + End(x) ⊗ rad(y), assembled in product
    // coordinates and reduced to a canonical echelon basis
    let mut rad_rows = Vec::with_capacity(count);
    for x in 0..count {
        let (xl, xr) = factor_of[x];
        let dl = a.hom_dim(xl, xl);
        let dr = b.hom_dim(xr, xr);
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let kron_row = |u: &[Rat], v: &[Rat]| -> Vec<Rat> {
            let mut w = Vec::with_capacity(u.len() * v.len());
            for uu in u {
                for vv in v {
                    w.push(uu * vv);
                }
            }
            w
        };
        let unit = |dim: usize, k: usize| {
            let mut v = vec![Rat::zero(); dim];
            v[k] = Rat::one();
            v
        };
        for rrow in a.rad_basis_coeffs(xl, xl) {
            if a.rad_dim(xl, xl) == 0 {
                break;
            }
            for j in 0..dr {
                rows.push(kron_row(&rrow, &unit(dr, j)));
            }
        }
        for i in 0..dl {
            for rrow in b.rad_basis_coeffs(xr, xr) {
                rows.push(kron_row(&unit(dl, i), &rrow));
            }
        }
        let m = RatMatrix::from_fn(rows.len(), dl * dr, |r, c| rows[r][c].clone());
        rad_rows.push(m.row_space_echelon());
    }

    let mut id_coeffs = Vec::with_capacity(count);
    for x in 0..count {
        let (xl, xr) = factor_of[x];
        let il = a.id_coeff(xl);
        let ir = b.id_coeff(xr);
        let mut w = Vec::with_capacity(il.len() * ir.len());
        for u in il {
            for v in ir {
                w.push(u * v);
            }
        }
        id_coeffs.push(w);
    }

    Ok(CTCategory {
        n: a.n() + b.n(),
        l: Some(l),
        labels,
        name_index,
        slice_members,
        tau_next,
        tau_prev,
        hom_dims,
        rad_rows,
        id_coeffs,
        kind: CatKind::Tensor { left: a.clone(), right: b.clone(), factor_of, pair_index },
    })
}

// ---------------------------------------------------------------------------
// formal modules and block matrices
// ---------------------------------------------------------------------------

/// Formal direct sum of labeled indecomposables; the summand order is part of
/// the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalModule {
    pub summands: Vec<usize>,
}

impl FormalModule {
    pub fn zero() -> Self {
        FormalModule { summands: Vec::new() }
    }

    pub fn single(label: usize) -> Self {
        FormalModule { summands: vec![label] }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn concat(&self, other: &FormalModule) -> FormalModule {
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().copied());
        FormalModule { summands }
    }

    pub fn name(&self, cat: &CTCategory) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let names: Vec<&str> = self.summands.iter().map(|&i| cat.label(i).name.as_str()).collect();
        names.join(" ⊕ ")
    }
}

/// Block matrix between formal modules; block `(t, s)` is a coefficient
/// vector over the cached Hom basis from source summand `s` to target
/// summand `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismMatrix {
    pub source: FormalModule,
    pub target: FormalModule,
    blocks: Vec<Vec<Vec<Rat>>>,
}

impl MorphismMatrix {
    pub fn zero(cat: &CTCategory, source: FormalModule, target: FormalModule) -> Self {
        let blocks = target
            .summands
            .iter()
            .map(|&t| {
                source
                    .summands
                    .iter()
                    .map(|&s| vec![Rat::zero(); cat.hom_dim(s, t)])
                    .collect()
            })
            .collect();
        MorphismMatrix { source, target, blocks }
    }

    pub fn identity(cat: &CTCategory, module: &FormalModule) -> Self {
        let mut m = Self::zero(cat, module.clone(), module.clone());
        for (k, &lbl) in module.summands.iter().enumerate() {
            m.blocks[k][k] = cat.id_coeff(lbl).to_vec();
        }
        m
    }

    pub fn block(&self, t: usize, s: usize) -> &[Rat] {
        &self.blocks[t][s]
    }

    pub fn set_block(&mut self, t: usize, s: usize, coeff: Vec<Rat>) {
        assert_eq!(self.blocks[t][s].len(), coeff.len(), "block coefficient length");
        self.blocks[t][s] = coeff;
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|row| row.iter().all(|b| b.iter().all(Rat::is_zero)))
    }

    pub fn add(&self, other: &MorphismMatrix) -> MorphismMatrix {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut out = self.clone();
        for (t, row) in out.blocks.iter_mut().enumerate() {
            for (s, b) in row.iter_mut().enumerate() {
                for (k, v) in b.iter_mut().enumerate() {
                    *v += &other.blocks[t][s][k];
                }
            }
        }
        out
    }

    pub fn neg(&self) -> MorphismMatrix {
        let mut out = self.clone();
        for row in &mut out.blocks {
            for b in row {
                for v in b.iter_mut() {
                    *v = -v.clone();
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> MorphismMatrix {
        let mut out = self.clone();
        for row in &mut out.blocks {
            for b in row {
                for v in b.iter_mut() {
                    *v = v.clone() * s;
                }
            }
        }
        out
    }

    /// Block composition `g ∘ f` via the cached structure constants.
    pub fn compose(cat: &CTCategory, g: &MorphismMatrix, f: &MorphismMatrix) -> Result<MorphismMatrix> {
        if f.target != g.source {
            return Err(Error::ShapeMismatch(format!(
                "compose: middle modules differ ({} vs {})",
                f.target.name(cat),
                g.source.name(cat)
            )));
        }
        let mut out = MorphismMatrix::zero(cat, f.source.clone(), g.target.clone());
        for (t, &lt) in g.target.summands.iter().enumerate() {
            for (s, &ls) in f.source.summands.iter().enumerate() {
                let mut acc = vec![Rat::zero(); cat.hom_dim(ls, lt)];
                for (m, &lm) in f.target.summands.iter().enumerate() {
                    let fb = f.block(m, s);
                    let gb = g.block(t, m);
                    if fb.iter().all(Rat::is_zero) || gb.iter().all(Rat::is_zero) {
                        continue;
                    }
                    let c = cat.compose_coeff(ls, lm, lt, fb, gb);
                    for (k, v) in c.into_iter().enumerate() {
                        acc[k] += v;
                    }
                }
                out.blocks[t][s] = acc;
            }
        }
        Ok(out)
    }

    /// Every same-label block lies in the cached radical subspace (blocks
    /// between distinct labels are radical automatically).
    pub fn is_radical(&self, cat: &CTCategory) -> bool {
        for (t, &lt) in self.target.summands.iter().enumerate() {
            for (s, &ls) in self.source.summands.iter().enumerate() {
                if ls == lt && !cat.is_rad_coeff(ls, lt, self.block(t, s)) {
                    return false;
                }
            }
        }
        true
    }

    /// Expand to an explicit matrix on the total spaces of the realizations.
    pub fn realize(&self, cat: &CTCategory) -> RatMatrix {
        let row_dims: Vec<usize> = self.target.summands.iter().map(|&t| cat.realize_dim(t)).collect();
        let col_dims: Vec<usize> = self.source.summands.iter().map(|&s| cat.realize_dim(s)).collect();
        let rows: usize = row_dims.iter().sum();
        let cols: usize = col_dims.iter().sum();
        let mut m = RatMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for (t, &lt) in self.target.summands.iter().enumerate() {
            let mut c0 = 0;
            for (s, &ls) in self.source.summands.iter().enumerate() {
                for (k, coef) in self.block(t, s).iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let h = cat.realize_hom(ls, lt, k).scale(coef);
                    let base = m.submatrix(r0, c0, row_dims[t], col_dims[s]).add(&h);
                    m.paste(r0, c0, &base);
                }
                c0 += col_dims[s];
            }
            r0 += row_dims[t];
        }
        m
    }

    /// Deterministic one-line rendering of the blocks.
    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .blocks
            .iter()
            .map(|row| {
                let cells: Vec<String> = row
                    .iter()
                    .map(|b| {
                        if b.is_empty() {
                            ".".to_string()
                        } else {
                            let cs: Vec<String> = b.iter().map(format_rat).collect();
                            format!("({})", cs.join(","))
                        }
                    })
                    .collect();
                format!("[{}]", cells.join(" "))
            })
            .collect();
        format!("[{}]", rows.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_i;
    use crate::rng::SplitMix64;

    fn a5() -> Arc<QuiverSpec> {
        Arc::new(QuiverSpec::new("a5", 5, vec![(0, 1), (1, 2), (3, 2), (4, 3)]).unwrap())
    }

    fn a5_cat() -> Arc<CTCategory> {
        Arc::new(knit(&a5()).unwrap())
    }

    #[test]
    fn knit_a5_shape() {
        let cat = a5_cat();
        assert_eq!(cat.label_count(), 15);
        assert_eq!(cat.homogeneity(), Some(3));
        assert_eq!(cat.slice_count(), 3);
        for s in 0..3 {
            assert_eq!(cat.slice_members(s).len(), 5);
        }
        let p1 = cat.index_of("P1").unwrap();
        let m4 = cat.index_of("M4").unwrap();
        assert_eq!(cat.tau_next(p1), Some(m4));
    }

    #[test]
    fn homogeneity_absent_for_a2() {
        let q = Arc::new(QuiverSpec::new("a2", 2, vec![(0, 1)]).unwrap());
        let cat = knit(&q).unwrap();
        assert_eq!(cat.homogeneity(), None);
    }

    #[test]
    fn homogeneity_single_vertex() {
        let q = Arc::new(QuiverSpec::new("pt", 1, vec![]).unwrap());
        let cat = knit(&q).unwrap();
        assert_eq!(cat.homogeneity(), Some(1));
        assert_eq!(cat.label_count(), 1);
    }

    #[test]
    fn slice_vanishing_holds() {
        let cat = a5_cat();
        for a in 0..15 {
            for b in 0..15 {
                if cat.slice(a) > cat.slice(b) {
                    assert_eq!(cat.hom_dim(a, b), 0);
                }
            }
        }
    }

    #[test]
    fn tensor_a5_a5_shape() {
        let a = a5_cat();
        let t = Arc::new(tensor_category(&a, &a).unwrap());
        assert_eq!(t.label_count(), 75);
        assert_eq!(t.n(), 2);
        assert_eq!(t.homogeneity(), Some(3));
        for s in 0..3 {
            assert_eq!(t.slice_members(s).len(), 25);
        }
        let p2p5 = t.index_of("P2⊗P5").unwrap();
        let p1p5 = t.index_of("P1⊗P5").unwrap();
        assert_eq!(t.hom_dim(p2p5, p1p5), 1);
        // slice vanishing carries over
        for a_ in 0..75 {
            for b_ in 0..75 {
                if t.slice(a_) > t.slice(b_) {
                    assert_eq!(t.hom_dim(a_, b_), 0);
                }
            }
        }
        // factorwise tau
        let m5m2 = t.index_of("M5⊗M2").unwrap();
        assert_eq!(t.tau_next(p2p5), Some(m5m2));
    }

    #[test]
    fn tensor_requires_common_homogeneity() {
        let a = a5_cat();
        let q2 = Arc::new(QuiverSpec::new("a2", 2, vec![(0, 1)]).unwrap());
        let b = Arc::new(knit(&q2).unwrap());
        assert!(matches!(tensor_category(&a, &b), Err(Error::HeterogeneousFactors(_))));
    }

    #[test]
    fn tensor_hom_dims_multiply() {
        let a = a5_cat();
        let t = tensor_category(&a, &a).unwrap();
        for x in 0..t.label_count() {
            for y in 0..t.label_count() {
                let (xl, xr) = t.factor_of(x).unwrap();
                let (yl, yr) = t.factor_of(y).unwrap();
                assert_eq!(t.hom_dim(x, y), a.hom_dim(xl, yl) * a.hom_dim(xr, yr));
            }
        }
    }

    #[test]
    fn composition_matches_realization() {
        let cat = a5_cat();
        let mut rng = SplitMix64::new(11);
        let mut checked = 0;
        while checked < 20 {
            let a = rng.below(15);
            let b = rng.below(15);
            let c = rng.below(15);
            if cat.hom_dim(a, b) == 0 || cat.hom_dim(b, c) == 0 {
                continue;
            }
            let f: Vec<Rat> = (0..cat.hom_dim(a, b)).map(|_| rat_i(rng.int_in(5))).collect();
            let g: Vec<Rat> = (0..cat.hom_dim(b, c)).map(|_| rat_i(rng.int_in(5))).collect();
            let comp = cat.compose_coeff(a, b, c, &f, &g);
            // realize both sides
            let fm = realize_coeff(&cat, a, b, &f);
            let gm = realize_coeff(&cat, b, c, &g);
            let cm = realize_coeff(&cat, a, c, &comp);
            assert_eq!(gm.matmul(&fm), cm);
            checked += 1;
        }
    }

    fn realize_coeff(cat: &CTCategory, a: usize, b: usize, coeff: &[Rat]) -> RatMatrix {
        let mut m = RatMatrix::zeros(cat.realize_dim(b), cat.realize_dim(a));
        for (k, c) in coeff.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&cat.realize_hom(a, b, k).scale(c));
            }
        }
        m
    }

    #[test]
    fn tensor_composition_associativity_sample() {
        let a = a5_cat();
        let t = tensor_category(&a, &a).unwrap();
        let mut rng = SplitMix64::new(23);
        let unit = |dim: usize, k: usize| {
            let mut v = vec![Rat::zero(); dim];
            v[k] = Rat::one();
            v
        };
        let mut checked = 0;
        while checked < 25 {
            let (x, y, z, w) = (rng.below(75), rng.below(75), rng.below(75), rng.below(75));
            let (dxy, dyz, dzw) = (t.hom_dim(x, y), t.hom_dim(y, z), t.hom_dim(z, w));
            if dxy == 0 || dyz == 0 || dzw == 0 {
                continue;
            }
            let f = unit(dxy, rng.below(dxy));
            let g = unit(dyz, rng.below(dyz));
            let h = unit(dzw, rng.below(dzw));
            let gf = t.compose_coeff(x, y, z, &f, &g);
            let lhs = t.compose_coeff(x, z, w, &gf, &h);
            let hg = t.compose_coeff(y, z, w, &g, &h);
            let rhs = t.compose_coeff(x, y, w, &f, &hg);
            assert_eq!(lhs, rhs);
            checked += 1;
        }
    }

    #[test]
    fn morphism_matrix_compose_and_identity() {
        let cat = a5_cat();
        let p3 = cat.index_of("P3").unwrap();
        let p2 = cat.index_of("P2").unwrap();
        let p1 = cat.index_of("P1").unwrap();
        let src = FormalModule::single(p3);
        let mid = FormalModule::single(p2);
        let tgt = FormalModule::single(p1);
        let mut f = MorphismMatrix::zero(&cat, src.clone(), mid.clone());
        f.set_block(0, 0, vec![rat_i(1)]);
        let mut g = MorphismMatrix::zero(&cat, mid.clone(), tgt.clone());
        g.set_block(0, 0, vec![rat_i(1)]);
        let gf = MorphismMatrix::compose(&cat, &g, &f).unwrap();
        assert!(!gf.is_zero());
        let idm = MorphismMatrix::identity(&cat, &mid);
        assert_eq!(MorphismMatrix::compose(&cat, &idm, &f).unwrap(), f);
        // mismatched middles
        assert!(MorphismMatrix::compose(&cat, &f, &f).is_err());
    }

    #[test]
    fn radical_predicate() {
        let cat = a5_cat();
        let p1 = cat.index_of("P1").unwrap();
        let p2 = cat.index_of("P2").unwrap();
        let m = FormalModule::single(p1);
        let idm = MorphismMatrix::identity(&cat, &m);
        assert!(!idm.is_radical(&cat));
        let mut f = MorphismMatrix::zero(&cat, FormalModule::single(p2), m);
        f.set_block(0, 0, vec![rat_i(3)]);
        assert!(f.is_radical(&cat));
    }

    #[test]
    fn ar_quiver_dot_structure() {
        let cat = a5_cat();
        let dot = cat.dot();
        // the 20 mesh arrows of the knitted category
        let solid = [
            ("P3", "P2"), ("P3", "P4"), ("P2", "P1"), ("P2", "M3"), ("P4", "M3"), ("P4", "P5"),
            ("P1", "M5"), ("M3", "M5"), ("M3", "M1"), ("P5", "M1"), ("M5", "M4"), ("M5", "I3"),
            ("M1", "I3"), ("M1", "M2"), ("M4", "I4"), ("M2", "I2"), ("I3", "I4"), ("I3", "I2"),
            ("I4", "I5"), ("I2", "I1"),
        ];
        for (a, b) in solid {
            assert!(dot.contains(&format!("\"{a}\" -> \"{b}\";")), "missing edge {a} -> {b}");
        }
        let solid_count = dot.lines().filter(|l| l.ends_with("\";") && l.contains("->")).count();
        assert_eq!(solid_count, 20);
        let dotted_count = dot.lines().filter(|l| l.contains("style=dotted")).count();
        assert_eq!(dotted_count, 10);
    }

    #[test]
    fn realize_dims() {
        let a = a5_cat();
        let t = tensor_category(&a, &a).unwrap();
        let m5m2 = t.index_of("M5⊗M2").unwrap();
        assert_eq!(t.realize_dim(m5m2), 4);
        let p2p5 = t.index_of("P2⊗P5").unwrap();
        assert_eq!(t.realize_dim(p2p5), 6);
    }
}
