//! Representations of ditalgebras, the σ-map computing Hom and Ext, coefficient quivers,
//! transport along edge reductions and the realization of real roots as tree modules.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{math, Error, Result};
use crate::exactlin::{Mat, Scalar};
use crate::pathdit::{self, Ditalgebra, EdgeReduction};
use crate::quiver::{Biquiver, FormData};

/// A vector space per vertex and a matrix per arrow. Dotted arrows carry zero matrices, which are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub mats: Vec<Mat>,
}

impl Representation {
    pub fn zero(q: &Biquiver, dims: Vec<usize>) -> Representation {
        let mats = q.arrows.iter().map(|a| Mat::zeros(dims[a.tgt], dims[a.src])).collect();
        Representation { dims, mats }
    }

    pub fn simple(q: &Biquiver, i: usize) -> Representation {
        let mut dims = vec![0; q.n()];
        dims[i] = 1;
        Representation::zero(q, dims)
    }

    pub fn from_mats(q: &Biquiver, dims: Vec<usize>, mats: &[(&str, Mat)]) -> Result<Representation> {
        let mut rep = Representation::zero(q, dims);
        for (id, m) in mats {
            let a = q.arrow(id).ok_or_else(|| Error::Schema(format!("unknown arrow {id:?}")))?;
            rep.set(q, a, m.clone())?;
        }
        Ok(rep)
    }

    pub fn set(&mut self, q: &Biquiver, a: usize, m: Mat) -> Result<()> {
        let arrow = &q.arrows[a];
        if m.shape() != (self.dims[arrow.tgt], self.dims[arrow.src]) {
            return Err(Error::Schema(format!(
                "matrix of {:?} is {}x{}, expected {}x{}",
                arrow.id,
                m.rows(),
                m.cols(),
                self.dims[arrow.tgt],
                self.dims[arrow.src]
            )));
        }
        self.mats[a] = m;
        Ok(())
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn validate(&self, q: &Biquiver) -> Result<()> {
        if self.dims.len() != q.n() || self.mats.len() != q.arrows.len() {
            return Err(Error::Schema("representation does not match the quiver".into()));
        }
        for (a, arrow) in q.arrows.iter().enumerate() {
            if self.mats[a].shape() != (self.dims[arrow.tgt], self.dims[arrow.src]) {
                return Err(Error::Schema(format!("matrix of {:?} has the wrong shape", arrow.id)));
            }
        }
        Ok(())
    }

    /// True when every solid matrix has entries in {0, 1}.
    pub fn is_01(&self, q: &Biquiver) -> bool {
        q.solid().all(|(a, _)| self.mats[a].is_01())
    }

    pub fn direct_sum(q: &Biquiver, parts: &[&Representation]) -> Representation {
        let dims = (0..q.n()).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
        let mats = (0..q.arrows.len())
            .map(|a| Mat::direct_sum(&parts.iter().map(|p| &p.mats[a]).collect::<Vec<_>>()))
            .collect();
        Representation { dims, mats }
    }

    /// The representation in a new basis: `basis[v]` holds the new basis vectors of vertex `v` as columns.
    pub fn change_basis(&self, q: &Biquiver, basis: &[Mat]) -> Result<Representation> {
        let inv: Vec<Mat> = basis
            .iter()
            .map(|b| b.inverse().ok_or_else(|| Error::Math("change of basis matrix is singular".into())))
            .collect::<Result<_>>()?;
        let mut out = self.clone();
        for (a, arrow) in q.solid() {
            out.mats[a] = inv[arrow.tgt].mul(&self.mats[a]).mul(&basis[arrow.src]);
        }
        Ok(out)
    }

    pub fn to_json(&self, q: &Biquiver) -> serde_json::Value {
        let dims: serde_json::Map<String, serde_json::Value> =
            q.vertices.iter().zip(&self.dims).map(|(l, d)| (l.clone(), (*d).into())).collect();
        let mats: serde_json::Map<String, serde_json::Value> = q
            .solid()
            .map(|(a, arrow)| (arrow.id.clone(), serde_json::to_value(&self.mats[a]).expect("matrix serializes")))
            .collect();
        serde_json::json!({ "dims": dims, "mats": mats })
    }

    pub fn from_json(q: &Biquiver, v: &serde_json::Value) -> Result<Representation> {
        let dims_obj = v
            .get("dims")
            .and_then(|d| d.as_object())
            .ok_or_else(|| Error::Schema("representation needs a \"dims\" object".into()))?;
        let mut dims = vec![0; q.n()];
        for (label, d) in dims_obj {
            let i = q.vertex(label).ok_or_else(|| Error::Schema(format!("dims: unknown vertex {label:?}")))?;
            dims[i] = d
                .as_u64()
                .ok_or_else(|| Error::Schema(format!("dims.{label}: expected a nonnegative integer")))?
                as usize;
        }
        let mut rep = Representation::zero(q, dims);
        if let Some(mats) = v.get("mats") {
            let obj = mats.as_object().ok_or_else(|| Error::Schema("\"mats\" must be an object".into()))?;
            for (id, m) in obj {
                let a = q.arrow(id).ok_or_else(|| Error::Schema(format!("mats: unknown arrow {id:?}")))?;
                if !q.arrows[a].is_solid() {
                    return Err(Error::Schema(format!("mats.{id}: dotted arrows carry no matrix")));
                }
                let arrow = &q.arrows[a];
                let m = Mat::from_json(m)
                    .and_then(|m| m.with_shape(rep.dims[arrow.tgt], rep.dims[arrow.src]))
                    .map_err(|e| Error::Schema(format!("mats.{id}: {e}")))?;
                rep.mats[a] = m;
            }
        }
        Ok(rep)
    }
}

/// Σ over solid arrows of the product of the endpoint dimensions.
pub fn norm(q: &Biquiver, m: &Representation) -> usize {
    norm_of_dims(q, &m.dims)
}

pub fn norm_of_dims(q: &Biquiver, dims: &[usize]) -> usize {
    q.solid().map(|(_, a)| dims[a.src] * dims[a.tgt]).sum()
}

/// The degree-0 and degree-1 components of a morphism between representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismPair {
    /// `f0[v]` maps `M_v` to `N_v`.
    pub f0: Vec<Mat>,
    /// `f1[γ]` maps `M_{s(γ)}` to `N_{t(γ)}` for each dotted `γ`.
    pub f1: BTreeMap<usize, Mat>,
}

/// Dimensions of Hom and Ext, with a Hom basis when it was requested.
#[derive(Clone, Debug)]
pub struct HomExt {
    pub hom: usize,
    pub ext: usize,
    pub basis: Vec<MorphismPair>,
}

/// A differential term of a solid arrow split around its dotted arrow: `N_p ∘ f¹(γ) ∘ M_q`.
struct SplitTerm {
    coef: Scalar,
    gamma: usize,
    before: Vec<usize>,
    after: Vec<usize>,
}

fn split_terms(d: &Ditalgebra, a: usize) -> Result<Vec<SplitTerm>> {
    let mut out = Vec::new();
    for (path, coef) in &d.diff[a] {
        let dotted: Vec<usize> = (0..path.len()).filter(|&k| !d.arrow(path[k]).is_solid()).collect();
        if dotted.len() != 1 {
            return Err(Error::Schema(format!(
                "differential of solid arrow {:?} has a term without exactly one dotted arrow",
                d.id(a)
            )));
        }
        let k = dotted[0];
        out.push(SplitTerm {
            coef: coef.clone(),
            gamma: path[k],
            before: path[..k].to_vec(),
            after: path[k + 1..].to_vec(),
        });
    }
    Ok(out)
}

/// Matrix of a path of solid arrows (traversal order) in a representation; the empty path at `v` is the identity.
fn path_matrix(rep: &Representation, path: &[usize], v: usize) -> Mat {
    let mut m = Mat::identity(rep.dims[v]);
    for &a in path {
        m = rep.mats[a].mul(&m);
    }
    m
}

struct Sparse {
    rows: Vec<Vec<(usize, Scalar)>>,
    cols: Vec<Vec<(usize, Scalar)>>,
}

fn sparse(m: &Mat) -> Sparse {
    let mut rows = vec![Vec::new(); m.rows()];
    let mut cols = vec![Vec::new(); m.cols()];
    for (r, c, x) in m.nonzeros() {
        rows[r].push((c, x.clone()));
        cols[c].push((r, x.clone()));
    }
    Sparse { rows, cols }
}

/// Union-find with ±1 weights: `x = sign[x] · parent[x]`.
struct SignedUnionFind {
    parent: Vec<u32>,
    sign: Vec<i8>,
    rank: Vec<u8>,
    zero: Vec<bool>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind { parent: (0..n as u32).collect(), sign: vec![1; n], rank: vec![0; n], zero: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, i8) {
        let mut root = x;
        let mut s = 1i8;
        while self.parent[root] as usize != root {
            s *= self.sign[root];
            root = self.parent[root] as usize;
        }
        // Compress: every node on the path now points at the root with its accumulated sign.
        let mut cur = x;
        let mut cs = s;
        while self.parent[cur] as usize != root && cur != root {
            let next = self.parent[cur] as usize;
            let ns = cs * self.sign[cur];
            self.parent[cur] = root as u32;
            self.sign[cur] = cs;
            cur = next;
            cs = ns;
        }
        (root, s)
    }

    fn set_zero(&mut self, x: usize) {
        let (r, _) = self.find(x);
        self.zero[r] = true;
    }

    /// Records `a = w · b`.
    fn union(&mut self, a: usize, b: usize, w: i8) {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        let rel = sa * w * sb;
        if ra == rb {
            if rel != 1 {
                self.zero[ra] = true;
            }
            return;
        }
        let z = self.zero[ra] || self.zero[rb];
        let (child, root) = if self.rank[ra] < self.rank[rb] { (ra, rb) } else { (rb, ra) };
        if self.rank[ra] == self.rank[rb] {
            self.rank[root] += 1;
        }
        self.parent[child] = root as u32;
        self.sign[child] = rel;
        self.zero[root] = z;
    }
}

type SparseRow = Vec<(usize, Scalar)>;

fn normalize_row(mut row: SparseRow) -> SparseRow {
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, x) in row {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `a − f·b` for sorted sparse rows.
fn row_sub(a: &SparseRow, f: &Scalar, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let x = &a[i].1 - f * &b[j].1;
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental sparse echelon form: each stored row starts at its pivot with coefficient 1.
#[derive(Default)]
struct Echelon {
    pivots: HashMap<usize, SparseRow>,
}

impl Echelon {
    fn insert(&mut self, mut row: SparseRow) {
        while let Some((lead, x)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = row_sub(&row, &x, p),
                None => {
                    let inv = x.recip();
                    for e in row.iter_mut() {
                        e.1 = &e.1 * &inv;
                    }
                    self.pivots.insert(lead, row);
                    return;
                }
            }
        }
    }
}

/// Layout of the unknowns of the σ-map: blocks `f⁰_v` then `f¹_γ`, all row-major.
struct Layout {
    f0: Vec<usize>,
    f1: BTreeMap<usize, usize>,
    total: usize,
}

fn layout(d: &Ditalgebra, m: &Representation, n: &Representation) -> Layout {
    let mut off = 0;
    let mut f0 = Vec::new();
    for v in 0..d.quiver.n() {
        f0.push(off);
        off += n.dims[v] * m.dims[v];
    }
    let mut f1 = BTreeMap::new();
    for (g, arrow) in d.quiver.dotted() {
        f1.insert(g, off);
        off += n.dims[arrow.tgt] * m.dims[arrow.src];
    }
    Layout { f0, f1, total: off }
}

/// Hom and Ext between two representations through the σ-map.
pub fn sigma_hom(d: &Ditalgebra, m: &Representation, n: &Representation) -> Result<HomExt> {
    sigma_solve(d, m, n, true)
}

/// Only the dimensions of Hom and Ext.
pub fn sigma_dims(d: &Ditalgebra, m: &Representation, n: &Representation) -> Result<(usize, usize)> {
    let r = sigma_solve(d, m, n, false)?;
    Ok((r.hom, r.ext))
}

fn sigma_solve(d: &Ditalgebra, m: &Representation, n: &Representation, want_basis: bool) -> Result<HomExt> {
    m.validate(&d.quiver)?;
    n.validate(&d.quiver)?;
    let lay = layout(d, m, n);
    let mut uf = SignedUnionFind::new(lay.total);
    let mut deferred: Vec<SparseRow> = Vec::new();
    let mut equations = 0usize;
    for (b, beta) in d.quiver.solid() {
        let (s, t) = (beta.src, beta.tgt);
        equations += n.dims[t] * m.dims[s];
        let nb = sparse(&n.mats[b]);
        let mb = sparse(&m.mats[b]);
        let terms: Vec<(Scalar, Sparse, usize, usize, Sparse)> = split_terms(d, b)?
            .into_iter()
            .map(|st| {
                let g = d.arrow(st.gamma);
                let np = sparse(&path_matrix(n, &st.after, g.tgt));
                let mq = sparse(&path_matrix(m, &st.before, s));
                (st.coef, np, lay.f1[&st.gamma], m.dims[g.src], mq)
            })
            .collect();
        for r in 0..n.dims[t] {
            for c in 0..m.dims[s] {
                let mut row: SparseRow = Vec::new();
                for (x, v) in &nb.rows[r] {
                    row.push((lay.f0[s] + x * m.dims[s] + c, v.clone()));
                }
                for (y, v) in &mb.cols[c] {
                    row.push((lay.f0[t] + r * m.dims[t] + y, -v));
                }
                for (coef, np, off, width, mq) in &terms {
                    for (x, nv) in &np.rows[r] {
                        for (y, mv) in &mq.cols[c] {
                            row.push((off + x * width + y, -(coef * nv * mv)));
                        }
                    }
                }
                let row = if row.len() > 1 { normalize_row(row) } else { row };
                match row.len() {
                    0 => {}
                    1 => uf.set_zero(row[0].0),
                    2 if row[0].1.abs() == row[1].1.abs() => {
                        let w = if row[0].1 == row[1].1 { -1 } else { 1 };
                        uf.union(row[0].0, row[1].0, w);
                    }
                    _ => deferred.push(row),
                }
            }
        }
    }
    let mut ech = Echelon::default();
    for row in deferred {
        let mut rooted = Vec::with_capacity(row.len());
        for (x, c) in row {
            let (r, s) = uf.find(x);
            if !uf.zero[r] {
                rooted.push((r, if s == 1 { c } else { -c }));
            }
        }
        let rooted = normalize_row(rooted);
        if !rooted.is_empty() {
            ech.insert(rooted);
        }
    }
    let free_roots: Vec<usize> =
        (0..lay.total).filter(|&x| uf.parent[x] as usize == x && !uf.zero[x]).collect();
    let hom = free_roots.len() - ech.pivots.len();
    let rank = lay.total - hom;
    let ext = equations - rank;
    let mut basis = Vec::new();
    if want_basis {
        let mut pivot_cols: Vec<usize> = ech.pivots.keys().copied().collect();
        pivot_cols.sort_unstable_by(|a, b| b.cmp(a));
        for &f in free_roots.iter().filter(|x| !ech.pivots.contains_key(x)) {
            let mut value: HashMap<usize, Scalar> = HashMap::new();
            value.insert(f, Scalar::one());
            for &p in &pivot_cols {
                let row = &ech.pivots[&p];
                let mut acc = Scalar::zero();
                for (c, x) in &row[1..] {
                    if let Some(v) = value.get(c) {
                        acc -= x * v;
                    }
                }
                if !acc.is_zero() {
                    value.insert(p, acc);
                }
            }
            let mut vec = vec![Scalar::zero(); lay.total];
            for (x, slot) in vec.iter_mut().enumerate() {
                let (r, s) = uf.find(x);
                if let Some(v) = value.get(&r) {
                    *slot = if s == 1 { v.clone() } else { -v };
                }
            }
            basis.push(unpack(d, m, n, &lay, &vec));
        }
    }
    Ok(HomExt { hom, ext, basis })
}

fn unpack(d: &Ditalgebra, m: &Representation, n: &Representation, lay: &Layout, v: &[Scalar]) -> MorphismPair {
    let f0 = (0..d.quiver.n())
        .map(|x| Mat::from_fn(n.dims[x], m.dims[x], |r, c| v[lay.f0[x] + r * m.dims[x] + c].clone()))
        .collect();
    let f1 = lay
        .f1
        .iter()
        .map(|(&g, &off)| {
            let a = d.arrow(g);
            let w = m.dims[a.src];
            (g, Mat::from_fn(n.dims[a.tgt], w, |r, c| v[off + r * w + c].clone()))
        })
        .collect();
    MorphismPair { f0, f1 }
}

/// Checks `N_β f⁰_s − f⁰_t M_β = f̂¹(δβ)` for every solid arrow `β`.
pub fn is_morphism(d: &Ditalgebra, m: &Representation, n: &Representation, f: &MorphismPair) -> Result<bool> {
    for (b, beta) in d.quiver.solid() {
        let lhs = n.mats[b].mul(&f.f0[beta.src]).sub(&f.f0[beta.tgt].mul(&m.mats[b]));
        let mut rhs = Mat::zeros(lhs.rows(), lhs.cols());
        for st in split_terms(d, b)? {
            let g = d.arrow(st.gamma);
            let np = path_matrix(n, &st.after, g.tgt);
            let mq = path_matrix(m, &st.before, beta.src);
            rhs = rhs.add(&np.mul(&f.f1[&st.gamma]).mul(&mq).scale(&st.coef));
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn end_dim(d: &Ditalgebra, m: &Representation) -> Result<usize> {
    Ok(sigma_dims(d, m, m)?.0)
}

/// End ≅ k and no self-extensions.
pub fn is_exceptional(d: &Ditalgebra, m: &Representation) -> Result<bool> {
    let (hom, ext) = sigma_dims(d, m, m)?;
    Ok(hom == 1 && ext == 0)
}

/// The Euler form of the dimension vectors against `hom − ext` from the σ-map.
pub fn euler_verify(d: &Ditalgebra, m: &Representation, n: &Representation) -> Result<bool> {
    let (hom, ext) = sigma_dims(d, m, n)?;
    let form = FormData::new(&d.quiver);
    Ok(form.euler(&m.dim_vector(), &n.dim_vector())? == hom as i64 - ext as i64)
}

/// Basis elements tagged by vertex, joined by the nonzero entries of the solid matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientQuiver {
    /// `(vertex, index within the vertex)`.
    pub vertices: Vec<(usize, usize)>,
    /// `(arrow, source basis element, target basis element, entry)` as indices into `vertices`.
    pub edges: Vec<(usize, usize, usize, Scalar)>,
}

pub fn coefficient_quiver(q: &Biquiver, m: &Representation) -> CoefficientQuiver {
    let mut offset = Vec::new();
    let mut vertices = Vec::new();
    for v in 0..q.n() {
        offset.push(vertices.len());
        vertices.extend((0..m.dims[v]).map(|k| (v, k)));
    }
    let mut edges = Vec::new();
    for (a, arrow) in q.solid() {
        for (r, c, x) in m.mats[a].nonzeros() {
            edges.push((a, offset[arrow.src] + c, offset[arrow.tgt] + r, x.clone()));
        }
    }
    CoefficientQuiver { vertices, edges }
}

impl CoefficientQuiver {
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = n;
        for (_, s, t, _) in &self.edges {
            let (a, b) = (root(&mut parent, *s), root(&mut parent, *t));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.vertices.len()
    }

    /// DOT rendering with one cluster per quiver vertex.
    pub fn to_dot(&self, q: &Biquiver) -> String {
        let mut out = String::from("digraph coefficients {\n");
        for v in 0..q.n() {
            let members: Vec<usize> = (0..self.vertices.len()).filter(|&k| self.vertices[k].0 == v).collect();
            if members.is_empty() {
                continue;
            }
            let _ = writeln!(out, "  subgraph cluster_{v} {{\n    label=\"{}\";", q.vertices[v]);
            for k in members {
                let _ = writeln!(out, "    b{k} [label=\"{}.{}\"];", q.vertices[v], self.vertices[k].1 + 1);
            }
            out.push_str("  }\n");
        }
        for (a, s, t, x) in &self.edges {
            let label = if x.is_one() {
                q.arrows[*a].id.clone()
            } else {
                format!("{} ({})", q.arrows[*a].id, crate::exactlin::format_scalar(x))
            };
            let _ = writeln!(out, "  b{s} -> b{t} [label=\"{label}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// Representation over `d` corresponding to a representation `me` of the reduced ditalgebra.
pub fn expand_edge(d: &Ditalgebra, red: &EdgeReduction, me: &Representation) -> Result<Representation> {
    let n = d.quiver.n();
    if me.dims.len() != n + 1 {
        return Err(Error::Schema("reduced representation has the wrong number of vertices".into()));
    }
    let (i0, j0, z) = (red.i0, red.j0, red.z);
    let mz = me.dims[z];
    let mut dims: Vec<usize> = me.dims[..n].to_vec();
    dims[i0] += mz;
    dims[j0] += mz;
    // Offset of each copy inside the expanded space: original part first, z part second.
    let copy_offset = |v: usize, copy: usize| if copy == z { me.dims[v] } else { 0 };
    let mut out = Representation::zero(&d.quiver, dims.clone());
    for (b, beta) in d.quiver.arrows.iter().enumerate() {
        if !beta.is_solid() {
            continue;
        }
        let mut mat = Mat::zeros(dims[beta.tgt], dims[beta.src]);
        if b == red.alpha {
            mat.put(me.dims[j0], me.dims[i0], &Mat::identity(mz));
        } else {
            for &(a, s, na) in &red.copies[b] {
                mat.put(copy_offset(beta.tgt, a), copy_offset(beta.src, s), &me.mats[na]);
            }
        }
        out.mats[b] = mat;
    }
    assert_eq!(dims[i0], me.dims[i0] + mz, "dimension formula at the source of the reduced edge");
    assert_eq!(dims[j0], me.dims[j0] + mz, "dimension formula at the target of the reduced edge");
    let reduced = reduced_norm(red, me, d);
    assert_eq!(norm(&d.quiver, &out), dims[i0] * dims[j0] + reduced, "norm identity of the edge reduction");
    Ok(out)
}

fn reduced_norm(red: &EdgeReduction, me: &Representation, d: &Ditalgebra) -> usize {
    red.copies
        .iter()
        .enumerate()
        .filter(|(b, _)| d.arrow(*b).is_solid())
        .flat_map(|(_, cs)| cs.iter())
        .map(|&(a, s, _)| me.dims[a] * me.dims[s])
        .sum()
}

/// Reduced representation of `m` together with the bases of `M_{i₀}` and `M_{j₀}` that put `M_α` in normal form.
pub struct Contraction {
    pub reduced: Representation,
    pub basis_src: Mat,
    pub basis_tgt: Mat,
}

/// Inverse of [`expand_edge`] for modules whose `M_α` is injective or surjective.
pub fn contract_edge(d: &Ditalgebra, red: &EdgeReduction, m: &Representation) -> Result<Contraction> {
    let (i0, j0, z) = (red.i0, red.j0, red.z);
    let ma = &m.mats[red.alpha];
    let (r, ker) = crate::exactlin::rank_kernel(ma);
    if r != m.dims[i0] && r != m.dims[j0] {
        return math(format!(
            "edge contraction: the matrix of {:?} is neither injective nor surjective",
            d.id(red.alpha)
        ));
    }
    // Source basis: kernel first, then a complement u₁..u_r. Target basis: complement of the image, then M_α u_k.
    let ker_mat = Mat::from_fn(m.dims[i0], ker.len(), |row, c| ker[c][row].clone());
    let src = extend_to_basis(&ker_mat, m.dims[i0]);
    let comp = src.slice(0, m.dims[i0], ker.len(), m.dims[i0]);
    let image = ma.mul(&comp);
    let tgt_full = extend_to_basis(&image, m.dims[j0]);
    let extra = tgt_full.slice(0, m.dims[j0], r, m.dims[j0]);
    let tgt = Mat::hstack(&[&extra, &image]);
    let mut basis: Vec<Mat> = m.dims.iter().map(|&k| Mat::identity(k)).collect();
    basis[i0] = src.clone();
    basis[j0] = tgt.clone();
    let normal = m.change_basis(&d.quiver, &basis)?;
    let mut dims: Vec<usize> = m.dims.clone();
    dims[i0] -= r;
    dims[j0] -= r;
    dims.push(r);
    let (rq, _) = pathdit::reduce_edge(d, red.alpha)?;
    let mut reduced = Representation::zero(&rq.quiver, dims.clone());
    let range = |v: usize, copy: usize| {
        if v == i0 || v == j0 {
            if copy == z {
                (dims[v], dims[v] + r)
            } else {
                (0, dims[v])
            }
        } else {
            (0, m.dims[v])
        }
    };
    for (b, beta) in d.quiver.arrows.iter().enumerate() {
        if !beta.is_solid() || b == red.alpha {
            continue;
        }
        for &(a, s, na) in &red.copies[b] {
            let (r0, r1) = range(beta.tgt, a);
            let (c0, c1) = range(beta.src, s);
            reduced.mats[na] = normal.mats[b].slice(r0, r1, c0, c1);
        }
    }
    Ok(Contraction { reduced, basis_src: src, basis_tgt: tgt })
}

/// Appends standard basis vectors to the independent columns of `m` until they span the whole space.
fn extend_to_basis(m: &Mat, n: usize) -> Mat {
    let mut cols: Vec<Vec<Scalar>> = (0..m.cols()).map(|c| m.col(c)).collect();
    for e in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = vec![Scalar::zero(); n];
        v[e] = Scalar::one();
        let mut trial = cols.clone();
        trial.push(v);
        let mat = Mat::from_fn(n, trial.len(), |r, c| trial[c][r].clone());
        if mat.rank() == trial.len() {
            cols = trial;
        }
    }
    Mat::from_fn(n, cols.len(), |r, c| cols[c][r].clone())
}

/// An exceptional representation of a solid acyclic quiver with the given real root as dimension vector.
pub fn realize_root(q: &Biquiver, root: &[i64]) -> Result<Representation> {
    if q.has_dotted() {
        return Err(Error::Schema("realize_root expects a quiver with solid arrows only".into()));
    }
    if root.len() != q.n() || root.iter().any(|&x| x < 0) || root.iter().all(|&x| x == 0) {
        return math("realize_root needs a positive dimension vector");
    }
    let form = FormData::new(q);
    if form.quadratic(root)? != 1 {
        return math(format!("{root:?} is not a root: the quadratic form does not take the value 1"));
    }
    let d = Ditalgebra::zero_diff(q.clone());
    let dims: Vec<usize> = root.iter().map(|&x| x as usize).collect();
    let m = realize_in(&d, &dims)?;
    if !is_exceptional(&d, &m)? {
        return math(format!("the reduction chain for {root:?} did not produce an exceptional module"));
    }
    Ok(m)
}

/// Recursive realization over an arbitrary triangular ditalgebra.
pub fn realize_in(d: &Ditalgebra, dims: &[usize]) -> Result<Representation> {
    let n = d.quiver.n();
    let zero_vertices: Vec<usize> = (0..n).filter(|&v| dims[v] == 0).collect();
    if !zero_vertices.is_empty() {
        let sub = pathdit::delete_vertices(d, &zero_vertices);
        let kept: Vec<usize> = (0..n).filter(|&v| dims[v] != 0).collect();
        let sub_dims: Vec<usize> = kept.iter().map(|&v| dims[v]).collect();
        let sm = realize_in(&sub, &sub_dims)?;
        let mut out = Representation::zero(&d.quiver, dims.to_vec());
        for (b, arrow) in sub.quiver.solid() {
            let orig = d.quiver.arrow(&arrow.id).expect("arrow survives deletion");
            out.mats[orig] = sm.mats[b].clone();
        }
        return Ok(out);
    }
    let (nd, log) = pathdit::normalize_zero_diff(d)?;
    if !log.is_empty() {
        let sm = realize_in(&nd, dims)?;
        let mut out = Representation::zero(&d.quiver, dims.to_vec());
        for (b, arrow) in nd.quiver.solid() {
            let orig = d.quiver.arrow(&arrow.id).expect("arrow survives regularization");
            out.mats[orig] = sm.mats[b].clone();
        }
        return Ok(out);
    }
    if norm_of_dims(&d.quiver, dims) == 0 {
        if dims.iter().sum::<usize>() == 1 {
            return Ok(Representation::zero(&d.quiver, dims.to_vec()));
        }
        return math(format!("reduction reached a semisimple dimension vector {dims:?} that is not a simple"));
    }
    let alpha = d
        .quiver
        .solid()
        .find(|(a, arrow)| arrow.src != arrow.tgt && d.diff[*a].is_empty())
        .map(|(a, _)| a)
        .ok_or_else(|| Error::Math("no solid arrow with zero differential between distinct vertices".into()))?;
    let (rd, red) = pathdit::reduce_edge(d, alpha)?;
    let z = dims[red.i0].min(dims[red.j0]);
    let mut rdims = dims.to_vec();
    rdims[red.i0] -= z;
    rdims[red.j0] -= z;
    rdims.push(z);
    let me = realize_in(&rd, &rdims)?;
    expand_edge(d, &red, &me)
}

/// A tree basis of an exceptional module: the coefficient quiver and the change-of-basis matrices per vertex.
pub struct TreeBasis {
    pub quiver: CoefficientQuiver,
    pub basis: Vec<Mat>,
}

pub fn tree_basis(d: &Ditalgebra, m: &Representation) -> Result<TreeBasis> {
    if !is_exceptional(d, m)? {
        return math("tree basis requested for a module that is not exceptional");
    }
    let r = realize_in(d, &m.dims)?;
    let h = sigma_hom(d, m, &r)?;
    if h.hom != 1 {
        return math("the realized tree module is not isomorphic to the input");
    }
    let f = &h.basis[0];
    let basis: Vec<Mat> = f
        .f0
        .iter()
        .map(|x| x.inverse().ok_or_else(|| Error::Math("morphism to the tree module is not invertible".into())))
        .collect::<Result<_>>()?;
    let quiver = coefficient_quiver(&d.quiver, &r);
    if !quiver.is_tree() {
        return math("coefficient quiver of the realized module is not a tree");
    }
    Ok(TreeBasis { quiver, basis })
}
