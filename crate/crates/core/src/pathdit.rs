//! Ditalgebra presentations: formal sums of paths, differentials, the Leibniz rule and the
//! elementary reductions (change of basis, regularization, edge reduction, deletion).
//!
//! A path is stored in traversal order: its first arrow is applied first. The product
//! `x·y` means "`y` then `x`", and the Leibniz rule reads `δ(x·y) = δ(x)·y + (−1)^{|x|} x·δ(y)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{math, Error, Result};
use crate::exactlin::{format_scalar, int, parse_scalar, Scalar};
use crate::quiver::{Arrow, Biquiver};

/// Formal sum of paths with rational coefficients, kept canonical (sorted, no zero terms).
pub type Sum = BTreeMap<Vec<usize>, Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTerm {
    pub coef: Scalar,
    pub path: Vec<usize>,
}

pub fn add_term(sum: &mut Sum, path: Vec<usize>, coef: Scalar) {
    if coef.is_zero() {
        return;
    }
    match sum.entry(path) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(coef);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += coef;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn add_sum(sum: &mut Sum, other: &Sum, scale: &Scalar) {
    for (p, c) in other {
        add_term(sum, p.clone(), c * scale);
    }
}

pub fn single(path: Vec<usize>, coef: Scalar) -> Sum {
    let mut s = Sum::new();
    add_term(&mut s, path, coef);
    s
}

/// Expands every term of `sum` after replacing the arrows in `map` by formal sums.
pub fn substitute(sum: &Sum, map: &HashMap<usize, Sum>) -> Sum {
    let mut out = Sum::new();
    for (path, coef) in sum {
        let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(vec![], coef.clone())];
        for &a in path {
            match map.get(&a) {
                None => {
                    for (p, _) in partial.iter_mut() {
                        p.push(a);
                    }
                }
                Some(rep) => {
                    let mut next = Vec::with_capacity(partial.len() * rep.len());
                    for (p, c) in &partial {
                        for (rp, rc) in rep {
                            let mut q = p.clone();
                            q.extend_from_slice(rp);
                            next.push((q, c * rc));
                        }
                    }
                    partial = next;
                }
            }
        }
        for (p, c) in partial {
            add_term(&mut out, p, c);
        }
    }
    out
}

/// A biquiver with a differential on its arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ditalgebra {
    pub quiver: Biquiver,
    /// `diff[a]` is the differential of arrow `a`.
    pub diff: Vec<Sum>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coef: String,
    path: Vec<String>,
}

impl Ditalgebra {
    pub fn zero_diff(quiver: Biquiver) -> Ditalgebra {
        let n = quiver.arrows.len();
        Ditalgebra { quiver, diff: vec![Sum::new(); n] }
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.quiver.arrows[a]
    }

    pub fn id(&self, a: usize) -> &str {
        &self.quiver.arrows[a].id
    }

    pub fn has_zero_diff(&self) -> bool {
        self.diff.iter().all(|d| d.is_empty())
    }

    pub fn set_diff(&mut self, arrow: &str, terms: &[(i64, &[&str])]) {
        let a = self.quiver.arrow(arrow).unwrap_or_else(|| panic!("no arrow {arrow}"));
        let mut s = Sum::new();
        for (c, path) in terms {
            let p = path.iter().map(|id| self.quiver.arrow(id).unwrap_or_else(|| panic!("no arrow {id}"))).collect();
            add_term(&mut s, p, int(*c));
        }
        self.diff[a] = s;
    }

    pub fn path_ids(&self, path: &[usize]) -> Vec<String> {
        path.iter().map(|&a| self.id(a).to_string()).collect()
    }

    pub fn format_sum(&self, s: &Sum) -> String {
        if s.is_empty() {
            return "0".into();
        }
        s.iter()
            .map(|(p, c)| {
                let word: Vec<&str> = p.iter().rev().map(|&a| self.id(a)).collect();
                format!("{}·{}", format_scalar(c), word.join("∘"))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Checks composability, endpoints and degrees of every differential term.
    pub fn validate(&self) -> Result<()> {
        self.quiver.validate()?;
        if self.diff.len() != self.quiver.arrows.len() {
            return Err(Error::Schema("differential table size does not match the arrow count".into()));
        }
        for (a, d) in self.diff.iter().enumerate() {
            let arrow = self.arrow(a);
            for path in d.keys() {
                self.check_path(path)?;
                let first = self.arrow(path[0]);
                let last = self.arrow(*path.last().expect("nonempty"));
                if first.src != arrow.src || last.tgt != arrow.tgt {
                    return Err(Error::Schema(format!(
                        "differential of {:?} has a term {:?} with different endpoints",
                        arrow.id,
                        self.path_ids(path)
                    )));
                }
                let deg: u32 = path.iter().map(|&b| self.arrow(b).degree as u32).sum();
                if deg != arrow.degree as u32 + 1 {
                    return Err(Error::Schema(format!(
                        "differential of {:?} has a term {:?} of degree {deg}",
                        arrow.id,
                        self.path_ids(path)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn check_path(&self, path: &[usize]) -> Result<()> {
        if path.is_empty() {
            return Err(Error::Schema("empty path in a differential".into()));
        }
        for w in path.windows(2) {
            if self.arrow(w[0]).tgt != self.arrow(w[1]).src {
                return Err(Error::Schema(format!("path {:?} is not composable", self.path_ids(path))));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.quiver.to_json();
        let mut diff = serde_json::Map::new();
        for (a, d) in self.diff.iter().enumerate() {
            if d.is_empty() {
                continue;
            }
            let terms: Vec<TermJson> =
                d.iter().map(|(p, c)| TermJson { coef: format_scalar(c), path: self.path_ids(p) }).collect();
            diff.insert(self.id(a).to_string(), serde_json::to_value(terms).expect("terms serialize"));
        }
        v["diff"] = serde_json::Value::Object(diff);
        v
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Ditalgebra> {
        let quiver = Biquiver::from_json(v)?;
        let mut d = Ditalgebra::zero_diff(quiver);
        if let Some(diff) = v.get("diff") {
            let obj = diff.as_object().ok_or_else(|| Error::Schema("\"diff\" must be an object".into()))?;
            for (id, terms) in obj {
                let a = d.quiver.arrow(id).ok_or_else(|| Error::Schema(format!("diff: unknown arrow {id:?}")))?;
                let terms: Vec<TermJson> = serde_json::from_value(terms.clone())
                    .map_err(|e| Error::Schema(format!("diff of {id:?}: {e}")))?;
                let mut s = Sum::new();
                for t in terms {
                    let mut p = Vec::new();
                    for x in &t.path {
                        p.push(
                            d.quiver
                                .arrow(x)
                                .ok_or_else(|| Error::Schema(format!("diff of {id:?}: unknown arrow {x:?}")))?,
                        );
                    }
                    add_term(&mut s, p, parse_scalar(&t.coef)?);
                }
                d.diff[a] = s;
            }
        }
        d.validate()?;
        Ok(d)
    }
}

/// `δ` of a single path, expanded by the Leibniz rule.
pub fn leibniz_apply(d: &Ditalgebra, path: &[usize]) -> Result<Sum> {
    d.check_path(path)?;
    let mut out = Sum::new();
    for j in 0..path.len() {
        let later: u32 = path[j + 1..].iter().map(|&a| d.arrow(a).degree as u32).sum();
        let sign = if later % 2 == 0 { int(1) } else { int(-1) };
        for (p, c) in &d.diff[path[j]] {
            let mut q = path[..j].to_vec();
            q.extend_from_slice(p);
            q.extend_from_slice(&path[j + 1..]);
            add_term(&mut out, q, c * &sign);
        }
    }
    Ok(out)
}

pub fn leibniz_sum(d: &Ditalgebra, s: &Sum) -> Result<Sum> {
    let mut out = Sum::new();
    for (p, c) in s {
        add_sum(&mut out, &leibniz_apply(d, p)?, c);
    }
    Ok(out)
}

/// A generator whose differential does not square to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredFailure {
    pub arrow: String,
    pub residue: String,
}

pub fn check_d_squared(d: &Ditalgebra) -> std::result::Result<(), DSquaredFailure> {
    for a in 0..d.quiver.arrows.len() {
        let r = leibniz_sum(d, &d.diff[a]).map_err(|e| DSquaredFailure { arrow: d.id(a).into(), residue: e.to_string() })?;
        if !r.is_empty() {
            return Err(DSquaredFailure { arrow: d.id(a).to_string(), residue: d.format_sum(&r) });
        }
    }
    Ok(())
}

/// Orders of solid and dotted arrows in which each differential only mentions smaller arrows of the same kind.
pub fn check_triangular(d: &Ditalgebra) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut orders = Vec::new();
    for degree in [0u8, 1u8] {
        let arrows: Vec<usize> = (0..d.quiver.arrows.len()).filter(|&a| d.arrow(a).degree == degree).collect();
        let mut deps: HashMap<usize, Vec<usize>> = HashMap::new();
        for &a in &arrows {
            let mut ds: Vec<usize> =
                d.diff[a].keys().flatten().copied().filter(|&b| d.arrow(b).degree == degree).collect();
            ds.sort_unstable();
            ds.dedup();
            deps.insert(a, ds);
        }
        let mut placed: HashMap<usize, bool> = arrows.iter().map(|&a| (a, false)).collect();
        let mut order = Vec::new();
        while order.len() < arrows.len() {
            let next = arrows.iter().copied().find(|a| !placed[a] && deps[a].iter().all(|b| placed[b]));
            match next {
                Some(a) => {
                    placed.insert(a, true);
                    order.push(a);
                }
                None => {
                    let stuck = arrows.iter().find(|a| !placed[a]).expect("unplaced arrow");
                    return math(format!("differential is not triangular: dependency cycle through {:?}", d.id(*stuck)));
                }
            }
        }
        orders.push(order);
    }
    let dotted = orders.pop().expect("two orders");
    let solid = orders.pop().expect("two orders");
    Ok((solid, dotted))
}

/// Keeps the arrows with `keep[a]` true, renumbering them and dropping differential terms through removed arrows.
fn restrict_arrows(d: &Ditalgebra, keep: &[bool], vertex_map: &[Option<usize>], vertices: Vec<String>) -> Ditalgebra {
    let mut arrow_map = vec![None; keep.len()];
    let mut q = Biquiver::with_vertices(vertices);
    for (a, arrow) in d.quiver.arrows.iter().enumerate() {
        if keep[a] {
            let (Some(s), Some(t)) = (vertex_map[arrow.src], vertex_map[arrow.tgt]) else {
                continue;
            };
            arrow_map[a] = Some(q.add_arrow(arrow.id.clone(), s, t, arrow.degree));
        }
    }
    let mut diff = vec![Sum::new(); q.arrows.len()];
    for (a, m) in arrow_map.iter().enumerate() {
        let Some(na) = m else { continue };
        for (p, c) in &d.diff[a] {
            let np: Option<Vec<usize>> = p.iter().map(|&b| arrow_map[b]).collect();
            if let Some(np) = np {
                add_term(&mut diff[*na], np, c.clone());
            }
        }
    }
    Ditalgebra { quiver: q, diff }
}

/// Full sub-ditalgebra on the vertices outside `remove`.
pub fn delete_vertices(d: &Ditalgebra, remove: &[usize]) -> Ditalgebra {
    let n = d.quiver.n();
    let mut vertex_map = vec![None; n];
    let mut labels = Vec::new();
    for v in 0..n {
        if !remove.contains(&v) {
            vertex_map[v] = Some(labels.len());
            labels.push(d.quiver.vertices[v].clone());
        }
    }
    let keep = vec![true; d.quiver.arrows.len()];
    restrict_arrows(d, &keep, &vertex_map, labels)
}

/// Replaces `γ_r` (the last of `gammas`) by the combination `Σ c_i γ_i`, keeping its id.
pub fn change_basis(d: &Ditalgebra, gammas: &[usize], coeffs: &[Scalar]) -> Result<Ditalgebra> {
    if gammas.is_empty() || gammas.len() != coeffs.len() {
        return Err(Error::Schema("change of basis needs matching arrows and coefficients".into()));
    }
    let r = *gammas.last().expect("nonempty");
    let cr = coeffs.last().expect("nonempty").clone();
    if cr.is_zero() {
        return math("change of basis: leading coefficient is zero");
    }
    let head = d.arrow(r).clone();
    for &g in gammas {
        let a = d.arrow(g);
        if a.degree != 1 || a.src != head.src || a.tgt != head.tgt {
            return math(format!("change of basis: {:?} is not a dotted arrow parallel to {:?}", a.id, head.id));
        }
    }
    // old γ_r = (new γ_r − Σ_{i<r} c_i γ_i) / c_r
    let mut rep = Sum::new();
    add_term(&mut rep, vec![r], cr.recip());
    for (&g, c) in gammas.iter().zip(coeffs).take(gammas.len() - 1) {
        add_term(&mut rep, vec![g], -(c / &cr));
    }
    let map: HashMap<usize, Sum> = [(r, rep)].into_iter().collect();
    let mut out = d.clone();
    for a in 0..d.quiver.arrows.len() {
        if a != r {
            out.diff[a] = substitute(&d.diff[a], &map);
        }
    }
    let mut new_dr = Sum::new();
    for (&g, c) in gammas.iter().zip(coeffs) {
        add_sum(&mut new_dr, &d.diff[g], c);
    }
    out.diff[r] = substitute(&new_dr, &map);
    Ok(out)
}

/// Removes a solid arrow `α` whose differential is `γ + rest` (γ dotted, coefficient 1, absent from `rest`),
/// together with `γ`, substituting `α ↦ 0` and `γ ↦ −rest` everywhere else.
pub fn regularize(d: &Ditalgebra, alpha: usize) -> Result<Ditalgebra> {
    if d.arrow(alpha).degree != 0 {
        return math(format!("regularization: {:?} is not solid", d.id(alpha)));
    }
    let da = &d.diff[alpha];
    let gamma = da
        .iter()
        .filter(|(p, c)| p.len() == 1 && c.is_one() && d.arrow(p[0]).degree == 1)
        .map(|(p, _)| p[0])
        .filter(|&g| da.keys().filter(|p| p.contains(&g)).count() == 1)
        .max()
        .ok_or_else(|| {
            Error::Math(format!(
                "regularization of {:?} needs a differential with a dotted arrow of coefficient 1, found {}",
                d.id(alpha),
                d.format_sum(da)
            ))
        })?;
    let mut rest = da.clone();
    rest.remove(&vec![gamma]);
    let mut neg = Sum::new();
    add_sum(&mut neg, &rest, &int(-1));
    let map: HashMap<usize, Sum> = [(alpha, Sum::new()), (gamma, neg)].into_iter().collect();
    let mut sub = d.clone();
    for a in 0..d.quiver.arrows.len() {
        sub.diff[a] = if a == alpha || a == gamma { Sum::new() } else { substitute(&d.diff[a], &map) };
    }
    let keep: Vec<bool> = (0..d.quiver.arrows.len()).map(|a| a != alpha && a != gamma).collect();
    let vmap: Vec<Option<usize>> = (0..d.quiver.n()).map(Some).collect();
    Ok(restrict_arrows(&sub, &keep, &vmap, d.quiver.vertices.clone()))
}

/// Bookkeeping for the edge reduction: where the copies of each old arrow live.
#[derive(Clone, Debug)]
pub struct EdgeReduction {
    pub alpha: usize,
    pub i0: usize,
    pub j0: usize,
    /// Index of the new vertex.
    pub z: usize,
    /// `copies[β]` lists `(target copy, source copy, new arrow)` for every old arrow `β ≠ α`.
    pub copies: Vec<Vec<(usize, usize, usize)>>,
    pub mu: usize,
    pub nu: usize,
}

impl EdgeReduction {
    /// The vertices standing for old vertex `v` in the reduced quiver.
    pub fn vertex_copies(&self, v: usize) -> Vec<usize> {
        if v == self.i0 || v == self.j0 {
            vec![v, self.z]
        } else {
            vec![v]
        }
    }

    pub fn copy(&self, beta: usize, tgt: usize, src: usize) -> usize {
        self.copies[beta]
            .iter()
            .find(|(t, s, _)| *t == tgt && *s == src)
            .map(|(_, _, a)| *a)
            .expect("arrow copy exists")
    }
}

fn fresh_label(q: &Biquiver, base: &str) -> String {
    if q.vertex(base).is_none() {
        return base.to_string();
    }
    (1..).map(|k| format!("{base}{k}")).find(|l| q.vertex(l).is_none()).expect("unbounded search")
}

/// Reduction of the zero-differential solid arrow `α: i₀ → j₀`.
pub fn reduce_edge(d: &Ditalgebra, alpha: usize) -> Result<(Ditalgebra, EdgeReduction)> {
    let arrow = d.arrow(alpha).clone();
    if arrow.degree != 0 {
        return math(format!("edge reduction: {:?} is not a solid arrow", arrow.id));
    }
    if !d.diff[alpha].is_empty() {
        return math(format!("edge reduction: {:?} has nonzero differential", arrow.id));
    }
    if arrow.src == arrow.tgt {
        return math(format!("edge reduction: {:?} is a loop", arrow.id));
    }
    let (i0, j0) = (arrow.src, arrow.tgt);
    let mut q = Biquiver::with_vertices(d.quiver.vertices.clone());
    let zlabel = fresh_label(&d.quiver, &format!("z{}", d.quiver.n() + 1));
    let z = q.add_vertex(zlabel.clone());
    let copies_of = |v: usize| if v == i0 || v == j0 { vec![v, z] } else { vec![v] };
    let mut copies = vec![Vec::new(); d.quiver.arrows.len()];
    for (b, beta) in d.quiver.arrows.iter().enumerate() {
        if b == alpha {
            continue;
        }
        for &a in &copies_of(beta.tgt) {
            for &s in &copies_of(beta.src) {
                let mut id = beta.id.clone();
                if s == z {
                    id = format!("{id}.{zlabel}");
                }
                if a == z {
                    id = format!("{zlabel}.{id}");
                }
                let na = q.add_arrow(id, s, a, beta.degree);
                copies[b].push((a, s, na));
            }
        }
    }
    let mu = q.add_arrow(format!("{}.mu", arrow.id), j0, z, 1);
    let nu = q.add_arrow(format!("{}.nu", arrow.id), z, i0, 1);
    let red = EdgeReduction { alpha, i0, j0, z, copies, mu, nu };
    let mut diff = vec![Sum::new(); q.arrows.len()];
    for (b, beta) in d.quiver.arrows.iter().enumerate() {
        if b == alpha {
            continue;
        }
        for &(a, s, na) in &red.copies[b] {
            let mut sum = expand_blocks(d, &red, &d.diff[b], a, s);
            let sign = if beta.degree == 0 { int(-1) } else { int(1) };
            if beta.src == i0 && s == z {
                add_term(&mut sum, vec![nu, red.copy(b, a, i0)], sign.clone());
            }
            if beta.src == j0 && s == j0 {
                add_term(&mut sum, vec![mu, red.copy(b, a, z)], sign.clone());
            }
            if beta.tgt == i0 && a == i0 {
                add_term(&mut sum, vec![red.copy(b, z, s), nu], int(1));
            }
            if beta.tgt == j0 && a == z {
                add_term(&mut sum, vec![red.copy(b, j0, s), mu], int(1));
            }
            diff[na] = sum;
        }
    }
    Ok((Ditalgebra { quiver: q, diff }, red))
}

/// Block `(a, b)` of a formal sum after every arrow is split along the vertex copies.
fn expand_blocks(d: &Ditalgebra, red: &EdgeReduction, sum: &Sum, a: usize, b: usize) -> Sum {
    let mut out = Sum::new();
    for (path, coef) in sum {
        // Each partial word carries the copy of the current vertex.
        let mut partial: Vec<(Vec<usize>, usize)> = vec![(vec![], b)];
        for &x in path {
            let mut next = Vec::new();
            for (word, cur) in &partial {
                if x == red.alpha {
                    if *cur == red.z {
                        next.push((word.clone(), red.z));
                    }
                    continue;
                }
                let tgt = d.arrow(x).tgt;
                for &(t, s, na) in &red.copies[x] {
                    debug_assert!(red.vertex_copies(tgt).contains(&t));
                    if s == *cur {
                        let mut w = word.clone();
                        w.push(na);
                        next.push((w, t));
                    }
                }
            }
            partial = next;
        }
        for (word, end) in partial {
            if end == a && !word.is_empty() {
                add_term(&mut out, word, coef.clone());
            }
        }
    }
    out
}

/// One step recorded by [`normalize_zero_diff`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeStep {
    ChangeBasis { dotted: Vec<String>, coeffs: Vec<Scalar> },
    Regularize { solid: String, dotted: String },
}

/// Regularizes minimal solid arrows until none are left or one has zero differential.
pub fn normalize_zero_diff(d: &Ditalgebra) -> Result<(Ditalgebra, Vec<NormalizeStep>)> {
    let mut cur = d.clone();
    let mut log = Vec::new();
    loop {
        let solid: Vec<usize> = cur.quiver.solid().map(|(a, _)| a).collect();
        if solid.is_empty() || solid.iter().any(|&a| cur.diff[a].is_empty()) {
            return Ok((cur, log));
        }
        let (order, dotted_order) = check_triangular(&cur)?;
        let alpha = order[0];
        let da = cur.diff[alpha].clone();
        if da.keys().any(|p| p.len() != 1) {
            return math(format!(
                "normalization: minimal solid arrow {:?} has differential {} with composite terms",
                cur.id(alpha),
                cur.format_sum(&da)
            ));
        }
        let rank_of = |g: usize| dotted_order.iter().position(|&x| x == g).expect("dotted arrow ordered");
        let mut gammas: Vec<(usize, Scalar)> = da.iter().map(|(p, c)| (p[0], c.clone())).collect();
        gammas.sort_by_key(|(g, _)| rank_of(*g));
        if gammas.len() > 1 || !gammas[0].1.is_one() {
            let ids: Vec<usize> = gammas.iter().map(|(g, _)| *g).collect();
            let cs: Vec<Scalar> = gammas.iter().map(|(_, c)| c.clone()).collect();
            cur = change_basis(&cur, &ids, &cs)?;
            log.push(NormalizeStep::ChangeBasis { dotted: cur.path_ids(&ids), coeffs: cs });
        }
        let gamma = gammas.last().expect("nonempty").0;
        let step = NormalizeStep::Regularize { solid: cur.id(alpha).to_string(), dotted: cur.id(gamma).to_string() };
        cur = regularize(&cur, alpha)?;
        log.push(step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;

    fn k2x_chain() -> Ditalgebra {
        // Vertices 2 and ω; the reduced Kronecker ditalgebra before the last two regularizations.
        let mut q = Biquiver::with_vertices(["2", "w"]);
        q.add_arrow("alpha", 0, 0, 0);
        q.add_arrow("alpha'", 0, 1, 0);
        q.add_arrow("alpha1", 1, 1, 0);
        q.add_arrow("alpha1'", 1, 0, 0);
        q.add_arrow("beta", 1, 0, 1);
        q.add_arrow("beta1", 1, 1, 1);
        q.add_arrow("beta1'", 1, 0, 1);
        Ditalgebra::zero_diff(q)
    }

    fn k2x_target() -> Ditalgebra {
        let mut q = Biquiver::with_vertices(["2", "w"]);
        q.add_arrow("alpha", 0, 0, 0);
        q.add_arrow("alpha'", 0, 1, 0);
        q.add_arrow("beta", 1, 0, 1);
        let mut d = Ditalgebra::zero_diff(q);
        d.set_diff("alpha", &[(1, &["alpha'", "beta"])]);
        d
    }

    #[test]
    fn leibniz_examples() {
        let mut q = Biquiver::with_vertices(["1", "2", "3"]);
        q.add_arrow("b", 0, 1, 0);
        q.add_arrow("a", 1, 2, 0);
        q.add_arrow("g", 1, 2, 1);
        q.add_arrow("h", 0, 1, 1);
        let mut d = Ditalgebra::zero_diff(q);
        d.set_diff("a", &[(1, &["g"])]);
        d.set_diff("b", &[(1, &["h"])]);
        assert_eq!(leibniz_apply(&d, &[1]).unwrap(), single(vec![2], int(1)));
        // δ(a·b) = g·b + a·h
        let s = leibniz_apply(&d, &[0, 1]).unwrap();
        assert_eq!(s.get(&vec![0, 2]), Some(&int(1)));
        assert_eq!(s.get(&vec![3, 1]), Some(&int(1)));
        // δ(g·b) = −g·h since |g| = 1
        let s = leibniz_apply(&d, &[0, 2]).unwrap();
        assert_eq!(s, single(vec![3, 2], int(-1)));
    }

    #[test]
    fn d_squared_detects_failure() {
        let mut q = Biquiver::with_vertices(["1", "2"]);
        q.add_arrow("a", 0, 1, 0);
        q.add_arrow("g", 0, 1, 1);
        q.add_arrow("g1", 0, 1, 1);
        q.add_arrow("g2", 1, 1, 1);
        let mut d = Ditalgebra::zero_diff(q);
        assert!(check_d_squared(&d).is_ok());
        d.set_diff("a", &[(1, &["g"])]);
        d.set_diff("g", &[(1, &["g1", "g2"])]);
        let err = check_d_squared(&d).unwrap_err();
        assert_eq!(err.arrow, "a");
    }

    #[test]
    fn triangular_detection() {
        let mut q = Biquiver::with_vertices(["1"]);
        q.add_arrow("a", 0, 0, 0);
        q.add_arrow("g", 0, 0, 1);
        let mut d = Ditalgebra::zero_diff(q);
        assert!(check_triangular(&d).is_ok());
        d.set_diff("a", &[(1, &["a", "g"])]);
        assert!(check_triangular(&d).is_err());
    }

    #[test]
    fn regularize_toy() {
        let mut q = Biquiver::with_vertices(["1", "2"]);
        q.add_arrow("a", 0, 1, 0);
        q.add_arrow("g", 0, 1, 1);
        let mut d = Ditalgebra::zero_diff(q);
        d.set_diff("a", &[(1, &["g"])]);
        let r = regularize(&d, 0).unwrap();
        assert!(r.quiver.arrows.is_empty());
        assert_eq!(r.quiver.n(), 2);
    }

    #[test]
    fn regularize_kronecker_chain() {
        // Hatted presentation: δ(α₁) = β₁, δ(α₁') = β₁'.
        let mut d = k2x_chain();
        d.set_diff("alpha", &[(1, &["alpha'", "beta"])]);
        d.set_diff("alpha1", &[(1, &["beta1"])]);
        d.set_diff("alpha1'", &[(1, &["beta1'"])]);
        assert!(check_d_squared(&d).is_ok());
        let r = regularize(&d, d.quiver.arrow("alpha1").unwrap()).unwrap();
        let r = regularize(&r, r.quiver.arrow("alpha1'").unwrap()).unwrap();
        assert_eq!(r, k2x_target());
        // Unhatted presentation: the substitution absorbs the change of variables.
        let mut d = k2x_chain();
        d.set_diff("alpha", &[(1, &["alpha'", "beta"])]);
        d.set_diff("alpha1", &[(1, &["beta1"]), (-1, &["beta", "alpha'"])]);
        d.set_diff("beta1'", &[(1, &["beta1", "beta"])]);
        d.set_diff("alpha1'", &[(1, &["beta1'"]), (1, &["alpha1", "beta"]), (-1, &["beta", "alpha"])]);
        assert!(check_d_squared(&d).is_ok());
        let r = regularize(&d, d.quiver.arrow("alpha1").unwrap()).unwrap();
        assert!(check_d_squared(&r).is_ok());
        let r = regularize(&r, r.quiver.arrow("alpha1'").unwrap()).unwrap();
        assert_eq!(r, k2x_target());
    }

    #[test]
    fn regularizations_commute() {
        let mut d = k2x_chain();
        d.set_diff("alpha", &[(1, &["alpha'", "beta"])]);
        d.set_diff("alpha1", &[(1, &["beta1"])]);
        d.set_diff("alpha1'", &[(1, &["beta1'"])]);
        let a = regularize(&d, 2).unwrap();
        let a = regularize(&a, a.quiver.arrow("alpha1'").unwrap()).unwrap();
        let b = regularize(&d, 3).unwrap();
        let b = regularize(&b, b.quiver.arrow("alpha1").unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn change_basis_examples() {
        let mut q = Biquiver::with_vertices(["1", "2"]);
        q.add_arrow("a", 0, 1, 0);
        q.add_arrow("g1", 0, 1, 1);
        q.add_arrow("g2", 0, 1, 1);
        let mut d = Ditalgebra::zero_diff(q);
        d.set_diff("a", &[(2, &["g1"]), (1, &["g2"])]);
        assert_eq!(change_basis(&d, &[1], &[int(1)]).unwrap(), d);
        let c = change_basis(&d, &[1, 2], &[int(2), int(1)]).unwrap();
        assert_eq!(c.diff[0], single(vec![2], int(1)));
        let h = change_basis(&d, &[1, 2], &[int(2), crate::exactlin::ratio(1, 2)]).unwrap();
        assert!(check_d_squared(&h).is_ok());
        assert!(change_basis(&d, &[1, 2], &[int(2), int(0)]).is_err());
    }

    #[test]
    fn reduce_single_arrow() {
        let d = Ditalgebra::zero_diff(catalog::linear_a(2));
        let (r, red) = reduce_edge(&d, 0).unwrap();
        assert_eq!(r.quiver.n(), 3);
        assert_eq!(r.quiver.solid().count(), 0);
        assert_eq!(r.quiver.dotted().count(), 2);
        let mu = r.arrow(red.mu);
        assert_eq!((mu.src, mu.tgt), (red.j0, red.z));
        let nu = r.arrow(red.nu);
        assert_eq!((nu.src, nu.tgt), (red.z, red.i0));
    }

    #[test]
    fn reduce_worked_example_has_loop() {
        // α: 1 → 2 together with β₀: 1 → 2 parallel to it, plus arrows touching one endpoint.
        let mut q = Biquiver::with_vertices(["1", "2", "3", "4"]);
        q.add_arrow("alpha", 0, 1, 0);
        q.add_arrow("beta0", 0, 1, 0);
        q.add_arrow("beta1", 2, 0, 0);
        q.add_arrow("beta2", 1, 3, 0);
        let d = Ditalgebra::zero_diff(q);
        let (r, red) = reduce_edge(&d, 0).unwrap();
        assert!(r.quiver.arrows.iter().any(|a| a.src == red.z && a.tgt == red.z && a.degree == 0));
        assert!(check_d_squared(&r).is_ok());
        assert!(check_triangular(&r).is_ok());
    }

    #[test]
    fn delete_examples() {
        let d = Ditalgebra::zero_diff(catalog::linear_a(3));
        assert_eq!(delete_vertices(&d, &[0, 1, 2]).quiver.n(), 0);
        let mut q = catalog::linear_a(2);
        q.add_vertex("iso");
        let d = Ditalgebra::zero_diff(q);
        assert_eq!(delete_vertices(&d, &[2]).quiver.arrows, d.quiver.arrows);
    }

    #[test]
    fn normalize_identity_cases() {
        let d = Ditalgebra::zero_diff(catalog::kronecker(2));
        let (n, log) = normalize_zero_diff(&d).unwrap();
        assert!(log.is_empty());
        assert_eq!(n, d);
        let mut q = Biquiver::with_vertices(["1", "2"]);
        q.add_arrow("g", 0, 1, 1);
        let d = Ditalgebra::zero_diff(q);
        assert!(normalize_zero_diff(&d).unwrap().1.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let mut d = k2x_chain();
        d.set_diff("alpha", &[(1, &["alpha'", "beta"])]);
        let back = Ditalgebra::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }
}
