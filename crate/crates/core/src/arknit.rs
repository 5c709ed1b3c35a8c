//! Auslander–Reiten quivers of Dynkin quivers by knitting dimension vectors, wings of the
//! maximal-root vertex, the boundary sets `ConL`/`ConR`, and sections with Coxeter stepping.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::json;

use crate::error::{math, Error, Result};
use crate::quiver::{self, Biquiver};
use crate::rootlat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrVertex {
    /// The orbit is indexed by the vertex `i` of the base quiver: this is `τ^{-k} P(i)`.
    pub orbit: usize,
    pub k: usize,
    pub dim: Vec<i64>,
    pub projective: bool,
    pub injective: bool,
}

/// A finite translation quiver whose vertices carry dimension vectors.
#[derive(Clone, Debug)]
pub struct TranslationQuiver {
    pub base: Biquiver,
    pub vertices: Vec<TrVertex>,
    pub arrows: Vec<(usize, usize)>,
    pub tau: Vec<Option<usize>>,
    index: BTreeMap<(usize, usize), usize>,
}

impl TranslationQuiver {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn find(&self, orbit: usize, k: usize) -> Option<usize> {
        self.index.get(&(orbit, k)).copied()
    }

    pub fn vertex_with_dim(&self, dim: &[i64]) -> Option<usize> {
        self.vertices.iter().position(|v| v.dim == dim)
    }

    pub fn tau_inv(&self, x: usize) -> Option<usize> {
        let v = &self.vertices[x];
        self.find(v.orbit, v.k + 1)
    }

    pub fn preds(&self, x: usize) -> Vec<usize> {
        let mut p: Vec<usize> = self.arrows.iter().filter(|a| a.1 == x).map(|a| a.0).collect();
        p.sort_unstable();
        p
    }

    pub fn succs(&self, x: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.arrows.iter().filter(|a| a.0 == x).map(|a| a.1).collect();
        s.sort_unstable();
        s
    }

    /// Predecessors of `x` equal successors of `τx`, with multiplicity, at every non-projective `x`.
    pub fn check_mesh(&self) -> Result<()> {
        for x in 0..self.len() {
            if let Some(t) = self.tau[x] {
                if self.preds(x) != self.succs(t) {
                    return math(format!("mesh condition fails at vertex {}", self.label(x)));
                }
            } else if !self.vertices[x].projective {
                return math(format!("vertex {} has no translate but is not projective", self.label(x)));
            }
        }
        Ok(())
    }

    /// Mesh additivity of the dimension vectors: `dim x + dim τx = Σ dim of predecessors`.
    pub fn check_additive(&self) -> Result<()> {
        for x in 0..self.len() {
            let Some(t) = self.tau[x] else { continue };
            let mut s: Vec<i64> = self.vertices[t].dim.iter().map(|v| -v).collect();
            for p in self.preds(x) {
                for (a, b) in s.iter_mut().zip(&self.vertices[p].dim) {
                    *a += b;
                }
            }
            if s != self.vertices[x].dim {
                return math(format!("dimension vectors are not additive at {}", self.label(x)));
            }
        }
        Ok(())
    }

    /// Vertices `x` with a path `x → … → w`, `x ≠ w`.
    pub fn below(&self, w: usize) -> BTreeSet<usize> {
        self.reach(w, |a| (a.1, a.0))
    }

    /// Vertices `y` with a path `w → … → y`, `y ≠ w`.
    pub fn above(&self, w: usize) -> BTreeSet<usize> {
        self.reach(w, |a| (a.0, a.1))
    }

    fn reach(&self, w: usize, dir: impl Fn(&(usize, usize)) -> (usize, usize)) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![w];
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                let (from, to) = dir(a);
                if from == v && seen.insert(to) {
                    stack.push(to);
                }
            }
        }
        seen
    }

    pub fn is_directed(&self) -> bool {
        (0..self.len()).all(|x| !self.above(x).contains(&x))
    }

    pub fn label(&self, x: usize) -> String {
        let v = &self.vertices[x];
        format!("{}:{}", self.base.vertices[v.orbit], v.k)
    }

    /// DOT with one horizontal rank per τ-orbit.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph AR {\n  node [shape=plaintext];\n");
        for orbit in 0..self.base.n() {
            let members: Vec<usize> = (0..self.len()).filter(|&x| self.vertices[x].orbit == orbit).collect();
            s.push_str("  { rank=same;");
            for x in members {
                write!(s, " v{x};").unwrap();
            }
            s.push_str(" }\n");
        }
        for (x, v) in self.vertices.iter().enumerate() {
            let dim: Vec<String> = v.dim.iter().map(|d| d.to_string()).collect();
            writeln!(s, "  v{x} [label=\"{}\"];", dim.join("")).unwrap();
        }
        for &(a, b) in &self.arrows {
            writeln!(s, "  v{a} -> v{b};").unwrap();
        }
        for (x, t) in self.tau.iter().enumerate() {
            if let Some(t) = t {
                writeln!(s, "  v{x} -> v{t} [style=dashed, constraint=false];").unwrap();
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vs: Vec<_> = self
            .vertices
            .iter()
            .map(|v| {
                json!({
                    "orbit": self.base.vertices[v.orbit],
                    "k": v.k,
                    "dim": v.dim,
                    "projective": v.projective,
                    "injective": v.injective,
                })
            })
            .collect();
        json!({ "vertices": vs, "arrows": self.arrows, "tau": self.tau })
    }
}

/// Knits the preprojective component of a Dynkin quiver, which is its whole AR quiver.
pub fn knit(delta: &Biquiver) -> Result<TranslationQuiver> {
    rootlat::dynkin_data(delta)?;
    let n = delta.n();
    let proj = quiver::projective_vectors(delta)?;
    // Arrow i → j gives P(j) → P(i); computing orbit i at step k needs orbit j at the same step.
    let order = quiver::admissible_order(delta)?;
    let mut dims: Vec<Vec<Vec<i64>>> = proj.iter().map(|p| vec![p.clone()]).collect();
    let mut alive = vec![true; n];
    let get = |dims: &Vec<Vec<Vec<i64>>>, i: usize, k: usize| dims[i].get(k).cloned().unwrap_or_else(|| vec![0; n]);
    let mut k = 0;
    while alive.iter().any(|&a| a) {
        for &i in &order {
            if !alive[i] {
                continue;
            }
            let mut c: Vec<i64> = dims[i][k].iter().map(|v| -v).collect();
            for a in &delta.arrows {
                let term = if a.src == i {
                    get(&dims, a.tgt, k + 1)
                } else if a.tgt == i {
                    get(&dims, a.src, k)
                } else {
                    continue;
                };
                for (x, y) in c.iter_mut().zip(term) {
                    *x += y;
                }
            }
            if c.iter().all(|&v| v >= 0) && c.iter().any(|&v| v > 0) {
                dims[i].push(c);
            } else {
                alive[i] = false;
            }
        }
        k += 1;
        if k > 4 * n * n + 4 {
            return math("knitting did not terminate");
        }
    }

    let mut vertices = Vec::new();
    let mut index = BTreeMap::new();
    for (i, orbit) in dims.iter().enumerate() {
        for (k, d) in orbit.iter().enumerate() {
            index.insert((i, k), vertices.len());
            vertices.push(TrVertex {
                orbit: i,
                k,
                dim: d.clone(),
                projective: k == 0,
                injective: k + 1 == orbit.len(),
            });
        }
    }
    let mut arrows = Vec::new();
    for a in &delta.arrows {
        let (i, j) = (a.src, a.tgt);
        for k in 0.. {
            let mut any = false;
            if let (Some(&x), Some(&y)) = (index.get(&(j, k)), index.get(&(i, k))) {
                arrows.push((x, y));
                any = true;
            }
            if let (Some(&x), Some(&y)) = (index.get(&(i, k)), index.get(&(j, k + 1))) {
                arrows.push((x, y));
                any = true;
            }
            if !any && k >= dims[i].len() && k >= dims[j].len() {
                break;
            }
        }
    }
    arrows.sort_unstable();
    let tau = vertices
        .iter()
        .map(|v| if v.k == 0 { None } else { index.get(&(v.orbit, v.k - 1)).copied() })
        .collect();
    let g = TranslationQuiver { base: delta.clone(), vertices, arrows, tau, index };

    // The orbit of P(i) must follow Φ⁻¹ exactly.
    let phi_inv = quiver::coxeter(delta)?
        .inverse()
        .ok_or_else(|| Error::Math("Coxeter matrix is singular".into()))?;
    for v in &g.vertices {
        if v.k > 0 {
            let prev = &g.vertices[g.find(v.orbit, v.k - 1).unwrap()].dim;
            if quiver::apply(&phi_inv, prev) != v.dim {
                return math(format!("knitted vector {:?} disagrees with the inverse Coxeter matrix", v.dim));
            }
        }
    }
    g.check_mesh()?;
    g.check_additive()?;
    Ok(g)
}

/// The wing `θ(n)` of the maximal-root vertex along one arm of the cosection through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wing {
    pub order: usize,
    /// `cells[i-1][j-1]` is `W_{i,j}` for `1 ≤ i ≤ j ≤ order`; entries with `i > j` are `None`.
    pub cells: Vec<Vec<Option<usize>>>,
}

impl Wing {
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.cells[i - 1][j - 1].expect("wing cell inside the triangle")
    }

    /// Left edge `X_i = W_{1,i}`, `i = 1..order-1`.
    pub fn left(&self) -> Vec<usize> {
        (1..self.order).map(|i| self.at(1, i)).collect()
    }

    /// Right edge `Y_i = W_{i,order}`, `i = 2..order`.
    pub fn right(&self) -> Vec<usize> {
        (2..=self.order).map(|i| self.at(i, self.order)).collect()
    }

    pub fn members(&self) -> Vec<usize> {
        self.cells.iter().flatten().flatten().copied().collect()
    }
}

/// Boundary sets of a vertex `w`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Boundary {
    pub conl: BTreeSet<usize>,
    pub conr: BTreeSet<usize>,
    pub conl0: BTreeSet<usize>,
    pub conr0: BTreeSet<usize>,
}

pub fn boundary_sets(g: &TranslationQuiver, w: usize) -> Boundary {
    let conl = g.below(w);
    let conr = g.above(w);
    let conl0 = conl
        .iter()
        .copied()
        .filter(|&x| match g.tau_inv(x) {
            None => true,
            Some(t) => t != w && !conl.contains(&t),
        })
        .collect();
    let conr0 = conr
        .iter()
        .copied()
        .filter(|&y| match g.tau[y] {
            None => true,
            Some(t) => t != w && !conr.contains(&t),
        })
        .collect();
    Boundary { conl, conr, conl0, conr0 }
}

/// Wings of `w` read off the star `{w} ∪ ConL₀(w)`, ordered by decreasing order.
pub fn wing_data(g: &TranslationQuiver, w: usize) -> Result<Vec<Wing>> {
    let b = boundary_sets(g, w);
    let star: BTreeSet<usize> = b.conl0.iter().copied().chain([w]).collect();
    let adj = |x: usize| -> Vec<usize> {
        let mut v: Vec<usize> = g
            .arrows
            .iter()
            .filter_map(|&(a, c)| {
                if a == x && star.contains(&c) {
                    Some(c)
                } else if c == x && star.contains(&a) {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut arms = Vec::new();
    for first in adj(w) {
        let mut arm = vec![first];
        let (mut prev, mut cur) = (w, first);
        loop {
            let next: Vec<usize> = adj(cur).into_iter().filter(|&x| x != prev).collect();
            match next.as_slice() {
                [] => break,
                [x] => {
                    arm.push(*x);
                    prev = cur;
                    cur = *x;
                }
                _ => return math(format!("vertex {} is not a wing vertex: its cosection branches twice", g.label(w))),
            }
        }
        arms.push(arm);
    }
    if arms.iter().map(|a| a.len()).sum::<usize>() != b.conl0.len() {
        return math(format!("vertex {} is not a wing vertex: its cosection is not a star", g.label(w)));
    }
    let mut wings = Vec::new();
    for arm in arms {
        let order = arm.len() + 1;
        let mut cells = vec![vec![None; order]; order];
        for j in 1..=order {
            let mut x = if j == order { w } else { arm[order - j - 1] };
            // W_{i,i+j-1} = τ^{-(i-1)} W_{1,j}
            for i in 1..=order + 1 - j {
                cells[i - 1][i + j - 2] = Some(x);
                if i + j - 1 < order {
                    x = g.tau_inv(x).ok_or_else(|| {
                        Error::Math(format!("vertex {} is not a wing vertex: wing leaves the quiver", g.label(w)))
                    })?;
                }
            }
        }
        wings.push(Wing { order, cells });
    }
    wings.sort_by_key(|wg| std::cmp::Reverse(wg.order));
    Ok(wings)
}

/// The vertex labelled by the maximal root.
pub fn max_root_vertex(g: &TranslationQuiver) -> Result<usize> {
    let d = rootlat::dynkin_data(&g.base)?;
    g.vertex_with_dim(&d.max_root)
        .ok_or_else(|| Error::Math("maximal root missing from the knitted quiver".into()))
}

/// A set of vertices meeting each orbit once, with the full subquiver it spans.
#[derive(Clone, Debug)]
pub struct Section {
    pub vertices: Vec<usize>,
    pub shape: Biquiver,
}

impl Section {
    pub fn new(g: &TranslationQuiver, vertices: Vec<usize>) -> Result<Section> {
        let orbits: BTreeSet<usize> = vertices.iter().map(|&x| g.vertices[x].orbit).collect();
        if orbits.len() != vertices.len() || orbits.len() != g.base.n() {
            return math("a section meets every orbit exactly once");
        }
        let mut shape = Biquiver::with_vertices(vertices.iter().map(|&x| g.label(x)));
        for &(a, b) in &g.arrows {
            if let (Some(i), Some(j)) =
                (vertices.iter().position(|&v| v == a), vertices.iter().position(|&v| v == b))
            {
                let id = format!("s{}", shape.arrows.len());
                shape.add_arrow(id, i, j, 0);
            }
        }
        Ok(Section { vertices, shape })
    }

    pub fn contains(&self, x: usize) -> bool {
        self.vertices.contains(&x)
    }
}

pub fn is_section(g: &TranslationQuiver, s: &[usize]) -> bool {
    !s.is_empty()
        && s.iter().all(|&x| {
            g.tau[x].is_none_or(|t| !s.contains(&t))
                && g.succs(x).into_iter().all(|m| s.contains(&m) || g.tau[m].is_some_and(|t| s.contains(&t)))
        })
}

pub fn is_cosection(g: &TranslationQuiver, s: &[usize]) -> bool {
    !s.is_empty()
        && s.iter().all(|&y| {
            g.tau_inv(y).is_none_or(|t| !s.contains(&t))
                && g.preds(y).into_iter().all(|m| s.contains(&m) || g.tau_inv(m).is_some_and(|t| s.contains(&t)))
        })
}

/// Values of an additive function on `τS` from its values on `S` via `Φ` of the section's shape.
/// `f[r]` is the value (a vector) at `s.vertices[r]`; the result is indexed the same way.
pub fn section_step(g: &TranslationQuiver, s: &Section, f: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    if s.vertices.iter().any(|&x| g.tau[x].is_none()) {
        return math("section_step needs a cosection without projective vertices");
    }
    if !is_cosection(g, &s.vertices) {
        return math("section_step needs a cosection");
    }
    if f.len() != s.vertices.len() {
        return Err(Error::Schema(format!("{} values for a section of {} vertices", f.len(), s.vertices.len())));
    }
    let phi = quiver::coxeter(&s.shape)?;
    let width = f.first().map_or(0, |v| v.len());
    let mut out = vec![vec![0i64; width]; f.len()];
    for c in 0..width {
        let col: Vec<i64> = f.iter().map(|v| v[c]).collect();
        for (r, x) in quiver::apply(&phi, &col).into_iter().enumerate() {
            out[r][c] = x;
        }
    }
    Ok(out)
}

/// The cosection `{w} ∪ ConL₀(w)` as a [`Section`].
pub fn left_cosection(g: &TranslationQuiver, w: usize) -> Result<Section> {
    let b = boundary_sets(g, w);
    let mut v: Vec<usize> = b.conl0.into_iter().collect();
    v.push(w);
    Section::new(g, v)
}
