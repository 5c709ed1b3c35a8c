//! Biquivers, their incidence and Cartan matrices, the Euler form, reflections and Coxeter matrices.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{math, Error, Result};
use crate::exactlin::{int, to_i64, Mat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
    /// 0 for solid arrows, 1 for dotted arrows.
    pub degree: u8,
}

impl Arrow {
    pub fn is_solid(&self) -> bool {
        self.degree == 0
    }
}

/// A finite quiver whose arrows are solid (degree 0) or dotted (degree 1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Biquiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    id: String,
    src: String,
    tgt: String,
    degree: u8,
}

#[derive(Serialize, Deserialize)]
struct BiquiverJson {
    vertices: Vec<String>,
    arrows: Vec<ArrowJson>,
}

impl Biquiver {
    pub fn new() -> Biquiver {
        Biquiver::default()
    }

    pub fn with_vertices<S: ToString>(labels: impl IntoIterator<Item = S>) -> Biquiver {
        Biquiver { vertices: labels.into_iter().map(|s| s.to_string()).collect(), arrows: vec![] }
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.vertices.push(label.into());
        self.vertices.len() - 1
    }

    pub fn add_arrow(&mut self, id: impl Into<String>, src: usize, tgt: usize, degree: u8) -> usize {
        self.arrows.push(Arrow { id: id.into(), src, tgt, degree });
        self.arrows.len() - 1
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn solid(&self) -> impl Iterator<Item = (usize, &Arrow)> {
        self.arrows.iter().enumerate().filter(|(_, a)| a.degree == 0)
    }

    pub fn dotted(&self) -> impl Iterator<Item = (usize, &Arrow)> {
        self.arrows.iter().enumerate().filter(|(_, a)| a.degree == 1)
    }

    pub fn has_dotted(&self) -> bool {
        self.arrows.iter().any(|a| a.degree == 1)
    }

    /// Checks endpoint validity, degrees and id uniqueness.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(Error::Schema(format!("duplicate vertex label {v:?}")));
            }
        }
        let mut ids = HashMap::new();
        for a in &self.arrows {
            if a.src >= self.n() || a.tgt >= self.n() {
                return Err(Error::Schema(format!("arrow {:?} has an invalid endpoint", a.id)));
            }
            if a.degree > 1 {
                return Err(Error::Schema(format!("arrow {:?} has degree {}, expected 0 or 1", a.id, a.degree)));
            }
            if ids.insert(a.id.clone(), ()).is_some() {
                return Err(Error::Schema(format!("duplicate arrow id {:?}", a.id)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = BiquiverJson {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    id: a.id.clone(),
                    src: self.vertices[a.src].clone(),
                    tgt: self.vertices[a.tgt].clone(),
                    degree: a.degree,
                })
                .collect(),
        };
        serde_json::to_value(j).expect("biquiver serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Biquiver> {
        let j: BiquiverJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Schema(format!("biquiver: {e}")))?;
        let mut q = Biquiver::with_vertices(j.vertices);
        for a in j.arrows {
            let find = |l: &str| {
                q.vertex(l).ok_or_else(|| Error::Schema(format!("arrow {:?}: unknown vertex {l:?}", a.id)))
            };
            let (s, t) = (find(&a.src)?, find(&a.tgt)?);
            q.add_arrow(a.id, s, t, a.degree);
        }
        q.validate()?;
        Ok(q)
    }

    /// Neighbours in the underlying undirected multigraph, without loops.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .arrows
            .iter()
            .filter_map(|a| {
                if a.src == v && a.tgt != v {
                    Some(a.tgt)
                } else if a.tgt == v && a.src != v {
                    Some(a.src)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True when no solid and dotted arrows run in parallel in the same direction.
    pub fn is_regular(&self) -> bool {
        let mut kinds: HashMap<(usize, usize), u8> = HashMap::new();
        for a in &self.arrows {
            let e = kinds.entry((a.src, a.tgt)).or_insert(0);
            *e |= 1 << a.degree;
            if *e == 3 {
                return false;
            }
        }
        true
    }

    /// Same quiver with vertices renumbered so that position `k` holds old vertex `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Biquiver {
        let mut inv = vec![0; order.len()];
        for (k, &v) in order.iter().enumerate() {
            inv[v] = k;
        }
        Biquiver {
            vertices: order.iter().map(|&v| self.vertices[v].clone()).collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { id: a.id.clone(), src: inv[a.src], tgt: inv[a.tgt], degree: a.degree })
                .collect(),
        }
    }
}

/// The incidence matrix: entry `(i,j)` is `−Σ(−1)^{|α|}` over arrows `i → j`, plus one on the diagonal.
pub fn incidence_matrix(q: &Biquiver) -> Mat {
    let n = q.n();
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for a in &q.arrows {
        m[a.src][a.tgt] += if a.degree == 0 { -1 } else { 1 };
    }
    Mat::from_fn(n, n, |r, c| int(m[r][c]))
}

/// The regular biquiver whose incidence matrix is `m`.
pub fn quiver_of_matrix(m: &Mat) -> Result<Biquiver> {
    if m.rows() != m.cols() {
        return Err(Error::Schema("incidence matrix must be square".into()));
    }
    let ints = m.to_ints().ok_or_else(|| Error::Schema("incidence matrix must be integral".into()))?;
    let n = m.rows();
    let mut q = Biquiver::with_vertices((1..=n).map(|i| i.to_string()));
    let (mut ns, mut nd) = (0, 0);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j { ints[i][j] - 1 } else { ints[i][j] };
            let (count, degree) = if v < 0 { (-v, 0) } else { (v, 1) };
            for _ in 0..count {
                if degree == 0 {
                    ns += 1;
                    q.add_arrow(format!("a{ns}"), i, j, 0);
                } else {
                    nd += 1;
                    q.add_arrow(format!("g{nd}"), i, j, 1);
                }
            }
        }
    }
    Ok(q)
}

/// Vertices listed so that every arrow goes from a later to an earlier position (sinks first).
pub fn admissible_order(q: &Biquiver) -> Result<Vec<usize>> {
    let n = q.n();
    let mut out_deg = vec![0usize; n];
    let mut preds: Vec<Vec<usize>> = vec![vec![]; n];
    for a in &q.arrows {
        if a.src == a.tgt {
            return math(format!("oriented cycle: loop {:?} at vertex {}", a.id, q.vertices[a.src]));
        }
        out_deg[a.src] += 1;
        preds[a.tgt].push(a.src);
    }
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let Some(v) = (0..n).find(|&v| !placed[v] && out_deg[v] == 0) else {
            return math("oriented cycle: no admissible ordering exists");
        };
        placed[v] = true;
        order.push(v);
        for &p in &preds[v] {
            out_deg[p] -= 1;
        }
    }
    Ok(order)
}

pub fn is_acyclic(q: &Biquiver) -> bool {
    admissible_order(q).is_ok()
}

/// Graded Cartan matrix: entry `(j,i)` is the signed number of paths from `i` to `j`.
pub fn graded_cartan(q: &Biquiver) -> Result<Mat> {
    let order = admissible_order(q).map_err(|_| Error::Math("infinite path algebra: oriented cycle".into()))?;
    let n = q.n();
    // Sources come last in `order`; walk paths forward from each start vertex.
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut out: Vec<Vec<&Arrow>> = vec![vec![]; n];
    for a in &q.arrows {
        out[a.src].push(a);
    }
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        let mut count = vec![0i64; n];
        count[i] = 1;
        for &v in order.iter().rev() {
            if count[v] == 0 || pos[v] > pos[i] {
                continue;
            }
            for a in &out[v] {
                let s = if a.degree == 0 { 1 } else { -1 };
                count[a.tgt] += s * count[v];
            }
        }
        for j in 0..n {
            c[j][i] = count[j];
        }
    }
    Ok(Mat::from_fn(n, n, |r, col| int(c[r][col])))
}

/// The Euler bilinear form of a biquiver, stored as an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormData {
    m: Vec<Vec<i64>>,
}

impl FormData {
    pub fn new(q: &Biquiver) -> FormData {
        FormData::from_matrix(&incidence_matrix(q)).expect("incidence matrices are integral")
    }

    pub fn from_matrix(m: &Mat) -> Result<FormData> {
        let ints = m.to_ints().ok_or_else(|| Error::Schema("form matrix must be integral".into()))?;
        Ok(FormData { m: ints })
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> Mat {
        Mat::from_fn(self.n(), self.n(), |r, c| int(self.m[r][c]))
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m[i][j]
    }

    /// `⟨x, y⟩ = x^t M y`.
    pub fn euler(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        if x.len() != self.n() || y.len() != self.n() {
            return Err(Error::Schema(format!(
                "vector lengths {} and {} do not match the form size {}",
                x.len(),
                y.len(),
                self.n()
            )));
        }
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.m[i][j] * yj;
            }
        }
        Ok(s)
    }

    pub fn quadratic(&self, x: &[i64]) -> Result<i64> {
        self.euler(x, x)
    }

    /// `2(x, y) = ⟨x, y⟩ + ⟨y, x⟩`, kept integral.
    pub fn sym2(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        Ok(self.euler(x, y)? + self.euler(y, x)?)
    }

    /// `σ_i(x) = x − 2(x, e_i) e_i`.
    pub fn reflect(&self, i: usize, x: &[i64]) -> Result<Vec<i64>> {
        if self.m[i][i] != 1 {
            return math(format!("reflection at vertex {} needs q(e_i) = 1 (loop present)", i + 1));
        }
        let mut e = vec![0; self.n()];
        e[i] = 1;
        let c = self.sym2(x, &e)?;
        let mut y = x.to_vec();
        y[i] -= c;
        Ok(y)
    }
}

pub fn euler_form(f: &FormData, x: &[i64], y: &[i64]) -> Result<i64> {
    f.euler(x, y)
}

pub fn quadratic(f: &FormData, x: &[i64]) -> Result<i64> {
    f.quadratic(x)
}

pub fn simple_reflection(f: &FormData, i: usize, x: &[i64]) -> Result<Vec<i64>> {
    f.reflect(i, x)
}

/// `Φ = −C^t C^{-1}`.
pub fn coxeter(q: &Biquiver) -> Result<Mat> {
    admissible_order(q).map_err(|e| Error::Math(format!("coxeter matrix: {e}")))?;
    let c = graded_cartan(q)?;
    let inv = c.inverse().ok_or_else(|| Error::Math("Cartan matrix is singular".into()))?;
    Ok(c.transpose().mul(&inv).neg())
}

/// Product of the simple reflections, applied in admissible order (sinks first).
pub fn coxeter_via_reflections(q: &Biquiver) -> Result<Mat> {
    let order = admissible_order(q).map_err(|e| Error::Math(format!("coxeter matrix: {e}")))?;
    let f = FormData::new(q);
    let n = q.n();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut x = vec![0; n];
        x[j] = 1;
        for &v in &order {
            x = f.reflect(v, &x)?;
        }
        cols.push(x);
    }
    Ok(Mat::from_fn(n, n, |r, c| int(cols[c][r])))
}

fn int_vec(m: &Mat, col: usize) -> Vec<i64> {
    (0..m.rows()).map(|r| to_i64(m.get(r, col)).expect("integral entry")).collect()
}

/// Dimension vectors of the indecomposable projectives: the columns of the Cartan matrix.
pub fn projective_vectors(q: &Biquiver) -> Result<Vec<Vec<i64>>> {
    let c = graded_cartan(q)?;
    Ok((0..q.n()).map(|i| int_vec(&c, i)).collect())
}

/// Projective vectors rebuilt as `σ_{π(1)}⋯σ_{π(k−1)}(e_{π(k)})` along an admissible order `π`.
pub fn projective_vectors_via_reflections(q: &Biquiver) -> Result<Vec<Vec<i64>>> {
    let order = admissible_order(q)?;
    let f = FormData::new(q);
    let n = q.n();
    let mut out = vec![vec![]; n];
    for (k, &v) in order.iter().enumerate() {
        let mut x = vec![0; n];
        x[v] = 1;
        for &w in order[..k].iter().rev() {
            x = f.reflect(w, &x)?;
        }
        out[v] = x;
    }
    Ok(out)
}

/// Injective vectors `q_i = σ_{π(n)}⋯σ_{π(k+1)}(e_{π(k)})`.
pub fn injective_vectors_via_reflections(q: &Biquiver) -> Result<Vec<Vec<i64>>> {
    let order = admissible_order(q)?;
    let f = FormData::new(q);
    let n = q.n();
    let mut out = vec![vec![]; n];
    for (k, &v) in order.iter().enumerate() {
        let mut x = vec![0; n];
        x[v] = 1;
        for &w in &order[k + 1..] {
            x = f.reflect(w, &x)?;
        }
        out[v] = x;
    }
    Ok(out)
}

/// Applies an integer matrix to an integer vector.
pub fn apply(m: &Mat, x: &[i64]) -> Vec<i64> {
    let xs: Vec<Scalar> = x.iter().map(|&v| int(v)).collect();
    m.mul_vec(&xs).iter().map(|v| to_i64(v).expect("integral result")).collect()
}

/// Applies a matrix with rational entries, failing when the result is not integral.
pub fn apply_exact(m: &Mat, x: &[i64]) -> Option<Vec<i64>> {
    let xs: Vec<Scalar> = x.iter().map(|&v| int(v)).collect();
    m.mul_vec(&xs).iter().map(to_i64).collect()
}

pub fn is_identity(m: &Mat) -> bool {
    m.rows() == m.cols() && (0..m.rows()).all(|r| (0..m.cols()).all(|c| m.get(r, c) == &if r == c { Scalar::one() } else { Scalar::zero() }))
}

/// Standard quivers used throughout.
pub mod catalog {
    use super::Biquiver;

    /// Generalized Kronecker quiver with `m` solid arrows `2 → 1`.
    pub fn kronecker(m: usize) -> Biquiver {
        let mut q = Biquiver::with_vertices(["1", "2"]);
        for k in 1..=m {
            q.add_arrow(format!("a{k}"), 1, 0, 0);
        }
        q
    }

    /// `A_n` with arrows `k+1 → k`.
    pub fn linear_a(n: usize) -> Biquiver {
        let mut q = Biquiver::with_vertices((1..=n).map(|i| i.to_string()));
        for k in 1..n {
            q.add_arrow(format!("a{k}"), k, k - 1, 0);
        }
        q
    }

    /// `A_n` whose arrow between `k` and `k+1` points right exactly when `right[k-1]`.
    pub fn oriented_a(n: usize, right: &[bool]) -> Biquiver {
        let mut q = Biquiver::with_vertices((1..=n).map(|i| i.to_string()));
        for k in 1..n {
            if right[k - 1] {
                q.add_arrow(format!("a{k}"), k - 1, k, 0);
            } else {
                q.add_arrow(format!("a{k}"), k, k - 1, 0);
            }
        }
        q
    }

    /// `D_n` (n ≥ 4) oriented as `n → n−1 → ⋯ → 3`, `3 → 1`, `3 → 2`.
    pub fn dn_standard(n: usize) -> Biquiver {
        assert!(n >= 4);
        let mut q = Biquiver::with_vertices((1..=n).map(|i| i.to_string()));
        q.add_arrow("a1", 2, 0, 0);
        q.add_arrow("a2", 2, 1, 0);
        for k in 3..n {
            q.add_arrow(format!("a{k}"), k, k - 1, 0);
        }
        q
    }

    /// Star with the given arm lengths, every arrow pointing toward the centre (vertex `c`).
    /// Arm vertices are labelled `s.k` for arm `s` and distance `k` from the centre.
    pub fn star_subspace(arms: &[usize]) -> Biquiver {
        let mut q = Biquiver::with_vertices(["c"]);
        let mut count = 0;
        for (s, &len) in arms.iter().enumerate() {
            let mut prev = 0;
            for k in 1..=len {
                let v = q.add_vertex(format!("{}.{}", s + 1, k));
                count += 1;
                q.add_arrow(format!("a{count}"), v, prev, 0);
                prev = v;
            }
        }
        q
    }

    /// `E_m` (m = 6, 7, 8) in subspace orientation.
    pub fn e_subspace(m: usize) -> Biquiver {
        match m {
            6 => star_subspace(&[2, 2, 1]),
            7 => star_subspace(&[3, 2, 1]),
            8 => star_subspace(&[4, 2, 1]),
            _ => panic!("E_{m} is not a Dynkin diagram"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    #[test]
    fn kronecker_incidence() {
        assert_eq!(incidence_matrix(&kronecker(2)), Mat::from_ints(&[vec![1, 0], vec![-2, 1]]));
        assert_eq!(incidence_matrix(&kronecker(3)), Mat::from_ints(&[vec![1, 0], vec![-3, 1]]));
        assert_eq!(incidence_matrix(&Biquiver::with_vertices(["a", "b", "c"])), Mat::identity(3));
    }

    #[test]
    fn matrix_round_trip() {
        assert_eq!(quiver_of_matrix(&Mat::identity(3)).unwrap().arrows.len(), 0);
        let k2 = quiver_of_matrix(&Mat::from_ints(&[vec![1, 0], vec![-2, 1]])).unwrap();
        assert_eq!(k2.arrows.len(), 2);
        assert!(k2.arrows.iter().all(|a| a.src == 1 && a.tgt == 0 && a.degree == 0));
        let ky = quiver_of_matrix(&Mat::from_ints(&[vec![0, 1], vec![-1, 1]])).unwrap();
        let mut kinds: Vec<(usize, usize, u8)> = ky.arrows.iter().map(|a| (a.src, a.tgt, a.degree)).collect();
        kinds.sort();
        assert_eq!(kinds, vec![(0, 0, 0), (0, 1, 1), (1, 0, 0)]);
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(graded_cartan(&kronecker(2)).unwrap(), Mat::from_ints(&[vec![1, 2], vec![0, 1]]));
        assert_eq!(graded_cartan(&kronecker(3)).unwrap(), Mat::from_ints(&[vec![1, 3], vec![0, 1]]));
        assert_eq!(graded_cartan(&Biquiver::with_vertices(["x", "y"])).unwrap(), Mat::identity(2));
    }

    #[test]
    fn forms() {
        let f2 = FormData::new(&kronecker(2));
        let f3 = FormData::new(&kronecker(3));
        assert_eq!(f2.quadratic(&[1, 1]).unwrap(), 0);
        assert_eq!(f3.quadratic(&[1, 1]).unwrap(), -1);
        for i in 0..2 {
            for j in 0..2 {
                let mut x = [0, 0];
                let mut y = [0, 0];
                x[i] = 1;
                y[j] = 1;
                assert_eq!(f2.euler(&x, &y).unwrap(), f2.entry(i, j));
            }
        }
    }

    #[test]
    fn reflections() {
        let f = FormData::new(&kronecker(2));
        assert_eq!(f.reflect(0, &[1, 0]).unwrap(), vec![-1, 0]);
        assert_eq!(f.reflect(1, &f.reflect(1, &[3, 5]).unwrap()).unwrap(), vec![3, 5]);
        let mut loopy = Biquiver::with_vertices(["1"]);
        loopy.add_arrow("l", 0, 0, 0);
        assert!(FormData::new(&loopy).reflect(0, &[1]).is_err());
    }

    #[test]
    fn coxeter_examples() {
        let phi = coxeter(&kronecker(2)).unwrap();
        assert_eq!(phi, Mat::from_ints(&[vec![-1, 2], vec![-2, 3]]));
        assert_eq!(coxeter_via_reflections(&kronecker(2)).unwrap(), phi);
        let inv3 = coxeter(&kronecker(3)).unwrap().inverse().unwrap();
        assert_eq!(inv3, Mat::from_ints(&[vec![8, -3], vec![3, -1]]));
        assert_eq!(coxeter(&Biquiver::with_vertices(["x", "y"])).unwrap(), Mat::identity(2).neg());
    }

    #[test]
    fn admissible_orders() {
        assert_eq!(admissible_order(&linear_a(2)).unwrap(), vec![0, 1]);
        let mut cyc = Biquiver::with_vertices(["1", "2"]);
        cyc.add_arrow("a", 0, 1, 0);
        cyc.add_arrow("b", 1, 0, 0);
        assert!(admissible_order(&cyc).is_err());
        assert!(admissible_order(&dn_standard(6)).is_ok());
    }

    #[test]
    fn projectives() {
        assert_eq!(projective_vectors(&kronecker(2)).unwrap()[1], vec![2, 1]);
        assert_eq!(projective_vectors(&linear_a(3)).unwrap()[2], vec![1, 1, 1]);
        assert_eq!(projective_vectors(&linear_a(3)).unwrap()[0], vec![1, 0, 0]);
        let q = dn_standard(5);
        assert_eq!(projective_vectors(&q).unwrap(), projective_vectors_via_reflections(&q).unwrap());
    }

    #[test]
    fn coxeter_sends_projectives_to_negative_injectives() {
        let q = dn_standard(5);
        let phi = coxeter(&q).unwrap();
        let p = projective_vectors(&q).unwrap();
        let inj = injective_vectors_via_reflections(&q).unwrap();
        for i in 0..q.n() {
            let neg: Vec<i64> = inj[i].iter().map(|x| -x).collect();
            assert_eq!(apply(&phi, &p[i]), neg);
        }
    }

    #[test]
    fn dn_shape() {
        let q = dn_standard(4);
        let ends: Vec<(usize, usize)> = q.arrows.iter().map(|a| (a.src + 1, a.tgt + 1)).collect();
        assert_eq!(ends, vec![(3, 1), (3, 2), (4, 3)]);
        let q = dn_standard(6);
        let ends: Vec<(usize, usize)> = q.arrows.iter().map(|a| (a.src + 1, a.tgt + 1)).collect();
        assert_eq!(ends, vec![(3, 1), (3, 2), (4, 3), (5, 4), (6, 5)]);
    }
}
