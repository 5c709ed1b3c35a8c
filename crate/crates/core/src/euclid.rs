//! One-point extensions `Ã = Δ[R]` of Dynkin quivers, the reduced ditalgebras attached to the
//! wings of the maximal root, and the exceptional families they produce.

use std::cmp::Reverse;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arknit::{self, TranslationQuiver, Wing};
use crate::error::{math, Error, Result};
use crate::exactlin::{i_down, i_left, i_right, i_up, int, to_i64, vec_is_zero, Mat, Scalar};
use crate::pathdit::Ditalgebra;
use crate::quiver::{self, catalog, Biquiver};
use crate::repcat::{realize_root, sigma_dims, sigma_hom, Representation};
use crate::rootlat::{self, DynkinClass, DynkinData};

/// One copy of `P(e)` inside `R`, joined to `ω` by one arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub vertex: usize,
    pub copy: usize,
    /// Index of the arrow `ω → e` in the extended quiver.
    pub arrow: usize,
}

/// How a branch's first marker enters the differential of the reduced ditalgebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// Only `θ` occurs.
    Theta,
    /// Only `θ'` occurs.
    ThetaPrime,
    /// Both occur.
    Mixed,
}

/// The data of one wing `θ(n_s)` lifted to `Δ`-modules.
#[derive(Clone, Debug)]
pub struct Branch {
    pub order: usize,
    pub wing: Wing,
    /// `X_i = W_{1,i}` for `i = 1..order-1`.
    pub x: Vec<Representation>,
    /// `Y_j = W_{j,order}` for `j = 2..order`; `y[0]` is `Y_2`.
    pub y: Vec<Representation>,
    /// `a_i ∈ Hom(R, X_i)` for `i = 1..order-1`, then `ρ = a_order ∈ Hom(R, W₀)`.
    pub a: Vec<Vec<Scalar>>,
    /// `b_1 ∈ Hom(R, W₀)`, then `b_j ∈ Hom(R, Y_j)`.
    pub b: Vec<Vec<Scalar>>,
    /// Coordinates of `b_1` in the basis `b, b'`.
    pub alpha: (i64, i64),
    /// Coordinates of `ρ` in the basis `a, a'`.
    pub beta: (i64, i64),
}

impl Branch {
    pub fn rho(&self) -> &[Scalar] {
        self.a.last().expect("a branch has at least one generator")
    }

    pub fn case(&self) -> Case {
        match self.alpha {
            (_, 0) => Case::Theta,
            (0, _) => Case::ThetaPrime,
            _ => Case::Mixed,
        }
    }
}

/// Everything attached to `Ã = Δ[R]`.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub delta: Biquiver,
    pub dynkin: DynkinData,
    pub quiver: Biquiver,
    pub omega: usize,
    pub slots: Vec<Slot>,
    pub w0: Vec<i64>,
    pub w0_module: Representation,
    pub knit: TranslationQuiver,
    pub w0_vertex: usize,
    pub branches: Vec<Branch>,
    pub a: Vec<Scalar>,
    pub a_prime: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub b_prime: Vec<Scalar>,
    /// Last row of the inverse of the matrix with columns `dim X` (left wing edges) and `w₀`.
    rank_row: Vec<Scalar>,
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    let (br, bc) = b.shape();
    Mat::from_fn(a.rows() * br, a.cols() * bc, |r, c| a.get(r / br, c / bc) * b.get(r % br, c % bc))
}

fn unit(n: usize, k: usize) -> Vec<Scalar> {
    (0..n).map(|i| if i == k { Scalar::one() } else { Scalar::zero() }).collect()
}

fn scale_to_unit(v: &mut [Scalar]) {
    if let Some(x) = v.iter().find(|x| !x.is_zero()).cloned() {
        let inv = x.recip();
        v.iter_mut().for_each(|y| *y = &*y * &inv);
    }
}

fn exact_i64(x: &Scalar, what: &str) -> Result<i64> {
    to_i64(x).ok_or_else(|| Error::Math(format!("{what} is not an integer: {x}")))
}

/// The indecomposable projective `P(e)` of a tree quiver: thin on the vertices reachable from `e`.
pub fn projective_module(delta: &Biquiver, e: usize) -> Result<Representation> {
    let p = quiver::projective_vectors(delta)?;
    let dims: Vec<usize> = p[e].iter().map(|&x| x as usize).collect();
    if dims.iter().any(|&d| d > 1) {
        return math("projective_module handles quivers whose projectives are thin");
    }
    let mut rep = Representation::zero(delta, dims.clone());
    for (a, arrow) in delta.solid() {
        if dims[arrow.src] == 1 && dims[arrow.tgt] == 1 {
            rep.mats[a] = Mat::identity(1);
        }
    }
    Ok(rep)
}

impl ExtensionData {
    pub fn n(&self) -> usize {
        self.delta.n()
    }

    /// The radical generator `w₀ + e_ω`.
    pub fn radical(&self) -> Vec<i64> {
        let mut v = self.w0.clone();
        v.push(1);
        v
    }

    /// `R = ⊕ P(e)^{d_e}`, one summand per slot.
    pub fn r_module(&self) -> Result<Representation> {
        let parts: Vec<Representation> =
            self.slots.iter().map(|s| projective_module(&self.delta, s.vertex)).collect::<Result<_>>()?;
        let refs: Vec<&Representation> = parts.iter().collect();
        Ok(Representation::direct_sum(&self.delta, &refs))
    }

    /// `dim Hom(R, M) = Σ d_e dim M_e`.
    pub fn hom_r_dim_of(&self, dims: &[usize]) -> usize {
        self.slots.iter().map(|s| dims[s.vertex]).sum()
    }

    /// `dim Hom(R, M)`, with the formula cross-checked by the σ-map against the explicit `R`.
    pub fn hom_r_dim(&self, m: &Representation) -> Result<usize> {
        let formula = self.hom_r_dim_of(&m.dims);
        let d = Ditalgebra::zero_diff(self.delta.clone());
        let (hom, _) = sigma_dims(&d, &self.r_module()?, m)?;
        if hom != formula {
            return math(format!("Hom(R, M) has dimension {hom}, the slot formula gives {formula}"));
        }
        Ok(formula)
    }

    /// Offsets of the slot blocks of a vector in `Hom(R, M) = ⊕ M_e`.
    fn offsets(&self, dims: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.slots.len() + 1);
        let mut off = 0;
        for s in &self.slots {
            out.push(off);
            off += dims[s.vertex];
        }
        out.push(off);
        out
    }

    /// The block of `v ∈ Hom(R, M)` at slot `k`.
    pub fn slot_block<'a>(&self, dims: &[usize], v: &'a [Scalar], k: usize) -> &'a [Scalar] {
        let off = self.offsets(dims);
        &v[off[k]..off[k + 1]]
    }

    /// `Hom(R, f)` applied to `v`.
    pub fn push(&self, src_dims: &[usize], f0: &[Mat], v: &[Scalar]) -> Vec<Scalar> {
        let off = self.offsets(src_dims);
        let mut out = Vec::new();
        for (k, s) in self.slots.iter().enumerate() {
            out.extend(f0[s.vertex].mul_vec(&v[off[k]..off[k + 1]]));
        }
        out
    }

    /// The rank `v_ω − (multiplicity of w₀)` for a vector of the extended quiver whose
    /// `Δ`-part lies in the span of the left wing edges and `w₀`.
    pub fn rank_of_vector(&self, v: &[i64]) -> Result<i64> {
        if v.len() != self.quiver.n() {
            return Err(Error::Schema(format!("vector of length {} for {} vertices", v.len(), self.quiver.n())));
        }
        let m: Scalar = self.rank_row.iter().zip(v).map(|(c, &x)| c * int(x)).sum();
        Ok(v[self.omega] - exact_i64(&m, "multiplicity of w0")?)
    }

    pub fn branch_of_case(&self, c: Case) -> Option<usize> {
        self.branches.iter().position(|b| b.case() == c)
    }

    fn check_branch_vertex(&self, s: usize, j: usize) -> Result<()> {
        let b = self
            .branches
            .get(s.wrapping_sub(1))
            .ok_or_else(|| Error::Schema(format!("branch {s} does not exist (there are {})", self.branches.len())))?;
        if j < 2 || j > b.order {
            return Err(Error::Schema(format!("vertex y{s}.{j} does not exist: branch {s} has indices 2..={}", b.order)));
        }
        Ok(())
    }
}

/// Builds `Ã = Δ[R]` with all the wing data of the maximal root.
pub fn extend(delta: &Biquiver) -> Result<ExtensionData> {
    let dynkin = rootlat::dynkin_data(delta)?;
    let n = delta.n();
    if delta.vertex("w").is_some() {
        return Err(Error::Schema("vertex label \"w\" is reserved for the extension vertex".into()));
    }
    let mut q = delta.clone();
    let omega = q.add_vertex("w");
    let mut slots = Vec::new();
    for (e, d) in dynkin.exceptional_vertices() {
        for copy in 0..d as usize {
            let id = format!("o{}", slots.len() + 1);
            if delta.arrow(&id).is_some() {
                return Err(Error::Schema(format!("arrow id {id:?} is reserved for the extension arrows")));
            }
            let arrow = q.add_arrow(id, omega, e, 0);
            slots.push(Slot { vertex: e, copy, arrow });
        }
    }
    let w0 = dynkin.max_root.clone();
    let mut rad = w0.clone();
    rad.push(1);
    let got = rootlat::radical_generator(&q)?;
    if got != rad {
        return math(format!("radical generator {got:?} differs from w0 + e_w = {rad:?}"));
    }
    let proj = quiver::projective_vectors(delta)?;
    let mut dim_r = vec![0i64; n];
    for s in &slots {
        for (x, p) in dim_r.iter_mut().zip(&proj[s.vertex]) {
            *x += p;
        }
    }
    let phi_inv = quiver::coxeter(delta)?.inverse().ok_or_else(|| Error::Math("singular Coxeter matrix".into()))?;
    let moved = quiver::apply(&phi_inv, &w0);
    let lhs: Vec<i64> = w0.iter().zip(&moved).map(|(a, b)| a - b).collect();
    if lhs != dim_r {
        return math(format!("dim R = {dim_r:?} but (I - Φ⁻¹)w0 = {lhs:?}"));
    }

    let knit = arknit::knit(delta)?;
    let w0_vertex = knit
        .vertex_with_dim(&w0)
        .ok_or_else(|| Error::Math("maximal root missing from the knitted quiver".into()))?;
    let mut wings = arknit::wing_data(&knit, w0_vertex)?;
    let sincere = |w: &Wing| {
        w.members().iter().any(|&x| knit.vertices[x].projective && knit.vertices[x].dim.iter().all(|&d| d > 0))
    };
    wings.sort_by_key(|w| (Reverse(w.order), !sincere(w), knit.vertices[w.at(2, w.order)].dim.clone()));

    let zero = Ditalgebra::zero_diff(delta.clone());
    let w0_module = realize_root(delta, &w0)?;
    let mut ext = ExtensionData {
        delta: delta.clone(),
        dynkin,
        quiver: q,
        omega,
        slots,
        w0: w0.clone(),
        w0_module,
        knit,
        w0_vertex,
        branches: Vec::new(),
        a: Vec::new(),
        a_prime: Vec::new(),
        b: Vec::new(),
        b_prime: Vec::new(),
        rank_row: Vec::new(),
    };
    let hom_w0 = ext.hom_r_dim_of(&ext.w0_module.dims);
    if hom_w0 != 2 {
        return math(format!("Hom(R, W0) has dimension {hom_w0}, expected 2"));
    }
    let one_map = |m: &Representation, n: &Representation| -> Result<Vec<Mat>> {
        let h = sigma_hom(&zero, m, n)?;
        if h.hom != 1 {
            return math(format!("expected a one-dimensional Hom along a wing edge, found {}", h.hom));
        }
        Ok(h.basis.into_iter().next().expect("one basis vector").f0)
    };

    // Chains along each wing, with the map out of W0 kept to place b_1 later.
    let mut q_first = Vec::new();
    for wing in wings {
        let order = wing.order;
        let dim_at = |x: usize| -> Vec<i64> { ext.knit.vertices[x].dim.clone() };
        let x: Vec<Representation> =
            (1..order).map(|i| realize_root(delta, &dim_at(wing.at(1, i)))).collect::<Result<_>>()?;
        let y: Vec<Representation> =
            (2..=order).map(|j| realize_root(delta, &dim_at(wing.at(j, order)))).collect::<Result<_>>()?;
        for m in x.iter().chain(&y) {
            let h = ext.hom_r_dim_of(&m.dims);
            if h != 1 {
                return math(format!("a wing edge module has Hom(R, -) of dimension {h}, expected 1"));
            }
        }
        let mut a = vec![vec![Scalar::one()]];
        for i in 0..order - 1 {
            let (src, tgt) = (&x[i], if i + 1 < x.len() { &x[i + 1] } else { &ext.w0_module });
            let f = one_map(src, tgt)?;
            let mut next = ext.push(&src.dims, &f, &a[i]);
            if vec_is_zero(&next) {
                return math("a generator along the left wing edge vanished");
            }
            if i + 1 < x.len() {
                scale_to_unit(&mut next);
            }
            a.push(next);
        }
        let mut qs = Vec::new();
        for j in 0..order - 1 {
            let src = if j == 0 { &ext.w0_module } else { &y[j - 1] };
            qs.push((src.dims.clone(), one_map(src, &y[j])?));
        }
        let rho = a.last().expect("nonempty").clone();
        if !vec_is_zero(&ext.push(&qs[0].0, &qs[0].1, &rho)) {
            return math("ρ does not vanish on the first right wing edge map");
        }
        q_first.push(qs);
        ext.branches.push(Branch { order, wing, x, y, a, b: Vec::new(), alpha: (0, 0), beta: (0, 0) });
    }

    // Choice of the bases a, a' and b, b' of Hom(R, W0).
    let t = ext.branches.len();
    let std = |k: usize| unit(2, k);
    let rhos: Vec<Vec<Scalar>> = ext.branches.iter().map(|b| b.rho().to_vec()).collect();
    let rho = |s: usize| rhos[s].clone();
    let independent = |u: &[Scalar], v: &[Scalar]| Mat::hstack(&[&Mat::column(u), &Mat::column(v)]).rank() == 2;
    let (a, a2, b1s): (Vec<Scalar>, Vec<Scalar>, Vec<Vec<Scalar>>) = match t {
        0 => (std(0), std(1), vec![]),
        1 => {
            let r = rho(0);
            let other = if independent(&r, &std(0)) { std(0) } else { std(1) };
            (r, other.clone(), vec![other])
        }
        2 => {
            let (r1, r2) = (rho(0), rho(1));
            if !independent(&r1, &r2) {
                return math("the two wing morphisms ρ are proportional");
            }
            (r1.clone(), r2.clone(), vec![r2, r1])
        }
        3 => {
            let (r1, r2, r3) = (rho(0), rho(1), rho(2));
            let m = Mat::hstack(&[&Mat::column(&r2), &Mat::column(&r3)]);
            let c = m.solve(&r1).ok_or_else(|| Error::Math("ρ1 is not in the span of ρ2, ρ3".into()))?;
            if c.iter().any(|x| x.is_zero()) {
                return math("the three wing morphisms ρ are not in general position");
            }
            // Rescale the generators of branches 2 and 3 so that ρ1 = ρ2 + ρ3.
            for (s, k) in [(1usize, &c[0]), (2usize, &c[1])] {
                for v in ext.branches[s].a.iter_mut() {
                    v.iter_mut().for_each(|x| *x = &*x * k);
                }
            }
            let r2: Vec<Scalar> = r2.iter().map(|x| x * &c[0]).collect();
            let r3: Vec<Scalar> = r3.iter().map(|x| x * &c[1]).collect();
            (r2.clone(), r3.clone(), vec![r2, r3, r1])
        }
        _ => return math(format!("{t} wings; extended Dynkin quivers have at most three")),
    };
    let (b, b2) = match t {
        0 => (std(0), std(1)),
        1 => (a2.clone(), a.clone()),
        _ => (a.clone(), a2.clone()),
    };
    let coords = |u: &[Scalar], v: &[Scalar], x: &[Scalar]| -> Result<(i64, i64)> {
        let m = Mat::hstack(&[&Mat::column(u), &Mat::column(v)]);
        let c = m.solve(x).ok_or_else(|| Error::Math("vector outside Hom(R, W0)".into()))?;
        Ok((exact_i64(&c[0], "coefficient")?, exact_i64(&c[1], "coefficient")?))
    };
    for s in 0..t {
        let b1 = b1s[s].clone();
        if !independent(&b1, ext.branches[s].rho()) {
            return math("b_1 must differ from ρ on every branch");
        }
        let mut chain = vec![b1.clone()];
        for (dims, f) in &q_first[s] {
            let mut next = ext.push(dims, f, chain.last().expect("nonempty"));
            if vec_is_zero(&next) {
                return math("a generator along the right wing edge vanished");
            }
            scale_to_unit(&mut next);
            chain.push(next);
        }
        ext.branches[s].alpha = coords(&b, &b2, &b1)?;
        ext.branches[s].beta = coords(&a, &a2, ext.branches[s].rho())?;
        ext.branches[s].b = chain;
    }
    ext.a = a;
    ext.a_prime = a2;
    ext.b = b;
    ext.b_prime = b2;

    // With Hom(R, W0) = (W0)_e, move b, b' to the standard basis so coefficient quivers stay trees.
    if ext.slots.len() == 1 {
        let e = ext.slots[0].vertex;
        let bm = Mat::hstack(&[&Mat::column(&ext.b), &Mat::column(&ext.b_prime)]);
        let inv = bm.inverse().ok_or_else(|| Error::Math("b, b' are dependent".into()))?;
        let basis: Vec<Mat> =
            (0..n).map(|v| if v == e { bm.clone() } else { Mat::identity(ext.w0_module.dims[v]) }).collect();
        ext.w0_module = ext.w0_module.change_basis(delta, &basis)?;
        let tr = |v: &mut Vec<Scalar>| *v = inv.mul_vec(v);
        tr(&mut ext.a);
        tr(&mut ext.a_prime);
        tr(&mut ext.b);
        tr(&mut ext.b_prime);
        for br in ext.branches.iter_mut() {
            tr(br.a.last_mut().expect("nonempty"));
            tr(&mut br.b[0]);
        }
    }

    // Rank functional.
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for br in &ext.branches {
        for x in &br.x {
            cols.push(x.dims.iter().map(|&d| int(d as i64)).collect());
        }
    }
    cols.push(w0.iter().map(|&d| int(d)).collect());
    if cols.len() != n {
        return math(format!("{} left wing edge modules and w0 for {n} vertices", cols.len()));
    }
    let bm = Mat::from_fn(n, n, |r, c| cols[c][r].clone());
    let binv = bm.inverse().ok_or_else(|| Error::Math("left wing edges and w0 are not a basis".into()))?;
    let mut row = binv.row(n - 1).to_vec();
    row.push(Scalar::zero());
    ext.rank_row = row;
    Ok(ext)
}

/// Which reduced ditalgebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

fn y_label(s: usize, j: usize) -> String {
    if j == 1 {
        "m".into()
    } else {
        format!("y{s}.{j}")
    }
}

fn x_label(s: usize, i: usize, order: usize) -> String {
    if i == order {
        "m".into()
    } else {
        format!("x{s}.{i}")
    }
}

/// The reduced ditalgebra `𝒜^Y` (`θ, θ'` and one arrow per right wing edge) or `𝒜^X`.
pub fn reduced_ditalgebra(e: &ExtensionData, side: Side) -> Result<Ditalgebra> {
    match side {
        Side::Y => reduced_y(e),
        Side::X => reduced_x(e),
    }
}

fn reduced_y(e: &ExtensionData) -> Result<Ditalgebra> {
    let mut q = Biquiver::with_vertices(["m"]);
    for (s, br) in e.branches.iter().enumerate() {
        for j in 2..=br.order {
            q.add_vertex(y_label(s + 1, j));
        }
    }
    let w = q.add_vertex("w");
    let m = 0;
    q.add_arrow("theta", w, m, 0);
    q.add_arrow("theta'", w, m, 0);
    for (s, br) in e.branches.iter().enumerate() {
        for j in 2..=br.order {
            let v = q.vertex(&y_label(s + 1, j)).expect("added above");
            q.add_arrow(format!("theta{}.{j}", s + 1), w, v, 0);
        }
    }
    for (s, br) in e.branches.iter().enumerate() {
        for i in 1..br.order {
            for j in i + 1..=br.order {
                let (src, tgt) = (q.vertex(&y_label(s + 1, i)), q.vertex(&y_label(s + 1, j)));
                q.add_arrow(format!("eps{}.{i}.{j}", s + 1), src.expect("vertex"), tgt.expect("vertex"), 1);
            }
        }
    }
    let mut d = Ditalgebra::zero_diff(q);
    for (s, br) in e.branches.iter().enumerate() {
        let s1 = s + 1;
        for j in 2..=br.order {
            let mut terms: Vec<(i64, Vec<String>)> = Vec::new();
            let e1j = format!("eps{s1}.1.{j}");
            if br.alpha.0 != 0 {
                terms.push((br.alpha.0, vec!["theta".into(), e1j.clone()]));
            }
            if br.alpha.1 != 0 {
                terms.push((br.alpha.1, vec!["theta'".into(), e1j]));
            }
            for i in 2..j {
                terms.push((1, vec![format!("theta{s1}.{i}"), format!("eps{s1}.{i}.{j}")]));
            }
            set_terms(&mut d, &format!("theta{s1}.{j}"), &terms);
        }
        for k in 1..br.order {
            for j in k + 2..=br.order {
                let terms: Vec<(i64, Vec<String>)> = (k + 1..j)
                    .map(|i| (1, vec![format!("eps{s1}.{k}.{i}"), format!("eps{s1}.{i}.{j}")]))
                    .collect();
                set_terms(&mut d, &format!("eps{s1}.{k}.{j}"), &terms);
            }
        }
    }
    d.validate()?;
    Ok(d)
}

fn reduced_x(e: &ExtensionData) -> Result<Ditalgebra> {
    let mut q = Biquiver::new();
    for (s, br) in e.branches.iter().enumerate() {
        for i in 1..br.order {
            q.add_vertex(x_label(s + 1, i, br.order));
        }
    }
    let m = q.add_vertex("m");
    let w = q.add_vertex("w");
    for (s, br) in e.branches.iter().enumerate() {
        for i in 1..br.order {
            let v = q.vertex(&x_label(s + 1, i, br.order)).expect("added above");
            q.add_arrow(format!("xi{}.{i}", s + 1), w, v, 0);
        }
    }
    q.add_arrow("xi", w, m, 0);
    q.add_arrow("xi'", w, m, 0);
    for (s, br) in e.branches.iter().enumerate() {
        for i in 1..br.order {
            for j in i + 1..=br.order {
                let src = q.vertex(&x_label(s + 1, i, br.order)).expect("vertex");
                let tgt = q.vertex(&x_label(s + 1, j, br.order)).expect("vertex");
                q.add_arrow(format!("gam{}.{i}.{j}", s + 1), src, tgt, 1);
            }
        }
    }
    let mut d = Ditalgebra::zero_diff(q);
    let (mut xi, mut xi2): (Vec<(i64, Vec<String>)>, Vec<(i64, Vec<String>)>) = (Vec::new(), Vec::new());
    for (s, br) in e.branches.iter().enumerate() {
        let s1 = s + 1;
        let n = br.order;
        for j in 2..n {
            let terms: Vec<(i64, Vec<String>)> =
                (1..j).map(|i| (1, vec![format!("xi{s1}.{i}"), format!("gam{s1}.{i}.{j}")])).collect();
            set_terms(&mut d, &format!("xi{s1}.{j}"), &terms);
        }
        for i in 1..n {
            let path = vec![format!("xi{s1}.{i}"), format!("gam{s1}.{i}.{n}")];
            if br.beta.0 != 0 {
                xi.push((br.beta.0, path.clone()));
            }
            if br.beta.1 != 0 {
                xi2.push((br.beta.1, path));
            }
        }
        for k in 1..n {
            for j in k + 2..=n {
                let terms: Vec<(i64, Vec<String>)> = (k + 1..j)
                    .map(|i| (1, vec![format!("gam{s1}.{k}.{i}"), format!("gam{s1}.{i}.{j}")]))
                    .collect();
                set_terms(&mut d, &format!("gam{s1}.{k}.{j}"), &terms);
            }
        }
    }
    set_terms(&mut d, "xi", &xi);
    set_terms(&mut d, "xi'", &xi2);
    d.validate()?;
    Ok(d)
}

fn set_terms(d: &mut Ditalgebra, arrow: &str, terms: &[(i64, Vec<String>)]) {
    let owned: Vec<Vec<&str>> = terms.iter().map(|(_, p)| p.iter().map(|s| s.as_str()).collect()).collect();
    let refs: Vec<(i64, &[&str])> = terms.iter().zip(&owned).map(|((c, _), p)| (*c, p.as_slice())).collect();
    d.set_diff(arrow, &refs);
}

/// A marked vertex `y_{s,j}` of a rank-one family, with the position of its entry in the mixed case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marker {
    pub branch: usize,
    pub vertex: usize,
    #[serde(default)]
    pub pos: Option<usize>,
}

/// The exceptional reduced modules over `𝒜^Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedFamily {
    /// `M^{(-1)}_{1,1,1}[ℓ]`, `ℓ ≥ 1`.
    Preprojective,
    /// `M^{(1)}` with at most one marker per branch.
    Rank1(Vec<Marker>),
    /// `N^{(2)}` (even `ℓ`) or `M^{(2)}` (odd `ℓ`): markers `r, s, u` on the θ-, θ'- and mixed branch,
    /// optional `v` after `r` and `w` after `s`.
    Rank2 { r: usize, s: usize, u: usize, v: Option<usize>, w: Option<usize> },
}

impl ReducedFamily {
    /// The superscript of the family label.
    pub fn rank(&self) -> i64 {
        match self {
            ReducedFamily::Preprojective => -1,
            ReducedFamily::Rank1(_) => 1,
            ReducedFamily::Rank2 { .. } => 2,
        }
    }

    pub fn label(&self, l: usize) -> String {
        match self {
            ReducedFamily::Preprojective => format!("M^(-1)_{{1,1,1}}[{l}]"),
            ReducedFamily::Rank1(ms) => {
                let mut k: Vec<usize> = vec![1, 1, 1];
                for (slot, _) in ms.iter().enumerate() {
                    k[slot] = 2;
                }
                format!("M^(1)_{{{},{},{}}}[{l}]", k[0], k[1], k[2])
            }
            ReducedFamily::Rank2 { v, w, .. } => {
                let x = if l % 2 == 0 { "N" } else { "M" };
                let (a, b) = (if v.is_some() { 3 } else { 2 }, if w.is_some() { 3 } else { 2 });
                let (a, b) = if a >= b { (a, b) } else { (b, a) };
                format!("{x}^(2)_{{{a},{b},2}}[{l}]")
            }
        }
    }
}

fn row_unit(n: usize, positions: &[usize]) -> Mat {
    let mut m = Mat::zeros(1, n);
    for &p in positions {
        m.set(0, p, Scalar::one());
    }
    m
}

/// A reduced module over `𝒜^Y` of the given family.
pub fn reduced_series(e: &ExtensionData, fam: &ReducedFamily, l: usize) -> Result<Representation> {
    let d = reduced_y(e)?;
    let q = &d.quiver;
    let vx = |lab: &str| q.vertex(lab).expect("vertex of the reduced quiver");
    let (m, w) = (vx("m"), vx("w"));
    let mut dims = vec![0; q.n()];
    let mut mats: Vec<(String, Mat)> = Vec::new();
    match fam {
        ReducedFamily::Preprojective => {
            if l == 0 {
                return Err(Error::Schema("M^(-1)_{1,1,1}[l] needs l >= 1".into()));
            }
            dims[w] = l - 1;
            dims[m] = l;
            mats.push(("theta".into(), i_down(l - 1)));
            mats.push(("theta'".into(), i_up(l - 1)));
        }
        ReducedFamily::Rank1(markers) => {
            dims[w] = l + 1;
            dims[m] = l;
            mats.push(("theta".into(), i_left(l)));
            mats.push(("theta'".into(), i_right(l)));
            let mut seen = Vec::new();
            for mk in markers {
                e.check_branch_vertex(mk.branch, mk.vertex)?;
                if seen.contains(&mk.branch) {
                    return Err(Error::Schema(format!("two markers on branch {}", mk.branch)));
                }
                seen.push(mk.branch);
                let pos = match (e.branches[mk.branch - 1].case(), mk.pos) {
                    (Case::Theta, None | Some(0)) => 0,
                    (Case::ThetaPrime, None) => l,
                    (Case::ThetaPrime, Some(p)) if p == l => l,
                    (Case::Mixed, p) if p.unwrap_or(0) <= l => p.unwrap_or(0),
                    (c, Some(p)) => {
                        return math(format!(
                            "position {p} is not allowed on branch {} whose differential is in the {c:?} case",
                            mk.branch
                        ))
                    }
                    (_, None) => unreachable!("all None cases are handled"),
                };
                dims[vx(&y_label(mk.branch, mk.vertex))] = 1;
                mats.push((format!("theta{}.{}", mk.branch, mk.vertex), row_unit(l + 1, &[pos])));
            }
        }
        ReducedFamily::Rank2 { r, s, u, v, w: wv } => {
            let find = |c: Case| {
                e.branch_of_case(c).map(|b| b + 1).ok_or_else(|| {
                    Error::Schema(format!("rank-two families need a branch in the {c:?} case; this quiver has none"))
                })
            };
            let (rb, sb, ub) = (find(Case::Theta)?, find(Case::ThetaPrime)?, find(Case::Mixed)?);
            e.check_branch_vertex(rb, *r)?;
            e.check_branch_vertex(sb, *s)?;
            e.check_branch_vertex(ub, *u)?;
            if let Some(v) = v {
                e.check_branch_vertex(rb, *v)?;
                if v <= r {
                    return Err(Error::Schema(format!("v = {v} must come after r = {r}")));
                }
            }
            if let Some(x) = wv {
                e.check_branch_vertex(sb, *x)?;
                if x <= s {
                    return Err(Error::Schema(format!("w = {x} must come after s = {s}")));
                }
            }
            let n = l + 2;
            dims[w] = n;
            dims[m] = l;
            let (theta, theta2, rv, sv, uv, vv, wvv): (Mat, Mat, Vec<usize>, Vec<usize>, Vec<usize>, usize, usize);
            if l % 2 == 0 {
                let h = l / 2;
                theta = Mat::direct_sum(&[&i_left(h), &i_left(h)]);
                theta2 = Mat::direct_sum(&[&i_right(h), &i_right(h)]);
                rv = vec![0];
                sv = vec![l + 1];
                uv = vec![0, h + 1];
                vv = h + 1;
                wvv = h;
            } else {
                let (k1, k2) = ((l + 1) / 2, (l - 1) / 2);
                theta = Mat::direct_sum(&[&i_left(k1), &i_left(k2)]);
                theta2 = Mat::direct_sum(&[&i_right(k1), &i_right(k2)]);
                rv = vec![0, k1 + 1];
                sv = vec![l + 1];
                uv = vec![k1 + 1];
                vv = k1 + 1;
                wvv = k1;
            }
            mats.push(("theta".into(), theta));
            mats.push(("theta'".into(), theta2));
            let mut put = |b: usize, j: usize, pos: &[usize]| {
                dims[vx(&y_label(b, j))] = 1;
                mats.push((format!("theta{b}.{j}"), row_unit(n, pos)));
            };
            put(rb, *r, &rv);
            put(sb, *s, &sv);
            put(ub, *u, &uv);
            if let Some(v) = v {
                put(rb, *v, &[vv]);
            }
            if let Some(x) = wv {
                put(sb, *x, &[wvv]);
            }
        }
    }
    let refs: Vec<(&str, Mat)> = mats.iter().map(|(a, m)| (a.as_str(), m.clone())).collect();
    Representation::from_mats(q, dims, &refs)
}

/// Shape of `𝒜^Y` as used by the reduced quadratic form: one complete graph per branch.
pub fn reduced_form_data(e: &ExtensionData) -> rootlat::ReducedFormData {
    rootlat::ReducedFormData { branches: e.branches.iter().map(|b| b.order - 1).collect() }
}

/// Dimension vector of a module over `𝒜^Y` in the ordering of [`rootlat::ReducedFormData`].
pub fn reduced_dim_vector(e: &ExtensionData, mt: &Representation) -> Result<Vec<i64>> {
    let d = reduced_y(e)?;
    let q = &d.quiver;
    let mut out = Vec::new();
    for (s, br) in e.branches.iter().enumerate() {
        for j in 2..=br.order {
            out.push(mt.dims[q.vertex(&y_label(s + 1, j)).expect("vertex")] as i64);
        }
    }
    out.push(mt.dims[q.vertex("m").expect("vertex")] as i64);
    out.push(mt.dims[q.vertex("w").expect("vertex")] as i64);
    Ok(out)
}

/// A summand type of the `Δ`-part of a subspace module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Summand {
    W0,
    X { branch: usize, index: usize },
    Y { branch: usize, index: usize },
    /// Not decomposed.
    Other,
}

/// A module over `Ã` given by its `Δ`-part `M₀` and the map `k^{m_ω} → Hom(R, M₀)`.
#[derive(Clone, Debug)]
pub struct SubspaceModule {
    pub m0: Representation,
    pub parts: Vec<(Summand, usize)>,
    pub m_omega: usize,
    /// Rows follow the slots, each block of height `(M₀)_e`.
    pub gamma: Mat,
}

impl SubspaceModule {
    pub fn to_representation(&self, e: &ExtensionData) -> Representation {
        let mut dims = self.m0.dims.clone();
        dims.push(self.m_omega);
        let mut rep = Representation::zero(&e.quiver, dims);
        for (a, m) in self.m0.mats.iter().enumerate() {
            rep.mats[a] = m.clone();
        }
        let mut off = 0;
        for s in &e.slots {
            let h = self.m0.dims[s.vertex];
            rep.mats[s.arrow] = self.gamma.slice(off, off + h, 0, self.m_omega);
            off += h;
        }
        rep
    }

    pub fn from_representation(e: &ExtensionData, rep: &Representation) -> Result<SubspaceModule> {
        rep.validate(&e.quiver)?;
        let n = e.n();
        let m0 = Representation { dims: rep.dims[..n].to_vec(), mats: rep.mats[..e.delta.arrows.len()].to_vec() };
        let blocks: Vec<&Mat> = e.slots.iter().map(|s| &rep.mats[s.arrow]).collect();
        let m_omega = rep.dims[e.omega];
        let gamma = if blocks.is_empty() { Mat::zeros(0, m_omega) } else { Mat::vstack(&blocks) };
        Ok(SubspaceModule { m0, parts: vec![(Summand::Other, 1)], m_omega, gamma })
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        let mut v = self.m0.dim_vector();
        v.push(self.m_omega as i64);
        v
    }

    pub fn to_json(&self, e: &ExtensionData) -> serde_json::Value {
        json!({
            "m0": self.m0.to_json(&e.delta),
            "parts": self.parts.iter().map(|(p, k)| json!({"summand": p, "mult": k})).collect::<Vec<_>>(),
            "m_omega": self.m_omega,
            "gamma": self.gamma,
            "dims": self.dim_vector(),
        })
    }
}

/// `rank M = m_ω − (multiplicity of W₀ in M₀)`.
pub fn rank(_e: &ExtensionData, m: &SubspaceModule) -> Result<i64> {
    if m.parts.iter().any(|(p, _)| *p == Summand::Other) {
        return math("rank needs the decomposition of M0 into wing modules and W0");
    }
    let w0: usize = m.parts.iter().filter(|(p, _)| *p == Summand::W0).map(|(_, k)| k).sum();
    Ok(m.m_omega as i64 - w0 as i64)
}

/// `W₀(ρ)`: the module `W₀` with one extra dimension at `ω` mapped to `ρ ∈ Hom(R, W₀)`.
pub fn subspace_module(e: &ExtensionData, m0: &Representation, rho: &[Scalar]) -> Result<SubspaceModule> {
    m0.validate(&e.delta)?;
    let h = e.hom_r_dim_of(&m0.dims);
    if rho.len() != h {
        return Err(Error::Schema(format!("vector of length {} in Hom(R, M0) of dimension {h}", rho.len())));
    }
    let parts = if m0.dims == e.w0_module.dims && m0.mats == e.w0_module.mats {
        vec![(Summand::W0, 1)]
    } else {
        vec![(Summand::Other, 1)]
    };
    Ok(SubspaceModule { m0: m0.clone(), parts, m_omega: 1, gamma: Mat::column(rho) })
}

/// The functor from reduced modules over `𝒜^Y` to `Ã`-modules.
pub fn expand_fy(e: &ExtensionData, mt: &Representation) -> Result<SubspaceModule> {
    let d = reduced_y(e)?;
    let q = &d.quiver;
    mt.validate(q)?;
    let vx = |lab: &str| q.vertex(lab).expect("vertex of the reduced quiver");
    let ar = |id: &str| q.arrow(id).expect("arrow of the reduced quiver");
    let (dm, dw) = (mt.dims[vx("m")], mt.dims[vx("w")]);
    // Summands of M0: (module, multiplicity, generator/arrow pairs, summand tag).
    struct Part<'a> {
        module: &'a Representation,
        mult: usize,
        gens: Vec<(&'a [Scalar], Mat)>,
        tag: Summand,
    }
    let mut parts = vec![Part {
        module: &e.w0_module,
        mult: dm,
        gens: vec![(&e.b, mt.mats[ar("theta")].clone()), (&e.b_prime, mt.mats[ar("theta'")].clone())],
        tag: Summand::W0,
    }];
    for (s, br) in e.branches.iter().enumerate() {
        for j in 2..=br.order {
            let k = mt.dims[vx(&y_label(s + 1, j))];
            if k == 0 {
                continue;
            }
            parts.push(Part {
                module: &br.y[j - 2],
                mult: k,
                gens: vec![(&br.b[j - 1], mt.mats[ar(&format!("theta{}.{j}", s + 1))].clone())],
                tag: Summand::Y { branch: s + 1, index: j },
            });
        }
    }
    let n = e.n();
    let mut dims = vec![0usize; n];
    let mut mats: Vec<Vec<Mat>> = vec![Vec::new(); e.delta.arrows.len()];
    for p in &parts {
        for v in 0..n {
            dims[v] += p.module.dims[v] * p.mult;
        }
        for (a, m) in p.module.mats.iter().enumerate() {
            mats[a].push(kron(m, &Mat::identity(p.mult)));
        }
    }
    let m0 = Representation {
        dims,
        mats: mats.iter().map(|ms| Mat::direct_sum(&ms.iter().collect::<Vec<_>>())).collect(),
    };
    let mut rows: Vec<Mat> = Vec::new();
    for k in 0..e.slots.len() {
        for p in &parts {
            let h = p.module.dims[e.slots[k].vertex];
            let mut blk = Mat::zeros(h * p.mult, dw);
            for (g, mm) in &p.gens {
                let gk = e.slot_block(&p.module.dims, g, k);
                blk = blk.add(&kron(&Mat::column(gk), mm));
            }
            rows.push(blk);
        }
    }
    let gamma = if rows.is_empty() { Mat::zeros(0, dw) } else { Mat::vstack(&rows.iter().collect::<Vec<_>>()) };
    let sm = SubspaceModule { m0, parts: parts.iter().map(|p| (p.tag.clone(), p.mult)).collect(), m_omega: dw, gamma };
    let mut want: Vec<i64> = e.w0.iter().map(|&x| x * dm as i64).collect();
    for p in &parts[1..] {
        for (x, &y) in want.iter_mut().zip(&p.module.dims) {
            *x += (y * p.mult) as i64;
        }
    }
    want.push(dw as i64);
    if sm.dim_vector() != want {
        return math("dimension vector of the expanded module does not match the reduced one");
    }
    Ok(sm)
}

/// The Kronecker series `a_0 = 0, a_1 = 1, a_{t+1} = 3a_t − a_{t−1}` up to `a_len`.
pub fn a_sequence(len: usize) -> Result<Vec<usize>> {
    let mut a = vec![0usize, 1];
    while a.len() <= len {
        let k = a.len();
        let next = a[k - 1]
            .checked_mul(3)
            .and_then(|x| x.checked_sub(a[k - 2]))
            .ok_or_else(|| Error::Math("a-sequence overflows".into()))?;
        a.push(next);
    }
    a.truncate(len + 1);
    Ok(a)
}

/// Preprojective `P_2^t` over the Kronecker quiver: dimensions `(t+1, t)`.
pub fn kron_p2(t: usize) -> Representation {
    let q = catalog::kronecker(2);
    Representation::from_mats(&q, vec![t + 1, t], &[("a1", i_down(t)), ("a2", i_up(t))]).expect("shapes match")
}

/// Preinjective `Q_2^t`: dimensions `(t, t+1)`.
pub fn kron_q2(t: usize) -> Representation {
    let q = catalog::kronecker(2);
    Representation::from_mats(&q, vec![t, t + 1], &[("a1", i_left(t)), ("a2", i_right(t))]).expect("shapes match")
}

/// Preprojective `P_3^t` over the three-arrow Kronecker quiver: dimensions `(a_{t+1}, a_t)`.
pub fn kron_p3(t: usize) -> Result<Representation> {
    let q = catalog::kronecker(3);
    if t == 0 {
        return Ok(Representation::simple(&q, 0));
    }
    let a = a_sequence(t + 1)?;
    let (rows, cols) = (a[t + 1], a[t]);
    let e = |k: usize| Mat::from_fn(k, cols, |r, c| if r == c { Scalar::one() } else { Scalar::zero() });
    let z = |k: usize| Mat::zeros(k, cols);
    let c = |k: usize| Mat::vstack(&[&e(k), &z(k)]);
    let mut a1_parts = vec![z(a[t - 1])];
    for k in (1..t).rev() {
        a1_parts.push(c(a[k]));
    }
    a1_parts.push(z(2));
    a1_parts.push(e(cols));
    let a1 = Mat::vstack(&a1_parts.iter().collect::<Vec<_>>());
    let a2 = Mat::vstack(&[&z(cols), &e(cols), &z(rows - 2 * cols)]);
    let a3 = Mat::vstack(&[&e(cols), &z(rows - cols)]);
    if a1.rows() != rows {
        return math(format!("P3^{t}: first matrix has {} rows, expected {rows}", a1.rows()));
    }
    Representation::from_mats(&q, vec![rows, cols], &[("a1", a1), ("a2", a2), ("a3", a3)])
}

/// Families over `Ã_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnFamily {
    Preprojective,
    M111,
    /// `_iM_{2,1,1}`: marker on branch 1 at `i`.
    M211First { i: usize },
    /// `M_{2,1,1}_j`: marker on branch 2 at `j` (non-linear orientations).
    M211Second { j: usize },
    /// `_iM_{2,2,1}_j`.
    M221 { i: usize, j: usize },
}

pub fn series_an(e: &ExtensionData, fam: &AnFamily, l: usize) -> Result<SubspaceModule> {
    if !matches!(e.dynkin.class, DynkinClass::A(_)) {
        return Err(Error::Schema(format!("{} is not of type A", e.dynkin.class)));
    }
    let mk = |branch, vertex| Marker { branch, vertex, pos: None };
    let rf = match fam {
        AnFamily::Preprojective => ReducedFamily::Preprojective,
        AnFamily::M111 => ReducedFamily::Rank1(vec![]),
        AnFamily::M211First { i } => ReducedFamily::Rank1(vec![mk(1, *i)]),
        AnFamily::M211Second { j } => ReducedFamily::Rank1(vec![mk(2, *j)]),
        AnFamily::M221 { i, j } => ReducedFamily::Rank1(vec![mk(1, *i), mk(2, *j)]),
    };
    expand_fy(e, &reduced_series(e, &rf, l)?)
}

/// The reduced family behind family `idx` (1..=12) over `D̃_n`.
pub fn dn_family(n: usize, idx: usize, l: usize, i: Option<usize>, j: Option<usize>) -> Result<ReducedFamily> {
    let mk = |branch, vertex| Marker { branch, vertex, pos: None };
    let need_i = || i.ok_or_else(|| Error::Schema(format!("family Dn{idx} needs the index i")));
    let need_j = || j.ok_or_else(|| Error::Schema(format!("family Dn{idx} needs the index j")));
    let even = |want: bool| -> Result<()> {
        if (l % 2 == 0) != want {
            return Err(Error::Schema(format!("family Dn{idx} needs {} l", if want { "even" } else { "odd" })));
        }
        Ok(())
    };
    let i_range = |i: usize| -> Result<usize> {
        if !(2..=n - 2).contains(&i) {
            return Err(Error::Schema(format!("index i = {i} outside 2..={}", n - 2)));
        }
        Ok(i)
    };
    Ok(match idx {
        1 => ReducedFamily::Rank1(vec![]),
        2 => ReducedFamily::Rank1(vec![mk(2, 2)]),
        3 => ReducedFamily::Rank1(vec![mk(3, 2)]),
        4 => ReducedFamily::Rank1(vec![mk(1, i_range(need_i()?)?)]),
        5 => ReducedFamily::Rank1(vec![mk(2, 2), mk(3, 2)]),
        6 => ReducedFamily::Rank1(vec![mk(1, i_range(need_i()?)?), mk(2, 2)]),
        7 => ReducedFamily::Rank1(vec![mk(1, i_range(need_i()?)?), mk(3, 2)]),
        8 => ReducedFamily::Rank1(vec![mk(1, i_range(need_i()?)?), mk(2, 2), mk(3, 2)]),
        9 | 11 => {
            even(idx == 9)?;
            ReducedFamily::Rank2 { r: i_range(need_i()?)?, s: 2, u: 2, v: None, w: None }
        }
        10 | 12 => {
            even(idx == 10)?;
            let (i, j) = (i_range(need_i()?)?, need_j()?);
            if j <= i || j > n - 2 {
                return Err(Error::Schema(format!("index j = {j} must satisfy i < j <= {}", n - 2)));
            }
            ReducedFamily::Rank2 { r: i, s: 2, u: 2, v: Some(j), w: None }
        }
        _ => return Err(Error::Schema(format!("D~n families are numbered 1..=12, got {idx}"))),
    })
}

/// Family `idx` over `D̃_n` in the standard orientation.
pub fn series_dn(n: usize, idx: usize, l: usize, i: Option<usize>, j: Option<usize>) -> Result<SubspaceModule> {
    if n < 4 {
        return Err(Error::Schema(format!("D_n needs n >= 4, got {n}")));
    }
    let e = extend(&catalog::dn_standard(n))?;
    let rf = dn_family(n, idx, l, i, j)?;
    expand_fy(&e, &reduced_series(&e, &rf, l)?)
}

/// Parses `A3`, `A4:lrr` (arrow between k and k+1 points right for `r`), `D5`, `E6`, `K2`.
pub fn parse_diagram(s: &str) -> Result<Biquiver> {
    let bad = || Error::Schema(format!("unknown diagram {s:?}"));
    let (head, orient) = match s.split_once(':') {
        Some((h, o)) => (h, Some(o)),
        None => (s, None),
    };
    let kind = head.chars().next().ok_or_else(bad)?;
    let n: usize = head[1..].parse().map_err(|_| bad())?;
    match (kind, orient) {
        ('A', None) if n >= 1 => Ok(catalog::linear_a(n)),
        ('A', Some(o)) if n >= 1 && o.len() == n - 1 => {
            let right: Vec<bool> = o
                .chars()
                .map(|c| match c {
                    'r' => Ok(true),
                    'l' => Ok(false),
                    _ => Err(bad()),
                })
                .collect::<Result<_>>()?;
            Ok(catalog::oriented_a(n, &right))
        }
        ('D', None) if n >= 4 => Ok(catalog::dn_standard(n)),
        ('E', None) if (6..=8).contains(&n) => Ok(catalog::e_subspace(n)),
        ('K', None) if n >= 1 => Ok(catalog::kronecker(n)),
        _ => Err(bad()),
    }
}

/// Input of the `series` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub family: String,
    pub l: usize,
    #[serde(default)]
    pub i: Option<usize>,
    #[serde(default)]
    pub j: Option<usize>,
    /// Second extra marker `w` of the `3,3,2` families.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub side: Option<Side>,
    #[serde(default)]
    pub diagram: Option<String>,
    /// Explicit markers for `M1_211`, `M1_221`, `M1_222`.
    #[serde(default)]
    pub markers: Option<Vec<Marker>>,
}

/// Output of the `series` command.
#[derive(Clone, Debug)]
pub enum SeriesOutput {
    Kronecker { quiver: Biquiver, module: Representation },
    Reduced { ditalgebra: Ditalgebra, module: Representation },
    Module { ext: Box<ExtensionData>, module: SubspaceModule },
}

impl SeriesOutput {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SeriesOutput::Kronecker { quiver, module } => {
                json!({"quiver": quiver.to_json(), "module": module.to_json(quiver), "dims": module.dim_vector()})
            }
            SeriesOutput::Reduced { ditalgebra, module } => json!({
                "ditalgebra": ditalgebra.to_json(),
                "module": module.to_json(&ditalgebra.quiver),
                "dims": module.dim_vector(),
            }),
            SeriesOutput::Module { ext, module } => json!({
                "quiver": ext.quiver.to_json(),
                "module": module.to_representation(ext).to_json(&ext.quiver),
                "subspace": module.to_json(ext),
                "dims": module.dim_vector(),
            }),
        }
    }

    /// Checks that the module is exceptional over the algebra it lives on.
    pub fn verify(&self) -> Result<bool> {
        match self {
            SeriesOutput::Kronecker { quiver, module } => {
                crate::repcat::is_exceptional(&Ditalgebra::zero_diff(quiver.clone()), module)
            }
            SeriesOutput::Reduced { ditalgebra, module } => crate::repcat::is_exceptional(ditalgebra, module),
            SeriesOutput::Module { ext, module } => crate::repcat::is_exceptional(
                &Ditalgebra::zero_diff(ext.quiver.clone()),
                &module.to_representation(ext),
            ),
        }
    }
}

fn reduced_from_spec(spec: &SeriesSpec) -> Result<ReducedFamily> {
    let need = |x: Option<usize>, name: &str| {
        x.ok_or_else(|| Error::Schema(format!("family {} needs \"{name}\"", spec.family)))
    };
    let markers = |count: usize| -> Result<Vec<Marker>> {
        if let Some(ms) = &spec.markers {
            if ms.len() != count {
                return Err(Error::Schema(format!("family {} takes {count} markers", spec.family)));
            }
            return Ok(ms.clone());
        }
        let mk = |branch, vertex| Marker { branch, vertex, pos: None };
        Ok(match count {
            1 => vec![mk(1, need(spec.i, "i")?)],
            2 => vec![mk(1, need(spec.i, "i")?), mk(2, need(spec.j, "j")?)],
            _ => vec![mk(1, need(spec.i, "i")?), mk(2, spec.j.unwrap_or(2)), mk(3, 2)],
        })
    };
    let rank2 = |v: bool, w: bool| -> Result<ReducedFamily> {
        let r = spec.i.unwrap_or(2);
        let vv = if v { Some(need(spec.j, "j")?) } else { None };
        let ww = if w { Some(need(spec.k, "k")?) } else { None };
        Ok(ReducedFamily::Rank2 { r, s: 2, u: 2, v: vv, w: ww })
    };
    let parity = |even: bool| -> Result<()> {
        if (spec.l % 2 == 0) != even {
            return Err(Error::Schema(format!("family {} needs {} l", spec.family, if even { "even" } else { "odd" })));
        }
        Ok(())
    };
    match spec.family.as_str() {
        "M-1_111" => Ok(ReducedFamily::Preprojective),
        "M1_111" => Ok(ReducedFamily::Rank1(vec![])),
        "M1_211" => Ok(ReducedFamily::Rank1(markers(1)?)),
        "M1_221" => Ok(ReducedFamily::Rank1(markers(2)?)),
        "M1_222" => Ok(ReducedFamily::Rank1(markers(3)?)),
        "N2_222" | "M2_222" => {
            parity(spec.family.starts_with('N'))?;
            rank2(false, false)
        }
        "N2_322" | "M2_322" => {
            parity(spec.family.starts_with('N'))?;
            rank2(true, false)
        }
        "N2_332" | "M2_332" => {
            parity(spec.family.starts_with('N'))?;
            rank2(true, true)
        }
        other => Err(Error::Schema(format!("unknown family {other:?}"))),
    }
}

/// Builds the module described by a [`SeriesSpec`].
pub fn build_series(spec: &SeriesSpec) -> Result<SeriesOutput> {
    match spec.family.as_str() {
        "P2" => return Ok(SeriesOutput::Kronecker { quiver: catalog::kronecker(2), module: kron_p2(spec.l) }),
        "Q2" => return Ok(SeriesOutput::Kronecker { quiver: catalog::kronecker(2), module: kron_q2(spec.l) }),
        "P3" => return Ok(SeriesOutput::Kronecker { quiver: catalog::kronecker(3), module: kron_p3(spec.l)? }),
        _ => {}
    }
    if let Some(idx) = spec.family.strip_prefix("Dn") {
        let idx: usize = idx.parse().map_err(|_| Error::Schema(format!("unknown family {:?}", spec.family)))?;
        let diagram = spec.diagram.as_deref().unwrap_or("D4");
        let n: usize = diagram
            .strip_prefix('D')
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::Schema(format!("family {} needs a D diagram", spec.family)))?;
        let e = extend(&parse_diagram(diagram)?)?;
        let rf = dn_family(n, idx, spec.l, spec.i, spec.j)?;
        let module = expand_fy(&e, &reduced_series(&e, &rf, spec.l)?)?;
        return Ok(SeriesOutput::Module { ext: Box::new(e), module });
    }
    let diagram = spec.diagram.as_deref().ok_or_else(|| Error::Schema("\"diagram\" is required".into()))?;
    let e = extend(&parse_diagram(diagram)?)?;
    let rf = reduced_from_spec(spec)?;
    let red = reduced_series(&e, &rf, spec.l)?;
    match spec.side.unwrap_or(Side::Y) {
        Side::Y => {
            let module = expand_fy(&e, &red)?;
            Ok(SeriesOutput::Module { ext: Box::new(e), module })
        }
        Side::X => Err(Error::Schema("reduced families are given over the Y side; use \"side\": \"Y\"".into())),
    }
}

/// Builds the reduced module of a [`SeriesSpec`] without expanding it.
pub fn build_reduced(spec: &SeriesSpec) -> Result<SeriesOutput> {
    let diagram = spec.diagram.as_deref().ok_or_else(|| Error::Schema("\"diagram\" is required".into()))?;
    let e = extend(&parse_diagram(diagram)?)?;
    let rf = reduced_from_spec(spec)?;
    let module = reduced_series(&e, &rf, spec.l)?;
    Ok(SeriesOutput::Reduced { ditalgebra: reduced_y(&e)?, module })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathdit::check_d_squared;
    use crate::repcat::is_exceptional;

    #[test]
    fn a_sequence_values() {
        assert_eq!(a_sequence(6).unwrap(), vec![0, 1, 3, 8, 21, 55, 144]);
    }

    #[test]
    fn p3_small() {
        let d = Ditalgebra::zero_diff(catalog::kronecker(3));
        for t in 0..4 {
            let m = kron_p3(t).unwrap();
            assert!(is_exceptional(&d, &m).unwrap(), "P3^{t}");
        }
    }

    #[test]
    fn extension_shapes() {
        for (q, t) in [
            (catalog::linear_a(1), 0),
            (catalog::linear_a(3), 1),
            (catalog::oriented_a(3, &[true, false]), 2),
            (catalog::dn_standard(4), 3),
            (catalog::dn_standard(6), 3),
            (catalog::e_subspace(6), 3),
        ] {
            let e = extend(&q).unwrap();
            assert_eq!(e.branches.len(), t);
            for side in [Side::X, Side::Y] {
                let d = reduced_ditalgebra(&e, side).unwrap();
                assert!(check_d_squared(&d).is_ok());
            }
        }
    }

    #[test]
    fn w0_rho_is_a_brick_on_the_radical() {
        let e = extend(&catalog::dn_standard(5)).unwrap();
        let d = Ditalgebra::zero_diff(e.quiver.clone());
        for br in &e.branches {
            let m = subspace_module(&e, &e.w0_module, br.rho()).unwrap();
            assert_eq!(m.dim_vector(), e.radical());
            let r = m.to_representation(&e);
            assert_eq!(sigma_dims(&d, &r, &r).unwrap(), (1, 1));
        }
    }

    #[test]
    fn rank1_d5() {
        let e = extend(&catalog::dn_standard(5)).unwrap();
        let d = Ditalgebra::zero_diff(e.quiver.clone());
        let ry = reduced_ditalgebra(&e, Side::Y).unwrap();
        for idx in 1..=8 {
            for l in 0..3 {
                let rf = dn_family(5, idx, l, Some(2), None).unwrap();
                let red = reduced_series(&e, &rf, l).unwrap();
                assert!(is_exceptional(&ry, &red).unwrap(), "reduced Dn{idx} l={l}");
                let m = expand_fy(&e, &red).unwrap();
                assert!(is_exceptional(&d, &m.to_representation(&e)).unwrap(), "Dn{idx} l={l}");
                assert_eq!(rank(&e, &m).unwrap(), 1);
            }
        }
    }
}
