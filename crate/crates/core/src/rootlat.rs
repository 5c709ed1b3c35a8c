//! Roots of positive definite forms, Dynkin data (maximal roots, exceptional vertices, star types),
//! radical vectors of extended Dynkin forms and the reduced form `q^{xy}` with its rank families.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{math, Error, Result};
use crate::exactlin::{rank_kernel, to_i64};
use crate::quiver::{self, Biquiver, FormData};

/// All nonzero `0 ≤ x ≤ bound` with `q(x) = 1`, in lexicographic order.
/// Fails when some nonzero vector of the box has `q(x) ≤ 0`, i.e. the form is not positive definite there.
pub fn positive_roots(f: &FormData, bound: &[i64]) -> Result<Vec<Vec<i64>>> {
    let n = f.n();
    if bound.len() != n {
        return Err(Error::Schema(format!("bound has length {}, expected {n}", bound.len())));
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    loop {
        // Odometer step, last coordinate fastest, so the output is lexicographic.
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if x[k] < bound[k] {
                x[k] += 1;
                for y in x.iter_mut().skip(k + 1) {
                    *y = 0;
                }
                break;
            }
        }
        let v = f.quadratic(&x)?;
        if v <= 0 {
            return math(format!("the form is not positive definite: q({x:?}) = {v}"));
        }
        if v == 1 {
            out.push(x.clone());
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinClass {
    A(usize),
    D(usize),
    E(usize),
}

impl std::fmt::Display for DynkinClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DynkinClass::A(n) => write!(f, "A{n}"),
            DynkinClass::D(n) => write!(f, "D{n}"),
            DynkinClass::E(n) => write!(f, "E{n}"),
        }
    }
}

/// A Dynkin quiver with its maximal root and the weights `d_i = 2(e_i, w₀)`.
#[derive(Clone, Debug)]
pub struct DynkinData {
    pub class: DynkinClass,
    pub quiver: Biquiver,
    /// Branch vertex for D and E; `None` for A.
    pub center: Option<usize>,
    /// Arms as vertex lists leaving the centre (for A: the whole path from one end).
    pub arms: Vec<Vec<usize>>,
    /// Arm lengths counting the centre, largest first, entries equal to 1 dropped.
    pub star_type: Vec<usize>,
    pub max_root: Vec<i64>,
    pub weights: Vec<i64>,
}

impl DynkinData {
    /// Vertices with nonzero weight, with the weights.
    pub fn exceptional_vertices(&self) -> Vec<(usize, i64)> {
        self.weights.iter().enumerate().filter(|(_, &w)| w != 0).map(|(i, &w)| (i, w)).collect()
    }

    pub fn form(&self) -> FormData {
        FormData::new(&self.quiver)
    }

    pub fn positive_roots(&self) -> Result<Vec<Vec<i64>>> {
        positive_roots(&self.form(), &self.max_root)
    }
}

fn simple_graph(q: &Biquiver) -> Result<Vec<Vec<usize>>> {
    if q.has_dotted() {
        return Err(Error::Schema("a Dynkin quiver has solid arrows only".into()));
    }
    let n = q.n();
    let mut adj = vec![Vec::new(); n];
    for a in &q.arrows {
        if a.src == a.tgt || adj[a.src].contains(&a.tgt) {
            return math("the underlying graph has loops or multiple edges, so it is not Dynkin");
        }
        adj[a.src].push(a.tgt);
        adj[a.tgt].push(a.src);
    }
    if n == 0 || q.arrows.len() + 1 != n || !q.is_connected() {
        return math("the underlying graph is not a tree, so it is not Dynkin");
    }
    Ok(adj)
}

fn walk_arm(adj: &[Vec<usize>], from: usize, first: usize) -> Vec<usize> {
    let mut arm = vec![first];
    let (mut prev, mut cur) = (from, first);
    while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
        arm.push(next);
        prev = cur;
        cur = next;
    }
    arm
}

/// Classifies a Dynkin quiver and computes its maximal root from the arm lengths.
pub fn dynkin_data(q: &Biquiver) -> Result<DynkinData> {
    let adj = simple_graph(q)?;
    let n = q.n();
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    let mut w0 = vec![0i64; n];
    let (class, center, arms) = match branch.as_slice() {
        [] => {
            let start = (0..n).find(|&v| adj[v].len() <= 1).expect("a tree has a leaf");
            let mut path = vec![start];
            if n > 1 {
                path.extend(walk_arm(&adj, start, adj[start][0]));
            }
            w0.iter_mut().for_each(|x| *x = 1);
            (DynkinClass::A(n), None, vec![path])
        }
        [c] if adj[*c].len() == 3 => {
            let c = *c;
            let mut arms: Vec<Vec<usize>> = adj[c].iter().map(|&x| walk_arm(&adj, c, x)).collect();
            if arms.iter().flatten().any(|&v| adj[v].len() > 2) {
                return math("more than one branch vertex, so the graph is not Dynkin");
            }
            arms.sort_by_key(|a| a.len());
            let lens: Vec<usize> = arms.iter().map(|a| a.len()).collect();
            // Maximal root along each arm, outward from the centre.
            let (class, centre_value, values): (DynkinClass, i64, Vec<Vec<i64>>) = match lens.as_slice() {
                [1, 1, k] => {
                    let mut long = vec![2; *k];
                    long[k - 1] = 1;
                    (DynkinClass::D(k + 3), 2, vec![vec![1], vec![1], long])
                }
                [1, 2, 2] => (DynkinClass::E(6), 3, vec![vec![2], vec![2, 1], vec![2, 1]]),
                [1, 2, 3] => (DynkinClass::E(7), 4, vec![vec![2], vec![3, 2], vec![3, 2, 1]]),
                [1, 2, 4] => (DynkinClass::E(8), 6, vec![vec![3], vec![4, 2], vec![5, 4, 3, 2]]),
                _ => return math(format!("star with arms {lens:?} is not a Dynkin diagram")),
            };
            w0[c] = centre_value;
            for (arm, vals) in arms.iter().zip(&values) {
                for (&v, &x) in arm.iter().zip(vals) {
                    w0[v] = x;
                }
            }
            (class, Some(c), arms)
        }
        _ => return math("the graph has a vertex of degree above 3 or several branch vertices, so it is not Dynkin"),
    };
    let form = FormData::new(q);
    let weights: Vec<i64> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            form.sym2(&e, &w0)
        })
        .collect::<Result<_>>()?;
    let star_type = match class {
        DynkinClass::A(_) => a_type(q, &arms[0]),
        _ => {
            let mut t: Vec<usize> = arms.iter().map(|a| a.len() + 1).collect();
            t.sort_unstable_by(|a, b| b.cmp(a));
            t
        }
    };
    debug_assert_eq!(form.quadratic(&w0)?, 1);
    Ok(DynkinData { class, quiver: q.clone(), center, arms, star_type, max_root: w0, weights })
}

/// `(p+1, q+1)` where `p` arrows of the path point toward its first vertex and `q` away, `p ≥ q`; ones dropped.
fn a_type(q: &Biquiver, path: &[usize]) -> Vec<usize> {
    let mut toward = 0;
    let mut away = 0;
    for w in path.windows(2) {
        let a = q.arrows.iter().find(|a| (a.src, a.tgt) == (w[1], w[0]) || (a.src, a.tgt) == (w[0], w[1]));
        match a {
            Some(a) if a.tgt == w[0] => toward += 1,
            Some(_) => away += 1,
            None => {}
        }
    }
    let (p, r) = if toward >= away { (toward, away) } else { (away, toward) };
    let mut t = vec![p + 1];
    if r > 0 {
        t.push(r + 1);
    }
    t
}

/// The primitive positive generator of the radical of the symmetrized Euler form.
pub fn radical_generator(ext: &Biquiver) -> Result<Vec<i64>> {
    let f = FormData::new(ext);
    let m = f.matrix();
    let sym = m.add(&m.transpose());
    let (_, ker) = rank_kernel(&sym);
    if ker.len() != 1 {
        return math(format!("the radical has dimension {}, expected 1 for an extended Dynkin quiver", ker.len()));
    }
    let v = &ker[0];
    let den = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| acc.gcd(x));
    let mut x: Vec<i64> = ints
        .iter()
        .map(|y| to_i64(&crate::exactlin::Scalar::from_integer(y / &g)).expect("small radical entries"))
        .collect();
    if x.iter().all(|&y| y <= 0) {
        x.iter_mut().for_each(|y| *y = -*y);
    }
    if x.iter().any(|&y| y <= 0) {
        return math(format!("the radical vector {x:?} is not positive"));
    }
    let phi = quiver::coxeter(ext)?;
    if quiver::apply(&phi, &x) != x {
        return math("the radical vector is not fixed by the Coxeter matrix");
    }
    Ok(x)
}

/// The graph `𝔠` left after deleting `ω` and `m` from a reduced quiver: each branch is a complete graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedFormData {
    /// Number of `𝔠`-vertices in each branch.
    pub branches: Vec<usize>,
}

impl ReducedFormData {
    /// Shape of the reduced quiver of a Dynkin diagram with the given star type: branch sizes `n_s − 1`.
    pub fn from_star_type(star_type: &[usize]) -> ReducedFormData {
        ReducedFormData { branches: star_type.iter().map(|&t| t - 1).collect() }
    }

    /// Vector length: the `𝔠`-vertices branch by branch, then `m`, then `ω`.
    pub fn len(&self) -> usize {
        self.branches.iter().sum::<usize>() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn m(&self) -> usize {
        self.len() - 2
    }

    pub fn omega(&self) -> usize {
        self.len() - 1
    }

    /// Position of the `k`-th vertex (from 0) of branch `s`.
    pub fn index(&self, s: usize, k: usize) -> usize {
        self.branches[..s].iter().sum::<usize>() + k
    }

    fn branch_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.branches
            .iter()
            .map(|&b| {
                let r = start..start + b;
                start += b;
                r
            })
            .collect()
    }

    /// Edges of `𝔠`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in self.branch_ranges() {
            for i in r.clone() {
                for j in i + 1..r.end {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// `r = d_ω − d_m`.
pub fn reduced_rank(d: &[i64], rf: &ReducedFormData) -> i64 {
    d[rf.omega()] - d[rf.m()]
}

/// `q^{xy}` through the rank decomposition `r² + Σ d_i(d_i − r) + Σ_𝔠 d_i d_j`.
pub fn reduced_q(d: &[i64], rf: &ReducedFormData) -> i64 {
    let r = reduced_rank(d, rf);
    let inner: i64 = d[..rf.m()].iter().map(|&x| x * (x - r)).sum();
    let edges: i64 = rf.edges().iter().map(|&(i, j)| d[i] * d[j]).sum();
    r * r + inner + edges
}

/// `q^{xy}` evaluated directly from the reduced quiver: Kronecker pair `ω ⇉ m`, a solid arrow `ω → i`,
/// a dotted arrow `m → i` for every `𝔠`-vertex, plus the dotted arrows of `𝔠`.
pub fn reduced_q_direct(d: &[i64], rf: &ReducedFormData) -> i64 {
    let (m, w) = (rf.m(), rf.omega());
    let sq: i64 = d.iter().map(|x| x * x).sum();
    let inner = &d[..m];
    let solid: i64 = 2 * d[m] * d[w] + inner.iter().map(|x| x * d[w]).sum::<i64>();
    let dotted: i64 = inner.iter().map(|x| x * d[m]).sum::<i64>() + rf.edges().iter().map(|&(i, j)| d[i] * d[j]).sum::<i64>();
    sq - solid + dotted
}

/// Family label such as `R^(3)_{3,3,2^2}`: per branch `1 +` the support size, with the entries above one as exponent.
pub fn family_label(d: &[i64], rf: &ReducedFormData) -> String {
    let mut parts: Vec<(usize, String)> = rf
        .branch_ranges()
        .into_iter()
        .map(|r| {
            let vals: Vec<i64> = d[r].iter().copied().filter(|&x| x != 0).collect();
            let mut big: Vec<i64> = vals.iter().copied().filter(|&x| x > 1).collect();
            big.sort_unstable_by(|a, b| b.cmp(a));
            let exp: String = big.iter().map(|x| x.to_string()).collect();
            (vals.len() + 1, exp)
        })
        .collect();
    while parts.len() < 3 {
        parts.push((1, String::new()));
    }
    parts.sort_by(|a, b| b.cmp(a));
    let body: Vec<String> =
        parts.iter().map(|(l, e)| if e.is_empty() { l.to_string() } else { format!("{l}^{e}") }).collect();
    format!("R^({})_{{{}}}", reduced_rank(d, rf), body.join(","))
}

/// Roots of `q^{xy}` of rank `r` with `𝔠`-entries at most `bound`, grouped by family label.
/// Representatives have `d_m = 0` when `r ≥ 0` and `d_ω = 0` when `r < 0`.
pub fn enumerate_rank_families(rf: &ReducedFormData, r: i64, bound: i64) -> Result<BTreeMap<String, Vec<Vec<i64>>>> {
    if r.abs() > 6 {
        return math("rank families are tabulated for |r| ≤ 6 only");
    }
    let k = rf.m();
    let mut out: BTreeMap<String, Vec<Vec<i64>>> = BTreeMap::new();
    let mut x = vec![0i64; k];
    loop {
        let mut d = x.clone();
        if r >= 0 {
            d.extend([0, r]);
        } else {
            d.extend([-r, 0]);
        }
        if reduced_q(&d, rf) == 1 {
            out.entry(family_label(&d, rf)).or_default().push(d);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < bound {
                x[i] += 1;
                x[i + 1..].iter_mut().for_each(|y| *y = 0);
                break;
            }
        }
    }
}

/// The families of roots of rank at most two, with their `𝔠`-support per branch (largest first).
pub const MINOR_RANK_TABLE: &[(i64, &str, &[usize])] = &[
    (-1, "R^(-1)_{1,1,1}", &[]),
    (0, "R^(0)_{2,1,1}", &[1]),
    (1, "R^(1)_{1,1,1}", &[]),
    (1, "R^(1)_{2,1,1}", &[1]),
    (1, "R^(1)_{2,2,1}", &[1, 1]),
    (1, "R^(1)_{2,2,2}", &[1, 1, 1]),
    (2, "R^(2)_{2,2,2}", &[1, 1, 1]),
    (2, "R^(2)_{3,2,2}", &[2, 1, 1]),
    (2, "R^(2)_{3,3,2}", &[2, 2, 1]),
];

/// Families of the minor-rank table whose support fits into the given shape.
pub fn minor_rank_families(rf: &ReducedFormData, r: i64) -> Vec<&'static str> {
    let mut sizes = rf.branches.clone();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    MINOR_RANK_TABLE
        .iter()
        .filter(|(rank, _, need)| {
            *rank == r && need.len() <= sizes.len() && need.iter().zip(&sizes).all(|(n, s)| n <= s)
        })
        .map(|(_, label, _)| *label)
        .collect()
}

/// Period and multiplicity of the posprojective component, from rank vectors of `Φ⁻ᵏ` of the projective section.
pub fn period_multiplicity(ext: &crate::euclid::ExtensionData) -> Result<(usize, i64)> {
    let q = &ext.quiver;
    let n = q.n();
    let phi_inv = quiver::coxeter(q)?.inverse().ok_or_else(|| Error::Math("Coxeter matrix is singular".into()))?;
    let mut section = quiver::projective_vectors(q)?;
    // Periods of extended Dynkin quivers are at most 30; the window starts halfway so that
    // any preperiodic part has died out.
    let max_period = 30;
    let horizon = 4 * max_period + 2;
    let mut ranks: Vec<Vec<i64>> = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        ranks.push(section.iter().map(|v| ext.rank_of_vector(v)).collect::<Result<_>>()?);
        section = section.iter().map(|v| quiver::apply(&phi_inv, v)).collect();
    }
    let start = horizon / 2;
    let p = (1..=max_period)
        .find(|&p| (start..horizon - p).all(|k| ranks[k] == ranks[k + p]))
        .ok_or_else(|| Error::Math("no period found within the iteration horizon".into()))?;
    let mut sum = vec![0i64; n];
    for r in &ranks[start..start + p] {
        for (s, x) in sum.iter_mut().zip(r) {
            *s += x;
        }
    }
    let delta = ext.radical();
    let m = sum[ext.omega] / delta[ext.omega];
    if sum.iter().zip(&delta).any(|(s, d)| *s != m * d) {
        return math(format!("rank sum {sum:?} over one period is not a multiple of the radical vector"));
    }
    Ok((p, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;

    #[test]
    fn a3_roots() {
        let d = dynkin_data(&catalog::linear_a(3)).unwrap();
        assert_eq!(d.max_root, vec![1, 1, 1]);
        assert_eq!(d.positive_roots().unwrap().len(), 6);
        assert_eq!(d.exceptional_vertices(), vec![(0, 1), (2, 1)]);
        assert_eq!(d.star_type, vec![3]);
    }

    #[test]
    fn e_roots() {
        let e6 = dynkin_data(&catalog::e_subspace(6)).unwrap();
        assert_eq!(e6.positive_roots().unwrap().len(), 36);
        let e8 = dynkin_data(&catalog::e_subspace(8)).unwrap();
        let c = e8.center.unwrap();
        assert_eq!(e8.max_root[c], 6);
        let long: Vec<i64> = e8.arms[2].iter().map(|&v| e8.max_root[v]).collect();
        assert_eq!(long, vec![5, 4, 3, 2]);
        assert_eq!(e8.star_type, vec![5, 3, 2]);
        assert_eq!(e8.exceptional_vertices(), vec![(*e8.arms[2].last().unwrap(), 1)]);
    }

    #[test]
    fn d4_center_is_exceptional() {
        let d = dynkin_data(&catalog::dn_standard(4)).unwrap();
        let c = d.center.unwrap();
        assert_eq!(d.max_root[c], 2);
        assert_eq!(d.exceptional_vertices(), vec![(c, 1)]);
        assert_eq!(d.star_type, vec![2, 2, 2]);
    }

    #[test]
    fn non_dynkin_rejected() {
        assert!(dynkin_data(&catalog::kronecker(2)).is_err());
        assert!(dynkin_data(&catalog::star_subspace(&[2, 2, 2])).is_err());
        assert!(positive_roots(&FormData::new(&catalog::kronecker(2)), &[2, 2]).is_err());
    }

    #[test]
    fn reduced_form_examples() {
        let rf = ReducedFormData::from_star_type(&[2, 2, 2]);
        let mut d = vec![0; rf.len()];
        d[rf.m()] = 3;
        d[rf.omega()] = 3;
        assert_eq!((reduced_q(&d, &rf), reduced_rank(&d, &rf)), (0, 0));
        let mut d = vec![0; rf.len()];
        d[rf.m()] = 4;
        d[rf.omega()] = 3;
        assert_eq!(reduced_q(&d, &rf), 1);
        let rf = ReducedFormData::from_star_type(&[3, 3, 2]);
        let mut d = vec![1; rf.len()];
        d[rf.m()] = 0;
        d[rf.omega()] = 2;
        assert_eq!(reduced_q(&d, &rf), 1);
        assert_eq!(family_label(&d, &rf), "R^(2)_{3,3,2}");
        assert!(enumerate_rank_families(&rf, -2, 3).unwrap().is_empty());
        let zero = enumerate_rank_families(&rf, 0, 3).unwrap();
        assert_eq!(zero.keys().collect::<Vec<_>>(), vec!["R^(0)_{2,1,1}"]);
    }

    #[test]
    fn kronecker_radical() {
        assert_eq!(radical_generator(&catalog::kronecker(2)).unwrap(), vec![1, 1]);
    }
}
