#![allow(dead_code)]

use quivrep::exactlin::{int, Mat};
use quivrep::quiver::Biquiver;
use quivrep::repcat::Representation;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Case count from `PROPTEST_CASES`, falling back to `default`; failures are not persisted to disk.
pub fn config(default: u32) -> proptest::test_runner::Config {
    let cases = std::env::var("PROPTEST_CASES").ok().and_then(|v| v.parse().ok()).unwrap_or(default);
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Acyclic biquiver: every arrow runs from a later to an earlier vertex of a random order.
/// With `dotted_share = 0.0` only solid arrows are produced. No solid and dotted arrows are parallel.
pub fn random_acyclic(rng: &mut impl Rng, max_v: usize, max_a: usize, dotted_share: f64) -> Biquiver {
    random_acyclic_min(rng, 1, max_v, 0, max_a, dotted_share)
}

/// As [`random_acyclic`], with lower bounds on the vertex and arrow counts. The first arrow is always solid.
pub fn random_acyclic_min(
    rng: &mut impl Rng,
    min_v: usize,
    max_v: usize,
    min_a: usize,
    max_a: usize,
    dotted_share: f64,
) -> Biquiver {
    let n = rng.gen_range(min_v..=max_v);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut q = Biquiver::with_vertices((1..=n).map(|i| i.to_string()));
    if n == 1 {
        return q;
    }
    let arrows = rng.gen_range(min_a..=max_a);
    let mut kind = std::collections::HashMap::new();
    for k in 0..arrows {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
        let (src, tgt) = (order[hi], order[lo]);
        let degree = *kind.entry((src, tgt)).or_insert_with(|| u8::from(k > 0 && rng.gen_bool(dotted_share)));
        let id = if degree == 0 { format!("a{k}") } else { format!("g{k}") };
        q.add_arrow(id, src, tgt, degree);
    }
    q
}

pub fn random_dims(rng: &mut impl Rng, q: &Biquiver, max_dim: usize) -> Vec<usize> {
    (0..q.n()).map(|_| rng.gen_range(0..=max_dim)).collect()
}

pub fn random_rep(rng: &mut impl Rng, q: &Biquiver, dims: Vec<usize>) -> Representation {
    let mut m = Representation::zero(q, dims.clone());
    for (a, arrow) in q.solid() {
        m.mats[a] = Mat::from_fn(dims[arrow.tgt], dims[arrow.src], |_, _| int(rng.gen_range(-1..=2)));
    }
    m
}
