//! Families over the Kronecker and extended Dynkin quivers, built directly from their matrix displays
//! and compared with the constructions of the library.

use quivrep::euclid::{self, AnFamily, SeriesSpec};
use quivrep::exactlin::{i_left, i_right, Mat};
use quivrep::pathdit::Ditalgebra;
use quivrep::quiver::{catalog, Biquiver};
use quivrep::repcat::{self, Representation};

fn eye(n: usize) -> Mat {
    Mat::identity(n)
}

fn zeros(r: usize, c: usize) -> Mat {
    Mat::zeros(r, c)
}

fn vs(a: &Mat, b: &Mat) -> Mat {
    Mat::vstack(&[a, b])
}

fn hs(a: &Mat, b: &Mat) -> Mat {
    Mat::hstack(&[a, b])
}

/// The extended `D̃_n` quiver of the library: `D_n` in standard orientation plus `w → n−1`.
fn dn_tilde(n: usize) -> Biquiver {
    euclid::extend(&catalog::dn_standard(n)).unwrap().quiver
}

/// A display of a `D̃_n` family: the maps at `ω`, at `n`, into the leaf `1` and into the leaf `2`.
/// The chain `n−1 → ⋯ → 3` carries identities.
struct Display {
    omega: Mat,
    top: Mat,
    leaf1: Mat,
    leaf2: Mat,
}

fn transcribe(n: usize, d: &Display) -> Representation {
    let q = dn_tilde(n);
    let mid = d.omega.rows();
    let mut dims = vec![d.leaf1.rows(), d.leaf2.rows()];
    dims.extend(std::iter::repeat(mid).take(n - 3));
    dims.push(d.top.cols());
    dims.push(d.omega.cols());
    let mut mats: Vec<(String, Mat)> = vec![
        ("a1".into(), d.leaf1.clone()),
        ("a2".into(), d.leaf2.clone()),
        (format!("a{}", n - 1), d.top.clone()),
        ("o1".into(), d.omega.clone()),
    ];
    for k in 3..n - 1 {
        mats.push((format!("a{k}"), eye(mid)));
    }
    let refs: Vec<(&str, Mat)> = mats.iter().map(|(a, m)| (a.as_str(), m.clone())).collect();
    Representation::from_mats(&q, dims, &refs).unwrap()
}

fn dn1(l: usize) -> Display {
    Display {
        omega: vs(&i_right(l), &i_left(l)),
        top: vs(&eye(l), &eye(l)),
        leaf1: hs(&zeros(l, l), &eye(l)),
        leaf2: hs(&eye(l), &zeros(l, l)),
    }
}

fn dn2(l: usize) -> Display {
    Display {
        omega: vs(&eye(l + 1), &i_left(l)),
        top: vs(&eye(l + 1), &i_right(l)),
        leaf1: hs(&zeros(l, l + 1), &eye(l)),
        leaf2: hs(&eye(l + 1), &zeros(l + 1, l)),
    }
}

fn dn3(l: usize) -> Display {
    Display {
        omega: vs(&i_right(l), &eye(l + 1)),
        top: vs(&eye(l + 1), &i_right(l)),
        leaf1: hs(&zeros(l + 1, l), &eye(l + 1)),
        leaf2: hs(&eye(l), &zeros(l, l + 1)),
    }
}

fn dn5(l: usize) -> Display {
    Display {
        omega: vs(&eye(l + 1), &eye(l + 1)),
        top: vs(&i_right(l + 1), &i_left(l + 1)),
        leaf1: hs(&eye(l + 1), &zeros(l + 1, l + 1)),
        leaf2: hs(&zeros(l + 1, l + 1), &eye(l + 1)),
    }
}

/// An exceptional module is determined by its dimension vector, so matching dims plus
/// exceptionality of both sides means the display and the construction agree up to isomorphism.
fn check_display(idx: usize, display: fn(usize) -> Display) {
    for n in 4..=7 {
        let d = Ditalgebra::zero_diff(dn_tilde(n));
        for l in 0..=4 {
            let shown = transcribe(n, &display(l));
            assert!(repcat::is_exceptional(&d, &shown).unwrap(), "display of family {idx}, n = {n}, l = {l}");
            let built = euclid::series_dn(n, idx, l, None, None).unwrap();
            let e = euclid::extend(&catalog::dn_standard(n)).unwrap();
            let built = built.to_representation(&e);
            assert!(repcat::is_exceptional(&d, &built).unwrap());
            assert_eq!(shown.dim_vector(), built.dim_vector(), "family {idx}, n = {n}, l = {l}");
            assert!(repcat::coefficient_quiver(&d.quiver, &shown).is_tree());
        }
    }
}

#[test]
fn dn_family_1_matches_display() {
    check_display(1, dn1);
}

#[test]
fn dn_family_2_matches_display() {
    check_display(2, dn2);
}

#[test]
fn dn_family_3_matches_display() {
    check_display(3, dn3);
}

#[test]
fn dn_family_5_matches_display() {
    check_display(5, dn5);
}

#[test]
fn dn_families_with_indices_are_exceptional_roots() {
    let n = 7;
    let e = euclid::extend(&catalog::dn_standard(n)).unwrap();
    let d = Ditalgebra::zero_diff(e.quiver.clone());
    for (idx, l) in [(4, 3), (6, 2), (7, 1), (8, 4), (9, 2), (10, 4), (11, 3), (12, 1)] {
        for i in 2..=n - 2 {
            let js: Vec<Option<usize>> =
                if matches!(idx, 10 | 12) { (i + 1..=n - 2).map(Some).collect() } else { vec![None] };
            for j in js {
                let m = euclid::series_dn(n, idx, l, Some(i), j).unwrap();
                assert!(repcat::is_exceptional(&d, &m.to_representation(&e)).unwrap(), "Dn{idx} l={l} i={i} j={j:?}");
                let want = if idx >= 9 { 2 } else { 1 };
                assert_eq!(euclid::rank(&e, &m).unwrap(), want);
            }
        }
    }
}

#[test]
fn dn_family_parity_is_enforced() {
    assert!(euclid::series_dn(5, 9, 3, Some(2), None).is_err());
    assert!(euclid::series_dn(5, 11, 2, Some(2), None).is_err());
    assert!(euclid::series_dn(5, 13, 2, None, None).is_err());
}

#[test]
fn kronecker_p2_display() {
    // P_2^2: k^3 ⇇ k^2 with I^↓ and I^↑.
    let m = euclid::kron_p2(2);
    assert_eq!(m.mats[0], Mat::from_ints(&[vec![1, 0], vec![0, 1], vec![0, 0]]));
    assert_eq!(m.mats[1], Mat::from_ints(&[vec![0, 0], vec![1, 0], vec![0, 1]]));
}

#[test]
fn p3_dimensions_follow_the_a_sequence() {
    let spec = SeriesSpec {
        family: "P3".into(),
        l: 5,
        i: None,
        j: None,
        k: None,
        side: None,
        diagram: None,
        markers: None,
    };
    let out = euclid::build_series(&spec).unwrap();
    assert_eq!(out.to_json()["dims"], serde_json::json!([144, 55]));
    assert!(out.verify().unwrap());
}

#[test]
fn an_families_have_thin_tree_coefficients() {
    let q = catalog::oriented_a(5, &[true, false, false, true]);
    let e = euclid::extend(&q).unwrap();
    let d = Ditalgebra::zero_diff(e.quiver.clone());
    for l in 0..=4 {
        let m = euclid::series_an(&e, &AnFamily::M111, l).unwrap().to_representation(&e);
        assert!(repcat::is_exceptional(&d, &m).unwrap());
        assert!(repcat::coefficient_quiver(&e.quiver, &m).is_tree());
    }
}

#[test]
fn series_spec_from_json() {
    let spec: SeriesSpec =
        serde_json::from_str(r#"{"family":"M1_221","l":4,"i":2,"j":2,"side":"Y","diagram":"D5"}"#).unwrap();
    let out = euclid::build_series(&spec).unwrap();
    assert!(out.verify().unwrap());
    assert!(serde_json::from_str::<SeriesSpec>(r#"{"family":"P2","l":1,"bogus":0}"#).is_err());
}
