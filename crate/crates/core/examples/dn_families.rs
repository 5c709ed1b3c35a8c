//! The twelve families over D~5: dimension vectors, ranks and a check that each is exceptional.

use quivrep::euclid;
use quivrep::pathdit::Ditalgebra;
use quivrep::quiver::catalog;
use quivrep::repcat;

fn main() -> quivrep::Result<()> {
    let n = 5;
    let e = euclid::extend(&catalog::dn_standard(n))?;
    let d = Ditalgebra::zero_diff(e.quiver.clone());
    println!("vertices {:?}", e.quiver.vertices);
    for idx in 1..=12 {
        let l = if matches!(idx, 11 | 12) { 3 } else { 2 };
        let i = matches!(idx, 4 | 6..=12).then_some(2);
        let j = matches!(idx, 10 | 12).then_some(3);
        let m = euclid::series_dn(n, idx, l, i, j)?;
        let rep = m.to_representation(&e);
        println!(
            "Dn{idx:<2} l={l} dims {:?} rank {} exceptional={}",
            m.dim_vector(),
            euclid::rank(&e, &m)?,
            repcat::is_exceptional(&d, &rep)?
        );
    }
    Ok(())
}
