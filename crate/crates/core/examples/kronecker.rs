//! Preprojective and preinjective series over the Kronecker quivers.

use quivrep::euclid;
use quivrep::pathdit::Ditalgebra;
use quivrep::quiver::catalog;
use quivrep::repcat;

fn main() -> quivrep::Result<()> {
    let k2 = Ditalgebra::zero_diff(catalog::kronecker(2));
    for t in 0..6 {
        let (p, q) = (euclid::kron_p2(t), euclid::kron_q2(t));
        println!(
            "P2^{t} {:?} exceptional={}   Q2^{t} {:?} exceptional={}",
            p.dim_vector(),
            repcat::is_exceptional(&k2, &p)?,
            q.dim_vector(),
            repcat::is_exceptional(&k2, &q)?
        );
    }
    let k3 = Ditalgebra::zero_diff(catalog::kronecker(3));
    for t in 0..7 {
        let m = euclid::kron_p3(t)?;
        let (end, ext) = repcat::sigma_dims(&k3, &m, &m)?;
        println!("P3^{t} {:?} end={end} ext={ext}", m.dim_vector());
    }
    Ok(())
}
