//! Knits the Auslander-Reiten quiver of E6 and prints the wings of the maximal root.

use quivrep::arknit;
use quivrep::quiver::catalog;

fn main() -> quivrep::Result<()> {
    let g = arknit::knit(&catalog::e_subspace(6))?;
    println!("{} indecomposables", g.len());
    let w = arknit::max_root_vertex(&g)?;
    println!("maximal root {:?} at {}", g.vertices[w].dim, g.label(w));
    for (s, wing) in arknit::wing_data(&g, w)?.iter().enumerate() {
        println!("wing {} of order {}", s + 1, wing.order);
        for i in 1..=wing.order {
            let row: Vec<String> = (i..=wing.order).map(|j| format!("{:?}", g.vertices[wing.at(i, j)].dim)).collect();
            println!("  {}", row.join(" "));
        }
    }
    if std::env::args().any(|a| a == "--dot") {
        print!("{}", g.to_dot());
    }
    Ok(())
}
