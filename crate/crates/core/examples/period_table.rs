//! Period and multiplicity of the posprojective component for some extended Dynkin quivers.

use quivrep::euclid;
use quivrep::rootlat;

fn main() -> quivrep::Result<()> {
    for name in ["A1", "A4", "A4:rll", "A5:rrll", "D4", "D5", "D6", "D7", "E6", "E7", "E8"] {
        let e = euclid::extend(&euclid::parse_diagram(name)?)?;
        let (p, m) = rootlat::period_multiplicity(&e)?;
        println!("{name:<8} radical {:?} period {p} multiplicity {m}", e.radical());
    }
    Ok(())
}
