//! Reduction mod p and the MC probe up to order p-1, where the divided
//! powers of characteristic zero are unavailable.

use btt::deformation::char_p_probe;
use btt::gallery;

fn main() -> btt::Result<()> {
    for name in ["abelian_torus", "obstructed_dglie"] {
        let doc = gallery::by_name(name)?.document;
        for p in [5, 7] {
            let l = doc.reduce_mod(p)?.dg_lie()?;
            let report = char_p_probe(&l)?;
            match report.first_obstruction() {
                None => println!("{name} mod {p}: every class extends to order {}", p - 1),
                Some((class, o)) => println!("{name} mod {p}: class {class} obstructed at order {}", o.order),
            }
        }
    }
    Ok(())
}
