//! Homotopy transfer of the bracket to an `L∞` structure on homology.

use btt::dglie::DgLie;
use btt::gallery;
use btt::transfer::{build_contraction, transferred_brackets, verify_linfinity};

fn main() -> btt::Result<()> {
    let b = gallery::heisenberg()?.document.bv_structure()?;
    let l = DgLie::from_bv(&b)?;
    let c = build_contraction(&l)?;
    println!("contraction identities hold: {}", c.verify(&l)?.passed());
    println!("betti: {:?}", c.betti);

    let t = transferred_brackets(&l, &c, 3)?;
    for k in 2..=3 {
        let nonzero = t.brackets.get(&k).map_or(0, |m| m.len());
        println!("l{k}: {nonzero} nonzero values on basis tuples");
    }
    if let Some((xs, v)) = t.brackets[&3].iter().next() {
        let v: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        println!("  l3{xs:?} = ({})", v.join(", "));
    }
    println!("L-infinity relations up to 4 inputs: {}", verify_linfinity(&l, &c)?.passed());
    Ok(())
}
