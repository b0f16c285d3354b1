//! Koszul's BV operator `Δ = [i_π, d]` on the Chevalley-Eilenberg model of
//! the Heisenberg algebra, checked axiom by axiom.
//!
//! ```text
//! cargo run --example verify_koszul
//! ```

use btt::bv::{verify_bv, BracketTable, BVStructure};
use btt::{FieldSpec, LieStructure, MultiVector};

fn main() -> btt::Result<()> {
    let q = FieldSpec::Rationals;
    // [X1, X2] = X3
    let heis = LieStructure::from_brackets(q, 3, [((0, 1), vec![(2, q.one())])])?;
    let (a, d) = heis.ce_model(&["e1", "e2", "e3"])?;
    let pi = MultiVector::from_terms(q, 2, [(vec![0, 1], q.one())])?;
    println!("[pi, pi] = 0: {}", heis.schouten(&pi, &pi)?.is_zero());

    let b = BVStructure::koszul(d, &pi)?;
    for check in &verify_bv(&b).checks {
        println!("{:<40} {}", check.name, if check.holds { "ok" } else { "FAILS" });
    }

    let table = BracketTable::new(&b)?;
    let (e1, e3) = (a.generator(0), a.generator(2));
    println!("[e1, e3] = {:?}", table.bracket(&e1, &e3));
    Ok(())
}
