//! Exact homology of a Chevalley-Eilenberg complex with sparse elimination.

use btt::linalg::{homology, rank};
use btt::{FieldSpec, LieStructure};

fn main() -> btt::Result<()> {
    for field in [FieldSpec::Rationals, FieldSpec::prime_field(2)?] {
        let heis = LieStructure::from_brackets(field, 3, [((0, 1), vec![(2, field.one())])])?;
        let (a, d) = heis.ce_model(&["e1", "e2", "e3"])?;
        let betti: Vec<usize> = (0..=3)
            .map(|n| homology(&d.block(n - 1), &d.block(n)).map(|h| h.dim))
            .collect::<btt::Result<_>>()?;
        println!("{field}: betti {betti:?}, rank of d on degree 1 = {}, total dim {}", rank(&d.block(1)), a.total_dim());
    }
    Ok(())
}
