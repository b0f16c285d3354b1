//! Poisson bivectors on the catalogue of small Lie algebras: which
//! coordinate bivectors satisfy `[π, π] = 0`.

use btt::gallery;
use btt::MultiVector;

fn main() -> btt::Result<()> {
    for (name, g) in gallery::catalogue()? {
        let n = g.dim();
        let q = g.field();
        let mut poisson = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let pi = MultiVector::from_terms(q, 2, [(vec![i, j], q.one())])?;
                if g.schouten(&pi, &pi)?.is_zero() {
                    poisson.push(format!("X{}X{}", i + 1, j + 1));
                }
            }
        }
        println!("{name} (dim {n}): {}", poisson.join(" "));
    }
    Ok(())
}
