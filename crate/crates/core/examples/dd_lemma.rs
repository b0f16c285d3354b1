//! dΔ-lemma, the zig-zag `(A, d) <- (Ker Δ, d) -> (H_Δ, 0)` and the induced
//! bracket on homology.

use btt::gallery;
use btt::quasi_abelian::{dd_lemma, induced_bracket_on_homology, zigzag_certificate};

fn main() -> btt::Result<()> {
    for name in ["square_bicomplex", "abelian_torus", "heisenberg"] {
        let b = gallery::by_name(name)?.document.bv_structure()?;
        let dd = dd_lemma(&b)?;
        println!("{name}: dd-lemma {}", dd.holds());
        match dd.failing_degree() {
            Some(n) => println!("  fails in degree {n}"),
            None => {
                let z = zigzag_certificate(&b)?;
                println!("  zig-zag valid: {}", z.valid());
                for deg in &z.degrees {
                    println!("    degree {}: betti {} = {} = {}", deg.degree, deg.betti_a, deg.betti_kernel, deg.betti_h_delta);
                }
            }
        }
        let induced = induced_bracket_on_homology(&b)?;
        println!("  induced bracket zero: {}", induced.is_zero());
    }
    Ok(())
}
