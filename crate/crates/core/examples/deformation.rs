//! Maurer-Cartan deformations from `H¹` classes: the generic solver in both
//! modes, the dΔ solver, and an obstructed class.

use btt::deformation::{satisfies_mc, solve_mc, tt_solve_mc, McOutcome, SolveMethod};
use btt::dglie::DgLie;
use btt::gallery::{self, h1_classes};

fn main() -> btt::Result<()> {
    let b = gallery::by_name("abelian_torus")?.document.bv_structure()?;
    let l = DgLie::from_bv(&b)?;
    let classes = h1_classes(&l)?;
    println!("torus: dim H1 = {}", classes.len());
    let alpha = &classes[0];
    for method in [SolveMethod::Elimination, SolveMethod::Homotopy] {
        let out = solve_mc(&l, alpha, 8, method)?;
        println!("  {}: solved {}", method.as_str(), out.is_solved());
    }
    let tt = tt_solve_mc(&b, alpha, 8)?;
    if let Some(s) = tt.outcome.series() {
        println!("  dd solver: MC holds mod t^9: {}", satisfies_mc(&l, &s.coefficients)?);
        for (k, xi) in s.coefficients.iter().enumerate().take(2) {
            println!("    xi_{} = {}", k + 1, l.format_vector(1, xi));
        }
    }

    let l = gallery::obstructed_dglie()?.document.dg_lie()?;
    for (i, alpha) in h1_classes(&l)?.iter().enumerate() {
        match solve_mc(&l, alpha, 4, SolveMethod::Elimination)? {
            McOutcome::Solved(_) => println!("obstructed entry, class {i}: extends to order 4"),
            McOutcome::Obstructed(o) => {
                let class: Vec<String> = o.class.iter().map(|c| c.to_string()).collect();
                println!("obstructed entry, class {i}: obstructed at order {}, [R] = ({})", o.order, class.join(", "))
            }
        }
    }
    Ok(())
}
