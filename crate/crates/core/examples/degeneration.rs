//! The negative cyclic complex `(A[[u]], d + uΔ)`: spectral pages, `E_∞`,
//! and the two equivalent degeneration criteria.

use btt::degeneration::{
    degenerates_at_e1, e_infinity, initial_truncation, spectral_pages, u_freeness_stable, NegativeCyclicComplex,
};
use btt::gallery;

fn main() -> btt::Result<()> {
    for name in ["square_bicomplex", "heisenberg", "delta_only"] {
        let b = gallery::by_name(name)?.document.bv_structure()?;
        let c = NegativeCyclicComplex::build(&b, initial_truncation(&b))?;
        let pages = spectral_pages(&c);
        let totals: Vec<usize> = pages.iter().map(|p| p.total()).collect();
        println!("{name}: page totals {totals:?}, E_inf total {}", e_infinity(&c).total());

        let cert = degenerates_at_e1(&b)?;
        let (free, report) = u_freeness_stable(&b)?;
        println!("  E1 degeneration: {}", cert.verdict.as_str());
        if let Some(w) = &cert.witness {
            println!("  witness: {w}");
        }
        println!("  u-free: {} (rank {} over {} generators)", free.as_str(), report.length, report.generators);
    }
    Ok(())
}
