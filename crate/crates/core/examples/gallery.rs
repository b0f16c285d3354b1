//! Every gallery entry with its manifest replayed.

use btt::gallery;

fn main() -> btt::Result<()> {
    for entry in gallery::all()? {
        println!("{}: {}", entry.name, entry.description);
        for check in gallery::replay(&entry)? {
            let mark = if check.holds { "ok" } else { "FAILS" };
            println!("  [{mark}] {} ({})", check.claim, check.observed);
        }
    }
    Ok(())
}
