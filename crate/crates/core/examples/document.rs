//! The text format: parse a document, build its structure, print it back.

use btt::bv::verify_bv;
use btt::format::{parse, print};

const SQUARE: &str = "\
field Q
generator a degree 6 nilpotent 2
generator b degree 7
generator c degree 5
generator e degree 6 nilpotent 2
cap 7
d a = b
d c = e
operator Delta degree -1 {
  a -> c ;
  b -> -e ;
}
structure bv delta = Delta
";

fn main() -> btt::Result<()> {
    let doc = parse(SQUARE)?;
    let b = doc.bv_structure()?;
    println!("verify_bv: {}", verify_bv(&b).passed());
    assert_eq!(parse(&print(&doc))?, doc);

    match parse("field Q\ngenerator a degree 1\ncap 1\nd a = b\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    print!("{}", print(&doc.reduce_mod(7)?));
    Ok(())
}
