mod common;

use btt::bv::{verify_bv, verify_bv_infinity};
use btt::format::{parse, print, StructureSpec};
use btt::gallery::{self, obstruction_search, replay, Claim};

#[test]
fn every_manifest_replays_in_full() {
    let entries = gallery::all().unwrap();
    assert_eq!(entries.len(), gallery::NAMES.len());
    for e in &entries {
        assert!(!e.manifest.is_empty(), "{}", e.name);
        let checks = replay(e).unwrap();
        assert_eq!(checks.len(), e.manifest.len(), "{}", e.name);
        for c in checks {
            assert!(c.holds, "{}: {} ({})", e.name, c.claim, c.observed);
        }
    }
}

#[test]
fn entries_are_found_by_name() {
    for name in gallery::NAMES {
        assert_eq!(gallery::by_name(name).unwrap().name, name);
    }
    assert!(gallery::by_name("no_such_entry").is_err());
}

#[test]
fn heisenberg_claims() {
    let e = gallery::heisenberg().unwrap();
    for claim in [
        Claim::VerifyBv(true),
        Claim::Betti(vec![1, 2, 2, 1]),
        Claim::Degenerates(false),
        Claim::DdLemma(false),
        Claim::InducedBracketZero(true),
        Claim::TransferredL2Zero(true),
    ] {
        assert!(e.manifest.contains(&claim), "{claim}");
    }
}

/// Reductions of the rational entries are valid inputs over `F_5` and `F_7`.
#[test]
fn reductions_mod_five_and_seven_are_valid() {
    for e in gallery::all().unwrap() {
        if e.document.field().characteristic() != 0 {
            continue;
        }
        for p in [5, 7] {
            let reduced = e.document.reduce_mod(p).unwrap_or_else(|x| panic!("{} mod {p}: {x}", e.name));
            assert_eq!(reduced.field().characteristic(), p);
            assert_eq!(parse(&print(&reduced)).unwrap(), reduced, "{} mod {p}", e.name);
            if reduced.is_dg_lie_only() {
                let l = reduced.dg_lie().unwrap();
                assert!(l.construction_witness().is_none(), "{} mod {p}", e.name);
                continue;
            }
            let Some(spec) = &reduced.structure else { continue };
            match spec {
                StructureSpec::Hierarchy { .. } => {
                    // The divided powers of the hierarchy need p above its length.
                    if let Ok(b) = reduced.bv_structure() {
                        assert!(verify_bv_infinity(&b).passed(), "{} mod {p}", e.name);
                    }
                }
                _ => {
                    let b = reduced.bv_structure().unwrap();
                    let ok = if b.is_classical() {
                        verify_bv(&b).passed()
                    } else {
                        verify_bv_infinity(&b).passed()
                    };
                    assert!(ok, "{} mod {p}", e.name);
                }
            }
        }
    }
}

#[test]
fn search_reproduces_the_obstructed_entry() {
    let entry = gallery::obstructed_dglie().unwrap();
    let Some(StructureSpec::DgLieCochains { iota: Some(iota), .. }) = &entry.document.structure else {
        panic!("obstructed entry is not a cochain complex");
    };
    let hit = obstruction_search(5).unwrap().expect("the search finds an obstructed class");
    assert_eq!(&hit.iota, iota);
    assert_eq!(hit.order, 2);
    assert!(entry.manifest.contains(&Claim::ObstructedAt { class: hit.class, order: 2 }));
}

#[test]
fn demonstration_entries_are_marked() {
    for e in gallery::all().unwrap() {
        assert_eq!(e.demonstration_only, e.name == "hermitian_demo", "{}", e.name);
    }
}
