mod common;

use btt::bv::{verify_bv, BVStructure};
use btt::degeneration::{
    degenerates_at_e1, delta_on_homology, e_infinity, initial_truncation, spectral_pages, NegativeCyclicComplex, Verdict,
};
use btt::gallery;
use btt::linalg::{solve, Subspace};
use btt::quasi_abelian::{d_homology, dd_lemma, induced_bracket_on_homology, zigzag_certificate};
use common::*;

/// Classical BV inputs passing `verify_bv`: gallery entries and random sums.
fn classical_inputs() -> Vec<(String, BVStructure)> {
    let mut out = Vec::new();
    for e in gallery::all().unwrap() {
        if let Ok(b) = e.document.bv_structure() {
            if b.is_classical() && verify_bv(&b).passed() {
                out.push((e.name.to_string(), b));
            }
        }
    }
    let mut r = rng(51);
    let mut k = 0;
    while k < 5 {
        if let Some(x) = random_koszul(&mut r) {
            out.push(x);
            k += 1;
        }
    }
    for i in 0..5 {
        out.push((format!("square sum {i}"), random_square_sum(&mut r)));
        out.push((format!("mixed sum {i}"), random_mixed_sum(&mut r)));
    }
    out.push(("delta only".into(), random_delta_only(&mut r)));
    out
}

fn basis(b: &BVStructure) -> Vec<btt::algebra::Element> {
    let a = b.algebra();
    a.degrees().into_iter().flat_map(|n| a.basis(n).iter().map(|m| a.monomial(m)).collect::<Vec<_>>()).collect()
}

#[test]
fn derived_bracket_lowers_degree_by_one() {
    for (name, b) in classical_inputs() {
        let xs = basis(&b);
        for x in &xs {
            for y in &xs {
                let br = b.derived_bracket(x, y).unwrap();
                if !br.is_zero() {
                    assert_eq!(br.degree(), Some(x.degree().unwrap() + y.degree().unwrap() - 1), "{name}");
                }
            }
        }
    }
}

/// `d[x, y] = [dx, y] + (-1)^{|x|-1} [x, dy]` on monomial pairs.
#[test]
fn d_is_a_derivation_of_the_bracket() {
    for (name, b) in classical_inputs() {
        let d = b.d();
        let xs = basis(&b);
        for x in &xs {
            for y in &xs {
                let lhs = d.apply(&b.derived_bracket(x, y).unwrap()).unwrap();
                let first = b.derived_bracket(&d.apply(x).unwrap(), y).unwrap();
                let second = b.derived_bracket(x, &d.apply(y).unwrap()).unwrap();
                let s = if (x.degree().unwrap() - 1).rem_euclid(2) == 1 { int(-1) } else { int(1) };
                assert_eq!(lhs, &first + &second.scale(&s), "{name}");
            }
        }
    }
}

/// Brackets of `Δ`-closed elements are `Δ`-exact.
#[test]
fn kernel_brackets_land_in_the_image() {
    for (name, b) in classical_inputs() {
        let a = b.algebra();
        let delta = b.delta1();
        let mut kernel = Vec::new();
        for n in a.degrees() {
            for v in Subspace::kernel(&delta.block(n)).basis() {
                kernel.push(a.from_coordinates(n, &v).unwrap());
            }
        }
        for x in &kernel {
            for y in &kernel {
                let br = b.derived_bracket(x, y).unwrap();
                let Some(n) = br.degree() else { continue };
                let target = br.coordinates(n);
                assert!(solve(&delta.block(n + 1), &target).unwrap().is_some(), "{name}");
            }
        }
    }
}

#[test]
fn spectral_pages_shrink_and_reach_total_homology() {
    for (name, b) in classical_inputs() {
        let c = NegativeCyclicComplex::build(&b, initial_truncation(&b)).unwrap();
        let pages = spectral_pages(&c);
        for w in pages.windows(2) {
            for (bd, &dim) in &w[1].dims {
                assert!(dim <= w[0].dim(*bd), "{name}: page grows at {bd:?}");
            }
        }
        let einf = e_infinity(&c);
        for n in c.degrees() {
            let h = c.homology(n).unwrap().dim;
            assert_eq!(einf.total_in_degree(n), h, "{name}: degree {n}");
        }
    }
}

#[test]
fn degeneration_forces_zero_d1() {
    for (name, b) in classical_inputs() {
        let cert = degenerates_at_e1(&b).unwrap();
        if cert.verdict == Verdict::Holds {
            for m in delta_on_homology(&b).unwrap().values() {
                assert!(m.is_zero(), "{name}");
            }
            assert!(cert.d1_witness.is_none());
        }
    }
}

#[test]
fn dd_lemma_consequences() {
    let mut passing = 0;
    for (name, b) in classical_inputs() {
        let dd = dd_lemma(&b).unwrap();
        let induced = induced_bracket_on_homology(&b).unwrap();
        for (((n, _), (m, _)), v) in &induced.entries {
            if v.iter().any(|c| !c.is_zero()) {
                assert!(induced.betti.get(&(n + m - 1)).is_some_and(|&k| k == v.len()), "{name}");
            }
        }
        if !dd.holds() {
            assert!(zigzag_certificate(&b).is_err(), "{name}");
            continue;
        }
        passing += 1;
        assert_eq!(degenerates_at_e1(&b).unwrap().verdict, Verdict::Holds, "{name}");
        assert!(induced.is_zero(), "{name}");
        let z = zigzag_certificate(&b).unwrap();
        assert!(z.valid(), "{name}: {:?}", z.witness);
        check_chain_maps(&b, &z, &name);
    }
    assert!(passing >= 5);
}

/// `d` preserves `Ker Δ` and the projection to `H_Δ` kills its image.
fn check_chain_maps(b: &BVStructure, z: &btt::quasi_abelian::ZigZagCertificate, name: &str) {
    let d = b.d();
    for deg in &z.degrees {
        let Some(next) = z.degrees.iter().find(|x| x.degree == deg.degree + 1) else { continue };
        for v in &deg.kernel_basis {
            let dv = d.block(deg.degree).mul_vec(v).unwrap();
            if next.kernel_basis.is_empty() {
                assert!(dv.iter().all(|c| c.is_zero()), "{name}");
                continue;
            }
            let coords = solve(&next.inclusion, &dv).unwrap().expect("Ker Δ is a subcomplex");
            let image = next.projection.mul_vec(&coords).unwrap();
            assert!(image.iter().all(|c| c.is_zero()), "{name}: degree {}", deg.degree);
        }
    }
    let homs = d_homology(b).unwrap();
    for deg in &z.degrees {
        assert_eq!(deg.betti_a, homs[&deg.degree].dim, "{name}");
    }
}
