mod common;

use btt::bv::BVStructure;
use btt::deformation::{char_p_probe, compare_modes, mc_residual, satisfies_mc, solve_mc, tt_solve_mc, McOutcome, SolveMethod};
use btt::dglie::DgLie;
use btt::gallery::{self, h1_classes};
use btt::linalg::{Subspace, Vector};
use common::*;

const ORDER: usize = 6;

/// `dξ + ½[ξ, ξ]` in `A²`, using the derived bracket on algebra elements.
fn residual_in_algebra(b: &BVStructure, xi: &[Vector]) -> Vec<btt::algebra::Element> {
    let a = b.algebra();
    let half = q().from_i64(2).inverse().unwrap();
    let els: Vec<_> = xi.iter().map(|v| a.from_coordinates(2, v).unwrap()).collect();
    (1..=xi.len())
        .map(|k| {
            let mut acc = b.d().apply(&els[k - 1]).unwrap();
            for i in 1..k {
                let br = b.derived_bracket(&els[i - 1], &els[k - i - 1]).unwrap();
                acc = &acc + &br.scale(&half);
            }
            acc
        })
        .collect()
}

fn bv_inputs() -> Vec<(String, BVStructure)> {
    let mut out = Vec::new();
    for name in ["heisenberg", "abelian_torus", "square_bicomplex"] {
        out.push((name.to_string(), gallery::by_name(name).unwrap().document.bv_structure().unwrap()));
    }
    let mut r = rng(31);
    while out.len() < 8 {
        if let Some(x) = random_koszul(&mut r) {
            out.push(x);
        }
    }
    out
}

#[test]
fn solved_series_satisfy_mc_by_resubstitution() {
    let mut series = 0;
    for (name, b) in bv_inputs() {
        let l = DgLie::from_bv(&b).unwrap();
        for alpha in h1_classes(&l).unwrap() {
            for method in [SolveMethod::Elimination, SolveMethod::Homotopy] {
                match solve_mc(&l, &alpha, ORDER, method).unwrap() {
                    McOutcome::Solved(s) => {
                        assert_eq!(s.coefficients.len(), ORDER);
                        assert!(satisfies_mc(&l, &s.coefficients).unwrap(), "{name}");
                        for (k, r) in residual_in_algebra(&b, &s.coefficients).iter().enumerate() {
                            assert!(r.is_zero(), "{name}: order {} residual {r:?}", k + 1);
                        }
                        series += 1;
                    }
                    McOutcome::Obstructed(o) => {
                        assert!(o.order >= 2);
                        assert!(o.class.iter().any(|c| !c.is_zero()), "{name}");
                        assert!(satisfies_mc(&l, &o.partial).unwrap(), "{name}: partial series");
                    }
                }
            }
        }
    }
    assert!(series > 0);
}

#[test]
fn tt_coefficients_are_delta_closed_and_delta_exact() {
    let b = gallery::abelian_torus(4).unwrap().document.bv_structure().unwrap();
    let a = b.algebra().clone();
    let delta = b.delta1();
    let image = Subspace::image(&delta.block(3));
    let l = DgLie::from_bv(&b).unwrap();
    let classes = h1_classes(&l).unwrap();
    assert!(!classes.is_empty());
    for alpha in classes {
        let sol = tt_solve_mc(&b, &alpha, ORDER).unwrap();
        assert!(!sol.fallback);
        let s = sol.outcome.series().expect("the torus is unobstructed");
        for (k, xi) in s.coefficients.iter().enumerate() {
            let x = a.from_coordinates(2, xi).unwrap();
            assert!(delta.apply(&x).unwrap().is_zero(), "order {}", k + 1);
            if k >= 1 {
                assert!(image.contains(xi), "order {} not delta-exact", k + 1);
            }
        }
        assert!(mc_residual(&l, &s.coefficients).unwrap().iter().all(|r| r.iter().all(|c| c.is_zero())));
    }
}

#[test]
fn solvers_are_deterministic() {
    for (name, b) in bv_inputs() {
        let l = DgLie::from_bv(&b).unwrap();
        for alpha in h1_classes(&l).unwrap() {
            for method in [SolveMethod::Elimination, SolveMethod::Homotopy] {
                let x = solve_mc(&l, &alpha, ORDER, method).unwrap();
                let y = solve_mc(&l, &alpha, ORDER, method).unwrap();
                assert_eq!(x, y, "{name}");
            }
        }
        let m = compare_modes(&l, 4).unwrap();
        assert!(m.agree(), "{name}");
    }
}

#[test]
fn obstructed_entry_and_its_reductions() {
    let l = gallery::obstructed_dglie().unwrap().document.dg_lie().unwrap();
    assert_eq!(l.homology(2).unwrap().dim, 3);
    let classes = h1_classes(&l).unwrap();
    let obstructed: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, a)| !solve_mc(&l, a, 4, SolveMethod::Elimination).unwrap().is_solved())
        .map(|(i, _)| i)
        .collect();
    assert_eq!(obstructed, vec![1]);
    let o = solve_mc(&l, &classes[1], 4, SolveMethod::Homotopy).unwrap();
    assert_eq!(o.obstruction().map(|o| o.order), Some(2));
    for p in [5, 7] {
        let report = char_p_probe(&l.reduce_mod(p).unwrap()).unwrap();
        assert!(!report.all_solved(), "mod {p}");
        assert_eq!(report.first_obstruction().map(|(_, o)| o.order), Some(2));
    }
}

#[test]
fn h2_zero_never_obstructs() {
    let mut r = rng(32);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 10 && attempts < 1000 {
        attempts += 1;
        let Some((name, l)) = random_cochains(&mut r) else { continue };
        if l.homology(2).unwrap().dim != 0 {
            continue;
        }
        for alpha in h1_classes(&l).unwrap() {
            assert!(solve_mc(&l, &alpha, ORDER, SolveMethod::Homotopy).unwrap().is_solved(), "{name}");
        }
        checked += 1;
    }
    assert_eq!(checked, 10);
}
