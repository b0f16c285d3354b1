mod common;

use btt::dglie::DgLie;
use btt::gallery;
use btt::quasi_abelian::induced_bracket_on_homology;
use btt::transfer::{build_contraction, transferred_bracket, transferred_brackets, verify_linfinity, ClassIndex};
use common::*;

fn heisenberg() -> (btt::BVStructure, DgLie) {
    let b = gallery::heisenberg().unwrap().document.bv_structure().unwrap();
    let l = DgLie::from_bv(&b).unwrap();
    (b, l)
}

/// Inputs: Heisenberg, the obstructed cochains, a few random Koszul and
/// cochain complexes.
fn inputs() -> Vec<(String, DgLie)> {
    let mut out = vec![("heisenberg".to_string(), heisenberg().1)];
    out.push((
        "obstructed".into(),
        gallery::obstructed_dglie().unwrap().document.dg_lie().unwrap(),
    ));
    let mut r = rng(41);
    let mut koszul = 0;
    while koszul < 4 {
        if let Some((name, b)) = random_koszul(&mut r) {
            if let Ok(l) = DgLie::from_bv(&b) {
                out.push((name, l));
                koszul += 1;
            }
        }
    }
    let mut cochains = 0;
    while cochains < 4 {
        if let Some(x) = random_cochains(&mut r) {
            out.push(x);
            cochains += 1;
        }
    }
    out
}

fn classes(l: &DgLie) -> Vec<ClassIndex> {
    let mut out = Vec::new();
    for n in l.degrees() {
        for i in 0..l.homology(n).unwrap().dim {
            out.push((n, i));
        }
    }
    out
}

#[test]
fn contraction_identities_hold() {
    for (name, l) in inputs() {
        let c = build_contraction(&l).unwrap();
        let r = c.verify(&l).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

/// `ℓ_2(x, y)` against the class of `[z_x, z_y]` computed from scratch.
#[test]
fn l2_is_the_bracket_on_homology() {
    for (name, l) in inputs() {
        let c = build_contraction(&l).unwrap();
        let t = transferred_brackets(&l, &c, 2).unwrap();
        let f = l.field();
        for &(n, i) in &classes(&l) {
            for &(m, j) in &classes(&l) {
                let hn = l.homology(n).unwrap();
                let hm = l.homology(m).unwrap();
                let br = l.bracket(n, &hn.representatives[i], m, &hm.representatives[j]).unwrap();
                let target = l.homology(n + m).unwrap();
                let expected = target.coordinates(&br).unwrap();
                let got = t
                    .l2_unshifted((n, i), (m, j), f)
                    .unwrap_or_else(|| vec![f.zero(); target.dim]);
                assert_eq!(got, expected, "{name}: l2 on ({n},{i}), ({m},{j})");
            }
        }
    }
}

/// For a BV algebra `ℓ_2` agrees with the bracket induced on `H(A, d)`,
/// with `L^n = A^{n+1}`.
#[test]
fn l2_matches_induced_bracket() {
    let (b, l) = heisenberg();
    let c = build_contraction(&l).unwrap();
    let t = transferred_brackets(&l, &c, 2).unwrap();
    let induced = induced_bracket_on_homology(&b).unwrap();
    assert!(induced.is_zero());
    assert!(t.is_zero(2));

    let mut r = rng(7);
    let mut checked = 0;
    while checked < 4 {
        let Some((name, b)) = random_koszul(&mut r) else { continue };
        let Ok(l) = DgLie::from_bv(&b) else { continue };
        let c = build_contraction(&l).unwrap();
        let t = transferred_brackets(&l, &c, 2).unwrap();
        let induced = induced_bracket_on_homology(&b).unwrap();
        for (((a, i), (bb, j)), v) in &induced.entries {
            let got = t
                .l2_unshifted((a - 1, *i), (bb - 1, *j), l.field())
                .unwrap_or_else(|| vec![l.field().zero(); v.len()]);
            assert_eq!(&got, v, "{name}: [h{a}_{i}, h{bb}_{j}]");
        }
        checked += 1;
    }
}

/// Graded symmetry of the shifted brackets: permuting arguments multiplies
/// by the Koszul sign in shifted degrees.
#[test]
fn shifted_brackets_are_graded_symmetric() {
    for (name, l) in inputs() {
        let c = build_contraction(&l).unwrap();
        let t = transferred_brackets(&l, &c, 3).unwrap();
        for k in [2usize, 3] {
            for (xs, v) in &t.brackets[&k] {
                for perm in permutations(k) {
                    let ys: Vec<ClassIndex> = perm.iter().map(|&i| xs[i]).collect();
                    let (_, w) = transferred_bracket(&l, &c, &ys).unwrap();
                    let mut negative = false;
                    for a in 0..k {
                        for b in a + 1..k {
                            let (x, y) = (xs[perm[a]].0 - 1, xs[perm[b]].0 - 1);
                            if perm[a] > perm[b] && (x * y).rem_euclid(2) == 1 {
                                negative = !negative;
                            }
                        }
                    }
                    let expected: Vec<_> = v.iter().map(|c| if negative { -c } else { c.clone() }).collect();
                    assert_eq!(w, expected, "{name}: {ys:?}");
                }
            }
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn linfinity_relations_hold_up_to_four_inputs() {
    for (name, l) in inputs() {
        let c = build_contraction(&l).unwrap();
        let r = verify_linfinity(&l, &c).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn heisenberg_has_zero_l2_and_nonzero_l3() {
    let (_, l) = heisenberg();
    let c = build_contraction(&l).unwrap();
    let t = transferred_brackets(&l, &c, 3).unwrap();
    assert!(t.is_zero(2));
    assert!(!t.is_zero(3));
}

#[test]
fn arity_is_bounded() {
    let (_, l) = heisenberg();
    let c = build_contraction(&l).unwrap();
    assert!(transferred_brackets(&l, &c, 5).is_err());
    assert!(transferred_bracket(&l, &c, &[(0, 0)]).is_err());
}

#[test]
fn transfer_rejects_positive_characteristic() {
    let (_, l) = heisenberg();
    let lp = l.reduce_mod(5).unwrap();
    let c = build_contraction(&lp).unwrap();
    assert!(c.verify(&lp).unwrap().passed());
    assert!(transferred_brackets(&lp, &c, 2).is_err());
}

/// With `∂ = 0` the contraction is trivial: `ℓ_2` is the bracket itself and
/// the higher brackets vanish.
#[test]
fn zero_differential_transfers_trivially() {
    use btt::algebra::{Algebra, AlgebraPresentation};
    use btt::operator::GradedOperator;
    for (name, g) in catalogue().into_iter().filter(|(_, g)| g.dim() <= 3) {
        let a = Algebra::new(AlgebraPresentation::exterior(q(), &["u", "v"])).unwrap();
        let l = DgLie::tensor(&GradedOperator::zero(&a, 1), &g).unwrap();
        let c = build_contraction(&l).unwrap();
        assert!(c.homotopy.values().all(|h| h.is_zero()), "{name}");
        let t = transferred_brackets(&l, &c, 4).unwrap();
        assert!(t.is_zero(3) && t.is_zero(4), "{name}");
        for &(n, i) in &classes(&l) {
            for &(m, j) in &classes(&l) {
                let x = c.include(n, &unit(l.homology(n).unwrap().dim, i)).unwrap();
                let y = c.include(m, &unit(l.homology(m).unwrap().dim, j)).unwrap();
                let br = l.bracket(n, &x, m, &y).unwrap();
                let expected = c.project(n + m, &br).unwrap();
                let got = t
                    .l2_unshifted((n, i), (m, j), q())
                    .unwrap_or_else(|| vec![q().zero(); expected.len()]);
                assert_eq!(got, expected, "{name}");
                assert_eq!(c.include(n + m, &expected).unwrap(), br, "{name}");
            }
        }
    }
}

fn unit(n: usize, i: usize) -> Vec<btt::field::Scalar> {
    (0..n).map(|k| if k == i { int(1) } else { int(0) }).collect()
}
