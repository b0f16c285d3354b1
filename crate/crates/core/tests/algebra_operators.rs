mod common;

use std::collections::BTreeMap;

use btt::algebra::{Algebra, Element};
use btt::gallery;
use btt::linalg::SparseMatrix;
use btt::multivector::MultiVector;
use btt::operator::{has_order_at_most, koszul_order, GradedOperator, OrderVerdict};
use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn gallery_algebras() -> Vec<(&'static str, Algebra)> {
    gallery::all()
        .unwrap()
        .into_iter()
        .map(|e| (e.name, e.document.algebra.clone()))
        .collect()
}

fn basis(a: &Algebra) -> Vec<(i64, Element)> {
    let mut out = Vec::new();
    for n in a.degrees() {
        for m in a.basis(n) {
            out.push((n, a.monomial(m)));
        }
    }
    out
}

fn signed(e: &Element, n: i64) -> Element {
    if n.rem_euclid(2) == 1 {
        e.scale(&int(-1))
    } else {
        e.clone()
    }
}

#[test]
fn products_are_graded_commutative_and_associative() {
    for (name, a) in gallery_algebras() {
        assert!(a.num_generators() <= 8);
        let b = basis(&a);
        for (n, x) in &b {
            for (m, y) in &b {
                let xy = x.try_mul(y).unwrap();
                assert_eq!(xy, signed(&y.try_mul(x).unwrap(), n * m), "{name}");
                if !xy.is_zero() {
                    assert_eq!(xy.degree(), Some(n + m), "{name}");
                }
                for (_, z) in &b {
                    let l = xy.try_mul(z).unwrap();
                    let r = x.try_mul(&y.try_mul(z).unwrap()).unwrap();
                    assert_eq!(l, r, "{name}");
                }
            }
            assert_eq!(&a.unit().try_mul(x).unwrap(), x);
        }
    }
}

fn random_operator(r: &mut ChaCha8Rng, a: &Algebra, degree: i64) -> GradedOperator {
    let mut blocks = BTreeMap::new();
    for n in a.degrees() {
        let (rows, cols) = (a.dim(n + degree), a.dim(n));
        if rows > 0 && cols > 0 {
            blocks.insert(n, random_matrix(r, rows, cols));
        }
    }
    GradedOperator::from_blocks(a, degree, blocks).unwrap()
}

/// Identity plus a random strictly lower triangular part in each degree.
fn random_automorphism(r: &mut ChaCha8Rng, a: &Algebra) -> GradedOperator {
    let mut blocks = BTreeMap::new();
    for n in a.degrees() {
        let k = a.dim(n);
        let mut m = SparseMatrix::identity(q(), k);
        for i in 0..k {
            for j in 0..i {
                m.set(i, j, int(r.gen_range(-2..=2)));
            }
        }
        blocks.insert(n, m);
    }
    GradedOperator::from_blocks(a, 0, blocks).unwrap()
}

#[test]
fn commutator_satisfies_graded_jacobi() {
    let mut r = rng(21);
    for (name, a) in gallery_algebras() {
        for _ in 0..5 {
            let (i, j, k) = (r.gen_range(-2..=2), r.gen_range(-2..=2), r.gen_range(-2..=2));
            let (x, y, z) = (random_operator(&mut r, &a, i), random_operator(&mut r, &a, j), random_operator(&mut r, &a, k));
            let lhs = x.commutator(&y.commutator(&z).unwrap()).unwrap();
            let first = x.commutator(&y).unwrap().commutator(&z).unwrap();
            let second = y.commutator(&x.commutator(&z).unwrap()).unwrap();
            let s = if (i * j).rem_euclid(2) == 1 { int(-1) } else { int(1) };
            let rhs = first.add(&second.scale(&s)).unwrap();
            assert!(lhs.difference_witness(&rhs).is_none(), "{name}: degrees {i} {j} {k}");
        }
    }
}

#[test]
fn adjoint_is_an_involution_and_conjugation_preserves_commutators() {
    let mut r = rng(22);
    for (name, a) in gallery_algebras() {
        for _ in 0..4 {
            let (i, j) = (r.gen_range(-2..=2), r.gen_range(-2..=2));
            let s = random_operator(&mut r, &a, i);
            let t = random_operator(&mut r, &a, j);
            assert_eq!(s.adjoint().adjoint(), s, "{name}");
            assert_eq!(s.adjoint().degree(), -i);
            let eta = random_automorphism(&mut r, &a);
            let lhs = s.commutator(&t).unwrap().conjugate(&eta).unwrap();
            let rhs = s.conjugate(&eta).unwrap().commutator(&t.conjugate(&eta).unwrap()).unwrap();
            assert!(lhs.difference_witness(&rhs).is_none(), "{name}");
            assert!(s.conjugate(&GradedOperator::identity(&a)).unwrap().difference_witness(&s).is_none());
        }
    }
}

/// For `Λ` of order at most 2 and a derivation `d`, `[Λ, d]` has order at
/// most 2.
#[test]
fn commutator_with_derivation_keeps_order_two() {
    let mut r = rng(23);
    for entry in gallery::all().unwrap() {
        let a = entry.document.algebra.clone();
        let d = &entry.document.d;
        assert!(d.is_derivation(), "{}", entry.name);
        let exterior = a.generators().iter().all(|g| g.is_odd() && g.degree == 1);
        if !exterior || a.num_generators() < 2 {
            continue;
        }
        let n = a.num_generators();
        for _ in 0..4 {
            let pi = random_multivector(&mut r, n, 2);
            let lambda = GradedOperator::interior_product(&a, &pi).unwrap();
            assert!(has_order_at_most(&lambda, 2));
            let c = lambda.commutator(d).unwrap();
            assert!(has_order_at_most(&c, 2), "{}", entry.name);
        }
    }
}

#[test]
fn interior_products_have_their_arity_as_order() {
    let a = gallery::heisenberg().unwrap().document.algebra.clone();
    let pi = MultiVector::from_terms(q(), 2, [(vec![0, 1], int(1))]).unwrap();
    let i_pi = GradedOperator::interior_product(&a, &pi).unwrap();
    assert_eq!(koszul_order(&i_pi, 4), OrderVerdict::Order(2));
    let x = MultiVector::basis_vector(q(), 2);
    assert_eq!(koszul_order(&GradedOperator::interior_product(&a, &x).unwrap(), 4), OrderVerdict::Order(1));
    let unit = a.unit();
    assert_eq!(koszul_order(&GradedOperator::multiplication(&unit).unwrap(), 4), OrderVerdict::Order(0));
}
