//! A BV-infinity hierarchy `Δ_k = (1/k!) ad_Λ^k(d)` from a second-order
//! operator `Λ`, and what a one-entry perturbation of `Δ_1` breaks.

use std::collections::BTreeMap;

use btt::bv::{verify_bv_infinity, verify_conjugation_identity, BVStructure};
use btt::{FieldSpec, GradedOperator, LieStructure, MultiVector};

fn main() -> btt::Result<()> {
    let q = FieldSpec::Rationals;
    let heis = LieStructure::from_brackets(q, 3, [((0, 1), vec![(2, q.one())])])?;
    let (a, d) = heis.ce_model(&["e1", "e2", "e3"])?;
    let lambda = GradedOperator::interior_product(&a, &MultiVector::from_terms(q, 2, [(vec![0, 1], q.one())])?)?;

    let b = BVStructure::build_hierarchy(d.clone(), lambda.clone())?;
    println!("{} nonzero deltas", b.deltas().len());
    report("hierarchy", &b)?;

    // Perturb one matrix entry of Δ_1.
    let mut deltas = b.deltas().to_vec();
    let mut blocks: BTreeMap<i64, _> = deltas[0].blocks().clone();
    let block = blocks.entry(3).or_insert_with(|| deltas[0].block(3));
    let bumped = &block.get(0, 0) + &q.one();
    block.set(0, 0, bumped);
    deltas[0] = GradedOperator::from_blocks(&a, -1, blocks)?;
    report("mutated", &BVStructure::new(d, deltas, Some(lambda))?)
}

fn report(label: &str, b: &BVStructure) -> btt::Result<()> {
    let rel = verify_bv_infinity(b);
    let conj = verify_conjugation_identity(b)?;
    println!("{label}: relations {}, conjugation identity {}", rel.passed(), conj.passed());
    for c in rel.failures().chain(conj.failures()) {
        println!("  {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
    }
    Ok(())
}
