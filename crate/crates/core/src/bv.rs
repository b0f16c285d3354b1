//! BV and BV-infinity structures: containers, constructors for the
//! geometric families, and exact axiom verification.
//!
//! Grading: `d` has degree +1, `Λ` degree -2, and the hierarchy operators
//! `Δ_k = (1/k!) ad_Λ^k(d)` have degree `1 - 2k`. Generalized Poisson data
//! `Δ_k = [i_{π_k}, d]` with a `(k+1)`-vector `π_k` has degree `-k`.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::{Algebra, Element, Monomial};
use crate::error::{Error, Result};
use crate::field::{sign, FieldSpec};
use crate::multivector::{LieStructure, MultiVector};
use crate::operator::{deviation_witness, GradedOperator};

/// One named property with its verdict and, on failure, a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, name: impl Into<String>, witness: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            holds: witness.is_none(),
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", if c.holds { "ok  " } else { "FAIL" }, c.name)?;
            if let Some(w) = &c.witness {
                write!(f, " ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `d` together with `Δ_1, Δ_2, …` and optionally the generating `Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BVStructure {
    d: GradedOperator,
    deltas: Vec<GradedOperator>,
    lambda: Option<GradedOperator>,
}

impl BVStructure {
    /// Structural checks only: shared algebra and operator degrees.
    pub fn new(d: GradedOperator, deltas: Vec<GradedOperator>, lambda: Option<GradedOperator>) -> Result<Self> {
        let a = d.algebra().clone();
        if d.degree() != 1 {
            return Err(Error::DegreeMismatch(format!("d must have degree 1, not {}", d.degree())));
        }
        for (i, delta) in deltas.iter().enumerate() {
            let k = i as i64 + 1;
            if delta.algebra() != &a {
                return Err(Error::AlgebraMismatch);
            }
            let ok = if k == 1 {
                delta.degree() == -1
            } else {
                delta.degree() == 1 - 2 * k || delta.degree() == -k
            };
            if !ok {
                return Err(Error::DegreeMismatch(format!(
                    "delta_{k} has degree {}, expected {}",
                    delta.degree(),
                    1 - 2 * k
                )));
            }
        }
        if let Some(l) = &lambda {
            if l.algebra() != &a {
                return Err(Error::AlgebraMismatch);
            }
            if l.degree() != -2 {
                return Err(Error::DegreeMismatch(format!("lambda must have degree -2, not {}", l.degree())));
            }
        }
        let mut deltas = deltas;
        while deltas.len() > 1 && deltas.last().is_some_and(GradedOperator::is_zero) {
            deltas.pop();
        }
        Ok(BVStructure { d, deltas, lambda })
    }

    pub fn classical(d: GradedOperator, delta: GradedOperator) -> Result<Self> {
        Self::new(d, vec![delta], None)
    }

    /// Koszul's operator `Δ = [i_π, d]` for a bivector `π`.
    pub fn koszul(d: GradedOperator, pi: &MultiVector) -> Result<Self> {
        if pi.arity() != 2 {
            return Err(Error::ArityMismatch(format!("expected a bivector, got arity {}", pi.arity())));
        }
        let ip = GradedOperator::interior_product(d.algebra(), pi)?;
        let delta = ip.commutator(&d)?;
        Self::classical(d, delta)
    }

    /// `Δ_k = (1/k!) [Λ, [Λ, …, [Λ, d]]]` (k brackets).
    pub fn build_hierarchy(d: GradedOperator, lambda: GradedOperator) -> Result<Self> {
        check_differential(&d)?;
        if lambda.degree() != -2 {
            return Err(Error::DegreeMismatch("lambda must have degree -2".into()));
        }
        if let Some((tuple, _)) = deviation_witness(&lambda, 3) {
            let a = lambda.algebra();
            let names: Vec<String> = tuple.iter().map(|m| a.format_monomial(m)).collect();
            return Err(Error::NotSecondOrder(format!(
                "third Koszul deviation is nonzero on ({})",
                names.join(", ")
            )));
        }
        let field = d.field();
        let mut deltas = Vec::new();
        let mut ad = d.clone();
        for k in 1.. {
            ad = lambda.commutator(&ad)?;
            if ad.is_zero() {
                break;
            }
            let inv = field.inverse_factorial(k).map_err(|_| {
                Error::FactorialNotInvertible(format!("delta_{k} needs 1/{k}! in characteristic {}", field.characteristic()))
            })?;
            deltas.push(ad.scale(&inv));
        }
        Self::new(d, deltas, Some(lambda))
    }

    /// Jacobi pair `(π, η)` on a Chevalley–Eilenberg model: requires
    /// `[π,π] = 2 η∧π` and `[π,η] = 0`; sets `Δ_1 = [i_π, d]`, `Δ_2 = -i_η i_π`.
    pub fn jacobi_structure(d: GradedOperator, pi: &MultiVector, eta: &MultiVector) -> Result<Self> {
        if pi.arity() != 2 || eta.arity() != 1 {
            return Err(Error::ArityMismatch("jacobi data is a bivector and a vector".into()));
        }
        check_differential(&d)?;
        let lie = LieStructure::from_ce_differential(&d)?;
        let schouten_conditions = jacobi_conditions(&lie, pi, eta)?;
        if let Some(msg) = schouten_conditions {
            return Err(Error::JacobiFailure(msg));
        }
        let a = d.algebra().clone();
        let ip = GradedOperator::interior_product(&a, pi)?;
        let ie = GradedOperator::interior_product(&a, eta)?;
        let d1 = ip.commutator(&d)?;
        let d2 = ie.compose(&ip)?.neg();
        Self::new(d, vec![d1, d2], None)
    }

    /// `Δ_k = [i_{π_k}, d]` where `π_k` is a `(k+1)`-vector.
    pub fn generalized_poisson(d: GradedOperator, pis: &[MultiVector]) -> Result<Self> {
        let mut deltas = Vec::new();
        for (i, p) in pis.iter().enumerate() {
            if p.arity() != i + 2 {
                return Err(Error::ArityMismatch(format!(
                    "pi_{} must be a {}-vector, got arity {}",
                    i + 1,
                    i + 2,
                    p.arity()
                )));
            }
            let ip = GradedOperator::interior_product(d.algebra(), p)?;
            deltas.push(ip.commutator(&d)?);
        }
        Self::new(d, deltas, None)
    }

    pub fn algebra(&self) -> &Algebra {
        self.d.algebra()
    }

    pub fn field(&self) -> FieldSpec {
        self.d.field()
    }

    pub fn d(&self) -> &GradedOperator {
        &self.d
    }

    pub fn deltas(&self) -> &[GradedOperator] {
        &self.deltas
    }

    pub fn lambda(&self) -> Option<&GradedOperator> {
        self.lambda.as_ref()
    }

    /// `Δ_k` with `Δ_0 = d`; zero of the hierarchy degree past the end.
    pub fn delta(&self, k: usize) -> GradedOperator {
        if k == 0 {
            return self.d.clone();
        }
        self.deltas
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| GradedOperator::zero(self.algebra(), 1 - 2 * k as i64))
    }

    /// `Δ := Δ_1`.
    pub fn delta1(&self) -> GradedOperator {
        self.delta(1)
    }

    /// True when every `Δ_k` with `k ≥ 2` vanishes.
    pub fn is_classical(&self) -> bool {
        self.deltas.iter().skip(1).all(GradedOperator::is_zero)
    }

    /// The same data over another field (entries reduced or embedded).
    pub fn map_into(&self, target: &Algebra) -> Result<BVStructure> {
        Ok(BVStructure {
            d: self.d.map_into(target)?,
            deltas: self.deltas.iter().map(|x| x.map_into(target)).collect::<Result<_>>()?,
            lambda: self.lambda.as_ref().map(|l| l.map_into(target)).transpose()?,
        })
    }

    pub fn reduce_mod(&self, p: u64) -> Result<BVStructure> {
        let target = self.algebra().with_field(FieldSpec::prime_field(p)?)?;
        self.map_into(&target)
    }

    /// Derived bracket of degree -1 obtained by solving
    /// `(-1)^{p}[α,β] = Δ(αβ) - Δ(α)β - (-1)^{p+1} α Δ(β)` with `p = |α| - 1`
    /// the degree of `α` in the shifted Lie grading.
    pub fn derived_bracket(&self, alpha: &Element, beta: &Element) -> Result<Element> {
        let a = self.algebra();
        if alpha.algebra() != a || beta.algebra() != a {
            return Err(Error::AlgebraMismatch);
        }
        let delta = self.delta1();
        let mut out = a.zero();
        for (deg, x) in alpha.decompose() {
            let p = deg - 1;
            let dx = delta.apply(&x)?;
            let db = delta.apply(beta)?;
            let rhs = &(&delta.apply(&(&x * beta))? - &(&dx * beta)) - &(&x * &db).scale(&sign(a.field(), p + 1));
            out = &out + &rhs.scale(&sign(a.field(), p));
        }
        Ok(out)
    }
}

fn check_differential(d: &GradedOperator) -> Result<()> {
    if d.degree() != 1 {
        return Err(Error::DegreeMismatch("d must have degree 1".into()));
    }
    if !d.compose(d)?.is_zero() {
        return Err(Error::Precondition("d does not square to zero".into()));
    }
    if let Some((x, y)) = d.derivation_witness() {
        let a = d.algebra();
        return Err(Error::Precondition(format!(
            "d is not a derivation on ({}, {})",
            a.format_monomial(&x),
            a.format_monomial(&y)
        )));
    }
    Ok(())
}

/// `None` when `[π,π] = 2 η∧π` and `[π,η] = 0`; otherwise a description of
/// the offending bracket.
pub fn jacobi_conditions(lie: &LieStructure, pi: &MultiVector, eta: &MultiVector) -> Result<Option<String>> {
    let f = lie.field();
    let names: Vec<String> = (0..lie.dim()).map(|i| format!("x{}", i + 1)).collect();
    let pp = lie.schouten(pi, pi)?;
    let rhs = eta.wedge(pi).scale(&f.from_i64(2));
    if pp != rhs {
        return Ok(Some(format!(
            "[pi,pi] = {} but 2 eta pi = {}",
            pp.format_with(&names),
            rhs.format_with(&names)
        )));
    }
    let pe = lie.schouten(pi, eta)?;
    if !pe.is_zero() {
        return Ok(Some(format!("[pi,eta] = {} is nonzero", pe.format_with(&names))));
    }
    Ok(None)
}

fn describe(a: &Algebra, m: &Monomial) -> String {
    a.format_monomial(m)
}

fn nonzero_check(op: &GradedOperator) -> Option<String> {
    op.nonzero_witness().map(|m| {
        let a = op.algebra();
        format!("nonzero on {}", describe(a, &m))
    })
}

/// `Σ_{i+j=n} Δ_i Δ_j` for each `n`, split into homogeneous parts.
fn relation_parts(b: &BVStructure, n: usize) -> Result<Vec<GradedOperator>> {
    let mut parts: Vec<GradedOperator> = Vec::new();
    for i in 0..=n {
        let term = b.delta(i).compose(&b.delta(n - i))?;
        match parts.iter_mut().find(|p| p.degree() == term.degree()) {
            Some(p) => *p = p.add(&term)?,
            None => parts.push(term),
        }
    }
    Ok(parts)
}

/// Relations `Σ_{i+j=n} Δ_iΔ_j = 0` (`Δ_0 = d`) for every `n`, operator
/// orders `ord(Δ_k) ≤ k+1`, and, when `Λ` is present, agreement with the
/// hierarchy it generates.
pub fn verify_bv_infinity(b: &BVStructure) -> VerificationReport {
    let mut r = VerificationReport::default();
    let k = b.deltas.len();
    for n in 0..=2 * k {
        let witness = match relation_parts(b, n) {
            Ok(parts) => parts.iter().find_map(nonzero_check),
            Err(e) => Some(e.to_string()),
        };
        r.push(format!("relation n={n}"), witness);
    }
    r.push(
        "d is a derivation",
        b.d.derivation_witness()
            .map(|(x, y)| format!("({}, {})", describe(b.algebra(), &x), describe(b.algebra(), &y))),
    );
    for (i, delta) in b.deltas.iter().enumerate() {
        let kk = i + 1;
        let w = deviation_witness(delta, kk + 2).map(|(t, _)| {
            let names: Vec<String> = t.iter().map(|m| describe(b.algebra(), m)).collect();
            format!("deviation {} nonzero on ({})", kk + 2, names.join(", "))
        });
        r.push(format!("order of delta_{kk} <= {}", kk + 1), w);
    }
    if let Some(lambda) = &b.lambda {
        let mut witness = None;
        let mut ad = b.d.clone();
        for kk in 1..=k + 1 {
            let step = lambda.commutator(&ad).and_then(|next| {
                ad = next;
                b.field().inverse_factorial(kk as u64)
            });
            let expected = match step {
                Ok(inv) => ad.scale(&inv),
                Err(e) => {
                    if !ad.is_zero() {
                        witness = Some(e.to_string());
                        break;
                    }
                    ad.clone()
                }
            };
            if let Some(m) = expected.difference_witness(&b.delta(kk)) {
                witness = Some(format!("delta_{kk} differs on {}", describe(b.algebra(), &m)));
                break;
            }
        }
        r.push("hierarchy generated by lambda", witness);
    }
    r
}

/// Checks `e^{-zΛ} d e^{zΛ} = Σ_k (-z)^k Δ_k` coefficientwise in `z`.
/// The coefficient of `z` on the left is `[-Λ, d] = -Δ_1`, which fixes the
/// sign of `z` against the hierarchy convention `Δ_1 = [Λ, d]`.
pub fn verify_conjugation_identity(b: &BVStructure) -> Result<VerificationReport> {
    let lambda = b
        .lambda
        .as_ref()
        .ok_or_else(|| Error::Precondition("structure has no lambda".into()))?;
    let a = b.algebra();
    let field = a.field();
    let mut powers = vec![GradedOperator::identity(a)];
    loop {
        let next = lambda.compose(powers.last().expect("nonempty"))?;
        if next.is_zero() {
            break;
        }
        powers.push(next);
    }
    let top = powers.len() - 1;
    let mut inv_fact = Vec::new();
    for i in 0..=top {
        inv_fact.push(field.inverse_factorial(i as u64).map_err(|_| {
            Error::FactorialNotInvertible(format!("1/{i}! needed for the exponential of lambda"))
        })?);
    }
    let mut r = VerificationReport::default();
    let m_max = (2 * top).max(b.deltas.len());
    for m in 0..=m_max {
        let degree = 1 - 2 * m as i64;
        let mut lhs = GradedOperator::zero(a, degree);
        for i in 0..=m {
            let j = m - i;
            if i > top || j > top {
                continue;
            }
            let c = &(&inv_fact[i] * &inv_fact[j]) * &sign(field, i as i64);
            let term = powers[i].compose(&b.d)?.compose(&powers[j])?;
            lhs = lhs.add(&term.scale(&c))?;
        }
        let rhs = b.delta(m).scale(&sign(field, m as i64));
        let witness = if rhs.degree() != degree {
            Some(format!("delta_{m} does not have degree {degree}"))
        } else {
            lhs.difference_witness(&rhs)
                .map(|mono| format!("z^{m} coefficient differs on {}", describe(a, &mono)))
        };
        r.push(format!("z^{m} coefficient"), witness);
    }
    Ok(r)
}

/// Brackets of all pairs of basis monomials, keyed by monomial.
pub struct BracketTable {
    algebra: Algebra,
    table: HashMap<(Monomial, Monomial), Element>,
}

impl BracketTable {
    pub fn new(b: &BVStructure) -> Result<Self> {
        let a = b.algebra();
        let monos: Vec<Monomial> = a.degrees().iter().flat_map(|&n| a.basis(n).to_vec()).collect();
        let delta = b.delta1();
        let images: HashMap<Monomial, Element> = monos.iter().map(|m| (m.clone(), delta.apply_monomial(m))).collect();
        let field = a.field();
        let mut table = HashMap::new();
        for x in &monos {
            let xe = a.monomial(x);
            let p = a.monomial_degree(x) - 1;
            for y in &monos {
                let ye = a.monomial(y);
                let prod = &xe * &ye;
                let mut v = delta.apply(&prod)?;
                v = &v - &(&images[x] * &ye);
                v = &v - &(&xe * &images[y]).scale(&sign(field, p + 1));
                let v = v.scale(&sign(field, p));
                if !v.is_zero() {
                    table.insert((x.clone(), y.clone()), v);
                }
            }
        }
        Ok(BracketTable {
            algebra: a.clone(),
            table,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn monomials(&self, x: &Monomial, y: &Monomial) -> Element {
        self.table
            .get(&(x.clone(), y.clone()))
            .cloned()
            .unwrap_or_else(|| self.algebra.zero())
    }

    pub fn bracket(&self, u: &Element, v: &Element) -> Element {
        let mut out = self.algebra.zero();
        for (x, c) in u.terms() {
            for (y, e) in v.terms() {
                if let Some(t) = self.table.get(&(x.clone(), y.clone())) {
                    out = &out + &t.scale(&(c * e));
                }
            }
        }
        out
    }
}

/// Classical BV axioms for `(d, Δ)`: `Δ² = 0`, `[d,Δ] = 0`, `ord Δ ≤ 2`,
/// and graded antisymmetry, Jacobi, Leibniz and `d`-compatibility of the
/// derived bracket on all basis pairs and triples.
pub fn verify_bv(b: &BVStructure) -> VerificationReport {
    let mut r = VerificationReport::default();
    let a = b.algebra().clone();
    let field = a.field();
    let d = b.d();
    let delta = b.delta1();
    r.push(
        "higher deltas vanish",
        b.deltas
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, x)| !x.is_zero())
            .map(|(i, _)| format!("delta_{} is nonzero", i + 1)),
    );
    r.push("d squares to zero", d.compose(d).ok().and_then(|x| nonzero_check(&x)));
    r.push(
        "d is a derivation",
        d.derivation_witness()
            .map(|(x, y)| format!("({}, {})", describe(&a, &x), describe(&a, &y))),
    );
    r.push("delta squares to zero", delta.compose(&delta).ok().and_then(|x| nonzero_check(&x)));
    r.push("[d, delta] = 0", d.commutator(&delta).ok().and_then(|x| nonzero_check(&x)));
    r.push(
        "order of delta <= 2",
        deviation_witness(&delta, 3).map(|(t, _)| {
            let names: Vec<String> = t.iter().map(|m| describe(&a, m)).collect();
            format!("third deviation nonzero on ({})", names.join(", "))
        }),
    );
    let table = match BracketTable::new(b) {
        Ok(t) => t,
        Err(e) => {
            r.push("derived bracket", Some(e.to_string()));
            return r;
        }
    };
    let monos: Vec<(i64, Monomial)> = a
        .degrees()
        .iter()
        .flat_map(|&n| a.basis(n).iter().map(move |m| (n, m.clone())))
        .collect();
    let mono = |m: &Monomial| a.monomial(m);
    let fmt2 = |x: &Monomial, y: &Monomial| format!("({}, {})", describe(&a, x), describe(&a, y));
    let fmt3 = |x: &Monomial, y: &Monomial, z: &Monomial| {
        format!("({}, {}, {})", describe(&a, x), describe(&a, y), describe(&a, z))
    };

    let mut anti = None;
    let mut dcompat = None;
    'pairs: for (p, x) in &monos {
        for (q, y) in &monos {
            let xy = table.monomials(x, y);
            let yx = table.monomials(y, x);
            let s = sign(field, (p - 1) * (q - 1));
            if xy != -&yx.scale(&s) && anti.is_none() {
                anti = Some(fmt2(x, y));
            }
            if dcompat.is_none() {
                let lhs = d.apply(&xy).expect("same algebra");
                let dx = d.apply_monomial(x);
                let dy = d.apply_monomial(y);
                let rhs = &table.bracket(&dx, &mono(y)) + &table.bracket(&mono(x), &dy).scale(&sign(field, p - 1));
                if lhs != rhs {
                    dcompat = Some(fmt2(x, y));
                }
            }
            if anti.is_some() && dcompat.is_some() {
                break 'pairs;
            }
        }
    }
    r.push("bracket antisymmetry", anti);
    r.push("d is a derivation of the bracket", dcompat);

    let mut jacobi = None;
    let mut leibniz = None;
    if !table.is_zero() {
        'triples: for (p, x) in &monos {
            for (q, y) in &monos {
                let xy = table.monomials(x, y);
                for (_, z) in &monos {
                    if jacobi.is_none() {
                        let yz = table.monomials(y, z);
                        let xz = table.monomials(x, z);
                        let lhs = table.bracket(&mono(x), &yz);
                        let rhs = &table.bracket(&xy, &mono(z))
                            + &table.bracket(&mono(y), &xz).scale(&sign(field, (p - 1) * (q - 1)));
                        if lhs != rhs {
                            jacobi = Some(fmt3(x, y, z));
                        }
                    }
                    if leibniz.is_none() {
                        let yz = &mono(y) * &mono(z);
                        let lhs = table.bracket(&mono(x), &yz);
                        let r1 = &xy * &mono(z);
                        let r2 = (&mono(y) * &table.monomials(x, z)).scale(&sign(field, (p - 1) * q));
                        if lhs != &r1 + &r2 {
                            leibniz = Some(fmt3(x, y, z));
                        }
                    }
                    if jacobi.is_some() && leibniz.is_some() {
                        break 'triples;
                    }
                }
            }
        }
    }
    r.push("bracket Jacobi", jacobi);
    r.push("bracket Leibniz", leibniz);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraPresentation;

    fn heis() -> GradedOperator {
        let a = Algebra::new(AlgebraPresentation::exterior(FieldSpec::Rationals, &["e1", "e2", "e3"])).unwrap();
        let e12 = &a.generator(0) * &a.generator(1);
        GradedOperator::derivation_from_images(&a, 1, &[a.zero(), a.zero(), e12]).unwrap()
    }

    fn pi12() -> MultiVector {
        MultiVector::from_terms(FieldSpec::Rationals, 2, [(vec![0, 1], FieldSpec::Rationals.one())]).unwrap()
    }

    #[test]
    fn heisenberg_koszul_is_bv() {
        let b = BVStructure::koszul(heis(), &pi12()).unwrap();
        let r = verify_bv(&b);
        assert!(r.passed(), "{r}");
        assert!(verify_bv_infinity(&b).passed());
    }

    #[test]
    fn wrong_degree_rejected() {
        let d = heis();
        assert!(matches!(BVStructure::classical(d.clone(), d), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn hierarchy_and_conjugation() {
        let d = heis();
        let lambda = GradedOperator::interior_product(d.algebra(), &pi12()).unwrap();
        let b = BVStructure::build_hierarchy(d.clone(), lambda).unwrap();
        assert_eq!(b.delta1(), BVStructure::koszul(d, &pi12()).unwrap().delta1());
        assert!(verify_bv_infinity(&b).passed());
        let c = verify_conjugation_identity(&b).unwrap();
        assert!(c.passed(), "{c}");
    }

    #[test]
    fn mutation_caught() {
        let d = heis();
        let a = d.algebra().clone();
        let mut blocks = std::collections::BTreeMap::new();
        let mut blk = crate::linalg::SparseMatrix::zeros(a.field(), a.dim(1), a.dim(2));
        blk.set(0, 0, a.field().one());
        blocks.insert(2, blk);
        let bump = GradedOperator::from_blocks(&a, -1, blocks).unwrap();
        let good = BVStructure::koszul(d.clone(), &pi12()).unwrap();
        let bad = BVStructure::classical(d, good.delta1().add(&bump).unwrap()).unwrap();
        let r = verify_bv_infinity(&bad);
        assert!(!r.get("relation n=2").unwrap().holds || !r.get("order of delta_1 <= 2").unwrap().holds);
    }

    #[test]
    fn unit_brackets_vanish() {
        let b = BVStructure::koszul(heis(), &pi12()).unwrap();
        let a = b.algebra().clone();
        for i in 0..3 {
            assert!(b.derived_bracket(&a.unit(), &a.generator(i)).unwrap().is_zero());
        }
        assert!(b.derived_bracket(&a.generator(0), &a.generator(1)).unwrap().is_zero());
    }
}
