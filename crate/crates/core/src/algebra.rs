//! Finite-dimensional free graded-commutative algebras.
//!
//! An algebra is presented by ordered generators with an integer degree (and
//! optional bidegree). Odd generators square to zero; even generators carry a
//! nilpotency exponent `e` with `g^e = 0`; everything of total degree above
//! the cap is truncated. Monomials are stored as exponent vectors in
//! declaration order, and products pick up the Koszul sign of the
//! permutation that sorts the concatenated odd-generator word.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{odd, FieldSpec, Scalar};
use crate::linalg::{zero_vector, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub bidegree: Option<(i64, i64)>,
    /// `g^e = 0`; required for even generators, absent for odd ones.
    pub nilpotency: Option<u32>,
}

impl Generator {
    pub fn odd(name: &str, degree: i64) -> Self {
        Generator {
            name: name.to_string(),
            degree,
            bidegree: None,
            nilpotency: None,
        }
    }

    pub fn even(name: &str, degree: i64, nilpotency: u32) -> Self {
        Generator {
            name: name.to_string(),
            degree,
            bidegree: None,
            nilpotency: Some(nilpotency),
        }
    }

    pub fn with_bidegree(mut self, p: i64, q: i64) -> Self {
        self.bidegree = Some((p, q));
        self
    }

    pub fn is_odd(&self) -> bool {
        odd(self.degree)
    }

    /// Exponents range over `0..bound`.
    fn exponent_bound(&self) -> u32 {
        if self.is_odd() {
            2
        } else {
            self.nilpotency.unwrap_or(1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraPresentation {
    pub field: FieldSpec,
    pub generators: Vec<Generator>,
    pub degree_cap: i64,
}

impl AlgebraPresentation {
    pub fn new(field: FieldSpec, generators: Vec<Generator>, degree_cap: i64) -> Self {
        AlgebraPresentation {
            field,
            generators,
            degree_cap,
        }
    }

    /// Exterior algebra on `names`, all in degree 1, capped at the top degree.
    pub fn exterior(field: FieldSpec, names: &[&str]) -> Self {
        let gens = names.iter().map(|n| Generator::odd(n, 1)).collect();
        Self::new(field, gens, names.len() as i64)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for g in &self.generators {
            if !is_identifier(&g.name) {
                return Err(Error::InvalidPresentation(format!(
                    "generator name {:?} is not an identifier",
                    g.name
                )));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate generator name {}",
                    g.name
                )));
            }
            if let Some((p, q)) = g.bidegree {
                if p + q != g.degree {
                    return Err(Error::InvalidPresentation(format!(
                        "bidegree ({p},{q}) of {} does not sum to degree {}",
                        g.name, g.degree
                    )));
                }
            }
            match (g.is_odd(), g.nilpotency) {
                (true, Some(e)) if e != 2 => {
                    return Err(Error::InvalidPresentation(format!(
                        "odd generator {} has nilpotency 2, not {e}",
                        g.name
                    )))
                }
                (false, None) => {
                    return Err(Error::InvalidPresentation(format!(
                        "even generator {} needs a nilpotency exponent",
                        g.name
                    )))
                }
                (false, Some(e)) if e < 2 => {
                    return Err(Error::InvalidPresentation(format!(
                        "nilpotency exponent of {} must be at least 2",
                        g.name
                    )))
                }
                _ => {}
            }
        }
        // Truncation above the cap is an ideal only when no generator has
        // negative degree; otherwise the cap must truncate nothing.
        if self.generators.iter().any(|g| g.degree < 0) {
            let top: i64 = self
                .generators
                .iter()
                .filter(|g| g.degree > 0)
                .map(|g| (g.exponent_bound() as i64 - 1) * g.degree)
                .sum();
            if top > self.degree_cap {
                return Err(Error::InvalidPresentation(format!(
                    "with negative-degree generators the cap must be at least {top}, the top degree, so that the product stays associative"
                )));
            }
        }
        Ok(())
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s != "mod" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Exponent vector over the generators, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Generator indices repeated by exponent.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

struct AlgebraData {
    presentation: AlgebraPresentation,
    basis: BTreeMap<i64, Vec<Monomial>>,
    index: HashMap<Monomial, (i64, usize)>,
}

/// Shared handle to a validated algebra with its monomial basis.
#[derive(Clone)]
pub struct Algebra(Arc<AlgebraData>);

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.presentation.generators.iter().map(|g| g.name.as_str()).collect();
        write!(f, "Algebra({:?}, cap {})", names, self.0.presentation.degree_cap)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.presentation == other.0.presentation
    }
}

impl Eq for Algebra {}

impl Algebra {
    pub fn new(presentation: AlgebraPresentation) -> Result<Self> {
        presentation.validate()?;
        let gens = &presentation.generators;
        let cap = presentation.degree_cap;
        let prune = gens.iter().all(|g| g.degree > 0);
        let mut all = Vec::new();
        let mut current = vec![0u32; gens.len()];
        enumerate(gens, cap, prune, 0, 0, &mut current, &mut all);
        let mut basis: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        for (deg, m) in all {
            if deg <= cap {
                basis.entry(deg).or_default().push(m);
            }
        }
        let mut index = HashMap::new();
        for (&deg, ms) in basis.iter_mut() {
            ms.sort_by_key(Monomial::word);
            for (i, m) in ms.iter().enumerate() {
                index.insert(m.clone(), (deg, i));
            }
        }
        Ok(Algebra(Arc::new(AlgebraData {
            presentation,
            basis,
            index,
        })))
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.0.presentation
    }

    pub fn field(&self) -> FieldSpec {
        self.0.presentation.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.presentation.generators
    }

    pub fn num_generators(&self) -> usize {
        self.0.presentation.generators.len()
    }

    pub fn degree_cap(&self) -> i64 {
        self.0.presentation.degree_cap
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators().iter().position(|g| g.name == name)
    }

    /// Degrees with a nonempty basis, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.0.basis.keys().copied().collect()
    }

    pub fn basis(&self, degree: i64) -> &[Monomial] {
        self.0.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis(degree).len()
    }

    pub fn total_dim(&self) -> usize {
        self.0.basis.values().map(Vec::len).sum()
    }

    pub fn min_degree(&self) -> i64 {
        self.0.basis.keys().next().copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.0.basis.keys().next_back().copied().unwrap_or(0)
    }

    /// `max_degree - min_degree`.
    pub fn degree_span(&self) -> i64 {
        self.max_degree() - self.min_degree()
    }

    pub fn position(&self, m: &Monomial) -> Option<(i64, usize)> {
        self.0.index.get(m).copied()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .zip(self.generators())
            .map(|(&e, g)| e as i64 * g.degree)
            .sum()
    }

    /// Sum of generator bidegrees, when every generator present carries one.
    pub fn monomial_bidegree(&self, m: &Monomial) -> Option<(i64, i64)> {
        let mut acc = (0, 0);
        for (&e, g) in m.0.iter().zip(self.generators()) {
            if e > 0 {
                let (p, q) = g.bidegree?;
                acc.0 += e as i64 * p;
                acc.1 += e as i64 * q;
            }
        }
        Some(acc)
    }

    pub fn is_bigraded(&self) -> bool {
        !self.generators().is_empty() && self.generators().iter().all(|g| g.bidegree.is_some())
    }

    /// Product of two basis monomials: `None` when it vanishes, otherwise the
    /// sign (true = negative) and the normal-form monomial.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let gens = self.generators();
        let mut out = Vec::with_capacity(gens.len());
        let mut deg = 0;
        for (i, g) in gens.iter().enumerate() {
            let e = a.0[i] + b.0[i];
            if e >= g.exponent_bound() {
                return None;
            }
            deg += e as i64 * g.degree;
            out.push(e);
        }
        if deg > self.degree_cap() {
            return None;
        }
        // Count odd pairs (i from a, j from b) with i > j.
        let mut swaps = 0usize;
        let mut odd_b_below = 0usize;
        for (i, g) in gens.iter().enumerate() {
            if g.is_odd() {
                if a.0[i] == 1 {
                    swaps += odd_b_below;
                }
                if b.0[i] == 1 {
                    odd_b_below += 1;
                }
            }
        }
        Some((swaps % 2 == 1, Monomial(out)))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            return "1".to_string();
        }
        m.word()
            .into_iter()
            .map(|i| self.generators()[i].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn zero(&self) -> Element {
        Element::zero(self)
    }

    pub fn unit(&self) -> Element {
        let mut e = Element::zero(self);
        e.terms.insert(Monomial::unit(self.num_generators()), self.field().one());
        e
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut exps = vec![0; self.num_generators()];
        exps[i] = 1;
        let m = Monomial(exps);
        let mut e = Element::zero(self);
        if self.position(&m).is_some() {
            e.terms.insert(m, self.field().one());
        }
        e
    }

    pub fn monomial(&self, m: &Monomial) -> Element {
        Element::from_terms(self, [(m.clone(), self.field().one())])
    }

    /// The element with the given coordinates in the degree-`degree` basis.
    pub fn from_coordinates(&self, degree: i64, coords: &[Scalar]) -> Result<Element> {
        let basis = self.basis(degree);
        if coords.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "degree {degree} has dimension {}, got {} coordinates",
                basis.len(),
                coords.len()
            )));
        }
        Ok(Element::from_terms(
            self,
            basis.iter().cloned().zip(coords.iter().cloned()),
        ))
    }

    /// Builds a monomial from a list of generator indices (any order),
    /// returning its sign relative to normal form, or `None` when it vanishes.
    pub fn monomial_from_word(&self, word: &[usize]) -> Option<(bool, Monomial)> {
        let mut acc = (false, Monomial::unit(self.num_generators()));
        for &i in word {
            let mut exps = vec![0; self.num_generators()];
            exps[i] = 1;
            let (s, m) = self.multiply_monomials(&acc.1, &Monomial(exps))?;
            acc = (acc.0 ^ s, m);
        }
        Some(acc)
    }

    /// The same presentation over another field (scalars are not involved).
    pub fn with_field(&self, field: FieldSpec) -> Result<Algebra> {
        let mut p = self.presentation().clone();
        p.field = field;
        Algebra::new(p)
    }
}

fn enumerate(
    gens: &[Generator],
    cap: i64,
    prune: bool,
    i: usize,
    deg: i64,
    current: &mut Vec<u32>,
    out: &mut Vec<(i64, Monomial)>,
) {
    if prune && deg > cap {
        return;
    }
    if i == gens.len() {
        out.push((deg, Monomial(current.clone())));
        return;
    }
    for e in 0..gens[i].exponent_bound() {
        current[i] = e;
        enumerate(gens, cap, prune, i + 1, deg + e as i64 * gens[i].degree, current, out);
    }
    current[i] = 0;
}

/// A finite linear combination of basis monomials.
#[derive(Clone)]
pub struct Element {
    algebra: Algebra,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Element {
    pub fn zero(algebra: &Algebra) -> Self {
        Element {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(algebra: &Algebra, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut e = Element::zero(algebra);
        for (m, c) in terms {
            e.add_term(m, &c);
        }
        e
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.algebra.field().zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        assert!(self.algebra.position(&m).is_some(), "monomial outside the basis");
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(&self.algebra);
        }
        Element {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = Element::zero(&self.algebra);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((neg, m)) = self.algebra.multiply_monomials(a, b) {
                    let c = x * y;
                    out.add_term(m, &if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Homogeneous components keyed by degree (empty for zero).
    pub fn decompose(&self) -> BTreeMap<i64, Element> {
        let mut out: BTreeMap<i64, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = self.algebra.monomial_degree(m);
            out.entry(d)
                .or_insert_with(|| Element::zero(&self.algebra))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// The degree, if the element is nonzero and homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| self.algebra.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, degree: i64) -> bool {
        self.terms.keys().all(|m| self.algebra.monomial_degree(m) == degree)
    }

    /// Coordinates of the degree-`degree` component.
    pub fn coordinates(&self, degree: i64) -> Vector {
        let mut v = zero_vector(self.algebra.field(), self.algebra.dim(degree));
        for (m, c) in &self.terms {
            if let Some((d, i)) = self.algebra.position(m) {
                if d == degree {
                    v[i] = c.clone();
                }
            }
        }
        v
    }

    /// Re-expresses the element in `target` (same generators, possibly
    /// another field), mapping every coefficient.
    pub fn map_into(&self, target: &Algebra) -> Result<Element> {
        let field = target.field();
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &field.convert(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut items: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        items.sort_by_key(|(m, _)| self.algebra.position(m));
        for (k, (m, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", self.algebra.format_monomial(m))?;
            } else {
                write!(f, "{mag} {}", self.algebra.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("elements of different algebras")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_add(&-rhs).expect("elements of different algebras")
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("elements of different algebras")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&self.algebra.field().from_i64(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(n: usize) -> Algebra {
        let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Algebra::new(AlgebraPresentation::exterior(FieldSpec::Rationals, &refs)).unwrap()
    }

    #[test]
    fn basis_order_and_counts() {
        let a = ext(3);
        let names: Vec<String> = a.basis(2).iter().map(|m| a.format_monomial(m)).collect();
        assert_eq!(names, ["e1 e2", "e1 e3", "e2 e3"]);
        assert!(a.basis(4).is_empty());
        assert_eq!(ext(4).dim(2), 6);
    }

    #[test]
    fn degree_cap_truncates() {
        let mut p = AlgebraPresentation::exterior(FieldSpec::Rationals, &["a", "b", "c"]);
        p.degree_cap = 1;
        let a = Algebra::new(p).unwrap();
        assert!(a.basis(2).is_empty());
        assert!((&a.generator(0) * &a.generator(1)).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = ext(2);
        let (e1, e2) = (a.generator(0), a.generator(1));
        let p = &e1 * &e2;
        assert_eq!(&e2 * &e1, -&p);
        assert_eq!(&e1 * &a.unit(), e1);
        let lhs = &(&e1 + &e2) * &(&e1 - &e2);
        assert_eq!(lhs, p.scale(&FieldSpec::Rationals.from_i64(-2)));
    }

    #[test]
    fn even_generators_respect_nilpotency() {
        let p = AlgebraPresentation::new(
            FieldSpec::Rationals,
            vec![Generator::even("x", 2, 3), Generator::odd("y", 1)],
            10,
        );
        let a = Algebra::new(p).unwrap();
        let x = a.generator(0);
        let x2 = &x * &x;
        assert!(!x2.is_zero());
        assert!((&x2 * &x).is_zero());
        assert_eq!(&x * &a.generator(1), &a.generator(1) * &x);
    }

    #[test]
    fn validation_errors() {
        let bad = AlgebraPresentation::new(FieldSpec::Rationals, vec![Generator::odd("x", 2)], 4);
        assert!(Algebra::new(bad).is_err());
        let dup = AlgebraPresentation::exterior(FieldSpec::Rationals, &["a", "a"]);
        assert!(Algebra::new(dup).is_err());
        let bideg = AlgebraPresentation::new(
            FieldSpec::Rationals,
            vec![Generator::odd("z", 1).with_bidegree(1, 1)],
            2,
        );
        assert!(Algebra::new(bideg).is_err());
    }

    #[test]
    fn negative_degrees_need_a_slack_cap() {
        let gens = vec![Generator::even("a", 2, 2), Generator::odd("b", 1), Generator::odd("c", -1)];
        let tight = AlgebraPresentation::new(FieldSpec::Rationals, gens.clone(), 2);
        assert!(Algebra::new(tight).is_err());
        let a = Algebra::new(AlgebraPresentation::new(FieldSpec::Rationals, gens, 3)).unwrap();
        let (x, y, z) = (a.generator(0), a.generator(1), a.generator(2));
        assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        assert!(!(&(&x * &y) * &z).is_zero());
    }

    #[test]
    fn decompose_components() {
        let a = ext(2);
        let x = &a.generator(0) + &(&a.generator(0) * &a.generator(1));
        let parts = x.decompose();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert!(a.zero().decompose().is_empty());
        assert_eq!(a.generator(1).decompose().len(), 1);
    }
}
