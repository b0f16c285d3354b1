//! Degree-homogeneous linear operators on a graded algebra.
//!
//! Sign conventions, fixed once for the whole crate:
//! - Koszul rule: moving `x` past `y` costs `(-1)^{|x||y|}` (total degree).
//! - Commutator: `[s,t] = s t - (-1)^{|s||t|} t s`.
//! - Derivations of degree `k` satisfy `D(xy) = D(x) y + (-1)^{k|x|} x D(y)`.
//! - Interior products compose left to right: `i_{X∧Y} = i_X ∘ i_Y`.
//! - Koszul deviations follow the right-nested recursion documented on
//!   [`deviation`].

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Algebra, Element, Monomial};
use crate::error::{Error, Result};
use crate::field::{sign, FieldSpec, Scalar};
use crate::linalg::{inverse, SparseMatrix};
use crate::multivector::MultiVector;

/// A linear map `A^n -> A^{n+degree}` stored as one matrix per source degree.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedOperator {
    algebra: Algebra,
    degree: i64,
    blocks: BTreeMap<i64, SparseMatrix>,
}

impl fmt::Debug for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GradedOperator(degree {})", self.degree)?;
        for (m, img) in self.images() {
            writeln!(f, "  {} -> {}", self.algebra.format_monomial(&m), img)?;
        }
        Ok(())
    }
}

impl GradedOperator {
    pub fn zero(algebra: &Algebra, degree: i64) -> Self {
        let field = algebra.field();
        let blocks = algebra
            .degrees()
            .into_iter()
            .map(|n| (n, SparseMatrix::zeros(field, algebra.dim(n + degree), algebra.dim(n))))
            .collect();
        GradedOperator {
            algebra: algebra.clone(),
            degree,
            blocks,
        }
    }

    pub fn identity(algebra: &Algebra) -> Self {
        let field = algebra.field();
        let blocks = algebra
            .degrees()
            .into_iter()
            .map(|n| (n, SparseMatrix::identity(field, algebra.dim(n))))
            .collect();
        GradedOperator {
            algebra: algebra.clone(),
            degree: 0,
            blocks,
        }
    }

    /// Builds an operator from its values on basis monomials.
    pub fn from_fn(algebra: &Algebra, degree: i64, mut f: impl FnMut(&Monomial) -> Result<Element>) -> Result<Self> {
        let mut op = Self::zero(algebra, degree);
        for n in algebra.degrees() {
            let rows = algebra.dim(n + degree);
            let mut columns = Vec::with_capacity(algebra.dim(n));
            for m in algebra.basis(n) {
                let img = f(m)?;
                if img.algebra() != algebra {
                    return Err(Error::AlgebraMismatch);
                }
                if !img.is_homogeneous_of(n + degree) {
                    return Err(Error::DegreeMismatch(format!(
                        "image of {} is not homogeneous of degree {}",
                        algebra.format_monomial(m),
                        n + degree
                    )));
                }
                columns.push(img.coordinates(n + degree));
            }
            op.blocks.insert(n, SparseMatrix::from_columns(algebra.field(), rows, &columns));
        }
        Ok(op)
    }

    /// Assembles an operator from explicit blocks; missing blocks are zero.
    pub fn from_blocks(algebra: &Algebra, degree: i64, blocks: BTreeMap<i64, SparseMatrix>) -> Result<Self> {
        let mut op = Self::zero(algebra, degree);
        for (n, b) in blocks {
            let expected = (algebra.dim(n + degree), algebra.dim(n));
            if (b.rows(), b.cols()) != expected {
                return Err(Error::DimensionMismatch(format!(
                    "block at degree {n} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    expected.0,
                    expected.1
                )));
            }
            if b.field() != algebra.field() {
                return Err(Error::FieldMismatch("operator block field".into()));
            }
            if expected.1 > 0 {
                op.blocks.insert(n, b);
            } else if !b.is_zero() {
                return Err(Error::DimensionMismatch(format!("degree {n} is empty")));
            }
        }
        Ok(op)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Matrix from degree `n` to degree `n + degree` (zero-sized if empty).
    pub fn block(&self, n: i64) -> SparseMatrix {
        self.blocks.get(&n).cloned().unwrap_or_else(|| {
            SparseMatrix::zeros(self.field(), self.algebra.dim(n + self.degree), self.algebra.dim(n))
        })
    }

    pub fn blocks(&self) -> &BTreeMap<i64, SparseMatrix> {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(SparseMatrix::is_zero)
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Element {
        let Some((n, j)) = self.algebra.position(m) else {
            return self.algebra.zero();
        };
        let col = self.blocks[&n].column(j);
        self.algebra
            .from_coordinates(n + self.degree, &col)
            .expect("block shape matches basis")
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = self.algebra.zero();
        for (m, c) in x.terms() {
            out = &out + &self.apply_monomial(m).scale(c);
        }
        Ok(out)
    }

    /// Nonzero images of basis monomials, in basis order.
    pub fn images(&self) -> Vec<(Monomial, Element)> {
        let mut out = Vec::new();
        for n in self.algebra.degrees() {
            for m in self.algebra.basis(n) {
                let img = self.apply_monomial(m);
                if !img.is_zero() {
                    out.push((m.clone(), img));
                }
            }
        }
        out
    }

    fn check_same(&self, other: &GradedOperator) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedOperator) -> Result<GradedOperator> {
        self.check_same(other)?;
        let degree = self.degree + other.degree;
        let mut out = Self::zero(&self.algebra, degree);
        for (&n, b) in &other.blocks {
            let prod = self.block(n + other.degree).mul(b)?;
            out.blocks.insert(n, prod);
        }
        Ok(out)
    }

    fn combine(&self, other: &GradedOperator, subtract: bool) -> Result<GradedOperator> {
        self.check_same(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "cannot add operators of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (n, b) in out.blocks.iter_mut() {
            let o = other.block(*n);
            *b = if subtract { b.sub(&o)? } else { b.add(&o)? };
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedOperator) -> Result<GradedOperator> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &GradedOperator) -> Result<GradedOperator> {
        self.combine(other, true)
    }

    pub fn scale(&self, c: &Scalar) -> GradedOperator {
        let mut out = self.clone();
        for b in out.blocks.values_mut() {
            *b = b.scale(c);
        }
        out
    }

    pub fn neg(&self) -> GradedOperator {
        self.scale(&self.field().from_i64(-1))
    }

    /// Graded commutator `[s,t] = st - (-1)^{|s||t|} ts`.
    pub fn commutator(&self, other: &GradedOperator) -> Result<GradedOperator> {
        let st = self.compose(other)?;
        let ts = other.compose(self)?;
        st.sub(&ts.scale(&sign(self.field(), self.degree * other.degree)))
    }

    /// `eta^{-1} ∘ self ∘ eta` for a blockwise invertible degree-0 `eta`.
    pub fn conjugate(&self, eta: &GradedOperator) -> Result<GradedOperator> {
        self.check_same(eta)?;
        if eta.degree != 0 {
            return Err(Error::DegreeMismatch("conjugating operator must have degree 0".into()));
        }
        let mut inv = BTreeMap::new();
        for (&n, b) in &eta.blocks {
            let i = inverse(b).ok_or_else(|| Error::Precondition(format!("eta is not invertible in degree {n}")))?;
            inv.insert(n, i);
        }
        let eta_inv = GradedOperator {
            algebra: self.algebra.clone(),
            degree: 0,
            blocks: inv,
        };
        eta_inv.compose(self)?.compose(eta)
    }

    /// Blockwise transpose in the monomial basis, taken as orthonormal.
    pub fn adjoint(&self) -> GradedOperator {
        let mut out = Self::zero(&self.algebra, -self.degree);
        for n in self.algebra.degrees() {
            if let Some(b) = self.blocks.get(&(n - self.degree)) {
                out.blocks.insert(n, b.transpose());
            }
        }
        out
    }

    /// The same matrices re-read in `target` (same generators, new field).
    pub fn map_into(&self, target: &Algebra) -> Result<GradedOperator> {
        if target.generators() != self.algebra.generators() || target.degree_cap() != self.algebra.degree_cap() {
            return Err(Error::AlgebraMismatch);
        }
        let field = target.field();
        let mut blocks = BTreeMap::new();
        for (&n, b) in &self.blocks {
            blocks.insert(n, b.map_entries(field, |x| field.convert(x))?);
        }
        Ok(GradedOperator {
            algebra: target.clone(),
            degree: self.degree,
            blocks,
        })
    }

    /// Left multiplication by a homogeneous element.
    pub fn multiplication(a: &Element) -> Result<GradedOperator> {
        let algebra = a.algebra().clone();
        let degree = match a.degree() {
            Some(k) => k,
            None if a.is_zero() => 0,
            None => return Err(Error::DegreeMismatch("multiplier is not homogeneous".into())),
        };
        Self::from_fn(&algebra, degree, |m| Ok(a * &algebra.monomial(m)))
    }

    /// The unique derivation of the given degree sending generator `i` to
    /// `images[i]`.
    pub fn derivation_from_images(algebra: &Algebra, degree: i64, images: &[Element]) -> Result<GradedOperator> {
        let gens = algebra.generators();
        if images.len() != gens.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generators but {} images",
                gens.len(),
                images.len()
            )));
        }
        for (g, img) in gens.iter().zip(images) {
            if img.algebra() != algebra {
                return Err(Error::AlgebraMismatch);
            }
            if !img.is_homogeneous_of(g.degree + degree) {
                return Err(Error::DegreeMismatch(format!(
                    "image of {} must have degree {}, got {}",
                    g.name,
                    g.degree + degree,
                    img
                )));
            }
        }
        let field = algebra.field();
        let gen_elems: Vec<Element> = (0..gens.len()).map(|i| algebra.generator(i)).collect();
        Self::from_fn(algebra, degree, |m| {
            let word = m.word();
            let mut out = algebra.zero();
            let mut preceding = 0i64;
            for j in 0..word.len() {
                let mut term = algebra.unit();
                for &l in &word[..j] {
                    term = &term * &gen_elems[l];
                }
                term = &term * &images[word[j]];
                for &l in &word[j + 1..] {
                    term = &term * &gen_elems[l];
                }
                out = &out + &term.scale(&sign(field, degree * preceding));
                preceding += gens[word[j]].degree;
            }
            Ok(out)
        })
    }

    /// Images of the generators (meaningful for derivations).
    pub fn generator_images(&self) -> Vec<Element> {
        (0..self.algebra.num_generators())
            .map(|i| self.apply(&self.algebra.generator(i)).expect("same algebra"))
            .collect()
    }

    /// Contraction `i_{∂_j}`: the odd derivation of degree -1 with
    /// `i(g_l) = δ_{jl}`. Generator `j` must have degree 1.
    pub fn contraction(algebra: &Algebra, j: usize) -> Result<GradedOperator> {
        let g = algebra
            .generators()
            .get(j)
            .ok_or_else(|| Error::ArityMismatch(format!("no generator with index {j}")))?;
        if g.degree != 1 {
            return Err(Error::ArityMismatch(format!(
                "contraction needs a degree-1 generator, {} has degree {}",
                g.name, g.degree
            )));
        }
        let images: Vec<Element> = (0..algebra.num_generators())
            .map(|l| if l == j { algebra.unit() } else { algebra.zero() })
            .collect();
        Self::derivation_from_images(algebra, -1, &images)
    }

    /// `i_v` for a multivector `v`, extended linearly from
    /// `i_{X_1∧…∧X_k} = i_{X_1} ∘ … ∘ i_{X_k}`.
    pub fn interior_product(algebra: &Algebra, v: &MultiVector) -> Result<GradedOperator> {
        let k = v.arity() as i64;
        let mut cache: BTreeMap<usize, GradedOperator> = BTreeMap::new();
        let mut out = Self::zero(algebra, -k);
        for (idx, c) in v.terms() {
            let mut op = Self::identity(algebra);
            for &j in idx.iter().rev() {
                if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(j) {
                    e.insert(Self::contraction(algebra, j)?);
                }
                op = cache[&j].compose(&op)?;
            }
            out = out.add(&op.scale(&algebra.field().convert(c)?))?;
        }
        Ok(out)
    }

    /// First basis pair violating the Leibniz rule for this degree, if any.
    pub fn derivation_witness(&self) -> Option<(Monomial, Monomial)> {
        let a = &self.algebra;
        let field = a.field();
        for n in a.degrees() {
            for x in a.basis(n) {
                for k in a.degrees() {
                    for y in a.basis(k) {
                        let xe = a.monomial(x);
                        let ye = a.monomial(y);
                        let lhs = self.apply(&(&xe * &ye)).ok()?;
                        let r1 = &self.apply_monomial(x) * &ye;
                        let r2 = (&xe * &self.apply_monomial(y)).scale(&sign(field, self.degree * n));
                        if lhs != &r1 + &r2 {
                            return Some((x.clone(), y.clone()));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_derivation(&self) -> bool {
        self.derivation_witness().is_none()
    }

    /// First basis monomial where `self` and `other` differ.
    pub fn difference_witness(&self, other: &GradedOperator) -> Option<Monomial> {
        if self.degree != other.degree {
            return self.algebra.degrees().first().map(|&n| self.algebra.basis(n)[0].clone());
        }
        for n in self.algebra.degrees() {
            let (a, b) = (self.block(n), other.block(n));
            if a != b {
                for (j, m) in self.algebra.basis(n).iter().enumerate() {
                    if a.column(j) != b.column(j) {
                        return Some(m.clone());
                    }
                }
            }
        }
        None
    }

    /// First basis monomial with a nonzero image.
    pub fn nonzero_witness(&self) -> Option<Monomial> {
        for n in self.algebra.degrees() {
            let b = &self.blocks[&n];
            if let Some((_, j, _)) = b.entries().min_by_key(|(_, j, _)| *j) {
                return Some(self.algebra.basis(n)[j].clone());
            }
        }
        None
    }
}

/// Koszul deviation `Φ^n_t(x_1, …, x_n)`:
///
/// `Φ^1(x) = t(x) - t(1) x` and, for `n ≥ 2`,
/// `Φ^n(…, a, b) = Φ^{n-1}(…, ab) - Φ^{n-1}(…, a) b - (-1)^{|a||b|} Φ^{n-1}(…, b) a`.
///
/// The deviations are graded symmetric and vanish when an argument is 1, so
/// the operator has order ≤ k exactly when `Φ^{k+1}` vanishes on every
/// nondecreasing tuple of non-unit basis monomials.
pub fn deviation(t: &GradedOperator, args: &[Element]) -> Element {
    let a = t.algebra();
    if args.iter().any(Element::is_zero) {
        return a.zero();
    }
    match args.len() {
        0 => t.apply(&a.unit()).expect("same algebra"),
        1 => {
            let tx = t.apply(&args[0]).expect("same algebra");
            let t1 = t.apply(&a.unit()).expect("same algebra");
            &tx - &(&t1 * &args[0])
        }
        n => {
            let x = &args[n - 2];
            let y = &args[n - 1];
            let mut merged = args[..n - 2].to_vec();
            merged.push(x * y);
            let mut swapped = args[..n - 2].to_vec();
            swapped.push(y.clone());
            let t1 = deviation(t, &merged);
            let t2 = &deviation(t, &args[..n - 1]) * y;
            let dx = x.degree().unwrap_or(0);
            let dy = y.degree().unwrap_or(0);
            let t3 = (&deviation(t, &swapped) * x).scale(&sign(a.field(), dx * dy));
            &(&t1 - &t2) - &t3
        }
    }
}

/// The first nondecreasing tuple of non-unit basis monomials on which
/// `Φ^n_t` is nonzero, with the value.
pub fn deviation_witness(t: &GradedOperator, n: usize) -> Option<(Vec<Monomial>, Element)> {
    let a = t.algebra();
    let pool: Vec<(i64, Monomial)> = a
        .degrees()
        .into_iter()
        .flat_map(|d| a.basis(d).iter().map(move |m| (d, m.clone())))
        .filter(|(_, m)| !m.is_unit())
        .collect();
    if n == 0 {
        let v = t.apply(&a.unit()).ok()?;
        return (!v.is_zero()).then(|| (vec![], v));
    }
    let mut idx = vec![0usize; n];
    if pool.is_empty() {
        return None;
    }
    let max_deg = a.max_degree();
    let min_deg = a.min_degree();
    loop {
        let total: i64 = idx.iter().map(|&i| pool[i].0).sum::<i64>() + t.degree();
        if total >= min_deg && total <= max_deg && a.dim(total) > 0 {
            let args: Vec<Element> = idx.iter().map(|&i| a.monomial(&pool[i].1)).collect();
            let v = deviation(t, &args);
            if !v.is_zero() {
                return Some((idx.iter().map(|&i| pool[i].1.clone()).collect(), v));
            }
        }
        // Next nondecreasing index tuple.
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if idx[k] + 1 < pool.len() {
                let v = idx[k] + 1;
                for slot in idx.iter_mut().skip(k) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Result of an operator-order query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderVerdict {
    /// The smallest `k` with vanishing `Φ^{k+1}`.
    Order(usize),
    /// `Φ^{k_max+1}` is nonzero.
    Exceeds(usize),
}

pub fn koszul_order(t: &GradedOperator, k_max: usize) -> OrderVerdict {
    for k in 0..=k_max {
        if deviation_witness(t, k + 1).is_none() {
            return OrderVerdict::Order(k);
        }
    }
    OrderVerdict::Exceeds(k_max)
}

pub fn has_order_at_most(t: &GradedOperator, k: usize) -> bool {
    deviation_witness(t, k + 1).is_none()
}
