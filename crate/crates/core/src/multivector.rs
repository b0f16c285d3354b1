//! Constant multivectors on a Lie algebra and the Schouten bracket.
//!
//! Multivectors live in the exterior algebra on a basis `X_0, …, X_{n-1}`.
//! When used for contractions, index `i` refers to the degree-1 generator
//! with the same position in the algebra presentation.

use std::collections::BTreeMap;

use crate::algebra::{Algebra, AlgebraPresentation};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::operator::GradedOperator;

/// A homogeneous element of `Λ^k` with terms keyed by increasing index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiVector {
    field: FieldSpec,
    arity: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

/// Sorts an index word, returning the permutation sign or `None` on a repeat.
fn normalize(word: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut w = word.to_vec();
    let mut negative = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((negative, w))
}

impl MultiVector {
    pub fn zero(field: FieldSpec, arity: usize) -> Self {
        MultiVector {
            field,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// The scalar `c` as a 0-vector.
    pub fn constant(c: Scalar) -> Self {
        let mut v = Self::zero(c.field(), 0);
        if !c.is_zero() {
            v.terms.insert(vec![], c);
        }
        v
    }

    pub fn basis_vector(field: FieldSpec, i: usize) -> Self {
        let mut v = Self::zero(field, 1);
        v.terms.insert(vec![i], field.one());
        v
    }

    /// Sums `c · X_{w_1} ∧ … ∧ X_{w_k}` over the given words.
    pub fn from_terms(
        field: FieldSpec,
        arity: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
    ) -> Result<Self> {
        let mut v = Self::zero(field, arity);
        for (word, c) in terms {
            if word.len() != arity {
                return Err(Error::ArityMismatch(format!(
                    "term of length {} in a {arity}-vector",
                    word.len()
                )));
            }
            let c = field.convert(&c)?;
            if let Some((neg, w)) = normalize(&word) {
                v.add_term(w, &if neg { -c } else { c });
            }
        }
        Ok(v)
    }

    fn add_term(&mut self, key: Vec<usize>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    /// Largest index used, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().flat_map(|k| k.iter().copied()).max()
    }

    pub fn add(&self, other: &MultiVector) -> Result<MultiVector> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(format!(
                "cannot add a {}-vector and a {}-vector",
                self.arity, other.arity
            )));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiVector) -> Result<MultiVector> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> MultiVector {
        let mut out = Self::zero(self.field, self.arity);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), &(x * c));
        }
        out
    }

    pub fn wedge(&self, other: &MultiVector) -> MultiVector {
        let mut out = Self::zero(self.field, self.arity + other.arity);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                if let Some((neg, key)) = normalize(&w) {
                    let c = x * y;
                    out.add_term(key, &if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn map_into(&self, field: FieldSpec) -> Result<MultiVector> {
        let mut out = Self::zero(field, self.arity);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &field.convert(c)?);
        }
        Ok(out)
    }

    /// Renders with `names[i]` for `X_i`, e.g. `x1 x2 - 2 x1 x3`.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let word: Vec<&str> = k.iter().map(|&i| names[i].as_str()).collect();
            if k.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&word.join(" "));
            } else {
                out.push_str(&format!("{mag} {}", word.join(" ")));
            }
        }
        out
    }
}

/// Structure constants `[X_i, X_j] = Σ_k c_{ij}^k X_k` of a Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieStructure {
    field: FieldSpec,
    dim: usize,
    /// `brackets[i][j]` is `[X_i, X_j]` as a 1-vector.
    brackets: Vec<Vec<MultiVector>>,
}

impl LieStructure {
    pub fn abelian(field: FieldSpec, dim: usize) -> Self {
        LieStructure {
            field,
            dim,
            brackets: vec![vec![MultiVector::zero(field, 1); dim]; dim],
        }
    }

    /// Builds from brackets `[X_i, X_j]` for `i < j`; the rest follows by
    /// antisymmetry. Jacobi is not checked here, see [`Self::jacobi_witness`].
    pub fn from_brackets(
        field: FieldSpec,
        dim: usize,
        brackets: impl IntoIterator<Item = ((usize, usize), Vec<(usize, Scalar)>)>,
    ) -> Result<Self> {
        let mut s = Self::abelian(field, dim);
        for ((i, j), value) in brackets {
            if i >= dim || j >= dim || value.iter().any(|(k, _)| *k >= dim) {
                return Err(Error::DimensionMismatch(format!("bracket index out of range for dimension {dim}")));
            }
            if i == j {
                if value.iter().any(|(_, c)| !c.is_zero()) {
                    return Err(Error::Precondition(format!("[X{i}, X{i}] must vanish")));
                }
                continue;
            }
            let v = MultiVector::from_terms(field, 1, value.into_iter().map(|(k, c)| (vec![k], c)))?;
            s.brackets[j][i] = v.scale(&field.from_i64(-1));
            s.brackets[i][j] = v;
        }
        Ok(s)
    }

    /// Reads off the Lie algebra dual to a Chevalley–Eilenberg differential
    /// on an exterior algebra of degree-1 generators:
    /// `i_{[X_i,X_j]} = [[i_{X_i}, d], i_{X_j}]`.
    pub fn from_ce_differential(d: &GradedOperator) -> Result<Self> {
        let a = d.algebra();
        let n = a.num_generators();
        if a.generators().iter().any(|g| g.degree != 1) || d.degree() != 1 {
            return Err(Error::Precondition(
                "a CE differential is a degree-1 operator on degree-1 generators".into(),
            ));
        }
        let field = a.field();
        let contractions: Vec<GradedOperator> = (0..n)
            .map(|i| GradedOperator::contraction(a, i))
            .collect::<Result<_>>()?;
        let mut s = Self::abelian(field, n);
        for i in 0..n {
            let lie = contractions[i].commutator(d)?;
            for j in 0..n {
                let op = lie.commutator(&contractions[j])?;
                let mut v = MultiVector::zero(field, 1);
                for k in 0..n {
                    let c = op.apply(&a.generator(k))?.coefficient(&a.basis(0)[0]);
                    v.add_term(vec![k], &c);
                }
                s.brackets[i][j] = v;
            }
        }
        Ok(s)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &MultiVector {
        &self.brackets[i][j]
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().flatten().all(MultiVector::is_zero)
    }

    fn bracket_vectors(&self, x: &MultiVector, y: &MultiVector) -> MultiVector {
        let mut out = MultiVector::zero(self.field, 1);
        for (a, c) in x.terms() {
            for (b, e) in y.terms() {
                out = out.add(&self.brackets[a[0]][b[0]].scale(&(c * e))).expect("1-vectors");
            }
        }
        out
    }

    /// A basis triple `(i, j, k)` violating antisymmetry or Jacobi.
    pub fn jacobi_witness(&self) -> Option<(usize, usize, usize)> {
        let f = self.field;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.brackets[i][j].add(&self.brackets[j][i]).map_or(true, |v| !v.is_zero()) {
                    return Some((i, j, j));
                }
            }
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let x = |t| MultiVector::basis_vector(f, t);
                    let cyc = [(i, j, k), (j, k, i), (k, i, j)];
                    let mut total = MultiVector::zero(f, 1);
                    for (a, b, c) in cyc {
                        let inner = self.bracket_vectors(&x(b), &x(c));
                        total = total.add(&self.bracket_vectors(&x(a), &inner)).expect("1-vectors");
                    }
                    if !total.is_zero() {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        match self.jacobi_witness() {
            None => Ok(()),
            Some((i, j, k)) => Err(Error::JacobiFailure(format!(
                "structure constants fail on (X{i}, X{j}, X{k})"
            ))),
        }
    }

    fn check_indices(&self, v: &MultiVector) -> Result<()> {
        if v.max_index().is_some_and(|m| m >= self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "multivector uses an index beyond dimension {}",
                self.dim
            )));
        }
        Ok(())
    }

    /// Schouten bracket of `v` and `w`, arity `p + q - 1`.
    pub fn schouten(&self, v: &MultiVector, w: &MultiVector) -> Result<MultiVector> {
        self.validate()?;
        self.check_indices(v)?;
        self.check_indices(w)?;
        Ok(self.schouten_unchecked(v, w))
    }

    /// `[X, W]` for a 1-vector `X`: the derivation extending `ad_X`.
    fn ad_vector(&self, i: usize, w: &MultiVector) -> MultiVector {
        let mut out = MultiVector::zero(self.field, w.arity());
        for (key, c) in w.terms() {
            for r in 0..key.len() {
                for (k, e) in self.brackets[i][key[r]].terms() {
                    let mut word = key.clone();
                    word[r] = k[0];
                    if let Some((neg, nk)) = normalize(&word) {
                        let coef = c * e;
                        out.add_term(nk, &if neg { -coef } else { coef });
                    }
                }
            }
        }
        out
    }

    /// Biderivation recursion on the first argument:
    /// `[X ∧ P, W] = X ∧ [P, W] + (-1)^{|P|(|W|-1)} [X, W] ∧ P`.
    fn schouten_unchecked(&self, v: &MultiVector, w: &MultiVector) -> MultiVector {
        let (p, q) = (v.arity(), w.arity());
        let arity = (p + q).saturating_sub(1);
        let mut out = MultiVector::zero(self.field, arity);
        if p == 0 || q == 0 {
            return out;
        }
        for (key, c) in v.terms() {
            let x = MultiVector::basis_vector(self.field, key[0]);
            let rest = MultiVector::from_terms(self.field, p - 1, [(key[1..].to_vec(), self.field.one())])
                .expect("arity matches");
            let first = x.wedge(&self.schouten_unchecked(&rest, w));
            let sgn = crate::field::sign(self.field, ((p - 1) * (q - 1)) as i64);
            let second = self.ad_vector(key[0], w).wedge(&rest).scale(&sgn);
            let term = first.add(&second).expect("same arity").scale(c);
            out = out.add(&term).expect("same arity");
        }
        out
    }

    /// The Chevalley–Eilenberg model `(Λ g*, d)` with generators named
    /// `names`: `d e_k = -Σ_{i<j} c_{ij}^k e_i e_j`, inverse to
    /// [`Self::from_ce_differential`].
    pub fn ce_model(&self, names: &[&str]) -> Result<(Algebra, GradedOperator)> {
        if names.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} names for a Lie algebra of dimension {}",
                names.len(),
                self.dim
            )));
        }
        let a = Algebra::new(AlgebraPresentation::exterior(self.field, names))?;
        let mut images = vec![a.zero(); self.dim];
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let eij = &a.generator(i) * &a.generator(j);
                for (k, c) in self.brackets[i][j].terms() {
                    images[k[0]] = &images[k[0]] - &eij.scale(c);
                }
            }
        }
        let d = GradedOperator::derivation_from_images(&a, 1, &images)?;
        Ok((a, d))
    }

    pub fn map_into(&self, field: FieldSpec) -> Result<LieStructure> {
        let brackets = self
            .brackets
            .iter()
            .map(|row| row.iter().map(|v| v.map_into(field)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(LieStructure {
            field,
            dim: self.dim,
            brackets,
        })
    }
}
