//! Contractions of a dg-Lie algebra onto its homology and homotopy transfer
//! of the bracket to an `L∞` structure on homology, up to arity 4.
//!
//! Transferred brackets are computed in the shifted symmetric convention:
//! on `sL` with `|sx| = |x| - 1` the bracket becomes the symmetric degree-1
//! map `Q(sx, sy) = (-1)^{|x|} s[x,y]`, and
//!
//! ```text
//! λ_1 = i,    λ_S = Σ_{S = I ⊔ J, min S ∈ I} ε(I,J) h Q(λ_I, λ_J),
//! ℓ_S = Σ_{S = I ⊔ J, min S ∈ I} ε(I,J) q Q(λ_I, λ_J),
//! ```
//!
//! where `ε` is the Koszul sign of the unshuffle in shifted degrees.

use std::collections::BTreeMap;

use crate::bv::VerificationReport;
use crate::dglie::DgLie;
use crate::error::{Error, Result};
use crate::field::{odd, sign, FieldSpec, Scalar};
use crate::linalg::{
    axpy, homology, inverse, is_zero_vector, scale_vector, zero_vector, SparseMatrix, Subspace, Vector,
};

/// `(i, q, h)` with `q i = 1`, `i q - 1 = ∂h + h∂`, `h² = 0`, `h i = 0`,
/// `q h = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub field: FieldSpec,
    pub betti: BTreeMap<i64, usize>,
    /// `L^n <- H^n`.
    pub inclusion: BTreeMap<i64, SparseMatrix>,
    /// `H^n <- L^n`.
    pub projection: BTreeMap<i64, SparseMatrix>,
    /// `L^{n-1} <- L^n`.
    pub homotopy: BTreeMap<i64, SparseMatrix>,
}

/// Splits `L^n = ∂C^{n-1} ⊕ R^n ⊕ C^n` with `R` the homology
/// representatives and `C` the echelon complement of the cycles; `h` sends
/// `∂c` to `-c` and kills `R ⊕ C`.
pub fn build_contraction(l: &DgLie) -> Result<Contraction> {
    let field = l.field();
    let degrees = l.degrees();
    let mut complements: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    let mut homs = BTreeMap::new();
    for &n in &degrees {
        let h = l.homology(n)?;
        complements.insert(n, h.complement.clone());
        homs.insert(n, h);
    }
    let mut out = Contraction {
        field,
        betti: BTreeMap::new(),
        inclusion: BTreeMap::new(),
        projection: BTreeMap::new(),
        homotopy: BTreeMap::new(),
    };
    for &n in &degrees {
        let dim = l.dim(n);
        let h = &homs[&n];
        let prev: &[Vector] = complements.get(&(n - 1)).map(Vec::as_slice).unwrap_or(&[]);
        let d_prev = l.differential(n - 1);
        let mut frame: Vec<Vector> = prev.iter().map(|c| d_prev.mul_vec(c)).collect::<Result<_>>()?;
        let nb = frame.len();
        frame.extend(h.representatives.iter().cloned());
        frame.extend(complements[&n].iter().cloned());
        if frame.len() != dim {
            return Err(Error::Invariant(format!("frame in degree {n} has {} vectors for dimension {dim}", frame.len())));
        }
        let f = SparseMatrix::from_columns(field, dim, &frame);
        let finv = inverse(&f).ok_or_else(|| Error::Invariant(format!("frame in degree {n} is singular")))?;
        let b_rows: Vec<usize> = (0..nb).collect();
        let r_rows: Vec<usize> = (nb..nb + h.dim).collect();
        let all: Vec<usize> = (0..dim).collect();
        let coords_b = finv.submatrix(&b_rows, &all);
        let q = finv.submatrix(&r_rows, &all);
        let c_prev = SparseMatrix::from_columns(field, l.dim(n - 1), prev);
        let hn = c_prev.mul(&coords_b)?.scale(&field.from_i64(-1));
        out.betti.insert(n, h.dim);
        out.inclusion.insert(n, SparseMatrix::from_columns(field, dim, &h.representatives));
        out.projection.insert(n, q);
        out.homotopy.insert(n, hn);
    }
    Ok(out)
}

impl Contraction {
    pub fn betti(&self, n: i64) -> usize {
        self.betti.get(&n).copied().unwrap_or(0)
    }

    pub fn include(&self, n: i64, x: &[Scalar]) -> Result<Vector> {
        match self.inclusion.get(&n) {
            Some(m) => m.mul_vec(x),
            None => Ok(Vec::new()),
        }
    }

    pub fn project(&self, n: i64, x: &[Scalar]) -> Result<Vector> {
        match self.projection.get(&n) {
            Some(m) => m.mul_vec(x),
            None => Ok(Vec::new()),
        }
    }

    /// `h: L^n -> L^{n-1}`.
    pub fn homotopy(&self, n: i64, x: &[Scalar]) -> Result<Vector> {
        match self.homotopy.get(&n) {
            Some(m) => m.mul_vec(x),
            None => Ok(Vec::new()),
        }
    }

    /// The five contraction identities, blockwise.
    pub fn verify(&self, l: &DgLie) -> Result<VerificationReport> {
        let f = self.field;
        let mut r = VerificationReport::default();
        let zero = |rows, cols| SparseMatrix::zeros(f, rows, cols);
        let get = |m: &BTreeMap<i64, SparseMatrix>, n: i64, rows: usize, cols: usize| {
            m.get(&n).cloned().unwrap_or_else(|| zero(rows, cols))
        };
        let mut qi = None;
        let mut homotopy_eq = None;
        let mut hh = None;
        let mut hi = None;
        let mut qh = None;
        for n in l.degrees() {
            let dim = l.dim(n);
            let b = self.betti(n);
            let i = get(&self.inclusion, n, dim, b);
            let q = get(&self.projection, n, b, dim);
            let h = get(&self.homotopy, n, l.dim(n - 1), dim);
            if q.mul(&i)? != SparseMatrix::identity(f, b) {
                qi.get_or_insert(format!("degree {n}"));
            }
            let h_next = get(&self.homotopy, n + 1, dim, l.dim(n + 1));
            let lhs = i.mul(&q)?.sub(&SparseMatrix::identity(f, dim))?;
            let rhs = l.differential(n - 1).mul(&h)?.add(&h_next.mul(&l.differential(n))?)?;
            if lhs != rhs {
                homotopy_eq.get_or_insert(format!("degree {n}"));
            }
            let h_prev = get(&self.homotopy, n - 1, l.dim(n - 2), l.dim(n - 1));
            if !h_prev.mul(&h)?.is_zero() {
                hh.get_or_insert(format!("degree {n}"));
            }
            if !h.mul(&i)?.is_zero() {
                hi.get_or_insert(format!("degree {n}"));
            }
            let q_prev = get(&self.projection, n - 1, self.betti(n - 1), l.dim(n - 1));
            if !q_prev.mul(&h)?.is_zero() {
                qh.get_or_insert(format!("degree {n}"));
            }
        }
        r.push("q i = 1", qi);
        r.push("i q - 1 = dh + hd", homotopy_eq);
        r.push("h h = 0", hh);
        r.push("h i = 0", hi);
        r.push("q h = 0", qh);
        Ok(r)
    }
}

/// Homology basis class `i` of `H^n`.
pub type ClassIndex = (i64, usize);

/// Values of the transferred brackets on nondecreasing tuples of homology
/// basis classes, in the shifted symmetric convention. Zero values are
/// omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransferredBrackets {
    pub arity_max: usize,
    pub brackets: BTreeMap<usize, BTreeMap<Vec<ClassIndex>, Vector>>,
}

impl TransferredBrackets {
    pub fn is_zero(&self, arity: usize) -> bool {
        self.brackets.get(&arity).is_none_or(|m| m.is_empty())
    }

    /// `ℓ_2(x, y) = q[i x, i y]` in the unshifted convention, for classes
    /// `x ∈ H^n`, `y ∈ H^m` (any order).
    pub fn l2_unshifted(&self, x: ClassIndex, y: ClassIndex, field: FieldSpec) -> Option<Vector> {
        let (key, swap) = if x <= y { (vec![x, y], false) } else { (vec![y, x], true) };
        let v = self.brackets.get(&2)?.get(&key)?;
        // Q(sx, sy) = (-1)^{|x|} s[x,y]; swapping symmetric arguments costs
        // (-1)^{(|x|-1)(|y|-1)}.
        let mut s = sign(field, x.0);
        if swap {
            s = &s * &sign(field, (x.0 - 1) * (y.0 - 1));
        }
        Some(scale_vector(&s, v))
    }
}

struct Transfer<'a> {
    l: &'a DgLie,
    c: &'a Contraction,
}

impl Transfer<'_> {
    fn field(&self) -> FieldSpec {
        self.l.field()
    }

    /// `Q(sa, sb)` for `a ∈ L^n`, `b ∈ L^m`: lands in `L^{n+m}`.
    fn q2(&self, n: i64, a: &[Scalar], m: i64, b: &[Scalar]) -> Result<Vector> {
        let v = self.l.bracket(n, a, m, b)?;
        Ok(scale_vector(&sign(self.field(), n), &v))
    }

    /// Koszul sign of reordering `xs` (shifted degrees) as `I` then `J`.
    fn unshuffle_sign(&self, shifted: &[i64], mask_i: u32, positions: &[usize]) -> bool {
        let mut neg = false;
        for (a, &pa) in positions.iter().enumerate() {
            for &pb in &positions[a + 1..] {
                // pa < pb; an inversion when pa goes to J and pb to I.
                if mask_i & (1 << pb) != 0 && mask_i & (1 << pa) == 0 && odd(shifted[pa] * shifted[pb]) {
                    neg = !neg;
                }
            }
        }
        neg
    }

    /// `Σ_{S = I ⊔ J, min S ∈ I} ε Q(λ_I, λ_J)` and its degree in `L`.
    fn tree_sum(
        &self,
        s: u32,
        shifted: &[i64],
        memo: &mut BTreeMap<u32, (i64, Vector)>,
        inputs: &[(i64, Vector)],
    ) -> Result<(i64, Vector)> {
        let positions: Vec<usize> = (0..inputs.len()).filter(|p| s & (1 << p) != 0).collect();
        let first = positions[0];
        let deg: i64 = positions.iter().map(|&p| shifted[p]).sum::<i64>() + 1 + 1;
        let mut acc = zero_vector(self.field(), self.l.dim(deg));
        let rest: Vec<usize> = positions[1..].to_vec();
        for sub in 0u32..(1 << rest.len()) {
            let mut mask_i = 1u32 << first;
            for (k, &p) in rest.iter().enumerate() {
                if sub & (1 << k) != 0 {
                    mask_i |= 1 << p;
                }
            }
            let mask_j = s & !mask_i;
            if mask_j == 0 {
                continue;
            }
            let (ni, xi) = self.lambda(mask_i, shifted, memo, inputs)?;
            let (nj, xj) = self.lambda(mask_j, shifted, memo, inputs)?;
            let mut v = self.q2(ni, &xi, nj, &xj)?;
            if self.unshuffle_sign(shifted, mask_i, &positions) {
                v = scale_vector(&self.field().from_i64(-1), &v);
            }
            axpy(&mut acc, &self.field().one(), &v);
        }
        Ok((deg, acc))
    }

    fn lambda(
        &self,
        s: u32,
        shifted: &[i64],
        memo: &mut BTreeMap<u32, (i64, Vector)>,
        inputs: &[(i64, Vector)],
    ) -> Result<(i64, Vector)> {
        if let Some(v) = memo.get(&s) {
            return Ok(v.clone());
        }
        let out = if s.count_ones() == 1 {
            inputs[s.trailing_zeros() as usize].clone()
        } else {
            let (deg, v) = self.tree_sum(s, shifted, memo, inputs)?;
            if self.l.dim(deg) == 0 {
                (deg - 1, zero_vector(self.field(), self.l.dim(deg - 1)))
            } else {
                (deg - 1, self.c.homotopy(deg, &v)?)
            }
        };
        memo.insert(s, out.clone());
        Ok(out)
    }

    /// `ℓ_k` on the classes `xs`; returns the degree in `H` and the value.
    fn bracket(&self, xs: &[ClassIndex]) -> Result<(i64, Vector)> {
        let f = self.field();
        let inputs: Vec<(i64, Vector)> = xs
            .iter()
            .map(|&(n, i)| {
                let e = crate::linalg::unit_vector(f, self.c.betti(n), i);
                Ok((n, self.c.include(n, &e)?))
            })
            .collect::<Result<_>>()?;
        let shifted: Vec<i64> = xs.iter().map(|x| x.0 - 1).collect();
        let mut memo = BTreeMap::new();
        let full = (1u32 << xs.len()) - 1;
        let (deg, v) = self.tree_sum(full, &shifted, &mut memo, &inputs)?;
        if self.l.dim(deg) == 0 {
            return Ok((deg, Vec::new()));
        }
        Ok((deg, self.c.project(deg, &v)?))
    }
}

fn classes(c: &Contraction) -> Vec<ClassIndex> {
    c.betti.iter().flat_map(|(&n, &b)| (0..b).map(move |i| (n, i))).collect()
}

fn nondecreasing(items: &[ClassIndex], k: usize) -> Vec<Vec<ClassIndex>> {
    fn go(items: &[ClassIndex], k: usize, start: usize, cur: &mut Vec<ClassIndex>, out: &mut Vec<Vec<ClassIndex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// `ℓ_k(x_1, …, x_k)` for arbitrary (not necessarily sorted) classes.
pub fn transferred_bracket(l: &DgLie, c: &Contraction, xs: &[ClassIndex]) -> Result<(i64, Vector)> {
    if xs.len() < 2 || xs.len() > 4 {
        return Err(Error::ArityMismatch(format!("transferred brackets have arity 2..=4, got {}", xs.len())));
    }
    Transfer { l, c }.bracket(xs)
}

/// `ℓ_2, …, ℓ_{arity_max}` on all nondecreasing tuples of basis classes.
pub fn transferred_brackets(l: &DgLie, c: &Contraction, arity_max: usize) -> Result<TransferredBrackets> {
    if l.field().characteristic() != 0 {
        return Err(Error::Unsupported("homotopy transfer is only implemented over the rationals".into()));
    }
    if !(2..=4).contains(&arity_max) {
        return Err(Error::ArityMismatch(format!("arity must be between 2 and 4, got {arity_max}")));
    }
    let t = Transfer { l, c };
    let basis = classes(c);
    let mut out = TransferredBrackets {
        arity_max,
        brackets: BTreeMap::new(),
    };
    for k in 2..=arity_max {
        let mut m = BTreeMap::new();
        for xs in nondecreasing(&basis, k) {
            let (_, v) = t.bracket(&xs)?;
            if !is_zero_vector(&v) {
                m.insert(xs, v);
            }
        }
        out.brackets.insert(k, m);
    }
    Ok(out)
}

/// Checks the `L∞` relations with `ℓ_1 = 0`
/// `Σ_{i+j=n+1} Σ_σ ε(σ) ℓ_j(ℓ_i(x_σ(1..i)), x_σ(i+1..n)) = 0`
/// for `n = 3, 4` on all nondecreasing basis tuples, in the shifted
/// symmetric convention.
pub fn verify_linfinity(l: &DgLie, c: &Contraction) -> Result<VerificationReport> {
    let f = l.field();
    let t = Transfer { l, c };
    let basis = classes(c);
    let mut cache: BTreeMap<Vec<ClassIndex>, (i64, Vector)> = BTreeMap::new();
    let mut r = VerificationReport::default();
    for n in 3..=4 {
        let mut witness = None;
        'tuples: for xs in nondecreasing(&basis, n) {
            let shifted: Vec<i64> = xs.iter().map(|x| x.0 - 1).collect();
            let deg: i64 = shifted.iter().sum::<i64>() + 2 + 1;
            let mut acc = zero_vector(f, c.betti(deg));
            // inner arity i, outer arity n + 1 - i
            for i in 2..n {
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize != i {
                        continue;
                    }
                    let inner: Vec<ClassIndex> = (0..n).filter(|p| mask & (1 << p) != 0).map(|p| xs[p]).collect();
                    let outer: Vec<usize> = (0..n).filter(|p| mask & (1 << p) == 0).collect();
                    let (dn, v) = match cache.get(&inner) {
                        Some(x) => x.clone(),
                        None => {
                            let x = t.bracket(&inner)?;
                            cache.insert(inner.clone(), x.clone());
                            x
                        }
                    };
                    if is_zero_vector(&v) {
                        continue;
                    }
                    let positions: Vec<usize> = (0..n).collect();
                    let s = if t.unshuffle_sign(&shifted, mask, &positions) {
                        f.from_i64(-1)
                    } else {
                        f.one()
                    };
                    // Expand ℓ_j(v, x_outer...) in the basis of H^{dn}.
                    for (k, coef) in v.iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        let mut args = vec![(dn, k)];
                        args.extend(outer.iter().map(|&p| xs[p]));
                        let (_, w) = match cache.get(&args) {
                            Some(x) => x.clone(),
                            None => {
                                let x = t.bracket(&args)?;
                                cache.insert(args, x.clone());
                                x
                            }
                        };
                        if w.is_empty() {
                            continue;
                        }
                        axpy(&mut acc, &(&s * coef), &w);
                    }
                }
            }
            if !is_zero_vector(&acc) {
                witness = Some(format!("relation {n} fails on {xs:?}"));
                break 'tuples;
            }
        }
        r.push(format!("L-infinity relation with {n} inputs"), witness);
    }
    Ok(r)
}

/// `H^n` classes as a subspace check: the image of `q` restricted to cycles
/// is all of `H^n`.
pub fn projection_is_onto(l: &DgLie, c: &Contraction, n: i64) -> Result<bool> {
    let h = homology(&l.differential(n - 1), &l.differential(n))?;
    let q = c.projection.get(&n).cloned().unwrap_or_else(|| SparseMatrix::zeros(l.field(), 0, l.dim(n)));
    let images: Vec<Vector> = h.representatives.iter().map(|z| q.mul_vec(z)).collect::<Result<_>>()?;
    Ok(Subspace::span(l.field(), h.dim, &images)?.dim() == h.dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multivector::LieStructure;

    fn heisenberg() -> DgLie {
        let q = FieldSpec::Rationals;
        let h = LieStructure::from_brackets(q, 3, [((0, 1), vec![(2, q.from_i64(-1))])]).unwrap();
        let (_, d) = h.ce_model(&["e1", "e2", "e3"]).unwrap();
        let pi = crate::multivector::MultiVector::from_terms(q, 2, [(vec![0, 1], q.one())]).unwrap();
        DgLie::from_bv(&crate::bv::BVStructure::koszul(d, &pi).unwrap()).unwrap()
    }

    #[test]
    fn heisenberg_contraction() {
        let l = heisenberg();
        let c = build_contraction(&l).unwrap();
        assert!(c.verify(&l).unwrap().passed());
        assert!(projection_is_onto(&l, &c, 1).unwrap());
    }

    #[test]
    fn linfinity_relations_hold() {
        let l = heisenberg();
        let c = build_contraction(&l).unwrap();
        let t = transferred_brackets(&l, &c, 4).unwrap();
        let r = verify_linfinity(&l, &c).unwrap();
        assert!(r.passed(), "{r}\n{t:?}");
    }

    #[test]
    fn abelian_transfer_vanishes() {
        let q = FieldSpec::Rationals;
        let g = LieStructure::abelian(q, 2);
        let (_, d) = g.ce_model(&["a", "b"]).unwrap();
        let l = DgLie::tensor(&d, &LieStructure::abelian(q, 1)).unwrap();
        let c = build_contraction(&l).unwrap();
        let t = transferred_brackets(&l, &c, 4).unwrap();
        assert!((2..=4).all(|k| t.is_zero(k)));
    }
}
