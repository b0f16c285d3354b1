//! Finite dg-Lie algebras given by differential blocks and structure
//! constants on a graded basis.

use std::collections::BTreeMap;

use crate::algebra::Monomial;
use crate::bv::{verify_bv, BVStructure, BracketTable};
use crate::error::{Error, Result};
use crate::field::{sign, FieldSpec, Scalar};
use crate::linalg::{axpy, homology, is_zero_vector, zero_vector, Homology, SparseMatrix, Vector};
use crate::multivector::LieStructure;
use crate::operator::GradedOperator;

/// Basis element `i` of `L^n`.
pub type BasisIndex = (i64, usize);

/// A dg-Lie algebra with differential of degree +1 and bracket of degree 0.
///
/// Construction checks `∂² = 0`, graded antisymmetry, the graded Jacobi
/// identity and that `∂` is a derivation of the bracket on all basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLie {
    field: FieldSpec,
    dims: BTreeMap<i64, usize>,
    labels: BTreeMap<i64, Vec<String>>,
    /// `∂: L^n -> L^{n+1}` for every `n` with `L^n ≠ 0`.
    differential: BTreeMap<i64, SparseMatrix>,
    /// Nonzero brackets of basis elements, as coordinate vectors in `L^{n+m}`.
    brackets: BTreeMap<(BasisIndex, BasisIndex), Vector>,
}

impl DgLie {
    pub fn new(
        field: FieldSpec,
        labels: BTreeMap<i64, Vec<String>>,
        differential: BTreeMap<i64, SparseMatrix>,
        brackets: BTreeMap<(BasisIndex, BasisIndex), Vector>,
    ) -> Result<Self> {
        let labels: BTreeMap<i64, Vec<String>> = labels.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let dims: BTreeMap<i64, usize> = labels.iter().map(|(n, v)| (*n, v.len())).collect();
        let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
        let mut blocks = BTreeMap::new();
        for (&n, &k) in &dims {
            let m = differential
                .get(&n)
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zeros(field, dim(n + 1), k));
            if m.field() != field {
                return Err(Error::FieldMismatch(format!("differential block in degree {n}")));
            }
            if m.rows() != dim(n + 1) || m.cols() != k {
                return Err(Error::DimensionMismatch(format!(
                    "differential block in degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dim(n + 1),
                    k
                )));
            }
            blocks.insert(n, m);
        }
        for (n, m) in &differential {
            if !dims.contains_key(n) && !m.is_zero() {
                return Err(Error::DimensionMismatch(format!("differential given on empty degree {n}")));
            }
        }
        let mut clean = BTreeMap::new();
        for (((n, i), (m, j)), v) in brackets {
            if i >= dim(n) || j >= dim(m) || v.len() != dim(n + m) {
                return Err(Error::DimensionMismatch(format!(
                    "bracket of ({n},{i}) and ({m},{j}) has the wrong shape"
                )));
            }
            if v.iter().any(|c| c.field() != field) {
                return Err(Error::FieldMismatch("bracket coefficient".into()));
            }
            if !is_zero_vector(&v) {
                clean.insert(((n, i), (m, j)), v);
            }
        }
        let l = DgLie {
            field,
            dims,
            labels,
            differential: blocks,
            brackets: clean,
        };
        l.check()?;
        Ok(l)
    }

    /// The derived bracket of a BV algebra with the shift `L^n = A^{n+1}`;
    /// `∂ = d`. Requires [`verify_bv`] to pass.
    pub fn from_bv(b: &BVStructure) -> Result<Self> {
        Self::from_bv_filtered(b, |_| true)
    }

    /// The sub-dg-Lie algebra spanned by monomials of first bidegree
    /// `column`. Rejects inputs where `d` or the bracket leave the column.
    pub fn from_bv_column(b: &BVStructure, column: i64) -> Result<Self> {
        let a = b.algebra().clone();
        if !a.is_bigraded() {
            return Err(Error::Precondition("column restriction needs a bigraded algebra".into()));
        }
        Self::from_bv_filtered(b, move |m| a.monomial_bidegree(m).map(|(p, _)| p) == Some(column))
    }

    fn from_bv_filtered(b: &BVStructure, keep: impl Fn(&Monomial) -> bool) -> Result<Self> {
        let report = verify_bv(b);
        if let Some(c) = report.failures().next() {
            return Err(Error::Precondition(format!(
                "not a BV algebra: {} ({})",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        let a = b.algebra();
        let field = a.field();
        // kept[n] lists (position in A^{n+1}, monomial) for L^n.
        let mut kept: BTreeMap<i64, Vec<(usize, Monomial)>> = BTreeMap::new();
        for deg in a.degrees() {
            let v: Vec<(usize, Monomial)> = a
                .basis(deg)
                .iter()
                .enumerate()
                .filter(|(_, m)| keep(m))
                .map(|(i, m)| (i, m.clone()))
                .collect();
            if !v.is_empty() {
                kept.insert(deg - 1, v);
            }
        }
        let restrict = |n: i64, x: &crate::algebra::Element, what: &str| -> Result<Vector> {
            let target = kept.get(&n).map(Vec::as_slice).unwrap_or(&[]);
            let mut out = zero_vector(field, target.len());
            let mut hit = 0;
            for (k, (_, m)) in target.iter().enumerate() {
                let c = x.coefficient(m);
                if !c.is_zero() {
                    hit += 1;
                }
                out[k] = c;
            }
            if hit != x.terms().count() {
                return Err(Error::Precondition(format!("{what} leaves the chosen subspace: {x}")));
            }
            Ok(out)
        };
        let mut labels = BTreeMap::new();
        let mut differential = BTreeMap::new();
        for (&n, basis) in &kept {
            labels.insert(n, basis.iter().map(|(_, m)| a.format_monomial(m)).collect());
            let cols: Vec<Vector> = basis
                .iter()
                .map(|(_, m)| restrict(n + 1, &b.d().apply_monomial(m), "d"))
                .collect::<Result<_>>()?;
            let rows = kept.get(&(n + 1)).map_or(0, Vec::len);
            differential.insert(n, SparseMatrix::from_columns(field, rows, &cols));
        }
        let table = BracketTable::new(b)?;
        let mut brackets = BTreeMap::new();
        for (&n, xs) in &kept {
            for (&m, ys) in &kept {
                for (i, (_, x)) in xs.iter().enumerate() {
                    for (j, (_, y)) in ys.iter().enumerate() {
                        let v = table.monomials(x, y);
                        if v.is_zero() {
                            continue;
                        }
                        brackets.insert(((n, i), (m, j)), restrict(n + m, &v, "the bracket")?);
                    }
                }
            }
        }
        Self::new(field, labels, differential, brackets)
    }

    /// `C(g) ⊗ h`: a Chevalley–Eilenberg cdga tensored with a Lie algebra
    /// in degree 0, with `[ω⊗x, η⊗y] = ωη ⊗ [x,y]` and `∂ = d ⊗ 1`.
    pub fn tensor(d: &GradedOperator, h: &LieStructure) -> Result<Self> {
        Self::twisted_tensor(d, h, None)
    }

    /// Chevalley–Eilenberg cochains `C(g; g)` with adjoint coefficients.
    pub fn adjoint_cochains(g: &LieStructure) -> Result<Self> {
        let iota: Vec<Vector> = (0..g.dim()).map(|i| crate::linalg::unit_vector(g.field(), g.dim(), i)).collect();
        Self::cochains(g, g, &iota)
    }

    /// Chevalley–Eilenberg cochains `C(g; h)` where `X_i ∈ g` acts on `h`
    /// by `ad(ι(X_i))` for a Lie homomorphism `ι: g -> h` given by the
    /// images `iota[i]`: `∂(ω⊗x) = dω⊗x + Σ_i e^i ω ⊗ [ι(X_i), x]` and
    /// `[ω⊗x, η⊗y] = ωη ⊗ [x,y]`. A non-homomorphism fails the `∂² = 0`
    /// check.
    pub fn cochains(g: &LieStructure, h: &LieStructure, iota: &[Vector]) -> Result<Self> {
        if iota.len() != g.dim() || iota.iter().any(|v| v.len() != h.dim()) {
            return Err(Error::DimensionMismatch("iota needs one vector of h per basis element of g".into()));
        }
        let names: Vec<String> = (1..=g.dim()).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let (_, d) = g.ce_model(&refs)?;
        Self::twisted_tensor(&d, h, Some(iota))
    }

    /// With `iota`, the degree-1 generators of `d` are dual to a Lie algebra
    /// acting on `h` through `ad ∘ ι`.
    fn twisted_tensor(d: &GradedOperator, h: &LieStructure, iota: Option<&[Vector]>) -> Result<Self> {
        let a = d.algebra();
        let field = a.field();
        if h.field() != field {
            return Err(Error::FieldMismatch("cdga and Lie algebra".into()));
        }
        if d.degree() != 1 {
            return Err(Error::DegreeMismatch("the cdga differential must have degree 1".into()));
        }
        let k = h.dim();
        let index = |pos: usize, x: usize| pos * k + x;
        let mut labels = BTreeMap::new();
        let mut differential = BTreeMap::new();
        for n in a.degrees() {
            let mut names = Vec::new();
            for m in a.basis(n) {
                for x in 0..k {
                    names.push(format!("{} (x) x{}", a.format_monomial(m), x + 1));
                }
            }
            labels.insert(n, names);
            let dn = d.block(n);
            let mut big = SparseMatrix::zeros(field, a.dim(n + 1) * k, a.dim(n) * k);
            for (r, c, v) in dn.entries() {
                for x in 0..k {
                    big.set(index(r, x), index(c, x), v.clone());
                }
            }
            if let Some(iota) = iota {
                if a.num_generators() != iota.len() || a.generators().iter().any(|x| x.degree != 1) {
                    return Err(Error::Precondition("twisted coefficients need a CE algebra".into()));
                }
                for (c, w) in a.basis(n).iter().enumerate() {
                    for (i, v) in iota.iter().enumerate() {
                        let mut ei = Monomial::unit(a.num_generators());
                        ei.0[i] = 1;
                        let Some((neg, prod)) = a.multiply_monomials(&ei, w) else {
                            continue;
                        };
                        let (_, r) = a.position(&prod).expect("basis monomial");
                        for (j, cj) in v.iter().enumerate() {
                            if cj.is_zero() {
                                continue;
                            }
                            for x in 0..k {
                                for (z, coef) in h.bracket_basis(j, x).terms() {
                                    let val = cj * coef;
                                    big.add_to(index(r, z[0]), index(c, x), &if neg { -&val } else { val });
                                }
                            }
                        }
                    }
                }
            }
            differential.insert(n, big);
        }
        let mut brackets = BTreeMap::new();
        for n in a.degrees() {
            for m in a.degrees() {
                for (pi, u) in a.basis(n).iter().enumerate() {
                    for (pj, w) in a.basis(m).iter().enumerate() {
                        let Some((neg, uw)) = a.multiply_monomials(u, w) else {
                            continue;
                        };
                        let (_, pos) = a.position(&uw).expect("product of basis monomials");
                        for x in 0..k {
                            for y in 0..k {
                                let br = h.bracket_basis(x, y);
                                if br.is_zero() {
                                    continue;
                                }
                                let mut v = zero_vector(field, a.dim(n + m) * k);
                                for (z, c) in br.terms() {
                                    v[index(pos, z[0])] = if neg { -c } else { c.clone() };
                                }
                                brackets.insert(((n, index(pi, x)), (m, index(pj, y))), v);
                            }
                        }
                    }
                }
            }
        }
        Self::new(field, labels, differential, brackets)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Degrees with `L^n ≠ 0`.
    pub fn degrees(&self) -> Vec<i64> {
        self.dims.keys().copied().collect()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn labels(&self, n: i64) -> &[String] {
        self.labels.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `∂: L^n -> L^{n+1}` (a zero matrix outside the support).
    pub fn differential(&self, n: i64) -> SparseMatrix {
        self.differential
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.field, self.dim(n + 1), self.dim(n)))
    }

    pub fn differential_blocks(&self) -> &BTreeMap<i64, SparseMatrix> {
        &self.differential
    }

    pub fn structure_constants(&self) -> &BTreeMap<(BasisIndex, BasisIndex), Vector> {
        &self.brackets
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    pub fn apply_differential(&self, n: i64, x: &[Scalar]) -> Result<Vector> {
        self.differential(n).mul_vec(x)
    }

    /// `[x, y]` for `x ∈ L^n`, `y ∈ L^m`.
    pub fn bracket(&self, n: i64, x: &[Scalar], m: i64, y: &[Scalar]) -> Result<Vector> {
        if x.len() != self.dim(n) || y.len() != self.dim(m) {
            return Err(Error::DimensionMismatch(format!(
                "bracket arguments of length {} and {} in degrees {n} and {m}",
                x.len(),
                y.len()
            )));
        }
        let mut out = zero_vector(self.field, self.dim(n + m));
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, e) in y.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                if let Some(v) = self.brackets.get(&((n, i), (m, j))) {
                    axpy(&mut out, &(c * e), v);
                }
            }
        }
        Ok(out)
    }

    pub fn basis_vector(&self, n: i64, i: usize) -> Vector {
        crate::linalg::unit_vector(self.field, self.dim(n), i)
    }

    /// `H^n = Ker ∂_n / Im ∂_{n-1}`.
    pub fn homology(&self, n: i64) -> Result<Homology> {
        homology(&self.differential(n - 1), &self.differential(n))
    }

    pub fn betti(&self) -> Result<BTreeMap<i64, usize>> {
        self.degrees().into_iter().map(|n| Ok((n, self.homology(n)?.dim))).collect()
    }

    /// Converts every coefficient into `field` (for reduction modulo a prime).
    pub fn map_into(&self, field: FieldSpec) -> Result<DgLie> {
        let conv = |v: &Vector| -> Result<Vector> { v.iter().map(|c| field.convert(c)).collect() };
        let differential = self
            .differential
            .iter()
            .map(|(n, m)| Ok((*n, m.map_entries(field, |c| field.convert(c))?)))
            .collect::<Result<_>>()?;
        let brackets = self
            .brackets
            .iter()
            .map(|(k, v)| Ok((*k, conv(v)?)))
            .collect::<Result<_>>()?;
        DgLie::new(field, self.labels.clone(), differential, brackets)
    }

    pub fn reduce_mod(&self, p: u64) -> Result<DgLie> {
        self.map_into(FieldSpec::prime_field(p)?)
    }

    fn basis(&self) -> Vec<BasisIndex> {
        self.dims.iter().flat_map(|(&n, &k)| (0..k).map(move |i| (n, i))).collect()
    }

    fn label(&self, (n, i): BasisIndex) -> String {
        self.labels[&n][i].clone()
    }

    /// The first failing construction check, with a witness tuple.
    pub fn construction_witness(&self) -> Option<Error> {
        let f = self.field;
        for (&n, d) in &self.differential {
            if let Some(next) = self.differential.get(&(n + 1)) {
                if !next.mul(d).map(|m| m.is_zero()).unwrap_or(false) {
                    return Some(Error::NotAComplex(format!("∂² is nonzero on degree {n}")));
                }
            }
        }
        let basis = self.basis();
        let e = |(n, i): BasisIndex| self.basis_vector(n, i);
        let br = |x: BasisIndex, y: BasisIndex| -> Vector {
            self.brackets
                .get(&(x, y))
                .cloned()
                .unwrap_or_else(|| zero_vector(f, self.dim(x.0 + y.0)))
        };
        for &x in &basis {
            for &y in &basis {
                let s = sign(f, x.0 * y.0);
                let lhs = br(x, y);
                let rhs = br(y, x);
                if lhs.iter().zip(&rhs).any(|(a, b)| !(a + &(&s * b)).is_zero()) {
                    return Some(Error::JacobiFailure(format!(
                        "antisymmetry fails on ({}, {})",
                        self.label(x),
                        self.label(y)
                    )));
                }
                // ∂[x,y] = [∂x,y] + (-1)^n [x,∂y]
                let left = self.apply_differential(x.0 + y.0, &lhs).expect("shapes");
                let dx = self.apply_differential(x.0, &e(x)).expect("shapes");
                let dy = self.apply_differential(y.0, &e(y)).expect("shapes");
                let mut right = self.bracket(x.0 + 1, &dx, y.0, &e(y)).expect("shapes");
                let t = self.bracket(x.0, &e(x), y.0 + 1, &dy).expect("shapes");
                axpy(&mut right, &sign(f, x.0), &t);
                if left != right {
                    return Some(Error::JacobiFailure(format!(
                        "∂ is not a derivation on ({}, {})",
                        self.label(x),
                        self.label(y)
                    )));
                }
            }
        }
        // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
        for &x in &basis {
            for &y in &basis {
                let xy = br(x, y);
                for &z in &basis {
                    let target = self.dim(x.0 + y.0 + z.0);
                    if target == 0 {
                        continue;
                    }
                    let yz = br(y, z);
                    let xz = br(x, z);
                    if is_zero_vector(&xy) && is_zero_vector(&yz) && is_zero_vector(&xz) {
                        continue;
                    }
                    let lhs = self.bracket(x.0, &e(x), y.0 + z.0, &yz).expect("shapes");
                    let mut rhs = self.bracket(x.0 + y.0, &xy, z.0, &e(z)).expect("shapes");
                    let t = self.bracket(y.0, &e(y), x.0 + z.0, &xz).expect("shapes");
                    axpy(&mut rhs, &sign(f, x.0 * y.0), &t);
                    if lhs != rhs {
                        return Some(Error::JacobiFailure(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.label(x),
                            self.label(y),
                            self.label(z)
                        )));
                    }
                }
            }
        }
        None
    }

    fn check(&self) -> Result<()> {
        match self.construction_witness() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Formats a vector of `L^n` in the basis labels.
    pub fn format_vector(&self, n: i64, v: &[Scalar]) -> String {
        let mut out = String::new();
        for (c, name) in v.iter().zip(self.labels(n)).filter(|(c, _)| !c.is_zero()) {
            let neg = c.is_negative();
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            let mag = c.abs();
            if mag.is_one() {
                out.push_str(name);
            } else {
                out.push_str(&format!("{mag} {name}"));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multivector::MultiVector;

    fn heisenberg_bv() -> BVStructure {
        let q = FieldSpec::Rationals;
        let h = LieStructure::from_brackets(q, 3, [((0, 1), vec![(2, q.from_i64(-1))])]).unwrap();
        let (_, d) = h.ce_model(&["e1", "e2", "e3"]).unwrap();
        let pi = MultiVector::from_terms(q, 2, [(vec![0, 1], q.one())]).unwrap();
        BVStructure::koszul(d, &pi).unwrap()
    }

    #[test]
    fn heisenberg_dg_lie() {
        let b = heisenberg_bv();
        let l = DgLie::from_bv(&b).unwrap();
        assert_eq!(l.dim(-1), 1);
        assert_eq!(l.dim(1), 3);
        assert!(!l.is_abelian());
        let betti: Vec<usize> = l.betti().unwrap().into_values().collect();
        assert_eq!(betti, vec![1, 2, 2, 1]);
    }

    #[test]
    fn tensor_with_nonabelian_lie() {
        let q = FieldSpec::Rationals;
        let g = LieStructure::abelian(q, 2);
        let (_, d) = g.ce_model(&["a", "b"]).unwrap();
        let h = LieStructure::from_brackets(q, 2, [((0, 1), vec![(1, q.one())])]).unwrap();
        let l = DgLie::tensor(&d, &h).unwrap();
        assert_eq!(l.dim(1), 4);
        assert_eq!(l.dim(2), 2);
        let x = l.basis_vector(1, 0);
        let y = l.basis_vector(1, 3);
        // [a⊗x1, b⊗x2] = ab ⊗ x2
        assert_eq!(l.bracket(1, &x, 1, &y).unwrap(), l.basis_vector(2, 1));
    }

    #[test]
    fn broken_jacobi_rejected() {
        let q = FieldSpec::Rationals;
        let mut labels = BTreeMap::new();
        labels.insert(0, vec!["x".to_string(), "y".to_string(), "z".to_string()]);
        let mut br = BTreeMap::new();
        let v = |i: usize| crate::linalg::unit_vector(q, 3, i);
        // [x,y] = x, [y,x] = -x, [y,z] = y, [z,y] = -y, [x,z] = 0 violates Jacobi.
        br.insert(((0, 0), (0, 1)), v(0));
        br.insert(((0, 1), (0, 0)), crate::linalg::scale_vector(&q.from_i64(-1), &v(0)));
        br.insert(((0, 1), (0, 2)), v(1));
        br.insert(((0, 2), (0, 1)), crate::linalg::scale_vector(&q.from_i64(-1), &v(1)));
        let err = DgLie::new(q, labels, BTreeMap::new(), br).unwrap_err();
        assert!(matches!(err, Error::JacobiFailure(_)));
    }
}
