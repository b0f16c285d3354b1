//! The negative cyclic complex `(A[u]/u^{M+1}, d + uΔ)`, the spectral
//! sequence of its `u`-adic filtration, and the two degeneration criteria.
//!
//! `u` has degree +2, so total degree `n` collects `A^{n-2j} u^j`. The
//! filtration `F^p` is spanned by the `u^j` pieces with `j ≥ p`; pages are
//! `E_r^{p,n} = Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1})` with
//! `Z_r^p = F^p ∩ D^{-1}(F^{p+r})`.

use std::collections::{BTreeMap, HashMap};

use crate::bv::BVStructure;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{homology, quotient_basis, rank, Homology, SparseMatrix, Subspace, Vector};
use crate::operator::GradedOperator;

/// Environment variable overriding the largest truncation tried.
pub const MAX_U_ENV: &str = "BTT_MAX_U";
const DEFAULT_MAX_U: usize = 24;

/// Bidegree `(p, n)`: filtration index and total degree.
pub type Bidegree = (usize, i64);

#[derive(Clone, Debug)]
pub struct NegativeCyclicComplex {
    field: FieldSpec,
    truncation: usize,
    min_degree: i64,
    max_degree: i64,
    /// Per total degree: `(j, offset, dim A^{n-2j})` for each `u`-power.
    layout: BTreeMap<i64, Vec<(usize, usize, usize)>>,
    /// Per total degree `n`: `D: T^n -> T^{n+1}`.
    differential: BTreeMap<i64, SparseMatrix>,
}

/// Checks that `b` is classical with `d² = 0`, `Δ² = 0` and `[d, Δ] = 0`.
pub fn check_square_zero(b: &BVStructure) -> Result<()> {
    if !b.is_classical() {
        return Err(Error::Precondition(
            "needs a classical BV structure; higher deltas are nonzero".into(),
        ));
    }
    let d = b.d();
    let delta = b.delta1();
    let checks: [(&str, GradedOperator); 3] = [
        ("d^2", d.compose(d)?),
        ("delta^2", delta.compose(&delta)?),
        ("[d, delta]", d.commutator(&delta)?),
    ];
    for (name, op) in checks {
        if !op.is_zero() {
            return Err(Error::Precondition(format!("{name} is nonzero")));
        }
    }
    Ok(())
}

impl NegativeCyclicComplex {
    pub fn build(b: &BVStructure, truncation: usize) -> Result<Self> {
        check_square_zero(b)?;
        let a = b.algebra();
        let field = a.field();
        let d = b.d();
        let delta = b.delta1();
        let m = truncation as i64;
        let min_degree = a.min_degree();
        let max_degree = a.max_degree() + 2 * m;
        let mut layout = BTreeMap::new();
        for n in min_degree - 1..=max_degree + 1 {
            let mut blocks = Vec::new();
            let mut offset = 0;
            for j in 0..=truncation {
                let dim = a.dim(n - 2 * j as i64);
                blocks.push((j, offset, dim));
                offset += dim;
            }
            layout.insert(n, blocks);
        }
        let mut differential = BTreeMap::new();
        for n in min_degree - 1..=max_degree {
            let src = &layout[&n];
            let dst = &layout[&(n + 1)];
            let rows = dst.iter().map(|b| b.2).sum();
            let cols = src.iter().map(|b| b.2).sum();
            let mut mat = SparseMatrix::zeros(field, rows, cols);
            for &(j, off, dim) in src {
                if dim == 0 {
                    continue;
                }
                let deg = n - 2 * j as i64;
                let db = d.block(deg);
                let (_, toff, _) = dst[j];
                for (r, c, v) in db.entries() {
                    mat.set(toff + r, off + c, v.clone());
                }
                if j < truncation {
                    let xb = delta.block(deg);
                    let (_, toff, _) = dst[j + 1];
                    for (r, c, v) in xb.entries() {
                        mat.add_to(toff + r, off + c, v);
                    }
                }
            }
            differential.insert(n, mat);
        }
        let c = NegativeCyclicComplex {
            field,
            truncation,
            min_degree,
            max_degree,
            layout,
            differential,
        };
        for n in min_degree - 1..max_degree {
            if !c.differential[&(n + 1)].mul(&c.differential[&n])?.is_zero() {
                return Err(Error::Invariant(format!("(d + u delta)^2 is nonzero in degree {n}")));
            }
        }
        Ok(c)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Total degrees that can carry nonzero chains.
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree..=self.max_degree
    }

    pub fn dim(&self, n: i64) -> usize {
        self.layout.get(&n).map_or(0, |l| l.iter().map(|b| b.2).sum())
    }

    /// `(u-power, dimension)` of each summand of `T^n`.
    pub fn summands(&self, n: i64) -> Vec<(usize, usize)> {
        self.layout
            .get(&n)
            .map_or_else(Vec::new, |l| l.iter().map(|&(j, _, d)| (j, d)).collect())
    }

    pub fn differential(&self, n: i64) -> SparseMatrix {
        self.differential
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.field, self.dim(n + 1), self.dim(n)))
    }

    /// Coordinates of `T^n` belonging to `F^p`.
    fn filtration_coords(&self, p: usize, n: i64) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(l) = self.layout.get(&n) {
            for &(j, off, dim) in l {
                if j >= p {
                    out.extend(off..off + dim);
                }
            }
        }
        out
    }

    fn filtration(&self, p: usize, n: i64) -> Subspace {
        let dim = self.dim(n);
        let coords = self.filtration_coords(p, n);
        let basis: Vec<Vector> = coords
            .iter()
            .map(|&i| crate::linalg::unit_vector(self.field, dim, i))
            .collect();
        Subspace::span(self.field, dim, &basis).expect("unit vectors have the right length")
    }

    /// `Z_r^p = F^p ∩ D^{-1}(F^{p+r})` in degree `n`, with `F^q = T` for
    /// `q < 0`; `r = -1` gives `F^p`.
    fn z(&self, r: i64, p: i64, n: i64) -> Subspace {
        let dim = self.dim(n);
        let source = p.max(0) as usize;
        if r < 0 {
            return self.filtration(source, n);
        }
        let target = (p + r).max(0) as usize;
        let cols = self.filtration_coords(source, n);
        if cols.is_empty() {
            return Subspace::zero(self.field, dim);
        }
        let dmat = self.differential(n);
        let high: std::collections::HashSet<usize> =
            self.filtration_coords(target, n + 1).into_iter().collect();
        let rows: Vec<usize> = (0..dmat.rows()).filter(|i| !high.contains(i)).collect();
        let sub = dmat.submatrix(&rows, &cols);
        let kernel = crate::linalg::kernel_basis(&sub);
        let embedded: Vec<Vector> = kernel
            .into_iter()
            .map(|k| {
                let mut v = crate::linalg::zero_vector(self.field, dim);
                for (x, &c) in k.into_iter().zip(&cols) {
                    v[c] = x;
                }
                v
            })
            .collect();
        Subspace::span(self.field, dim, &embedded).expect("consistent lengths")
    }

    fn image_of(&self, s: &Subspace, n: i64) -> Subspace {
        let dmat = self.differential(n);
        let imgs: Vec<Vector> = s
            .basis()
            .iter()
            .map(|v| dmat.mul_vec(v).expect("shape"))
            .collect();
        Subspace::span(self.field, self.dim(n + 1), &imgs).expect("consistent lengths")
    }

    pub fn homology(&self, n: i64) -> Result<Homology> {
        homology(&self.differential(n - 1), &self.differential(n))
    }
}

/// One page of the spectral sequence with subquotient representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    /// Page index; `None` for `E_∞`.
    pub r: Option<usize>,
    pub dims: BTreeMap<Bidegree, usize>,
    pub bases: BTreeMap<Bidegree, Vec<Vector>>,
}

impl SpectralPage {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn dim(&self, bd: Bidegree) -> usize {
        self.dims.get(&bd).copied().unwrap_or(0)
    }

    pub fn total_in_degree(&self, n: i64) -> usize {
        self.dims.iter().filter(|((_, m), _)| *m == n).map(|(_, d)| d).sum()
    }
}

struct PageCache<'a> {
    c: &'a NegativeCyclicComplex,
    z: HashMap<(i64, i64, i64), Subspace>,
}

impl PageCache<'_> {
    fn z(&mut self, r: i64, p: i64, n: i64) -> Subspace {
        let c = self.c;
        let key = if r < 0 { (p.max(0), -1, n) } else { (p.max(0), (p + r).max(0), n) };
        self.z.entry(key).or_insert_with(|| c.z(r, p, n)).clone()
    }

    fn page(&mut self, r: usize) -> SpectralPage {
        let c = self.c;
        let ri = r as i64;
        let mut dims = BTreeMap::new();
        let mut bases = BTreeMap::new();
        for n in c.degrees() {
            for p in 0..=c.truncation {
                let pi = p as i64;
                let num = self.z(ri, pi, n);
                if num.dim() == 0 {
                    continue;
                }
                let z_up = if p < c.truncation {
                    self.z(ri - 1, pi + 1, n)
                } else {
                    Subspace::zero(c.field, c.dim(n))
                };
                let src = self.z(ri - 1, pi - ri + 1, n - 1);
                let bnd = c.image_of(&src, n - 1);
                let den = z_up.sum(&bnd).expect("same ambient");
                let reps = quotient_basis(&den, &num.basis()).expect("same ambient");
                if !reps.is_empty() {
                    dims.insert((p, n), reps.len());
                    bases.insert((p, n), reps);
                }
            }
        }
        SpectralPage {
            r: Some(r),
            dims,
            bases,
        }
    }
}

/// Pages `E_0, …, E_{M+2}`; the last one equals `E_∞`.
pub fn spectral_pages(c: &NegativeCyclicComplex) -> Vec<SpectralPage> {
    let mut cache = PageCache { c, z: HashMap::new() };
    (0..=c.truncation + 2).map(|r| cache.page(r)).collect()
}

/// A single page.
pub fn spectral_page(c: &NegativeCyclicComplex, r: usize) -> SpectralPage {
    PageCache { c, z: HashMap::new() }.page(r)
}

/// `E_∞^{p,n} = (F^p ∩ ker D) / (F^{p+1} ∩ ker D + F^p ∩ im D)`, computed
/// directly from cycles and boundaries.
pub fn e_infinity(c: &NegativeCyclicComplex) -> SpectralPage {
    let mut dims = BTreeMap::new();
    let mut bases = BTreeMap::new();
    for n in c.degrees() {
        let cycles = Subspace::kernel(&c.differential(n));
        let bounds = Subspace::image(&c.differential(n - 1));
        for p in 0..=c.truncation {
            let fp = c.filtration(p, n);
            let num = fp.intersection(&cycles).expect("same ambient");
            if num.dim() == 0 {
                continue;
            }
            let up = c.filtration(p + 1, n).intersection(&cycles).expect("same ambient");
            let den = up.sum(&fp.intersection(&bounds).expect("same ambient")).expect("same ambient");
            let reps = quotient_basis(&den, &num.basis()).expect("same ambient");
            if !reps.is_empty() {
                dims.insert((p, n), reps.len());
                bases.insert((p, n), reps);
            }
        }
    }
    SpectralPage { r: None, dims, bases }
}

/// Index of the first page whose dimensions agree with `E_∞` everywhere.
pub fn stabilization_index(pages: &[SpectralPage], e_inf: &SpectralPage) -> Option<usize> {
    pages.iter().position(|p| p.dims == e_inf.dims)
}

/// The operator induced by `Δ` on `H(A, d)`, one matrix per source degree
/// (`H^n -> H^{n-1}`), in the echelon homology bases.
pub fn delta_on_homology(b: &BVStructure) -> Result<BTreeMap<i64, SparseMatrix>> {
    let a = b.algebra();
    let d = b.d();
    let delta = b.delta1();
    let mut homs = BTreeMap::new();
    for n in a.min_degree() - 1..=a.max_degree() + 1 {
        homs.insert(n, homology(&d.block(n - 1), &d.block(n))?);
    }
    let mut out = BTreeMap::new();
    for n in a.degrees() {
        let src = &homs[&n];
        let dst = &homs[&(n - 1)];
        let blk = delta.block(n);
        let cols: Vec<Vector> = src
            .representatives
            .iter()
            .map(|z| dst.coordinates(&blk.mul_vec(z)?))
            .collect::<Result<_>>()?;
        out.insert(n, SparseMatrix::from_columns(a.field(), dst.dim, &cols));
    }
    Ok(out)
}

/// First degree where the induced `Δ` on `H(A,d)` is nonzero.
pub fn d1_witness(b: &BVStructure) -> Result<Option<String>> {
    for (n, m) in delta_on_homology(b)? {
        if !m.is_zero() {
            return Ok(Some(format!(
                "delta induces a nonzero map H^{n} -> H^{} of rank {}",
                n - 1,
                rank(&m)
            )));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// Evidence for an `E_1`-degeneration verdict at a fixed truncation.
#[derive(Clone, Debug)]
pub struct DegenerationCertificate {
    pub verdict: Verdict,
    pub truncation: usize,
    pub e1: BTreeMap<Bidegree, usize>,
    pub e_infinity: BTreeMap<Bidegree, usize>,
    /// First bidegree where `E_∞ < E_1`.
    pub witness: Option<String>,
    /// Nonzero induced `Δ` on `H(A, d)`, if any.
    pub d1_witness: Option<String>,
    /// `(M, degenerates at M)` for every truncation tried.
    pub attempts: Vec<(usize, bool)>,
}

fn max_u() -> usize {
    std::env::var(MAX_U_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_U)
}

/// Starting truncation: `⌈D/2⌉ + 1` for the effective top degree `D`
/// (degree cap, or the span of the algebra when that is larger).
pub fn initial_truncation(b: &BVStructure) -> usize {
    let a = b.algebra();
    let cap = a.degree_cap().min(a.max_degree()).max(0);
    let span = a.degree_span().max(cap);
    ((span + 1) / 2 + 1) as usize
}

fn degenerates_at(b: &BVStructure, m: usize) -> Result<(bool, SpectralPage, SpectralPage)> {
    let c = NegativeCyclicComplex::build(b, m)?;
    let e1 = spectral_page(&c, 1);
    let einf = e_infinity(&c);
    Ok((e1.dims == einf.dims, e1, einf))
}

/// Runs `f` at `M` and `M+1` from the initial truncation upwards until two
/// consecutive answers agree, up to the configured cap.
fn stabilize<T>(b: &BVStructure, mut f: impl FnMut(usize) -> Result<(bool, T)>) -> Result<(Verdict, usize, Vec<(usize, bool)>, T)> {
    let cap = max_u();
    let mut m = initial_truncation(b);
    let mut attempts = Vec::new();
    let (mut prev, mut last) = f(m)?;
    attempts.push((m, prev));
    loop {
        if m + 1 > cap.max(initial_truncation(b) + 1) {
            return Ok((Verdict::Inconclusive, m, attempts, last));
        }
        let (next, data) = f(m + 1)?;
        attempts.push((m + 1, next));
        if next == prev {
            return Ok((Verdict::from_bool(next), m + 1, attempts, data));
        }
        m += 1;
        prev = next;
        last = data;
    }
}

/// Decides `E_1`-degeneration by comparing `E_1` and `E_∞` in every bidegree
/// at two consecutive truncations.
pub fn degenerates_at_e1(b: &BVStructure) -> Result<DegenerationCertificate> {
    check_square_zero(b)?;
    let (verdict, m, attempts, (e1, einf)) = stabilize(b, |m| {
        let (ok, e1, einf) = degenerates_at(b, m)?;
        Ok((ok, (e1, einf)))
    })?;
    let witness = e1.dims.iter().find_map(|(&(p, n), &d)| {
        let e = einf.dim((p, n));
        (e < d).then(|| format!("E_1^({p},{n}) has dimension {d} but E_inf has {e}"))
    });
    Ok(DegenerationCertificate {
        verdict,
        truncation: m,
        e1: e1.dims,
        e_infinity: einf.dims,
        witness,
        d1_witness: d1_witness(b)?,
        attempts,
    })
}

/// Module-theoretic data of `H(A[u]/u^{M+1}, d + uΔ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub free: bool,
    pub truncation: usize,
    /// `Σ_n dim H^n`.
    pub length: usize,
    /// `dim H / uH`.
    pub generators: usize,
    /// A degree carrying `u`-torsion beyond `u^M H`.
    pub torsion_witness: Option<String>,
}

/// Freeness over `K[u]/u^{M+1}`: the length equals `(M+1) · dim(H/uH)`.
pub fn u_freeness(b: &BVStructure, m: usize) -> Result<FreenessReport> {
    let c = NegativeCyclicComplex::build(b, m)?;
    let field = c.field();
    let mut homs = BTreeMap::new();
    for n in c.min_degree - 2 * (m as i64) - 2..=c.max_degree + 2 {
        homs.insert(n, c.homology(n)?);
    }
    // Multiplication by u as a matrix T^n -> T^{n+2}.
    let u_map = |n: i64| -> SparseMatrix {
        let src = &c.layout[&n];
        let dst = &c.layout[&(n + 2)];
        let rows: usize = dst.iter().map(|x| x.2).sum();
        let cols: usize = src.iter().map(|x| x.2).sum();
        let mut mat = SparseMatrix::zeros(field, rows, cols);
        for &(j, off, dim) in src {
            if j < m {
                let (_, toff, tdim) = dst[j + 1];
                debug_assert_eq!(dim, tdim);
                for i in 0..dim {
                    mat.set(toff + i, off + i, field.one());
                }
            }
        }
        mat
    };
    let induced = |n: i64, power: usize| -> Result<SparseMatrix> {
        let src = &homs[&n];
        let dst_deg = n + 2 * power as i64;
        let dst = &homs[&dst_deg];
        let cols: Vec<Vector> = src
            .representatives
            .iter()
            .map(|z| {
                let mut v = z.clone();
                for k in 0..power {
                    let deg = n + 2 * k as i64;
                    if c.layout.contains_key(&deg) && c.layout.contains_key(&(deg + 2)) {
                        v = u_map(deg).mul_vec(&v)?;
                    } else {
                        return Ok(crate::linalg::zero_vector(field, dst.cycles.ambient_dim()));
                    }
                }
                dst.coordinates(&v)
            })
            .collect::<Result<_>>()?;
        Ok(SparseMatrix::from_columns(field, dst.dim, &cols))
    };
    let mut length = 0;
    let mut generators = 0;
    let mut torsion_witness = None;
    for n in c.degrees() {
        let h = homs[&n].dim;
        if h == 0 {
            continue;
        }
        length += h;
        let from_below = if homs.contains_key(&(n - 2)) && c.layout.contains_key(&(n - 2)) {
            rank(&induced(n - 2, 1)?)
        } else {
            0
        };
        generators += h - from_below;
        if torsion_witness.is_none() && c.layout.contains_key(&(n + 2)) {
            let ker = h - rank(&induced(n, 1)?);
            let top_src = n - 2 * m as i64;
            let top = if c.layout.contains_key(&top_src) && homs.contains_key(&top_src) {
                rank(&induced(top_src, m)?)
            } else {
                0
            };
            if ker > top {
                torsion_witness = Some(format!(
                    "H^{n} has {ker} u-annihilated classes but only {top} lie in u^{m} H"
                ));
            }
        }
    }
    Ok(FreenessReport {
        free: length == (m + 1) * generators,
        truncation: m,
        length,
        generators,
        torsion_witness,
    })
}

/// [`u_freeness`] at two consecutive truncations, with the same retry policy
/// as [`degenerates_at_e1`].
pub fn u_freeness_stable(b: &BVStructure) -> Result<(Verdict, FreenessReport)> {
    check_square_zero(b)?;
    let (verdict, _, _, report) = stabilize(b, |m| {
        let r = u_freeness(b, m)?;
        Ok((r.free, r))
    })?;
    Ok((verdict, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraPresentation, Generator};
    use crate::multivector::MultiVector;

    fn heis() -> BVStructure {
        let a = Algebra::new(AlgebraPresentation::exterior(FieldSpec::Rationals, &["e1", "e2", "e3"])).unwrap();
        let e12 = &a.generator(0) * &a.generator(1);
        let d = GradedOperator::derivation_from_images(&a, 1, &[a.zero(), a.zero(), e12]).unwrap();
        let pi = MultiVector::from_terms(FieldSpec::Rationals, 2, [(vec![0, 1], FieldSpec::Rationals.one())]).unwrap();
        BVStructure::koszul(d, &pi).unwrap()
    }

    /// Two generators `x` (degree 2) and `y` (degree 1) with trivial
    /// products and `Δx = y`, `d = 0`.
    fn delta_only() -> BVStructure {
        let p = AlgebraPresentation::new(
            FieldSpec::Rationals,
            vec![Generator::odd("y", 3), Generator::even("x", 4, 2)],
            4,
        );
        let a = Algebra::new(p).unwrap();
        let d = GradedOperator::zero(&a, 1);
        let delta = GradedOperator::from_fn(&a, -1, |m| {
            Ok(if m.exponents() == [0, 1] { a.generator(0) } else { a.zero() })
        })
        .unwrap();
        BVStructure::classical(d, delta).unwrap()
    }

    #[test]
    fn delta_zero_degenerates() {
        let b = heis();
        let trivial = BVStructure::classical(b.d().clone(), GradedOperator::zero(b.algebra(), -1)).unwrap();
        let cert = degenerates_at_e1(&trivial).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
        assert_eq!(u_freeness_stable(&trivial).unwrap().0, Verdict::Holds);
    }

    #[test]
    fn d_zero_delta_nonzero_fails() {
        let b = delta_only();
        let cert = degenerates_at_e1(&b).unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);
        assert!(cert.d1_witness.is_some());
        let (v, r) = u_freeness_stable(&b).unwrap();
        assert_eq!(v, Verdict::Fails);
        assert!(r.torsion_witness.is_some());
    }

    #[test]
    fn heisenberg_pages() {
        let b = heis();
        let c = NegativeCyclicComplex::build(&b, 3).unwrap();
        let pages = spectral_pages(&c);
        let einf = e_infinity(&c);
        assert_eq!(pages.last().unwrap().dims, einf.dims);
        for w in pages.windows(2).skip(1) {
            for (bd, &d) in &w[1].dims {
                assert!(d <= w[0].dim(*bd));
            }
        }
        for n in c.degrees() {
            assert_eq!(einf.total_in_degree(n), c.homology(n).unwrap().dim);
        }
        // E_1 is H(A,d) in each u-slice.
        assert_eq!(pages[1].dim((0, 1)), 2);
    }
}
