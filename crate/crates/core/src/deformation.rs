//! Order-by-order Maurer–Cartan solutions `∂ξ + ½[ξ,ξ] = 0` for
//! `ξ(t) = Σ ξ_k t^k`, with obstruction classes in `H²`.
//!
//! At order `k` the equation reads `∂ξ_k = R_k` with
//! `R_k = -½ Σ_{i+j=k} [ξ_i, ξ_j]`.

use crate::bv::BVStructure;
use crate::dglie::DgLie;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{axpy, is_zero_vector, scale_vector, solve, zero_vector, Vector};
use crate::quasi_abelian::dd_lemma;
use crate::transfer::{build_contraction, Contraction};

/// How `∂ξ_k = R_k` is solved at each order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveMethod {
    /// Exact elimination; the solution has vanishing free coordinates.
    Elimination,
    /// `ξ_k = -h(R_k)` for the canonical contraction.
    Homotopy,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::Elimination => "elimination",
            SolveMethod::Homotopy => "homotopy",
        }
    }
}

/// `ξ_1, …, ξ_N ∈ L¹`, verified to satisfy the MC identity mod `t^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationSeries {
    pub order: usize,
    pub coefficients: Vec<Vector>,
    pub method: SolveMethod,
}

/// The first order `k` at which `∂ξ_k = R_k` has no solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub order: usize,
    /// Coordinates of `[R_k]` in `H²`.
    pub class: Vector,
    pub rhs: Vector,
    /// The coefficients `ξ_1, …, ξ_{k-1}` found before the failure.
    pub partial: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McOutcome {
    Solved(DeformationSeries),
    Obstructed(Obstruction),
}

impl McOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, McOutcome::Solved(_))
    }

    pub fn series(&self) -> Option<&DeformationSeries> {
        match self {
            McOutcome::Solved(s) => Some(s),
            McOutcome::Obstructed(_) => None,
        }
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            McOutcome::Solved(_) => None,
            McOutcome::Obstructed(o) => Some(o),
        }
    }
}

fn check_characteristic(field: FieldSpec) -> Result<()> {
    match field.characteristic() {
        2 | 3 => Err(Error::Unsupported(format!(
            "Maurer-Cartan solving needs characteristic 0 or at least 5, got {}",
            field.characteristic()
        ))),
        _ => Ok(()),
    }
}

fn class_vector(field: FieldSpec, alpha: &[Scalar], dim: usize) -> Result<Vector> {
    if alpha.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "H^1 has dimension {dim}, got {} class coordinates",
            alpha.len()
        )));
    }
    alpha.iter().map(|c| field.convert(c)).collect()
}

/// `R_k = -½ Σ_{i+j=k} [ξ_i, ξ_j]` given `ξ_1..ξ_{k-1}` (index 0 is `ξ_1`).
fn rhs(l: &DgLie, xi: &[Vector], k: usize) -> Result<Vector> {
    let f = l.field();
    let mut acc = zero_vector(f, l.dim(2));
    for i in 1..k {
        let b = l.bracket(1, &xi[i - 1], 1, &xi[k - i - 1])?;
        axpy(&mut acc, &f.one(), &b);
    }
    let minus_half = -&f.from_i64(2).inverse().expect("characteristic is not 2");
    Ok(scale_vector(&minus_half, &acc))
}

/// `∂ξ_k + ½ Σ_{i+j=k} [ξ_i, ξ_j]` for `k = 1..=N`, by expanding
/// `[ξ(t), ξ(t)]` over all pairs of coefficients.
pub fn mc_residual(l: &DgLie, coefficients: &[Vector]) -> Result<Vec<Vector>> {
    let f = l.field();
    let n = coefficients.len();
    let mut out: Vec<Vector> = coefficients
        .iter()
        .map(|x| l.apply_differential(1, x))
        .collect::<Result<_>>()?;
    let half = f.from_i64(2).inverse().ok_or_else(|| Error::Unsupported("characteristic 2".into()))?;
    for (i, x) in coefficients.iter().enumerate() {
        for (j, y) in coefficients.iter().enumerate() {
            let k = i + j + 2;
            if k > n {
                continue;
            }
            let b = l.bracket(1, x, 1, y)?;
            axpy(&mut out[k - 1], &half, &b);
        }
    }
    Ok(out)
}

/// True when the series satisfies the MC identity mod `t^{N+1}`.
pub fn satisfies_mc(l: &DgLie, coefficients: &[Vector]) -> Result<bool> {
    Ok(mc_residual(l, coefficients)?.iter().all(|r| is_zero_vector(r)))
}

/// Solves the recursive system to order `n` starting from the chosen
/// representative of the `H¹` class `alpha`.
pub fn solve_mc(l: &DgLie, alpha: &[Scalar], n: usize, method: SolveMethod) -> Result<McOutcome> {
    let contraction = match method {
        SolveMethod::Homotopy => Some(build_contraction(l)?),
        SolveMethod::Elimination => None,
    };
    solve_mc_with(l, alpha, n, method, contraction.as_ref())
}

fn solve_mc_with(
    l: &DgLie,
    alpha: &[Scalar],
    n: usize,
    method: SolveMethod,
    contraction: Option<&Contraction>,
) -> Result<McOutcome> {
    let f = l.field();
    check_characteristic(f)?;
    if n == 0 {
        return Err(Error::Precondition("the order must be at least 1".into()));
    }
    let h1 = l.homology(1)?;
    let alpha = class_vector(f, alpha, h1.dim)?;
    let xi1 = h1.lift(&alpha)?;
    solve_from(l, xi1, n, method, contraction)
}

fn solve_from(
    l: &DgLie,
    xi1: Vector,
    n: usize,
    method: SolveMethod,
    contraction: Option<&Contraction>,
) -> Result<McOutcome> {
    let f = l.field();
    let d1 = l.differential(1);
    let d2 = l.differential(2);
    let h2 = l.homology(2)?;
    let mut xi = vec![xi1];
    for k in 2..=n {
        let r = rhs(l, &xi, k)?;
        if !is_zero_vector(&d2.mul_vec(&r)?) {
            return Err(Error::Invariant(format!("R_{k} is not closed")));
        }
        let next = match method {
            SolveMethod::Elimination => solve(&d1, &r)?,
            SolveMethod::Homotopy => {
                let c = contraction.expect("homotopy mode carries a contraction");
                if is_zero_vector(&c.project(2, &r)?) {
                    let x = scale_vector(&f.from_i64(-1), &c.homotopy(2, &r)?);
                    Some(if x.is_empty() { zero_vector(f, l.dim(1)) } else { x })
                } else {
                    None
                }
            }
        };
        match next {
            Some(x) => {
                if d1.mul_vec(&x)? != r {
                    return Err(Error::Invariant(format!("solution at order {k} does not solve the equation")));
                }
                xi.push(x);
            }
            None => {
                return Ok(McOutcome::Obstructed(Obstruction {
                    order: k,
                    class: h2.coordinates(&r)?,
                    rhs: r,
                    partial: xi,
                }))
            }
        }
    }
    if !satisfies_mc(l, &xi)? {
        return Err(Error::Invariant("series fails the MC identity on re-substitution".into()));
    }
    Ok(McOutcome::Solved(DeformationSeries {
        order: n,
        coefficients: xi,
        method,
    }))
}

/// Result of the dΔ-lemma solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TtSolution {
    pub outcome: McOutcome,
    /// Set when the class has no representative in `Ker d ∩ Ker Δ` and the
    /// generic solver was used instead.
    pub fallback: bool,
}

/// Solves the MC system of the derived dg-Lie algebra `L^n = A^{n+1}` using
/// the dΔ-lemma: `ξ_1 ∈ Ker d ∩ Ker Δ` and `ξ_k = Δσ_k` with
/// `dΔσ_k = R_k` for `k ≥ 2`.
pub fn tt_solve_mc(b: &BVStructure, alpha: &[Scalar], n: usize) -> Result<TtSolution> {
    check_characteristic(b.field())?;
    if n == 0 {
        return Err(Error::Precondition("the order must be at least 1".into()));
    }
    let dd = dd_lemma(b)?;
    if let Some(k) = dd.failing_degree() {
        return Err(Error::Precondition(format!("the dd-lemma fails in degree {k}")));
    }
    let l = DgLie::from_bv(b)?;
    let f = l.field();
    let a = b.algebra();
    if l.dim(1) != a.dim(2) || l.dim(2) != a.dim(3) {
        return Err(Error::Invariant("shifted dimensions disagree".into()));
    }
    let h1 = l.homology(1)?;
    let alpha = class_vector(f, alpha, h1.dim)?;
    let z = h1.lift(&alpha)?;
    let d = b.d();
    let delta = b.delta1();
    // Representative z + dw with Δ(z + dw) = 0.
    let m = delta.block(2).mul(&d.block(1))?;
    let target = scale_vector(&f.from_i64(-1), &delta.block(2).mul_vec(&z)?);
    let Some(w) = solve(&m, &target)? else {
        let outcome = solve_from(&l, z, n, SolveMethod::Elimination, None)?;
        return Ok(TtSolution { outcome, fallback: true });
    };
    let mut xi1 = z;
    axpy(&mut xi1, &f.one(), &d.block(1).mul_vec(&w)?);
    let d_delta = d.block(2).mul(&delta.block(3))?;
    let mut xi = vec![xi1];
    for k in 2..=n {
        let r = rhs(&l, &xi, k)?;
        let sigma = solve(&d_delta, &r)?
            .ok_or_else(|| Error::Invariant(format!("R_{k} is not d-delta exact although the dd-lemma holds")))?;
        let x = delta.block(3).mul_vec(&sigma)?;
        if d.block(2).mul_vec(&x)? != r {
            return Err(Error::Invariant(format!("order {k} does not solve the equation")));
        }
        xi.push(x);
    }
    for (k, x) in xi.iter().enumerate() {
        if !is_zero_vector(&delta.block(2).mul_vec(x)?) {
            return Err(Error::Invariant(format!("xi_{} is not delta-closed", k + 1)));
        }
    }
    if !satisfies_mc(&l, &xi)? {
        return Err(Error::Invariant("series fails the MC identity on re-substitution".into()));
    }
    Ok(TtSolution {
        outcome: McOutcome::Solved(DeformationSeries {
            order: n,
            coefficients: xi,
            method: SolveMethod::Elimination,
        }),
        fallback: false,
    })
}

/// `solve_mc` to order `p - 1` for every basis class of `H¹` over `𝔽_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPReport {
    pub p: u64,
    pub order: usize,
    pub outcomes: Vec<McOutcome>,
}

impl CharPReport {
    pub fn all_solved(&self) -> bool {
        self.outcomes.iter().all(McOutcome::is_solved)
    }

    /// `(class index, obstruction)` of the first obstructed class.
    pub fn first_obstruction(&self) -> Option<(usize, &Obstruction)> {
        self.outcomes
            .iter()
            .enumerate()
            .find_map(|(i, o)| o.obstruction().map(|x| (i, x)))
    }
}

pub fn char_p_probe(l: &DgLie) -> Result<CharPReport> {
    let p = l.field().characteristic();
    if p < 5 {
        return Err(Error::Unsupported(format!(
            "the characteristic-p probe needs a prime p >= 5, got characteristic {p}"
        )));
    }
    let order = (p - 1) as usize;
    let dim = l.homology(1)?.dim;
    let f = l.field();
    let outcomes = (0..dim)
        .map(|i| {
            let e = crate::linalg::unit_vector(f, dim, i);
            solve_mc(l, &e, order, SolveMethod::Elimination)
        })
        .collect::<Result<_>>()?;
    Ok(CharPReport { p, order, outcomes })
}

/// Success verdicts of both solve modes for every basis class of `H¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeComparison {
    pub elimination: Vec<bool>,
    pub homotopy: Vec<bool>,
}

impl ModeComparison {
    pub fn agree(&self) -> bool {
        self.elimination == self.homotopy
    }
}

pub fn compare_modes(l: &DgLie, n: usize) -> Result<ModeComparison> {
    let f = l.field();
    let dim = l.homology(1)?.dim;
    let c = build_contraction(l)?;
    let mut out = ModeComparison {
        elimination: Vec::new(),
        homotopy: Vec::new(),
    };
    for i in 0..dim {
        let e = crate::linalg::unit_vector(f, dim, i);
        out.elimination
            .push(solve_mc_with(l, &e, n, SolveMethod::Elimination, None)?.is_solved());
        out.homotopy
            .push(solve_mc_with(l, &e, n, SolveMethod::Homotopy, Some(&c))?.is_solved());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multivector::LieStructure;

    fn obstructed() -> DgLie {
        let q = FieldSpec::Rationals;
        let g = LieStructure::abelian(q, 2);
        let (_, d) = g.ce_model(&["a", "b"]).unwrap();
        let h = LieStructure::from_brackets(q, 2, [((0, 1), vec![(1, q.one())])]).unwrap();
        DgLie::tensor(&d, &h).unwrap()
    }

    #[test]
    fn abelian_is_unobstructed() {
        let q = FieldSpec::Rationals;
        let g = LieStructure::abelian(q, 2);
        let (_, d) = g.ce_model(&["a", "b"]).unwrap();
        let l = DgLie::tensor(&d, &LieStructure::abelian(q, 2)).unwrap();
        let alpha = vec![q.one(), q.from_i64(2), q.zero(), q.from_i64(-1)];
        let out = solve_mc(&l, &alpha, 6, SolveMethod::Elimination).unwrap();
        let s = out.series().unwrap();
        assert!(s.coefficients[1..].iter().all(|x| is_zero_vector(x)));
    }

    #[test]
    fn order_two_obstruction() {
        let l = obstructed();
        let q = l.field();
        // a⊗x1 + b⊗x2
        let alpha = vec![q.one(), q.zero(), q.zero(), q.one()];
        for method in [SolveMethod::Elimination, SolveMethod::Homotopy] {
            let out = solve_mc(&l, &alpha, 4, method).unwrap();
            let o = out.obstruction().expect("obstructed");
            assert_eq!(o.order, 2);
            assert!(!is_zero_vector(&o.class));
        }
    }

    #[test]
    fn small_characteristic_rejected() {
        let l = obstructed().reduce_mod(3).unwrap();
        assert!(matches!(char_p_probe(&l), Err(Error::Unsupported(_))));
        let alpha = vec![l.field().one(); 4];
        assert!(matches!(
            solve_mc(&l, &alpha, 2, SolveMethod::Elimination),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn probe_mod_five() {
        let l = obstructed().reduce_mod(5).unwrap();
        let r = char_p_probe(&l).unwrap();
        assert_eq!(r.order, 4);
        // single basis classes a⊗x_i have [ξ,ξ] = 0
        assert!(r.all_solved());
    }
}
