//! Built-in example inputs, each with a manifest of claims that
//! [`replay`] re-checks from scratch.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Algebra, AlgebraPresentation, Generator};
use crate::bv::{verify_bv, verify_bv_infinity, verify_conjugation_identity};
use crate::deformation::{solve_mc, tt_solve_mc, SolveMethod};
use crate::degeneration::{degenerates_at_e1, u_freeness_stable, Verdict};
use crate::dglie::DgLie;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::format::{Document, NamedLie, StructureSpec};
use crate::linalg::{homology, unit_vector, Vector};
use crate::multivector::{LieStructure, MultiVector};
use crate::operator::GradedOperator;
use crate::quasi_abelian::{dd_lemma, induced_bracket_on_homology, zigzag_certificate};
use crate::transfer::{build_contraction, transferred_brackets};

/// One checkable statement about a gallery input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    VerifyBv(bool),
    VerifyBvInfinity(bool),
    ConjugationIdentity(bool),
    /// Some `Δ_k` with `k ≥ 2` is nonzero.
    NonClassical(bool),
    DeltaIsZero(bool),
    /// `dim H^n(A, d)` for `n = 0, 1, ...` up to the top degree.
    Betti(Vec<usize>),
    Degenerates(bool),
    UFree(bool),
    DdLemma(bool),
    ZigZagValid,
    InducedBracketZero(bool),
    TransferredL2Zero(bool),
    /// Every `H¹` basis class extends to order `order`, by both elimination
    /// and homotopy modes, and by the dΔ solver when the dΔ-lemma holds.
    Unobstructed { order: usize },
    /// `H¹` basis class `class` is obstructed at `order`.
    ObstructedAt { class: usize, order: usize },
    H2Nonzero,
    /// Conjugation by `J` and the adjoint both preserve `d² = 0`.
    HermitianCalculus,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::VerifyBv(b) => write!(f, "verify_bv = {b}"),
            Claim::VerifyBvInfinity(b) => write!(f, "verify_bv_infinity = {b}"),
            Claim::ConjugationIdentity(b) => write!(f, "conjugation identity = {b}"),
            Claim::NonClassical(b) => write!(f, "higher deltas nonzero = {b}"),
            Claim::DeltaIsZero(b) => write!(f, "delta = 0 is {b}"),
            Claim::Betti(v) => write!(f, "betti = {v:?}"),
            Claim::Degenerates(b) => write!(f, "degenerates at E1 = {b}"),
            Claim::UFree(b) => write!(f, "u-free = {b}"),
            Claim::DdLemma(b) => write!(f, "dd-lemma = {b}"),
            Claim::ZigZagValid => write!(f, "zig-zag certificate valid"),
            Claim::InducedBracketZero(b) => write!(f, "induced bracket zero = {b}"),
            Claim::TransferredL2Zero(b) => write!(f, "transferred l2 zero = {b}"),
            Claim::Unobstructed { order } => write!(f, "unobstructed to order {order}"),
            Claim::ObstructedAt { class, order } => write!(f, "class {class} obstructed at order {order}"),
            Claim::H2Nonzero => write!(f, "H2 nonzero"),
            Claim::HermitianCalculus => write!(f, "J-conjugate and adjoint of d square to zero"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub document: Document,
    pub manifest: Vec<Claim>,
    /// Operator-calculus demonstration with no BV claim.
    pub demonstration_only: bool,
}

#[derive(Clone, Debug)]
pub struct ClaimCheck {
    pub claim: Claim,
    pub holds: bool,
    pub observed: String,
}

pub const NAMES: [&str; 9] = [
    "heisenberg",
    "heisenberg_hierarchy",
    "square_bicomplex",
    "abelian_torus",
    "jacobi_example",
    "generalized_poisson",
    "obstructed_dglie",
    "delta_only",
    "hermitian_demo",
];

pub fn all() -> Result<Vec<GalleryEntry>> {
    NAMES.iter().map(|n| by_name(n)).collect()
}

pub fn by_name(name: &str) -> Result<GalleryEntry> {
    match name {
        "heisenberg" => heisenberg(),
        "heisenberg_hierarchy" => heisenberg_hierarchy(),
        "square_bicomplex" => square_bicomplex(),
        "abelian_torus" => abelian_torus(4),
        "jacobi_example" => jacobi_example(),
        "generalized_poisson" => generalized_poisson(),
        "obstructed_dglie" => obstructed_dglie(),
        "delta_only" => delta_only(),
        "hermitian_demo" => hermitian_demo(),
        _ => Err(Error::Precondition(format!(
            "unknown gallery entry {name}; known: {}",
            NAMES.join(", ")
        ))),
    }
}

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// CE model of `g` on generators `e1..en`.
fn ce(g: &LieStructure) -> Result<(Algebra, GradedOperator)> {
    let ns = names("e", g.dim());
    let refs: Vec<&str> = ns.iter().map(String::as_str).collect();
    g.ce_model(&refs)
}

fn lie(dim: usize, brackets: &[((usize, usize), &[(usize, i64)])]) -> Result<LieStructure> {
    let f = q();
    LieStructure::from_brackets(
        f,
        dim,
        brackets
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|&(i, c)| (i, f.from_i64(c))).collect())),
    )
}

fn bivector(terms: &[&[usize]], arity: usize) -> Result<MultiVector> {
    MultiVector::from_terms(q(), arity, terms.iter().map(|w| (w.to_vec(), q().one())))
}

fn heis() -> Result<LieStructure> {
    lie(3, &[((0, 1), &[(2, -1)])])
}

/// `Λ(e1, e2, e3)` with `d e3 = e1 e2` and `π = ∂1 ∧ ∂2`, Koszul's `Δ = [i_π, d]`.
pub fn heisenberg() -> Result<GalleryEntry> {
    let (a, d) = ce(&heis()?)?;
    let mut doc = Document::new(&a, d);
    doc.multivectors.insert("pi".into(), bivector(&[&[0, 1]], 2)?);
    doc.structure = Some(StructureSpec::Koszul { pi: "pi".into() });
    Ok(GalleryEntry {
        name: "heisenberg",
        description: "Chevalley-Eilenberg model of the Heisenberg algebra with Koszul's BV operator",
        document: doc,
        manifest: vec![
            Claim::VerifyBv(true),
            Claim::Betti(vec![1, 2, 2, 1]),
            Claim::Degenerates(false),
            Claim::UFree(false),
            Claim::DdLemma(false),
            Claim::InducedBracketZero(true),
            Claim::TransferredL2Zero(true),
        ],
        demonstration_only: false,
    })
}

/// The Heisenberg model with the full hierarchy of `Λ = i_π`.
pub fn heisenberg_hierarchy() -> Result<GalleryEntry> {
    let (a, d) = ce(&heis()?)?;
    let lambda = GradedOperator::interior_product(&a, &bivector(&[&[0, 1]], 2)?)?;
    let mut doc = Document::new(&a, d);
    doc.operators.insert("L".into(), lambda);
    doc.structure = Some(StructureSpec::Hierarchy { lambda: "L".into() });
    Ok(GalleryEntry {
        name: "heisenberg_hierarchy",
        description: "Koszul hierarchy of the second-order operator i_pi on the Heisenberg model",
        document: doc,
        manifest: vec![
            Claim::VerifyBvInfinity(true),
            Claim::ConjugationIdentity(true),
            Claim::NonClassical(true),
        ],
        demonstration_only: false,
    })
}

/// `{a, b = da, c = Δa, e = dΔa}` with all products zero.
pub fn square_bicomplex() -> Result<GalleryEntry> {
    let gens = vec![
        Generator::even("a", 6, 2),
        Generator::odd("b", 7),
        Generator::odd("c", 5),
        Generator::even("e", 6, 2),
    ];
    let a = Algebra::new(AlgebraPresentation::new(q(), gens, 7))?;
    let g = |i| a.generator(i);
    let d = GradedOperator::derivation_from_images(&a, 1, &[g(1), a.zero(), g(3), a.zero()])?;
    let delta = GradedOperator::from_fn(&a, -1, |m| {
        Ok(match m.word().as_slice() {
            [0] => g(2),
            [1] => g(3).scale(&q().from_i64(-1)),
            _ => a.zero(),
        })
    })?;
    let mut doc = Document::new(&a, d);
    doc.operators.insert("Delta".into(), delta);
    doc.structure = Some(StructureSpec::Bv { delta: "Delta".into() });
    Ok(GalleryEntry {
        name: "square_bicomplex",
        description: "minimal square a -> da, a -> Delta a, with d Delta a, and trivial products",
        document: doc,
        manifest: vec![
            Claim::VerifyBv(true),
            Claim::DdLemma(true),
            Claim::Degenerates(true),
            Claim::UFree(true),
            Claim::ZigZagValid,
            Claim::InducedBracketZero(true),
            Claim::TransferredL2Zero(true),
            Claim::Unobstructed { order: 8 },
        ],
        demonstration_only: false,
    })
}

/// `Λ(e1..en)` with `d = 0` and `π = Σ ∂_{2i-1} ∧ ∂_{2i}`.
pub fn abelian_torus(n: usize) -> Result<GalleryEntry> {
    let g = LieStructure::abelian(q(), n);
    let (a, d) = ce(&g)?;
    let pairs: Vec<Vec<usize>> = (0..n / 2).map(|i| vec![2 * i, 2 * i + 1]).collect();
    let refs: Vec<&[usize]> = pairs.iter().map(Vec::as_slice).collect();
    let mut doc = Document::new(&a, d);
    doc.multivectors.insert("pi".into(), bivector(&refs, 2)?);
    doc.structure = Some(StructureSpec::Koszul { pi: "pi".into() });
    let betti = (0..=n).map(|k| binomial(n, k)).collect();
    Ok(GalleryEntry {
        name: "abelian_torus",
        description: "exterior algebra of a flat torus with a constant Poisson bivector",
        document: doc,
        manifest: vec![
            Claim::VerifyBv(true),
            Claim::DeltaIsZero(true),
            Claim::Betti(betti),
            Claim::DdLemma(true),
            Claim::Degenerates(true),
            Claim::UFree(true),
            Claim::ZigZagValid,
            Claim::InducedBracketZero(true),
            Claim::TransferredL2Zero(true),
            Claim::Unobstructed { order: 8 },
        ],
        demonstration_only: false,
    })
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `r2 ⊕ R` with `d e1 = e1 e2`, `π = ∂1∧∂2 + ∂2∧∂3`, `η = -∂3`.
pub fn jacobi_example() -> Result<GalleryEntry> {
    let g = lie(3, &[((0, 1), &[(0, -1)])])?;
    let (a, d) = ce(&g)?;
    let mut doc = Document::new(&a, d);
    doc.multivectors.insert("pi".into(), bivector(&[&[0, 1], &[1, 2]], 2)?);
    doc.multivectors.insert(
        "eta".into(),
        MultiVector::from_terms(q(), 1, [(vec![2], q().from_i64(-1))])?,
    );
    doc.structure = Some(StructureSpec::Jacobi {
        pi: "pi".into(),
        eta: "eta".into(),
    });
    Ok(GalleryEntry {
        name: "jacobi_example",
        description: "Jacobi pair on the CE model of r2 + R with Delta_2 = -i_eta i_pi",
        document: doc,
        manifest: vec![Claim::VerifyBvInfinity(true), Claim::NonClassical(true)],
        demonstration_only: false,
    })
}

/// `heis ⊕ R` with `π1 = ∂1∧∂2` and `π2 = ∂1∧∂2∧∂4`.
pub fn generalized_poisson() -> Result<GalleryEntry> {
    let g = lie(4, &[((0, 1), &[(2, -1)])])?;
    let (a, d) = ce(&g)?;
    let mut doc = Document::new(&a, d);
    doc.multivectors.insert("pi1".into(), bivector(&[&[0, 1]], 2)?);
    doc.multivectors.insert("pi2".into(), bivector(&[&[0, 1, 3]], 3)?);
    doc.structure = Some(StructureSpec::GeneralizedPoisson {
        pis: vec!["pi1".into(), "pi2".into()],
    });
    Ok(GalleryEntry {
        name: "generalized_poisson",
        description: "generalized Poisson pair on heis + R giving a BV-infinity structure",
        document: doc,
        manifest: vec![Claim::VerifyBvInfinity(true), Claim::NonClassical(true)],
        demonstration_only: false,
    })
}

/// `C*(heis; r2)` through `ι(X1) = y`, `ι(X2) = ι(X3) = 0`, where
/// `[x, y] = y` in `r2`; the first hit of [`obstruction_search`].
pub fn obstructed_dglie() -> Result<GalleryEntry> {
    let (a, d) = ce(&lie(3, &[((0, 1), &[(2, 1)])])?)?;
    let r2 = lie(2, &[((0, 1), &[(1, 1)])])?;
    let mut doc = Document::new(&a, d);
    doc.lies.insert(
        "h".into(),
        NamedLie {
            basis: vec!["x".into(), "y".into()],
            structure: r2,
        },
    );
    let f = q();
    doc.structure = Some(StructureSpec::DgLieCochains {
        lie: "h".into(),
        iota: Some(vec![unit_vector(f, 2, 1), vec![f.zero(); 2], vec![f.zero(); 2]]),
    });
    Ok(GalleryEntry {
        name: "obstructed_dglie",
        description: "Heisenberg cochains with coefficients in r2, obstructed at order two",
        document: doc,
        manifest: vec![Claim::H2Nonzero, Claim::ObstructedAt { class: 1, order: 2 }],
        demonstration_only: false,
    })
}

/// A single odd generator with `d = 0` and `Δ a = 1`.
pub fn delta_only() -> Result<GalleryEntry> {
    let a = Algebra::new(AlgebraPresentation::new(q(), vec![Generator::odd("a", 1)], 1))?;
    let d = GradedOperator::zero(&a, 1);
    let delta = GradedOperator::from_fn(&a, -1, |m| Ok(if m.is_unit() { a.zero() } else { a.unit() }))?;
    let mut doc = Document::new(&a, d);
    doc.operators.insert("Delta".into(), delta);
    doc.structure = Some(StructureSpec::Bv { delta: "Delta".into() });
    Ok(GalleryEntry {
        name: "delta_only",
        description: "d = 0 with a nonzero Delta, the smallest non-degenerating input",
        document: doc,
        manifest: vec![
            Claim::VerifyBv(true),
            Claim::DeltaIsZero(false),
            Claim::Degenerates(false),
            Claim::UFree(false),
        ],
        demonstration_only: false,
    })
}

/// Kodaira-Thurston-like CE model with the almost complex structure
/// `J e1 = e2, J e3 = e4`. Demonstration only.
pub fn hermitian_demo() -> Result<GalleryEntry> {
    let g = lie(4, &[((0, 1), &[(2, -1)])])?;
    let (a, d) = ce(&g)?;
    let doc = {
        let mut doc = Document::new(&a, d);
        doc.operators.insert("J".into(), almost_complex(&a)?);
        doc
    };
    Ok(GalleryEntry {
        name: "hermitian_demo",
        description: "operator calculus only: J-conjugation and adjoints on a Kodaira-Thurston-like model",
        document: doc,
        manifest: vec![Claim::Betti(vec![1, 3, 4, 3, 1]), Claim::HermitianCalculus],
        demonstration_only: true,
    })
}

/// The algebra automorphism induced by `e1 -> e2, e2 -> -e1, e3 -> e4, e4 -> -e3`.
fn almost_complex(a: &Algebra) -> Result<GradedOperator> {
    let f = a.field();
    let images = [
        a.generator(1),
        a.generator(0).scale(&f.from_i64(-1)),
        a.generator(3),
        a.generator(2).scale(&f.from_i64(-1)),
    ];
    GradedOperator::from_fn(a, 0, |m| {
        Ok(m.word().iter().fold(a.unit(), |acc, &i| &acc * &images[i]))
    })
}

/// One hit of [`obstruction_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub g: &'static str,
    pub h: &'static str,
    pub iota: Vec<Vector>,
    pub class: usize,
    pub order: usize,
}

/// Small real Lie algebras, by name, in search order.
pub fn catalogue() -> Result<Vec<(&'static str, LieStructure)>> {
    Ok(vec![
        ("R1", lie(1, &[])?),
        ("R2", lie(2, &[])?),
        ("r2", lie(2, &[((0, 1), &[(1, 1)])])?),
        ("R3", lie(3, &[])?),
        ("heis", lie(3, &[((0, 1), &[(2, 1)])])?),
        ("r2+R", lie(3, &[((0, 1), &[(1, 1)])])?),
        ("r3", lie(3, &[((0, 1), &[(1, 1)]), ((0, 2), &[(2, 1)])])?),
        ("sl2", lie(3, &[((0, 1), &[(2, 1)]), ((1, 2), &[(0, 1)]), ((2, 0), &[(1, 1)])])?),
        ("heis+R", lie(4, &[((0, 1), &[(2, 1)])])?),
        ("r2+r2", lie(4, &[((0, 1), &[(1, 1)]), ((2, 3), &[(3, 1)])])?),
    ])
}

/// Brute force over `C*(g; h)` for catalogue pairs with
/// `dim g + dim h ≤ max_dim` and maps `ι` sending each `X_i` to `0` or a
/// basis vector of `h` (non-homomorphisms skipped), in catalogue order.
/// Returns the first `H¹` basis class with an order-2 obstruction.
pub fn obstruction_search(max_dim: usize) -> Result<Option<SearchHit>> {
    let cat = catalogue()?;
    let f = q();
    for (gn, g) in &cat {
        for (hn, h) in &cat {
            if g.dim() + h.dim() > max_dim || h.dim() < 2 {
                continue;
            }
            let choices = h.dim() + 1;
            for code in 0..choices.pow(g.dim() as u32) {
                let mut c = code;
                let iota: Vec<Vector> = (0..g.dim())
                    .map(|_| {
                        let k = c % choices;
                        c /= choices;
                        let mut v = vec![f.zero(); h.dim()];
                        if k > 0 {
                            v[k - 1] = f.one();
                        }
                        v
                    })
                    .collect();
                let Ok(l) = DgLie::cochains(g, h, &iota) else {
                    continue;
                };
                let h1 = l.homology(1)?;
                for i in 0..h1.dim {
                    let alpha = unit_vector(f, h1.dim, i);
                    if let Some(o) = solve_mc(&l, &alpha, 2, SolveMethod::Elimination)?.obstruction() {
                        return Ok(Some(SearchHit {
                            g: gn,
                            h: hn,
                            iota,
                            class: i,
                            order: o.order,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// `dim H^n(A, d)` for `n = 0..=max_degree`.
pub fn d_betti(d: &GradedOperator) -> Result<Vec<usize>> {
    let a = d.algebra();
    (0..=a.max_degree())
        .map(|n| Ok(homology(&d.block(n - 1), &d.block(n))?.dim))
        .collect()
}

/// Every `H¹` basis class, as class coordinates.
pub fn h1_classes(l: &DgLie) -> Result<Vec<Vector>> {
    let dim = l.homology(1)?.dim;
    Ok((0..dim).map(|i| unit_vector(l.field(), dim, i)).collect())
}

fn unobstructed(doc: &Document, order: usize) -> Result<(bool, String)> {
    let l = doc.dg_lie()?;
    let bv = doc.bv_structure().ok();
    let dd = match &bv {
        Some(b) if b.is_classical() => dd_lemma(b)?.holds(),
        _ => false,
    };
    for (i, alpha) in h1_classes(&l)?.iter().enumerate() {
        for method in [SolveMethod::Elimination, SolveMethod::Homotopy] {
            if let Some(o) = solve_mc(&l, alpha, order, method)?.obstruction() {
                return Ok((false, format!("class {i} obstructed at order {} ({})", o.order, method.as_str())));
            }
        }
        if let (true, Some(b)) = (dd, &bv) {
            let tt = tt_solve_mc(b, alpha, order)?;
            if !tt.outcome.is_solved() {
                return Ok((false, format!("class {i} not solved by the dd solver")));
            }
        }
    }
    Ok((true, format!("{} classes, dd solver {}", h1_classes(&l)?.len(), if dd { "used" } else { "not applicable" })))
}

fn check(claim: &Claim, doc: &Document) -> Result<(bool, String)> {
    let bv = || doc.bv_structure();
    let expect = |want: bool, got: bool| (want == got, got.to_string());
    Ok(match claim {
        Claim::VerifyBv(w) => expect(*w, verify_bv(&bv()?).passed()),
        Claim::VerifyBvInfinity(w) => expect(*w, verify_bv_infinity(&bv()?).passed()),
        Claim::ConjugationIdentity(w) => expect(*w, verify_conjugation_identity(&bv()?)?.passed()),
        Claim::NonClassical(w) => {
            let b = bv()?;
            expect(*w, b.deltas().iter().skip(1).any(|x| !x.is_zero()))
        }
        Claim::DeltaIsZero(w) => expect(*w, bv()?.deltas().iter().all(GradedOperator::is_zero)),
        Claim::Betti(v) => {
            let got = d_betti(&doc.d)?;
            (&got == v, format!("{got:?}"))
        }
        Claim::Degenerates(w) => {
            let c = degenerates_at_e1(&bv()?)?;
            (c.verdict == verdict(*w), c.verdict.as_str().into())
        }
        Claim::UFree(w) => {
            let (v, _) = u_freeness_stable(&bv()?)?;
            (v == verdict(*w), v.as_str().into())
        }
        Claim::DdLemma(w) => expect(*w, dd_lemma(&bv()?)?.holds()),
        Claim::ZigZagValid => expect(true, zigzag_certificate(&bv()?)?.valid()),
        Claim::InducedBracketZero(w) => expect(*w, induced_bracket_on_homology(&bv()?)?.is_zero()),
        Claim::TransferredL2Zero(w) => {
            let l = doc.dg_lie()?;
            let c = build_contraction(&l)?;
            expect(*w, transferred_brackets(&l, &c, 2)?.is_zero(2))
        }
        Claim::Unobstructed { order } => unobstructed(doc, *order)?,
        Claim::ObstructedAt { class, order } => {
            let l = doc.dg_lie()?;
            let classes = h1_classes(&l)?;
            let alpha = classes
                .get(*class)
                .ok_or_else(|| Error::Precondition(format!("H1 has no class {class}")))?;
            match solve_mc(&l, alpha, *order, SolveMethod::Elimination)? {
                o if o.is_solved() => (false, "solved".into()),
                o => {
                    let got = o.obstruction().map_or(0, |o| o.order);
                    (got == *order, format!("obstructed at order {got}"))
                }
            }
        }
        Claim::H2Nonzero => {
            let dim = doc.dg_lie()?.homology(2)?.dim;
            (dim > 0, format!("dim H2 = {dim}"))
        }
        Claim::HermitianCalculus => {
            let j = doc
                .operators
                .get("J")
                .ok_or_else(|| Error::Precondition("the demonstration needs an operator J".into()))?;
            let dc = doc.d.conjugate(j)?;
            let dstar = doc.d.adjoint();
            let ok = dc.compose(&dc)?.is_zero() && dstar.compose(&dstar)?.is_zero();
            let commutes = doc.d.commutator(&dc)?.is_zero();
            (ok, format!("[d, J^-1 d J] = 0 is {commutes}"))
        }
    })
}

fn verdict(b: bool) -> Verdict {
    if b {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

/// Re-checks every manifest claim of `entry`.
pub fn replay(entry: &GalleryEntry) -> Result<Vec<ClaimCheck>> {
    replay_document(&entry.document, &entry.manifest)
}

pub fn replay_document(doc: &Document, manifest: &[Claim]) -> Result<Vec<ClaimCheck>> {
    manifest
        .iter()
        .map(|claim| {
            let (holds, observed) = check(claim, doc)?;
            Ok(ClaimCheck {
                claim: claim.clone(),
                holds,
                observed,
            })
        })
        .collect()
}

/// Degree-wise dimensions of an entry's algebra, for display.
pub fn dimensions(entry: &GalleryEntry) -> BTreeMap<i64, usize> {
    let a = &entry.document.algebra;
    a.degrees().into_iter().map(|n| (n, a.dim(n))).collect()
}
