//! Shared random inputs and independent oracles for the integration tests.
#![allow(dead_code)]

use btt::algebra::{Algebra, AlgebraPresentation, Generator};
use btt::bv::BVStructure;
use btt::dglie::DgLie;
use btt::field::{FieldSpec, Scalar};
use btt::gallery;
use btt::linalg::{SparseMatrix, Vector};
use btt::multivector::{LieStructure, MultiVector};
use btt::operator::GradedOperator;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q() -> FieldSpec {
    FieldSpec::Rationals
}

pub fn int(n: i64) -> Scalar {
    q().from_i64(n)
}

/// A nonzero small integer.
pub fn nonzero(r: &mut ChaCha8Rng) -> Scalar {
    let n = r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 };
    int(n)
}

pub fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

pub fn ce(g: &LieStructure) -> (Algebra, GradedOperator) {
    let ns = names(g.dim());
    let refs: Vec<&str> = ns.iter().map(String::as_str).collect();
    g.ce_model(&refs).unwrap()
}

pub fn catalogue() -> Vec<(&'static str, LieStructure)> {
    gallery::catalogue().unwrap()
}

/// A catalogue Lie algebra of dimension at least `min_dim`.
pub fn random_lie(r: &mut ChaCha8Rng, min_dim: usize) -> (&'static str, LieStructure) {
    let cat: Vec<_> = catalogue().into_iter().filter(|(_, g)| g.dim() >= min_dim).collect();
    cat.choose(r).unwrap().clone()
}

/// Random `k`-vector with coefficients in `{-2..2}` on `n` directions.
pub fn random_multivector(r: &mut ChaCha8Rng, n: usize, k: usize) -> MultiVector {
    let mut terms = Vec::new();
    let mut word: Vec<usize> = (0..k).collect();
    loop {
        if r.gen_bool(0.5) {
            terms.push((word.clone(), int(r.gen_range(-2..=2))));
        }
        // Next increasing word.
        let mut i = k;
        loop {
            if i == 0 {
                return MultiVector::from_terms(q(), k, terms).unwrap();
            }
            i -= 1;
            if word[i] < n - k + i {
                word[i] += 1;
                for j in i + 1..k {
                    word[j] = word[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A Koszul BV structure with a random Poisson bivector on a catalogue CE
/// model; `None` if no Poisson bivector was hit.
pub fn random_koszul(r: &mut ChaCha8Rng) -> Option<(String, BVStructure)> {
    let (name, g) = random_lie(r, 2);
    let (_, d) = ce(&g);
    for _ in 0..40 {
        let pi = random_multivector(r, g.dim(), 2);
        if pi.is_zero() || !g.schouten(&pi, &pi).unwrap().is_zero() {
            continue;
        }
        let label = format!("koszul on {name}");
        return Some((label, BVStructure::koszul(d, &pi).unwrap()));
    }
    None
}

/// Pieces of a direct sum with trivial products.
#[derive(Clone, Copy, Debug)]
pub enum Piece {
    /// `a -> b = d a`, `a -> c = Δ a`, `e = d Δ a`, with `a` in the degree.
    Square(i64),
    /// A lone generator with `d = Δ = 0`.
    Dot(i64),
    /// `a -> b = d a` only.
    DPair(i64),
    /// `a -> c = Δ a` only.
    DeltaPair(i64),
}

fn generator(name: String, degree: i64) -> Generator {
    if degree % 2 == 0 {
        Generator::even(&name, degree, 2)
    } else {
        Generator::odd(&name, degree)
    }
}

/// Direct sum of pieces with random nonzero coefficients. Every generator
/// sits in degrees `5..=9` and the cap is 9, so all products vanish.
pub fn direct_sum(r: &mut ChaCha8Rng, pieces: &[Piece]) -> BVStructure {
    let mut gens = Vec::new();
    // (source, target, coefficient) for d and Δ.
    let mut d_terms = Vec::new();
    let mut delta_terms = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let base = gens.len();
        match *p {
            Piece::Square(k) => {
                for (s, deg) in [("a", k), ("b", k + 1), ("c", k - 1), ("e", k)] {
                    gens.push(generator(format!("{s}{i}"), deg));
                }
                let (al, be, ga) = (nonzero(r), nonzero(r), nonzero(r));
                // Δ b = -βγ/α e keeps dΔ + Δd = 0.
                let coeff = -&(&(&be * &ga) * &al.inverse().unwrap());
                d_terms.push((base, base + 1, al));
                d_terms.push((base + 2, base + 3, ga));
                delta_terms.push((base, base + 2, be));
                delta_terms.push((base + 1, base + 3, coeff));
            }
            Piece::Dot(k) => gens.push(generator(format!("z{i}"), k)),
            Piece::DPair(k) => {
                gens.push(generator(format!("a{i}"), k));
                gens.push(generator(format!("b{i}"), k + 1));
                d_terms.push((base, base + 1, nonzero(r)));
            }
            Piece::DeltaPair(k) => {
                gens.push(generator(format!("a{i}"), k));
                gens.push(generator(format!("c{i}"), k - 1));
                delta_terms.push((base, base + 1, nonzero(r)));
            }
        }
    }
    let a = Algebra::new(AlgebraPresentation::new(q(), gens, 9)).unwrap();
    let n = a.num_generators();
    let mut d_images = vec![a.zero(); n];
    for (s, t, c) in d_terms {
        d_images[s] = a.generator(t).scale(&c);
    }
    let d = GradedOperator::derivation_from_images(&a, 1, &d_images).unwrap();
    let delta = GradedOperator::from_fn(&a, -1, |m| {
        let w = m.word();
        let mut out = a.zero();
        if w.len() == 1 {
            for (s, t, c) in &delta_terms {
                if *s == w[0] {
                    out = &out + &a.generator(*t).scale(c);
                }
            }
        }
        Ok(out)
    })
    .unwrap();
    BVStructure::classical(d, delta).unwrap()
}

/// Random squares and dots, which always satisfy the dΔ-lemma.
pub fn random_square_sum(r: &mut ChaCha8Rng) -> BVStructure {
    let count = r.gen_range(1..=3);
    let pieces: Vec<Piece> = (0..count)
        .map(|_| {
            if r.gen_bool(0.6) {
                Piece::Square(r.gen_range(6..=8))
            } else {
                Piece::Dot(r.gen_range(5..=9))
            }
        })
        .collect();
    direct_sum(r, &pieces)
}

/// Random mixture of all piece kinds.
pub fn random_mixed_sum(r: &mut ChaCha8Rng) -> BVStructure {
    let count = r.gen_range(1..=3);
    let pieces: Vec<Piece> = (0..count)
        .map(|_| match r.gen_range(0..4) {
            0 => Piece::Square(r.gen_range(6..=8)),
            1 => Piece::Dot(r.gen_range(5..=9)),
            2 => Piece::DPair(r.gen_range(5..=8)),
            _ => Piece::DeltaPair(r.gen_range(6..=9)),
        })
        .collect();
    direct_sum(r, &pieces)
}

/// Exterior algebra with `d = 0` and `Δ = ι_v` for a random nonzero `v`.
pub fn random_delta_only(r: &mut ChaCha8Rng) -> BVStructure {
    let n = r.gen_range(1..=4);
    let (a, d) = ce(&LieStructure::abelian(q(), n));
    let mut v = random_multivector(r, n, 1);
    if v.is_zero() {
        v = MultiVector::basis_vector(q(), 0);
    }
    let delta = GradedOperator::interior_product(&a, &v).unwrap();
    BVStructure::classical(d, delta).unwrap()
}

/// A catalogue CE model with `Δ = 0`.
pub fn random_delta_zero(r: &mut ChaCha8Rng) -> BVStructure {
    let (_, g) = random_lie(r, 1);
    let (a, d) = ce(&g);
    BVStructure::classical(d, GradedOperator::zero(&a, -1)).unwrap()
}

/// A random second-order `Λ` of degree -2 on a CE model extended by an
/// even generator `x` of degree 2 and an odd `t` with `d t = x`:
/// `Λ = i_π + D` with `D` the derivation sending `x` to a constant.
pub fn random_lambda(r: &mut ChaCha8Rng) -> (GradedOperator, GradedOperator) {
    let (_, g) = random_lie(r, 2);
    let n = g.dim();
    let mut gens: Vec<Generator> = names(n).iter().map(|s| Generator::odd(s, 1)).collect();
    let with_x = r.gen_bool(0.5);
    if with_x {
        gens.push(Generator::even("x", 2, 2));
        gens.push(Generator::odd("t", 1));
    }
    let cap = n as i64 + if with_x { 3 } else { 0 };
    let a = Algebra::new(AlgebraPresentation::new(q(), gens, cap)).unwrap();
    let (a0, d0) = ce(&g);
    let mut images: Vec<_> = d0
        .generator_images()
        .iter()
        .map(|e| e.map_into_generators(&a0, &a))
        .collect();
    if with_x {
        images.push(a.zero());
        images.push(a.generator(n));
    }
    let d = GradedOperator::derivation_from_images(&a, 1, &images).unwrap();
    let pi = random_multivector(r, n, 2);
    let mut lambda = GradedOperator::interior_product(&a, &pi).unwrap();
    if with_x {
        let mut imgs = vec![a.zero(); a.num_generators()];
        imgs[n] = a.unit().scale(&int(r.gen_range(-2..=2)));
        let der = GradedOperator::derivation_from_images(&a, -2, &imgs).unwrap();
        lambda = lambda.add(&der).unwrap();
    }
    (d, lambda)
}

/// Extension used by [`random_lambda`]: re-reads an element of the CE
/// algebra in a larger algebra whose first generators coincide.
pub trait MapIntoGenerators {
    fn map_into_generators(&self, from: &Algebra, to: &Algebra) -> btt::Element;
}

impl MapIntoGenerators for btt::Element {
    fn map_into_generators(&self, _from: &Algebra, to: &Algebra) -> btt::Element {
        let mut out = to.zero();
        for (m, c) in self.terms() {
            let mut x = to.unit();
            for i in m.word() {
                x = &x * &to.generator(i);
            }
            out = &out + &x.scale(c);
        }
        out
    }
}

/// Twisted cochains `C*(g; h)` for a random catalogue pair and a random
/// `ι` sending each `X_i` to `0` or a scaled basis vector of `h`.
pub fn random_cochains(r: &mut ChaCha8Rng) -> Option<(String, DgLie)> {
    let cat = catalogue();
    let (gn, g) = cat.iter().filter(|(_, g)| g.dim() <= 3).collect::<Vec<_>>().choose(r).copied()?.clone();
    let (hn, h) = cat.iter().filter(|(_, h)| h.dim() <= 3).collect::<Vec<_>>().choose(r).copied()?.clone();
    let iota: Vec<Vector> = (0..g.dim())
        .map(|_| {
            let mut v = vec![q().zero(); h.dim()];
            if r.gen_bool(0.6) {
                v[r.gen_range(0..h.dim())] = nonzero(r);
            }
            v
        })
        .collect();
    let l = DgLie::cochains(&g, &h, &iota).ok()?;
    Some((format!("C*({gn}; {hn}) iota {iota:?}"), l))
}

// ------------------------------------------------------------ dense oracle

pub fn to_rational(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rational(x) => x.clone(),
        Scalar::Modular { .. } => panic!("dense oracle works over Q"),
    }
}

pub fn dense(m: &SparseMatrix) -> Vec<Vec<BigRational>> {
    m.to_dense().iter().map(|row| row.iter().map(to_rational).collect()).collect()
}

/// Textbook Gaussian elimination; returns the rank.
pub fn dense_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = BigRational::one() / a[rank][c].clone();
        for j in 0..cols {
            a[rank][j] = &a[rank][j] * &inv;
        }
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn dense_mul_vec(rows: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    rows.iter()
        .map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

/// `dim ker(d_out) - rank(d_in)`, by the dense oracle.
pub fn dense_homology_dim(d_in: &SparseMatrix, d_out: &SparseMatrix) -> usize {
    d_out.cols() - dense_rank(&dense(d_out)) - dense_rank(&dense(d_in))
}

/// Random `rows x cols` matrix with entries in `{-3..3}`, about half zero.
pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> SparseMatrix {
    let dense: Vec<Vec<Scalar>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if r.gen_bool(0.5) { int(0) } else { int(r.gen_range(-3..=3)) })
                .collect()
        })
        .collect();
    SparseMatrix::from_dense(q(), &dense, cols)
}
