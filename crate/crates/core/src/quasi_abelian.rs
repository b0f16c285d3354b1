//! The dΔ-lemma, the `Ker Δ` zig-zag certificate and the bracket induced on
//! `H(A, d)`.

use std::collections::BTreeMap;

use crate::bv::BVStructure;
use crate::error::{Error, Result};
use crate::linalg::{homology, rank, Homology, SparseMatrix, Subspace, Vector};

/// The three subspaces of `A^n` compared by the dΔ-lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdDegree {
    pub degree: i64,
    pub ker_d_im_delta: Subspace,
    pub ker_delta_im_d: Subspace,
    pub im_d_delta: Subspace,
}

impl DdDegree {
    pub fn holds(&self) -> bool {
        self.ker_d_im_delta == self.ker_delta_im_d && self.ker_delta_im_d == self.im_d_delta
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdCertificate {
    pub degrees: Vec<DdDegree>,
}

impl DdCertificate {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(DdDegree::holds)
    }

    pub fn failing_degree(&self) -> Option<i64> {
        self.degrees.iter().find(|d| !d.holds()).map(|d| d.degree)
    }
}

/// `Ker d ∩ Im Δ = Ker Δ ∩ Im d = Im dΔ` in every degree, decided by exact
/// comparison of echelon bases.
pub fn dd_lemma(b: &BVStructure) -> Result<DdCertificate> {
    crate::degeneration::check_square_zero(b)?;
    let a = b.algebra();
    let d = b.d();
    let delta = b.delta1();
    let mut degrees = Vec::new();
    for n in a.degrees() {
        let ker_d = Subspace::kernel(&d.block(n));
        let ker_delta = Subspace::kernel(&delta.block(n));
        let im_delta = Subspace::image(&delta.block(n + 1));
        let im_d = Subspace::image(&d.block(n - 1));
        let d_delta = d.block(n - 1).mul(&delta.block(n))?;
        degrees.push(DdDegree {
            degree: n,
            ker_d_im_delta: ker_d.intersection(&im_delta)?,
            ker_delta_im_d: ker_delta.intersection(&im_d)?,
            im_d_delta: Subspace::image(&d_delta),
        });
    }
    Ok(DdCertificate { degrees })
}

/// Per-degree data of the zig-zag `A ← Ker Δ → H_Δ(A)`.
#[derive(Clone, Debug)]
pub struct ZigZagDegree {
    pub degree: i64,
    /// Basis of `Ker Δ ⊆ A^n` (columns of the inclusion matrix).
    pub kernel_basis: Vec<Vector>,
    /// `A^n ← (Ker Δ)^n`.
    pub inclusion: SparseMatrix,
    /// `H_Δ^n ← (Ker Δ)^n`.
    pub projection: SparseMatrix,
    pub betti_a: usize,
    pub betti_kernel: usize,
    pub betti_h_delta: usize,
    /// Ranks of the maps induced on homology by inclusion and projection.
    pub inclusion_rank: usize,
    pub projection_rank: usize,
}

#[derive(Clone, Debug)]
pub struct ZigZagCertificate {
    pub degrees: Vec<ZigZagDegree>,
    pub kernel_is_subcomplex: bool,
    /// `q ∘ d = 0`: the projection is a chain map to `(H_Δ, 0)`.
    pub projection_is_chain_map: bool,
    /// Every bracket of two `Ker Δ` basis vectors lies in `Im Δ`.
    pub brackets_in_image: bool,
    /// Number of basis pairs with a nonzero bracket.
    pub nonzero_brackets: usize,
    pub witness: Option<String>,
}

impl ZigZagCertificate {
    pub fn quasi_isomorphisms(&self) -> bool {
        self.degrees.iter().all(|z| {
            z.betti_a == z.betti_kernel
                && z.betti_kernel == z.betti_h_delta
                && z.inclusion_rank == z.betti_kernel
                && z.projection_rank == z.betti_kernel
        })
    }

    pub fn valid(&self) -> bool {
        self.kernel_is_subcomplex && self.projection_is_chain_map && self.brackets_in_image && self.quasi_isomorphisms()
    }
}

fn restricted_differential(
    field: crate::field::FieldSpec,
    d: &SparseMatrix,
    src: &[Vector],
    dst: &Subspace,
    dst_basis_len: usize,
) -> Result<Option<SparseMatrix>> {
    let mut cols = Vec::new();
    for v in src {
        let img = d.mul_vec(v)?;
        match dst.coordinates(&img) {
            Some(c) => cols.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(SparseMatrix::from_columns(field, dst_basis_len, &cols)))
}

/// Builds the certificate; refuses when the dΔ-lemma fails.
pub fn zigzag_certificate(b: &BVStructure) -> Result<ZigZagCertificate> {
    let dd = dd_lemma(b)?;
    if let Some(n) = dd.failing_degree() {
        return Err(Error::Precondition(format!("the dd-lemma fails in degree {n}")));
    }
    let a = b.algebra();
    let field = a.field();
    let d = b.d();
    let delta = b.delta1();
    let lo = a.min_degree() - 1;
    let hi = a.max_degree() + 1;
    let mut kernels: BTreeMap<i64, Subspace> = BTreeMap::new();
    for n in lo..=hi {
        kernels.insert(n, Subspace::kernel(&delta.block(n)));
    }
    // d restricted to Ker Δ, in kernel bases.
    let mut subcomplex = true;
    let mut dk: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
    for n in lo..hi {
        let src = kernels[&n].basis();
        let dst = &kernels[&(n + 1)];
        match restricted_differential(field, &d.block(n), &src, dst, dst.dim())? {
            Some(m) => {
                dk.insert(n, m);
            }
            None => {
                subcomplex = false;
                dk.insert(n, SparseMatrix::zeros(field, dst.dim(), src.len()));
            }
        }
    }
    let mut degrees = Vec::new();
    let mut chain = true;
    for n in a.degrees() {
        let kb = kernels[&n].basis();
        let inclusion = SparseMatrix::from_columns(field, a.dim(n), &kb);
        let h_a: Homology = homology(&d.block(n - 1), &d.block(n))?;
        let h_k = homology(&dk[&(n - 1)], &dk[&n])?;
        let h_delta = homology(&delta.block(n + 1), &delta.block(n))?;
        let proj_cols: Vec<Vector> = kb
            .iter()
            .map(|v| h_delta.coordinates(v))
            .collect::<Result<_>>()?;
        let projection = SparseMatrix::from_columns(field, h_delta.dim, &proj_cols);
        // q(d z) must vanish for z in (Ker Δ)^{n-1}.
        for z in kernels[&(n - 1)].basis() {
            let dz = d.block(n - 1).mul_vec(&z)?;
            if h_delta.cycles.contains(&dz) && !crate::linalg::is_zero_vector(&h_delta.coordinates(&dz)?) {
                chain = false;
            }
        }
        let incl_cols: Vec<Vector> = h_k
            .representatives
            .iter()
            .map(|c| h_a.coordinates(&inclusion.mul_vec(c)?))
            .collect::<Result<_>>()?;
        let proj_h: Vec<Vector> = h_k
            .representatives
            .iter()
            .map(|c| projection.mul_vec(c))
            .collect::<Result<_>>()?;
        degrees.push(ZigZagDegree {
            degree: n,
            inclusion_rank: rank(&SparseMatrix::from_columns(field, h_a.dim, &incl_cols)),
            projection_rank: rank(&SparseMatrix::from_columns(field, h_delta.dim, &proj_h)),
            kernel_basis: kb,
            inclusion,
            projection,
            betti_a: h_a.dim,
            betti_kernel: h_k.dim,
            betti_h_delta: h_delta.dim,
        });
    }
    let table = crate::bv::BracketTable::new(b)?;
    let mut in_image = true;
    let mut nonzero = 0;
    let mut witness = None;
    let elems: Vec<(i64, crate::algebra::Element)> = a
        .degrees()
        .into_iter()
        .flat_map(|n| {
            kernels[&n]
                .basis()
                .into_iter()
                .map(move |v| (n, v))
                .collect::<Vec<_>>()
        })
        .map(|(n, v)| (n, a.from_coordinates(n, &v).expect("basis length")))
        .collect();
    for (p, x) in &elems {
        for (q, y) in &elems {
            let br = table.bracket(x, y);
            if br.is_zero() {
                continue;
            }
            nonzero += 1;
            let deg = p + q - 1;
            let im = Subspace::image(&delta.block(deg + 1));
            if !im.contains(&br.coordinates(deg)) {
                in_image = false;
                witness.get_or_insert_with(|| format!("[{x}, {y}] = {br} is not in Im delta"));
            }
        }
    }
    Ok(ZigZagCertificate {
        degrees,
        kernel_is_subcomplex: subcomplex,
        projection_is_chain_map: chain,
        brackets_in_image: in_image,
        nonzero_brackets: nonzero,
        witness,
    })
}

/// The bracket induced on `H(A, d)`: for homology basis classes `(n, i)`
/// and `(m, j)`, the coordinates of `[z_i, z_j]` in `H^{n+m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedBracket {
    pub betti: BTreeMap<i64, usize>,
    pub entries: BTreeMap<((i64, usize), (i64, usize)), Vector>,
}

impl InducedBracket {
    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| crate::linalg::is_zero_vector(v))
    }

    /// First nonzero entry, formatted.
    pub fn witness(&self) -> Option<String> {
        self.entries
            .iter()
            .find(|(_, v)| !crate::linalg::is_zero_vector(v))
            .map(|(((n, i), (m, j)), v)| {
                let cs: Vec<String> = v.iter().map(ToString::to_string).collect();
                format!("[h{n}_{i}, h{m}_{j}] = ({})", cs.join(", "))
            })
    }
}

/// Homology of `(A, d)` in every degree, indexed by degree.
pub fn d_homology(b: &BVStructure) -> Result<BTreeMap<i64, Homology>> {
    let a = b.algebra();
    let d = b.d();
    let mut out = BTreeMap::new();
    for n in a.min_degree() - 1..=a.max_degree() + 1 {
        out.insert(n, homology(&d.block(n - 1), &d.block(n))?);
    }
    Ok(out)
}

pub fn induced_bracket_on_homology(b: &BVStructure) -> Result<InducedBracket> {
    let a = b.algebra();
    let homs = d_homology(b)?;
    let table = crate::bv::BracketTable::new(b)?;
    let mut reps = Vec::new();
    for n in a.degrees() {
        for (i, z) in homs[&n].representatives.iter().enumerate() {
            reps.push(((n, i), a.from_coordinates(n, z)?));
        }
    }
    let mut entries = BTreeMap::new();
    for (ki, x) in &reps {
        for (kj, y) in &reps {
            let deg = ki.0 + kj.0 - 1;
            let br = table.bracket(x, y);
            let Some(h) = homs.get(&deg) else {
                continue;
            };
            if h.dim == 0 {
                continue;
            }
            entries.insert((*ki, *kj), h.coordinates(&br.coordinates(deg))?);
        }
    }
    let betti = a.degrees().into_iter().map(|n| (n, homs[&n].dim)).collect();
    Ok(InducedBracket { betti, entries })
}
