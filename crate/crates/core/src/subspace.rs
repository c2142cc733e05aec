//! Subspaces V ⊆ GF(2)^E and the binary matroid M(V) they define.
//!
//! A [`Subspace`] stores its basis in reduced row echelon form, so two
//! values are equal exactly when their bases are bit-identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: BitMatrix,
    pivots: Vec<usize>,
}

/// The bicycle space V ∩ V⊥ together with its dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicycle {
    pub space: Subspace,
    pub d: usize,
}

/// |supp(x)| mod 4.
pub fn q_weight(x: &BitVector) -> u8 {
    (x.weight() % 4) as u8
}

impl Subspace {
    /// The span of the rows of `rows`.
    pub fn from_rows(rows: &BitMatrix) -> Self {
        let ech = rows.rref();
        Self {
            basis: ech.reduced,
            pivots: ech.pivots,
        }
    }

    /// The span of `vectors`, all of length `n`.
    pub fn span(n: usize, vectors: Vec<BitVector>) -> Result<Self> {
        Ok(Self::from_rows(&BitMatrix::from_rows(n, vectors)?))
    }

    pub fn zero(n: usize) -> Self {
        Self {
            basis: BitMatrix::empty(n),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            basis: BitMatrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical (reduced echelon) basis.
    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, x: &BitVector) -> bool {
        if x.len() != self.ground_size() {
            return false;
        }
        let mut v = x.clone();
        for (row, &p) in self.basis.row_vectors().iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v.is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.row_vectors().iter().all(|v| other.contains(v))
    }

    /// V⊥ = {w : ⟨w, v⟩ = 0 for all v ∈ V}.
    pub fn dual(&self) -> Subspace {
        Self::from_rows(&self.basis.kernel_basis())
    }

    /// V ∩ V⊥, computed from the kernel of the Gram matrix of the basis.
    pub fn bicycle(&self) -> Bicycle {
        let coeffs = self.basis.gram().kernel_basis();
        let vectors: Vec<BitVector> = coeffs.row_vectors().iter().map(|c| self.basis.combine(c)).collect();
        let space = Self::from_rows(&BitMatrix::from_rows(self.ground_size(), vectors).expect("uniform rows"));
        let d = space.dim();
        Bicycle { space, d }
    }

    /// d(V) = dim(V) − rank(A Aᵀ).
    pub fn bicycle_dimension(&self) -> usize {
        self.dim() - self.basis.gram().rank()
    }

    pub fn is_pedestrian(&self) -> bool {
        self.bicycle_dimension() == 0
    }

    /// V/e: delete coordinate `e` from every vector. Coordinates above `e`
    /// are renumbered down by one.
    pub fn contract(&self, e: usize) -> Result<Subspace> {
        let n = self.ground_size();
        if e >= n {
            return Err(Error::CoordinateOutOfRange { index: e, size: n });
        }
        let rows = self.basis.row_vectors().iter().map(|v| v.delete(e)).collect();
        Ok(Self::from_rows(&BitMatrix::from_rows(n - 1, rows)?))
    }

    /// Rank of `subset` in M(V): |F| − dim{v ∈ V : supp(v) ⊆ F}.
    ///
    /// The vectors of V supported inside F are the combinations c·A with
    /// c·A[:, E∖F] = 0, so their dimension is k − rank(A[:, E∖F]).
    pub fn matroid_rank(&self, subset: &BitVector) -> Result<usize> {
        let n = self.ground_size();
        if subset.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: subset.len(),
            });
        }
        let outside: Vec<usize> = (0..n).filter(|&i| !subset.get(i)).collect();
        let restricted = self.basis.submatrix(&(0..self.dim()).collect::<Vec<_>>(), &outside);
        let inside_dim = self.dim() - restricted.rank();
        Ok(subset.weight() - inside_dim)
    }

    /// r(E) = |E| − dim(V).
    pub fn matroid_rank_full(&self) -> usize {
        self.ground_size() - self.dim()
    }

    /// The image {v ∘ π⁻¹ : v ∈ V}: coordinate i of v moves to π(i).
    pub fn permute(&self, perm: &[usize]) -> Result<Subspace> {
        let n = self.ground_size();
        check_permutation(perm, n)?;
        let rows = self
            .basis
            .row_vectors()
            .iter()
            .map(|v| BitVector::from_support(n, v.support().map(|i| perm[i])))
            .collect();
        Ok(Self::from_rows(&BitMatrix::from_rows(n, rows)?))
    }

    /// Sample of a uniformly random k-dimensional subspace of GF(2)^n.
    pub fn random(n: usize, k: usize, seed: u64) -> Result<Subspace> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(n, k, &mut rng)
    }

    /// Rejection sampling: draw uniform k×n matrices until one has rank k.
    pub fn random_with<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Subspace> {
        if k > n {
            return Err(Error::DimensionTooLarge { n, k });
        }
        loop {
            let rows: Vec<BitVector> = (0..k).map(|_| random_vector(n, rng)).collect();
            let s = Self::from_rows(&BitMatrix::from_rows(n, rows)?);
            if s.dim() == k {
                return Ok(s);
            }
        }
    }

    /// Every subspace of GF(2)^n, enumerated through their reduced echelon
    /// bases. Ordered by dimension, then pivot set, then free entries.
    pub fn enumerate_all(n: usize) -> Vec<Subspace> {
        (0..=n).flat_map(|k| Self::enumerate_dim(n, k)).collect()
    }

    /// Every k-dimensional subspace of GF(2)^n.
    pub fn enumerate_dim(n: usize, k: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        for pivots in combinations(n, k) {
            // Row i may carry free bits at non-pivot columns to the right of its pivot.
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &p)| ((p + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            assert!(free.len() < 64, "enumeration too large");
            for mask in 0u64..(1u64 << free.len()) {
                let mut rows: Vec<BitVector> = pivots.iter().map(|&p| BitVector::unit(n, p)).collect();
                for (bit, &(i, c)) in free.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        rows[i].set(c, true);
                    }
                }
                out.push(Subspace {
                    basis: BitMatrix::from_rows(n, rows).expect("uniform rows"),
                    pivots: pivots.clone(),
                });
            }
        }
        out
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(n={}, [", self.ground_size())?;
        for (i, r) in self.basis.row_vectors().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("])")
    }
}

pub(crate) fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitVector {
    BitVector::from_support(n, (0..n).filter(|_| rng.gen::<bool>()))
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::NotAPermutation { size: n });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotAPermutation { size: n });
        }
    }
    Ok(())
}

/// Inverse of a permutation given as an image table.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
