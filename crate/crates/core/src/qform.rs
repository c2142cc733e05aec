//! The ℤ/4ℤ-valued quadratic form q_V(x) = |supp(x)| mod 4 on a subspace V.
//!
//! A [`QBasis`] splits a basis of V into a free part spanning a complement
//! Ṽ of the bicycle space (orthogonal or alternating for the standard inner
//! product) followed by a basis of V ∩ V⊥ in which every vector except
//! possibly the last has q = 0. Brown's invariant σ of the induced form on
//! V/(V ∩ V⊥) is then read off the q-values of the free part.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::caps;
use crate::error::{Error, Result};
use crate::gaussian::GaussianInteger;
use crate::gf2::{BitMatrix, BitVector};
use crate::subspace::{q_weight, random_vector, Subspace};

/// Shape of the free part of a q-basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    /// Gram matrix of the free part is the identity; all free q-values odd.
    Orthogonal,
    /// Gram matrix is [[0, I], [I, 0]] pairing i with i + m; all free q-values even.
    Alternating,
    /// No free part.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBasis {
    ground_size: usize,
    vectors: Vec<BitVector>,
    kind: FormKind,
    d: usize,
    q_values: Vec<u8>,
}

impl QBasis {
    /// Assembles a q-basis from a free part and a bicycle part, checking every
    /// structural condition.
    pub fn from_parts(
        ground_size: usize,
        free: Vec<BitVector>,
        kind: FormKind,
        bicycle: Vec<BitVector>,
    ) -> Result<Self> {
        let d = bicycle.len();
        let mut vectors = free;
        vectors.extend(bicycle);
        let q_values = vectors.iter().map(q_weight).collect();
        let qb = Self {
            ground_size,
            vectors,
            kind,
            d,
            q_values,
        };
        qb.validate()?;
        Ok(qb)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    /// k = dim(V).
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Bicycle dimension d(V).
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.vectors
    }

    pub fn q_values(&self) -> &[u8] {
        &self.q_values
    }

    /// v₁..v_{k−d}, spanning the complement Ṽ.
    pub fn free_part(&self) -> &[BitVector] {
        &self.vectors[..self.dim() - self.d]
    }

    /// v_{k−d+1}..v_k, spanning V ∩ V⊥.
    pub fn bicycle_part(&self) -> &[BitVector] {
        &self.vectors[self.dim() - self.d..]
    }

    /// m = (k − d)/2 for an alternating free part.
    pub fn half_rank(&self) -> usize {
        (self.dim() - self.d) / 2
    }

    pub fn span(&self) -> Subspace {
        Subspace::span(self.ground_size, self.vectors.clone()).expect("uniform rows")
    }

    pub fn free_span(&self) -> Subspace {
        Subspace::span(self.ground_size, self.free_part().to_vec()).expect("uniform rows")
    }

    /// Structural check of every q-basis condition.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidQBasis(msg));
        if let Some(v) = self.vectors.iter().find(|v| v.len() != self.ground_size) {
            return bad(format!(
                "vector of length {} in ground set of size {}",
                v.len(),
                self.ground_size
            ));
        }
        if self.d > self.dim() {
            return bad(format!("bicycle dimension {} exceeds dimension {}", self.d, self.dim()));
        }
        let matrix = BitMatrix::from_rows(self.ground_size, self.vectors.clone())?;
        if matrix.rank() != self.dim() {
            return bad("vectors are dependent".into());
        }
        let free_len = self.dim() - self.d;
        match (self.kind, free_len) {
            (FormKind::Empty, 0) => {}
            (FormKind::Empty, _) => return bad("empty kind with nonempty free part".into()),
            (_, 0) => return bad("nonempty kind with empty free part".into()),
            (FormKind::Alternating, f) if f % 2 == 1 => return bad("alternating part of odd size".into()),
            _ => {}
        }
        let m = free_len / 2;
        let free = self.free_part();
        for i in 0..free_len {
            for j in 0..free_len {
                let expected = match self.kind {
                    FormKind::Orthogonal => i == j,
                    FormKind::Alternating => i + m == j || j + m == i,
                    FormKind::Empty => false,
                };
                if free[i].dot(&free[j]) != expected {
                    return bad(format!("free part Gram entry ({i},{j}) is not {}", u8::from(expected)));
                }
            }
        }
        for (i, b) in self.bicycle_part().iter().enumerate() {
            if self.vectors.iter().any(|v| v.dot(b)) {
                return bad(format!("bicycle vector {i} is not orthogonal to V"));
            }
        }
        let (free_q, bicycle_q) = self.q_values.split_at(free_len);
        match self.kind {
            FormKind::Orthogonal if free_q.iter().any(|q| q % 2 == 0) => {
                return bad("orthogonal free part with an even q-value".into())
            }
            FormKind::Alternating if free_q.iter().any(|q| q % 2 == 1) => {
                return bad("alternating free part with an odd q-value".into())
            }
            _ => {}
        }
        if bicycle_q.iter().any(|q| q % 2 == 1) {
            return bad("odd q-value on the bicycle space".into());
        }
        if self.d >= 2 && bicycle_q[..self.d - 1].iter().any(|&q| q != 0) {
            return bad("nonzero q-value before the last bicycle vector".into());
        }
        Ok(())
    }

    /// Whether q vanishes on all of V ∩ V⊥.
    pub fn bicycle_q_vanishes(&self) -> bool {
        self.d == 0 || self.q_values[self.dim() - 1] == 0
    }

    /// Brown's invariant σ(q̃_V) ∈ ℤ/8ℤ of the form induced on V/(V ∩ V⊥).
    pub fn brown_sigma(&self) -> Result<u8> {
        if !self.bicycle_q_vanishes() {
            return Err(Error::UndefinedInvariant);
        }
        let free_q = &self.q_values[..self.dim() - self.d];
        let sigma = match self.kind {
            FormKind::Empty => 0,
            FormKind::Orthogonal => {
                let ones = free_q.iter().filter(|&&q| q == 1).count() as i64;
                let threes = free_q.iter().filter(|&&q| q == 3).count() as i64;
                (ones - threes).rem_euclid(8)
            }
            FormKind::Alternating => {
                // A hyperbolic pair contributes 4 exactly when both of its q-values are 2
                // (the Arf invariant of the pair).
                let m = self.half_rank();
                let both_two = (0..m).filter(|&i| free_q[i] == 2 && free_q[i + m] == 2).count() as i64;
                (4 * both_two).rem_euclid(8)
            }
        };
        Ok(sigma as u8)
    }
}

/// A q-basis of `v` in O(dim(V)²·|E|) time.
pub fn compute_q_basis(v: &Subspace) -> QBasis {
    build(
        v,
        v.basis().row_vectors().to_vec(),
        None::<&mut rand_chacha::ChaCha8Rng>,
    )
}

/// A q-basis of `v` built from a randomly mixed starting basis and a randomly
/// chosen complement of the bicycle space.
pub fn compute_q_basis_randomized<R: Rng + ?Sized>(v: &Subspace, rng: &mut R) -> QBasis {
    let mut rows = v.basis().row_vectors().to_vec();
    mix(&mut rows, rng);
    build(v, rows, Some(rng))
}

/// Random invertible row operations followed by a shuffle.
fn mix<R: Rng + ?Sized>(rows: &mut [BitVector], rng: &mut R) {
    let k = rows.len();
    if k < 2 {
        return;
    }
    for _ in 0..4 * k {
        let i = rng.gen_range(0..k);
        let j = rng.gen_range(0..k);
        if i != j {
            let src = rows[j].clone();
            rows[i].xor_assign(&src);
        }
    }
    rows.shuffle(rng);
}

fn build<R: Rng + ?Sized>(v: &Subspace, rows: Vec<BitVector>, rng: Option<&mut R>) -> QBasis {
    let n = v.ground_size();
    let basis = BitMatrix::from_rows(n, rows).expect("uniform rows");

    // Coefficient vectors c with c·A ∈ V⊥ form the kernel of the Gram matrix.
    let gram = basis.gram();
    let kernel = gram.kernel_basis();
    let kernel_pivots = kernel.rref().pivots;
    let mut bicycle = kernel.mul(&basis).expect("kernel has k columns").into_rows();

    // Rows of A at non-pivot positions of the kernel complete the bicycle basis to a basis of V.
    let free_idx: Vec<usize> = (0..basis.rows())
        .filter(|j| kernel_pivots.binary_search(j).is_err())
        .collect();
    let mut free: Vec<BitVector> = free_idx.iter().map(|&j| basis.row(j).clone()).collect();

    if let Some(rng) = rng {
        // Shift the complement by random bicycle vectors.
        for f in free.iter_mut() {
            let coeffs = random_vector(bicycle.len(), rng);
            for i in coeffs.support() {
                f.xor_assign(&bicycle[i]);
            }
        }
        mix(&mut bicycle, rng);
    }

    // Bicycle shifts leave inner products unchanged, so the free Gram matrix is a submatrix.
    let (kind, coeffs) = decompose_free_part(gram.submatrix(&free_idx, &free_idx));
    let free = if free.is_empty() {
        Vec::new()
    } else {
        coeffs
            .mul(&BitMatrix::from_rows(n, free).expect("uniform rows"))
            .expect("square transform")
            .into_rows()
    };
    normalize_bicycle(&mut bicycle);

    let qb = QBasis {
        ground_size: n,
        q_values: free.iter().chain(&bicycle).map(q_weight).collect(),
        d: bicycle.len(),
        vectors: free.into_iter().chain(bicycle).collect(),
        kind,
    };
    // Full validation is quadratic in dim(V) times |E|; keep it to sizes tests exercise.
    if cfg!(debug_assertions) && qb.dim() <= 256 {
        assert_eq!(qb.validate(), Ok(()));
    }
    qb
}

/// Turns a basis with nondegenerate Gram matrix `g` into an orthogonal or
/// alternating basis. Works on `g` alone and returns the new basis as
/// coefficient rows over the old one.
fn decompose_free_part(mut g: BitMatrix) -> (FormKind, BitMatrix) {
    let f = g.rows();
    // Row i of `t` expresses the current vector i in the input basis.
    let mut t = BitMatrix::identity(f);
    let mut active = BitVector::ones(f);

    // Split off vectors of odd weight while any remain. Adding p to every u with
    // ⟨u,p⟩ = 1 changes the Gram matrix on the rest by s sᵀ, where s is that set.
    let mut orthogonal = Vec::new();
    loop {
        let odd = active.support().find(|&i| g.get(i, i));
        let Some(p) = odd else { break };
        active.set(p, false);
        let s = g.row(p).and(&active);
        let tp = t.row(p).clone();
        for u in s.support() {
            g.row_mut(u).xor_assign(&s);
            t.row_mut(u).xor_assign(&tp);
        }
        orthogonal.push(tp);
    }

    // What remains is alternating: peel off hyperbolic pairs. With a = ⟨·,y⟩ and
    // b = ⟨·,x⟩, u ↦ u + a_u x + b_u y changes the Gram matrix by a bᵀ + b aᵀ.
    let mut pairs = Vec::new();
    loop {
        let last = active.support().last();
        let Some(x) = last else { break };
        active.set(x, false);
        let y = g
            .row(x)
            .and(&active)
            .first_one()
            .expect("inner product is nondegenerate on the free part");
        active.set(y, false);
        let b = g.row(x).and(&active);
        let a = g.row(y).and(&active);
        let (tx, ty) = (t.row(x).clone(), t.row(y).clone());
        for u in a.support() {
            g.row_mut(u).xor_assign(&b);
            t.row_mut(u).xor_assign(&tx);
        }
        for u in b.support() {
            g.row_mut(u).xor_assign(&a);
            t.row_mut(u).xor_assign(&ty);
        }
        pairs.push((tx, ty));
    }

    let rows = |rows: Vec<BitVector>| BitMatrix::from_rows(f, rows).expect("uniform rows");
    if orthogonal.is_empty() {
        if pairs.is_empty() {
            return (FormKind::Empty, rows(Vec::new()));
        }
        let (xs, ys): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        return (FormKind::Alternating, rows(xs.into_iter().chain(ys).collect()));
    }

    // u ⊥ (x, y) with ⟨u,u⟩ = 1: {u+x+y, u+x, u+y} is orthogonal and spans the same space.
    for (x, y) in pairs {
        let u = orthogonal.pop().expect("nonempty");
        let ux = u.xor(&x);
        let uy = u.xor(&y);
        orthogonal.push(ux.xor(&y));
        orthogonal.push(ux);
        orthogonal.push(uy);
    }
    (FormKind::Orthogonal, rows(orthogonal))
}

/// q is additive into {0, 2} on the bicycle space; push any q = 2 to the last slot.
fn normalize_bicycle(bicycle: &mut [BitVector]) {
    let Some(idx) = bicycle.iter().position(|b| q_weight(b) == 2) else {
        return;
    };
    let last = bicycle.len() - 1;
    bicycle.swap(idx, last);
    let anchor = bicycle[last].clone();
    for b in bicycle[..last].iter_mut() {
        if q_weight(b) == 2 {
            b.xor_assign(&anchor);
        }
    }
}

/// Σ_{x ∈ V} ι^{q_V(x)}, by enumerating all 2^dim(V) vectors.
pub fn brown_sum_oracle(v: &Subspace) -> Result<GaussianInteger> {
    brown_sum_oracle_capped(v, caps::BROWN_DIM)
}

pub fn brown_sum_oracle_capped(v: &Subspace, cap: usize) -> Result<GaussianInteger> {
    let k = v.dim();
    if k > cap {
        return Err(Error::CapExceeded {
            what: "dim(V)",
            value: k,
            cap,
        });
    }
    let rows = v.basis().row_vectors();
    let mut counts = [0i64; 4];
    let mut x = BitVector::zeros(v.ground_size());
    counts[0] += 1;
    // Gray-code walk: step i flips basis vector tz(i).
    for step in 1u64..(1u64 << k) {
        x.xor_assign(&rows[step.trailing_zeros() as usize]);
        counts[usize::from(q_weight(&x))] += 1;
    }
    Ok(GaussianInteger::new(counts[0] - counts[2], counts[1] - counts[3]))
}
