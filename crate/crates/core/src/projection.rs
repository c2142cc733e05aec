//! Orthogonal projection onto V along V⊥ and its support graphs.
//!
//! For a pedestrian V the projector Q_V = Aᵀ(AAᵀ)⁻¹A is a rank-one sum over
//! an orthogonal or alternating q-basis. For general V the projector onto
//! the free part Ṽ is taken instead, restricted to F = E ∖ F₋₁ where its
//! entries do not depend on which complement Ṽ was chosen.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::graph::SupportGraph;
use crate::qform::{compute_q_basis, FormKind, QBasis};
use crate::subspace::Subspace;

/// A square GF(2) matrix whose rows and columns are indexed by `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    matrix: BitMatrix,
    domain: Vec<usize>,
}

impl Projector {
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    /// Principal submatrix on the given positions of the domain.
    pub fn restrict(&self, positions: &[usize]) -> Projector {
        Projector {
            matrix: self.matrix.submatrix(positions, positions),
            domain: positions.iter().map(|&p| self.domain[p]).collect(),
        }
    }

    /// Graph on the domain with an edge wherever an off-diagonal entry is 1
    /// and a loop flag wherever a diagonal entry is 1.
    pub fn support_graph(&self) -> SupportGraph {
        SupportGraph::from_matrix(self.domain.clone(), &self.matrix)
    }
}

/// Σ v_i v_iᵀ (orthogonal) or Σ v_i v_{i+m}ᵀ + v_{i+m} v_iᵀ (alternating) over
/// the free part of `qb`. Row e of the result is Σ_{i : v_i[e] = 1} of the
/// partner vectors.
fn rank_one_sum(qb: &QBasis) -> BitMatrix {
    let n = qb.ground_size();
    let mut q = BitMatrix::zeros(n, n);
    let mut add = |left: &BitVector, right: &BitVector| {
        for e in left.support() {
            q.row_mut(e).xor_assign(right);
        }
    };
    let free = qb.free_part();
    match qb.kind() {
        FormKind::Empty => {}
        FormKind::Orthogonal => {
            for v in free {
                add(v, v);
            }
        }
        FormKind::Alternating => {
            let m = qb.half_rank();
            for i in 0..m {
                add(&free[i], &free[i + m]);
                add(&free[i + m], &free[i]);
            }
        }
    }
    q
}

/// Q_V for a pedestrian V, from its q-basis.
pub fn projector(qb: &QBasis) -> Result<Projector> {
    if qb.d() > 0 {
        return Err(Error::NotPedestrian { d: qb.d() });
    }
    Ok(free_part_projector(qb))
}

/// Q_Ṽ on all of E, where Ṽ is the span of the free part of `qb`.
pub fn free_part_projector(qb: &QBasis) -> Projector {
    Projector {
        matrix: rank_one_sum(qb),
        domain: (0..qb.ground_size()).collect(),
    }
}

/// E ∖ F₋₁: coordinates outside every bicycle support.
pub fn non_bicycle_elements(qb: &QBasis) -> Vec<usize> {
    let mut covered = BitVector::zeros(qb.ground_size());
    for b in qb.bicycle_part() {
        covered.or_assign(b);
    }
    (0..qb.ground_size()).filter(|&e| !covered.get(e)).collect()
}

/// Q_Ṽ[F, F] with F = E ∖ F₋₁.
pub fn reduced_projector(qb: &QBasis) -> Projector {
    free_part_projector(qb).restrict(&non_bicycle_elements(qb))
}

/// G̃_V, the support graph of Q_Ṽ[F, F]; equal to G_V when V is pedestrian.
pub fn reduced_graph(v: &Subspace) -> SupportGraph {
    reduced_projector(&compute_q_basis(v)).support_graph()
}

/// G_V for a pedestrian V.
pub fn projection_graph(v: &Subspace) -> Result<SupportGraph> {
    Ok(projector(&compute_q_basis(v))?.support_graph())
}
