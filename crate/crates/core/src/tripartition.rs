//! Canonical tripartition (F₋₁, F₀, F₁): element e lies in F_i when
//! contracting it changes the bicycle dimension by i.

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::qform::{FormKind, QBasis};
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tripartition {
    pub f_minus: Vec<usize>,
    pub f_zero: Vec<usize>,
    pub f_plus: Vec<usize>,
}

impl Tripartition {
    fn from_classes(classes: &[i8]) -> Self {
        let pick = |c: i8| {
            classes
                .iter()
                .enumerate()
                .filter(|(_, &x)| x == c)
                .map(|(i, _)| i)
                .collect()
        };
        Self {
            f_minus: pick(-1),
            f_zero: pick(0),
            f_plus: pick(1),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.f_minus.len() + self.f_zero.len() + self.f_plus.len()
    }

    /// (|F₋₁|, |F₀|, |F₁|)
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.f_minus.len(), self.f_zero.len(), self.f_plus.len())
    }

    /// d(V/e) − d(V) for element `e`.
    pub fn class_of(&self, e: usize) -> Option<i8> {
        if self.f_minus.binary_search(&e).is_ok() {
            Some(-1)
        } else if self.f_zero.binary_search(&e).is_ok() {
            Some(0)
        } else if self.f_plus.binary_search(&e).is_ok() {
            Some(1)
        } else {
            None
        }
    }

    /// E ∖ F₋₁, in increasing order.
    pub fn non_bicycle_elements(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.f_zero.iter().chain(&self.f_plus).copied().collect();
        f.sort_unstable();
        f
    }

    /// The tripartition after relabelling element i as perm[i].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let map = |s: &[usize]| {
            let mut out: Vec<usize> = s.iter().map(|&i| perm[i]).collect();
            out.sort_unstable();
            out
        };
        Self {
            f_minus: map(&self.f_minus),
            f_zero: map(&self.f_zero),
            f_plus: map(&self.f_plus),
        }
    }
}

/// Classifies each element by recomputing d(V/e) from scratch.
pub fn tripartition_oracle(v: &Subspace) -> Result<Tripartition> {
    let d = v.bicycle_dimension() as i64;
    let classes = (0..v.ground_size())
        .map(|e| {
            let delta = v.contract(e)?.bicycle_dimension() as i64 - d;
            match delta {
                -1..=1 => Ok(delta as i8),
                _ => Err(Error::InvariantViolation(format!(
                    "contracting element {e} changes the bicycle dimension by {delta}"
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Tripartition::from_classes(&classes))
}

/// Reads the tripartition off a q-basis of `v` in O(dim(V)·|E|) time.
///
/// F₋₁ is the union of the bicycle supports. Loops of M(V) always keep the
/// bicycle dimension and go to F₀. Among the rest, F₁ is the support of the
/// sum of an orthogonal free part, and empty for an alternating one.
pub fn tripartition_fast(qb: &QBasis, v: &Subspace) -> Result<Tripartition> {
    let n = v.ground_size();
    if qb.ground_size() != n || qb.dim() != v.dim() {
        return Err(Error::InvalidQBasis(format!(
            "q-basis of a {}-dimensional space in GF(2)^{} does not match a {}-dimensional space in GF(2)^{}",
            qb.dim(),
            qb.ground_size(),
            v.dim(),
            n
        )));
    }
    let mut bicycle_support = BitVector::zeros(n);
    for b in qb.bicycle_part() {
        bicycle_support.or_assign(b);
    }
    // e_e ∈ V exactly when a reduced echelon row is the unit vector at its pivot.
    let loops = BitVector::from_support(
        n,
        v.basis()
            .row_vectors()
            .iter()
            .zip(v.pivots())
            .filter(|(r, _)| r.weight() == 1)
            .map(|(_, &p)| p),
    );
    let plus = match qb.kind() {
        FormKind::Orthogonal => {
            let mut sum = BitVector::zeros(n);
            for f in qb.free_part() {
                sum.xor_assign(f);
            }
            sum.and_not(&bicycle_support).and_not(&loops)
        }
        FormKind::Alternating | FormKind::Empty => BitVector::zeros(n),
    };
    let classes: Vec<i8> = (0..n)
        .map(|e| {
            if bicycle_support.get(e) {
                -1
            } else if plus.get(e) {
                1
            } else {
                0
            }
        })
        .collect();
    Ok(Tripartition::from_classes(&classes))
}
