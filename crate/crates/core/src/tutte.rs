//! T_M(−ι, ι) for binary matroids M = M(V).
//!
//! The fast path reads the value off a q-basis: it vanishes unless q is zero
//! on the bicycle space, and otherwise equals
//! √2^{d(V)} · e^{ιπ(σ + |E| − 3r(E))/4}. Two exponential oracles back it up:
//! the subset expansion of the Tutte polynomial and Greene's identity
//! Σ_{x∈V} ι^{q(x)} = ι^{r(E)} (1−ι)^{|E|−r(E)} T_M(−ι, ι).

use std::fmt;

use num_bigint::BigInt;

use crate::caps;
use crate::error::{Error, Result};
use crate::gaussian::GaussianInteger;
use crate::gf2::BitVector;
use crate::qform::{brown_sum_oracle_capped, compute_q_basis, QBasis};
use crate::subspace::Subspace;

/// Exact value of T_M(−ι, ι): zero, or √2^d · e^{ιπ·octant/4}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TuttePointValue {
    Zero,
    Polar { d: u32, octant: u8 },
}

impl TuttePointValue {
    pub fn polar(d: u32, octant: i64) -> Self {
        Self::Polar {
            d,
            octant: octant.rem_euclid(8) as u8,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        match *self {
            Self::Zero => Self::Zero,
            Self::Polar { d, octant } => Self::polar(d, -i64::from(octant)),
        }
    }

    /// |T|² = 2^d, or 0.
    pub fn modulus_squared(&self) -> BigInt {
        match *self {
            Self::Zero => BigInt::from(0),
            Self::Polar { d, .. } => BigInt::from(1) << d as usize,
        }
    }

    /// The value as a Gaussian integer, when d and octant have equal parity.
    pub fn to_gaussian(&self) -> Option<GaussianInteger> {
        match *self {
            Self::Zero => Some(GaussianInteger::zero()),
            Self::Polar { d, octant } => GaussianInteger::from_polar(d, octant),
        }
    }

    /// Symbolic form `sqrt2^d*exp(i*pi*k/4)`, or `0`.
    pub fn symbolic(&self) -> String {
        match *self {
            Self::Zero => "0".to_string(),
            Self::Polar { d, octant } => format!("sqrt2^{d}*exp(i*pi*{octant}/4)"),
        }
    }
}

impl fmt::Display for TuttePointValue {
    /// Values on the real or imaginary axis with an integer modulus print as
    /// Gaussian integers (`-1`, `2i`); everything else prints symbolically.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Zero => f.write_str("0"),
            Self::Polar { d, octant } if d % 2 == 0 && octant % 2 == 0 => {
                write!(f, "{}", self.to_gaussian().expect("even parity"))
            }
            Self::Polar { .. } => f.write_str(&self.symbolic()),
        }
    }
}

/// Everything the fast path computes along the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: TuttePointValue,
    /// Bicycle dimension d(V).
    pub d: usize,
    /// σ(q̃_V), absent when q does not vanish on the bicycle space.
    pub sigma: Option<u8>,
    /// r(E) = |E| − dim(V).
    pub rank: usize,
    pub ground_size: usize,
    pub dim: usize,
}

/// T_{M(V)}(−ι, ι) in O(dim(V)²·|E|) time.
pub fn evaluate(v: &Subspace) -> TuttePointValue {
    evaluate_with(&compute_q_basis(v)).value
}

pub fn evaluate_detailed(v: &Subspace) -> Evaluation {
    evaluate_with(&compute_q_basis(v))
}

/// Evaluation from an already computed q-basis, in O(dim(V)·|E|) time.
pub fn evaluate_with(qb: &QBasis) -> Evaluation {
    let n = qb.ground_size();
    let rank = n - qb.dim();
    let sigma = qb.brown_sigma().ok();
    let value = match sigma {
        None => TuttePointValue::Zero,
        Some(sigma) => TuttePointValue::polar(qb.d() as u32, i64::from(sigma) + n as i64 - 3 * rank as i64),
    };
    Evaluation {
        value,
        d: qb.d(),
        sigma,
        rank,
        ground_size: n,
        dim: qb.dim(),
    }
}

/// T_{M(V)}(−ι, ι) as the conjugate of T_{M(V⊥)}(−ι, ι).
pub fn evaluate_via_dual(v: &Subspace) -> TuttePointValue {
    evaluate(&v.dual()).conj()
}

/// Σ_{F⊆E} (−ι−1)^{r(E)−r(F)} (ι−1)^{|F|−r(F)} by direct subset enumeration.
pub fn brute_force_tutte_at_point(v: &Subspace) -> Result<GaussianInteger> {
    brute_force_tutte_at_point_capped(v, caps::TUTTE_GROUND)
}

pub fn brute_force_tutte_at_point_capped(v: &Subspace, cap: usize) -> Result<GaussianInteger> {
    let n = v.ground_size();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "|E|",
            value: n,
            cap,
        });
    }
    let full_rank = v.matroid_rank_full();
    // Tally subsets by (corank, nullity) first; the exponent table is tiny.
    let mut tally = vec![vec![0u64; n + 1]; n + 1];
    for mask in 0u64..(1u64 << n) {
        let subset = BitVector::from_mask(n, mask);
        let r = v.matroid_rank(&subset)?;
        tally[full_rank - r][subset.weight() - r] += 1;
    }
    let x = GaussianInteger::new(-1, -1);
    let y = GaussianInteger::new(-1, 1);
    let mut total = GaussianInteger::zero();
    for (a, row) in tally.iter().enumerate() {
        for (b, &count) in row.iter().enumerate() {
            if count > 0 {
                let term = &x.pow(a as u32) * &y.pow(b as u32);
                total += &term.scale(&BigInt::from(count));
            }
        }
    }
    Ok(total)
}

/// Both sides of Greene's identity: (Σ_{x∈V} ι^{q(x)}, ι^{r(E)}(1−ι)^{|E|−r(E)}·T).
pub fn greene_sum_check(v: &Subspace) -> Result<(GaussianInteger, GaussianInteger)> {
    greene_sum_check_capped(v, caps::BROWN_DIM, caps::TUTTE_GROUND)
}

pub fn greene_sum_check_capped(
    v: &Subspace,
    brown_cap: usize,
    tutte_cap: usize,
) -> Result<(GaussianInteger, GaussianInteger)> {
    let lhs = brown_sum_oracle_capped(v, brown_cap)?;
    let t = brute_force_tutte_at_point_capped(v, tutte_cap)?;
    let rank = v.matroid_rank_full();
    let factor =
        &GaussianInteger::i_pow(rank as i64) * &GaussianInteger::new(1, -1).pow((v.ground_size() - rank) as u32);
    Ok((lhs, &factor * &t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;

    fn sp(n: usize, rows: &[&[u8]]) -> Subspace {
        Subspace::from_rows(&BitMatrix::from_bits(n, rows).unwrap())
    }

    fn g(re: i64, im: i64) -> GaussianInteger {
        GaussianInteger::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&Subspace::zero(3)), TuttePointValue::Polar { d: 0, octant: 2 });
        assert_eq!(evaluate(&Subspace::full(1)), TuttePointValue::Polar { d: 0, octant: 2 });
        assert_eq!(evaluate(&sp(2, &[&[1, 1]])), TuttePointValue::Zero);
        let u34 = evaluate(&sp(4, &[&[1, 1, 1, 1]]));
        assert_eq!(u34, TuttePointValue::Polar { d: 1, octant: 3 });
        assert_eq!(u34.to_gaussian(), Some(g(-1, 1)));
        let u13 = evaluate(&sp(3, &[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(u13, TuttePointValue::Polar { d: 0, octant: 4 });
        assert_eq!(u13.to_gaussian(), Some(g(-1, 0)));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_tutte_at_point(&Subspace::zero(2)).unwrap(), g(-1, 0));
        assert_eq!(brute_force_tutte_at_point(&sp(2, &[&[1, 1]])).unwrap(), g(0, 0));
        assert_eq!(brute_force_tutte_at_point(&sp(4, &[&[1, 1, 1, 1]])).unwrap(), g(-1, 1));
        let err = brute_force_tutte_at_point_capped(&Subspace::zero(5), 4).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { value: 5, cap: 4, .. }));
    }

    #[test]
    fn greene_examples() {
        assert_eq!(greene_sum_check(&Subspace::zero(1)).unwrap(), (g(1, 0), g(1, 0)));
        assert_eq!(greene_sum_check(&sp(2, &[&[1, 1]])).unwrap(), (g(0, 0), g(0, 0)));
        assert_eq!(greene_sum_check(&sp(4, &[&[1, 1, 1, 1]])).unwrap(), (g(2, 0), g(2, 0)));
    }

    #[test]
    fn dual_examples() {
        // a single loop has T = y = ι; its dual, a single coloop, has T = x = −ι
        assert_eq!(evaluate(&Subspace::full(1)).conj(), evaluate(&Subspace::zero(1)));
        assert_eq!(evaluate_via_dual(&Subspace::zero(1)).to_gaussian(), Some(g(0, -1)));
        assert_eq!(evaluate_via_dual(&sp(2, &[&[1, 1]])), TuttePointValue::Zero);
        let u34 = sp(4, &[&[1, 1, 1, 1]]);
        assert_eq!(evaluate(&u34.dual()).to_gaussian(), Some(g(-1, -1)));
        assert_eq!(evaluate_via_dual(&u34), evaluate(&u34));
    }

    #[test]
    fn display_forms() {
        assert_eq!(TuttePointValue::Zero.to_string(), "0");
        assert_eq!(TuttePointValue::polar(0, 4).to_string(), "-1");
        assert_eq!(TuttePointValue::polar(2, 2).to_string(), "2i");
        assert_eq!(TuttePointValue::polar(1, 3).to_string(), "sqrt2^1*exp(i*pi*3/4)");
        assert_eq!(TuttePointValue::polar(2, 1).to_string(), "sqrt2^2*exp(i*pi*1/4)");
    }

    #[test]
    fn exhaustive_agreement_small() {
        for n in 0..=5 {
            for v in Subspace::enumerate_all(n) {
                let fast = evaluate(&v);
                let brute = brute_force_tutte_at_point(&v).unwrap();
                assert_eq!(fast.to_gaussian(), Some(brute.clone()), "{v:?}");
                assert_eq!(brute.norm_sqr(), fast.modulus_squared());
                let (lhs, rhs) = greene_sum_check(&v).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(evaluate_via_dual(&v), fast);
            }
        }
    }

    fn shuffled(n: usize, seed: u64) -> Vec<usize> {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        perm
    }

    proptest::proptest! {
        #[test]
        fn evaluate_is_permutation_invariant(n in 1usize..40, k in 0usize..40, seed in proptest::prelude::any::<u64>()) {
            let v = Subspace::random(n, k.min(n), seed).unwrap();
            let moved = v.permute(&shuffled(n, seed ^ 1)).unwrap();
            proptest::prop_assert_eq!(evaluate(&moved), evaluate(&v));
        }
    }
}
