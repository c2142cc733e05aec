//! Isomorphism invariants of M(V), the prefilter built on them, and the
//! pedestrian-density census.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::graph::{graph_iso_capped, SupportGraph};
use crate::projection::reduced_projector;
use crate::qform::compute_q_basis;
use crate::subspace::Subspace;
use crate::tripartition::{tripartition_fast, Tripartition};
use crate::tutte::{evaluate_with, Evaluation, TuttePointValue};

/// Invariants of M(V) computable from one basis of V in O(dim(V)·|E|²) time.
///
/// The three entries of `edge_counts` and `loop_counts` refer to G̃_V, G̃[F₀]
/// and G̃[F₁] in that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantProfile {
    pub ground_size: usize,
    pub dim: usize,
    pub tutte: TuttePointValue,
    pub tripartition_sizes: (usize, usize, usize),
    pub edge_counts: (usize, usize, usize),
    pub loop_counts: (usize, usize, usize),
}

impl InvariantProfile {
    /// Key/value text block, one field per line, fixed order.
    ///
    /// ```text
    /// ground_size = 4
    /// dim = 1
    /// tutte = d=1 octant=3        (or `tutte = zero`)
    /// tripartition_sizes = 4 0 0
    /// edge_counts = 0 0 0
    /// loop_counts = 0 0 0
    /// ```
    pub fn to_text(&self) -> String {
        let triple = |(a, b, c): (usize, usize, usize)| format!("{a} {b} {c}");
        let tutte = match self.tutte {
            TuttePointValue::Zero => "zero".to_string(),
            TuttePointValue::Polar { d, octant } => format!("d={d} octant={octant}"),
        };
        format!(
            "ground_size = {}\ndim = {}\ntutte = {}\ntripartition_sizes = {}\nedge_counts = {}\nloop_counts = {}\n",
            self.ground_size,
            self.dim,
            tutte,
            triple(self.tripartition_sizes),
            triple(self.edge_counts),
            triple(self.loop_counts),
        )
    }

    /// SHA-256 of [`to_text`](Self::to_text), as 64 lowercase hex digits.
    pub fn digest(&self) -> String {
        Sha256::digest(self.to_text().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Everything computed from a single q-basis of V.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub profile: InvariantProfile,
    pub evaluation: Evaluation,
    pub tripartition: Tripartition,
    /// G̃_V on E ∖ F₋₁; this is G_V when V is pedestrian.
    pub graph: SupportGraph,
}

impl Analysis {
    pub fn is_pedestrian(&self) -> bool {
        self.evaluation.d == 0
    }
}

pub fn analyze(v: &Subspace) -> Analysis {
    let qb = compute_q_basis(v);
    let evaluation = evaluate_with(&qb);
    let tripartition = tripartition_fast(&qb, v).expect("q-basis computed from v");
    let graph = reduced_projector(&qb).support_graph();
    let g0 = graph.induced(&tripartition.f_zero);
    let g1 = graph.induced(&tripartition.f_plus);
    let profile = InvariantProfile {
        ground_size: v.ground_size(),
        dim: v.dim(),
        tutte: evaluation.value,
        tripartition_sizes: tripartition.sizes(),
        edge_counts: (graph.edge_count(), g0.edge_count(), g1.edge_count()),
        loop_counts: (graph.loop_count(), g0.loop_count(), g1.loop_count()),
    };
    Analysis {
        profile,
        evaluation,
        tripartition,
        graph,
    }
}

pub fn profile(v: &Subspace) -> InvariantProfile {
    analyze(v).profile
}

/// The first invariant that told two spaces apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Discriminator {
    GroundSize,
    Dimension,
    Tutte,
    Tripartition,
    EdgeCounts,
    LoopCounts,
    ProjectionGraph,
    ReducedGraph,
}

impl fmt::Display for Discriminator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GroundSize => "ground_size",
            Self::Dimension => "dim",
            Self::Tutte => "tutte",
            Self::Tripartition => "tripartition_sizes",
            Self::EdgeCounts => "edge_counts",
            Self::LoopCounts => "loop_counts",
            Self::ProjectionGraph => "projection_graph",
            Self::ReducedGraph => "reduced_graph",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrefilterVerdict {
    DistinctCertain(Discriminator),
    IsomorphicCertain,
    Unknown,
}

impl fmt::Display for PrefilterVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DistinctCertain(by) => write!(f, "DistinctCertain ({by})"),
            Self::IsomorphicCertain => f.write_str("IsomorphicCertain"),
            Self::Unknown => f.write_str("Unknown"),
        }
    }
}

pub fn prefilter(v: &Subspace, w: &Subspace) -> PrefilterVerdict {
    prefilter_capped(v, w, caps::GRAPH_VERTICES)
}

pub fn prefilter_capped(v: &Subspace, w: &Subspace, graph_cap: usize) -> PrefilterVerdict {
    if v.ground_size() != w.ground_size() {
        return PrefilterVerdict::DistinctCertain(Discriminator::GroundSize);
    }
    if v.dim() != w.dim() {
        return PrefilterVerdict::DistinctCertain(Discriminator::Dimension);
    }
    if v == w {
        return PrefilterVerdict::IsomorphicCertain;
    }
    compare(&analyze(v), &analyze(w), graph_cap)
}

fn profile_discriminator(a: &InvariantProfile, b: &InvariantProfile) -> Option<Discriminator> {
    if a.ground_size != b.ground_size {
        Some(Discriminator::GroundSize)
    } else if a.dim != b.dim {
        Some(Discriminator::Dimension)
    } else if a.tutte != b.tutte {
        Some(Discriminator::Tutte)
    } else if a.tripartition_sizes != b.tripartition_sizes {
        Some(Discriminator::Tripartition)
    } else if a.edge_counts != b.edge_counts {
        Some(Discriminator::EdgeCounts)
    } else if a.loop_counts != b.loop_counts {
        Some(Discriminator::LoopCounts)
    } else {
        None
    }
}

/// Prefilter verdict from two precomputed analyses.
pub fn compare(a: &Analysis, b: &Analysis, graph_cap: usize) -> PrefilterVerdict {
    if let Some(by) = profile_discriminator(&a.profile, &b.profile) {
        return PrefilterVerdict::DistinctCertain(by);
    }
    // Equal Tutte values force equal pedestrian status.
    let pedestrian = a.is_pedestrian() && b.is_pedestrian();
    match graph_iso_capped(&a.graph, &b.graph, graph_cap) {
        Ok(true) if pedestrian => PrefilterVerdict::IsomorphicCertain,
        Ok(false) if pedestrian => PrefilterVerdict::DistinctCertain(Discriminator::ProjectionGraph),
        Ok(false) => PrefilterVerdict::DistinctCertain(Discriminator::ReducedGraph),
        Ok(true) | Err(_) => PrefilterVerdict::Unknown,
    }
}

/// Whether some coordinate permutation maps V onto W. Binary matroids are
/// uniquely representable over GF(2), so this decides M(V) ≅ M(W).
pub fn brute_matroid_iso(v: &Subspace, w: &Subspace) -> Result<bool> {
    brute_matroid_iso_capped(v, w, caps::ISO_GROUND)
}

pub fn brute_matroid_iso_capped(v: &Subspace, w: &Subspace, cap: usize) -> Result<bool> {
    let n = v.ground_size();
    if n.max(w.ground_size()) > cap {
        return Err(Error::CapExceeded {
            what: "|E|",
            value: n.max(w.ground_size()),
            cap,
        });
    }
    if n != w.ground_size() || v.dim() != w.dim() {
        return Ok(false);
    }
    let rows = v.basis().row_vectors();
    let maps_onto = |perm: &[usize]| {
        rows.iter().all(|r| {
            let image = BitVector::from_support(n, r.support().map(|i| perm[i]));
            w.contains(&image)
        })
    };
    // Heap's algorithm
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    if maps_onto(&perm) {
        return Ok(true);
    }
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(j, i);
            if maps_onto(&perm) {
                return Ok(true);
            }
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(false)
}

/// Tally of d(V) − d(W) over the single-element coextensions V of W.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub down: u64,
    pub same: u64,
    pub up: u64,
}

/// Runs over the 2^k subspaces V ⊆ GF(2)^{E+e} with V/e = W, k = dim(W).
///
/// Lifting basis vector w_i by bit c_i changes the Gram matrix to G + ccᵀ,
/// so d(V) = k − rank(G + ccᵀ). Lifts with c outside the column space of G
/// lower d; there are 2^k − 2^{k−d(W)} of them. The other 2^{k−d(W)} split
/// evenly between keeping and raising d when the free part of the form is
/// orthogonal, and all keep d when it is alternating or empty.
pub fn extension_census(w: &Subspace) -> Result<Census> {
    extension_census_capped(w, caps::CENSUS_DIM)
}

pub fn extension_census_capped(w: &Subspace, cap: usize) -> Result<Census> {
    let k = w.dim();
    if k > cap || k >= 64 {
        return Err(Error::CapExceeded {
            what: "dim(W)",
            value: k,
            cap: cap.min(63),
        });
    }
    let gram = w.basis().gram();
    let base = k - gram.rank();
    let deltas = (0..1u64 << k)
        .into_par_iter()
        .map(|mask| {
            let c = BitVector::from_mask(k, mask);
            let mut lifted = gram.clone();
            for i in c.support() {
                lifted.row_mut(i).xor_assign(&c);
            }
            let delta = (k - lifted.rank()) as i64 - base as i64;
            match delta {
                -1..=1 => Ok(delta),
                _ => Err(Error::InvariantViolation(format!(
                    "coextension changes the bicycle dimension by {delta}"
                ))),
            }
        })
        .collect::<Result<Vec<i64>>>()?;
    let mut census = Census::default();
    for delta in deltas {
        match delta {
            -1 => census.down += 1,
            0 => census.same += 1,
            _ => census.up += 1,
        }
    }
    Ok(census)
}

/// Generator for sample `index` of a seeded run; each sample owns a stream.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `samples` random k-dimensional subspaces of GF(2)^n, sample i drawn from stream i.
pub fn sample_subspaces(n: usize, k: usize, samples: u64, seed: u64) -> Result<Vec<Subspace>> {
    (0..samples)
        .into_par_iter()
        .map(|i| Subspace::random_with(n, k, &mut sample_rng(seed, i)))
        .collect()
}

/// Fraction of sampled random (n, k) subspaces that are pedestrian.
pub fn pedestrian_fraction(n: usize, k: usize, samples: u64, seed: u64) -> Result<Ratio<u64>> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let hits = (0..samples)
        .into_par_iter()
        .map(|i| Subspace::random_with(n, k, &mut sample_rng(seed, i)).map(|v| u64::from(v.is_pedestrian())))
        .sum::<Result<u64>>()?;
    Ok(Ratio::new(hits, samples))
}

/// Exact fraction of pedestrian spaces among all k-dimensional subspaces of GF(2)^n.
pub fn exhaustive_pedestrian_fraction(n: usize, k: usize) -> Result<Ratio<u64>> {
    if k > n {
        return Err(Error::DimensionTooLarge { n, k });
    }
    let all = Subspace::enumerate_dim(n, k);
    let hits = all.iter().filter(|v| v.is_pedestrian()).count() as u64;
    Ok(Ratio::new(hits, all.len() as u64))
}

/// Stationary mass at d = 0 of the bicycle-dimension chain with up-rate
/// 2^{−d−1} and down-rate 1 − 2^{−d}: 1 / (2 + Σ_{d≥2} Π_{j<d} (2^{j+1} − 1)^{−1}).
pub fn pedestrian_limit() -> f64 {
    let mut total = 2.0;
    let mut term = 1.0;
    for j in 1..60 {
        term /= f64::powi(2.0, j + 1) - 1.0;
        total += term;
    }
    1.0 / total
}

/// Outcome of running the prefilter on every unordered pair of a corpus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExperimentReport {
    pub spaces: u64,
    pub pedestrian: u64,
    pub buckets: u64,
    pub pairs: u64,
    pub distinct_by_profile: u64,
    pub distinct_by_graph: u64,
    pub isomorphic_by_graph: u64,
    pub unknown: u64,
}

impl ExperimentReport {
    pub fn pedestrian_fraction(&self) -> Ratio<u64> {
        Ratio::new(self.pedestrian, self.spaces.max(1))
    }

    /// Share of pairs with a certain verdict; 1 when there are no pairs.
    pub fn resolved_fraction(&self) -> Ratio<u64> {
        if self.pairs == 0 {
            Ratio::from_integer(1)
        } else {
            Ratio::new(self.pairs - self.unknown, self.pairs)
        }
    }
}

/// Buckets the corpus by profile digest and compares graphs only inside a bucket.
pub fn run_experiment(spaces: &[Subspace], caps: &Caps) -> ExperimentReport {
    let analyses: Vec<Analysis> = spaces.par_iter().map(analyze).collect();
    let mut buckets: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, a) in analyses.iter().enumerate() {
        buckets.entry(a.profile.digest()).or_default().push(i);
    }
    let n = spaces.len() as u64;
    let mut report = ExperimentReport {
        spaces: n,
        pedestrian: analyses.iter().filter(|a| a.is_pedestrian()).count() as u64,
        buckets: buckets.len() as u64,
        pairs: n * n.saturating_sub(1) / 2,
        ..Default::default()
    };
    let members: Vec<&Vec<usize>> = buckets.values().filter(|m| m.len() > 1).collect();
    let tallies: Vec<ExperimentReport> = members
        .par_iter()
        .map(|m| {
            let mut t = ExperimentReport::default();
            for (x, &i) in m.iter().enumerate() {
                for &j in &m[x + 1..] {
                    t.pairs += 1;
                    match compare(&analyses[i], &analyses[j], caps.graph_vertices) {
                        PrefilterVerdict::DistinctCertain(
                            Discriminator::ProjectionGraph | Discriminator::ReducedGraph,
                        ) => t.distinct_by_graph += 1,
                        PrefilterVerdict::DistinctCertain(_) => t.distinct_by_profile += 1,
                        PrefilterVerdict::IsomorphicCertain => t.isomorphic_by_graph += 1,
                        PrefilterVerdict::Unknown => t.unknown += 1,
                    }
                }
            }
            t
        })
        .collect();
    let in_bucket: u64 = tallies.iter().map(|t| t.pairs).sum();
    report.distinct_by_profile = report.pairs - in_bucket + tallies.iter().map(|t| t.distinct_by_profile).sum::<u64>();
    report.distinct_by_graph = tallies.iter().map(|t| t.distinct_by_graph).sum();
    report.isomorphic_by_graph = tallies.iter().map(|t| t.isomorphic_by_graph).sum();
    report.unknown = tallies.iter().map(|t| t.unknown).sum();
    report
}

/// Samples `samples` random (n, k) subspaces and runs the pairwise prefilter.
pub fn experiment(n: usize, k: usize, samples: u64, seed: u64, caps: &Caps) -> Result<ExperimentReport> {
    Ok(run_experiment(&sample_subspaces(n, k, samples, seed)?, caps))
}
