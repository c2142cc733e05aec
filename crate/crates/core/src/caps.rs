//! Default limits for the exponential-time oracles.

/// Largest dim(V) for which Σ_{x∈V} ι^{q(x)} is enumerated.
pub const BROWN_DIM: usize = 24;
/// Largest |E| for the subset expansion of the Tutte polynomial.
pub const TUTTE_GROUND: usize = 20;
/// Largest |E| for the permutation-search matroid isomorphism oracle.
pub const ISO_GROUND: usize = 10;
/// Largest vertex count for backtracking graph isomorphism.
pub const GRAPH_VERTICES: usize = 24;
/// Largest dim(W) for the single-element coextension census.
pub const CENSUS_DIM: usize = 16;

/// A full set of limits; the CLI overrides these from flags and the environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub brown_dim: usize,
    pub tutte_ground: usize,
    pub iso_ground: usize,
    pub graph_vertices: usize,
    pub census_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            brown_dim: BROWN_DIM,
            tutte_ground: TUTTE_GROUND,
            iso_ground: ISO_GROUND,
            graph_vertices: GRAPH_VERTICES,
            census_dim: CENSUS_DIM,
        }
    }
}
