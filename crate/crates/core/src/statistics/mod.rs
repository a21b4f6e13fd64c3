//! Local functionals `f(Y) = Σ_{S ⊂ Y} g(S)` of point patterns, the unit-cube
//! covering with its interior approximation, and the block decomposition of
//! the cube index set used to localize dependence.

mod blocks;
mod cubes;
mod local;

pub use blocks::{block_decompose, block_sums, BlockDecomposition, BlockSums};
pub use cubes::{
    barycenter, cube_contributions, cube_variables, interior_index_set, restricted_functional, CubeCovering,
    CubeIndex, CubeSet, IndexBox,
};
pub use local::{
    diameter_inf, eval_functional, for_each_local_subset, LocalStatistic, Region, SetFunction, StatKind, StatKindTag,
};
