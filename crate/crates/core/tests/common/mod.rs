#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strat_mech_core::liealg::{Pair5, SkewMatrix5};
use strat_mech_core::singular::numerical_rank;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dimension of `{X ∈ so(5) : X q_i = 0, X p_i = 0}` by a nullspace
/// computation on the linear map `X -> (X q1, X q2, X p1, X p2)`.
pub fn stabilizer_dimension(q: &Pair5, p: &Pair5) -> usize {
    let basis = SkewMatrix5::standard_basis();
    let m = nalgebra::DMatrix::from_fn(20, 10, |r, c| {
        let x = basis[c].matrix();
        let v = if r < 10 { x * q } else { x * p };
        v[r % 10]
    });
    10 - numerical_rank(&m, 1e-9)
}
