use nalgebra::{DMatrix, DVector, Vector3};

use crate::liealg::{bracket, pairing, SkewMatrix5};
use crate::singular::pseudo_solve;
use crate::strata::{SpinClass, SpinStratum};
use crate::{Error, Result};

/// `<λ, [X, Y]>`: the orbit form on the tangent vectors `[X, λ]`, `[Y, λ]`.
pub fn kks_form(lambda: &SkewMatrix5, x: &SkewMatrix5, y: &SkewMatrix5) -> f64 {
    pairing(lambda, &bracket(x, y))
}

/// Least-squares `X` with `[X, λ] = δ`; fails when `δ` is not tangent to the
/// orbit through `λ`.
pub fn orbit_tangent_preimage(lambda: &SkewMatrix5, delta: &SkewMatrix5) -> Result<SkewMatrix5> {
    let basis = SkewMatrix5::standard_basis();
    let a = DMatrix::from_fn(10, 10, |r, c| bracket(&basis[c], lambda).coordinates()[r]);
    let b = DVector::from_row_slice(&delta.coordinates());
    let x = pseudo_solve(&a, &b, 1e-10).ok_or(Error::SectionFailure {
        reason: "orbit through zero",
    })?;
    let coords: [f64; 10] = core::array::from_fn(|i| x[i]);
    let out = SkewMatrix5::from_coordinates(&coords);
    let residual = (bracket(&out, lambda) - *delta).norm();
    if residual > 1e-9 * (1.0 + delta.norm()) {
        return Err(Error::SectionFailure {
            reason: "vector not tangent to the orbit",
        });
    }
    Ok(out)
}

/// Spin form at an arbitrary nonzero spin vector: `u, v` are lifted through
/// the normal-form section `x -> λ(x)` (which is linear), then paired by the
/// orbit form.
pub fn reduced_spin_form(x: &Vector3<f64>, u: &Vector3<f64>, v: &Vector3<f64>) -> Result<f64> {
    let lambda = SkewMatrix5::from_spin_vector(x);
    let xu = orbit_tangent_preimage(&lambda, &SkewMatrix5::from_spin_vector(u))?;
    let xv = orbit_tangent_preimage(&lambda, &SkewMatrix5::from_spin_vector(v))?;
    Ok(kks_form(&lambda, &xu, &xv))
}

/// Reduced form on `S^2(s)/∼` at a regular spin class.
pub fn kks_reduced_form(spin: &SpinClass, u: &Vector3<f64>, v: &Vector3<f64>) -> Result<f64> {
    if spin.stratum() == SpinStratum::Pole {
        return Err(Error::SectionFailure {
            reason: "section is singular at a pole",
        });
    }
    let x = spin.vector();
    let tol = 1e-10 * spin.scale();
    if x.dot(u).abs() > tol * u.norm().max(1.0) || x.dot(v).abs() > tol * v.norm().max(1.0) {
        return Err(Error::InvalidArgument(
            "vectors must be tangent to the spin sphere",
        ));
    }
    reduced_spin_form(x, u, v)
}
