//! Orbit-type classification of configuration and phase points, the
//! secondary stratification over the regular configuration stratum, and the
//! spin quotient `O ∩ h0^⊥ / H0 = S^2(s)/∼`.

use nalgebra::{DMatrix, Vector3};

use crate::liealg::{pairing, project, Pair5, SkewMatrix5, SubalgebraTag};
use crate::momenta::PhasePoint;
use crate::singular::{numerical_rank, singular_triplets};
use crate::{Error, Result};

/// Gram-determinant cut for configuration regularity.
pub const CONFIG_TOL: f64 = 1e-10;
/// Relative singular-value cutoff for phase-space rank decisions.
pub const RANK_TOL: f64 = 1e-9;
/// Cut on `|(x1, x2)|` below which a spin is on a pole.
pub const POLE_TOL: f64 = 1e-10;
const LEVEL_TOL: f64 = 1e-8;

/// Orbit type of a configuration `q ∈ S^9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigStratum {
    /// `q1, q2` span a plane; isotropy `H0 = SO(3)`.
    RegularSo3,
    /// `q1 ∥ q2`; isotropy `H1 = SO(4)`.
    SingularSo4,
}

impl ConfigStratum {
    pub fn label(&self) -> &'static str {
        match self {
            Self::RegularSo3 => "regular_SO3",
            Self::SingularSo4 => "singular_SO4",
        }
    }
}

/// Isotropy type of a phase point: `SO(5 - d)` with `d = dim span{q1, q2, p1, p2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IsotropyType {
    L0Trivial,
    L1So2,
    L2So3,
    L3So4,
}

impl IsotropyType {
    pub fn label(&self) -> &'static str {
        match self {
            Self::L0Trivial => "L0_trivial",
            Self::L1So2 => "L1_SO2",
            Self::L2So3 => "L2_SO3",
            Self::L3So4 => "L3_SO4",
        }
    }

    pub fn group(&self) -> &'static str {
        match self {
            Self::L0Trivial => "{1}",
            Self::L1So2 => "SO(2)",
            Self::L2So3 => "SO(3)",
            Self::L3So4 => "SO(4)",
        }
    }

    /// Dimension of the isotropy group.
    pub fn group_dimension(&self) -> usize {
        match self {
            Self::L0Trivial => 0,
            Self::L1So2 => 1,
            Self::L2So3 => 3,
            Self::L3So4 => 6,
        }
    }

    fn from_span_dimension(d: usize) -> Self {
        match d {
            0..=1 => Self::L3So4,
            2 => Self::L2So3,
            3 => Self::L1So2,
            _ => Self::L0Trivial,
        }
    }
}

/// Secondary stratum of a phase point: its isotropy type together with the
/// configuration stratum underneath.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseStratum {
    pub tag: IsotropyType,
    pub over: ConfigStratum,
    /// `dim span{q1, q2, p1, p2}`.
    pub span_dimension: usize,
}

/// Stratum of the spin quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinStratum {
    /// `(0, 0, ±s)`.
    Pole,
    Regular,
}

impl SpinStratum {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Pole => "pole",
            Self::Regular => "regular",
        }
    }
}

/// Point of `S^2(s)/∼` where `(x1, x2, x3) ∼ (-x1, -x2, x3)`.
///
/// Regular classes are stored in the gauge `x1 > 0`, or `x1 = 0` and `x2 > 0`.
/// The quotient only identifies `(x1, x2)` with its negative; the remaining
/// sign freedom in the third coordinate is not part of `∼` here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinClass {
    x: Vector3<f64>,
    s: f64,
    stratum: SpinStratum,
}

impl SpinClass {
    /// Validates `|x| = s` and canonicalizes the representative.
    pub fn new(x: Vector3<f64>, s: f64) -> Result<Self> {
        if s <= 0.0 || s.is_nan() {
            return Err(Error::InvalidArgument("orbit scale must be positive"));
        }
        if (x.norm() - s).abs() > 1e-10 * s.max(1.0) {
            return Err(Error::NotOnLevelSet {
                reason: "spin vector norm differs from the orbit scale",
            });
        }
        Ok(Self::canonical(x, s))
    }

    /// Rescales `x` onto `S^2(s)` before canonicalizing.
    pub fn projected(x: Vector3<f64>, s: f64) -> Result<Self> {
        let n = x.norm();
        if n == 0.0 {
            return Err(Error::NotOnLevelSet {
                reason: "zero spin vector",
            });
        }
        Self::new(x * (s / n), s)
    }

    fn canonical(mut x: Vector3<f64>, s: f64) -> Self {
        let planar = libm::hypot(x[0], x[1]);
        let stratum = if planar <= POLE_TOL {
            SpinStratum::Pole
        } else {
            let eps = 1e-12 * s;
            let flip = if x[0] > eps {
                false
            } else if x[0] < -eps {
                true
            } else {
                x[1] < 0.0
            };
            if flip {
                x[0] = -x[0];
                x[1] = -x[1];
            }
            SpinStratum::Regular
        };
        Self { x, s, stratum }
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.x
    }

    pub fn scale(&self) -> f64 {
        self.s
    }

    pub fn stratum(&self) -> SpinStratum {
        self.stratum
    }

    /// The w0-coordinate `x3` (the charge).
    pub fn charge(&self) -> f64 {
        self.x[2]
    }

    /// Distance to the nearer pole, `|(x1, x2)|`.
    pub fn pole_distance(&self) -> f64 {
        libm::hypot(self.x[0], self.x[1])
    }

    /// Quotient distance `min(|x - y|, |x - y'|)` with `y' ∼ y`.
    pub fn distance(&self, other: &Self) -> f64 {
        let y = other.x;
        let flipped = Vector3::new(-y[0], -y[1], y[2]);
        (self.x - y).norm().min((self.x - flipped).norm())
    }

    /// Normal-form representative in `O ∩ h0^⊥` (tails along `e3`).
    pub fn representative(&self) -> SkewMatrix5 {
        SkewMatrix5::from_spin_vector(&self.x)
    }

    /// Action of `exp(θE) ∈ W0` (conjugation) on the class.
    pub fn rotate(&self, theta: f64) -> Self {
        Self::canonical(rotate_spin_vector(&self.x, theta), self.s)
    }
}

/// Conjugation by `exp(θ E)` in spin-vector coordinates: rotation of `(x1, x2)`.
pub fn rotate_spin_vector(x: &Vector3<f64>, theta: f64) -> Vector3<f64> {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    Vector3::new(c * x[0] + s * x[1], -s * x[0] + c * x[1], x[2])
}

/// Infinitesimal generator of [`rotate_spin_vector`].
pub fn spin_generator(x: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(x[1], -x[0], 0.0)
}

/// Action of the reflection `diag(1, -1, -1, 1, 1) ∈ N(H0)` on a spin vector.
pub fn reflect_spin_vector(x: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(x[0], -x[1], -x[2])
}

pub fn classify_config(q: &Pair5) -> ConfigStratum {
    let q1 = q.column(0);
    let q2 = q.column(1);
    let c = q1.dot(&q2);
    let det = q1.norm_squared() * q2.norm_squared() - c * c;
    if det > CONFIG_TOL {
        ConfigStratum::RegularSo3
    } else {
        ConfigStratum::SingularSo4
    }
}

/// Numerical rank of `[q1 q2 p1 p2]`; `p` is rescaled to the size of `q`
/// first, which leaves the span unchanged.
pub fn span_dimension(s: &PhasePoint) -> usize {
    let pn = s.p.norm();
    let p = if pn > 0.0 {
        s.p * (s.q.norm() / pn)
    } else {
        s.p
    };
    let mut m = DMatrix::zeros(5, 4);
    m.view_mut((0, 0), (5, 2)).copy_from(&s.q);
    m.view_mut((0, 2), (5, 2)).copy_from(&p);
    numerical_rank(&m, RANK_TOL)
}

pub fn classify_phase(s: &PhasePoint) -> PhaseStratum {
    let d = span_dimension(s);
    PhaseStratum {
        tag: IsotropyType::from_span_dimension(d),
        over: classify_config(&s.q),
        span_dimension: d,
    }
}

/// Quotient class of `λ ∈ O ∩ h0^⊥` under `H0`, where `O` is the orbit
/// through `s e1^e2`.
///
/// The tails `(λ_k1, λ_k2)_{k=3..5}` form a rank-one 3x2 block `t c^T`;
/// rotating `t` onto `e3` gives the normal form
/// `[[0, x3, -x2], [-x3, 0, x1], [x2, -x1, 0]]` with `(x2, -x1) = c`.
pub fn spin_from_momentum(lambda: &SkewMatrix5, s: f64) -> Result<SpinClass> {
    if s <= 0.0 || s.is_nan() {
        return Err(Error::InvalidArgument("orbit scale must be positive"));
    }
    let tol = LEVEL_TOL * s.max(1.0);
    if project(lambda, SubalgebraTag::H0).norm() > tol {
        return Err(Error::NotOnLevelSet {
            reason: "nonzero h0 component",
        });
    }
    let norm = libm::sqrt(pairing(lambda, lambda));
    if (norm - s).abs() > tol {
        return Err(Error::NotOnLevelSet {
            reason: "norm differs from the orbit scale",
        });
    }
    let m = lambda.matrix();
    let tails = DMatrix::from_fn(3, 2, |r, c| m[(r + 2, c)]);
    let sv = singular_triplets(&tails);
    if sv[1].value > tol {
        return Err(Error::NotOnLevelSet {
            reason: "momentum has rank 4",
        });
    }
    let c = (sv[0].value * sv[0].right[0], sv[0].value * sv[0].right[1]);
    let x = Vector3::new(-c.1, c.0, m[(0, 1)]);
    SpinClass::projected(x, s)
}

/// One row of the secondary stratification over the regular configuration stratum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StratumRow {
    pub isotropy: IsotropyType,
    /// Local model of the reduced secondary stratum.
    pub model: &'static str,
    /// Dimension of the reduced stratum; `None` when empty.
    pub dimension: Option<usize>,
    pub empty: bool,
    /// Whether the reduced Hamiltonian flow preserves the stratum.
    pub flow_invariant: Option<bool>,
}

/// Static table of the four secondary strata of `(T*Q_(H0))/SO(5)`.
pub fn stratum_table() -> [StratumRow; 4] {
    [
        StratumRow {
            isotropy: IsotropyType::L0Trivial,
            model: "(Q_H0 x_B0 T*B0) x_W0 (R x (R^3 x R^3)_{1}/H0); fibre R x R>0 x R x R>0",
            dimension: Some(8),
            empty: false,
            flow_invariant: Some(true),
        },
        StratumRow {
            isotropy: IsotropyType::L1So2,
            model: "(Q_H0 x_B0 T*B0) x_W0 (R x C0(S^1)); C0(S^1) = (R^2 minus 0)/{±1}",
            dimension: Some(7),
            empty: false,
            flow_invariant: Some(false),
        },
        StratumRow {
            isotropy: IsotropyType::L2So3,
            model: "T*B0 x R x {0}",
            dimension: Some(5),
            empty: false,
            flow_invariant: Some(false),
        },
        StratumRow {
            isotropy: IsotropyType::L3So4,
            model: "empty over Q_(H0)",
            dimension: None,
            empty: true,
            flow_invariant: None,
        },
    ]
}
