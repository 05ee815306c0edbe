use crate::momenta::PhasePoint;

/// Exact flow of `H = |p|^2 / 2` on `T*S^9`: great circles at speed `|p|`.
pub fn geodesic_flow(s: &PhasePoint, t: f64) -> PhasePoint {
    let omega = s.p.norm();
    if omega == 0.0 {
        return *s;
    }
    let (sn, cs) = (libm::sin(omega * t), libm::cos(omega * t));
    PhasePoint {
        q: s.q * cs + s.p * (sn / omega),
        p: s.p * cs - s.q * (omega * sn),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::Pair5;
    use crate::momenta::mu_full;

    fn sample() -> PhasePoint {
        let q = Pair5::from_column_slice(&[0.3, -0.1, 0.5, 0.2, 0.0, 0.4, 0.1, -0.6, 0.2, 0.1]);
        let p = Pair5::from_column_slice(&[1.0, 0.2, -0.3, 0.5, 0.7, -0.2, 0.4, 0.1, 0.0, -0.9]);
        PhasePoint::projected(q, p)
    }

    #[test]
    fn zero_time_is_identity() {
        let s = sample();
        assert_eq!(geodesic_flow(&s, 0.0), s);
    }

    #[test]
    fn rest_point_is_fixed() {
        let s = PhasePoint::projected(sample().q, Pair5::zeros());
        assert_eq!(geodesic_flow(&s, 3.7), s);
    }

    #[test]
    fn conserves_energy_and_momentum() {
        let s = sample();
        let m0 = mu_full(&s).value;
        for k in 1..=100 {
            let f = geodesic_flow(&s, k as f64);
            assert!((f.energy() - s.energy()).abs() < 1e-12);
            assert!((mu_full(&f).value - m0).norm() < 1e-10);
            assert!((f.q.norm() - 1.0).abs() < 1e-13);
        }
    }
}
