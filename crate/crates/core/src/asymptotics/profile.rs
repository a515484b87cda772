//! Gaussian solution of the limit parabolic equation
//! `φ_t + Σ M_ij φ_{ζᵢζⱼ} = 0` and the leading term `φ₀ h₁`.

use std::f64::consts::PI;

use super::{symmetric_eigenvalues, to_f64, AsymptoticsError, TransferStructure, DISSIPATIVITY_TOLERANCE};
use crate::exact_linalg::RationalMatrix;
use crate::model::{SpectralData, SystemSpec};

/// Evaluation point of the leading term: `ζᵢ = (xᵢ − vᵢ t)/ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileQuery {
    pub epsilon: f64,
    pub t: f64,
    pub x: Vec<f64>,
    /// Width of the initial Gaussian in ζ.
    pub sigma0: f64,
    pub amplitude: f64,
}

impl ProfileQuery {
    pub fn new(
        epsilon: f64,
        t: f64,
        x: Vec<f64>,
        sigma0: f64,
        amplitude: f64,
    ) -> Result<Self, AsymptoticsError> {
        let q = Self {
            epsilon,
            t,
            x,
            sigma0,
            amplitude,
        };
        q.check()?;
        Ok(q)
    }

    fn check(&self) -> Result<(), AsymptoticsError> {
        let positive = |v: f64, name: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(AsymptoticsError::InvalidQuery(format!("{name} must be positive, got {v}")))
            }
        };
        positive(self.epsilon, "epsilon")?;
        positive(self.t, "t")?;
        positive(self.sigma0, "sigma0")?;
        if !self.amplitude.is_finite() || self.x.iter().any(|x| !x.is_finite()) {
            return Err(AsymptoticsError::InvalidQuery("non-finite amplitude or point".into()));
        }
        Ok(())
    }
}

/// φ₀ with initial data `amplitude · exp(−|ζ|²/(2σ₀²))`. Its covariance
/// evolves as `Σ_t = σ₀² E − 2 t M`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionProfile {
    m: Vec<Vec<f64>>,
    sigma0: f64,
    amplitude: f64,
}

/// Lower Cholesky factor, or `None` if `a` is not positive definite.
fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= 0.0 || !d.is_finite() {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

impl DiffusionProfile {
    pub fn new(m: &RationalMatrix, sigma0: f64, amplitude: f64) -> Result<Self, AsymptoticsError> {
        Self::from_f64(m.to_f64_rows(), sigma0, amplitude)
    }

    pub fn from_f64(m: Vec<Vec<f64>>, sigma0: f64, amplitude: f64) -> Result<Self, AsymptoticsError> {
        if !(sigma0.is_finite() && sigma0 > 0.0) {
            return Err(AsymptoticsError::InvalidQuery(format!("sigma0 must be positive, got {sigma0}")));
        }
        let scale = m.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        let top = symmetric_eigenvalues(&m).last().copied().unwrap_or(0.0);
        if top > DISSIPATIVITY_TOLERANCE * scale {
            return Err(AsymptoticsError::NotDissipative { max_eigenvalue: top });
        }
        Ok(Self { m, sigma0, amplitude })
    }

    pub fn dimension(&self) -> usize {
        self.m.len()
    }

    fn covariance(&self, t: f64) -> Vec<Vec<f64>> {
        let s2 = self.sigma0 * self.sigma0;
        let k = self.dimension();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let m_sym = 0.5 * (self.m[i][j] + self.m[j][i]);
                        (if i == j { s2 } else { 0.0 }) - 2.0 * t * m_sym
                    })
                    .collect()
            })
            .collect()
    }

    fn factor(&self, t: f64) -> Result<Vec<Vec<f64>>, AsymptoticsError> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(AsymptoticsError::InvalidQuery(format!("t must be non-negative, got {t}")));
        }
        cholesky(&self.covariance(t)).ok_or(AsymptoticsError::SingularCovariance)
    }

    /// `φ₀(ζ, t)` for `t ≥ 0`.
    pub fn eval(&self, t: f64, zeta: &[f64]) -> Result<f64, AsymptoticsError> {
        if zeta.len() != self.dimension() {
            return Err(AsymptoticsError::InvalidQuery(format!(
                "zeta has {} components, expected {}",
                zeta.len(),
                self.dimension()
            )));
        }
        let l = self.factor(t)?;
        let k = self.dimension();
        // forward substitution: L y = ζ, so ζᵀ Σ⁻¹ ζ = |y|²
        let mut y = vec![0.0; k];
        for i in 0..k {
            let s: f64 = (0..i).map(|j| l[i][j] * y[j]).sum();
            y[i] = (zeta[i] - s) / l[i][i];
        }
        let quad: f64 = y.iter().map(|v| v * v).sum();
        // sqrt(det Σ₀ / det Σ_t) = Π σ₀ / L_ii
        let ratio: f64 = l.iter().enumerate().map(|(i, row)| self.sigma0 / row[i]).product();
        Ok(self.amplitude * ratio * (-0.5 * quad).exp())
    }

    /// Total integral of φ₀ over ζ-space at time `t`.
    pub fn mass(&self, t: f64) -> Result<f64, AsymptoticsError> {
        let l = self.factor(t)?;
        let k = self.dimension();
        let sqrt_det_t: f64 = l.iter().enumerate().map(|(i, row)| row[i]).product();
        let peak_ratio = self.sigma0.powi(k as i32) / sqrt_det_t;
        Ok(self.amplitude * peak_ratio * (2.0 * PI).powf(k as f64 / 2.0) * sqrt_det_t)
    }

    /// `|φ_t + Σ M_ij φ_{ζᵢζⱼ}|` with second-order central differences of
    /// step `h` in every variable.
    pub fn residual(&self, t: f64, zeta: &[f64], h: f64) -> Result<f64, AsymptoticsError> {
        if !(h.is_finite() && h > 0.0) {
            return Err(AsymptoticsError::InvalidQuery(format!("step must be positive, got {h}")));
        }
        if t - h < 0.0 {
            return Err(AsymptoticsError::InvalidQuery(format!(
                "central time difference needs t >= h (t = {t}, h = {h})"
            )));
        }
        let k = self.dimension();
        let at = |dz: &[(usize, f64)]| {
            let mut z = zeta.to_vec();
            for &(i, d) in dz {
                z[i] += d;
            }
            self.eval(t, &z)
        };
        let center = self.eval(t, zeta)?;
        let phi_t = (self.eval(t + h, zeta)? - self.eval(t - h, zeta)?) / (2.0 * h);
        let mut spatial = 0.0;
        for i in 0..k {
            for j in 0..k {
                let mij = 0.5 * (self.m[i][j] + self.m[j][i]);
                if mij == 0.0 {
                    continue;
                }
                let second = if i == j {
                    (at(&[(i, h)])? - 2.0 * center + at(&[(i, -h)])?) / (h * h)
                } else {
                    (at(&[(i, h), (j, h)])? - at(&[(i, h), (j, -h)])? - at(&[(i, -h), (j, h)])?
                        + at(&[(i, -h), (j, -h)])?)
                        / (4.0 * h * h)
                };
                spatial += mij * second;
            }
        }
        Ok((phi_t + spatial).abs())
    }
}

/// φ₀ at `zeta` and time `q.t`.
pub fn phi0_eval(m: &RationalMatrix, q: &ProfileQuery, zeta: &[f64]) -> Result<f64, AsymptoticsError> {
    DiffusionProfile::new(m, q.sigma0, q.amplitude)?.eval(q.t, zeta)
}

/// Finite-difference residual of the limit equation at `(zeta, q.t)`.
pub fn pde_residual(
    m: &RationalMatrix,
    q: &ProfileQuery,
    zeta: &[f64],
    h: f64,
) -> Result<f64, AsymptoticsError> {
    DiffusionProfile::new(m, q.sigma0, q.amplitude)?.residual(q.t, zeta, h)
}

/// Leading term `φ₀(ζ, t) h₁` of the solution at the physical point `q.x`.
pub fn leading_term_eval(
    s: &SystemSpec,
    sd: &SpectralData,
    ts: &TransferStructure,
    q: &ProfileQuery,
) -> Result<Vec<f64>, AsymptoticsError> {
    q.check()?;
    if q.x.len() != s.k {
        return Err(AsymptoticsError::InvalidQuery(format!(
            "point has {} coordinates, expected K = {}",
            q.x.len(),
            s.k
        )));
    }
    let zeta: Vec<f64> = q
        .x
        .iter()
        .zip(&ts.v)
        .map(|(x, v)| (x - to_f64(v) * q.t) / q.epsilon)
        .collect();
    let phi = phi0_eval(&ts.m, q, &zeta)?;
    Ok(sd.h1.iter().map(|h| phi * to_f64(h)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::build_m;
    use crate::model::validate_system;
    use crate::test_support::{qm, qv};

    fn w1_m() -> RationalMatrix {
        qm(&[&["-1/8", "1/8"], &["1/8", "-1/8"]])
    }

    #[test]
    fn zero_m_keeps_initial_gaussian() {
        let p = DiffusionProfile::new(&RationalMatrix::zeros(2, 2), 0.7, 2.0).unwrap();
        let z = [0.3, -1.1];
        let expected = 2.0 * (-(0.09_f64 + 1.21) / (2.0 * 0.49)).exp();
        for t in [0.0, 1.0, 10.0] {
            assert!((p.eval(t, &z).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn initial_peak_is_amplitude() {
        let p = DiffusionProfile::new(&w1_m(), 1.3, -0.5).unwrap();
        assert_eq!(p.eval(0.0, &[0.0, 0.0]).unwrap(), -0.5);
    }

    #[test]
    fn w1_peak_at_unit_time() {
        let q = ProfileQuery::new(1.0, 1.0, vec![0.5, 0.5], 1.0, 1.0).unwrap();
        let v = phi0_eval(&w1_m(), &q, &[0.0, 0.0]).unwrap();
        assert!((v - (2.0_f64 / 3.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn w1_leading_term() {
        let s = SystemSpec::new(
            qm(&[&["-1", "1"], &["1", "-1"]]),
            vec![qv(&["1", "0"]), qv(&["0", "1"])],
            "W1",
        )
        .unwrap();
        let sd = validate_system(&s).unwrap();
        let ts = build_m(&s, &sd).unwrap();
        let q = ProfileQuery::new(1.0, 1.0, vec![0.5, 0.5], 1.0, 1.0).unwrap();
        let u = leading_term_eval(&s, &sd, &ts, &q).unwrap();
        let peak = (2.0_f64 / 3.0).sqrt();
        assert!((u[0] - peak).abs() < 1e-14 && (u[1] - peak).abs() < 1e-14);

        // off the ray, smaller ε pushes the point further into the tail
        let far = ProfileQuery::new(1.0, 1.0, vec![1.0, 0.2], 1.0, 1.0).unwrap();
        let near_eps = ProfileQuery { epsilon: 0.5, ..far.clone() };
        let a = leading_term_eval(&s, &sd, &ts, &far).unwrap()[0];
        let b = leading_term_eval(&s, &sd, &ts, &near_eps).unwrap()[0];
        assert!(b < a && b > 0.0);
    }

    #[test]
    fn rejects_non_dissipative_and_bad_queries() {
        let m = qm(&[&["1/8", "0"], &["0", "-1"]]);
        assert!(matches!(
            DiffusionProfile::new(&m, 1.0, 1.0),
            Err(AsymptoticsError::NotDissipative { .. })
        ));
        assert!(ProfileQuery::new(0.0, 1.0, vec![], 1.0, 1.0).is_err());
        assert!(ProfileQuery::new(1.0, 0.0, vec![], 1.0, 1.0).is_err());
        assert!(ProfileQuery::new(1.0, 1.0, vec![], -1.0, 1.0).is_err());
        let p = DiffusionProfile::new(&w1_m(), 1.0, 1.0).unwrap();
        assert!(p.eval(1.0, &[0.0]).is_err());
        assert!(p.eval(-1.0, &[0.0, 0.0]).is_err());
        assert!(p.residual(0.5, &[0.0, 0.0], 1.0).is_err());
        assert!(p.residual(1.0, &[0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn mass_is_time_independent() {
        let p = DiffusionProfile::new(&w1_m(), 0.8, 1.5).unwrap();
        let m0 = p.mass(0.0).unwrap();
        let expected = 1.5 * 2.0 * PI * 0.64;
        assert!((m0 - expected).abs() < 1e-12);
        for t in [0.1, 1.0, 7.5, 100.0] {
            assert!((p.mass(t).unwrap() - m0).abs() < 1e-12 * m0);
        }
    }

    #[test]
    fn residual_shrinks_quadratically() {
        let p = DiffusionProfile::new(&w1_m(), 1.0, 1.0).unwrap();
        let z = [0.3, -0.2];
        let r1 = p.residual(1.0, &z, 1e-2).unwrap();
        let r2 = p.residual(1.0, &z, 5e-3).unwrap();
        let ratio = r1 / r2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        let zero = DiffusionProfile::new(&RationalMatrix::zeros(2, 2), 1.0, 1.0).unwrap();
        assert!(zero.residual(1.0, &z, 1e-3).unwrap() < 1e-12);
    }
}
