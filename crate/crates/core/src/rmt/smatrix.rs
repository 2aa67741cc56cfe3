use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::config::RmtEnsembleConfig;
use super::goe::sample_goe_matrix;
use crate::error::{invalid, Error, Result};
use crate::resonance::ComplexTrace;

/// `N x channels` coupling matrix with orthogonal columns of squared norm
/// `N v_c^2`, built from the discrete sine basis
/// `sqrt(2/(N+1)) sin(pi (c+1) mu / (N+1))`.
pub fn build_couplings(dim: usize, strengths: &[f64]) -> Result<DMatrix<f64>> {
    if strengths.len() > dim {
        return invalid(format!("{} channels exceed dimension {dim}", strengths.len()));
    }
    if let Some(v) = strengths.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return invalid(format!("channel coupling must be positive, got {v}"));
    }
    let n1 = (dim + 1) as f64;
    let norm = (2.0 / n1).sqrt();
    Ok(DMatrix::from_fn(dim, strengths.len(), |mu, c| {
        let scale = (dim as f64 * strengths[c]).sqrt();
        scale * norm * (PI * (c + 1) as f64 * (mu + 1) as f64 / n1).sin()
    }))
}

/// One member of the ensemble, held in the eigenbasis of its GOE matrix:
/// eigenvalues `e_n` and couplings `W~ = O^T W`.
#[derive(Debug, Clone)]
pub struct Realization {
    eigenvalues: Vec<f64>,
    couplings: DMatrix<f64>,
    mean_spacing: f64,
}

impl Realization {
    /// Realisation `index` of `config`, drawn from stream `index` of the
    /// seeded generator.
    pub fn new(config: &RmtEnsembleConfig, index: usize) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        let h = sample_goe_matrix(config.dimension, &mut rng);
        let w = build_couplings(config.dimension, &config.channel_couplings())?;
        Ok(Self::from_parts(h, &w, config.mean_spacing()))
    }

    pub fn from_parts(h: DMatrix<f64>, w: &DMatrix<f64>, mean_spacing: f64) -> Self {
        let eig = SymmetricEigen::new(h);
        let couplings = eig.eigenvectors.transpose() * w;
        Self { eigenvalues: eig.eigenvalues.as_slice().to_vec(), couplings, mean_spacing }
    }

    pub fn channels(&self) -> usize {
        self.couplings.ncols()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn mean_spacing(&self) -> f64 {
        self.mean_spacing
    }

    /// Energy nudged off any eigenvalue it coincides with.
    fn regular_energy(&self, e: f64) -> f64 {
        let tiny = 1e-12 * self.mean_spacing;
        if self.eigenvalues.iter().any(|&x| (e - x).abs() < tiny) {
            log::warn!("energy {e} sits on an eigenvalue; shifted by 1e-12 d");
            e + tiny
        } else {
            e
        }
    }

    /// Full scattering matrix at energy `e` from the reactance matrix
    /// `K = W~^T (e - E)^{-1} W~`: `S = 2 (1 + i pi K)^{-1} - 1`.
    pub fn smatrix(&self, e: f64) -> Result<DMatrix<Complex64>> {
        let e = self.regular_energy(e);
        let m = self.channels();
        let g: Vec<f64> = self.eigenvalues.iter().map(|&x| 1.0 / (e - x)).collect();
        let mut a = DMatrix::<Complex64>::identity(m, m);
        for c in 0..m {
            let wc = self.couplings.column(c);
            for d in c..m {
                let wd = self.couplings.column(d);
                let k: f64 = g.iter().zip(wc.iter().zip(wd.iter())).map(|(g, (x, y))| g * x * y).sum();
                let v = Complex64::new(0.0, PI * k);
                a[(c, d)] += v;
                if d != c {
                    a[(d, c)] += v;
                }
            }
        }
        let inv = a
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Numerical(format!("singular reactance system at energy {e}")))?;
        Ok(inv * Complex64::new(2.0, 0.0) - DMatrix::identity(m, m))
    }

    /// The same matrix by a direct solve of the `N x N` system
    /// `S = 1 - 2 pi i W~^T (e - E + i pi W~ W~^T)^{-1} W~`.
    pub fn smatrix_direct(&self, e: f64) -> Result<DMatrix<Complex64>> {
        let e = self.regular_energy(e);
        let n = self.eigenvalues.len();
        let w = self.couplings.map(|x| Complex64::new(x, 0.0));
        let mut a = (&w * w.transpose()) * Complex64::new(0.0, PI);
        for i in 0..n {
            a[(i, i)] += e - self.eigenvalues[i];
        }
        let x = a
            .lu()
            .solve(&w)
            .ok_or_else(|| Error::Numerical(format!("singular effective Hamiltonian at energy {e}")))?;
        let m = self.channels();
        Ok(DMatrix::identity(m, m) - w.transpose() * x * Complex64::new(0.0, 2.0 * PI))
    }

    /// Eigenvalues `E_n - i Gamma_n / 2` of the effective Hamiltonian
    /// `H - i pi W W^T`, sorted by real part.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let n = self.eigenvalues.len();
        let w = self.couplings.map(|x| Complex64::new(x, 0.0));
        let mut heff = (&w * w.transpose()) * Complex64::new(0.0, -PI);
        for i in 0..n {
            heff[(i, i)] += self.eigenvalues[i];
        }
        let schur = nalgebra::Schur::try_new(heff, 1e-14, 10_000)
            .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
        let mut p: Vec<Complex64> = schur
            .eigenvalues()
            .ok_or_else(|| Error::Numerical("effective Hamiltonian eigenvalues unavailable".into()))?
            .iter()
            .copied()
            .collect();
        p.sort_by(|a, b| a.re.total_cmp(&b.re));
        Ok(p)
    }

    /// Traces of `S_11`, `S_12`, `S_21`, `S_22` on `energies`, with the
    /// frequency axis in units of the mean spacing.
    pub fn traces(&self, energies: &[f64]) -> Result<Vec<ComplexTrace>> {
        let pairs = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
        let mut values = vec![Vec::with_capacity(energies.len()); pairs.len()];
        for &e in energies {
            let s = self.smatrix(e)?;
            for (v, &(a, b)) in values.iter_mut().zip(&pairs) {
                v.push(s[(a, b)]);
            }
        }
        let freqs: Vec<f64> = energies.iter().map(|e| e / self.mean_spacing).collect();
        pairs
            .iter()
            .zip(values)
            .map(|(&(a, b), v)| ComplexTrace::new(freqs.clone(), v, (a as u8 + 1, b as u8 + 1)))
            .collect()
    }
}

/// Traces of realisation `index` of `config` on its band grid.
pub fn smatrix_trace(config: &RmtEnsembleConfig, index: usize) -> Result<Vec<ComplexTrace>> {
    Realization::new(config, index)?.traces(&config.energy_grid())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(tau: f64, lambda: usize) -> RmtEnsembleConfig {
        RmtEnsembleConfig::from_transmissions(80, 0.3, 0.6, lambda, tau).unwrap()
    }

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn couplings_gram_matrix() {
        let w = build_couplings(100, &[0.3, 0.7]).unwrap();
        let g = w.transpose() * &w;
        assert!((g[(0, 0)] - 30.0).abs() < 1e-12);
        assert!((g[(1, 1)] - 70.0).abs() < 1e-12);
        assert!(g[(0, 1)].abs() < 1e-12);
        let swapped = build_couplings(100, &[0.7, 0.3]).unwrap();
        let gs = swapped.transpose() * &swapped;
        assert!((gs[(0, 0)] - g[(1, 1)]).abs() < 1e-12 && (gs[(1, 1)] - g[(0, 0)]).abs() < 1e-12);
        assert!(build_couplings(100, &[0.0]).is_err());
        assert!(build_couplings(2, &[0.1, 0.1, 0.1]).is_err());
    }

    #[test]
    fn unitary_and_reciprocal_without_absorption() {
        let r = Realization::new(&config(0.0, 0), 0).unwrap();
        for e in [-0.2, -0.01, 0.0, 0.13] {
            let s = r.smatrix(e).unwrap();
            let u = s.adjoint() * &s - DMatrix::identity(2, 2);
            assert!(max_abs(&u) < 1e-10);
            assert!((s[(0, 1)] - s[(1, 0)]).norm() < 1e-10);
        }
    }

    #[test]
    fn subunitary_with_absorption() {
        let r = Realization::new(&config(3.0, 10), 1).unwrap();
        for i in 0..50 {
            let full = r.smatrix(-0.2 + 0.008 * i as f64).unwrap();
            assert_eq!(full.nrows(), 12);
            let s = full.view((0, 0), (2, 2)).into_owned();
            // eigenvalues of S^dagger S are the squared singular values of S
            let sigma = nalgebra::linalg::SVD::new(s.clone(), false, false).singular_values.max();
            assert!(sigma * sigma <= 1.0 + 1e-10, "{sigma}");
            assert!(max_abs(&(s.transpose() - &s)) < 1e-10);
        }
    }

    #[test]
    fn direct_solve_agrees() {
        let r = Realization::new(&config(2.0, 10), 2).unwrap();
        for e in [-0.1, 0.05] {
            let a = r.smatrix(e).unwrap();
            let b = r.smatrix_direct(e).unwrap();
            assert!(max_abs(&(a - b)) < 1e-9);
        }
    }

    #[test]
    fn vanishing_coupling_gives_identity() {
        let mut c = config(0.0, 0);
        c.coupling_a = 1e-30;
        c.coupling_b = 1e-30;
        let r = Realization::new(&c, 0).unwrap();
        let s = r.smatrix(0.01).unwrap();
        assert!(max_abs(&(s - DMatrix::identity(2, 2))) < 1e-20);
    }

    #[test]
    fn poles_lie_in_lower_half_plane() {
        let r = Realization::new(&config(1.0, 10), 3).unwrap();
        let p = r.poles().unwrap();
        assert_eq!(p.len(), 80);
        assert!(p.iter().all(|z| z.im < 0.0));
        // trace of H_eff is preserved
        let tr: f64 = r.eigenvalues().iter().sum();
        let sum_re: f64 = p.iter().map(|z| z.re).sum();
        assert!((tr - sum_re).abs() < 1e-10);
    }

    #[test]
    fn exact_eigenvalue_is_nudged() {
        let r = Realization::new(&config(0.0, 0), 0).unwrap();
        let e = r.eigenvalues()[40];
        assert!(r.smatrix(e).unwrap().iter().all(|c| c.is_finite()));
    }

    #[test]
    fn deterministic_streams() {
        let c = config(1.0, 10);
        let a = smatrix_trace(&c, 5).unwrap();
        let b = smatrix_trace(&c, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, smatrix_trace(&c, 6).unwrap());
    }
}
