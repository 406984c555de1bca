//! Seeded synthetic point sets.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// `n` points uniform in `[0, 1)^dim`.
pub fn uniform_points(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect()
}

/// `n` points from `clusters` isotropic Gaussians with standard deviation
/// `spread`, centered uniformly in `[0, 10)^dim`. Points are assigned to
/// clusters round-robin.
pub fn gaussian_mixture(
    n: usize,
    dim: usize,
    clusters: usize,
    spread: f64,
    seed: u64,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clusters = clusters.max(1);
    let centers: Vec<Vec<f64>> = (0..clusters)
        .map(|_| (0..dim).map(|_| 10.0 * rng.random::<f64>()).collect())
        .collect();
    (0..n)
        .map(|i| {
            centers[i % clusters]
                .iter()
                .map(|&c| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    c + spread * z
                })
                .collect()
        })
        .collect()
}

/// Degenerate inputs that stress tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adversarial {
    /// Few distinct locations, each repeated many times.
    Duplicates,
    /// Integer positions on a line, so many distances coincide.
    Collinear,
    /// Points on a small integer grid.
    Lattice,
    /// All points at one location.
    Identical,
}

impl Adversarial {
    pub const ALL: [Self; 4] = [
        Self::Duplicates,
        Self::Collinear,
        Self::Lattice,
        Self::Identical,
    ];
}

pub fn adversarial_points(kind: Adversarial, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        Adversarial::Duplicates => {
            let sites = (n / 4).max(1);
            let locs: Vec<[f64; 2]> = (0..sites)
                .map(|_| [rng.random_range(0..5) as f64, rng.random_range(0..5) as f64])
                .collect();
            (0..n)
                .map(|_| locs[rng.random_range(0..sites)].to_vec())
                .collect()
        }
        Adversarial::Collinear => (0..n)
            .map(|_| vec![rng.random_range(0..(n as i64)) as f64])
            .collect(),
        Adversarial::Lattice => {
            let side = (libm::sqrt(n as f64) as i64).max(2);
            (0..n)
                .map(|_| {
                    vec![
                        rng.random_range(0..side) as f64,
                        rng.random_range(0..side) as f64,
                    ]
                })
                .collect()
        }
        Adversarial::Identical => vec![vec![1.5, -2.0]; n],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_shaped() {
        let a = gaussian_mixture(30, 3, 4, 0.5, 9);
        assert_eq!(a, gaussian_mixture(30, 3, 4, 0.5, 9));
        assert!(a.len() == 30 && a.iter().all(|p| p.len() == 3));
        let u = uniform_points(10, 2, 1);
        assert!(u.iter().flatten().all(|&x| (0.0..1.0).contains(&x)));
        assert_ne!(u, uniform_points(10, 2, 2));
        for kind in Adversarial::ALL {
            assert_eq!(adversarial_points(kind, 12, 0).len(), 12);
        }
    }
}
