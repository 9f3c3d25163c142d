//! Seeded random states and operators.
//!
//! All randomness in the crate goes through [`Rng64`], a ChaCha8 stream
//! seeded from a `u64`. The same seed gives the same numbers on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{normalized, CMatrix, C64};

pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random unit vector.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
        if let Some(v) = normalized(&v) {
            return v;
        }
    }
}

/// Uniform point on the probability simplex.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..len).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Hermitian matrix with i.i.d. Gaussian entries (GUE up to scale).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian_c64(rng));
    g.hermitian_part()
}

/// Haar-random unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    'retry: loop {
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
            // two passes of modified Gram–Schmidt
            for _ in 0..2 {
                for u in &cols {
                    let ip: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= ip * y;
                    }
                }
            }
            match normalized(&v) {
                Some(v) => cols.push(v),
                None => continue 'retry,
            }
        }
        return CMatrix::from_fn(dim, dim, |i, j| cols[j][i]);
    }
}

/// Random diagonal unitary.
pub fn random_diagonal_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let d: Vec<C64> = (0..dim)
        .map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    CMatrix::from_diag(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = rng_from_seed(1);
        for dim in 1..9 {
            assert!(random_unitary(&mut rng, dim).unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn seeding_is_reproducible() {
        let a = random_ket(&mut rng_from_seed(99), 5);
        let b = random_ket(&mut rng_from_seed(99), 5);
        assert_eq!(a, b);
    }

    #[test]
    fn distributions_sum_to_one() {
        let mut rng = rng_from_seed(5);
        let p = random_distribution(&mut rng, 7);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(p.iter().all(|&x| x >= 0.0));
    }
}
