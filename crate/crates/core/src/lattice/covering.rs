//! Sampled covering radius of flowed lattices and the resulting box-volume
//! threshold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::basis::LatticeBasis;
use super::flow::{flowed_columns, DiagonalFlowVector};
use super::reduce::{self, Qr};
use crate::error::Result;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// Point `i` of the Halton sequence in `[0,1)^d`, rotated by `shift` modulo 1.
pub fn halton(i: u64, shift: &[f64]) -> Vec<f64> {
    shift
        .iter()
        .zip(PRIMES)
        .map(|(&s, p)| {
            let v = radical_inverse(i + 1, p) + s;
            v - v.floor()
        })
        .collect()
}

/// Distance from `x` to the nearest lattice point.
fn distance_to_lattice(qr: &Qr, x: &[f64], cols: &reduce::Columns) -> f64 {
    let start = qr.nearest_plane(x);
    let y = reduce::apply(cols, &start);
    let mut best: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
    qr.search(x, best * (1.0 + 1e-12), true, |_, d| {
        if d < best {
            best = d;
            true
        } else {
            false
        }
    });
    best.sqrt()
}

/// Lower estimate of the covering radius of `g_t Λ`: the largest distance to
/// the lattice among `samples` shifted Halton points of a fundamental cell.
/// For a fixed seed the sample set only grows with `samples`.
pub fn covering_radius_estimate(
    b: &LatticeBasis,
    t: &DiagonalFlowVector,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let cols = flowed_columns(b, t)?;
    let d = cols.len();
    let (reduced, _) = reduce::lll(&cols, 0.99);
    let qr = Qr::new(&reduced);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
    let best = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let u = halton(i, &shift);
            let x = reduce::apply_real(&reduced, &u);
            distance_to_lattice(&qr, &x, &reduced)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringProfile {
    pub flows: Vec<DiagonalFlowVector>,
    pub radii: Vec<f64>,
    pub max_radius: f64,
    /// `(2 * max_radius)^d`
    pub threshold: f64,
}

pub fn covering_profile(
    b: &LatticeBasis,
    grid: &[DiagonalFlowVector],
    samples: usize,
    seed: u64,
) -> Result<CoveringProfile> {
    let radii = grid
        .iter()
        .map(|t| covering_radius_estimate(b, t, samples, seed))
        .collect::<Result<Vec<_>>>()?;
    let max_radius = radii.iter().copied().fold(0.0, f64::max);
    Ok(CoveringProfile {
        flows: grid.to_vec(),
        radii,
        max_radius,
        threshold: (2.0 * max_radius).powi(b.dim() as i32),
    })
}

/// Empirical volume threshold `(2 max_t μ(g_t Λ))^d` over the grid.
pub fn danzer_constant_estimate(
    b: &LatticeBasis,
    grid: &[DiagonalFlowVector],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    covering_profile(b, grid, samples, seed).map(|p| p.threshold)
}
