//! Seeded random instances.

use std::collections::HashSet;

use polyg_core::{Instance, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Side length of the generation square `[0, SIDE]^2`.
pub const SIDE: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Distribution {
    Uniform,
    /// Gaussian blobs around uniformly placed centers.
    Clustered,
}

impl Distribution {
    pub fn name(self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::Clustered => "clustered",
        }
    }
}

/// `n` distinct integer points in `[0, SIDE]^2`. The result depends only on
/// the arguments.
pub fn generate(n: usize, distribution: Distribution, seed: u64) -> Result<Instance, polyg_core::Error> {
    if n < 3 {
        return Err(polyg_core::Error::TooFewPoints(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    let centers: Vec<(f64, f64)> = match distribution {
        Distribution::Uniform => Vec::new(),
        Distribution::Clustered => (0..(n / 200).clamp(1, 64))
            .map(|_| (rng.random_range(0.0..SIDE as f64), rng.random_range(0.0..SIDE as f64)))
            .collect(),
    };
    let spread = SIDE as f64 / 25.0;
    while points.len() < n {
        let (x, y) = match distribution {
            Distribution::Uniform => (rng.random_range(0..=SIDE), rng.random_range(0..=SIDE)),
            Distribution::Clustered => {
                let (cx, cy) = centers[rng.random_range(0..centers.len())];
                // Box-Muller
                let u1: f64 = 1.0 - rng.random::<f64>();
                let u2: f64 = rng.random();
                let r = spread * (-2.0 * u1.ln()).sqrt();
                let t = std::f64::consts::TAU * u2;
                let clamp = |v: f64| (v.round() as i64).clamp(0, SIDE);
                (clamp(cx + r * t.cos()), clamp(cy + r * t.sin()))
            }
        };
        if seen.insert((x, y)) {
            points.push(Point::new(points.len() as u32, x, y));
        }
    }
    let name = format!("{}-{n}-{seed}", distribution.name());
    Instance::from_points(name, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_and_in_range() {
        for dist in [Distribution::Uniform, Distribution::Clustered] {
            let inst = generate(1000, dist, 3).unwrap();
            assert_eq!(inst.len(), 1000);
            let set: HashSet<(i64, i64)> = inst.points().iter().map(|p| (p.x, p.y)).collect();
            assert_eq!(set.len(), 1000);
            assert!(inst.points().iter().all(|p| (0..=SIDE).contains(&p.x) && (0..=SIDE).contains(&p.y)));
        }
    }

    #[test]
    fn seeded() {
        assert_eq!(generate(50, Distribution::Uniform, 9), generate(50, Distribution::Uniform, 9));
        assert_ne!(generate(50, Distribution::Uniform, 9), generate(50, Distribution::Uniform, 10));
        assert_eq!(generate(3, Distribution::Uniform, 0).unwrap().len(), 3);
        assert!(generate(2, Distribution::Uniform, 0).is_err());
    }
}
