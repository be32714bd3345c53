use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::problem::{NORMALIZED_LOWER, NORMALIZED_UPPER};

/// Ask/tell interface of the baseline optimizers. `tell` receives `None`
/// for evaluations that failed.
pub trait Optimizer {
    fn ask(&mut self, rng: &mut ChaCha8Rng) -> Vec<f64>;
    fn tell(&mut self, x: &[f64], y: Option<f64>);
}

fn uniform_point(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dim)
        .map(|_| rng.random_range(NORMALIZED_LOWER..=NORMALIZED_UPPER))
        .collect()
}

/// Reflects `x` back into the normalized box, folding repeatedly for
/// steps longer than the box.
pub fn mirror_into_domain(x: f64) -> f64 {
    let width = NORMALIZED_UPPER - NORMALIZED_LOWER;
    let y = (x - NORMALIZED_LOWER).rem_euclid(2.0 * width);
    let folded = if y > width { 2.0 * width - y } else { y };
    NORMALIZED_LOWER + folded
}

/// Independent uniform samples over the normalized box.
#[derive(Debug, Clone)]
pub struct RandomSearch {
    dim: usize,
}

impl RandomSearch {
    pub fn new(dim: usize) -> Self {
        RandomSearch { dim }
    }
}

impl Optimizer for RandomSearch {
    fn ask(&mut self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        uniform_point(self.dim, rng)
    }

    fn tell(&mut self, _x: &[f64], _y: Option<f64>) {}
}

/// (1+1) evolution strategy with the 1/5th success rule.
///
/// The step size grows by `factor` after an improvement and shrinks by
/// `factor^(-1/4)` otherwise, which is stationary at a 1/5 success rate.
#[derive(Debug, Clone)]
pub struct OnePlusOneEs {
    dim: usize,
    pub sigma: f64,
    pub factor: f64,
    pub min_sigma: f64,
    parent: Option<(Vec<f64>, f64)>,
    /// Initial point awaiting its value.
    pending_init: bool,
}

impl OnePlusOneEs {
    pub const DEFAULT_SIGMA: f64 = 2.0;
    pub const DEFAULT_FACTOR: f64 = 1.5;

    pub fn new(dim: usize) -> Self {
        OnePlusOneEs {
            dim,
            sigma: Self::DEFAULT_SIGMA,
            factor: Self::DEFAULT_FACTOR,
            min_sigma: 1e-8,
            parent: None,
            pending_init: true,
        }
    }

    pub fn parent(&self) -> Option<&(Vec<f64>, f64)> {
        self.parent.as_ref()
    }
}

impl Optimizer for OnePlusOneEs {
    fn ask(&mut self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match &self.parent {
            Some((p, _)) if !self.pending_init => p
                .iter()
                .map(|&c| {
                    let z: f64 = rng.sample(StandardNormal);
                    mirror_into_domain(c + self.sigma * z)
                })
                .collect(),
            _ => uniform_point(self.dim, rng),
        }
    }

    fn tell(&mut self, x: &[f64], y: Option<f64>) {
        let y = y.filter(|v| !v.is_nan()).unwrap_or(f64::INFINITY);
        if self.pending_init {
            // a failed initial point is kept only until something succeeds
            self.parent = Some((x.to_vec(), y));
            self.pending_init = y == f64::INFINITY;
            return;
        }
        let parent_y = self.parent.as_ref().map_or(f64::INFINITY, |p| p.1);
        if y <= parent_y {
            self.parent = Some((x.to_vec(), y));
            self.sigma *= self.factor;
        } else {
            self.sigma = (self.sigma * self.factor.powf(-0.25)).max(self.min_sigma);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn mirror_folds_into_box() {
        assert_eq!(mirror_into_domain(0.5), 0.5);
        assert_eq!(mirror_into_domain(6.0), 4.0);
        assert_eq!(mirror_into_domain(-7.0), -3.0);
        assert_eq!(mirror_into_domain(16.0), -4.0);
        assert_eq!(mirror_into_domain(5.0), 5.0);
        assert_eq!(mirror_into_domain(-5.0), -5.0);
    }

    #[test]
    fn es_adapts_step_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut es = OnePlusOneEs::new(2);
        let x0 = es.ask(&mut rng);
        es.tell(&x0, Some(1.0));
        let x1 = es.ask(&mut rng);
        assert!(x1.iter().all(|v| (-5.0..=5.0).contains(v)));
        es.tell(&x1, Some(0.5));
        assert_eq!(es.sigma, 3.0);
        let x2 = es.ask(&mut rng);
        es.tell(&x2, Some(2.0));
        assert!((es.sigma - 3.0 * 1.5f64.powf(-0.25)).abs() < 1e-15);
        assert_eq!(es.parent().unwrap().1, 0.5);
        // failures never replace the parent
        let x3 = es.ask(&mut rng);
        es.tell(&x3, None);
        assert_eq!(es.parent().unwrap().1, 0.5);
    }

    #[test]
    fn es_sphere_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut es = OnePlusOneEs::new(3);
        for _ in 0..300 {
            let x = es.ask(&mut rng);
            let y: f64 = x.iter().map(|v| (v - 1.0) * (v - 1.0)).sum();
            es.tell(&x, Some(y));
        }
        assert!(es.parent().unwrap().1 < 1e-3);
    }

    #[test]
    fn random_search_stays_in_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut rs = RandomSearch::new(5);
        for _ in 0..100 {
            assert!(rs.ask(&mut rng).iter().all(|v| (-5.0..=5.0).contains(v)));
        }
    }
}
