//! Named smooth convex test functions for `smooth-named` and `dc` problems.

use crate::linalg::Vector;
use crate::operators::SmoothFunction;

/// `Σ_i huber_δ(x_i − c_i)`, minimized at `c` with value 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Huber {
    pub center: Vector,
    pub delta: f64,
}

impl SmoothFunction for Huber {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn value(&self, x: &Vector) -> f64 {
        let d = self.delta;
        x.iter()
            .zip(self.center.iter())
            .map(|(a, c)| {
                let r = (a - c).abs();
                if r <= d {
                    0.5 * r * r / d
                } else {
                    r - 0.5 * d
                }
            })
            .sum()
    }

    fn gradient(&self, x: &Vector) -> Vector {
        let d = self.delta;
        x.iter()
            .zip(self.center.iter())
            .map(|(a, c)| ((a - c) / d).clamp(-1.0, 1.0))
            .collect::<Vec<_>>()
            .into()
    }

    fn lipschitz(&self) -> f64 {
        1.0 / self.delta
    }
}

/// `Σ_i log cosh(x_i − c_i)`, minimized at `c` with value 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LogCosh {
    pub center: Vector,
}

impl SmoothFunction for LogCosh {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn value(&self, x: &Vector) -> f64 {
        x.iter()
            .zip(self.center.iter())
            .map(|(a, c)| {
                // log cosh r = |r| + log(1 + e^{−2|r|}) − log 2
                let r = (a - c).abs();
                r + (-2.0 * r).exp().ln_1p() - std::f64::consts::LN_2
            })
            .sum()
    }

    fn gradient(&self, x: &Vector) -> Vector {
        x.iter()
            .zip(self.center.iter())
            .map(|(a, c)| (a - c).tanh())
            .collect::<Vec<_>>()
            .into()
    }

    fn lipschitz(&self) -> f64 {
        1.0
    }
}
