use super::config::SigmaConfig;

/// Smallest ε accepted when it is derived from observed distances.
pub const EPSILON_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceRule {
    /// Some trajectory within ε of memory.
    Increase,
    /// Every trajectory at least 2ε from memory.
    Decrease,
    Hold,
}

/// Lagrange multiplier σ and its threshold ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaController {
    pub sigma: f64,
    pub epsilon: Option<f64>,
    pub config: SigmaConfig,
}

impl SigmaController {
    pub fn new(config: SigmaConfig) -> Self {
        Self { sigma: config.init, epsilon: config.epsilon, config }
    }

    /// Back to the initial σ; a derived ε is forgotten.
    pub fn reset(&mut self) {
        *self = Self::new(self.config);
    }

    /// Derives ε from the first observed distances if none is set yet.
    pub fn ensure_epsilon(&mut self, distances: &[f64]) -> f64 {
        if let Some(e) = self.epsilon {
            return e;
        }
        let e = (self.config.epsilon_scale * median(distances)).max(EPSILON_FLOOR);
        self.epsilon = Some(e);
        e
    }

    pub fn distance_rule(&self, distances: &[f64], epsilon: f64) -> DistanceRule {
        if distances.iter().any(|&d| d <= epsilon) {
            DistanceRule::Increase
        } else if !distances.is_empty() && distances.iter().all(|&d| d >= 2.0 * epsilon) {
            DistanceRule::Decrease
        } else {
            DistanceRule::Hold
        }
    }

    /// Applies one update from the trajectory-to-memory MMDs of a batch.
    /// `None` (no memory) leaves σ unchanged. Returns the factor applied.
    pub fn update(&mut self, distances: Option<&[f64]>, same_goal: bool) -> f64 {
        let Some(d) = distances else { return 1.0 };
        if d.is_empty() {
            return 1.0;
        }
        let eps = self.ensure_epsilon(d);
        let mut factor = match self.distance_rule(d, eps) {
            DistanceRule::Increase => self.config.up_factor,
            DistanceRule::Decrease => self.config.down_factor,
            DistanceRule::Hold => 1.0,
        };
        if same_goal {
            factor *= self.config.same_goal_factor;
        }
        self.sigma *= factor;
        if let Some(m) = self.config.max {
            self.sigma = self.sigma.min(m);
        }
        factor
    }
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
