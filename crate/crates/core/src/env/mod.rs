//! Deterministic gridworld tasks and the feature map used for trajectory distances.

mod grid;
mod mazes;
mod mpe;

pub use grid::{Action, Cell, Goal, GridState, GridWorld, StepResult};
pub use mazes::{build_standard_mazes, open_mpe, open_two_goal, open_three_goal, StandardMazes, GOAL_OPTIMAL, GOAL_SUBOPTIMAL, GOAL_THIRD};
pub use mpe::{JointState, JointStep, MpeGrid};

use alloc::vec;
use alloc::vec::Vec;

/// What the feature map g(s, a) keeps from a state-action pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FeatureMode {
    /// Normalized coordinates `(x / width, y / height)`.
    #[default]
    Coords,
    /// Coordinates followed by a one-hot action.
    StateAction,
}

impl FeatureMode {
    pub fn dim(self) -> usize {
        match self {
            FeatureMode::Coords => 2,
            FeatureMode::StateAction => 2 + Action::COUNT,
        }
    }
}

/// Feature point of a position and action on a `width × height` grid.
pub fn features(width: u32, height: u32, pos: Cell, action: Action, mode: FeatureMode) -> Vec<f64> {
    let mut f = vec![pos.x as f64 / width as f64, pos.y as f64 / height as f64];
    if mode == FeatureMode::StateAction {
        let mut onehot = [0.0; Action::COUNT];
        onehot[action.index()] = 1.0;
        f.extend_from_slice(&onehot);
    }
    f
}

/// Per-cell visit totals, row-major with index `y * width + x`.
pub fn visitation_counts<'a, I>(width: u32, height: u32, paths: I) -> Vec<u64>
where
    I: IntoIterator<Item = &'a [Cell]>,
{
    let mut counts = vec![0u64; width as usize * height as usize];
    for path in paths {
        for c in path {
            if c.x >= 0 && c.y >= 0 && (c.x as u32) < width && (c.y as u32) < height {
                counts[c.y as usize * width as usize + c.x as usize] += 1;
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_examples() {
        assert_eq!(features(50, 50, Cell::new(0, 0), Action::East, FeatureMode::Coords), vec![0.0, 0.0]);
        assert_eq!(features(50, 50, Cell::new(49, 49), Action::East, FeatureMode::Coords), vec![0.98, 0.98]);
        assert_eq!(
            features(50, 50, Cell::new(0, 0), Action::East, FeatureMode::StateAction),
            vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn visitation_examples() {
        let path = [Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 0), Cell::new(0, 1)];
        let c = visitation_counts(3, 3, [&path[..]]);
        assert_eq!(c.iter().sum::<u64>(), 4);
        assert_eq!(c.iter().filter(|&&v| v > 0).count(), 3);
        assert_eq!(c[0], 2);
        let empty: [&[Cell]; 0] = [];
        assert!(visitation_counts(3, 3, empty).iter().all(|&v| v == 0));
    }
}
