use alloc::vec;

use super::{Cell, Goal, GridWorld, MpeGrid};

pub const GOAL_OPTIMAL: u32 = 0;
pub const GOAL_SUBOPTIMAL: u32 = 1;
pub const GOAL_THIRD: u32 = 2;

/// Open `width × height` room: start `(0,0)`, reward 6 at the top-right
/// corner, reward 1 at `(⌊W/3⌋, 0)`.
pub fn open_two_goal(width: u32, height: u32, max_steps: u32) -> GridWorld {
    let goals = vec![
        Goal { id: GOAL_OPTIMAL, cell: Cell::new(width as i32 - 1, height as i32 - 1), reward: 6.0 },
        Goal { id: GOAL_SUBOPTIMAL, cell: Cell::new((width / 3) as i32, 0), reward: 1.0 },
    ];
    GridWorld::new(width, height, &[], Cell::new(0, 0), goals, max_steps).expect("valid standard layout")
}

/// [`open_two_goal`] plus a reward-2 goal at `(0, ⌊2H/3⌋)`.
pub fn open_three_goal(width: u32, height: u32, max_steps: u32) -> GridWorld {
    let mut goals = open_two_goal(width, height, max_steps).goals().to_vec();
    goals.push(Goal { id: GOAL_THIRD, cell: Cell::new(0, (2 * height / 3) as i32), reward: 2.0 });
    GridWorld::new(width, height, &[], Cell::new(0, 0), goals, max_steps).expect("valid standard layout")
}

/// Two agents starting at `(0,0)` and `(0,1)` in an open two-goal room.
pub fn open_mpe(width: u32, height: u32, max_steps: u32) -> MpeGrid {
    MpeGrid::new(open_two_goal(width, height, max_steps), vec![Cell::new(0, 0), Cell::new(0, 1)], true)
        .expect("valid standard layout")
}

#[derive(Debug, Clone)]
pub struct StandardMazes {
    pub grid50: GridWorld,
    pub grid70: GridWorld,
    pub grid70_three_goal: GridWorld,
    pub mpe70: MpeGrid,
}

pub fn build_standard_mazes() -> StandardMazes {
    StandardMazes {
        grid50: open_two_goal(50, 50, 160),
        grid70: open_two_goal(70, 70, 220),
        grid70_three_goal: open_three_goal(70, 70, 220),
        mpe70: open_mpe(70, 70, 240),
    }
}
