use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }
}

/// Compass moves. North increases `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    East,
    South,
    West,
    North,
}

impl Action {
    pub const COUNT: usize = 4;
    pub const ALL: [Action; 4] = [Action::East, Action::South, Action::West, Action::North];

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL.get(i).copied().ok_or_else(|| Error::invalid("action id must be in 0..4"))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn delta(self) -> (i32, i32) {
        match self {
            Action::East => (1, 0),
            Action::South => (0, -1),
            Action::West => (-1, 0),
            Action::North => (0, 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Goal {
    pub id: u32,
    pub cell: Cell,
    pub reward: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridState {
    pub pos: Cell,
    pub t: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub next: GridState,
    pub reward: f64,
    /// Goal reached or step budget used up.
    pub terminal: bool,
    /// Budget used up without reaching a goal.
    pub truncated: bool,
    pub goal_id: Option<u32>,
}

/// Single-agent gridworld with bump-and-stay walls and terminal goal cells.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWorld {
    width: u32,
    height: u32,
    walls: Vec<bool>,
    start: Cell,
    goals: Vec<Goal>,
    max_steps: u32,
}

impl GridWorld {
    pub fn new(width: u32, height: u32, walls: &[Cell], start: Cell, goals: Vec<Goal>, max_steps: u32) -> Result<Self> {
        if width == 0 || height == 0 || max_steps == 0 {
            return Err(Error::invalid("grid dimensions and max_steps must be positive"));
        }
        let mut w = vec![false; width as usize * height as usize];
        let mut env = Self { width, height, walls: Vec::new(), start, goals: Vec::new(), max_steps };
        for &c in walls {
            if !env.contains(c) {
                return Err(Error::invalid("wall outside grid"));
            }
            w[env.index(c)] = true;
        }
        env.walls = w;
        if !env.contains(start) || env.is_wall(start) {
            return Err(Error::invalid("start must be a free cell inside the grid"));
        }
        let mut cells = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for g in &goals {
            if !env.contains(g.cell) || env.is_wall(g.cell) || g.cell == start {
                return Err(Error::invalid("goal must be a free non-start cell inside the grid"));
            }
            if !(g.reward > 0.0 && g.reward.is_finite()) {
                return Err(Error::invalid("goal rewards must be positive"));
            }
            if !cells.insert(g.cell) || !ids.insert(g.id) {
                return Err(Error::invalid("goal cells and ids must be distinct"));
            }
        }
        env.goals = goals;
        Ok(env)
    }

    /// Parses a text layout: `#` wall, `.` free, `S` start, digits are goal ids.
    /// The first line is the top row (largest `y`).
    pub fn from_text(text: &str, rewards: &[(u32, f64)], max_steps: u32) -> Result<Self> {
        let rows: Vec<&str> = text.lines().map(str::trim_end).filter(|l| !l.is_empty()).collect();
        let height = rows.len();
        let width = rows.first().map(|r| r.chars().count()).unwrap_or(0);
        if height == 0 || width == 0 {
            return Err(Error::invalid("empty maze text"));
        }
        let mut start = None;
        let mut walls = Vec::new();
        let mut goals = Vec::new();
        for (r, line) in rows.iter().enumerate() {
            if line.chars().count() != width {
                return Err(Error::invalid("maze rows must have equal length"));
            }
            let y = (height - 1 - r) as i32;
            for (x, ch) in line.chars().enumerate() {
                let c = Cell::new(x as i32, y);
                match ch {
                    '#' => walls.push(c),
                    '.' => {}
                    'S' => {
                        if start.replace(c).is_some() {
                            return Err(Error::invalid("maze has more than one start"));
                        }
                    }
                    d if d.is_ascii_digit() => {
                        let id = d as u32 - '0' as u32;
                        let reward = rewards
                            .iter()
                            .find(|(g, _)| *g == id)
                            .map(|(_, r)| *r)
                            .ok_or_else(|| Error::invalid(alloc::format!("no reward given for goal {id}")))?;
                        goals.push(Goal { id, cell: c, reward });
                    }
                    other => return Err(Error::invalid(alloc::format!("unknown maze character {other:?}"))),
                }
            }
        }
        let start = start.ok_or_else(|| Error::invalid("maze has no start"))?;
        Self::new(width as u32, height as u32, &walls, start, goals, max_steps)
    }

    /// Inverse of [`GridWorld::from_text`].
    pub fn to_text(&self) -> alloc::string::String {
        let mut s = alloc::string::String::new();
        for y in (0..self.height as i32).rev() {
            for x in 0..self.width as i32 {
                let c = Cell::new(x, y);
                let ch = if c == self.start {
                    'S'
                } else if self.is_wall(c) {
                    '#'
                } else if let Some(g) = self.goal_at(c) {
                    char::from_digit(g.id % 10, 10).unwrap_or('?')
                } else {
                    '.'
                };
                s.push(ch);
            }
            s.push('\n');
        }
        s
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn start(&self) -> Cell {
        self.start
    }

    pub fn goals(&self) -> &[Goal] {
        &self.goals
    }

    pub fn max_steps(&self) -> u32 {
        self.max_steps
    }

    pub fn set_max_steps(&mut self, max_steps: u32) {
        self.max_steps = max_steps.max(1);
    }

    pub fn walls(&self) -> Vec<Cell> {
        (0..self.height as i32)
            .flat_map(|y| (0..self.width as i32).map(move |x| Cell::new(x, y)))
            .filter(|&c| self.is_wall(c))
            .collect()
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as u32) < self.width && (c.y as u32) < self.height
    }

    fn index(&self, c: Cell) -> usize {
        c.y as usize * self.width as usize + c.x as usize
    }

    pub fn is_wall(&self, c: Cell) -> bool {
        self.contains(c) && self.walls[self.index(c)]
    }

    pub fn goal_at(&self, c: Cell) -> Option<&Goal> {
        self.goals.iter().find(|g| g.cell == c)
    }

    pub fn goal(&self, id: u32) -> Option<&Goal> {
        self.goals.iter().find(|g| g.id == id)
    }

    /// Largest goal reward in the layout.
    pub fn best_reward(&self) -> f64 {
        self.goals.iter().map(|g| g.reward).fold(0.0, f64::max)
    }

    /// Id of the highest-reward goal.
    pub fn optimal_goal(&self) -> Option<u32> {
        self.goals.iter().max_by(|a, b| a.reward.total_cmp(&b.reward)).map(|g| g.id)
    }

    pub fn reset(&self) -> GridState {
        GridState { pos: self.start, t: 0 }
    }

    /// Position after a move, ignoring goals and the step budget.
    pub fn move_from(&self, pos: Cell, action: Action) -> Cell {
        let (dx, dy) = action.delta();
        let next = Cell::new(pos.x + dx, pos.y + dy);
        if self.contains(next) && !self.is_wall(next) {
            next
        } else {
            pos
        }
    }

    pub fn step(&self, state: GridState, action: usize) -> Result<StepResult> {
        if !self.contains(state.pos) {
            return Err(Error::invalid("state outside grid"));
        }
        let action = Action::from_index(action)?;
        let pos = self.move_from(state.pos, action);
        let next = GridState { pos, t: state.t + 1 };
        let goal = self.goal_at(pos);
        let reward = goal.map(|g| g.reward).unwrap_or(0.0);
        let out_of_time = next.t >= self.max_steps;
        Ok(StepResult {
            next,
            reward,
            terminal: goal.is_some() || out_of_time,
            truncated: goal.is_none() && out_of_time,
            goal_id: goal.map(|g| g.id),
        })
    }

    /// Policy input: coordinates relative to the start, scaled by the grid size.
    pub fn observe(&self, pos: Cell) -> [f64; 2] {
        relative_obs(pos, self.start, self.width, self.height)
    }
}

pub(crate) fn relative_obs(pos: Cell, start: Cell, width: u32, height: u32) -> [f64; 2] {
    [(pos.x - start.x) as f64 / width as f64, (pos.y - start.y) as f64 / height as f64]
}
