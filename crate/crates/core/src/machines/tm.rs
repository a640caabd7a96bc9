use std::fmt;

use crate::error::{Error, Result};

/// Dense index of a machine state.
pub type StateId = usize;
/// Dense index of a tape symbol.
pub type SymbolId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

impl Move {
    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
        }
    }
}

/// One cell of the lookup table: either halt, or write/move/next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Halt,
    Write {
        symbol: SymbolId,
        dir: Move,
        next: StateId,
    },
}

/// A single-tape deterministic Turing machine with `m` states and `t` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    state_names: Vec<String>,
    symbol_names: Vec<String>,
    table: Vec<Action>,
}

impl TuringMachine {
    /// Builds a machine from a row-major table indexed `[state * t + symbol]`.
    pub fn new(
        state_names: Vec<String>,
        symbol_names: Vec<String>,
        table: Vec<Action>,
    ) -> Result<Self> {
        let (m, t) = (state_names.len(), symbol_names.len());
        if m == 0 || t == 0 {
            return Err(Error::invalid("machine needs at least one state and one symbol"));
        }
        if table.len() != m * t {
            return Err(Error::invalid(format!(
                "table has {} entries, expected {}",
                table.len(),
                m * t
            )));
        }
        for (k, a) in table.iter().enumerate() {
            if let Action::Write { symbol, next, .. } = *a {
                if symbol >= t || next >= m {
                    return Err(Error::invalid(format!(
                        "transition ({}, {}) out of range",
                        state_names[k / t], symbol_names[k % t]
                    )));
                }
            }
        }
        Ok(TuringMachine { state_names, symbol_names, table })
    }

    /// Convenience constructor with generated names `q0.. ` and `0..`.
    pub fn from_table(m: usize, t: usize, table: Vec<Action>) -> Result<Self> {
        Self::new(
            (0..m).map(|i| format!("q{i}")).collect(),
            (0..t).map(|j| j.to_string()).collect(),
            table,
        )
    }

    pub fn states(&self) -> usize {
        self.state_names.len()
    }

    pub fn symbols(&self) -> usize {
        self.symbol_names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q]
    }

    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.symbol_names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.symbol_names
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<SymbolId> {
        self.symbol_names.iter().position(|n| n == name)
    }

    pub fn action(&self, q: StateId, s: SymbolId) -> Action {
        self.table[q * self.symbols() + s]
    }

    pub fn set_action(&mut self, q: StateId, s: SymbolId, a: Action) {
        let t = self.symbols();
        self.table[q * t + s] = a;
    }

    /// Advances `cfg` by one step. Returns `Halted` without touching the tape.
    pub fn step(&self, cfg: &TmConfiguration) -> Result<TmStep> {
        let mut next = cfg.clone();
        Ok(if self.step_in_place(&mut next)? {
            TmStep::Next(next)
        } else {
            TmStep::Halted
        })
    }

    /// In-place variant of [`step`](Self::step); returns `false` on halt.
    pub fn step_in_place(&self, cfg: &mut TmConfiguration) -> Result<bool> {
        cfg.check(self)?;
        match self.action(cfg.state, cfg.head) {
            Action::Halt => Ok(false),
            Action::Write { symbol, dir, next } => {
                cfg.head = symbol;
                cfg.state = next;
                match dir {
                    Move::Left => cfg.move_left(),
                    Move::Right => cfg.move_right(),
                }
                Ok(true)
            }
        }
    }

    /// Runs up to `max_steps` steps; returns the number of steps taken and
    /// whether the machine halted.
    pub fn run(&self, cfg: &mut TmConfiguration, max_steps: u64) -> Result<(u64, bool)> {
        for k in 0..max_steps {
            if !self.step_in_place(cfg)? {
                return Ok((k, true));
            }
        }
        Ok((max_steps, false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TmStep {
    Next(TmConfiguration),
    Halted,
}

/// Tape with periodic ends, a finite middle and the head cell.
///
/// All words are given in left-to-right tape order. `left_periodic` repeats
/// outward to the left, `right_periodic` outward to the right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TmConfiguration {
    pub(crate) state: StateId,
    left_periodic: Vec<SymbolId>,
    // tape order, nearest cell last
    left: Vec<SymbolId>,
    head: SymbolId,
    // reversed tape order, nearest cell last
    right_rev: Vec<SymbolId>,
    right_periodic: Vec<SymbolId>,
}

impl TmConfiguration {
    pub fn new(
        state: StateId,
        left_periodic: Vec<SymbolId>,
        left: Vec<SymbolId>,
        head: SymbolId,
        right: Vec<SymbolId>,
        right_periodic: Vec<SymbolId>,
    ) -> Result<Self> {
        if left_periodic.is_empty() || right_periodic.is_empty() {
            return Err(Error::invalid("periodic tape words must be non-empty"));
        }
        let mut right_rev = right;
        right_rev.reverse();
        Ok(TmConfiguration { state, left_periodic, left, head, right_rev, right_periodic })
    }

    /// A tape filled with `blank` on both sides.
    pub fn blank(state: StateId, blank: SymbolId) -> Self {
        TmConfiguration {
            state,
            left_periodic: vec![blank],
            left: Vec::new(),
            head: blank,
            right_rev: Vec::new(),
            right_periodic: vec![blank],
        }
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn head(&self) -> SymbolId {
        self.head
    }

    pub fn left_periodic(&self) -> &[SymbolId] {
        &self.left_periodic
    }

    pub fn right_periodic(&self) -> &[SymbolId] {
        &self.right_periodic
    }

    /// Finite left part, tape order (`b_x .. b_1`).
    pub fn left(&self) -> &[SymbolId] {
        &self.left
    }

    /// Finite right part, tape order (`d_1 .. d_y`).
    pub fn right(&self) -> Vec<SymbolId> {
        self.right_rev.iter().rev().copied().collect()
    }

    /// Symbol at signed offset from the head.
    pub fn cell(&self, offset: i64) -> SymbolId {
        if offset == 0 {
            return self.head;
        }
        if offset < 0 {
            let k = (-offset) as usize; // 1-based distance
            if k <= self.left.len() {
                return self.left[self.left.len() - k];
            }
            let j = k - self.left.len() - 1;
            let p = &self.left_periodic;
            p[p.len() - 1 - j % p.len()]
        } else {
            let k = offset as usize;
            if k <= self.right_rev.len() {
                return self.right_rev[self.right_rev.len() - k];
            }
            let j = k - self.right_rev.len() - 1;
            self.right_periodic[j % self.right_periodic.len()]
        }
    }

    /// Cells from `-radius` to `radius` around the head.
    pub fn window(&self, radius: i64) -> Vec<SymbolId> {
        (-radius..=radius).map(|o| self.cell(o)).collect()
    }

    fn move_left(&mut self) {
        if self.left.is_empty() {
            self.left.extend_from_slice(&self.left_periodic);
        }
        let new_head = self.left.pop().expect("left part unfolded");
        self.right_rev.push(self.head);
        self.head = new_head;
    }

    fn move_right(&mut self) {
        if self.right_rev.is_empty() {
            self.right_rev.extend(self.right_periodic.iter().rev());
        }
        let new_head = self.right_rev.pop().expect("right part unfolded");
        self.left.push(self.head);
        self.head = new_head;
    }

    pub(crate) fn check(&self, tm: &TuringMachine) -> Result<()> {
        let t = tm.symbols();
        let ok = self.state < tm.states()
            && self.head < t
            && self
                .left_periodic
                .iter()
                .chain(&self.left)
                .chain(&self.right_rev)
                .chain(&self.right_periodic)
                .all(|&s| s < t);
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("configuration refers to unknown state or symbol"))
        }
    }

    /// Absorbs finite cells that merely repeat the periodic ends, so that two
    /// configurations describing the same tape compare equal.
    pub fn normalized(&self) -> Self {
        let mut c = self.clone();
        // left: the cell nearest the periodic part is left[0]; it can be
        // dropped when it equals the periodic prediction and the periodic word
        // is rotated accordingly.
        while let Some(&first) = c.left.first() {
            let p = &mut c.left_periodic;
            if *p.first().unwrap() == first {
                c.left.remove(0);
                p.rotate_left(1);
            } else {
                break;
            }
        }
        while let Some(&last) = c.right_rev.first() {
            let p = &mut c.right_periodic;
            if *p.last().unwrap() == last {
                c.right_rev.remove(0);
                p.rotate_right(1);
            } else {
                break;
            }
        }
        c
    }
}

impl fmt::Display for TmConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q{} [{:?}]^inf {:?} ({}) {:?} [{:?}]^inf",
            self.state,
            self.left_periodic,
            self.left,
            self.head,
            self.right(),
            self.right_periodic
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn right_mover() -> TuringMachine {
        TuringMachine::from_table(
            1,
            2,
            vec![
                Action::Write { symbol: 1, dir: Move::Right, next: 0 },
                Action::Write { symbol: 1, dir: Move::Right, next: 0 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn halts_on_halt_entry() {
        let tm = TuringMachine::from_table(1, 1, vec![Action::Halt]).unwrap();
        let cfg = TmConfiguration::blank(0, 0);
        assert_eq!(tm.step(&cfg).unwrap(), TmStep::Halted);
    }

    #[test]
    fn right_mover_leaves_trail() {
        let tm = right_mover();
        let mut cfg = TmConfiguration::blank(0, 0);
        let (n, halted) = tm.run(&mut cfg, 3).unwrap();
        assert_eq!((n, halted), (3, false));
        assert_eq!(cfg.left(), &[1, 1, 1]);
        assert_eq!(cfg.head(), 0);
        assert_eq!(cfg.window(4), vec![0, 1, 1, 1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn periodic_cells_are_read_cyclically() {
        let cfg = TmConfiguration::new(0, vec![1, 2], vec![3], 4, vec![5], vec![6, 7]).unwrap();
        assert_eq!(cfg.window(4), vec![2, 1, 2, 3, 4, 5, 6, 7, 6]);
    }

    #[test]
    fn normalization_absorbs_redundant_cells() {
        let a = TmConfiguration::new(0, vec![1, 2], vec![1, 2], 0, vec![6, 7], vec![6, 7]).unwrap();
        let b = TmConfiguration::new(0, vec![1, 2], vec![], 0, vec![], vec![6, 7]).unwrap();
        assert_eq!(a.normalized(), b.normalized());
        assert_eq!(a.window(9), b.window(9));
    }

    #[test]
    fn rejects_empty_periodic_word() {
        assert!(TmConfiguration::new(0, vec![], vec![], 0, vec![], vec![0]).is_err());
    }
}
