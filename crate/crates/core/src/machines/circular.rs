use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::machines::StateId;

/// Tape symbol of a binary right-moving machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ab {
    A,
    B,
}

impl Ab {
    pub fn letter(self) -> char {
        match self {
            Ab::A => 'A',
            Ab::B => 'B',
        }
    }

    pub fn parse_word(w: &str) -> Result<Vec<Ab>> {
        w.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                'A' => Ok(Ab::A),
                'B' => Ok(Ab::B),
                _ => Err(Error::invalid(format!("expected A or B, found {c:?}"))),
            })
            .collect()
    }

    pub fn word_string(w: &[Ab]) -> String {
        w.iter().map(|s| s.letter()).collect()
    }
}

/// What a right-moving machine does on reading a symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RightAction {
    Halt,
    /// Replaces the read cell by one or two cells, then moves right.
    Write { symbols: Vec<Ab>, next: StateId },
}

/// A binary Turing machine whose head always moves right on a circular tape.
/// Writing two symbols grows the tape by one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightTm {
    names: Vec<String>,
    // [state][A=0, B=1]
    table: Vec<[RightAction; 2]>,
}

impl RightTm {
    pub fn new(names: Vec<String>, table: Vec<[RightAction; 2]>) -> Result<Self> {
        if names.is_empty() || names.len() != table.len() {
            return Err(Error::invalid("one table row per state required"));
        }
        let k = names.len();
        for row in &table {
            for a in row {
                if let RightAction::Write { symbols, next } = a {
                    if symbols.is_empty() || symbols.len() > 2 {
                        return Err(Error::invalid("a transition writes one or two symbols"));
                    }
                    if *next >= k {
                        return Err(Error::invalid("next state out of range"));
                    }
                }
            }
        }
        Ok(RightTm { names, table })
    }

    pub fn states(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn action(&self, q: StateId, read: Ab) -> &RightAction {
        &self.table[q][read as usize]
    }

    /// One step of the circular-tape semantics on a copy.
    pub fn step(&self, cfg: &CircularConfig) -> Option<CircularConfig> {
        let mut c = cfg.clone();
        self.step_in_place(&mut c).then_some(c)
    }

    pub fn step_in_place(&self, cfg: &mut CircularConfig) -> bool {
        let Some(&read) = cfg.tape.front() else {
            return false;
        };
        match self.action(cfg.state, read) {
            RightAction::Halt => false,
            RightAction::Write { symbols, next } => {
                cfg.tape.pop_front();
                cfg.tape.extend(symbols.iter().copied());
                cfg.state = *next;
                true
            }
        }
    }
}

/// Circular tape listed from the head cell onward.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircularConfig {
    pub state: StateId,
    pub tape: VecDeque<Ab>,
}

impl CircularConfig {
    pub fn new(state: StateId, tape: &[Ab]) -> Self {
        CircularConfig { state, tape: tape.iter().copied().collect() }
    }

    pub fn tape_vec(&self) -> Vec<Ab> {
        self.tape.iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writing_two_symbols_grows_the_tape() {
        let tm = RightTm::new(
            vec!["q".into()],
            vec![[
                RightAction::Write { symbols: vec![Ab::B, Ab::B], next: 0 },
                RightAction::Write { symbols: vec![Ab::A], next: 0 },
            ]],
        )
        .unwrap();
        let c = CircularConfig::new(0, &Ab::parse_word("ABA").unwrap());
        let n = tm.step(&c).unwrap();
        assert_eq!(Ab::word_string(&n.tape_vec()), "BABB");
        let n = tm.step(&n).unwrap();
        assert_eq!(Ab::word_string(&n.tape_vec()), "ABBA");
    }
}
