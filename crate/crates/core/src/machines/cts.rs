use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// A cyclic tag system over {Y, N}; `true` is Y.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicTagSystem {
    appendants: Vec<Vec<bool>>,
}

impl CyclicTagSystem {
    pub fn new(appendants: Vec<Vec<bool>>) -> Result<Self> {
        if appendants.is_empty() {
            return Err(Error::invalid("a cyclic tag system needs at least one appendant"));
        }
        Ok(CyclicTagSystem { appendants })
    }

    /// Parses appendants written as Y/N strings, `-` or empty for ∅.
    pub fn from_strs(words: &[&str]) -> Result<Self> {
        let apps = words.iter().map(|w| parse_yn(w)).collect::<Result<Vec<_>>>()?;
        Self::new(apps)
    }

    pub fn appendants(&self) -> &[Vec<bool>] {
        &self.appendants
    }

    pub fn len(&self) -> usize {
        self.appendants.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn appendants_mut(&mut self) -> &mut Vec<Vec<bool>> {
        &mut self.appendants
    }

    pub fn step(&self, state: &CtsState) -> CtsStep {
        let mut s = state.clone();
        if self.step_in_place(&mut s) {
            CtsStep::Next(s)
        } else {
            CtsStep::Halted
        }
    }

    /// Returns `false` on an empty tape.
    pub fn step_in_place(&self, state: &mut CtsState) -> bool {
        let Some(bit) = state.tape.pop_front() else {
            return false;
        };
        if bit {
            state.tape.extend(self.appendants[state.marker].iter().copied());
        }
        state.marker = (state.marker + 1) % self.appendants.len();
        true
    }

    pub fn run(&self, state: &mut CtsState, max: u64) -> (u64, bool) {
        for k in 0..max {
            if !self.step_in_place(state) {
                return (k, true);
            }
        }
        (max, false)
    }
}

impl fmt::Display for CyclicTagSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.appendants.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if a.is_empty() {
                f.write_str("∅")?;
            } else {
                f.write_str(&yn_string(a))?;
            }
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtsStep {
    Next(CtsState),
    Halted,
}

/// Tape plus the index of the next appendant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CtsState {
    pub tape: VecDeque<bool>,
    pub marker: usize,
}

impl CtsState {
    pub fn new(tape: impl IntoIterator<Item = bool>, marker: usize) -> Self {
        CtsState { tape: tape.into_iter().collect(), marker }
    }

    pub fn from_str(tape: &str) -> Result<Self> {
        Ok(CtsState::new(parse_yn(tape)?, 0))
    }

    pub fn tape_string(&self) -> String {
        self.tape.iter().map(|&b| if b { 'Y' } else { 'N' }).collect()
    }
}

pub fn parse_yn(w: &str) -> Result<Vec<bool>> {
    let w = w.trim();
    if w == "-" || w == "∅" {
        return Ok(Vec::new());
    }
    w.chars()
        .map(|c| match c {
            'Y' => Ok(true),
            'N' => Ok(false),
            _ => Err(Error::invalid(format!("unexpected character {c:?} in Y/N word"))),
        })
        .collect()
}

pub fn yn_string(w: &[bool]) -> String {
    w.iter().map(|&b| if b { 'Y' } else { 'N' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_y_appends_first_appendant() {
        let sys = CyclicTagSystem::from_strs(&["YYYYYY", "-", "NNNNNN", "-"]).unwrap();
        let s = CtsState::from_str("Y").unwrap();
        match sys.step(&s) {
            CtsStep::Next(n) => {
                assert_eq!(n.tape_string(), "YYYYYY");
                assert_eq!(n.marker, 1);
            }
            CtsStep::Halted => panic!("halted"),
        }
    }

    #[test]
    fn empty_tape_halts() {
        let sys = CyclicTagSystem::from_strs(&["Y"]).unwrap();
        assert_eq!(sys.step(&CtsState::default()), CtsStep::Halted);
    }

    #[test]
    fn display_uses_empty_set() {
        let sys = CyclicTagSystem::from_strs(&["YN", "-"]).unwrap();
        assert_eq!(sys.to_string(), "{YN,∅}");
    }
}
