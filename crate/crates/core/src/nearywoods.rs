//! A deletion-2 tag system that simulates a binary right-moving machine on a
//! circular tape in polynomial time.
//!
//! Every symbol carries the stage of the simulation and the machine state.
//! Six stages each make one pass over the tape. Stages 1 to 4 repeat, each
//! round halving both the counter and the set of candidate head cells, until
//! only the cell after the head marker is left; stage 5 turns it into P or Q
//! and stage 6 performs the machine step.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::machines::{Ab, CircularConfig, RightAction, RightTm, RunWord, StateId, SymbolId, TagSystem};

/// The letters in id order.
pub const LETTERS: [char; 20] = [
    'H', 'h', 'P', 'Q', 'U', 'u', 'X', 'x', 'V', 'v', 'Y', 'y', 'A', 'a', 'B', 'b', 'C', 'c', 'D', 'd',
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NwSymbol {
    /// `-`, never read.
    Dash,
    /// `0`, read but appends nothing.
    Zero,
    Letter { letter: char, stage: u8, state: StateId },
}

impl NwSymbol {
    pub fn letter(letter: char, stage: u8, state: StateId) -> NwSymbol {
        NwSymbol::Letter { letter, stage, state }
    }

    pub fn stage(self) -> Option<u8> {
        match self {
            NwSymbol::Letter { stage, .. } => Some(stage),
            _ => None,
        }
    }

    pub fn char(self) -> char {
        match self {
            NwSymbol::Dash => '-',
            NwSymbol::Zero => '0',
            NwSymbol::Letter { letter, .. } => letter,
        }
    }

    /// Dense id for `k` machine states.
    pub fn id(self, k: usize) -> SymbolId {
        match self {
            NwSymbol::Dash => 120 * k,
            NwSymbol::Zero => 120 * k + 1,
            NwSymbol::Letter { letter, stage, state } => {
                let li = LETTERS.iter().position(|&c| c == letter).expect("known letter");
                (li * 6 + stage as usize - 1) * k + state
            }
        }
    }

    pub fn from_id(id: SymbolId, k: usize) -> Option<NwSymbol> {
        match id.checked_sub(120 * k) {
            Some(0) => Some(NwSymbol::Dash),
            Some(1) => Some(NwSymbol::Zero),
            Some(_) => None,
            None => {
                let (ls, state) = (id / k, id % k);
                Some(NwSymbol::letter(LETTERS[ls / 6], (ls % 6 + 1) as u8, state))
            }
        }
    }

    fn name(self) -> String {
        match self {
            NwSymbol::Letter { letter, stage, state } => format!("{letter}_{stage}_{state}"),
            s => s.char().to_string(),
        }
    }
}

impl fmt::Display for NwSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.char())
    }
}

/// Letters of a word separated by spaces, subscripts dropped.
pub fn print_word(w: &[NwSymbol]) -> String {
    w.iter().map(|s| s.char().to_string()).collect::<Vec<_>>().join(" ")
}

fn ab(c: Ab) -> (char, char) {
    match c {
        Ab::A => ('A', 'a'),
        Ab::B => ('B', 'b'),
    }
}

/// The appendant of `sym`, or `None` when the symbol is never read.
pub fn production(tm: &RightTm, sym: NwSymbol) -> Option<Vec<NwSymbol>> {
    let NwSymbol::Letter { letter, stage, state: q } = sym else {
        return match sym {
            NwSymbol::Zero => Some(Vec::new()),
            _ => None,
        };
    };
    let to = |s: u8, word: &str| -> Vec<NwSymbol> {
        word.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '-' { NwSymbol::Dash } else if c == '0' { NwSymbol::Zero } else { NwSymbol::letter(c, s, q) })
            .collect()
    };
    let w = match (stage, letter) {
        (1, 'H') => to(2, "H h"),
        (1, 'A') => to(2, "A A"),
        (1, 'a') => to(2, "C C"),
        (1, 'B') => to(2, "B B"),
        (1, 'b') => to(2, "D D"),
        (1, 'C') => to(2, "C C"),
        (1, 'D') => to(2, "D D"),
        (1, 'U') => to(2, "U u"),
        (1, 'V') => to(2, "V V"),
        (1, 'X') => to(2, "X x"),
        (1, 'Y') => to(2, "Y Y"),

        (2, 'H') => to(3, "H -"),
        (2, 'h') => to(3, "- H -"),
        (2, c @ ('A' | 'B' | 'C' | 'D')) => to(3, &format!("{c} {c}")),
        (2, 'U') => to(3, "U"),
        (2, 'u') => to(3, "V"),
        (2, 'X') => to(3, "X X"),
        (2, 'x') => to(3, "Y Y"),
        (2, 'V') => to(3, "V"),
        (2, 'Y') => to(3, "Y Y"),

        (3, 'H') => to(4, "H h"),
        (3, c @ ('A' | 'B' | 'C' | 'D' | 'X' | 'Y')) => to(4, &format!("{c} {}", c.to_ascii_lowercase())),
        (3, 'U') => to(4, "U u X x"),
        (3, 'V') => to(4, "V v Y y"),

        (4, 'H') => to(1, "H -"),
        (4, 'A') => to(1, "A a 0"),
        (4, 'B') => to(1, "B b 0"),
        (4, c @ ('C' | 'D' | 'U' | 'V' | 'X' | 'Y')) => to(1, &format!("{c} {c}")),
        (4, 'h' | 'u' | 'v') => Vec::new(),
        (4, 'a') => to(5, "- P -"),
        (4, 'b') => to(5, "- Q -"),
        (4, 'c') => to(5, "A -"),
        (4, 'd') => to(5, "B -"),
        (4, 'x') => vec![NwSymbol::letter('U', 5, q), sym],
        (4, 'y') => vec![NwSymbol::letter('V', 5, q), sym],

        (5, 'P') => to(6, "P -"),
        (5, 'Q') => to(6, "Q"),
        (5, c @ ('A' | 'B' | 'U' | 'V')) => to(6, &format!("{c} {}", c.to_ascii_lowercase())),

        (6, c @ ('P' | 'A' | 'B' | 'U' | 'V' | 'Q' | 'a' | 'b' | 'u' | 'v')) => {
            let read = if "PABUV".contains(c) { Ab::A } else { Ab::B };
            let RightAction::Write { symbols, next } = tm.action(q, read) else {
                return Some(Vec::new());
            };
            let n = *next;
            let new = |c: char| NwSymbol::letter(c, 3, n);
            match c {
                'P' | 'Q' => {
                    let mut out: Vec<NwSymbol> = symbols
                        .iter()
                        .flat_map(|&s| {
                            let (u, l) = ab(s);
                            [NwSymbol::letter(u, 6, q), NwSymbol::letter(l, 6, q)]
                        })
                        .collect();
                    if c == 'Q' {
                        out.push(NwSymbol::Dash);
                    }
                    out.extend([new('H'), NwSymbol::Dash]);
                    out
                }
                'A' | 'a' => vec![new('A'), new('A')],
                'B' | 'b' => vec![new('B'), new('B')],
                'U' | 'u' if symbols.len() == 2 => vec![new('U'), new('U')],
                _ => vec![new('U')],
            }
        }
        _ => return None,
    };
    Some(w)
}

/// The full tag system, deletion number 2, over `120k + 2` symbols.
pub fn build_nw_system(tm: &RightTm) -> Result<TagSystem> {
    let k = tm.states();
    let total = 120 * k + 2;
    let mut names = Vec::with_capacity(total);
    let mut rules = Vec::with_capacity(total);
    for id in 0..total {
        let sym = NwSymbol::from_id(id, k).expect("dense ids");
        names.push(sym.name());
        let w = production(tm, sym).unwrap_or_default();
        rules.push(RunWord::from_symbols(&w.iter().map(|s| s.id(k)).collect::<Vec<_>>()));
    }
    TagSystem::new(2, names, rules)
}

/// `c` in tag steps per machine step `<= c n log2 n`, fitted once on tapes
/// of 4 to 256 cells.
pub const COST_CONSTANT: f64 = 21.0;

/// Smallest power of two at least `n`.
pub fn counter_size(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Stage-2 encoding with the counter placed right after the head cell.
pub fn encode_nw_tape(tape: &[Ab], state: StateId) -> Result<Vec<NwSymbol>> {
    encode_nw_tape_at(tape, state, 1)
}

/// Stage-2 encoding with the counter placed before cell `counter_at`.
pub fn encode_nw_tape_at(tape: &[Ab], state: StateId, counter_at: usize) -> Result<Vec<NwSymbol>> {
    if tape.is_empty() {
        return Err(Error::invalid("the tape needs at least one cell"));
    }
    if counter_at > tape.len() {
        return Err(Error::invalid("counter position is past the end of the tape"));
    }
    let l = |c| NwSymbol::letter(c, 2, state);
    let mut out = vec![l('H'), l('h')];
    for (i, &c) in tape.iter().enumerate() {
        if i == counter_at {
            push_counter(&mut out, counter_size(tape.len()), state);
        }
        let (u, _) = ab(c);
        out.extend([l(u), l(u)]);
    }
    if counter_at == tape.len() {
        push_counter(&mut out, counter_size(tape.len()), state);
    }
    Ok(out)
}

fn push_counter(out: &mut Vec<NwSymbol>, n: usize, state: StateId) {
    for _ in 0..n {
        out.extend([NwSymbol::letter('U', 2, state), NwSymbol::letter('u', 2, state)]);
    }
}

/// Reads the machine configuration and counter size off a stage-2 or
/// stage-3 snapshot.
pub fn decode_nw_tape(w: &[NwSymbol]) -> Result<(CircularConfig, usize)> {
    let mut state = None;
    let mut cells = Vec::new();
    let mut counter = 0;
    for s in w {
        let NwSymbol::Letter { letter, stage, state: q } = *s else { continue };
        if stage != 2 && stage != 3 {
            return Err(Error::NotCanonical(format!("stage {stage} symbol in a stage 2/3 tape")));
        }
        match letter {
            'H' => state = Some(q),
            'A' => cells.push(Ab::A),
            'B' => cells.push(Ab::B),
            'U' => counter += 1,
            'h' | 'u' => {}
            c => return Err(Error::NotCanonical(format!("unexpected {c} at a step boundary"))),
        }
    }
    let state = state.ok_or_else(|| Error::NotCanonical("no head marker".into()))?;
    if cells.len() % 2 != 0 {
        return Err(Error::NotCanonical("tape cells are not doubled".into()));
    }
    let tape: Vec<Ab> = cells.chunks(2).map(|p| p[0]).collect();
    Ok((CircularConfig::new(state, &tape), counter))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageLabel {
    pub stage: u8,
    /// Stage 4 reading the counter a second time after the head jumped it.
    pub second_pass: bool,
}

impl fmt::Display for StageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.second_pass {
            write!(f, "{}.5", self.stage)
        } else {
            write!(f, "{}", self.stage)
        }
    }
}

/// The tape as a pass begins. A symbol deleted unread just before is kept
/// when it came from the same appendant as the first symbol read and is not
/// itself input to the pass that just ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub label: StageLabel,
    pub tag_step: u64,
    pub tape: Vec<NwSymbol>,
}

impl Snapshot {
    pub fn line(&self) -> String {
        print_word(&self.tape)
    }
}

/// One simulated machine step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NwStep {
    pub config: CircularConfig,
    pub counter: usize,
    /// Tag steps since the previous machine step.
    pub tag_steps: u64,
    /// Four-stage rounds run to isolate the head cell.
    pub cycles: u32,
}

#[derive(Debug, Clone, Default)]
pub struct NwTrace {
    pub snapshots: Vec<Snapshot>,
    pub steps: Vec<NwStep>,
    pub tag_steps: u64,
    pub halted: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct NwOptions {
    pub keep_snapshots: bool,
    pub max_tag_steps: u64,
}

impl Default for NwOptions {
    fn default() -> Self {
        NwOptions { keep_snapshots: true, max_tag_steps: 50_000_000 }
    }
}

fn parity_error(step: u64, msg: impl fmt::Display) -> Error {
    Error::Construction(format!("parity violation at tag step {step}: {msg}"))
}

/// Runs the tag system from the stage-2 encoding for `tm_steps` machine steps.
pub fn nw_trace(tm: &RightTm, tape: &[Ab], state: StateId, tm_steps: usize) -> Result<NwTrace> {
    nw_trace_with(tm, encode_nw_tape(tape, state)?, tm_steps, NwOptions::default())
}

/// As [`nw_trace`] from an explicit stage-2 tape.
pub fn nw_trace_with(tm: &RightTm, start: Vec<NwSymbol>, tm_steps: usize, opts: NwOptions) -> Result<NwTrace> {
    let mut trace = NwTrace::default();
    // (symbol, id of the appendant that wrote it)
    let mut queue: VecDeque<(NwSymbol, u64)> = start.iter().map(|&s| (s, 0)).collect();
    let mut dropped: Option<(NwSymbol, u64)> = None;
    let mut pass: Option<(StageLabel, NwSymbol)> = None;
    // appendant ids written from this point on belong to the next pass
    let mut pass_start_id = 0u64;
    let mut last_boundary = 0u64;
    let mut cycles = 0u32;
    let mut step = 0u64;
    while trace.steps.len() < tm_steps {
        if step >= opts.max_tag_steps {
            return Err(Error::Stuck(opts.max_tag_steps));
        }
        let Some(&(front, born)) = queue.front() else {
            return Err(Error::Construction("tag tape emptied".into()));
        };
        if front == NwSymbol::Dash {
            return Err(parity_error(step, "read a '-'"));
        }
        if let Some(stage) = front.stage() {
            let cur = pass.map(|(l, _)| l);
            let label = match cur {
                Some(l) if l.stage == stage => {
                    (stage == 4 && !l.second_pass && born > pass_start_id).then_some(StageLabel { stage: 4, second_pass: true })
                }
                _ => Some(StageLabel { stage, second_pass: false }),
            };
            if let Some(label) = label {
                check_transition(cur, pass.map(|p| p.1), label, front, step)?;
                if opts.keep_snapshots {
                    let mut tape: Vec<NwSymbol> = Vec::with_capacity(queue.len() + 1);
                    if let Some((d, b)) = dropped {
                        if b == born && (d.stage().is_none() || d.stage() != cur.map(|l| l.stage)) {
                            tape.push(d);
                        }
                    }
                    tape.extend(queue.iter().map(|p| p.0));
                    trace.snapshots.push(Snapshot { label, tag_step: step, tape });
                }
                if label.stage == 1 {
                    cycles += 1;
                }
                if label.stage == 6 {
                    if let NwSymbol::Letter { letter, state, .. } = front {
                        let read = if letter == 'P' { Ab::A } else { Ab::B };
                        if *tm.action(state, read) == RightAction::Halt {
                            trace.halted = true;
                            break;
                        }
                    }
                }
                if label.stage == 3 && cur.is_some_and(|c| c.stage == 6) {
                    let tape: Vec<NwSymbol> = queue.iter().map(|p| p.0).collect();
                    let (config, counter) = decode_nw_tape(&tape)?;
                    trace.steps.push(NwStep { config, counter, tag_steps: step - last_boundary, cycles });
                    last_boundary = step;
                    cycles = 0;
                }
                if !label.second_pass {
                    pass_start_id = step;
                }
                pass = Some((label, front));
            } else if let Some((l, first)) = pass {
                check_read(l, first, front, step)?;
            }
        }
        let out = production(tm, front).ok_or_else(|| parity_error(step, format!("{} is never read", front.name())))?;
        queue.pop_front();
        dropped = queue.pop_front();
        step += 1;
        queue.extend(out.into_iter().map(|s| (s, step)));
        if queue.len() < 2 {
            trace.halted = true;
            break;
        }
    }
    trace.tag_steps = step;
    Ok(trace)
}

fn small(c: char) -> bool {
    c.is_ascii_lowercase()
}

fn check_transition(
    cur: Option<StageLabel>,
    first: Option<NwSymbol>,
    next: StageLabel,
    front: NwSymbol,
    step: u64,
) -> Result<()> {
    let c = front.char();
    let ok_first = match next.stage {
        1 | 3 => c == 'H',
        2 => c == 'H' || c == 'h',
        4 if next.second_pass => c == 'x' || c == 'y',
        4 => c == 'H' || c == 'h',
        5 | 6 => c == 'P' || c == 'Q',
        _ => false,
    };
    if !ok_first {
        return Err(parity_error(step, format!("stage {next} began by reading {c}")));
    }
    let Some(cur) = cur else { return Ok(()) };
    let expected: &[u8] = match cur.stage {
        1 => &[2],
        2 => &[3],
        3 => &[4],
        4 if first.is_some_and(|f| small(f.char())) => &[5],
        4 => &[1],
        5 => &[6],
        _ => &[3],
    };
    if !(next.second_pass || expected.contains(&next.stage)) {
        return Err(parity_error(step, format!("stage {} followed by stage {}", cur, next)));
    }
    if next.second_pass && !first.is_some_and(|f| small(f.char())) {
        return Err(parity_error(step, "counter read twice while not isolating"));
    }
    Ok(())
}

fn check_read(pass: StageLabel, first: NwSymbol, front: NwSymbol, step: u64) -> Result<()> {
    let (f, c) = (first.char(), front.char());
    let bad = match pass.stage {
        2 => (f == 'H' && (c == 'u' || c == 'x')) || (f == 'h' && (c == 'U' || c == 'X')),
        4 if pass.second_pass => !(c == 'x' || c == 'y'),
        4 => small(f) != small(c),
        6 => c != f && (f == 'Q') != small(c),
        _ => false,
    };
    if bad {
        return Err(parity_error(step, format!("read {c} in stage {pass} that began with {f}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flipper() -> RightTm {
        RightTm::new(
            vec!["q".into()],
            vec![[
                RightAction::Write { symbols: vec![Ab::B, Ab::B], next: 0 },
                RightAction::Write { symbols: vec![Ab::A], next: 0 },
            ]],
        )
        .unwrap()
    }

    #[test]
    fn ids_are_dense_and_invertible() {
        for k in 1..4 {
            for id in 0..120 * k + 2 {
                assert_eq!(NwSymbol::from_id(id, k).unwrap().id(k), id);
            }
            assert!(NwSymbol::from_id(120 * k + 2, k).is_none());
        }
    }

    #[test]
    fn encoding_places_the_counter_after_the_head_cell() {
        let w = encode_nw_tape(&Ab::parse_word("ABA").unwrap(), 0).unwrap();
        assert_eq!(print_word(&w), "H h A A U u U u U u U u B B A A");
        let (c, n) = decode_nw_tape(&w).unwrap();
        assert_eq!((Ab::word_string(&c.tape_vec()), n), ("ABA".into(), 4));
    }

    #[test]
    fn system_has_deletion_two() {
        let sys = build_nw_system(&flipper()).unwrap();
        assert_eq!(sys.deletion(), 2);
        assert_eq!(sys.alphabet_size(), 122);
    }
}
