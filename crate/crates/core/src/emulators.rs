//! Four small Turing machines that emulate Rule 110, and a harness that
//! checks their sweeps against the ether.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::machines::{Action, Move, StateId, TmConfiguration, TuringMachine};
use crate::r110::{BitRow, Engine, Rule110State, ETHER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Tm2x5,
    Tm3x4,
    Tm4x3,
    Tm7x2,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Tm2x5, Builtin::Tm3x4, Builtin::Tm4x3, Builtin::Tm7x2];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Tm2x5 => "tm2x5",
            Builtin::Tm3x4 => "tm3x4",
            Builtin::Tm4x3 => "tm4x3",
            Builtin::Tm7x2 => "tm7x2",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown machine {s:?}; expected tm2x5, tm3x4, tm4x3 or tm7x2")))
    }
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Builds a machine from rows of `(write, next, move)` triples, `None` for X.
fn table(
    states: &[&str],
    symbols: &[&str],
    rows: &[&[Option<(&str, &str, Move)>]],
) -> Result<TuringMachine> {
    let mut tm = TuringMachine::new(strs(states), strs(symbols), vec![Action::Halt; states.len() * symbols.len()])?;
    for (q, row) in rows.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if let Some((w, n, d)) = cell {
                let symbol = tm.symbol_index(w).ok_or_else(|| Error::UnknownSymbol(w.to_string()))?;
                let next = tm.state_index(n).ok_or_else(|| Error::invalid(format!("unknown state {n}")))?;
                tm.set_action(q, j, Action::Write { symbol, dir: *d, next });
            }
        }
    }
    Ok(tm)
}

fn config(tm: &TuringMachine, state: &str, left: &[&str], head: &str, right: &[&str]) -> Result<TmConfiguration> {
    let ids = |w: &[&str]| -> Result<Vec<usize>> {
        w.iter()
            .map(|s| tm.symbol_index(s).ok_or_else(|| Error::UnknownSymbol(s.to_string())))
            .collect()
    };
    let h = tm.symbol_index(head).ok_or_else(|| Error::UnknownSymbol(head.to_string()))?;
    let q = tm.state_index(state).ok_or_else(|| Error::invalid(format!("unknown state {state}")))?;
    TmConfiguration::new(q, ids(left)?, Vec::new(), h, Vec::new(), ids(right)?)
}

/// The lookup table and starting tape of a built-in machine. Transitions
/// marked X in the figures are never used and are stored as halts.
pub fn builtin_machine(which: Builtin) -> (TuringMachine, TmConfiguration) {
    build(which).expect("built-in tables are well formed")
}

fn build(which: Builtin) -> Result<(TuringMachine, TmConfiguration)> {
    use Move::{Left as L, Right as R};
    Ok(match which {
        Builtin::Tm2x5 => {
            let tm = table(
                &["S0", "S1"],
                &["0", "1", "0²", "1²", "≠"],
                &[
                    &[Some(("0²", "S0", L)), Some(("≠", "S1", L)), Some(("0", "S0", R)), Some(("1", "S1", R)), Some(("1", "S0", R))],
                    &[Some(("≠", "S0", L)), Some(("1²", "S1", L)), None, Some(("0", "S1", R)), Some(("1", "S0", R))],
                ],
            )?;
            let cfg = config(&tm, "S0", &["0²", "0", "1", "0"], "0²", &["≠", "1", "≠", "1", "0²", "0²"])?;
            (tm, cfg)
        }
        Builtin::Tm3x4 => {
            let tm = table(
                &["Sx0", "S01", "S11"],
                &["0R", "1R", "0L", "1L"],
                &[
                    &[Some(("0L", "Sx0", R)), Some(("1L", "S01", R)), Some(("0R", "Sx0", L)), Some(("1R", "Sx0", L))],
                    &[Some(("1L", "Sx0", R)), Some(("1L", "S11", R)), None, None],
                    &[Some(("1L", "Sx0", R)), Some(("0L", "S11", R)), None, None],
                ],
            )?;
            let cfg = config(&tm, "Sx0", &["0L", "1L", "0R"], "0L", &["0L", "1L", "1R", "0R", "0L"])?;
            (tm, cfg)
        }
        Builtin::Tm4x3 => {
            let tm = table(
                &["Sx0", "S01", "S11", "SB"],
                &["0", "1", "B"],
                &[
                    &[Some(("0", "Sx0", R)), Some(("1", "S01", R)), Some(("0", "SB", L))],
                    &[Some(("1", "Sx0", R)), Some(("1", "S11", R)), None],
                    &[Some(("1", "Sx0", R)), Some(("0", "S11", R)), None],
                    &[Some(("0", "SB", L)), Some(("1", "SB", L)), Some(("0", "Sx0", R))],
                ],
            )?;
            let cfg = config(&tm, "Sx0", &["B", "0", "1"], "B", &["B", "1", "1", "1", "1", "1", "0", "B"])?;
            (tm, cfg)
        }
        Builtin::Tm7x2 => {
            let tm = table(
                &["Sx0", "S01", "S11", "SL", "Tx0", "T01", "T11"],
                &["0", "1"],
                &[
                    &[Some(("0", "Tx0", R)), Some(("1", "T01", R))],
                    &[Some(("1", "Tx0", R)), Some(("1", "T11", R))],
                    &[Some(("1", "Tx0", R)), Some(("0", "T11", R))],
                    &[Some(("0", "Tx0", L)), Some(("1", "Tx0", L))],
                    &[Some(("1", "Sx0", R)), Some(("0", "SL", L))],
                    &[Some(("1", "S01", R)), None],
                    &[Some(("1", "S11", R)), None],
                ],
            )?;
            let tape = |s: &str| s.chars().map(|c| if c == '1' { 1 } else { 0 }).collect::<Vec<_>>();
            let q = tm.state_index("S11").expect("state exists");
            let cfg = TmConfiguration::new(q, tape("110011"), Vec::new(), 0, Vec::new(), tape("1011010010"))?;
            (tm, cfg)
        }
    })
}

/// How the cells written during a rightward sweep map onto a Rule 110 row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decoder {
    /// Tape cells per Rule 110 cell.
    pub stride: i64,
    /// Rule 110 cells the row moves right per sweep.
    pub shift: i64,
    /// Offset of the ether at row 0.
    pub phase: i64,
    /// Writes at the end of each sweep that are not row cells.
    pub trailing: usize,
}

impl Decoder {
    pub fn for_machine(which: Builtin) -> Decoder {
        match which {
            Builtin::Tm2x5 => Decoder { stride: 1, shift: 0, phase: 4, trailing: 0 },
            Builtin::Tm3x4 => Decoder { stride: 1, shift: 1, phase: 4, trailing: 6 },
            Builtin::Tm4x3 => Decoder { stride: 1, shift: 1, phase: 2, trailing: 0 },
            Builtin::Tm7x2 => Decoder { stride: 2, shift: 1, phase: 2, trailing: 0 },
        }
    }
}

/// Bit written by a transition, or `None` if the write carries no row cell.
fn written_bit(which: Builtin, tm: &TuringMachine, state: StateId, symbol: usize) -> Option<bool> {
    let name = tm.symbol_name(symbol);
    match which {
        Builtin::Tm2x5 => match name {
            "0" | "0²" => Some(false),
            "1" | "1²" => Some(true),
            _ => None,
        },
        Builtin::Tm3x4 => Some(name.starts_with('1')),
        Builtin::Tm4x3 => match name {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        },
        // cells written from the S states hold the row
        Builtin::Tm7x2 => tm.state_name(state).starts_with('S').then_some(name == "1"),
    }
}

/// One write of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepWrite {
    pub state: StateId,
    pub written: usize,
    pub pos: i64,
}

/// Runs the machine and groups its steps into maximal same-direction sweeps.
/// Returns the rightward ones in order, at most `count` of them.
pub fn right_sweeps(tm: &TuringMachine, cfg: &TmConfiguration, count: usize, max_steps: u64) -> Result<Vec<Vec<SweepWrite>>> {
    let mut cur = cfg.clone();
    let mut pos = 0i64;
    let mut out = Vec::new();
    let mut run: Vec<SweepWrite> = Vec::new();
    let mut dir: Option<Move> = None;
    for _ in 0..max_steps {
        let q = cur.state();
        let Action::Write { symbol, dir: d, .. } = tm.action(q, cur.head()) else {
            return Err(Error::invalid("machine halted while emulating the ether"));
        };
        if dir != Some(d) {
            if dir == Some(Move::Right) {
                out.push(std::mem::take(&mut run));
                if out.len() == count {
                    return Ok(out);
                }
            }
            run.clear();
            dir = Some(d);
        }
        run.push(SweepWrite { state: q, written: symbol, pos });
        tm.step_in_place(&mut cur)?;
        pos += if d == Move::Right { 1 } else { -1 };
    }
    Err(Error::Stuck(max_steps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtherReport {
    pub machine: Builtin,
    pub rows: usize,
    pub cells: usize,
    pub sweep_widths: Vec<usize>,
    /// `(row, cell, expected)` of the first disagreement.
    pub mismatch: Option<(usize, i64, bool)>,
}

impl EtherReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none() && self.cells > 0
    }
}

impl fmt::Display for EtherReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} rows, {} cells checked", self.machine, self.rows, self.cells)?;
        match self.mismatch {
            None => write!(f, ", all match the ether"),
            Some((r, x, b)) => write!(f, ", row {r} cell {x} should be {}", b as u8),
        }
    }
}

/// Decodes `rows` rightward sweeps and compares them with the ether evolved
/// by the Rule 110 engine.
pub fn verify_ether(which: Builtin, rows: usize) -> Result<EtherReport> {
    let (tm, cfg) = builtin_machine(which);
    verify_ether_with(which, &tm, &cfg, rows)
}

/// As [`verify_ether`] with a caller-supplied (possibly altered) table.
pub fn verify_ether_with(which: Builtin, tm: &TuringMachine, cfg: &TmConfiguration, rows: usize) -> Result<EtherReport> {
    if rows == 0 {
        return Err(Error::invalid("at least one row is needed"));
    }
    let dec = Decoder::for_machine(which);
    let budget = 400 * (rows as u64 + 4).pow(2);
    let sweeps = right_sweeps(tm, cfg, rows + 1, budget)?;
    let ether = BitRow::parse(ETHER).expect("constant");
    let mut r110 = Rule110State::periodic(ether).expect("non-empty").translated(dec.phase);
    let mut engine = Engine::new();
    let mut report = EtherReport {
        machine: which,
        rows: 0,
        cells: 0,
        sweep_widths: sweeps.iter().map(|s| s.len()).collect(),
        mismatch: None,
    };
    for (k, sweep) in sweeps.iter().enumerate() {
        if k > 0 {
            engine.step(&mut r110);
        }
        if k == 0 {
            // the first sweep only sets up the tape
            continue;
        }
        let keep = sweep.len().saturating_sub(dec.trailing);
        for w in &sweep[..keep] {
            let Some(bit) = written_bit(which, tm, w.state, w.written) else {
                continue;
            };
            let x = w.pos.div_euclid(dec.stride) - dec.shift * k as i64;
            report.cells += 1;
            let want = r110.cell(x);
            if bit != want {
                report.mismatch = Some((k, x, want));
                return Ok(report);
            }
        }
        report.rows = k;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tm2x5_has_one_unused_transition() {
        let (tm, _) = builtin_machine(Builtin::Tm2x5);
        assert_eq!((tm.states(), tm.symbols()), (2, 5));
        let halts = (0..2).flat_map(|q| (0..5).map(move |s| (q, s))).filter(|&(q, s)| tm.action(q, s) == Action::Halt).count();
        assert_eq!(halts, 1);
    }

    #[test]
    fn names_parse() {
        for b in Builtin::ALL {
            assert_eq!(b.name().parse::<Builtin>().unwrap(), b);
        }
        assert!("tm9x9".parse::<Builtin>().is_err());
    }
}
