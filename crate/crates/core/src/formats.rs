//! Line-oriented text formats. Every file starts with a `forge-<kind> <version>`
//! header; `#` starts a comment; blank lines are ignored.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::r110::{BitRow, Rule110State};
use crate::machines::{
    parse_yn, Ab, Action, CtsState, CyclicTagSystem, Move, RightAction, RightTm,
    RunWord, SymbolId, TagSystem, TagTape, TmConfiguration, TuringMachine,
};

pub const VERSION: u32 = 1;

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, kind: &str) -> Result<Self> {
        let mut items: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        if items.is_empty() {
            return Err(Error::parse(1, format!("missing header `forge-{kind} {VERSION}`")));
        }
        let (n, header) = items.remove(0);
        let mut parts = header.split_whitespace();
        let want = format!("forge-{kind}");
        if parts.next() != Some(want.as_str()) {
            return Err(Error::parse(n, format!("expected header `{want} {VERSION}`")));
        }
        match parts.next().map(str::parse::<u32>) {
            Some(Ok(v)) if v == VERSION => {}
            _ => return Err(Error::parse(n, format!("unsupported {want} version"))),
        }
        Ok(Lines { items })
    }

    fn key(&self, key: &str) -> Option<(usize, &'a str)> {
        self.items.iter().find_map(|&(n, l)| {
            let (k, v) = l.split_once(':')?;
            (k.trim() == key).then(|| (n, v.trim()))
        })
    }

    fn need(&self, key: &str) -> Result<(usize, &'a str)> {
        self.key(key).ok_or_else(|| Error::parse(0, format!("missing `{key}:` line")))
    }
}

fn words(v: &str) -> Vec<&str> {
    v.split_whitespace().collect()
}

/// Parses `name` or `name^count`.
fn token(tok: &str) -> Result<(&str, BigUint)> {
    match tok.split_once('^') {
        Some((name, n)) => {
            let c = n
                .parse::<BigUint>()
                .map_err(|_| Error::invalid(format!("bad repeat count in {tok:?}")))?;
            Ok((name, c))
        }
        None => Ok((tok, BigUint::one())),
    }
}

// ---------------------------------------------------------------- TM

/// ```text
/// forge-tm 1
/// states: q0 q1
/// symbols: 0 1
/// q0 0 -> 1 R q1
/// q0 1 -> halt
/// ```
/// Missing transitions halt.
pub fn parse_tm(text: &str) -> Result<TuringMachine> {
    let lines = Lines::new(text, "tm")?;
    let states: Vec<String> = words(lines.need("states")?.1).into_iter().map(String::from).collect();
    let symbols: Vec<String> =
        words(lines.need("symbols")?.1).into_iter().map(String::from).collect();
    let t = symbols.len();
    let mut table = vec![Action::Halt; states.len() * t];
    let idx = |names: &[String], n: usize, s: &str| {
        names.iter().position(|x| x == s).ok_or_else(|| Error::parse(n, format!("unknown name {s:?}")))
    };
    for &(n, l) in &lines.items {
        let Some((lhs, rhs)) = l.split_once("->") else { continue };
        let lhs = words(lhs);
        let rhs = words(rhs);
        if lhs.len() != 2 {
            return Err(Error::parse(n, "expected `state symbol -> ...`"));
        }
        let q = idx(&states, n, lhs[0])?;
        let s = idx(&symbols, n, lhs[1])?;
        let a = match rhs.as_slice() {
            ["halt"] => Action::Halt,
            [w, d, nx] => {
                let dir = match *d {
                    "L" => Move::Left,
                    "R" => Move::Right,
                    _ => return Err(Error::parse(n, "move must be L or R")),
                };
                Action::Write { symbol: idx(&symbols, n, w)?, dir, next: idx(&states, n, nx)? }
            }
            _ => return Err(Error::parse(n, "expected `write move next` or `halt`")),
        };
        table[q * t + s] = a;
    }
    TuringMachine::new(states, symbols, table)
}

pub fn write_tm(tm: &TuringMachine) -> String {
    let mut out = format!("forge-tm {VERSION}\n");
    let _ = writeln!(out, "states: {}", tm.state_names().join(" "));
    let _ = writeln!(out, "symbols: {}", tm.symbol_names().join(" "));
    for q in 0..tm.states() {
        for s in 0..tm.symbols() {
            let lhs = format!("{} {}", tm.state_name(q), tm.symbol_name(s));
            match tm.action(q, s) {
                Action::Halt => {
                    let _ = writeln!(out, "{lhs} -> halt");
                }
                Action::Write { symbol, dir, next } => {
                    let _ = writeln!(
                        out,
                        "{lhs} -> {} {} {}",
                        tm.symbol_name(symbol),
                        dir.letter(),
                        tm.state_name(next)
                    );
                }
            }
        }
    }
    out
}

/// ```text
/// forge-config 1
/// state: q0
/// left-periodic: 0
/// left: 1 1
/// head: 0
/// right:
/// right-periodic: 0
/// ```
pub fn parse_config(text: &str, tm: &TuringMachine) -> Result<TmConfiguration> {
    let lines = Lines::new(text, "config")?;
    let sym = |key: &str| -> Result<Vec<SymbolId>> {
        match lines.key(key) {
            None => Ok(Vec::new()),
            Some((n, v)) => words(v)
                .into_iter()
                .map(|w| tm.symbol_index(w).ok_or_else(|| Error::parse(n, format!("unknown symbol {w:?}"))))
                .collect(),
        }
    };
    let (n, st) = lines.need("state")?;
    let state = tm.state_index(st).ok_or_else(|| Error::parse(n, format!("unknown state {st:?}")))?;
    let head = sym("head")?;
    if head.len() != 1 {
        return Err(Error::parse(lines.need("head")?.0, "head holds exactly one symbol"));
    }
    TmConfiguration::new(
        state,
        sym("left-periodic")?,
        sym("left")?,
        head[0],
        sym("right")?,
        sym("right-periodic")?,
    )
}

pub fn write_config(cfg: &TmConfiguration, tm: &TuringMachine) -> String {
    let names = |w: &[SymbolId]| w.iter().map(|&s| tm.symbol_name(s)).collect::<Vec<_>>().join(" ");
    format!(
        "forge-config {VERSION}\nstate: {}\nleft-periodic: {}\nleft: {}\nhead: {}\nright: {}\nright-periodic: {}\n",
        tm.state_name(cfg.state()),
        names(cfg.left_periodic()),
        names(cfg.left()),
        tm.symbol_name(cfg.head()),
        names(&cfg.right()),
        names(cfg.right_periodic()),
    )
}

// ---------------------------------------------------------------- tag

/// ```text
/// forge-tag 1
/// deletion: 2
/// A : C Y
/// C : A
/// Y : A^3
/// tape: C A
/// ```
/// Symbols are numbered in rule order; `name^n` repeats a symbol.
pub fn parse_tag(text: &str) -> Result<(TagSystem, Option<TagTape>)> {
    let lines = Lines::new(text, "tag")?;
    let (n, d) = lines.need("deletion")?;
    let deletion = d.parse::<usize>().map_err(|_| Error::parse(n, "bad deletion number"))?;
    let rule_lines: Vec<(usize, &str, &str)> = lines
        .items
        .iter()
        .filter_map(|&(n, l)| {
            let (k, v) = l.split_once(" :").or_else(|| l.split_once(':'))?;
            let k = k.trim();
            (k != "deletion" && k != "tape").then_some((n, k, v))
        })
        .collect();
    let names: Vec<String> = rule_lines.iter().map(|(_, k, _)| k.to_string()).collect();
    let word = |n: usize, v: &str| -> Result<RunWord> {
        let mut w = RunWord::new();
        for tok in words(v) {
            let (name, c) = token(tok).map_err(|e| Error::parse(n, e.to_string()))?;
            let s = names
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| Error::parse(n, format!("symbol {name:?} has no rule")))?;
            w.push(s, c);
        }
        Ok(w)
    };
    let rules = rule_lines.iter().map(|&(n, _, v)| word(n, v)).collect::<Result<Vec<_>>>()?;
    let tape = match lines.key("tape") {
        Some((n, v)) => Some(TagTape::from_word(&word(n, v)?)),
        None => None,
    };
    Ok((TagSystem::new(deletion, names, rules)?, tape))
}

fn runword_text(sys: &TagSystem, w: impl Iterator<Item = (SymbolId, BigUint)>) -> String {
    w.map(|(s, c)| {
        if c.is_one() {
            sys.name(s).to_string()
        } else {
            format!("{}^{}", sys.name(s), c)
        }
    })
    .collect::<Vec<_>>()
    .join(" ")
}

pub fn write_tag(sys: &TagSystem, tape: Option<&TagTape>) -> Result<String> {
    let mut out = format!("forge-tag {VERSION}\ndeletion: {}\n", sys.deletion());
    for s in 0..sys.alphabet_size() {
        let w = sys.appendant(s).runs().iter().map(|r| (r.symbol, r.count.clone()));
        let body = runword_text(sys, w);
        if body.is_empty() {
            let _ = writeln!(out, "{} :", sys.name(s));
        } else {
            let _ = writeln!(out, "{} : {}", sys.name(s), body);
        }
    }
    if let Some(t) = tape {
        let runs = t.runs_limited(1 << 20).ok_or_else(|| Error::invalid("tape too irregular to write"))?;
        let _ = writeln!(out, "tape: {}", runword_text(sys, runs.into_iter().map(|r| (r.symbol, r.count))));
    }
    Ok(out)
}

// ---------------------------------------------------------------- CTS

fn parse_yn_tokens(n: usize, v: &str) -> Result<Vec<bool>> {
    let mut out = Vec::new();
    for tok in words(v) {
        let (w, c) = token(tok).map_err(|e| Error::parse(n, e.to_string()))?;
        let bits = parse_yn(w).map_err(|e| Error::parse(n, e.to_string()))?;
        let c: usize = c.try_into().map_err(|_| Error::parse(n, "repeat count too large"))?;
        for _ in 0..c {
            out.extend_from_slice(&bits);
        }
    }
    Ok(out)
}

/// ```text
/// forge-cts 1
/// tape: Y
/// YYYYYY
/// -
/// NNNNNN
/// -
/// ```
/// One appendant per line, `-` for ∅. `N^12` repeats a word.
pub fn parse_cts(text: &str) -> Result<(CyclicTagSystem, CtsState)> {
    let lines = Lines::new(text, "cts")?;
    let mut apps = Vec::new();
    for &(n, l) in &lines.items {
        if l.contains(':') {
            continue;
        }
        apps.push(if l == "-" { Vec::new() } else { parse_yn_tokens(n, l)? });
    }
    let tape = match lines.key("tape") {
        Some((n, v)) => parse_yn_tokens(n, v)?,
        None => Vec::new(),
    };
    let marker = match lines.key("marker") {
        Some((n, v)) => v.parse::<usize>().map_err(|_| Error::parse(n, "bad marker"))?,
        None => 0,
    };
    let sys = CyclicTagSystem::new(apps)?;
    if marker >= sys.len() {
        return Err(Error::invalid("marker out of range"));
    }
    Ok((sys, CtsState::new(tape, marker)))
}

pub fn write_cts(sys: &CyclicTagSystem, state: &CtsState) -> String {
    let tape: Vec<bool> = state.tape.iter().copied().collect();
    let mut out = format!("forge-cts {VERSION}\ntape: {}\n", compress_yn(&tape));
    if state.marker != 0 {
        let _ = writeln!(out, "marker: {}", state.marker);
    }
    for a in sys.appendants() {
        if a.is_empty() {
            out.push_str("-\n");
        } else {
            out.push_str(&compress_yn(a));
            out.push('\n');
        }
    }
    out
}

/// Run-length compresses a Y/N word into `Y N^5 ...` tokens.
pub fn compress_yn(w: &[bool]) -> String {
    if w.is_empty() {
        return "-".into();
    }
    let mut toks = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let c = if w[i] { "Y" } else { "N" };
        toks.push(if j - i == 1 { c.to_string() } else { format!("{c}^{}", j - i) });
        i = j;
    }
    toks.join(" ")
}

// ---------------------------------------------------------------- right-moving TM

/// ```text
/// forge-rtm 1
/// states: q
/// q A -> B B q
/// q B -> A q
/// tape: ABA
/// state: q
/// ```
pub fn parse_rtm(text: &str) -> Result<(RightTm, Vec<Ab>, usize)> {
    let lines = Lines::new(text, "rtm")?;
    let names: Vec<String> = words(lines.need("states")?.1).into_iter().map(String::from).collect();
    let mut table = vec![[RightAction::Halt, RightAction::Halt]; names.len()];
    let idx = |n: usize, s: &str| {
        names.iter().position(|x| x == s).ok_or_else(|| Error::parse(n, format!("unknown state {s:?}")))
    };
    for &(n, l) in &lines.items {
        let Some((lhs, rhs)) = l.split_once("->") else { continue };
        let lhs = words(lhs);
        let rhs = words(rhs);
        if lhs.len() != 2 {
            return Err(Error::parse(n, "expected `state A|B -> ...`"));
        }
        let q = idx(n, lhs[0])?;
        let read = Ab::parse_word(lhs[1]).map_err(|e| Error::parse(n, e.to_string()))?;
        if read.len() != 1 {
            return Err(Error::parse(n, "read symbol must be A or B"));
        }
        let action = match rhs.as_slice() {
            ["halt"] => RightAction::Halt,
            [w @ .., nx] if !w.is_empty() => RightAction::Write {
                symbols: Ab::parse_word(&w.join("")).map_err(|e| Error::parse(n, e.to_string()))?,
                next: idx(n, nx)?,
            },
            _ => return Err(Error::parse(n, "expected `symbols next` or `halt`")),
        };
        table[q][read[0] as usize] = action;
    }
    let tape = match lines.key("tape") {
        Some((n, v)) => Ab::parse_word(v).map_err(|e| Error::parse(n, e.to_string()))?,
        None => vec![Ab::A],
    };
    let state = match lines.key("state") {
        Some((n, v)) => idx(n, v)?,
        None => 0,
    };
    Ok((RightTm::new(names, table)?, tape, state))
}

pub fn write_rtm(tm: &RightTm, tape: &[Ab], state: usize) -> String {
    let mut out = format!("forge-rtm {VERSION}\nstates: {}\n", tm.names().join(" "));
    for q in 0..tm.states() {
        for read in [Ab::A, Ab::B] {
            let rhs = match tm.action(q, read) {
                RightAction::Halt => "halt".to_string(),
                RightAction::Write { symbols, next } => {
                    let w: Vec<String> = symbols.iter().map(|s| s.letter().to_string()).collect();
                    format!("{} {}", w.join(" "), tm.names()[*next])
                }
            };
            let _ = writeln!(out, "{} {} -> {}", tm.names()[q], read.letter(), rhs);
        }
    }
    let _ = writeln!(out, "tape: {}\nstate: {}", Ab::word_string(tape), tm.names()[state]);
    out
}

// ---------------------------------------------------------------- Rule 110 state

/// Run-length form of a bit word: `1^5 0^3 1`, or `-` when empty.
pub fn compress_bits(w: &BitRow) -> String {
    if w.is_empty() {
        return "-".into();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < w.len() {
        let b = w.get(i);
        let mut j = i;
        while j < w.len() && w.get(j) == b {
            j += 1;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push(if b { '1' } else { '0' });
        if j - i > 1 {
            let _ = write!(out, "^{}", j - i);
        }
        i = j;
    }
    out
}

fn parse_bits(n: usize, v: &str) -> Result<BitRow> {
    let mut row = BitRow::default();
    if v == "-" {
        return Ok(row);
    }
    for tok in words(v) {
        let (w, c) = token(tok).map_err(|e| Error::parse(n, e.to_string()))?;
        let bits = BitRow::parse(w).ok_or_else(|| Error::parse(n, format!("bad bit token {tok:?}")))?;
        let c: usize = c.try_into().map_err(|_| Error::parse(n, "repeat count too large"))?;
        for _ in 0..c {
            row.extend_row(&bits);
        }
    }
    Ok(row)
}

/// ```text
/// forge-r110 1
/// origin: 0
/// left-phase: 0
/// left: 1^5 0^3 1 0^2 1^2 0
/// center: 0 1^2
/// right-phase: 0
/// right: 1^5 0^3 1 0^2 1^2 0
/// ```
/// See [`Rule110State`] for how the phases place the side words.
pub fn parse_state(text: &str) -> Result<Rule110State> {
    let lines = Lines::new(text, "r110")?;
    let int = |key: &str| -> Result<i64> {
        match lines.key(key) {
            None => Ok(0),
            Some((n, v)) => v.parse().map_err(|_| Error::parse(n, format!("bad number for {key}"))),
        }
    };
    let bits = |key: &str| -> Result<BitRow> {
        let (n, v) = lines.need(key)?;
        parse_bits(n, v)
    };
    let phase = |key: &str| -> Result<usize> {
        usize::try_from(int(key)?).map_err(|_| Error::invalid(format!("{key} must not be negative")))
    };
    Rule110State::with_phases(bits("left")?, phase("left-phase")?, bits("center")?, bits("right")?, phase("right-phase")?, int("origin")?)
}

pub fn write_state(s: &Rule110State) -> String {
    format!(
        "forge-r110 {VERSION}\norigin: {}\nleft-phase: {}\nleft: {}\ncenter: {}\nright-phase: {}\nright: {}\n",
        s.origin,
        s.left_phase,
        compress_bits(&s.left),
        compress_bits(&s.center),
        s.right_phase,
        compress_bits(&s.right)
    )
}

// ---------------------------------------------------------------- suite case

/// One end-to-end case of a cross-check suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSpec {
    /// Paths as written, relative to the case file.
    pub machine: String,
    pub config: String,
    pub expect_halt: bool,
    pub tm_steps: u64,
    pub max_steps: u64,
}

/// ```text
/// forge-case 1
/// machine: halt1.tm
/// config: halt1.cfg
/// expect: halt        # or loop
/// tm-steps: 30
/// max-steps: 1000000
/// ```
pub fn parse_case(text: &str) -> Result<CaseSpec> {
    let lines = Lines::new(text, "case")?;
    let num = |key: &str, default: u64| -> Result<u64> {
        match lines.key(key) {
            None => Ok(default),
            Some((n, v)) => v.parse().map_err(|_| Error::parse(n, format!("bad number for {key}"))),
        }
    };
    let (n, expect) = lines.need("expect")?;
    let expect_halt = match expect {
        "halt" => true,
        "loop" => false,
        _ => return Err(Error::parse(n, "expect is `halt` or `loop`")),
    };
    Ok(CaseSpec {
        machine: lines.need("machine")?.1.to_string(),
        config: lines.need("config")?.1.to_string(),
        expect_halt,
        tm_steps: num("tm-steps", 30)?,
        max_steps: num("max-steps", 1_000_000)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::yn_string;

    const TM: &str = "forge-tm 1\nstates: a b\nsymbols: 0 1\na 0 -> 1 R b\nb 0 -> 1 L a\n# comment\n";

    #[test]
    fn tm_round_trip() {
        let tm = parse_tm(TM).unwrap();
        assert_eq!(tm.action(0, 1), Action::Halt);
        assert_eq!(parse_tm(&write_tm(&tm)).unwrap(), tm);
    }

    #[test]
    fn header_is_required() {
        assert!(matches!(parse_tm("states: a\n"), Err(Error::Parse { .. })));
        assert!(parse_tm("forge-tm 2\nstates: a\nsymbols: 0\n").is_err());
    }

    #[test]
    fn config_round_trip() {
        let tm = parse_tm(TM).unwrap();
        let text = "forge-config 1\nstate: b\nleft-periodic: 0\nleft: 1\nhead: 1\nright: 0 1\nright-periodic: 0 1\n";
        let cfg = parse_config(text, &tm).unwrap();
        assert_eq!(cfg.window(3), vec![0, 0, 1, 1, 0, 1, 0]);
        assert_eq!(parse_config(&write_config(&cfg, &tm), &tm).unwrap(), cfg);
    }

    #[test]
    fn tag_round_trip() {
        let text = "forge-tag 1\ndeletion: 2\nA : C Y\nC : A\nY : A^3\nE :\ntape: C A\n";
        let (sys, tape) = parse_tag(text).unwrap();
        assert_eq!(sys.appendant(2).len(), BigUint::from(3u32));
        assert!(sys.appendant(3).is_empty());
        let again = parse_tag(&write_tag(&sys, tape.as_ref()).unwrap()).unwrap();
        assert_eq!(again, (sys, tape));
    }

    #[test]
    fn cts_round_trip() {
        let text = "forge-cts 1\ntape: Y\nYYYYYY\n-\nN^6\n-\n";
        let (sys, st) = parse_cts(text).unwrap();
        assert_eq!(sys.to_string(), "{YYYYYY,∅,NNNNNN,∅}");
        assert_eq!(parse_cts(&write_cts(&sys, &st)).unwrap(), (sys, st));
        assert_eq!(yn_string(&parse_yn_tokens(0, "YN^2 Y").unwrap()), "YNYNY");
    }

    #[test]
    fn rtm_round_trip() {
        let text = "forge-rtm 1\nstates: q\nq A -> B B q\nq B -> A q\ntape: ABA\n";
        let (tm, tape, st) = parse_rtm(text).unwrap();
        assert_eq!(parse_rtm(&write_rtm(&tm, &tape, st)).unwrap(), (tm, tape, st));
    }

    #[test]
    fn state_round_trip() {
        let row = |w: &str| BitRow::parse(w).unwrap();
        let st = Rule110State::with_phases(row("11111000100110"), 3, row("0011"), row("10"), 1, -7).unwrap();
        let text = write_state(&st);
        assert!(text.contains("left: 1^5 0^3 1 0^2 1^2 0"));
        assert_eq!(parse_state(&text).unwrap(), st);
        let empty = Rule110State::periodic(row("1")).unwrap();
        assert_eq!(parse_state(&write_state(&empty)).unwrap(), empty);
    }
}
