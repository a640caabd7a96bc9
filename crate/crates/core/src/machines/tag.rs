use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::machines::SymbolId;

/// `count` consecutive copies of `symbol`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub symbol: SymbolId,
    pub count: BigUint,
}

impl Run {
    pub fn new(symbol: SymbolId, count: impl Into<BigUint>) -> Self {
        Run { symbol, count: count.into() }
    }
}

/// A run-length encoded word. Adjacent runs never share a symbol and no run
/// is empty, so structural equality is word equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RunWord {
    runs: Vec<Run>,
}

impl RunWord {
    pub fn new() -> Self {
        RunWord::default()
    }

    pub fn from_symbols(symbols: &[SymbolId]) -> Self {
        let mut w = RunWord::new();
        for &s in symbols {
            w.push(s, 1u32);
        }
        w
    }

    pub fn from_runs(runs: impl IntoIterator<Item = Run>) -> Self {
        let mut w = RunWord::new();
        for r in runs {
            w.push(r.symbol, r.count);
        }
        w
    }

    pub fn push(&mut self, symbol: SymbolId, count: impl Into<BigUint>) {
        let count = count.into();
        if count.is_zero() {
            return;
        }
        match self.runs.last_mut() {
            Some(last) if last.symbol == symbol => last.count += count,
            _ => self.runs.push(Run { symbol, count }),
        }
    }

    pub fn extend(&mut self, other: &RunWord) {
        for r in &other.runs {
            self.push(r.symbol, r.count.clone());
        }
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn len(&self) -> BigUint {
        self.runs.iter().map(|r| &r.count).sum()
    }

    /// Expands to plain symbols; `None` if longer than `limit`.
    pub fn to_symbols(&self, limit: usize) -> Option<Vec<SymbolId>> {
        let n = self.len().to_usize()?;
        if n > limit {
            return None;
        }
        let mut out = Vec::with_capacity(n);
        for r in &self.runs {
            out.extend(std::iter::repeat(r.symbol).take(r.count.to_usize()?));
        }
        Some(out)
    }
}

/// A tag system with deletion number `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSystem {
    deletion: usize,
    names: Vec<String>,
    rules: Vec<RunWord>,
}

impl TagSystem {
    pub fn new(deletion: usize, names: Vec<String>, rules: Vec<RunWord>) -> Result<Self> {
        if deletion == 0 {
            return Err(Error::invalid("deletion number must be positive"));
        }
        if names.len() != rules.len() {
            return Err(Error::invalid("one appendant per symbol required"));
        }
        let n = names.len();
        for w in &rules {
            if let Some(r) = w.runs().iter().find(|r| r.symbol >= n) {
                return Err(Error::UnknownSymbol(r.symbol.to_string()));
            }
        }
        Ok(TagSystem { deletion, names, rules })
    }

    pub fn deletion(&self) -> usize {
        self.deletion
    }

    pub fn alphabet_size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: SymbolId) -> &str {
        &self.names[s]
    }

    pub fn symbol_index(&self, name: &str) -> Option<SymbolId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn appendant(&self, s: SymbolId) -> &RunWord {
        &self.rules[s]
    }

    pub fn rules(&self) -> &[RunWord] {
        &self.rules
    }

    /// Replaces one appendant; used by mutation tests.
    pub fn set_appendant(&mut self, s: SymbolId, w: RunWord) {
        self.rules[s] = w;
    }

    /// Single tag step on a copy of `tape`.
    pub fn step(&self, tape: &TagTape) -> Result<TagStep> {
        let mut t = tape.clone();
        Ok(if self.step_in_place(&mut t)? { TagStep::Next(t) } else { TagStep::Halted })
    }

    /// Performs one bulk move and returns the number of steps taken, 0 if
    /// halted. Between calls the tape passes through every configuration
    /// whose first run starts at a read position.
    pub fn step_bulk(&self, tape: &mut TagTape) -> Result<BigUint> {
        tape.advance_big(self, None)
    }

    /// Single tag step; returns `false` when `|tape| < s`.
    pub fn step_in_place(&self, tape: &mut TagTape) -> Result<bool> {
        Ok(tape.advance(self, 1)? == 1)
    }

    /// Performs up to `max` steps. Returns the number performed, which is
    /// less than `max` only if the system halted.
    pub fn step_many(&self, tape: &mut TagTape, max: u64) -> Result<u64> {
        let mut done = 0;
        while done < max {
            let k = tape.advance(self, max - done)?;
            if k == 0 {
                break;
            }
            done += k;
        }
        Ok(done)
    }

    /// Runs to halt or `max` steps; returns `(steps, halted)`.
    pub fn run(&self, tape: &mut TagTape, max: u64) -> Result<(u64, bool)> {
        let n = self.step_many(tape, max)?;
        Ok((n, tape.len() < BigUint::from(self.deletion)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagStep {
    Next(TagTape),
    Halted,
}

/// `word` repeated `times` times, of which the first `skip` symbols are gone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Seg {
    word: RunWord,
    wlen: BigUint,
    times: BigUint,
    skip: BigUint,
}

impl Seg {
    fn remaining(&self) -> BigUint {
        &self.wlen * &self.times - &self.skip
    }

    /// Run index and offset inside it for a position within one copy.
    fn locate(&self, pos: &BigUint) -> (usize, BigUint) {
        let mut p = pos.clone();
        for (i, r) in self.word.runs.iter().enumerate() {
            if p < r.count {
                return (i, p);
            }
            p -= &r.count;
        }
        unreachable!("position inside word")
    }

    fn symbol_at(&self, pos: &BigUint) -> SymbolId {
        self.word.runs[self.locate(pos).0].symbol
    }
}

/// A tag-system tape stored as run-length encoded, possibly repeated words.
///
/// Long runs and long repetitions are processed in bulk, so tapes whose
/// lengths are astronomically large but structurally simple stay cheap.
#[derive(Debug, Clone, Default)]
pub struct TagTape {
    segs: VecDeque<Seg>,
    len: BigUint,
}

const MAX_BULK_WORD: u64 = 1 << 16;
const MAX_BULK_READS: u64 = 4096;

impl TagTape {
    pub fn new() -> Self {
        TagTape::default()
    }

    pub fn from_symbols(symbols: &[SymbolId]) -> Self {
        let mut t = TagTape::new();
        for &s in symbols {
            t.push(s, BigUint::one());
        }
        t
    }

    pub fn from_word(w: &RunWord) -> Self {
        let mut t = TagTape::new();
        t.push_word(w, &BigUint::one());
        t
    }

    pub fn push(&mut self, symbol: SymbolId, count: BigUint) {
        if count.is_zero() {
            return;
        }
        self.len += &count;
        if let Some(last) = self.segs.back_mut() {
            if last.times.is_one() {
                last.wlen += &count;
                last.word.push(symbol, count);
                return;
            }
        }
        let word = RunWord { runs: vec![Run { symbol, count: count.clone() }] };
        self.segs.push_back(Seg { word, wlen: count, times: BigUint::one(), skip: BigUint::zero() });
    }

    /// Appends `times` copies of `w`.
    pub fn push_word(&mut self, w: &RunWord, times: &BigUint) {
        if w.is_empty() || times.is_zero() {
            return;
        }
        if let [r] = w.runs() {
            self.push(r.symbol, &r.count * times);
            return;
        }
        if times.is_one() {
            for r in w.runs() {
                self.push(r.symbol, r.count.clone());
            }
            return;
        }
        let wlen = w.len();
        self.len += &wlen * times;
        if let Some(last) = self.segs.back_mut() {
            if last.skip.is_zero() && last.word == *w {
                last.times += times;
                return;
            }
        }
        self.segs.push_back(Seg {
            word: w.clone(),
            wlen,
            times: times.clone(),
            skip: BigUint::zero(),
        });
    }

    fn delete_front(&mut self, mut n: BigUint) {
        debug_assert!(n <= self.len);
        self.len -= &n;
        while !n.is_zero() {
            let seg = self.segs.front_mut().expect("deleting within tape");
            let rem = seg.remaining();
            if n >= rem {
                n -= rem;
                self.segs.pop_front();
                continue;
            }
            seg.skip += &n;
            if seg.skip >= seg.wlen {
                let (q, r) = seg.skip.div_rem(&seg.wlen);
                seg.times -= q;
                seg.skip = r;
            }
            return;
        }
    }

    /// Performs one bulk move of at most `max` steps; returns the number of
    /// steps taken (0 if halted).
    fn advance(&mut self, sys: &TagSystem, max: u64) -> Result<u64> {
        let k = self.advance_big(sys, Some(&BigUint::from(max)))?;
        Ok(k.to_u64().expect("bounded by max"))
    }

    fn advance_big(&mut self, sys: &TagSystem, max: Option<&BigUint>) -> Result<BigUint> {
        let s = sys.deletion as u64;
        let sb = BigUint::from(s);
        if self.len < sb || max.is_some_and(|m| m.is_zero()) {
            return Ok(BigUint::zero());
        }
        let cap = |k: BigUint| match max {
            Some(m) if &k > m => m.clone(),
            _ => k,
        };
        let check = |sym: SymbolId| {
            if sym < sys.names.len() {
                Ok(())
            } else {
                Err(Error::UnknownSymbol(sym.to_string()))
            }
        };
        let seg = self.segs.front().expect("non-empty tape");
        let (ri, off) = seg.locate(&seg.skip);
        let run = &seg.word.runs[ri];
        let sym = run.symbol;
        check(sym)?;

        // every read lands in the same run
        let in_run = &run.count - &off;
        let k = cap(&in_run / &sb);
        if k >= BigUint::from(2u32) {
            let app = sys.rules[sym].clone();
            self.delete_front(&sb * &k);
            self.push_word(&app, &k);
            return Ok(k);
        }

        // reads cycle through a repeated word
        if seg.times >= BigUint::from(2u32) {
            if let Some(w) = seg.wlen.to_u64().filter(|&w| w <= MAX_BULK_WORD) {
                let l = w.lcm(&s);
                let reads = l / s;
                let rb = BigUint::from(reads);
                if reads <= MAX_BULK_READS && max.map_or(true, |m| &rb <= m) {
                    let mut n = seg.remaining() / l;
                    if let Some(m) = max {
                        n = n.min(m / &rb);
                    }
                    if n >= BigUint::from(2u32) {
                        let skip = seg.skip.to_u64().expect("skip below word length");
                        let mut concat = RunWord::new();
                        for j in 0..reads {
                            let sym = seg.symbol_at(&BigUint::from((skip + j * s) % w));
                            check(sym)?;
                            concat.extend(&sys.rules[sym]);
                        }
                        self.delete_front(BigUint::from(l) * &n);
                        self.push_word(&concat, &n);
                        return Ok(n * rb);
                    }
                }
            }
        }

        let app = sys.rules[sym].clone();
        self.delete_front(sb);
        self.push_word(&app, &BigUint::one());
        Ok(BigUint::one())
    }

    pub fn len(&self) -> BigUint {
        self.len.clone()
    }

    pub fn is_empty(&self) -> bool {
        self.len.is_zero()
    }

    pub fn first(&self) -> Option<SymbolId> {
        self.segs.front().map(|seg| seg.symbol_at(&seg.skip))
    }

    /// Number of stored segments; a rough size measure of the representation.
    pub fn segment_count(&self) -> usize {
        self.segs.len()
    }

    /// The tape as maximal runs, or `None` if that takes more than `limit` runs.
    pub fn runs_limited(&self, limit: usize) -> Option<Vec<Run>> {
        let mut out: Vec<Run> = Vec::new();
        let push = |out: &mut Vec<Run>, symbol: SymbolId, count: BigUint| -> bool {
            match out.last_mut() {
                Some(last) if last.symbol == symbol => last.count += count,
                _ => {
                    if out.len() == limit {
                        return false;
                    }
                    out.push(Run { symbol, count });
                }
            }
            true
        };
        for seg in &self.segs {
            let (ri, off) = seg.locate(&seg.skip);
            for (i, r) in seg.word.runs.iter().enumerate().skip(ri) {
                let c = if i == ri { &r.count - &off } else { r.count.clone() };
                if !push(&mut out, r.symbol, c) {
                    return None;
                }
            }
            let rest = &seg.times - 1u32;
            let copies = rest.to_usize().filter(|&c| c <= limit)?;
            for _ in 0..copies {
                for r in &seg.word.runs {
                    if !push(&mut out, r.symbol, r.count.clone()) {
                        return None;
                    }
                }
            }
        }
        Some(out)
    }

    pub fn to_word(&self, limit: usize) -> Option<RunWord> {
        Some(RunWord { runs: self.runs_limited(limit)? })
    }

    pub fn to_symbols(&self, limit: usize) -> Option<Vec<SymbolId>> {
        self.to_word(limit)?.to_symbols(limit)
    }
}

impl PartialEq for TagTape {
    /// Word equality; expands representations of up to a million runs.
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.runs_limited(1 << 20) == other.runs_limited(1 << 20)
    }
}

impl Eq for TagTape {}

impl fmt::Display for TagTape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let run = |f: &mut fmt::Formatter<'_>, r: &Run| {
            if r.count.is_one() {
                write!(f, "{}", r.symbol)
            } else {
                write!(f, "{}^{}", r.symbol, r.count)
            }
        };
        for (i, seg) in self.segs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if seg.times.is_one() && seg.skip.is_zero() {
                for (j, r) in seg.word.runs.iter().enumerate() {
                    if j > 0 {
                        f.write_str(" ")?;
                    }
                    run(f, r)?;
                }
            } else {
                f.write_str("(")?;
                for (j, r) in seg.word.runs.iter().enumerate() {
                    if j > 0 {
                        f.write_str(" ")?;
                    }
                    run(f, r)?;
                }
                write!(f, ")^{}", seg.times)?;
                if !seg.skip.is_zero() {
                    write!(f, "-{}", seg.skip)?;
                }
            }
        }
        Ok(())
    }
}
