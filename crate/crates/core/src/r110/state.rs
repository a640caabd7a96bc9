use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::r110::bits::BitRow;

/// A Rule 110 row: a word repeated forever to the left, a finite center, and
/// a word repeated forever to the right.
///
/// With the center occupying cells `origin .. origin + len`, cell
/// `origin - 1 - j` is `left[(left_phase + pl - 1 - j) mod pl]` and cell
/// `origin + len + j` is `right[(right_phase + j) mod pr]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Rule110State {
    /// Side words are shared, so cloning a state with long sides is cheap.
    pub left: Arc<BitRow>,
    pub left_phase: usize,
    pub center: BitRow,
    pub right: Arc<BitRow>,
    pub right_phase: usize,
    /// Absolute position of the first center cell.
    pub origin: i64,
}

impl fmt::Debug for Rule110State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Rule110State {{ left: {}@{}, center: {} at {}, right: {}@{} }}",
            self.left, self.left_phase, self.center, self.origin, self.right, self.right_phase
        )
    }
}

impl Rule110State {
    pub fn new(left: impl Into<Arc<BitRow>>, center: BitRow, right: impl Into<Arc<BitRow>>) -> Result<Self> {
        Self::with_phases(left, 0, center, right, 0, 0)
    }

    pub fn with_phases(
        left: impl Into<Arc<BitRow>>,
        left_phase: usize,
        center: BitRow,
        right: impl Into<Arc<BitRow>>,
        right_phase: usize,
        origin: i64,
    ) -> Result<Self> {
        let (left, right) = (left.into(), right.into());
        if left.is_empty() || right.is_empty() {
            return Err(Error::invalid("periodic side words must be non-empty"));
        }
        let (lp, rp) = (left_phase % left.len(), right_phase % right.len());
        Ok(Rule110State { left, left_phase: lp, center, right, right_phase: rp, origin })
    }

    /// A row that is `word` repeated everywhere, with cell 0 = `word[0]`.
    pub fn periodic(word: impl Into<Arc<BitRow>>) -> Result<Self> {
        let word = word.into();
        Self::with_phases(word.clone(), 0, BitRow::default(), word, 0, 0)
    }

    pub fn center_end(&self) -> i64 {
        self.origin + self.center.len() as i64
    }

    /// Value of the cell at absolute position `x`.
    pub fn cell(&self, x: i64) -> bool {
        if x < self.origin {
            let j = (self.origin - 1 - x) as u64;
            let pl = self.left.len() as u64;
            let idx = (self.left_phase as u64 + pl - 1 + pl * (j / pl + 1) - j) % pl;
            self.left.get(idx as usize)
        } else if x < self.center_end() {
            self.center.get((x - self.origin) as usize)
        } else {
            let j = (x - self.center_end()) as u64;
            let pr = self.right.len() as u64;
            self.right.get(((self.right_phase as u64 + j) % pr) as usize)
        }
    }

    fn left_run(&self, n: usize) -> BitRow {
        // the n cells just left of the center, in tape order
        let pl = self.left.len();
        let start = (self.left_phase + pl * (n / pl + 1) - n) % pl;
        repeat_from(&self.left, start, n)
    }

    fn right_run(&self, n: usize) -> BitRow {
        repeat_from(&self.right, self.right_phase, n)
    }

    /// Cells `x0 .. x1`.
    pub fn window(&self, x0: i64, x1: i64) -> BitRow {
        let mut out = BitRow::default();
        if x1 <= x0 {
            return out;
        }
        let (o, e) = (self.origin, self.center_end());
        if x0 < o {
            let n = (o - x0) as usize;
            let run = self.left_run(n);
            let take = ((x1.min(o) - x0) as usize).min(n);
            out.extend_row(&run.slice(0, take));
        }
        let (c0, c1) = (x0.max(o), x1.min(e));
        if c0 < c1 {
            out.extend_row(&self.center.slice((c0 - o) as usize, (c1 - c0) as usize));
        }
        if x1 > e {
            let s = x0.max(e);
            let run = repeat_from(&self.right, (self.right_phase + (s - e) as usize) % self.right.len(), (x1 - s) as usize);
            out.extend_row(&run);
        }
        out
    }

    /// The state obtained by padding the center with `n` side cells on each end.
    pub fn widened(&self, n: usize) -> Rule110State {
        let mut center = self.left_run(n);
        center.extend_row(&self.center);
        center.extend_row(&self.right_run(n));
        let pl = self.left.len();
        Rule110State {
            left: self.left.clone(),
            left_phase: (self.left_phase + pl * (n / pl + 1) - n) % pl,
            center,
            right: self.right.clone(),
            right_phase: (self.right_phase + n) % self.right.len(),
            origin: self.origin - n as i64,
        }
    }

    /// Shifts every cell by `dx` positions to the right.
    pub fn translated(&self, dx: i64) -> Rule110State {
        let mut s = self.clone();
        s.origin += dx;
        s
    }

    /// True if both states denote the same infinite row.
    pub fn same_row(&self, other: &Rule110State) -> bool {
        let lo = self.origin.min(other.origin);
        let hi = self.center_end().max(other.center_end());
        let margin = (self.left.len() * other.left.len()).max(self.right.len() * other.right.len()) as i64 + 1;
        self.window(lo - margin, hi + margin) == other.window(lo - margin, hi + margin)
    }

    /// Absorbs center cells that continue a side pattern, keeping `keep`
    /// cells of margin on each side.
    pub fn renormalize(&mut self, keep: usize) {
        let pl = self.left.len();
        let mut m = 0;
        while m < self.center.len() && self.center.get(m) == self.left.get((self.left_phase + m) % pl) {
            m += 1;
        }
        if m > keep {
            let k = m - keep;
            self.center = self.center.slice(k, self.center.len() - k);
            self.origin += k as i64;
            self.left_phase = (self.left_phase + k) % pl;
        }
        let pr = self.right.len();
        let n = self.center.len();
        let mut m = 0;
        while m < n {
            let idx = (self.right_phase + pr * (m / pr + 1) - 1 - m) % pr;
            if self.center.get(n - 1 - m) != self.right.get(idx) {
                break;
            }
            m += 1;
        }
        if m > keep {
            let k = m - keep;
            self.center = self.center.slice(0, n - k);
            self.right_phase = (self.right_phase + pr * (k / pr + 1) - k) % pr;
        }
    }
}

fn repeat_from(word: &BitRow, start: usize, n: usize) -> BitRow {
    let mut out = BitRow::default();
    let p = word.len();
    let mut s = start % p;
    let mut left = n;
    while left > 0 {
        let take = (p - s).min(left);
        out.extend_row(&word.slice(s, take));
        left -= take;
        s = 0;
    }
    out
}

/// Steps a [`Rule110State`], caching the successors of side words.
///
/// Long side words are usually periodic in time up to a rotation. Once that
/// cycle is seen the engine reuses the stored words and only moves the phase.
#[derive(Debug, Default)]
pub struct Engine {
    cache: HashMap<BitRow, Arc<BitRow>>,
    cycles: Vec<SideCycle>,
    /// Renormalize every this many steps; 0 disables it.
    pub renormalize_every: u64,
    steps: u64,
}

/// Successive words of one side. `closes = Some((j, r))` means the word
/// after the last one is `words[j]` read `r` cells further on.
#[derive(Debug)]
struct SideCycle {
    words: Vec<Arc<BitRow>>,
    closes: Option<(usize, usize)>,
}

const CACHE_LIMIT: usize = 1024;
/// Words at least this long are tracked for cycles instead of hashed.
const LONG_WORD: usize = 4096;
const CYCLE_HISTORY: usize = 64;
const MAX_SIDES: usize = 8;

/// Whether `a[i] == b[(i + r) mod len]` for all `i`.
fn is_rotation(a: &BitRow, b: &BitRow, r: usize) -> bool {
    let n = a.len();
    if n != b.len() || n == 0 {
        return false;
    }
    let r = r % n;
    // cells a[0 .. n-r] against b[r .. n], then a[n-r .. n] against b[0 .. r]
    let mut k = 0;
    while k < n - r {
        let m = (n - r - k).min(64);
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        if (a.word_at(k) ^ b.word_at(r + k)) & mask != 0 {
            return false;
        }
        k += 64;
    }
    let mut k = 0;
    while k < r {
        let m = (r - k).min(64);
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        if (a.word_at(n - r + k) ^ b.word_at(k)) & mask != 0 {
            return false;
        }
        k += 64;
    }
    true
}

impl Engine {
    pub fn new() -> Self {
        Engine { cache: HashMap::new(), cycles: Vec::new(), renormalize_every: 64, steps: 0 }
    }

    /// The successor of `w` as a stored word and the extra phase to read it at.
    fn next_word(&mut self, w: &Arc<BitRow>) -> (Arc<BitRow>, usize) {
        if w.len() < LONG_WORD {
            if let Some(n) = self.cache.get(w.as_ref()) {
                return (n.clone(), 0);
            }
            let n = Arc::new(w.step_cyclic());
            if self.cache.len() >= CACHE_LIMIT {
                self.cache.clear();
            }
            self.cache.insert(w.as_ref().clone(), n.clone());
            return (n, 0);
        }
        let found = self
            .cycles
            .iter()
            .enumerate()
            .find_map(|(c, sc)| sc.words.iter().position(|x| Arc::ptr_eq(x, w)).map(|i| (c, i)));
        let (c, i) = match found {
            Some(ci) => ci,
            None => {
                if self.cycles.len() >= MAX_SIDES {
                    self.cycles.remove(0);
                }
                self.cycles.push(SideCycle { words: vec![w.clone()], closes: None });
                (self.cycles.len() - 1, 0)
            }
        };
        let sc = &mut self.cycles[c];
        if i + 1 < sc.words.len() {
            return (sc.words[i + 1].clone(), 0);
        }
        if let Some((j, r)) = sc.closes {
            return (sc.words[j].clone(), r);
        }
        let n = w.step_cyclic();
        let len = n.len();
        let reach = sc.words.len() + 1;
        for (j, old) in sc.words.iter().enumerate() {
            for d in 0..=reach.min(len / 2) {
                for r in [d, len - d] {
                    if is_rotation(&n, old, r % len) {
                        sc.closes = Some((j, r % len));
                        return (old.clone(), r % len);
                    }
                }
            }
        }
        let n = Arc::new(n);
        if sc.words.len() >= CYCLE_HISTORY {
            sc.words.drain(..sc.words.len() - 1);
        }
        sc.words.push(n.clone());
        (n, 0)
    }

    /// One synchronous update of the whole row. The center grows by one
    /// cell on each side.
    pub fn step(&mut self, s: &mut Rule110State) {
        let mut ext = s.left_run(2);
        ext.extend_row(&s.center);
        ext.extend_row(&s.right_run(2));
        let center = ext.step_interior();
        let (left, lr) = self.next_word(&s.left);
        let (right, rr) = self.next_word(&s.right);
        let pl = left.len();
        s.left = left;
        s.left_phase = (s.left_phase + pl - 1 + lr) % pl;
        s.right_phase = (s.right_phase + 1 + rr) % right.len();
        s.right = right;
        s.center = center;
        s.origin -= 1;
        self.steps += 1;
        if self.renormalize_every > 0 && self.steps % self.renormalize_every == 0 {
            s.renormalize(4);
        }
    }

    pub fn run(&mut self, s: &mut Rule110State, steps: u64) {
        for _ in 0..steps {
            self.step(s);
        }
    }
}

/// Cells `x0 .. x1` after `steps` steps, computed cell by cell on a wide
/// window. Slow reference for the packed engine.
pub fn brute_force_window(state: &Rule110State, steps: usize, x0: i64, x1: i64) -> BitRow {
    let t = steps as i64;
    let mut row: Vec<bool> = (x0 - t..x1 + t).map(|x| state.cell(x)).collect();
    for _ in 0..steps {
        row = (1..row.len() - 1)
            .map(|i| crate::r110::bits::local_rule(row[i - 1], row[i], row[i + 1]))
            .collect();
    }
    BitRow::from_bits(row)
}
