//! Cocke–Minsky compilation of a Turing machine into a tag system with
//! deletion number `s = t + 2`.
//!
//! Tape symbols `σ_{t+1}` and `σ_{t+2}` mark the ends of the finite part of
//! the tape; reaching one of them unfolds another period of the periodic ends.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::machines::{
    Action, Move, RunWord, StateId, SymbolId, TagSystem, TagTape, TmConfiguration, TuringMachine,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TagKind {
    H,
    L,
    R,
    RStar,
    HPair,
    LPair,
    RPair,
    Dummy,
}

/// Meaning of a tag-system symbol produced by [`compile_tm_to_tag`].
/// `symbol` is 1-based and only meaningful for pair kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TagSymbolId {
    pub kind: TagKind,
    pub state: StateId,
    pub symbol: usize,
}

/// The symbol layout of the compiled alphabet for `m` states and `s = t+2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub m: usize,
    pub s: usize,
}

impl Layout {
    pub fn new(m: usize, t: usize) -> Self {
        Layout { m, s: t + 2 }
    }

    /// Number of non-dummy symbols, `4m + 3ms`.
    pub fn size(&self) -> usize {
        4 * self.m + 3 * self.m * self.s
    }

    pub fn single(&self, kind: TagKind, state: StateId) -> SymbolId {
        let k = match kind {
            TagKind::H => 0,
            TagKind::L => 1,
            TagKind::R => 2,
            TagKind::RStar => 3,
            _ => panic!("not a single-state kind"),
        };
        k * self.m + state
    }

    /// `symbol` is 1-based.
    pub fn pair(&self, kind: TagKind, state: StateId, symbol: usize) -> SymbolId {
        let k = match kind {
            TagKind::HPair => 0,
            TagKind::LPair => 1,
            TagKind::RPair => 2,
            _ => panic!("not a pair kind"),
        };
        4 * self.m + k * self.m * self.s + state * self.s + (symbol - 1)
    }

    pub fn describe(&self, id: SymbolId) -> TagSymbolId {
        let m = self.m;
        if id < 4 * m {
            let kind = [TagKind::H, TagKind::L, TagKind::R, TagKind::RStar][id / m];
            return TagSymbolId { kind, state: id % m, symbol: 0 };
        }
        if id >= self.size() {
            return TagSymbolId { kind: TagKind::Dummy, state: 0, symbol: id - self.size() + 1 };
        }
        let r = id - 4 * m;
        let kind = [TagKind::HPair, TagKind::LPair, TagKind::RPair][r / (m * self.s)];
        let r = r % (m * self.s);
        TagSymbolId { kind, state: r / self.s, symbol: r % self.s + 1 }
    }

    pub fn name(&self, id: SymbolId, tm: &TuringMachine) -> String {
        let d = self.describe(id);
        let q = || tm.state_name(d.state).to_string();
        let sym = |j: usize| {
            if j <= tm.symbols() {
                tm.symbol_name(j - 1).to_string()
            } else if j == tm.symbols() + 1 {
                "<".to_string()
            } else {
                ">".to_string()
            }
        };
        match d.kind {
            TagKind::H => format!("H[{}]", q()),
            TagKind::L => format!("L[{}]", q()),
            TagKind::R => format!("R[{}]", q()),
            TagKind::RStar => format!("R*[{}]", q()),
            TagKind::HPair => format!("H[{},{}]", q(), sym(d.symbol)),
            TagKind::LPair => format!("L[{},{}]", q(), sym(d.symbol)),
            TagKind::RPair => format!("R[{},{}]", q(), sym(d.symbol)),
            TagKind::Dummy => format!("phi{}", id + 1),
        }
    }
}

fn pow(s: usize, k: usize) -> BigUint {
    num_traits::pow(BigUint::from(s), k)
}

/// Base-`s` value of a digit word: `Σ (s - w_k) s^{k-1+offset}` for 1-based symbols.
fn digit_value(s: usize, w: &[SymbolId], offset: usize) -> BigUint {
    let mut v = BigUint::zero();
    for (k, &sym) in w.iter().enumerate() {
        v += BigUint::from(s - (sym + 1)) * pow(s, k + offset);
    }
    v
}

/// Compiles `tm` started in `cfg` into a tag system and its initial tape.
pub fn compile_tm_to_tag(tm: &TuringMachine, cfg: &TmConfiguration) -> Result<(TagSystem, TagTape)> {
    cfg.check(tm)?;
    let (m, t) = (tm.states(), tm.symbols());
    let lay = Layout::new(m, t);
    let s = lay.s;
    // periodic words outward from the finite part: a_1 .. a_w and e_1 .. e_z
    let a: Vec<SymbolId> = cfg.left_periodic().iter().rev().copied().collect();
    let e: Vec<SymbolId> = cfg.right_periodic().to_vec();
    let w = a.len();

    let mut rules = vec![RunWord::new(); lay.size()];
    let su = |n: usize| BigUint::from(n);
    for i in 0..m {
        for (single, pair) in [
            (TagKind::H, TagKind::HPair),
            (TagKind::L, TagKind::LPair),
            (TagKind::R, TagKind::RPair),
        ] {
            let mut wd = RunWord::new();
            for j in 1..=s {
                wd.push(lay.pair(pair, i, j), 1u32);
            }
            rules[lay.single(single, i)] = wd;
        }
        rules[lay.single(TagKind::RStar, i)] =
            RunWord::from_runs([crate::machines::Run::new(lay.single(TagKind::R, i), su(s))]);

        for j in 1..=t {
            let (h, l, r) = match tm.action(i, j - 1) {
                Action::Halt => (RunWord::new(), RunWord::new(), RunWord::new()),
                Action::Write { symbol, dir, next: g } => {
                    let ups = symbol + 1;
                    let big = su(s) * su(s - ups);
                    let mut h = RunWord::new();
                    let mut l = RunWord::new();
                    let mut r = RunWord::new();
                    match dir {
                        Move::Left => {
                            h.push(lay.single(TagKind::RStar, g), big);
                            h.push(lay.single(TagKind::H, g), su(j));
                            l.push(lay.single(TagKind::L, g), 1u32);
                            r.push(lay.single(TagKind::R, g), su(s * s));
                        }
                        Move::Right => {
                            h.push(lay.single(TagKind::H, g), su(j));
                            h.push(lay.single(TagKind::L, g), big);
                            l.push(lay.single(TagKind::L, g), su(s * s));
                            r.push(lay.single(TagKind::R, g), 1u32);
                        }
                    }
                    (h, l, r)
                }
            };
            rules[lay.pair(TagKind::HPair, i, j)] = h;
            rules[lay.pair(TagKind::LPair, i, j)] = l;
            rules[lay.pair(TagKind::RPair, i, j)] = r;
        }
        for j in [t + 1, t + 2] {
            rules[lay.pair(TagKind::LPair, i, j)] =
                RunWord::from_runs([crate::machines::Run::new(lay.single(TagKind::L, i), su(s))]);
            rules[lay.pair(TagKind::RPair, i, j)] =
                RunWord::from_runs([crate::machines::Run::new(lay.single(TagKind::R, i), su(s))]);
        }
        let mut h1 = RunWord::new();
        h1.push(lay.single(TagKind::H, i), su(t + 1 + s - (a[0] + 1)));
        h1.push(lay.single(TagKind::L, i), pow(s, w) + digit_value(s, &a[1..], 1));
        rules[lay.pair(TagKind::HPair, i, t + 1)] = h1;
        let mut h2 = RunWord::new();
        h2.push(lay.single(TagKind::RStar, i), digit_value(s, &e[1..], 1));
        h2.push(lay.single(TagKind::H, i), su(t + 2 + s - (e[0] + 1)));
        rules[lay.pair(TagKind::HPair, i, t + 2)] = h2;
    }

    let names = (0..lay.size()).map(|id| lay.name(id, tm)).collect();
    let sys = TagSystem::new(s, names, rules)?;
    let tape = encode_tape(lay, cfg);
    Ok((sys, tape))
}

/// `[H]^{1+s-c} [L]^{s^{x+1} + Σ(s-b_k)s^k} [R]^{Σ(s-d_k)s^k}`.
pub fn encode_tape(lay: Layout, cfg: &TmConfiguration) -> TagTape {
    let s = lay.s;
    let g = cfg.state();
    let b: Vec<SymbolId> = cfg.left().iter().rev().copied().collect();
    let d = cfg.right();
    let mut tape = TagTape::new();
    tape.push(lay.single(TagKind::H, g), BigUint::from(1 + s - (cfg.head() + 1)));
    tape.push(lay.single(TagKind::L, g), pow(s, b.len() + 1) + digit_value(s, &b, 1));
    tape.push(lay.single(TagKind::R, g), digit_value(s, &d, 1));
    tape
}

/// A configuration recovered from a tag tape. Symbols are 1-based; a head
/// value of `t+1` or `t+2` means the head sits on an end marker while the
/// tag system unfolds another period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedConfig {
    pub state: StateId,
    pub head: usize,
    /// `b_1 .. b_x`, outward from the head.
    pub left: Vec<usize>,
    /// `d_1 .. d_y`, outward from the head.
    pub right: Vec<usize>,
}

impl DecodedConfig {
    pub fn on_marker(&self, t: usize) -> bool {
        self.head > t
    }

    /// True if no decoded cell is an end marker.
    pub fn is_plain(&self, t: usize) -> bool {
        self.head <= t && self.left.iter().chain(&self.right).all(|&v| v <= t)
    }

    /// Rebuilds the full configuration, taking the periodic ends from `like`.
    pub fn to_config(&self, like: &TmConfiguration) -> Result<TmConfiguration> {
        let z = |v: usize| v.checked_sub(1).ok_or_else(|| Error::NotCanonical("zero digit".into()));
        let mut left = self.left.iter().map(|&v| z(v)).collect::<Result<Vec<_>>>()?;
        left.reverse();
        let right = self.right.iter().map(|&v| z(v)).collect::<Result<Vec<_>>>()?;
        TmConfiguration::new(
            self.state,
            like.left_periodic().to_vec(),
            left,
            z(self.head)?,
            right,
            like.right_periodic().to_vec(),
        )
    }

    /// True if the decoded configuration equals `cfg` cell for cell,
    /// reading the periodic ends from `cfg`.
    pub fn agrees_with(&self, cfg: &TmConfiguration) -> bool {
        let Ok(me) = self.to_config(cfg) else {
            return false;
        };
        let reach = self.left.len().max(self.right.len()).max(cfg.left().len()).max(cfg.right().len());
        let period = cfg.left_periodic().len().max(cfg.right_periodic().len());
        let r = (reach + period + 1) as i64;
        me.state() == cfg.state() && (-r..=r).all(|k| me.cell(k) == cfg.cell(k))
    }
}

/// Number of multiples of `s` in `[lo, hi)`.
fn reads_in(lo: &BigUint, hi: &BigUint, s: &BigUint) -> BigUint {
    if hi <= lo {
        return BigUint::zero();
    }
    let upto = |x: &BigUint| -> BigUint {
        // multiples of s in [0, x)
        if x.is_zero() {
            BigUint::zero()
        } else {
            (x - 1u32) / s + 1u32
        }
    };
    upto(hi) - upto(lo)
}

fn digits_of(mut v: BigUint, s: usize) -> Vec<usize> {
    let sb = BigUint::from(s);
    let mut out = Vec::new();
    while !v.is_zero() {
        let (q, r) = v.div_rem(&sb);
        out.push(r.to_usize().unwrap());
        v = q;
    }
    out
}

/// Recovers the simulated configuration from a tape of the form
/// `[H_γ]^a [L_γ]^b [R_γ]^c` with `1 <= a <= s`.
///
/// The tag system reads every `s`-th symbol, so the head symbol is given by
/// the tape length modulo `s` and the two digit words by how many `L` and `R`
/// symbols the next pass reads.
pub fn decode_tag_tape(tape: &TagTape, lay: Layout) -> Result<DecodedConfig> {
    let nc = |why: &str| Error::NotCanonical(why.to_string());
    let runs = tape.runs_limited(3).ok_or_else(|| nc("more than three runs"))?;
    let first = runs.first().ok_or_else(|| nc("empty tape"))?;
    let d0 = lay.describe(first.symbol);
    if d0.kind != TagKind::H {
        return Err(nc("tape does not start with H"));
    }
    let g = d0.state;
    let s = lay.s;
    let sb = BigUint::from(s);
    let a = first.count.clone();
    if a > sb {
        return Err(nc("H run longer than s"));
    }
    let mut b = BigUint::zero();
    let mut c = BigUint::zero();
    let mut stage = 0;
    for r in &runs[1..] {
        let d = lay.describe(r.symbol);
        if d.state != g {
            return Err(nc("mixed states"));
        }
        match d.kind {
            TagKind::L if stage == 0 => {
                b = r.count.clone();
                stage = 1;
            }
            TagKind::R if stage <= 1 => {
                c = r.count.clone();
                stage = 2;
            }
            _ => return Err(nc("unexpected run")),
        }
    }
    let ab = &a + &b;
    let total = &ab + &c;
    let nl = reads_in(&a, &ab, &sb);
    let nr = reads_in(&ab, &total, &sb);
    let phase = (&sb - (&total % &sb)) % &sb;
    let head = phase.to_usize().unwrap() + 1;

    let ld = digits_of(nl, s);
    match ld.last() {
        Some(1) => {}
        _ => return Err(nc("left number lacks its end marker")),
    }
    let body = &ld[..ld.len() - 1];
    let rd = digits_of(nr, s);
    Ok(DecodedConfig {
        state: g,
        head,
        left: body.iter().map(|&x| s - x).collect(),
        right: rd.iter().map(|&x| s - x).collect(),
    })
}
