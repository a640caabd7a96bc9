use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use super::BlockId;
use crate::error::{Error, Result};
use crate::r110::BitRow;

/// Which zig-zag a seam follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// Period 3, the seams between ossifier blocks.
    Slow,
    /// Period 30, the seams through an Ē.
    Fast,
}

impl FamilyId {
    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Slow => "slow",
            FamilyId::Fast => "fast",
        }
    }

    fn parse(s: &str) -> Option<FamilyId> {
        match s {
            "slow" => Some(FamilyId::Slow),
            "fast" => Some(FamilyId::Fast),
            _ => None,
        }
    }
}

/// A zig-zag seam: where it crosses each row of one vertical period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub period: usize,
    /// Horizontal displacement over one period.
    pub shift: i64,
    /// Seam position at each phase, relative to phase 0.
    pub cut: Vec<i64>,
}

impl Family {
    /// Seam position at an unreduced phase `n`.
    pub fn xref(&self, n: i64) -> i64 {
        let p = self.period as i64;
        self.cut[n.rem_euclid(p) as usize] + self.shift * n.div_euclid(p)
    }

    /// How far the seam moves between phase `n` and phase `n + dt`.
    pub fn advance(&self, n: i64, dt: i64) -> i64 {
        self.xref(n + dt) - self.xref(n)
    }
}

/// One block: a row per phase, each running from its left seam to its
/// right seam.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitBlock {
    pub id: BlockId,
    pub left: FamilyId,
    pub right: FamilyId,
    pub rows: Vec<BitRow>,
    /// Phase of the left seam on each row.
    pub left_phase: Vec<usize>,
    /// Phase of the right seam on each row; a block joined on the right
    /// continues with its row of that left phase.
    pub right_phase: Vec<usize>,
    /// Only ℂ has one. Its rows are consecutive times, not a cycle.
    pub t0_row: Option<usize>,
}

impl BitBlock {
    pub fn is_periodic(&self) -> bool {
        self.t0_row.is_none()
    }

    pub fn width(&self, row: usize) -> usize {
        self.rows[row].len()
    }

    /// The row whose left seam has phase `phase`.
    pub fn row_with_left_phase(&self, phase: usize) -> Option<usize> {
        self.left_phase.iter().position(|&p| p == phase)
    }

    pub fn row_with_right_phase(&self, phase: usize) -> Option<usize> {
        self.right_phase.iter().position(|&p| p == phase)
    }

    /// The row one time step after `row`, with the shift of its left edge.
    pub fn successor(&self, row: usize, fams: &BlockLibrary) -> Option<(usize, i64)> {
        let lf = fams.family(self.left);
        let dx = lf.advance(self.left_phase[row] as i64, 1);
        if self.is_periodic() {
            let next = (self.left_phase[row] + 1) % lf.period;
            self.row_with_left_phase(next).map(|r| (r, dx))
        } else if row + 1 < self.rows.len() {
            Some((row + 1, dx))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLibrary {
    pub slow: Family,
    pub fast: Family,
    pub blocks: BTreeMap<BlockId, BitBlock>,
}

const HEADER: &str = "forge-blocks 1";

impl BlockLibrary {
    pub fn family(&self, f: FamilyId) -> &Family {
        match f {
            FamilyId::Slow => &self.slow,
            FamilyId::Fast => &self.fast,
        }
    }

    pub fn block(&self, id: BlockId) -> Result<&BitBlock> {
        self.blocks.get(&id).ok_or_else(|| Error::CorruptLibrary(format!("block {id} is missing")))
    }

    fn body(&self) -> String {
        let mut s = String::new();
        for (id, f) in [(FamilyId::Slow, &self.slow), (FamilyId::Fast, &self.fast)] {
            let cut: Vec<String> = f.cut.iter().map(|c| c.to_string()).collect();
            s += &format!("family {} period {} shift {} cut {}\n", id.name(), f.period, f.shift, cut.join(" "));
        }
        for b in self.blocks.values() {
            s += &format!("block {} {} {}", b.id.letter(), b.left.name(), b.right.name());
            if let Some(t) = b.t0_row {
                s += &format!(" t0 {t}");
            }
            s.push('\n');
            for (r, row) in b.rows.iter().enumerate() {
                s += &format!("{} {} {}\n", b.left_phase[r], b.right_phase[r], row.to_string01());
            }
        }
        s
    }

    /// The library file: header, checksum of everything after it, body.
    pub fn write(&self) -> String {
        let body = self.body();
        format!("{HEADER}\nsha256 {}\n{body}", hex::encode(Sha256::digest(body.as_bytes())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.splitn(3, '\n');
        if parts.next().map(str::trim_end) != Some(HEADER) {
            return Err(Error::parse(1, format!("expected header {HEADER:?}")));
        }
        let sum = parts
            .next()
            .and_then(|l| l.trim_end().strip_prefix("sha256 "))
            .ok_or_else(|| Error::parse(2, "expected a sha256 line"))?;
        let body = parts.next().unwrap_or("");
        if hex::encode(Sha256::digest(body.as_bytes())) != sum.trim() {
            return Err(Error::CorruptLibrary("checksum mismatch".into()));
        }
        let mut slow = None;
        let mut fast = None;
        let mut blocks: BTreeMap<BlockId, BitBlock> = BTreeMap::new();
        let mut current: Option<BitBlock> = None;
        for (i, line) in body.lines().enumerate() {
            let ln = i + 3;
            let w: Vec<&str> = line.split_whitespace().collect();
            match w.first().copied() {
                None => continue,
                Some("family") => {
                    if w.len() < 8 || w[2] != "period" || w[4] != "shift" || w[6] != "cut" {
                        return Err(Error::parse(ln, "malformed family line"));
                    }
                    let num = |s: &str| s.parse::<i64>().map_err(|_| Error::parse(ln, format!("bad number {s:?}")));
                    let period = num(w[3])? as usize;
                    let f = Family { period, shift: num(w[5])?, cut: w[7..].iter().map(|s| num(s)).collect::<Result<_>>()? };
                    if f.cut.len() != period || period == 0 {
                        return Err(Error::parse(ln, "cut table length must equal the period"));
                    }
                    match FamilyId::parse(w[1]) {
                        Some(FamilyId::Slow) => slow = Some(f),
                        Some(FamilyId::Fast) => fast = Some(f),
                        None => return Err(Error::parse(ln, format!("unknown family {:?}", w[1]))),
                    }
                }
                Some("block") => {
                    if let Some(b) = current.take() {
                        blocks.insert(b.id, b);
                    }
                    let bad = || Error::parse(ln, "malformed block line");
                    if w.len() != 4 && w.len() != 6 {
                        return Err(bad());
                    }
                    let id: BlockId = w[1].parse().map_err(|_| bad())?;
                    let left = FamilyId::parse(w[2]).ok_or_else(bad)?;
                    let right = FamilyId::parse(w[3]).ok_or_else(bad)?;
                    let t0_row = if w.len() == 6 {
                        if w[4] != "t0" {
                            return Err(bad());
                        }
                        Some(w[5].parse().map_err(|_| bad())?)
                    } else {
                        None
                    };
                    if blocks.contains_key(&id) {
                        return Err(Error::parse(ln, format!("block {id} appears twice")));
                    }
                    current = Some(BitBlock {
                        id,
                        left,
                        right,
                        rows: vec![],
                        left_phase: vec![],
                        right_phase: vec![],
                        t0_row,
                    });
                }
                Some(_) => {
                    let b = current.as_mut().ok_or_else(|| Error::parse(ln, "row outside a block"))?;
                    if w.len() != 3 {
                        return Err(Error::parse(ln, "a row is: left phase, right phase, bits"));
                    }
                    let p = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad phase {s:?}")));
                    b.left_phase.push(p(w[0])?);
                    b.right_phase.push(p(w[1])?);
                    b.rows.push(BitRow::parse(w[2]).ok_or_else(|| Error::parse(ln, "row bits must be 0 or 1"))?);
                }
            }
        }
        if let Some(b) = current.take() {
            blocks.insert(b.id, b);
        }
        let slow = slow.ok_or_else(|| Error::CorruptLibrary("no slow family".into()))?;
        let fast = fast.ok_or_else(|| Error::CorruptLibrary("no fast family".into()))?;
        Ok(BlockLibrary { slow, fast, blocks })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IssueKind {
    Missing,
    Periodicity,
    SeamPhase,
    Width,
    Interior,
    Join,
}

/// One failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub block: BlockId,
    pub row: usize,
    pub kind: IssueKind,
    pub detail: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "block {} row {}: {:?}: {}", self.block, self.row, self.kind, self.detail)
    }
}

use BlockId::*;

/// Every adjacent pair the block grammar can produce, left block first.
pub const GRAMMAR_PAIRS: &[(BlockId, BlockId)] = &[
    (A, A),
    (A, B),
    (B, A),
    (B, C),
    (C, E),
    (C, F),
    (E, D),
    (F, D),
    (D, E),
    (D, F),
    (E, G),
    (F, G),
    (G, H),
    (H, I),
    (H, J),
    (I, I),
    (I, J),
    (J, I),
    (I, K),
    (J, K),
    (I, L),
    (J, L),
    (L, L),
    (L, K),
    (K, H),
];

fn expected_family(id: BlockId) -> (FamilyId, FamilyId) {
    match id {
        A | B => (FamilyId::Slow, FamilyId::Slow),
        C => (FamilyId::Slow, FamilyId::Fast),
        _ => (FamilyId::Fast, FamilyId::Fast),
    }
}

/// Compares `got` with `want` placed at offset `dx`, on the cells both cover.
fn first_mismatch(got: &BitRow, got_x0: i64, want: &BitRow, want_x0: i64) -> Option<i64> {
    let lo = got_x0.max(want_x0);
    let hi = (got_x0 + got.len() as i64).min(want_x0 + want.len() as i64);
    (lo..hi).find(|&x| got.get((x - got_x0) as usize) != want.get((x - want_x0) as usize))
}

fn check_block(lib: &BlockLibrary, b: &BitBlock, out: &mut Vec<Issue>) -> bool {
    let issue = |row: usize, kind, detail: String| Issue { block: b.id, row, kind, detail };
    let start = out.len();
    if (b.left, b.right) != expected_family(b.id) {
        out.push(issue(0, IssueKind::SeamPhase, "block sits between the wrong seam families".into()));
        return false;
    }
    let (lf, rf) = (lib.family(b.left), lib.family(b.right));
    let n = b.rows.len();
    if b.left_phase.len() != n || b.right_phase.len() != n {
        out.push(issue(0, IssueKind::SeamPhase, "phase tables do not match the row count".into()));
        return false;
    }
    match b.t0_row {
        None if n != lf.period => out.push(issue(
            n.min(lf.period).saturating_sub(1),
            IssueKind::Periodicity,
            format!("{n} rows where the vertical period is {}", lf.period),
        )),
        Some(t0) if n != rf.period || t0 >= n => out.push(issue(
            t0.min(n.saturating_sub(1)),
            IssueKind::Periodicity,
            format!("{n} rows with t0 {t0}; expected {} rows", rf.period),
        )),
        _ => {}
    }
    if out.len() > start {
        return false;
    }
    for r in 0..n {
        if b.left_phase[r] >= lf.period || b.right_phase[r] >= rf.period {
            out.push(issue(r, IssueKind::SeamPhase, "phase out of range".into()));
        }
    }
    if out.len() > start {
        return false;
    }
    let mut seen = vec![false; lf.period];
    for r in 0..n {
        let Some((next, _)) = b.successor(r, lib) else { continue };
        if b.is_periodic() && std::mem::replace(&mut seen[b.left_phase[r]], true) {
            out.push(issue(r, IssueKind::SeamPhase, "left phase repeats".into()));
        }
        let want_l = (b.left_phase[r] + 1) % lf.period;
        let want_r = (b.right_phase[r] + 1) % rf.period;
        if b.left_phase[next] != want_l || b.right_phase[next] != want_r {
            out.push(issue(r, IssueKind::SeamPhase, format!("row {next} does not follow row {r} on both seams")));
            continue;
        }
        let dl = lf.advance(b.left_phase[r] as i64, 1);
        let dr = rf.advance(b.right_phase[r] as i64, 1);
        if b.width(next) as i64 - b.width(r) as i64 != dr - dl {
            out.push(issue(
                r,
                IssueKind::Width,
                format!("width {} then {}, but the seams move {dl} and {dr}", b.width(r), b.width(next)),
            ));
        }
    }
    out.len() == start
}

fn check_interior(lib: &BlockLibrary, b: &BitBlock, out: &mut Vec<Issue>) {
    for r in 0..b.rows.len() {
        let Some((next, dx)) = b.successor(r, lib) else { continue };
        if b.width(r) < 3 {
            continue;
        }
        let stepped = b.rows[r].step_interior();
        if let Some(x) = first_mismatch(&stepped, 1, &b.rows[next], dx) {
            out.push(Issue {
                block: b.id,
                row: r,
                kind: IssueKind::Interior,
                detail: format!("cell {x} of row {next} is not the successor of row {r}"),
            });
        }
    }
}

fn check_join(lib: &BlockLibrary, x: &BitBlock, y: &BitBlock, out: &mut Vec<Issue>) {
    if x.right != y.left {
        out.push(Issue {
            block: x.id,
            row: 0,
            kind: IssueKind::Join,
            detail: format!("cannot join {} to {}: seam families differ", x.id, y.id),
        });
        return;
    }
    let f = lib.family(x.right);
    for rx in 0..x.rows.len() {
        let rys: Vec<usize> = (0..y.rows.len()).filter(|&ry| y.left_phase[ry] == x.right_phase[rx]).collect();
        if rys.is_empty() && y.is_periodic() {
            out.push(Issue {
                block: x.id,
                row: rx,
                kind: IssueKind::Join,
                detail: format!("{} has no row with left phase {}", y.id, x.right_phase[rx]),
            });
        }
        for ry in rys {
            let (Some((nx, dx)), Some((ny, _))) = (x.successor(rx, lib), y.successor(ry, lib)) else { continue };
            let seam = x.width(rx) as i64;
            let seam_next = seam + f.advance(x.right_phase[rx] as i64, 1);
            let mut now = x.rows[rx].clone();
            now.extend_row(&y.rows[ry]);
            let stepped = now.step_interior();
            let bad = first_mismatch(&stepped, 1, &x.rows[nx], dx)
                .or_else(|| first_mismatch(&stepped, 1, &y.rows[ny], seam_next));
            if let Some(c) = bad {
                out.push(Issue {
                    block: x.id,
                    row: rx,
                    kind: IssueKind::Join,
                    detail: format!("joined to {} row {ry}, cell {c} of the next row is wrong", y.id),
                });
            }
        }
    }
}

/// Checks periods, seam tables, interior evolution and every grammar join.
/// An empty report means the library is usable.
pub fn validate_block_library(lib: &BlockLibrary) -> Vec<Issue> {
    let mut out = Vec::new();
    for fam in [&lib.slow, &lib.fast] {
        if fam.cut.first() != Some(&0) {
            out.push(Issue { block: A, row: 0, kind: IssueKind::SeamPhase, detail: "a cut table must start at 0".into() });
            return out;
        }
    }
    let mut sound = BTreeMap::new();
    for id in BlockId::ALL {
        match lib.blocks.get(&id) {
            None => out.push(Issue { block: id, row: 0, kind: IssueKind::Missing, detail: "block is missing".into() }),
            Some(b) => {
                let ok = check_block(lib, b, &mut out);
                if ok {
                    check_interior(lib, b, &mut out);
                }
                sound.insert(id, ok);
            }
        }
    }
    for &(x, y) in GRAMMAR_PAIRS {
        if sound.get(&x) == Some(&true) && sound.get(&y) == Some(&true) {
            check_join(lib, &lib.blocks[&x], &lib.blocks[&y], &mut out);
        }
    }
    out
}
