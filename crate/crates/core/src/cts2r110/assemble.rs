use super::library::{BitBlock, BlockLibrary, FamilyId};
use super::{center_block_string, compute_v, right_block_string, BlockId};
use crate::error::{Error, Result};
use crate::machines::{CtsState, CyclicTagSystem};
use crate::r110::{BitRow, Engine, Rule110State};

/// Runs of 𝔸 met walking left from ℂ, each after a 𝔹; the variable run
/// comes last.
pub const LEFT_RUNS: [usize; 3] = [12, 11, 13];

/// A block row laid down in the t = 0 row, starting at cell `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placed {
    pub block: BlockId,
    pub row: usize,
    pub x: i64,
}

#[derive(Debug, Clone)]
pub struct Assembly {
    pub state: Rule110State,
    pub v: u64,
    /// Passes through the left block sequence before the phase recurs.
    pub left_traversals: usize,
    pub right_traversals: usize,
    /// One period of each side, in tape order.
    pub left: Vec<Placed>,
    pub center: Vec<Placed>,
    pub right: Vec<Placed>,
}

impl Assembly {
    pub fn left_period(&self) -> i64 {
        self.state.left.len() as i64
    }

    pub fn right_period(&self) -> i64 {
        self.state.right.len() as i64
    }

    /// The center and `k` periods of each side.
    pub fn placed(&self, k: usize) -> Vec<Placed> {
        let mut out = Vec::new();
        for j in (1..=k as i64).rev() {
            let dx = (j - 1) * self.left_period();
            out.extend(self.left.iter().map(|p| Placed { x: p.x - dx, ..*p }));
        }
        out.extend(self.center.iter().copied());
        for j in 0..k as i64 {
            let dx = j * self.right_period();
            out.extend(self.right.iter().map(|p| Placed { x: p.x + dx, ..*p }));
        }
        out
    }
}

fn corrupt(m: String) -> Error {
    Error::CorruptLibrary(m)
}

fn enter_right(b: &BitBlock, phase: usize) -> Result<usize> {
    b.row_with_left_phase(phase)
        .ok_or_else(|| corrupt(format!("block {} has no row with left seam phase {phase}", b.id)))
}

fn enter_left(b: &BitBlock, phase: usize) -> Result<usize> {
    b.row_with_right_phase(phase)
        .ok_or_else(|| corrupt(format!("block {} has no row with right seam phase {phase}", b.id)))
}

/// Where the next block goes and which seam it must meet.
struct Cursor {
    x: i64,
    fam: FamilyId,
    phase: usize,
}

impl Cursor {
    fn right(&mut self, lib: &BlockLibrary, id: BlockId, out: &mut Vec<Placed>) -> Result<()> {
        let b = lib.block(id)?;
        if b.left != self.fam || !b.is_periodic() {
            return Err(corrupt(format!("block {id} cannot follow a {} seam", self.fam.name())));
        }
        let row = enter_right(b, self.phase)?;
        out.push(Placed { block: id, row, x: self.x });
        self.x += b.width(row) as i64;
        self.phase = b.right_phase[row];
        self.fam = b.right;
        Ok(())
    }

    fn left(&mut self, lib: &BlockLibrary, id: BlockId, out: &mut Vec<Placed>) -> Result<()> {
        let b = lib.block(id)?;
        if b.right != self.fam || !b.is_periodic() {
            return Err(corrupt(format!("block {id} cannot precede a {} seam", self.fam.name())));
        }
        let row = enter_left(b, self.phase)?;
        self.x -= b.width(row) as i64;
        out.push(Placed { block: id, row, x: self.x });
        self.phase = b.left_phase[row];
        self.fam = b.left;
        Ok(())
    }
}

/// Lays out the t = 0 row for a cyclic tag system whose appendant lengths
/// are all multiples of 6, started on its first appendant.
pub fn assemble_state(sys: &CyclicTagSystem, tape: &CtsState, lib: &BlockLibrary) -> Result<Assembly> {
    if let Some(i) = sys.appendants().iter().position(|a| a.len() % 6 != 0) {
        return Err(Error::invalid(format!(
            "appendant {i} has length {}, not a multiple of 6; normalize the system first",
            sys.appendants()[i].len()
        )));
    }
    if tape.marker != 0 {
        return Err(Error::Unsupported("the tape must start at the first appendant".into()));
    }
    let data: Vec<bool> = tape.tape.iter().copied().collect();
    assemble_with(lib, &center_block_string(&data)?, &right_block_string(sys)?, compute_v(sys))
}

/// Lays out the t = 0 row from block strings directly.
pub fn assemble_with(lib: &BlockLibrary, center_ids: &[BlockId], right_ids: &[BlockId], v: u64) -> Result<Assembly> {
    if center_ids.first() != Some(&BlockId::C) || right_ids.is_empty() {
        return Err(Error::invalid("the center must start with ℂ and the right side must be non-empty"));
    }
    let c = lib.block(BlockId::C)?;
    let t0 = c.t0_row.ok_or_else(|| corrupt("block ℂ has no t0 row".into()))?;

    let mut center = vec![Placed { block: BlockId::C, row: t0, x: 0 }];
    let mut cur = Cursor { x: c.width(t0) as i64, fam: c.right, phase: c.right_phase[t0] };
    for &id in &center_ids[1..] {
        cur.right(lib, id, &mut center)?;
    }

    let mut right = Vec::new();
    let start = cur.phase;
    let mut right_traversals = 0;
    loop {
        for &id in right_ids {
            cur.right(lib, id, &mut right)?;
        }
        right_traversals += 1;
        if cur.phase == start {
            break;
        }
        if right_traversals > lib.family(cur.fam).period {
            return Err(corrupt("the right side never returns to its starting phase".into()));
        }
    }

    let mut left_ids = Vec::new();
    for run in LEFT_RUNS {
        left_ids.push(BlockId::B);
        left_ids.extend(std::iter::repeat(BlockId::A).take(run));
    }
    left_ids.push(BlockId::B);
    let mut left = Vec::new();
    let mut cur = Cursor { x: 0, fam: c.left, phase: c.left_phase[t0] };
    let start = cur.phase;
    let mut left_traversals = 0;
    loop {
        for &id in &left_ids {
            cur.left(lib, id, &mut left)?;
        }
        for _ in 0..v {
            cur.left(lib, BlockId::A, &mut left)?;
        }
        left_traversals += 1;
        if cur.phase == start {
            break;
        }
        if left_traversals > lib.slow.period {
            return Err(corrupt("the left side never returns to its starting phase".into()));
        }
    }
    left.reverse();

    let row_of = |p: &Placed| -> &BitRow { &lib.blocks[&p.block].rows[p.row] };
    let concat = |ps: &[Placed]| {
        let mut w = BitRow::default();
        for p in ps {
            w.extend_row(row_of(p));
        }
        w
    };
    let state = Rule110State::with_phases(concat(&left), 0, concat(&center), concat(&right), 0, 0)?;
    Ok(Assembly { state, v, left_traversals, right_traversals, left, center, right })
}

/// Result of comparing an evolved assembly against its block rows.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Consistency {
    pub steps: u64,
    pub checked: u64,
    /// `(time, cell)` of the first few wrong cells.
    pub mismatches: Vec<(u64, i64)>,
    pub mismatch_count: u64,
}

impl Consistency {
    pub fn holds(&self) -> bool {
        self.mismatch_count == 0 && self.checked > 0
    }
}

/// Side cells checked beyond each end of the center.
const CHECK_SPAN: i64 = 1 << 15;

/// Evolves the assembled row and checks every block row it should pass
/// through, skipping cells closer than `margin` to a seam.
pub fn evolution_consistency(asm: &Assembly, lib: &BlockLibrary, steps: u64, margin: usize) -> Consistency {
    let reach = 4 * steps as i64 + 2 * margin as i64 + 64;
    let span = reach.max(CHECK_SPAN);
    let k = |period: i64| (span / period.max(1) + 2) as usize;
    let end = asm.state.center_end();
    let placed: Vec<Placed> = asm
        .placed(k(asm.left_period()).max(k(asm.right_period())))
        .into_iter()
        .filter(|p| p.x >= -span && p.x <= end + span)
        .collect();
    let mut state = asm.state.clone();
    let mut engine = Engine::new();
    let mut out = Consistency { steps, ..Default::default() };
    let margin = margin as i64;
    let lo = placed.first().map_or(0, |p| p.x) - reach;
    let hi = placed.last().map_or(0, |p| p.x + lib.blocks[&p.block].rows[p.row].len() as i64) + reach;
    for t in 1..=steps {
        engine.step(&mut state);
        let snapshot = state.window(lo, hi);
        for p in &placed {
            let b = &lib.blocks[&p.block];
            let lf = lib.family(b.left);
            let lp = b.left_phase[p.row] as i64;
            let row = if b.is_periodic() {
                b.row_with_left_phase(((lp + t as i64) % lf.period as i64) as usize)
            } else {
                Some(p.row + t as usize).filter(|&r| r < b.rows.len())
            };
            let Some(row) = row else { continue };
            let want = &b.rows[row];
            let x0 = p.x + lf.advance(lp, t as i64);
            let w = want.len() as i64;
            if w <= 2 * margin {
                continue;
            }
            let got = snapshot.slice((x0 + margin - lo) as usize, (w - 2 * margin) as usize);
            let want = want.slice(margin as usize, (w - 2 * margin) as usize);
            out.checked += want.len() as u64;
            if got != want {
                for i in 0..want.len() {
                    if got.get(i) != want.get(i) {
                        out.mismatch_count += 1;
                        if out.mismatches.len() < 8 {
                            out.mismatches.push((t, x0 + margin + i as i64));
                        }
                    }
                }
            }
        }
    }
    out
}
