use std::collections::BTreeMap;

use super::library::{BitBlock, BlockLibrary, Family, FamilyId};
use super::BlockId;
use crate::error::{Error, Result};
use crate::r110::{BitRow, ETHER};

/// A glider given by its defect bits and the ether on either side: cell
/// `y < 0` is `ETHER[(y + left_align) mod 14]` and cell `y >= core.len()`
/// is `ETHER[(y + right_align) mod 14]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GliderSeed {
    pub name: &'static str,
    pub core: &'static str,
    pub left_align: u8,
    pub right_align: u8,
    pub period: usize,
    /// Displacement per period.
    pub shift: i64,
}

pub const E_BAR: GliderSeed =
    GliderSeed { name: "Ē", core: "11111011", left_align: 7, right_align: 0, period: 30, shift: -8 };

pub const GLIDER_A: GliderSeed =
    GliderSeed { name: "A", core: "110100110111", left_align: 9, right_align: 9, period: 3, shift: 2 };

fn ether_bit(y: i64, t: i64, align: i64) -> bool {
    ETHER.as_bytes()[(y + 4 * t + align).rem_euclid(14) as usize] == b'1'
}

/// One period of a glider's evolution, with the defect cut out at each time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GliderSpacetime {
    pub seed: GliderSeed,
    /// First and last cell that differ from the surrounding ether.
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    /// Cells `lo[t] ..= hi[t]`.
    pub cells: Vec<BitRow>,
    /// Middle of the defect relative to time 0.
    pub xref: Vec<i64>,
}

impl GliderSpacetime {
    pub fn period(&self) -> usize {
        self.seed.period
    }

    fn reduce(&self, t: i64) -> (usize, i64) {
        let p = self.period() as i64;
        (t.rem_euclid(p) as usize, self.seed.shift * t.div_euclid(p))
    }

    pub fn reference(&self, t: i64) -> i64 {
        let (tau, dx) = self.reduce(t);
        self.xref[tau] + dx
    }

    pub fn defect(&self, t: i64) -> (i64, i64) {
        let (tau, dx) = self.reduce(t);
        (self.lo[tau] + dx, self.hi[tau] + dx)
    }

    /// Cell `y` at time `t` of the isolated glider.
    pub fn cell(&self, t: i64, y: i64) -> bool {
        let (tau, dx) = self.reduce(t);
        let y0 = y - dx;
        if y0 < self.lo[tau] {
            ether_bit(y, t, self.seed.left_align as i64)
        } else if y0 > self.hi[tau] {
            ether_bit(y, t, self.seed.right_align as i64)
        } else {
            self.cells[tau].get((y0 - self.lo[tau]) as usize)
        }
    }
}

/// Evolves a seed for one period and checks that it comes back shifted.
pub fn glider_spacetime(seed: GliderSeed) -> Result<GliderSpacetime> {
    let p = seed.period as i64;
    let bad = |m: String| Error::Construction(format!("glider {}: {m}", seed.name));
    if (seed.shift + 4 * p).rem_euclid(14) != 0 {
        return Err(bad("displacement is not a vector of the ether lattice".into()));
    }
    let core = BitRow::parse(seed.core).ok_or_else(|| bad("core must be 0/1".into()))?;
    let n = core.len() as i64;
    let m = 3 * p + 60;
    let (al, ar) = (seed.left_align as i64, seed.right_align as i64);
    let mut row = BitRow::from_bits((-m..n + m).map(|y| {
        if y < 0 {
            ether_bit(y, 0, al)
        } else if y >= n {
            ether_bit(y, 0, ar)
        } else {
            core.get(y as usize)
        }
    }));
    let (mut lo, mut hi, mut cells) = (vec![], vec![], vec![]);
    for t in 0..=p {
        let x0 = -m + t;
        let at = |y: i64| row.get((y - x0) as usize);
        let x1 = x0 + row.len() as i64;
        let l = (x0..x1).find(|&y| at(y) != ether_bit(y, t, al)).ok_or_else(|| bad("the defect vanished".into()))?;
        let h = (x0..x1).rev().find(|&y| at(y) != ether_bit(y, t, ar)).expect("a left mismatch exists");
        if l - x0 < 28 || x1 - h < 28 || h < l {
            return Err(bad(format!("the defect escaped the window at time {t}")));
        }
        lo.push(l);
        hi.push(h);
        cells.push(row.slice((l - x0) as usize, (h - l + 1) as usize));
        row = row.step_interior();
    }
    let (lp, hp, cp) = (lo.pop().expect("p+1 rows"), hi.pop().expect("p+1 rows"), cells.pop().expect("p+1 rows"));
    if lp != lo[0] + seed.shift || hp != hi[0] + seed.shift || cp != cells[0] {
        return Err(bad(format!("does not repeat after {p} steps with shift {}", seed.shift)));
    }
    let mid = |t: usize| (lo[t] + hi[t]).div_euclid(2);
    let xref = (0..seed.period).map(|t| mid(t) - mid(0)).collect();
    Ok(GliderSpacetime { seed, lo, hi, cells, xref })
}

/// Ether with a slow seam running through it.
fn slow_family() -> Family {
    Family { period: 3, shift: 2, cut: vec![0, 1, 1] }
}

#[derive(Clone, Copy)]
enum Kind<'a> {
    /// Pure ether on a slow seam.
    Seam(&'a Family),
    Glider(&'a GliderSpacetime),
}

/// A placed copy: at time `t` it looks like its canonical form at time
/// `phase + t`, moved right by `offset`.
#[derive(Clone, Copy)]
struct Instance<'a> {
    kind: Kind<'a>,
    offset: i64,
    phase: i64,
}

impl Instance<'_> {
    fn reference(&self, t: i64) -> i64 {
        self.offset
            + match self.kind {
                Kind::Seam(f) => f.xref(self.phase + t),
                Kind::Glider(g) => g.reference(self.phase + t),
            }
    }

    fn defect(&self, t: i64) -> Option<(i64, i64)> {
        match self.kind {
            Kind::Seam(_) => None,
            Kind::Glider(g) => {
                let (l, h) = g.defect(self.phase + t);
                Some((l + self.offset, h + self.offset))
            }
        }
    }

    fn cell(&self, t: i64, y: i64) -> bool {
        match self.kind {
            Kind::Seam(_) => ether_bit(y - self.offset, self.phase + t, 0),
            Kind::Glider(g) => g.cell(self.phase + t, y - self.offset),
        }
    }

    /// Ether alignment on each side at time 0.
    fn aligns(&self) -> (i64, i64) {
        let base = 4 * self.phase - self.offset;
        let (l, r) = match self.kind {
            Kind::Seam(_) => (0, 0),
            Kind::Glider(g) => (g.seed.left_align as i64, g.seed.right_align as i64),
        };
        ((base + l).rem_euclid(14), (base + r).rem_euclid(14))
    }
}

/// Whether `b` sits clear of `a` for `times`, with ether around the midpoint.
fn separated(a: &Instance, b: &Instance, times: i64) -> bool {
    (0..times).all(|t| {
        let mid = (a.reference(t) + b.reference(t)).div_euclid(2);
        a.reference(t) < b.reference(t)
            && a.defect(t).map_or(true, |(_, h)| mid - h >= 3)
            && b.defect(t).map_or(true, |(l, _)| l - mid >= 3)
    })
}

/// Places the next instance at least `gap` right of `prev`, on the same ether.
fn place_after<'a>(prev: &Instance<'a>, kind: Kind<'a>, dphase: i64, gap: i64, times: i64) -> Instance<'a> {
    let phase = prev.phase + dphase;
    let probe = Instance { kind, offset: 0, phase };
    let base = prev.reference(0) + gap - probe.reference(0);
    (base..)
        .map(|offset| Instance { kind, offset, phase })
        .find(|inst| inst.aligns().0 == prev.aligns().1 && separated(prev, inst, times))
        .expect("some offset in every residue class is clear")
}

/// Renders `rows` rows of the strip between the first and last instance.
fn render(insts: &[Instance], rows: usize) -> Vec<BitRow> {
    (0..rows as i64)
        .map(|t| {
            let bounds: Vec<i64> =
                insts.windows(2).map(|w| (w[0].reference(t) + w[1].reference(t)).div_euclid(2)).collect();
            let (x0, x1) = (insts[0].reference(t), insts[insts.len() - 1].reference(t));
            let mut owner = 0;
            BitRow::from_bits((x0..x1).map(|y| {
                while owner < bounds.len() && y >= bounds[owner] {
                    owner += 1;
                }
                insts[owner].cell(t, y)
            }))
        })
        .collect()
}

/// Gap to the next Ē and the phase step to it, for each block of the
/// fast family. The last entry places the right seam.
const FAST_LAYOUT: &[(BlockId, &[(i64, i64)])] = &[
    (BlockId::D, &[(30, 11)]),
    (BlockId::E, &[(26, 3), (26, 17)]),
    (BlockId::F, &[(26, 9), (26, 9), (26, 1)]),
    (BlockId::G, &[(26, 5), (26, 5), (26, 5), (34, 0)]),
    (BlockId::H, &[(26, 2), (26, 2), (26, 2), (26, 2), (40, 19)]),
    (BlockId::I, &[(26, 7), (26, 13)]),
    (BlockId::J, &[(44, 7), (26, 13)]),
    (BlockId::K, &[(26, 4), (26, 4), (40, 23)]),
    (BlockId::L, &[(26, 6), (40, 29)]),
];

/// Phase step of the right seam of 𝔹. Any value not divisible by 3 makes
/// the left word repeat after three passes through its block sequence.
const B_PHASE: i64 = 1;
const C_WIDTH: i64 = 64;

fn periodic_block(id: BlockId, fam: FamilyId, insts: &[Instance], period: usize) -> BitBlock {
    let last = insts[insts.len() - 1].phase;
    BitBlock {
        id,
        left: fam,
        right: fam,
        rows: render(insts, period),
        left_phase: (0..period).collect(),
        right_phase: (0..period).map(|r| (last + r as i64).rem_euclid(period as i64) as usize).collect(),
        t0_row: None,
    }
}

/// Builds blocks 𝔸 … 𝕃 from the Ē and A gliders.
///
/// The blocks follow the grammar's shape: ether for 𝔸, an A⁴ for 𝔹, a
/// widening wedge of ether for ℂ, and clusters of parallel Ē's for the
/// rest. Every row is composed from isolated glider evolutions, so each
/// block and each join evolves exactly as its neighbours predict.
pub fn derive_library() -> Result<BlockLibrary> {
    let ebar = glider_spacetime(E_BAR)?;
    let a = glider_spacetime(GLIDER_A)?;
    let slow = slow_family();
    let fast = Family { period: ebar.period(), shift: ebar.seed.shift, cut: ebar.xref.clone() };
    let mut blocks = BTreeMap::new();

    let seam0 = Instance { kind: Kind::Seam(&slow), offset: 0, phase: 0 };
    let ether_end = place_after(&seam0, Kind::Seam(&slow), 0, 14, 3);
    blocks.insert(BlockId::A, periodic_block(BlockId::A, FamilyId::Slow, &[seam0, ether_end], 3));

    let mut insts = vec![seam0];
    for _ in 0..4 {
        let prev = insts[insts.len() - 1];
        insts.push(place_after(&prev, Kind::Glider(&a), 0, 1, 3));
    }
    let prev = insts[insts.len() - 1];
    insts.push(place_after(&prev, Kind::Seam(&slow), B_PHASE, 1, 3));
    blocks.insert(BlockId::B, periodic_block(BlockId::B, FamilyId::Slow, &insts, 3));

    let edge = place_after(&seam0, Kind::Glider(&ebar), 0, C_WIDTH, 30);
    let c = [seam0, edge];
    blocks.insert(
        BlockId::C,
        BitBlock {
            id: BlockId::C,
            left: FamilyId::Slow,
            right: FamilyId::Fast,
            rows: render(&c, 30),
            left_phase: (0..30).map(|r| r % 3).collect(),
            right_phase: (0..30).map(|r| (edge.phase as usize + r) % 30).collect(),
            t0_row: Some(0),
        },
    );

    for &(id, steps) in FAST_LAYOUT {
        let mut insts = vec![Instance { kind: Kind::Glider(&ebar), offset: 0, phase: 0 }];
        for &(gap, dphase) in steps {
            let prev = insts[insts.len() - 1];
            insts.push(place_after(&prev, Kind::Glider(&ebar), dphase, gap, 30));
        }
        blocks.insert(id, periodic_block(id, FamilyId::Fast, &insts, 30));
    }
    Ok(BlockLibrary { slow, fast, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_gliders() {
        let e = glider_spacetime(E_BAR).unwrap();
        assert_eq!(e.reference(30), e.reference(0) - 8);
        let a = glider_spacetime(GLIDER_A).unwrap();
        assert_eq!(a.reference(3), a.reference(0) + 2);
    }

    #[test]
    fn a_wrong_period_is_rejected() {
        let fake = GliderSeed { period: 15, shift: -4, ..E_BAR };
        assert!(glider_spacetime(fake).is_err());
    }
}
