//! From a cyclic tag system to a Rule 110 initial state, by laying out bit
//! blocks 𝔸 … 𝕃 and following the zig-zag seam phase across each join.

mod assemble;
mod derive;
mod library;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::machines::CyclicTagSystem;

pub use assemble::{assemble_state, assemble_with, evolution_consistency, Assembly, Consistency, Placed, LEFT_RUNS};
pub use derive::{derive_library, glider_spacetime, GliderSeed, GliderSpacetime, E_BAR, GLIDER_A};
pub use library::{
    validate_block_library, BitBlock, BlockLibrary, Family, FamilyId, Issue, IssueKind, GRAMMAR_PAIRS,
};

/// The block library shipped with the crate.
pub const BUNDLED_LIBRARY: &str = include_str!("../../assets/blocks.txt");

/// Parses [`BUNDLED_LIBRARY`].
pub fn bundled_library() -> BlockLibrary {
    BlockLibrary::parse(BUNDLED_LIBRARY).expect("bundled block library is well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockId {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
    L,
}

impl BlockId {
    pub const ALL: [BlockId; 12] = [
        BlockId::A,
        BlockId::B,
        BlockId::C,
        BlockId::D,
        BlockId::E,
        BlockId::F,
        BlockId::G,
        BlockId::H,
        BlockId::I,
        BlockId::J,
        BlockId::K,
        BlockId::L,
    ];

    pub fn letter(self) -> char {
        (b'A' + self as u8) as char
    }

    /// The double-struck capital.
    pub fn symbol(self) -> char {
        match self {
            BlockId::C => 'ℂ',
            BlockId::H => 'ℍ',
            b => char::from_u32(0x1D538 + b as u32).expect("double-struck capital"),
        }
    }

    pub fn from_char(c: char) -> Option<BlockId> {
        BlockId::ALL.into_iter().find(|b| b.letter() == c || b.symbol() == c)
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for BlockId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cs = s.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => BlockId::from_char(c).ok_or_else(|| Error::invalid(format!("no block named {s:?}"))),
            _ => Err(Error::invalid(format!("no block named {s:?}"))),
        }
    }
}

/// Renders block ids with their double-struck names.
pub fn block_string(ids: &[BlockId]) -> String {
    ids.iter().map(|b| b.symbol()).collect()
}

/// Parses a word of block names, plain or double-struck.
pub fn parse_block_string(s: &str) -> Result<Vec<BlockId>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| BlockId::from_char(c).ok_or_else(|| Error::invalid(format!("no block named {c:?}"))))
        .collect()
}

/// ℂ, then 𝔼𝔻 per N and 𝔽𝔻 per Y, with the final 𝔻 turned into 𝔾.
pub fn center_block_string(tape: &[bool]) -> Result<Vec<BlockId>> {
    if tape.is_empty() {
        return Err(Error::invalid("the central tape must hold at least one symbol"));
    }
    let mut out = vec![BlockId::C];
    for &y in tape {
        out.push(if y { BlockId::F } else { BlockId::E });
        out.push(BlockId::D);
    }
    *out.last_mut().expect("non-empty") = BlockId::G;
    Ok(out)
}

/// One spatial period of the appendant side: 𝕀𝕀 per Y and 𝕀𝕁 per N, the
/// first 𝕀 of each appendant replaced by 𝕂ℍ, 𝕃 for an empty appendant, and
/// the leading 𝕂 moved to the end.
pub fn right_block_string(sys: &CyclicTagSystem) -> Result<Vec<BlockId>> {
    if sys.appendants()[0].is_empty() {
        return Err(Error::Unsupported(
            "the first appendant is empty, which needs a prepared short leader".into(),
        ));
    }
    let mut out = Vec::new();
    for app in sys.appendants() {
        if app.is_empty() {
            out.push(BlockId::L);
            continue;
        }
        for (k, &y) in app.iter().enumerate() {
            if k == 0 {
                out.extend([BlockId::K, BlockId::H]);
            } else {
                out.push(BlockId::I);
            }
            out.push(if y { BlockId::I } else { BlockId::J });
        }
    }
    let k = out.remove(0);
    out.push(k);
    Ok(out)
}

/// The number of 𝔸 blocks in the variable run on the left.
pub fn compute_v(sys: &CyclicTagSystem) -> u64 {
    let mut v = 0u64;
    for app in sys.appendants() {
        if app.is_empty() {
            v += 43;
        } else {
            let ys = app.iter().filter(|&&b| b).count() as u64;
            v += 76 * ys + 80 * (app.len() as u64 - ys) + 60;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for b in BlockId::ALL {
            assert_eq!(BlockId::from_char(b.symbol()), Some(b));
            assert_eq!(b.to_string().parse::<BlockId>().unwrap(), b);
        }
        assert_eq!(block_string(&BlockId::ALL), "𝔸𝔹ℂ𝔻𝔼𝔽𝔾ℍ𝕀𝕁𝕂𝕃");
    }

    #[test]
    fn single_symbol_tapes() {
        assert_eq!(block_string(&center_block_string(&[true]).unwrap()), "ℂ𝔽𝔾");
        assert_eq!(block_string(&center_block_string(&[false]).unwrap()), "ℂ𝔼𝔾");
        assert!(center_block_string(&[]).is_err());
    }
}
