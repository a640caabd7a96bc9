use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::r110::{BitRow, Engine, Rule110State};

/// Rows of a space-time diagram between two columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTimeWindow {
    /// Absolute position of the leftmost column.
    pub origin: i64,
    pub width: usize,
    pub rows: Vec<BitRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Plain portable bitmap.
    P1,
    /// Raw portable bitmap.
    P4,
    Ascii,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1" | "pbm" => Ok(Format::P1),
            "p4" => Ok(Format::P4),
            "ascii" | "txt" => Ok(Format::Ascii),
            _ => Err(Error::Unsupported(format!("render format {s:?}"))),
        }
    }
}

/// Records cells `x0 .. x1` of the current row and the next `steps` rows.
pub fn capture(state: &mut Rule110State, engine: &mut Engine, steps: u64, x0: i64, x1: i64) -> SpaceTimeWindow {
    let mut rows = vec![state.window(x0, x1)];
    for _ in 0..steps {
        engine.step(state);
        rows.push(state.window(x0, x1));
    }
    SpaceTimeWindow { origin: x0, width: (x1 - x0).max(0) as usize, rows }
}

/// Pixel `(x, y)` is cell `x` of row `y`; a live cell is black.
pub fn render(w: &SpaceTimeWindow, format: Format) -> Vec<u8> {
    match format {
        Format::P1 => {
            let mut s = format!("P1\n{} {}\n", w.width, w.rows.len());
            for r in &w.rows {
                let line: Vec<&str> = r.iter().map(|b| if b { "1" } else { "0" }).collect();
                let _ = writeln!(s, "{}", line.join(" "));
            }
            s.into_bytes()
        }
        Format::P4 => {
            let mut out = format!("P4\n{} {}\n", w.width, w.rows.len()).into_bytes();
            for r in &w.rows {
                for chunk in (0..w.width).collect::<Vec<_>>().chunks(8) {
                    let mut byte = 0u8;
                    for (k, &x) in chunk.iter().enumerate() {
                        if r.get(x) {
                            byte |= 0x80 >> k;
                        }
                    }
                    out.push(byte);
                }
            }
            out
        }
        Format::Ascii => {
            let mut s = String::new();
            for r in &w.rows {
                s.extend(r.iter().map(|b| if b { '#' } else { '.' }));
                s.push('\n');
            }
            s.into_bytes()
        }
    }
}

/// Reads a plain bitmap back into rows.
pub fn parse_p1(data: &[u8]) -> Result<Vec<BitRow>> {
    let text = std::str::from_utf8(data).map_err(|e| Error::invalid(e.to_string()))?;
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
        .peekable();
    if tokens.next() != Some("P1") {
        return Err(Error::invalid("not a plain bitmap"));
    }
    let mut num = || -> Result<usize> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::invalid("bad bitmap header"))
    };
    let (w, h) = (num()?, num()?);
    let digits: String = tokens.collect::<Vec<_>>().concat();
    if digits.len() != w * h {
        return Err(Error::invalid("bitmap size does not match header"));
    }
    let rows = (0..h)
        .map(|y| BitRow::parse(&digits[y * w..(y + 1) * w]).ok_or_else(|| Error::invalid("bitmap digits must be 0 or 1")))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_pixel() {
        let w = SpaceTimeWindow { origin: 0, width: 1, rows: vec![BitRow::parse("1").unwrap()] };
        assert_eq!(render(&w, Format::P1), b"P1\n1 1\n1\n");
        assert_eq!(render(&w, Format::P4), b"P4\n1 1\n\x80");
    }

    #[test]
    fn p1_round_trip() {
        let ether = BitRow::parse(crate::r110::ETHER).unwrap();
        let mut s = Rule110State::periodic(ether).unwrap();
        let w = capture(&mut s, &mut Engine::new(), 20, -10, 33);
        assert_eq!(parse_p1(&render(&w, Format::P1)).unwrap(), w.rows);
    }
}
