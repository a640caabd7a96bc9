use std::fmt;

/// A row of cells packed 64 to a word; bit `i % 64` of word `i / 64` is
/// cell `i`, so the least significant bit is the leftmost cell.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; words_for(len)], len }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut r = BitRow::default();
        for b in bits {
            r.push(b);
        }
        r
    }

    /// Parses a string of `0` and `1`; other characters are rejected.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(BitRow::from_bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    pub fn push(&mut self, b: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, b);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    /// 64 cells starting at `start`; cells past the end read as 0.
    #[inline]
    pub fn word_at(&self, start: usize) -> u64 {
        let (w, o) = (start >> 6, start & 63);
        let lo = self.words.get(w).copied().unwrap_or(0);
        let v = if o == 0 {
            lo
        } else {
            let hi = self.words.get(w + 1).copied().unwrap_or(0);
            (lo >> o) | (hi << (64 - o))
        };
        let rem = self.len.saturating_sub(start);
        if rem >= 64 {
            v
        } else {
            v & ((1u64 << rem) - 1)
        }
    }

    /// Cells `start .. start + n`.
    pub fn slice(&self, start: usize, n: usize) -> BitRow {
        assert!(start + n <= self.len, "slice out of range");
        let mut words = Vec::with_capacity(words_for(n));
        let mut k = 0;
        while k < n {
            words.push(self.word_at(start + k));
            k += 64;
        }
        let mut r = BitRow { words, len: n };
        r.clear_tail();
        r
    }

    /// Appends all cells of `other`.
    pub fn extend_row(&mut self, other: &BitRow) {
        if self.len % 64 == 0 {
            self.words.truncate(words_for(self.len));
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
            self.words.truncate(words_for(self.len));
            return;
        }
        let o = self.len % 64;
        for (k, &w) in other.words.iter().enumerate() {
            let last = self.words.len() - 1;
            self.words[last] |= w << o;
            if k * 64 + (64 - o) < other.len {
                self.words.push(w >> (64 - o));
            }
        }
        self.len += other.len;
        self.words.truncate(words_for(self.len));
        self.clear_tail();
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Rotates left by `k`: cell `i` of the result is cell `(i + k) mod len`.
    pub fn rotate_left(&self, k: usize) -> BitRow {
        if self.len == 0 {
            return self.clone();
        }
        let k = k % self.len;
        let mut r = self.slice(k, self.len - k);
        r.extend_row(&self.slice(0, k));
        r
    }

    /// Applies Rule 110 to the interior: the result has `len - 2` cells and
    /// cell `i` is the successor of cells `i, i+1, i+2` of `self`.
    pub fn step_interior(&self) -> BitRow {
        assert!(self.len >= 2, "need at least two cells");
        let n = self.len - 2;
        let mut out = Vec::with_capacity(words_for(n));
        let mut k = 0;
        while k < n {
            let l = self.word_at(k);
            let c = self.word_at(k + 1);
            let r = self.word_at(k + 2);
            out.push((c ^ r) | (c & !l));
            k += 64;
        }
        let mut row = BitRow { words: out, len: n };
        row.clear_tail();
        row
    }

    /// One step of the row read as a cyclic word.
    pub fn step_cyclic(&self) -> BitRow {
        let n = self.len;
        assert!(n >= 1);
        let mut ext = BitRow::from_bits([self.get(n - 1)]);
        ext.extend_row(self);
        ext.push(self.get(0));
        ext.step_interior()
    }

    /// Positions `i` where `pattern` occurs starting at cell `i`.
    pub fn find_all(&self, pattern: &BitRow) -> Vec<usize> {
        let p = pattern.len();
        let mut hits = Vec::new();
        if p == 0 || p > self.len {
            return hits;
        }
        let last = self.len - p;
        let mut k = 0;
        while k <= last {
            let mut m = if last - k >= 63 { u64::MAX } else { (1u64 << (last - k + 1)) - 1 };
            for j in 0..p {
                let w = self.word_at(k + j);
                m &= if pattern.get(j) { w } else { !w };
                if m == 0 {
                    break;
                }
            }
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                hits.push(k + b);
                m &= m - 1;
            }
            k += 64;
        }
        hits
    }

    pub fn to_string01(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitRow({})", self.to_string01())
    }
}

impl fmt::Display for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string01())
    }
}

/// The Rule 110 successor of a cell with neighbours `l` and `r`.
pub fn local_rule(l: bool, c: bool, r: bool) -> bool {
    (c ^ r) | (c & !l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(s: &str) -> BitRow {
        BitRow::parse(s).unwrap()
    }

    #[test]
    fn rule_number_is_110() {
        let mut n = 0u8;
        for i in 0..8u8 {
            let (l, c, r) = (i & 4 != 0, i & 2 != 0, i & 1 != 0);
            if local_rule(l, c, r) {
                n |= 1 << i;
            }
        }
        assert_eq!(n, 110);
    }

    #[test]
    fn slices_and_extends_across_words() {
        let s: String = (0..200).map(|i| if (i * 7 + i / 3) % 5 < 2 { '1' } else { '0' }).collect();
        let r = row(&s);
        assert_eq!(r.slice(37, 100).to_string01(), &s[37..137]);
        let mut a = r.slice(0, 70);
        a.extend_row(&r.slice(70, 130));
        assert_eq!(a, r);
        assert_eq!(r.rotate_left(65).to_string01(), format!("{}{}", &s[65..], &s[..65]));
    }

    #[test]
    fn interior_step_matches_local_rule() {
        let s = "0110101110001011101011110000101010111";
        let r = row(s);
        let want: String = (0..s.len() - 2)
            .map(|i| local_rule(r.get(i), r.get(i + 1), r.get(i + 2)))
            .map(|b| if b { '1' } else { '0' })
            .collect();
        assert_eq!(r.step_interior().to_string01(), want);
    }

    #[test]
    fn finds_patterns() {
        let p = row("01101001101000");
        let mut s = "1".repeat(90);
        s.push_str("01101001101000");
        s.push_str(&"1".repeat(20));
        assert_eq!(row(&s).find_all(&p), vec![90]);
        assert!(row("0110100110100").find_all(&p).is_empty());
    }
}
