//! Tag system to cyclic tag system, plus mod-6 normalization of cyclic tag systems.

use crate::error::{Error, Result};
use crate::machines::{CtsState, CyclicTagSystem, RunWord, SymbolId, TagSystem, TagTape};

/// Longest tag tape (in symbols) that will be unary-encoded.
pub const MAX_TAPE_SYMBOLS: usize = 1 << 22;

/// Number of padding symbols needed to bring `n` up to a multiple of 6.
pub fn padding(n: usize) -> usize {
    (6 - n % 6) % 6
}

/// Adds dummy symbols with empty appendants until the alphabet size is a multiple of 6.
pub fn pad_alphabet(sys: &TagSystem) -> Result<TagSystem> {
    let n = sys.alphabet_size();
    let mut names = sys.names().to_vec();
    let mut rules = sys.rules().to_vec();
    for k in 0..padding(n) {
        names.push(format!("φ{}", n + k + 1));
        rules.push(RunWord::new());
    }
    TagSystem::new(sys.deletion(), names, rules)
}

fn unary(symbol: SymbolId, phi: usize, out: &mut Vec<bool>) {
    out.extend((0..phi).map(|i| i == symbol));
}

fn unary_word(w: &RunWord, phi: usize, limit: usize) -> Result<Vec<bool>> {
    let syms = w
        .to_symbols(limit)
        .ok_or_else(|| Error::Unsupported("appendant too long to unary-encode".into()))?;
    let mut out = Vec::with_capacity(syms.len() * phi);
    for s in syms {
        unary(s, phi, &mut out);
    }
    Ok(out)
}

/// Unary-encodes a tag system. The alphabet is first padded to a multiple of
/// 6; the list holds one appendant per symbol followed by `(s-1)|Φ|` empty ones.
pub fn compile_tag_to_cts(sys: &TagSystem, tape: &TagTape) -> Result<(CyclicTagSystem, CtsState)> {
    let padded = pad_alphabet(sys)?;
    let phi = padded.alphabet_size();
    let s = padded.deletion();
    let mut apps = Vec::with_capacity(s * phi);
    for w in padded.rules() {
        apps.push(unary_word(w, phi, MAX_TAPE_SYMBOLS)?);
    }
    apps.extend(std::iter::repeat(Vec::new()).take((s - 1) * phi));
    let syms = tape
        .to_symbols(MAX_TAPE_SYMBOLS)
        .ok_or_else(|| Error::Unsupported("tag tape too long to unary-encode".into()))?;
    let mut bits = Vec::with_capacity(syms.len() * phi);
    for s in syms {
        unary(s, phi, &mut bits);
    }
    Ok((CyclicTagSystem::new(apps)?, CtsState::new(bits, 0)))
}

/// Reads a unary-encoded CTS tape back as tag symbols.
///
/// The marker must sit at the start of a pass and every block of `phi`
/// cells must hold exactly one Y.
pub fn decode_cts_tape(state: &CtsState, phi: usize) -> Result<Vec<SymbolId>> {
    if phi == 0 {
        return Err(Error::invalid("alphabet size must be positive"));
    }
    if state.marker % phi != 0 {
        return Err(Error::NotCanonical(format!("marker {} is mid-pass", state.marker)));
    }
    if state.tape.len() % phi != 0 {
        return Err(Error::NotCanonical(format!(
            "tape length {} is not a multiple of {phi}",
            state.tape.len()
        )));
    }
    let bits: Vec<bool> = state.tape.iter().copied().collect();
    bits.chunks(phi)
        .enumerate()
        .map(|(k, block)| {
            let mut ys = block.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i);
            match (ys.next(), ys.next()) {
                (Some(i), None) => Ok(i),
                _ => Err(Error::NotCanonical(format!("block {k} does not hold exactly one Y"))),
            }
        })
        .collect()
}

fn expand(w: &[bool]) -> Vec<bool> {
    w.iter().flat_map(|&b| [b, false, false, false, false, false]).collect()
}

/// Follows every symbol by 5 Ns and every appendant by 5 empty appendants.
/// Step `6k` of the result corresponds to step `k` of the input.
pub fn normalize_cts_mod6(sys: &CyclicTagSystem, state: &CtsState) -> (CyclicTagSystem, CtsState) {
    let mut apps = Vec::with_capacity(sys.len() * 6);
    for a in sys.appendants() {
        apps.push(expand(a));
        apps.extend(std::iter::repeat(Vec::new()).take(5));
    }
    let tape = expand(&state.tape.iter().copied().collect::<Vec<_>>());
    let out = CyclicTagSystem::new(apps).expect("non-empty list stays non-empty");
    (out, CtsState::new(tape, state.marker * 6))
}

/// Inverse of the tape expansion of [`normalize_cts_mod6`], if the state is aligned.
pub fn contract_mod6(state: &CtsState) -> Option<CtsState> {
    if state.marker % 6 != 0 || state.tape.len() % 6 != 0 {
        return None;
    }
    let bits: Vec<bool> = state.tape.iter().copied().collect();
    let mut out = Vec::with_capacity(bits.len() / 6);
    for c in bits.chunks(6) {
        if c[1..].iter().any(|&b| b) {
            return None;
        }
        out.push(c[0]);
    }
    Some(CtsState::new(out, state.marker / 6))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::yn_string;

    #[test]
    fn seven_symbols_pad_to_twelve() {
        assert_eq!(padding(7), 5);
        assert_eq!(padding(12), 0);
        assert_eq!(7 + padding(7), 12);
    }

    #[test]
    fn normalize_expands_symbols_and_list() {
        let sys = CyclicTagSystem::from_strs(&["YN", "-", "Y", "NN"]).unwrap();
        let (n, st) = normalize_cts_mod6(&sys, &CtsState::from_str("YN").unwrap());
        assert_eq!(n.len(), 24);
        assert_eq!(yn_string(&n.appendants()[0]), "YNNNNNNNNNNN");
        assert!(n.appendants()[1..6].iter().all(|a| a.is_empty()));
        assert_eq!(st.tape_string(), "YNNNNNNNNNNN");
    }

    #[test]
    fn empty_tape_decodes_to_empty() {
        assert_eq!(decode_cts_tape(&CtsState::default(), 6).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn mid_pass_tape_is_not_canonical() {
        let st = CtsState::new([false, true, false], 1);
        assert!(matches!(decode_cts_tape(&st, 3), Err(Error::NotCanonical(_))));
        let st = CtsState::new([false, true], 0);
        assert!(matches!(decode_cts_tape(&st, 3), Err(Error::NotCanonical(_))));
    }
}
