//! The whole tower in one call, from a Turing machine or a cyclic tag
//! system down to a Rule 110 state.

use std::fmt;

use crate::cts2r110::{assemble_state, Assembly, BlockLibrary};
use crate::error::Error;
use crate::machines::{CtsState, CyclicTagSystem, TagSystem, TagTape, TmConfiguration, TuringMachine};
use crate::tag2cts::{compile_tag_to_cts, normalize_cts_mod6, pad_alphabet};
use crate::tm2tag::compile_tm_to_tag;

/// An error together with the pass that raised it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassError {
    pub pass: &'static str,
    pub error: Error,
}

impl fmt::Display for PassError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pass, self.error)
    }
}

impl std::error::Error for PassError {}

fn at<T>(pass: &'static str, r: crate::Result<T>) -> Result<T, PassError> {
    r.map_err(|error| PassError { pass, error })
}

/// Sizes at each level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub states: Option<usize>,
    pub symbols: Option<usize>,
    /// Tag system deletion number.
    pub s: Option<usize>,
    /// Tag alphabet size before and after padding.
    pub phi: Option<usize>,
    pub phi_padded: Option<usize>,
    pub appendants: usize,
    pub normalized_appendants: usize,
    pub cts_tape: usize,
    pub v: u64,
    pub center_len: usize,
    pub left_period: usize,
    pub right_period: usize,
    pub left_traversals: usize,
    pub right_traversals: usize,
}

impl Manifest {
    /// `key = value` lines, fixed order.
    pub fn to_text(&self) -> String {
        let mut s = String::from("forge-manifest 1\n");
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        for (k, v) in [
            ("states", opt(self.states)),
            ("symbols", opt(self.symbols)),
            ("deletion", opt(self.s)),
            ("tag_alphabet", opt(self.phi)),
            ("tag_alphabet_padded", opt(self.phi_padded)),
            ("appendants", self.appendants.to_string()),
            ("normalized_appendants", self.normalized_appendants.to_string()),
            ("cts_tape", self.cts_tape.to_string()),
            ("v", self.v.to_string()),
            ("center_len", self.center_len.to_string()),
            ("left_period", self.left_period.to_string()),
            ("right_period", self.right_period.to_string()),
            ("left_traversals", self.left_traversals.to_string()),
            ("right_traversals", self.right_traversals.to_string()),
        ] {
            s += &format!("{k} = {v}\n");
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub tag: Option<(TagSystem, TagTape)>,
    pub cts: (CyclicTagSystem, CtsState),
    pub normalized: (CyclicTagSystem, CtsState),
    pub assembly: Assembly,
    pub manifest: Manifest,
}

/// Turing machine → tag system → cyclic tag system → Rule 110.
pub fn compile_tm(tm: &TuringMachine, cfg: &TmConfiguration, lib: &BlockLibrary) -> Result<Compiled, PassError> {
    let (sys, tape) = at("tm2tag", compile_tm_to_tag(tm, cfg))?;
    let padded = at("tag2cts", pad_alphabet(&sys))?;
    let (cts, state) = at("tag2cts", compile_tag_to_cts(&sys, &tape))?;
    let mut out = compile_cts(&cts, &state, lib)?;
    out.manifest.states = Some(tm.states());
    out.manifest.symbols = Some(tm.symbols());
    out.manifest.s = Some(sys.deletion());
    out.manifest.phi = Some(sys.alphabet_size());
    out.manifest.phi_padded = Some(padded.alphabet_size());
    out.tag = Some((sys, tape));
    Ok(out)
}

/// Starts the tower at the cyclic tag level.
pub fn compile_cts(cts: &CyclicTagSystem, state: &CtsState, lib: &BlockLibrary) -> Result<Compiled, PassError> {
    let (ncts, nstate) = normalize_cts_mod6(cts, state);
    let assembly = at("cts2r110", assemble_state(&ncts, &nstate, lib))?;
    let manifest = Manifest {
        appendants: cts.len(),
        normalized_appendants: ncts.len(),
        cts_tape: state.tape.len(),
        v: assembly.v,
        center_len: assembly.state.center.len(),
        left_period: assembly.state.left.len(),
        right_period: assembly.state.right.len(),
        left_traversals: assembly.left_traversals,
        right_traversals: assembly.right_traversals,
        ..Manifest::default()
    };
    Ok(Compiled { tag: None, cts: (cts.clone(), state.clone()), normalized: (ncts, nstate), assembly, manifest })
}
