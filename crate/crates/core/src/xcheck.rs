//! Lockstep cross-validation between neighbouring levels of the tower.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::cts2r110::{evolution_consistency, BlockLibrary};
use crate::error::{Error, Result};
use crate::formats::{parse_case, parse_config, parse_tm, CaseSpec};
use crate::pipeline::{compile_tm, Manifest};
use crate::r110::{run_until_halt, Engine, HaltOptions, HaltReport};
use crate::machines::{
    CtsState, CyclicTagSystem, TagSystem, TagTape, TmConfiguration, TuringMachine,
};
use crate::tag2cts::{compile_tag_to_cts, decode_cts_tape};
use crate::tm2tag::{compile_tm_to_tag, decode_tag_tape, Layout};

/// Outcome of a lockstep run between an upper (reference) and a lower level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LockstepReport {
    pub pair: &'static str,
    /// Upper-level steps run.
    pub upper_steps: u64,
    /// Upper-level step index of the last matched snapshot.
    pub reached: u64,
    /// Canonical lower-level snapshots compared.
    pub compared: u64,
    /// Lower-level steps run.
    pub lower_steps: BigUint,
    pub upper_halted: bool,
    pub lower_halted: bool,
    pub divergence: Option<Divergence>,
}

impl LockstepReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none() && self.reached == self.upper_steps && self.upper_halted == self.lower_halted
    }
}

impl fmt::Display for LockstepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} of {} upper steps matched over {} snapshots ({} lower steps)",
            self.pair, self.reached, self.upper_steps, self.compared, self.lower_steps
        )?;
        if self.upper_halted || self.lower_halted {
            write!(f, ", halted upper={} lower={}", self.upper_halted, self.lower_halted)?;
        }
        if let Some(d) = &self.divergence {
            write!(f, ", DIVERGED at upper step {}: {}", d.upper_step, d.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub upper_step: u64,
    pub detail: String,
}

/// Runs `tm` directly for up to `steps` steps, recording every configuration.
pub fn tm_trace(tm: &TuringMachine, cfg: &TmConfiguration, steps: u64) -> Result<(Vec<TmConfiguration>, bool)> {
    let mut out = vec![cfg.clone()];
    let mut cur = cfg.clone();
    for _ in 0..steps {
        if !tm.step_in_place(&mut cur)? {
            return Ok((out, true));
        }
        out.push(cur.clone());
    }
    Ok((out, false))
}

/// Compares a Turing machine with its Cocke–Minsky tag system.
///
/// Every canonical point of the tag tape must decode to the current or the
/// next configuration of the direct run. Points where the simulated head
/// rests on an end marker are transient and skipped. `budget` bounds the
/// number of bulk tag moves.
pub fn lockstep_tm_tag(
    tm: &TuringMachine,
    cfg: &TmConfiguration,
    steps: u64,
    budget: u64,
) -> Result<LockstepReport> {
    let (sys, tape) = compile_tm_to_tag(tm, cfg)?;
    lockstep_tm_tag_with(tm, cfg, &sys, tape, steps, budget)
}

/// As [`lockstep_tm_tag`] but with a caller-supplied (possibly altered) system.
pub fn lockstep_tm_tag_with(
    tm: &TuringMachine,
    cfg: &TmConfiguration,
    sys: &TagSystem,
    mut tape: TagTape,
    steps: u64,
    budget: u64,
) -> Result<LockstepReport> {
    let (trace, upper_halted) = tm_trace(tm, cfg, steps)?;
    let lay = Layout::new(tm.states(), tm.symbols());
    let t = tm.symbols();
    let last = (trace.len() - 1) as u64;
    let mut report = LockstepReport {
        pair: "tm/tag",
        upper_steps: last,
        reached: 0,
        compared: 0,
        lower_steps: BigUint::zero(),
        upper_halted,
        lower_halted: false,
        divergence: None,
    };
    let mut ti = 0usize;
    let mut finished = false;
    for _ in 0..budget {
        if let Ok(d) = decode_tag_tape(&tape, lay) {
            if d.is_plain(t) {
                report.compared += 1;
                // a configuration can equal its successor up to translation,
                // so the successor is tried first
                if ti + 1 < trace.len() && d.agrees_with(&trace[ti + 1]) {
                    ti += 1;
                } else if !d.agrees_with(&trace[ti]) {
                    report.divergence = Some(Divergence {
                        upper_step: ti as u64 + 1,
                        detail: format!("tag tape decodes to {d:?}, expected {}", trace[(ti + 1).min(trace.len() - 1)]),
                    });
                    break;
                }
                report.reached = ti as u64;
                if report.reached == last && !upper_halted {
                    finished = true;
                    break;
                }
            }
        }
        let k = sys.step_bulk(&mut tape)?;
        if k.is_zero() {
            report.lower_halted = true;
            finished = true;
            break;
        }
        report.lower_steps += k;
    }
    if !finished && report.divergence.is_none() {
        return Err(Error::Stuck(budget));
    }
    if report.divergence.is_none() && report.lower_halted && !upper_halted {
        report.divergence = Some(Divergence {
            upper_step: report.reached + 1,
            detail: "tag system halted but the machine did not".into(),
        });
    }
    Ok(report)
}

/// Compares a tag system with its cyclic tag system, one tag step per
/// `s|Φ|` CTS steps, for `steps` tag steps or until the tag system halts.
pub fn lockstep_tag_cts(sys: &TagSystem, tape: &TagTape, steps: u64) -> Result<LockstepReport> {
    let (cts, state) = compile_tag_to_cts(sys, tape)?;
    lockstep_tag_cts_with(sys, tape, &cts, state, steps)
}

pub fn lockstep_tag_cts_with(
    sys: &TagSystem,
    tape: &TagTape,
    cts: &CyclicTagSystem,
    mut state: CtsState,
    steps: u64,
) -> Result<LockstepReport> {
    let phi = cts.len() / sys.deletion();
    let per = (sys.deletion() * phi) as u64;
    let mut upper = tape.clone();
    let mut report = LockstepReport {
        pair: "tag/cts",
        upper_steps: steps,
        reached: 0,
        compared: 0,
        lower_steps: BigUint::zero(),
        upper_halted: false,
        lower_halted: false,
        divergence: None,
    };
    for k in 1..=steps {
        if !sys.step_in_place(&mut upper)? {
            // after the tag system halts its CTS image keeps running
            report.upper_halted = true;
            report.lower_halted = true;
            report.upper_steps = k - 1;
            break;
        }
        for _ in 0..per {
            if !cts.step_in_place(&mut state) {
                report.lower_halted = true;
                break;
            }
        }
        report.lower_steps += per;
        report.compared += 1;
        let decoded = decode_cts_tape(&state, phi);
        let want = upper.to_symbols(1 << 22).ok_or_else(|| Error::invalid("tag tape too long"))?;
        match decoded {
            Ok(got) if got == want => report.reached = k,
            Ok(got) => {
                report.divergence = Some(Divergence {
                    upper_step: k,
                    detail: format!("cts decodes to {got:?}, tag tape is {want:?}"),
                });
                break;
            }
            Err(e) => {
                report.divergence = Some(Divergence { upper_step: k, detail: e.to_string() });
                break;
            }
        }
    }
    Ok(report)
}

/// Step at which the machine provably repeats a configuration, if it does
/// within `max` steps. Configurations are compared relative to the head, so
/// a machine that drifts over a periodic tape is caught too.
pub fn prove_loop(tm: &TuringMachine, cfg: &TmConfiguration, max: u64) -> Result<Option<u64>> {
    let mut seen = std::collections::HashSet::new();
    let mut cur = cfg.normalized();
    for t in 0..=max {
        if !seen.insert(cur.clone()) {
            return Ok(Some(t));
        }
        if !tm.step_in_place(&mut cur)? {
            return Ok(None);
        }
        cur = cur.normalized();
    }
    Ok(None)
}

/// Outcome of a single check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    /// The budget ran out before the expected event; not a failure.
    Inconclusive(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        *self == Verdict::Pass
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail(m) => write!(f, "FAIL: {m}"),
            Verdict::Inconclusive(m) => write!(f, "inconclusive: {m}"),
        }
    }
}

/// A named check with its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct E2eOptions {
    pub tm_steps: u64,
    pub tag_cts_steps: u64,
    pub consistency_steps: u64,
    pub max_steps: u64,
    /// Also require the temporal signature when halting is expected.
    pub temporal: bool,
    pub tag_budget: u64,
}

impl E2eOptions {
    pub fn new(max_steps: u64) -> Self {
        E2eOptions { tm_steps: 30, tag_cts_steps: 60, consistency_steps: 30, max_steps, temporal: true, tag_budget: 200_000 }
    }
}

#[derive(Debug, Clone)]
pub struct E2eReport {
    pub expect_halt: bool,
    /// Lockstep checks of each neighbouring pair, then the halting run.
    pub checks: Vec<Check>,
    pub halt: Option<HaltReport>,
    pub manifest: Option<Manifest>,
}

impl E2eReport {
    /// The verdict of the halting run, or of the first failing tower check.
    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .find(|c| c.verdict.is_fail())
            .or(self.checks.last())
            .map_or(Verdict::Fail("nothing ran".into()), |c| c.verdict.clone())
    }
}

fn timed(name: &'static str, f: impl FnOnce() -> (Verdict, String)) -> Check {
    let t0 = Instant::now();
    let (verdict, detail) = f();
    Check { name, verdict, detail, seconds: t0.elapsed().as_secs_f64() }
}

fn lockstep_check(name: &'static str, r: Result<LockstepReport>) -> Check {
    timed(name, || match r {
        Ok(rep) if rep.passed() => (Verdict::Pass, rep.to_string()),
        Ok(rep) => (Verdict::Fail(rep.to_string()), String::new()),
        Err(e) => (Verdict::Fail(e.to_string()), String::new()),
    })
}

/// Compiles `tm` down to Rule 110 and checks that the halting signature
/// appears exactly when expected. Every pair of neighbouring levels is
/// cross-checked first; a failure there is reported instead of running.
pub fn e2e_halt(tm: &TuringMachine, cfg: &TmConfiguration, expect_halt: bool, max_steps: u64, lib: &BlockLibrary) -> E2eReport {
    e2e_halt_with(tm, cfg, expect_halt, lib, E2eOptions::new(max_steps))
}

pub fn e2e_halt_with(
    tm: &TuringMachine,
    cfg: &TmConfiguration,
    expect_halt: bool,
    lib: &BlockLibrary,
    opts: E2eOptions,
) -> E2eReport {
    let mut report = E2eReport { expect_halt, checks: Vec::new(), halt: None, manifest: None };
    let t0 = Instant::now();
    let compiled = match compile_tm(tm, cfg, lib) {
        Ok(c) => c,
        Err(e) => {
            report.checks.push(Check {
                name: "compile",
                verdict: Verdict::Fail(e.to_string()),
                detail: String::new(),
                seconds: t0.elapsed().as_secs_f64(),
            });
            return report;
        }
    };
    report.manifest = Some(compiled.manifest.clone());
    let (sys, tape) = compiled.tag.clone().expect("compiled from a machine");

    report.checks.push(lockstep_check("tm/tag", lockstep_tm_tag(tm, cfg, opts.tm_steps, opts.tag_budget)));
    report.checks.push(lockstep_check("tag/cts", lockstep_tag_cts(&sys, &tape, opts.tag_cts_steps)));
    report.checks.push(timed("cts/r110", || {
        let c = evolution_consistency(&compiled.assembly, lib, opts.consistency_steps, 0);
        let detail = format!("{} cells over {} steps, {} wrong", c.checked, c.steps, c.mismatch_count);
        if c.holds() {
            (Verdict::Pass, detail)
        } else {
            (Verdict::Fail(format!("{detail}; first at {:?}", c.mismatches.first())), String::new())
        }
    }));
    if report.checks.iter().any(|c| c.verdict.is_fail()) {
        return report;
    }

    let mut state = compiled.assembly.state.clone();
    let mut halt = None;
    report.checks.push(timed("r110", || {
        let hopts = HaltOptions { temporal: true, temporal_grace: if opts.temporal { 4096 } else { 0 } };
        let r = run_until_halt(&mut state, &mut Engine::new(), opts.max_steps, hopts);
        let detail = format!("{} steps, spatial {:?}, temporal {:?}", r.steps, r.spatial, r.temporal);
        let verdict = match (expect_halt, r.spatial, r.temporal) {
            (true, Some(_), Some(_)) => Verdict::Pass,
            (true, Some(_), None) if !opts.temporal => Verdict::Pass,
            (true, Some(_), None) => Verdict::Fail(format!("spatial signature without the temporal one; {detail}")),
            (true, None, _) => Verdict::Inconclusive(format!("no signature within {} steps", opts.max_steps)),
            (false, None, None) => Verdict::Pass,
            (false, _, _) => Verdict::Fail(format!("halting signature from a looping machine; {detail}")),
        };
        halt = Some(r);
        (verdict, detail)
    }));
    report.halt = halt;
    report
}

/// Results of one suite case.
#[derive(Debug, Clone)]
pub struct CaseReport {
    pub name: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.cases.iter().flat_map(|c| &c.checks).filter(|c| c.verdict.is_fail()).count()
    }

    pub fn inconclusive(&self) -> usize {
        self.cases.iter().flat_map(|c| &c.checks).filter(|c| matches!(c.verdict, Verdict::Inconclusive(_))).count()
    }

    /// JUnit-style XML.
    pub fn junit(&self) -> String {
        let tests: usize = self.cases.iter().map(|c| c.checks.len()).sum();
        let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        s += &format!(
            "<testsuite name=\"forge-xcheck\" tests=\"{tests}\" failures=\"{}\" skipped=\"{}\">\n",
            self.failures(),
            self.inconclusive()
        );
        for case in &self.cases {
            for c in &case.checks {
                s += &format!(
                    "  <testcase classname=\"{}\" name=\"{}\" time=\"{:.3}\"",
                    xml_escape(&case.name),
                    c.name,
                    c.seconds
                );
                match &c.verdict {
                    Verdict::Pass => s += &format!("><system-out>{}</system-out></testcase>\n", xml_escape(&c.detail)),
                    Verdict::Fail(m) => s += &format!("><failure message=\"{}\"/></testcase>\n", xml_escape(m)),
                    Verdict::Inconclusive(m) => s += &format!("><skipped message=\"{}\"/></testcase>\n", xml_escape(m)),
                }
            }
        }
        s += "</testsuite>\n";
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn run_case(path: &Path, lib: &BlockLibrary) -> CaseReport {
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    let load = || -> Result<(CaseSpec, TuringMachine, TmConfiguration)> {
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Error::invalid(format!("{}: {e}", p.display())));
        let spec = parse_case(&read(path)?)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let tm = parse_tm(&read(&dir.join(&spec.machine))?)?;
        let cfg = parse_config(&read(&dir.join(&spec.config))?, &tm)?;
        Ok((spec, tm, cfg))
    };
    let (spec, tm, cfg) = match load() {
        Ok(x) => x,
        Err(e) => {
            return CaseReport {
                name,
                checks: vec![Check { name: "load", verdict: Verdict::Fail(e.to_string()), detail: String::new(), seconds: 0.0 }],
            }
        }
    };
    let mut checks = Vec::new();
    if !spec.expect_halt {
        checks.push(timed("loop-proof", || match prove_loop(&tm, &cfg, 100_000) {
            Ok(Some(t)) => (Verdict::Pass, format!("configuration repeats at step {t}")),
            Ok(None) => (Verdict::Fail("no repeated configuration; the case is not a proven loop".into()), String::new()),
            Err(e) => (Verdict::Fail(e.to_string()), String::new()),
        }));
    }
    let opts = E2eOptions { tm_steps: spec.tm_steps, ..E2eOptions::new(spec.max_steps) };
    checks.extend(e2e_halt_with(&tm, &cfg, spec.expect_halt, lib, opts).checks);
    CaseReport { name, checks }
}

/// Runs every `*.case` file in `dir`, in parallel.
pub fn run_suite(dir: &Path, lib: &BlockLibrary) -> Result<SuiteReport> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::invalid(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "case"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::invalid(format!("no .case files in {}", dir.display())));
    }
    let cases = paths.par_iter().map(|p| run_case(p, lib)).collect();
    Ok(SuiteReport { cases })
}
