//! Rule 110 evolution over rows with periodic sides.

mod bits;
mod render;
mod state;

use std::collections::VecDeque;
use std::time::Instant;

pub use bits::{local_rule, BitRow};
pub use render::{capture, parse_p1, render, Format, SpaceTimeWindow};
pub use state::{brute_force_window, Engine, Rule110State};

/// Produced in a single row when the simulated machine halts.
pub const SPATIAL_HALT: &str = "01101001101000";
/// Produced over time by a single cell when the simulated machine halts.
pub const TEMPORAL_HALT: &str = "110101010111111";

/// The Rule 110 ether, one spatial period.
pub const ETHER: &str = "11111000100110";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HaltOptions {
    pub temporal: bool,
    /// Steps to keep running after the spatial signature so the temporal
    /// one can also appear.
    pub temporal_grace: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaltReport {
    pub halted: bool,
    /// Steps run.
    pub steps: u64,
    /// Step and leftmost cell of the first spatial signature.
    pub spatial: Option<(u64, i64)>,
    /// Step at which the temporal signature completed, and its cell.
    pub temporal: Option<(u64, i64)>,
}

fn spatial_hits(s: &Rule110State, pattern: &BitRow) -> Option<i64> {
    let pad = pattern.len() as i64;
    let x0 = s.origin - pad;
    let row = s.window(x0, s.center_end() + pad);
    row.find_all(pattern).first().map(|&i| x0 + i as i64)
}

fn temporal_hit(history: &VecDeque<Rule110State>, pattern: &BitRow) -> Option<i64> {
    let now = history.back()?;
    let (x0, x1) = (now.origin, now.center_end());
    if x1 <= x0 {
        return None;
    }
    let rows: Vec<BitRow> = history.iter().map(|h| h.window(x0, x1)).collect();
    let n = (x1 - x0) as usize;
    let mut k = 0;
    while k < n {
        let mut m = if n - k >= 64 { u64::MAX } else { (1u64 << (n - k)) - 1 };
        for (j, r) in rows.iter().enumerate() {
            let w = r.word_at(k);
            m &= if pattern.get(j) { w } else { !w };
            if m == 0 {
                break;
            }
        }
        if m != 0 {
            return Some(x0 + (k + m.trailing_zeros() as usize) as i64);
        }
        k += 64;
    }
    None
}

/// Runs until the halting signature appears or `max_steps` have elapsed.
pub fn run_until_halt(state: &mut Rule110State, engine: &mut Engine, max_steps: u64, opts: HaltOptions) -> HaltReport {
    let spatial_p = BitRow::parse(SPATIAL_HALT).expect("constant");
    let temporal_p = BitRow::parse(TEMPORAL_HALT).expect("constant");
    let mut report = HaltReport { halted: false, steps: 0, spatial: None, temporal: None };
    let mut history: VecDeque<Rule110State> = VecDeque::new();
    let mut deadline = max_steps;
    if let Some(x) = spatial_hits(state, &spatial_p) {
        report.spatial = Some((0, x));
        deadline = if opts.temporal { opts.temporal_grace.min(max_steps) } else { 0 };
    }
    if opts.temporal {
        history.push_back(state.clone());
    }
    while report.steps < deadline {
        engine.step(state);
        report.steps += 1;
        if report.spatial.is_none() {
            if let Some(x) = spatial_hits(state, &spatial_p) {
                report.spatial = Some((report.steps, x));
                deadline = if opts.temporal {
                    (report.steps + opts.temporal_grace).min(max_steps)
                } else {
                    report.steps
                };
            }
        }
        if opts.temporal {
            history.push_back(state.clone());
            if history.len() > temporal_p.len() {
                history.pop_front();
            }
            if report.temporal.is_none() && history.len() == temporal_p.len() {
                if let Some(x) = temporal_hit(&history, &temporal_p) {
                    report.temporal = Some((report.steps, x));
                }
            }
            if report.spatial.is_some() && report.temporal.is_some() {
                break;
            }
        }
    }
    report.halted = report.spatial.is_some();
    report
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Throughput {
    pub steps: u64,
    /// Cells computed, counting the center and both side words.
    pub cells: u128,
    pub seconds: f64,
}

impl Throughput {
    pub fn cells_per_second(&self) -> f64 {
        if self.seconds > 0.0 {
            self.cells as f64 / self.seconds
        } else {
            f64::INFINITY
        }
    }
}

/// Times `steps` steps of `state`.
pub fn measure_throughput(state: &mut Rule110State, steps: u64) -> Throughput {
    let mut e = Engine::new();
    let mut cells = 0u128;
    let t0 = Instant::now();
    for _ in 0..steps {
        cells += (state.center.len() + state.left.len() + state.right.len()) as u128;
        e.step(state);
    }
    Throughput { steps, cells, seconds: t0.elapsed().as_secs_f64() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ether_moves_as_a_rigid_pattern() {
        let mut s = Rule110State::periodic(BitRow::parse(ETHER).unwrap()).unwrap();
        let start = s.clone();
        let mut e = Engine::new();
        e.run(&mut s, 7);
        // seven steps shift the ether by some multiple of one cell
        assert!((0..14).any(|dx| s.same_row(&start.translated(dx))));
    }

    #[test]
    fn spatial_detector_fires_on_an_embedded_signature() {
        let ether = BitRow::parse(ETHER).unwrap();
        let mut center = BitRow::parse(&ETHER.repeat(3)).unwrap();
        center.extend_row(&BitRow::parse(SPATIAL_HALT).unwrap());
        center.extend_row(&BitRow::parse(&ETHER.repeat(3)).unwrap());
        let mut s = Rule110State::new(ether.clone(), center, ether).unwrap();
        let r = run_until_halt(&mut s, &mut Engine::new(), 10, HaltOptions::default());
        assert_eq!(r.spatial, Some((0, 42)));
        assert!(r.halted);
    }
}
