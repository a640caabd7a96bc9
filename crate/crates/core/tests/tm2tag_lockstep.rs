use forge::machines::{Action, Move, TmConfiguration, TuringMachine};
use forge::xcheck::lockstep_tm_tag;
use proptest::prelude::*;

fn w(symbol: usize, dir: Move, next: usize) -> Action {
    Action::Write { symbol, dir, next }
}

const BUDGET: u64 = 2_000_000;

#[test]
fn busy_beaver_halts_in_both() {
    use Move::*;
    // A0 -> 1RB, A1 -> 1LB, B0 -> 1LA, B1 halts
    let tm = TuringMachine::from_table(2, 2, vec![w(1, Right, 1), w(1, Left, 1), w(1, Left, 0), Action::Halt]).unwrap();
    let r = lockstep_tm_tag(&tm, &TmConfiguration::blank(0, 0), 30, BUDGET).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.upper_halted && r.lower_halted);
    assert_eq!(r.reached, 5);
}

#[test]
fn right_walker_loops() {
    let tm = TuringMachine::from_table(1, 2, vec![w(1, Move::Right, 0), w(0, Move::Right, 0)]).unwrap();
    let r = lockstep_tm_tag(&tm, &TmConfiguration::blank(0, 0), 30, BUDGET).unwrap();
    assert!(r.passed(), "{r}");
    assert!(!r.upper_halted);
    assert_eq!(r.reached, 30);
}

#[test]
fn bouncer_on_periodic_tape() {
    use Move::*;
    // sweeps right over 1s, turns on 0, sweeps back
    let tm = TuringMachine::from_table(
        2,
        3,
        vec![w(2, Right, 0), w(1, Right, 0), w(2, Left, 1), w(0, Left, 1), w(1, Left, 1), w(2, Right, 0)],
    )
    .unwrap();
    let cfg = TmConfiguration::new(0, vec![1, 0], vec![1, 2], 0, vec![1, 1, 2], vec![0, 1, 1]).unwrap();
    let r = lockstep_tm_tag(&tm, &cfg, 30, BUDGET).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.reached, 30);
}

fn arb_machine() -> impl Strategy<Value = (TuringMachine, TmConfiguration)> {
    (1usize..=3, 2usize..=3).prop_flat_map(|(m, t)| {
        let act = (0..t, any::<bool>(), 0..m, 0u8..12).prop_map(|(s, l, n, h)| {
            if h == 0 {
                Action::Halt
            } else {
                w(s, if l { Move::Left } else { Move::Right }, n)
            }
        });
        let table = prop::collection::vec(act, m * t);
        let word = |lo| prop::collection::vec(0..t, lo..4);
        (table, word(1), word(0), 0..t, word(0), word(1)).prop_map(move |(table, lp, l, h, r, rp)| {
            let tm = TuringMachine::from_table(m, t, table).unwrap();
            let cfg = TmConfiguration::new(0, lp, l, h, r, rp).unwrap();
            (tm, cfg)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn random_machines_agree_for_30_steps((tm, cfg) in arb_machine()) {
        let r = lockstep_tm_tag(&tm, &cfg, 30, BUDGET).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }
}
