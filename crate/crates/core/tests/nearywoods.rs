use forge::machines::{Ab, CircularConfig, RightAction, RightTm};
use forge::nearywoods::{build_nw_system, encode_nw_tape, nw_trace, nw_trace_with, NwOptions, COST_CONSTANT};
use proptest::prelude::*;

fn write(symbols: &str, next: usize) -> RightAction {
    RightAction::Write { symbols: Ab::parse_word(symbols).unwrap(), next }
}

/// Reading A writes B B, reading B writes A.
fn example_machine() -> RightTm {
    RightTm::new(vec!["q".into()], vec![[write("BB", 0), write("A", 0)]]).unwrap()
}

const EXAMPLE: &[(&str, &str)] = &[
    ("2", "H h A A U u U u U u U u B B A A"),
    ("3", "H - A A U U U U B B A A"),
    ("4", "H h A a U u X x U u X x B b A a"),
    ("1", "H - A a 0 U U X X U U X X B b 0 A a 0"),
    ("2", "H h A A U u X x U u X x D D A A"),
    ("3", "- H - A A V Y Y V Y Y D D A A"),
    ("4", "H h A a V v Y y Y y Y y D d A a"),
    ("1", "H - A a 0 V V Y Y Y Y Y Y D D A a 0"),
    ("2", "H h A A V V Y Y Y Y Y Y D D C C"),
    ("3", "H - A A V Y Y Y Y Y Y D D C C"),
    ("4", "H h A a V v Y y Y y Y y Y y D d C c"),
    ("5", "- P - V y V y V y V y B - A -"),
    ("6", "P - V v V v V v V v B b A a"),
    ("3", "H - U U U U B B A A B B B B"),
    ("4", "H h U u X x U u X x B b A a B b B b"),
    ("1", "H - U U X X U U X X B b 0 A a 0 B b 0 B b 0"),
    ("2", "H h U u X x U u X x B B C C B B D D"),
    ("3", "H - U X X U X X B B C C B B D D"),
    ("4", "H h U u X x X x X x B b C c B b D d"),
    ("1", "H - U U X X X X X X B b 0 C C B b 0 D D"),
    ("2", "H h U u X x X x X x B B C C D D D D"),
    ("3", "H - U X X X X X X B B C C D D D D"),
    ("4", "H h U u X x X x X x X x B b C c D d D d"),
    ("4.5", "U x U x U x U x - Q - A - B - B -"),
    ("5", "- Q - A - B - B - U x U x U x U x"),
    ("6", "Q A a B b B b U u U u U u U u"),
];

#[test]
fn replays_the_worked_example() {
    let tr = nw_trace(&example_machine(), &Ab::parse_word("ABA").unwrap(), 0, 2).unwrap();
    let got: Vec<(String, String)> =
        tr.snapshots.iter().take(EXAMPLE.len()).map(|s| (s.label.to_string(), s.line())).collect();
    for (i, (want, have)) in EXAMPLE.iter().zip(&got).enumerate() {
        assert_eq!((want.0, want.1), (have.0.as_str(), have.1.as_str()), "line {i}");
    }
    assert_eq!(got.len(), EXAMPLE.len());
}

fn flip() -> RightTm {
    RightTm::new(vec!["q".into()], vec![[write("B", 0), write("A", 0)]]).unwrap()
}

#[test]
fn built_system_agrees_with_the_trace() {
    use forge::machines::TagTape;
    let tm = example_machine();
    let sys = build_nw_system(&tm).unwrap();
    let start = encode_nw_tape(&Ab::parse_word("ABA").unwrap(), 0).unwrap();
    let tr = nw_trace(&tm, &Ab::parse_word("ABA").unwrap(), 0, 2).unwrap();
    let mut tape = TagTape::from_symbols(&start.iter().map(|s| s.id(1)).collect::<Vec<_>>());
    let mut at = 0;
    for snap in &tr.snapshots {
        sys.step_many(&mut tape, snap.tag_step - at).unwrap();
        at = snap.tag_step;
        let ids: Vec<usize> = snap.tape.iter().map(|s| s.id(1)).collect();
        let have = tape.to_word(1 << 20).unwrap().to_symbols(1 << 20).unwrap();
        assert_eq!(have[..], ids[ids.len() - have.len()..], "stage {}", snap.label);
        assert!(ids.len() - have.len() <= 1);
    }
}

#[test]
fn a_machine_that_keeps_its_tape_decodes_to_a_constant() {
    let tm = RightTm::new(vec!["q".into()], vec![[write("A", 0), write("B", 0)]]).unwrap();
    let tr = nw_trace(&tm, &Ab::parse_word("AAA").unwrap(), 0, 10).unwrap();
    assert_eq!(tr.steps.len(), 10);
    for s in &tr.steps {
        assert_eq!(Ab::word_string(&s.config.tape_vec()), "AAA");
        assert_eq!(s.counter, 4);
    }
}

#[test]
fn halting_transition_stops_the_trace() {
    let tm = RightTm::new(vec!["q".into()], vec![[write("B", 0), RightAction::Halt]]).unwrap();
    let tr = nw_trace(&tm, &Ab::parse_word("AAB").unwrap(), 0, 10).unwrap();
    assert!(tr.halted);
    assert_eq!(tr.steps.len(), 2);
    assert_eq!(Ab::word_string(&tr.steps[1].config.tape_vec()), "BBB");
}

#[test]
fn misaligned_tape_is_reported_as_a_parity_violation() {
    let tm = example_machine();
    let mut start = encode_nw_tape(&Ab::parse_word("ABA").unwrap(), 0).unwrap();
    start.insert(2, start[2]);
    let err = nw_trace_with(&tm, start, 3, NwOptions::default()).unwrap_err();
    assert!(err.to_string().contains("parity"), "{err}");
}

#[test]
fn counter_doubles_when_the_tape_outgrows_it() {
    // always writes two cells, so the tape grows by one per step
    let tm = RightTm::new(vec!["q".into()], vec![[write("AB", 0), write("BA", 0)]]).unwrap();
    let tr = nw_trace(&tm, &Ab::parse_word("A").unwrap(), 0, 40).unwrap();
    let mut prev = 1usize;
    for (i, s) in tr.steps.iter().enumerate() {
        let n = s.config.tape.len();
        assert_eq!(n, i + 2);
        assert_eq!(s.counter, n.next_power_of_two(), "step {i}");
        assert_eq!(s.counter == 2 * prev, (n - 1).is_power_of_two(), "step {i}");
        prev = s.counter;
    }
}

#[test]
fn isolating_the_head_takes_log_counter_rounds() {
    let tm = RightTm::new(vec!["q".into()], vec![[write("AB", 0), write("A", 0)]]).unwrap();
    let tr = nw_trace(&tm, &Ab::parse_word("ABBA").unwrap(), 0, 60).unwrap();
    let mut counter = 4usize;
    for s in &tr.steps {
        assert_eq!(s.cycles, counter.trailing_zeros());
        counter = s.counter;
    }
}

fn arb_rtm() -> impl Strategy<Value = (RightTm, Vec<Ab>, usize)> {
    (1usize..4).prop_flat_map(|k| {
        let word = prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { Ab::B } else { Ab::A }), 1..3);
        let act = (word, 0..k).prop_map(|(symbols, next)| RightAction::Write { symbols, next });
        (
            prop::collection::vec([act.clone(), act], k),
            prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { Ab::B } else { Ab::A }), 1..9),
            0..k,
        )
            .prop_map(move |(rows, tape, q)| {
                let rows: Vec<[RightAction; 2]> = rows.into_iter().map(|[a, b]| [a, b]).collect();
                (RightTm::new((0..k).map(|i| format!("q{i}")).collect(), rows).unwrap(), tape, q)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn random_machines_match_the_circular_oracle((tm, tape, q) in arb_rtm()) {
        let tr = nw_trace_with(&tm, encode_nw_tape(&tape, q).unwrap(), 30, NwOptions { keep_snapshots: false, ..NwOptions::default() }).unwrap();
        let mut c = CircularConfig::new(q, &tape);
        prop_assert_eq!(tr.steps.len(), 30);
        for s in &tr.steps {
            prop_assert!(tm.step_in_place(&mut c));
            prop_assert_eq!(&s.config, &c);
            prop_assert_eq!(s.counter, c.tape.len().next_power_of_two());
        }
    }
}

#[test]
fn cost_per_step_is_within_n_log_n() {
    let tm = flip();
    let mut worst: f64 = 0.0;
    for n in [4usize, 5, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256] {
        let tape: Vec<Ab> = (0..n).map(|i| if i % 3 == 0 { Ab::B } else { Ab::A }).collect();
        let tr = nw_trace_with(&tm, encode_nw_tape(&tape, 0).unwrap(), 6, NwOptions { keep_snapshots: false, ..NwOptions::default() }).unwrap();
        let nl = n as f64 * (n as f64).log2();
        for s in &tr.steps {
            worst = worst.max(s.tag_steps as f64 / nl);
        }
    }
    assert!(worst <= COST_CONSTANT, "{worst}");
    // the bound is not slack that hides growth: the ratio settles near 9-12
    assert!(worst > 0.5 * COST_CONSTANT);
}

#[test]
fn cocke_minsky_counters_grow_exponentially_in_tape_length() {
    use forge::machines::{Action, Move, TmConfiguration, TuringMachine};
    use forge::tm2tag::compile_tm_to_tag;
    // the flip machine on a linear tape: invert and move right
    let tm = TuringMachine::from_table(
        1,
        2,
        vec![Action::Write { symbol: 1, dir: Move::Right, next: 0 }, Action::Write { symbol: 0, dir: Move::Right, next: 0 }],
    )
    .unwrap();
    let mut bits = Vec::new();
    for n in [4usize, 8, 16, 32, 64] {
        let left: Vec<usize> = (0..n).map(|i| usize::from(i % 3 == 0)).collect();
        let cfg = TmConfiguration::new(0, vec![0], left, 0, vec![], vec![0]).unwrap();
        let (_, tape) = compile_tm_to_tag(&tm, &cfg).unwrap();
        bits.push(tape.len().bits() as f64 / n as f64);
    }
    // tag tape length is at least 2^(n/2) for an n-cell tape
    assert!(bits.iter().all(|&b| b >= 0.5), "{bits:?}");
}
