use forge::r110::*;
use proptest::prelude::*;

fn bits(v: &[bool]) -> BitRow {
    BitRow::from_bits(v.iter().copied())
}

#[test]
fn ether_shift_after_seven_steps() {
    // Each step moves the ether 4 cells left (10 mod 14), so seven steps
    // move it 28 cells, a whole number of periods. Frozen from a separate
    // cyclic-word simulation.
    let mut s = Rule110State::periodic(BitRow::parse(ETHER).unwrap()).unwrap();
    let start = s.clone();
    let mut e = Engine::new();
    let mut seen = Vec::new();
    for _ in 0..7 {
        e.step(&mut s);
        let shifts: Vec<i64> = (0..14).filter(|&dx| s.same_row(&start.translated(dx))).collect();
        assert_eq!(shifts.len(), 1);
        seen.push(shifts[0]);
    }
    assert_eq!(seen, vec![10, 6, 2, 12, 8, 4, 0]);
    assert!(s.same_row(&start.translated(-28)));
}

#[test]
fn ether_is_quiet_for_a_long_time() {
    let ether = BitRow::parse(ETHER).unwrap();
    let mut s = Rule110State::periodic(ether).unwrap();
    let r = run_until_halt(&mut s, &mut Engine::new(), 100_000, HaltOptions::default());
    assert!(!r.halted);
    assert_eq!(r.steps, 100_000);
}

#[test]
fn periodic_sides_keep_their_period() {
    let w = BitRow::parse("1001101110").unwrap();
    let mut s = Rule110State::new(w.clone(), BitRow::parse("11100").unwrap(), w.clone()).unwrap();
    let mut e = Engine::new();
    for _ in 0..100 {
        e.step(&mut s);
        assert_eq!(s.left.len(), 10);
        assert_eq!(s.right.len(), 10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn packed_engine_matches_brute_force(
        left in prop::collection::vec(any::<bool>(), 1..20),
        center in prop::collection::vec(any::<bool>(), 0..150),
        right in prop::collection::vec(any::<bool>(), 1..20),
        lp in 0usize..20, rp in 0usize..20,
        renorm in prop_oneof![Just(0u64), Just(1), Just(7), Just(64)],
    ) {
        let start = Rule110State::with_phases(bits(&left), lp, bits(&center), bits(&right), rp, -37).unwrap();
        let mut s = start.clone();
        let mut e = Engine::new();
        e.renormalize_every = renorm;
        let steps = 300;
        for t in 1..=steps {
            e.step(&mut s);
            if t % 60 == 0 {
                let (x0, x1) = (-37 - 2 * t as i64 - 40, 200 + 2 * t as i64);
                prop_assert_eq!(s.window(x0, x1), brute_force_window(&start, t, x0, x1));
            }
        }
    }
}

fn pseudo_random_row(n: usize, mut seed: u64) -> BitRow {
    BitRow::from_bits((0..n).map(|_| {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        seed >> 63 == 1
    }))
}

#[test]
fn long_sides_match_brute_force() {
    // an ether side long enough to be tracked for cycles, and a random one
    let ether = BitRow::parse(&ETHER.repeat(400)).unwrap();
    let noise = pseudo_random_row(5000, 7);
    let center = pseudo_random_row(300, 11);
    for (left, right) in [(ether.clone(), noise.clone()), (noise, ether)] {
        let start = Rule110State::with_phases(left, 123, center.clone(), right, 45, -17).unwrap();
        let mut s = start.clone();
        let mut e = Engine::new();
        for t in 1..=90usize {
            e.step(&mut s);
            if t % 15 == 0 {
                assert_eq!(s.window(-400, 700), brute_force_window(&start, t, -400, 700), "step {t}");
            }
        }
    }
}

#[test]
fn a_detected_cycle_keeps_the_row_exact() {
    let ether = BitRow::parse(&ETHER.repeat(350)).unwrap();
    let start = Rule110State::with_phases(ether.clone(), 5, BitRow::parse("1101").unwrap(), ether, 9, 0).unwrap();
    let mut s = start.clone();
    let mut e = Engine::new();
    e.run(&mut s, 200);
    assert_eq!(s.window(-300, 300), brute_force_window(&start, 200, -300, 300));
}
