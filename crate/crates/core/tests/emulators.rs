use forge::emulators::{builtin_machine, verify_ether, verify_ether_with, Builtin};
use forge::machines::Action;

#[test]
fn every_builtin_emulates_the_ether_for_120_rows() {
    for b in Builtin::ALL {
        let r = verify_ether(b, 120).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.rows, 120);
        assert!(r.cells > 30_000, "{r}");
    }
}

#[test]
fn sweeps_widen_by_a_fixed_amount_per_cycle() {
    // (cycle length, growth per cycle)
    let expect = [(Builtin::Tm2x5, 2, 14), (Builtin::Tm3x4, 3, 14), (Builtin::Tm4x3, 2, 14), (Builtin::Tm7x2, 3, 28)];
    for (b, cycle, growth) in expect {
        let w = verify_ether(b, 60).unwrap().sweep_widths;
        for k in 2..w.len() - cycle {
            assert_eq!(w[k + cycle] - w[k], growth, "{b} sweep {k}");
        }
    }
}

#[test]
fn corrupting_a_used_transition_is_caught() {
    for b in Builtin::ALL {
        let (tm, cfg) = builtin_machine(b);
        let mut caught = 0;
        let mut tried = 0;
        for q in 0..tm.states() {
            for s in 0..tm.symbols() {
                let Action::Write { symbol, dir, next } = tm.action(q, s) else { continue };
                let mut bad = tm.clone();
                bad.set_action(q, s, Action::Write { symbol: (symbol + 1) % tm.symbols(), dir, next });
                tried += 1;
                match verify_ether_with(b, &bad, &cfg, 40) {
                    Ok(r) if r.passed() => {}
                    _ => caught += 1,
                }
            }
        }
        println!("{b}: {caught} of {tried}");
        assert!(caught * 4 >= tried * 3, "{b}: {caught} of {tried} corruptions detected");
    }
}
