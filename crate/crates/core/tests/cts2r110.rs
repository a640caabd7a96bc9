use forge::cts2r110::{
    assemble_state, block_string, bundled_library, center_block_string, compute_v, derive_library,
    evolution_consistency, glider_spacetime, right_block_string, validate_block_library, BlockId, BlockLibrary,
    IssueKind, BUNDLED_LIBRARY, E_BAR, GLIDER_A,
};
use forge::machines::{CtsState, CyclicTagSystem};
use forge::r110::{local_rule, BitRow, Engine, Rule110State, ETHER};
use forge::tag2cts::normalize_cts_mod6;
use forge::Error;
use proptest::prelude::*;

fn yn(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == 'Y').collect()
}

fn cts(words: &[&str]) -> CyclicTagSystem {
    CyclicTagSystem::from_strs(words).unwrap()
}

#[test]
fn center_string_of_the_worked_tape() {
    assert_eq!(block_string(&center_block_string(&yn("NNYN")).unwrap()), "ℂ𝔼𝔻𝔼𝔻𝔽𝔻𝔼𝔾");
}

#[test]
fn right_string_of_the_worked_system() {
    let sys = cts(&["YN", "NYYN", "", ""]);
    assert_eq!(block_string(&right_block_string(&sys).unwrap()), "ℍ𝕀𝕀𝕁𝕂ℍ𝕁𝕀𝕀𝕀𝕀𝕀𝕁𝕃𝕃𝕂");
    assert_eq!(block_string(&right_block_string(&cts(&["Y"])).unwrap()), "ℍ𝕀𝕂");
}

#[test]
fn an_empty_first_appendant_is_unsupported() {
    assert!(matches!(right_block_string(&cts(&["", "Y"])), Err(Error::Unsupported(_))));
}

#[test]
fn v_counts() {
    // three Ys, three Ns, two nonempty, two empty
    assert_eq!(compute_v(&cts(&["YN", "NYYN", "", ""])), 76 * 3 + 80 * 3 + 60 * 2 + 43 * 2);
    assert_eq!(compute_v(&cts(&["YN", "NYYN", "", ""])), 674);
    assert_eq!(compute_v(&cts(&["YYYYYY", "", "NNNNNN", ""])), 1142);
    for k in 1..6 {
        assert_eq!(compute_v(&cts(&vec![""; k])), 43 * k as u64);
    }
}

/// Rewrites the Y/N text of each appendant as the prose describes it.
fn right_by_rewriting(words: &[&str]) -> String {
    let mut s = String::new();
    for w in words {
        if w.is_empty() {
            s.push('L');
        } else {
            let t = w.replace('Y', "ii").replace('N', "ij");
            s += &t.replacen('i', "KH", 1).to_uppercase();
        }
    }
    let (k, rest) = s.split_at(1);
    assert_eq!(k, "K");
    format!("{rest}K")
}

fn appendant() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('Y'), Just('N')], 0..5).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #[test]
    fn center_has_two_blocks_per_symbol(tape in proptest::collection::vec(any::<bool>(), 1..40)) {
        let ids = center_block_string(&tape).unwrap();
        prop_assert_eq!(ids.len(), 2 * tape.len() + 1);
        prop_assert_eq!(ids[0], BlockId::C);
        prop_assert_eq!(*ids.last().unwrap(), BlockId::G);
    }

    #[test]
    fn right_string_matches_textual_rewriting(
        first in "[YN]{1,4}",
        rest in proptest::collection::vec(appendant(), 0..5),
    ) {
        let mut words = vec![first.as_str()];
        words.extend(rest.iter().map(|s| s.as_str()));
        let got: String = right_block_string(&cts(&words)).unwrap().iter().map(|b| b.letter()).collect();
        prop_assert_eq!(got, right_by_rewriting(&words));
    }
}

/// Plain per-cell evolution, independent of the packed rows.
fn evolve_cells(row: &[bool], steps: usize) -> Vec<bool> {
    let mut r = row.to_vec();
    for _ in 0..steps {
        r = (1..r.len() - 1).map(|i| local_rule(r[i - 1], r[i], r[i + 1])).collect();
    }
    r
}

fn seed_row(core: &str, al: usize, ar: usize, pad: usize) -> Vec<bool> {
    let e: Vec<bool> = ETHER.chars().map(|c| c == '1').collect();
    let n = core.len() as i64;
    (-(pad as i64)..n + pad as i64)
        .map(|y| {
            if y < 0 {
                e[(y + al as i64).rem_euclid(14) as usize]
            } else if y >= n {
                e[(y + ar as i64).rem_euclid(14) as usize]
            } else {
                core.as_bytes()[y as usize] == b'1'
            }
        })
        .collect()
}

#[test]
fn seeds_repeat_with_their_stated_displacement() {
    for (seed, steps) in [(E_BAR, 30usize), (GLIDER_A, 3)] {
        let pad = 200;
        let row = seed_row(seed.core, seed.left_align as usize, seed.right_align as usize, pad);
        let later = evolve_cells(&row, steps);
        // later[i] is cell i + steps of the original window
        let shift = seed.shift;
        let window = 60i64;
        for y in -window..window {
            let now = row[(y + pad as i64) as usize];
            let then = later[(y + shift + pad as i64 - steps as i64) as usize];
            assert_eq!(now, then, "{} cell {y}", seed.name);
        }
        assert!(glider_spacetime(seed).is_ok());
    }
}

#[test]
fn bundled_library_is_the_derived_one() {
    assert_eq!(BUNDLED_LIBRARY, derive_library().unwrap().write());
}

#[test]
fn bundled_library_validates() {
    let issues = validate_block_library(&bundled_library());
    assert!(issues.is_empty(), "{issues:?}");
}

#[test]
fn library_round_trips_through_its_file_format() {
    let lib = bundled_library();
    assert_eq!(BlockLibrary::parse(&lib.write()).unwrap(), lib);
}

#[test]
fn tampering_breaks_the_checksum() {
    let text = BUNDLED_LIBRARY.replacen("block E fast fast\n0 ", "block E fast fast\n1 ", 1);
    assert_ne!(text, BUNDLED_LIBRARY);
    assert!(matches!(BlockLibrary::parse(&text), Err(Error::CorruptLibrary(_))));
}

#[test]
fn a_flipped_bit_is_caught_at_its_row() {
    let mut lib = bundled_library();
    let row = 17;
    let e = lib.blocks.get_mut(&BlockId::E).unwrap();
    let mid = e.rows[row].len() / 2;
    let b = e.rows[row].get(mid);
    e.rows[row].set(mid, !b);
    let issues = validate_block_library(&lib);
    assert!(!issues.is_empty());
    assert!(issues.iter().all(|i| i.block == BlockId::E || i.kind == IssueKind::Join), "{issues:?}");
    assert!(
        issues.iter().any(|i| i.block == BlockId::E && i.kind == IssueKind::Interior && (i.row == row || i.row == row - 1)),
        "{issues:?}"
    );
}

#[test]
fn a_period_two_block_is_caught() {
    let mut lib = bundled_library();
    let a = lib.blocks.get_mut(&BlockId::A).unwrap();
    a.rows.truncate(2);
    a.left_phase.truncate(2);
    a.right_phase.truncate(2);
    let issues = validate_block_library(&lib);
    assert!(issues.iter().any(|i| i.block == BlockId::A && i.kind == IssueKind::Periodicity), "{issues:?}");
}

#[test]
fn a_missing_block_is_reported() {
    let mut lib = bundled_library();
    lib.blocks.remove(&BlockId::L);
    assert!(validate_block_library(&lib).iter().any(|i| i.block == BlockId::L && i.kind == IssueKind::Missing));
}

fn one_symbol_system() -> (CyclicTagSystem, CtsState) {
    normalize_cts_mod6(&cts(&["YN", "NYYN"]), &CtsState::from_str("Y").unwrap())
}

#[test]
fn assembly_rejects_unnormalized_systems() {
    let lib = bundled_library();
    let err = assemble_state(&cts(&["YN"]), &CtsState::from_str("Y").unwrap(), &lib).unwrap_err();
    assert!(matches!(err, Error::Invalid(_)));
}

#[test]
fn one_symbol_state_evolves_as_the_blocks_predict() {
    let lib = bundled_library();
    let (sys, tape) = one_symbol_system();
    let asm = assemble_state(&sys, &tape, &lib).unwrap();
    for margin in [0, 60] {
        let c = evolution_consistency(&asm, &lib, 30, margin);
        assert!(c.holds(), "margin {margin}: {c:?}");
    }
}

#[test]
fn left_side_repeats_after_three_passes() {
    let lib = bundled_library();
    let (sys, tape) = one_symbol_system();
    let asm = assemble_state(&sys, &tape, &lib).unwrap();
    assert_eq!(asm.left_traversals, 3);
    let widths: i64 = asm.left.iter().map(|p| lib.blocks[&p.block].rows[p.row].len() as i64).sum();
    assert_eq!(widths, asm.left_period());
}

#[test]
fn right_side_period_is_whole_traversals() {
    let lib = bundled_library();
    let (sys, tape) = one_symbol_system();
    let asm = assemble_state(&sys, &tape, &lib).unwrap();
    let ids = right_block_string(&sys).unwrap();
    assert!((1..=30).contains(&asm.right_traversals));
    assert_eq!(asm.right.len(), ids.len() * asm.right_traversals);
    let widths: i64 = asm.right.iter().map(|p| lib.blocks[&p.block].rows[p.row].len() as i64).sum();
    assert_eq!(widths, asm.right_period());
}

#[test]
fn left_word_is_ether_periodic() {
    let lib = bundled_library();
    let (sys, tape) = one_symbol_system();
    let asm = assemble_state(&sys, &tape, &lib).unwrap();
    let start = Rule110State::periodic(asm.state.left.clone()).unwrap();
    let mut s = start.clone();
    Engine::new().run(&mut s, 3);
    let n = asm.left_period();
    assert_eq!(s.window(0, n), start.window(-2, n - 2));
    assert_ne!(s.window(0, n), start.window(0, n));
}

#[test]
fn center_starts_with_the_t0_row_of_c() {
    let lib = bundled_library();
    let (sys, tape) = one_symbol_system();
    let asm = assemble_state(&sys, &tape, &lib).unwrap();
    let c = &lib.blocks[&BlockId::C];
    let row: &BitRow = &c.rows[c.t0_row.unwrap()];
    assert_eq!(asm.state.center.slice(0, row.len()), *row);
    let ids: Vec<BlockId> = asm.center.iter().map(|p| p.block).collect();
    assert_eq!(block_string(&ids), "ℂ𝔽𝔻𝔼𝔻𝔼𝔻𝔼𝔻𝔼𝔻𝔼𝔾");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn assembled_states_evolve_consistently(
        first in "[YN]{1,3}",
        rest in proptest::collection::vec(appendant(), 0..3),
        tape in "[YN]{1,4}",
    ) {
        let lib = bundled_library();
        let mut words = vec![first.as_str()];
        words.extend(rest.iter().map(|s| s.as_str()));
        let (sys, st) = normalize_cts_mod6(&cts(&words), &CtsState::from_str(&tape).unwrap());
        let asm = assemble_state(&sys, &st, &lib).unwrap();
        prop_assert_eq!(asm.left_traversals, 3);
        let c = evolution_consistency(&asm, &lib, 12, 0);
        prop_assert!(c.holds(), "{:?}", c);
    }
}
