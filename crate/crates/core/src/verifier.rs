//! Retroconversion checks: unique decodability of a code and bounded
//! exhaustive round-trip enumeration.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::{Context, MappingTable};
use crate::transducer::{Direction, Mode, Transliterator};

type Word = Vec<char>;

/// Suffixes left over when a word of `prefixes` is a proper prefix of a word of `words`.
fn dangling(prefixes: &BTreeSet<Word>, words: &BTreeSet<Word>) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for p in prefixes {
        for w in words {
            if w.len() > p.len() && w.starts_with(p) {
                out.insert(w[p.len()..].to_vec());
            }
        }
    }
    out
}

/// Returns whether every concatenation of words from `code` factors in
/// exactly one way.
///
/// Iterates the dangling-suffix sets until one of them contains a code word
/// (ambiguous), becomes empty, or repeats (uniquely decodable). Duplicate
/// words are collapsed; an empty code is trivially decodable.
pub fn sardinas_patterson<S: AsRef<str>>(code: &[S]) -> Result<bool> {
    let words: BTreeSet<Word> = code.iter().map(|w| w.as_ref().chars().collect()).collect();
    if words.iter().any(Vec::is_empty) {
        return Err(Error::Contract("code contains the empty string".into()));
    }

    let mut seen: HashSet<BTreeSet<Word>> = HashSet::new();
    let mut current = dangling(&words, &words);
    loop {
        if current.iter().any(|s| words.contains(s)) {
            return Ok(false);
        }
        if current.is_empty() || !seen.insert(current.clone()) {
            return Ok(true);
        }
        let mut next = dangling(&words, &current);
        next.extend(dangling(&current, &words));
        current = next;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripFailure {
    pub input: String,
    pub forward_output: String,
    pub back_output: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub max_length: usize,
    pub strings_tested: u64,
    pub failures: Vec<RoundTripFailure>,
    pub passed: bool,
}

/// Rule indices usable at slot `slot` of a word made of `len` rule sources.
fn slot_candidates(table: &MappingTable, slot: usize, len: usize) -> Vec<usize> {
    let first = slot == 0;
    let last = slot + 1 == len;
    table
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| match r.context {
            Context::Any => true,
            Context::Isolated => first && last,
            Context::Initial => first,
            Context::Final => last,
            Context::Medial => !first && !last,
        })
        .map(|(i, _)| i)
        .collect()
}

/// Number of single-word rule sequences of length 1..=max_length whose
/// every rule context fits its position.
pub fn count_realizable(table: &MappingTable, max_length: usize) -> u64 {
    (1..=max_length)
        .map(|len| {
            (0..len)
                .map(|slot| slot_candidates(table, slot, len).len() as u64)
                .product::<u64>()
        })
        .sum()
}

/// Converts every word made of at most `max_length` rule sources to the
/// other script and back, and records each word that does not come back as
/// its lowercase form.
///
/// Enumeration order is lexicographic over rule indices, length by length,
/// so the failure list is deterministic. Work is split across threads on
/// the first rule of each sequence.
pub fn check_round_trip(table: &MappingTable, max_length: usize) -> Result<RoundTripReport> {
    if max_length == 0 {
        return Err(Error::Contract("max_length must be at least 1".into()));
    }
    let forward = Transliterator::new(table, Direction::LatinToAjami)?;
    let reverse = Transliterator::new(table, Direction::AjamiToLatin)?;

    let mut failures = Vec::new();
    let mut tested = 0u64;
    for len in 1..=max_length {
        let slots: Vec<Vec<usize>> = (0..len).map(|s| slot_candidates(table, s, len)).collect();
        if slots.iter().any(Vec::is_empty) {
            continue;
        }
        let chunks: Vec<(u64, Vec<RoundTripFailure>)> = slots[0]
            .par_iter()
            .map(|&first| {
                let mut local = Vec::new();
                let mut count = 0u64;
                let mut choice = vec![0usize; len];
                let mut input = String::new();
                loop {
                    input.clear();
                    input.push_str(&table.rules[first].source);
                    for slot in 1..len {
                        input.push_str(&table.rules[slots[slot][choice[slot]]].source);
                    }
                    count += 1;
                    if let Some(f) = round_trip_one(&forward, &reverse, &input) {
                        local.push(f);
                    }
                    // Odometer over slots 1..len.
                    let mut slot = len;
                    loop {
                        slot -= 1;
                        if slot == 0 {
                            return (count, local);
                        }
                        choice[slot] += 1;
                        if choice[slot] < slots[slot].len() {
                            break;
                        }
                        choice[slot] = 0;
                    }
                }
            })
            .collect();
        for (count, mut local) in chunks {
            tested += count;
            failures.append(&mut local);
        }
    }

    Ok(RoundTripReport {
        max_length,
        strings_tested: tested,
        passed: failures.is_empty(),
        failures,
    })
}

fn round_trip_one(forward: &Transliterator, reverse: &Transliterator, input: &str) -> Option<RoundTripFailure> {
    let expected = input.to_lowercase();
    let there = match forward.transliterate(input, Mode::Strict) {
        Ok((out, _)) => out,
        Err(e) => {
            return Some(RoundTripFailure {
                input: input.to_owned(),
                forward_output: format!("<error: {e}>"),
                back_output: String::new(),
            })
        }
    };
    let back = match reverse.transliterate(&there, Mode::Strict) {
        Ok((out, _)) => out,
        Err(e) => format!("<error: {e}>"),
    };
    (back != expected).then(|| RoundTripFailure {
        input: input.to_owned(),
        forward_output: there,
        back_output: back,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Rule;

    #[test]
    fn sp_small_codes() {
        assert!(!sardinas_patterson(&["x", "xy", "y"]).unwrap());
        assert!(sardinas_patterson(&["0", "10", "110"]).unwrap());
        assert!(sardinas_patterson(&["a"]).unwrap());
        // Suffix code that is not a prefix code.
        assert!(sardinas_patterson(&["0", "01", "11"]).unwrap());
        assert!(sardinas_patterson::<&str>(&[]).unwrap());
    }

    #[test]
    fn sp_rejects_empty_word() {
        assert!(matches!(sardinas_patterson(&["a", ""]), Err(Error::Contract(_))));
    }

    #[test]
    fn sp_duplicates_collapse() {
        assert!(sardinas_patterson(&["ab", "ab", "c"]).unwrap());
    }

    fn any(s: &str, t: &str) -> Rule {
        Rule::new(s, t, Context::Any)
    }

    #[test]
    fn ambiguous_table_fails_round_trip() {
        let table = MappingTable::new("t", vec![any("a", "x"), any("b", "xy"), any("c", "y")]);
        let report = check_round_trip(&table, 2).unwrap();
        assert!(!report.passed);
        assert_eq!(report.strings_tested, 3 + 9);
        let inputs: Vec<&str> = report.failures.iter().map(|f| f.input.as_str()).collect();
        // "ac" -> "xy", which reads back greedily as "b".
        assert_eq!(inputs, ["ac"]);
        assert_eq!(report.failures[0].forward_output, "xy");
        assert_eq!(report.failures[0].back_output, "b");
    }

    #[test]
    fn empty_table_is_vacuous() {
        let report = check_round_trip(&MappingTable::new("t", vec![]), 3).unwrap();
        assert_eq!(report.strings_tested, 0);
        assert!(report.passed);
    }

    #[test]
    fn zero_length_is_contract_error() {
        let table = MappingTable::new("t", vec![any("a", "x")]);
        assert!(matches!(check_round_trip(&table, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn context_free_count_is_geometric() {
        let table = MappingTable::new("t", vec![any("a", "x"), any("b", "y"), any("c", "z")]);
        let report = check_round_trip(&table, 4).unwrap();
        assert_eq!(report.strings_tested, 3 + 9 + 27 + 81);
        assert_eq!(count_realizable(&table, 4), 120);
        assert!(report.passed);
    }

    #[test]
    fn context_restricted_count() {
        let table = MappingTable::new(
            "t",
            vec![
                any("a", "x"),
                Rule::new("a", "Ix", Context::Initial),
                Rule::new("b", "Fy", Context::Final),
                Rule::new("c", "Mz", Context::Medial),
                Rule::new("d", "Sw", Context::Isolated),
            ],
        );
        // len 1: a, a/initial, b/final, d/isolated = 4
        // len 2: {a, aI} x {a, bF} = 4
        // len 3: {a, aI} x {a, cM} x {a, bF} = 8
        assert_eq!(count_realizable(&table, 3), 16);
        assert_eq!(check_round_trip(&table, 3).unwrap().strings_tested, 16);
    }

    #[test]
    fn failing_length_stays_failing() {
        let table = MappingTable::new("t", vec![any("a", "x"), any("b", "xy"), any("c", "y")]);
        assert!(check_round_trip(&table, 1).unwrap().passed);
        for n in 2..=4 {
            assert!(!check_round_trip(&table, n).unwrap().passed, "n = {n}");
        }
    }
}
