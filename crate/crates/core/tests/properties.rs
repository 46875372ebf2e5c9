//! Randomized invariant checks across the library modules.

use billiard_words::classes::{self, class_adjacency_check};
use billiard_words::qcycle::{self, Parameters, QcycleError};
use billiard_words::recognizer::{self, RecognitionResult};
use billiard_words::wordgen::{
    self, expand_a2, expand_b2, expand_d2, expand_g2, minimal_cyclic_period, TableKind, A2_RULE,
    B2_RULE, D2_RULE,
};
use num_integer::Integer;
use proptest::prelude::*;

fn admissible(n: u64, q: u64) -> bool {
    q >= 1 && n.gcd(&q) == 1 && (2 * q < n || (n, q) == (2, 1))
}

/// A uniformly chosen valid parameter pair with n bounded.
fn admissible_pair(max_n: u64) -> impl Strategy<Value = (u64, u64)> {
    (2..=max_n).prop_flat_map(|n| {
        let qs: Vec<u64> = (1..=n / 2).filter(|&q| admissible(n, q)).collect();
        (Just(n), proptest::sample::select(qs))
    })
}

fn any_rule() -> impl Strategy<Value = wordgen::StepRule> {
    prop_oneof![Just(A2_RULE), Just(B2_RULE), Just(D2_RULE)]
}

fn any_table() -> impl Strategy<Value = TableKind> {
    proptest::sample::select(&TableKind::ALL[..])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn gate_matches_predicate(n in 0u64..80, q in 0u64..80) {
        let ok = Parameters::new(n, q).is_ok();
        prop_assert_eq!(ok, n >= 2 && admissible(n, q));
    }

    #[test]
    fn decomposition_partitions_the_residues((n, q) in admissible_pair(60)) {
        let s = qcycle::decompose(n, q).unwrap();
        let p = s.params;
        prop_assert_eq!((p.n, p.q, p.b, p.r), (n, q, n / q, n % q));

        // Cycles partition 0..n.
        let mut seen = vec![false; n as usize];
        for c in &s.cycles {
            for &e in &c.elements {
                prop_assert!(e < n);
                prop_assert!(!seen[e as usize], "element {} repeated", e);
                seen[e as usize] = true;
            }
        }
        prop_assert!(seen.iter().all(|&b| b));

        // Each cycle is an arithmetic progression of step q that never
        // wraps, its minimum decides its length, and traversal order
        // follows the (-k*r) mod q law.
        for (k, c) in s.cycles.iter().enumerate() {
            prop_assert_eq!(c.min, *c.elements.iter().min().unwrap());
            prop_assert!(c.min < q);
            for w in c.elements.windows(2) {
                prop_assert_eq!(w[1], w[0] + q);
            }
            let expected_len = if c.min < p.r { p.b + 1 } else { p.b };
            prop_assert_eq!(c.elements.len() as u64, expected_len);
            prop_assert_eq!(c.min, (k as u64 * (q - p.r)) % q);
            // The element following the cycle's last is the successor
            // cycle's minimum.
            let next = (c.elements.last().unwrap() + q) % n;
            prop_assert_eq!(next, p.successor_min(c.min).unwrap());
        }

        // Minima are exactly the residues 0..q.
        let mut mins: Vec<u64> = s.cycles.iter().map(|c| c.min).collect();
        mins.sort_unstable();
        prop_assert_eq!(mins, (0..q).collect::<Vec<_>>());
    }

    #[test]
    fn euclid_construction_matches_decomposition((n, q) in admissible_pair(60)) {
        let a = qcycle::decompose(n, q).unwrap();
        let b = qcycle::euclid_construct(n, q).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn shift_rotates_lengths_and_has_order_q((n, q) in admissible_pair(48)) {
        let start = qcycle::decompose(n, q).unwrap();
        let p = start.params;
        let mut s = start.clone();
        for step in 1..=q {
            let next = s.shift();
            prop_assert_eq!(next.anchor(), step % q);
            if q >= 2 {
                // Lengths rotate right by p = r^{-1} (mod q) each step...
                let inv = (1..q).find(|&x| (x * p.r) % q == 1).unwrap() as usize;
                let prev = s.lengths();
                let rotated: Vec<u64> = (0..prev.len())
                    .map(|i| prev[(i + prev.len() - inv) % prev.len()])
                    .collect();
                prop_assert_eq!(&next.lengths(), &rotated);
                // ...which is also one adjacent transposition.
                let diff: Vec<usize> =
                    (0..prev.len()).filter(|&i| prev[i] != next.lengths()[i]).collect();
                prop_assert_eq!(diff.len(), 2);
                let (a, b) = (diff[0], diff[1]);
                prop_assert!(b == a + 1 || (a == 0 && b == prev.len() - 1));
            }
            if step < q {
                prop_assert_ne!(&next, &start, "shift order smaller than q");
            }
            s = next;
        }
        prop_assert_eq!(s, start);
    }

    #[test]
    fn reduced_words_are_primitive_and_recognized(
        (n, q) in admissible_pair(48),
        rule in any_rule(),
    ) {
        let s = qcycle::decompose(n, q).unwrap();
        let word = wordgen::reduced_word(&s, &rule);
        let passes = rule.passes(&s.params);
        prop_assert_eq!(word.digits.len() as u64, n * passes);
        prop_assert_eq!(minimal_cyclic_period(&word.digits), word.digits.len());
        prop_assert_eq!(word.digits[0], 0);
        match recognizer::recognize_cyclic(&word.digits, &rule) {
            RecognitionResult::Accept(acc) => {
                prop_assert_eq!((acc.n, acc.q), (n, q));
                prop_assert_eq!((acc.member, acc.rotation), (0, 0));
            }
            RecognitionResult::Reject(r) => prop_assert!(false, "rejected: {}", r),
        }
    }

    #[test]
    fn full_words_are_primitive_and_expansions_round_trip(
        (n, q) in admissible_pair(40),
        table in any_table(),
    ) {
        let full = wordgen::word_of_direction(table, n, q).unwrap();
        let reduced = wordgen::reduced_word_of_direction(table, n, q).unwrap();
        prop_assert_eq!(full.digits.len(), 2 * reduced.digits.len());
        prop_assert_eq!(minimal_cyclic_period(&full.digits), full.digits.len());
        let rebuilt = match table {
            TableKind::A2 => expand_a2(&reduced).unwrap(),
            TableKind::B2 => expand_b2(&reduced).unwrap(),
            TableKind::G2 => expand_g2(&reduced).unwrap(),
            TableKind::D2 => {
                let (w03, w12) = wordgen::d2_stream_words(n, q).unwrap();
                expand_d2(&w03, &w12).unwrap()
            }
        };
        prop_assert_eq!(rebuilt.digits, full.digits);
    }

    #[test]
    fn recognition_is_rotation_invariant(
        (n, q) in admissible_pair(36),
        table in any_table(),
        rot in 0usize..1000,
    ) {
        let full = wordgen::word_of_direction(table, n, q).unwrap();
        let len = full.digits.len();
        let rotated: Vec<u8> = (0..len).map(|i| full.digits[(rot + i) % len]).collect();
        match recognizer::recognize_table(&rotated, table) {
            RecognitionResult::Accept(acc) => prop_assert_eq!((acc.n, acc.q), (n, q)),
            RecognitionResult::Reject(r) => prop_assert!(false, "rejected: {}", r),
        }

        let rule = table.reduced_rule();
        let reduced = wordgen::reduced_word_of_direction(table, n, q).unwrap();
        let rlen = reduced.digits.len();
        let rrot: Vec<u8> = (0..rlen).map(|i| reduced.digits[(rot + i) % rlen]).collect();
        let a = recognizer::recognize_cyclic(&rrot, &rule);
        let b = recognizer::recognize_bruteforce(&rrot, &rule);
        prop_assert_eq!(&a, &b);
        match a {
            RecognitionResult::Accept(acc) => prop_assert_eq!((acc.n, acc.q), (n, q)),
            RecognitionResult::Reject(r) => prop_assert!(false, "reduced rejected: {}", r),
        }
    }

    #[test]
    fn recognizers_agree_on_arbitrary_strings(
        rule in any_rule(),
        digits in proptest::collection::vec(0u8..4, 1..60),
    ) {
        // Digits may exceed the rule's alphabet; both recognizers must
        // still return identical verdicts.
        let a = recognizer::recognize_cyclic(&digits, &rule);
        let b = recognizer::recognize_bruteforce(&digits, &rule);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn divisor_scan_period_matches_naive_scan(
        digits in proptest::collection::vec(0u8..3, 1..48),
    ) {
        let len = digits.len();
        let naive = (1..=len)
            .find(|&d| (0..len).all(|i| digits[i] == digits[(i + d) % len]))
            .unwrap();
        prop_assert_eq!(minimal_cyclic_period(&digits), naive);
    }

    #[test]
    fn classes_have_q_adjacent_members(
        (n, q) in admissible_pair(40),
        rule in any_rule(),
    ) {
        let params = Parameters::new(n, q).unwrap();
        let class = classes::translation_class(params, &rule);
        prop_assert_eq!(class.members.len() as u64, q);
        let check = class_adjacency_check(&class);
        prop_assert!(check.ok);
        prop_assert_eq!(check.witnesses.len(), if q >= 2 { q as usize } else { 0 });
        for member in &class.members {
            match recognizer::recognize_cyclic(&member.word.digits, &rule) {
                RecognitionResult::Accept(acc) => prop_assert_eq!((acc.n, acc.q), (n, q)),
                RecognitionResult::Reject(r) => prop_assert!(false, "member rejected: {}", r),
            }
        }
    }

    #[test]
    fn invalid_parameters_are_rejected_everywhere(n in 0u64..40, q in 0u64..40) {
        prop_assume!(!(n >= 2 && admissible(n, q)));
        let rejected = matches!(
            qcycle::decompose(n, q),
            Err(QcycleError::ZeroN)
                | Err(QcycleError::ZeroQ)
                | Err(QcycleError::NotCoprime { .. })
                | Err(QcycleError::RatioTooLarge { .. })
        );
        prop_assert!(rejected);
        for table in TableKind::ALL {
            prop_assert!(wordgen::word_of_direction(table, n, q).is_err());
        }
    }
}
