use proptest::prelude::*;

use lrc_avail::analysis::{
    certify_search, certify_structural, construction_rate, construction_rate_at_simplex_params,
    direct_product_rate, ratio, simplex_rate, tamo_rate_bound,
};
use lrc_avail::codec::{
    encode, ge_decode, peel_decode, peel_decode_with_order, systematize, ErasurePattern, PeelOrder,
    ReceivedWord,
};
use lrc_avail::combinatorics::{rank, unrank};
use lrc_avail::constructions::{build_reduced_parity, LinearCode};
use lrc_avail::gf2::{BitMatrix, BitVector};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), cols), rows).prop_map(
            move |bits| {
                let rows: Vec<BitVector> = bits.iter().map(|r| BitVector::from_bools(r)).collect();
                BitMatrix::from_rows(cols, &rows).unwrap()
            },
        )
    })
}

fn small_rt() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 1usize..=5).prop_filter("r+t <= 7", |(r, t)| r + t <= 7)
}

/// A construction code, a message, and an erasure set of size at most `t`.
fn code_case() -> impl Strategy<Value = (usize, usize, Vec<bool>, Vec<usize>)> {
    small_rt().prop_flat_map(|(r, t)| {
        let code = build_reduced_parity(r, t).unwrap();
        let (n, k) = (code.n(), code.k());
        (
            Just(r),
            Just(t),
            proptest::collection::vec(any::<bool>(), k),
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=t),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_is_transpose_invariant(m in matrix(12, 70)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rref_is_idempotent(m in matrix(12, 70)) {
        let (once, pivots) = m.rref();
        let (twice, again) = once.rref();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(pivots, again);
    }

    #[test]
    fn nullspace_is_kernel_with_full_dimension(m in matrix(12, 70)) {
        let basis = m.nullspace_basis();
        prop_assert_eq!(basis.rows() + m.rank(), m.cols());
        prop_assert!(m.mul_transpose(&basis).unwrap().is_zero());
        prop_assert_eq!(basis.rank(), basis.rows());
    }

    #[test]
    fn subset_rank_round_trip(m in 1usize..=30, k in 0usize..=30, seed in any::<u64>()) {
        prop_assume!(k <= m);
        let count = lrc_avail::combinatorics::binomial(m, k).unwrap();
        let r = seed % count;
        let s = unrank(m, k, r).unwrap();
        prop_assert_eq!(rank(m, &s).unwrap(), r);
    }

    #[test]
    fn ge_decode_recovers_below_distance((r, t, msg, erased) in code_case()) {
        let code = build_reduced_parity(r, t).unwrap();
        let g = systematize(&code).matrix;
        let c = encode(&g, &BitVector::from_bools(&msg)).unwrap();
        let pattern = ErasurePattern::new(code.n(), erased).unwrap();
        let word = ReceivedWord::erase(&c, &pattern).unwrap();
        prop_assert_eq!(ge_decode(&code, &word).unwrap(), c);
    }

    #[test]
    fn peeling_agrees_with_ge_in_both_orders((r, t, msg, erased) in code_case()) {
        let code = build_reduced_parity(r, t).unwrap();
        let cert = certify_structural(r + t, t).unwrap();
        let g = systematize(&code).matrix;
        let c = encode(&g, &BitVector::from_bools(&msg)).unwrap();
        let pattern = ErasurePattern::new(code.n(), erased).unwrap();
        let word = ReceivedWord::erase(&c, &pattern).unwrap();
        let up = peel_decode(&cert, &word);
        let down = peel_decode_with_order(&cert, &word, PeelOrder::Descending);
        prop_assert_eq!(up.word.to_codeword(), Some(c.clone()));
        prop_assert_eq!(&up.word, &down.word);
        prop_assert_eq!(up.rounds, down.rounds);
        prop_assert_eq!(ge_decode(&code, &word).unwrap(), c);
    }

    #[test]
    fn peeling_never_contradicts_ge(
        (r, t) in small_rt(),
        seed in any::<u64>(),
        extra in 1usize..=6,
    ) {
        // Beyond t erasures peeling may stall but must never guess wrong.
        let code = build_reduced_parity(r, t).unwrap();
        let n = code.n();
        let size = (t + extra).min(n);
        let cert = certify_structural(r + t, t).unwrap();
        let g = systematize(&code).matrix;
        let msg: Vec<bool> = (0..code.k()).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let c = encode(&g, &BitVector::from_bools(&msg)).unwrap();
        let count = lrc_avail::combinatorics::binomial(n, size).unwrap();
        let erased = unrank(n, size, seed % count).unwrap();
        let pattern = ErasurePattern::new(n, erased.elements().iter().map(|e| e - 1)).unwrap();
        let word = ReceivedWord::erase(&c, &pattern).unwrap();
        let up = peel_decode(&cert, &word);
        let down = peel_decode_with_order(&cert, &word, PeelOrder::Descending);
        prop_assert_eq!(&up.word, &down.word);
        for i in 0..n {
            if let Some(v) = up.word.get(i) {
                prop_assert_eq!(v, c.get(i));
            }
        }
    }

    #[test]
    fn rate_dominance_chain(r in 1usize..=16, t in 1usize..=16) {
        let product = direct_product_rate(r, t);
        let ours = construction_rate(r, t);
        let bound = tamo_rate_bound(r, t);
        prop_assert_eq!(&ours, &ratio(r, r + t));
        if t > 1 {
            prop_assert!(product < ours);
        } else {
            prop_assert_eq!(&product, &ours);
        }
        prop_assert!(ours <= bound);
    }

    #[test]
    fn simplex_beats_construction(m in 3usize..=16) {
        prop_assert!(simplex_rate(m) > construction_rate_at_simplex_params(m));
    }

    #[test]
    fn structural_and_search_certificates_agree((r, t) in (1usize..=7, 1usize..=7).prop_filter("r+t <= 8", |(r, t)| r + t <= 8)) {
        let code = build_reduced_parity(r, t).unwrap();
        let structural = certify_structural(r + t, t).unwrap();
        structural.validate(&code).unwrap();
        let searched = certify_search(&code, r, t).unwrap();
        searched.validate(&code).unwrap();
        prop_assert_eq!(structural.n(), searched.n());
        // The same certificate is valid for the redundant full matrix too.
        let full = LinearCode::from_parity(lrc_avail::constructions::build_h(r + t, t).unwrap());
        structural.validate(&full).unwrap();
    }
}
