use btn_core::approx::{block_pattern, count_patterns, predict_with_pattern};
use btn_core::bounds::{lower_bound_applies, perfect_size, size_meets_lower_bound};
use btn_core::perfect::{active_gammas, perfect_decoder_net};
use btn_core::verify::approx_error_bound;
use btn_core::*;
use proptest::prelude::*;

fn random_set(n: usize, dim: usize, seed: u64) -> VectorSet {
    gen_random_set(&InstanceSpec::uniform(n, dim, seed)).unwrap()
}

fn unit_strategy(max_fan_in: usize) -> impl Strategy<Value = ThresholdUnit> {
    (1..=max_fan_in)
        .prop_flat_map(|m| (prop::collection::vec(-8i64..=8, m), -10i64..=10))
        .prop_map(|(w, t)| ThresholdUnit::new(w, t))
}

proptest! {
    #[test]
    fn unit_monotone_in_weight_sign(unit in unit_strategy(6)) {
        let m = unit.fan_in();
        for x in 0..1u64 << m {
            let input = BitVec::from_int(x, m).unwrap();
            let base = unit.eval(&input).unwrap();
            for i in 0..m {
                if input.get(i) {
                    continue;
                }
                let mut raised = input.clone();
                raised.set(i, true);
                let up = unit.eval(&raised).unwrap();
                if unit.weights[i] >= 0 {
                    prop_assert!(up >= base);
                } else {
                    prop_assert!(up <= base);
                }
            }
        }
    }

    #[test]
    fn eval_is_pure(seed in any::<u64>(), k in 0usize..40) {
        let x = random_set(40, 9, seed);
        let bundle = build_perfect_decoder(&x, 4).unwrap();
        let code = bundle.code(k).unwrap();
        let a = bundle.decoder.eval_trace(&code).unwrap();
        let b = bundle.decoder.eval_trace(&code).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn perfect_recovery(n in 2usize..200, dim in 1usize..24, b_exp in 1u32..5, seed in any::<u64>()) {
        let dim = dim.max(8);
        let b = (1usize << b_exp).min(n);
        let x = random_set(n, dim, seed);
        let bundle = build_perfect_decoder(&x, b).unwrap();
        let report = verify_perfect(&bundle, &x).unwrap();
        prop_assert_eq!(report.total(), 0);
    }

    #[test]
    fn perfect_recovery_any_block(n in 2usize..80, b in 2usize..12, seed in any::<u64>()) {
        prop_assume!(b <= n);
        let x = random_set(n, 10, seed);
        let bundle = build_perfect_decoder(&x, b).unwrap();
        prop_assert!(verify_perfect(&bundle, &x).unwrap().satisfied);
    }

    #[test]
    fn y_layer_fires_only_at_offset(n in 4usize..120, b_exp in 1u32..4, seed in any::<u64>()) {
        let b = 1usize << b_exp;
        prop_assume!(b <= n);
        let dim = 12;
        let x = random_set(n, dim, seed);
        let net = perfect_decoder_net(&x, b).unwrap();
        let d = code_width(n);
        for k in 0..n {
            let (_, trace) = net.eval_trace(&BitVec::from_int(k as u64, d).unwrap()).unwrap();
            let y = &trace[trace.len() - 2];
            prop_assert!(y.count_ones() <= dim);
            for i in 0..y.dim() {
                if y.get(i) {
                    prop_assert_eq!(i % b, k % b);
                }
            }
        }
    }

    #[test]
    fn oracle_equivalence_random(n in 3usize..160, dim in 1usize..20, b in 3usize..9, seed in any::<u64>()) {
        prop_assume!(b <= n);
        let x = random_set(n, dim.max(8), seed);
        for bundle in [
            build_approx_decoder(&x, b).unwrap(),
            build_approx_decoder_uncorrected(&x, b).unwrap(),
        ] {
            let check = oracle_equivalence(&bundle, &x).unwrap();
            prop_assert!(check.equivalent, "mismatch at {:?}", check.first_mismatch);
        }
    }

    #[test]
    fn error_localized_and_bounded(n in 3usize..200, dim in 1usize..16, b in 3usize..7, seed in any::<u64>()) {
        prop_assume!(b <= n);
        let dim = dim.max(8);
        let x = random_set(n, dim, seed);
        let bundle = build_approx_decoder(&x, b).unwrap();
        let stats = count_patterns(&x, b).unwrap();
        let report = measure_error(&bundle, &x).unwrap();
        prop_assert_eq!(report.total(), stats.count(stats.c.to_int().unwrap()) as u128);
        for k in 0..n {
            let y = bundle.decode(&bundle.code(k).unwrap()).unwrap();
            for j in 0..dim {
                let flipped = y.get(j) != x.get(k).get(j);
                let expected = k % b == 0 && block_pattern(&x, b, k / b, j) == stats.c.to_int().unwrap();
                prop_assert_eq!(flipped, expected);
            }
        }
        // pigeonhole chain: counts[c]/n ≤ ⌈n/B⌉D/(2^B n) ≤ bound
        let pigeon = Rational::new((n.div_ceil(b) * dim) as u128, (n as u128) << b);
        prop_assert!(report.average <= pigeon);
        prop_assert!(pigeon <= approx_error_bound(dim, n, b));
        prop_assert!(report.satisfied);
    }

    #[test]
    fn chi_is_an_involution(a in 0u64..256, p in 0u64..256) {
        let a = BitVec::from_int(a, 8).unwrap();
        let p = BitVec::from_int(p, 8).unwrap();
        prop_assert_eq!(chi(&a, &chi(&a, &p).unwrap()).unwrap(), p);
    }

    #[test]
    fn netlist_round_trip(seed in any::<u64>(), n in 2usize..50, b in 3usize..6) {
        prop_assume!(b <= n);
        let x = random_set(n, 7, seed);
        let net = build_approx_decoder(&x, b).unwrap().decoder;
        let text = write_netlist(&net);
        let back = parse_netlist(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(write_netlist(&back), text);
    }

    #[test]
    fn vector_text_round_trip(seed in any::<u64>(), n in 1usize..30, dim in 1usize..70) {
        prop_assume!(dim >= 5);
        let x = random_set(n, dim, seed);
        prop_assert_eq!(VectorSet::parse(&x.to_text()).unwrap(), x);
    }
}

#[test]
fn equality_recognizer_fires_once() {
    for d in 1..=12usize {
        for k in 0..1u64 << d {
            let unit = make_equality_recognizer(k, d).unwrap();
            let firing: Vec<u64> = (0..1u64 << d)
                .filter(|&x| unit.eval(&BitVec::from_int(x, d).unwrap()).unwrap())
                .collect();
            assert_eq!(firing, vec![k]);
        }
    }
}

#[test]
fn exactly_two_gammas_fire() {
    for n in [2usize, 3, 7, 8, 17, 64, 100] {
        for b in 2..=n.min(9) {
            let nb = n.div_ceil(b);
            for k in 0..n {
                assert_eq!(
                    active_gammas(n, b, k as u64).unwrap(),
                    vec![k / b, nb + k % b]
                );
            }
        }
    }
}

#[test]
fn perfect_size_and_width_formula() {
    for (n, dim, b) in [
        (64, 16, 4),
        (100, 10, 2),
        (1000, 10, 8),
        (37, 6, 4),
        (16, 5, 16),
    ] {
        let x = random_set(n, dim, 17);
        let m = build_perfect_decoder(&x, b).unwrap().decoder.metrics();
        assert_eq!(m.size, perfect_size(n, dim, b));
        assert_eq!(m.width, bounds::perfect_width(n, dim, b).unwrap());
        assert_eq!(m.depth, 3);
    }
    let x = random_set(64, 16, 1);
    assert_eq!(
        build_perfect_decoder(&x, 4)
            .unwrap()
            .decoder
            .metrics()
            .width,
        64
    );
}

#[test]
fn perfect_size_respects_lower_bound() {
    for (n, dim) in [(64usize, 40usize), (256, 64), (1000, 40), (32, 16)] {
        let d = code_width(n) as u64;
        assert!(lower_bound_applies(dim as u64, d));
        for b in [2, 4, 8] {
            let x = random_set(n, dim, 3);
            let size = build_perfect_decoder(&x, b).unwrap().decoder.metrics().size as u64;
            assert!(size_meets_lower_bound(size, n as u64, dim as u64, d));
            assert!(size as f64 >= lower_bound(n as u64, dim as u64, d).value);
        }
    }
}

#[test]
fn xor_subnetwork_truth_table() {
    // one output bit; drive z and γ'' directly through the last two layers
    let x = VectorSet::code_table(
        (0..8)
            .map(|k| BitVec::from_int(k % 2, 1).unwrap())
            .collect(),
    )
    .unwrap();
    let net = build_approx_decoder(&x, 4).unwrap().decoder;
    let layers = net.layers();
    let tail = LayeredNet::new(2, layers[layers.len() - 2..].to_vec()).unwrap();
    for (z, g) in [(false, false), (false, true), (true, false), (true, true)] {
        let out = tail.eval(&BitVec::new(vec![z, g])).unwrap();
        assert_eq!(out.get(0), z ^ g);
    }
}

#[test]
fn absent_pattern_gives_zero_error() {
    // columns only ever carry patterns 000 or 111; c = 001 is absent
    let rows: Vec<BitVec> = (0..30)
        .map(|k| BitVec::from_int(((k / 3) as u64 * 37) % 64, 6).unwrap())
        .collect();
    let x = VectorSet::code_table(rows).unwrap();
    let stats = count_patterns(&x, 3).unwrap();
    assert_eq!(stats.count(stats.c.to_int().unwrap()), 0);
    let bundle = build_approx_decoder(&x, 3).unwrap();
    assert_eq!(measure_error(&bundle, &x).unwrap().total(), 0);
}

#[test]
fn uncorrected_prediction_uses_fixed_pattern() {
    let x = random_set(90, 12, 8);
    let bundle = build_approx_decoder_uncorrected(&x, 3).unwrap();
    for k in 0..90 {
        let got = bundle.decode(&bundle.code(k).unwrap()).unwrap();
        assert_eq!(got, predict_with_pattern(&x, 3, 0b011, k).unwrap());
    }
}

#[test]
fn every_data_weight_flip_is_detected() {
    let x = random_set(20, 5, 21);
    let b = 4;
    let base = build_perfect_decoder(&x, b).unwrap();
    let y_layer = base.decoder.layers().len() - 2;
    for j in 0..5 {
        for slot in 0..b {
            for h in 0..5 {
                if b * h + slot >= 20 {
                    continue;
                }
                let mut bundle = base.clone();
                let unit = bundle.decoder.unit_mut(y_layer, j * b + slot);
                unit.weights[h] = 1 - unit.weights[h];
                assert!(
                    !verify_perfect(&bundle, &x).unwrap().satisfied,
                    "j={j} slot={slot} h={h}"
                );
            }
        }
    }
}
