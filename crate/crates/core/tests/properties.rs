use modp_entropy::dist::{entropy_with_representatives, two_point_series};
use modp_entropy::finprob::{compose_maps, convex_combine_maps, map_with_images};
use modp_entropy::modular::{fermat_quotient, fermat_quotient_exact, fq_section, p_derivation};
use modp_entropy::poly::{entropy_poly, interpolate_table, pounds1, MultiPoly};
use modp_entropy::residue::real_entropy_equal;
use modp_entropy::{ModDist, ModMeasure, PrimeModulus, RationalDist};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn prime() -> impl Strategy<Value = PrimeModulus> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| PrimeModulus::new(p).unwrap())
}

fn dist_in(p: PrimeModulus, max_len: usize) -> impl Strategy<Value = ModDist> {
    prop::collection::vec(0..p.get(), 0..max_len).prop_map(move |head| {
        let values: Vec<i128> = head.iter().map(|&v| v as i128).collect();
        let rest = 1 - values.iter().sum::<i128>();
        let mut all = values;
        all.push(rest);
        ModDist::new(p, &all).unwrap()
    })
}

fn dist() -> impl Strategy<Value = ModDist> {
    prime().prop_flat_map(|p| dist_in(p, 5))
}

proptest! {
    #[test]
    fn fq_is_p_squared_periodic(p in prime(), a in -10_000i128..10_000, r in -50i128..50) {
        prop_assume!(a % p.get() as i128 != 0);
        let sq = p.squared() as i128;
        prop_assert_eq!(fermat_quotient(a + r * sq, p).unwrap(), fermat_quotient(a, p).unwrap());
    }

    #[test]
    fn fq_matches_definition(p in prime(), a in -10_000i64..10_000) {
        prop_assume!(a % p.get() as i64 != 0);
        prop_assert_eq!(
            fermat_quotient(a as i128, p).unwrap(),
            fermat_quotient_exact(&BigInt::from(a), p).unwrap()
        );
    }

    #[test]
    fn pderivation_relates_to_fq(p in prime(), a in -10_000i128..10_000) {
        prop_assume!(a % p.get() as i128 != 0);
        let expected = -(p.residue(a) * fermat_quotient(a, p).unwrap());
        prop_assert_eq!(p_derivation(a, p), expected);
    }

    #[test]
    fn section_is_right_inverse(p in prime(), r in 0u64..13) {
        let r = p.residue(r as i128);
        prop_assert_eq!(fq_section(r).fermat_quotient().unwrap(), r);
    }

    #[test]
    fn entropy_is_independent_of_representatives(
        d in dist(),
        shifts in prop::collection::vec(-1000i64..1000, 6),
    ) {
        let p = d.modulus();
        let reps: Vec<BigInt> = d
            .probs()
            .iter()
            .zip(&shifts)
            .map(|(r, &t)| BigInt::from(r.value()) + BigInt::from(t) * BigInt::from(p.get()))
            .collect();
        prop_assert_eq!(entropy_with_representatives(&reps, p).unwrap(), d.entropy());
    }

    #[test]
    fn measure_entropy_extends_entropy_homogeneously(d in dist(), lambda in 0u64..13) {
        let m = d.to_measure();
        prop_assert_eq!(m.entropy(), d.entropy());
        let lambda = d.modulus().residue(lambda as i128);
        prop_assert_eq!(m.scale(lambda).entropy(), lambda * m.entropy());
    }

    #[test]
    fn measure_entropy_of_arbitrary_tuples_is_homogeneous(
        p in prime(),
        values in prop::collection::vec(-100i128..100, 0..6),
        lambda in -20i128..20,
    ) {
        let m = ModMeasure::new(p, &values);
        let lambda = p.residue(lambda);
        prop_assert_eq!(m.scale(lambda).entropy(), lambda * m.entropy());
    }

    #[test]
    fn padding_preserves_entropy(d in dist(), pos in 0usize..6, count in 0usize..4) {
        let pos = pos.min(d.len());
        prop_assert_eq!(d.pad_zeros(pos, count).unwrap().entropy(), d.entropy());
    }

    #[test]
    fn tensor_entropy_is_additive(p in prime(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ModDist::random(&mut rng, p, 3);
        let b = ModDist::random(&mut rng, p, 4);
        prop_assert_eq!(a.tensor(&b).unwrap().entropy(), a.entropy() + b.entropy());
    }

    #[test]
    fn entropy_is_symmetric(d in dist(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..d.len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(d.permute(&perm).unwrap().entropy(), d.entropy());
    }

    #[test]
    fn text_form_round_trips(d in dist()) {
        let text = d.to_string();
        let back: ModDist = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, d);
    }

    #[test]
    fn interpolation_inverts_evaluation(
        p in prop::sample::select(vec![2u64, 3, 5]),
        n in 1usize..3,
        coeffs in prop::collection::vec(0i128..5, 25),
    ) {
        let p = PrimeModulus::new(p).unwrap();
        let m = p.get() as usize;
        let terms = (0..m.pow(n as u32)).map(|code| {
            let exps: Vec<u32> = (0..n).map(|i| ((code / m.pow(i as u32)) % m) as u32).collect();
            (exps, coeffs[code % coeffs.len()])
        });
        let f = MultiPoly::from_terms(p, n, terms);
        prop_assert_eq!(interpolate_table(&f.function_table(), p, n).unwrap(), f);
    }

    #[test]
    fn real_entropy_equality_ignores_zeros_and_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RationalDist::random(&mut rng, 4, 5);
        prop_assert!(real_entropy_equal(&a, &a.shuffled(&mut rng)));
        prop_assert!(real_entropy_equal(&a, &a.pad_zeros(1.min(a.len()), 2).unwrap()));
    }

    #[test]
    fn rational_text_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RationalDist::random(&mut rng, 5, 9);
        prop_assert_eq!(a.to_string().parse::<RationalDist>().unwrap(), a);
    }

    #[test]
    fn info_loss_is_functorial(p in prime(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = modp_entropy::finprob::random_map(&mut rng, p, 6, 4);
        use rand::Rng;
        let images: Vec<usize> = (0..4).map(|_| rng.gen_range(0..2)).collect();
        let g_src = f.codomain().dist().clone();
        let g = map_with_images(g_src, images, 2);
        // relabel g's domain to match f's codomain
        let g = modp_entropy::MPMap::from_images(f.codomain().clone(), g.codomain().clone(), g.images().to_vec()).unwrap();
        let gf = compose_maps(&g, &f).unwrap();
        prop_assert_eq!(gf.info_loss(), g.info_loss() + f.info_loss());
        prop_assert_eq!(f.fibrewise_loss(), f.info_loss());
        if !f.has_hidden_zero_fibre() {
            prop_assert_eq!(f.conditional_loss(), f.info_loss());
        }
    }

    #[test]
    fn info_loss_is_affine(p in prime(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = ModDist::random(&mut rng, p, 3);
        let maps: Vec<_> = (0..3)
            .map(|_| modp_entropy::finprob::random_map(&mut rng, p, 4, 2))
            .collect();
        let combo = convex_combine_maps(&weights, &maps).unwrap();
        let expected = weights
            .probs()
            .iter()
            .zip(&maps)
            .fold(p.zero(), |acc, (&w, f)| acc + w * f.info_loss());
        prop_assert_eq!(combo.info_loss(), expected);
    }
}

#[test]
fn entropy_poly_is_symmetric_under_variable_permutations() {
    for p in [2, 3, 5] {
        let p = PrimeModulus::new(p).unwrap();
        let h = entropy_poly(3, p);
        let vars: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(p, 3, i)).collect();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let images: Vec<MultiPoly> = perm.iter().map(|&i| vars[i].clone()).collect();
            assert_eq!(h.substitute(&images).unwrap(), h);
        }
    }
}

#[test]
fn pounds1_evaluates_to_two_point_entropy() {
    for p in PRIMES {
        let p = PrimeModulus::new(p).unwrap();
        let l = pounds1(p);
        for pi in p.elements() {
            let d = ModDist::from_residues(p, vec![pi, p.one() - pi]).unwrap();
            assert_eq!(l.eval(&[pi]).unwrap(), d.entropy(), "p={p} π={pi}");
            if p.get() != 2 {
                assert_eq!(two_point_series(pi), d.entropy());
            }
        }
    }
}

#[test]
fn top_coefficient_of_pounds1_expansion_vanishes() {
    for p in [3, 5, 7, 11, 13] {
        let p = PrimeModulus::new(p).unwrap();
        let expanded = modp_entropy::poly::pounds1_by_substitution(p);
        assert!(expanded.coefficient(&[p.get() as u32]).is_zero());
    }
}

#[test]
fn real_entropy_equality_is_an_equivalence_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pool: Vec<RationalDist> = Vec::new();
    for _ in 0..6 {
        let (a, b) = modp_entropy::residue::random_equal_entropy_pair(&mut rng);
        pool.push(a);
        pool.push(b);
    }
    pool.push(RationalDist::uniform(2));
    pool.push("1/3 2/3".parse().unwrap());
    for a in &pool {
        assert!(real_entropy_equal(a, a));
        for b in &pool {
            let ab = real_entropy_equal(a, b);
            assert_eq!(ab, real_entropy_equal(b, a));
            for c in &pool {
                if ab && real_entropy_equal(b, c) {
                    assert!(real_entropy_equal(a, c));
                }
            }
        }
    }
}
