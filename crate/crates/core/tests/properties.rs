use butterfly_bct::analysis::{bct_entry, bct_lqsl, ddt_entry, walsh_entry, AffineMap};
use butterfly_bct::butterfly::{pair_condition, theta_of_pair, theta_to_alpha_beta, ButterflyParams};
use butterfly_bct::field::clmul;
use butterfly_bct::solvers::LinearizedSolver;
use butterfly_bct::{FieldCtx, Quadrinomial, SBoxTable, TowerCtx, TowerEl};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn odd_m() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7, 9])
}

/// Reference product: carry-less multiply, then reduce bit by bit.
fn slow_mul(m: u32, modulus: u64, a: u64, b: u64) -> u64 {
    let mut p = clmul(a, b);
    for bit in (m..2 * m).rev() {
        if p >> bit & 1 == 1 {
            p ^= modulus << (bit - m);
        }
    }
    p
}

fn random_perm(n: u32, seed: u64) -> SBoxTable {
    let mut v: Vec<u32> = (0..1 << n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    SBoxTable::new(n, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_mul_matches_reference(m in odd_m(), a in any::<u64>(), b in any::<u64>()) {
        let f = FieldCtx::with_default(m).unwrap();
        let mask = (1u64 << m) - 1;
        let (a, b) = ((a & mask) as u32, (b & mask) as u32);
        prop_assert_eq!(f.mul(a, b) as u64, slow_mul(m, f.modulus(), a as u64, b as u64));
        prop_assert_eq!(f.mul_clmul(a, b), f.mul(a, b));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn tower_is_a_field(m in odd_m(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let t = TowerCtx::with_modulus(m, None).unwrap();
        let mask = t.size() - 1;
        let (a, b, c) = (t.decode(a & mask), t.decode(b & mask), t.decode(c & mask));
        prop_assert_eq!(t.mul(a, b + c), t.mul(a, b) + t.mul(a, c));
        prop_assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
        prop_assert_eq!(t.bar(t.bar(a)), a);
        prop_assert_eq!(t.bar(t.mul(a, b)), t.mul(t.bar(a), t.bar(b)));
        prop_assert_eq!(t.bar(a), t.frob_pow(a, m));
        prop_assert_eq!(TowerEl::base(t.trace_rel(a)), a + t.bar(a));
        prop_assert_eq!(t.decode(t.encode(a)), a);
        if !a.is_zero() {
            prop_assert_eq!(t.mul(a, t.inv(a).unwrap()), TowerEl::ONE);
        }
    }

    #[test]
    fn linearized_count_matches_roots(m in prop::sample::select(vec![3u32, 5]), k in 1u32..5,
                                      mu in any::<u64>(), nu in any::<u64>()) {
        let t = TowerCtx::with_modulus(m, None).unwrap();
        let Ok(solver) = LinearizedSolver::new(&t, k) else { return Ok(()) };
        let mask = t.size() - 1;
        let (mu, nu) = (t.decode(mu & mask), t.decode(nu & mask));
        let roots = solver.solve(mu, nu);
        prop_assert!([0, 2, 4].contains(&roots.len()));
        prop_assert_eq!(solver.classify(mu, nu).count as usize, roots.len());
        for r in roots {
            prop_assert!(solver.eval(mu, nu, r).is_zero());
        }
    }

    #[test]
    fn theta_round_trip(m in odd_m(), theta in 2u32..512) {
        let f = FieldCtx::with_default(m).unwrap();
        let theta = theta % (1 << m);
        prop_assume!(theta >= 2);
        let (alpha, beta) = theta_to_alpha_beta(&f, theta).unwrap();
        prop_assert!(pair_condition(&f, alpha, beta));
        prop_assert_eq!(theta_of_pair(&f, alpha, beta), Some(theta));
    }

    #[test]
    fn butterfly_forms_agree(theta in 2u32..32, x in 0u32..32, y in 0u32..32, k in prop::sample::select(vec![1u32, 3])) {
        let t = TowerCtx::with_modulus(5, None).unwrap();
        let p = ButterflyParams::from_theta(&t, k, theta).unwrap();
        // open butterfly undoes itself
        let h = p.open_eval(x, y);
        prop_assert_eq!(p.open_eval(h.x, h.y), TowerEl::new(x, y));
        // R(., y) is a bijection with inverse r_inv
        prop_assert_eq!(p.r_inv(p.r_eval(x, y), y), x);
        // the quadrinomial is the closed butterfly after a linear change of variables
        let g = p.g_eval(TowerEl::new(x, y));
        let q = Quadrinomial::new(&t, k, theta).unwrap();
        let alpha_inv = t.base().inv(p.alpha()).unwrap();
        prop_assert_eq!(q.eval(TowerEl::new(x, y)), t.scale(t.base().pow(alpha_inv, (1 << p.k_odd()) + 1), g));
    }

    #[test]
    fn quadrinomial_ddt_entries_are_four(theta in 1u32..8, a in 1u32..64, x in 0u32..64) {
        let t = TowerCtx::with_modulus(3, None).unwrap();
        let f = Quadrinomial::new(&t, 1, theta).unwrap().table();
        let b = f.get(x) ^ f.get(x ^ a);
        prop_assert_eq!(ddt_entry(&f, a, b), 4);
    }

    #[test]
    fn bct_routes_agree(seed in any::<u64>(), a in 1u32..256, b in 0u32..256) {
        let t = random_perm(8, seed);
        let inv = t.invert().unwrap();
        prop_assert_eq!(bct_entry(&t, &inv, a, b), bct_lqsl(&t, a, b));
    }

    #[test]
    fn walsh_parseval(seed in any::<u64>(), b in 1u32..64) {
        let t = random_perm(6, seed);
        let total: i64 = (0..64).map(|a| (walsh_entry(&t, a, b) as i64).pow(2)).sum();
        prop_assert_eq!(total, 64 * 64);
    }

    #[test]
    fn affine_maps_are_bijections(n in 3u32..10, seed in any::<u64>()) {
        let a = &AffineMap::seeded(n, seed, 1)[0];
        prop_assert!(a.is_invertible());
        prop_assert!(a.to_table().is_permutation());
    }

    #[test]
    fn table_text_round_trips(seed in any::<u64>()) {
        let t = random_perm(6, seed);
        prop_assert_eq!(SBoxTable::parse(&t.to_text()).unwrap(), t);
    }
}
