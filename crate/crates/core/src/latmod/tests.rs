use super::*;
use proptest::prelude::*;
use rand::Rng;
use std::collections::BTreeSet;

/// All sums of integer multiples of `vectors`, by additive closure.
fn span_oracle(vectors: &[Vec<u64>], q: u64) -> BTreeSet<Vec<u64>> {
    let width = vectors.first().map_or(0, Vec::len);
    let mut set: BTreeSet<Vec<u64>> = [vec![0u64; width]].into_iter().collect();
    let mut frontier: Vec<Vec<u64>> = set.iter().cloned().collect();
    while let Some(v) = frontier.pop() {
        for w in vectors {
            let s: Vec<u64> = v.iter().zip(w).map(|(a, b)| (a + b) % q).collect();
            if set.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    set
}

/// Smallest number of elements of `M` whose invariant closure is `M`.
fn min_gen_oracle(m: &Submodule) -> u32 {
    let target = m.basis.clone();
    if target.is_empty() {
        return 0;
    }
    let elements = span_elements(&m.basis, m.q);
    let mut level: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
    for d in 1.. {
        let mut next = BTreeSet::new();
        for k in &level {
            for v in &elements {
                let mut gens = k.clone();
                gens.push(v.clone());
                let h = Submodule::generated(m.action.clone(), m.q, gens).basis;
                if h == target {
                    return d;
                }
                next.insert(h);
            }
        }
        level = next.into_iter().collect();
    }
    unreachable!()
}

#[test]
fn howell_examples() {
    let canonical = vec![vec![2u64, 0], vec![0, 2]];
    assert_eq!(howell_basis(&canonical, 4), canonical);
    let b = howell_basis(&[vec![1, 1], vec![1, 3]], 4);
    assert_eq!(b.len(), 2);
    assert_eq!(span_log_size(&b, 4), 3);
    assert_eq!(
        span_oracle(&b, 4),
        span_oracle(&[vec![1, 1], vec![1, 3]], 4)
    );
    assert!(howell_basis(&[], 9).is_empty());
    assert!(howell_basis(&[vec![0, 0, 0]], 9).is_empty());
}

#[test]
fn howell_property_needs_the_extra_row() {
    // span of (2, 1) over Z/4 contains 2 * (2, 1) = (0, 2)
    let b = howell_basis(&[vec![2, 1]], 4);
    assert_eq!(b, vec![vec![2, 1], vec![0, 2]]);
    assert!(in_span(&[0, 2], &b, 4));
    assert!(!in_span(&[0, 1], &b, 4));
}

fn small_vectors() -> impl Strategy<Value = (u64, Vec<Vec<u64>>)> {
    prop_oneof![Just(4u64), Just(8), Just(9), Just(27), Just(25)].prop_flat_map(|q| {
        let width = if q > 9 { 2usize } else { 3 };
        (
            Just(q),
            proptest::collection::vec(proptest::collection::vec(0..q, width), 0..4),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn howell_is_canonical((q, vectors) in small_vectors()) {
        let b = howell_basis(&vectors, q);
        prop_assert_eq!(howell_basis(&b, q), b.clone());
        if vectors.is_empty() {
            prop_assert!(b.is_empty());
        } else {
            let span = span_oracle(&vectors, q);
            prop_assert_eq!(&span, &span_oracle(&b, q));
            prop_assert_eq!(span.len() as u64, {
                let (ell, _) = prime_power(q).unwrap();
                ell.pow(span_log_size(&b, q))
            });
            let listed: BTreeSet<Vec<u64>> = span_elements(&b, q).into_iter().collect();
            prop_assert_eq!(&listed, &span);
            for v in &span {
                prop_assert!(in_span(v, &b, q));
            }
            // a different generating set of the same span gives the same basis
            let mut shuffled: Vec<Vec<u64>> = span.iter().rev().take(5).cloned().collect();
            shuffled.extend(b.iter().cloned());
            prop_assert_eq!(howell_basis(&shuffled, q), b);
        }
    }

    #[test]
    fn min_gen_count_matches_search(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ell, n, k) = [(2u64, 2usize, 2u32), (2, 2, 3), (2, 4, 1), (3, 3, 1), (2, 3, 2), (3, 3, 2)]
            [rng.gen_range(0..6)];
        let q = ell.pow(k);
        let sigma = if n % ell as usize == 0 {
            sample_sigma(n, ell, &mut rng)
        } else {
            Perm::from_cycles(n, &[&[0, 1]]).unwrap()
        };
        let units = (0..n).map(|_| sample_unit(q, ell, &mut rng)).collect();
        let h = MonomialMatrix::new(ell, k, sigma, units).unwrap();
        let gens = (0..rng.gen_range(1..=2))
            .map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect())
            .collect();
        let m = Submodule::generated(h.to_matrix(), q, gens);
        prop_assume!(m.log_size() <= 6);
        prop_assert_eq!(min_gen_count(&m).unwrap(), min_gen_oracle(&m));
    }
}

#[test]
fn min_gen_count_examples() {
    for ell in [2u64, 3, 5] {
        let cycle: Vec<u32> = (0..ell as u32).collect();
        let sigma = Perm::from_cycles(ell as usize, &[&cycle]).unwrap();
        let h = MonomialMatrix::new(ell, 2, sigma, vec![1; ell as usize]).unwrap();
        assert_eq!(
            min_gen_count(&Submodule::full(h.to_matrix(), ell * ell)).unwrap(),
            1
        );
    }
    // 3 V for a 3-cycle over Z/9
    let sigma = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
    let h = MonomialMatrix::new(3, 2, sigma, vec![1; 3])
        .unwrap()
        .to_matrix();
    let m = Submodule::generated(h, 9, vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]);
    assert_eq!(m.log_size(), 3);
    assert_eq!(min_gen_count(&m).unwrap(), 1);
    assert_eq!(min_gen_oracle(&m), 1);
    // fixed points of a 2-cycle over Z/4
    let sigma = Perm::from_cycles(2, &[&[0, 1]]).unwrap();
    let h = MonomialMatrix::new(2, 2, sigma, vec![1, 1])
        .unwrap()
        .to_matrix();
    let m = Submodule::spanned(h.clone(), 4, vec![vec![1, 1]]).unwrap();
    assert_eq!(min_gen_count(&m).unwrap(), 1);
    assert_eq!(min_gen_oracle(&m), 1);
    assert!(matches!(
        Submodule::spanned(h, 4, vec![vec![1, 0]]),
        Err(LatticeError::NotInvariant)
    ));
}

#[test]
fn non_local_ring_takes_the_maximum() {
    // diag(1, 2) over Z/9: R = Z/9 x Z/9, the full module is cyclic
    let h = Matrix::diagonal(&[1, 2]);
    assert_eq!(min_gen_count(&Submodule::full(h, 9)).unwrap(), 1);
    // identity: R = Z/9, rank 2 needs 2
    assert_eq!(
        min_gen_count(&Submodule::full(Matrix::identity(2), 9)).unwrap(),
        2
    );
}

#[test]
fn monomial_bound_examples() {
    let r = verify_monomial_bound(2, 2, 3, 200, 11).unwrap();
    assert_eq!((r.violations, r.bound), (0, 2));
    let r = verify_monomial_bound(3, 3, 2, 200, 11).unwrap();
    assert_eq!(r.violations, 0);
    let r = verify_monomial_bound(2, 4, 2, 200, 11).unwrap();
    assert_eq!((r.violations, r.bound), (0, 4));
    assert!(r.max_generators >= 1);
    assert!(verify_monomial_bound(3, 4, 2, 10, 1).is_err());
}

#[test]
fn monomial_bound_is_deterministic() {
    assert_eq!(
        verify_monomial_bound(3, 6, 2, 40, 5).unwrap(),
        verify_monomial_bound(3, 6, 2, 40, 5).unwrap()
    );
}

#[test]
fn sampled_permutations_are_fixed_point_free_ell_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let s = sample_sigma(6, 3, &mut rng);
        assert!((0..6).all(|i| s.apply(i) != i));
        assert!([3, 9].contains(&s.order()));
        let s = sample_sigma(4, 2, &mut rng);
        assert!((0..4).all(|i| s.apply(i) != i));
    }
}

#[test]
fn decompose_examples() {
    let free = CyclicLattice::free(3);
    assert_eq!(
        lattice_decompose(&free, 2).unwrap(),
        LatticeMultiplicities { a: 0, b: 0, c: 1 }
    );
    let triv = CyclicLattice::trivial(3, 2);
    assert_eq!(
        lattice_decompose(&triv, 2).unwrap(),
        LatticeMultiplicities { a: 2, b: 0, c: 0 }
    );
    let aug = CyclicLattice::augmentation(3);
    assert_eq!(
        lattice_decompose(&aug, 2).unwrap(),
        LatticeMultiplicities { a: 0, b: 1, c: 0 }
    );
    // the augmentation lattice has p fixed points at every precision
    assert_eq!(fixed_and_norm(&aug, 2), (1, 0));
    assert_eq!(fixed_and_norm(&aug, 3), (1, 0));
    assert!(lattice_decompose(&aug, 1).is_err());
}

#[test]
fn decompose_recovers_direct_sums() {
    for p in [3u64, 5] {
        for k in [2u32, 3] {
            for c in 0..=2 {
                for b in 0..=4 {
                    for a in 0..=8 {
                        let m = LatticeMultiplicities { a, b, c };
                        if m.rank(p) > 8 || m.rank(p) == 0 {
                            continue;
                        }
                        let lat = CyclicLattice::direct_sum(p, m);
                        assert_eq!(lattice_decompose(&lat, k).unwrap(), m);
                        let seed = u64::from(a * 100 + b * 10 + c) + p * k as u64;
                        assert_eq!(lattice_decompose(&lat.change_basis(seed), k).unwrap(), m);
                    }
                }
            }
        }
    }
}

#[test]
fn unimodular_pairs_are_inverse() {
    let q = 3u64.pow(10);
    for seed in 0..10 {
        let (u, v) = random_unimodular(5, seed, q);
        assert_eq!(u.mul(&v, q), Matrix::identity(5));
    }
}

#[test]
fn decompose_rejects_actions_of_wrong_order() {
    let lat = CyclicLattice::from_rows(3, &[vec![2]]);
    assert!(lattice_decompose(&lat, 2).is_err());
}

#[test]
fn generator_sum_examples() {
    let aug = CyclicLattice::augmentation(3);
    let g = lattice_group(3, 2, vec![aug.action], 2);
    let r = verify_generator_sum(3, &g).unwrap();
    assert_eq!((r.d_group, r.d_module, r.holds), (1, 1, true));
    let free = CyclicLattice::free(3);
    let r = verify_generator_sum(3, &lattice_group(3, 2, vec![free.action], 3)).unwrap();
    assert_eq!((r.d_group, r.d_module, r.holds), (1, 1, true));
    let r = verify_generator_sum(5, &lattice_group(5, 2, Vec::new(), 1)).unwrap();
    assert_eq!((r.d_group, r.d_module, r.holds), (0, 1, true));
}

#[test]
fn generator_sum_rejects_congruence_kernel() {
    let g = MatrixGroupSpec {
        d: 1,
        modulus: 9,
        generators: vec![Matrix(vec![4])],
    };
    assert!(matches!(
        verify_generator_sum(3, &g),
        Err(LatticeError::NotFaithful)
    ));
}

#[test]
fn module_counts_agree_with_local_formula() {
    generator_sum_instances()
        .into_par_iter()
        .for_each(|(label, g)| {
            let p = g.prime();
            let local = local_generator_count(&g.generators, p, g.d);
            if p.pow(g.d as u32) <= 729 {
                let exhaustive = min_generators_exhaustive(&g.generators, p, g.d);
                assert_eq!(local, exhaustive, "{label}");
            }
            if let [h] = g.generators.as_slice() {
                let m = Submodule::full(h.clone(), g.modulus);
                assert_eq!(min_gen_count(&m).unwrap(), local, "{label}");
            }
        });
}

#[test]
fn instance_family_is_large_and_faithful() {
    let instances = generator_sum_instances();
    assert!(instances.len() >= 50);
    for (label, g) in &instances {
        assert!(g.d <= 6, "{label}");
        let r = verify_generator_sum(g.prime(), g).unwrap();
        assert!(r.holds, "{label}: {r:?}");
    }
}
