//! Property tests for triangulations, generators, the label action and the
//! flip matrices.

use std::collections::{BTreeSet, HashMap};

use pentaflip::gamma::{d, far_commute, pentagon_word, symmetry_orbit, Generator, Word};
use pentaflip::hyperbolic::{crosscheck_word, log_uniform, realize_labelled_triangulation, CROSSCHECK_TOL};
use pentaflip::korepanov::{area_map_check, inverse_2x2, quad_matrix_for, RFMatrix};
use pentaflip::polygon::{flip_graph, Triangulation};
use pentaflip::ptolemy::{random_applicable_word, LabelledTriangulation, Policy};
use pentaflip::symexpr::Var;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A triangulation reached by a seeded random walk from the fan.
fn walked(n: usize, steps: usize, seed: u64) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fan = Triangulation::fan(n, 1).unwrap();
    let word = random_applicable_word(&fan, steps, &mut rng);
    let state = LabelledTriangulation::fresh(fan);
    state.apply_word(&word, Policy::Abort).unwrap().final_state.base().clone()
}

fn catalan(k: u64) -> u64 {
    // C_k = binom(2k, k) / (k + 1)
    let mut binom: u64 = 1;
    for i in 0..k {
        binom = binom * (2 * k - i) / (i + 1);
    }
    binom / (k + 1)
}

/// Orbit of an index quadruple under the group generated by the cyclic
/// shift and the swap of the first and third entries.
fn dihedral_orbit(q: [usize; 4]) -> BTreeSet<[usize; 4]> {
    let mut seen = BTreeSet::from([q]);
    let mut frontier = vec![q];
    while let Some([i, j, k, l]) = frontier.pop() {
        for next in [[j, k, l, i], [k, j, i, l]] {
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen
}

fn quadruple() -> impl Strategy<Value = [usize; 4]> {
    Just((1..=8usize).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| [v[0], v[1], v[2], v[3]])
}

#[test]
fn flip_graph_orders_are_catalan() {
    for n in 4..=9 {
        let g = flip_graph(n).unwrap();
        assert_eq!(g.order() as u64, catalan(n as u64 - 2), "n = {n}");
        assert!((0..g.order()).all(|v| g.neighbors(v).len() == n - 3));
        assert!(g.is_connected());
        assert_eq!(g.edge_count(), g.order() * (n - 3) / 2);
    }
}

#[test]
fn orbit_of_a_crossed_quadruple() {
    let expected = dihedral_orbit([1, 3, 2, 4]);
    assert_eq!(expected.len(), 8);
    let got: BTreeSet<_> = symmetry_orbit([1, 3, 2, 4]).into_iter().collect();
    assert_eq!(got, expected);
    assert_eq!(d(1, 3, 2, 4).indices(), [1, 3, 2, 4]);
    assert_eq!(d(4, 2, 3, 1), d(1, 3, 2, 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triangulation_cardinalities_and_flip_involution(n in 4usize..=9, steps in 0usize..12, seed: u64) {
        let t = walked(n, steps, seed);
        prop_assert_eq!(t.diagonals().len(), n - 3);
        prop_assert_eq!(t.triangles().len(), n - 2);
        for diag in t.diagonals().clone() {
            let (flipped, other) = t.flip(&diag).unwrap();
            // Triangulation::new rejects crossing diagonal sets
            prop_assert!(Triangulation::new(n, flipped.diagonals().iter().copied()).is_ok());
            prop_assert!(diag.crosses(&other));
            let (back, again) = flipped.flip(&other).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(again, diag);
        }
    }

    #[test]
    fn canonical_generator_is_an_orbit_invariant(q in quadruple()) {
        let orbit = symmetry_orbit(q);
        let as_set: BTreeSet<_> = orbit.iter().copied().collect();
        prop_assert!(as_set.len() <= 8);
        prop_assert_eq!(&as_set, &dihedral_orbit(q));
        let g = Generator::from_array(q).unwrap();
        prop_assert_eq!(Generator::from_array(g.indices()).unwrap(), g);
        for arr in orbit {
            prop_assert_eq!(Generator::from_array(arr).unwrap(), g);
        }
        prop_assert_eq!(g.indices(), *as_set.iter().next().unwrap());
    }

    #[test]
    fn far_commute_is_symmetric(a in quadruple(), b in quadruple()) {
        let (g, h) = (Generator::from_array(a).unwrap(), Generator::from_array(b).unwrap());
        prop_assert_eq!(far_commute(&g, &h), far_commute(&h, &g));
        let shared = g.vertex_set().intersection(&h.vertex_set()).count();
        prop_assert_eq!(far_commute(&g, &h), shared < 3);
    }

    #[test]
    fn pentagon_words_cover_the_four_subsets(v in Just((1..=9usize).collect::<Vec<_>>()).prop_shuffle()) {
        let w = pentagon_word(v[0], v[1], v[2], v[3], v[4]).unwrap();
        prop_assert_eq!(w.len(), 5);
        let five: BTreeSet<usize> = v[..5].iter().copied().collect();
        let subsets: BTreeSet<BTreeSet<usize>> = w.generators().map(|g| g.vertex_set()).collect();
        prop_assert_eq!(subsets.len(), 5);
        for s in subsets {
            prop_assert_eq!(s.len(), 4);
            prop_assert!(s.is_subset(&five));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn labelled_flips_are_involutions(n in 4usize..=7, steps in 0usize..8, seed: u64) {
        let state = LabelledTriangulation::fresh(walked(n, steps, seed));
        for g in state.applicable_generators() {
            let twice = state.apply_word(&Word::from_generators([g, g]), Policy::Abort).unwrap();
            prop_assert!(twice.identity);
        }
    }

    #[test]
    fn walk_labels_are_laurent_and_match_geometry(n in 4usize..=8, len in 1usize..=10, seed: u64) {
        let start = LabelledTriangulation::fresh(Triangulation::fan(n, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word = random_applicable_word(start.base(), len, &mut rng);
        let report = start.apply_word(&word, Policy::Abort).unwrap();
        for step in &report.steps {
            prop_assert!(step.new_label.as_ref().unwrap().is_laurent());
        }
        let vars: BTreeSet<Var> = start.labels().values().flat_map(|f| f.vars()).collect();
        let assignment: HashMap<Var, f64> = vars.into_iter().map(|v| (v, log_uniform(&mut rng))).collect();
        prop_assert!(realize_labelled_triangulation(&start, &assignment).is_ok());
        prop_assert!(crosscheck_word(&start, &word, &assignment).unwrap() < CROSSCHECK_TOL);
    }

    #[test]
    fn column_sums_survive_products_and_inverses(
        picks in prop::collection::vec((Just((1..=6usize).collect::<Vec<_>>()).prop_shuffle(), any::<bool>()), 1..4)
    ) {
        let mut acc = RFMatrix::identity(2);
        for (v, invert) in picks {
            let m = quad_matrix_for([v[0], v[1], v[2], v[3]]);
            let m = if invert { inverse_2x2(&m).unwrap() } else { m };
            prop_assert!(area_map_check(&m));
            acc = acc.mul(&m).unwrap();
            prop_assert!(area_map_check(&acc));
        }
    }
}
