mod common;

use common::*;
use paritysat::driver::{hamming_ball, try_candidate, YCandidate};
use paritysat::formula::simplify;
use paritysat::gf2::{gauss_jordan, BitVec, PivotOrder};
use paritysat::oracle::{brute_force, BruteOutcome};
use paritysat::xor::{extract, MergeRule};
use paritysat::{generate_parity, solve, solve_many, SolverConfig, Status};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_instances_are_satisfied_by_their_plant(
        bits in 2u32..10, extra in 0u32..6, noise in 0u32..4, seed in any::<u64>()
    ) {
        let samples = bits + extra;
        let g = generate_parity(bits, samples, noise.min(samples), seed).unwrap();
        prop_assert!(g.planted.is_total());
        prop_assert!(satisfies(&g.formula, &g.planted));
        prop_assert!(g.ternaries >= samples as usize);
        prop_assert_eq!(paritysat::xor::find_ternary_xors(&g.formula).ternaries.len(), g.ternaries);
    }

    // Whatever the input, a Satisfied answer carries a model of it.
    #[test]
    fn satisfied_answers_are_models(seed in any::<u64>(), nv in 1u32..=12, nc in 0usize..40, any in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cls = random_clauses(&mut rng, nv, nc, 1, 3);
        if nv >= 3 {
            cls.extend(even_quad(1, 2, 3));
        }
        let f = cnf(nv, &cls);
        let cfg = SolverConfig {
            merge_rule: if any { MergeRule::AnyShared } else { MergeRule::Private },
            theta_override: Some(2),
            ..Default::default()
        };
        let r = solve(&f, &cfg);
        match r.status {
            Status::Satisfied => {
                prop_assert!(satisfies(&f, r.model.as_ref().unwrap()));
                prop_assert!(brute_force(&f).unwrap().is_sat());
            }
            Status::Unknown => prop_assert!(r.model.is_none()),
        }
    }
}

#[test]
fn accepted_candidates_satisfy_the_residual() {
    // every free-variable vector of a generated instance, checked directly
    let g = (0..).map(|seed| generate_parity(4, 5, 1, seed).unwrap()).find(|g| g.formula.num_vars() <= 24).unwrap();
    let s = simplify(&g.formula);
    assert!(!s.conflict);
    let ex = extract(&s.formula, 4, MergeRule::Private);
    let sys = gauss_jordan(&ex.equations(), &PivotOrder::by_occurrence(&s.formula, &ex.frequent_vars));
    assert!(!sys.is_inconsistent());
    let n = sys.free_vars().len();
    assert!(n <= 16);
    let mut accepted = 0;
    for y in hamming_ball(&BitVec::zeros(n), n) {
        let (ok, a) = try_candidate(&y, &sys, &ex.residual);
        if ok {
            accepted += 1;
            assert!(ex.residual.clauses().iter().all(|c| c.value(&a) == Some(true)));
            // the equations hold on every variable the candidate fixed
            for e in ex.equations() {
                if e.vars().iter().all(|&v| a.is_assigned(v)) {
                    assert!(e.holds(|v| a.get(v).unwrap()));
                }
            }
        }
    }
    assert_eq!(hamming_ball(&BitVec::zeros(n), n).count(), 1 << n);
    assert!(accepted > 0);
}

#[test]
fn agrees_with_oracle_on_small_generated_instances() {
    let mut checked = 0;
    for seed in 0..60u64 {
        let bits = 3 + (seed % 3) as u32;
        let g = generate_parity(bits, bits + (seed % 2) as u32, (seed % 2) as u32, seed).unwrap();
        if g.formula.num_vars() > 24 {
            continue;
        }
        let r = solve(&g.formula, &SolverConfig::default());
        let BruteOutcome::Sat(_) = brute_force(&g.formula).unwrap() else { panic!("planted instance") };
        if let Some(m) = &r.model {
            assert!(satisfies(&g.formula, m), "seed {seed}");
        }
        checked += 1;
    }
    assert!(checked >= 30);
}

#[test]
fn runs_are_reproducible() {
    let g = generate_parity(12, 24, 2, 3).unwrap();
    let cfg = SolverConfig { trace: true, ..Default::default() };
    let a = solve(&g.formula, &cfg);
    let b = solve(&g.formula, &cfg);
    assert_eq!(a.status, b.status);
    assert_eq!(a.model, b.model);
    assert_eq!(a.stats, b.stats);
    assert_eq!(a.trace, b.trace);
}

#[test]
fn sequential_and_parallel_agree() {
    for seed in 0..6u64 {
        let g = generate_parity(16, 32, 2, seed).unwrap();
        let par = solve(&g.formula, &SolverConfig { parallel: true, ..Default::default() });
        let seq = solve(&g.formula, &SolverConfig::default().sequential());
        assert_eq!(par.status, seq.status);
        assert_eq!(par.model, seq.model);
        assert_eq!(par.stats, seq.stats);
    }
}

#[test]
fn batch_matches_single_solves() {
    let fs: Vec<_> = (0..8u64).map(|s| generate_parity(8, 12, 1, s).unwrap().formula).collect();
    let batch = solve_many(&fs, &SolverConfig::default());
    for (f, r) in fs.iter().zip(&batch) {
        let single = solve(f, &SolverConfig::default());
        assert_eq!(r.model, single.model);
        assert_eq!(r.stats, single.stats);
    }
}

#[test]
fn ball_order_starts_at_center() {
    let c = BitVec::from_bools(&[true, false, true, true]);
    let first: YCandidate = hamming_ball(&c, 2).next().unwrap();
    assert_eq!(first, YCandidate { bits: c, distance: 0 });
}
