mod common;

use std::collections::BTreeSet;

use chaingauge::bounds::{choi_bound_global, choi_bound_node, torque_compensation, TORQUE_PREFACTOR};
use chaingauge::embedding::{chain_break_rate, embed_model, greedy_embed, unembed, validate, ChainStrength, GreedyOptions};
use chaingauge::ising::{
    autoscale, cut_size, energy, gen_d_regular, gen_erdos_renyi, maxcut_to_ising, Assignment, IsingModel,
};
use chaingauge::samples::SampleSet;
use chaingauge::spectral::{build_hamiltonian, gap_profile, Schedule};
use chaingauge::topology::{chimera, chimera_coords, chimera_id};
use common::*;
use nalgebra::SymmetricEigen;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn energy_matches_term_sum(n in 1usize..=10, p in 0.0..1.0f64, seed: u64, k: u64) {
        let m = random_model(n, p, 2.0, seed);
        let x = spins_of(k, n);
        let e = energy(&m, &Assignment::new(x.clone()).unwrap()).unwrap();
        prop_assert!((e - model_energy(&m, &x)).abs() <= 1e-12);
    }

    #[test]
    fn generators_are_reproducible(n in 2usize..=30, p in 0.0..1.0f64, seed: u64) {
        prop_assert_eq!(gen_erdos_renyi(n, p, seed).unwrap(), gen_erdos_renyi(n, p, seed).unwrap());
        let d = 3.min(n - 1);
        if n * d % 2 == 0 {
            prop_assert_eq!(gen_d_regular(n, d, seed).unwrap(), gen_d_regular(n, d, seed).unwrap());
        }
    }

    #[test]
    fn chimera_ids_round_trip(m in 1usize..=6, l in 1usize..=4) {
        for id in 0..2 * l * m * m {
            let (r, c, side, k) = chimera_coords(m, l, id);
            prop_assert_eq!(chimera_id(m, l, r, c, side, k), id);
        }
    }

    #[test]
    fn node_bounds_below_global(n in 1usize..=12, p in 0.0..1.0f64, seed: u64) {
        let m = random_model(n, p, 3.0, seed);
        let global = choi_bound_global(&m).unwrap().magnitude;
        for v in 0..n {
            prop_assert!(global >= choi_bound_node(&m, v).unwrap());
        }
    }

    #[test]
    fn torque_is_homogeneous(n in 2usize..=12, seed: u64, c in 0.01..100.0f64) {
        let m = random_model(n, 0.6, 2.0, seed);
        prop_assume!(m.graph().edge_count() > 0);
        let base = torque_compensation(&m, TORQUE_PREFACTOR).unwrap();
        let scaled = IsingModel::from_parts(m.graph().clone(), m.h().to_vec(), m.j().iter().map(|w| w * c).collect()).unwrap();
        let t = torque_compensation(&scaled, TORQUE_PREFACTOR).unwrap();
        prop_assert!((t - c * base).abs() <= 1e-9 * (1.0 + c * base));
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn cut_identity_and_maxcut_optima(n in 2usize..=12, p in 0.1..0.9f64, seed: u64) {
        let g = gen_erdos_renyi(n, p, seed).unwrap();
        let m = maxcut_to_ising(&g);
        let edges = g.edge_count() as f64;
        let mut cuts = Vec::with_capacity(1 << n);
        let mut energies = Vec::with_capacity(1 << n);
        for k in 0..1u64 << n {
            let x = spins_of(k, n);
            let cut = cut_size(&g, &x).unwrap();
            let corr: f64 = g.edges().iter().map(|&(u, v)| f64::from(x[u] * x[v])).sum();
            prop_assert_eq!(cut as f64, (edges - corr) / 2.0);
            cuts.push(cut);
            energies.push(model_energy(&m, &x));
        }
        let max_cut = *cuts.iter().max().unwrap();
        let argmax: BTreeSet<usize> = cuts.iter().enumerate().filter(|(_, c)| **c == max_cut).map(|(i, _)| i).collect();
        prop_assert_eq!(minimizers(&energies, 1e-9), argmax);
    }

    #[test]
    fn autoscale_keeps_minimizers(n in 1usize..=10, p in 0.0..1.0f64, seed: u64, w in 0.1..8.0f64) {
        let m = random_model(n, p, w, seed);
        let (scaled, factor) = autoscale(&m, [-2.0, 2.0], [-1.0, 1.0]).unwrap();
        prop_assert!(factor >= 1.0);
        prop_assert!(scaled.h().iter().all(|h| h.abs() <= 2.0 + 1e-12));
        prop_assert!(scaled.j().iter().all(|j| j.abs() <= 1.0 + 1e-12));
        let tol = 1e-9 * (1.0 + m.weight_mass());
        prop_assert_eq!(minimizers(&all_energies(&m), tol), minimizers(&all_energies(&scaled), tol / factor));
    }

    #[test]
    fn spread_weights_sum_to_logical(n in 2usize..=6, seed: u64, f in 0.1..5.0f64) {
        let m = random_model(n, 0.7, 2.0, seed);
        let (e, t) = random_embedding(m.graph(), 3, 14, seed ^ 1);
        let em = embed_model(&m, &e, &t, &ChainStrength::Uniform(f)).unwrap();
        let phys = em.physical();
        for v in 0..n {
            let sum: f64 = em.chain_positions(v).iter().map(|&p| phys.h()[p]).sum();
            prop_assert!((sum - m.h()[v]).abs() <= 1e-12);
        }
        for ((u, v), w) in m.couplings() {
            let (cu, cv) = (em.chain_positions(u), em.chain_positions(v));
            let sum: f64 = phys
                .couplings()
                .filter(|((a, b), _)| (cu.contains(a) && cv.contains(b)) || (cu.contains(b) && cv.contains(a)))
                .map(|(_, x)| x)
                .sum();
            prop_assert!((sum - w).abs() <= 1e-12);
        }
    }

    #[test]
    fn unbroken_chains_add_constant_offset(n in 1usize..=5, seed: u64, f in 0.1..5.0f64) {
        let m = random_model(n, 0.7, 2.0, seed);
        let (e, t) = random_embedding(m.graph(), 3, 14, seed ^ 2);
        let em = embed_model(&m, &e, &t, &ChainStrength::Uniform(f)).unwrap();
        let offset = -f * em.ferro_edges().len() as f64;
        let labels = em.qubits().to_vec();
        for k in 0..1u64 << n {
            let logical = spins_of(k, n);
            let phys = em.lift(&logical).unwrap();
            let diff = model_energy(em.physical(), &phys) - model_energy(&m, &logical);
            prop_assert!((diff - offset).abs() <= 1e-9);

            let ss = SampleSet::from_shots(labels.clone(), vec![(phys.clone(), 0.0)], 0).unwrap();
            prop_assert_eq!(unembed(&ss, &e, k).unwrap()[0].to_vec(), logical);
            prop_assert_eq!(chain_break_rate(&phys, &em).unwrap(), 0.0);
        }
    }

    #[test]
    fn break_rate_ignores_global_flip(n in 1usize..=6, seed: u64, bits: u64) {
        let m = random_model(n, 0.7, 1.0, seed);
        let (e, t) = random_embedding(m.graph(), 4, 20, seed ^ 3);
        let em = embed_model(&m, &e, &t, &ChainStrength::Uniform(1.0)).unwrap();
        let x = spins_of(bits, em.qubits().len());
        let flipped: Vec<i8> = x.iter().map(|s| -s).collect();
        prop_assert_eq!(chain_break_rate(&x, &em).unwrap(), chain_break_rate(&flipped, &em).unwrap());
    }

    #[test]
    fn final_levels_are_classical_energies(n in 1usize..=8, seed: u64) {
        let m = random_model(n, 0.6, 1.5, seed);
        let dim = 1usize << n;
        let p = gap_profile(&m, &Schedule::linear(), 2, dim, 12).unwrap();
        let mut classical = all_energies(&m);
        classical.sort_by(f64::total_cmp);
        for (a, b) in p.levels[1].iter().zip(&classical) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn levels_move_no_more_than_the_operator(n in 1usize..=5, seed: u64) {
        let m = random_model(n, 0.7, 1.5, seed);
        let sch = Schedule::linear();
        let dim = 1usize << n;
        let p = gap_profile(&m, &sch, 21, dim, 12).unwrap();
        for i in 0..p.s.len() - 1 {
            let diff = build_hamiltonian(&m, p.s[i + 1], &sch, 12).unwrap() - build_hamiltonian(&m, p.s[i], &sch, 12).unwrap();
            let norm = SymmetricEigen::new(diff).eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let jump = p.levels[i].iter().zip(&p.levels[i + 1]).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            prop_assert!(jump <= norm + 1e-9, "jump {} exceeds norm {}", jump, norm);
        }
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn greedy_never_returns_invalid(n in 2usize..=10, p in 0.1..0.8f64, seed: u64, m in 1usize..=3) {
        let g = gen_erdos_renyi(n, p, seed).unwrap();
        let t = chimera(m, 4).unwrap();
        let opts = GreedyOptions { max_tries: 4, refine_passes: 16, max_qubits: None };
        if let Ok(e) = greedy_embed(&g, &t, seed, &opts) {
            prop_assert!(validate(&e, &g, &t).is_valid());
        }
    }
}
