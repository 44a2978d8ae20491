//! Checks against independent oracles: brute-force seed enumeration and the
//! live-edge expansion of Independent Cascade.

mod common;

use common::{brute_force_best_pair, prob, random_graph, seeds, triangle_pairs};
use dqssa::community::{build_candidate_pool, louvain, CandidatePool, Partition};
use dqssa::diffusion::{exact_expected_spread, fis, DiffusionConfig};
use dqssa::swarm::{
    elite_opposition_step, initial_state, optimize, ssa_update, Algorithm, Bounds, Fitness,
    Position, QuantumParams, SwarmConfig,
};
use dqssa::{lie, Graph, NodeId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn full_pool(g: &Graph, k: usize) -> CandidatePool {
    let p = louvain(g, 1.0, 0).unwrap();
    build_candidate_pool(g, &p, k, g.n() as f64).unwrap()
}

#[test]
fn dqssa_finds_brute_force_optimum_on_triangle_pairs() {
    let g = triangle_pairs();
    let pool = full_pool(&g, 2);
    assert_eq!(pool.len(), 12);
    let best = brute_force_best_pair(&g, prob(0.1));
    let mut hits = 0;
    for seed in 0..20 {
        let mut c = SwarmConfig::new(Algorithm::Dqssa, 2);
        c.rng_seed = seed;
        let out = optimize(&g, &pool, &c).unwrap();
        assert!(out.fitness <= best + 1e-12);
        if (out.fitness - best).abs() < 1e-12 {
            hits += 1;
        }
    }
    assert!(hits >= 18, "{hits}/20");
}

#[test]
fn returned_fitness_is_lie_of_returned_seeds() {
    let g = random_graph(5, 30, 0.15, 200);
    let pool = full_pool(&g, 3);
    for alg in Algorithm::ALL {
        let mut c = SwarmConfig::new(alg, 3);
        c.max_iterations = 20;
        let out = optimize(&g, &pool, &c).unwrap();
        let direct = lie(&g, &out.seeds, c.p).unwrap();
        assert!((direct - out.fitness).abs() < 1e-12, "{alg}");
    }
}

#[test]
fn pool_equal_to_k_is_a_single_point() {
    let g = triangle_pairs();
    let partition = louvain(&g, 1.0, 0).unwrap();
    let pool = build_candidate_pool(&g, &partition, 4, 1.0).unwrap();
    assert_eq!(pool.len(), 4);
    let mut expected: Vec<NodeId> = pool.ranked().to_vec();
    expected.sort();
    for alg in Algorithm::ALL {
        let mut c = SwarmConfig::new(alg, 4);
        c.max_iterations = 5;
        let out = optimize(&g, &pool, &c).unwrap();
        assert_eq!(out.seeds.nodes(), expected.as_slice());
        let trace = out.trace.best_fitness();
        assert!(trace.iter().all(|&f| f == trace[0]));
    }
}

#[test]
fn vertex_transitive_graph_any_single_node() {
    let edges = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j)));
    let k5 = Graph::from_edges("k5", 5, edges).unwrap();
    let values: Vec<f64> = (0..5)
        .map(|v| lie(&k5, &seeds(&k5, &[v]), prob(0.1)).unwrap())
        .collect();
    assert!(values.iter().all(|&v| v == values[0]));
    let pool = full_pool(&k5, 1);
    for alg in Algorithm::ALL {
        let out = optimize(&k5, &pool, &SwarmConfig::new(alg, 1)).unwrap();
        assert_eq!(out.seeds.len(), 1);
        assert_eq!(out.fitness, values[0]);
    }
}

#[test]
fn quantum_layer_adds_elite_plus_mutation_evaluations() {
    let g = random_graph(11, 25, 0.2, 200);
    let pool = full_pool(&g, 3);
    for (plain, wrapped) in [
        (Algorithm::Dpso, Algorithm::Dqpso),
        (Algorithm::Dba, Algorithm::Dqba),
    ] {
        assert_eq!(plain.quantum_wrap(), Some(wrapped));
        let mut c = SwarmConfig::new(plain, 3);
        c.population_size = 20;
        c.max_iterations = 10;
        let base = optimize(&g, &pool, &c).unwrap().trace.evaluations();
        c.algorithm = wrapped;
        let quantum = optimize(&g, &pool, &c).unwrap().trace.evaluations();
        // ⌈20/4⌉ + ⌈20/5⌉ = 9 per iteration
        for t in 1..=10 {
            let extra = (quantum[t] - quantum[t - 1]) - (base[t] - base[t - 1]);
            assert_eq!(extra, 9);
        }
    }
}

#[test]
fn disabled_quantum_layer_reduces_to_base_algorithm() {
    let g = random_graph(12, 25, 0.2, 200);
    let pool = full_pool(&g, 3);
    for (plain, wrapped) in [
        (Algorithm::Dpso, Algorithm::Dqpso),
        (Algorithm::Dba, Algorithm::Dqba),
    ] {
        let mut c = SwarmConfig::new(plain, 3);
        c.rng_seed = 77;
        c.quantum = QuantumParams {
            sigma: 1e-12,
            elite_fraction: 0.0,
            mutation_fraction: 0.0,
            ..QuantumParams::default()
        };
        let a = optimize(&g, &pool, &c).unwrap();
        c.algorithm = wrapped;
        let b = optimize(&g, &pool, &c).unwrap();
        assert_eq!(a.trace.best_fitness(), b.trace.best_fitness());
        assert_eq!(a.seeds, b.seeds);
    }
}

#[test]
fn leaders_collapse_onto_food_source_at_final_iteration() {
    let g = random_graph(3, 20, 0.2, 100);
    let pool = full_pool(&g, 3);
    let bounds = Bounds::for_pool(3, pool.len()).unwrap();
    let mut fitness = Fitness::new(&g, &pool, prob(0.1));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut state = initial_state(&mut fitness, &bounds, 10, &mut rng);
    ssa_update(&mut state, &bounds, 50, 50, &mut rng);
    let food = &state.food.position.coords;
    let reach = 2.0 * (-16.0f64).exp() * bounds.width(0);
    for leader in &state.positions[..5] {
        for (x, f) in leader.coords.iter().zip(food) {
            assert!((x - f).abs() <= reach + 1e-15);
        }
    }
}

#[test]
fn elite_opposition_keeps_the_better_point() {
    // four individuals, elite subset of one
    let g = triangle_pairs();
    let pool = full_pool(&g, 2);
    let bounds = Bounds::for_pool(2, pool.len()).unwrap();
    let params = QuantumParams::default();
    assert_eq!(params.elite_count(4), 1);
    for seed in 0..30 {
        let mut fitness = Fitness::new(&g, &pool, prob(0.1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = initial_state(&mut fitness, &bounds, 4, &mut rng);
        let before = state.clone();
        let evals = elite_opposition_step(&mut state, &mut fitness, &bounds, &params, &mut rng);
        assert_eq!(evals, 1);
        let changed: Vec<usize> = (0..4)
            .filter(|&i| state.positions[i] != before.positions[i])
            .collect();
        assert!(changed.len() <= 1);
        for &i in &changed {
            assert!(state.fitness[i] > before.fitness[i]);
            assert!(state.food.fitness >= state.fitness[i]);
        }
        if changed.is_empty() {
            assert_eq!(state.positions, before.positions);
            assert_eq!(state.food, before.food);
        }
    }
}

#[test]
fn monte_carlo_matches_live_edge_enumeration() {
    let path = Graph::from_edges("path", 3, [(0, 1), (1, 2)]).unwrap();
    let s = seeds(&path, &[0]);
    let cfg = DiffusionConfig {
        p: 0.5,
        num_simulations: 200_000,
        rng_seed: 1,
    };
    let mc = fis(&path, &s, &cfg).unwrap();
    assert!((mc.fis_mean - 1.75 / 3.0).abs() <= 0.005);

    for case in 0..10u64 {
        let g = random_graph(100 + case, 8, 0.35, 14);
        let s = seeds(&g, &[0]);
        for p in [0.1, 0.5] {
            let exact = exact_expected_spread(&g, &s, p).unwrap();
            let cfg = DiffusionConfig {
                p,
                num_simulations: 50_000,
                rng_seed: case,
            };
            let mc = fis(&g, &s, &cfg).unwrap();
            assert!(
                (mc.fis_mean - exact).abs() <= 4.0 * mc.std_error() + 1e-12,
                "case {case} p {p}: {} vs {exact}",
                mc.fis_mean
            );
        }
    }
}

#[test]
fn exact_spread_matches_direct_enumeration_of_arcs() {
    // both arcs of every edge enumerated independently: 4^m outcomes
    let g = Graph::from_edges("g", 4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
    let s = seeds(&g, &[0]);
    let p: f64 = 0.3;
    let arcs: Vec<(usize, usize)> = g
        .edges()
        .flat_map(|(u, v)| [(u.0, v.0), (v.0, u.0)])
        .collect();
    let mut expected = 0.0;
    for mask in 0u32..(1 << arcs.len()) {
        let live = mask.count_ones() as i32;
        let w = p.powi(live) * (1.0 - p).powi(arcs.len() as i32 - live);
        let mut reached = [false; 4];
        reached[0] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for (a, &(u, v)) in arcs.iter().enumerate() {
                if mask >> a & 1 == 1 && reached[u] && !reached[v] {
                    reached[v] = true;
                    grew = true;
                }
            }
        }
        expected += w * reached.iter().filter(|&&r| r).count() as f64;
    }
    let exact = exact_expected_spread(&g, &s, p).unwrap();
    assert!((exact - expected / 4.0).abs() < 1e-14);
}

#[test]
fn louvain_partition_modularity_is_recomputable() {
    for seed in 0..10 {
        let g = random_graph(seed, 40, 0.1, 400);
        if g.m() == 0 {
            continue;
        }
        let p = louvain(&g, 1.0, seed).unwrap();
        let q = dqssa::modularity(&g, p.assignment()).unwrap();
        assert!((q - p.modularity()).abs() < 1e-12);
        let singles = Partition::from_labels(&g, &(0..g.n()).collect::<Vec<_>>()).unwrap();
        assert!(p.modularity() >= singles.modularity());
        assert!(p.modularity() >= 0.0);
    }
}

#[test]
fn swarm_positions_in_bounds_for_explicit_pool() {
    let g = triangle_pairs();
    let pool =
        CandidatePool::new(vec![NodeId(2), NodeId(3), NodeId(8)], vec![3.0, 3.0, 3.0]).unwrap();
    let bounds = Bounds::for_pool(2, pool.len()).unwrap();
    assert!(bounds.contains(&Position::new(vec![0.0, 2.0])));
    let out = optimize(&g, &pool, &SwarmConfig::new(Algorithm::Dqssa, 2)).unwrap();
    assert!(out.seeds.nodes().iter().all(|v| pool.ranked().contains(v)));
}
