use fpp_core::analysis::{
    geometric_pmf, ks_two_sample, recentered_path_lengths, recentering_oracle_samples, tv_distance,
    DegreeDistribution,
};
use fpp_core::dist::{DegreeLaw, WeightLaw};
use fpp_core::graph::{build_configuration_model, draw_degree_sequence, DEFAULT_DENSE_EDGE_BUDGET};
use fpp_core::oracles::{
    solve_malthusian, solve_w_cm, solve_w_complete, w_regular_exponential_laplace,
    CompleteGraphSampler, FiniteVarianceSampler, PoolConfig, SamplePool, DEFAULT_TRUNCATION,
};
use fpp_core::rng::RngStream;
use fpp_core::spt::{pooled_tree_degrees, shortest_path_trees};

const SEED: u64 = 77;

#[test]
fn recentered_lengths_match_the_limit_at_s_two() {
    let s = 2.0;
    let stream = RngStream::new(SEED, 1);
    let sim = recentered_path_lengths(
        4000,
        s,
        12,
        20,
        Some(250),
        DEFAULT_DENSE_EDGE_BUDGET,
        stream.labeled("sim"),
    )
    .unwrap();
    let pool = solve_w_complete(
        s,
        DEFAULT_TRUNCATION,
        &PoolConfig::with_size(50_000),
        stream.labeled("pool"),
    )
    .unwrap();
    let oracle =
        recentering_oracle_samples(&pool, 200_000, &mut stream.labeled("draws").rng()).unwrap();
    let ks = ks_two_sample(&sim.values, &oracle).unwrap();
    assert!(ks < 0.08, "KS {ks}");
}

#[test]
fn complete_graph_s_one_is_geometric() {
    let stream = RngStream::new(SEED, 2);
    let pool = solve_w_complete(
        1.0,
        DEFAULT_TRUNCATION,
        &PoolConfig::with_size(20_000),
        stream.labeled("pool"),
    )
    .unwrap();
    assert!((pool.mean() - 1.0).abs() < 0.02);
    let mut sampler = CompleteGraphSampler::new(1.0, &pool).unwrap();
    let mut rng = stream.labeled("draws").rng();
    let draws = (0..200_000).map(|_| sampler.sample(&mut rng).unwrap());
    let dist = DegreeDistribution::from_samples(draws).unwrap();
    let k_hi = dist.max_degree().max(30);
    let tv = tv_distance(dist.pmf_slice(), &geometric_pmf(0.5, k_hi)).unwrap();
    assert!(tv < 0.01, "TV {tv}");
}

#[test]
fn regular_exponential_pool_matches_closed_form() {
    let stream = RngStream::new(SEED, 3);
    let law = DegreeLaw::fixed(4).unwrap();
    let lambda = solve_malthusian(law.size_biased().unwrap().nu, &WeightLaw::Exponential).unwrap();
    assert!((lambda - 2.0).abs() < 1e-9);
    let pool = solve_w_cm(
        &law,
        &WeightLaw::Exponential,
        lambda,
        &PoolConfig::with_size(50_000),
        stream,
    )
    .unwrap();
    for u in [0.5, 1.0, 2.0] {
        let exact = w_regular_exponential_laplace(4, u);
        assert!(
            (pool.laplace(u) - exact).abs() < 0.01,
            "u = {u}: {} vs {exact}",
            pool.laplace(u)
        );
    }
}

#[test]
fn pool_survives_a_file_round_trip() {
    let pool = solve_w_complete(
        0.5,
        DEFAULT_TRUNCATION,
        &PoolConfig::with_size(20_000),
        RngStream::new(SEED, 4),
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pool.txt");
    pool.write(&path).unwrap();
    let back = SamplePool::read(&path).unwrap();
    assert_eq!(back.samples(), pool.samples());
    assert_eq!(back.target(), pool.target());
    assert_eq!(back.meta.s, Some(0.5));
}

#[test]
fn configuration_model_trees_follow_the_oracle() {
    let stream = RngStream::new(SEED, 5);
    let law = DegreeLaw::fixed(4).unwrap();
    let n = 20_000;
    let seq = draw_degree_sequence(&law, n, stream.labeled("degrees")).unwrap();
    let mut g = build_configuration_model(&seq, stream.labeled("pairing")).unwrap();
    g.attach_weights(&WeightLaw::Exponential, stream.labeled("weights"));
    let trees = shortest_path_trees(&g, &[0, 1, 2, 3, 4]).unwrap();
    let sim = pooled_tree_degrees(&trees, true).unwrap();

    let lambda = solve_malthusian(3.0, &WeightLaw::Exponential).unwrap();
    let pool = solve_w_cm(
        &law,
        &WeightLaw::Exponential,
        lambda,
        &PoolConfig::with_size(20_000),
        stream.labeled("pool"),
    )
    .unwrap();
    let mut sampler =
        FiniteVarianceSampler::new(&law, WeightLaw::Exponential, lambda, &pool).unwrap();
    let mut rng = stream.labeled("draws").rng();
    let oracle =
        DegreeDistribution::from_samples((0..200_000).map(|_| sampler.sample(&mut rng))).unwrap();
    let tv = sim.tv_distance(&oracle);
    assert!(tv < 0.03, "TV {tv}");
    assert!((oracle.mean() - 2.0).abs() < 0.02);
}
