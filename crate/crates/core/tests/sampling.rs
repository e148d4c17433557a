use plancherel::experiments::chi_square_fit;
use plancherel::{exact_distribution, sample_plancherel, sample_poissonized, SeededRng, YoungDiagram};

#[test]
fn rsk_shapes_fit_small_distributions() {
    for n in 3..=6 {
        let mut rng = SeededRng::new(2024, n as u64);
        let samples: Vec<YoungDiagram> = (0..20_000).map(|_| sample_plancherel(n, &mut rng).unwrap()).collect();
        let fit = chi_square_fit(&samples, &exact_distribution(n).unwrap()).unwrap();
        assert!(fit.p_value > 1e-3, "n={n}: {fit:?}");
    }
}

#[test]
fn poissonized_shapes_conditioned_on_size() {
    let mut rng = SeededRng::new(17, 0);
    let mut by_size: Vec<Vec<YoungDiagram>> = vec![Vec::new(); 6];
    for _ in 0..40_000 {
        let d = sample_poissonized(2.0, &mut rng).unwrap();
        if (2..=5).contains(&d.n()) {
            by_size[d.n()].push(d);
        }
    }
    for n in 2..=5 {
        let fit = chi_square_fit(&by_size[n], &exact_distribution(n).unwrap()).unwrap();
        assert!(fit.p_value > 1e-3, "n={n}: {fit:?}");
    }
}

#[test]
fn poissonized_mean_size() {
    let mut rng = SeededRng::new(5, 1);
    let count = 2000;
    let total: usize = (0..count).map(|_| sample_poissonized(30.0, &mut rng).unwrap().n()).sum();
    let mean = total as f64 / count as f64;
    // Poisson(900): standard error 30/√2000
    assert!((mean - 900.0).abs() < 4.0 * 30.0 / (count as f64).sqrt(), "{mean}");
}

#[test]
fn streams_are_reproducible_in_any_order() {
    let forward: Vec<YoungDiagram> = (0..8).map(|i| sample_plancherel(50, &mut SeededRng::new(3, i)).unwrap()).collect();
    let backward: Vec<YoungDiagram> = (0..8).rev().map(|i| sample_plancherel(50, &mut SeededRng::new(3, i)).unwrap()).collect();
    assert!(forward.iter().eq(backward.iter().rev()));
}
