//! Genetic operators: roulette-wheel selection, one-point crossover,
//! Gaussian mutation, half-elitism survival.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::normal;

pub type Genome = Vec<f64>;

/// Normalized selection probabilities proportional to the given fitness
/// values. All-zero fitness falls back to uniform weights.
pub fn selection_weights(fitness: &[f64]) -> Vec<f64> {
    let total: f64 = fitness.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return vec![1.0 / fitness.len() as f64; fitness.len()];
    }
    fitness.iter().map(|f| f / total).collect()
}

/// k independent draws (with replacement) from the weight distribution.
pub fn roulette_select(weights: &[f64], k: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                if u < acc {
                    return i;
                }
            }
            weights.len() - 1
        })
        .collect()
}

/// Swap point k ~ Uniform{1, ..., d-1}; children swap suffixes at k.
pub fn one_point_crossover(
    a: &Genome,
    b: &Genome,
    rng: &mut impl Rng,
) -> Result<(Genome, Genome)> {
    if a.len() != b.len() {
        return Err(Error::Config("crossover: genome lengths differ".into()));
    }
    if a.len() < 2 {
        return Err(Error::Config("crossover needs genomes of length >= 2".into()));
    }
    let k = rng.gen_range(1..a.len());
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    c1[k..].copy_from_slice(&b[k..]);
    c2[k..].copy_from_slice(&a[k..]);
    Ok((c1, c2))
}

/// Per coordinate, with probability p_mut, adds noise ~ N(0, sigma)
/// (sigma is the standard deviation). The input genome is untouched.
pub fn gaussian_mutate(g: &Genome, p_mut: f64, sigma: f64, rng: &mut impl Rng) -> Genome {
    g.iter()
        .map(|&v| {
            if rng.gen::<f64>() < p_mut {
                v + normal(rng, 0.0, sigma)
            } else {
                v
            }
        })
        .collect()
}

/// Half-elitism over 2I evaluated individuals: the top I/2 by fitness
/// survive deterministically (ties broken by lower id), the remaining I/2
/// are sampled by roulette without replacement from the rest. Returns
/// selected positions into `fitness`.
pub fn half_elitism_survival(
    ids: &[u64],
    fitness: &[f64],
    keep: usize,
    rng: &mut impl Rng,
) -> Result<Vec<usize>> {
    if ids.len() != fitness.len() {
        return Err(Error::Config("survival: ids/fitness length mismatch".into()));
    }
    if keep > ids.len() {
        return Err(Error::Config("survival: keep exceeds population".into()));
    }
    let elite_n = keep / 2;
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&x, &y| {
        fitness[y]
            .partial_cmp(&fitness[x])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(ids[x].cmp(&ids[y]))
    });
    let mut selected: Vec<usize> = order[..elite_n].to_vec();
    let mut rest: Vec<usize> = order[elite_n..].to_vec();
    while selected.len() < keep {
        let weights = selection_weights(&rest.iter().map(|&i| fitness[i]).collect::<Vec<_>>());
        let pick = roulette_select(&weights, 1, rng)[0];
        selected.push(rest.remove(pick));
    }
    Ok(selected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use std::collections::HashSet;

    #[test]
    fn weights_normalize_and_fall_back() {
        assert_eq!(selection_weights(&[2.0, 2.0]), vec![0.5, 0.5]);
        assert_eq!(selection_weights(&[3.0, 1.0]), vec![0.75, 0.25]);
        assert_eq!(selection_weights(&[0.0, 0.0, 0.0]), vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn roulette_degenerate_weight() {
        let mut rng = stream(1, &[1]);
        let picks = roulette_select(&[0.0, 1.0, 0.0], 100, &mut rng);
        assert!(picks.iter().all(|&i| i == 1));
    }

    #[test]
    fn roulette_frequencies_match_weights() {
        let mut rng = stream(2, &[1]);
        let weights = [0.5, 0.3, 0.2];
        let n = 100_000;
        let picks = roulette_select(&weights, n, &mut rng);
        for i in 0..3 {
            let freq = picks.iter().filter(|&&p| p == i).count() as f64 / n as f64;
            assert!((freq - weights[i]).abs() < 0.01, "index {i}: {freq}");
        }
    }

    #[test]
    fn roulette_is_reproducible() {
        let a = roulette_select(&[0.4, 0.6], 50, &mut stream(3, &[1]));
        let b = roulette_select(&[0.4, 0.6], 50, &mut stream(3, &[1]));
        assert_eq!(a, b);
    }

    #[test]
    fn crossover_known_point() {
        // Drive the cut to every k and check the defining split.
        let a = vec![1.0, 2.0, 3.0, 4.0];
        let b = vec![5.0, 6.0, 7.0, 8.0];
        for trial in 0..50u64 {
            let mut rng = stream(trial, &[2]);
            let (c1, c2) = one_point_crossover(&a, &b, &mut rng).unwrap();
            // recover k from c1
            let k = (0..4).find(|&i| c1[i] != a[i]).unwrap_or(4);
            assert!(k >= 1);
            assert_eq!(&c1[..k], &a[..k]);
            assert_eq!(&c1[k..], &b[k..]);
            assert_eq!(&c2[..k], &b[..k]);
            assert_eq!(&c2[k..], &a[k..]);
        }
    }

    #[test]
    fn crossover_identical_parents() {
        let a = vec![1.0, 2.0, 3.0];
        let mut rng = stream(4, &[2]);
        let (c1, c2) = one_point_crossover(&a, &a, &mut rng).unwrap();
        assert_eq!(c1, a);
        assert_eq!(c2, a);
    }

    #[test]
    fn crossover_conserves_multiset_exhaustively() {
        // Distinct values so the multiset check is exact, across many
        // seeds every cut point is exercised.
        let a: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..6).map(|i| 100.0 + i as f64).collect();
        let mut seen_cuts = HashSet::new();
        for trial in 0..200u64 {
            let mut rng = stream(trial, &[3]);
            let (c1, c2) = one_point_crossover(&a, &b, &mut rng).unwrap();
            let k = (0..6).find(|&i| c1[i] != a[i]).unwrap();
            seen_cuts.insert(k);
            let mut parents: Vec<u64> = a.iter().chain(&b).map(|v| v.to_bits()).collect();
            let mut children: Vec<u64> = c1.iter().chain(&c2).map(|v| v.to_bits()).collect();
            parents.sort_unstable();
            children.sort_unstable();
            assert_eq!(parents, children);
        }
        assert_eq!(seen_cuts, (1..6).collect::<HashSet<_>>());
    }

    #[test]
    fn crossover_rejects_short_genomes() {
        let mut rng = stream(5, &[2]);
        assert!(one_point_crossover(&vec![1.0], &vec![2.0], &mut rng).is_err());
    }

    #[test]
    fn mutation_zero_probability_is_identity() {
        let g = vec![1.0, -2.0, 3.0];
        let mut rng = stream(6, &[4]);
        assert_eq!(gaussian_mutate(&g, 0.0, 0.05, &mut rng), g);
    }

    #[test]
    fn mutation_moments() {
        let d = 10_000;
        let g = vec![0.0; d];
        let sigma = 0.05;
        let mut rng = stream(7, &[4]);
        let m = gaussian_mutate(&g, 1.0, sigma, &mut rng);
        let mean = m.iter().sum::<f64>() / d as f64;
        let var = m.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / d as f64;
        assert!(mean.abs() < 3.0 * sigma / (d as f64).sqrt());
        assert!((var.sqrt() - sigma).abs() / sigma < 0.05);
    }

    #[test]
    fn survival_keeps_best_and_sizes() {
        let ids = [0u64, 1, 2, 3];
        let fitness = [4.0, 3.0, 2.0, 1.0];
        for trial in 0..100u64 {
            let mut rng = stream(trial, &[5]);
            let kept = half_elitism_survival(&ids, &fitness, 2, &mut rng).unwrap();
            assert_eq!(kept.len(), 2);
            assert!(kept.contains(&0), "elite must survive");
            let unique: HashSet<_> = kept.iter().collect();
            assert_eq!(unique.len(), 2);
        }
    }

    #[test]
    fn survival_outcome_probabilities() {
        // 2I=4, I=2: individual 0 (fitness 4) elite; the second slot is
        // sampled over {3, 2, 1} with probabilities 3/6, 2/6, 1/6.
        let ids = [0u64, 1, 2, 3];
        let fitness = [4.0, 3.0, 2.0, 1.0];
        let trials = 100_000;
        let mut counts = [0usize; 4];
        let mut rng = stream(8, &[5]);
        for _ in 0..trials {
            let kept = half_elitism_survival(&ids, &fitness, 2, &mut rng).unwrap();
            counts[kept[1]] += 1;
        }
        let expect = [0.0, 3.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0];
        for i in 1..4 {
            let freq = counts[i] as f64 / trials as f64;
            assert!((freq - expect[i]).abs() < 0.02, "index {i}: {freq}");
        }
    }
}
