//! Genetic-algorithm wrapper feature selection.
//!
//! Chromosomes are d-bit inclusion masks; fitness is the mean accuracy of an
//! inner stratified cross-validation on the masked features (training
//! accuracy alone would reward degenerate all-ones masks). Tournament
//! selection, two-point crossover, bit-flip mutation, elitism.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{stratified_folds, svm_predict, svm_train, Dataset, MlError, SvmParams};

/// GA knobs. Defaults: population 200, two-point crossover, mutation 0.01,
/// 50 generations, elitism 2, tournament size 3, 3-fold inner CV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub mutation_rate: f64,
    pub generations: usize,
    pub elitism: usize,
    pub tournament: usize,
    pub inner_folds: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 200,
            mutation_rate: 0.01,
            generations: 50,
            elitism: 2,
            tournament: 3,
            inner_folds: 3,
            seed: 0,
        }
    }
}

/// Best mask found plus the per-generation best-fitness trace
/// (`generations + 1` entries including the initial population).
#[derive(Debug, Clone, Serialize)]
pub struct GaSelection {
    pub mask: Vec<bool>,
    pub best_fitness: f64,
    pub fitness_trace: Vec<f64>,
}

struct FitnessCache {
    folds: Vec<Vec<usize>>,
    cache: HashMap<Vec<bool>, f64>,
}

impl FitnessCache {
    fn eval(&mut self, ds: &Dataset, params: &SvmParams, mask: &[bool]) -> Result<f64, MlError> {
        if let Some(&f) = self.cache.get(mask) {
            return Ok(f);
        }
        let fitness = if mask.iter().any(|&b| b) {
            // Inner CV over folds fixed for the whole run so masks compete
            // on identical splits.
            let masked = ds.masked(mask);
            let mut correct = 0usize;
            let mut total = 0usize;
            for eval_idx in &self.folds {
                let train_idx: Vec<usize> = self
                    .folds
                    .iter()
                    .filter(|f| !std::ptr::eq(*f, eval_idx))
                    .flatten()
                    .copied()
                    .collect();
                let model = svm_train(&masked.subset(&train_idx), params)?;
                for &i in eval_idx {
                    let (got, _) = svm_predict(&model, &masked.x[i]);
                    correct += usize::from(got == masked.y[i]);
                    total += 1;
                }
            }
            correct as f64 / total as f64
        } else {
            0.0
        };
        self.cache.insert(mask.to_vec(), fitness);
        Ok(fitness)
    }
}

/// Search for a feature mask maximizing inner-CV accuracy.
pub fn ga_select(
    ds: &Dataset,
    cfg: &GaConfig,
    svm_params: &SvmParams,
) -> Result<GaSelection, MlError> {
    let d = ds.d();
    if d < 2 {
        return Err(MlError::TooFewSamples(format!(
            "need at least 2 features, got {d}"
        )));
    }
    assert!(
        cfg.population >= 2 && cfg.population.is_multiple_of(2),
        "population must be even"
    );
    assert!((0.0..=1.0).contains(&cfg.mutation_rate));
    assert!(cfg.tournament >= 1);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut fitness = FitnessCache {
        folds: stratified_folds(&ds.y, cfg.inner_folds, cfg.seed ^ 0x6741)?,
        cache: HashMap::new(),
    };

    let mut population: Vec<Vec<bool>> = (0..cfg.population)
        .map(|_| (0..d).map(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let mut scores: Vec<f64> = population
        .iter()
        .map(|m| fitness.eval(ds, svm_params, m))
        .collect::<Result<_, _>>()?;

    let mut trace = Vec::with_capacity(cfg.generations + 1);
    let best_of = |scores: &[f64]| {
        scores
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
            .map(|(i, &f)| (i, f))
            .unwrap()
    };
    trace.push(best_of(&scores).1);

    for _gen in 0..cfg.generations {
        // Elites survive unchanged (ranked by fitness, ties to lower index).
        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
        let mut next: Vec<Vec<bool>> = ranked
            .iter()
            .take(cfg.elitism.min(population.len()))
            .map(|&i| population[i].clone())
            .collect();

        while next.len() < cfg.population {
            let pa = tournament(&scores, cfg.tournament, &mut rng);
            let pb = tournament(&scores, cfg.tournament, &mut rng);
            let (mut c1, mut c2) = two_point_crossover(&population[pa], &population[pb], &mut rng);
            mutate(&mut c1, cfg.mutation_rate, &mut rng);
            mutate(&mut c2, cfg.mutation_rate, &mut rng);
            next.push(c1);
            if next.len() < cfg.population {
                next.push(c2);
            }
        }

        population = next;
        scores = population
            .iter()
            .map(|m| fitness.eval(ds, svm_params, m))
            .collect::<Result<_, _>>()?;
        trace.push(best_of(&scores).1);
    }

    let (best_idx, best_fitness) = best_of(&scores);
    Ok(GaSelection {
        mask: population[best_idx].clone(),
        best_fitness,
        fitness_trace: trace,
    })
}

fn tournament(scores: &[f64], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut best = rng.gen_range(0..scores.len());
    for _ in 1..size {
        let challenger = rng.gen_range(0..scores.len());
        if scores[challenger] > scores[best] {
            best = challenger;
        }
    }
    best
}

fn two_point_crossover(
    a: &[bool],
    b: &[bool],
    rng: &mut ChaCha8Rng,
) -> (Vec<bool>, Vec<bool>) {
    let d = a.len();
    let mut p1 = rng.gen_range(0..=d);
    let mut p2 = rng.gen_range(0..=d);
    if p1 > p2 {
        std::mem::swap(&mut p1, &mut p2);
    }
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    c1[p1..p2].copy_from_slice(&b[p1..p2]);
    c2[p1..p2].copy_from_slice(&a[p1..p2]);
    (c1, c2)
}

fn mutate(mask: &mut [bool], rate: f64, rng: &mut ChaCha8Rng) {
    for bit in mask {
        if rng.gen_bool(rate) {
            *bit = !*bit;
        }
    }
}

/// Accuracy of a fixed mask under plain cross-validation.
#[cfg(test)]
pub(crate) fn cv_accuracy_with_mask(
    ds: &Dataset,
    mask: &[bool],
    k: usize,
    params: &SvmParams,
    seed: u64,
) -> Result<f64, MlError> {
    Ok(super::kfold_cv(&ds.masked(mask), k, params, seed)?
        .mean
        .accuracy)
}
