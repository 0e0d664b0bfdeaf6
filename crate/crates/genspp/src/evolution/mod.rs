//! Genetic search over generator genomes.

pub mod fitness;
pub mod ga;
pub mod operators;
pub mod skew;

pub use fitness::{FitnessMode, FitnessReport};
pub use ga::{
    evaluate_individual, init_population, init_population_skewed, run_ga, run_ga_with_population,
    EvalContext, GAConfig, GAHistory, GenerationRecord, Individual, SkewMode,
};
pub use operators::{
    gaussian_mutate, half_elitism_survival, one_point_crossover, roulette_select,
    selection_weights, Genome,
};
pub use skew::skew_pretrain_genome;
