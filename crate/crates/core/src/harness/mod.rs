//! Seeded generators, brute-force oracles and the property suite.

pub mod generate;
pub mod oracle;
pub mod properties;

pub use generate::{generate_coalgebra, rng_for, GeneratorConfig, TrialRng};
pub use oracle::{
    brute_force_simulation_oracle, brute_force_simulation_witness, kripke_bisimilarity_oracle,
};
pub use properties::{
    property_info, run_property_suite, Counterexample, PropertyInfo, PropertyRunReport, PROPERTIES,
};
