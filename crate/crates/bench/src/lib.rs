//! Shared fixtures for the benchmarks.

use rayvex::geometry::sample_interior;
use rayvex::{catalog, CatalogEntry, CertifyConfig, EnvelopeModel, Point};

/// Builds a catalog entry's model with a reduced certification budget.
pub fn model(entry: &CatalogEntry, budget: usize) -> EnvelopeModel {
    let config = CertifyConfig {
        budget,
        ..CertifyConfig::default()
    };
    EnvelopeModel::build_with(
        entry.field.clone(),
        entry.default_polytope.clone(),
        entry.envelope_sense,
        entry.anchor.clone(),
        &config,
    )
    .expect("catalog defaults build")
}

/// Every catalog model, keyed by name.
pub fn models() -> Vec<(&'static str, EnvelopeModel)> {
    catalog().iter().map(|e| (e.name, model(e, 1000))).collect()
}

/// Deterministic query points in the model's original domain.
pub fn queries(model: &EnvelopeModel, count: usize) -> Vec<Point> {
    sample_interior(model.original_polytope(), 99, count).expect("interior sampling")
}
