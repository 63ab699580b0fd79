//! Benchmark inputs shared by the criterion suites.

use venue_core::dataset::{generate, GeneratorConfig};
use venue_core::ConferenceInstance;

/// The default synthetic conference scaled to `participants` attendees.
pub fn conference(participants: usize) -> ConferenceInstance {
    generate(&GeneratorConfig {
        n_participants: participants,
        n_presenters: (participants / 4).max(1),
        ..GeneratorConfig::default()
    })
    .expect("benchmark config is valid")
}
