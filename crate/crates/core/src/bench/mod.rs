//! Evaluation campaigns and their durable results log.

pub mod campaign;
pub mod corpus;
pub mod random;
pub mod record;

pub use campaign::{run_campaign, run_episode, CampaignConfig, CampaignError, CampaignSummary, PlannerConfig};
pub use corpus::{load_benchmark_set, load_benchmark_sets, BenchmarkSet, CorpusError, DOMAIN_ORDER};
pub use record::{digest, read_records, store_raw, EpisodeRecord, LogError, RecordOutcome, ResultsLog};
