//! Market data model: hourly bars, news, movement labels, feature windows,
//! and the synthetic generator used in place of proprietary feeds.

pub mod bars;
pub mod examples;
pub mod synth;

pub use bars::{
    date_to_day, day_to_date, load_bars, load_news, parse_date, write_bars, write_news,
    HourlyBar, MarketData, NewsRecord,
};
pub use examples::{
    build_examples, first_hour_proportion, movement_label, BuildReport, DatasetConfig, Dataset,
    DayBatch, FeatureScaler, Movement, MovementExample, Split, Vocab, DEFAULT_MOVEMENT_THRESHOLD,
    DEFAULT_WINDOW,
};
pub use synth::{synth_generate, PlantedEdge, SynthConfig, SynthOutput};
