//! Trading-volume movement prediction over a multi-relation stock graph.
//!
//! The library combines three information channels for each stock: long-term
//! relations recovered from price/volume correlation, short-term hourly
//! fluctuations processed by a relational graph convolution feeding a gated
//! recurrent update, and sudden events read from news headlines through an
//! attention encoder. A canonical-correlation loss ties the price view and
//! the volume view of the same stock together during training.
//!
//! Everything is testable without proprietary market data: a synthetic
//! generator plants a known correlation structure and news effects, and the
//! `cgm` binary drives generation, graph building, training, evaluation, and
//! gradient verification end to end.

pub mod cli;
pub mod market_data;
pub mod relation_graph;
pub mod error;
pub mod numerics;

pub use error::{CgmError, Result};
