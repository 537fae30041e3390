//! Command-line driver for the flatcliff verification campaigns.

pub mod app;
pub mod campaigns;
