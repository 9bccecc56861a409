//! Command line and HTTP service for faceted exploration of news topics.

pub mod app;
pub mod backend;
pub mod config;
pub mod error;
pub mod query;
pub mod server;

pub use app::{App, ApiError};
pub use config::Config;
pub use error::CliError;
