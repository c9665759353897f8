//! Configuration-driven driver for the `obscat` solver: manufactured-solution
//! verification, convergence studies, far-field sweeps and near-field grids.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::RunConfig;
pub use error::CliError;
pub use run::{run, Mode, Outcome};
