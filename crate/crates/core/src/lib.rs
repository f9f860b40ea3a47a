//! Exact distance-preserving planar emulators for graphs whose terminals lie
//! on a few faces.

pub mod arrangement;
pub mod assemble;
pub mod bench;
pub mod critical;
pub mod error;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod knz;
pub mod oneface;
pub mod paths;
pub mod pipeline;
pub mod preprocess;
pub mod rational;
pub mod simplex;
pub mod skeleton;
pub mod verify;
pub mod weights;
pub mod wyedelta;

pub use error::{Error, Result};
pub use graph::PlanarGraph;
pub use instance::TerminalInstance;
pub use rational::Q;
