//! Full amalgamation classes of finite graphs: predimension, strong
//! substructures, closures, free amalgams, anti-collapse admissibility,
//! support systems and closure-type trees.

pub mod amalgam;
pub mod anticollapse;
pub mod closure;
pub mod cltp;
pub mod error;
pub mod fuzz;
pub mod oracle;
pub mod predim;
pub mod rational;
pub mod structures;
pub mod supports;

pub use error::{Error, Result};
pub use predim::{ClassSpec, Limits};
pub use rational::Rational;
pub use structures::{FiniteStructure, VertexId, VertexSet};
