//! Bridge-sphere tooling for plat presentations of links.
//!
//! The crate builds the two-parameter family `L_{m,n}` together with its
//! `n`-bridge sphere `H` and `m`-bridge sphere `V`, sweeps level spheres down
//! a presentation while tracking the arc system cut out by the upper bridge
//! disks, and decides the 2-connectivity condition on the induced graphs.

pub mod arcs;
pub mod bundles;
pub mod error;
pub mod family;
pub mod invariants;
pub mod moves;
pub mod oracle;
pub mod presentation;
pub mod render;
pub mod rotate;

pub use error::{Error, Result};
pub use presentation::{Level, LevelEvent, PlatPresentation};
