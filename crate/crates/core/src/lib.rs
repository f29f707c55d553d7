//! Charging guidance for electric vehicles with dynamically arriving requests
//! on a road network whose link times and energies change every slot.
//!
//! The crate is organized bottom-up:
//!
//! - [`network`]: directed road network, minimum-energy routing, static distances
//! - [`scenario`]: scenario files and the bundled Sioux Falls example
//! - [`stochastic`]: keyed random streams for links, requests and departures
//! - [`strategy`]: reachability filter and the SDD / CSB selection rules
//! - [`engine`]: the slot loop, metrics, stability test and parameter sweeps

pub mod engine;
pub mod network;
pub mod scenario;
pub mod stochastic;
pub mod strategy;
