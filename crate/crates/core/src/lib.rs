//! Capacity-region bounds for the two-user doubly-dirty Gaussian MAC with
//! conferencing transmitters.
//!
//! * [`params`]: channel parameters and the layered scheme's power split.
//! * [`regions`]: outer and inner bound regions as half-plane polytopes.
//! * [`fme`]: per-layer constraint systems and their Fourier-Motzkin
//!   projection, an independent route to the inner bounds.
//! * [`gap`]: constant-gap verification at a parameter point.
//! * [`sweep`]: reproducible parameter sweeps and their CSV/JSON output.
//! * [`sim`]: sample-level Monte Carlo of the modulo-lattice layers.

pub mod error;
pub mod fme;
pub mod gap;
pub mod params;
pub mod regions;
pub mod serde_ext;
pub mod sim;
pub mod sweep;

pub use error::{Error, Result};
pub use fme::{build_layer_system_coop, build_layer_system_no_coop, fme_eliminate, LinearSystem};
pub use gap::{analytic_gap_bounds, classify_case, shrink_check, verify_theorems, AppendixCase, BoundMode, GapReport};
pub use params::{select_cooperation_power, ChannelParams, SchemeParams};
pub use regions::{cfun, RATE_TOL, inner_coop, inner_no_coop, outer_coop, outer_no_coop, HalfPlane, RateRegion};
pub use sim::lattice::{lattice_for_power, mod_lattice, ScalarLattice};
pub use sim::{claim1_mi_check, run_layer_c, run_layer_l, run_layer_r, NoiseFamily, SimReport};
pub use sweep::{run_sweep, SweepConfig};
