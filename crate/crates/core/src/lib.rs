//! Graphical house allocation: assign `n` valued houses to the vertices of a
//! graph so that the total envy, the sum over edges of the absolute value
//! difference, is small.
//!
//! The crate provides exact solvers for small instances, approximation
//! algorithms with checkable guarantees, the repunit calculus for cuts of
//! complete binary trees, hardness-gadget generators, and random-graph
//! experiments.

pub mod approx;
pub mod bench;
pub mod cuts;
pub mod error;
pub mod exact;
pub mod gadgets;
pub mod graph;
pub mod instance;
pub mod io;
pub mod random;
pub mod repunit;
pub mod verify;

mod weight;

pub use error::{Error, Result};
pub use graph::Graph;
pub use instance::{envy, prefix_cut_profile, validate_instance, Allocation, HouseValues, Instance, PrefixCutProfile};

/// Size caps for the exponential-time routines.
///
/// The environment variable `GHA_CAP_N`, when set to an integer, overrides
/// every cap at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub min_cut: usize,
    pub dp: usize,
    pub brute: usize,
    pub cutwidth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { min_cut: 24, dp: 22, brute: 10, cutwidth: 12 }
    }
}

impl Caps {
    pub const ENV_VAR: &'static str = "GHA_CAP_N";

    pub fn uniform(cap: usize) -> Self {
        Caps { min_cut: cap, dp: cap, brute: cap, cutwidth: cap }
    }

    /// Defaults, or the uniform override from `GHA_CAP_N`.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Caps::uniform)
            .unwrap_or_default()
    }
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<()> {
    // Bitmask routines index subsets with a u64.
    let cap = cap.min(40);
    if n > cap {
        Err(Error::TooLarge { n, cap })
    } else {
        Ok(())
    }
}
