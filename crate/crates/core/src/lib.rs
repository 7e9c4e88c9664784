//! Flips of dense graphs and the metrics they induce.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: dense adjacency, complements, bipartite views, BFS, balls, diameters.
//! * [`flip`]: partitions, flip specs, partition flips and definable flips.
//! * [`vc`]: exact VC-dimension and shatter function.
//! * [`metric`]: the partition, definable and family flip metrics.
//! * [`conversion`]: turning a partition metric into the distance of one concrete flip.
//! * [`breaksep`]: sunflowers, flip-breakability and flip-separability searches.
//!
//! Exhaustive loops run on rayon when the `parallel` feature is enabled (the
//! default) and fall back to plain iterators otherwise. Results never depend
//! on scheduling.

pub mod breaksep;
pub mod conversion;
pub mod error;
pub mod flip;
pub mod generate;
pub mod graph;
pub mod io;
pub mod metric;
pub mod vc;
pub mod weights;

#[doc(hidden)]
pub mod par;

pub use error::{Error, Result};
pub use flip::{FlipSpec, Partition};
pub use graph::{Bipartite, ExtDist, Graph};
pub use weights::{Eps, WeightFn};

/// Default cap on the number of parts whose flips may be enumerated.
pub const DEFAULT_MAX_PARTS: usize = 4;

/// Hard ceiling on enumerable parts: specs are indexed by a `u64` counter
/// over `p(p+1)/2` part pairs.
pub const HARD_MAX_PARTS: usize = 10;
