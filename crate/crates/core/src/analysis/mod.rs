//! Quantitative structure of packings: window counts and their moments,
//! blocking sets, induced layers and holes, and the density-function space
//! with its merge operators.

pub mod blocking;
pub mod density;
pub mod layers;
pub mod moments;

pub use blocking::{blocking_set_4d, blocking_sets_3d, h_recurrence, is_blocking, min_blocking_search, quoted_blocking_set_4d};
pub use density::{key_inequality_check, merge, DensityFunction};
pub use layers::{hole_cells, induced_layer, layer_deficits, LayerDeficits};
pub use moments::{m2_lower_bound, moments, window_count, window_counts, window_pair_stats, MomentReport, PairStats};
