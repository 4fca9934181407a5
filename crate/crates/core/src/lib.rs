//! Colorings of regular trees presented as lifts of colored edge-indexed
//! graphs: ball censuses, subword complexity `b(n)`, special balls, type
//! sets, periodicity with quotient reconstruction, and the word liftings that
//! produce Sturmian colorings.
//!
//! ```
//! use sturmtree::{catalog, census};
//!
//! let p = catalog::example("ex31-sturmian").unwrap();
//! let c = census::ball_census(&p, 6).unwrap();
//! assert_eq!(c.values(), vec![2, 3, 4, 5, 6, 7, 8]);
//! ```

pub mod canon;
pub mod catalog;
pub mod census;
pub mod classify;
pub mod cover;
pub mod error;
pub mod export;
pub mod graph;
pub mod oracle;
pub mod par;
pub mod random;
pub mod verify;
pub mod words;

pub use canon::{balls_equivalent, branches, canonical_key, CanonicalKey};
pub use census::{ball_census, ball_census_with, complexity, special_balls, BallCensus, CensusOptions};
pub use classify::{
    classify_shape, detect_periodic, is_sturmian_up_to, neighbor_type_check, reconstruct_quotient,
    type_profiles, Shape, ShapeVerdict, TypeProfile,
};
pub use cover::{lift_ball, lift_patch, ColoredBall};
pub use error::{Error, Result};
pub use graph::{parse_presentation, Kind, Pos, Presentation, PresentationError, VertexRecord};
pub use oracle::brute_force_census;
pub use par::Parallelism;
