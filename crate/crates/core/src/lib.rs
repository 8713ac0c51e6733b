//! Computational geometry of K-strongly convex sets: hulls defined by
//! intersections of translates of a gauge body, Carathéodory-type subset
//! selection, Helly-type covering checks and Minkowski summand tests.

pub mod body;
pub mod caratheodory;
pub mod convex;
pub mod covering;
pub mod directions;
pub mod disks;
pub mod error;
pub mod linalg;
pub mod optim;
pub mod polygon;
pub mod sampling;
pub mod strong;
pub mod summand;
pub mod tolerance;
pub mod witnesses;

pub use body::{minkowski_sum, Ball, Body, ConeBody, HPolytope, ProductBody, SupportOracle};
pub use error::{GeomError, Result};
pub use linalg::{Matrix, Vector};
pub use tolerance::ToleranceConfig;
pub use covering::{cover_avoiding, cover_translate, helly_check, CoverWitness, HellyReport};
pub use optim::feasible::{translate_feasible_set, TranslateSet};
pub use optim::search::{max_convex_search, MaxConvexResult};
pub use strong::{erode, hull_member, strong_hull, Membership, StrongSet, Subtrahend};
pub use caratheodory::{minimal_subset, product_reduce, two_subhulls, PointRole, SubsetCertificate};
pub use summand::{criterion_check_2d, generating_pair_test, is_summand, CriterionReport, PairTestOutcome, SummandReport};
