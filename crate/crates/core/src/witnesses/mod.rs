//! Instances attaining lower bounds on the Carathéodory number.

pub mod cone;
pub mod ellipsoid;
mod instance;
pub mod lower_bound;
pub mod product;

pub use cone::{cone_d_min, witness_cone, Arc2, BigCircle, ConeWitness};
pub use ellipsoid::{inscribed_ellipsoid, Ellipsoid, InscribedEllipsoid};
pub use instance::WitnessInstance;
pub use lower_bound::{meets_required_radius, required_radius, witness_at_least_n, LowerBoundWitness};
pub use product::{witness_product, FactorWitness};
