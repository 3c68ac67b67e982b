//! Exact arithmetic in number fields of small degree over Q.

pub mod canonical;
pub mod fp;
pub mod galois;
pub mod irreducible;
pub mod linalg;
pub mod order;
pub mod poly;
pub mod record;
pub mod roots;
pub mod tower;

pub use canonical::canonical_generator;
pub use galois::{galois_label, Confidence, GaloisLabel};
pub use irreducible::is_irreducible;
pub use order::{maximal_order_disc, MaximalOrder, Order};
pub use poly::IntegerPolynomial;
pub use record::NumberFieldRecord;
pub use tower::{brauer_check, build_s3_tower, splitting_sextic, tower_check, TowerRecord};
