//! Permutations, finite permutation groups and their constructors.

mod descriptor;
mod gf;
mod group;
mod named;
mod permutation;
mod transitive;

pub use descriptor::{named_group, Action, CycleList, GroupDescriptor, GroupExpr};
pub use gf::FiniteField;
pub use group::{coset_action, direct_product, group_closure, regular_action, ElementSet, PermGroup, DEFAULT_CAP};
pub use named::{affine_gf, alternating, cyclic, default_multiplier, dihedral, semidirect_cyclic, symmetric};
pub use permutation::{CycleType, Permutation};
pub use transitive::{label, label_by_name, labels, transitive_group, TransitiveLabel};

pub fn compose(a: &Permutation, b: &Permutation) -> crate::Result<Permutation> {
    a.compose(b)
}
