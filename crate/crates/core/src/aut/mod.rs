//! Tree automorphisms as portraits, explicit finite groups of them, and the
//! abelian-subgroup bound.

mod abelian;
mod group;
mod portrait;
mod symmetric;

pub use abelian::{
    abelian_subgroup_indices, enumerate_abelian_subgroups, verify_abelian_bound, AbelianBoundReport,
    DEFAULT_ABELIAN_CAP,
};
pub use group::{aut_order, aut_order_formula, closure, enumerate_aut, PortraitGroup, DEFAULT_GROUP_CAP};
pub use portrait::TreePortrait;
pub use symmetric::largest_abelian_order;

impl serde::Serialize for TreePortrait {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.perms().serialize(s)
    }
}
