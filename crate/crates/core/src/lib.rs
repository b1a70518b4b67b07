//! Exact additive combinatorics over finite groups: bitset sumset kernels,
//! growth statistics, VC/NIP/stability testers for translate set systems,
//! generalized progressions and Bohr sets, Freiman isomorphisms, and
//! construction plus independent verification of arithmetic regularity
//! certificates. Every verdict is an exact integer or rational comparison.

pub mod abelian;
pub mod error;
pub mod freiman;
pub mod group;
pub mod rat;
pub mod set;
pub mod stab;
pub mod subgroup;
pub mod sumset;
pub mod progression;
pub mod regularity;
pub mod vc;

pub use error::{Error, ErrorKind, Result};
pub use group::{FiniteGroup, GroupRepr};
pub use rat::Rat;
pub use set::GroupSet;
pub use subgroup::{enumerate_subgroups, generate_closure, is_coset, Subgroup};
