pub mod acyc;
pub mod bundle;
pub mod error;
pub mod geosym;
pub mod group;
pub mod gset;
pub mod linalg;
pub mod perm;
pub mod schreier;
pub mod tomdieck;
pub mod twisted;
pub mod wreath;

pub use error::{Caps, Error, Result};
pub use group::{FinGroup, Group, GroupHom, Subgroup};
pub use gset::{BiSet, GSet};
pub use perm::Perm;
pub use wreath::{Wreath, WreathElem, WreathHom};
