//! Backend spaces.

pub mod farey;
pub mod genus2;
pub mod tree;
