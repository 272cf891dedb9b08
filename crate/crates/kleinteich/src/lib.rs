pub mod error;
pub mod families;
pub mod group;
pub mod involution;
pub mod locus;
pub mod moebius;
pub mod signatures;
