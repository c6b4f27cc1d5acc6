pub mod bench;
pub mod error;
pub mod group_algebra;
pub mod lcu;
pub mod pauli_expand;
pub mod permutation;
pub mod quditsim;
pub mod verify;
pub mod yor;
pub mod young;
