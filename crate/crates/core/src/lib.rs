//! Symbolic and numerical machinery for the PT-symmetric cubic anharmonic
//! oscillator `H = p²/2m + μ²x²/2 + iϵx³`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, caching and the
//! command-line driver live in the `ptcubic-cli` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod weyl;
pub mod metric;
pub mod params;
pub mod goldens;
pub mod hermitian;
pub mod spectral;
pub mod classical;
pub mod density;
