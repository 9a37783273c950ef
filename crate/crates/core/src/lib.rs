//! Tiling billiards: rays crossing the edges of planar tilings with
//! refraction coefficient −1.
//!
//! The crate is `no_std` (with `alloc`) and covers geometry, tilings,
//! trajectory iteration, orbit classification, closed-form orbit
//! constructions and the theorem-check suites. IO lives in the `tilebill`
//! crate.
#![no_std]

extern crate alloc;

pub mod classify;
pub mod construct;
pub mod dd;
pub mod geom;
pub mod sim;
pub mod tiling;
pub mod verify;
