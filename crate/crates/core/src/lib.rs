//! Micro-macro solver for a two-species BGK gas mixture in one space and
//! one velocity dimension.
//!
//! Each distribution is split as `f_k = M_k + g_kk`: the Maxwellian part is
//! carried by its moments on a finite-volume grid and the remainder by
//! weighted particles. The crate also contains a space-homogeneous lab and a
//! discrete-velocity solver used as a reference.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod driver;
pub mod error;
pub mod grid;
pub mod homogeneous;
pub mod io;
pub mod linalg;
pub mod macrofv;
pub mod model;
pub mod particles;
pub mod projection;
pub mod reference;
pub mod velocity;

pub use error::{Error, Result};
