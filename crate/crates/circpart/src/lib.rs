//! Partitioning regular polygons into pieces of bounded aspect ratio.
//!
//! A piece with indisk radius `r` and outdisk radius `R` has aspect ratio
//! `R / r`.  This crate builds partitions of the regular k-gon in which every
//! piece has aspect ratio at most a prescribed bound `gamma`, using a
//! recursive covering of each edge by tangent disks.  The central machinery:
//!
//! * [`geom`] - points, disks, tangency tests, and the outcircle spanned over
//!   a gap between two covering disks;
//! * [`bounds`] - the two critical ratio thresholds for a k-gon (corner
//!   capture and one-piece trivial cover);
//! * [`fixedpoint`] - fixed points of the gap recurrence and the critical
//!   ratio at which they appear;
//! * [`edgecover`] - the scaled gap recurrence itself, its termination
//!   classification, and the recursive edge covering;
//! * [`construct`] - assembling a full k-gon partition from a central disk,
//!   corner disks, and mirrored edge coverings;
//! * [`verify`] - sampling-based coverage checks and grid growth into
//!   connected pieces;
//! * [`cli`] - the command-line front end and its JSON/CSV/SVG output.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod edgecover;
pub mod error;
pub mod fixedpoint;
pub mod geom;
pub mod verify;

pub use error::{Error, Result};
