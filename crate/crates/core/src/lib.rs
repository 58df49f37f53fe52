//! Cyclic sieving for finite Grassmannians, partial flag varieties and set
//! flags under the action of non-split tori.
//!
//! The crate is `no_std` with `alloc`. It contains exact arithmetic over F_q
//! and its extensions, echelon forms and Smith normal forms, the index
//! combinatorics of Schubert cells, symbolic weights built from q-numbers,
//! their evaluation at roots of unity, brute-force fixed-point counters and
//! the verification routines that compare the two.

#![no_std]

extern crate alloc;

pub mod combinat;
pub mod error;
pub mod eval;
pub mod ffield;
pub mod fqlinalg;
pub mod geometry;
pub mod poly;
pub mod sieve;
pub mod weightalg;

pub use error::{Error, Result};
