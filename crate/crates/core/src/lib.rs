//! Triangle presentations of type Ã_{n-1} and the linear maps they assign
//! to webs, computed as exact sparse matrices. The image of the crossing
//! gives an involutive Yang-Baxter operator.
//!
//! The crate is `no_std` (it only needs `alloc`). Enable the `parallel`
//! feature to sweep relation instances with rayon.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod diffset;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod presentation;
pub mod sparsemat;
pub mod webfun;
pub mod ybe;

pub use error::Error;
pub use gf::{GaloisField, GfElem, PrimeField, Rationals, ScalarField};
pub use presentation::TrianglePresentation;
pub use sparsemat::SparseMatrix;
pub use webfun::{FunctorContext, RelationReport};

pub type Result<T> = core::result::Result<T, Error>;
