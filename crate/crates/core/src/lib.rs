//! Track knots from labelled immersed intervals.
//!
//! The crate builds oriented knot diagrams from grid curves with sign labels
//! at their double points, and computes writhe, Seifert circles, the HOMFLY
//! polynomial, 4-genus bounds, quasipositivity certificates and braid forms.

pub mod braid;
pub mod catalog;
pub mod cert;
pub mod codec;
pub mod diagram;
pub mod homfly;
pub mod moves;
pub mod par;
pub mod poly;
pub mod seifert;
pub mod track;
pub mod yamada;

pub use braid::{BraidWord, QPWord};
pub use diagram::{Crossing, PlanarDiagram, Sign};
pub use homfly::{homfly, HomflyEngine};
pub use poly::LaurentPoly2;
