//! Exact-arithmetic toolkit for Hilbert curves of polarized P1-bundles
//! over surfaces and threefolds.

pub mod analysis;
pub mod chern;
pub mod chow;
pub mod hilbert;
pub mod linalg;
pub mod multipoly;
pub mod rational;
pub mod recursion;

pub use chern::{chern_data, ChernData};
pub use chow::{BaseRing, BundleData, XClass};
pub use hilbert::{Frame, HilbertPoly};
pub use multipoly::MultiPoly;
pub use rational::Rational;
