pub mod approx;
pub mod bench;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matching;
pub mod point;
pub mod rational;
pub mod setcover;
pub mod transform;
pub mod tree;
pub mod unit;
pub mod verify;

mod bitset;

pub use error::{CoverError, Result};
pub use graph::Graph;
pub use point::{Cover, Point};
pub use rational::Rational;
