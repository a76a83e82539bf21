//! Markov–Ivanovsky combing of braid groups, free-group boundary tools and
//! seeded random-walk experiments.

pub mod artin;
pub mod braid;
pub mod comb;
pub mod error;
pub mod experiments;
pub mod golden;
pub mod lab;
pub mod point;
pub mod schreier;
pub mod text;
pub mod walker;
pub mod word;

pub use error::{Error, Result};
