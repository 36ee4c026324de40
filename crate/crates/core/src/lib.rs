//! Exact-arithmetic toolkit for metric Diophantine approximation with
//! arbitrary denominators: approximation sets, overlap measures, weighted
//! pair graphs and checkers for the inequalities they satisfy.

pub mod arith;
pub mod dsgen;
pub mod intervals;
pub mod measures;
pub mod rational;
pub mod report;
pub mod verify;

pub use rational::Rational;
