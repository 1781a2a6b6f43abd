//! The three model spaces.

pub mod bilaplace;
pub mod interval;
pub mod newtonian;
