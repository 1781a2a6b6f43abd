pub mod eval;
pub mod report;
pub mod verify;
