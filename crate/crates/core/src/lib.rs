pub mod arith;
pub mod cli;
pub mod contiguity;
pub mod criteria;
pub mod eval;
pub mod explicit_log;
pub mod hodge;
pub mod regulator;
