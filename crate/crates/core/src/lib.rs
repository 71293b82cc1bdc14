//! Polynomial root finding with counted arithmetic: Newton's method with
//! iterated refinement against the Ehrlich–Aberth simultaneous iteration.

pub mod numeric;
pub mod poly;
pub mod matching;
pub mod aberth;
pub mod newton;
pub mod harness;
