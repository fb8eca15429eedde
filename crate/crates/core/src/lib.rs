//! Lombardi drawings of the gadget graphs built from pseudoline arrangements.
//!
//! The crate compiles a combinatorial description of a simple pseudoline
//! arrangement into a graph with a rotation system, draws that graph with
//! circular-arc edges and perfect angular resolution when a line realization
//! is known, checks arbitrary candidate drawings, and reads the arrangement
//! back out of a drawing.

pub mod geom;
pub mod arrangement;
pub mod hyperbolic;
pub mod reduction;
pub mod drawing;
pub mod files;
