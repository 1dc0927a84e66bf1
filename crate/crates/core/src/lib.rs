//! Decorated singular triangulations of 3-manifolds with a link, their
//! scissors-congruence data and the cyclic 6j state sum.

pub mod perm;
pub mod triangulation;
pub mod branching;
pub mod poly;
pub mod scalar;
pub mod census;
pub mod cocycle;
pub mod charge;
pub mod scissors;
pub mod dehn;
pub mod dilog;
pub mod statesum;
pub mod io;
