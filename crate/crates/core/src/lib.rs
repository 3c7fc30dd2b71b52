//! An exact, symbolic computational-homotopy engine: pointed simplicial
//! sets, simplicial abelian groups with Dold-Kan homology, the free
//! abelian comonad and its coalgebras, suspension comonads, and the
//! Postnikov / cobar / restricted-totalization tower machinery — all over
//! exact integer arithmetic, verified by property tests at desk scale.

pub mod abgroup;
pub mod freeab;
pub mod intlinalg;
pub mod sab;
pub mod sample;
pub mod sset;
pub mod susp;
pub fn cli_placeholder() {}
