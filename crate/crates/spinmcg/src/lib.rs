//! Mod-2 Hopf algebra calculus for homology of free infinite loop spaces
//! `Q(X_+)`, the loop-space models built from it, and the assembly of the
//! stable homology of the spin mapping class group.

pub mod dyer_lashof;
pub mod gf2la;
pub mod loopspace;
pub mod maps;
pub mod qhopf;
pub mod space;
pub mod verify;
