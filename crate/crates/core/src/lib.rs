pub mod error;
pub mod mub;
pub mod oscillator;
pub mod qcore;
pub mod su2;
pub mod verify;
