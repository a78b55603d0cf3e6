pub mod cayley;
pub mod classify;
pub mod cli;
pub mod ffield;
pub mod hamming;
pub mod nt;
pub mod omap;
pub mod permgroup;
