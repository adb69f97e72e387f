pub mod error;
pub mod kernel;
pub mod rational;
pub mod word;
pub mod measure;
pub mod capacity;
pub mod lp;
pub mod enumeration;
pub mod io;
pub mod random;
pub mod verify;
