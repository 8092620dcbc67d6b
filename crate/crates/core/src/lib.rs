pub mod error;
pub mod io;
pub mod locality;
pub mod localize;
pub mod map;
pub mod patch;
pub mod rational;
pub mod section;
pub mod system;
pub mod tiling;
pub mod verify;
