pub mod cover;
pub mod dynamics;
pub mod error;
pub mod flower;
pub mod generators;
pub mod property_p;
pub mod syncsys;
pub mod system;
pub mod words;

pub use error::{Error, Result};
