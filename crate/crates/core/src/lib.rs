pub mod algebra;
pub mod discovery;
pub mod enumerate;
pub mod error;
pub mod recurrence;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
