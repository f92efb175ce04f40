pub mod arith;
pub mod block;
pub mod decomp;
pub mod equiv;
pub mod error;
pub mod partition;
pub mod pipeline;
pub mod scopes;
pub mod symchar;
pub mod wreath;

pub use error::{Error, Result};
pub use partition::{MultiPartition, Partition};
