pub mod arith;
mod jsonnum;
pub mod curves;
pub mod oracle;
pub mod pipeline;
pub mod search;
pub mod sieve;
pub mod tuples;
