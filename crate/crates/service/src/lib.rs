pub mod experiment;
pub mod server;
pub mod store;
