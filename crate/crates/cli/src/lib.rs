pub mod acceptance;
pub mod config;
pub mod report;
pub mod run;
