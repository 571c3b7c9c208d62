//! Library surface of the batch front end: problem files, the report
//! model, the task runner and the report schema validator.

pub mod problem;
pub mod report;
pub mod runner;
pub mod schema;
