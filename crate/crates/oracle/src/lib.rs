//! Slow, independent reference implementations for the test suites.

pub mod corrupt;
pub mod denote;
pub mod gen;
pub mod search;
