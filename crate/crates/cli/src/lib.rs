pub mod bench;
pub mod format;
pub mod generate;
pub mod plot;
pub mod run;
