//! Text formats for iCGS (`.icgs`) and vCGS (`.vcgs`) files.

mod icgs_text;
mod lex;
mod vcgs_text;

pub use icgs_text::{parse_icgs, print_icgs};
pub use vcgs_text::{parse_vcgs, print_vcgs};
