//! Building blocks of the `normlap` command-line tool.

pub mod document;
pub mod verify;
