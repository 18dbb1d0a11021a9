//! Rule files, JSON and PPM output, verification reports and the
//! command-line front end for [`ca_signals_core`].

pub mod cmd;
pub mod formats;
pub mod parse;
pub mod render;
pub mod rules;
pub mod verify;
