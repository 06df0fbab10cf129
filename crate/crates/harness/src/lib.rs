//! Instance generation, JSON I/O, and the theorem-verification suite for
//! the operator-valued frame library, plus the report types behind the
//! `ovpframe` command-line tool.

pub mod gen;
pub mod io;
pub mod report;
pub mod verify;
