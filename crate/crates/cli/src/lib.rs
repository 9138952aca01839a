//! Library side of the `spohn` command-line tool: the problem-file
//! schema and one function per subcommand.

pub mod commands;
pub mod problem;

pub use commands::{
    cmd_bridge, cmd_rank, cmd_reduce, cmd_search, cmd_utility, cmd_validate, Exit, Options, Output,
};
pub use problem::{parse, ProblemFile};
