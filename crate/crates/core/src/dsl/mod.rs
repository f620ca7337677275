//! The `prcalc` expression and script language.

pub mod lexer;
pub mod parser;
pub mod lower;
pub mod script;

pub use parser::{parse_expr, parse_script, Ast, Command, Stmt};
pub use script::{load_scheme, parse_scheme, run_script, ScriptOptions, ScriptOutput};
