pub mod automata;
pub mod chc;
pub mod engine;
pub mod lstar;
pub mod oracle;
pub mod rule;
pub mod sat;
pub mod sexp;
pub mod smtlib;
