//! Graphs with boundary, the graphical category of graphical maps, modular operads over sets,
//! and the nerve and Segal machinery relating them, all on finite instances.

pub mod involutive;
pub mod graph;
pub mod iso;
pub mod etale;
pub mod substitution;
pub mod graphical;
pub mod modops;
pub mod nerve;
pub mod format;
pub mod gen;
pub mod cli;
