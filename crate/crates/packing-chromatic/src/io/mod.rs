//! File formats: DIMACS graphs in and out, LP exports of the layered
//! stable-set model, stable-set and coloring listings, and bounds tables.

pub mod dimacs;
pub mod lp;
pub mod sets;
pub mod table;
