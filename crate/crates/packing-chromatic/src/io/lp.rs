//! CPLEX LP export of the layered stable-set model.
//!
//! The integer program maximizes the number of chosen copies `x_{v}_{k}`
//! subject to one row per column (each base vertex used by at most one
//! layer) and one row per clique of the supplied per-layer clique covers.
//! Covering every edge of each distance power keeps the model equivalent to
//! the stable-set problem on the layered graph while using far fewer rows
//! than one per edge.

use std::fs;
use std::path::Path;

use crate::graph::{power_graph, DistanceMatrix, Graph};
use crate::mss::CliqueCover;
use crate::{Error, Result};

const WRAP_COLUMN: usize = 72;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn as_str(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpConstraint {
    pub name: String,
    pub terms: Vec<(i64, String)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// A maximization model over binary variables, integer data only.
#[derive(Clone, Debug)]
pub struct LpModel {
    pub name: String,
    pub objective: Vec<(i64, String)>,
    pub constraints: Vec<LpConstraint>,
    pub binaries: Vec<String>,
}

fn term_tokens(terms: &[(i64, String)]) -> Vec<String> {
    terms
        .iter()
        .enumerate()
        .map(|(i, (coef, var))| {
            let mag = coef.abs();
            let body = if mag == 1 { var.clone() } else { format!("{mag} {var}") };
            match (i, *coef < 0) {
                (0, false) => body,
                (0, true) => format!("- {body}"),
                (_, false) => format!("+ {body}"),
                (_, true) => format!("- {body}"),
            }
        })
        .collect()
}

fn append_wrapped(out: &mut String, prefix: &str, tokens: &[String]) {
    let mut line = prefix.to_string();
    for tok in tokens {
        if !line.trim().is_empty() && line.len() + 1 + tok.len() > WRAP_COLUMN {
            out.push_str(&line);
            out.push('\n');
            line = String::from(" ");
        }
        line.push(' ');
        line.push_str(tok);
    }
    out.push_str(&line);
    out.push('\n');
}

impl LpModel {
    pub fn to_lp_string(&self) -> String {
        let mut out = format!("\\ {}\n", self.name);
        out.push_str("Maximize\n");
        append_wrapped(&mut out, " obj:", &term_tokens(&self.objective));
        out.push_str("Subject To\n");
        for c in &self.constraints {
            let mut tokens = term_tokens(&c.terms);
            tokens.push(c.sense.as_str().to_string());
            tokens.push(c.rhs.to_string());
            append_wrapped(&mut out, &format!(" {}:", c.name), &tokens);
        }
        out.push_str("Binaries\n");
        let names: Vec<String> = self.binaries.clone();
        append_wrapped(&mut out, "", &names);
        out.push_str("End\n");
        out
    }
}

pub fn write_lp_file(path: impl AsRef<Path>, model: &LpModel) -> Result<()> {
    fs::write(path, model.to_lp_string())?;
    Ok(())
}

/// Builds the layered stable-set model over the layer set `f`, one clique
/// cover per layer. Variables are `x_{v}_{k}` with 1-based vertices, listed
/// layer by layer in the same order the layered graph numbers its copies.
pub fn export_ilp(
    g: &Graph,
    dm: &DistanceMatrix,
    f: &[usize],
    covers: &[CliqueCover],
    name: &str,
) -> Result<LpModel> {
    let n = g.n();
    let mut layers = f.to_vec();
    layers.sort_unstable();
    layers.dedup();
    if layers.is_empty() {
        return Err(Error::EmptyLayerSet);
    }
    for &k in &layers {
        if k == 0 || k > n {
            return Err(Error::LayerOutOfRange { layer: k, max: n });
        }
    }
    if covers.len() != layers.len() {
        return Err(Error::InvalidCover {
            layer: 0,
            reason: format!("need one cover per layer ({}), got {}", layers.len(), covers.len()),
        });
    }
    let mut ordered: Vec<&CliqueCover> = covers.iter().collect();
    ordered.sort_by_key(|c| c.k());
    for (&k, cover) in layers.iter().zip(&ordered) {
        if cover.k() != k {
            return Err(Error::InvalidCover {
                layer: k,
                reason: format!("cover was built for layer {}", cover.k()),
            });
        }
        if cover.n() != n {
            return Err(Error::InvalidCover {
                layer: k,
                reason: format!("cover spans {} vertices, graph has {n}", cover.n()),
            });
        }
        let gk = power_graph(g, dm, k);
        if !cover.validate(&gk) {
            return Err(Error::InvalidCover {
                layer: k,
                reason: "not a clique edge cover of the distance power".to_string(),
            });
        }
    }

    let var = |v: usize, k: usize| format!("x_{}_{}", v + 1, k);
    let mut objective = Vec::with_capacity(layers.len() * n);
    for &k in &layers {
        for v in 0..n {
            objective.push((1, var(v, k)));
        }
    }
    let mut constraints = Vec::new();
    for v in 0..n {
        constraints.push(LpConstraint {
            name: format!("col_{}", v + 1),
            terms: layers.iter().map(|&k| (1, var(v, k))).collect(),
            sense: Sense::Le,
            rhs: 1,
        });
    }
    for (&k, cover) in layers.iter().zip(&ordered) {
        for (i, clique) in cover.cliques().iter().enumerate() {
            constraints.push(LpConstraint {
                name: format!("clq_{k}_{}", i + 1),
                terms: clique.iter().map(|v| (1, var(v, k))).collect(),
                sense: Sense::Le,
                rhs: 1,
            });
        }
    }
    let binaries = objective.iter().map(|(_, v)| v.clone()).collect();
    Ok(LpModel { name: name.to_string(), objective, constraints, binaries })
}
