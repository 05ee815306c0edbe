//! Stratification report for supplied phase points plus the static table of
//! secondary strata.

use nalgebra::Vector5;
use serde::Serialize;
use strat_mech_core::liealg::Pair5;
use strat_mech_core::momenta::PhasePoint;
use strat_mech_core::strata::{classify_config, classify_phase, stratum_table};

use crate::config::{ClassifyConfig, PhaseSpec};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub index: usize,
    pub config_stratum: &'static str,
    pub phase_stratum: &'static str,
    pub isotropy_group: &'static str,
    pub span_dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub isotropy: &'static str,
    pub model: &'static str,
    pub dimension: Option<usize>,
    pub empty: bool,
    pub flow_invariant: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub points: Vec<PointReport>,
    pub table: Vec<TableRow>,
}

fn phase_point(point: &PhaseSpec) -> Result<PhasePoint, strat_mech_core::Error> {
    let col = |c: &[f64; 5]| Vector5::from(*c);
    let q = Pair5::from_columns(&[col(&point.q1), col(&point.q2)]);
    let p = Pair5::from_columns(&[col(&point.p1), col(&point.p2)]);
    PhasePoint::new(q, p)
}

pub fn run(cfg: &ClassifyConfig) -> CliResult<ClassifyReport> {
    let mut points = Vec::with_capacity(cfg.points.len());
    for (index, point) in cfg.points.iter().enumerate() {
        let s = phase_point(point).map_err(|e| CliError::invalid(&format!("point {index}"), e))?;
        let phase = classify_phase(&s);
        points.push(PointReport {
            index,
            config_stratum: classify_config(&s.q).label(),
            phase_stratum: phase.tag.label(),
            isotropy_group: phase.tag.group(),
            span_dimension: phase.span_dimension,
        });
    }
    let table = stratum_table()
        .iter()
        .map(|r| TableRow {
            isotropy: r.isotropy.label(),
            model: r.model,
            dimension: r.dimension,
            empty: r.empty,
            flow_invariant: r.flow_invariant,
        })
        .collect();
    Ok(ClassifyReport { points, table })
}

impl ClassifyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("points\n");
        if self.points.is_empty() {
            out.push_str("  (none)\n");
        }
        for p in &self.points {
            out.push_str(&format!(
                "  #{}: config {}, phase {} (isotropy {}, span dimension {})\n",
                p.index, p.config_stratum, p.phase_stratum, p.isotropy_group, p.span_dimension
            ));
        }
        out.push_str("secondary strata over the regular configurations\n");
        for r in &self.table {
            let dim = r.dimension.map_or("-".to_string(), |d| d.to_string());
            let inv = match r.flow_invariant {
                Some(true) => "flow-invariant",
                Some(false) => "not flow-invariant",
                None => "n/a",
            };
            let empty = if r.empty { ", empty" } else { "" };
            out.push_str(&format!(
                "  {}: dimension {dim}, {inv}{empty}; {}\n",
                r.isotropy, r.model
            ));
        }
        out
    }
}
