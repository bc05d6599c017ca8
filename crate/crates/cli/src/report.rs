//! Machine-readable output documents and the plain-text table renderer.
//!
//! Every JSON document the tool emits is defined here as a struct with a
//! fixed field order, so identical inputs produce byte-identical reports.

use std::collections::BTreeMap;

use serde::Serialize;

use algred::ReductionReport;

use crate::input::{ModeSpec, PresentationFile};

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

pub fn tool_info() -> ToolInfo {
    ToolInfo {
        name: "algred",
        version: env!("CARGO_PKG_VERSION"),
    }
}

/// Dimension table document: one row per field of definition.
#[derive(Debug, Clone, Serialize)]
pub struct DimsFile {
    pub tool: ToolInfo,
    pub input_hash: String,
    pub mode: ModeSpec,
    pub max_degree: usize,
    pub dims: Vec<DimsRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimsRow {
    pub field: String,
    pub values: Vec<usize>,
}

/// Reduction report document covering one input and a list of primes.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub tool: ToolInfo,
    pub input_hash: String,
    pub mode: ModeSpec,
    pub primes: Vec<u64>,
    pub max_degree: usize,
    /// For filtered inputs: whether the leading parts present the
    /// associated graded algebra up to the degree bound.  Null for graded
    /// inputs.
    pub gr_check: Option<GrCheckOut>,
    pub reports: Vec<PrimeReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrCheckOut {
    pub holds: bool,
    pub first_failing_degree: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeReport {
    pub prime: u64,
    pub residue_field: String,
    pub dims_rational: Vec<usize>,
    pub dims_residue: Vec<usize>,
    pub defect: Vec<usize>,
    pub reduces_well: bool,
    pub domain_up_to_degree: bool,
    pub zero_divisor: Option<WitnessOut>,
    pub first_bad_degree: Option<usize>,
    /// Set when dimensions are preserved but the domain property is lost.
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessOut {
    pub left: String,
    pub right: String,
    pub bidegree: (usize, usize),
}

impl PrimeReport {
    pub fn from_report(r: &ReductionReport, names: &[String]) -> Self {
        let zero_divisor = r.zero_divisor.as_ref().map(|w| WitnessOut {
            left: w.left.display_with_names(names),
            right: w.right.display_with_names(names),
            bidegree: w.bidegree,
        });
        let warning = if r.reduces_well && !r.domain_up_to_degree {
            let w = zero_divisor
                .as_ref()
                .expect("a failed domain check carries a witness");
            Some(format!(
                "dimensions are preserved but the reduction has zero divisors: \
                 ({}) * ({}) = 0 at bidegree ({}, {})",
                w.left, w.right, w.bidegree.0, w.bidegree.1
            ))
        } else {
            None
        };
        PrimeReport {
            prime: r.prime,
            residue_field: format!("F_{}", r.prime),
            dims_rational: r.dims_rational.dims.clone(),
            dims_residue: r.dims_residue.dims.clone(),
            defect: r.defect.clone(),
            reduces_well: r.reduces_well,
            domain_up_to_degree: r.domain_up_to_degree,
            zero_divisor,
            first_bad_degree: r.first_bad_degree,
            warning,
        }
    }
}

/// Rees document: the homogenized presentation, both specializations, and
/// the per-degree dimension comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ReesFile {
    pub tool: ToolInfo,
    pub input_hash: String,
    pub rees: PresentationFile,
    pub at_t_one: PresentationFile,
    pub at_t_zero: PresentationFile,
    pub recovers_input: bool,
    pub matches_leading_parts: bool,
    pub consistency: Vec<ConsistencyRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyRow {
    pub degree: usize,
    pub rees: usize,
    pub input: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogFile {
    pub tool: ToolInfo,
    pub models: Vec<CatalogRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogRow {
    pub name: String,
    pub params: Vec<ParamRow>,
    pub description: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamRow {
    pub name: String,
    /// Default value as a rational string; null when the parameter is
    /// required.
    pub default: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultFile {
    pub tool: ToolInfo,
    pub model: String,
    pub result: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GwaReduceFile {
    pub tool: ToolInfo,
    pub model: String,
    pub params: BTreeMap<String, String>,
    pub reports: Vec<GwaPrimeOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GwaPrimeOut {
    pub prime: u64,
    pub good: bool,
    pub obstructions: Vec<ObstructionOut>,
    pub a_reduces_to_zero: bool,
    pub reduced: Option<ReducedGwaOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionOut {
    pub location: String,
    pub value: String,
    pub valuation: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReducedGwaOut {
    pub sigma_of_h: String,
    pub a: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GwaDimsFile {
    pub tool: ToolInfo,
    pub model: Option<String>,
    pub max_degree: usize,
    pub degree_of_h: usize,
    pub values: Vec<usize>,
}

/// Fixed-width text table.  `render` right-aligns every column after the
/// first, which suits numeric tables; `render_left` left-aligns everything.
#[derive(Debug, Default)]
pub struct TextTable {
    rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self, indent: &str) -> String {
        self.render_aligned(indent, false)
    }

    pub fn render_left(&self, indent: &str) -> String {
        self.render_aligned(indent, true)
    }

    fn render_aligned(&self, indent: &str, left: bool) -> String {
        let cols = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut widths = vec![0usize; cols];
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        for row in &self.rows {
            let mut line = String::from(indent);
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                if i == 0 || left {
                    line.push_str(&format!("{cell:<width$}", width = widths[i]));
                } else {
                    line.push_str(&format!("{cell:>width$}", width = widths[i]));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}
