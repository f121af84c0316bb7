//! Parameter scans: the HHM winding-feasibility grid over `(k, v, c, Q)` and
//! the HSM `(q, ρ)` matching grid.
//!
//! ```json
//! { "model": "hhm", "k": { "min": -3, "max": 3, "n": 10 }, "q": { "min": 0, "max": 0, "n": 1 } }
//! { "model": "hsm", "q": { "min": -6, "max": 1, "n": 200 }, "rho": { "min": -1.5, "max": 1.5, "n": 200 } }
//! ```
//!
//! Axes left out fall back to the defaults. Rows are computed in parallel in
//! fixed-size chunks and written in grid order.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde_json::Value;

use hyperwind_core::reduction::{
    scan_tuple_hhm, scan_tuple_hsm, Axis, ExistenceVerdict, HhmScanRow, HhmScanSpec, HsmScanRow, JkCondition,
    ScanSummary,
};

use crate::config::Fields;
use crate::table::num;
use crate::CliError;

/// Largest grid `scan` will run.
pub const MAX_TUPLES: u128 = 100_000_000;

const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsmScanSpec {
    pub q: Axis,
    pub rho: Axis,
}

impl Default for HsmScanSpec {
    fn default() -> Self {
        Self { q: Axis::new(-6.0, 1.0, 200), rho: Axis::new(-1.5, 1.5, 200) }
    }
}

impl HsmScanSpec {
    pub fn len(&self) -> usize {
        self.q.n * self.rho.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tuple(&self, index: usize) -> [f64; 2] {
        [self.q.value(index / self.rho.n), self.rho.value(index % self.rho.n)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanSpec {
    Hhm(HhmScanSpec),
    Hsm(HsmScanSpec),
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec::Hhm(HhmScanSpec::default())
    }
}

fn axis(f: &mut Fields<'_>, key: &str, default: Axis) -> Result<(Axis, u128), CliError> {
    if !f.has(key) {
        f.raw(key);
        return Ok((default, default.n as u128));
    }
    let mut a = f.object(key)?;
    let min = a.f64_or("min", default.min)?;
    let max = a.f64_or("max", default.max)?;
    let ptr = a.pointer("n");
    let n = match a.raw("n") {
        None => default.n as u128,
        Some(v) => v.as_u64().ok_or_else(|| CliError::invalid(ptr, "expected a non-negative integer"))? as u128,
    };
    a.finish()?;
    let n_usize = usize::try_from(n).unwrap_or(usize::MAX);
    Ok((Axis::new(min, max, n_usize), n))
}

fn guard(total: u128) -> Result<(), CliError> {
    if total > MAX_TUPLES {
        return Err(CliError::Usage(format!("scan of {total} tuples refused (limit {MAX_TUPLES})")));
    }
    if total == 0 {
        return Err(CliError::Usage("scan grid is empty".into()));
    }
    Ok(())
}

/// Parses a scan spec; the tuple count is checked before anything is
/// allocated.
pub fn parse_scan(value: &Value) -> Result<ScanSpec, CliError> {
    let mut f = Fields::root(value)?;
    let model = f.str_or("model", "hhm")?;
    let spec = match model {
        "hhm" => {
            let d = HhmScanSpec::default();
            let (k, nk) = axis(&mut f, "k", d.k)?;
            let (v, nv) = axis(&mut f, "v", d.v)?;
            let (c, nc) = axis(&mut f, "c", d.c)?;
            let (q, nq) = axis(&mut f, "q", d.q)?;
            guard(nk.saturating_mul(nv).saturating_mul(nc).saturating_mul(nq))?;
            ScanSpec::Hhm(HhmScanSpec { k, v, c, q })
        }
        "hsm" => {
            let d = HsmScanSpec::default();
            let (q, nq) = axis(&mut f, "q", d.q)?;
            let (rho, nr) = axis(&mut f, "rho", d.rho)?;
            guard(nq.saturating_mul(nr))?;
            ScanSpec::Hsm(HsmScanSpec { q, rho })
        }
        other => return Err(CliError::invalid("/model", format!("expected \"hhm\" or \"hsm\" (got {other:?})"))),
    };
    f.finish()?;
    Ok(spec)
}

pub const HHM_HEADER: &str = "k,v,c,q,roots,verdict,case,circle,feasible_on_R";
pub const HSM_HEADER: &str = "q,rho,admissible,failed_condition,j,k,roots,inequalities_hold,agree";

fn hhm_line(out: &mut String, r: &HhmScanRow) {
    let case = match &r.verdict {
        ExistenceVerdict::NoWindingOnR { case, .. } => case.letter().to_string(),
        _ => String::new(),
    };
    let circle = r.circle.as_ref().map(|c| c.label()).unwrap_or_default();
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        num(r.k),
        num(r.v),
        num(r.c),
        num(r.q),
        r.roots.name(),
        r.verdict.label(),
        case,
        circle,
        u8::from(r.feasible_on_r())
    );
}

/// Whether the three printed inequalities all hold.
pub fn inequalities_hold(q: f64, rho: f64) -> bool {
    [JkCondition::SumPositive, JkCondition::ProductPositive, JkCondition::RealSquares]
        .into_iter()
        .all(|c| c.holds(q, rho))
}

fn hsm_line(out: &mut String, r: &HsmScanRow) {
    let expected = inequalities_hold(r.q, r.rho);
    let (admissible, failed, j, k) = match &r.matched {
        Ok(p) => (true, String::new(), num(p.j()), num(p.k())),
        Err(e) => (false, e.failed.inequality().to_string(), String::new(), String::new()),
    };
    let _ = writeln!(
        out,
        "{},{},{},\"{}\",{},{},{},{},{}",
        num(r.q),
        num(r.rho),
        u8::from(admissible),
        failed,
        j,
        k,
        r.roots.name(),
        u8::from(expected),
        u8::from(admissible == expected)
    );
}

/// Counts for the HSM grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HsmSummary {
    pub tuples: usize,
    pub admissible: usize,
    pub mismatches: usize,
    pub line_profiles: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summary {
    Hhm(ScanSummary),
    Hsm(HsmSummary),
}

impl Summary {
    pub fn render(&self) -> String {
        let mut s = String::new();
        match self {
            Summary::Hhm(h) => {
                let _ = writeln!(s, "tuples: {}", h.tuples);
                for (i, letter) in ['a', 'b', 'c', 'd', 'e', 'f'].iter().enumerate() {
                    let _ = writeln!(s, "NoWindingOnR({letter}): {}", h.no_winding_by_case[i]);
                }
                let _ = writeln!(s, "Inadmissible: {}", h.inadmissible);
                let _ = writeln!(s, "WindingOnCircle: {}", h.winding_on_circle);
                let _ = writeln!(s, "feasible_on_R: {}", h.feasible_on_r);
            }
            Summary::Hsm(h) => {
                let _ = writeln!(s, "tuples: {}", h.tuples);
                let _ = writeln!(s, "admissible: {}", h.admissible);
                let _ = writeln!(s, "inadmissible: {}", h.tuples - h.admissible);
                let _ = writeln!(s, "two_double_roots: {}", h.line_profiles);
                let _ = writeln!(s, "mismatches: {}", h.mismatches);
            }
        }
        s
    }
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::io(path, e)
}

/// Runs the scan, streaming the report to `report` and returning the counts.
pub fn run_scan(spec: &ScanSpec, report: &Path) -> Result<Summary, CliError> {
    let file = File::create(report).map_err(io(report))?;
    let mut w = BufWriter::new(file);
    let summary = match spec {
        ScanSpec::Hhm(s) => {
            writeln!(w, "{HHM_HEADER}").map_err(io(report))?;
            let mut summary = ScanSummary::default();
            for start in (0..s.len()).step_by(CHUNK) {
                let end = (start + CHUNK).min(s.len());
                let rows: Vec<HhmScanRow> = (start..end)
                    .into_par_iter()
                    .map(|i| {
                        let [k, v, c, q] = s.tuple(i);
                        scan_tuple_hhm(k, v, c, q)
                    })
                    .collect();
                let mut text = String::with_capacity(rows.len() * 160);
                for r in &rows {
                    summary.add(r);
                    hhm_line(&mut text, r);
                }
                w.write_all(text.as_bytes()).map_err(io(report))?;
            }
            Summary::Hhm(summary)
        }
        ScanSpec::Hsm(s) => {
            writeln!(w, "{HSM_HEADER}").map_err(io(report))?;
            let mut summary = HsmSummary::default();
            for start in (0..s.len()).step_by(CHUNK) {
                let end = (start + CHUNK).min(s.len());
                let rows: Vec<HsmScanRow> = (start..end)
                    .into_par_iter()
                    .map(|i| {
                        let [q, rho] = s.tuple(i);
                        scan_tuple_hsm(q, rho)
                    })
                    .collect();
                let mut text = String::with_capacity(rows.len() * 160);
                for r in &rows {
                    summary.tuples += 1;
                    let admissible = r.matched.is_ok();
                    summary.admissible += usize::from(admissible);
                    summary.mismatches += usize::from(admissible != inequalities_hold(r.q, r.rho));
                    summary.line_profiles += usize::from(r.line_profile());
                    hsm_line(&mut text, r);
                }
                w.write_all(text.as_bytes()).map_err(io(report))?;
            }
            Summary::Hsm(summary)
        }
    };
    w.flush().map_err(io(report))?;
    Ok(summary)
}
