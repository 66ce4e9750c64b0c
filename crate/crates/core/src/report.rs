//! Sectioned text reports.
//!
//! A report is a header followed by `[section]` blocks of `key = value`
//! lines, one value per line, values in the exact `cyc(L)[…]` form. With
//! `approx` on, each value line gets a trailing `~ re im` float column.
//! Sections longer than [`SECTION_LIMIT`] lines are replaced by their line
//! count and the SHA-256 of the lines they would have contained.

use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::exactnum::CycNum;
use crate::model::Model;
use crate::modular2d::{borromean_from_t3, t3_table, verlinde_fusion, ModularData2D};
use crate::modular3p1d::Data3p1D;
use crate::mono::{Acc, Mono};
use crate::surgery_verify::SurgeryReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SECTION_LIMIT: usize = 1 << 16;

/// Full L^Tri tables are written up to this many strings.
pub const LTRI_FULL_MAX: usize = 64;

/// Grid size per index for sampled L^Tri tables.
pub const LTRI_GRID: usize = 16;

#[derive(Clone, Debug)]
pub struct Report {
    approx: bool,
    out: String,
    // exact text of already-seen monomials
    cache: HashMap<Mono, String>,
}

impl Report {
    pub fn new(kind: &str, model: &Model, approx: bool) -> Self {
        let mut r = Report { approx, out: String::new(), cache: HashMap::new() };
        r.section("header");
        r.text("artifact", &format!("dwsurgery {VERSION}"));
        r.text("kind", kind);
        r.text("model", model.name());
        r.text("spec_hash", &model.spec.hash());
        r
    }

    pub fn section(&mut self, name: &str) {
        if !self.out.is_empty() {
            self.out.push('\n');
        }
        let _ = writeln!(self.out, "[{name}]");
    }

    pub fn text(&mut self, key: &str, value: &str) {
        let _ = writeln!(self.out, "{key} = {value}");
    }

    pub fn cyc(&mut self, key: &str, v: &CycNum) {
        let line = value_line(key, &v.to_string(), v, self.approx);
        self.out.push_str(&line);
    }

    pub fn mono(&mut self, key: &str, v: &Mono) {
        let s = self.exact(v);
        let line = if self.approx { value_line(key, &s, &v.to_cyc(), true) } else { format!("{key} = {s}\n") };
        self.out.push_str(&line);
    }

    fn exact(&mut self, v: &Mono) -> String {
        self.cache.entry(*v).or_insert_with(|| v.to_cyc().to_string()).clone()
    }

    /// A section of `key = value` lines, digested when it is too long.
    pub fn table<I>(&mut self, name: &str, len: usize, entries: I)
    where
        I: IntoIterator<Item = (String, Mono)>,
    {
        self.section(name);
        if len <= SECTION_LIMIT {
            for (k, v) in entries {
                self.mono(&k, &v);
            }
            return;
        }
        let mut h = Sha256::new();
        let mut count = 0usize;
        for (k, v) in entries {
            let s = self.exact(&v);
            h.update(format!("{k} = {s}\n").as_bytes());
            count += 1;
        }
        self.text("lines", &count.to_string());
        self.text("sha256", &hex(&h.finalize()));
    }

    pub fn render(&self) -> String {
        self.out.clone()
    }
}

fn value_line(key: &str, exact: &str, v: &CycNum, approx: bool) -> String {
    if approx {
        let (re, im) = v.approx();
        format!("{key} = {exact} ~ {} {}\n", float(re), float(im))
    } else {
        format!("{key} = {exact}\n")
    }
}

// fixed precision, and no "-0"
fn float(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn acc_mono(a: &Acc) -> Result<Mono> {
    a.to_mono()
}

/// Labels, S, T, N and the Borromean (T³) table of a 2+1D model.
pub fn data2d_report(model: &Model, approx: bool) -> Result<String> {
    let md = ModularData2D::new(model)?;
    let n = md.len();
    let mut r = Report::new("data2d", model, approx);
    r.section("labels");
    for (i, l) in md.labels.iter().enumerate() {
        r.text(&i.to_string(), &l.name(&md.group));
    }
    r.table("S", n * n, (0..n * n).map(|p| (format!("{},{}", p / n, p % n), md.s[p / n][p % n])));
    r.table("T", n, md.t.iter().enumerate().map(|(i, v)| (i.to_string(), *v)));
    let fusion = verlinde_fusion(&md.s)?;
    r.section("N");
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if fusion[a][b][c] != 0 {
                    r.text(&format!("{a},{b},{c}"), &fusion[a][b][c].to_string());
                }
            }
        }
    }
    r.section("traces");
    r.cyc("S", &md.trace_s().to_cyc());
    r.cyc("T", &md.trace_t().to_cyc());
    let t3 = t3_table(&md, model)?;
    let br = borromean_from_t3(&md, &t3)?;
    let br = br.iter().map(acc_mono).collect::<Result<Vec<_>>>()?;
    let key = |p: usize| format!("{},{},{}", p / (n * n), p / n % n, p % n);
    r.table("borromean", br.len(), br.iter().enumerate().map(|(p, v)| (key(p), *v)));
    Ok(r.render())
}

/// Fusion, braiding and linking data of a 3+1D model.
pub fn data3d_report(model: &Model, approx: bool) -> Result<String> {
    let d = Data3p1D::new(model)?;
    let n = d.len();
    let g = &d.group;
    let mut r = Report::new("data3d", model, approx);
    r.section("particles");
    for (i, &p) in d.particles.iter().enumerate() {
        r.text(&i.to_string(), &g.fmt_elem(p));
    }
    r.section("strings");
    for (i, s) in d.strings.iter().enumerate() {
        r.text(&i.to_string(), &s.name(g));
    }
    for (name, f) in [("F_S1", &d.f_s1), ("F_S2", &d.f_s2), ("F_T2", &d.f_t2)] {
        let k = f.n;
        let entries = (0..k * k).flat_map(move |p| {
            f.get(p / k, p % k).iter().map(move |&(c, v)| (format!("{},{},{}", p / k, p % k, c), v))
        });
        r.table(name, f.nnz(), entries);
    }
    let sparse = |m: &crate::modular3p1d::SparseMat| {
        let mut e: Vec<(usize, usize, Mono)> =
            m.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |&(i, v)| (i as usize, j, v))).collect();
        e.sort_by_key(|x| (x.0, x.1));
        e
    };
    let s = sparse(&d.s_xyz);
    r.table("S_xyz", s.len(), s.iter().map(|&(i, j, v)| (format!("{i},{j}"), v)));
    let t = &d.t_xy;
    r.table("T_xy", t.len(), t.iter().enumerate().map(|(i, v)| (i.to_string(), *v)));
    r.section("T_xy_labels");
    for (i, &(b, a)) in d.t_xy_labels.iter().enumerate() {
        r.text(&i.to_string(), &format!("{},{}", b, a));
    }
    r.section("traces");
    r.cyc("S_xyz", &d.trace_s_xyz().to_cyc());
    r.cyc("T_xy", &d.trace_t_xy().to_cyc());
    r.section("Z");
    r.mono("S4", &d.z_s4);
    r.table("ell", n, d.ltri_base.iter().enumerate().map(|(i, v)| (i.to_string(), *v)));
    let l00 = d.ltri_00()?;
    r.table("L_tri_00", n, l00.iter().enumerate().map(|(i, v)| (i.to_string(), *v)));
    let link = &d.link_s2s1;
    let np = d.particles.len();
    r.table(
        "L_link",
        link.len() * np,
        (0..link.len() * np).map(|p| (format!("{},{}", p / np, p % np), link[p / np][p % np])),
    );
    if n <= LTRI_FULL_MAX {
        let tab = d.ltri_table()?;
        let key = |p: usize| format!("{},{},{}", p / (n * n), p / n % n, p % n);
        r.table("L_tri", tab.len(), tab.iter().enumerate().map(|(p, v)| (key(p), *v)));
    } else {
        // full μ₃ columns on an evenly spaced grid of (μ₁, μ₂)
        let grid: Vec<usize> = (0..LTRI_GRID).map(|k| k * n / LTRI_GRID).collect();
        let mut entries = Vec::with_capacity(grid.len() * grid.len() * n);
        for &mu1 in &grid {
            for (mu2, col) in grid.iter().zip(d.ltri_block(mu1, &grid)?) {
                for (mu3, v) in col.into_iter().enumerate() {
                    entries.push((format!("{mu3},{mu2},{mu1}"), v));
                }
            }
        }
        r.section("L_tri_grid");
        let g: Vec<String> = grid.iter().map(|x| x.to_string()).collect();
        r.text("mu", &g.join(","));
        r.table("L_tri_sample", entries.len(), entries);
    }
    Ok(r.render())
}

/// A verification run as text; the spec hash comes from the report itself.
pub fn verify_report(rep: &SurgeryReport, model: &Model) -> String {
    let mut r = Report::new("verify", model, false);
    r.section("summary");
    r.text("passed", &rep.passed().to_string());
    r.text("checks", &rep.checks.len().to_string());
    for c in &rep.checks {
        r.section(&format!("check {}", c.name));
        r.text("status", if c.passed { "pass" } else { "fail" });
        r.text("cases", &c.cases.to_string());
        r.cyc("residual", &c.residual);
        let w: Vec<String> = c.witness.iter().map(|x| x.to_string()).collect();
        r.text("witness", &w.join(","));
        if let Some(note) = &c.note {
            r.text("note", note);
        }
    }
    r.render()
}
