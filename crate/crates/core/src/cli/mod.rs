//! The `adams-e2` command line: `verify`, `oracle`, `tables` and `chart`.

pub mod chart;
pub mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::bxss::reference::supplementary_sources;
use crate::bxss::window::{window_pages, WindowReport};
use crate::cess::{target_t, verify_main, CessError, MainCertificate};
use crate::extlines::audit::{audit_table, AuditOutcome};
use crate::extlines::RelationTable;
use crate::resolution::checkpoint::CheckpointWriter;
use crate::resolution::{Limits, Resolution, ResolutionError};
use chart::{classes_tsv, ChartSpec};
use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "adams-e2", version, about = "Adams E2 computations around h0*x_n")]
pub struct Cli {
    /// `key = value` file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and check the certificate for each n.
    Verify(Flags),
    /// Extend the minimal resolution and print its Ext table.
    Oracle {
        #[command(flatten)]
        flags: Flags,
        /// Stop after this many new cells, keeping the checkpoint.
        #[arg(long)]
        max_cells: Option<usize>,
    },
    /// Check the relation table against the resolution.
    Tables(Flags),
    /// Draw the windows for each n.
    Chart(Flags),
}

#[derive(Args, Debug, Default)]
pub struct Flags {
    /// Range of n, `A..B` or `A` [default 3..12]
    #[arg(long)]
    pub n: Option<String>,
    /// Oracle bound on s [default 8]
    #[arg(long)]
    pub max_s: Option<String>,
    /// Oracle bound on the internal degree t [default 48]
    #[arg(long)]
    pub max_t: Option<String>,
    /// Resolution checkpoint file
    #[arg(long)]
    pub checkpoint: Option<String>,
    /// Relation table to audit (tables only)
    #[arg(long)]
    pub tables: Option<String>,
    /// Output directory [default out]
    #[arg(long)]
    pub out: Option<String>,
    /// Comma list of json, tsv, svg [default json]
    #[arg(long)]
    pub emit: Option<String>,
}

impl Flags {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        [
            ("n", &self.n),
            ("max_s", &self.max_s),
            ("max_t", &self.max_t),
            ("checkpoint", &self.checkpoint),
            ("tables", &self.tables),
            ("out", &self.out),
            ("emit", &self.emit),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .collect()
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing the human-readable report to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e:#}");
            1
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let flags = match &cli.command {
        Command::Verify(f) | Command::Tables(f) | Command::Chart(f) => f,
        Command::Oracle { flags, .. } => flags,
    };
    let cfg = RunConfig::load(cli.config.as_deref(), &flags.overrides())?;
    match &cli.command {
        Command::Verify(_) => cmd_verify(&cfg, out),
        Command::Oracle { max_cells, .. } => cmd_oracle(&cfg, *max_cells, out),
        Command::Tables(_) => cmd_tables(&cfg, out),
        Command::Chart(_) => cmd_chart(&cfg, out),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn emit_window(cfg: &RunConfig, w: &WindowReport, stem: &str, force_svg: bool) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if cfg.emit.json {
        written.push(write_file(&cfg.out, &format!("{stem}.json"), &to_json(w))?);
    }
    if cfg.emit.tsv {
        written.push(write_file(&cfg.out, &format!("{stem}.tsv"), &classes_tsv(w))?);
    }
    if cfg.emit.svg || force_svg {
        written.push(write_file(&cfg.out, &format!("{stem}.svg"), &ChartSpec::from_window(w).to_svg())?);
    }
    Ok(written)
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let ns: Vec<u32> = cfg.n.clone().collect();
    let results: Vec<(u32, Result<MainCertificate, CessError>)> =
        ns.par_iter().map(|&n| (n, verify_main(n, cfg.max_n))).collect();
    let mut all_pass = true;
    for (n, result) in results {
        match result {
            Ok(cert) => {
                let status = if cert.passed() { "PASS" } else { "FAIL" };
                all_pass &= cert.passed();
                writeln!(
                    out,
                    "n={n:<3} {status}  {} in Ext^({}, {})",
                    cert.conclusion.statement, cert.conclusion.s, cert.conclusion.t
                )?;
                for f in &cert.failures {
                    writeln!(out, "    {f}")?;
                }
                if let Some(cmp) = &cert.window_2_3.reference {
                    for f in &cmp.flagged {
                        writeln!(
                            out,
                            "    note: reference d{} {} -> {} differs; rules give {}",
                            f.page, f.source, f.reference_target, f.engine_target
                        )?;
                    }
                }
                if cfg.emit.json {
                    write_file(&cfg.out, &format!("certificate_n{n}.json"), &to_json(&cert))?;
                }
                if cfg.emit.tsv || cfg.emit.svg {
                    let json = RunConfig { emit: config::Emit { json: false, ..cfg.emit }, ..cfg.clone() };
                    emit_window(&json, &cert.window_2_3, &format!("window_2_3_n{n}"), false)?;
                    emit_window(&json, &cert.window_0_5, &format!("window_0_5_n{n}"), false)?;
                }
            }
            Err(e) => {
                all_pass = false;
                writeln!(out, "n={n:<3} ERROR {e}")?;
            }
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

pub fn cmd_chart(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let ns: Vec<u32> = cfg.n.clone().collect();
    let windows: Vec<(u32, Result<Vec<(String, WindowReport)>, CessError>)> = ns
        .par_iter()
        .map(|&n| {
            let t = target_t(n);
            let run = || -> Result<Vec<(String, WindowReport)>, CessError> {
                let mut a = window_pages(2, 3, t, &supplementary_sources(n))?;
                a.attach_reference(n);
                let mut b = window_pages(0, 5, t, &[])?;
                b.attach_reference(n);
                Ok(vec![(format!("window_2_3_n{n}"), a), (format!("window_0_5_n{n}"), b)])
            };
            (n, run())
        })
        .collect();
    let mut code = 0;
    for (n, result) in windows {
        match result {
            Ok(list) => {
                for (stem, w) in list {
                    let files = emit_window(cfg, &w, &stem, true)?;
                    writeln!(
                        out,
                        "n={n:<3} {stem}: {} classes, {} arrows, {} survivors -> {}",
                        w.e1_classes.len(),
                        w.differentials.len(),
                        w.survivors,
                        files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", ")
                    )?;
                }
            }
            Err(e) => {
                code = 1;
                writeln!(out, "n={n:<3} ERROR {e}")?;
            }
        }
    }
    Ok(code)
}

fn checkpoint_path(cfg: &RunConfig) -> PathBuf {
    cfg.checkpoint.clone().unwrap_or_else(|| cfg.out.join("oracle.ckpt"))
}

#[derive(Serialize)]
struct OracleCheck {
    name: String,
    pass: bool,
}

#[derive(Serialize)]
struct OracleReport {
    max_s: u32,
    max_t: u32,
    ext_dims: BTreeMap<String, usize>,
    checks: Vec<OracleCheck>,
}

fn oracle_checks(res: &Resolution, max_s: u32, max_t: u32) -> Vec<OracleCheck> {
    let mut checks = Vec::new();
    let tower = (1..=max_s).all(|s| {
        res.h_monomial(&vec![0; s as usize]).is_ok_and(|c| !c.is_zero())
    });
    checks.push(OracleCheck { name: format!("h0^s != 0 for s <= {max_s}"), pass: tower });
    if max_t >= 2 {
        checks.push(OracleCheck {
            name: "h1 spans Ext^(1,2)".into(),
            pass: res.ext_dim(1, 2).ok() == Some(1) && res.h(1).is_ok_and(|c| !c.is_zero()),
        });
    }
    if max_s >= 3 && max_t >= 11 {
        let dim = res.ext_dim(3, 11).unwrap_or(0);
        let indec = crate::extlines::audit::indecomposable_dim(res, 3, 11);
        checks.push(OracleCheck { name: "c0 spans Ext^(3,11) and is indecomposable".into(), pass: dim == 1 && indec == 1 });
    }
    if max_s >= 6 && max_t >= 43 {
        let dim = res.ext_dim(5, 42).unwrap_or(0);
        let hits = (0..dim).any(|i| {
            res.basis_class(5, 42, i)
                .and_then(|x| res.multiply_by_h(0, &x))
                .is_ok_and(|y| !y.is_zero())
        });
        checks.push(OracleCheck { name: "h0: Ext^(5,42) -> Ext^(6,43) is nonzero (h0*x0 != 0)".into(), pass: hits });
    }
    checks
}

pub fn ext_table(res: &Resolution, max_s: u32, max_t: u32) -> String {
    let mut s_out = String::new();
    let stems = max_t;
    s_out.push_str("s\\stem");
    for stem in 0..=stems {
        s_out.push_str(&format!("{stem:>3}"));
    }
    s_out.push('\n');
    for s in (0..=max_s).rev() {
        s_out.push_str(&format!("{s:>6}"));
        for stem in 0..=stems {
            let t = stem + s;
            let cell = if t > max_t {
                " ".to_string()
            } else {
                match res.ext_dim(s, t).unwrap_or(0) {
                    0 => ".".to_string(),
                    d => d.to_string(),
                }
            };
            s_out.push_str(&format!("{cell:>3}"));
        }
        s_out.truncate(s_out.trim_end().len());
        s_out.push('\n');
    }
    s_out
}

pub fn cmd_oracle(cfg: &RunConfig, max_cells: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    let path = checkpoint_path(cfg);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut res = if path.exists() {
        let r = Resolution::load_checkpoint(&path).with_context(|| format!("loading {}", path.display()))?;
        // Drops any partial trailing record before appending.
        r.save_checkpoint(&path)?;
        r
    } else {
        Resolution::new()
    };
    let (max_s, max_t) = (cfg.max_s, cfg.max_t);
    let before = res.covered();
    let mut writer = CheckpointWriter::open(&path)?;
    let limits = Limits { max_cells, deadline: None };
    match res.extend_with(max_s, max_t, limits, |rec| writer.append(rec)) {
        Ok(()) => {}
        Err(ResolutionError::ResourceLimit { last_completed }) => {
            writeln!(
                out,
                "stopped at the cell limit; last completed cell {last_completed:?}; checkpoint {} kept",
                path.display()
            )?;
            return Ok(3);
        }
        Err(e) => return Err(e.into()),
    }
    drop(writer);
    if res.covered() == before && before.0 >= i64::from(max_s) && before.1 >= i64::from(max_t) {
        writeln!(out, "checkpoint {} already covers ({max_s}, {max_t})", path.display())?;
    } else {
        writeln!(out, "extended {} to ({max_s}, {max_t})", path.display())?;
    }
    let table = ext_table(&res, max_s, max_t);
    write!(out, "{table}")?;
    let checks = oracle_checks(&res, max_s, max_t);
    let mut ok = true;
    for c in &checks {
        ok &= c.pass;
        writeln!(out, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name)?;
    }
    if cfg.emit.json {
        let mut ext_dims = BTreeMap::new();
        for s in 0..=max_s {
            for t in 0..=max_t {
                let d = res.ext_dim(s, t).unwrap_or(0);
                if d > 0 {
                    ext_dims.insert(format!("{s},{t}"), d);
                }
            }
        }
        let report = OracleReport { max_s, max_t, ext_dims, checks };
        write_file(&cfg.out, "oracle.json", &to_json(&report))?;
    }
    if cfg.emit.tsv {
        let mut tsv = String::from("s\tt\tdim\n");
        for s in 0..=max_s {
            for t in 0..=max_t {
                tsv.push_str(&format!("{s}\t{t}\t{}\n", res.ext_dim(s, t).unwrap_or(0)));
            }
        }
        write_file(&cfg.out, "ext_dims.tsv", &tsv)?;
    }
    Ok(if ok { 0 } else { 1 })
}

pub fn cmd_tables(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let table = match &cfg.tables {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            match RelationTable::parse(&text) {
                Ok(t) => t,
                Err(e) => {
                    writeln!(out, "FAIL {}: {e}", p.display())?;
                    return Ok(1);
                }
            }
        }
        None => RelationTable::standard().clone(),
    };
    let path = checkpoint_path(cfg);
    let mut res = if path.exists() {
        Resolution::load_checkpoint(&path).with_context(|| format!("loading {}", path.display()))?
    } else {
        writeln!(out, "no checkpoint at {}; computing the resolution in memory", path.display())?;
        Resolution::new()
    };
    res.extend_resolution(cfg.max_s, cfg.max_t)?;
    let records = audit_table(&table, &res);
    let mut entries: Vec<(usize, String)> = table.relations.iter().map(|r| (r.line, r.label())).collect();
    entries.extend(table.nonzero.iter().map(|f| (f.line, format!("{} != 0", f.template))));
    entries.sort();
    let mut failed = false;
    for (line, label) in entries {
        let mine: Vec<_> = records.iter().filter(|r| r.table_line == line).collect();
        let fails: Vec<_> = mine
            .iter()
            .filter(|r| r.instance != "status")
            .filter_map(|r| match &r.outcome {
                AuditOutcome::Fail(why) => Some(format!("{}: {why}", r.instance)),
                AuditOutcome::Pass => None,
            })
            .collect();
        let passes = mine.iter().filter(|r| r.outcome == AuditOutcome::Pass).count();
        if !fails.is_empty() {
            failed = true;
            writeln!(out, "FAIL line {line}: {label}")?;
            for f in fails {
                writeln!(out, "    {f}")?;
            }
        } else if passes == 0 {
            writeln!(out, "flagged-unverified line {line}: {label} (no instance within ({}, {}))", cfg.max_s, cfg.max_t)?;
        } else {
            writeln!(out, "verified line {line}: {label} ({passes} instances)")?;
        }
        for r in mine.iter().filter(|r| r.instance == "status") {
            if let AuditOutcome::Fail(why) = &r.outcome {
                writeln!(out, "    warning: {why}")?;
            }
        }
    }
    if cfg.emit.json {
        write_file(&cfg.out, "table_audit.json", &to_json(&records))?;
    }
    Ok(if failed { 1 } else { 0 })
}
