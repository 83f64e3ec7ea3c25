//! Row types and writers for the tidy long-format tables.
//!
//! All numeric output uses shortest round-trip formatting (Rust's default
//! float `Display`); failed per-k estimates are empty fields plus a status
//! code, never sentinel numbers; infinite endpoints serialise as `inf`.

use serde::Serialize;
use std::io::{self, Write};
use trunctail::Endpoint;

#[derive(Debug, Serialize)]
pub struct FitRow {
    pub k: usize,
    pub hill: f64,
    pub hill_inv: Option<f64>,
    pub alpha_trunc: Option<f64>,
    pub d_raw: Option<f64>,
    pub d_admissible: Option<f64>,
    pub tau_hat: Option<f64>,
    pub q_trunc: Option<f64>,
    pub q_weissman: Option<f64>,
    pub q_mom: Option<f64>,
    pub xi_mom: Option<f64>,
    pub endpoint_trunc: Option<Endpoint>,
    pub endpoint_mom: Option<Endpoint>,
    pub status: String,
}

#[derive(Debug, Serialize)]
pub struct TestRow {
    pub k: usize,
    pub ta_stat: Option<f64>,
    pub ta_p: Option<f64>,
    pub tb_stat: Option<f64>,
    pub tb_p: Option<f64>,
    pub ta_reject: Option<bool>,
    pub tb_reject: Option<bool>,
    pub status: String,
}

#[derive(Debug, Serialize)]
pub struct QuantileRow {
    pub k: usize,
    pub p: f64,
    pub q_trunc: Option<f64>,
    pub q_light: Option<f64>,
    pub q_weissman: Option<f64>,
    pub q_mom: Option<f64>,
    pub status: String,
}

#[derive(Debug, Serialize)]
pub struct EndpointRow {
    pub k: usize,
    pub endpoint_trunc: Option<Endpoint>,
    pub endpoint_mom: Option<Endpoint>,
    pub status: String,
}

pub fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

pub fn opt_endpoint(v: &Option<Endpoint>) -> String {
    v.as_ref().map_or(String::new(), |e| e.to_string())
}

pub fn opt_bool(v: Option<bool>) -> String {
    v.map_or(String::new(), |b| b.to_string())
}

pub fn write_fit_csv<W: Write>(w: &mut W, rows: &[FitRow]) -> io::Result<()> {
    writeln!(
        w,
        "k,hill,hill_inv,alpha_trunc,d_raw,d_admissible,tau_hat,q_trunc,q_weissman,q_mom,xi_mom,endpoint_trunc,endpoint_mom,status"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            r.hill,
            opt(r.hill_inv),
            opt(r.alpha_trunc),
            opt(r.d_raw),
            opt(r.d_admissible),
            opt(r.tau_hat),
            opt(r.q_trunc),
            opt(r.q_weissman),
            opt(r.q_mom),
            opt(r.xi_mom),
            opt_endpoint(&r.endpoint_trunc),
            opt_endpoint(&r.endpoint_mom),
            r.status,
        )?;
    }
    Ok(())
}

pub fn write_test_csv<W: Write>(w: &mut W, rows: &[TestRow]) -> io::Result<()> {
    writeln!(w, "k,ta_stat,ta_p,tb_stat,tb_p,ta_reject,tb_reject,status")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.k,
            opt(r.ta_stat),
            opt(r.ta_p),
            opt(r.tb_stat),
            opt(r.tb_p),
            opt_bool(r.ta_reject),
            opt_bool(r.tb_reject),
            r.status,
        )?;
    }
    Ok(())
}

pub fn write_quantile_csv<W: Write>(w: &mut W, rows: &[QuantileRow]) -> io::Result<()> {
    writeln!(w, "k,p,q_trunc,q_light,q_weissman,q_mom,status")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.k,
            r.p,
            opt(r.q_trunc),
            opt(r.q_light),
            opt(r.q_weissman),
            opt(r.q_mom),
            r.status,
        )?;
    }
    Ok(())
}

pub fn write_endpoint_csv<W: Write>(w: &mut W, rows: &[EndpointRow]) -> io::Result<()> {
    writeln!(w, "k,endpoint_trunc,endpoint_mom,status")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            r.k,
            opt_endpoint(&r.endpoint_trunc),
            opt_endpoint(&r.endpoint_mom),
            r.status,
        )?;
    }
    Ok(())
}
